//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! Random draws are seeded; set `NOONSIM_SEED` to explore other seeds.

use std::f64::consts::TAU;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use noonsim::cli::{render_with, Command, StateSource, SweepSpec, TimeGrid};
use noonsim::dephasing::{evolve_numeric_default, DephasingParams};
use noonsim::interferometry::{crossing_time, default_phi_samples, visibility_curve};
use noonsim::io::{parse_state_str, serialize_state};
use noonsim::partial_transpose::{blocks, esd_probe, pt_spectra_numeric};
use noonsim::sampling::{random_diagonal, random_params, random_pure_coefficients, random_state};
use noonsim::{
    evolve_analytic, fringe, from_pure, make_noon, partial_transpose_matrix, pt_spectrum_analytic,
    t_crit, Execution,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn base_seed() -> u64 {
    std::env::var("NOONSIM_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed)
}

fn rng(offset: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base_seed().wrapping_add(offset))
}

fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| start + (end - start) * i as f64 / (points - 1) as f64)
        .collect()
}

/// The six negative PT eigenvalues of the dephased N=3 pure state, written
/// out term by term from the coefficient magnitudes.
fn n3_expected(mags: [f64; 4], total_rate: f64, t: f64) -> Vec<f64> {
    let [a, b, c, d] = mags;
    let g = total_rate * t;
    let mut v = vec![
        -a * b * (-0.5 * g).exp(),
        -a * c * (-2.0 * g).exp(),
        -a * d * (-4.5 * g).exp(),
        -b * c * (-0.5 * g).exp(),
        -b * d * (-2.0 * g).exp(),
        -c * d * (-0.5 * g).exp(),
    ];
    v.sort_by(f64::total_cmp);
    v
}

fn n3_eigenvalue_list() -> Outcome {
    let mut rng = rng(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count_ok = true;
    for _ in 0..1000 {
        let pc = random_pure_coefficients(3, &mut rng);
        let mags: Vec<f64> = pc.coeffs().iter().map(|z| z.norm()).collect();
        let p = random_params(2.0, &mut rng);
        let t = rng.gen_range(0.0..=3.0);
        let st = evolve_analytic(&from_pure(&pc), &p, t).unwrap();
        let got = pt_spectrum_analytic(&st).negative_values();
        if got.len() != 6 {
            count_ok = false;
            continue;
        }
        let want = n3_expected([mags[0], mags[1], mags[2], mags[3]], p.total(), t);
        for (g, w) in got.iter().zip(&want) {
            worst = worst.max((g - w).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        count_ok && worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("1000 draws, six negatives each: {count_ok}, max |dev| {worst:.2e} (tol 1e-12), {elapsed:.2?} (< 1 s)"),
    )
}

fn oracle_spectrum_equivalence() -> Outcome {
    let mut rng = rng(2);
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for n in 1..=8 {
        let states: Vec<_> = (0..200).map(|_| random_state(n, &mut rng)).collect();
        let Ok(dense) = pt_spectra_numeric(&states, Execution::default()) else {
            failures += 1;
            continue;
        };
        for (s, d) in states.iter().zip(&dense) {
            let ana = pt_spectrum_analytic(s).values();
            if ana.len() != d.eigenvalues.len() {
                failures += 1;
                continue;
            }
            for (a, b) in ana.iter().zip(&d.eigenvalues) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && worst <= 1e-10 && elapsed < Duration::from_secs(30),
        format!("1600 states, N=1..8: max |dev| {worst:.2e} (tol 1e-10), {failures} failures, {elapsed:.2?} (< 30 s)"),
    )
}

fn block_eigenvectors() -> Outcome {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let s = random_state(n, &mut rng);
        let sigma = partial_transpose_matrix(&s);
        let dim = (n + 1) * (n + 1);
        for b in blocks(&s) {
            // (e^{i theta} |N-k, m> - |N-m, k>) / sqrt(2), built from rho_km directly
            let z = s.get(b.k, b.m);
            let theta = z.arg();
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[(n - b.k) * (n + 1) + b.m] =
                Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, theta);
            v[(n - b.m) * (n + 1) + b.k] = Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let sv = sigma.mul_vec(&v);
            let residual = sv
                .iter()
                .zip(&v)
                .map(|(x, y)| (x + y * z.norm()).norm())
                .fold(0.0, f64::max);
            worst = worst.max(residual);
            checked += 1;
        }
    }
    outcome(
        worst <= 1e-12,
        format!("{checked} blocks over 100 states, N<=6: max residual {worst:.2e} (tol 1e-12)"),
    )
}

fn no_esd_theorem() -> Outcome {
    let mut rng = rng(4);
    let mut violations = 0usize;
    let mut points = 0usize;
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let s = random_state(n, &mut rng);
        assert!(s.has_coherence());
        let p = DephasingParams::new(rng.gen_range(0.01..2.0), rng.gen_range(0.01..2.0)).unwrap();
        let grid = linspace(0.0, 50.0 / p.total(), 201);
        for pt in esd_probe(&s, &p, &grid).unwrap() {
            points += 1;
            if !pt.entangled || !pt.log_bound_exponent.is_finite() {
                violations += 1;
            }
        }
    }
    let mut diag_violations = 0usize;
    for _ in 0..20 {
        let n = rng.gen_range(1..=8);
        let s = random_diagonal(n, &mut rng);
        let p = random_params(2.0, &mut rng);
        let grid = linspace(0.0, 50.0 / p.total().max(1e-3), 201);
        for pt in esd_probe(&s, &p, &grid).unwrap() {
            if pt.entangled || pt.float_entangled {
                diag_violations += 1;
            }
        }
    }
    outcome(
        violations == 0 && diag_violations == 0,
        format!(
            "{points} points on 100 coherent states: {violations} not entangled or -inf bound; 20 diagonal states: {diag_violations} flagged entangled"
        ),
    )
}

fn dynamics_oracle() -> Outcome {
    let mut rng = rng(5);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=8 {
        let mut states = vec![make_noon(n, rng.gen_range(0.0..TAU)).unwrap()];
        states.extend((0..5).map(|_| random_state(n, &mut rng)));
        for s in &states {
            let p =
                DephasingParams::new(rng.gen_range(0.05..3.0), rng.gen_range(0.05..3.0)).unwrap();
            let times = linspace(0.0, 5.0 / p.total(), 26);
            let devs = Execution::default().map(&times, |&t| {
                let num = evolve_numeric_default(s, &p, t).unwrap();
                let ana = evolve_analytic(s, &p, t).unwrap();
                num.rho().max_abs_diff(ana.rho()).unwrap()
            });
            worst = devs.into_iter().fold(worst, f64::max);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(10),
        format!("N=1..8, 6 states x 26 times each: max |RK4 - closed form| {worst:.2e} (tol 1e-8), {elapsed:.2?} (< 10 s)"),
    )
}

fn visibility_law() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=10usize {
        for gamma in [0.1, 1.0, 10.0] {
            let s = make_noon(n, 0.0).unwrap();
            let p = DephasingParams::symmetric(gamma).unwrap();
            let n_sq = (n * n) as f64;
            let times = linspace(0.0, 10.0 / (n_sq * gamma), 20);
            let curve = visibility_curve(&s, &p, &times, default_phi_samples(n)).unwrap();
            for r in curve {
                worst = worst.max((r.v - (-n_sq * gamma * r.t).exp()).abs());
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("N=1..10, gamma in {{0.1,1,10}}, 20 times: max |V - exp(-N^2 gamma t)| {worst:.2e} (tol 1e-12)"),
    )
}

fn critical_time_scaling() -> Outcome {
    let mut worst_rel = 0.0f64;
    for gamma in [0.1, 0.5, 1.0, 3.0, 10.0] {
        for v_crit in [0.01, 0.1, 0.5, 0.9] {
            let base = t_crit(1, gamma, v_crit).unwrap();
            for n in 2..=10usize {
                let scaled = t_crit(n, gamma, v_crit).unwrap() * (n * n) as f64;
                worst_rel = worst_rel.max((scaled - base).abs() / base);
            }
        }
    }
    let unit = t_crit(1, 1.0, (-1.0f64).exp()).unwrap();

    let mut worst_cross = 0.0f64;
    for n in 1..=10usize {
        let s = make_noon(n, 0.0).unwrap();
        let p = DephasingParams::symmetric(0.7).unwrap();
        let v_crit = 0.05;
        let want = t_crit(n, p.gamma_eff(), v_crit).unwrap();
        let grid = linspace(0.0, 3.0 * want, 31);
        let got = crossing_time(&s, &p, &grid, default_phi_samples(n), v_crit).unwrap();
        worst_cross = worst_cross.max((got - want).abs());
    }
    outcome(
        worst_rel <= 1e-15 && unit == 1.0 && worst_cross <= 1e-9,
        format!(
            "t_crit*N^2 max rel dev {worst_rel:.2e} (tol 1e-15); t_crit(1,1,1/e) = {unit:?}; bisection vs formula {worst_cross:.2e} (tol 1e-9)"
        ),
    )
}

fn super_resolution_period() -> Outcome {
    let mut rng = rng(8);
    let mut worst = 0.0f64;
    for n in 1..=10usize {
        for _ in 0..5 {
            let s0 = make_noon(n, rng.gen_range(0.0..TAU)).unwrap();
            let p = DephasingParams::symmetric(rng.gen_range(0.0..1.0)).unwrap();
            let s = evolve_analytic(&s0, &p, rng.gen_range(0.0..0.2)).unwrap();
            let period = TAU / n as f64;
            for j in 0..256 {
                let phi = TAU * j as f64 / 256.0;
                worst = worst.max((fringe(&s, phi + period) - fringe(&s, phi)).abs());
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("N=1..10: max |fringe(phi + 2pi/N) - fringe(phi)| {worst:.2e} (tol 1e-12)"),
    )
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rng(9);
    let state = random_state(4, &mut rng);
    let state_path = dir.path().join("mixed.state");
    std::fs::write(&state_path, serialize_state(&state)).unwrap();

    let base_args = |cmd: &str| -> Vec<String> {
        let mut a: Vec<String> = [
            cmd,
            "--gamma1",
            "0.3",
            "--gamma2",
            "0.8",
            "--t-start",
            "0",
            "--t-end",
            "2",
            "--t-steps",
            "21",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        if cmd == "tcrit" {
            a.extend(["--n", "6", "--v-crit", "0.1"].map(String::from));
        } else {
            a.extend([
                "--state".to_string(),
                format!("file:{}", state_path.display()),
            ]);
        }
        a
    };

    let exe = env!("CARGO_BIN_EXE_noonsim");
    let mut mismatches = Vec::new();
    for command in Command::ALL {
        let name = command.name();
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{name}-{run}.csv"));
            let status = Process::new(exe)
                .args(base_args(name))
                .arg("--out")
                .arg(&out)
                .status()
                .unwrap();
            if !status.success() {
                mismatches.push(format!("{name}: exit {status}"));
            }
            outputs.push(std::fs::read(&out).unwrap_or_default());
        }
        if outputs[0].is_empty() || outputs[0] != outputs[1] {
            mismatches.push(format!("{name}: runs differ"));
        }

        // the library path, sequential vs parallel, must match the binary
        let mut spec = SweepSpec::new(command, 4);
        spec.gamma1 = 0.3;
        spec.gamma2 = 0.8;
        spec.t_grid = TimeGrid::Range {
            start: 0.0,
            end: 2.0,
            steps: 21,
        };
        if command == Command::Tcrit {
            spec.n_total = Some(6);
            spec.v_crit = Some(0.1);
        } else {
            spec.state_source = StateSource::File(state_path.clone());
        }
        let seq = render_with(&spec, Execution::Sequential).unwrap();
        let par = render_with(&spec, Execution::Parallel).unwrap();
        if seq != par || seq.as_bytes() != outputs[0].as_slice() {
            mismatches.push(format!("{name}: library output differs from binary"));
        }
    }

    let text = serialize_state(&state);
    let reparsed = serialize_state(&parse_state_str(&text).unwrap());
    let noon_text = "# hand written\nN 3\nrho 0 0 0.5 0.0\nrho 3 3 0.5 0.0\nrho 0 3 0.5 0.0\n";
    let canonical = serialize_state(&parse_state_str(noon_text).unwrap());
    let canonical_again = serialize_state(&parse_state_str(&canonical).unwrap());
    let round_trip_ok = reparsed == text && canonical == canonical_again;
    if !round_trip_ok {
        mismatches.push("state file round trip not canonical".into());
    }

    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "6 commands x 2 binary runs byte-identical; seq/par/library identical; state round trip canonical".into()
        } else {
            mismatches.join("; ")
        },
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    // `cargo test -- --list` and similar harness probes
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 9] = [
        ("1 N=3 negative eigenvalue list", n3_eigenvalue_list),
        ("2 block vs dense PT spectrum", oracle_spectrum_equivalence),
        ("3 coherence-block eigenvectors", block_eigenvectors),
        ("4 no entanglement sudden death", no_esd_theorem),
        ("5 RK4 vs closed-form dephasing", dynamics_oracle),
        ("6 visibility decay law", visibility_law),
        ("7 critical-time scaling", critical_time_scaling),
        ("8 N-fold fringe period", super_resolution_period),
        ("9 CLI determinism and round trip", cli_determinism),
    ];
    println!("acceptance (seed {:#x})", base_seed());
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
