use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use noonsim::cli::{run, CliError, Command, StateSource, SweepSpec, TimeGrid};

#[derive(Parser)]
#[command(
    name = "noonsim",
    version,
    about = "Dephasing, entanglement and fringe visibility of two-mode N-photon states"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Density-matrix entries (k <= m) over the time grid
    Evolve(SweepArgs),
    /// Partial-transpose eigenvalues at the last grid time
    PtSpectrum(SweepArgs),
    /// Negativity, smallest PT eigenvalue and entanglement flags over time
    NegativityScan(SweepArgs),
    /// Fringe visibility over time
    VisibilityScan(SweepArgs),
    /// Critical time for n = 1..=N at gamma_eff = (gamma1 + gamma2) / 2
    Tcrit(SweepArgs),
    /// Exposure dosage over one phase period at the last grid time
    Fringe(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Photon number N
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    gamma1: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma2: f64,
    /// `noon:<phase>` or `file:<path>`
    #[arg(long, default_value = "noon:0")]
    state: StateSource,
    #[arg(long, default_value_t = 0.0)]
    t_start: f64,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long, default_value_t = 1)]
    t_steps: usize,
    /// Explicit comma-separated times; overrides the start/end/steps range
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["t_end", "t_steps"])]
    times: Option<Vec<f64>>,
    /// Phase samples over [0, 2pi); defaults to 8N
    #[arg(long)]
    phi_samples: Option<usize>,
    #[arg(long)]
    v_crit: Option<f64>,
    /// Output CSV path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepArgs {
    fn into_spec(self, command: Command) -> SweepSpec {
        let t_grid = match self.times {
            Some(ts) => TimeGrid::List(ts),
            None => TimeGrid::Range {
                start: self.t_start,
                end: self.t_end.unwrap_or(self.t_start),
                steps: self.t_steps,
            },
        };
        SweepSpec {
            command,
            n_total: self.n,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            t_grid,
            phi_samples: self.phi_samples,
            v_crit: self.v_crit,
            state_source: self.state,
            output_path: self.out,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 5 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let spec = match cli.command {
        Cmd::Evolve(a) => a.into_spec(Command::Evolve),
        Cmd::PtSpectrum(a) => a.into_spec(Command::PtSpectrum),
        Cmd::NegativityScan(a) => a.into_spec(Command::NegativityScan),
        Cmd::VisibilityScan(a) => a.into_spec(Command::VisibilityScan),
        Cmd::Tcrit(a) => a.into_spec(Command::Tcrit),
        Cmd::Fringe(a) => a.into_spec(Command::Fringe),
    };
    match run(&spec) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("noonsim: {e}");
    ExitCode::from(e.exit_code() as u8)
}
