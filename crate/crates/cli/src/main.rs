use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polphase_cli::commands::{
    cmd_dist, cmd_figure, cmd_matrix, cmd_uncertainty, cmd_verify, FigureId, LoadedSpec,
    OperatorName,
};
use polphase_cli::error::{EXIT_OK, EXIT_VERIFY_FAILED};
use polphase_cli::output::emit;
use polphase_cli::verify::VerifyOptions;
use polphase_cli::{CliError, ConfigFlags, Format, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "polphase",
    version,
    about = "Phase distributions and operator checks for a two-polarization field mode"
)]
struct Cli {
    /// Fock cutoff N per polarization (default 40)
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Phase grid size M, at least 2(N+1) (default 2048)
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Angular frequency ω (default 1)
    #[arg(long, global = true)]
    omega: Option<f64>,
    /// Reduced Planck constant (default 1)
    #[arg(long, global = true)]
    hbar: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// State specification document (JSON)
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Flip the sign of Φ before verification (negative control)
    #[arg(long, global = true, hide = true)]
    corrupt_phase_sign: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Phase density of the state in --spec
    Dist,
    /// Data series behind a figure
    Figure {
        #[arg(value_enum)]
        id: FigureId,
    },
    /// Run the identity check registry; exits 1 if any check fails
    Verify,
    /// Energy-time spreads of the state in --spec
    Uncertainty,
    /// Dense matrix of an operator
    Matrix {
        #[arg(value_enum)]
        name: OperatorName,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let flags = ConfigFlags {
        cutoff: cli.cutoff,
        grid_points: cli.grid_points,
        omega: cli.omega,
        hbar: cli.hbar,
        format: cli.format,
        output: cli.output.clone(),
        verbosity: cli.verbose,
    };
    let needs_spec = matches!(cli.command, Command::Dist | Command::Uncertainty);
    let spec = match &cli.spec {
        Some(p) => Some(LoadedSpec::load(p)?),
        None if needs_spec => return Err(CliError::Input("this command needs --spec PATH".into())),
        None => None,
    };
    let cfg = RunConfig::resolve(&flags, spec.as_ref().map(|s| &s.spec))?;
    if cfg.verbosity > 0 {
        eprintln!(
            "cutoff={} grid_points={} omega={} hbar={}",
            cfg.cutoff, cfg.grid_points, cfg.omega, cfg.hbar
        );
    }
    let out = cfg.output.as_deref();
    match cli.command {
        Command::Dist => emit(out, &cmd_dist(&cfg, spec.as_ref().expect("checked above"))?)?,
        Command::Uncertainty => emit(
            out,
            &cmd_uncertainty(&cfg, spec.as_ref().expect("checked above"))?,
        )?,
        Command::Figure { id } => emit(out, &cmd_figure(&cfg, id)?)?,
        Command::Matrix { name } => emit(out, &cmd_matrix(&cfg, name)?)?,
        Command::Verify => {
            let opts = VerifyOptions {
                corrupt_phase_sign: cli.corrupt_phase_sign,
            };
            let (text, report) = cmd_verify(&cfg, opts)?;
            emit(out, &text)?;
            if !report.all_passed() {
                for c in report.checks.iter().filter(|c| !c.passed) {
                    eprintln!(
                        "FAIL {}: defect {:e} > {:e}",
                        c.name, c.max_defect, c.threshold
                    );
                }
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            ExitCode::from(e.exit_code())
        }
    }
}
