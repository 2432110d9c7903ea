//! Thin command-line front end over [`peakon::cli::run_command`].

use clap::{Parser, Subcommand, ValueEnum};
use peakon::cli::{load_defaults, run_command, Arithmetic, CommandKind, Grid, RunSpec};
use peakon::KernelParams;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "peakon",
    about = "Multi-peakon solvers for the dispersionless Camassa-Holm equation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Input JSON file (peakon configuration or spectral data).
    #[arg(long)]
    input: PathBuf,
    /// Output path; commands with several outputs derive suffixed siblings.
    #[arg(long)]
    output: PathBuf,
    /// Final time.
    #[arg(long)]
    t_final: Option<f64>,
    /// Comma-separated list of times.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    times: Vec<f64>,
    /// Sample grid min:max:step.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// ODE relative tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Arithmetic mode for the inverse pipeline.
    #[arg(long, value_enum)]
    arithmetic: Option<ArithmeticArg>,
    /// Interaction kernel.
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    /// Kernel constant a.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    kernel_a: f64,
    /// Kernel coefficient b+ (hyperbolic/trigonometric).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    kernel_b_plus: f64,
    /// Kernel coefficient b- (hyperbolic/trigonometric).
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    kernel_b_minus: f64,
    /// Kernel frequency nu (hyperbolic/trigonometric).
    #[arg(long, default_value_t = 1.0)]
    kernel_nu: f64,
    /// Kernel coefficient b (polynomial branch).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    kernel_b: f64,
    /// Kernel coefficient c (polynomial branch).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    kernel_c: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArithmeticArg {
    Float,
    Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Peakon,
    Hyperbolic,
    Trigonometric,
    Polynomial,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the Hamiltonian ODEs and write a trajectory CSV.
    Simulate(CommonArgs),
    /// Forward spectral transform: eigenvalues, norming and coupling
    /// constants, string coefficients.
    Spectral(CommonArgs),
    /// Inverse spectral transform from eigenvalues and norming constants.
    Invert(CommonArgs),
    /// Evolve on spectral data and write state JSON plus profile CSV.
    Evolve(CommonArgs),
    /// Phase shifts and peakon-resolution errors.
    Asymptotics(CommonArgs),
    /// Side-by-side ODE vs spectral profiles with max deviation.
    Compare(CommonArgs),
}

fn build_spec(kind: CommandKind, args: CommonArgs) -> Result<RunSpec, peakon::Error> {
    let defaults = load_defaults()?;
    let mut spec = RunSpec::new(kind, args.input, args.output);
    spec.t_final = args.t_final;
    spec.times = args.times;
    if let Some(g) = args.grid {
        spec.grid = Some(g.parse::<Grid>()?);
    }
    spec.tol = args.tol.or(defaults.tol).unwrap_or(1e-10);
    spec.arithmetic = match args.arithmetic {
        Some(ArithmeticArg::Float) => Arithmetic::Float,
        Some(ArithmeticArg::Rational) => Arithmetic::Rational,
        None => defaults.arithmetic.unwrap_or_default(),
    };
    spec.kernel = args.kernel.map(|k| match k {
        KernelArg::Peakon => KernelParams::peakon(),
        KernelArg::Hyperbolic => KernelParams::Hyperbolic {
            a: args.kernel_a,
            b_plus: args.kernel_b_plus,
            b_minus: args.kernel_b_minus,
            nu: args.kernel_nu,
        },
        KernelArg::Trigonometric => KernelParams::Trigonometric {
            a: args.kernel_a,
            b_plus: args.kernel_b_plus,
            b_minus: args.kernel_b_minus,
            nu: args.kernel_nu,
        },
        KernelArg::Polynomial => KernelParams::Polynomial {
            a: args.kernel_a,
            b: args.kernel_b,
            c: args.kernel_c,
        },
    });
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match cli.command {
        Command::Simulate(args) => build_spec(CommandKind::Simulate, args),
        Command::Spectral(args) => build_spec(CommandKind::Spectral, args),
        Command::Invert(args) => build_spec(CommandKind::Invert, args),
        Command::Evolve(args) => build_spec(CommandKind::Evolve, args),
        Command::Asymptotics(args) => build_spec(CommandKind::Asymptotics, args),
        Command::Compare(args) => build_spec(CommandKind::Compare, args),
    };
    let result = spec.and_then(|s| run_command(&s));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("peakon: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
