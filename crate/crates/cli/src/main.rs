use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use optstop_cli::{CliResult, Method, Report};

#[derive(Parser)]
#[command(name = "optstop", version, about = "Optimal orderings for optimal stopping")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Brute,
    TwoPoint,
    Fptas,
    NestedUniform,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Brute => Method::Brute,
            MethodArg::TwoPoint => Method::TwoPoint,
            MethodArg::Fptas => Method::Fptas,
            MethodArg::NestedUniform => Method::NestedUniform,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Stopping value, thresholds and excess decomposition of one ordering.
    Evaluate {
        instance: PathBuf,
        /// Comma-separated probe order; defaults to the identity.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Find an optimal or near-optimal ordering.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Approximation parameter, fptas only.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Prophet ratio and certificate of a two-point instance.
    Prophet { instance: PathBuf },
    /// Write the subset-product reduction instance for the given integers.
    GenHardness {
        #[arg(required = true)]
        integers: Vec<u64>,
        #[arg(long, short = 'B')]
        target: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split an ordering of {0, m, 1} variables into its S and T parts.
    CheckStructure {
        instance: PathBuf,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
}

fn run(cmd: Command) -> CliResult<Report> {
    match cmd {
        Command::Evaluate { instance, order } => optstop_cli::cmd_evaluate(&instance, order.as_deref()),
        Command::Solve { instance, method, eps } => optstop_cli::cmd_solve(&instance, method.into(), eps),
        Command::Prophet { instance } => optstop_cli::cmd_prophet(&instance),
        Command::GenHardness { integers, target, out } => optstop_cli::cmd_gen_hardness(&integers, target, &out),
        Command::CheckStructure { instance, order } => {
            optstop_cli::cmd_check_structure(&instance, order.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
