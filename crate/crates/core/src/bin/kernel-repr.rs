use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use kernel_repr::cli::{self, Failure, Options, Status};

/// Kernel representations of operators on finite measure spaces.
///
/// Reads JSON documents, runs one check or conversion and writes a JSON
/// report to standard output. Exit status: 0 pass, 1 fail, 2 input error.
#[derive(Parser)]
#[command(name = "kernel-repr", version)]
struct Args {
    /// One of: represent, derepresent, apply, norm, check-isometry,
    /// extract-density, pi-norm, check-l1-product, check-commutativity,
    /// check-positive, regular-norm, check-regular-kernel, counterexample,
    /// check-local, extract-multiplier, check-multiplier-positive, hs-norm,
    /// check-hs.
    command: String,
    /// Input documents; `-` reads standard input.
    inputs: Vec<String>,
    #[arg(long, default_value_t = cli::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = cli::DEFAULT_SAMPLES)]
    samples: usize,
    /// Overrides the command's default tolerance.
    #[arg(long, allow_hyphen_values = true)]
    tolerance: Option<f64>,
    /// Largest size for `counterexample` (a power of two).
    #[arg(long)]
    max_n: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            eprint!("{e}");
            let command = std::env::args().nth(1).unwrap_or_default();
            let failure = Failure { code: "E_USAGE".into(), message: e.kind().to_string(), location: None };
            print!("{}", cli::error_report(&command, &Options::default(), failure).to_json());
            return ExitCode::from(2);
        }
    };
    let options = Options { seed: args.seed, samples: args.samples, tolerance: args.tolerance, max_n: args.max_n };
    let report = cli::run(&args.command, &options, &args.inputs);
    if let Some(e) = &report.error {
        match &e.location {
            Some(at) => eprintln!("error[{}] {at}: {}", e.code, e.message),
            None => eprintln!("error[{}]: {}", e.code, e.message),
        }
    } else if report.status == Status::Fail {
        eprintln!("{}: check failed", args.command);
    }
    print!("{}", report.to_json());
    ExitCode::from(report.exit_code() as u8)
}
