//! Batch verification CLI: parses a spec file, runs the selected suites and
//! emits a human or machine-readable report.
//!
//! Exit codes: 0 every selected suite passed, 1 a verification failure (or
//! a semantic validation failure in the input, reported with witnesses),
//! 2 usage or syntax errors.

mod runner;

use clap::{Parser, Subcommand, ValueEnum};
use runner::{effective_cutoffs, Suite};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "loday",
    version,
    about = "Exact verification of derived homotopy-algebraic structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites on a spec file.
    Verify(VerifyArgs),
    /// Parse a spec file, report diagnostics and print the canonical form.
    Parse(ParseArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Input spec file.
    #[arg(long)]
    input: PathBuf,
    /// Suite to run (repeatable); `all` runs every applicable suite.
    #[arg(long, value_enum, default_value = "all")]
    suite: Vec<SuiteArg>,
    /// Largest graded piece / operator arity to check.
    #[arg(long)]
    max_arity: Option<usize>,
    /// Longest basis word to check.
    #[arg(long)]
    max_word_len: Option<usize>,
    /// Deformation truncation order for the gauge suite.
    #[arg(long)]
    t_order: Option<usize>,
    /// Report format.
    #[arg(long, value_enum, default_value = "text")]
    report: ReportArg,
    /// Worker threads (0 = automatic); results are identical for any value.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(clap::Args)]
struct ParseArgs {
    /// Input spec file.
    #[arg(long)]
    input: PathBuf,
    /// Print the canonical re-serialization to stdout.
    #[arg(long, default_value_t = true)]
    emit: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    AInfinity,
    ShLoday,
    LodayPair,
    OperatorIdentities,
    Subcomplex,
    Gauge,
    Linfty,
    All,
}

impl SuiteArg {
    fn expand(args: &[SuiteArg]) -> (Vec<Suite>, bool) {
        if args.contains(&SuiteArg::All) {
            return (Suite::ALL.to_vec(), true);
        }
        let suites = args
            .iter()
            .map(|a| match a {
                SuiteArg::AInfinity => Suite::AInfinity,
                SuiteArg::ShLoday => Suite::ShLoday,
                SuiteArg::LodayPair => Suite::LodayPair,
                SuiteArg::OperatorIdentities => Suite::OperatorIdentities,
                SuiteArg::Subcomplex => Suite::Subcomplex,
                SuiteArg::Gauge => Suite::Gauge,
                SuiteArg::Linfty => Suite::Linfty,
                SuiteArg::All => unreachable!(),
            })
            .collect();
        (suites, false)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportArg {
    Text,
    JsonLike,
}

fn read_input(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn parse_input(path: &PathBuf) -> Result<loday::specfile::SpecFile, ExitCode> {
    let text = read_input(path)?;
    loday::specfile::parse_spec(&text).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        if e.validation {
            ExitCode::from(1)
        } else {
            ExitCode::from(2)
        }
    })
}

fn verify(args: VerifyArgs) -> ExitCode {
    let file = match parse_input(&args.input) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let cutoffs = effective_cutoffs(&file, args.max_arity, args.max_word_len, args.t_order);
    let (selection, all) = SuiteArg::expand(&args.suite);
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if args.jobs > 0 {
            builder = builder.num_threads(args.jobs);
        }
        match builder.build() {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    };
    let outcome = pool.install(|| {
        runner::run(
            &file,
            &args.input.display().to_string(),
            &selection,
            all,
            cutoffs,
        )
    });
    match outcome {
        Ok(report) => {
            match args.report {
                ReportArg::Text => print!("{}", report.render_text()),
                ReportArg::JsonLike => println!("{}", report.render_json()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse(args: ParseArgs) -> ExitCode {
    let file = match parse_input(&args.input) {
        Ok(f) => f,
        Err(code) => return code,
    };
    if args.emit {
        print!("{}", loday::specfile::serialize(&file));
    } else {
        println!("{}: ok", args.input.display());
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify(args) => verify(args),
        Command::Parse(args) => parse(args),
    }
}
