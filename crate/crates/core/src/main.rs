use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fibrk::cli::{run, Command, Format, RunConfig, TRUNCATION_ENV};

#[derive(Parser)]
#[command(name = "fibrk", version, about = "Exact non-Archimedean functionals and W-invariants of fibration degenerations")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    #[arg(long, value_enum, default_value_t = OutFormat::Json, global = true)]
    format: OutFormat,
    /// Add decimal renderings next to exact values.
    #[arg(long, global = true)]
    approx: bool,
    /// Declare a parameter sign or value: t>0, t<0, u=0, u=3/2.
    #[arg(long, global = true, value_name = "FACT")]
    assume: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// E, I, J, H, J^K, R, M and DF of a datum.
    Functionals {
        file: PathBuf,
        /// Fail with exit code 3 when a checked identity does not hold.
        #[arg(long)]
        check: bool,
    },
    /// W_0, ..., W_n and the remainder of the large-twist expansion.
    Wtable { file: PathBuf },
    /// Lexicographic sign verdict on W_0, ..., W_n.
    Verdict { file: PathBuf },
    /// Series, obstructions and builder output for a degeneration catalog.
    Degenerate {
        catalog: PathBuf,
        #[arg(long)]
        truncation: Option<u32>,
        /// H = -lambda K modulo the base.
        #[arg(long)]
        lambda: Option<String>,
        /// First level at which the cut configuration is nontrivial.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Run a bundled example, or list them.
    Examples {
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        truncation: Option<u32>,
    },
    /// Report schema diagnostics for a datum or catalog.
    Validate { file: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut cfg = RunConfig::new(Command::Functionals);
    match args.command {
        Cmd::Functionals { file, check } => {
            cfg = cfg.input(file);
            cfg.check = check;
        }
        Cmd::Wtable { file } => cfg = RunConfig { command: Command::Wtable, ..cfg.input(file) },
        Cmd::Verdict { file } => cfg = RunConfig { command: Command::Verdict, ..cfg.input(file) },
        Cmd::Degenerate { catalog, truncation, lambda, level } => {
            cfg = RunConfig { command: Command::Degenerate, truncation, lambda, level, ..cfg.input(catalog) };
        }
        Cmd::Examples { name, list, truncation } => {
            cfg.command = Command::Examples;
            cfg.input = name.map(PathBuf::from);
            cfg.list = list;
            cfg.truncation = truncation;
        }
        Cmd::Validate { file } => cfg = RunConfig { command: Command::Validate, ..cfg.input(file) },
    }
    cfg.format = match args.format {
        OutFormat::Json => Format::Json,
        OutFormat::Text => Format::Text,
    };
    cfg.approx = args.approx;
    cfg.assume = args.assume;
    cfg.env_truncation = std::env::var(TRUNCATION_ENV).ok();
    let out = run(&cfg);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
