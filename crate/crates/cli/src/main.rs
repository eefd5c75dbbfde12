mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use apery_core::exact::parse_rational;
use apery_core::BigRational;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "apery", version, about = "Evaluate and verify S_k(z) = sum n^k z^n / C(2n,n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Target precision in bits (default 256; 512 for `rate`)
    #[arg(long, global = true, env = "APERY_BITS")]
    pub bits: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for independent evaluations
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// S_k(z) for one (z, k) by the closed form and/or the series
    Eval {
        #[arg(long, value_parser = parse_z)]
        z: BigRational,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Absolute accuracy for the series, e.g. 1e-60
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Exact R1, R2 with R1/R2 and its distance to the limit, k = kmin..kmax
    Table {
        #[arg(long, value_parser = parse_z)]
        z: BigRational,
        #[arg(long, default_value_t = 0)]
        kmin: u32,
        #[arg(long)]
        kmax: u32,
    },
    /// Limit of R1/R2 as k grows, and the residual of the limit relation
    Limit {
        #[arg(long, value_parser = parse_z)]
        z: BigRational,
    },
    /// Geometric decay rate of |R1/R2 - limit|
    Rate {
        #[arg(long, value_parser = parse_z, default_value = "2")]
        z: BigRational,
        #[arg(long, default_value_t = 5)]
        kmin: u32,
        #[arg(long, default_value_t = 35)]
        kmax: u32,
    },
    /// Generating-function Taylor coefficients next to the exact values
    Genfunc {
        #[arg(long, value_parser = parse_z)]
        z: BigRational,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
    },
    /// Run verification suites
    Verify {
        /// stirling, eq6, appendix, borwein, genfunc, negk, asym, paths or all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Series,
    Both,
}

fn parse_z(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("").trim()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("apery: {}", first_line(&e.to_string()).trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("apery: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match pool.install(|| commands::run(&cli)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("apery: {e}");
            return ExitCode::from(2);
        }
    };

    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("apery: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
