use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use qpfaff::pfaffian::{hyper_pfaffian, pfaffian};
use qpfaff::qalgebras::{free_antisym_generators, hyper_generators, Flavor, QuantumMatrix};
use qpfaff::qlinalg::{cdet, rdet};
use qpfaff::verify::{run_suite, Fault, Suite, VerifyOptions};
use qpfaff::{Error, ParameterTable, Polynomial, Rational};

#[derive(Parser)]
#[command(
    name = "qpfaff",
    version,
    about = "Exact quantum determinants and Pfaffians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a generic parameter table.
    Gen {
        #[arg(long)]
        n: usize,
        /// Defaults to a value chosen from the seed.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a determinant or Pfaffian as polynomial JSON.
    Compute {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        params: PathBuf,
        /// Pfaffian size (defaults to the table size).
        #[arg(long)]
        size: Option<usize>,
        /// Hyper-Pfaffian arity.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Hyper-Pfaffian block count (defaults to table size / m).
        #[arg(long)]
        blocks: Option<usize>,
        /// Antisymmetry of B for `pf`, weights for `hyperpf`.
        #[arg(long, value_enum)]
        flavor: Option<FlavorArg>,
        /// Human-readable terms instead of JSON.
        #[arg(long)]
        pretty: bool,
    },
    /// Run a suite of identity checks and write a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        blocks: usize,
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Det,
    Pf,
    Hyperpf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    P,
    Q,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::P => Flavor::P,
            FlavorArg::Q => Flavor::Q,
        }
    }
}

/// Exit status plus message; 1 for a failed identity, 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::IdentityViolation { .. } | Error::NonTermination(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {}", e.message);
        return ExitCode::from(e.code);
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("QPFAFF_THREADS") else {
        return Ok(());
    };
    let threads: usize = v
        .parse()
        .map_err(|_| usage(format!("QPFAFF_THREADS={v:?} is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(usage)
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Gen {
            n,
            lambda,
            seed,
            out,
        } => {
            let lambda = match lambda {
                Some(s) => s.parse::<Rational>().map_err(usage)?,
                None => ParameterTable::lambda_for_seed(seed),
            };
            let table = ParameterTable::seeded(n, lambda, seed)?;
            let text = serde_json::to_string_pretty(&table.to_json()).expect("json") + "\n";
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compute {
            kind,
            params,
            size,
            m,
            blocks,
            flavor,
            pretty,
        } => {
            let table = Arc::new(read_table(&params)?);
            let poly = match kind {
                Kind::Det => {
                    let a = QuantumMatrix::new(table)?;
                    let (r, c) = (rdet(&a)?, cdet(&a)?);
                    if r != c {
                        eprintln!("rdet != cdet; difference: {}", (&r - &c).to_json());
                        return Err(Failure {
                            code: 1,
                            message: "row and column determinants differ".into(),
                        });
                    }
                    eprintln!("rdet = cdet");
                    r
                }
                Kind::Pf => {
                    let size = size.unwrap_or(table.n());
                    let flavor = flavor.map_or(Flavor::P, Flavor::from);
                    let b = free_antisym_generators(size, flavor, table)?;
                    pfaffian(&b)?
                }
                Kind::Hyperpf => {
                    let blocks = blocks.unwrap_or(table.n().checked_div(m).unwrap_or(0));
                    let h = hyper_generators(m, blocks)?;
                    hyper_pfaffian(&h, &table, flavor.map_or(Flavor::Q, Flavor::from))?
                }
            };
            print_poly(&poly, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            n,
            size,
            m,
            blocks,
            seeds,
            report,
            inject_fault,
        } => {
            let suite: Suite = suite.parse()?;
            let fault = inject_fault.map(|f| f.parse::<Fault>()).transpose()?;
            let opts = VerifyOptions {
                n,
                size,
                arity: m,
                blocks,
                seeds,
                fault,
            };
            let result = run_suite(suite, &opts)?;
            for c in &result.checks {
                let status = if c.pass { "ok  " } else { "FAIL" };
                println!("{status} {} {} ({} ms)", c.check, c.params, c.millis);
                if let Some(what) = &c.failed {
                    println!("     {what}");
                }
            }
            let passed = result.checks.iter().filter(|c| c.pass).count();
            println!("{suite}: {passed}/{} checks passed", result.checks.len());
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&result.to_json()).expect("json") + "\n";
                fs::write(&path, text)
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(if result.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn read_table(path: &Path) -> Result<ParameterTable, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(ParameterTable::from_json(&value)?)
}

fn print_poly(p: &Polynomial, pretty: bool) {
    if pretty {
        println!("{}", p.pretty());
    } else {
        println!("{}", p.to_json());
    }
}
