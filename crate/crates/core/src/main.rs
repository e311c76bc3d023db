use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bargmann::io::{boundary_csv, parse_tuple, synthesis_to_json, tuple_to_json};
use bargmann::range::{membership, sample_boundary, Classification, RegionSpec};
use bargmann::state::{bargmann_pure, Tuple};
use bargmann::symmetrize::symmetrize;
use bargmann::synthesis::{synth_circular, synth_qubit, OptimizerConfig};
use bargmann::tolerance::Tolerances;
use bargmann::verify::{run_verification, RunConfig};
use bargmann::{Error, C64};

const EXIT_INPUT: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_OUTSIDE: u8 = 3;

/// Bargmann invariants: evaluation, range membership, synthesis and verification.
#[derive(Debug, Parser)]
#[command(name = "bargmann", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Circular,
    Qubit,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the invariant of a tuple file as "re im" followed by its polar form.
    Invariant { input: PathBuf },
    /// Classify z = re + i·im against the range for (n, d).
    #[command(allow_negative_numbers = true)]
    Membership {
        re: f64,
        im: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = Tolerances::DEFAULT.membership)]
        tol: f64,
    },
    /// Build a tuple realizing z = re + i·im.
    #[command(allow_negative_numbers = true)]
    Synth {
        re: f64,
        im: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Circular)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export samples of the boundary curve as CSV.
    Boundary {
        #[arg(long)]
        n: usize,
        /// Number of samples.
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase-align and cyclically average a pure tuple.
    Symmetrize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded verification suite and write a JSON report.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Inclusive range, e.g. 3..5 or a single value.
        #[arg(long, default_value = "3..5", value_parser = parse_range)]
        n: (usize, usize),
        #[arg(long, default_value = "2..4", value_parser = parse_range)]
        d: (usize, usize),
        /// Override every tolerance with this value.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => {
            let v = parse(s)?;
            Ok((v, v))
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutsideRegion { .. } => EXIT_OUTSIDE,
            Error::ZeroInvariant(_) | Error::NoConvergence { .. } | Error::ResidualTooLarge { .. } => EXIT_FAILED,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

/// Rounds to 12 decimals and clears negative zero, so exact values print cleanly.
fn fmt_num(x: f64) -> String {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

fn read_tuple(path: &Path) -> Result<Tuple, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    parse_tuple(&text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Invariant { input } => {
            let b = read_tuple(&input)?.invariant();
            println!("{} {}", fmt_num(b.value().re), fmt_num(b.value().im));
            println!("modulus {} arg {}", fmt_num(b.modulus()), fmt_num(b.arg()));
            Ok(())
        }
        Command::Membership { re, im, n, d, tol } => {
            let spec = RegionSpec::new(n, d)?;
            let v = membership(C64::new(re, im), spec, tol)?;
            let mut line = format!(
                "{} radius={}",
                v.classification.as_str(),
                fmt_num(v.boundary_radius)
            );
            if let Some(p) = v.params {
                line.push_str(&format!(" t={} p={}", fmt_num(p.t), fmt_num(p.p)));
            }
            println!("{line}");
            match v.classification {
                Classification::Outside => Err(Failure::new(EXIT_OUTSIDE, "outside the range")),
                Classification::NotApplicable => Err(Failure::new(EXIT_INPUT, "not applicable")),
                _ => Ok(()),
            }
        }
        Command::Synth {
            re,
            im,
            n,
            mode,
            seed,
            out,
        } => {
            let z = C64::new(re, im);
            let result = match mode {
                Mode::Circular => synth_circular(z, n)?,
                Mode::Qubit => synth_qubit(
                    z,
                    n,
                    &OptimizerConfig {
                        seed,
                        ..OptimizerConfig::default()
                    },
                )?,
            };
            emit(out.as_deref(), &(synthesis_to_json(&result) + "\n"))?;
            eprintln!("residual {:e}", result.residual);
            Ok(())
        }
        Command::Boundary { n, samples, out } => {
            let rows = sample_boundary(n, samples)?;
            emit(out.as_deref(), &boundary_csv(&rows))
        }
        Command::Symmetrize { input, out } => {
            let tuple = match read_tuple(&input)? {
                Tuple::Pure(t) => t,
                Tuple::Mixed(_) => {
                    return Err(Failure::new(EXIT_INPUT, "symmetrize needs a pure tuple"))
                }
            };
            let before = bargmann_pure(&tuple);
            let sym = symmetrize(&tuple)?;
            let after = bargmann_pure(&sym);
            emit(out.as_deref(), &(tuple_to_json(&Tuple::Pure(sym)) + "\n"))?;
            eprintln!(
                "modulus before {} after {} arg {}",
                fmt_num(before.modulus()),
                fmt_num(after.modulus()),
                fmt_num(after.arg())
            );
            Ok(())
        }
        Command::Verify {
            seed,
            samples,
            n,
            d,
            tol,
            out,
        } => {
            let cfg = RunConfig {
                seed,
                samples,
                n_range: n,
                d_range: d,
                tolerances: tol.map_or(Tolerances::DEFAULT, Tolerances::uniform),
            };
            let report = run_verification(&cfg)?;
            emit(out.as_deref(), &report.to_json())?;
            eprint!("{}", report.summary());
            if report.pass {
                Ok(())
            } else {
                Err(Failure::new(EXIT_FAILED, "verification failed"))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
