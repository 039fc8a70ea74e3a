use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pamin::global::{find_minimizer_penalty, Uniqueness};
use pamin::oracle::{certify, SearchBox, Verdict};
use pamin::{
    find_minimizer_lp, is_bounded_below, min_value, minimizer_set, parse_instance,
    serialize_instance, uniqueness_check, Combinator, Error, MinValue, PiecewiseAffineFn,
    SolverConfig, Vector, DEFAULT_BLOWUP_CAP,
};

#[derive(Parser)]
#[command(name = "pamin", version, about = "Global minimization of min-max piecewise affine functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the function at a point
    Eval {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
        /// Comma separated coordinates
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: String,
    },
    /// Print whether the function is bounded below
    Bounded {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
    },
    /// Print the global minimum value or "unbounded"
    Minvalue {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
    },
    /// Print the full minimizer report as JSON
    Argmin {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
        /// Require the uniqueness decision even when it is skipped by default
        #[arg(long)]
        unique: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Print one global minimizer
    Point {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Lp)]
        method: Method,
    },
    /// Rewrite the function with the other combinator
    Convert {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
        #[arg(long = "to", value_enum)]
        to: Target,
        #[arg(long, default_value_t = DEFAULT_BLOWUP_CAP)]
        cap: usize,
    },
    /// Check a fresh report against a grid scan
    Oracle {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
        /// Box bounds LO,HI applied to every axis
        #[arg(long = "box", allow_hyphen_values = true)]
        bounds: String,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lp,
    Penalty,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Maxmin,
    Minmax,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MaxPivotsExceeded(_)
            | Error::InternalInconsistency(_)
            | Error::PenaltyNotConverged { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn load(path: &Path) -> Result<PiecewiseAffineFn, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_instance(&text)?)
}

fn load_minmax(path: &Path) -> Result<PiecewiseAffineFn, Failure> {
    let f = load(path)?;
    Ok(match f.combinator() {
        Combinator::MinMax => f,
        Combinator::MaxMin => f.maxmin_to_minmax(DEFAULT_BLOWUP_CAP)?,
    })
}

fn numbers(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Input(format!("not a number: {s:?}")))
        })
        .collect()
}

fn run(cmd: Command) -> Outcome {
    let cfg = SolverConfig::default();
    match cmd {
        Command::Eval { file, x } => {
            let f = load(&file)?;
            let v = f.evaluate(&Vector::Dense(numbers(&x)?))?;
            Ok((v.to_string(), true))
        }
        Command::Bounded { file } => {
            let b = is_bounded_below(&load_minmax(&file)?, &cfg)?;
            Ok((b.to_string(), b))
        }
        Command::Minvalue { file } => match min_value(&load_minmax(&file)?, &cfg)? {
            MinValue::Bounded(v) => Ok((v.to_string(), true)),
            MinValue::UnboundedBelow => Ok(("unbounded".into(), false)),
        },
        Command::Argmin { file, unique, pretty } => {
            let f = load_minmax(&file)?;
            let mut report = minimizer_set(&f, &cfg)?;
            if unique && report.bounded && report.unique == Uniqueness::NotChecked {
                report.unique = uniqueness_check(&f, &report, &cfg)?;
            }
            Ok((pamin::instance::report_json(&report, pretty), report.bounded))
        }
        Command::Point { file, method } => {
            let f = load_minmax(&file)?;
            let report = minimizer_set(&f, &cfg)?;
            let Some(a_star) = report.a_star else {
                return Ok(("unbounded".into(), false));
            };
            let first = &f.sets()[report.active_indices[0]];
            let point = match method {
                Method::Lp => match report.witness {
                    Some(w) => w,
                    None => find_minimizer_lp(first, a_star, &cfg)?.point,
                },
                Method::Penalty => {
                    let x0 = vec![0.0; f.dim()];
                    find_minimizer_penalty(first, a_star, &x0, &cfg.penalty, cfg.region_tol_at(a_star))?
                        .point
                        .into()
                }
            };
            Ok((pamin::instance::vector_json(&point), true))
        }
        Command::Convert { file, to, cap } => {
            let f = load(&file)?;
            let g = match (to, f.combinator()) {
                (Target::Maxmin, Combinator::MinMax) => f.minmax_to_maxmin(cap)?,
                (Target::Minmax, Combinator::MaxMin) => f.maxmin_to_minmax(cap)?,
                _ => f,
            };
            Ok((serialize_instance(&g, None), true))
        }
        Command::Oracle { file, bounds, steps } => {
            let f = load_minmax(&file)?;
            let b = numbers(&bounds)?;
            let [lo, hi] = b[..] else {
                return Err(Failure::Input("--box expects LO,HI".into()));
            };
            let bx = SearchBox::cube(f.dim(), lo, hi)?;
            let report = minimizer_set(&f, &cfg)?;
            match certify(&f, &report, &bx, steps, &cfg)? {
                Verdict::Pass => Ok(("pass".into(), true)),
                Verdict::Fail(why) => Ok((format!("fail: {why}"), false)),
            }
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(cli.command)) {
        Ok((text, positive)) => {
            println!("{text}");
            ExitCode::from(if positive { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
