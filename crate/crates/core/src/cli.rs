//! Command-line front end. `run` returns the process exit code:
//! 0 on success, 2 when a report is written but flags a failed bound or a
//! non-Euclidean ring, 1 on error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::cf::{
    computation_rate, design_relay, hermite_factors, rank_failure_probability, rows_to_csv, run_cf_experiment, Channel,
    ExperimentConfig, Strategy,
};
use crate::error::{Error, Result};
use crate::lattice::{hermite_constant, read_basis_file, ComplexBasis};
use crate::reduction::{
    alll_reduce, check_alll_reduced, gauss_reduce_basis, integer_det, real_lll, RealLllResult, ReductionReport,
    DEFAULT_DELTA,
};
use crate::ring::{FieldMorphism, RingElem, RingSpec};
use crate::rng::db_to_linear;
use crate::svp::{shortest_vector, successive_minima_2d, SuccessiveMinima, SvpResult};

#[derive(Parser, Debug)]
#[command(name = "quadlat", version, about = "Lattice reduction over imaginary quadratic integers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce a basis read from a JSON file.
    Reduce {
        #[arg(long)]
        basis: PathBuf,
        /// Must agree with the file when given.
        #[arg(long)]
        ring: Option<RingSpec>,
        #[arg(long, value_enum, default_value = "alll")]
        algorithm: AlgorithmArg,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact shortest vector (and λ₂ for n = 2).
    Svp {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        ring: Option<RingSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sorted Hermite factors of random bases, as CSV.
    HermiteCdf {
        /// Comma-separated ring list, e.g. `gaussian,eisenstein,d=2`.
        #[arg(long = "ring", value_delimiter = ',', required = true)]
        rings: Vec<RingSpec>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficient design and computation rates for one channel.
    CfRate {
        /// Channel as JSON `[[re, im], ...]`.
        #[arg(long)]
        h: String,
        #[arg(long)]
        snr_db: f64,
        #[arg(long, default_value = "gaussian")]
        ring: RingSpec,
        #[arg(long, default_value = "alll")]
        strategy: Strategy,
        /// Evaluate this coefficient vector `[[a, b], ...]` instead of designing one.
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rate/complexity/failure sweep from a JSON config, as CSV.
    CfExperiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Adds a mean_runtime_us column.
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank-failure probabilities over the ring and over F_p.
    RankFailure {
        #[arg(long, default_value = "gaussian")]
        ring: RingSpec,
        /// Modulus `a,b` for `a + bξ`; defaults per ring.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        modulus: Option<Vec<i64>>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        snr_db: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value = "best-single")]
        strategy: Strategy,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Gauss,
    Alll,
    Rlll,
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Flagged(msg)) => {
            eprintln!("warning: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Flagged(String),
}

pub fn execute(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Reduce { basis, ring, algorithm, delta, out } => {
            let b = read_basis_file(&basis, ring)?;
            cmd_reduce(&b, algorithm, delta, out.as_deref())
        }
        Command::Svp { basis, ring, out } => {
            let b = read_basis_file(&basis, ring)?;
            #[derive(Serialize)]
            struct SvpOut {
                ring: RingSpec,
                shortest: SvpResult,
                norm_sq: f64,
                minima: Option<SuccessiveMinima>,
            }
            let shortest = shortest_vector(&b)?;
            let minima = if b.n() == 2 { Some(successive_minima_2d(&b)?) } else { None };
            let o = SvpOut { ring: b.ring(), norm_sq: shortest.norm * shortest.norm, shortest, minima };
            emit(out.as_deref(), &(serde_json::to_string_pretty(&o)? + "\n"))?;
            Ok(Outcome::Ok)
        }
        Command::HermiteCdf { rings, n, trials, seed, out } => {
            if trials < 100 {
                return Err(Error::InvalidArgument(format!("hermite-cdf needs at least 100 trials, got {trials}")));
            }
            let bound = hermite_constant(2 * n);
            let mut csv = String::from("ring,index,factor,cdf\n");
            let mut exceeded = None;
            for ring in rings {
                let hs = hermite_factors(ring, n, trials, seed)?;
                for (i, h) in hs.iter().enumerate() {
                    let _ = writeln!(csv, "{ring},{i},{h},{}", (i + 1) as f64 / trials as f64);
                }
                if let (Some(g), Some(&max)) = (bound, hs.last()) {
                    if max > g + 1e-9 {
                        exceeded = Some(format!("{ring}: Hermite factor {max} exceeds γ_{} = {g}", 2 * n));
                    }
                }
            }
            emit(out.as_deref(), &csv)?;
            Ok(exceeded.map_or(Outcome::Ok, Outcome::Flagged))
        }
        Command::CfRate { h, snr_db, ring, strategy, a, delta, out } => {
            let h = parse_pairs::<f64>(&h, "--h")?.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
            let ch = Channel::from_db(h, snr_db)?;
            let json = match a {
                Some(a) => {
                    let a: Vec<RingElem> =
                        parse_pairs::<i64>(&a, "--a")?.into_iter().map(|[x, y]| RingElem::new(x, y)).collect();
                    let rate = computation_rate(&ch, &a, ring)?;
                    serde_json::to_string_pretty(&serde_json::json!({
                        "ring": ring, "snr_db": snr_db, "p": ch.p, "a": a, "rate": rate
                    }))?
                }
                None => {
                    let design = design_relay(&ch, ring, strategy, delta)?;
                    serde_json::to_string_pretty(&serde_json::json!({
                        "snr_db": snr_db, "p": ch.p, "design": design
                    }))?
                }
            };
            emit(out.as_deref(), &(json + "\n"))?;
            Ok(Outcome::Ok)
        }
        Command::CfExperiment { config, seed, timing, out } => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cfg.timing |= timing;
            let rows = run_cf_experiment(&cfg)?;
            emit(out.as_deref(), &rows_to_csv(&rows, cfg.timing))?;
            Ok(Outcome::Ok)
        }
        Command::RankFailure { ring, modulus, n, snr_db, trials, strategy, seed, delta, out } => {
            let f = match modulus.as_deref() {
                Some([a, b]) => FieldMorphism::new(ring, RingElem::new(*a, *b))?,
                Some(_) => return Err(Error::InvalidArgument("--modulus takes two integers a,b".into())),
                None => FieldMorphism::default_for(ring)?,
            };
            let res = rank_failure_probability(ring, &f, n, snr_db, trials, strategy, seed, delta)?;
            let json = serde_json::to_string_pretty(&serde_json::json!({
                "ring": ring, "modulus": f.modulus, "p": f.p, "n": n, "snr_db": snr_db,
                "p_linear": db_to_linear(snr_db), "strategy": strategy, "seed": seed, "result": res
            }))?;
            emit(out.as_deref(), &(json + "\n"))?;
            Ok(Outcome::Ok)
        }
    }
}

/// Runs one reduction, re-checks the transform and writes the JSON report.
pub fn cmd_reduce(b: &ComplexBasis, algorithm: AlgorithmArg, delta: f64, out: Option<&Path>) -> Result<Outcome> {
    match algorithm {
        AlgorithmArg::Gauss | AlgorithmArg::Alll => {
            let report: ReductionReport = match algorithm {
                AlgorithmArg::Gauss => gauss_reduce_basis(b)?,
                _ => alll_reduce(b, delta)?,
            };
            b.verify_transform(&report.transform, report.reduced_basis.matrix())?;
            let mut problems = Vec::new();
            if algorithm == AlgorithmArg::Alll {
                let check = check_alll_reduced(b, &report)?;
                if !check.ok() {
                    problems.push(format!("re-factorized output fails the reduction conditions: {check:?}"));
                }
            }
            problems.extend(report.bound_checks.iter().filter(|c| !c.holds).map(|c| format!("bound {} fails", c.name)));
            if report.non_euclidean {
                problems.push(format!("{} is not norm-Euclidean", report.ring));
            }
            emit(out, &(report.to_json()? + "\n"))?;
            Ok(if problems.is_empty() { Outcome::Ok } else { Outcome::Flagged(problems.join("; ")) })
        }
        AlgorithmArg::Rlll => {
            let g = b.embed();
            let res = real_lll(&g, delta)?;
            verify_real(&g, &res)?;
            #[derive(Serialize)]
            struct RealReport<'a> {
                algorithm: &'static str,
                ring: RingSpec,
                delta: f64,
                #[serde(flatten)]
                result: &'a RealLllResult,
            }
            let rep = RealReport { algorithm: "rlll", ring: b.ring(), delta, result: &res };
            emit(out, &(serde_json::to_string_pretty(&rep)? + "\n"))?;
            Ok(Outcome::Ok)
        }
    }
}

fn verify_real(g: &crate::lattice::RMatrix, res: &RealLllResult) -> Result<()> {
    let t = res.transform_matrix();
    if integer_det(&t).abs() != 1 {
        return Err(Error::InvalidArgument("real transform is not unimodular".into()));
    }
    let residual = (g * t.map(|x| x as f64) - &res.basis).norm() / g.norm();
    if !(residual <= 1e-8) {
        return Err(Error::InvalidArgument(format!("real LLL output differs from G·T (residual {residual:e})")));
    }
    Ok(())
}

fn parse_pairs<T: serde::de::DeserializeOwned>(s: &str, flag: &str) -> Result<Vec<[T; 2]>> {
    serde_json::from_str(s).map_err(|e| Error::Format(format!("{flag}: expected [[x, y], ...]: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
