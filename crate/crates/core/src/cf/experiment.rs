use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{design_relay, transmission_rate, Channel, RelayDesign, Strategy};
use crate::error::{Error, Result};
use crate::lattice::ComplexBasis;
use crate::reduction::DEFAULT_DELTA;
use crate::ring::{FieldMorphism, RingElem, RingSpec};
use crate::rng::{complex_gaussian_matrix, complex_gaussian_vec, db_to_linear, trial_rng};
use crate::svp::shortest_vector;

const STREAM_DOF: u64 = 1;
const STREAM_RANK: u64 = 2;
const STREAM_HERMITE: u64 = 3;
const STREAM_CF: u64 = 4;

/// `h ~ CN(0, I)` at power `P` (linear).
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Result<Channel> {
    Channel::new(complex_gaussian_vec(rng, n), p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DofFit {
    pub slope: f64,
    pub intercept: f64,
    /// Mean best-equation rate at each grid point.
    pub mean_rates: Vec<f64>,
}

/// Least-squares slope of the mean best computation rate against `log₂(1+P)`.
///
/// Every grid point reuses the same `channels` channel draws.
pub fn dof_slope(
    ring: RingSpec,
    n: usize,
    strategy: Strategy,
    snr_db: &[f64],
    channels: usize,
    seed: u64,
    delta: f64,
) -> Result<DofFit> {
    if snr_db.len() < 2 || channels == 0 || n == 0 {
        return Err(Error::InvalidArgument("need at least two SNR points, one channel and n ≥ 1".into()));
    }
    let hs: Vec<Vec<_>> =
        (0..channels as u64).map(|c| complex_gaussian_vec(&mut trial_rng(seed, STREAM_DOF, c), n)).collect();
    let mut mean_rates = Vec::with_capacity(snr_db.len());
    for &db in snr_db {
        let mut sum = 0.0;
        for h in &hs {
            let ch = Channel::from_db(h.clone(), db)?;
            sum += design_relay(&ch, ring, strategy, delta)?.best_rate();
        }
        mean_rates.push(sum / channels as f64);
    }
    let xs: Vec<f64> = snr_db.iter().map(|&db| (1.0 + db_to_linear(db)).log2()).collect();
    let (slope, intercept) = least_squares(&xs, &mean_rates);
    Ok(DofFit { slope, intercept, mean_rates })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankFailure {
    pub p_ring: f64,
    pub p_field: f64,
    pub trials: usize,
}

/// Outcome of one `n`-relay network for rank statistics.
struct NetworkOutcome {
    ring_fail: bool,
    field_fail: bool,
}

fn network_outcome(designs: &[RelayDesign], morphism: &FieldMorphism) -> Result<NetworkOutcome> {
    match transmission_rate(designs, Some(morphism)) {
        Ok(net) => Ok(NetworkOutcome { ring_fail: !net.ring_full_rank, field_fail: net.field_full_rank != Some(true) }),
        Err(Error::RankDeficient(_)) => {
            let mut ring_fail = true;
            for d in designs {
                if let Some(m) = &d.matrix {
                    ring_fail &= m.is_singular()?;
                }
            }
            Ok(NetworkOutcome { ring_fail, field_fail: true })
        }
        Err(e) => Err(e),
    }
}

#[allow(clippy::too_many_arguments)]
fn relay_designs(
    seed: u64,
    stream: u64,
    trial: u64,
    relays: usize,
    n: usize,
    p: f64,
    ring: RingSpec,
    strategy: Strategy,
    delta: f64,
) -> Result<Vec<RelayDesign>> {
    let mut rng = trial_rng(seed, stream, trial);
    let channels: Vec<Channel> = (0..relays).map(|_| random_channel(&mut rng, n, p)).collect::<Result<_>>()?;
    channels.iter().map(|ch| design_relay(ch, ring, strategy, delta)).collect()
}

/// Fraction of `n`-relay networks whose final matrix is singular over the
/// ring and over `F_p`.
#[allow(clippy::too_many_arguments)]
pub fn rank_failure_probability(
    ring: RingSpec,
    morphism: &FieldMorphism,
    n: usize,
    snr_db: f64,
    trials: usize,
    strategy: Strategy,
    seed: u64,
    delta: f64,
) -> Result<RankFailure> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if morphism.ring != ring {
        return Err(Error::RingMismatch(format!("morphism is defined on {}, experiment on {ring}", morphism.ring)));
    }
    let p = db_to_linear(snr_db);
    let (mut ring_fails, mut field_fails) = (0usize, 0usize);
    for t in 0..trials as u64 {
        let designs = relay_designs(seed, STREAM_RANK, t, n, n, p, ring, strategy, delta)?;
        let out = network_outcome(&designs, morphism)?;
        ring_fails += out.ring_fail as usize;
        field_fails += out.field_fail as usize;
    }
    Ok(RankFailure { p_ring: ring_fails as f64 / trials as f64, p_field: field_fails as f64 / trials as f64, trials })
}

/// Sorted Hermite factors `λ₁²/Vol^{1/n}` of random `CN(0,1)` bases.
pub fn hermite_factors(ring: RingSpec, n: usize, trials: usize, seed: u64) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(trials);
    for t in 0..trials as u64 {
        let m = complex_gaussian_matrix(&mut trial_rng(seed, STREAM_HERMITE, t), n);
        let b = ComplexBasis::new(ring, m)?;
        let sv = shortest_vector(&b)?;
        out.push(b.hermite_factor(sv.norm));
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

/// A rate/complexity/failure sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ring: RingSpec,
    pub n: usize,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub strategies: Vec<Strategy>,
    pub seed: u64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Relays per trial; defaults to `n`. Failure columns need `relays = n`.
    #[serde(default)]
    pub relays: Option<usize>,
    /// Modulus of the field morphism; defaults per ring where one exists.
    #[serde(default)]
    pub modulus: Option<RingElem>,
    /// Adds a wall-clock column, which breaks byte-identical output.
    #[serde(default)]
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub strategy: Strategy,
    pub snr_db: f64,
    pub trials: usize,
    pub mean_rate: f64,
    pub std_rate: f64,
    pub mean_swaps: f64,
    pub mean_b1_norm_sq: f64,
    pub p_fail_ring: Option<f64>,
    pub p_fail_field: Option<f64>,
    pub mean_runtime_us: Option<f64>,
}

/// Runs the sweep. Rows are ordered by strategy, then SNR; every cell uses
/// the same channel draws per trial index.
pub fn run_cf_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    if cfg.n == 0 || cfg.trials == 0 || cfg.snr_db.is_empty() || cfg.strategies.is_empty() {
        return Err(Error::InvalidArgument("n, trials, snr_db and strategies must be non-empty".into()));
    }
    let relays = cfg.relays.unwrap_or(cfg.n);
    if relays == 0 {
        return Err(Error::InvalidArgument("relays must be at least 1".into()));
    }
    let morphism = match cfg.modulus {
        Some(m) => Some(FieldMorphism::new(cfg.ring, m)?),
        None => FieldMorphism::default_for(cfg.ring).ok(),
    };
    let failures = relays == cfg.n;

    let mut rows = Vec::new();
    for &strategy in &cfg.strategies {
        for &db in &cfg.snr_db {
            let p = db_to_linear(db);
            let mut rates = Vec::with_capacity(cfg.trials);
            let (mut swaps, mut b1, mut runtime) = (0.0, 0.0, 0.0);
            let (mut ring_fails, mut field_fails) = (0usize, 0usize);
            for t in 0..cfg.trials as u64 {
                let start = Instant::now();
                let designs = relay_designs(cfg.seed, STREAM_CF, t, relays, cfg.n, p, cfg.ring, strategy, cfg.delta)?;
                runtime += start.elapsed().as_secs_f64() * 1e6 / relays as f64;
                rates.push(designs[0].best_rate());
                swaps += designs[0].swaps as f64;
                b1 += designs[0].first_norm_sq;
                if failures {
                    match &morphism {
                        Some(f) => {
                            let out = network_outcome(&designs, f)?;
                            ring_fails += out.ring_fail as usize;
                            field_fails += out.field_fail as usize;
                        }
                        None => {
                            let net = transmission_rate(&designs, None)?;
                            ring_fails += !net.ring_full_rank as usize;
                        }
                    }
                }
            }
            let k = cfg.trials as f64;
            let mean = rates.iter().sum::<f64>() / k;
            let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / k;
            rows.push(ExperimentRow {
                strategy,
                snr_db: db,
                trials: cfg.trials,
                mean_rate: mean,
                std_rate: var.sqrt(),
                mean_swaps: swaps / k,
                mean_b1_norm_sq: b1 / k,
                p_fail_ring: failures.then(|| ring_fails as f64 / k),
                p_fail_field: (failures && morphism.is_some()).then(|| field_fails as f64 / k),
                mean_runtime_us: cfg.timing.then(|| runtime / k),
            });
        }
    }
    Ok(rows)
}

/// CSV with a header row; empty cells where a column does not apply.
pub fn rows_to_csv(rows: &[ExperimentRow], timing: bool) -> String {
    let mut out =
        String::from("strategy,snr_db,trials,mean_rate,std_rate,mean_swaps,mean_b1_norm_sq,p_fail_ring,p_fail_field");
    if timing {
        out.push_str(",mean_runtime_us");
    }
    out.push('\n');
    let opt = |x: Option<f64>| x.map(|v| format!("{v}")).unwrap_or_default();
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.strategy,
            r.snr_db,
            r.trials,
            r.mean_rate,
            r.std_rate,
            r.mean_swaps,
            r.mean_b1_norm_sq,
            opt(r.p_fail_ring),
            opt(r.p_fail_field)
        );
        if timing {
            let _ = write!(out, ",{}", opt(r.mean_runtime_us));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(strategies: Vec<Strategy>) -> ExperimentConfig {
        ExperimentConfig {
            ring: RingSpec::gaussian(),
            n: 2,
            snr_db: vec![10.0, 20.0],
            trials: 30,
            strategies,
            seed: 5,
            delta: 0.99,
            relays: None,
            modulus: None,
            timing: false,
        }
    }

    #[test]
    fn csv_is_deterministic() {
        let cfg = config(Strategy::ALL.to_vec());
        let a = rows_to_csv(&run_cf_experiment(&cfg).unwrap(), false);
        let b = rows_to_csv(&run_cf_experiment(&cfg).unwrap(), false);
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 1 + 4 * 2);
    }

    #[test]
    fn unimodular_rows_never_fail() {
        let rows = run_cf_experiment(&config(vec![Strategy::Alll])).unwrap();
        for r in rows {
            assert_eq!(r.p_fail_ring, Some(0.0));
            assert_eq!(r.p_fail_field, Some(0.0));
        }
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = config(vec![Strategy::Svp, Strategy::RealLll]);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&json).unwrap(), cfg);
        let minimal = r#"{"ring":"gaussian","n":2,"snr_db":[0],"trials":1,"strategies":["alll"],"seed":1}"#;
        assert_eq!(serde_json::from_str::<ExperimentConfig>(minimal).unwrap().delta, 0.99);
    }

    #[test]
    fn single_user_slope_is_one() {
        let grid: Vec<f64> = (1..=6).map(|k| 10.0 * k as f64).collect();
        let fit = dof_slope(RingSpec::gaussian(), 1, Strategy::Alll, &grid, 50, 3, 0.99).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.05, "{}", fit.slope);
    }

    #[test]
    fn zero_trials_rejected() {
        let r = RingSpec::gaussian();
        let f = FieldMorphism::default_for(r).unwrap();
        assert!(rank_failure_probability(r, &f, 2, 25.0, 0, Strategy::BestSingle, 1, 0.99).is_err());
        assert!(hermite_factors(r, 2, 0, 1).is_err());
    }

    #[test]
    fn hermite_factors_are_sorted_and_bounded() {
        let hs = hermite_factors(RingSpec::gaussian(), 2, 200, 8).unwrap();
        assert!(hs.windows(2).all(|w| w[0] <= w[1]));
        assert!(*hs.last().unwrap() <= 2f64.sqrt() + 1e-9);
    }
}
