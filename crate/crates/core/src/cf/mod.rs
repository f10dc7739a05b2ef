//! Compute-and-forward: channel lattices, computation rates and coefficient
//! design with full-rank guarantees over a finite field.

mod experiment;

pub use experiment::{
    dof_slope, hermite_factors, random_channel, rank_failure_probability, rows_to_csv, run_cf_experiment, DofFit,
    ExperimentConfig, ExperimentRow, RankFailure,
};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CMatrix, ComplexBasis, RingMatrix};
use crate::reduction::{alll_reduce, real_lll};
use crate::ring::{det_mod_p, FieldMorphism, RingElem, RingSpec};
use crate::svp::shortest_vector;

/// One relay's view: `y = Σ hₗxₗ + z` with power `P` (linear scale).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Channel {
    pub h: Vec<Complex64>,
    pub p: f64,
}

impl Channel {
    pub fn new(h: Vec<Complex64>, p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("power must be positive and finite, got {p}")));
        }
        if h.is_empty() {
            return Err(Error::Dimension("channel vector is empty".into()));
        }
        if let Some(z) = h.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("channel coefficient {z}")));
        }
        Ok(Channel { h, p })
    }

    pub fn from_db(h: Vec<Complex64>, snr_db: f64) -> Result<Self> {
        Channel::new(h, crate::rng::db_to_linear(snr_db))
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }
}

/// A coefficient vector and its computation rate in bits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateResult {
    pub a: Vec<RingElem>,
    pub rate: f64,
}

/// `B` with `B†B = (I + P h h†)⁻¹`, so that `‖B a‖²` is the rate denominator.
///
/// With `I + P h h† = C C†` (Cholesky, i.e. `L D L†` with `C = L D^{1/2}`),
/// `B = C⁻¹ = D^{−1/2} L⁻¹`.
pub fn cf_basis(ch: &Channel, ring: RingSpec) -> Result<ComplexBasis> {
    let n = ch.n();
    let h = CMatrix::from_column_slice(n, 1, &ch.h);
    let m = CMatrix::identity(n, n) + (&h * h.adjoint()) * Complex64::new(ch.p, 0.0);
    let chol = m.cholesky().ok_or_else(|| Error::InvalidArgument("channel matrix is not positive definite".into()))?;
    let c = chol.l();
    let b = c
        .solve_lower_triangular(&CMatrix::identity(n, n))
        .ok_or_else(|| Error::InvalidArgument("singular Cholesky factor".into()))?;
    ComplexBasis::new(ring, b)
}

/// `log₂⁺ 1 / (a† (I + P h h†)⁻¹ a)`, evaluated in closed form.
pub fn computation_rate(ch: &Channel, a: &[RingElem], ring: RingSpec) -> Result<f64> {
    if a.len() != ch.n() {
        return Err(Error::Dimension(format!("coefficient length {} for {} users", a.len(), ch.n())));
    }
    if a.iter().all(|e| e.is_zero()) {
        return Err(Error::ZeroVector("coefficient"));
    }
    let az: Vec<Complex64> = a.iter().map(|&e| ring.embed(e)).collect();
    let a2: f64 = az.iter().map(|z| z.norm_sqr()).sum();
    let h2: f64 = ch.h.iter().map(|z| z.norm_sqr()).sum();
    let ha: Complex64 = ch.h.iter().zip(&az).map(|(h, a)| h.conj() * a).sum();
    // Sherman–Morrison: (I + P h h†)⁻¹ = I − P h h† / (1 + P‖h‖²)
    let q = a2 - ch.p * ha.norm_sqr() / (1.0 + ch.p * h2);
    Ok((-q.log2()).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Algebraic LLL; the full unimodular transform.
    Alll,
    /// Real LLL on the embedded basis, folded back to ring vectors.
    RealLll,
    /// The single shortest vector.
    Svp,
    /// Each relay forwards only its single best equation.
    BestSingle,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Alll, Strategy::RealLll, Strategy::Svp, Strategy::BestSingle];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Alll => "alll",
            Strategy::RealLll => "real-lll",
            Strategy::Svp => "svp",
            Strategy::BestSingle => "best-single",
        }
    }

    /// Whether the relay forwards a full set of `n` equations.
    pub fn full_matrix(self) -> bool {
        matches!(self, Strategy::Alll | Strategy::RealLll)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "alll" => Ok(Strategy::Alll),
            "real-lll" | "reallll" | "rlll" | "lll" => Ok(Strategy::RealLll),
            "svp" => Ok(Strategy::Svp),
            "best-single" | "bestsingle" => Ok(Strategy::BestSingle),
            _ => Err(Error::InvalidArgument(format!(
                "unknown strategy {s:?}; expected alll, real-lll, svp or best-single"
            ))),
        }
    }
}

/// The equations one relay forwards.
#[derive(Clone, Debug, Serialize)]
pub struct RelayDesign {
    pub strategy: Strategy,
    pub ring: RingSpec,
    /// Sorted by descending rate.
    pub equations: Vec<RateResult>,
    /// The equations as columns, when the strategy forwards a full set.
    pub matrix: Option<RingMatrix>,
    pub unimodular: bool,
    pub swaps: usize,
    /// Squared norm of the first vector the reduction returned.
    pub first_norm_sq: f64,
}

impl RelayDesign {
    pub fn best_rate(&self) -> f64 {
        self.equations[0].rate
    }

    /// Rate of the worst forwarded equation.
    pub fn worst_rate(&self) -> f64 {
        self.equations.iter().map(|e| e.rate).fold(f64::INFINITY, f64::min)
    }
}

pub fn design_relay(ch: &Channel, ring: RingSpec, strategy: Strategy, delta: f64) -> Result<RelayDesign> {
    let n = ch.n();
    let b = cf_basis(ch, ring)?;
    let rated = |a: Vec<RingElem>| -> Result<RateResult> {
        let rate = computation_rate(ch, &a, ring)?;
        Ok(RateResult { a, rate })
    };
    match strategy {
        Strategy::Alll => {
            let rep = alll_reduce(&b, delta)?;
            let mut eqs: Vec<RateResult> = rep.transform.columns().into_iter().map(rated).collect::<Result<_>>()?;
            sort_by_rate(&mut eqs);
            let matrix = RingMatrix::from_columns(ring, &eqs.iter().map(|e| e.a.clone()).collect::<Vec<_>>())?;
            Ok(RelayDesign {
                strategy,
                ring,
                equations: eqs,
                unimodular: matrix.is_unimodular(),
                matrix: Some(matrix),
                swaps: rep.swaps,
                first_norm_sq: rep.squared_norms[0],
            })
        }
        Strategy::RealLll => {
            let res = real_lll(&b.embed(), delta)?;
            let mut eqs: Vec<RateResult> = (0..2 * n)
                .map(|j| {
                    let t = res.transform_column(j);
                    rated((0..n).map(|k| RingElem::new(t[k], t[n + k])).collect())
                })
                .collect::<Result<_>>()?;
            sort_by_rate(&mut eqs);
            let mut chosen: Vec<RateResult> = Vec::with_capacity(n);
            for eq in eqs {
                let mut cols: Vec<Vec<RingElem>> = chosen.iter().map(|e| e.a.clone()).collect();
                cols.push(eq.a.clone());
                if RingMatrix::from_columns(ring, &cols)?.rank() == cols.len() {
                    chosen.push(eq);
                    if chosen.len() == n {
                        break;
                    }
                }
            }
            let matrix = RingMatrix::from_columns(ring, &chosen.iter().map(|e| e.a.clone()).collect::<Vec<_>>())?;
            Ok(RelayDesign {
                strategy,
                ring,
                equations: chosen,
                unimodular: matrix.is_unimodular(),
                matrix: Some(matrix),
                swaps: res.swaps,
                first_norm_sq: res.squared_norms[0],
            })
        }
        Strategy::Svp | Strategy::BestSingle => {
            let sv = shortest_vector(&b)?;
            let eq = rated(sv.coefficient)?;
            Ok(RelayDesign {
                strategy,
                ring,
                equations: vec![eq],
                matrix: None,
                unimodular: false,
                swaps: 0,
                first_norm_sq: sv.norm * sv.norm,
            })
        }
    }
}

fn sort_by_rate(eqs: &mut [RateResult]) {
    eqs.sort_by(|x, y| y.rate.total_cmp(&x.rate));
}

/// What the destination ends up decoding.
#[derive(Clone, Debug, Serialize)]
pub struct NetworkDesign {
    pub matrix: RingMatrix,
    /// Relay whose matrix was chosen; `None` when single equations were stacked.
    pub chosen: Option<usize>,
    /// Worst-equation rate of each relay's own matrix.
    pub candidate_rates: Vec<f64>,
    pub chosen_rate: f64,
    /// Minimum over relays.
    pub transmission_rate: f64,
    pub unimodular: bool,
    pub ring_full_rank: bool,
    pub field_rank: Option<usize>,
    pub field_full_rank: Option<bool>,
    /// `f(det A) = det f(A)`.
    pub det_commutes: Option<bool>,
}

/// Combines per-relay designs into the network's coefficient matrix.
///
/// Full-matrix designs: the destination picks the relay matrix with the best
/// worst-equation rate among those invertible over `F_p`. Single-equation
/// designs: the relays' equations are stacked column by column.
pub fn transmission_rate(designs: &[RelayDesign], morphism: Option<&FieldMorphism>) -> Result<NetworkDesign> {
    let Some(first) = designs.first() else {
        return Err(Error::InvalidArgument("no relay designs".into()));
    };
    let n = first.equations[0].a.len();
    let ring = first.ring;
    if designs.iter().any(|d| d.ring != ring || d.equations[0].a.len() != n) || morphism.is_some_and(|f| f.ring != ring)
    {
        return Err(Error::RingMismatch(format!("relay designs disagree on ring or dimension ({ring})")));
    }
    let field_rank = |m: &RingMatrix| morphism.map(|f| m.rank_mod_p(f));

    if designs.iter().all(|d| d.matrix.as_ref().is_some_and(|m| m.ncols() == n)) {
        let candidate_rates: Vec<f64> = designs.iter().map(|d| d.worst_rate()).collect();
        let transmission = candidate_rates.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut order: Vec<usize> = (0..designs.len()).collect();
        order.sort_by(|&a, &b| candidate_rates[b].total_cmp(&candidate_rates[a]));
        let chosen = order
            .into_iter()
            .find(|&j| {
                let m = designs[j].matrix.as_ref().expect("checked above");
                field_rank(m).is_none_or(|r| r == n)
            })
            .ok_or(Error::RankDeficient(morphism.map_or(0, |f| f.p)))?;
        let matrix = designs[chosen].matrix.clone().expect("checked above");
        let fr = field_rank(&matrix);
        return Ok(NetworkDesign {
            unimodular: matrix.is_unimodular(),
            ring_full_rank: !matrix.is_singular()?,
            field_rank: fr,
            field_full_rank: fr.map(|r| r == n),
            det_commutes: morphism.map(|f| det_commutes(&matrix, f)).transpose()?,
            chosen: Some(chosen),
            chosen_rate: candidate_rates[chosen],
            candidate_rates,
            transmission_rate: transmission,
            matrix,
        });
    }

    if designs.len() != n {
        return Err(Error::Dimension(format!("stacking needs {n} relays, got {}", designs.len())));
    }
    let cols: Vec<Vec<RingElem>> = designs.iter().map(|d| d.equations[0].a.clone()).collect();
    let matrix = RingMatrix::from_columns(ring, &cols)?;
    let candidate_rates: Vec<f64> = designs.iter().map(|d| d.best_rate()).collect();
    let transmission = candidate_rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let fr = field_rank(&matrix);
    Ok(NetworkDesign {
        unimodular: matrix.is_unimodular(),
        ring_full_rank: !matrix.is_singular()?,
        field_rank: fr,
        field_full_rank: fr.map(|r| r == n),
        det_commutes: morphism.map(|f| det_commutes(&matrix, f)).transpose()?,
        chosen: None,
        chosen_rate: transmission,
        candidate_rates,
        transmission_rate: transmission,
        matrix,
    })
}

/// Rank of `f(A)` over `F_p`.
pub fn rank_mod_p(a: &RingMatrix, f: &FieldMorphism) -> usize {
    a.rank_mod_p(f)
}

pub fn det_commutes(a: &RingMatrix, f: &FieldMorphism) -> Result<bool> {
    Ok(f.apply(a.det()?) == det_mod_p(&a.map_mod_p(f), f.p))
}
