//! Algebraic Gauss and LLL reduction over `Z[ξ]`, plus classic LLL on real bases.

mod alll;
mod bounds;
mod gauss;
mod real_lll;

pub use alll::{alll_reduce, check_alll_reduced, quaternion_rotation, AlllCheck, QrState};
pub use bounds::{decoding_radius, epsilon, lambda1_checks, log_potential, potential, structural_checks, BoundCheck};
pub use gauss::{gauss_reduce, gauss_reduce_basis, GaussStep};
pub(crate) use real_lll::integer_det;
pub use real_lll::{real_lll, RealLllResult};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{ComplexBasis, UnimodularMatrix};
use crate::ring::RingSpec;

/// Lovász parameter used when none is given.
pub const DEFAULT_DELTA: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Gauss,
    Alll,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub algorithm: Algorithm,
    pub ring: RingSpec,
    pub delta: f64,
    pub reduced_basis: ComplexBasis,
    pub transform: UnimodularMatrix,
    pub squared_norms: Vec<f64>,
    pub swaps: usize,
    pub size_reductions: usize,
    /// Lovász tests that passed without a swap.
    pub lovasz_passes: usize,
    pub log_potential_initial: f64,
    pub log_potential_final: f64,
    /// `Pot(after)/Pot(before)` for every swap, measured from the factorization.
    pub potential_ratios: Vec<f64>,
    pub bound_checks: Vec<BoundCheck>,
    pub trace: Vec<GaussStep>,
    pub non_euclidean: bool,
    pub stalled: bool,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
}

impl ReductionReport {
    pub fn bounds_hold(&self) -> bool {
        self.bound_checks.iter().all(|c| c.holds)
    }

    /// Adds the checks that need the first successive minimum.
    pub fn add_lambda1_checks(&mut self, lambda1: f64) {
        let r = crate::lattice::qr_positive(self.reduced_basis.matrix()).1;
        self.bound_checks.extend(lambda1_checks(&r, self.ring, self.delta, lambda1));
    }

    pub fn first_norm_sq(&self) -> f64 {
        self.squared_norms[0]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Rejects `δ` outside `(ρ², 1]` on Euclidean rings; on other rings any `δ ∈ (0, 1]`
/// is accepted and a warning returned.
pub fn validate_delta(ring: RingSpec, delta: f64) -> Result<Option<String>> {
    let rho2 = ring.covering_radius().powi(2);
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidDelta { delta, low: if ring.is_euclidean() { rho2 } else { 0.0 } });
    }
    if ring.is_euclidean() {
        if delta <= rho2 {
            return Err(Error::InvalidDelta { delta, low: rho2 });
        }
        Ok(None)
    } else {
        Ok(Some(format!(
            "{ring} is not norm-Euclidean; size reduction cannot guarantee progress and quality bounds are not certified"
        )))
    }
}
