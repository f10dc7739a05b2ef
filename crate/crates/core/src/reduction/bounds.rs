use serde::Serialize;

use crate::lattice::{unit_ball_volume, CMatrix};
use crate::ring::RingSpec;

const REL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
    /// `bound − value` for upper bounds, `value − bound` for lower bounds.
    pub slack: f64,
}

impl BoundCheck {
    fn upper(name: &str, value: f64, bound: f64) -> Self {
        BoundCheck { name: name.into(), value, bound, holds: value <= bound * (1.0 + REL_TOL), slack: bound - value }
    }

    fn lower(name: &str, value: f64, bound: f64) -> Self {
        BoundCheck { name: name.into(), value, bound, holds: value >= bound * (1.0 - REL_TOL), slack: value - bound }
    }
}

/// `δ − ρ²` clamped to `(0, 1]`, or `None` when non-positive.
pub fn epsilon(ring: RingSpec, delta: f64) -> Option<f64> {
    let e = delta - ring.covering_radius().powi(2);
    (e > 0.0).then(|| e.min(1.0))
}

/// `∏ⱼ |R_jj|^{2(n−j+1)}` (1-indexed `j`).
pub fn potential(r: &CMatrix) -> f64 {
    log_potential(r).exp()
}

pub fn log_potential(r: &CMatrix) -> f64 {
    let n = r.nrows();
    (0..n).map(|j| 2.0 * (n - j) as f64 * r[(j, j)].norm().ln()).sum()
}

/// `½ · min_{j ≤ k} |R_jj|`, with `k` 1-indexed.
pub fn decoding_radius(r: &CMatrix, k: usize) -> f64 {
    0.5 * (0..k.min(r.nrows())).map(|j| r[(j, j)].norm()).fold(f64::INFINITY, f64::min)
}

/// Bounds on the first vector and the orthogonality defect that need only
/// the factorization of the reduced basis.
pub fn structural_checks(r: &CMatrix, ring: RingSpec, delta: f64) -> Vec<BoundCheck> {
    let Some(eps) = epsilon(ring, delta) else {
        return Vec::new();
    };
    let n = r.nrows();
    let nf = n as f64;
    let det_b: f64 = (0..n).map(|j| r[(j, j)].norm()).product();
    let b1 = r.column(0).norm();
    let rho2 = ring.covering_radius().powi(2);

    let det_bound = eps.powf(-(nf - 1.0) / 4.0) * det_b.powf(1.0 / nf);

    let norms_prod: f64 = (0..n).map(|j| r.column(j).norm()).product();
    let defect = norms_prod / (det_b * ring.det_phi().powi(n as i32));
    let mut factor = 1.0;
    for j in 0..n {
        let geom: f64 = (1..=j).map(|i| eps.powi(-(i as i32))).sum();
        factor *= (1.0 + rho2 * geom).sqrt();
    }
    let defect_bound = ring.det_phi().powi(-(n as i32)) * factor;

    vec![
        BoundCheck::upper("first_vector_det_bound", b1, det_bound),
        BoundCheck::upper("orthogonality_defect_bound", defect, defect_bound),
    ]
}

/// Bounds relative to the first successive minimum `λ₁`.
pub fn lambda1_checks(r: &CMatrix, ring: RingSpec, delta: f64, lambda1: f64) -> Vec<BoundCheck> {
    let Some(eps) = epsilon(ring, delta) else {
        return Vec::new();
    };
    let n = r.nrows();
    let nf = n as f64;
    let b1 = r.column(0).norm();
    let mut out = vec![BoundCheck::upper("first_vector_lambda1_bound", b1, eps.powf(-(nf - 1.0) / 2.0) * lambda1)];
    if n >= 2 {
        let k = nf;
        let radius_bound = 0.25 * lambda1 * unit_ball_volume(2 * n).powf(1.0 / (2.0 * nf)) / ring.det_phi()
            * eps.powf((k * k - k) / 4.0);
        out.push(BoundCheck::lower("decoding_radius_bound", decoding_radius(r, n), radius_bound));
    }
    out
}
