use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use super::bounds::{log_potential, structural_checks};
use super::{validate_delta, Algorithm, ReductionReport};
use crate::error::{Error, Result};
use crate::lattice::{qr_positive, CMatrix, ComplexBasis, RingMatrix, UnimodularMatrix};
use crate::ring::{quantize, RingElem, RingSpec};

/// Swaps between full re-factorizations of `B·U`.
const REFACTOR_EVERY: usize = 100;
/// Consecutive swaps without potential decrease tolerated before giving up.
const MAX_STALLS: usize = 3;
const MAX_ITERATIONS: usize = 1_000_000;

/// The unitary `M` with `M·[a; b] = [√(|a|²+|b|²); 0]`.
pub fn quaternion_rotation(a: Complex64, b: Complex64) -> Result<[[Complex64; 2]; 2]> {
    let s = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if s == 0.0 || !s.is_finite() {
        return Err(Error::ZeroVector("in rotation"));
    }
    Ok([[a.conj() / s, b.conj() / s], [-b / s, a / s]])
}

/// `B·U = Q·R` maintained under column operations.
#[derive(Clone, Debug)]
pub struct QrState {
    ring: RingSpec,
    b: CMatrix,
    pub q: CMatrix,
    pub r: CMatrix,
    pub u: RingMatrix,
}

impl QrState {
    pub fn new(b: &ComplexBasis) -> Self {
        let (q, r) = qr_positive(b.matrix());
        QrState { ring: b.ring(), b: b.matrix().clone(), q, r, u: RingMatrix::identity(b.ring(), b.n()) }
    }

    pub fn n(&self) -> usize {
        self.r.nrows()
    }

    pub fn refactorize(&mut self) {
        let (q, r) = qr_positive(&(&self.b * self.u.to_complex()));
        self.q = q;
        self.r = r;
    }

    /// `‖QR − BU‖_F / ‖B‖_F`.
    pub fn residual(&self) -> f64 {
        (&self.q * &self.r - &self.b * self.u.to_complex()).norm() / self.b.norm()
    }

    /// Size-reduces column `j` against column `k < j`. Returns the multiplier used.
    fn size_reduce(&mut self, j: usize, k: usize) -> Result<RingElem> {
        let mu = self.r[(k, j)] / self.r[(k, k)];
        let c = quantize(mu, &self.ring)?;
        if !c.is_zero() {
            let cz = self.ring.embed(c);
            for i in 0..=k {
                let t = self.r[(i, k)];
                self.r[(i, j)] -= cz * t;
            }
            self.u.sub_column_multiple(j, k, c)?;
        }
        Ok(c)
    }

    /// Swaps columns `j−1, j` and restores triangularity with a rotation on rows `j−1, j`.
    fn swap(&mut self, j: usize) -> Result<()> {
        let n = self.n();
        self.r.swap_columns(j - 1, j);
        self.u.swap_columns(j - 1, j);
        let m = quaternion_rotation(self.r[(j - 1, j - 1)], self.r[(j, j - 1)])?;
        for c in 0..n {
            let (x, y) = (self.r[(j - 1, c)], self.r[(j, c)]);
            self.r[(j - 1, c)] = m[0][0] * x + m[0][1] * y;
            self.r[(j, c)] = m[1][0] * x + m[1][1] * y;
        }
        self.r[(j, j - 1)] = Complex64::new(0.0, 0.0);
        // Q ← Q·M†
        for i in 0..n {
            let (x, y) = (self.q[(i, j - 1)], self.q[(i, j)]);
            self.q[(i, j - 1)] = x * m[0][0].conj() + y * m[0][1].conj();
            self.q[(i, j)] = x * m[1][0].conj() + y * m[1][1].conj();
        }
        for t in [j - 1, j] {
            self.normalize_phase(t);
        }
        Ok(())
    }

    fn normalize_phase(&mut self, t: usize) {
        let d = self.r[(t, t)];
        let mag = d.norm();
        if mag == 0.0 {
            return;
        }
        let phase = d / mag;
        for c in t..self.n() {
            self.r[(t, c)] *= phase.conj();
        }
        self.r[(t, t)] = Complex64::new(mag, 0.0);
        for i in 0..self.n() {
            self.q[(i, t)] *= phase;
        }
    }
}

/// Algebraic LLL with Lovász parameter `delta`.
pub fn alll_reduce(basis: &ComplexBasis, delta: f64) -> Result<ReductionReport> {
    let start = Instant::now();
    let ring = basis.ring();
    let warning = validate_delta(ring, delta)?;
    let n = basis.n();
    let mut st = QrState::new(basis);
    let log_potential_initial = log_potential(&st.r);

    let (mut swaps, mut size_reductions, mut lovasz_passes) = (0, 0, 0);
    let mut potential_ratios = Vec::new();
    let mut stalls = 0;
    let mut stalled = false;
    let mut iterations = 0;
    let mut j = 1;
    while j < n {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::IterationCap(MAX_ITERATIONS));
        }
        for k in (0..j).rev() {
            if !st.size_reduce(j, k)?.is_zero() {
                size_reductions += 1;
            }
        }
        let a = st.r[(j - 1, j)];
        let rjj = st.r[(j, j)];
        let rprev = st.r[(j - 1, j - 1)];
        if delta * rprev.norm_sqr() > rjj.norm_sqr() + a.norm_sqr() {
            let before = log_potential(&st.r);
            st.swap(j)?;
            swaps += 1;
            let after = log_potential(&st.r);
            potential_ratios.push((after - before).exp());
            if after >= before {
                stalls += 1;
                if stalls >= MAX_STALLS {
                    stalled = true;
                    break;
                }
            } else {
                stalls = 0;
            }
            if swaps % REFACTOR_EVERY == 0 {
                st.refactorize();
            }
            j = (j - 1).max(1);
        } else {
            lovasz_passes += 1;
            j += 1;
        }
    }

    st.refactorize();
    let reduced = basis.transform(&st.u)?;
    let transform = UnimodularMatrix::try_from(st.u.clone())
        .map_err(|_| Error::InvalidArgument("reduction produced a non-unimodular transform".into()))?;
    let mut warnings: Vec<String> = warning.into_iter().collect();
    if stalled {
        warnings.push("stopped after repeated swaps without potential decrease".into());
    }
    Ok(ReductionReport {
        algorithm: Algorithm::Alll,
        ring,
        delta,
        squared_norms: reduced.column_norms().iter().map(|x| x * x).collect(),
        bound_checks: structural_checks(&st.r, ring, delta),
        reduced_basis: reduced,
        transform,
        swaps,
        size_reductions,
        lovasz_passes,
        log_potential_initial,
        log_potential_final: log_potential(&st.r),
        potential_ratios,
        trace: Vec::new(),
        non_euclidean: !ring.is_euclidean(),
        stalled,
        warnings,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Result of re-checking a reduced basis from a fresh factorization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlllCheck {
    pub size_reduced: bool,
    pub lovasz: bool,
    pub siegel: bool,
    pub unimodular: bool,
    /// `‖BU − B̃‖_F / ‖B‖_F`
    pub transform_residual: f64,
}

impl AlllCheck {
    pub fn ok(&self) -> bool {
        self.size_reduced && self.lovasz && self.siegel && self.unimodular && self.transform_residual <= 1e-8
    }
}

/// Verifies the size-reduction and Lovász conditions on `original·transform`
/// from scratch, independent of any incremental state.
pub fn check_alll_reduced(original: &ComplexBasis, report: &ReductionReport) -> Result<AlllCheck> {
    const TOL: f64 = 1e-9;
    let ring = original.ring();
    let bu = original.matrix() * report.transform.to_complex();
    let transform_residual = (&bu - report.reduced_basis.matrix()).norm() / original.matrix().norm();
    let (_, r) = qr_positive(&bu);
    let n = r.nrows();
    let delta = report.delta;

    let mut size_reduced = true;
    for j in 1..n {
        for k in 0..j {
            let mu = r[(k, j)] / r[(k, k)];
            let q = ring.embed(quantize(mu, &ring)?);
            // 0 must be (up to rounding) a nearest ring element to μ
            if mu.norm() > (mu - q).norm() + TOL {
                size_reduced = false;
            }
        }
    }
    let mut lovasz = true;
    let mut siegel = true;
    for j in 1..n {
        let rp = r[(j - 1, j - 1)].norm_sqr();
        let rj = r[(j, j)].norm_sqr();
        let off = r[(j - 1, j)].norm_sqr();
        if delta * rp > (rj + off) * (1.0 + TOL) {
            lovasz = false;
        }
        if (delta - off / rp) * rp > rj * (1.0 + TOL) + TOL * rp {
            siegel = false;
        }
    }
    Ok(AlllCheck { size_reduced, lovasz, siegel, unimodular: report.transform.is_unimodular(), transform_residual })
}
