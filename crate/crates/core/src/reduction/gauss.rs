use std::time::Instant;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::bounds::{log_potential, structural_checks};
use super::{Algorithm, ReductionReport};
use crate::error::{Error, Result};
use crate::lattice::{qr_positive, CMatrix, ComplexBasis, RingMatrix, UnimodularMatrix};
#[cfg(test)]
use crate::ring::RingElem;
use crate::ring::{quantize, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum GaussStep {
    Swap,
    SizeReduction { a: i64, b: i64 },
}

/// Algebraic Gauss reduction of the pair `(b1, b2)`.
///
/// The output is ordered `‖b̃₁‖ ≤ ‖b̃₂‖` and size-reduced. On Euclidean rings
/// the two norms are the successive minima.
pub fn gauss_reduce(b1: &[Complex64], b2: &[Complex64], ring: RingSpec) -> Result<ReductionReport> {
    let start = Instant::now();
    if b1.len() != b2.len() || b1.is_empty() {
        return Err(Error::Dimension("gauss_reduce needs two vectors of equal, nonzero length".into()));
    }
    let m = b1.len();
    let input = CMatrix::from_fn(m, 2, |i, j| if j == 0 { b1[i] } else { b2[i] });
    if m != 2 {
        return Err(Error::Dimension(format!("gauss_reduce works on 2-D bases, got vectors of length {m}")));
    }
    let basis = ComplexBasis::new(ring, input)?;
    let (_, r0) = qr_positive(basis.matrix());
    let log_potential_initial = log_potential(&r0);

    let mut v1 = DVector::from_column_slice(b1);
    let mut v2 = DVector::from_column_slice(b2);
    let mut u = RingMatrix::identity(ring, 2);
    let mut trace = Vec::new();
    let mut size_reductions = 0;

    if v1.norm_squared() > v2.norm_squared() {
        std::mem::swap(&mut v1, &mut v2);
        u.swap_columns(0, 1);
        trace.push(GaussStep::Swap);
    }
    let cap = 64 * 2;
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > cap {
            return Err(Error::IterationCap(cap));
        }
        let mu = v1.dotc(&v2) / v1.norm_squared();
        let c = quantize(mu, &ring)?;
        if !c.is_zero() {
            v2 -= &v1 * ring.embed(c);
            u.sub_column_multiple(1, 0, c)?;
            size_reductions += 1;
            trace.push(GaussStep::SizeReduction { a: c.a, b: c.b });
        }
        if v2.norm_squared() < v1.norm_squared() {
            std::mem::swap(&mut v1, &mut v2);
            u.swap_columns(0, 1);
            trace.push(GaussStep::Swap);
            continue;
        }
        break;
    }

    let reduced = basis.transform(&u)?;
    let (_, r) = qr_positive(reduced.matrix());
    let transform = UnimodularMatrix::try_from(u)
        .map_err(|_| Error::InvalidArgument("reduction produced a non-unimodular transform".into()))?;
    let swaps = trace.iter().filter(|s| matches!(s, GaussStep::Swap)).count();
    let non_euclidean = !ring.is_euclidean();
    let warnings = if non_euclidean {
        vec![format!("{ring} is not norm-Euclidean; the output need not reach the successive minima")]
    } else {
        Vec::new()
    };
    // same condition the ALLL checks use, taken at δ = 1
    let bound_checks = if non_euclidean { Vec::new() } else { structural_checks(&r, ring, 1.0) };
    Ok(ReductionReport {
        algorithm: Algorithm::Gauss,
        ring,
        delta: 1.0,
        squared_norms: reduced.column_norms().iter().map(|x| x * x).collect(),
        reduced_basis: reduced,
        transform,
        swaps,
        size_reductions,
        lovasz_passes: 0,
        log_potential_initial,
        log_potential_final: log_potential(&r),
        potential_ratios: Vec::new(),
        bound_checks,
        trace,
        non_euclidean,
        stalled: false,
        warnings,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Convenience wrapper over the two columns of a 2-D basis.
pub fn gauss_reduce_basis(b: &ComplexBasis) -> Result<ReductionReport> {
    if b.n() != 2 {
        return Err(Error::Dimension(format!("gauss reduction needs n = 2, got {}", b.n())));
    }
    gauss_reduce(&b.column(0), &b.column(1), b.ring())
}
