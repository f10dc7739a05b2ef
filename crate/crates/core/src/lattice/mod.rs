//! Complex algebraic lattices `Λ(B) = Z[ξ]b₁ + … + Z[ξ]bₙ` and their real images.

mod io;
mod ring_matrix;

pub use io::{read_basis_file, write_basis_file, BasisFile};
pub use ring_matrix::{RingMatrix, UnimodularMatrix};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::RingSpec;

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Bases whose 2-norm condition number exceeds this are treated as dependent.
pub const MAX_CONDITION: f64 = 1e12;

/// Hermite's constant `γ_m` for real dimension `m`, when known exactly.
pub fn hermite_constant(m: usize) -> Option<f64> {
    match m {
        1 => Some(1.0),
        2 => Some(2.0 / 3f64.sqrt()),
        4 => Some(2f64.sqrt()),
        6 => Some((64.0f64 / 3.0).powf(1.0 / 6.0)),
        8 => Some(2.0),
        _ => None,
    }
}

/// Volume of the unit ball in `R^m`.
pub fn unit_ball_volume(m: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_m = 2π/m · V_{m−2}
    let mut v = if m.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if m.is_multiple_of(2) { 2 } else { 3 };
    while k <= m {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v
}

/// An `n×n` complex basis with columns `b₁..bₙ` over a fixed ring.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBasis {
    ring: RingSpec,
    m: CMatrix,
}

impl ComplexBasis {
    pub fn new(ring: RingSpec, m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "basis must be square and non-empty, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if let Some(z) = m.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("basis entry {z}")));
        }
        let cond = condition_number(&m);
        if !(cond <= MAX_CONDITION) {
            return Err(Error::DependentBasis(cond));
        }
        Ok(ComplexBasis { ring, m })
    }

    pub fn from_columns(ring: RingSpec, columns: &[Vec<Complex64>]) -> Result<Self> {
        let n = columns.len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Dimension("every column must have length n".into()));
        }
        ComplexBasis::new(ring, CMatrix::from_fn(n, n, |i, j| columns[j][i]))
    }

    pub fn from_ring_matrix(u: &RingMatrix) -> Result<Self> {
        ComplexBasis::new(u.ring(), u.to_complex())
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        ComplexBasis { ring, m: CMatrix::identity(n, n) }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.m.column(j).iter().copied().collect()
    }

    pub fn column_norms(&self) -> Vec<f64> {
        (0..self.n()).map(|j| self.m.column(j).norm()).collect()
    }

    pub fn det(&self) -> Complex64 {
        self.m.determinant()
    }

    /// `B·U` for a ring matrix `U`.
    pub fn transform(&self, u: &RingMatrix) -> Result<ComplexBasis> {
        if u.ring() != self.ring {
            return Err(Error::RingMismatch(format!("basis over {}, transform over {}", self.ring, u.ring())));
        }
        ComplexBasis::new(self.ring, &self.m * u.to_complex())
    }

    /// Checks that `reduced = B·U` for a unimodular `U`; returns the relative residual.
    pub fn verify_transform(&self, u: &RingMatrix, reduced: &CMatrix) -> Result<f64> {
        if u.ring() != self.ring {
            return Err(Error::RingMismatch(format!("basis over {}, transform over {}", self.ring, u.ring())));
        }
        if !u.is_unimodular() {
            return Err(Error::InvalidArgument("transform is not unimodular".into()));
        }
        let residual = (&self.m * u.to_complex() - reduced).norm() / self.m.norm();
        if !(residual <= 1e-8) {
            return Err(Error::InvalidArgument(format!(
                "reduced basis differs from B·U (relative residual {residual:e})"
            )));
        }
        Ok(residual)
    }

    /// `B·x` for a ring vector `x`.
    pub fn apply(&self, x: &[crate::ring::RingElem]) -> Vec<Complex64> {
        let xc: Vec<Complex64> = x.iter().map(|&e| self.ring.embed(e)).collect();
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.m[(i, j)] * xc[j]).sum()).collect()
    }

    /// The `2n×2n` real generator matrix `G` with `Ψ(Bx) = G·[x_a; x_b]`,
    /// where `Ψ` stacks real parts over imaginary parts.
    pub fn embed(&self) -> RMatrix {
        let n = self.n();
        let xi = self.ring.xi();
        let mut g = RMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            for i in 0..n {
                let z = self.m[(i, j)];
                let w = xi * z;
                g[(i, j)] = z.re;
                g[(n + i, j)] = z.im;
                g[(i, n + j)] = w.re;
                g[(n + i, n + j)] = w.im;
            }
        }
        g
    }

    /// `|det B|² · det(Φ)ⁿ`, the covolume of the embedded lattice.
    pub fn volume(&self) -> f64 {
        self.det().norm_sqr() * self.ring.det_phi().powi(self.n() as i32)
    }

    /// `∏‖bⱼ‖ / (|det B| · det(Φ)ⁿ)`.
    ///
    /// Equals 1 for orthogonal bases over `Z[i]` and is bounded below by `det(Φ)⁻ⁿ`.
    pub fn orthogonality_defect(&self) -> f64 {
        let prod: f64 = self.column_norms().iter().product();
        prod / (self.det().norm() * self.ring.det_phi().powi(self.n() as i32))
    }

    /// `λ₁² / Vol^{1/n}`.
    pub fn hermite_factor(&self, lambda1: f64) -> f64 {
        lambda1 * lambda1 / self.volume().powf(1.0 / self.n() as f64)
    }

    /// Minkowski's first and second theorems for the given minima.
    pub fn minkowski_check(&self, minima: &[f64]) -> MinkowskiReport {
        let n = self.n();
        let Some(gamma) = (n <= 4).then(|| hermite_constant(2 * n)).flatten() else {
            return MinkowskiReport {
                first: None,
                second: None,
                warning: Some(format!("no tabulated Hermite constant for real dimension {}", 2 * n)),
            };
        };
        let det_phi = self.ring.det_phi();
        let det2 = self.det().norm_sqr();
        let first = minima.first().map(|&l1| MinkowskiBound::new(l1 * l1, gamma * det_phi * det2.powf(1.0 / n as f64)));
        let second = (minima.len() == n).then(|| {
            let prod: f64 = minima.iter().map(|l| l * l).product();
            MinkowskiBound::new(prod, gamma.powi(n as i32) * det_phi.powi(n as i32) * det2)
        });
        MinkowskiReport { first, second, warning: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinkowskiBound {
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

impl MinkowskiBound {
    fn new(value: f64, bound: f64) -> Self {
        MinkowskiBound { value, bound, holds: value <= bound * (1.0 + 1e-9) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinkowskiReport {
    pub first: Option<MinkowskiBound>,
    pub second: Option<MinkowskiBound>,
    pub warning: Option<String>,
}

impl MinkowskiReport {
    pub fn holds(&self) -> bool {
        self.first.as_ref().is_none_or(|b| b.holds) && self.second.as_ref().is_none_or(|b| b.holds)
    }
}

/// Ratio of extreme singular values; infinite for singular input.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Householder QR with the diagonal of `R` made real and non-negative.
pub fn qr_positive(m: &CMatrix) -> (CMatrix, CMatrix) {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for j in 0..r.nrows() {
        let d = r[(j, j)];
        let mag = d.norm();
        if mag > 0.0 {
            let phase = d / mag;
            // R ← diag(phase)† R, Q ← Q diag(phase)
            for k in 0..r.ncols() {
                r[(j, k)] = phase.conj() * r[(j, k)];
            }
            r[(j, j)] = Complex64::new(mag, 0.0);
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    (q, r)
}

/// Real Householder QR with a non-negative diagonal.
pub fn qr_positive_real(m: &RMatrix) -> (RMatrix, RMatrix) {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for j in 0..r.nrows() {
        if r[(j, j)] < 0.0 {
            r.row_mut(j).neg_mut();
            q.column_mut(j).neg_mut();
        }
    }
    (q, r)
}
