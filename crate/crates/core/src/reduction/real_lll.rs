use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{qr_positive_real, RMatrix};

const MAX_ITERATIONS: usize = 200_000;
const REFACTOR_EVERY: usize = 100;

/// Output of classic LLL on a real basis.
#[derive(Clone, Debug, Serialize)]
pub struct RealLllResult {
    #[serde(skip)]
    pub basis: RMatrix,
    /// Integer transform `T` with `basis = input·T`, row-major.
    pub transform: Vec<Vec<i64>>,
    pub squared_norms: Vec<f64>,
    pub swaps: usize,
    pub size_reductions: usize,
    pub lovasz_passes: usize,
}

impl RealLllResult {
    pub fn transform_matrix(&self) -> DMatrix<i64> {
        let m = self.transform.len();
        DMatrix::from_fn(m, m, |i, j| self.transform[i][j])
    }

    pub fn transform_column(&self, j: usize) -> Vec<i64> {
        self.transform.iter().map(|row| row[j]).collect()
    }
}

/// LLL over `Z` on the columns of `g`, using Givens rotations for QR upkeep.
pub fn real_lll(g: &RMatrix, delta: f64) -> Result<RealLllResult> {
    if !(delta > 0.25 && delta <= 1.0) {
        return Err(Error::InvalidDelta { delta, low: 0.25 });
    }
    let m = g.ncols();
    if g.nrows() != m || m == 0 {
        return Err(Error::Dimension(format!("real LLL needs a square basis, got {}×{}", g.nrows(), m)));
    }
    let (_, mut r) = qr_positive_real(g);
    if (0..m).any(|j| r[(j, j)].abs() <= 1e-12 * g.norm()) {
        return Err(Error::DependentBasis(f64::INFINITY));
    }
    let mut t = DMatrix::<i64>::identity(m, m);
    let (mut swaps, mut size_reductions, mut lovasz_passes) = (0, 0, 0);
    let mut iterations = 0;
    let mut j = 1;
    while j < m {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::IterationCap(MAX_ITERATIONS));
        }
        for k in (0..j).rev() {
            let c = (r[(k, j)] / r[(k, k)]).round();
            if c != 0.0 {
                if c.abs() > 9.0e15 {
                    return Err(Error::Overflow);
                }
                for i in 0..=k {
                    r[(i, j)] -= c * r[(i, k)];
                }
                let ci = c as i64;
                for i in 0..m {
                    let v = t[(i, k)].checked_mul(ci).and_then(|x| t[(i, j)].checked_sub(x));
                    t[(i, j)] = v.ok_or(Error::Overflow)?;
                }
                size_reductions += 1;
            }
        }
        let a = r[(j - 1, j)];
        let b = r[(j, j)];
        if delta * r[(j - 1, j - 1)].powi(2) > a * a + b * b {
            r.swap_columns(j - 1, j);
            t.swap_columns(j - 1, j);
            let s = a.hypot(b);
            let (cs, sn) = (a / s, b / s);
            for c in 0..m {
                let (x, y) = (r[(j - 1, c)], r[(j, c)]);
                r[(j - 1, c)] = cs * x + sn * y;
                r[(j, c)] = -sn * x + cs * y;
            }
            r[(j, j - 1)] = 0.0;
            if r[(j, j)] < 0.0 {
                for c in j..m {
                    r[(j, c)] = -r[(j, c)];
                }
            }
            swaps += 1;
            if swaps % REFACTOR_EVERY == 0 {
                r = qr_positive_real(&(g * t.map(|x| x as f64))).1;
            }
            j = (j - 1).max(1);
        } else {
            lovasz_passes += 1;
            j += 1;
        }
    }
    let basis = g * t.map(|x| x as f64);
    Ok(RealLllResult {
        squared_norms: (0..m).map(|j| basis.column(j).norm_squared()).collect(),
        transform: (0..m).map(|i| (0..m).map(|j| t[(i, j)]).collect()).collect(),
        basis,
        swaps,
        size_reductions,
        lovasz_passes,
    })
}

/// Exact determinant of a small integer matrix (Bareiss).
pub(crate) fn integer_det(t: &DMatrix<i64>) -> i128 {
    let n = t.nrows();
    let mut m: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| t[(i, j)] as i128).collect()).collect();
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..n.saturating_sub(1) {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}
