//! Shortest vectors and the first two successive minima by depth-first
//! enumeration on the embedded real lattice.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{qr_positive_real, ComplexBasis, RMatrix, RingMatrix};
use crate::reduction::{alll_reduce, DEFAULT_DELTA};
use crate::ring::{RingElem, RingSpec};

pub const MAX_DIMENSION: usize = 8;
pub const NODE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SvpResult {
    pub coefficient: Vec<RingElem>,
    pub norm: f64,
    pub enumerated_nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuccessiveMinima {
    pub lambda1: f64,
    pub lambda2: f64,
    pub v1: SvpResult,
    pub v2: SvpResult,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SvpOptions {
    /// Restrict the leading nonzero coordinate to one unit sector.
    pub unit_pruning: bool,
    pub node_budget: u64,
}

impl Default for SvpOptions {
    fn default() -> Self {
        SvpOptions { unit_pruning: true, node_budget: NODE_BUDGET }
    }
}

pub fn shortest_vector(b: &ComplexBasis) -> Result<SvpResult> {
    shortest_vector_with(b, SvpOptions::default())
}

pub fn shortest_vector_with(b: &ComplexBasis, opts: SvpOptions) -> Result<SvpResult> {
    let pre = Prepared::new(b)?;
    let radius_sq = pre.min_column_norm_sq() * (1.0 + 1e-10);
    let (y, nodes) = pre.enumerate(radius_sq, opts, None)?;
    pre.finish(b, &y, nodes)
}

/// `λ₁` and `λ₂` of a 2-D lattice, with witnesses independent over the ring.
pub fn successive_minima_2d(b: &ComplexBasis) -> Result<SuccessiveMinima> {
    if b.n() != 2 {
        return Err(Error::Dimension(format!("successive_minima_2d needs n = 2, got {}", b.n())));
    }
    let opts = SvpOptions::default();
    let pre = Prepared::new(b)?;
    let (y1, nodes1) = pre.enumerate(pre.min_column_norm_sq() * (1.0 + 1e-10), opts, None)?;
    let v1 = pre.finish(b, &y1, nodes1)?;
    let radius_sq = pre.max_column_norm_sq() * (1.0 + 1e-10);
    let (y2, nodes2) = pre.enumerate(radius_sq, opts, Some(&y1))?;
    let v2 = pre.finish(b, &y2, nodes2)?;
    Ok(SuccessiveMinima { lambda1: v1.norm, lambda2: v2.norm, v1, v2 })
}

/// Reduced basis, its transform and the triangular factor of the embedding.
struct Prepared {
    ring: RingSpec,
    n: usize,
    /// `B·U`, the reduced complex basis.
    reduced: ComplexBasis,
    u: RingMatrix,
    /// Upper-triangular factor of the interleaved real generator matrix.
    r: RMatrix,
}

impl Prepared {
    fn new(b: &ComplexBasis) -> Result<Self> {
        let n = b.n();
        if n > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge { n, max: MAX_DIMENSION });
        }
        let ring = b.ring();
        let rep = alll_reduce(b, DEFAULT_DELTA)?;
        let u = rep.transform.clone().into_inner();
        let reduced = rep.reduced_basis;
        // interleave so that coordinates (a_k, b_k) of one ring entry are adjacent
        let g = reduced.embed();
        let gi = RMatrix::from_fn(2 * n, 2 * n, |i, j| g[(i, if j % 2 == 0 { j / 2 } else { n + j / 2 })]);
        let (_, r) = qr_positive_real(&gi);
        Ok(Prepared { ring, n, reduced, u, r })
    }

    fn min_column_norm_sq(&self) -> f64 {
        self.reduced.column_norms().iter().map(|x| x * x).fold(f64::INFINITY, f64::min)
    }

    fn max_column_norm_sq(&self) -> f64 {
        self.reduced.column_norms().iter().map(|x| x * x).fold(0.0, f64::max)
    }

    fn to_ring(&self, y: &[i64]) -> Vec<RingElem> {
        (0..self.n).map(|k| RingElem::new(y[2 * k], y[2 * k + 1])).collect()
    }

    fn finish(&self, b: &ComplexBasis, y: &[i64], nodes: u64) -> Result<SvpResult> {
        let x = self.u.mul_vec(&self.to_ring(y))?;
        let x = canonicalize(self.ring, x)?;
        let v: Vec<Complex64> = b.apply(&x);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Ok(SvpResult { coefficient: x, norm, enumerated_nodes: nodes })
    }

    /// Depth-first Schnorr–Euchner enumeration. With `independent_of`, only
    /// leaves whose ring vector is independent of that one are accepted.
    fn enumerate(&self, radius_sq: f64, opts: SvpOptions, independent_of: Option<&[i64]>) -> Result<(Vec<i64>, u64)> {
        let m = 2 * self.n;
        let mut search = Search {
            r: &self.r,
            m,
            ring: self.ring,
            opts,
            radius_sq,
            best: None,
            nodes: 0,
            y: vec![0; m],
            other: independent_of.map(|v| self.to_ring(v)),
        };
        search.descend(m, 0.0)?;
        match search.best {
            Some(y) => Ok((y, search.nodes)),
            None => Err(Error::InvalidArgument("enumeration found no vector inside the initial radius".into())),
        }
    }
}

struct Search<'a> {
    r: &'a RMatrix,
    m: usize,
    ring: RingSpec,
    opts: SvpOptions,
    radius_sq: f64,
    best: Option<Vec<i64>>,
    nodes: u64,
    y: Vec<i64>,
    other: Option<Vec<RingElem>>,
}

impl Search<'_> {
    /// Fixes coordinate `level − 1` given coordinates `level..m` and their partial norm.
    fn descend(&mut self, level: usize, partial: f64) -> Result<()> {
        if level == 0 {
            self.leaf(partial);
            return Ok(());
        }
        let i = level - 1;
        let rii = self.r[(i, i)];
        let s: f64 = (level..self.m).map(|k| self.r[(i, k)] * self.y[k] as f64).sum();
        let center = -s / rii;
        let reach = ((self.radius_sq - partial).max(0.0)).sqrt() / rii.abs();
        let (lo, hi) = self.coordinate_range(i);
        let lo = lo.max((center - reach).ceil() as i64);
        let hi = hi.min((center + reach).floor() as i64);

        // zigzag outward from the center on both sides
        let mut up = lo.max(center.ceil() as i64);
        let mut down = hi.min(center.ceil() as i64 - 1);
        loop {
            let up_ok = up <= hi;
            let down_ok = down >= lo;
            let x = match (up_ok, down_ok) {
                (false, false) => break,
                (true, false) => up,
                (false, true) => down,
                (true, true) if up as f64 - center <= center - down as f64 => up,
                _ => down,
            };
            let t = rii * (x as f64 - center);
            let p = partial + t * t;
            let going_up = x == up;
            if going_up {
                up += 1;
            } else {
                down -= 1;
            }
            if p > self.radius_sq {
                // farther candidates on this side are worse still
                if going_up {
                    up = hi + 1;
                } else {
                    down = lo - 1;
                }
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.opts.node_budget {
                return Err(Error::BudgetExceeded { budget: self.opts.node_budget, best_radius_sq: self.radius_sq });
            }
            self.y[i] = x;
            self.descend(i, p)?;
        }
        self.y[i] = 0;
        Ok(())
    }

    /// Admissible values for coordinate `i`. When every ring entry above the
    /// current one is zero, the current entry may be the leading nonzero one
    /// and is restricted to the canonical unit sector.
    fn coordinate_range(&self, i: usize) -> (i64, i64) {
        const FREE: (i64, i64) = (i64::MIN / 4, i64::MAX / 4);
        if !self.opts.unit_pruning {
            return FREE;
        }
        let k = i / 2;
        if self.y[2 * k + 2..].iter().any(|&v| v != 0) {
            return FREE;
        }
        if i % 2 == 1 {
            return (0, FREE.1);
        }
        let b = self.y[i + 1];
        match (b, k, self.ring.unit_count()) {
            // the last entry standing must be nonzero
            (0, 0, _) => (1, FREE.1),
            // a zero entry hands leadership to the ones below
            (0, _, _) => (0, FREE.1),
            (_, _, 4 | 6) => (1, FREE.1),
            _ => FREE,
        }
    }

    fn leaf(&mut self, norm_sq: f64) {
        if self.y.iter().all(|&v| v == 0) {
            return;
        }
        if let Some(other) = &self.other {
            let x: Vec<RingElem> = (0..self.m / 2).map(|k| RingElem::new(self.y[2 * k], self.y[2 * k + 1])).collect();
            if !independent(self.ring, other, &x) {
                return;
            }
        }
        if self.best.is_none() || norm_sq < self.radius_sq {
            self.radius_sq = norm_sq;
            self.best = Some(self.y.clone());
        }
    }
}

/// `x₁[0]·x₂[1] − x₁[1]·x₂[0] ≠ 0`, exactly.
fn independent(ring: RingSpec, x1: &[RingElem], x2: &[RingElem]) -> bool {
    ring.mul_wide(x1[0], x2[1]) != ring.mul_wide(x1[1], x2[0])
}

/// Multiplies `x` by the unit that puts its first nonzero entry in the canonical sector.
fn canonicalize(ring: RingSpec, x: Vec<RingElem>) -> Result<Vec<RingElem>> {
    let Some(lead) = x.iter().find(|e| !e.is_zero()) else {
        return Ok(x);
    };
    let (_, u) = ring.canonical_associate(*lead)?;
    x.into_iter().map(|e| ring.mul(u, e)).collect()
}
