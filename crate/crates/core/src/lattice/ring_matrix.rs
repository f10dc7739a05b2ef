use std::ops::Deref;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::ring::{FieldMorphism, RingElem, RingKind, RingSpec};

/// A dense matrix over `Z[ξ]`, column-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingMatrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl RingMatrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        RingMatrix { ring, rows, cols, data: vec![RingElem::zero(); rows * cols] }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = RingMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, RingElem::one());
        }
        m
    }

    /// Builds from row-major rows.
    pub fn from_rows(ring: RingSpec, rows: &[Vec<RingElem>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let mut m = RingMatrix::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn from_columns(ring: RingSpec, columns: &[Vec<RingElem>]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, |x| x.len());
        if columns.iter().any(|x| x.len() != r) {
            return Err(Error::Dimension("ragged columns".into()));
        }
        Ok(RingMatrix { ring, rows: r, cols: c, data: columns.concat() })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> RingElem {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RingElem) {
        self.data[j * self.rows + i] = x;
    }

    pub fn column(&self, j: usize) -> &[RingElem] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> Vec<Vec<RingElem>> {
        (0..self.cols).map(|j| self.column(j).to_vec()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<RingElem>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(a * self.rows + i, b * self.rows + i);
        }
    }

    /// `col[j] ← col[j] − c·col[k]`.
    pub fn sub_column_multiple(&mut self, j: usize, k: usize, c: RingElem) -> Result<()> {
        for i in 0..self.rows {
            let t = self.ring.mul(c, self.get(i, k))?;
            let v = self.get(i, j).checked_sub(t)?;
            self.set(i, j, v);
        }
        Ok(())
    }

    /// `col[j] ← u·col[j]`.
    pub fn scale_column(&mut self, j: usize, u: RingElem) -> Result<()> {
        for i in 0..self.rows {
            let v = self.ring.mul(u, self.get(i, j))?;
            self.set(i, j, v);
        }
        Ok(())
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RingMatrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RingElem::zero();
                for k in 0..self.cols {
                    acc = acc.checked_add(self.ring.mul(self.get(i, k), other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[RingElem]) -> Result<Vec<RingElem>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!("vector length {} for {} columns", x.len(), self.cols)));
        }
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .try_fold(RingElem::zero(), |acc, k| acc.checked_add(self.ring.mul(self.get(i, k), x[k])?))
            })
            .collect()
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.ring.embed(self.get(i, j)))
    }

    /// Entrywise image under `f`, row-major.
    pub fn map_mod_p(&self, f: &FieldMorphism) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| f.apply(self.get(i, j))).collect()).collect()
    }

    pub fn rank_mod_p(&self, f: &FieldMorphism) -> usize {
        crate::ring::rank_mod_p(&self.map_mod_p(f), f.p)
    }

    /// Exact determinant, or `Overflow` if it does not fit 64-bit coordinates.
    pub fn det(&self) -> Result<RingElem> {
        let d = self.det_big()?;
        Ok(RingElem::new(d.a.to_i64().ok_or(Error::Overflow)?, d.b.to_i64().ok_or(Error::Overflow)?))
    }

    pub fn is_singular(&self) -> Result<bool> {
        Ok(self.det_big()?.is_zero())
    }

    /// True iff the determinant is a unit, i.e. has norm one.
    pub fn is_unimodular(&self) -> bool {
        match self.det_big() {
            Ok(d) => d.norm(self.ring).is_one(),
            Err(_) => false,
        }
    }

    /// Rank over the fraction field `Q(ξ)`.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigElem>> =
            self.rows().into_iter().map(|r| r.into_iter().map(BigElem::from).collect()).collect();
        let ring = self.ring;
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let piv = m[rank][col].clone();
            for r in rank + 1..rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                for c in 0..cols {
                    // row_r ← piv·row_r − f·row_rank, stays integral
                    m[r][c] = piv.mul(&m[r][c], ring).sub(&f.mul(&m[rank][c], ring));
                }
            }
            rank += 1;
        }
        rank
    }

    fn det_big(&self) -> Result<BigElem> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("determinant of a {}×{} matrix", self.rows, self.cols)));
        }
        let m: Vec<Vec<BigElem>> =
            self.rows().into_iter().map(|r| r.into_iter().map(BigElem::from).collect()).collect();
        if self.rows <= 4 {
            Ok(cofactor_det(&m, self.ring))
        } else {
            Ok(bareiss_det(m, self.ring))
        }
    }
}

/// A ring matrix whose determinant is a unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct UnimodularMatrix(RingMatrix);

impl UnimodularMatrix {
    pub fn identity(ring: RingSpec, n: usize) -> Self {
        UnimodularMatrix(RingMatrix::identity(ring, n))
    }

    pub fn into_inner(self) -> RingMatrix {
        self.0
    }
}

impl TryFrom<RingMatrix> for UnimodularMatrix {
    type Error = Error;

    fn try_from(m: RingMatrix) -> Result<Self> {
        if m.is_unimodular() {
            Ok(UnimodularMatrix(m))
        } else {
            Err(Error::InvalidArgument("matrix is not unimodular over its ring".into()))
        }
    }
}

impl Deref for UnimodularMatrix {
    type Target = RingMatrix;

    fn deref(&self) -> &RingMatrix {
        &self.0
    }
}

/// Arbitrary-precision `a + bξ`, used only inside exact determinant code.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BigElem {
    a: BigInt,
    b: BigInt,
}

impl From<RingElem> for BigElem {
    fn from(x: RingElem) -> Self {
        BigElem { a: x.a.into(), b: x.b.into() }
    }
}

impl BigElem {
    fn zero() -> Self {
        BigElem { a: BigInt::zero(), b: BigInt::zero() }
    }

    fn one() -> Self {
        BigElem { a: BigInt::one(), b: BigInt::zero() }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        BigElem { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    fn sub(&self, o: &Self) -> Self {
        BigElem { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    fn neg(&self) -> Self {
        BigElem { a: -&self.a, b: -&self.b }
    }

    fn mul(&self, o: &Self, ring: RingSpec) -> Self {
        let aa = &self.a * &o.a;
        let bb = &self.b * &o.b;
        let cross = &self.a * &o.b + &self.b * &o.a;
        match ring.kind() {
            RingKind::TypeI => BigElem { a: aa - BigInt::from(ring.d()) * bb, b: cross },
            RingKind::TypeII => {
                let c = BigInt::from((1 + ring.d()) / 4);
                BigElem { a: aa - c * &bb, b: cross + bb }
            }
        }
    }

    fn conj(&self, ring: RingSpec) -> Self {
        match ring.kind() {
            RingKind::TypeI => BigElem { a: self.a.clone(), b: -&self.b },
            RingKind::TypeII => BigElem { a: &self.a + &self.b, b: -&self.b },
        }
    }

    fn norm(&self, ring: RingSpec) -> BigInt {
        self.mul(&self.conj(ring), ring).a
    }

    /// Division known to be exact.
    fn div_exact(&self, o: &Self, ring: RingSpec) -> Self {
        let num = self.mul(&o.conj(ring), ring);
        let n = o.norm(ring);
        debug_assert!((&num.a % &n).is_zero() && (&num.b % &n).is_zero());
        BigElem { a: num.a / &n, b: num.b / n }
    }
}

fn cofactor_det(m: &[Vec<BigElem>], ring: RingSpec) -> BigElem {
    let n = m.len();
    match n {
        0 => BigElem::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1], ring).sub(&m[0][1].mul(&m[1][0], ring)),
        _ => {
            let mut acc = BigElem::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigElem>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&cofactor_det(&minor, ring), ring);
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Fraction-free elimination; every division is exact in an integral domain.
fn bareiss_det(mut m: Vec<Vec<BigElem>>, ring: RingSpec) -> BigElem {
    let n = m.len();
    let mut sign_flip = false;
    let mut prev = BigElem::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigElem::zero();
            };
            m.swap(k, p);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k], ring).sub(&m[i][k].mul(&m[k][j], ring));
                m[i][j] = t.div_exact(&prev, ring);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(a: i64, b: i64) -> RingElem {
        RingElem::new(a, b)
    }

    #[test]
    fn relay_matrices_are_unimodular() {
        let r = RingSpec::gaussian();
        let a1 = RingMatrix::from_rows(r, &[vec![e(2, 2), e(-1, 0)], vec![e(3, 4), e(-2, 0)]]).unwrap();
        let a2 = RingMatrix::from_rows(r, &[vec![e(-1, 1), e(1, 0)], vec![e(-5, 0), e(3, 3)]]).unwrap();
        assert_eq!(a1.det().unwrap(), e(-1, 0));
        assert_eq!(a2.det().unwrap(), e(-1, 0));
        assert!(a1.is_unimodular() && a2.is_unimodular());
        let d = RingMatrix::from_rows(r, &[vec![e(2, 0), e(0, 0)], vec![e(0, 0), e(1, 0)]]).unwrap();
        assert!(!d.is_unimodular());
    }

    /// Random product of elementary column operations and unit scalings.
    fn random_unimodular(ring: RingSpec, n: usize, rng: &mut ChaCha8Rng) -> RingMatrix {
        let mut u = RingMatrix::identity(ring, n);
        let units = ring.units();
        for _ in 0..3 * n {
            let j = rng.gen_range(0..n);
            let k = (j + rng.gen_range(1..n.max(2))) % n;
            if j != k {
                let c = e(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                u.sub_column_multiple(j, k, c).unwrap();
            }
            let unit = units[rng.gen_range(0..units.len())];
            u.scale_column(rng.gen_range(0..n), unit).unwrap();
            if rng.gen_bool(0.3) {
                u.swap_columns(rng.gen_range(0..n), rng.gen_range(0..n));
            }
        }
        u
    }

    #[test]
    fn determinant_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [1, 2, 3, 5, 7] {
            let ring = RingSpec::new(d).unwrap();
            for n in [2, 3, 5, 6] {
                for _ in 0..20 {
                    let u = random_unimodular(ring, n, &mut rng);
                    let v = random_unimodular(ring, n, &mut rng);
                    assert!(u.is_unimodular());
                    let uv = u.mul(&v).unwrap();
                    let lhs = uv.det().unwrap();
                    let rhs = ring.mul(u.det().unwrap(), v.det().unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                    assert!(uv.is_unimodular());
                }
            }
        }
    }

    #[test]
    fn bareiss_agrees_with_cofactor() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for d in [1, 3, 5, 15] {
            let ring = RingSpec::new(d).unwrap();
            for n in 1..=4 {
                for _ in 0..50 {
                    let rows: Vec<Vec<BigElem>> = (0..n)
                        .map(|_| {
                            (0..n).map(|_| BigElem::from(e(rng.gen_range(-5..=5), rng.gen_range(-5..=5)))).collect()
                        })
                        .collect();
                    assert_eq!(cofactor_det(&rows, ring), bareiss_det(rows.clone(), ring));
                }
            }
        }
    }

    #[test]
    fn determinant_matches_floating_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ring = RingSpec::new(7).unwrap();
        for n in [2, 4, 6] {
            let rows: Vec<Vec<RingElem>> =
                (0..n).map(|_| (0..n).map(|_| e(rng.gen_range(-3..=3), rng.gen_range(-3..=3))).collect()).collect();
            let m = RingMatrix::from_rows(ring, &rows).unwrap();
            let exact = ring.embed(m.det().unwrap());
            let float = m.to_complex().determinant();
            assert!((exact - float).norm() <= 1e-9 * exact.norm().max(1.0));
        }
    }

    #[test]
    fn rank_over_fraction_field() {
        let r = RingSpec::gaussian();
        let m = RingMatrix::from_rows(r, &[vec![e(1, 1), e(2, 0)], vec![e(1, -1), e(0, -2)]]).unwrap();
        // (1+i)(1−i) = 2: second column is (1−i)·first
        assert_eq!(m.rank(), 1);
        assert!(m.is_singular().unwrap());
        assert_eq!(RingMatrix::identity(r, 3).rank(), 3);
    }

    #[test]
    fn rank_mod_p_examples() {
        let r = RingSpec::gaussian();
        let f = FieldMorphism::new(r, e(2, 1)).unwrap();
        assert_eq!(RingMatrix::identity(r, 3).rank_mod_p(&f), 3);
        let m = RingMatrix::from_rows(r, &[vec![e(2, 1), e(0, 0)], vec![e(0, 0), e(1, 0)]]).unwrap();
        assert_eq!(m.rank_mod_p(&f), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let u = random_unimodular(r, 3, &mut rng);
            assert_eq!(u.rank_mod_p(&f), 3);
        }
    }
}
