use serde::Serialize;

use super::{RingElem, RingKind, RingSpec};
use crate::error::{Error, Result};

/// The quotient map `Z[ξ] → Z[ξ]/(p′) ≅ F_p` for a modulus `p′` of prime norm `p`.
///
/// The map sends `ξ` to a root of its minimal polynomial mod `p`, chosen so
/// that the modulus itself maps to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FieldMorphism {
    pub ring: RingSpec,
    pub modulus: RingElem,
    pub p: u64,
    pub xi_image: u64,
}

impl FieldMorphism {
    pub fn new(ring: RingSpec, modulus: RingElem) -> Result<Self> {
        let norm = ring.norm(modulus);
        let p = u64::try_from(norm).map_err(|_| Error::Overflow)?;
        if !is_prime(p) {
            return Err(Error::CompositeNorm(p));
        }
        let pi = p as i128;
        let d = ring.d() as i128;
        let xi_image = (0..p)
            .find(|&r| {
                let r = r as i128;
                let minpoly = match ring.kind() {
                    RingKind::TypeI => r * r + d,
                    RingKind::TypeII => r * r - r + (1 + d) / 4,
                };
                minpoly.rem_euclid(pi) == 0 && (modulus.a as i128 + modulus.b as i128 * r).rem_euclid(pi) == 0
            })
            .ok_or(Error::NoMorphismRoot { p })?;
        Ok(FieldMorphism { ring, modulus, p, xi_image })
    }

    /// Default modulus per ring: `2+i` for Z[i] (F_5) and `2+ω` for Z[ω] (F_7).
    pub fn default_for(ring: RingSpec) -> Result<Self> {
        match ring.d() {
            1 | 3 => FieldMorphism::new(ring, RingElem::new(2, 1)),
            _ => Err(Error::InvalidArgument(format!("no default modulus for {ring}; supply one explicitly"))),
        }
    }

    pub fn apply(&self, x: RingElem) -> u64 {
        let p = self.p as i128;
        (x.a as i128 + x.b as i128 * self.xi_image as i128).rem_euclid(p) as u64
    }
}

/// Rank of a matrix over `F_p` (rows given as slices of residues).
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..n_rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = inv_mod(m[rank][col], p);
        for x in m[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for r in 0..n_rows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..n_cols {
                    let sub = mul_mod(f, m[rank][c], p);
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant of a square matrix over `F_p`.
pub fn det_mod_p(rows: &[Vec<u64>], p: u64) -> u64 {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            m.swap(col, pivot);
            det = (p - det) % p;
        }
        det = mul_mod(det, m[col][col], p);
        let inv = inv_mod(m[col][col], p);
        for r in col + 1..n {
            let f = mul_mod(m[r][col], inv, p);
            if f == 0 {
                continue;
            }
            for c in col..n {
                let sub = mul_mod(f, m[col][c], p);
                m[r][c] = (m[r][c] + p - sub) % p;
            }
        }
    }
    det
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}
