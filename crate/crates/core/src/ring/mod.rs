//! Rings of imaginary quadratic integers `Z[ξ]`.
//!
//! For square-free `d > 0` the ring of integers of `Q(√−d)` is `Z[ξ]` with
//! `ξ = √−d` when `−d ≡ 2, 3 (mod 4)` (type I) and `ξ = (1 + √−d)/2` when
//! `−d ≡ 1 (mod 4)` (type II). Elements are stored exactly as integer pairs
//! `(a, b)` meaning `a + bξ`.

mod morphism;
mod quantize;

pub use morphism::{det_mod_p, rank_mod_p, FieldMorphism};
pub use quantize::quantize;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The norm-Euclidean imaginary quadratic rings.
pub const EUCLIDEAN_D: [i64; 5] = [1, 2, 3, 7, 11];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    /// `ξ = √−d`
    TypeI,
    /// `ξ = (1 + √−d)/2`
    TypeII,
}

/// An imaginary quadratic ring `Z[ξ]`, identified by its square-free `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    d: i64,
    kind: RingKind,
}

impl RingSpec {
    /// Builds the ring of integers of `Q(√−d)`. The kind is inferred from `−d mod 4`.
    pub fn new(d: i64) -> Result<Self> {
        if d <= 0 {
            return Err(Error::NonPositiveD(d));
        }
        if let Some(factor) = square_factor(d) {
            return Err(Error::NotSquareFree { d, factor });
        }
        let kind = if (-d).rem_euclid(4) == 1 { RingKind::TypeII } else { RingKind::TypeI };
        Ok(RingSpec { d, kind })
    }

    pub fn gaussian() -> Self {
        RingSpec { d: 1, kind: RingKind::TypeI }
    }

    pub fn eisenstein() -> Self {
        RingSpec { d: 3, kind: RingKind::TypeII }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn sqrt_d(&self) -> f64 {
        (self.d as f64).sqrt()
    }

    /// `(1 + d)/4`, the constant term of ξ's minimal polynomial for type II rings.
    fn type2_c(&self) -> i64 {
        (1 + self.d) / 4
    }

    /// Generator matrix of `Z[ξ]` in `R²`, row-major.
    pub fn phi(&self) -> [[f64; 2]; 2] {
        let s = self.sqrt_d();
        match self.kind {
            RingKind::TypeI => [[1.0, 0.0], [0.0, s]],
            RingKind::TypeII => [[1.0, 0.5], [0.0, s / 2.0]],
        }
    }

    pub fn det_phi(&self) -> f64 {
        match self.kind {
            RingKind::TypeI => self.sqrt_d(),
            RingKind::TypeII => self.sqrt_d() / 2.0,
        }
    }

    /// Largest distance from a point of `C` to the nearest ring element.
    pub fn covering_radius(&self) -> f64 {
        let d = self.d as f64;
        match self.kind {
            RingKind::TypeI => (1.0 + d).sqrt() / 2.0,
            RingKind::TypeII => (d + 1.0) / (4.0 * d.sqrt()),
        }
    }

    pub fn is_euclidean(&self) -> bool {
        EUCLIDEAN_D.contains(&self.d)
    }

    /// ξ as a complex number.
    pub fn xi(&self) -> Complex64 {
        match self.kind {
            RingKind::TypeI => Complex64::new(0.0, self.sqrt_d()),
            RingKind::TypeII => Complex64::new(0.5, self.sqrt_d() / 2.0),
        }
    }

    pub fn embed(&self, x: RingElem) -> Complex64 {
        Complex64::new(x.a as f64, 0.0) + self.xi() * (x.b as f64)
    }

    pub fn norm(&self, x: RingElem) -> i128 {
        let (a, b) = (x.a as i128, x.b as i128);
        match self.kind {
            RingKind::TypeI => a * a + self.d as i128 * b * b,
            RingKind::TypeII => a * a + a * b + self.type2_c() as i128 * b * b,
        }
    }

    pub fn conj(&self, x: RingElem) -> Result<RingElem> {
        match self.kind {
            RingKind::TypeI => Ok(RingElem::new(x.a, x.b.checked_neg().ok_or(Error::Overflow)?)),
            // conj(ξ) = 1 − ξ
            RingKind::TypeII => Ok(RingElem::new(
                x.a.checked_add(x.b).ok_or(Error::Overflow)?,
                x.b.checked_neg().ok_or(Error::Overflow)?,
            )),
        }
    }

    /// Exact product, using `ξ² = −d` (type I) or `ξ² = ξ − (1 + d)/4` (type II).
    pub fn mul(&self, x: RingElem, y: RingElem) -> Result<RingElem> {
        let (a, b) = self.mul_wide(x, y);
        Ok(RingElem::new(narrow(a)?, narrow(b)?))
    }

    /// Product coordinates in 128-bit arithmetic, which cannot overflow.
    pub fn mul_wide(&self, x: RingElem, y: RingElem) -> (i128, i128) {
        let aa = x.a as i128 * y.a as i128;
        let bb = x.b as i128 * y.b as i128;
        let cross = x.a as i128 * y.b as i128 + x.b as i128 * y.a as i128;
        match self.kind {
            RingKind::TypeI => (aa - self.d as i128 * bb, cross),
            RingKind::TypeII => (aa - self.type2_c() as i128 * bb, cross + bb),
        }
    }

    /// The unit group, i.e. all elements of norm one.
    pub fn units(&self) -> Vec<RingElem> {
        let mut out = Vec::new();
        for a in -2..=2 {
            for b in -2..=2 {
                let x = RingElem::new(a, b);
                if self.norm(x) == 1 {
                    out.push(x);
                }
            }
        }
        out
    }

    pub fn unit_count(&self) -> usize {
        match (self.d, self.kind) {
            (1, _) => 4,
            (3, _) => 6,
            _ => 2,
        }
    }

    pub fn is_unit(&self, x: RingElem) -> bool {
        self.norm(x) == 1
    }

    /// Whether `x` lies in the half-open sector `arg x ∈ [0, 2π/|units|)`.
    /// Every nonzero element has exactly one unit multiple in that sector.
    pub fn in_unit_sector(&self, x: RingElem) -> bool {
        match self.unit_count() {
            // sectors spanned by (1, i) and (1, ω) respectively
            4 | 6 => x.a > 0 && x.b >= 0,
            _ => x.b > 0 || (x.b == 0 && x.a > 0),
        }
    }

    /// The unit multiple of `x` lying in the canonical sector, with the unit used.
    pub fn canonical_associate(&self, x: RingElem) -> Result<(RingElem, RingElem)> {
        if x.is_zero() {
            return Ok((x, RingElem::one()));
        }
        for u in self.units() {
            let y = self.mul(u, x)?;
            if self.in_unit_sector(y) {
                return Ok((y, u));
            }
        }
        unreachable!("every nonzero element has an associate in the unit sector")
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}", self.d)
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "gaussian" => return Ok(RingSpec::gaussian()),
            "eisenstein" => return Ok(RingSpec::eisenstein()),
            _ => {}
        }
        let digits = t.strip_prefix("d=").unwrap_or(&t);
        let d: i64 = digits.trim().parse().map_err(|_| Error::RingSyntax(s.to_string()))?;
        RingSpec::new(d)
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `a + bξ` with exact integer coordinates. The ring is carried separately.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElem {
    pub a: i64,
    pub b: i64,
}

impl RingElem {
    pub const fn new(a: i64, b: i64) -> Self {
        RingElem { a, b }
    }

    pub const fn zero() -> Self {
        RingElem { a: 0, b: 0 }
    }

    pub const fn one() -> Self {
        RingElem { a: 1, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn checked_add(self, o: Self) -> Result<Self> {
        Ok(RingElem::new(
            self.a.checked_add(o.a).ok_or(Error::Overflow)?,
            self.b.checked_add(o.b).ok_or(Error::Overflow)?,
        ))
    }

    pub fn checked_sub(self, o: Self) -> Result<Self> {
        Ok(RingElem::new(
            self.a.checked_sub(o.a).ok_or(Error::Overflow)?,
            self.b.checked_sub(o.b).ok_or(Error::Overflow)?,
        ))
    }

    pub fn checked_neg(self) -> Result<Self> {
        Ok(RingElem::new(self.a.checked_neg().ok_or(Error::Overflow)?, self.b.checked_neg().ok_or(Error::Overflow)?))
    }
}

impl From<i64> for RingElem {
    fn from(a: i64) -> Self {
        RingElem::new(a, 0)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}ξ"),
            (a, b) if b < 0 => write!(f, "{a}-{}ξ", -(b as i128)),
            (a, b) => write!(f, "{a}+{b}ξ"),
        }
    }
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

fn square_factor(d: i64) -> Option<i64> {
    let mut k = 2i64;
    while k.saturating_mul(k) <= d {
        if d % (k * k) == 0 {
            return Some(k);
        }
        k += 1;
    }
    None
}
