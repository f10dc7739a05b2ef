use num_complex::Complex64;

use super::{RingElem, RingKind, RingSpec};
use crate::error::{Error, Result};

/// Nearest ring element to `x`.
///
/// Type I rings have an orthogonal generator, so rounding each coordinate
/// suffices. A type II ring is the rectangular lattice `Z[√−d]` together with
/// its coset shifted by `(1 + √−d)/2`; the nearer of the two roundings wins.
/// Exact ties go to the lexicographically smaller `(a, b)`.
pub fn quantize(x: Complex64, ring: &RingSpec) -> Result<RingElem> {
    if !x.re.is_finite() || !x.im.is_finite() {
        return Err(Error::NonFinite(format!("{x}")));
    }
    let s = ring.sqrt_d();
    match ring.kind() {
        RingKind::TypeI => Ok(RingElem::new(round_half_down(x.re)?, round_half_down(x.im / s)?)),
        RingKind::TypeII => {
            // u + v√−d  <->  a = u − v, b = 2v
            let u = round_half_down(x.re)?;
            let v = round_half_down(x.im / s)?;
            let rect =
                RingElem::new(u.checked_sub(v).ok_or(Error::Overflow)?, v.checked_mul(2).ok_or(Error::Overflow)?);
            // u + v√−d + (1 + √−d)/2  <->  a = u − v, b = 2v + 1
            let y = x - Complex64::new(0.5, s / 2.0);
            let u = round_half_down(y.re)?;
            let v = round_half_down(y.im / s)?;
            let coset = RingElem::new(
                u.checked_sub(v).ok_or(Error::Overflow)?,
                v.checked_mul(2).and_then(|t| t.checked_add(1)).ok_or(Error::Overflow)?,
            );
            let dr = (x - ring.embed(rect)).norm_sqr();
            let dc = (x - ring.embed(coset)).norm_sqr();
            Ok(if dr < dc || (dr == dc && rect < coset) { rect } else { coset })
        }
    }
}

/// Rounds to the nearest integer, resolving halves downward.
fn round_half_down(t: f64) -> Result<i64> {
    let r = (t - 0.5).ceil();
    if r.abs() >= 4.0e18 {
        return Err(Error::Overflow);
    }
    Ok(r as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive nearest-point search over a box around `center`.
    fn brute_nearest(x: Complex64, ring: &RingSpec, center: RingElem, radius: i64) -> RingElem {
        let mut best = (f64::INFINITY, RingElem::zero());
        for a in center.a - radius..=center.a + radius {
            for b in center.b - radius..=center.b + radius {
                let q = RingElem::new(a, b);
                let dist = (x - ring.embed(q)).norm_sqr();
                if dist < best.0 || (dist == best.0 && q < best.1) {
                    best = (dist, q);
                }
            }
        }
        best.1
    }

    fn supported() -> Vec<RingSpec> {
        [1, 2, 3, 5, 7, 11, 15, 19, 39].iter().map(|&d| RingSpec::new(d).unwrap()).collect()
    }

    #[test]
    fn worked_examples_match_brute_force() {
        let r2 = RingSpec::new(2).unwrap();
        let x = Complex64::new(0.4, 1.0);
        assert_eq!(brute_nearest(x, &r2, RingElem::zero(), 3), RingElem::new(0, 1));
        assert_eq!(quantize(x, &r2).unwrap(), RingElem::new(0, 1));

        let r3 = RingSpec::eisenstein();
        let x = Complex64::new(0.6, 0.8);
        assert_eq!(brute_nearest(x, &r3, RingElem::zero(), 3), RingElem::new(0, 1));
        assert_eq!(quantize(x, &r3).unwrap(), RingElem::new(0, 1));

        for r in supported() {
            assert_eq!(quantize(Complex64::new(0.0, 0.0), &r).unwrap(), RingElem::zero());
        }
    }

    #[test]
    fn rejects_non_finite() {
        let r = RingSpec::gaussian();
        assert!(matches!(quantize(Complex64::new(f64::NAN, 0.0), &r), Err(Error::NonFinite(_))));
        assert!(matches!(quantize(Complex64::new(0.0, f64::INFINITY), &r), Err(Error::NonFinite(_))));
    }

    #[test]
    fn ties_prefer_lexicographically_smaller() {
        let r = RingSpec::gaussian();
        assert_eq!(quantize(Complex64::new(0.5, 0.0), &r).unwrap(), RingElem::new(0, 0));
        assert_eq!(quantize(Complex64::new(-0.5, 0.5), &r).unwrap(), RingElem::new(-1, 0));
        assert_eq!(quantize(Complex64::new(1.5, -2.5), &r).unwrap(), RingElem::new(1, -3));
    }

    #[test]
    fn optimal_against_neighbourhood() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in supported() {
            for _ in 0..10_000 {
                let x = loop {
                    let z = Complex64::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
                    if z.norm() <= 10.0 {
                        break z;
                    }
                };
                let q = quantize(x, &r).unwrap();
                let dq = (x - r.embed(q)).norm_sqr();
                for a in -3..=3 {
                    for b in -3..=3 {
                        let c = RingElem::new(q.a + a, q.b + b);
                        assert!(dq <= (x - r.embed(c)).norm_sqr() + 1e-12, "d={} x={x}", r.d());
                    }
                }
            }
        }
    }

    #[test]
    fn residues_satisfy_fundamental_region_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for r in supported() {
            let s = r.sqrt_d();
            for _ in 0..20_000 {
                let x = Complex64::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
                let res = x - r.embed(quantize(x, &r).unwrap());
                assert!(res.re.abs() <= 0.5 + 1e-12);
                match r.kind() {
                    RingKind::TypeI => assert!(res.im.abs() <= s / 2.0 + 1e-12),
                    RingKind::TypeII => {
                        let bound = (-res.re.abs() + (1.0 + r.d() as f64) / 4.0) / s;
                        assert!(res.im.abs() <= bound + 1e-12, "d={} res={res}", r.d());
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_residue_approaches_covering_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for r in supported() {
            let rho = r.covering_radius();
            let mut worst = 0.0f64;
            for _ in 0..100_000 {
                let x = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
                let res = (x - r.embed(quantize(x, &r).unwrap())).norm();
                worst = worst.max(res);
            }
            assert!(worst <= rho + 1e-9, "d={} worst={worst} rho={rho}", r.d());
            assert!(worst >= 0.99 * rho, "d={} worst={worst} rho={rho}", r.d());
        }
    }
}
