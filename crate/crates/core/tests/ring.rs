use num_complex::Complex64;
use proptest::prelude::*;
use quadlat::ring::{quantize, FieldMorphism, RingElem, RingKind, RingSpec};

fn square_free_upto(n: i64) -> Vec<RingSpec> {
    (1..=n).filter_map(|d| RingSpec::new(d).ok()).collect()
}

/// Distance from `x` to the nearest ring element, by exhaustive search.
fn brute_distance(r: &RingSpec, x: Complex64) -> f64 {
    let s = r.sqrt_d();
    let bmax = (x.im.abs() / s * 2.0).ceil() as i64 + 3;
    let amax = x.re.abs().ceil() as i64 + bmax + 3;
    let mut best = f64::INFINITY;
    for b in -bmax..=bmax {
        for a in -amax..=amax {
            best = best.min((x - r.embed(RingElem::new(a, b))).norm());
        }
    }
    best
}

/// Norm-Euclidean test on a dense grid: every point of the fundamental cell
/// must lie strictly within distance 1 of the ring.
#[test]
fn euclidean_flag_matches_grid_test() {
    for r in square_free_upto(15) {
        let (one, xi) = (Complex64::new(1.0, 0.0), r.xi());
        let steps = 60;
        let mut worst: f64 = 0.0;
        for i in 0..=steps {
            for j in 0..=steps {
                let p = one * (i as f64 / steps as f64) + xi * (j as f64 / steps as f64);
                let dq = (p - r.embed(quantize(p, &r).unwrap())).norm();
                let db = brute_distance(&r, p);
                assert!((dq - db).abs() < 1e-12, "{r}: quantizer is not nearest at {p}");
                worst = worst.max(db);
            }
        }
        assert!(worst <= r.covering_radius() + 1e-12, "{r}");
        assert_eq!(worst < 1.0, r.is_euclidean(), "{r}: grid max {worst}");
    }
}

#[test]
fn kinds_and_constants() {
    let cases = [
        (1, RingKind::TypeI, 1.0, true),
        (2, RingKind::TypeI, 2f64.sqrt(), true),
        (3, RingKind::TypeII, 3f64.sqrt() / 2.0, true),
        (5, RingKind::TypeI, 5f64.sqrt(), false),
        (7, RingKind::TypeII, 7f64.sqrt() / 2.0, true),
        (11, RingKind::TypeII, 11f64.sqrt() / 2.0, true),
        (19, RingKind::TypeII, 19f64.sqrt() / 2.0, false),
    ];
    for (d, kind, det, euclid) in cases {
        let r = RingSpec::new(d).unwrap();
        assert_eq!(r.kind(), kind);
        assert!((r.det_phi() - det).abs() < 1e-15);
        assert_eq!(r.is_euclidean(), euclid);
    }
    assert!(RingSpec::new(0).is_err());
    assert!(RingSpec::new(12).is_err());
    assert_eq!("eisenstein".parse::<RingSpec>().unwrap(), RingSpec::new(3).unwrap());
    assert_eq!("d=7".parse::<RingSpec>().unwrap().to_string(), "d=7");
    assert!("d=x".parse::<RingSpec>().is_err());
}

#[test]
fn unit_groups() {
    for (d, count) in [(1, 4), (3, 6), (2, 2), (7, 2), (15, 2)] {
        let r = RingSpec::new(d).unwrap();
        assert_eq!(r.units().len(), count);
        assert_eq!(r.unit_count(), count);
    }
}

fn ring_strategy() -> impl Strategy<Value = RingSpec> {
    prop::sample::select(vec![1i64, 2, 3, 5, 6, 7, 11, 15, 19, 23]).prop_map(|d| RingSpec::new(d).unwrap())
}

fn elem() -> impl Strategy<Value = RingElem> {
    (-1000i64..1000, -1000i64..1000).prop_map(|(a, b)| RingElem::new(a, b))
}

proptest! {
    #[test]
    fn norm_is_multiplicative_and_matches_modulus(r in ring_strategy(), x in elem(), y in elem()) {
        let xy = r.mul(x, y).unwrap();
        prop_assert_eq!(r.norm(xy), r.norm(x) * r.norm(y));
        let z = r.embed(x);
        prop_assert!((z.norm_sqr() - r.norm(x) as f64).abs() <= 1e-9 * (1.0 + z.norm_sqr()));
    }

    #[test]
    fn embedding_is_a_ring_homomorphism(r in ring_strategy(), x in elem(), y in elem()) {
        let prod = r.embed(r.mul(x, y).unwrap());
        let want = r.embed(x) * r.embed(y);
        prop_assert!((prod - want).norm() <= 1e-9 * (1.0 + want.norm()));
        let conj = r.embed(r.conj(x).unwrap());
        prop_assert!((conj - r.embed(x).conj()).norm() <= 1e-9 * (1.0 + conj.norm()));
    }

    #[test]
    fn canonical_associate_is_unique(r in ring_strategy(), x in elem()) {
        prop_assume!(!x.is_zero());
        let (c, u) = r.canonical_associate(x).unwrap();
        prop_assert!(r.in_unit_sector(c));
        prop_assert!(r.is_unit(u));
        let in_sector = r.units().into_iter().filter(|&v| r.in_unit_sector(r.mul(v, x).unwrap())).count();
        prop_assert_eq!(in_sector, 1);
    }

    #[test]
    fn quantizer_error_is_within_covering_radius(r in ring_strategy(), re in -50.0f64..50.0, im in -50.0f64..50.0) {
        let x = Complex64::new(re, im);
        let q = quantize(x, &r).unwrap();
        prop_assert!((x - r.embed(q)).norm() <= r.covering_radius() + 1e-12);
    }

    #[test]
    fn gaussian_morphism_respects_ring_operations(x in elem(), y in elem()) {
        let r = RingSpec::gaussian();
        let f = FieldMorphism::new(r, RingElem::new(2, 1)).unwrap();
        let p = f.p;
        prop_assert_eq!(f.apply(r.mul(x, y).unwrap()), f.apply(x) * f.apply(y) % p);
        prop_assert_eq!(f.apply(x.checked_add(y).unwrap()), (f.apply(x) + f.apply(y)) % p);
    }
}

#[test]
fn morphisms_kill_their_modulus() {
    for (d, m, p) in [(1, (2, 1), 5), (3, (2, 1), 7), (2, (1, 1), 3), (7, (1, 2), 11)] {
        let r = RingSpec::new(d).unwrap();
        let f = FieldMorphism::new(r, RingElem::new(m.0, m.1)).unwrap();
        assert_eq!(f.p, p);
        assert_eq!(f.apply(RingElem::new(m.0, m.1)), 0);
        assert_eq!(f.apply(RingElem::one()), 1);
        for u in r.units() {
            assert_ne!(f.apply(u), 0, "{r}: unit {u} maps to zero");
        }
    }
    assert_eq!(FieldMorphism::new(RingSpec::gaussian(), RingElem::new(1, 1)).unwrap().p, 2);
    assert!(FieldMorphism::new(RingSpec::gaussian(), RingElem::new(3, 0)).is_err());
}
