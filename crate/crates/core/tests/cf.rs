use num_complex::Complex64;
use quadlat::cf::{
    cf_basis, computation_rate, design_relay, dof_slope, rank_failure_probability, rank_mod_p, transmission_rate,
    Channel, Strategy,
};
use quadlat::lattice::{hermite_constant, RingMatrix};
use quadlat::reduction::epsilon;
use quadlat::ring::{FieldMorphism, RingElem, RingSpec};
use quadlat::rng::{complex_gaussian_vec, trial_rng};
use quadlat::Error;
use rand::Rng;

fn e(a: i64, b: i64) -> RingElem {
    RingElem::new(a, b)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn example_channels() -> [Vec<Complex64>; 2] {
    [vec![c(-0.4001, 1.0937), c(-0.9278, 1.8151)], vec![c(-0.3779, 0.2307), c(-1.5736, -0.3939)]]
}

/// Direct evaluation: `−log₂(‖a‖² − P|h†a|²/(1 + P‖h‖²))`, floored at zero.
fn direct_rate(h: &[Complex64], p: f64, a: &[Complex64]) -> f64 {
    let aa: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let hh: f64 = h.iter().map(|z| z.norm_sqr()).sum();
    let ha: Complex64 = h.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    (-(aa - p * ha.norm_sqr() / (1.0 + p * hh)).log2()).max(0.0)
}

fn log2_plus(x: f64) -> f64 {
    x.log2().max(0.0)
}

#[test]
fn example_network_matrices() {
    let r = RingSpec::gaussian();
    let f = FieldMorphism::new(r, e(2, 1)).unwrap();
    assert_eq!(f.p, 5);
    let given = [
        RingMatrix::from_rows(r, &[vec![e(2, 2), e(-1, 0)], vec![e(3, 4), e(-2, 0)]]).unwrap(),
        RingMatrix::from_rows(r, &[vec![e(-1, 1), e(1, 0)], vec![e(-5, 0), e(3, 3)]]).unwrap(),
    ];
    for a in &given {
        assert!(a.is_unimodular());
        assert_eq!(rank_mod_p(a, &f), 2);
    }
    let stacked = RingMatrix::from_columns(r, &[given[0].column(0).to_vec(), given[1].column(0).to_vec()]).unwrap();
    assert_eq!(rank_mod_p(&stacked, &f), 1);

    let [h1, _] = example_channels();
    let d = design_relay(&Channel::from_db(h1.clone(), 25.0).unwrap(), r, Strategy::Alll, 0.99).unwrap();
    assert!(d.unimodular);
    let ours = d.matrix.unwrap();
    // the same equations up to units and order
    for j in 0..2 {
        let target: Vec<_> = given[0].column(j).iter().map(|&x| r.embed(x)).collect();
        let found = ours.columns().iter().any(|col| {
            r.units()
                .iter()
                .any(|&u| col.iter().zip(&target).all(|(&x, t)| (r.embed(x) * r.embed(u) - t).norm() < 1e-9))
        });
        assert!(found, "column {j} of the example matrix missing from {ours:?}");
    }
    for eq in &d.equations {
        let a: Vec<_> = eq.a.iter().map(|&x| r.embed(x)).collect();
        assert!((eq.rate - direct_rate(&h1, 10f64.powf(2.5), &a)).abs() < 1e-9);
    }
}

#[test]
fn rate_matches_the_direct_formula() {
    let mut rng = trial_rng(11, 0, 0);
    for &d in &[1, 2, 3, 5, 7] {
        let r = RingSpec::new(d).unwrap();
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let p = 10f64.powf(rng.gen_range(0.0..4.0));
            let h = complex_gaussian_vec(&mut rng, n);
            let mut a: Vec<RingElem> = (0..n).map(|_| e(rng.gen_range(-3..=3), rng.gen_range(-3..=3))).collect();
            if a.iter().all(|x| x.is_zero()) {
                a[0] = e(1, 0);
            }
            let ch = Channel::new(h.clone(), p).unwrap();
            let rate = computation_rate(&ch, &a, r).unwrap();
            let emb: Vec<_> = a.iter().map(|&x| r.embed(x)).collect();
            assert!((rate - direct_rate(&h, p, &emb)).abs() < 1e-8 * (1.0 + rate));
            // the same quantity through the lattice basis
            let b = cf_basis(&ch, r).unwrap();
            let v = b.matrix() * nalgebra::DVector::from_vec(emb);
            assert!((rate - log2_plus(1.0 / v.norm_squared())).abs() < 1e-8 * (1.0 + rate));
        }
    }
}

#[test]
fn rate_input_errors() {
    let r = RingSpec::gaussian();
    let ch = Channel::from_db(vec![c(1.0, 0.0), c(0.0, 1.0)], 10.0).unwrap();
    assert!(matches!(computation_rate(&ch, &[e(1, 0)], r), Err(Error::Dimension(_))));
    assert!(computation_rate(&ch, &[e(0, 0), e(0, 0)], r).is_err());
    assert!(Channel::new(vec![], 1.0).is_err());
    assert!(Channel::new(vec![c(1.0, 0.0)], 0.0).is_err());
    assert!(Channel::new(vec![c(f64::NAN, 0.0)], 1.0).is_err());
}

#[test]
fn rates_respect_the_reduction_guarantees() {
    for &d in &[1, 2, 3, 7] {
        let r = RingSpec::new(d).unwrap();
        let eps = epsilon(r, 0.99).unwrap();
        for n in [1, 2, 4] {
            let gamma = hermite_constant(2 * n).unwrap();
            for t in 0..50 {
                let h = complex_gaussian_vec(&mut trial_rng(12, d as u64, (n * 100 + t) as u64), n);
                let ch = Channel::from_db(h.clone(), 30.0).unwrap();
                let growth = 1.0 + ch.p * h.iter().map(|z| z.norm_sqr()).sum::<f64>();
                let nf = n as f64;
                let svp = design_relay(&ch, r, Strategy::Svp, 0.99).unwrap().best_rate();
                let alll = design_relay(&ch, r, Strategy::Alll, 0.99).unwrap();
                let svp_floor = (growth.log2() / nf - (gamma * r.det_phi()).log2()).max(0.0);
                let alll_floor = (growth.log2() / nf - (nf - 1.0) / 2.0 * (1.0 / eps).log2()).max(0.0);
                assert!(svp >= svp_floor - 1e-9, "{r} n={n}: {svp} < {svp_floor}");
                assert!(alll.best_rate() >= alll_floor - 1e-9, "{r} n={n}");
                assert!(svp >= alll.best_rate() - 1e-9);
            }
        }
    }
}

#[test]
fn rank_modulo_p_examples() {
    let r = RingSpec::gaussian();
    let f = FieldMorphism::new(r, e(2, 1)).unwrap();
    let m = RingMatrix::from_rows(r, &[vec![e(2, 1), e(0, 0)], vec![e(0, 0), e(1, 0)]]).unwrap();
    assert_eq!(rank_mod_p(&m, &f), 1);
    assert_eq!(m.rank(), 2);
    assert_eq!(rank_mod_p(&RingMatrix::identity(r, 3), &f), 3);
}

#[test]
fn unimodular_designs_are_full_rank_everywhere() {
    for (d, modulus) in [(1, e(2, 1)), (3, e(2, 1))] {
        let r = RingSpec::new(d).unwrap();
        let f = FieldMorphism::new(r, modulus).unwrap();
        for t in 0..1000 {
            let n = 2 + (t % 3) as usize;
            let h = complex_gaussian_vec(&mut trial_rng(13, d as u64, t), n);
            let des = design_relay(&Channel::from_db(h, 20.0).unwrap(), r, Strategy::Alll, 0.99).unwrap();
            assert!(des.unimodular);
            let m = des.matrix.unwrap();
            assert_eq!(m.rank(), n);
            assert_eq!(rank_mod_p(&m, &f), n);
        }
    }
}

#[test]
fn failure_probabilities() {
    let r = RingSpec::gaussian();
    let f = FieldMorphism::default_for(r).unwrap();
    let uni = rank_failure_probability(r, &f, 2, 20.0, 500, Strategy::Alll, 5, 0.99).unwrap();
    assert_eq!((uni.p_ring, uni.p_field), (0.0, 0.0));
    let single = rank_failure_probability(r, &f, 2, 20.0, 500, Strategy::BestSingle, 5, 0.99).unwrap();
    assert!(single.p_field > 0.0);
    assert!(single.p_field >= single.p_ring);
    assert!(rank_failure_probability(r, &f, 2, 20.0, 0, Strategy::Alll, 5, 0.99).is_err());
}

#[test]
fn network_rate_is_the_weakest_relay() {
    let r = RingSpec::gaussian();
    let f = FieldMorphism::new(r, e(2, 1)).unwrap();
    let designs: Vec<_> = example_channels()
        .iter()
        .map(|h| design_relay(&Channel::from_db(h.clone(), 25.0).unwrap(), r, Strategy::Alll, 0.99).unwrap())
        .collect();
    let net = transmission_rate(&designs, Some(&f)).unwrap();
    let worst = designs.iter().map(|d| d.worst_rate()).fold(f64::INFINITY, f64::min);
    assert!((net.transmission_rate - worst).abs() < 1e-12);
    assert!(net.unimodular && net.ring_full_rank);
    assert_eq!(net.field_rank, Some(2));

    let one = design_relay(&Channel::from_db(vec![c(0.8, -0.3)], 15.0).unwrap(), r, Strategy::Svp, 0.99).unwrap();
    let net1 = transmission_rate(std::slice::from_ref(&one), Some(&f)).unwrap();
    let p = 10f64.powf(1.5);
    let want = (1.0 + p * 0.73f64).log2();
    assert!((net1.transmission_rate - want).abs() < 1e-9);
}

#[test]
fn svp_degrees_of_freedom_in_dimension_two() {
    let r = RingSpec::gaussian();
    let fit = dof_slope(r, 2, Strategy::Svp, &[20.0, 30.0, 40.0, 50.0], 300, 14, 0.99).unwrap();
    assert!((0.4..=0.6).contains(&fit.slope), "slope {}", fit.slope);
    assert!(fit.mean_rates.windows(2).all(|w| w[1] > w[0]));
}
