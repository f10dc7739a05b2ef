//! Seeded randomness for experiments.
//!
//! Every trial gets its own ChaCha8 stream keyed by `(master seed, stream, index)`
//! so results do not depend on execution order.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::lattice::CMatrix;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_rng(master: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
    ChaCha8Rng::seed_from_u64(key)
}

/// Circularly-symmetric `CN(0, 1)`: independent `N(0, ½)` real and imaginary parts.
pub fn complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
    Complex64::new(normal.sample(rng), normal.sample(rng))
}

pub fn complex_gaussian_vec<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn complex_gaussian_matrix<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let v = complex_gaussian_vec(rng, n * n);
    CMatrix::from_vec(n, n, v)
}

/// `10^{dB/10}`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
