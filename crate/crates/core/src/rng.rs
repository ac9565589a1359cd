//! Seed derivation and complex Gaussian sampling.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// splitmix64 step, used to derive independent stream seeds from a master
/// seed and a label (trial index, sweep position, ...).
pub fn mix(seed: u64, label: u64) -> u64 {
    let mut z = seed ^ label.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream(seed: u64, label: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, label))
}

/// Standard normal via Box-Muller.
pub fn gaussian(rng: &mut impl Rng) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 1e-300 {
            let v: f64 = rng.gen();
            return (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos();
        }
    }
}

/// Unit-variance complex Gaussian: E|z|^2 = 1.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
}
