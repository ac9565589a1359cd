//! Lebesgue and Sobolev norm quadratures.
//!
//! L^p norms use the rectangle rule on the uniform periodic grid, which is
//! spectrally accurate for smooth periodic fields. Sobolev norms are weighted
//! spectral l2 sums with the box measure weight.

use crate::field::{PhysicalField, SpectralField};
use crate::{NvError, Result};

/// Box-measure L^p norm of the modulus of a physical field; `p = inf` is the
/// sup norm (pass `f64::INFINITY`).
pub fn lp_norm(f: &PhysicalField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(NvError::InvalidParameter(format!("p must be >= 1 (got {p})")));
    }
    if p.is_infinite() {
        return Ok(f.sup_norm());
    }
    let cell = f.grid.area() / (f.grid.nx * f.grid.ny) as f64;
    let s: f64 = f.values.iter().map(|z| z.norm().powf(p)).sum();
    Ok((cell * s).powf(1.0 / p))
}

/// `H^s` (inhomogeneous, weight `(1 + xi^2 + mu^2)^{s/2}`) or `H-dot^s`
/// (homogeneous, weight `|(xi, mu)|^s`, defined as 0 at the origin) norm.
///
/// A homogeneous norm with `s < 0` diverges on fields with nonzero mean; that
/// case is reported as an error rather than silently dropping the zero mode.
pub fn sobolev_norm(f: &SpectralField, s: f64, homogeneous: bool) -> Result<f64> {
    if homogeneous && s < 0.0 && f.mean().norm() != 0.0 {
        return Err(NvError::DivergentNorm);
    }
    let g = &f.grid;
    let mut acc = 0.0f64;
    for ix in 0..g.nx {
        for iy in 0..g.ny {
            let z = f.coeffs[[ix, iy]];
            if z.norm_sqr() == 0.0 {
                continue;
            }
            let (xi, mu) = (g.xi(ix), g.mu(iy));
            let r2 = xi * xi + mu * mu;
            let w = if homogeneous {
                if r2 == 0.0 {
                    0.0
                } else {
                    r2.powf(s)
                }
            } else {
                (1.0 + r2).powf(s)
            };
            acc += w * z.norm_sqr();
        }
    }
    Ok((g.area() * acc).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{forward_transform, inverse_transform, PhysicalField};
    use crate::grid::GridSpec;
    use crate::SpectralField;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_lp() {
        let g = GridSpec::new(16, 16, 2.0, 3.0).unwrap();
        let f = PhysicalField::from_fn(g, |_, _| Complex64::new(1.0, 0.0));
        for p in [1.0, 2.0, 4.0] {
            let n = lp_norm(&f, p).unwrap();
            assert!((n - 6.0f64.powf(1.0 / p)).abs() < 1e-12);
        }
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 1.0).abs() < 1e-14);
        assert!(lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn sup_of_cosine() {
        let g = GridSpec::unit(64).unwrap();
        let s = SpectralField::single_mode(g, 1, 0, Complex64::new(1.0, 0.0), true);
        let p = inverse_transform(&s).unwrap();
        let n = lp_norm(&p, f64::INFINITY).unwrap();
        assert!((n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parseval_matches_direct_sum() {
        let g = GridSpec::unit(32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = SpectralField::random_real_band(g, 10.0, false, &mut rng);
        let p = inverse_transform(&s).unwrap();
        let physical = lp_norm(&p, 2.0).unwrap();
        // independent oracle: direct summation of |c|^2
        let direct: f64 = s.coeffs.iter().map(|z| z.norm_sqr()).sum();
        let spectral = (g.area() * direct).sqrt();
        assert!((physical - spectral).abs() / spectral < 1e-12);
        assert!((s.l2_norm() - physical).abs() / physical < 1e-12);
        // and the round trip reproduces the L2 norm too
        let s2 = forward_transform(&p).unwrap();
        assert!((s2.l2_norm() - physical).abs() / physical < 1e-12);
    }

    #[test]
    fn sobolev_weights() {
        let g = GridSpec::unit(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = SpectralField::random_real_band(g, 5.0, false, &mut rng);
        // s = 0 equals the L2 norm
        assert!(
            (sobolev_norm(&f, 0.0, false).unwrap() - f.l2_norm()).abs() / f.l2_norm() < 1e-13
        );
        // single mode at radius 2, homogeneous: a * 2^s up to the measure constant
        let m = SpectralField::single_mode(g, 2, 0, Complex64::new(3.0, 0.0), false);
        let s = 0.7;
        let n = sobolev_norm(&m, s, true).unwrap();
        let expect = 3.0 * 2.0f64.powf(s) * g.area().sqrt();
        assert!((n - expect).abs() / expect < 1e-13);
        // brute-force weighted sum oracle at s = 1
        let mut acc = 0.0;
        for ix in 0..g.nx {
            for iy in 0..g.ny {
                let (xi, mu) = (g.xi(ix), g.mu(iy));
                acc += (1.0 + xi * xi + mu * mu) * f.coeffs[[ix, iy]].norm_sqr();
            }
        }
        let oracle = (g.area() * acc).sqrt();
        let got = sobolev_norm(&f, 1.0, false).unwrap();
        assert!((got - oracle).abs() / oracle < 1e-12);
    }

    #[test]
    fn homogeneous_negative_s_requires_zero_mean() {
        let g = GridSpec::unit(16).unwrap();
        let mut f = SpectralField::zero(g);
        f.coeffs[[0, 0]] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            sobolev_norm(&f, -1.0, true),
            Err(NvError::DivergentNorm)
        ));
        let z = SpectralField::single_mode(g, 1, 0, Complex64::new(1.0, 0.0), true);
        assert!(sobolev_norm(&z, -1.0, true).is_ok());
    }

    #[test]
    fn l2_additive_over_disjoint_supports() {
        let g = GridSpec::unit(16).unwrap();
        let a = SpectralField::single_mode(g, 1, 0, Complex64::new(1.0, 0.0), true);
        let b = SpectralField::single_mode(g, 0, 3, Complex64::new(2.0, 0.0), true);
        let sum = a.add(&b).unwrap();
        let lhs = sum.l2_norm().powi(2);
        let rhs = a.l2_norm().powi(2) + b.l2_norm().powi(2);
        assert!((lhs - rhs).abs() / rhs < 1e-12);
    }
}
