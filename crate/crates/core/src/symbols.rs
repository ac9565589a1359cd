//! The NV-specific Fourier symbols: the dispersion relation, its Hessian
//! determinant, the Wirtinger derivative symbols and the unimodular ratios
//! realizing their inverses, and the resonance function of frequency triples.

use num_complex::Complex64;

/// Dispersion symbol `P(xi, mu) = xi^3/4 - 3 xi mu^2 / 4` of the linear flow
/// `u_hat(t) = exp(i t P) phi_hat`.
#[inline]
pub fn dispersion_symbol(xi: f64, mu: f64) -> f64 {
    0.25 * xi * xi * xi - 0.75 * xi * mu * mu
}

/// Determinant of the Hessian of `P`: `-(9/4)(xi^2 + mu^2)`. Negative away
/// from the origin (a saddle surface), vanishing only at `xi = mu = 0`.
#[inline]
pub fn hessian_det(xi: f64, mu: f64) -> f64 {
    -2.25 * (xi * xi + mu * mu)
}

/// Which Wirtinger derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wirtinger {
    /// `d = (d_x - i d_y)/2`, symbol `(i xi + mu)/2`.
    D,
    /// `dbar = (d_x + i d_y)/2`, symbol `(i xi - mu)/2`.
    DBar,
}

#[inline]
pub fn wirtinger_symbol(which: Wirtinger, xi: f64, mu: f64) -> Complex64 {
    match which {
        Wirtinger::D => Complex64::new(mu, xi) * 0.5,
        Wirtinger::DBar => Complex64::new(-mu, xi) * 0.5,
    }
}

/// Which unimodular ratio operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beurling {
    /// `dbar^{-1} d`, symbol `(i xi + mu)/(i xi - mu)`.
    DBarInvD,
    /// `d^{-1} dbar`, symbol `(i xi - mu)/(i xi + mu)`.
    DInvDBar,
}

/// Symbol of the ratio operators, with the `0/0` at the origin resolved to 0
/// (the outer derivative in the nonlinearity annihilates the mean anyway, so
/// the convention is invisible in the dynamics).
#[inline]
pub fn beurling_symbol(which: Beurling, xi: f64, mu: f64) -> Complex64 {
    if xi == 0.0 && mu == 0.0 {
        return Complex64::default();
    }
    let d = Complex64::new(mu, xi);
    let dbar = Complex64::new(-mu, xi);
    match which {
        Beurling::DBarInvD => d / dbar,
        Beurling::DInvDBar => dbar / d,
    }
}

/// Resonance function of the frequency triple `(xi, mu) = (xi_1, mu_1) +
/// (xi - xi_1, mu - mu_1)`:
///
/// `R = (3/4) xi_1 xi (xi - xi_1) - (3/4) xi_1 (mu - mu_1)^2
///      - (3/4)(xi - xi_1) mu_1^2 - (3/2) xi mu_1 (mu - mu_1)`
///
/// which coincides identically with `P(xi, mu) - P(xi_1, mu_1) -
/// P(xi - xi_1, mu - mu_1)`.
#[inline]
pub fn resonance(xi: f64, xi1: f64, mu: f64, mu1: f64) -> f64 {
    let xi2 = xi - xi1;
    let mu2 = mu - mu1;
    0.75 * xi1 * xi * xi2 - 0.75 * xi1 * mu2 * mu2 - 0.75 * xi2 * mu1 * mu1
        - 1.5 * xi * mu1 * mu2
}

/// Partial derivatives `(dR/dxi_1, dR/dmu_1)` of [`resonance`] in the inner
/// variables. Closed forms:
///
/// `dR/dxi_1 = (3/4)[(xi-xi_1)^2 - xi_1^2 + mu_1^2 - (mu-mu_1)^2]`,
/// `dR/dmu_1 = (3/2)[xi_1 mu_1 - (xi-xi_1)(mu-mu_1)]`.
#[inline]
pub fn resonance_grad(xi: f64, xi1: f64, mu: f64, mu1: f64) -> (f64, f64) {
    let xi2 = xi - xi1;
    let mu2 = mu - mu1;
    let dxi1 = 0.75 * (xi2 * xi2 - xi1 * xi1 + mu1 * mu1 - mu2 * mu2);
    let dmu1 = 1.5 * (xi1 * mu1 - xi2 * mu2);
    (dxi1, dmu1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn dispersion_values() {
        assert_eq!(dispersion_symbol(2.0, 0.0), 2.0);
        assert_eq!(dispersion_symbol(1.0, 1.0), -0.5);
        for mu in [-3.0, 0.0, 1.5, 7.0] {
            assert_eq!(dispersion_symbol(0.0, mu), 0.0);
        }
    }

    #[test]
    fn hessian_det_matches_finite_differences() {
        // central-difference Hessian determinant oracle
        let fd_det = |xi: f64, mu: f64| {
            let h = 1e-4 * (1.0 + xi.abs().max(mu.abs()));
            let p = dispersion_symbol;
            let pxx = (p(xi + h, mu) - 2.0 * p(xi, mu) + p(xi - h, mu)) / (h * h);
            let pmm = (p(xi, mu + h) - 2.0 * p(xi, mu) + p(xi, mu - h)) / (h * h);
            let pxm = (p(xi + h, mu + h) - p(xi + h, mu - h) - p(xi - h, mu + h)
                + p(xi - h, mu - h))
                / (4.0 * h * h);
            pxx * pmm - pxm * pxm
        };
        assert_eq!(hessian_det(0.0, 0.0), 0.0);
        let mut rng = crate::rng::stream(1, 0);
        for _ in 0..1000 {
            let xi = rng.gen_range(-8.0..8.0);
            let mu = rng.gen_range(-8.0..8.0);
            let exact = hessian_det(xi, mu);
            let approx = fd_det(xi, mu);
            let denom = exact.abs().max(1e-6);
            assert!(
                (exact - approx).abs() / denom < 1e-6,
                "hessian mismatch at ({xi}, {mu}): {exact} vs {approx}"
            );
        }
    }

    #[test]
    fn hessian_vanishes_only_at_origin() {
        let mut rng = crate::rng::stream(2, 0);
        for _ in 0..100 {
            let xi: f64 = rng.gen_range(-5.0..5.0);
            let mu: f64 = rng.gen_range(-5.0..5.0);
            if xi != 0.0 || mu != 0.0 {
                assert!(hessian_det(xi, mu) < 0.0);
            }
        }
    }

    #[test]
    fn wirtinger_sum_is_ddx() {
        let mut rng = crate::rng::stream(3, 0);
        for _ in 0..50 {
            let xi = rng.gen_range(-4.0..4.0);
            let mu = rng.gen_range(-4.0..4.0);
            let s = wirtinger_symbol(Wirtinger::D, xi, mu)
                + wirtinger_symbol(Wirtinger::DBar, xi, mu);
            assert!((s - Complex64::new(0.0, xi)).norm() < 1e-14);
        }
    }

    #[test]
    fn beurling_modulus_one_and_special_points() {
        assert!((beurling_symbol(Beurling::DBarInvD, 1.0, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((beurling_symbol(Beurling::DBarInvD, 0.0, 1.0) + Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let mut rng = crate::rng::stream(4, 0);
        for _ in 0..100 {
            let xi: f64 = rng.gen_range(-4.0..4.0);
            let mu: f64 = rng.gen_range(-4.0..4.0);
            if xi == 0.0 && mu == 0.0 {
                continue;
            }
            for b in [Beurling::DBarInvD, Beurling::DInvDBar] {
                assert!((beurling_symbol(b, xi, mu).norm() - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn resonance_point_values() {
        assert!((resonance(2.0, 1.0, 0.0, 0.0) - 1.5).abs() < 1e-15);
        let mut rng = crate::rng::stream(5, 0);
        for _ in 0..100 {
            let xi = rng.gen_range(-4.0..4.0);
            let mu = rng.gen_range(-4.0..4.0);
            assert_eq!(resonance(xi, 0.0, mu, 0.0), 0.0);
        }
    }

    #[test]
    fn resonance_identity_with_dispersion_differences() {
        let mut rng = crate::rng::stream(6, 0);
        for _ in 0..10_000 {
            let xi = rng.gen_range(-16.0..16.0);
            let xi1 = rng.gen_range(-16.0..16.0);
            let mu = rng.gen_range(-16.0..16.0);
            let mu1 = rng.gen_range(-16.0..16.0);
            let r = resonance(xi, xi1, mu, mu1);
            let d = dispersion_symbol(xi, mu)
                - dispersion_symbol(xi1, mu1)
                - dispersion_symbol(xi - xi1, mu - mu1);
            let denom = r.abs().max(1e-9);
            assert!(
                (r.abs() - d.abs()).abs() / denom < 1e-12,
                "|R| mismatch at ({xi},{xi1},{mu},{mu1})"
            );
        }
    }

    #[test]
    fn resonance_grad_matches_finite_differences() {
        let mut rng = crate::rng::stream(7, 0);
        for _ in 0..1000 {
            let xi = rng.gen_range(-8.0..8.0);
            let xi1 = rng.gen_range(-8.0..8.0);
            let mu = rng.gen_range(-8.0..8.0);
            let mu1 = rng.gen_range(-8.0..8.0);
            let h = 1e-5;
            let fd_xi1 = (resonance(xi, xi1 + h, mu, mu1) - resonance(xi, xi1 - h, mu, mu1))
                / (2.0 * h);
            let fd_mu1 = (resonance(xi, xi1, mu, mu1 + h) - resonance(xi, xi1, mu, mu1 - h))
                / (2.0 * h);
            let (gx, gm) = resonance_grad(xi, xi1, mu, mu1);
            let sx = gx.abs().max(1.0);
            let sm = gm.abs().max(1.0);
            assert!((gx - fd_xi1).abs() / sx < 1e-7, "{gx} vs {fd_xi1}");
            assert!((gm - fd_mu1).abs() / sm < 1e-7, "{gm} vs {fd_mu1}");
        }
    }
}
