//! Dyadic frequency cutoffs and Littlewood-Paley projections.
//!
//! The base profile is the compactly supported smooth bump
//! `eta(r) = 1` for `|r| <= 1`, `0` for `|r| >= 2`, glued by
//! `exp(1 - 1/(1 - (|r|-1)^2))` in between. The ring profile
//! `eta(r) - eta(2r)` generates the dyadic family by scaling; the family
//! telescopes to an exact partition of unity.

use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::symbols::dispersion_symbol;
use crate::{NvError, Result};

/// Smooth plateau bump: 1 on `[-1,1]`, supported in `[-2,2]`.
pub fn eta(r: f64) -> f64 {
    let a = r.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        let s = a - 1.0;
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Ring profile `eta(r) - eta(2r)`, supported in `1/2 <= |r| <= 2`.
pub fn ring(r: f64) -> f64 {
    eta(r) - eta(2.0 * r)
}

/// Spatial cutoff `phi_hat_k` evaluated at radius `r = |(xi, mu)|`:
/// the low ball `eta(r)` for `k = 0`, the ring at scale `2^k` for `k >= 1`
/// (support `2^{k-1} <= r <= 2^{k+1}`).
pub fn phi_hat(k: u32, r: f64) -> f64 {
    if k == 0 {
        eta(r)
    } else {
        ring(r / (1u64 << k) as f64)
    }
}

/// Modulation cutoff `psi_hat_l` in the variable `w = tau - P(xi, mu)`, same
/// dyadic family as [`phi_hat`].
pub fn psi_hat(l: u32, w: f64) -> f64 {
    phi_hat(l, w)
}

/// The modulation weight `w = tau - xi^3/4 + 3 xi mu^2/4`.
#[inline]
pub fn modulation_weight(tau: f64, xi: f64, mu: f64) -> f64 {
    tau - dispersion_symbol(xi, mu)
}

/// Dyadic cutoff family realized as multiplier tables on demand.
#[derive(Debug, Clone, Copy, Default)]
pub struct CutoffFamily;

impl CutoffFamily {
    /// Table of `phi_hat_k` on the grid's frequency lattice.
    pub fn phi_table(grid: &GridSpec, k: u32) -> ndarray::Array2<f64> {
        let mut t = ndarray::Array2::zeros((grid.nx, grid.ny));
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                let r = grid.xi(ix).hypot(grid.mu(iy));
                t[[ix, iy]] = phi_hat(k, r);
            }
        }
        t
    }

    /// Largest residual of `sum_k phi_hat_k - 1` over the lattice, for the
    /// family truncated at `k_max`.
    pub fn partition_residual(grid: &GridSpec, k_max: u32) -> f64 {
        let mut worst = 0.0f64;
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                let r = grid.xi(ix).hypot(grid.mu(iy));
                let s: f64 = (0..=k_max).map(|k| phi_hat(k, r)).sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
        worst
    }
}

/// Number of dyadic shells needed to cover radius `r` exactly
/// (`sum_{k<=K} phi_hat_k = 1` on `|..| <= 2^K`).
pub fn shells_to_cover(r: f64) -> u32 {
    let mut k = 0u32;
    while ((1u64 << k) as f64) < r {
        k += 1;
    }
    k
}

/// Littlewood-Paley projection `P_k F` (multiplier `phi_hat_k`).
///
/// Errors when the shell's support `2^{k+1}` exceeds the grid's dealiased
/// band edge, so out-of-band projections fail loudly instead of silently
/// truncating.
pub fn project_pk(f: &SpectralField, k: u32) -> Result<SpectralField> {
    let edge = f.grid.dealias_edge();
    let top = if k == 0 { 2.0 } else { (1u64 << (k + 1)) as f64 };
    if top > edge {
        return Err(NvError::BandViolation(format!(
            "P_{k} support reaches {top} beyond the dealiased band edge {edge:.3}"
        )));
    }
    f.apply_multiplier(|xi, mu| num_complex::Complex64::new(phi_hat(k, xi.hypot(mu)), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SpectralField;
    use num_complex::Complex64;
    use rand::Rng;

    #[test]
    fn eta_profile_shape() {
        assert_eq!(eta(0.3), 1.0);
        assert_eq!(eta(-1.0), 1.0);
        assert_eq!(eta(2.0), 0.0);
        assert_eq!(eta(5.0), 0.0);
        let v = eta(1.5);
        assert!(v > 0.0 && v < 1.0);
        // symmetric
        assert_eq!(eta(1.5), eta(-1.5));
    }

    #[test]
    fn partition_of_unity_on_lattice() {
        let g = GridSpec::unit(64).unwrap();
        let (mx, _) = g.max_freq();
        let k_max = shells_to_cover(mx * 1.5);
        let res = CutoffFamily::partition_residual(&g, k_max);
        assert!(res < 1e-12, "partition residual {res}");
    }

    #[test]
    fn psi_partition_along_modulation() {
        // scan w over a wide range: the 1D family must also telescope to 1
        let mut worst = 0.0f64;
        let mut w = -500.0;
        while w <= 500.0 {
            let s: f64 = (0..=10).map(|l| psi_hat(l, w)).sum();
            worst = worst.max((s - 1.0).abs());
            w += 0.37;
        }
        assert!(worst < 1e-12);
    }

    #[test]
    fn ring_supports() {
        for k in 1..6u32 {
            let lo = f64::from(1u32 << (k - 1));
            let hi = f64::from(1u32 << (k + 1));
            assert_eq!(phi_hat(k, lo * 0.99), 0.0);
            assert_eq!(phi_hat(k, hi * 1.01), 0.0);
            assert!(phi_hat(k, (lo + hi) / 2.8) > 0.0);
        }
    }

    #[test]
    fn projections_sum_to_identity_on_band_limited_field() {
        let g = GridSpec::unit(64).unwrap();
        let mut rng = crate::rng::stream(9, 0);
        let f = SpectralField::random_real_band(g, 5.0, false, &mut rng);
        let mut acc = SpectralField::zero(g);
        for k in 0..=3u32 {
            acc = acc.add(&project_pk(&f, k).unwrap()).unwrap();
        }
        let err = acc.sub(&f).unwrap().l2_norm();
        assert!(err < 1e-12 * f.l2_norm().max(1.0), "partition error {err}");
    }

    #[test]
    fn shell_inside_plateau_passes_unchanged() {
        let g = GridSpec::unit(64).unwrap();
        // mode at radius 3 with k = 2: r/4 = 0.75 in the plateau of the ring?
        // ring(0.75) = eta(0.75) - eta(1.5); eta(1.5) > 0, so pick radius 4:
        // ring(1.0) = 1 - eta(2) = 1 exactly.
        let f = SpectralField::single_mode(g, 4, 0, Complex64::new(1.0, 0.0), true);
        let p = project_pk(&f, 2).unwrap();
        assert!((p.sub(&f).unwrap().l2_norm()) < 1e-14);
    }

    #[test]
    fn distant_shells_are_disjoint() {
        let g = GridSpec::unit(64).unwrap();
        let mut rng = crate::rng::stream(10, 0);
        let f = SpectralField::random_real_band(g, 12.0, false, &mut rng);
        let p1 = project_pk(&project_pk(&f, 1).unwrap(), 3).unwrap();
        assert!(p1.l2_norm() < 1e-14);
    }

    #[test]
    fn out_of_band_projection_errors() {
        let g = GridSpec::unit(32).unwrap();
        let f = SpectralField::zero(g);
        // dealias edge = 2/3 * 15 = 10; k = 3 needs support to 16
        assert!(matches!(project_pk(&f, 3), Err(NvError::BandViolation(_))));
    }

    #[test]
    fn almost_orthogonality_factor() {
        let g = GridSpec::unit(64).unwrap();
        let mut rng = crate::rng::stream(11, 0);
        for trial in 0..50 {
            let band = 2.0 + 8.0 * rng.gen::<f64>();
            let f = SpectralField::random_real_band(g, band, true, &mut rng);
            let total = f.l2_norm().powi(2);
            if total == 0.0 {
                continue;
            }
            let mut sum = 0.0;
            for k in 0..=4u32 {
                sum += project_pk(&f, k).unwrap().l2_norm().powi(2);
            }
            let ratio = sum / total;
            assert!(
                ratio > 1.0 / 3.0 && ratio < 3.0,
                "trial {trial}: overlap factor {ratio}"
            );
        }
    }
}
