//! Discretization of the spatial torus and of space-time windows.
//!
//! Frequencies live on the lattice `xi_j = 2 pi j / lx`, `mu_m = 2 pi m / ly`
//! with `j in [-nx/2, nx/2)` stored in FFT order (`0, 1, .., nx/2-1, -nx/2,
//! .., -1`). The single asymmetric Nyquist index `-n/2` is zeroed in every
//! field so that all multiplier operations close under Hermitian symmetry.

use crate::{NvError, Result};

pub const TAU: f64 = std::f64::consts::TAU;

/// Spatial torus `[0, lx) x [0, ly)` sampled on an `nx x ny` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        if nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0 {
            return Err(NvError::InvalidGrid(format!(
                "nx, ny must be even and >= 8 (got {nx} x {ny})"
            )));
        }
        if !(lx > 0.0) || !(ly > 0.0) || !lx.is_finite() || !ly.is_finite() {
            return Err(NvError::InvalidGrid(format!(
                "box lengths must be positive (got {lx} x {ly})"
            )));
        }
        Ok(GridSpec { nx, ny, lx, ly })
    }

    /// Square grid with unit frequency spacing (`lx = ly = 2 pi`).
    pub fn unit(n: usize) -> Result<Self> {
        GridSpec::new(n, n, TAU, TAU)
    }

    /// The default wide box `lx = ly = 2 pi * 32`: seven dyadic rings between
    /// the lattice spacing 1/32 and the band edge are resolved, and wave
    /// packets with |grad P| = O(1) stay away from their periodic images for
    /// times of order 50.
    pub fn default_grid() -> Self {
        GridSpec::new(128, 128, TAU * 32.0, TAU * 32.0).expect("static grid")
    }

    #[inline]
    pub fn dxi(&self) -> f64 {
        TAU / self.lx
    }

    #[inline]
    pub fn dmu(&self) -> f64 {
        TAU / self.ly
    }

    /// Signed frequency index of FFT bin `i` along an axis of `n` points.
    #[inline]
    pub fn signed_index(i: usize, n: usize) -> i64 {
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// FFT bin of a signed frequency index.
    #[inline]
    pub fn bin_of(j: i64, n: usize) -> usize {
        if j >= 0 {
            j as usize
        } else {
            (j + n as i64) as usize
        }
    }

    #[inline]
    pub fn xi(&self, ix: usize) -> f64 {
        Self::signed_index(ix, self.nx) as f64 * self.dxi()
    }

    #[inline]
    pub fn mu(&self, iy: usize) -> f64 {
        Self::signed_index(iy, self.ny) as f64 * self.dmu()
    }

    #[inline]
    pub fn is_nyquist(&self, ix: usize, iy: usize) -> bool {
        ix == self.nx / 2 || iy == self.ny / 2
    }

    /// Largest |xi| (resp. |mu|) representable without the Nyquist mode.
    pub fn max_freq(&self) -> (f64, f64) {
        (
            (self.nx as f64 / 2.0 - 1.0) * self.dxi(),
            (self.ny as f64 / 2.0 - 1.0) * self.dmu(),
        )
    }

    /// Radial band edge kept by the quadratic 2/3 dealiasing rule.
    pub fn dealias_edge(&self) -> f64 {
        let (mx, my) = self.max_freq();
        (2.0 / 3.0) * mx.min(my)
    }

    /// Physical sample point of grid node `(ix, iy)`.
    #[inline]
    pub fn point(&self, ix: usize, iy: usize) -> (f64, f64) {
        (
            ix as f64 * self.lx / self.nx as f64,
            iy as f64 * self.ly / self.ny as f64,
        )
    }

    /// Box area, the measure weight of all discrete norms.
    #[inline]
    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn same_as(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(NvError::GridMismatch(format!(
                "{}x{} box {:.6}x{:.6} vs {}x{} box {:.6}x{:.6}",
                self.nx, self.ny, self.lx, self.ly, other.nx, other.ny, other.lx, other.ly
            )))
        }
    }
}

/// A spatial grid extended by `nt` uniform time samples over a window of
/// length `t_window`, carrying the dual lattice `tau_n = 2 pi n / t_window`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeGridSpec {
    pub space: GridSpec,
    pub nt: usize,
    pub t_window: f64,
}

impl SpaceTimeGridSpec {
    pub fn new(space: GridSpec, nt: usize, t_window: f64) -> Result<Self> {
        if nt < 8 || nt % 2 != 0 {
            return Err(NvError::InvalidGrid(format!(
                "nt must be even and >= 8 (got {nt})"
            )));
        }
        if !(t_window > 0.0) {
            return Err(NvError::InvalidGrid(format!(
                "time window must be positive (got {t_window})"
            )));
        }
        Ok(SpaceTimeGridSpec { space, nt, t_window })
    }

    #[inline]
    pub fn dtau(&self) -> f64 {
        TAU / self.t_window
    }

    #[inline]
    pub fn tau(&self, it: usize) -> f64 {
        GridSpec::signed_index(it, self.nt) as f64 * self.dtau()
    }

    #[inline]
    pub fn time(&self, it: usize) -> f64 {
        it as f64 * self.t_window / self.nt as f64
    }

    pub fn tau_max(&self) -> f64 {
        (self.nt as f64 / 2.0 - 1.0) * self.dtau()
    }

    pub fn same_as(&self, other: &SpaceTimeGridSpec) -> Result<()> {
        self.space.same_as(&other.space)?;
        if self.nt != other.nt || self.t_window != other.t_window {
            return Err(NvError::GridMismatch(format!(
                "time axis {}@{} vs {}@{}",
                self.nt, self.t_window, other.nt, other.t_window
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_is_symmetric_except_nyquist() {
        let g = GridSpec::unit(16).unwrap();
        // FFT order: j = 0..7, then -8..-1; only j = -8 lacks a mirror.
        let js: Vec<i64> = (0..16).map(|i| GridSpec::signed_index(i, 16)).collect();
        assert_eq!(js[0], 0);
        assert_eq!(js[7], 7);
        assert_eq!(js[8], -8);
        assert_eq!(js[15], -1);
        for j in 1..8i64 {
            assert!(js.contains(&j) && js.contains(&-j));
        }
        assert!(g.is_nyquist(8, 0));
        assert!(!g.is_nyquist(7, 3));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(7, 8, 1.0, 1.0).is_err());
        assert!(GridSpec::new(8, 8, 0.0, 1.0).is_err());
        assert!(GridSpec::new(10, 10, -1.0, 1.0).is_err());
        assert!(GridSpec::new(4, 4, 1.0, 1.0).is_err());
    }

    #[test]
    fn frequency_spacing() {
        let g = GridSpec::new(16, 32, TAU, 2.0 * TAU).unwrap();
        assert!((g.dxi() - 1.0).abs() < 1e-15);
        assert!((g.dmu() - 0.5).abs() < 1e-15);
        assert!((g.xi(3) - 3.0).abs() < 1e-15);
        assert!((g.mu(31) + 0.5).abs() < 1e-15);
    }
}
