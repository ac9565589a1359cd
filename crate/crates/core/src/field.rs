//! Physical and spectral fields on a [`GridSpec`], the transforms between
//! them, and generic Fourier multipliers.
//!
//! Coefficients follow the Fourier-series convention
//! `u(x, y) = sum_{j,m} c_{j,m} exp(i (xi_j x + mu_m y))`, so a constant field
//! has a single nonzero coefficient equal to its value and Parseval reads
//! `||u||_{L^2}^2 = lx * ly * sum |c|^2`.

use crate::fft;
use crate::grid::GridSpec;
use crate::{NvError, Result};
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

/// Complex samples of a field on the physical grid.
#[derive(Debug, Clone)]
pub struct PhysicalField {
    pub grid: GridSpec,
    pub values: Array2<Complex64>,
}

impl PhysicalField {
    pub fn new(grid: GridSpec, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (grid.nx, grid.ny) {
            return Err(NvError::DimensionMismatch {
                expected: format!("{}x{}", grid.nx, grid.ny),
                got: format!("{}x{}", values.dim().0, values.dim().1),
            });
        }
        Ok(PhysicalField { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Array2::zeros((grid.nx, grid.ny));
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                let (x, y) = grid.point(ix, iy);
                values[[ix, iy]] = f(x, y);
            }
        }
        PhysicalField { grid, values }
    }

    /// Largest imaginary part in units of the field's sup norm; zero for a
    /// genuinely real field up to rounding.
    pub fn imag_residual(&self) -> f64 {
        let sup = self.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if sup == 0.0 {
            return 0.0;
        }
        let imag = self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        imag / sup
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Fourier coefficients of a field, with the Nyquist row and column zeroed.
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub coeffs: Array2<Complex64>,
    /// Whether the field represents a real-valued function (Hermitian
    /// coefficient symmetry). Checked at construction, preserved by
    /// symmetry-compatible operations.
    pub real: bool,
}

impl SpectralField {
    pub fn zero(grid: GridSpec) -> Self {
        SpectralField {
            grid,
            coeffs: Array2::zeros((grid.nx, grid.ny)),
            real: true,
        }
    }

    /// Wrap raw coefficients: zeroes Nyquist modes and detects realness.
    pub fn from_coeffs(grid: GridSpec, mut coeffs: Array2<Complex64>) -> Result<Self> {
        if coeffs.dim() != (grid.nx, grid.ny) {
            return Err(NvError::DimensionMismatch {
                expected: format!("{}x{}", grid.nx, grid.ny),
                got: format!("{}x{}", coeffs.dim().0, coeffs.dim().1),
            });
        }
        zero_nyquist(&grid, &mut coeffs);
        let mut f = SpectralField {
            grid,
            coeffs,
            real: false,
        };
        f.real = f.hermitian_residual() < 1e-13;
        Ok(f)
    }

    /// A single mode pair `a * cos(xi_j x + mu_m y)` (Hermitian by
    /// construction), or the bare complex exponential if `hermitian` is off.
    pub fn single_mode(grid: GridSpec, j: i64, m: i64, amp: Complex64, hermitian: bool) -> Self {
        let mut coeffs = Array2::<Complex64>::zeros((grid.nx, grid.ny));
        let ix = GridSpec::bin_of(j, grid.nx);
        let iy = GridSpec::bin_of(m, grid.ny);
        if hermitian {
            let jx = GridSpec::bin_of(-j, grid.nx);
            let jy = GridSpec::bin_of(-m, grid.ny);
            coeffs[[ix, iy]] = amp * 0.5;
            coeffs[[jx, jy]] += amp.conj() * 0.5;
        } else {
            coeffs[[ix, iy]] = amp;
        }
        let mut f = SpectralField {
            grid,
            coeffs,
            real: hermitian,
        };
        zero_nyquist(&grid, &mut f.coeffs);
        f
    }

    /// Random real field with coefficients filled inside `|(xi,mu)| <= band`
    /// by unit-variance complex Gaussians, Hermitian-symmetrized.
    pub fn random_real_band(grid: GridSpec, band: f64, mean_zero: bool, rng: &mut impl Rng) -> Self {
        let mut coeffs = Array2::<Complex64>::zeros((grid.nx, grid.ny));
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                if grid.is_nyquist(ix, iy) {
                    continue;
                }
                let (xi, mu) = (grid.xi(ix), grid.mu(iy));
                if xi.hypot(mu) <= band {
                    coeffs[[ix, iy]] = crate::rng::complex_gaussian(rng);
                }
            }
        }
        hermitian_project(&grid, &mut coeffs);
        if mean_zero {
            coeffs[[0, 0]] = Complex64::default();
        } else {
            coeffs[[0, 0]] = Complex64::new(coeffs[[0, 0]].re, 0.0);
        }
        SpectralField {
            grid,
            coeffs,
            real: true,
        }
    }

    /// Max deviation from `c(-j,-m) = conj(c(j,m))` relative to the field's
    /// coefficient sup.
    pub fn hermitian_residual(&self) -> f64 {
        let sup = self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if sup == 0.0 {
            return 0.0;
        }
        let g = &self.grid;
        let mut worst = 0.0f64;
        for ix in 0..g.nx {
            for iy in 0..g.ny {
                if g.is_nyquist(ix, iy) {
                    continue;
                }
                let j = GridSpec::signed_index(ix, g.nx);
                let m = GridSpec::signed_index(iy, g.ny);
                let mirror = self.coeffs[[GridSpec::bin_of(-j, g.nx), GridSpec::bin_of(-m, g.ny)]];
                worst = worst.max((self.coeffs[[ix, iy]] - mirror.conj()).norm());
            }
        }
        worst / sup
    }

    /// Pointwise multiplier application. The output keeps the `real` flag
    /// only if the input had it and the evaluated multiplier table satisfies
    /// `m(-xi, -mu) = conj(m(xi, mu))` on the lattice.
    pub fn apply_multiplier(&self, m: impl Fn(f64, f64) -> Complex64) -> Result<SpectralField> {
        let g = &self.grid;
        let mut table = Array2::<Complex64>::zeros((g.nx, g.ny));
        for ix in 0..g.nx {
            for iy in 0..g.ny {
                if g.is_nyquist(ix, iy) {
                    continue;
                }
                let (xi, mu) = (g.xi(ix), g.mu(iy));
                let v = m(xi, mu);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(NvError::NonFiniteMultiplier { xi, mu });
                }
                table[[ix, iy]] = v;
            }
        }
        let mut hermitian_ok = true;
        'outer: for ix in 0..g.nx {
            for iy in 0..g.ny {
                if g.is_nyquist(ix, iy) {
                    continue;
                }
                let j = GridSpec::signed_index(ix, g.nx);
                let mm = GridSpec::signed_index(iy, g.ny);
                let mirror = table[[GridSpec::bin_of(-j, g.nx), GridSpec::bin_of(-mm, g.ny)]];
                if (table[[ix, iy]] - mirror.conj()).norm() > 1e-14 * (1.0 + table[[ix, iy]].norm())
                {
                    hermitian_ok = false;
                    break 'outer;
                }
            }
        }
        let coeffs = &self.coeffs * &table;
        Ok(SpectralField {
            grid: self.grid,
            coeffs,
            real: self.real && hermitian_ok,
        })
    }

    /// Zero every mode with `|j| > jmax` or `|m| > mmax` (index units).
    pub fn truncate_band_indices(&mut self, jmax: i64, mmax: i64) {
        let g = self.grid;
        for ix in 0..g.nx {
            for iy in 0..g.ny {
                let j = GridSpec::signed_index(ix, g.nx).abs();
                let m = GridSpec::signed_index(iy, g.ny).abs();
                if j > jmax || m > mmax {
                    self.coeffs[[ix, iy]] = Complex64::default();
                }
            }
        }
    }

    pub fn mean(&self) -> Complex64 {
        self.coeffs[[0, 0]]
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.grid.same_as(&other.grid)?;
        Ok(SpectralField {
            grid: self.grid,
            coeffs: &self.coeffs - &other.coeffs,
            real: self.real && other.real,
        })
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.grid.same_as(&other.grid)?;
        Ok(SpectralField {
            grid: self.grid,
            coeffs: &self.coeffs + &other.coeffs,
            real: self.real && other.real,
        })
    }

    pub fn scale(&self, a: Complex64) -> SpectralField {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.mapv(|z| z * a),
            real: self.real && a.im == 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Spectral l2 norm with the box measure weight (equals the physical L2
    /// norm by Parseval).
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|z| z.norm_sqr()).sum();
        (self.grid.area() * s).sqrt()
    }
}

fn zero_nyquist(grid: &GridSpec, coeffs: &mut Array2<Complex64>) {
    let (nx, ny) = (grid.nx, grid.ny);
    for iy in 0..ny {
        coeffs[[nx / 2, iy]] = Complex64::default();
    }
    for ix in 0..nx {
        coeffs[[ix, ny / 2]] = Complex64::default();
    }
}

/// Project onto the Hermitian-symmetric part (and zero Nyquist modes).
pub fn hermitian_project(grid: &GridSpec, coeffs: &mut Array2<Complex64>) {
    zero_nyquist(grid, coeffs);
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            if grid.is_nyquist(ix, iy) {
                continue;
            }
            let j = GridSpec::signed_index(ix, grid.nx);
            let m = GridSpec::signed_index(iy, grid.ny);
            let (mx, my) = (GridSpec::bin_of(-j, grid.nx), GridSpec::bin_of(-m, grid.ny));
            if (mx, my) < (ix, iy) {
                continue;
            }
            let a = coeffs[[ix, iy]];
            let b = coeffs[[mx, my]];
            let sym = (a + b.conj()) * 0.5;
            coeffs[[ix, iy]] = sym;
            coeffs[[mx, my]] = sym.conj();
        }
    }
}

/// Sample a physical field on the grid and return its Fourier coefficients.
/// Round trip with [`inverse_transform`] is the identity to 1e-13 relative.
pub fn forward_transform(f: &PhysicalField) -> Result<SpectralField> {
    let coeffs = fft::forward2(&f.values);
    SpectralField::from_coeffs(f.grid, coeffs)
}

/// Evaluate the Fourier series on the physical grid. Errors if the Nyquist
/// modes are contaminated (they cannot be represented symmetrically).
pub fn inverse_transform(f: &SpectralField) -> Result<PhysicalField> {
    let g = &f.grid;
    let mut nyq = 0.0f64;
    for iy in 0..g.ny {
        nyq = nyq.max(f.coeffs[[g.nx / 2, iy]].norm());
    }
    for ix in 0..g.nx {
        nyq = nyq.max(f.coeffs[[ix, g.ny / 2]].norm());
    }
    if nyq > 0.0 {
        return Err(NvError::NyquistContamination(nyq));
    }
    let values = fft::inverse2(&f.coeffs);
    PhysicalField::new(f.grid, values)
}
