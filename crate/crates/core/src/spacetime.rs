//! Dense space-time fields over `(tau, xi, mu)`: time windowing, modulation
//! projections `Q_l`, and discrete `X^{s,b}` / homogeneous `X-dot^{s,b}`
//! norms.
//!
//! The curved modulation weight `w = tau - P(xi, mu)` only makes sense when
//! the dispersive phase of every populated spatial mode is resolved by the
//! tau lattice; construction enforces `max |P| + headroom <= tau_max / 2`.

use crate::cutoffs::{modulation_weight, psi_hat};
use crate::fft;
use crate::field::SpectralField;
use crate::grid::{GridSpec, SpaceTimeGridSpec};
use crate::symbols::dispersion_symbol;
use crate::timestep::Trajectory;
use crate::{NvError, Result};
use ndarray::Array3;
use num_complex::Complex64;
use rand::Rng;

/// Sobolev/modulation norm weights: `<(xi,mu)>^s <w>^b`, or `|(xi,mu)|^s`
/// when homogeneous.
#[derive(Debug, Clone, Copy)]
pub struct NormSpec {
    pub s: f64,
    pub b: f64,
    pub homogeneous: bool,
}

impl NormSpec {
    pub fn new(s: f64, b: f64) -> Self {
        NormSpec { s, b, homogeneous: false }
    }
    pub fn homogeneous(s: f64, b: f64) -> Self {
        NormSpec { s, b, homogeneous: true }
    }
}

/// Smooth compactly supported time window: 0 outside `[t0, t1]`, 1 on
/// `[p0, p1]`, glued by the standard `exp(-1/x)` smoothstep.
#[derive(Debug, Clone, Copy)]
pub struct TimeBump {
    pub t0: f64,
    pub p0: f64,
    pub p1: f64,
    pub t1: f64,
}

fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

impl TimeBump {
    pub fn new(t0: f64, p0: f64, p1: f64, t1: f64) -> Result<Self> {
        if !(t0 < p0 && p0 < p1 && p1 < t1) {
            return Err(NvError::InvalidParameter(format!(
                "bump knots must be increasing (got {t0}, {p0}, {p1}, {t1})"
            )));
        }
        Ok(TimeBump { t0, p0, p1, t1 })
    }

    /// Default bump for a window of length `t_window`: supported on the
    /// middle 80% with a 25%-of-window plateau.
    pub fn default_for(t_window: f64) -> Self {
        TimeBump {
            t0: 0.10 * t_window,
            p0: 0.375 * t_window,
            p1: 0.625 * t_window,
            t1: 0.90 * t_window,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        smoothstep((t - self.t0) / (self.p0 - self.t0))
            * smoothstep((self.t1 - t) / (self.t1 - self.p1))
    }

    /// Rescale the bump to a sub-window of relative length `delta in (0,1]`
    /// anchored at the same start.
    pub fn scaled(&self, delta: f64) -> Self {
        TimeBump {
            t0: self.t0 * delta,
            p0: self.p0 * delta,
            p1: self.p1 * delta,
            t1: self.t1 * delta,
        }
    }
}

/// Fourier coefficients over `(tau, xi, mu)` with per-slice spatial
/// conventions identical to [`SpectralField`].
#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    pub stgrid: SpaceTimeGridSpec,
    pub coeffs: Array3<Complex64>,
}

impl SpaceTimeField {
    pub fn zero(stgrid: SpaceTimeGridSpec) -> Self {
        let g = stgrid.space;
        SpaceTimeField {
            stgrid,
            coeffs: Array3::zeros((stgrid.nt, g.nx, g.ny)),
        }
    }

    /// Largest |P| over spatial modes carrying any mass.
    pub fn populated_dispersion(&self) -> f64 {
        let g = self.stgrid.space;
        let mut pmax = 0.0f64;
        for ix in 0..g.nx {
            for iy in 0..g.ny {
                let mass: f64 = (0..self.stgrid.nt)
                    .map(|it| self.coeffs[[it, ix, iy]].norm_sqr())
                    .sum();
                if mass > 0.0 {
                    pmax = pmax.max(dispersion_symbol(g.xi(ix), g.mu(iy)).abs());
                }
            }
        }
        pmax
    }

    /// Band-limit compatibility: the populated spatial band must satisfy
    /// `max |P| <= tau_max / 2` so the curved weight is anti-aliased.
    pub fn validate_bandlimit(&self) -> Result<()> {
        let pmax = self.populated_dispersion();
        let lim = self.stgrid.tau_max() / 2.0;
        if pmax > lim {
            return Err(NvError::BandViolation(format!(
                "populated band has max |P| = {pmax:.1} > tau_max/2 = {lim:.1}"
            )));
        }
        Ok(())
    }

    /// Spatial-spectral, time-physical slices `u_hat(t_k, xi, mu)`.
    pub fn to_slices(&self) -> Vec<SpectralField> {
        let vals = fft::inverse_time(&self.coeffs);
        let g = self.stgrid.space;
        (0..self.stgrid.nt)
            .map(|it| {
                let mut c = ndarray::Array2::zeros((g.nx, g.ny));
                for ix in 0..g.nx {
                    for iy in 0..g.ny {
                        c[[ix, iy]] = vals[[it, ix, iy]];
                    }
                }
                SpectralField::from_coeffs(g, c).expect("slice dims")
            })
            .collect()
    }

    /// Assemble from time slices (spatial-spectral), transforming in time
    /// and zeroing the tau Nyquist row. Checks the band-limit invariant.
    pub fn from_slices(stgrid: SpaceTimeGridSpec, slices: &[SpectralField]) -> Result<Self> {
        if slices.len() != stgrid.nt {
            return Err(NvError::DimensionMismatch {
                expected: format!("{} slices", stgrid.nt),
                got: format!("{}", slices.len()),
            });
        }
        let g = stgrid.space;
        let mut stack = Array3::zeros((stgrid.nt, g.nx, g.ny));
        for (it, s) in slices.iter().enumerate() {
            g.same_as(&s.grid)?;
            for ix in 0..g.nx {
                for iy in 0..g.ny {
                    stack[[it, ix, iy]] = s.coeffs[[ix, iy]];
                }
            }
        }
        let mut coeffs = fft::forward_time(&stack);
        for ix in 0..g.nx {
            for iy in 0..g.ny {
                coeffs[[stgrid.nt / 2, ix, iy]] = Complex64::default();
            }
        }
        let f = SpaceTimeField { stgrid, coeffs };
        f.validate_bandlimit()?;
        Ok(f)
    }

    /// Pointwise multiplier in `(tau, xi, mu)` through the modulation weight
    /// `w` (and the spatial frequency).
    pub fn apply_weight(&self, m: impl Fn(f64, f64, f64) -> Complex64) -> SpaceTimeField {
        let g = self.stgrid.space;
        let mut out = self.clone();
        for it in 0..self.stgrid.nt {
            let tau = self.stgrid.tau(it);
            for ix in 0..g.nx {
                for iy in 0..g.ny {
                    let (xi, mu) = (g.xi(ix), g.mu(iy));
                    out.coeffs[[it, ix, iy]] *= m(tau, xi, mu);
                }
            }
        }
        out
    }

    /// Space-time L2 norm with the box-window measure weight.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|z| z.norm_sqr()).sum();
        (self.stgrid.t_window * self.stgrid.space.area() * s).sqrt()
    }

    /// Weighted `X^{s,b}` norm.
    pub fn xsb_norm(&self, spec: NormSpec) -> Result<f64> {
        let g = self.stgrid.space;
        if spec.homogeneous && spec.s < 0.0 {
            let mean_mass: f64 = (0..self.stgrid.nt)
                .map(|it| self.coeffs[[it, 0, 0]].norm_sqr())
                .sum();
            if mean_mass > 0.0 {
                return Err(NvError::DivergentNorm);
            }
        }
        let mut acc = 0.0f64;
        for it in 0..self.stgrid.nt {
            let tau = self.stgrid.tau(it);
            for ix in 0..g.nx {
                for iy in 0..g.ny {
                    let z = self.coeffs[[it, ix, iy]];
                    if z.norm_sqr() == 0.0 {
                        continue;
                    }
                    let (xi, mu) = (g.xi(ix), g.mu(iy));
                    let r2 = xi * xi + mu * mu;
                    let sw = if spec.homogeneous {
                        if r2 == 0.0 {
                            0.0
                        } else {
                            r2.powf(spec.s)
                        }
                    } else {
                        (1.0 + r2).powf(spec.s)
                    };
                    let w = modulation_weight(tau, xi, mu);
                    let bw = (1.0 + w * w).powf(spec.b);
                    acc += sw * bw * z.norm_sqr();
                }
            }
        }
        Ok((self.stgrid.t_window * g.area() * acc).sqrt())
    }

}

/// Modulation projection `Q_l U` (multiplier `psi_hat_l(w)`).
pub fn project_ql(u: &SpaceTimeField, l: u32) -> Result<SpaceTimeField> {
    let pmax = u.populated_dispersion();
    let need = (1u64 << (l + 1)) as f64;
    let need = if l == 0 { 2.0 } else { need };
    if pmax + need > u.stgrid.tau_max() / 2.0 {
        return Err(NvError::BandViolation(format!(
            "Q_{l} band {need} + max|P| {pmax:.1} exceeds tau_max/2 = {:.1}",
            u.stgrid.tau_max() / 2.0
        )));
    }
    Ok(u.apply_weight(|tau, xi, mu| {
        Complex64::new(psi_hat(l, modulation_weight(tau, xi, mu)), 0.0)
    }))
}

/// Multiply a uniformly sampled trajectory by a smooth bump and transform in
/// time. The trajectory must sample `[0, T)` at exactly `nt` points.
pub fn window_in_time(
    traj: &Trajectory,
    stgrid: SpaceTimeGridSpec,
    bump: &TimeBump,
) -> Result<SpaceTimeField> {
    if bump.t1 > stgrid.t_window {
        return Err(NvError::InvalidParameter(format!(
            "window of length {} too short for bump support ending at {}",
            stgrid.t_window, bump.t1
        )));
    }
    if traj.states.len() != stgrid.nt {
        return Err(NvError::DimensionMismatch {
            expected: format!("{} samples over [0, T)", stgrid.nt),
            got: format!("{}", traj.states.len()),
        });
    }
    let slices: Vec<SpectralField> = traj
        .states
        .iter()
        .zip(&traj.times)
        .map(|(s, &t)| s.scale(Complex64::new(bump.eval(t), 0.0)))
        .collect();
    SpaceTimeField::from_slices(stgrid, &slices)
}

/// Samples of the free flow `exp(itP) phi` on the window's time grid.
pub fn linear_flow_trajectory(phi: &SpectralField, stgrid: &SpaceTimeGridSpec) -> Trajectory {
    use crate::operators::linear_propagate;
    let times: Vec<f64> = (0..stgrid.nt).map(|it| stgrid.time(it)).collect();
    let states = times.iter().map(|&t| linear_propagate(phi, t)).collect();
    Trajectory {
        grid: phi.grid,
        times,
        states,
    }
}

/// Windowed free flow in one call.
pub fn windowed_linear_flow(
    phi: &SpectralField,
    stgrid: SpaceTimeGridSpec,
    bump: &TimeBump,
) -> Result<SpaceTimeField> {
    window_in_time(&linear_flow_trajectory(phi, &stgrid), stgrid, bump)
}

/// Random real space-time field with spatial band `band` and modulation
/// offsets up to `w_cap`: coefficients are unit-variance complex Gaussians
/// on the admissible lattice set, conjugate-symmetrized so the physical
/// field is real.
pub fn random_modulation_field(
    stgrid: SpaceTimeGridSpec,
    band: f64,
    w_cap: f64,
    rng: &mut impl Rng,
) -> Result<SpaceTimeField> {
    let g = stgrid.space;
    let mut f = SpaceTimeField::zero(stgrid);
    for it in 0..stgrid.nt {
        if it == stgrid.nt / 2 {
            continue;
        }
        let tau = stgrid.tau(it);
        for ix in 0..g.nx {
            for iy in 0..g.ny {
                if g.is_nyquist(ix, iy) {
                    continue;
                }
                let (xi, mu) = (g.xi(ix), g.mu(iy));
                if xi.hypot(mu) > band {
                    continue;
                }
                if modulation_weight(tau, xi, mu).abs() > w_cap {
                    continue;
                }
                f.coeffs[[it, ix, iy]] = crate::rng::complex_gaussian(rng);
            }
        }
    }
    // realness: u~(-tau, -xi, -mu) = conj(u~(tau, xi, mu))
    let nt = stgrid.nt;
    for it in 0..nt {
        if it == nt / 2 {
            continue;
        }
        for ix in 0..g.nx {
            for iy in 0..g.ny {
                if g.is_nyquist(ix, iy) {
                    continue;
                }
                let n = GridSpec::signed_index(it, nt);
                let j = GridSpec::signed_index(ix, g.nx);
                let m = GridSpec::signed_index(iy, g.ny);
                let (mt, mx, my) = (
                    GridSpec::bin_of(-n, nt),
                    GridSpec::bin_of(-j, g.nx),
                    GridSpec::bin_of(-m, g.ny),
                );
                if (mt, mx, my) < (it, ix, iy) {
                    continue;
                }
                let a = f.coeffs[[it, ix, iy]];
                let b = f.coeffs[[mt, mx, my]];
                let sym = (a + b.conj()) * 0.5;
                f.coeffs[[it, ix, iy]] = sym;
                f.coeffs[[mt, mx, my]] = sym.conj();
            }
        }
    }
    f.validate_bandlimit()?;
    Ok(f)
}
