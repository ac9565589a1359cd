//! Time evolution of NV/mNV by exponential integrators, and the
//! Duhamel-integral fixed-point iteration that mirrors the contraction
//! argument behind local well-posedness.

use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::norms::sobolev_norm;
use crate::operators::{dealias_truncate, nonlinear_rhs, Dealias, Equation};
use crate::symbols::dispersion_symbol;
use crate::{NvError, Result};
use ndarray::Array2;
use num_complex::Complex64;

/// Integrator choice. Both treat the linear phase exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Cox-Matthews ETDRK4 with contour-averaged phi-functions.
    Etdrk4,
    /// Integrating-factor classical RK4.
    Ifrk4,
}

/// Configuration of one evolution run.
#[derive(Debug, Clone, Copy)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_end: f64,
    pub equation: Equation,
    pub integrator: Integrator,
    pub dealias: bool,
    /// Keep every `store_every`-th state in the trajectory (>= 1).
    pub store_every: usize,
}

impl EvolutionConfig {
    pub fn new(dt: f64, t_end: f64, equation: Equation) -> Self {
        EvolutionConfig {
            dt,
            t_end,
            equation,
            integrator: Integrator::Etdrk4,
            dealias: true,
            store_every: 1,
        }
    }

    fn rule(&self) -> Dealias {
        match self.equation {
            Equation::Mnv => Dealias::Cubic,
            _ => Dealias::Quadratic,
        }
    }

    /// dt must resolve the fastest retained linear phase: |dt| max|P| <= pi.
    /// Negative dt integrates backward.
    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        if self.dt == 0.0 || !self.dt.is_finite() {
            return Err(NvError::InvalidParameter("dt must be nonzero".into()));
        }
        if self.t_end < 0.0 {
            return Err(NvError::InvalidParameter("t_end must be >= 0".into()));
        }
        if self.store_every == 0 {
            return Err(NvError::InvalidParameter("store_every must be >= 1".into()));
        }
        let pmax = max_dispersion(grid, self.dealias.then(|| self.rule()));
        if self.dt.abs() * pmax > std::f64::consts::PI + 1e-12 {
            return Err(NvError::InvalidParameter(format!(
                "dt {} does not resolve the fastest retained phase (max |P| = {pmax:.3})",
                self.dt
            )));
        }
        Ok(())
    }
}

/// Largest |P| over the retained frequency band.
pub fn max_dispersion(grid: &GridSpec, rule: Option<Dealias>) -> f64 {
    let (jb, mb) = match rule {
        Some(r) => (r.index_bound(grid.nx), r.index_bound(grid.ny)),
        None => (grid.nx as i64 / 2 - 1, grid.ny as i64 / 2 - 1),
    };
    let mut m = 0.0f64;
    for j in -jb..=jb {
        for mm in -mb..=mb {
            let p = dispersion_symbol(j as f64 * grid.dxi(), mm as f64 * grid.dmu());
            m = m.max(p.abs());
        }
    }
    m
}

/// Uniformly sampled evolution history.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: GridSpec,
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
}

impl Trajectory {
    pub fn dt(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    pub fn last(&self) -> &SpectralField {
        self.states.last().expect("nonempty trajectory")
    }
}

struct Etdrk4Coeffs {
    e: Array2<Complex64>,
    e2: Array2<Complex64>,
    q: Array2<Complex64>,
    f1: Array2<Complex64>,
    f2: Array2<Complex64>,
    f3: Array2<Complex64>,
}

/// Contour-averaged phi-function coefficients: each rational function of
/// `z = i P dt` is averaged over 32 points on a unit circle around `z`,
/// the standard cure for cancellation at small |z|.
fn etdrk4_coeffs(grid: &GridSpec, dt: f64) -> Etdrk4Coeffs {
    const M: usize = 32;
    let shape = (grid.nx, grid.ny);
    let mut e = Array2::zeros(shape);
    let mut e2 = Array2::zeros(shape);
    let mut q = Array2::zeros(shape);
    let mut f1 = Array2::zeros(shape);
    let mut f2 = Array2::zeros(shape);
    let mut f3 = Array2::zeros(shape);
    let circle: Vec<Complex64> = (0..M)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::PI * (j as f64 + 0.5) / M as f64))
        .collect();
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            let z0 = Complex64::new(0.0, dt * dispersion_symbol(grid.xi(ix), grid.mu(iy)));
            e[[ix, iy]] = z0.exp();
            e2[[ix, iy]] = (z0 * 0.5).exp();
            let (mut aq, mut a1, mut a2, mut a3) = (
                Complex64::default(),
                Complex64::default(),
                Complex64::default(),
                Complex64::default(),
            );
            for r in &circle {
                let z = z0 + r;
                let ez = z.exp();
                let z2 = z * z;
                let z3 = z2 * z;
                aq += ((z * 0.5).exp() - 1.0) / z;
                a1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z2)) / z3;
                a2 += (2.0 + z + ez * (-2.0 + z)) / z3;
                a3 += (-4.0 - 3.0 * z - z2 + ez * (4.0 - z)) / z3;
            }
            let m = M as f64;
            q[[ix, iy]] = aq * (dt / m);
            f1[[ix, iy]] = a1 * (dt / m);
            f2[[ix, iy]] = a2 * (dt / m);
            f3[[ix, iy]] = a3 * (dt / m);
        }
    }
    Etdrk4Coeffs { e, e2, q, f1, f2, f3 }
}

fn hadamard(a: &Array2<Complex64>, b: &SpectralField) -> SpectralField {
    SpectralField {
        grid: b.grid,
        coeffs: a * &b.coeffs,
        real: false, // recomputed by callers when meaningful
    }
}

/// Evolve `phi` under the configured equation. The trajectory contains the
/// initial state and every stored sample up to `t_end`.
pub fn evolve(phi: &SpectralField, cfg: &EvolutionConfig) -> Result<Trajectory> {
    cfg.validate(&phi.grid)?;
    let grid = phi.grid;
    let n_steps = if cfg.t_end == 0.0 {
        0
    } else {
        (cfg.t_end / cfg.dt.abs()).round().max(1.0) as usize
    };
    let dt = if n_steps == 0 {
        cfg.dt
    } else {
        cfg.dt.signum() * cfg.t_end / n_steps as f64
    };
    let mut u = phi.clone();
    if cfg.dealias {
        dealias_truncate(&mut u, cfg.rule());
    }
    let sup0 = u.l2_norm().max(1e-300);

    let coeffs = etdrk4_coeffs(&grid, dt);
    let real_in = u.real;

    let mut times = vec![0.0];
    let mut states = vec![u.clone()];

    let nl = |v: &SpectralField| -> Result<SpectralField> {
        let mut r = nonlinear_rhs(v, cfg.equation)?;
        if cfg.dealias {
            dealias_truncate(&mut r, cfg.rule());
        }
        Ok(r)
    };

    for step in 1..=n_steps {
        let t = step as f64 * dt;
        u = match cfg.integrator {
            Integrator::Etdrk4 => {
                let nu = nl(&u)?;
                let mut a = hadamard(&coeffs.e2, &u).add(&hadamard(&coeffs.q, &nu))?;
                a.real = real_in;
                let na = nl(&a)?;
                let mut b = hadamard(&coeffs.e2, &u).add(&hadamard(&coeffs.q, &na))?;
                b.real = real_in;
                let nb = nl(&b)?;
                let mut c = hadamard(&coeffs.e2, &a).add(&hadamard(
                    &coeffs.q,
                    &nb.scale(Complex64::new(2.0, 0.0)).sub(&nu)?,
                ))?;
                c.real = real_in;
                let nc = nl(&c)?;
                let mut next = hadamard(&coeffs.e, &u)
                    .add(&hadamard(&coeffs.f1, &nu))?
                    .add(&hadamard(&coeffs.f2, &na.add(&nb)?.scale(Complex64::new(2.0, 0.0))))?
                    .add(&hadamard(&coeffs.f3, &nc))?;
                next.real = real_in;
                next
            }
            Integrator::Ifrk4 => ifrk4_step(&u, dt, cfg, &nl)?,
        };
        if !u.is_finite() || u.l2_norm() > 1e6 * sup0 {
            return Err(NvError::NonFinite(t));
        }
        if step % cfg.store_every == 0 || step == n_steps {
            times.push(t);
            states.push(u.clone());
        }
    }
    Ok(Trajectory { grid, times, states })
}

fn real_flagged(mut f: SpectralField, real: bool) -> SpectralField {
    f.real = real;
    f
}

fn ifrk4_step(
    u: &SpectralField,
    dt: f64,
    _cfg: &EvolutionConfig,
    nl: &impl Fn(&SpectralField) -> Result<SpectralField>,
) -> Result<SpectralField> {
    use crate::operators::linear_propagate;
    let real = u.real;
    // v' = e^{-tL} N(e^{tL} v), RK4 in the interaction picture anchored at
    // the current time; phases are exact.
    let k1 = nl(u)?;
    let half = |f: &SpectralField| linear_propagate(f, dt / 2.0);
    let u_half = half(u);
    let y2 = u_half.add(&half(&k1.scale(Complex64::new(dt / 2.0, 0.0))))?;
    let k2 = nl(&real_flagged(y2, real))?;
    let y3 = u_half.add(&k2.scale(Complex64::new(dt / 2.0, 0.0)))?;
    let k3 = nl(&real_flagged(y3, real))?;
    let u_full = linear_propagate(u, dt);
    let y4 = u_full.add(&half(&k3.scale(Complex64::new(dt, 0.0))))?;
    let k4 = nl(&real_flagged(y4, real))?;

    // combine: u_{n+1} = e^{L dt} u + dt/6 [e^{L dt} k1 + 2 e^{L dt/2}(k2+k3) + k4]
    let c = Complex64::new(dt / 6.0, 0.0);
    let mut next = u_full
        .add(&linear_propagate(&k1, dt).scale(c))?
        .add(&half(&k2.add(&k3)?).scale(c * 2.0))?
        .add(&k4.scale(c))?;
    next.real = real;
    Ok(next)
}

/// Picard window configuration: window length `delta`, iteration count, and
/// the Sobolev index used for the difference diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct PicardConfig {
    pub delta: f64,
    pub n_iter: usize,
    pub s: f64,
    /// Time samples across the window (uniform, Simpson-friendly).
    pub nt: usize,
    pub equation: Equation,
}

impl PicardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(NvError::InvalidParameter(format!(
                "delta must lie in (0, 1] (got {})",
                self.delta
            )));
        }
        if self.n_iter < 1 {
            return Err(NvError::InvalidParameter("n_iter must be >= 1".into()));
        }
        if self.nt < 8 {
            return Err(NvError::InvalidParameter("nt must be >= 8".into()));
        }
        Ok(())
    }
}

/// One application of the Duhamel map
/// `u -> exp(itP) phi + int_0^t exp(i(t-s)P) (-NL(u(s))) ds`
/// on the trajectory's native samples (interaction-picture cumulative
/// Simpson quadrature).
pub fn duhamel_map(traj: &Trajectory, phi: &SpectralField, cfg: &PicardConfig) -> Result<Trajectory> {
    use crate::operators::linear_propagate;
    traj.grid.same_as(&phi.grid)?;
    let n = traj.times.len();
    if n < 3 {
        return Err(NvError::InvalidParameter(
            "trajectory must have at least 3 samples".into(),
        ));
    }
    let h = traj.dt();
    // integrand in the interaction picture: g(s) = e^{-isP} (-NL(u(s)))
    let mut g = Vec::with_capacity(n);
    for (t, state) in traj.times.iter().zip(&traj.states) {
        let mut r = nonlinear_rhs(state, cfg.equation)?;
        dealias_truncate(
            &mut r,
            match cfg.equation {
                Equation::Mnv => Dealias::Cubic,
                _ => Dealias::Quadratic,
            },
        );
        g.push(linear_propagate(&r, -t));
    }
    // cumulative integral G(t_k) with Simpson-type weights
    let mut cum: Vec<SpectralField> = Vec::with_capacity(n);
    cum.push(SpectralField::zero(traj.grid));
    for k in 1..n {
        let gk = if k == 1 {
            // quadratic through samples 0,1,2 integrated over [t0, t1]
            g[0].scale(Complex64::new(5.0 * h / 12.0, 0.0))
                .add(&g[1].scale(Complex64::new(8.0 * h / 12.0, 0.0)))?
                .sub(&g[2].scale(Complex64::new(h / 12.0, 0.0)))?
        } else if k % 2 == 0 {
            // Simpson over [t_{k-2}, t_k] added to G_{k-2}
            let s = g[k - 2]
                .scale(Complex64::new(h / 3.0, 0.0))
                .add(&g[k - 1].scale(Complex64::new(4.0 * h / 3.0, 0.0)))?
                .add(&g[k].scale(Complex64::new(h / 3.0, 0.0)))?;
            cum[k - 2].add(&s)?
        } else {
            // quadratic through k-2, k-1, k integrated over [t_{k-1}, t_k]
            let s = g[k - 2]
                .scale(Complex64::new(-h / 12.0, 0.0))
                .add(&g[k - 1].scale(Complex64::new(8.0 * h / 12.0, 0.0)))?
                .add(&g[k].scale(Complex64::new(5.0 * h / 12.0, 0.0)))?;
            cum[k - 1].add(&s)?
        };
        if k == 1 {
            cum.push(cum[0].add(&gk)?);
        } else {
            cum.push(gk);
        }
    }
    let mut states = Vec::with_capacity(n);
    for (k, t) in traj.times.iter().enumerate() {
        let mut v = linear_propagate(&phi.add(&cum[k])?, *t);
        v.real = phi.real;
        states.push(v);
    }
    Ok(Trajectory {
        grid: traj.grid,
        times: traj.times.clone(),
        states,
    })
}

/// Outcome of a Picard iteration run.
#[derive(Debug)]
pub struct PicardOutcome {
    pub trajectory: Trajectory,
    /// sup-in-time H^s norms of consecutive iterate differences.
    pub diffs: Vec<f64>,
    /// Whether the difference sequence kept decreasing (floored at rounding).
    pub contraction: bool,
}

/// Iterate `u^0 = linear flow`, `u^{n+1} = Duhamel(u^n)` and report the
/// sup-in-time `H^s` differences between consecutive iterates.
pub fn picard_iterate(phi: &SpectralField, cfg: &PicardConfig) -> Result<PicardOutcome> {
    use crate::operators::linear_propagate;
    cfg.validate()?;
    let n = cfg.nt;
    let h = cfg.delta / (n - 1) as f64;
    let times: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
    let states: Vec<SpectralField> = times.iter().map(|&t| linear_propagate(phi, t)).collect();
    let mut current = Trajectory {
        grid: phi.grid,
        times,
        states,
    };
    let floor = 1e-13 * phi.l2_norm().max(1e-300);
    let mut diffs = Vec::new();
    let mut contraction = true;
    for _ in 0..cfg.n_iter {
        let next = duhamel_map(&current, phi, cfg)?;
        let mut d = 0.0f64;
        for (a, b) in next.states.iter().zip(&current.states) {
            d = d.max(sobolev_norm(&a.sub(b)?, cfg.s, false)?);
        }
        if diffs.len() >= 1 {
            let prev: f64 = *diffs.last().unwrap();
            if d > prev && d > floor && prev > floor {
                contraction = false;
            }
        }
        diffs.push(d);
        current = next;
    }
    Ok(PicardOutcome {
        trajectory: current,
        diffs,
        contraction,
    })
}
