//! The linear NV propagator, the nonlocal operators built from Wirtinger
//! derivatives, and the NV / mNV nonlinearities with dealiasing.
//!
//! Products are formed in physical space (transform, multiply, transform
//! back) and truncated afterwards: the 2/3 rule for quadratic terms, the 1/2
//! rule for cubic terms, so retained modes equal exact spectral convolutions.

use crate::field::{forward_transform, inverse_transform, SpectralField};
use crate::grid::GridSpec;
use crate::symbols::{beurling_symbol, dispersion_symbol, wirtinger_symbol, Beurling, Wirtinger};
use crate::{NvError, Result};
use num_complex::Complex64;

/// Nonlinearity arity, fixing the dealiasing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dealias {
    /// 2/3 rule: retain |j| <= nx/3 (quadratic products exact).
    Quadratic,
    /// 1/2 rule: retain |j| <= nx/4 (cubic products exact).
    Cubic,
}

impl Dealias {
    pub fn index_bound(self, n: usize) -> i64 {
        match self {
            Dealias::Quadratic => (n / 3) as i64,
            Dealias::Cubic => (n / 4) as i64,
        }
    }
}

/// Zero all modes outside the dealiasing band.
pub fn dealias_truncate(f: &mut SpectralField, rule: Dealias) {
    let jb = rule.index_bound(f.grid.nx);
    let mb = rule.index_bound(f.grid.ny);
    f.truncate_band_indices(jb, mb);
}

/// `exp(i t P)` applied pointwise. Preserves realness (P is odd) and the
/// L2 norm exactly up to rounding.
pub fn linear_propagate(f: &SpectralField, t: f64) -> SpectralField {
    let g = f.grid;
    let mut out = f.clone();
    for ix in 0..g.nx {
        for iy in 0..g.ny {
            let phase = t * dispersion_symbol(g.xi(ix), g.mu(iy));
            out.coeffs[[ix, iy]] *= Complex64::from_polar(1.0, phase);
        }
    }
    out
}

/// Wirtinger derivative as a Fourier multiplier.
pub fn wirtinger(f: &SpectralField, which: Wirtinger) -> SpectralField {
    f.apply_multiplier(|xi, mu| wirtinger_symbol(which, xi, mu))
        .expect("finite symbol")
}

/// The unimodular ratio operators `dbar^{-1} d` and `d^{-1} dbar`, with the
/// zero mode sent to zero. Preserves the L2 norm of mean-zero fields.
pub fn beurling_ratio(f: &SpectralField, which: Beurling) -> SpectralField {
    f.apply_multiplier(|xi, mu| beurling_symbol(which, xi, mu))
        .expect("finite symbol")
}

fn require_real(f: &SpectralField) -> Result<()> {
    if !f.real {
        return Err(NvError::InvalidParameter(
            "nonlinearity requires a real-flagged field".into(),
        ));
    }
    Ok(())
}

fn physical_product(fields: &[&SpectralField]) -> Result<SpectralField> {
    let grid = fields[0].grid;
    let mut prod = inverse_transform(fields[0])?.values;
    for f in &fields[1..] {
        grid.same_as(&f.grid)?;
        let p = inverse_transform(f)?.values;
        prod = &prod * &p;
    }
    forward_transform(&crate::field::PhysicalField::new(grid, prod)?)
}

/// Quadratic NV nonlinearity
/// `NL(u) = (3/4) d(u dbar^{-1} d u) + (3/4) dbar(u d^{-1} dbar u)`.
///
/// Bilinear form: `nl_nv_bilinear(u, v)` computes
/// `(3/4) d(u dbar^{-1} d v) + (3/4) dbar(u d^{-1} dbar v)`.
/// Output is real for real input (the two terms are conjugate), has zero
/// mean (total-derivative structure), and is dealiased by the 2/3 rule.
pub fn nl_nv(u: &SpectralField) -> Result<SpectralField> {
    require_real(u)?;
    nl_nv_bilinear(u, u)
}

pub fn nl_nv_bilinear(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    u.grid.same_as(&v.grid)?;
    let a = beurling_ratio(v, Beurling::DBarInvD);
    let t1 = {
        let mut p = physical_product(&[u, &a])?;
        dealias_truncate(&mut p, Dealias::Quadratic);
        wirtinger(&p, Wirtinger::D)
    };
    let b = beurling_ratio(v, Beurling::DInvDBar);
    let t2 = {
        let mut p = physical_product(&[u, &b])?;
        dealias_truncate(&mut p, Dealias::Quadratic);
        wirtinger(&p, Wirtinger::DBar)
    };
    let mut out = t1.scale(Complex64::new(0.75, 0.0))
        .add(&t2.scale(Complex64::new(0.75, 0.0)))?;
    dealias_truncate(&mut out, Dealias::Quadratic);
    out.real = u.real && v.real;
    Ok(out)
}

/// Cubic mNV nonlinearity, sum of the four displayed terms:
///
/// `mNL1 = (3/4) du * dbar^{-1} d(|u|^2)`,
/// `mNL2 = (3/4) dbar u * d^{-1} dbar(|u|^2)`,
/// `mNL3 = (3/4) u * dbar^{-1}[d(conj(u) du)]`,
/// `mNL4 = (3/4) u * d^{-1}[dbar(conj(u) dbar u)]`,
///
/// with the inverse operators acting on the bracketed products.
/// Dealiased by the 1/2 rule.
pub fn nl_mnv(u: &SpectralField) -> Result<SpectralField> {
    require_real(u)?;
    // |u|^2 = u * conj(u) = u^2 for real u. Pair products of band <= nx/4
    // inputs are exactly representable (sums stay below the Nyquist bin), so
    // only the final output is truncated.
    let usq = physical_product(&[u, u])?;

    let du = wirtinger(u, Wirtinger::D);
    let dbu = wirtinger(u, Wirtinger::DBar);

    // term 1: (3/4) du * dbar^{-1} d (|u|^2)
    let m1 = {
        let inner = beurling_ratio(&usq, Beurling::DBarInvD);
        physical_product(&[&du, &inner])?
    };
    // term 2: (3/4) dbar u * d^{-1} dbar (|u|^2)
    let m2 = {
        let inner = beurling_ratio(&usq, Beurling::DInvDBar);
        physical_product(&[&dbu, &inner])?
    };
    // term 3: (3/4) u * dbar^{-1}[d(conj(u) du)]
    let m3 = {
        let udu = physical_product(&[u, &du])?; // conj(u) = u (real)
        let inner = beurling_ratio(&udu, Beurling::DBarInvD);
        physical_product(&[u, &inner])?
    };
    // term 4: (3/4) u * d^{-1}[dbar(conj(u) dbar u)]
    let m4 = {
        let udbu = physical_product(&[u, &dbu])?;
        let inner = beurling_ratio(&udbu, Beurling::DInvDBar);
        physical_product(&[u, &inner])?
    };

    let c = Complex64::new(0.75, 0.0);
    let mut out = m1
        .scale(c)
        .add(&m2.scale(c))?
        .add(&m3.scale(c))?
        .add(&m4.scale(c))?;
    dealias_truncate(&mut out, Dealias::Cubic);
    out.real = true;
    Ok(out)
}

/// The right-hand side of `du_hat/dt = i P u_hat - NL_hat(u)` used by the
/// integrators: returns `-NL(u)` for the configured equation.
pub fn nonlinear_rhs(u: &SpectralField, equation: Equation) -> Result<SpectralField> {
    let nl = match equation {
        Equation::Nv => nl_nv(u)?,
        Equation::Mnv => nl_mnv(u)?,
        Equation::Linear => SpectralField::zero(u.grid),
    };
    Ok(nl.scale(Complex64::new(-1.0, 0.0)))
}

/// Which evolution equation the stepper integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Nv,
    Mnv,
    /// Nonlinearity disabled: the flow is exactly `exp(i t P)`.
    Linear,
}

/// Spectral rescaling `phi_lambda(x) = lambda^{-a} phi(x / lambda)` realized
/// by reinterpreting the same coefficient table on the box scaled by
/// `lambda` (exact: the series for `phi(x/lambda)` on the larger box has the
/// same coefficients at frequencies `xi/lambda`).
pub fn rescale_field(f: &SpectralField, lambda: f64, amp_exponent: f64) -> Result<SpectralField> {
    if lambda <= 0.0 || lambda.log2().fract() != 0.0 {
        return Err(NvError::InvalidParameter(format!(
            "lambda must be a power of 2 (got {lambda})"
        )));
    }
    let g = f.grid;
    let grid = GridSpec::new(g.nx, g.ny, g.lx * lambda, g.ly * lambda)?;
    let amp = lambda.powf(-amp_exponent);
    Ok(SpectralField {
        grid,
        coeffs: f.coeffs.mapv(|z| z * amp),
        real: f.real,
    })
}
