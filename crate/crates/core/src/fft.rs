//! Thin wrapper over rustfft: cached plans, in-place 2D transforms over
//! `ndarray` storage, and a 1D batch transform along the time axis.
//!
//! All scratch is per call; plans are shared through a thread-local cache so
//! concurrent transforms never contend.

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry((len, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    })
}

fn transform_rows(a: &mut Array2<Complex64>, inverse: bool) {
    let len = a.ncols();
    let p = plan(len, inverse);
    let mut scratch = vec![Complex64::default(); p.get_inplace_scratch_len()];
    for mut row in a.rows_mut() {
        let slice = row.as_slice_mut().expect("row-major storage");
        p.process_with_scratch(slice, &mut scratch);
    }
}

/// In-place unnormalized 2D DFT (rows, then columns via transpose).
pub fn fft2(a: &mut Array2<Complex64>, inverse: bool) {
    transform_rows(a, inverse);
    let mut t = a.t().to_owned().as_standard_layout().into_owned();
    transform_rows(&mut t, inverse);
    *a = t.t().to_owned().as_standard_layout().into_owned();
}

/// Forward series transform: physical samples -> Fourier coefficients
/// normalized so a constant field has coefficient equal to its value.
pub fn forward2(samples: &Array2<Complex64>) -> Array2<Complex64> {
    let mut a = samples.clone();
    fft2(&mut a, false);
    let scale = 1.0 / (a.len() as f64);
    a.mapv_inplace(|z| z * scale);
    a
}

/// Inverse of [`forward2`].
pub fn inverse2(coeffs: &Array2<Complex64>) -> Array2<Complex64> {
    let mut a = coeffs.clone();
    fft2(&mut a, true);
    a
}

/// Forward transform along axis 0 of an `(nt, nx, ny)` stack of time slices,
/// normalized as a Fourier series in time.
pub fn forward_time(slices: &Array3<Complex64>) -> Array3<Complex64> {
    let (nt, nx, ny) = slices.dim();
    let p = plan(nt, false);
    let mut scratch = vec![Complex64::default(); p.get_inplace_scratch_len()];
    let mut out = Array3::zeros((nt, nx, ny));
    let mut buf = vec![Complex64::default(); nt];
    let scale = 1.0 / nt as f64;
    for ix in 0..nx {
        for iy in 0..ny {
            for it in 0..nt {
                buf[it] = slices[[it, ix, iy]];
            }
            p.process_with_scratch(&mut buf, &mut scratch);
            for it in 0..nt {
                out[[it, ix, iy]] = buf[it] * scale;
            }
        }
    }
    out
}

/// Inverse of [`forward_time`].
pub fn inverse_time(coeffs: &Array3<Complex64>) -> Array3<Complex64> {
    let (nt, nx, ny) = coeffs.dim();
    let p = plan(nt, true);
    let mut scratch = vec![Complex64::default(); p.get_inplace_scratch_len()];
    let mut out = Array3::zeros((nt, nx, ny));
    let mut buf = vec![Complex64::default(); nt];
    for ix in 0..nx {
        for iy in 0..ny {
            for it in 0..nt {
                buf[it] = coeffs[[it, ix, iy]];
            }
            p.process_with_scratch(&mut buf, &mut scratch);
            for it in 0..nt {
                out[[it, ix, iy]] = buf[it];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    #[test]
    fn forward_inverse_roundtrip() {
        let mut a = Array2::<Complex64>::zeros((8, 16));
        for (i, v) in a.iter_mut().enumerate() {
            *v = Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos());
        }
        let b = inverse2(&forward2(&a));
        let err: f64 = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-13, "roundtrip error {err}");
    }

    #[test]
    fn constant_maps_to_zero_mode() {
        let a = Array2::<Complex64>::from_elem((8, 8), Complex64::new(3.0, 0.0));
        let c = forward2(&a);
        assert!((c[[0, 0]] - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        let rest: f64 = c.iter().skip(1).map(|z| z.norm()).sum();
        assert!(rest < 1e-12);
    }
}
