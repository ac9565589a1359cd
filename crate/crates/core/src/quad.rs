//! Quadrature rules: Gauss-Legendre nodes/weights (Newton on the Legendre
//! recurrence) and a double-exponential rule for integrands with inverse
//! square-root endpoint singularities.

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && n <= 256);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate `f` over `[a, b]` with an `n`-point Gauss-Legendre rule.
pub fn integrate_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let d = 0.5 * (b + a);
    xs.iter().zip(&ws).map(|(&x, &w)| w * f(c * x + d)).sum::<f64>() * c
}

/// Tensor-product 2D Gauss-Legendre over a rectangle.
pub fn integrate_gl_2d(
    f: impl Fn(f64, f64) -> f64,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    n: usize,
) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let cx = 0.5 * (bx - ax);
    let dx = 0.5 * (bx + ax);
    let cy = 0.5 * (by - ay);
    let dy = 0.5 * (by + ay);
    let mut acc = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            acc += ws[i] * ws[j] * f(cx * x + dx, cy * y + dy);
        }
    }
    acc * cx * cy
}

/// Double-exponential (tanh-sinh) quadrature on `[a, b]`. Handles integrable
/// endpoint singularities like `1/sqrt(b - x)`.
pub fn integrate_tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, level: u32) -> f64 {
    let c = 0.5 * (b - a);
    let d = 0.5 * (b + a);
    let h = 3.0 / f64::from(1u32 << level);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut acc = 0.0;
    let kmax = (4.0 / h).ceil() as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let sh = half_pi * t.sinh();
        let x = sh.tanh();
        let w = half_pi * t.cosh() / sh.cosh().powi(2);
        let xx = c * x + d;
        if xx <= a || xx >= b {
            continue;
        }
        let v = f(xx);
        if v.is_finite() {
            acc += w * v;
        }
    }
    acc * c * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_exact_on_polynomials() {
        // n-point GL is exact for degree 2n-1
        let v = integrate_gl(|x| x.powi(7) - 3.0 * x.powi(4) + x, -1.0, 1.0, 4);
        let exact = -3.0 * (2.0 / 5.0);
        assert!((v - exact).abs() < 1e-13);
        let v2 = integrate_gl(|x| x.exp(), 0.0, 1.0, 16);
        assert!((v2 - (1.0f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn gl_2d_separable() {
        let v = integrate_gl_2d(|x, y| x * x * y, (0.0, 2.0), (1.0, 3.0), 8);
        let exact = (8.0 / 3.0) * 4.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_sqrt_singularity() {
        // integral of 1/sqrt(1-x) over [0,1] = 2
        let v = integrate_tanh_sinh(|x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, 6);
        assert!((v - 2.0).abs() < 1e-9, "got {v}");
        // smooth integrand sanity
        let s = integrate_tanh_sinh(|x| x.sin(), 0.0, std::f64::consts::PI, 6);
        assert!((s - 2.0).abs() < 1e-10);
    }
}
