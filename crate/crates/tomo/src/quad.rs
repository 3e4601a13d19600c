//! One-dimensional quadrature building blocks shared across the crate:
//! Gauss-Legendre rules, adaptive Simpson with an error estimate, and the
//! half-integer gamma values needed for unit-ball volumes.

use num_complex::Complex64;

use crate::error::{Result, TomoError};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; accurate to machine
/// precision for the modest orders (n <= 256) used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by upward recurrence.
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
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// A reusable Gauss-Legendre rule with interval mapping.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Complex64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }
}

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
///
/// Returns (value, error estimate). Errors out if the recursion depth cap
/// is reached before the local tolerance is met, carrying the achieved
/// estimate so callers can still report it.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<(f64, f64)> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        err_acc: &mut f64,
        failed: &mut bool,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        // delta cannot be resolved below rounding noise in the panel sum
        let noise = 4.0 * f64::EPSILON * (left.abs() + right.abs());
        if delta.abs() <= 15.0 * tol.max(noise) || (b - a) < 1e-14 {
            *err_acc += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        if depth == 0 {
            *failed = true;
            *err_acc += delta.abs();
            return left + right;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err_acc, failed)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err_acc, failed)
    }

    if a == b {
        return Ok((0.0, 0.0));
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    let mut err = 0.0;
    let mut failed = false;
    let value = recurse(f, a, b, fa, fm, fb, whole, tol, max_depth, &mut err, &mut failed);
    if failed {
        return Err(TomoError::QuadratureNonConvergence {
            estimate: value,
            error: err,
        });
    }
    Ok((value, err))
}

/// Gamma(m/2) for positive integer m, by the half-integer recurrence.
pub fn gamma_half(m: usize) -> f64 {
    assert!(m >= 1);
    let mut val = if m.is_multiple_of(2) { 1.0 } else { std::f64::consts::PI.sqrt() };
    // climb from Gamma(1)=1 or Gamma(1/2)=sqrt(pi) up to Gamma(m/2)
    let mut two_k = if m.is_multiple_of(2) { 2 } else { 1 };
    while two_k + 2 <= m {
        val *= two_k as f64 / 2.0;
        two_k += 2;
    }
    val
}

/// Volume of the unit ball in dimension m (kappa_m = pi^{m/2} / Gamma(m/2 + 1)).
pub fn unit_ball_volume(m: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    std::f64::consts::PI.powf(m as f64 / 2.0) / gamma_half(m + 2)
}
