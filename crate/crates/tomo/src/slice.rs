//! The section function A_K(xi, t) (Radon transform of the indicator),
//! cutoff volumes, Fourier slices, and 3-d back-projection inversion.
//!
//! Dispatch: ellipsoids use the affine-image closed form, polytopes use
//! interval/polygon clipping, smooth bodies use chord bisection on the
//! convex gauge, and a seeded Monte-Carlo path is available everywhere.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::bodies::{Body, Direction};
use crate::error::{Result, TomoError};
use crate::grid::DirectionGrid;
use crate::quad::{adaptive_simpson, unit_ball_volume, GaussRule};

/// Fraction of the support width inside which tangential slices are
/// clamped to zero on the quadrature paths (the derivative square-root
/// singularity makes them unreliable there).
const TANGENCY_CLAMP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadMethod {
    /// Per-representation default: exact for ellipsoids, clipping for
    /// polytopes, chord/tensor-Gauss otherwise.
    Auto,
    Exact,
    Clipping,
    TensorGauss,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub method: QuadMethod,
    /// Points per axis for the tensor-Gauss path.
    pub points: usize,
    /// Sample count for the Monte-Carlo path.
    pub samples: usize,
    pub seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            method: QuadMethod::Auto,
            points: 48,
            samples: 200_000,
            seed: 0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points == 0 || self.samples == 0 {
            return Err(TomoError::Invalid(
                "quadrature sample counts must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Sampled section profile of one direction on an offset grid.
#[derive(Debug, Clone)]
pub struct SectionProfile {
    pub xi: Direction,
    pub offsets: Vec<f64>,
    pub values: Vec<f64>,
    pub err: Vec<f64>,
    /// Support interval (b_minus, b_plus) of the profiled direction.
    pub support: (f64, f64),
}

fn mix_seed(seed: u64, xi: &Direction, t: f64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e3779b97f4a7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
    let mut acc = splitmix(seed ^ 0x746f6d6f);
    for &c in xi.coords().iter() {
        acc = splitmix(acc ^ c.to_bits());
    }
    splitmix(acc ^ t.to_bits())
}

/// Convex gauge about the body's center, with precomputation hoisted so the
/// ellipsoid shape is not re-factorized on every evaluation.
enum GaugeFn<'a> {
    Ellipsoid {
        chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
        center: &'a DVector<f64>,
    },
    Lp(&'a crate::bodies::LpBall),
}

impl GaugeFn<'_> {
    fn build(body: &Body) -> Option<GaugeFn<'_>> {
        match body {
            Body::Ellipsoid(e) => Some(GaugeFn::Ellipsoid {
                chol: e.shape().clone().cholesky()?,
                center: e.center(),
            }),
            Body::LpBall(b) => Some(GaugeFn::Lp(b)),
            _ => None,
        }
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        match self {
            GaugeFn::Ellipsoid { chol, center } => {
                let d = x - *center;
                chol.solve(&d).dot(&d).sqrt()
            }
            GaugeFn::Lp(b) => {
                let mut acc = 0.0;
                for i in 0..b.semiaxes.len() {
                    acc += ((x[i] - b.center[i]) / b.semiaxes[i]).abs().powf(b.p);
                }
                acc.powf(1.0 / b.p)
            }
        }
    }
}

fn golden_minimize<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

fn bisect_level<F: Fn(f64) -> f64>(f: &F, mut inside: f64, mut outside: f64, iters: usize) -> f64 {
    // f(inside) <= 1 < f(outside); returns the crossing
    for _ in 0..iters {
        let mid = 0.5 * (inside + outside);
        if f(mid) <= 1.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Chord length of the body along the line x0 + s e, s in [-s_bound, s_bound].
fn chord_length(body: &Body, gauge_fn: Option<&GaugeFn>, x0: &DVector<f64>, e: &DVector<f64>, s_bound: f64) -> f64 {
    if s_bound <= 0.0 {
        return 0.0;
    }
    if let Some(g) = gauge_fn {
        let phi = |s: f64| g.eval(&(x0 + e * s));
        let (s_star, min_val) = golden_minimize(&phi, -s_bound, s_bound, 70);
        if min_val > 1.0 {
            return 0.0;
        }
        let hi = if phi(s_bound) <= 1.0 {
            s_bound
        } else {
            bisect_level(&phi, s_star, s_bound, 70)
        };
        let lo = if phi(-s_bound) <= 1.0 {
            -s_bound
        } else {
            bisect_level(&phi, s_star, -s_bound, 70)
        };
        return (hi - lo).max(0.0);
    }
    // membership-only fallback: coarse scan, then bisection on the run ends
    let m = 513;
    let step = 2.0 * s_bound / (m - 1) as f64;
    let member = |s: f64| body.membership(&(x0 + e * s));
    let mut first = None;
    let mut last = None;
    for j in 0..m {
        let s = -s_bound + step * j as f64;
        if member(s) {
            if first.is_none() {
                first = Some(s);
            }
            last = Some(s);
        }
    }
    let (Some(mut lo), Some(mut hi)) = (first, last) else {
        return 0.0;
    };
    // refine outward
    let mut out = lo - step;
    for _ in 0..60 {
        let mid = 0.5 * (lo + out);
        if member(mid) {
            lo = mid;
        } else {
            out = mid;
        }
    }
    let mut out = hi + step;
    for _ in 0..60 {
        let mid = 0.5 * (hi + out);
        if member(mid) {
            hi = mid;
        } else {
            out = mid;
        }
    }
    (hi - lo).max(0.0)
}

fn exact_ellipsoid_section(e: &crate::bodies::Ellipsoid, xi: &Direction, t: f64) -> f64 {
    let n = e.center().len();
    let w2 = e.quad_form(xi);
    let w = w2.sqrt();
    let s = (t - e.center().dot(xi.coords())) / w;
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let kappa = unit_ball_volume(n - 1);
    kappa * e.det_shape_sqrt() / w * (1.0 - s * s).powf((n - 1) as f64 / 2.0)
}

fn clip_polygon_halfplane(poly: &[(f64, f64)], a: (f64, f64), b: f64) -> Vec<(f64, f64)> {
    // keep points with a.0*x + a.1*y <= b
    let mut out = Vec::with_capacity(poly.len() + 2);
    if poly.is_empty() {
        return out;
    }
    let val = |p: &(f64, f64)| a.0 * p.0 + a.1 * p.1 - b;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (vp, vq) = (val(&p), val(&q));
        if vp <= 0.0 {
            out.push(p);
        }
        if (vp < 0.0 && vq > 0.0) || (vp > 0.0 && vq < 0.0) {
            let s = vp / (vp - vq);
            out.push((p.0 + s * (q.0 - p.0), p.1 + s * (q.1 - p.1)));
        }
    }
    out
}

fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    let mut acc = 0.0;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        acc += p.0 * q.1 - q.0 * p.1;
    }
    0.5 * acc.abs()
}

fn clipping_section(p: &crate::bodies::Polytope, xi: &Direction, t: f64) -> f64 {
    let n = xi.dim();
    let basis = xi.orthonormal_complement();
    let x0 = xi.coords() * t;
    if n == 2 {
        let u = &basis[0];
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (a, b) in p.halfspaces() {
            let coef = a.dot(u);
            let rhs = b - a.dot(&x0);
            if coef.abs() < 1e-14 {
                if rhs < 0.0 {
                    return 0.0;
                }
            } else if coef > 0.0 {
                hi = hi.min(rhs / coef);
            } else {
                lo = lo.max(rhs / coef);
            }
        }
        (hi - lo).max(0.0)
    } else {
        let (u, v) = (&basis[0], &basis[1]);
        let big = p.vertices().iter().map(|w| w.norm()).fold(1.0, f64::max) * 4.0;
        let mut poly = vec![(-big, -big), (big, -big), (big, big), (-big, big)];
        for (a, b) in p.halfspaces() {
            poly = clip_polygon_halfplane(&poly, (a.dot(u), a.dot(v)), b - a.dot(&x0));
            if poly.is_empty() {
                return 0.0;
            }
        }
        polygon_area(&poly)
    }
}

fn tensor_gauss_section(
    body: &Body,
    xi: &Direction,
    t: f64,
    points: usize,
) -> (f64, f64) {
    let n = xi.dim();
    let r = body.bounding_radius();
    let s_bound = (r * r - t * t).max(0.0).sqrt();
    if s_bound == 0.0 {
        return (0.0, 0.0);
    }
    let gauge_fn = GaugeFn::build(body);
    let basis = xi.orthonormal_complement();
    let x0 = xi.coords() * t;
    if n == 2 {
        let len = chord_length(body, gauge_fn.as_ref(), &x0, &basis[0], s_bound);
        return (len, 1e-12 * (1.0 + len));
    }
    // n == 3: integrate the chord length over the in-plane axis
    let (u, v) = (&basis[0], &basis[1]);
    let chord = |s: f64| chord_length(body, gauge_fn.as_ref(), &(&x0 + u * s), v, s_bound);
    // locate the s-extent of the section
    let m = 129;
    let step = 2.0 * s_bound / (m - 1) as f64;
    let mut first = None;
    let mut last = None;
    for j in 0..m {
        let s = -s_bound + step * j as f64;
        if chord(s) > 0.0 {
            if first.is_none() {
                first = Some(s);
            }
            last = Some(s);
        }
    }
    let (Some(mut lo), Some(mut hi)) = (first, last) else {
        return (0.0, 0.0);
    };
    let mut out = lo - step;
    for _ in 0..50 {
        let mid = 0.5 * (lo + out);
        if chord(mid) > 0.0 {
            lo = mid;
        } else {
            out = mid;
        }
    }
    let mut out = hi + step;
    for _ in 0..50 {
        let mid = 0.5 * (hi + out);
        if chord(mid) > 0.0 {
            hi = mid;
        } else {
            out = mid;
        }
    }
    if hi <= lo {
        return (0.0, 0.0);
    }
    // sine substitution clusters nodes at the square-root endpoints
    let integrate = |npts: usize| -> f64 {
        let rule = GaussRule::new(npts);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        rule.integrate(
            -std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2,
            |theta| chord(mid + half * theta.sin()) * half * theta.cos(),
        )
    };
    let full = integrate(points.max(8));
    let coarse = integrate((points.max(8) / 2).max(4));
    (full, (full - coarse).abs().max(1e-13 * (1.0 + full)))
}

fn monte_carlo_section(
    body: &Body,
    xi: &Direction,
    t: f64,
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let n = xi.dim();
    let r = body.bounding_radius();
    let s_bound = (r * r - t * t).max(0.0).sqrt();
    if s_bound == 0.0 {
        return (0.0, 0.0);
    }
    let basis = xi.orthonormal_complement();
    let x0 = xi.coords() * t;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, xi, t));
    let mut hits = 0usize;
    let mut x = DVector::zeros(n);
    for _ in 0..samples {
        x.copy_from(&x0);
        for b in &basis {
            let s = rng.gen_range(-s_bound..s_bound);
            x.axpy(s, b, 1.0);
        }
        if body.membership(&x) {
            hits += 1;
        }
    }
    let cell = (2.0 * s_bound).powi((n - 1) as i32);
    let p = hits as f64 / samples as f64;
    let value = cell * p;
    let sigma = cell * (p * (1.0 - p) / samples as f64).sqrt();
    (value, sigma)
}

/// (n-1)-volume of K intersected with the hyperplane <x, xi> = t, with an
/// error estimate. Returns (0, 0) outside the support interval.
pub fn section_function(
    body: &Body,
    xi: &Direction,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    cfg.validate()?;
    let (b_minus, b_plus) = body.support_interval(xi)?;
    let width = b_plus - b_minus;
    let eps = TANGENCY_CLAMP * width;
    if t <= b_minus || t >= b_plus {
        return Ok((0.0, 0.0));
    }
    let method = match cfg.method {
        QuadMethod::Auto => match body {
            Body::Ellipsoid(_) => QuadMethod::Exact,
            Body::Polytope(_) => QuadMethod::Clipping,
            _ => QuadMethod::TensorGauss,
        },
        m => m,
    };
    match method {
        QuadMethod::Exact => match body {
            Body::Ellipsoid(e) => Ok((exact_ellipsoid_section(e, xi, t), 0.0)),
            _ => Err(TomoError::Unsupported(
                "exact section path exists for ellipsoids only".into(),
            )),
        },
        QuadMethod::Clipping => match body {
            Body::Polytope(p) => {
                let v = clipping_section(p, xi, t);
                Ok((v, 1e-13 * (1.0 + v)))
            }
            _ => Err(TomoError::Unsupported(
                "clipping section path exists for polytopes only".into(),
            )),
        },
        QuadMethod::TensorGauss => {
            if t <= b_minus + eps || t >= b_plus - eps {
                return Ok((0.0, 0.0));
            }
            Ok(tensor_gauss_section(body, xi, t, cfg.points))
        }
        QuadMethod::MonteCarlo => {
            if t <= b_minus + eps || t >= b_plus - eps {
                return Ok((0.0, 0.0));
            }
            Ok(monte_carlo_section(body, xi, t, cfg.samples, cfg.seed))
        }
        QuadMethod::Auto => unreachable!(),
    }
}

/// Chebyshev-distributed offsets on (lo, hi), ascending.
pub fn chebyshev_points(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..m)
        .map(|i| {
            let angle = std::f64::consts::PI * (2.0 * (m - 1 - i) as f64 + 1.0) / (2.0 * m as f64);
            mid + half * angle.cos()
        })
        .collect()
}

/// Section profile on Chebyshev offsets over the full support interval.
pub fn section_profile(
    body: &Body,
    xi: &Direction,
    grid_size: usize,
    cfg: &QuadratureConfig,
) -> Result<SectionProfile> {
    let (b_minus, b_plus) = body.support_interval(xi)?;
    section_profile_on(body, xi, (b_minus, b_plus), grid_size, cfg)
}

/// Section profile on Chebyshev offsets over an explicit interval.
pub fn section_profile_on(
    body: &Body,
    xi: &Direction,
    interval: (f64, f64),
    grid_size: usize,
    cfg: &QuadratureConfig,
) -> Result<SectionProfile> {
    if grid_size < 8 {
        return Err(TomoError::Invalid("profile grid size must be >= 8".into()));
    }
    let support = body.support_interval(xi)?;
    let offsets = chebyshev_points(interval.0, interval.1, grid_size);
    let mut values = Vec::with_capacity(grid_size);
    let mut err = Vec::with_capacity(grid_size);
    for &t in &offsets {
        let (v, e) = section_function(body, xi, t, cfg)?;
        values.push(v);
        err.push(e);
    }
    Ok(SectionProfile {
        xi: xi.clone(),
        offsets,
        values,
        err,
        support,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffSign {
    Minus,
    Plus,
}

/// Cutoff volume: V- integrates the section function over [b_minus, t];
/// V+ is Vol(K) - V-. The offset is clamped to the support interval.
pub fn cutoff_volume(
    body: &Body,
    xi: &Direction,
    t: f64,
    sign: CutoffSign,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (b_minus, b_plus) = body.support_interval(xi)?;
    let tc = t.clamp(b_minus, b_plus);
    let section = |s: f64| section_function(body, xi, s, cfg).map(|(v, _)| v).unwrap_or(0.0);
    let scale = (b_plus - b_minus) * section(0.5 * (b_minus + b_plus)).max(1e-3);
    let tol = 1e-11 * scale.max(1e-6);
    let v_minus = adaptive_simpson(&section, b_minus, tc, tol, 44)?.0;
    match sign {
        CutoffSign::Minus => Ok(v_minus),
        CutoffSign::Plus => {
            let vol = adaptive_simpson(&section, b_minus, b_plus, tol, 44)?.0;
            Ok(vol - v_minus)
        }
    }
}

/// Total volume as the full integral of the section function.
pub fn volume(body: &Body, xi: &Direction, cfg: &QuadratureConfig) -> Result<f64> {
    let (_, b_plus) = body.support_interval(xi)?;
    cutoff_volume(body, xi, b_plus, CutoffSign::Minus, cfg)
}

/// Fourier slice: hat{chi}_K(lambda xi) = int e^{i lambda t} A_K(xi, t) dt.
///
/// Sine substitution absorbs the square-root vanishing at the tangency
/// offsets; composite Gauss panels resolve the oscillation.
pub fn fourier_slice(
    body: &Body,
    xi: &Direction,
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let (b_minus, b_plus) = body.support_interval(xi)?;
    let mid = 0.5 * (b_minus + b_plus);
    let half = 0.5 * (b_plus - b_minus);
    let rule = GaussRule::new(12);
    let panels = (8.0 + lambda.abs() * half / 2.0).ceil() as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    let theta_lo = -std::f64::consts::FRAC_PI_2;
    let theta_hi = std::f64::consts::FRAC_PI_2;
    let dtheta = (theta_hi - theta_lo) / panels as f64;
    for k in 0..panels {
        let a = theta_lo + dtheta * k as f64;
        let b = a + dtheta;
        acc += rule.integrate_complex(a, b, |theta| {
            let t = mid + half * theta.sin();
            let (v, _) = section_function(body, xi, t, cfg).unwrap_or((0.0, 0.0));
            Complex64::new(0.0, lambda * t).exp() * v * half * theta.cos()
        });
    }
    Ok(acc)
}

/// Back-projection inversion output.
#[derive(Debug, Clone, Copy)]
pub struct Backprojection {
    pub value: f64,
    /// Set when some direction's offset sits within reach of a tangency
    /// offset; the differentiated profile is unreliable there.
    pub near_boundary: bool,
}

/// Odd-dimensional (n = 3) back-projection inversion from an arbitrary
/// profile sampler: -1/(8 pi^2) int_{S^2} d^2/dt^2 A(xi, <x, xi>) dS(xi).
pub fn invert_radon_3d<F>(sampler: &F, x: &DVector<f64>, grid: &DirectionGrid, h_fd: f64) -> f64
where
    F: Fn(&Direction, f64) -> f64,
{
    assert_eq!(grid.dim, 3, "back-projection inversion is implemented for n = 3");
    let mut acc = 0.0;
    for (xi, w) in grid.points.iter().zip(&grid.weights) {
        let tau = xi.dot(x);
        let second =
            (sampler(xi, tau + h_fd) - 2.0 * sampler(xi, tau) + sampler(xi, tau - h_fd)) / (h_fd * h_fd);
        acc += w * second;
    }
    -acc / (8.0 * std::f64::consts::PI * std::f64::consts::PI)
}

/// Fraction of the support width used for the mollified second derivative
/// in the body-backed back-projection.
const BACKPROJECTION_H: f64 = 0.1;

/// Second derivative of the C^2 bump (35/32)(1-u^2)^3 on [-1, 1].
fn bump_dd(u: f64) -> f64 {
    35.0 / 32.0 * (-30.0 * u.powi(4) + 36.0 * u * u - 6.0)
}

/// Back-projection of a body's own section function; reconstructs the
/// indicator (1 inside, 0 outside).
///
/// A plain second difference at step h misses the kink of A at the
/// tangency offsets unless the direction grid resolves a band of width
/// ~h/|x| on the sphere, which poisons exterior points. Instead the
/// second derivative is taken against a C^2 mollifier of width a fixed
/// fraction of the support width: exact for the quadratic profiles of
/// ellipsoids, and smooth enough in xi for the sphere grid to capture
/// the boundary band.
pub fn invert_radon_3d_body(
    body: &Body,
    x: &DVector<f64>,
    grid: &DirectionGrid,
    cfg: &QuadratureConfig,
) -> Result<Backprojection> {
    if body.dim() != 3 {
        return Err(TomoError::DimensionMismatch {
            expected: 3,
            got: body.dim(),
        });
    }
    let rule = GaussRule::new(24);
    let mut acc = 0.0;
    let mut near_boundary = false;
    for (xi, w) in grid.points.iter().zip(&grid.weights) {
        let (b_minus, b_plus) = body.support_interval(xi)?;
        let h = BACKPROJECTION_H * (b_plus - b_minus);
        let tau = xi.dot(x);
        if (tau - b_minus).abs() < 1.5 * h || (tau - b_plus).abs() < 1.5 * h {
            near_boundary = true;
        }
        if tau + h <= b_minus || tau - h >= b_plus {
            continue; // mollifier support entirely outside the profile
        }
        let a = |t: f64| section_function(body, xi, t, cfg).map(|(v, _)| v).unwrap_or(0.0);
        // d^2/dtau^2 (A * phi_h)(tau) = (1/h^2) int A(tau + h u) phi''(u) du,
        // split at the profile kinks b-+ so each Gauss panel sees a smooth piece
        let mut cuts = vec![-1.0];
        for b in [b_minus, b_plus] {
            let u = (b - tau) / h;
            if u > -1.0 && u < 1.0 {
                cuts.push(u);
            }
        }
        cuts.push(1.0);
        cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let mut second = 0.0;
        for pair in cuts.windows(2) {
            second += rule.integrate(pair[0], pair[1], |u| a(tau + h * u) * bump_dd(u));
        }
        acc += w * second / (h * h);
    }
    Ok(Backprojection {
        value: -acc / (8.0 * std::f64::consts::PI * std::f64::consts::PI),
        near_boundary,
    })
}

/// Profile of sections by planes parallel to the tangent plane at a
/// boundary point, marched inward: values[i] = A(nu_a, <a, nu_a> - t_i).
pub fn local_section_profile(
    body: &Body,
    a: &DVector<f64>,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<SectionProfile> {
    let gauge_val = body.minkowski_functional(a)?;
    if (gauge_val - 1.0).abs() > 1e-7 {
        return Err(TomoError::Invalid(format!(
            "point is not on the boundary (gauge = {gauge_val})"
        )));
    }
    let nu = body.outward_normal(a)?;
    let tangent_offset = nu.dot(a);
    let support = body.support_interval(&nu)?;
    let mut values = Vec::with_capacity(t_grid.len());
    let mut err = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let (v, e) = section_function(body, &nu, tangent_offset - t, cfg)?;
        values.push(v);
        err.push(e);
    }
    Ok(SectionProfile {
        xi: nu,
        offsets: t_grid.to_vec(),
        values,
        err,
        support,
    })
}
