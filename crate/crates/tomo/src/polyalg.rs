//! Polynomial algebra over the offset variable: Chebyshev least-squares
//! fitting with degree detection, polynomiality verdicts for section
//! profiles and their powers, the principal-value Hilbert transform, and
//! the discriminant / real-singularity machinery for algebraic section
//! equations.

use nalgebra::{DMatrix, DVector};

use crate::bodies::{Body, Direction};
use crate::error::{Result, TomoError};
use crate::quad::adaptive_simpson;
use crate::report::{DetectionReport, FitItem, Verdict};
use crate::slice::{chebyshev_points, section_function, section_profile_on, QuadratureConfig, SectionProfile};

/// Default relative-residual threshold for "is a polynomial".
pub const DEFAULT_FIT_TOL: f64 = 1e-7;
/// A fit is declared not-polynomial when even the maximal degree leaves a
/// residual above PLATEAU_FACTOR * tol.
pub const PLATEAU_FACTOR: f64 = 10.0;

/// Dense polynomial in the monomial basis, coefficients low-to-high.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Trims leading coefficients below 1e-12 of the largest magnitude.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![0.0] }
    }

    fn trim(&mut self) {
        let floor = 1e-12
            * self
                .coeffs
                .iter()
                .fold(0.0f64, |m, c| m.max(c.abs()));
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().abs() <= floor {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| (i + 1) as f64 * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut c = vec![0.0; self.coeffs.len().max(other.coeffs.len())];
        for (i, v) in self.coeffs.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in other.coeffs.iter().enumerate() {
            c[i] += v;
        }
        Poly::new(c)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

/// Chebyshev least-squares fit on a stated interval.
#[derive(Debug, Clone)]
pub struct ChebFit {
    pub interval: (f64, f64),
    /// Chebyshev-basis coefficients c_k of sum c_k T_k(u), u the affine
    /// image of t on [-1, 1].
    pub coeffs: Vec<f64>,
}

fn cheb_design(ts: &[f64], interval: (f64, f64), degree: usize) -> DMatrix<f64> {
    let (a, b) = interval;
    let mut m = DMatrix::zeros(ts.len(), degree + 1);
    for (row, &t) in ts.iter().enumerate() {
        let u = (2.0 * t - a - b) / (b - a);
        let mut t0 = 1.0;
        let mut t1 = u;
        m[(row, 0)] = 1.0;
        if degree >= 1 {
            m[(row, 1)] = u;
        }
        for k in 2..=degree {
            let t2 = 2.0 * u * t1 - t0;
            m[(row, k)] = t2;
            t0 = t1;
            t1 = t2;
        }
    }
    m
}

impl ChebFit {
    /// Least-squares fit of (ts, ys) at the given degree via SVD.
    pub fn fit(ts: &[f64], ys: &[f64], degree: usize, interval: (f64, f64)) -> Result<ChebFit> {
        if ts.len() != ys.len() || ts.len() <= degree {
            return Err(TomoError::NotEnoughSamples {
                needed: degree + 1,
                got: ts.len(),
            });
        }
        let design = cheb_design(ts, interval, degree);
        let svd = design.svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if smin <= 0.0 || smax / smin > 1e12 {
            return Err(TomoError::IllConditionedFit {
                cond: if smin > 0.0 { smax / smin } else { f64::INFINITY },
            });
        }
        let rhs = DVector::from_column_slice(ys);
        let sol = svd
            .solve(&rhs, 0.0)
            .map_err(|e| TomoError::Invalid(e.to_string()))?;
        Ok(ChebFit {
            interval,
            coeffs: sol.iter().copied().collect(),
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (a, b) = self.interval;
        let u = (2.0 * t - a - b) / (b - a);
        // Clenshaw
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let next = 2.0 * u * b1 - b2 + c;
            b2 = b1;
            b1 = next;
        }
        self.coeffs[0] + u * b1 - b2
    }

    /// Derivative as another Chebyshev series on the same interval.
    pub fn derivative(&self) -> ChebFit {
        let n = self.coeffs.len() - 1;
        if n == 0 {
            return ChebFit {
                interval: self.interval,
                coeffs: vec![0.0],
            };
        }
        let mut d = vec![0.0; n + 2];
        for k in (1..=n).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * self.coeffs[k];
        }
        d[0] /= 2.0;
        d.truncate(n);
        let scale = 2.0 / (self.interval.1 - self.interval.0);
        ChebFit {
            interval: self.interval,
            coeffs: d.iter().map(|c| c * scale).collect(),
        }
    }

    /// Conversion to the monomial basis in the original variable t.
    pub fn to_poly(&self) -> Poly {
        // Build T_k(u) in monomials of u, accumulate, then substitute
        // u = alpha t + beta.
        let deg = self.coeffs.len() - 1;
        let mut tk_prev = Poly::new(vec![1.0]);
        let mut tk = Poly::new(vec![0.0, 1.0]);
        let mut acc = tk_prev.scale(self.coeffs[0]);
        if deg >= 1 {
            acc = acc.add(&tk.scale(self.coeffs[1]));
        }
        let two_u = Poly::new(vec![0.0, 2.0]);
        for k in 2..=deg {
            let next = two_u.mul(&tk).add(&tk_prev.scale(-1.0));
            acc = acc.add(&next.scale(self.coeffs[k]));
            tk_prev = tk;
            tk = next;
        }
        let (a, b) = self.interval;
        let alpha = 2.0 / (b - a);
        let beta = -(a + b) / (b - a);
        let sub = Poly::new(vec![beta, alpha]);
        // Horner in the polynomial ring
        let mut out = Poly::zero();
        for &c in acc.coeffs().iter().rev() {
            out = out.mul(&sub).add(&Poly::new(vec![c]));
        }
        out
    }
}

/// Result of a degree-detecting polynomial fit.
#[derive(Debug, Clone)]
pub struct PolyFitReport {
    pub best_degree: Option<usize>,
    pub poly: Poly,
    pub rms_residual: f64,
    pub max_residual: f64,
    /// max residual / max |sample value|
    pub relative_residual: f64,
    pub verdict: Verdict,
}

fn residuals(fit: &ChebFit, ts: &[f64], ys: &[f64]) -> (f64, f64) {
    let mut max_r = 0.0f64;
    let mut sum_sq = 0.0;
    for (&t, &y) in ts.iter().zip(ys) {
        let r = (fit.eval(t) - y).abs();
        max_r = max_r.max(r);
        sum_sq += r * r;
    }
    (max_r, (sum_sq / ts.len() as f64).sqrt())
}

/// Chebyshev least-squares fits of increasing degree; the best degree is
/// the smallest whose relative residual drops below `tol`. If even the
/// maximal degree leaves a residual above 10*tol the samples are declared
/// not-polynomial (residual plateau); otherwise inconclusive.
pub fn fit_polynomial(ts: &[f64], ys: &[f64], max_degree: usize, tol: f64) -> Result<PolyFitReport> {
    if ts.len() != ys.len() || ts.len() < max_degree + 5 {
        return Err(TomoError::NotEnoughSamples {
            needed: max_degree + 5,
            got: ts.len().min(ys.len()),
        });
    }
    let mut sorted: Vec<f64> = ts.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(TomoError::DuplicateSamples);
    }
    let interval = (sorted[0], *sorted.last().unwrap());
    let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    if scale == 0.0 {
        return Ok(PolyFitReport {
            best_degree: Some(0),
            poly: Poly::zero(),
            rms_residual: 0.0,
            max_residual: 0.0,
            relative_residual: 0.0,
            verdict: Verdict::Polynomial,
        });
    }
    let mut last = None;
    for degree in 0..=max_degree {
        let fit = ChebFit::fit(ts, ys, degree, interval)?;
        let (max_r, rms) = residuals(&fit, ts, ys);
        let rel = max_r / scale;
        if rel < tol {
            return Ok(PolyFitReport {
                best_degree: Some(degree),
                poly: fit.to_poly(),
                rms_residual: rms,
                max_residual: max_r,
                relative_residual: rel,
                verdict: Verdict::Polynomial,
            });
        }
        last = Some((fit, max_r, rms, rel));
    }
    let (fit, max_r, rms, rel) = last.unwrap();
    let verdict = if rel > PLATEAU_FACTOR * tol {
        Verdict::NotPolynomial
    } else {
        Verdict::Inconclusive
    };
    Ok(PolyFitReport {
        best_degree: None,
        poly: fit.to_poly(),
        rms_residual: rms,
        max_residual: max_r,
        relative_residual: rel,
        verdict,
    })
}

fn direction_label(xi: &Direction) -> String {
    let parts: Vec<String> = xi.coords().iter().map(|c| format!("{c:.4}")).collect();
    format!("xi=({})", parts.join(","))
}

/// Fraction of the support width trimmed off each end before fitting, to
/// keep the tangency square-root singularity of derivatives out of the fit.
pub const FIT_MARGIN: f64 = 1e-3;

fn profile_for_fit(
    body: &Body,
    xi: &Direction,
    grid_size: usize,
    cfg: &QuadratureConfig,
) -> Result<SectionProfile> {
    let (b_minus, b_plus) = body.support_interval(xi)?;
    let margin = FIT_MARGIN * (b_plus - b_minus);
    section_profile_on(body, xi, (b_minus + margin, b_plus - margin), grid_size, cfg)
}

fn polyfit_grid_size(max_degree: usize) -> usize {
    (2 * max_degree + 16).max(64)
}

/// Per-direction polynomiality test of the section function itself.
pub fn test_polynomial_integrability(
    body: &Body,
    directions: &[Direction],
    max_degree: usize,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<DetectionReport> {
    test_power_polynomiality(body, 1, directions, max_degree, tol, cfg)
}

/// Per-direction polynomiality test of A_K(xi, t)^m.
pub fn test_power_polynomiality(
    body: &Body,
    m: u32,
    directions: &[Direction],
    max_degree: usize,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<DetectionReport> {
    if directions.is_empty() {
        return Err(TomoError::Invalid("need at least one direction".into()));
    }
    if m == 0 {
        return Err(TomoError::Invalid("power must be >= 1".into()));
    }
    let grid_size = polyfit_grid_size(max_degree);
    let mut items = Vec::with_capacity(directions.len());
    for xi in directions {
        let profile = profile_for_fit(body, xi, grid_size, cfg)?;
        let ys: Vec<f64> = profile.values.iter().map(|v| v.powi(m as i32)).collect();
        let report = fit_polynomial(&profile.offsets, &ys, max_degree, tol)?;
        items.push(FitItem {
            label: direction_label(xi),
            degree: report.best_degree,
            relative_residual: report.relative_residual,
            verdict: report.verdict,
        });
    }
    let name = if m == 1 {
        "polynomial-integrability".to_string()
    } else {
        format!("power-polynomiality(m={m})")
    };
    Ok(DetectionReport::aggregate(
        &name,
        items,
        Verdict::Polynomial,
        Verdict::NotPolynomial,
    ))
}

/// Principal-value Hilbert transform (1/pi) p.v. int_{b-}^{b+} f(s)/(t-s) ds
/// of a function supported on [b-, b+], by singularity subtraction:
/// the regularized integrand (f(s)-f(t))/(t-s) plus the exact log term.
pub fn hilbert_pv<F: Fn(f64) -> f64>(f: &F, support: (f64, f64), t: f64) -> Result<f64> {
    let (b_minus, b_plus) = support;
    let width = b_plus - b_minus;
    if width <= 0.0 {
        return Err(TomoError::DegenerateWidth);
    }
    if t <= b_minus || t >= b_plus {
        // no singularity inside the support: plain integral
        let (v, _) = adaptive_simpson(&|s| f(s) / (t - s), b_minus, b_plus, 1e-9 * width, 40)?;
        return Ok(v / std::f64::consts::PI);
    }
    let ft = f(t);
    let guard = 1e-9 * width;
    let g = move |s: f64| {
        if (t - s).abs() < guard {
            // removable singularity: g -> -f'(t)
            let d = 1e-6 * width;
            -(f(t + d) - f(t - d)) / (2.0 * d)
        } else {
            (f(s) - ft) / (t - s)
        }
    };
    // sine substitution s = mid + halfw sin(theta): the square-root
    // behavior of section profiles at the tangency endpoints becomes
    // smooth in theta, so the adaptive rule converges at modest depth
    let mid = 0.5 * (b_minus + b_plus);
    let halfw = 0.5 * width;
    let gt = move |theta: f64| {
        let (sin, cos) = theta.sin_cos();
        g(mid + halfw * sin) * halfw * cos
    };
    let theta_t = ((t - mid) / halfw).clamp(-1.0, 1.0).asin();
    let tol = 1e-10 * width * (1.0 + ft.abs());
    // split at t so the singular point is only ever an endpoint
    let (left, _) = adaptive_simpson(&gt, -std::f64::consts::FRAC_PI_2, theta_t, tol, 40)?;
    let (right, _) = adaptive_simpson(&gt, theta_t, std::f64::consts::FRAC_PI_2, tol, 40)?;
    let log_term = ft * ((t - b_minus) / (b_plus - t)).ln();
    Ok((left + right + log_term) / std::f64::consts::PI)
}

/// Hilbert transform of a sampled profile (extended by zero outside its
/// support). The profile is interpolated at its Chebyshev offsets; the
/// warn flag is set when t sits in the outer 5% of the interval where the
/// interpolant degrades.
pub fn hilbert_transform(profile: &SectionProfile, t: f64) -> Result<(f64, bool)> {
    let lo = profile.offsets[0];
    let hi = *profile.offsets.last().unwrap();
    let interp = barycentric(&profile.offsets, &profile.values);
    // interpolation wiggle near the edges can stall the quadrature; the
    // achieved estimate is still meaningful there, flagged as unreliable
    let (value, mut warn) = match hilbert_pv(&|s| interp(s), (lo, hi), t) {
        Ok(v) => (v, false),
        Err(TomoError::QuadratureNonConvergence { estimate, .. }) => (estimate, true),
        Err(e) => return Err(e),
    };
    let margin = 0.05 * (hi - lo);
    warn = warn || t < lo + margin || t > hi - margin;
    Ok((value, warn))
}

/// Barycentric Lagrange interpolant through arbitrary distinct nodes.
fn barycentric<'a>(ts: &'a [f64], ys: &'a [f64]) -> impl Fn(f64) -> f64 + 'a {
    // O(m^2) weight computation; profiles are small
    let mut w = vec![1.0f64; ts.len()];
    for i in 0..ts.len() {
        for j in 0..ts.len() {
            if i != j {
                w[i] /= ts[i] - ts[j];
            }
        }
    }
    move |t: f64| {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..ts.len() {
            let d = t - ts[i];
            if d == 0.0 {
                return ys[i];
            }
            let c = w[i] / d;
            num += c * ys[i];
            den += c;
        }
        num / den
    }
}

/// Polynomiality of t -> (H A_K(xi, .))(t) sampled strictly inside the
/// support (interval shrunk to 90% about its midpoint). The theorem this
/// probes lives in even dimension; odd-dimensional bodies still run but
/// the report is labeled accordingly.
pub fn test_hilbert_polynomiality(
    body: &Body,
    directions: &[Direction],
    max_degree: usize,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<DetectionReport> {
    if directions.is_empty() {
        return Err(TomoError::Invalid("need at least one direction".into()));
    }
    let mut items = Vec::with_capacity(directions.len());
    let grid_size = (max_degree + 12).max(40);
    for xi in directions {
        let support = body.support_interval(xi)?;
        let mid = 0.5 * (support.0 + support.1);
        let half = 0.45 * (support.1 - support.0);
        let ts = chebyshev_points(mid - half, mid + half, grid_size);
        let f = |s: f64| section_function(body, xi, s, cfg).map(|(v, _)| v).unwrap_or(0.0);
        let mut ys = Vec::with_capacity(ts.len());
        for &t in &ts {
            // a stalled refinement still carries a tight error estimate,
            // far below the fit tolerances used here
            let y = match hilbert_pv(&f, support, t) {
                Ok(v) => v,
                Err(TomoError::QuadratureNonConvergence { estimate, .. }) => estimate,
                Err(e) => return Err(e),
            };
            ys.push(y);
        }
        let report = fit_polynomial(&ts, &ys, max_degree, tol)?;
        items.push(FitItem {
            label: direction_label(xi),
            degree: report.best_degree,
            relative_residual: report.relative_residual,
            verdict: report.verdict,
        });
    }
    let name = if body.dim().is_multiple_of(2) {
        "hilbert-polynomiality".to_string()
    } else {
        "hilbert-polynomiality(odd-dimension: outside the theorem's scope)".to_string()
    };
    Ok(DetectionReport::aggregate(
        &name,
        items,
        Verdict::Polynomial,
        Verdict::NotPolynomial,
    ))
}

/// k-th derivative at t = 0 of the Chebyshev interpolant of a profile,
/// restricted to the central half of its offset range.
pub fn derivative_at_zero(profile: &SectionProfile, k: usize) -> Result<f64> {
    if k > 12 {
        return Err(TomoError::DerivativeOrderTooLarge { order: k });
    }
    let lo = profile.offsets[0];
    let hi = *profile.offsets.last().unwrap();
    if lo >= 0.0 || hi <= 0.0 {
        return Err(TomoError::Invalid(
            "zero offset is not strictly inside the profile range".into(),
        ));
    }
    let r = 0.25 * (hi - lo);
    let window = (lo.max(-r), hi.min(r));
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&t, &y) in profile.offsets.iter().zip(&profile.values) {
        if t >= window.0 && t <= window.1 {
            ts.push(t);
            ys.push(y);
        }
    }
    if ts.len() < k + 7 {
        return Err(TomoError::NotEnoughSamples {
            needed: k + 7,
            got: ts.len(),
        });
    }
    let degree = (ts.len() - 5).min(16).max(k + 2);
    let mut fit = ChebFit::fit(&ts, &ys, degree, window)?;
    for _ in 0..k {
        fit = fit.derivative();
    }
    Ok(fit.eval(0.0))
}

/// One algebraic section equation Psi(t, w) = sum_j psi_j(t) w^j for a
/// fixed direction.
#[derive(Debug, Clone)]
pub struct AlgebraicEquation {
    psis: Vec<Poly>,
}

impl AlgebraicEquation {
    pub fn new(psis: Vec<Poly>) -> Result<Self> {
        if psis.len() < 2 {
            return Err(TomoError::Invalid(
                "equation must have positive degree in w".into(),
            ));
        }
        if psis.last().unwrap().is_zero() {
            return Err(TomoError::DegenerateLeadingCoefficient);
        }
        Ok(Self { psis })
    }

    pub fn psis(&self) -> &[Poly] {
        &self.psis
    }

    /// N = deg_w Psi
    pub fn degree_w(&self) -> usize {
        self.psis.len() - 1
    }

    /// max_j deg psi_j
    pub fn degree_t(&self) -> usize {
        self.psis.iter().map(Poly::degree).max().unwrap()
    }

    /// Coefficients of w -> Psi(t, w), low-to-high.
    pub fn w_coeffs_at(&self, t: f64) -> Vec<f64> {
        self.psis.iter().map(|p| p.eval(t)).collect()
    }
}

/// Determinant of the Sylvester matrix of p and q (coefficients
/// low-to-high, leading coefficients nonzero).
fn sylvester_resultant(p: &[f64], q: &[f64]) -> f64 {
    let m = p.len() - 1;
    let n = q.len() - 1;
    if m == 0 && n == 0 {
        return 1.0;
    }
    let size = m + n;
    let mut s = DMatrix::zeros(size, size);
    // n rows of p's coefficients (descending), shifted
    for row in 0..n {
        for (j, &c) in p.iter().rev().enumerate() {
            s[(row, row + j)] = c;
        }
    }
    for row in 0..m {
        for (j, &c) in q.iter().rev().enumerate() {
            s[(n + row, row + j)] = c;
        }
    }
    s.lu().determinant()
}

/// Discriminant of w -> Psi(t0, w) at a single t, with the classical
/// normalization disc = (-1)^{N(N-1)/2} Res(Psi, d/dw Psi) / psi_N.
fn discriminant_at(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    let deriv: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| j as f64 * c)
        .collect();
    let res = sylvester_resultant(coeffs, &deriv);
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * res / coeffs[n]
}

/// Discriminant of Psi with respect to w as a polynomial in t, computed
/// by evaluation at Chebyshev nodes and interpolation.
pub fn discriminant_in_w(eq: &AlgebraicEquation) -> Result<Poly> {
    let n = eq.degree_w();
    if n == 1 {
        return Ok(Poly::new(vec![1.0])); // no root pairs
    }
    let deg_t = eq.degree_t();
    let m = (2 * n - 1) * deg_t + 1;
    let nodes = chebyshev_points(-1.0, 1.0, m.max(2));
    let mut values = Vec::with_capacity(nodes.len());
    let mut ts = Vec::with_capacity(nodes.len());
    let lead_scale = eq.psis.last().unwrap().coeffs().iter().fold(0.0f64, |a, c| a.max(c.abs()));
    for &t0 in &nodes {
        let mut t = t0;
        let mut coeffs = eq.w_coeffs_at(t);
        let mut tries = 0;
        while coeffs.last().unwrap().abs() < 1e-12 * lead_scale.max(1.0) {
            tries += 1;
            if tries > 8 {
                return Err(TomoError::DegenerateLeadingCoefficient);
            }
            t = t0 + tries as f64 * 1e-6;
            coeffs = eq.w_coeffs_at(t);
        }
        ts.push(t);
        values.push(discriminant_at(&coeffs));
    }
    let fit = ChebFit::fit(&ts, &values, ts.len() - 1, (-1.0, 1.0))?;
    Ok(fit.to_poly())
}

/// Outcome of the real-singularity check of an algebraic section equation.
#[derive(Debug, Clone, PartialEq)]
pub enum Singularities {
    Free,
    /// Real roots of the discriminant, ascending, clustered within 1e-6.
    Singular(Vec<f64>),
    DegenerateAtInfinity,
}

/// Real roots of a polynomial via complex eigenvalues of its companion
/// matrix, keeping |imag| < 1e-8.
pub fn real_roots(p: &Poly) -> Vec<f64> {
    let d = p.degree();
    if d == 0 {
        return Vec::new();
    }
    let c = p.coeffs();
    let lead = c[d];
    let mut m = DMatrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let eig = m.complex_eigenvalues();
    let mut roots: Vec<f64> = eig
        .iter()
        .filter(|z| z.im.abs() < 1e-8)
        .map(|z| z.re)
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    roots
}

/// Classifies the equation per the real-singularity condition: the
/// discriminant must have no real roots and no degree drop at infinity.
pub fn has_real_singularities(eq: &AlgebraicEquation) -> Result<Singularities> {
    let n = eq.degree_w();
    let disc = discriminant_in_w(eq)?;
    let roots = real_roots(&disc);
    if !roots.is_empty() {
        return Ok(Singularities::Singular(roots));
    }
    if n == 1 {
        return Ok(Singularities::Free);
    }
    // nominal degree of the discriminant in t; a drop means the leading
    // coefficient d(xi) vanishes (degeneration at infinity)
    let d_psi = eq.degree_t();
    let d_dpsi = eq
        .psis
        .iter()
        .enumerate()
        .skip(1)
        .map(|(_, p)| p.degree())
        .max()
        .unwrap();
    let nominal = (n - 1) * d_psi + n * d_dpsi;
    let max_coeff = disc.coeffs().iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let lead_nominal = if disc.degree() >= nominal {
        disc.coeffs()[nominal].abs()
    } else {
        0.0
    };
    if nominal > 0 && lead_nominal < 1e-10 * max_coeff {
        return Ok(Singularities::DegenerateAtInfinity);
    }
    Ok(Singularities::Free)
}
