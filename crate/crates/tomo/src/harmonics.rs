//! Spherical-harmonic expansion of the section function in the direction
//! argument: A_K(xi, t) = sum p_{k,alpha}(t) Y_{k,alpha}(xi), and the test
//! that each coefficient depends polynomially on the offset with degree
//! at most k + n.

use std::sync::Arc;

use crate::bodies::Body;
use crate::error::{Result, TomoError};
use crate::grid::DirectionGrid;
use crate::polyalg::fit_polynomial;
use crate::report::{DetectionReport, FitItem, Verdict};
use crate::slice::{chebyshev_points, section_function, QuadratureConfig};

/// Orthonormal real harmonics up to degree `l_max`, tabulated on a
/// direction grid whose quadrature weights make them discretely
/// orthonormal (verified at construction).
pub struct HarmonicBasis {
    pub grid: Arc<DirectionGrid>,
    /// (degree k, order alpha) per basis function; alpha < 0 are the
    /// sine (odd) companions in both dimensions.
    pub labels: Vec<(usize, i64)>,
    /// Tabulated values, one row per basis function.
    pub values: Vec<Vec<f64>>,
}

/// Associated Legendre P_k^m(x) for m >= 0, Condon-Shortley phase.
fn assoc_legendre(k: usize, m: usize, x: f64) -> f64 {
    debug_assert!(m <= k);
    // P_m^m by the closed product, then upward recurrence in degree.
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if k == m {
        return pmm;
    }
    let mut pmmp1 = x * (2.0 * m as f64 + 1.0) * pmm;
    if k == m + 1 {
        return pmmp1;
    }
    for l in (m + 2)..=k {
        let lf = l as f64;
        let mf = m as f64;
        let p = ((2.0 * lf - 1.0) * x * pmmp1 - (lf + mf - 1.0) * pmm) / (lf - mf);
        pmm = pmmp1;
        pmmp1 = p;
    }
    pmmp1
}

fn sph_norm(k: usize, m: usize) -> f64 {
    let mut ratio = 1.0; // (k - m)! / (k + m)!
    for j in (k - m + 1)..=(k + m) {
        ratio /= j as f64;
    }
    ((2.0 * k as f64 + 1.0) / (4.0 * std::f64::consts::PI) * ratio).sqrt()
}

impl HarmonicBasis {
    pub fn new(grid: Arc<DirectionGrid>, l_max: usize) -> Result<Self> {
        let n = grid.dim;
        let mut labels = Vec::new();
        let mut values: Vec<Vec<f64>> = Vec::new();
        match n {
            2 => {
                let norm0 = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
                let norm = 1.0 / std::f64::consts::PI.sqrt();
                for k in 0..=l_max {
                    if k == 0 {
                        labels.push((0, 0));
                        values.push(grid.points.iter().map(|_| norm0).collect());
                        continue;
                    }
                    labels.push((k, 1));
                    values.push(
                        grid.points
                            .iter()
                            .map(|p| {
                                let th = p.coords()[1].atan2(p.coords()[0]);
                                (k as f64 * th).cos() * norm
                            })
                            .collect(),
                    );
                    labels.push((k, -1));
                    values.push(
                        grid.points
                            .iter()
                            .map(|p| {
                                let th = p.coords()[1].atan2(p.coords()[0]);
                                (k as f64 * th).sin() * norm
                            })
                            .collect(),
                    );
                }
            }
            3 => {
                for k in 0..=l_max {
                    for m in -(k as i64)..=(k as i64) {
                        labels.push((k, m));
                        let ma = m.unsigned_abs() as usize;
                        let norm = sph_norm(k, ma);
                        let sqrt2 = std::f64::consts::SQRT_2;
                        values.push(
                            grid.points
                                .iter()
                                .map(|p| {
                                    let c = p.coords();
                                    let z = c[2].clamp(-1.0, 1.0);
                                    let phi = c[1].atan2(c[0]);
                                    let plm = assoc_legendre(k, ma, z);
                                    match m.cmp(&0) {
                                        std::cmp::Ordering::Equal => norm * plm,
                                        std::cmp::Ordering::Greater => {
                                            sqrt2 * norm * plm * (ma as f64 * phi).cos()
                                        }
                                        std::cmp::Ordering::Less => {
                                            sqrt2 * norm * plm * (ma as f64 * phi).sin()
                                        }
                                    }
                                })
                                .collect(),
                        );
                    }
                }
            }
            _ => {
                return Err(TomoError::Unsupported(
                    "harmonic bases exist for dimensions 2 and 3".into(),
                ))
            }
        }
        let basis = Self { grid, labels, values };
        basis.check_orthonormality()?;
        Ok(basis)
    }

    fn check_orthonormality(&self) -> Result<()> {
        for (i, yi) in self.values.iter().enumerate() {
            for (j, yj) in self.values.iter().enumerate().skip(i) {
                let dot: f64 = yi
                    .iter()
                    .zip(yj)
                    .zip(&self.grid.weights)
                    .map(|((a, b), w)| a * b * w)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > 1e-10 {
                    return Err(TomoError::Invalid(format!(
                        "harmonic basis not orthonormal on this grid: \
                         <Y_{i}, Y_{j}> = {dot:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Coefficients of grid samples against every basis function.
    pub fn coefficients(&self, samples: &[f64]) -> Vec<f64> {
        self.values
            .iter()
            .map(|y| {
                y.iter()
                    .zip(samples)
                    .zip(&self.grid.weights)
                    .map(|((a, s), w)| a * s * w)
                    .sum()
            })
            .collect()
    }

    /// Truncated expansion evaluated back on the grid.
    pub fn reconstruct(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.len()];
        for (c, y) in coeffs.iter().zip(&self.values) {
            for (o, v) in out.iter_mut().zip(y) {
                *o += c * v;
            }
        }
        out
    }
}

/// Harmonic coefficients of A_K(., t) as functions of the offset.
pub struct HarmonicProfile {
    pub labels: Vec<(usize, i64)>,
    pub offsets: Vec<f64>,
    /// One row per basis function, aligned with `offsets`.
    pub coefficients: Vec<Vec<f64>>,
}

fn inradius_at_origin(body: &Body, grid: &DirectionGrid) -> Result<f64> {
    let mut r = f64::INFINITY;
    for xi in &grid.points {
        r = r.min(body.support(xi)?);
    }
    Ok(r)
}

/// Coefficients p_{k,alpha}(t) for a single offset.
pub fn harmonic_coefficients(
    body: &Body,
    basis: &HarmonicBasis,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let r = inradius_at_origin(body, &basis.grid)?;
    if t.abs() >= r {
        return Err(TomoError::OffsetExceedsInradius);
    }
    let mut samples = Vec::with_capacity(basis.grid.len());
    for xi in &basis.grid.points {
        samples.push(section_function(body, xi, t, cfg)?.0);
    }
    Ok(basis.coefficients(&samples))
}

/// Coefficient profiles over Chebyshev offsets in (-inradius/2, inradius/2).
pub fn harmonic_profile(
    body: &Body,
    basis: &HarmonicBasis,
    offsets: usize,
    cfg: &QuadratureConfig,
) -> Result<HarmonicProfile> {
    let r = inradius_at_origin(body, &basis.grid)?;
    let ts = chebyshev_points(-0.5 * r, 0.5 * r, offsets);
    let mut coefficients = vec![Vec::with_capacity(offsets); basis.len()];
    for &t in &ts {
        let cs = harmonic_coefficients(body, basis, t, cfg)?;
        for (row, c) in coefficients.iter_mut().zip(cs) {
            row.push(c);
        }
    }
    Ok(HarmonicProfile {
        labels: basis.labels.clone(),
        offsets: ts,
        coefficients,
    })
}

/// Floor under which a coefficient profile counts as identically zero,
/// relative to the largest coefficient of the body.
const ZERO_COEFF_FLOOR: f64 = 1e-9;

/// Tests that every harmonic coefficient p_{k,alpha}(t) is a polynomial
/// of degree at most k + n on the inner half of the inradius window.
pub fn test_coefficient_polynomiality(
    body: &Body,
    l_max: usize,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<DetectionReport> {
    let n = body.dim();
    let grid = Arc::new(DirectionGrid::default_for_dim(n));
    let basis = HarmonicBasis::new(grid, l_max)?;
    let offsets = (2 * (l_max + n) + 16).max(32);
    let profile = harmonic_profile(body, &basis, offsets, cfg)?;
    let scale = profile
        .coefficients
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut items = Vec::with_capacity(basis.len());
    for ((k, alpha), row) in profile.labels.iter().zip(&profile.coefficients) {
        let label = format!("k={k},alpha={alpha}");
        let amp = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if amp < ZERO_COEFF_FLOOR * scale {
            items.push(FitItem {
                label,
                degree: Some(0),
                relative_residual: 0.0,
                verdict: Verdict::Polynomial,
            });
            continue;
        }
        let fit = fit_polynomial(&profile.offsets, row, k + n, tol)?;
        items.push(FitItem {
            label,
            degree: fit.best_degree,
            relative_residual: fit.relative_residual,
            verdict: fit.verdict,
        });
    }
    Ok(DetectionReport::aggregate(
        "harmonic-coefficient-polynomiality",
        items,
        Verdict::Polynomial,
        Verdict::NotPolynomial,
    ))
}
