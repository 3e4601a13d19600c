//! Convex-body representations and the support-function calculus.
//!
//! Four representations are provided: ellipsoids (closed forms throughout),
//! H-polytopes (cached vertex list in dimensions 2 and 3), Lp-balls (dual-norm
//! support), and an opaque oracle (membership + support + bounding radius).

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::error::{Result, TomoError};

const UNIT_TOL: f64 = 1e-12;

/// A unit vector in R^n, n >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(DVector<f64>);

impl Direction {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let v = DVector::from_vec(coords);
        if v.len() < 2 {
            return Err(TomoError::BadDirection);
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(TomoError::BadDirection);
        }
        Ok(Self(v))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn from_vector(v: DVector<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(TomoError::BadDirection);
        }
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(TomoError::BadDirection);
        }
        Ok(Self(v / norm))
    }

    pub fn from_angle(theta: f64) -> Self {
        Self(DVector::from_vec(vec![theta.cos(), theta.sin()]))
    }

    /// Spherical angles: theta polar (from +z), phi azimuthal.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self(DVector::from_vec(vec![st * cp, st * sp, ct]))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn dot(&self, x: &DVector<f64>) -> f64 {
        self.0.dot(x)
    }

    pub fn negated(&self) -> Self {
        Self(-&self.0)
    }

    /// An orthonormal basis of the hyperplane orthogonal to self,
    /// completed by Gram-Schmidt against the coordinate axes.
    pub fn orthonormal_complement(&self) -> Vec<DVector<f64>> {
        let n = self.dim();
        let mut basis: Vec<DVector<f64>> = vec![self.0.clone()];
        for i in 0..n {
            if basis.len() == n {
                break;
            }
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            for b in &basis {
                let c = b.dot(&e);
                e -= b * c;
            }
            let norm = e.norm();
            if norm > 1e-8 {
                basis.push(e / norm);
            }
        }
        basis.remove(0);
        basis
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| format!("{x}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// {x : (x-c)^T A^{-1} (x-c) <= 1} with A symmetric positive definite.
#[derive(Clone)]
pub struct Ellipsoid {
    shape: DMatrix<f64>,
    center: DVector<f64>,
    inv_shape: DMatrix<f64>,
    max_eig: f64,
}

impl fmt::Debug for Ellipsoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ellipsoid")
            .field("shape", &self.shape)
            .field("center", &self.center)
            .finish()
    }
}

impl Ellipsoid {
    pub fn new(shape: DMatrix<f64>, center: DVector<f64>) -> Result<Self> {
        let n = center.len();
        if n < 2 || shape.nrows() != n || shape.ncols() != n {
            return Err(TomoError::BadBodySpec {
                field: "shape".into(),
                reason: format!("expected {n}x{n} matrix matching center dimension"),
            });
        }
        let scale = shape.amax().max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (shape[(i, j)] - shape[(j, i)]).abs() > 1e-12 * scale {
                    return Err(TomoError::BadBodySpec {
                        field: "shape".into(),
                        reason: "matrix not symmetric".into(),
                    });
                }
            }
        }
        let eig = shape.clone().symmetric_eigen();
        let min_eig = eig.eigenvalues.min();
        let max_eig = eig.eigenvalues.max();
        if min_eig <= 0.0 {
            return Err(TomoError::BadBodySpec {
                field: "shape".into(),
                reason: "matrix not positive definite".into(),
            });
        }
        let inv_shape = shape
            .clone()
            .cholesky()
            .ok_or_else(|| TomoError::BadBodySpec {
                field: "shape".into(),
                reason: "matrix not positive definite".into(),
            })?
            .inverse();
        Ok(Self {
            shape,
            center,
            inv_shape,
            max_eig,
        })
    }

    pub fn ball(n: usize, radius: f64, center: Vec<f64>) -> Result<Self> {
        Self::new(
            DMatrix::identity(n, n) * radius * radius,
            DVector::from_vec(center),
        )
    }

    pub fn unit_ball(n: usize) -> Self {
        Self::ball(n, 1.0, vec![0.0; n]).unwrap()
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    /// xi^T A xi, the squared half-width of the support interval about the center.
    pub fn quad_form(&self, xi: &Direction) -> f64 {
        (&self.shape * xi.coords()).dot(xi.coords())
    }

    pub fn det_shape_sqrt(&self) -> f64 {
        self.shape.determinant().sqrt()
    }

    fn gauge_sq(&self, x: &DVector<f64>) -> f64 {
        let d = x - &self.center;
        (&self.inv_shape * &d).dot(&d)
    }

    /// Outward normal direction at a boundary point.
    pub fn outward_normal(&self, x: &DVector<f64>) -> Result<Direction> {
        Direction::from_vector(&self.inv_shape * (x - &self.center))
    }
}

/// Intersection of halfspaces <a_i, x> <= b_i, required bounded with interior.
#[derive(Debug, Clone)]
pub struct Polytope {
    halfspaces: Vec<(DVector<f64>, f64)>,
    vertices: Vec<DVector<f64>>,
    interior_point: DVector<f64>,
}

impl Polytope {
    pub fn new(halfspaces: Vec<(DVector<f64>, f64)>) -> Result<Self> {
        if halfspaces.is_empty() {
            return Err(TomoError::BadBodySpec {
                field: "halfspaces".into(),
                reason: "list is empty".into(),
            });
        }
        let n = halfspaces[0].0.len();
        if !(2..=3).contains(&n) {
            return Err(TomoError::BadBodySpec {
                field: "halfspaces".into(),
                reason: "polytopes are supported in dimensions 2 and 3 only".into(),
            });
        }
        for (i, (a, _)) in halfspaces.iter().enumerate() {
            if a.len() != n {
                return Err(TomoError::BadBodySpec {
                    field: format!("halfspaces[{i}].a"),
                    reason: format!("expected dimension {n}"),
                });
            }
            if a.norm() == 0.0 {
                return Err(TomoError::BadBodySpec {
                    field: format!("halfspaces[{i}].a"),
                    reason: "zero normal vector".into(),
                });
            }
        }
        if Self::recession_cone_nontrivial(&halfspaces, n) {
            return Err(TomoError::UnboundedBody);
        }
        let vertices = Self::enumerate_vertices(&halfspaces, n)?;
        if vertices.len() < n + 1 {
            return Err(TomoError::DegenerateBody);
        }
        let mut centroid = DVector::zeros(n);
        for v in &vertices {
            centroid += v;
        }
        centroid /= vertices.len() as f64;
        // nonempty interior: centroid strictly feasible with a margin
        let scale: f64 = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for (a, b) in &halfspaces {
            if a.dot(&centroid) >= b - 1e-10 * scale * a.norm() {
                return Err(TomoError::DegenerateBody);
            }
        }
        Ok(Self {
            halfspaces,
            vertices,
            interior_point: centroid,
        })
    }

    /// Axis-aligned box given per-axis (lo, hi).
    pub fn bounding_box(bounds: &[(f64, f64)]) -> Result<Self> {
        let n = bounds.len();
        let mut hs = Vec::with_capacity(2 * n);
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            let mut a = DVector::zeros(n);
            a[i] = 1.0;
            hs.push((a.clone(), *hi));
            hs.push((-a, -*lo));
        }
        Self::new(hs)
    }

    pub fn cube(n: usize, half_side: f64) -> Result<Self> {
        Self::bounding_box(&vec![(-half_side, half_side); n])
    }

    /// Regular m-gon in the plane, circumradius r, as an H-polytope.
    pub fn regular_polygon(m: usize, r: f64) -> Result<Self> {
        let apothem = r * (std::f64::consts::PI / m as f64).cos();
        let hs = (0..m)
            .map(|j| {
                let ang = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / m as f64;
                (DVector::from_vec(vec![ang.cos(), ang.sin()]), apothem)
            })
            .collect();
        Self::new(hs)
    }

    fn recession_cone_nontrivial(hs: &[(DVector<f64>, f64)], n: usize) -> bool {
        // Candidate extreme rays of {d : <a_i, d> <= 0}: negated normals,
        // pairwise bisectors, and (n = 3) cross products of normal pairs.
        let mut candidates: Vec<DVector<f64>> = Vec::new();
        for (a, _) in hs {
            candidates.push(-a.normalize());
        }
        for i in 0..hs.len() {
            for j in (i + 1)..hs.len() {
                let (ai, aj) = (&hs[i].0, &hs[j].0);
                candidates.push(-(ai.normalize() + aj.normalize()));
                if n == 2 {
                    let perp = DVector::from_vec(vec![-ai[1], ai[0]]);
                    candidates.push(perp.clone());
                    candidates.push(-perp);
                } else {
                    let c = DVector::from_vec(vec![
                        ai[1] * aj[2] - ai[2] * aj[1],
                        ai[2] * aj[0] - ai[0] * aj[2],
                        ai[0] * aj[1] - ai[1] * aj[0],
                    ]);
                    candidates.push(c.clone());
                    candidates.push(-c);
                }
            }
        }
        'cand: for d in candidates {
            let norm = d.norm();
            if norm < 1e-12 {
                continue;
            }
            let d = d / norm;
            for (a, _) in hs {
                if a.dot(&d) > 1e-10 * a.norm() {
                    continue 'cand;
                }
            }
            return true;
        }
        false
    }

    fn enumerate_vertices(hs: &[(DVector<f64>, f64)], n: usize) -> Result<Vec<DVector<f64>>> {
        let m = hs.len();
        let scale: f64 = hs.iter().map(|(a, b)| b.abs() / a.norm()).fold(1.0, f64::max);
        let mut verts: Vec<DVector<f64>> = Vec::new();
        let mut push_if_feasible = |x: DVector<f64>| {
            for (a, b) in hs {
                if a.dot(&x) > b + 1e-9 * scale * a.norm() {
                    return;
                }
            }
            if !verts.iter().any(|v| (v - &x).norm() < 1e-9 * scale) {
                verts.push(x);
            }
        };
        if n == 2 {
            for i in 0..m {
                for j in (i + 1)..m {
                    let mat = DMatrix::from_rows(&[
                        hs[i].0.transpose(),
                        hs[j].0.transpose(),
                    ]);
                    let rhs = DVector::from_vec(vec![hs[i].1, hs[j].1]);
                    if let Some(sol) = mat.lu().solve(&rhs) {
                        if sol.iter().all(|x| x.is_finite()) && sol.norm() < 1e12 {
                            push_if_feasible(sol);
                        }
                    }
                }
            }
        } else {
            for i in 0..m {
                for j in (i + 1)..m {
                    for k in (j + 1)..m {
                        let mat = DMatrix::from_rows(&[
                            hs[i].0.transpose(),
                            hs[j].0.transpose(),
                            hs[k].0.transpose(),
                        ]);
                        let rhs = DVector::from_vec(vec![hs[i].1, hs[j].1, hs[k].1]);
                        if let Some(sol) = mat.lu().solve(&rhs) {
                            if sol.iter().all(|x| x.is_finite()) && sol.norm() < 1e12 {
                                push_if_feasible(sol);
                            }
                        }
                    }
                }
            }
        }
        Ok(verts)
    }

    pub fn halfspaces(&self) -> &[(DVector<f64>, f64)] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn interior_point(&self) -> &DVector<f64> {
        &self.interior_point
    }

    /// Outward normal of the unique facet active at x; error at edges/vertices.
    pub fn outward_normal(&self, x: &DVector<f64>) -> Result<Direction> {
        let scale: f64 = self.vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let mut active: Option<&DVector<f64>> = None;
        for (a, b) in &self.halfspaces {
            if (a.dot(x) - b).abs() < 1e-8 * scale * a.norm() {
                if active.is_some() {
                    return Err(TomoError::NoUniqueNormal);
                }
                active = Some(a);
            }
        }
        match active {
            Some(a) => Direction::from_vector(a.clone()),
            None => Err(TomoError::NoUniqueNormal),
        }
    }
}

/// {x : sum |(x_i - c_i)/r_i|^p <= 1}, p >= 1.
#[derive(Debug, Clone)]
pub struct LpBall {
    pub p: f64,
    pub semiaxes: Vec<f64>,
    pub center: DVector<f64>,
}

impl LpBall {
    pub fn new(p: f64, semiaxes: Vec<f64>, center: Vec<f64>) -> Result<Self> {
        if p < 1.0 || p.is_nan() {
            return Err(TomoError::BadBodySpec {
                field: "p".into(),
                reason: "exponent must satisfy p >= 1".into(),
            });
        }
        if semiaxes.len() != center.len() || semiaxes.len() < 2 {
            return Err(TomoError::BadBodySpec {
                field: "semiaxes".into(),
                reason: "length must match center dimension (>= 2)".into(),
            });
        }
        if semiaxes.iter().any(|&r| r <= 0.0 || r.is_nan()) {
            return Err(TomoError::BadBodySpec {
                field: "semiaxes".into(),
                reason: "all semiaxes must be positive".into(),
            });
        }
        Ok(Self {
            p,
            semiaxes,
            center: DVector::from_vec(center),
        })
    }

    fn gauge_p(&self, x: &DVector<f64>) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.semiaxes.len() {
            acc += ((x[i] - self.center[i]) / self.semiaxes[i]).abs().powf(self.p);
        }
        acc
    }

    /// Dual-norm support: h(xi) = <c, xi> + ||(r_i xi_i)||_{p'}.
    fn support_raw(&self, xi: &DVector<f64>) -> f64 {
        let scaled: Vec<f64> = (0..self.semiaxes.len())
            .map(|i| (self.semiaxes[i] * xi[i]).abs())
            .collect();
        let dual = if self.p == 1.0 {
            scaled.iter().cloned().fold(0.0, f64::max)
        } else if self.p.is_infinite() {
            scaled.iter().sum()
        } else {
            let q = self.p / (self.p - 1.0);
            scaled.iter().map(|s| s.powf(q)).sum::<f64>().powf(1.0 / q)
        };
        self.center.dot(xi) + dual
    }

    pub fn outward_normal(&self, x: &DVector<f64>) -> Result<Direction> {
        let n = self.semiaxes.len();
        let mut g = DVector::zeros(n);
        for i in 0..n {
            let u = (x[i] - self.center[i]) / self.semiaxes[i];
            g[i] = self.p * u.abs().powf(self.p - 1.0) * u.signum() / self.semiaxes[i];
        }
        Direction::from_vector(g)
    }
}

/// Membership predicate used by [`OracleBody`].
pub type MembershipFn = Arc<dyn Fn(&DVector<f64>) -> bool + Send + Sync>;

/// Opaque body: membership predicate, support evaluator, bounding radius.
#[derive(Clone)]
pub struct OracleBody {
    pub dim: usize,
    pub membership: MembershipFn,
    pub support: Arc<dyn Fn(&Direction) -> f64 + Send + Sync>,
    pub bounding_radius: f64,
}

impl fmt::Debug for OracleBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleBody")
            .field("dim", &self.dim)
            .field("bounding_radius", &self.bounding_radius)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum Body {
    Ellipsoid(Ellipsoid),
    Polytope(Polytope),
    LpBall(LpBall),
    Oracle(OracleBody),
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Ellipsoid(e) => e.center.len(),
            Body::Polytope(p) => p.halfspaces[0].0.len(),
            Body::LpBall(b) => b.semiaxes.len(),
            Body::Oracle(o) => o.dim,
        }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(TomoError::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    /// Support function h_K(xi) = sup { <x, xi> : x in K }.
    pub fn support(&self, xi: &Direction) -> Result<f64> {
        self.check_dim(xi.dim())?;
        Ok(match self {
            Body::Ellipsoid(e) => e.quad_form(xi).sqrt() + e.center.dot(xi.coords()),
            Body::Polytope(p) => p
                .vertices
                .iter()
                .map(|v| xi.dot(v))
                .fold(f64::NEG_INFINITY, f64::max),
            Body::LpBall(b) => b.support_raw(xi.coords()),
            Body::Oracle(o) => (o.support)(xi),
        })
    }

    /// h_{K+a}(xi) via the shift identity h_K(xi) + <a, xi>.
    pub fn support_translated(&self, a: &DVector<f64>, xi: &Direction) -> Result<f64> {
        self.check_dim(a.len())?;
        Ok(self.support(xi)? + xi.dot(a))
    }

    /// (b_minus, b_plus) = (-h(-xi), h(xi)).
    pub fn support_interval(&self, xi: &Direction) -> Result<(f64, f64)> {
        let b_plus = self.support(xi)?;
        let b_minus = -self.support(&xi.negated())?;
        if b_plus - b_minus < 1e-12 {
            return Err(TomoError::DegenerateWidth);
        }
        Ok((b_minus, b_plus))
    }

    pub fn membership(&self, x: &DVector<f64>) -> bool {
        match self {
            Body::Ellipsoid(e) => e.gauge_sq(x) <= 1.0,
            Body::Polytope(p) => {
                let scale: f64 = p.vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
                p.halfspaces
                    .iter()
                    .all(|(a, b)| a.dot(x) <= b + 1e-12 * scale * a.norm())
            }
            Body::LpBall(b) => b.gauge_p(x) <= 1.0,
            Body::Oracle(o) => (o.membership)(x),
        }
    }

    /// Radius of a ball about the origin containing the body.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Body::Ellipsoid(e) => e.center.norm() + e.max_eig.sqrt(),
            Body::Polytope(p) => p.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Body::LpBall(b) => {
                b.center.norm() + b.semiaxes.iter().map(|r| r * r).sum::<f64>().sqrt()
            }
            Body::Oracle(o) => o.bounding_radius,
        }
    }

    /// A point in the interior (used to seed chord searches).
    pub fn inner_point(&self) -> DVector<f64> {
        match self {
            Body::Ellipsoid(e) => e.center.clone(),
            Body::Polytope(p) => p.interior_point.clone(),
            Body::LpBall(b) => b.center.clone(),
            Body::Oracle(o) => DVector::zeros(o.dim),
        }
    }

    /// Minkowski functional ||x||_K = inf { lambda > 0 : x/lambda in K }.
    ///
    /// Closed form for centered ellipsoids, bisection on membership otherwise
    /// (bracket [0, 2 R / |x|], 80 iterations, relative tolerance 1e-10).
    pub fn minkowski_functional(&self, x: &DVector<f64>) -> Result<f64> {
        self.check_dim(x.len())?;
        if !self.membership(&DVector::zeros(self.dim())) {
            return Err(TomoError::OriginOutsideInterior);
        }
        let norm = x.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        if let Body::Ellipsoid(e) = self {
            if e.center.norm() < 1e-14 {
                return Ok(e.gauge_sq(x).sqrt());
            }
        }
        let mut hi = 2.0 * self.bounding_radius().max(norm) / norm;
        // ||x||_K = 1/s* where s* = sup { s : s x in K }; bisect on s.
        let mut lo = 0.0f64; // inverse scale: member(x / lambda)
        let mut hi_ok = self.membership(&(x / hi));
        if !hi_ok {
            // origin interior guarantees membership for large enough lambda
            for _ in 0..40 {
                hi *= 2.0;
                hi_ok = self.membership(&(x / hi));
                if hi_ok {
                    break;
                }
            }
            if !hi_ok {
                return Err(TomoError::OriginOutsideInterior);
            }
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid == 0.0 {
                break;
            }
            if self.membership(&(x / mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
            if (hi - lo) <= 1e-10 * hi {
                break;
            }
        }
        Ok(hi)
    }

    /// Unit outward normal at a boundary point (closed forms; polytope facets).
    pub fn outward_normal(&self, x: &DVector<f64>) -> Result<Direction> {
        match self {
            Body::Ellipsoid(e) => e.outward_normal(x),
            Body::Polytope(p) => p.outward_normal(x),
            Body::LpBall(b) => b.outward_normal(x),
            Body::Oracle(_) => Err(TomoError::Unsupported("normal of oracle body".into())),
        }
    }

    /// Parse the JSON body-spec format.
    pub fn from_json(text: &str) -> Result<Body> {
        let spec: BodySpec = serde_json::from_str(text)?;
        spec.build()
    }
}

/// On-disk body spec:
/// {"type":"ellipsoid","shape":[[...]],"center":[...]}
/// {"type":"polytope","halfspaces":[{"a":[...],"b":...}]}
/// {"type":"lpball","p":...,"semiaxes":[...],"center":[...]}
#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Ellipsoid {
        shape: Vec<Vec<f64>>,
        center: Vec<f64>,
    },
    Polytope {
        halfspaces: Vec<HalfspaceSpec>,
    },
    LpBall {
        p: f64,
        semiaxes: Vec<f64>,
        center: Vec<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub a: Vec<f64>,
    pub b: f64,
}

impl BodySpec {
    pub fn build(self) -> Result<Body> {
        match self {
            BodySpec::Ellipsoid { shape, center } => {
                let n = center.len();
                if shape.len() != n || shape.iter().any(|row| row.len() != n) {
                    return Err(TomoError::BadBodySpec {
                        field: "shape".into(),
                        reason: format!("expected {n}x{n} matrix matching center dimension"),
                    });
                }
                let mat = DMatrix::from_fn(n, n, |i, j| shape[i][j]);
                Ok(Body::Ellipsoid(Ellipsoid::new(
                    mat,
                    DVector::from_vec(center),
                )?))
            }
            BodySpec::Polytope { halfspaces } => {
                let hs = halfspaces
                    .into_iter()
                    .map(|h| (DVector::from_vec(h.a), h.b))
                    .collect();
                Ok(Body::Polytope(Polytope::new(hs)?))
            }
            BodySpec::LpBall { p, semiaxes, center } => {
                Ok(Body::LpBall(LpBall::new(p, semiaxes, center)?))
            }
        }
    }
}
