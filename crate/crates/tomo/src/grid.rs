//! Direction grids on S^1 and S^2 with quadrature weights and exact
//! antipode lookup (every grid point's antipode is itself a grid point).

use crate::bodies::Direction;
use crate::quad::gauss_legendre;

#[derive(Debug, Clone)]
pub struct DirectionGrid {
    pub dim: usize,
    pub points: Vec<Direction>,
    /// Quadrature weights; sum equals the sphere surface measure (2*pi or 4*pi).
    pub weights: Vec<f64>,
    /// antipode[i] is the index of -points[i].
    pub antipode: Vec<usize>,
}

impl DirectionGrid {
    /// m equispaced angles on the circle; m must be even for antipodal closure.
    pub fn circle(m: usize) -> Self {
        assert!(m >= 4 && m.is_multiple_of(2), "circle grid size must be even and >= 4");
        let points: Vec<Direction> = (0..m)
            .map(|j| Direction::from_angle(std::f64::consts::TAU * j as f64 / m as f64))
            .collect();
        let weights = vec![std::f64::consts::TAU / m as f64; m];
        let antipode = (0..m).map(|j| (j + m / 2) % m).collect();
        Self {
            dim: 2,
            points,
            weights,
            antipode,
        }
    }

    /// Gauss-Legendre x trapezoid product grid on S^2:
    /// n_theta Gauss nodes in cos(theta), n_phi equispaced azimuths (even).
    pub fn sphere(n_theta: usize, n_phi: usize) -> Self {
        assert!(n_phi >= 4 && n_phi.is_multiple_of(2), "azimuthal count must be even");
        let (nodes, gl_weights) = gauss_legendre(n_theta);
        let mut points = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        let dphi = std::f64::consts::TAU / n_phi as f64;
        for (i, &mu) in nodes.iter().enumerate() {
            let theta = mu.acos();
            for j in 0..n_phi {
                points.push(Direction::from_spherical(theta, dphi * j as f64));
                weights.push(gl_weights[i] * dphi);
            }
        }
        // antipode of (mu_i, phi_j) is (-mu, phi + pi); GL nodes are symmetric
        let mut antipode = vec![0usize; n_theta * n_phi];
        for i in 0..n_theta {
            let i_op = n_theta - 1 - i;
            debug_assert!((nodes[i] + nodes[i_op]).abs() < 1e-14);
            for j in 0..n_phi {
                let j_op = (j + n_phi / 2) % n_phi;
                antipode[i * n_phi + j] = i_op * n_phi + j_op;
            }
        }
        Self {
            dim: 3,
            points,
            weights,
            antipode,
        }
    }

    /// Default antipodally-closed grid per dimension (720 angles / 48x96).
    pub fn default_for_dim(dim: usize) -> Self {
        match dim {
            2 => Self::circle(720),
            3 => Self::sphere(48, 96),
            _ => panic!("direction grids exist for dimensions 2 and 3 only"),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integral over the sphere of a sampled function.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .sum()
    }
}
