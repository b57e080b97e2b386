//! Uniform grid on the Lagrangian reference interval [0, 1].
//!
//! Second-order finite differences, trapezoid quadrature, the distance
//! function to the endpoints and the two C¹ cut-off functions used to
//! split the interval into an axis region and a vacuum-boundary region.

use crate::error::{Error, Result};

/// Smallest grid the boundary stencils can live on.
pub const MIN_CELLS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub n_cells: usize,
    pub dx: f64,
    pub nodes: Vec<f64>,
    /// Cut-off half-width, in (0, 1/4].
    pub delta: f64,
}

impl Grid {
    pub fn new(n_cells: usize, delta: f64) -> Result<Self> {
        if n_cells < MIN_CELLS {
            return Err(Error::Domain(format!(
                "n_cells must be at least {MIN_CELLS}, got {n_cells}"
            )));
        }
        if !(delta > 0.0 && delta <= 0.25) {
            return Err(Error::Domain(format!(
                "delta must lie in (0, 1/4], got {delta}"
            )));
        }
        let dx = 1.0 / n_cells as f64;
        // i / n rather than i * dx keeps x_n = 1 exact
        let nodes = (0..=n_cells).map(|i| i as f64 / n_cells as f64).collect();
        Ok(Self {
            n_cells,
            dx,
            nodes,
            delta,
        })
    }

    /// Like [`Grid::new`] but also enforces `2 * delta <= delta0`, where
    /// `delta0` is the radius on which the caller knows the initial
    /// weight is comfortably increasing.
    pub fn with_positivity_radius(n_cells: usize, delta: f64, delta0: f64) -> Result<Self> {
        if 2.0 * delta > delta0 {
            return Err(Error::Domain(format!(
                "2*delta = {} exceeds the positivity radius {delta0}",
                2.0 * delta
            )));
        }
        Self::new(n_cells, delta)
    }

    pub fn len(&self) -> usize {
        self.n_cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn check_len(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::Shape {
                expected: self.len(),
                got: f.len(),
            });
        }
        Ok(())
    }

    /// Sample a function at the nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }

    /// d(x) = min(x, 1 - x).
    pub fn distance(&self) -> Vec<f64> {
        self.sample(|x| x.min(1.0 - x))
    }

    /// ξ: 1 on [0, δ], 0 on [2δ, 1].
    pub fn cutoff_interior(&self) -> Vec<f64> {
        let d = self.delta;
        self.sample(|x| 1.0 - smoothstep((x - d) / d))
    }

    /// χ: 0 on [0, δ/2], 1 on [δ, 1].
    pub fn cutoff_boundary(&self) -> Vec<f64> {
        let h = 0.5 * self.delta;
        self.sample(|x| smoothstep((x - h) / h))
    }

    /// Derivatives of ξ and χ, analytic.
    pub fn cutoff_interior_deriv(&self) -> Vec<f64> {
        let d = self.delta;
        self.sample(|x| -smoothstep_deriv((x - d) / d) / d)
    }

    pub fn cutoff_boundary_deriv(&self) -> Vec<f64> {
        let h = 0.5 * self.delta;
        self.sample(|x| smoothstep_deriv((x - h) / h) / h)
    }
}

/// Cubic smoothstep 3θ² − 2θ³, clamped to [0, 1] outside the unit interval.
pub fn smoothstep(theta: f64) -> f64 {
    let t = theta.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

pub fn smoothstep_deriv(theta: f64) -> f64 {
    if theta <= 0.0 || theta >= 1.0 {
        0.0
    } else {
        6.0 * theta * (1.0 - theta)
    }
}

/// First derivative: centered in the interior, one-sided second order at
/// both ends.
pub fn deriv(f: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    grid.check_len(f)?;
    let n = grid.n_cells;
    let h2 = 2.0 * grid.dx;
    let mut out = vec![0.0; n + 1];
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / h2;
    for i in 1..n {
        out[i] = (f[i + 1] - f[i - 1]) / h2;
    }
    out[n] = (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / h2;
    Ok(out)
}

/// Second derivative: three-point in the interior, four-point one-sided
/// (second order) at the ends.
pub fn deriv2(f: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    grid.check_len(f)?;
    let n = grid.n_cells;
    let h2 = grid.dx * grid.dx;
    let mut out = vec![0.0; n + 1];
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    for i in 1..n {
        out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    out[n] = (2.0 * f[n] - 5.0 * f[n - 1] + 4.0 * f[n - 2] - f[n - 3]) / h2;
    Ok(out)
}

/// Composite trapezoid rule over [0, 1].
pub fn integrate(f: &[f64], grid: &Grid) -> Result<f64> {
    grid.check_len(f)?;
    let n = grid.n_cells;
    let inner: f64 = f[1..n].iter().sum();
    Ok(grid.dx * (0.5 * (f[0] + f[n]) + inner))
}
