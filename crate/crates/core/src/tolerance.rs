//! Numerical tolerances.

use serde::{Deserialize, Serialize};

/// Relative tolerances used by validation, classification and counting.
///
/// Every value is relative to a natural scale of the quantity being tested
/// (ball diameter, largest radius, largest eigenvalue, ...).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Symmetry, convexity and side-length checks, relative to the ball diameter.
    pub geometry: f64,
    /// Closedness and subspace membership of radii vectors.
    pub membership: f64,
    /// Eigenvalues closer than `degeneracy * lambda_max` form one cluster.
    pub degeneracy: f64,
    /// `|r_i| <= cusp_zero * max|r|` counts as a zero radius.
    pub cusp_zero: f64,
    /// `|dr_i| <= plateau * max|dr|` counts as a flat step.
    pub plateau: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            geometry: 1e-9,
            membership: 1e-9,
            degeneracy: 1e-8,
            cusp_zero: 1e-9,
            plateau: 1e-9,
        }
    }
}

impl Tolerances {
    /// Same policy with the geometry and membership tolerances replaced.
    pub fn with_base(tol: f64) -> Self {
        Self {
            geometry: tol,
            membership: tol,
            ..Self::default()
        }
    }
}
