use serde::{Deserialize, Serialize};

use crate::hankel::DEFAULT_RANK_TOL;
use crate::spectrum::DEFAULT_INTERIOR_MARGIN;
use crate::winding::DEFAULT_RELATIVE_MIN_MODULUS;

/// Numerical thresholds shared by detection and certification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cliff.
    pub rank_tol: f64,
    /// Moment-condition residual, relative to the coefficient ℓ¹ norm.
    pub tail_tol: f64,
    /// Roots with `||r| - 1| <= boundary_band` are boundary roots.
    pub boundary_band: f64,
    /// Roots closer than this are merged into one multiple root.
    pub cluster_radius: f64,
    /// Minimum distance from a pole for extension evaluation.
    pub pole_clearance: f64,
    /// Minimum distance from the circle for interior evaluation.
    pub interior_margin: f64,
    /// Nonvanishing threshold relative to the largest grid modulus.
    pub min_mod_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            tail_tol: 1e-7,
            boundary_band: 1e-6,
            cluster_radius: 1e-3,
            pole_clearance: 1e-3,
            interior_margin: DEFAULT_INTERIOR_MARGIN,
            min_mod_rel: DEFAULT_RELATIVE_MIN_MODULUS,
        }
    }
}
