use serde::{Deserialize, Serialize};

/// All numerical tolerances, threaded explicitly through every call that
/// needs one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Max-entry deviation from Hermitian symmetry, relative to the largest entry.
    pub herm_tol: f64,
    /// Eigenvalues in `[-psd_tol * max(1, lambda_max), 0)` are clamped to zero.
    pub psd_tol: f64,
    /// Allowed deviation of a unit vector's norm from one.
    pub unit_tol: f64,
    /// Relative slack for every pointwise inequality check.
    pub pointwise_slack: f64,
    /// Relative slack for sample-wise refinement dominance.
    pub dominance_slack: f64,
    /// Relative slack for the certified (un-subtracted) ordering.
    pub certified_slack: f64,
    /// Largest admissible matrix dimension.
    pub dim_cap: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            herm_tol: 1e-10,
            psd_tol: 1e-9,
            unit_tol: 1e-12,
            pointwise_slack: 1e-9,
            dominance_slack: 1e-10,
            certified_slack: 1e-8,
            dim_cap: 64,
        }
    }
}

impl ToleranceConfig {
    /// `true` when `lhs <= rhs` up to `slack * max(1, |lhs|, |rhs|)`.
    pub fn holds(lhs: f64, rhs: f64, slack: f64) -> bool {
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        lhs <= rhs + slack * scale
    }
}
