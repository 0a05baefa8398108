//! Numerical tolerances used across the crate.
//!
//! Every float comparison goes through a [`Tolerances`] record so a whole run
//! can be tightened or loosened from one place. The process-wide default can
//! be picked with the `MISDP_TOLERANCE` environment variable
//! (`default`, `strict` or `loose`).

use serde::{Deserialize, Serialize};

/// Environment variable naming the default tolerance profile.
pub const PROFILE_ENV: &str = "MISDP_TOLERANCE";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// PSD test: `λ_min ≥ -psd_rel · max(1, ‖A‖∞)`.
    pub psd_rel: f64,
    /// Numerical rank: count `|λ| > rank_rel · max(1, λ_max)`.
    pub rank_rel: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm drops below
    /// `eig_rel · ‖A‖_F`.
    pub eig_rel: f64,
    pub eig_max_sweeps: usize,
    /// Linear rows with non-integer data: `|residual| ≤ linear_rel · max(1, |rhs|)`.
    pub linear_rel: f64,
    /// Eigenvalue clustering when splitting scheme eigenspaces.
    pub cluster: f64,
    /// Comparing optima that involve float data.
    pub objective_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            psd_rel: 1e-8,
            rank_rel: 1e-7,
            eig_rel: 1e-12,
            eig_max_sweeps: 100,
            linear_rel: 1e-9,
            cluster: 1e-7,
            objective_rel: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn strict() -> Self {
        Tolerances {
            psd_rel: 1e-10,
            rank_rel: 1e-9,
            linear_rel: 1e-11,
            objective_rel: 1e-9,
            ..Self::default()
        }
    }

    pub fn loose() -> Self {
        Tolerances {
            psd_rel: 1e-6,
            rank_rel: 1e-5,
            linear_rel: 1e-7,
            cluster: 1e-6,
            objective_rel: 1e-5,
            ..Self::default()
        }
    }

    pub fn profile(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default()),
            "strict" => Some(Self::strict()),
            "loose" => Some(Self::loose()),
            _ => None,
        }
    }

    /// Profile chosen by `MISDP_TOLERANCE`, falling back to the defaults when
    /// the variable is unset or unknown.
    pub fn from_env() -> Self {
        std::env::var(PROFILE_ENV)
            .ok()
            .and_then(|v| Self::profile(v.trim()))
            .unwrap_or_default()
    }

    /// True when `a` and `b` agree within `objective_rel`, relative to the
    /// larger magnitude (and absolute below 1).
    pub fn same_value(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.objective_rel * a.abs().max(b.abs()).max(1.0)
    }
}
