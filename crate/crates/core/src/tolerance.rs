//! Numerical tolerances, gathered in one record.
//!
//! Every threshold the library and the verification harness compare against
//! lives here so an acceptance run can be re-tuned (or deliberately broken) from
//! a single place.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Unit-norm check for state vectors.
    pub norm: f64,
    /// Entrywise Hermiticity of density and Gram matrices.
    pub hermitian: f64,
    /// Unit trace of density matrices / unit diagonal of Gram matrices.
    pub trace: f64,
    /// Smallest eigenvalue accepted as positive semidefinite (as `-psd`).
    pub psd: f64,
    /// `U†U = I` check.
    pub unitary: f64,
    /// Entry spread accepted by circulant detection.
    pub circulant: f64,
    /// Eigenvalues at or below this are treated as zero when factorizing.
    pub rank: f64,
    /// Width of the membership boundary band.
    pub membership: f64,
    /// Analytic (circulant Gram) realization residual.
    pub synth_circular: f64,
    /// Optimizer realization residual.
    pub synth_qubit: f64,
    /// Agreement of two closed forms that should coincide to rounding.
    pub closed_form: f64,
    /// Agreement of the parametric and polar boundary descriptions.
    pub parametric: f64,
    /// Argument / value equalities after symmetrization.
    pub symmetrize: f64,
    /// Slack on the modulus non-decrease after symmetrization.
    pub amgm_slack: f64,
    /// Band around the n = 3 boundary excluded from the grid comparison.
    pub grid_band: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        norm: 1e-12,
        hermitian: 1e-12,
        trace: 1e-12,
        psd: 1e-10,
        unitary: 1e-10,
        circulant: 1e-10,
        rank: 1e-10,
        membership: 1e-9,
        synth_circular: 1e-9,
        synth_qubit: 1e-6,
        closed_form: 1e-10,
        parametric: 1e-9,
        symmetrize: 1e-9,
        amgm_slack: 1e-12,
        grid_band: 1e-6,
    };

    /// Every field set to the same value.
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            norm: tol,
            hermitian: tol,
            trace: tol,
            psd: tol,
            unitary: tol,
            circulant: tol,
            rank: tol,
            membership: tol,
            synth_circular: tol,
            synth_qubit: tol,
            closed_form: tol,
            parametric: tol,
            symmetrize: tol,
            amgm_slack: tol,
            grid_band: tol,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
