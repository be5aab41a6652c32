//! Squeezing: single-mode squeeze operators and θ-vacua, Bogoliubov maps,
//! the general SU(1,1) disentanglement, two-mode squeezed vacua and the
//! factorized solutions of the generalized quantum condition.

mod bogoliubov;
mod disentangle;
mod generalized;
mod single;
mod two_mode;

pub use bogoliubov::BogoliubovMap;
pub use disentangle::{disentangle_residual, su11_disentangle_general, DisentangleCoeffs};
pub use generalized::{generalized_condition_solution, GeneralizedFactorSolution, MIN_THETA};
pub use single::{
    phase_squeezed_state_sr, squeeze_operator, squeezed_vacuum_closed_form,
    squeezed_wavefunction, theta_annihilation_residual, theta_vacuum, u_closed_form,
    sr_geometric_profile, u_recurrence_residual, vacuum_moment_u, MomentU, SqueezeSpec,
};
pub use two_mode::{
    lambda_mode_factorization, schmidt_analysis, two_mode_squeezed_vacuum,
    two_mode_theta_vacuum, LambdaReport, NoiseReport, SchmidtReport,
};

/// ceil(8·sinh²r + 16): the documented truncation floor for squeezing.
pub fn tight_squeeze_dim(r: f64) -> usize {
    (8.0 * r.sinh().powi(2) + 16.0).ceil() as usize
}

/// Largest |r| accepted by squeezing constructors.
pub const MAX_SQUEEZE: f64 = crate::phase::MAX_SQUEEZE;

pub(crate) fn check_squeeze(r: f64) -> crate::Result<()> {
    if !r.is_finite() || r.abs() > MAX_SQUEEZE {
        return Err(crate::Error::Range(format!(
            "squeeze parameter {r} outside ±{MAX_SQUEEZE}"
        )));
    }
    Ok(())
}
