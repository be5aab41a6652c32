use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridWavefunction};
use crate::C64;

/// Smallest |Θ| accepted: the χ factor degenerates as ν = −sinh Θ → 0.
pub const MIN_THETA: f64 = 0.1;

/// Edge-to-peak density ratio below which a sampled factor counts as
/// normalizable.
const DECAY_RATIO: f64 = 1e-10;

/// ψ(x₁, x₂) = φ(x₁)χ(x₂) solving
/// [μ(x₁ + ∂₁ − x₂) + ν(x₂ − ∂₂ + x₁)]ψ = 0 with μ = cosh Θ, ν = −sinh Θ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedFactorSolution {
    pub theta: f64,
    pub mu: f64,
    pub nu: f64,
    pub c: f64,
    /// Unit norm when normalizable, otherwise scaled to unit peak.
    pub phi_part: GridWavefunction,
    pub chi_part: GridWavefunction,
    pub phi_normalizable: bool,
    pub chi_normalizable: bool,
    /// max over the product grid of |μ(x₁ + ∂₁lnφ) + νx₁ − μx₂ + νx₂ − ν∂₂lnχ|,
    /// with the logarithmic derivatives taken by finite differences.
    pub pde_residual: f64,
}

impl GeneralizedFactorSolution {
    /// Density-weighted mean of x₁ under φ.
    pub fn phi_center(&self) -> f64 {
        let d = self.phi_part.density();
        let xs = self.phi_part.grid.points();
        let g = &self.phi_part.grid;
        g.integrate(&d.iter().zip(&xs).map(|(p, x)| p * x).collect::<Vec<_>>()) / g.integrate(&d)
    }
}

fn sample(grid: &Grid, log_f: &[f64]) -> Result<(GridWavefunction, bool)> {
    let peak = log_f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let vals: Vec<C64> = log_f.iter().map(|l| C64::new((l - peak).exp(), 0.0)).collect();
    let edge = vals[0].norm_sqr().max(vals[vals.len() - 1].norm_sqr());
    let normalizable = edge <= DECAY_RATIO;
    let wf = GridWavefunction::new(*grid, vals)?;
    Ok(if normalizable { (wf.normalized()?, true) } else { (wf, false) })
}

/// Factorized solution with f(x₁) = −x₁, g(x₂) = −x₂:
/// φ = exp[(cx₁ − (μ+ν)x₁²/2)/μ], χ = exp[(cx₂ − (μ−ν)x₂²/2)/ν].
pub fn generalized_condition_solution(
    theta: f64,
    c: f64,
    phi_grid: &Grid,
    chi_grid: &Grid,
) -> Result<GeneralizedFactorSolution> {
    if !theta.is_finite() || theta.abs() < MIN_THETA {
        return Err(Error::param("theta", format!("|Θ| = {} below {MIN_THETA}", theta.abs())));
    }
    super::check_squeeze(theta)?;
    if !c.is_finite() {
        return Err(Error::NonFinite("c"));
    }
    let (mu, nu) = (theta.cosh(), -theta.sinh());
    if !(mu + nu > 0.0) {
        return Err(Error::param("theta", "μ + ν must be positive"));
    }
    let x1 = phi_grid.points();
    let x2 = chi_grid.points();
    let ln_phi: Vec<f64> = x1.iter().map(|x| (c * x - (mu + nu) * x * x / 2.0) / mu).collect();
    let ln_chi: Vec<f64> = x2.iter().map(|x| (c * x - (mu - nu) * x * x / 2.0) / nu).collect();
    let d_phi = phi_grid.derivative(&ln_phi);
    let d_chi = chi_grid.derivative(&ln_chi);
    // ψ⁻¹·(PDE ψ) separates into A(x₁) + B(x₂)
    let a: Vec<f64> = x1.iter().zip(&d_phi).map(|(x, d)| mu * (x + d) + nu * x).collect();
    let b: Vec<f64> = x2.iter().zip(&d_chi).map(|(x, d)| -mu * x + nu * (x - d)).collect();
    let (amin, amax) = min_max(&a);
    let (bmin, bmax) = min_max(&b);
    let pde_residual = (amax + bmax).abs().max((amin + bmin).abs());
    let (phi_part, phi_normalizable) = sample(phi_grid, &ln_phi)?;
    let (chi_part, chi_normalizable) = sample(chi_grid, &ln_chi)?;
    Ok(GeneralizedFactorSolution {
        theta,
        mu,
        nu,
        c,
        phi_part,
        chi_part,
        phi_normalizable,
        chi_normalizable,
        pde_residual,
    })
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(-10.0, 10.0, 2048).unwrap()
    }

    #[test]
    fn pde_residual_small() {
        for (t, c) in [(0.5, 0.0), (0.5, 1.0), (0.1, -0.3), (-0.8, 0.2)] {
            let s = generalized_condition_solution(t, c, &grid(), &grid()).unwrap();
            assert!(s.pde_residual <= 1e-4, "{t} {c}: {}", s.pde_residual);
        }
    }

    #[test]
    fn phi_centre_shifts() {
        let s = generalized_condition_solution(0.5, 1.0, &grid(), &grid()).unwrap();
        assert!(s.phi_normalizable);
        assert!((s.phi_center() - 1.0 / (s.mu + s.nu)).abs() < 1e-8);
    }

    #[test]
    fn chi_grows_for_positive_theta() {
        let s = generalized_condition_solution(0.5, 0.0, &grid(), &grid()).unwrap();
        assert!(!s.chi_normalizable);
        let s = generalized_condition_solution(-0.5, 0.0, &grid(), &grid()).unwrap();
        assert!(s.chi_normalizable);
    }

    #[test]
    fn small_theta_rejected() {
        assert!(generalized_condition_solution(0.05, 0.0, &grid(), &grid()).is_err());
    }
}
