//! Coherent states: ladder expansion, displacement operator, overlaps,
//! completeness quadrature, coordinate wavefunction and free evolution.

use std::f64::consts::PI;

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::fock::{build_ladder, hamiltonian, FockState, OperatorMatrix};
use crate::grid::{Grid, GridWavefunction};
use crate::quadrature::gauss_legendre;
use crate::units::NATURAL_UNITS;
use crate::C64;

/// Coherent-state parameter and truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentSpec {
    pub alpha: C64,
    pub dim: usize,
}

impl CoherentSpec {
    pub fn new(alpha: C64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::NonFinite("alpha"));
        }
        Ok(CoherentSpec { alpha, dim })
    }

    /// |α|² + 6|α| + 10 ≤ dim keeps the truncated tail below 1e-10.
    pub fn is_tight(&self) -> bool {
        tight_dim_holds(self.alpha.norm(), self.dim)
    }
}

pub(crate) fn tight_dim_holds(modulus: f64, dim: usize) -> bool {
    modulus * modulus + 6.0 * modulus + 10.0 <= dim as f64
}

/// ln n! for n = 0..len.
pub(crate) fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    out.push(0.0);
    for n in 1..len {
        acc += (n as f64).ln();
        out.push(acc);
    }
    out
}

/// e^{−|α|²/2} αⁿ/√(n!) for n < dim, without renormalization. Computed in
/// log space.
pub fn coherent_amplitudes(alpha: C64, dim: usize) -> Array1<C64> {
    let r = alpha.norm();
    let mut out = Array1::zeros(dim);
    if r == 0.0 {
        out[0] = C64::new(1.0, 0.0);
        return out;
    }
    let lnf = ln_factorials(dim);
    let theta = alpha.arg();
    let lr = r.ln();
    for n in 0..dim {
        let mag = (n as f64 * lr - 0.5 * lnf[n] - 0.5 * r * r).exp();
        out[n] = C64::from_polar(mag, n as f64 * theta);
    }
    out
}

/// Coherent state |α⟩ by its number-state expansion, renormalized over the
/// truncated basis; ⟨0|α⟩ is real positive.
pub fn coherent_ladder(spec: &CoherentSpec) -> Result<FockState> {
    let amps = coherent_amplitudes(spec.alpha, spec.dim);
    Ok(FockState::new(amps)?
        .normalized()?
        .with_tail_warning(!spec.is_tight()))
}

/// ‖a|ψ⟩ − α|ψ⟩‖.
pub fn eigen_residual(state: &FockState, alpha: C64) -> Result<f64> {
    let (a, _) = build_ladder(state.dim())?;
    let diff = a.apply(state.amps())? - state.amps() * alpha;
    Ok(diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// D(α) = exp(α a† − α* a).
pub fn displacement_operator(alpha: C64, dim: usize) -> Result<OperatorMatrix> {
    let (a, adag) = build_ladder(dim)?;
    let gen = &adag.scale(alpha) - &a.scale(alpha.conj());
    matrix_exponential(&gen)
}

/// Phase and residual of the two-displacement composition law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComposeReport {
    pub phase: C64,
    pub residual: f64,
}

/// D(α+β) = e^{(α*β − αβ*)/2} D(α)D(β); residual is the largest entry of the
/// difference on the leading dim/2 block.
pub fn displacement_compose(alpha: C64, beta: C64, dim: usize) -> Result<ComposeReport> {
    let phase = ((alpha.conj() * beta - alpha * beta.conj()) * 0.5).exp();
    let lhs = displacement_operator(alpha + beta, dim)?;
    let rhs = displacement_operator(alpha, dim)?
        .matmul(&displacement_operator(beta, dim)?)?
        .scale(phase);
    Ok(ComposeReport {
        phase,
        residual: (&lhs - &rhs).max_abs_leading(dim / 2),
    })
}

/// ⟨α|α'⟩ = exp(−|α|²/2 − |α'|²/2 + α*α').
pub fn overlap_analytic(alpha: C64, alphap: C64) -> C64 {
    (alpha.conj() * alphap - 0.5 * alpha.norm_sqr() - 0.5 * alphap.norm_sqr()).exp()
}

/// Discretized resolution of the identity over a disc of coherent states.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessQuadrature {
    pub resolution: OperatorMatrix,
    /// Set when either grid size is below 64 points.
    pub under_resolved: bool,
}

pub const MIN_COMPLETENESS_NODES: usize = 64;

/// (1/π) Σ w |α⟩⟨α| over Gauss–Legendre radii on [0, radius] times a
/// uniform angle grid, with the planar measure d²α = ρ dρ dφ.
pub fn completeness_quadrature(
    radius: f64,
    n_r: usize,
    n_phi: usize,
    dim: usize,
) -> Result<CompletenessQuadrature> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param("radius", format!("{radius} must be positive")));
    }
    if n_r == 0 || n_phi == 0 {
        return Err(Error::param("grid", "empty quadrature grid"));
    }
    let (rho, w) = gauss_legendre(n_r, 0.0, radius);
    let lnf = ln_factorials(dim);
    let dphi = 2.0 * PI / n_phi as f64;

    // The angular sum only couples (m, n) through e^{i(m−n)φ}; summing it
    // first leaves a radial sum per entry.
    let mut angular = vec![C64::new(0.0, 0.0); 2 * dim - 1];
    for (k, slot) in angular.iter_mut().enumerate() {
        let diff = k as f64 - (dim - 1) as f64;
        *slot = (0..n_phi)
            .map(|j| C64::from_polar(dphi, diff * j as f64 * dphi))
            .sum();
    }
    let mut radial = ndarray::Array2::<f64>::zeros((dim, dim));
    for (&r, &wk) in rho.iter().zip(&w) {
        if r == 0.0 {
            continue;
        }
        let amp: Vec<f64> = (0..dim)
            .map(|n| (n as f64 * r.ln() - 0.5 * lnf[n] - 0.5 * r * r).exp())
            .collect();
        for m in 0..dim {
            for n in 0..dim {
                radial[[m, n]] += wk * r * amp[m] * amp[n];
            }
        }
    }
    let mut out = ndarray::Array2::<C64>::zeros((dim, dim));
    for m in 0..dim {
        for n in 0..dim {
            out[[m, n]] = angular[m + dim - 1 - n] * radial[[m, n]] / PI;
        }
    }
    Ok(CompletenessQuadrature {
        resolution: OperatorMatrix::from_array(out)?,
        under_resolved: n_r < MIN_COMPLETENESS_NODES || n_phi < MIN_COMPLETENESS_NODES,
    })
}

/// Allowed discrete norm deficit of sampled wavefunctions before they are
/// renormalized.
pub const GRID_NORM_TOL: f64 = 1e-6;

/// ψ_α(x) = π^{−1/4} exp(−x²/2 + √2αx − α²/2 − |α|²/2), renormalized on the grid.
pub fn coherent_wavefunction(alpha: C64, grid: &Grid) -> Result<GridWavefunction> {
    let u = NATURAL_UNITS;
    let s = (u.mass * u.omega / u.hbar).sqrt();
    let norm = (s * s / PI).powf(0.25);
    let psi = GridWavefunction::from_fn(*grid, |x| {
        let y = s * x;
        norm * (-0.5 * y * y + 2f64.sqrt() * alpha * y - 0.5 * alpha * alpha
            - 0.5 * alpha.norm_sqr())
        .exp()
    });
    let deficit = (1.0 - psi.norm_sqr()).abs();
    if deficit > GRID_NORM_TOL || !deficit.is_finite() {
        return Err(Error::NormalizationDeficit { deficit });
    }
    psi.normalized()
}

/// Initial coherent parameter and elapsed time, ω = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionSpec {
    pub alpha0: C64,
    pub t: f64,
}

/// e^{−iωt/2}|e^{−iωt}α₀⟩.
pub fn evolve_coherent(spec: &EvolutionSpec, dim: usize) -> Result<FockState> {
    if !spec.t.is_finite() {
        return Err(Error::NonFinite("t"));
    }
    let w = NATURAL_UNITS.omega;
    let alpha_t = spec.alpha0 * C64::from_polar(1.0, -w * spec.t);
    let state = coherent_ladder(&CoherentSpec::new(alpha_t, dim)?)?;
    Ok(state.scaled(C64::from_polar(1.0, -0.5 * w * spec.t)))
}

/// exp(−iHt/ħ)|ψ⟩ by the matrix exponential.
pub fn evolve_by_exponential(state: &FockState, t: f64) -> Result<FockState> {
    let h = hamiltonian(state.dim())?;
    let u = matrix_exponential(&h.scale(C64::new(0.0, -t / NATURAL_UNITS.hbar)))?;
    state.apply(&u)
}

/// ⟨x⟩(t) samples and the largest simple-harmonic residual
/// |Δ²⟨x⟩/Δt² + ω²⟨x⟩| over interior samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub x: Vec<f64>,
    pub shm_residual: f64,
}

/// ⟨x⟩(t) = √2|α₀|cos(ωt − arg α₀).
pub fn classical_trajectory(alpha0: C64, ts: &[f64]) -> Result<Trajectory> {
    if ts.len() < 3 {
        return Err(Error::param("ts", "need at least 3 samples"));
    }
    let dt = ts[1] - ts[0];
    if !(dt > 0.0) {
        return Err(Error::param("ts", "times must increase"));
    }
    let uniform = ts
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.max(w[1].abs()));
    if !uniform {
        return Err(Error::param("ts", "times must be uniformly spaced"));
    }
    let w = NATURAL_UNITS.omega;
    let amp = 2.0 * NATURAL_UNITS.x_scale() * alpha0.norm();
    let phi = alpha0.arg();
    let x: Vec<f64> = ts.iter().map(|t| amp * (w * t - phi).cos()).collect();
    let shm_residual = (1..x.len() - 1)
        .map(|k| ((x[k + 1] - 2.0 * x[k] + x[k - 1]) / (dt * dt) + w * w * x[k]).abs())
        .fold(0.0, f64::max);
    Ok(Trajectory { x, shm_residual })
}
