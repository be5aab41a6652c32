//! Isospectral deformations of the oscillator on a spatial grid.
//!
//! With ψ₀ = π^{−1/4}e^{−x²/2} and I(x) = ∫_{−∞}^x ψ₀², the superpotential
//! Ŵ = W + φ_λ, φ_λ = ψ₀²/(λ + I), gives a partner Hamiltonian with the
//! oscillator spectrum for every λ outside [−1, 0]. Its eigenstates χ_n are
//! obtained from ψ_n in closed form; the unitary U : ψ_n ↦ χ_n is carried by
//! the basis correspondence, so λ-coherent and λ-squeezed states are built
//! from ordinary oscillator coefficients and resynthesized on χ_n.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::coherent::{coherent_amplitudes, displacement_operator};
use crate::error::{Error, Result};
use crate::fock::{build_ladder, quadrature_report, FockState, OperatorMatrix, QuadratureReport};
use crate::grid::{hermite_functions, Grid, GridWavefunction};
use crate::squeezing::{squeeze_operator, SqueezeSpec};
use crate::tridiag::SymTridiagonal;
use crate::C64;

pub const MIN_SQM_POINTS: usize = 2001;
pub const SQM_HALF_WIDTH: f64 = 10.0;
/// Largest |ξ| accepted by [`lambda_squeezed`].
pub const MAX_LAMBDA_SQUEEZE: f64 = 0.75;
/// Oscillator coefficients beyond the synthesized levels may carry at most
/// this probability.
pub const MODAL_TAIL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsospectralFamily {
    pub lambda: f64,
    pub grid: Grid,
    /// Superpotential samples; W(x) = x.
    pub w: Vec<f64>,
    pub phi_lambda: Vec<f64>,
    pub w_hat: Vec<f64>,
    /// I(x) = ∫_{−∞}^x ψ₀².
    pub cumulative: Vec<f64>,
    pub e0: f64,
}

impl IsospectralFamily {
    /// V_λ = ½(Ŵ² − Ŵ') + E₀, with Ŵ' by finite differences.
    pub fn potential(&self) -> Vec<f64> {
        let dw = self.grid.derivative(&self.w_hat);
        self.w_hat
            .iter()
            .zip(&dw)
            .map(|(w, d)| 0.5 * (w * w - d) + self.e0)
            .collect()
    }

    /// Highest level index the grid supports: √(2n+1) + 5 ≤ half-width.
    pub fn max_level(&self) -> usize {
        let half = (-self.grid.x_min).min(self.grid.x_max());
        let r = half - 5.0;
        if r < 1.0 {
            return 0;
        }
        ((r * r - 1.0) / 2.0).floor() as usize
    }

    fn check_levels(&self, n_levels: usize) -> Result<()> {
        if n_levels == 0 {
            return Err(Error::param("n_levels", "must be positive"));
        }
        if n_levels - 1 > self.max_level() {
            return Err(Error::Range(format!(
                "{n_levels} levels exceed the grid budget of {} on this grid",
                self.max_level() + 1
            )));
        }
        Ok(())
    }
}

pub fn build_family(lambda: f64, grid: &Grid) -> Result<IsospectralFamily> {
    if !lambda.is_finite() {
        return Err(Error::NonFinite("lambda"));
    }
    if (-1.0..=0.0).contains(&lambda) {
        return Err(Error::param(
            "lambda",
            format!("{lambda} in [-1, 0] puts a pole of φ_λ on the real line"),
        ));
    }
    if !grid.covers(-SQM_HALF_WIDTH, SQM_HALF_WIDTH)
        || grid.n_points < MIN_SQM_POINTS
        || grid.dx > 2.0 * SQM_HALF_WIDTH / (MIN_SQM_POINTS - 1) as f64 + 1e-12
    {
        return Err(Error::param(
            "grid",
            format!("needs [-{SQM_HALF_WIDTH}, {SQM_HALF_WIDTH}] at spacing ≤ 0.01"),
        ));
    }
    let xs = grid.points();
    let psi0 = &hermite_functions(grid, 1)[0];
    let dens: Vec<f64> = psi0.iter().map(|p| p * p).collect();
    // trapezoid with the Euler–Maclaurin end correction −h²/12·(f′(x) − f′(x_min));
    // the mass below x_min is under e^{−100}
    let df = grid.derivative(&dens);
    let h2 = grid.dx * grid.dx / 12.0;
    let cumulative: Vec<f64> = grid
        .cumulative(&dens)
        .iter()
        .zip(&df)
        .map(|(t, d)| t - h2 * (d - df[0]))
        .collect();
    let phi_lambda: Vec<f64> = dens.iter().zip(&cumulative).map(|(d, i)| d / (lambda + i)).collect();
    if phi_lambda.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("phi_lambda"));
    }
    let w = xs;
    let w_hat = w.iter().zip(&phi_lambda).map(|(w, p)| w + p).collect();
    Ok(IsospectralFamily {
        lambda,
        grid: *grid,
        w,
        phi_lambda,
        w_hat,
        cumulative,
        e0: 0.5,
    })
}

/// χ₀ before renormalization, √(λ(λ+1))·ψ₀/(λ + I).
pub fn chi0_unnormalized(family: &IsospectralFamily) -> GridWavefunction {
    let psi0 = &hermite_functions(&family.grid, 1)[0];
    let pre = (family.lambda * (family.lambda + 1.0)).sqrt();
    let values = psi0
        .iter()
        .zip(&family.cumulative)
        .map(|(p, i)| C64::new(pre * p / (family.lambda + i), 0.0))
        .collect();
    GridWavefunction {
        grid: family.grid,
        values,
    }
}

/// χ₀ and χ_n = ψ_n + φ_λ(ψ_n′ + Wψ_n)/(2n), each renormalized on the grid.
pub fn chi_states(family: &IsospectralFamily, n_levels: usize) -> Result<Vec<GridWavefunction>> {
    family.check_levels(n_levels)?;
    let psis = hermite_functions(&family.grid, n_levels);
    let mut out = Vec::with_capacity(n_levels);
    out.push(chi0_unnormalized(family).normalized()?);
    for (n, psi) in psis.iter().enumerate().skip(1) {
        let d = family.grid.derivative(psi);
        let values = (0..psi.len())
            .map(|k| {
                let b = d[k] + family.w[k] * psi[k];
                C64::new(psi[k] + family.phi_lambda[k] * b / (2.0 * n as f64), 0.0)
            })
            .collect();
        out.push(GridWavefunction::new(family.grid, values)?.normalized()?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    /// |E_n − (n + ½)|
    pub eigenvalue_errors: Vec<f64>,
    /// Overlap² between the finite-difference eigenvector and χ_n.
    pub fidelities: Vec<f64>,
}

impl SpectralReport {
    pub fn max_eigenvalue_error(&self) -> f64 {
        self.eigenvalue_errors.iter().cloned().fold(0.0, f64::max)
    }

    pub fn min_fidelity(&self) -> f64 {
        self.fidelities.iter().cloned().fold(1.0, f64::min)
    }
}

/// Diagonalizes −½d²/dx² + V_λ (three-point Laplacian, Dirichlet walls) and
/// compares the lowest levels with n + ½ and with χ_n.
pub fn spectral_check(family: &IsospectralFamily, n_levels: usize) -> Result<SpectralReport> {
    let chis = chi_states(family, n_levels)?;
    let v = family.potential();
    let n = v.len();
    let h2 = family.grid.dx * family.grid.dx;
    let inner = 1..n - 1;
    let diag: Vec<f64> = v[inner.clone()].iter().map(|v| 1.0 / h2 + v).collect();
    let off = vec![-0.5 / h2; diag.len() - 1];
    let h = SymTridiagonal::new(diag, off)?;
    let levels = h.lowest(n_levels)?;
    let mut report = SpectralReport {
        eigenvalues: Vec::with_capacity(n_levels),
        eigenvalue_errors: Vec::with_capacity(n_levels),
        fidelities: Vec::with_capacity(n_levels),
    };
    for (k, ((e, vec), chi)) in levels.iter().zip(&chis).enumerate() {
        let c: Vec<f64> = chi.values[inner.clone()].iter().map(|z| z.re).collect();
        let dot: f64 = vec.iter().zip(&c).map(|(a, b)| a * b).sum();
        let vv: f64 = vec.iter().map(|a| a * a).sum();
        let cc: f64 = c.iter().map(|a| a * a).sum();
        report.eigenvalues.push(*e);
        report.eigenvalue_errors.push((e - (k as f64 + 0.5)).abs());
        report.fidelities.push(dot * dot / (vv * cc));
    }
    Ok(report)
}

/// Gram-matrix deviation max |⟨χ_m|χ_n⟩ − δ_mn|.
pub fn gram_defect(chis: &[GridWavefunction]) -> Result<f64> {
    let mut worst = 0f64;
    for (m, a) in chis.iter().enumerate() {
        for (n, b) in chis.iter().enumerate().skip(m) {
            let g = a.inner(b)?;
            let target = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    Ok(worst)
}

/// ã = UaU† in the χ basis: the oscillator ladder matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalOperatorSet {
    pub n_levels: usize,
    pub a_modal: OperatorMatrix,
}

impl ModalOperatorSet {
    pub fn new(n_levels: usize) -> Result<Self> {
        Ok(ModalOperatorSet {
            n_levels,
            a_modal: build_ladder(n_levels)?.0,
        })
    }
}

/// A λ-family state: oscillator coefficients and their synthesis on χ_n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaState {
    pub wavefunction: GridWavefunction,
    pub coefficients: FockState,
    /// x̃, p̃ moments from the modal coefficients.
    pub modal: QuadratureReport,
    /// Probability carried by coefficients beyond the synthesized levels.
    pub tail: f64,
}

impl LambdaState {
    /// ‖ãc − zc‖ with ã the truncated modal ladder.
    pub fn eigen_residual(&self, z: C64) -> Result<f64> {
        let ops = ModalOperatorSet::new(self.coefficients.dim())?;
        let c = self.coefficients.amps();
        let r = ops.a_modal.apply(c)? - c * z;
        Ok(r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
    }
}

fn synthesize(
    family: &IsospectralFamily,
    coeffs: Array1<C64>,
    tail: f64,
) -> Result<LambdaState> {
    let n_levels = coeffs.len();
    let chis = chi_states(family, n_levels)?;
    let mut values = vec![C64::new(0.0, 0.0); family.grid.n_points];
    for (c, chi) in coeffs.iter().zip(&chis) {
        for (v, x) in values.iter_mut().zip(&chi.values) {
            *v += c * x;
        }
    }
    let coefficients = FockState::new(coeffs)?.normalized()?;
    Ok(LambdaState {
        wavefunction: GridWavefunction::new(family.grid, values)?.normalized()?,
        modal: quadrature_report(&coefficients)?,
        coefficients,
        tail,
    })
}

/// Σ e^{−|z|²/2} zⁿ/√(n!) χ_n over `n_levels` levels.
pub fn lambda_coherent(z: C64, family: &IsospectralFamily, n_levels: usize) -> Result<LambdaState> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("z"));
    }
    if z.norm_sqr() + 6.0 * z.norm() > n_levels as f64 {
        return Err(Error::Range(format!(
            "|z| = {} needs |z|² + 6|z| ≤ n_levels = {n_levels}",
            z.norm()
        )));
    }
    family.check_levels(n_levels)?;
    let c = coherent_amplitudes(z, n_levels.max(2));
    let c = c.slice(ndarray::s![..n_levels]).to_owned();
    let tail = 1.0 - c.iter().map(|v| v.norm_sqr()).sum::<f64>();
    synthesize(family, c, tail.max(0.0))
}

/// S(ξ)D(z)|0⟩ in oscillator coefficients, resynthesized on χ_n.
pub fn lambda_squeezed(
    xi: C64,
    z: C64,
    family: &IsospectralFamily,
    n_levels: usize,
) -> Result<LambdaState> {
    if xi.norm() > MAX_LAMBDA_SQUEEZE {
        return Err(Error::param("xi", format!("|ξ| = {} above {MAX_LAMBDA_SQUEEZE}", xi.norm())));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("z"));
    }
    family.check_levels(n_levels)?;
    // the oscillator-side state is prepared with headroom above the
    // synthesized levels so its own truncation stays out of the tail
    let big = n_levels + 64;
    let d = displacement_operator(z, big)?;
    let s = squeeze_operator(&SqueezeSpec::new(xi.norm(), xi.arg(), big)?)?;
    let v = s.apply(&d.apply(FockState::vacuum(big)?.amps())?)?;
    let total: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    let c = v.slice(ndarray::s![..n_levels]).to_owned();
    let tail = 1.0 - c.iter().map(|v| v.norm_sqr()).sum::<f64>() / total;
    if tail > MODAL_TAIL {
        return Err(Error::NormalizationDeficit { deficit: tail });
    }
    synthesize(family, c, tail.max(0.0))
}
