use std::f64::consts::PI;

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use super::{check_squeeze, tight_squeeze_dim};
use crate::coherent::{ln_factorials, GRID_NORM_TOL};
use crate::error::{Error, Result};
use crate::expm::{expm_apply, matrix_exponential};
use crate::fock::{build_ladder, FockState, OperatorMatrix};
use crate::grid::{Grid, GridWavefunction};
use crate::phase::build_r_ops;
use crate::tolerance::Tolerances;
use crate::C64;

/// Squeeze parameter ξ = re^{iφ} and truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeSpec {
    pub r: f64,
    pub phi: f64,
    pub dim: usize,
}

impl SqueezeSpec {
    pub fn new(r: f64, phi: f64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        if !(r >= 0.0) {
            return Err(Error::param("r", format!("{r} must be nonnegative")));
        }
        check_squeeze(r)?;
        if !phi.is_finite() {
            return Err(Error::NonFinite("phi"));
        }
        Ok(SqueezeSpec { r, phi, dim })
    }

    pub fn xi(&self) -> C64 {
        C64::from_polar(self.r, self.phi)
    }

    pub fn is_tight(&self) -> bool {
        self.dim >= tight_squeeze_dim(self.r)
    }
}

/// S(ξ) = exp((ξa†² − ξ*a²)/2).
pub fn squeeze_operator(spec: &SqueezeSpec) -> Result<OperatorMatrix> {
    let (a, adag) = build_ladder(spec.dim)?;
    let xi = spec.xi();
    let gen = (&adag.matmul(&adag)?.scale(xi) - &a.matmul(&a)?.scale(xi.conj())).scale_real(0.5);
    matrix_exponential(&gen)
}

/// S(ξ)|0⟩ = (cosh r)^{−1/2} Σ_j (½e^{iφ} tanh r)^j √((2j)!)/j! |2j⟩,
/// renormalized over the truncated basis.
pub fn squeezed_vacuum_closed_form(spec: &SqueezeSpec) -> Result<FockState> {
    let mut amps = Array1::<C64>::zeros(spec.dim);
    let t = 0.5 * spec.r.tanh();
    if t == 0.0 {
        amps[0] = C64::new(1.0, 0.0);
    } else {
        let lnf = ln_factorials(spec.dim);
        let pre = -0.5 * spec.r.cosh().ln();
        for j in 0..spec.dim.div_ceil(2) {
            let mag = (pre + j as f64 * t.ln() + 0.5 * lnf[2 * j] - lnf[j]).exp();
            amps[2 * j] = C64::from_polar(mag, j as f64 * spec.phi);
        }
    }
    let s = FockState::new(amps)?;
    let deficit = 1.0 - s.norm_sqr();
    Ok(s.normalized()?
        .with_tail_warning(!spec.is_tight() || deficit > Tolerances::default().tail))
}

/// π^{−1/4}s^{−1/2} exp(−(x−x₀)²/(2s²) + ip₀x), renormalized on the grid.
pub fn squeezed_wavefunction(s: f64, x0: f64, p0: f64, grid: &Grid) -> Result<GridWavefunction> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::param("s", format!("width {s} must be positive")));
    }
    let norm = (PI * s * s).powf(-0.25);
    let psi = GridWavefunction::from_fn(*grid, |x| {
        let d = x - x0;
        C64::from_polar(norm * (-d * d / (2.0 * s * s)).exp(), p0 * x)
    });
    let deficit = (1.0 - psi.norm_sqr()).abs();
    if deficit > GRID_NORM_TOL || !deficit.is_finite() {
        return Err(Error::NormalizationDeficit { deficit });
    }
    psi.normalized()
}

/// Σ_k X^k v / k! for a nilpotent raising action X; terminates once the
/// term vanishes.
pub(crate) fn nilpotent_series(
    v: Array1<C64>,
    max_terms: usize,
    x: impl Fn(&Array1<C64>) -> Result<Array1<C64>>,
) -> Result<Array1<C64>> {
    let mut acc = v.clone();
    let mut term = v;
    for k in 1..=max_terms {
        term = x(&term)? / C64::new(k as f64, 0.0);
        if term.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            break;
        }
        acc += &term;
    }
    Ok(acc)
}

/// e^{−½ln cosh θ} exp(½a†² tanh θ)|0⟩, renormalized.
pub fn theta_vacuum(theta: f64, dim: usize) -> Result<FockState> {
    check_squeeze(theta)?;
    let (_, adag) = build_ladder(dim)?;
    let raise2 = adag.matmul(&adag)?.scale_real(0.5 * theta.tanh());
    let v = FockState::vacuum(dim)?.amps().clone();
    let amps = nilpotent_series(v, dim, |u| raise2.apply(u))?;
    let s = FockState::new(amps * (-0.5 * theta.cosh().ln()).exp())?;
    let deficit = 1.0 - s.norm_sqr();
    let tight = dim >= tight_squeeze_dim(theta);
    Ok(s.normalized()?
        .with_tail_warning(!tight || deficit > Tolerances::default().tail))
}

/// ‖(a cosh θ − a† sinh θ)|ψ⟩‖.
pub fn theta_annihilation_residual(state: &FockState, theta: f64) -> Result<f64> {
    let (a, adag) = build_ladder(state.dim())?;
    let op = &a.scale_real(theta.cosh()) - &adag.scale_real(theta.sinh());
    let r = op.apply(state.amps())?;
    Ok(r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// k_n e^{−½ln cosh θ} tanhⁿθ with k_n = (2n−1)!/((n−1)!2^{n−1}).
pub fn u_closed_form(theta: f64, n: usize) -> f64 {
    let k = if n == 0 {
        1.0
    } else {
        let lnf = ln_factorials(2 * n);
        (lnf[2 * n - 1] - lnf[n - 1] - (n - 1) as f64 * 2f64.ln()).exp()
    };
    k * (-0.5 * theta.cosh().ln()).exp() * theta.tanh().powi(n as i32)
}

/// Numeric ⟨0|a^{2n}|0_θ⟩ and its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentU {
    pub numeric: C64,
    pub closed_form: f64,
    /// Set when 2n ≥ dim/2 and truncation limits the numeric value.
    pub truncated: bool,
}

/// ⟨0|a^{2n}|0_θ⟩ by repeated ladder products on the un-renormalized
/// θ-vacuum e^{−½ln cosh θ}exp(½a†² tanh θ)|0⟩.
pub fn vacuum_moment_u(theta: f64, n: usize, dim: usize) -> Result<MomentU> {
    check_squeeze(theta)?;
    let (a, adag) = build_ladder(dim)?;
    let raise2 = adag.matmul(&adag)?.scale_real(0.5 * theta.tanh());
    let v = FockState::vacuum(dim)?.amps().clone();
    let mut w = nilpotent_series(v, dim, |u| raise2.apply(u))? * (-0.5 * theta.cosh().ln()).exp();
    for _ in 0..2 * n {
        w = a.apply(&w)?;
    }
    Ok(MomentU {
        numeric: w[0],
        closed_form: u_closed_form(theta, n),
        truncated: 2 * n >= dim / 2,
    })
}

/// |∂u_n/∂θ − (−½u_{n+1} + n(2n−1)u_{n−1})| with the derivative taken by a
/// central difference of step `h`, all u from the numeric construction.
pub fn u_recurrence_residual(theta: f64, n: usize, dim: usize, h: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "recurrence needs n ≥ 1"));
    }
    let u = |t: f64, k: usize| -> Result<f64> { Ok(vacuum_moment_u(t, k, dim)?.numeric.re) };
    let du = (u(theta + h, n)? - u(theta - h, n)?) / (2.0 * h);
    let rhs = -0.5 * u(theta, n + 1)? + (n * (2 * n - 1)) as f64 * u(theta, n - 1)?;
    Ok((du - rhs).abs())
}

/// exp(αR⁺ − α*R⁻)|0⟩ with α = atanh|β|·e^{i arg β}, so that the profile
/// is √(1−|β|²) Σ βⁿ|n⟩.
pub fn phase_squeezed_state_sr(beta: C64, dim: usize) -> Result<FockState> {
    let m = beta.norm();
    if !(m < 1.0) {
        return Err(Error::param("beta", format!("|beta| = {m} must be below 1 for convergence")));
    }
    let alpha = C64::from_polar(m.atanh(), beta.arg());
    let r = build_r_ops(dim)?;
    let gen = &r.r_plus.scale(alpha) - &r.r_minus.scale(alpha.conj());
    let v = expm_apply(&gen, FockState::vacuum(dim)?.amps())?;
    let s = FockState::new(v)?;
    let tail = m.powi(2 * dim as i32);
    Ok(s.with_tail_warning(tail > Tolerances::default().tail))
}

/// √(1−|β|²) Σ βⁿ|n⟩ over the truncated basis, renormalized.
pub fn sr_geometric_profile(beta: C64, dim: usize) -> Result<FockState> {
    let mut amps = Array1::<C64>::zeros(dim);
    let mut c = C64::new((1.0 - beta.norm_sqr()).sqrt(), 0.0);
    for z in amps.iter_mut() {
        *z = c;
        c *= beta;
    }
    FockState::new(amps)?.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expectation, number_operator, quadrature_report};

    #[test]
    fn zero_squeeze_is_identity() {
        let s = squeeze_operator(&SqueezeSpec::new(0.0, 0.3, 12).unwrap()).unwrap();
        assert_eq!(s, OperatorMatrix::identity(12));
        let c = squeezed_vacuum_closed_form(&SqueezeSpec::new(0.0, 0.0, 16).unwrap()).unwrap();
        assert_eq!(c, FockState::vacuum(16).unwrap());
    }

    #[test]
    fn photon_number_at_r_one() {
        let spec = SqueezeSpec::new(1.0, 0.0, 96).unwrap();
        let s = FockState::vacuum(96).unwrap().apply(&squeeze_operator(&spec).unwrap()).unwrap();
        let n = expectation(&number_operator(96).unwrap(), &s).unwrap().re;
        assert!((n - 1f64.sinh().powi(2)).abs() <= 1e-6);
        assert!((n - 1.381098).abs() <= 1e-6);
    }

    #[test]
    fn variance_pair_at_half() {
        let spec = SqueezeSpec::new(0.5, 0.0, 64).unwrap();
        let s = FockState::vacuum(64).unwrap().apply(&squeeze_operator(&spec).unwrap()).unwrap();
        let q = quadrature_report(&s).unwrap();
        let (lo, hi) = (q.var_x.min(q.var_p), q.var_x.max(q.var_p));
        assert!((lo - (-1f64).exp() / 2.0).abs() < 1e-8);
        assert!((hi - 1f64.exp() / 2.0).abs() < 1e-8);
        assert!((q.product - 0.25).abs() < 1e-8);
    }

    #[test]
    fn unitary_on_interior() {
        let spec = SqueezeSpec::new(1.5, 0.4, 96).unwrap();
        let s = squeeze_operator(&spec).unwrap();
        let p = s.dagger().matmul(&s).unwrap();
        assert!((&p - &OperatorMatrix::identity(96)).max_abs_leading(72) <= 1e-8);
    }

    #[test]
    fn closed_form_matches_operator() {
        let spec = SqueezeSpec::new(0.8, PI / 2.0, 96).unwrap();
        let a = squeezed_vacuum_closed_form(&spec).unwrap();
        let b = FockState::vacuum(96).unwrap().apply(&squeeze_operator(&spec).unwrap()).unwrap();
        assert!(1.0 - a.fidelity(&b).unwrap() <= 1e-8);
        for n in (1..96).step_by(2) {
            assert_eq!(a.amp(n), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn wavefunction_widths() {
        let g = Grid::new(-20.0, 20.0, 4096).unwrap();
        let m = squeezed_wavefunction(1.0, 0.0, 0.0, &g).unwrap().moments();
        assert!((m.var_x - 0.5).abs() < 1e-8);
        let m = squeezed_wavefunction(2.0, 0.0, 0.0, &g).unwrap().moments();
        assert!((m.var_x / m.var_p - 16.0).abs() < 1e-4);
        let m = squeezed_wavefunction(0.7, 1.0, -0.5, &g).unwrap().moments();
        assert!((m.product - 0.25).abs() < 1e-6);
        assert!((m.mean_p + 0.5).abs() < 1e-6);
        assert!(squeezed_wavefunction(0.0, 0.0, 0.0, &g).is_err());
    }

    #[test]
    fn theta_vacuum_properties() {
        assert_eq!(theta_vacuum(0.0, 16).unwrap().amps(), FockState::vacuum(16).unwrap().amps());
        let s = theta_vacuum(0.6, 96).unwrap();
        assert!(theta_annihilation_residual(&s, 0.6).unwrap() <= 1e-8);
        let q = quadrature_report(&theta_vacuum(0.5, 96).unwrap()).unwrap();
        assert!((q.var_x - 1f64.exp() / 2.0).abs() < 1e-8);
        assert!((q.product - 0.25).abs() < 1e-8);
    }

    #[test]
    fn moments_match_closed_form() {
        assert!((u_closed_form(0.3, 1) - (-0.5 * 0.3f64.cosh().ln()).exp() * 0.3f64.tanh()).abs() < 1e-16);
        for n in 1..=3 {
            let m = vacuum_moment_u(0.4, n, 64).unwrap();
            assert!((m.numeric.re - m.closed_form).abs() <= 1e-7);
            assert!(!m.truncated);
            assert_eq!(vacuum_moment_u(0.0, n, 64).unwrap().numeric, C64::new(0.0, 0.0));
        }
        assert!((u_closed_form(1.0, 2) / u_closed_form(1.0, 1) - 3.0 * 1f64.tanh()).abs() < 1e-14);
        assert!(u_recurrence_residual(0.4, 2, 64, 1e-4).unwrap() <= 1e-5);
    }

    #[test]
    fn sr_state_is_geometric() {
        assert_eq!(
            phase_squeezed_state_sr(C64::new(0.0, 0.0), 16).unwrap(),
            FockState::vacuum(16).unwrap()
        );
        let s = phase_squeezed_state_sr(C64::new(0.5, 0.0), 64).unwrap();
        let p = s.photon_distribution();
        for (n, pn) in p.iter().enumerate().take(20) {
            assert!((pn - 0.75 * 0.25f64.powi(n as i32)).abs() < 1e-12);
        }
        let beta = C64::from_polar(0.6f64.tanh(), PI / 4.0);
        let s = phase_squeezed_state_sr(beta, 64).unwrap();
        assert!(1.0 - s.fidelity(&sr_geometric_profile(beta, 64).unwrap()).unwrap() <= 1e-7);
        assert!(phase_squeezed_state_sr(C64::new(1.0, 0.0), 16).is_err());
    }
}
