use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{check_squeeze, tight_squeeze_dim};
use crate::error::Result;
use crate::expm::expm_apply;
use crate::tolerance::Tolerances;
use crate::two_mode::{shifted, su11_two_mode_generator, TwoModeState};
use crate::C64;

/// Probability below which a Schmidt coefficient is too small for its ratio
/// to be meaningful.
const SCHMIDT_FLOOR: f64 = 1e-12;

fn tail_flag(state: &TwoModeState, r: f64) -> bool {
    let tight = state.dim_a().min(state.dim_b()) >= tight_squeeze_dim(r);
    !tight || state.tail_mass(0.25) > Tolerances::default().tail
}

/// exp((s/2)(a₁a₂ − a₁†a₂†))|0,0⟩.
pub fn two_mode_squeezed_vacuum(s: f64, dim_a: usize, dim_b: usize) -> Result<TwoModeState> {
    check_squeeze(s)?;
    let g = su11_two_mode_generator(
        dim_a,
        dim_b,
        C64::new(0.0, 0.0),
        C64::new(-s / 2.0, 0.0),
        C64::new(s / 2.0, 0.0),
    )?;
    let v = expm_apply(&g, &TwoModeState::vacuum(dim_a, dim_b)?.to_vector())?;
    let state = TwoModeState::from_vector(dim_a, dim_b, v)?;
    let flag = tail_flag(&state, s / 2.0);
    Ok(state.with_tail_warning(flag))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtReport {
    /// Σ_{m≠n}|c_{mn}|² / Σ|c|².
    pub off_diagonal_mass: f64,
    /// |c_{n,n}|², leading entries down to the probability floor.
    pub spectrum: Vec<f64>,
    /// |c_{n+1,n+1}/c_{n,n}| over pairs with n + 1 below half the smaller
    /// dimension and both probabilities above the floor.
    pub ratios: Vec<f64>,
    pub mean_ratio: f64,
    /// max − min of `ratios`.
    pub ratio_spread: f64,
}

pub fn schmidt_analysis(state: &TwoModeState) -> SchmidtReport {
    let half = state.dim_a().min(state.dim_b()) / 2;
    let norm = state.norm_sqr();
    let diag: Vec<C64> = (0..state.dim_a().min(state.dim_b())).map(|n| state.amp(n, n)).collect();
    let spectrum: Vec<f64> = diag
        .iter()
        .map(|z| z.norm_sqr() / norm)
        .take_while(|p| *p >= SCHMIDT_FLOOR)
        .collect();
    let ratios: Vec<f64> = (0..half.saturating_sub(1))
        .take_while(|&n| n + 1 < spectrum.len())
        .map(|n| (diag[n + 1] / diag[n]).norm())
        .collect();
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &r| (l.min(r), h.max(r)));
    let mean_ratio = if ratios.is_empty() {
        0.0
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    };
    SchmidtReport {
        off_diagonal_mass: state.off_diagonal_mass(),
        spectrum,
        ratio_spread: if ratios.is_empty() { 0.0 } else { hi - lo },
        ratios,
        mean_ratio,
    }
}

/// Σ_k (γK⁺)^k v / k! on an amplitude grid.
fn raise_pairs(v: Array2<C64>, gamma: C64) -> Array2<C64> {
    let mut acc = v.clone();
    let mut term = v;
    for k in 1.. {
        term = shifted(&shifted(&term, -1, 0), 0, -1).mapv(|z| z * gamma / k as f64);
        if term.iter().all(|z| z.norm() == 0.0) {
            break;
        }
        acc += &term;
    }
    acc
}

/// e^{−½ln cosh Θ} exp(a₁†a₂† tanh Θ)|0,0⟩, renormalized: the printed
/// prefactor leaves norm² = cosh Θ, the state is 1/cosh Θ times the series.
pub fn two_mode_theta_vacuum(theta: f64, dim_a: usize, dim_b: usize) -> Result<TwoModeState> {
    check_squeeze(theta)?;
    let v = TwoModeState::vacuum(dim_a, dim_b)?.amps().clone();
    let amps = raise_pairs(v, C64::new(theta.tanh(), 0.0)) * (-0.5 * theta.cosh().ln()).exp();
    let state = TwoModeState::new(amps)?.normalized()?;
    let flag = tail_flag(&state, theta);
    Ok(state.with_tail_warning(flag))
}

/// Quadrature noise of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseReport {
    pub var_x1: f64,
    pub var_p1: f64,
    pub var_x2: f64,
    pub var_p2: f64,
    /// ⟨Δx₁Δx₂⟩⟨Δp₁Δp₂⟩
    pub cross: f64,
    /// min_k (Δx_k)²(Δp_k)² − (¼ + cross)
    pub margin: f64,
}

impl NoiseReport {
    pub fn from_state(state: &TwoModeState) -> Result<Self> {
        let m = state.quadrature_moments()?;
        let cross = m.cov_x * m.cov_p;
        let product = (m.var_x1 * m.var_p1).min(m.var_x2 * m.var_p2);
        Ok(NoiseReport {
            var_x1: m.var_x1,
            var_p1: m.var_p1,
            var_x2: m.var_x2,
            var_p2: m.var_p2,
            cross,
            margin: product - (0.25 + cross),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaReport {
    /// max over [Λ±, Λ±†] − I and [Λ₊, Λ₋†] on the interior box.
    pub commutator: f64,
    /// ‖Λ₊|0,0⟩‖ + ‖Λ₋|0,0⟩‖
    pub annihilation: f64,
    /// 1 − |⟨0_Θ|ψ_Λ⟩|² with ψ_Λ ∝ exp((i/2)(Λ₊†² − Λ₋†²)tanh Θ)|0,0⟩.
    pub fidelity_deficit: f64,
}

impl LambdaReport {
    pub fn max(&self) -> f64 {
        self.commutator.max(self.annihilation).max(self.fidelity_deficit)
    }
}

const I: C64 = C64::new(0.0, 1.0);

/// Λ± = (a₁ ± ia₂)/√2 and their adjoints on amplitude grids.
struct LambdaOps;

impl LambdaOps {
    fn lower(v: &Array2<C64>, sign: f64) -> Array2<C64> {
        (shifted(v, 1, 0) + shifted(v, 0, 1).mapv(|z| z * I * sign)) / 2f64.sqrt()
    }

    fn raise(v: &Array2<C64>, sign: f64) -> Array2<C64> {
        (shifted(v, -1, 0) - shifted(v, 0, -1).mapv(|z| z * I * sign)) / 2f64.sqrt()
    }
}

fn max_abs_box(v: &Array2<C64>, ca: usize, cb: usize) -> f64 {
    v.indexed_iter()
        .filter(|((i, j), _)| *i < ca && *j < cb)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max)
}

/// Checks that the two-mode θ-vacuum factorizes into Λ± single-mode squeezes.
pub fn lambda_mode_factorization(theta: f64, dim_a: usize, dim_b: usize) -> Result<LambdaReport> {
    check_squeeze(theta)?;
    let (ca, cb) = (dim_a * 3 / 4, dim_b * 3 / 4);
    let mut commutator = 0f64;
    for i in 0..ca {
        for j in 0..cb {
            let mut e = Array2::<C64>::zeros((dim_a, dim_b));
            e[[i, j]] = C64::new(1.0, 0.0);
            for (s, t) in [(1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
                // [Λ_s, Λ_t†] e
                let c = LambdaOps::lower(&LambdaOps::raise(&e, t), s)
                    - LambdaOps::raise(&LambdaOps::lower(&e, s), t);
                let target = if s == t { &e } else { &Array2::zeros((dim_a, dim_b)) };
                commutator = commutator.max(max_abs_box(&(c - target), ca, cb));
            }
        }
    }
    let vac = TwoModeState::vacuum(dim_a, dim_b)?.amps().clone();
    let norm = |v: &Array2<C64>| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let annihilation = norm(&LambdaOps::lower(&vac, 1.0)) + norm(&LambdaOps::lower(&vac, -1.0));

    let g = I * 0.5 * theta.tanh();
    let x = |v: &Array2<C64>| {
        let p = LambdaOps::raise(&LambdaOps::raise(v, 1.0), 1.0);
        let m = LambdaOps::raise(&LambdaOps::raise(v, -1.0), -1.0);
        (p - m).mapv(|z| z * g)
    };
    let mut acc = vac.clone();
    let mut term = vac;
    for k in 1.. {
        term = x(&term) / C64::new(k as f64, 0.0);
        if term.iter().all(|z| z.norm() == 0.0) {
            break;
        }
        acc += &term;
    }
    let psi = TwoModeState::new(acc)?.normalized()?;
    let target = two_mode_theta_vacuum(theta, dim_a, dim_b)?;
    Ok(LambdaReport {
        commutator,
        annihilation,
        fidelity_deficit: 1.0 - target.fidelity(&psi)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_squeeze_is_vacuum() {
        let vac = TwoModeState::vacuum(8, 8).unwrap();
        assert_eq!(two_mode_squeezed_vacuum(0.0, 8, 8).unwrap().amps(), vac.amps());
        assert_eq!(two_mode_theta_vacuum(0.0, 8, 8).unwrap().amps(), vac.amps());
    }

    #[test]
    fn schmidt_geometric_at_half_rapidity() {
        let s = two_mode_squeezed_vacuum(1.0, 48, 48).unwrap();
        let r = schmidt_analysis(&s);
        assert!(r.off_diagonal_mass <= 1e-12);
        assert!(r.ratio_spread <= 1e-8, "{}", r.ratio_spread);
        assert!((r.mean_ratio - 0.5f64.tanh()).abs() <= 1e-8);
        assert!(r.ratios.len() >= 10);
    }

    #[test]
    fn theta_vacuum_matches_exponential() {
        // exp(−Θ(a₁a₂ − a₁†a₂†)) is the same state as the pair series
        let t = 0.4;
        let a = two_mode_theta_vacuum(t, 40, 40).unwrap();
        let b = two_mode_squeezed_vacuum(-2.0 * t, 40, 40).unwrap();
        assert!(1.0 - a.fidelity(&b).unwrap() < 1e-12);
        assert!((a.amp(0, 0).re - 1.0 / t.cosh()).abs() < 1e-12);
    }

    #[test]
    fn noise_term() {
        let s = two_mode_theta_vacuum(0.5, 48, 48).unwrap();
        let n = NoiseReport::from_state(&s).unwrap();
        assert!((n.var_x1 - 1f64.cosh() / 2.0).abs() < 1e-9);
        assert!((n.var_p2 - 1f64.cosh() / 2.0).abs() < 1e-9);
        assert!((n.cross.abs() - 1f64.sinh().powi(2) / 4.0).abs() < 1e-7);
        assert!((n.cross.abs() - 0.345275).abs() < 1e-6);
        assert!((n.margin - 1f64.sinh().powi(2) / 2.0).abs() < 1e-7);
    }

    #[test]
    fn lambda_factorization() {
        let r = lambda_mode_factorization(0.0, 12, 12).unwrap();
        assert!(r.max() <= 1e-12);
        let r = lambda_mode_factorization(0.4, 40, 40).unwrap();
        assert!(r.fidelity_deficit <= 1e-7);
        assert!(r.commutator <= 1e-10);
        assert!(r.annihilation == 0.0);
    }
}
