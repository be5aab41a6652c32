//! Pair coherent states and their relatives in one charge sector
//! |n+q, n⟩ of two modes: the plain pair state, the two-mode Perelomov state,
//! nonlinear pair states and parity-pair superpositions.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::coherent::ln_factorials;
use crate::error::{Error, Result};
use crate::expm::expm_apply;
use crate::su11::kappa;
use crate::tolerance::Tolerances;
use crate::two_mode::{su11_two_mode_generator, TwoModeState};
use crate::C64;

/// Pair eigenvalue ζ, charge q and rectangular truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCoherentSpec {
    pub zeta: C64,
    pub q: usize,
    pub dim_a: usize,
    pub dim_b: usize,
}

impl PairCoherentSpec {
    /// Default truncation dim_a = dim_b + q.
    pub fn new(zeta: C64, q: i64, dim_b: usize) -> Result<Self> {
        let q = charge(q)?;
        Self::with_dims(zeta, q as i64, dim_b + q, dim_b)
    }

    pub fn with_dims(zeta: C64, q: i64, dim_a: usize, dim_b: usize) -> Result<Self> {
        let q = charge(q)?;
        check_sector(q, dim_a, dim_b)?;
        if !zeta.re.is_finite() || !zeta.im.is_finite() {
            return Err(Error::NonFinite("zeta"));
        }
        Ok(PairCoherentSpec {
            zeta,
            q,
            dim_a,
            dim_b,
        })
    }

    /// |ζ| ≤ dim/4 with dim the shorter side of the sector.
    pub fn is_tight(&self) -> bool {
        self.zeta.norm() <= sector_len(self.q, self.dim_a, self.dim_b) as f64 / 4.0
    }
}

fn charge(q: i64) -> Result<usize> {
    if q < 0 {
        return Err(Error::param("q", format!("charge {q} must be nonnegative")));
    }
    Ok(q as usize)
}

fn check_sector(q: usize, dim_a: usize, dim_b: usize) -> Result<()> {
    if dim_b < 2 {
        return Err(Error::InvalidDimension { dim: dim_b, min: 2 });
    }
    if dim_a < q + 2 {
        return Err(Error::InvalidDimension {
            dim: dim_a,
            min: q + 2,
        });
    }
    Ok(())
}

/// Number of kets |n+q, n⟩ inside the box.
fn sector_len(q: usize, dim_a: usize, dim_b: usize) -> usize {
    dim_b.min(dim_a - q)
}

/// Place sector coefficients c_n at (n+q, n).
fn sector_state(q: usize, dim_a: usize, dim_b: usize, c: &[C64]) -> Result<TwoModeState> {
    let mut amps = Array2::<C64>::zeros((dim_a, dim_b));
    for (n, z) in c.iter().enumerate() {
        amps[[n + q, n]] = *z;
    }
    TwoModeState::new(amps)
}

/// ζⁿ/√(n!(n+q)!) for n < len, evaluated in log space.
fn pair_coefficients(zeta: C64, q: usize, len: usize) -> Vec<C64> {
    let lnf = ln_factorials(len + q);
    let r = zeta.norm();
    (0..len)
        .map(|n| {
            if n == 0 {
                return C64::new((-0.5 * lnf[q]).exp(), 0.0);
            }
            if r == 0.0 {
                return C64::new(0.0, 0.0);
            }
            let mag = (n as f64 * r.ln() - 0.5 * (lnf[n] + lnf[n + q])).exp();
            C64::from_polar(mag, n as f64 * zeta.arg())
        })
        .collect()
}

/// Normalized Σ ζⁿ/√(n!(n+q)!) |n+q, n⟩.
pub fn pair_coherent(spec: &PairCoherentSpec) -> Result<TwoModeState> {
    let len = sector_len(spec.q, spec.dim_a, spec.dim_b);
    let c = pair_coefficients(spec.zeta, spec.q, len);
    Ok(sector_state(spec.q, spec.dim_a, spec.dim_b, &c)?
        .normalized()?
        .with_tail_warning(!spec.is_tight()))
}

/// (ab)|ψ⟩ evaluated on the amplitude grid.
fn pair_lower(state: &TwoModeState) -> Array2<C64> {
    let (da, db) = (state.dim_a(), state.dim_b());
    let a = state.amps();
    Array2::from_shape_fn((da, db), |(i, j)| {
        if i + 1 < da && j + 1 < db {
            a[[i + 1, j + 1]] * (((i + 1) * (j + 1)) as f64).sqrt()
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn frob(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Residuals of the two defining equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairResiduals {
    /// ‖(ab − ζ)|ψ⟩‖.
    pub eigen: f64,
    /// ‖(a†a − b†b − q)|ψ⟩‖.
    pub charge: f64,
}

pub fn pair_residuals(state: &TwoModeState, zeta: C64, q: usize) -> PairResiduals {
    let lowered = pair_lower(state);
    let eigen = frob(&(&lowered - &state.amps().mapv(|z| z * zeta)));
    let charge_vec = Array2::from_shape_fn(state.amps().dim(), |(i, j)| {
        state.amp(i, j) * (i as f64 - j as f64 - q as f64)
    });
    PairResiduals {
        eigen,
        charge: frob(&charge_vec),
    }
}

/// ‖f(N_a, N_b)ab|ψ⟩ − ζ|ψ⟩‖.
pub fn nonlinear_residual(
    state: &TwoModeState,
    f: impl Fn(usize, usize) -> f64,
    zeta: C64,
) -> f64 {
    let lowered = pair_lower(state);
    let lhs = Array2::from_shape_fn(lowered.dim(), |(i, j)| lowered[[i, j]] * f(i, j));
    frob(&(&lhs - &state.amps().mapv(|z| z * zeta)))
}

/// Largest |ξ| accepted before cosh|ξ| and the generator norm leave range.
pub const MAX_XI: f64 = 300.0;

/// exp(ξa†b† − ξ*ab)|q, 0⟩ by the matrix exponential on the product space.
pub fn two_mode_perelomov(xi: C64, q: i64, dim_a: usize, dim_b: usize) -> Result<TwoModeState> {
    let q = charge(q)?;
    check_sector(q, dim_a, dim_b)?;
    if !xi.re.is_finite() || !xi.im.is_finite() || xi.norm() > MAX_XI {
        return Err(Error::Range(format!("|xi| = {} exceeds {MAX_XI}", xi.norm())));
    }
    let zero = C64::new(0.0, 0.0);
    let gen = su11_two_mode_generator(dim_a, dim_b, zero, xi, -xi.conj())?;
    let start = TwoModeState::basis(dim_a, dim_b, q, 0)?;
    let v = expm_apply(&gen, &start.to_vector())?;
    let state = TwoModeState::from_vector(dim_a, dim_b, v)?;
    let deficit = 1.0 - state.norm_sqr();
    Ok(state.with_tail_warning(deficit > Tolerances::default().tail))
}

/// exp[(ξ tanh|ξ|/|ξ|) a†b†]|q, 0⟩, normalized.
pub fn two_mode_perelomov_closed_form(
    xi: C64,
    q: i64,
    dim_a: usize,
    dim_b: usize,
) -> Result<TwoModeState> {
    let q = charge(q)?;
    check_sector(q, dim_a, dim_b)?;
    let kap = kappa(xi);
    let len = sector_len(q, dim_a, dim_b);
    // (κa†b†)ⁿ/n! |q,0⟩ = κⁿ √((n+q)!/(q! n!)) |n+q, n⟩
    let mut c = vec![C64::new(1.0, 0.0); len];
    for n in 1..len {
        c[n] = c[n - 1] * kap * (((n + q) as f64) / n as f64).sqrt();
    }
    sector_state(q, dim_a, dim_b, &c)?.normalized()
}

/// The nonlinear function 2/(2 + q + N_a + N_b) that makes the two-mode
/// Perelomov state a nonlinear pair state with ζ = ξ tanh|ξ|/|ξ|.
pub fn perelomov_nonlinearity(q: usize) -> impl Fn(usize, usize) -> f64 {
    move |na, nb| 2.0 / (2.0 + q as f64 + na as f64 + nb as f64)
}

/// Solution of f(N_a, N_b)ab|ψ⟩ = ζ|ψ⟩ in sector q from the amplitude
/// recursion f(m+q, m)√((m+1)(m+1+q)) c_{m+1} = ζ c_m, normalized.
pub fn nonlinear_pair_coherent(
    f: impl Fn(usize, usize) -> f64,
    zeta: C64,
    q: i64,
    dim_a: usize,
    dim_b: usize,
) -> Result<TwoModeState> {
    let q = charge(q)?;
    check_sector(q, dim_a, dim_b)?;
    let len = sector_len(q, dim_a, dim_b);
    let mut c = vec![C64::new(0.0, 0.0); len];
    c[0] = C64::new(1.0, 0.0);
    for m in 0..len - 1 {
        if c[m] == C64::new(0.0, 0.0) || zeta == C64::new(0.0, 0.0) {
            break;
        }
        let fv = f(m + q, m);
        if fv == 0.0 || !fv.is_finite() {
            return Err(Error::DivisionByZero { na: m + q, nb: m });
        }
        let w = fv * (((m + 1) * (m + 1 + q)) as f64).sqrt();
        c[m + 1] = zeta * c[m] / w;
    }
    let state = sector_state(q, dim_a, dim_b, &c)?.normalized()?;
    let edge = state.amp(len - 1 + q, len - 1).norm_sqr();
    Ok(state.with_tail_warning(edge > Tolerances::default().tail))
}

/// (−1)^{n(n−1)/2}.
fn parity_sign(n: usize) -> f64 {
    if (n * n.saturating_sub(1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Normalized Σ √(q!/(n!(n+q)!)) ζⁿ (−1)^{n(n−1)/2} |n+q, n⟩.
pub fn parity_pair_state(spec: &PairCoherentSpec) -> Result<TwoModeState> {
    let len = sector_len(spec.q, spec.dim_a, spec.dim_b);
    let c: Vec<C64> = pair_coefficients(spec.zeta, spec.q, len)
        .into_iter()
        .enumerate()
        .map(|(n, z)| z * parity_sign(n))
        .collect();
    Ok(sector_state(spec.q, spec.dim_a, spec.dim_b, &c)?
        .normalized()?
        .with_tail_warning(!spec.is_tight()))
}

/// (1/√2)(e^{−iπ/4}|iζ, q⟩ + e^{iπ/4}|−iζ, q⟩), both components carrying the
/// unnormalized coefficients ζⁿ/√(n!(n+q)!), then normalized as a whole.
pub fn parity_pair_superposition(spec: &PairCoherentSpec) -> Result<TwoModeState> {
    let len = sector_len(spec.q, spec.dim_a, spec.dim_b);
    let i = C64::new(0.0, 1.0);
    let plus = pair_coefficients(i * spec.zeta, spec.q, len);
    let minus = pair_coefficients(-i * spec.zeta, spec.q, len);
    let (wp, wm) = (
        C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
        C64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
    );
    let c: Vec<C64> = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| (wp * p + wm * m) / 2f64.sqrt())
        .collect();
    sector_state(spec.q, spec.dim_a, spec.dim_b, &c)?.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_zeta_is_charge_ket() {
        let spec = PairCoherentSpec::new(c(0.0, 0.0), 2, 8).unwrap();
        let s = pair_coherent(&spec).unwrap();
        assert_eq!(s, TwoModeState::basis(10, 8, 2, 0).unwrap());
    }

    #[test]
    fn negative_charge_rejected() {
        assert!(matches!(
            PairCoherentSpec::new(c(1.0, 0.0), -1, 8),
            Err(Error::InvalidParameter { name: "q", .. })
        ));
    }

    #[test]
    fn defining_equations_hold() {
        for (z, q) in [(c(1.0, 0.0), 0), (c(2.0, 0.0), 1), (c(1.0, 1.0), 2)] {
            let spec = PairCoherentSpec::new(z, q, 32).unwrap();
            let s = pair_coherent(&spec).unwrap();
            let r = pair_residuals(&s, z, q as usize);
            assert!(r.eigen <= 1e-8, "{r:?}");
            assert!(r.charge <= 1e-10);
        }
    }

    #[test]
    fn charge_expectation_is_exact() {
        let spec = PairCoherentSpec::new(c(2.0, 0.0), 1, 24).unwrap();
        let s = pair_coherent(&spec).unwrap();
        let p = s.joint_distribution();
        let mean: f64 = p.indexed_iter().map(|((i, j), w)| (i as f64 - j as f64) * w).sum();
        assert!((mean - 1.0).abs() < 1e-15);
    }

    #[test]
    fn different_charges_are_orthogonal() {
        let a = pair_coherent(&PairCoherentSpec::with_dims(c(1.0, 0.0), 0, 20, 18).unwrap()).unwrap();
        let b = pair_coherent(&PairCoherentSpec::with_dims(c(1.0, 0.0), 1, 20, 18).unwrap()).unwrap();
        assert_eq!(a.inner(&b).unwrap(), c(0.0, 0.0));
        let d = pair_coherent(&PairCoherentSpec::with_dims(c(0.5, 0.2), 0, 20, 18).unwrap()).unwrap();
        assert!(a.inner(&d).unwrap().norm() > 0.1);
    }

    #[test]
    fn perelomov_zero_xi() {
        let s = two_mode_perelomov(c(0.0, 0.0), 1, 10, 9).unwrap();
        assert!(s.distance(&TwoModeState::basis(10, 9, 1, 0).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn perelomov_nonlinear_relation() {
        let xi = c(0.5, 0.0);
        let s = two_mode_perelomov(xi, 0, 40, 40).unwrap();
        let r = nonlinear_residual(&s, perelomov_nonlinearity(0), kappa(xi));
        assert!(r <= 1e-7, "{r}");
    }

    #[test]
    fn perelomov_closed_form_agrees() {
        let xi = c(0.8, 0.0);
        let a = two_mode_perelomov(xi, 2, 34, 32).unwrap();
        let b = two_mode_perelomov_closed_form(xi, 2, 34, 32).unwrap();
        assert!(1.0 - a.fidelity(&b).unwrap() <= 1e-8);
    }

    #[test]
    fn nonlinear_reduces_to_pair_and_perelomov() {
        let z = c(1.2, -0.4);
        let lin = nonlinear_pair_coherent(|_, _| 1.0, z, 1, 25, 24).unwrap();
        let pc = pair_coherent(&PairCoherentSpec::new(z, 1, 24).unwrap()).unwrap();
        assert!(1.0 - lin.fidelity(&pc).unwrap() <= 1e-10);
        assert!(nonlinear_residual(&lin, |_, _| 1.0, z) <= 1e-8);

        let xi = c(0.3, 0.4);
        let nl = nonlinear_pair_coherent(perelomov_nonlinearity(2), kappa(xi), 2, 34, 32).unwrap();
        let pm = two_mode_perelomov(xi, 2, 34, 32).unwrap();
        assert!(1.0 - nl.fidelity(&pm).unwrap() <= 1e-7);
    }

    #[test]
    fn nonlinear_zero_and_singular() {
        let s = nonlinear_pair_coherent(|_, _| 0.0, c(0.0, 0.0), 3, 10, 6).unwrap();
        assert_eq!(s, TwoModeState::basis(10, 6, 3, 0).unwrap());
        let err = nonlinear_pair_coherent(|na, _| if na == 4 { 0.0 } else { 1.0 }, c(1.0, 0.0), 2, 12, 10)
            .unwrap_err();
        assert_eq!(err, Error::DivisionByZero { na: 4, nb: 2 });
    }

    #[test]
    fn parity_pair_signs_and_superposition() {
        let spec = PairCoherentSpec::new(c(1.0, 0.0), 0, 32).unwrap();
        let pp = parity_pair_state(&spec).unwrap();
        assert!(pp.amp(2, 2).re < 0.0);
        assert!(pp.amp(1, 1).re > 0.0);
        let sup = parity_pair_superposition(&spec).unwrap();
        assert!(1.0 - pp.fidelity(&sup).unwrap() <= 1e-8);
        let zero = parity_pair_state(&PairCoherentSpec::new(c(0.0, 0.0), 1, 8).unwrap()).unwrap();
        assert_eq!(zero, TwoModeState::basis(9, 8, 1, 0).unwrap());
    }
}
