//! Discrete-series SU(1,1) representations and their Perelomov coherent
//! states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::fock::{FockState, OperatorMatrix};
use crate::tolerance::Tolerances;
use crate::C64;

/// Bargmann index `k` and basis |k,0⟩..|k,dim−1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SU11Rep {
    pub k: f64,
    pub dim: usize,
}

impl SU11Rep {
    pub fn new(k: f64, dim: usize) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::param("k", format!("Bargmann index {k} must be positive")));
        }
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        Ok(SU11Rep { k, dim })
    }
}

/// K⁺, K⁻, K⁰ of one representation.
#[derive(Debug, Clone)]
pub struct SU11Generators {
    pub k_plus: OperatorMatrix,
    pub k_minus: OperatorMatrix,
    pub k0: OperatorMatrix,
}

/// K⁺|k,n⟩ = √((n+1)(2k+n))|k,n+1⟩, K⁻ = (K⁺)†, K⁰|k,n⟩ = (k+n)|k,n⟩.
pub fn su11_generators(rep: &SU11Rep) -> SU11Generators {
    let mut kp = ndarray::Array2::<C64>::zeros((rep.dim, rep.dim));
    for n in 0..rep.dim - 1 {
        let nf = n as f64;
        kp[[n + 1, n]] = C64::new(((nf + 1.0) * (2.0 * rep.k + nf)).sqrt(), 0.0);
    }
    let k_plus = OperatorMatrix::from_array_unchecked(kp);
    SU11Generators {
        k_minus: k_plus.dagger(),
        k_plus,
        k0: OperatorMatrix::diagonal((0..rep.dim).map(|n| C64::new(rep.k + n as f64, 0.0))),
    }
}

impl SU11Generators {
    /// Largest interior defect among [K⁺,K⁻] = −2K⁰, [K⁺,K⁰] = −K⁺,
    /// [K⁻,K⁰] = K⁻, on rows/cols below `cut`.
    pub fn algebra_defect(&self, cut: usize) -> Result<f64> {
        let c1 = &self.k_plus.commutator(&self.k_minus)? + &self.k0.scale_real(2.0);
        let c2 = &self.k_plus.commutator(&self.k0)? + &self.k_plus;
        let c3 = &self.k_minus.commutator(&self.k0)? - &self.k_minus;
        Ok([c1, c2, c3]
            .iter()
            .map(|c| c.max_abs_leading(cut))
            .fold(0.0, f64::max))
    }

    /// K⁰² − (K⁺K⁻ + K⁻K⁺)/2.
    pub fn casimir(&self) -> Result<OperatorMatrix> {
        let k02 = self.k0.matmul(&self.k0)?;
        let mix = &self.k_plus.matmul(&self.k_minus)? + &self.k_minus.matmul(&self.k_plus)?;
        Ok(&k02 - &mix.scale_real(0.5))
    }
}

/// ξ = −(r/2)e^{−iφ}.
pub fn xi_from_polar(r: f64, phi: f64) -> C64 {
    C64::from_polar(-0.5 * r, -phi)
}

/// κ = (ξ/|ξ|) tanh|ξ|.
pub fn kappa(xi: C64) -> C64 {
    let m = xi.norm();
    if m == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        xi / m * m.tanh()
    }
}

pub const BOUNDARY_MARGIN: f64 = 1e-6;

/// (1−|κ|²)^k Σ √(Γ(n+2k)/(n!Γ(2k))) κⁿ |k,n⟩, renormalized over the basis.
/// Warns near |κ| = 1 or when the truncated mass exceeds the tail tolerance.
pub fn perelomov_state(rep: &SU11Rep, xi: C64) -> Result<FockState> {
    if !xi.re.is_finite() || !xi.im.is_finite() {
        return Err(Error::NonFinite("xi"));
    }
    let kap = kappa(xi);
    let mut amps = ndarray::Array1::<C64>::zeros(rep.dim);
    amps[0] = C64::new((1.0 - kap.norm_sqr()).powf(rep.k), 0.0);
    for n in 0..rep.dim - 1 {
        let nf = n as f64;
        amps[n + 1] = amps[n] * kap * ((nf + 2.0 * rep.k) / (nf + 1.0)).sqrt();
    }
    let state = FockState::new(amps)?;
    let deficit = 1.0 - state.norm_sqr();
    let warn = kap.norm() >= 1.0 - BOUNDARY_MARGIN || deficit > Tolerances::default().tail;
    Ok(state.normalized()?.with_tail_warning(warn))
}

/// exp(ξK⁺ − ξ*K⁻)|k,0⟩.
pub fn perelomov_exponential(rep: &SU11Rep, xi: C64) -> Result<FockState> {
    let g = su11_generators(rep);
    let gen = &g.k_plus.scale(xi) - &g.k_minus.scale(xi.conj());
    FockState::vacuum(rep.dim)?.apply(&matrix_exponential(&gen)?)
}
