//! Susskind–Glogower phase operators, number–phase uncertainty, and the
//! R± and Ω_m ladder algebras.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::fock::{build_ladder, expectation, number_operator, FockState, OperatorMatrix};
use crate::C64;

#[derive(Debug, Clone)]
pub struct PhaseOperatorSet {
    pub dim: usize,
    pub gamma_minus: OperatorMatrix,
    pub gamma_plus: OperatorMatrix,
    pub cos_phi: OperatorMatrix,
    pub sin_phi: OperatorMatrix,
}

fn check_dim(dim: usize, min: usize) -> Result<()> {
    if dim < min {
        return Err(Error::InvalidDimension { dim, min });
    }
    Ok(())
}

/// Γ⁻ = (N+1)^{−1/2}a, Γ⁺ = a†(N+1)^{−1/2}, cosΦ = (Γ⁺+Γ⁻)/2,
/// sinΦ = (Γ⁺−Γ⁻)/(2i).
pub fn build_phase_set(dim: usize) -> Result<PhaseOperatorSet> {
    check_dim(dim, 3)?;
    let (a, _) = build_ladder(dim)?;
    let mut gm = a.into_entries();
    for row in 0..dim {
        // dividing √n by √n gives exactly 1
        let s = ((row + 1) as f64).sqrt();
        gm.row_mut(row).mapv_inplace(|z| z / s);
    }
    let gamma_minus = OperatorMatrix::from_array(gm)?;
    let gamma_plus = gamma_minus.dagger();
    let cos_phi = (&gamma_plus + &gamma_minus).scale_real(0.5);
    let sin_phi = (&gamma_plus - &gamma_minus).scale(C64::new(0.0, -0.5));
    Ok(PhaseOperatorSet {
        dim,
        gamma_minus,
        gamma_plus,
        cos_phi,
        sin_phi,
    })
}

/// Largest deviations of the one-sided unitarity relations on rows and
/// columns below dim − 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseDefects {
    /// Γ⁻Γ⁺ − I.
    pub lower_upper: f64,
    /// Γ⁺Γ⁻ − (I − |0⟩⟨0|).
    pub upper_lower: f64,
    /// (Γ⁻Γ⁺ − Γ⁺Γ⁻)₀₀, the non-unitarity witness; equals 1.
    pub vacuum_witness: f64,
}

impl PhaseOperatorSet {
    pub fn defects(&self) -> Result<PhaseDefects> {
        let cut = self.dim - 1;
        let id = OperatorMatrix::identity(self.dim);
        let lu = self.gamma_minus.matmul(&self.gamma_plus)?;
        let ul = self.gamma_plus.matmul(&self.gamma_minus)?;
        let mut proj = id.clone().into_entries();
        proj[[0, 0]] = C64::new(0.0, 0.0);
        let proj = OperatorMatrix::from_array(proj)?;
        Ok(PhaseDefects {
            lower_upper: (&lu - &id).max_abs_leading(cut),
            upper_lower: (&ul - &proj).max_abs_leading(cut),
            vacuum_witness: (lu.get(0, 0) - ul.get(0, 0)).re,
        })
    }
}

/// ΔcosΦ·ΔN against ½|⟨sinΦ⟩| and ΔsinΦ·ΔN against ½|⟨cosΦ⟩|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumberPhaseReport {
    pub dcos_dn: f64,
    pub bound_sin: f64,
    pub dsin_dn: f64,
    pub bound_cos: f64,
    pub delta_n: f64,
}

impl NumberPhaseReport {
    pub fn holds(&self, slack: f64) -> bool {
        self.dcos_dn >= self.bound_sin - slack && self.dsin_dn >= self.bound_cos - slack
    }
}

fn spread(op: &OperatorMatrix, s: &FockState) -> Result<(f64, f64)> {
    let mean = expectation(op, s)?.re;
    let second = expectation(&op.matmul(op)?, s)?.re;
    Ok((mean, (second - mean * mean).max(0.0).sqrt()))
}

pub fn number_phase_uncertainty(s: &FockState) -> Result<NumberPhaseReport> {
    let set = build_phase_set(s.dim())?;
    let s = s.normalized()?;
    let n = number_operator(s.dim())?;
    let (_, dn) = spread(&n, &s)?;
    let (mc, dc) = spread(&set.cos_phi, &s)?;
    let (ms, ds) = spread(&set.sin_phi, &s)?;
    Ok(NumberPhaseReport {
        dcos_dn: dc * dn,
        bound_sin: 0.5 * ms.abs(),
        dsin_dn: ds * dn,
        bound_cos: 0.5 * mc.abs(),
        delta_n: dn,
    })
}

/// m-step ladder Ω⁻ = (Γ⁻)^m N, Ω⁺ = N(Γ⁺)^m.
#[derive(Debug, Clone)]
pub struct OmegaLadder {
    pub m: usize,
    pub dim: usize,
    pub omega_minus: OperatorMatrix,
    pub omega_plus: OperatorMatrix,
}

/// Residuals of the ladder algebra on rows and columns below dim − m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderAlgebraDefects {
    /// The two factorizations of Ω⁻ (and of Ω⁺) differ by this much.
    pub factorization: f64,
    /// [Ω⁻, N] − mΩ⁻.
    pub lower_number: f64,
    /// [Ω⁺, N] + mΩ⁺.
    pub upper_number: f64,
    /// [Ω⁻, Ω⁺] − m(2N + m).
    pub lower_upper: f64,
}

impl LadderAlgebraDefects {
    pub fn max(&self) -> f64 {
        self.factorization
            .max(self.lower_number)
            .max(self.upper_number)
            .max(self.lower_upper)
    }
}

pub fn build_omega_ops(m: usize, dim: usize) -> Result<OmegaLadder> {
    check_dim(dim, 4)?;
    if m < 1 || m > dim / 4 {
        return Err(Error::param(
            "m",
            format!("order {m} outside 1..={} for dim {dim}", dim / 4),
        ));
    }
    let set = build_phase_set(dim)?;
    let n = number_operator(dim)?;
    let omega_minus = set.gamma_minus.powi(m as u32)?.matmul(&n)?;
    let omega_plus = n.matmul(&set.gamma_plus.powi(m as u32)?)?;
    Ok(OmegaLadder {
        m,
        dim,
        omega_minus,
        omega_plus,
    })
}

impl OmegaLadder {
    pub fn algebra_defects(&self) -> Result<LadderAlgebraDefects> {
        let (m, dim) = (self.m, self.dim);
        let cut = dim - m;
        let mf = m as f64;
        let set = build_phase_set(dim)?;
        let n = number_operator(dim)?;
        let n_shift = &n + &OperatorMatrix::identity(dim).scale_real(mf);
        let gm = set.gamma_minus.powi(m as u32)?;
        let gp = set.gamma_plus.powi(m as u32)?;
        let alt_minus = n_shift.matmul(&gm)?;
        let alt_plus = gp.matmul(&n_shift)?;
        let factorization = (&self.omega_minus - &alt_minus)
            .max_abs()
            .max((&self.omega_plus - &alt_plus).max_abs());
        let c1 = &self.omega_minus.commutator(&n)? - &self.omega_minus.scale_real(mf);
        let c2 = &self.omega_plus.commutator(&n)? + &self.omega_plus.scale_real(mf);
        let target = (&n.scale_real(2.0) + &OperatorMatrix::identity(dim).scale_real(mf))
            .scale_real(mf);
        let c3 = &self.omega_minus.commutator(&self.omega_plus)? - &target;
        Ok(LadderAlgebraDefects {
            factorization,
            lower_number: c1.max_abs_leading(cut),
            upper_number: c2.max_abs_leading(cut),
            lower_upper: c3.max_abs_leading(cut),
        })
    }

    /// [Ω⁻, Ω⁺] − m(2N + m) restricted to |0⟩ and |n⟩ with m ≤ n < dim − m,
    /// the kets whose ladder below is not cut short.
    pub fn lower_upper_defect_on_full_ladders(&self) -> Result<f64> {
        let (m, dim) = (self.m, self.dim);
        let mf = m as f64;
        let n = number_operator(dim)?;
        let target = (&n.scale_real(2.0) + &OperatorMatrix::identity(dim).scale_real(mf))
            .scale_real(mf);
        let c3 = &self.omega_minus.commutator(&self.omega_plus)? - &target;
        let idx: Vec<usize> = std::iter::once(0).chain(m..dim - m).collect();
        Ok(c3.max_abs_on(&idx))
    }
}

/// R⁺ = NΓ⁺ and R⁻ = Γ⁻N.
#[derive(Debug, Clone)]
pub struct ROps {
    pub r_plus: OperatorMatrix,
    pub r_minus: OperatorMatrix,
}

/// R± are the m = 1 ladder; both factorizations R⁺ = NΓ⁺ = Γ⁺(N+1) and
/// R⁻ = Γ⁻N = (N+1)Γ⁻ are computed and must agree exactly.
pub fn build_r_ops(dim: usize) -> Result<ROps> {
    check_dim(dim, 3)?;
    let set = build_phase_set(dim)?;
    let n = number_operator(dim)?;
    let n1 = &n + &OperatorMatrix::identity(dim);
    let r_plus = n.matmul(&set.gamma_plus)?;
    let r_minus = set.gamma_minus.matmul(&n)?;
    if r_plus != set.gamma_plus.matmul(&n1)? || r_minus != n1.matmul(&set.gamma_minus)? {
        return Err(Error::Range("R± factorizations disagree".into()));
    }
    Ok(ROps { r_plus, r_minus })
}

impl ROps {
    /// [R⁻,N] − R⁻, [R⁺,N] + R⁺ and [R⁻,R⁺] − (2N+1) on rows and columns
    /// below dim − 1.
    pub fn algebra_defects(&self) -> Result<LadderAlgebraDefects> {
        let dim = self.r_plus.dim();
        let cut = dim - 1;
        let n = number_operator(dim)?;
        let c1 = &self.r_minus.commutator(&n)? - &self.r_minus;
        let c2 = &self.r_plus.commutator(&n)? + &self.r_plus;
        let target = &n.scale_real(2.0) + &OperatorMatrix::identity(dim);
        let c3 = &self.r_minus.commutator(&self.r_plus)? - &target;
        Ok(LadderAlgebraDefects {
            factorization: 0.0,
            lower_number: c1.max_abs_leading(cut),
            upper_number: c2.max_abs_leading(cut),
            lower_upper: c3.max_abs_leading(cut),
        })
    }
}

/// Largest r accepted before cosh r overflows.
pub const MAX_SQUEEZE: f64 = 350.0;

#[derive(Debug, Clone)]
pub struct PhaseSqueeze {
    pub unitary: OperatorMatrix,
    pub state: FockState,
}

/// U = exp(αΩ⁺ − α*Ω⁻), α = (r/m)e^{iφ}, and U|0⟩.
pub fn phase_squeeze_unitary(r: f64, phi: f64, m: usize, dim: usize) -> Result<PhaseSqueeze> {
    if !r.is_finite() || r.abs() > MAX_SQUEEZE || !phi.is_finite() {
        return Err(Error::Range(format!("r = {r} outside ±{MAX_SQUEEZE}")));
    }
    let lad = build_omega_ops(m, dim)?;
    let alpha = C64::from_polar(r / m as f64, phi);
    let gen = &lad.omega_plus.scale(alpha) - &lad.omega_minus.scale(alpha.conj());
    let unitary = matrix_exponential(&gen)?;
    let state = FockState::vacuum(dim)?.apply(&unitary)?;
    let closed = phase_squeeze_closed_form(r, phi, m, dim)?;
    Ok(PhaseSqueeze {
        state: state.with_tail_warning(closed.tail_warning),
        unitary,
    })
}

/// (1−β²)^{1/2} Σ (βe^{iφ})ⁿ |mn⟩, β = tanh r, renormalized over the basis.
pub fn phase_squeeze_closed_form(r: f64, phi: f64, m: usize, dim: usize) -> Result<FockState> {
    if m == 0 {
        return Err(Error::param("m", "order must be positive"));
    }
    let beta = r.tanh();
    let z = C64::from_polar(beta, phi);
    let mut amps = ndarray::Array1::<C64>::zeros(dim);
    let mut c = C64::new((1.0 - beta * beta).sqrt(), 0.0);
    let mut k = 0;
    while k * m < dim {
        amps[k * m] = c;
        c *= z;
        k += 1;
    }
    let s = FockState::new(amps)?;
    let deficit = 1.0 - s.norm_sqr();
    Ok(s.normalized()?
        .with_tail_warning(deficit > crate::tolerance::Tolerances::default().tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_actions() {
        let set = build_phase_set(10).unwrap();
        let v = FockState::vacuum(10).unwrap().apply(&set.gamma_minus).unwrap();
        assert_eq!(v.norm_sqr(), 0.0);
        let s = FockState::basis(10, 5).unwrap().apply(&set.gamma_minus).unwrap();
        assert_eq!(s, FockState::basis(10, 4).unwrap());
        assert_eq!(set.sin_phi.hermiticity_defect(), 0.0);
    }

    #[test]
    fn one_sided_unitarity() {
        let d = build_phase_set(64).unwrap().defects().unwrap();
        assert_eq!(d.lower_upper, 0.0);
        assert_eq!(d.upper_lower, 0.0);
        assert_eq!(d.vacuum_witness, 1.0);
    }

    #[test]
    fn number_states_give_trivial_bounds() {
        for n in 1..6 {
            let r = number_phase_uncertainty(&FockState::basis(16, n).unwrap()).unwrap();
            assert_eq!(r.bound_sin, 0.0);
            assert_eq!(r.bound_cos, 0.0);
            assert!(r.holds(0.0));
        }
    }

    #[test]
    fn two_level_superposition() {
        let mut amps = ndarray::Array1::zeros(12);
        amps[0] = C64::new(0.5f64.sqrt(), 0.0);
        amps[1] = C64::new(0.5f64.sqrt(), 0.0);
        let r = number_phase_uncertainty(&FockState::new(amps).unwrap()).unwrap();
        assert!((r.delta_n - 0.5).abs() < 1e-15);
        assert!((r.bound_cos - 0.25).abs() < 1e-15);
        assert!(r.bound_sin.abs() < 1e-15);
        assert!(r.holds(0.0));
    }

    #[test]
    fn r_ladder_actions_and_algebra() {
        let r = build_r_ops(16).unwrap();
        let up = FockState::basis(16, 3).unwrap().apply(&r.r_plus).unwrap();
        assert_eq!(up.amp(4), C64::new(4.0, 0.0));
        assert_eq!(FockState::vacuum(16).unwrap().apply(&r.r_minus).unwrap().norm_sqr(), 0.0);
        assert_eq!(r.algebra_defects().unwrap().max(), 0.0);
    }

    #[test]
    fn omega_one_is_r_ladder() {
        let lad = build_omega_ops(1, 32).unwrap();
        let r = build_r_ops(32).unwrap();
        assert_eq!(lad.omega_minus, r.r_minus);
        assert_eq!(lad.omega_plus, r.r_plus);
    }

    #[test]
    fn omega_two_actions() {
        let lad = build_omega_ops(2, 16).unwrap();
        let s = FockState::basis(16, 5).unwrap().apply(&lad.omega_minus).unwrap();
        assert_eq!(s.amp(3), C64::new(5.0, 0.0));
        for n in 0..2 {
            let z = FockState::basis(16, n).unwrap().apply(&lad.omega_minus).unwrap();
            assert_eq!(z.norm_sqr(), 0.0);
        }
        assert!(build_omega_ops(5, 16).is_err());
        assert!(build_omega_ops(0, 16).is_err());
    }

    #[test]
    fn omega_commutator_breaks_below_m() {
        // Ω⁺Ω⁻ annihilates |n⟩ for 0 < n < m, so [Ω⁻,Ω⁺]|n⟩ = (n+m)²|n⟩
        for m in 1..=3 {
            let lad = build_omega_ops(m, 64).unwrap();
            let d = lad.algebra_defects().unwrap();
            assert_eq!(d.factorization, 0.0);
            assert_eq!(d.lower_number, 0.0);
            assert_eq!(d.upper_number, 0.0);
            assert_eq!(d.lower_upper, ((m - 1) * (m - 1)) as f64);
            assert_eq!(lad.lower_upper_defect_on_full_ladders().unwrap(), 0.0);
        }
    }

    #[test]
    fn phase_squeeze_matches_closed_form() {
        let out = phase_squeeze_unitary(0.5, 0.0, 1, 64).unwrap();
        let closed = phase_squeeze_closed_form(0.5, 0.0, 1, 64).unwrap();
        assert!(1.0 - out.state.fidelity(&closed).unwrap() <= 1e-7);

        let out = phase_squeeze_unitary(0.5, 0.7, 2, 64).unwrap();
        for n in (1..64).step_by(2) {
            assert_eq!(out.state.amp(n), C64::new(0.0, 0.0));
        }
        let closed = phase_squeeze_closed_form(0.5, 0.7, 2, 64).unwrap();
        assert!(1.0 - out.state.fidelity(&closed).unwrap() <= 1e-7);
    }

    #[test]
    fn zero_squeeze_is_identity() {
        let out = phase_squeeze_unitary(0.0, 1.0, 2, 16).unwrap();
        assert_eq!(out.unitary, OperatorMatrix::identity(16));
        assert_eq!(out.state, FockState::vacuum(16).unwrap());
    }
}
