//! Named verification suites: each runs a module's identities at fixed
//! parameters and records measured deviation against its bound.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coherent::{
    classical_trajectory, coherent_ladder, coherent_wavefunction, displacement_compose,
    displacement_operator, eigen_residual, evolve_by_exponential, evolve_coherent, CoherentSpec,
    EvolutionSpec,
};
use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::fock::{
    build_ladder, build_quadratures, interior_defect, number_operator, quadrature_report,
    FockState, OperatorMatrix,
};
use crate::grid::Grid;
use crate::pair::{
    nonlinear_residual, pair_coherent, pair_residuals, parity_pair_state,
    parity_pair_superposition, perelomov_nonlinearity, two_mode_perelomov, PairCoherentSpec,
};
use crate::phase::{
    build_omega_ops, build_phase_set, build_r_ops, number_phase_uncertainty,
    phase_squeeze_closed_form, phase_squeeze_unitary,
};
use crate::sqm::{build_family, chi0_unnormalized, chi_states, gram_defect, lambda_coherent, spectral_check};
use crate::squeezing::{
    disentangle_residual, generalized_condition_solution, lambda_mode_factorization,
    schmidt_analysis, squeeze_operator, squeezed_vacuum_closed_form, su11_disentangle_general,
    theta_annihilation_residual, theta_vacuum, two_mode_squeezed_vacuum, two_mode_theta_vacuum,
    u_recurrence_residual, vacuum_moment_u, BogoliubovMap, NoiseReport, SqueezeSpec,
};
use crate::su11::{kappa, perelomov_exponential, perelomov_state, su11_generators, xi_from_polar, SU11Rep};
use crate::two_mode::TwoModeOps;
use crate::C64;

/// One measured deviation; passes when measured ≤ bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    HoAlgebra,
    Coherent,
    TimeEvolution,
    Pair,
    Phase,
    SingleSqueeze,
    TwoSqueeze,
    Factorization,
    Sqm,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::HoAlgebra,
        Suite::Coherent,
        Suite::TimeEvolution,
        Suite::Pair,
        Suite::Phase,
        Suite::SingleSqueeze,
        Suite::TwoSqueeze,
        Suite::Factorization,
        Suite::Sqm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::HoAlgebra => "ho-algebra",
            Suite::Coherent => "coherent",
            Suite::TimeEvolution => "time-evolution",
            Suite::Pair => "pair",
            Suite::Phase => "phase",
            Suite::SingleSqueeze => "single-squeeze",
            Suite::TwoSqueeze => "two-squeeze",
            Suite::Factorization => "factorization",
            Suite::Sqm => "sqm",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::param("suite", format!("unknown suite '{s}'")))
    }
}

/// Optional parameters; each suite falls back to its own defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub dim: Option<usize>,
    pub alpha: Option<C64>,
    pub r: Option<f64>,
    pub phi: Option<f64>,
    pub theta: Option<f64>,
    pub s: Option<f64>,
    pub zeta: Option<C64>,
    pub q: Option<i64>,
    pub lambda: Option<f64>,
    pub z: Option<C64>,
    /// Replaces every bound when set.
    pub tol: Option<f64>,
}

struct Recorder {
    checks: Vec<Check>,
    tol: Option<f64>,
}

impl Recorder {
    fn push(&mut self, name: impl Into<String>, measured: f64, bound: f64) {
        self.checks
            .push(Check::new(name, measured, self.tol.unwrap_or(bound)));
    }
}

pub fn run_suite(suite: Suite, p: &SuiteParams) -> Result<VerifyReport> {
    let mut rec = Recorder {
        checks: Vec::new(),
        tol: p.tol,
    };
    match suite {
        Suite::HoAlgebra => ho_algebra(&mut rec, p)?,
        Suite::Coherent => coherent(&mut rec, p)?,
        Suite::TimeEvolution => time_evolution(&mut rec, p)?,
        Suite::Pair => pair(&mut rec, p)?,
        Suite::Phase => phase(&mut rec, p)?,
        Suite::SingleSqueeze => single_squeeze(&mut rec, p)?,
        Suite::TwoSqueeze => two_squeeze(&mut rec, p)?,
        Suite::Factorization => factorization(&mut rec, p)?,
        Suite::Sqm => sqm(&mut rec, p)?,
    }
    let pass = rec.checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        suite: suite.name().to_string(),
        checks: rec.checks,
        pass,
    })
}

fn ho_algebra(rec: &mut Recorder, p: &SuiteParams) -> Result<()> {
    let dim = p.dim.unwrap_or(32);
    let (a, ad) = build_ladder(dim)?;
    let n = number_operator(dim)?;
    let id = OperatorMatrix::identity(dim);
    rec.push("[a,a+] = I", interior_defect(&a.commutator(&ad)?, &id, dim - 1), 1e-12);
    rec.push("[N,a] = -a", interior_defect(&n.commutator(&a)?, &a.scale_real(-1.0), dim - 1), 1e-12);
    rec.push("[N,a+] = a+", interior_defect(&n.commutator(&ad)?, &ad, dim - 1), 1e-12);
    let (x, pp) = build_quadratures(dim)?;
    let herm = x.hermiticity_defect().max(pp.hermiticity_defect()).max(n.hermiticity_defect());
    rec.push("x, p, N hermitian", herm, 1e-14);
    let mut worst = 0f64;
    for k in 0..=10.min(dim.saturating_sub(2)) {
        let q = quadrature_report(&FockState::basis(dim, k)?)?;
        let target = (2.0 * k as f64 + 1.0).powi(2) / 4.0;
        worst = worst.max((q.product - target).abs());
    }
    rec.push("number-state product (2n+1)^2/4", worst, 1e-10);
    let ea = matrix_exponential(&x.scale(C64::new(0.0, 0.3)))?;
    let eb = matrix_exponential(&x.scale(C64::new(0.0, 0.5)))?;
    let eab = matrix_exponential(&x.scale(C64::new(0.0, 0.8)))?;
    rec.push("exp(A)exp(B) = exp(A+B)", (&ea.matmul(&eb)? - &eab).max_abs(), 1e-10);
    Ok(())
}

fn coherent(rec: &mut Recorder, p: &SuiteParams) -> Result<()> {
    let dim = p.dim.unwrap_or(64);
    let alpha = p.alpha.unwrap_or(C64::new(1.0, 1.0));
    let s = coherent_ladder(&CoherentSpec::new(alpha, dim)?)?;
    rec.push("eigen residual", eigen_residual(&s, alpha)?, 1e-8);
    let (mean, var) = s.photon_statistics();
    rec.push("photon mean = |alpha|^2", (mean - alpha.norm_sqr()).abs(), 1e-8);
    rec.push("photon variance = |alpha|^2", (var - alpha.norm_sqr()).abs(), 1e-8);
    rec.push("quadrature product = 1/4", (quadrature_report(&s)?.product - 0.25).abs(), 1e-8);
    let dd = displacement_operator(alpha, dim)?.matmul(&displacement_operator(-alpha, dim)?)?;
    rec.push("D(a)D(-a) = I", interior_defect(&dd, &OperatorMatrix::identity(dim), dim / 2), 1e-9);
    let pts = [
        C64::new(0.0, 0.0),
        C64::new(0.5, 0.0),
        C64::new(-0.5, 0.5),
        C64::new(0.0, -1.0),
        C64::new(1.0, 1.0),
    ];
    let states: Vec<FockState> = pts
        .iter()
        .map(|a| coherent_ladder(&CoherentSpec::new(*a, dim)?))
        .collect::<Result<_>>()?;
    let mut worst = 0f64;
    for (i, a) in pts.iter().enumerate() {
        for (j, b) in pts.iter().enumerate() {
            let ov = states[i].inner(&states[j])?.norm_sqr();
            worst = worst.max((ov - (-(a - b).norm_sqr()).exp()).abs());
        }
    }
    rec.push("overlap law", worst, 1e-9);
    let c = displacement_compose(alpha, C64::new(-0.3, 0.7), dim)?;
    rec.push("displacement composition", c.residual, 1e-8);
    Ok(())
}

fn time_evolution(rec: &mut Recorder, p: &SuiteParams) -> Result<()> {
    let dim = p.dim.unwrap_or(64);
    let alpha = p.alpha.unwrap_or(C64::new(1.0, 0.5));
    let s = coherent_ladder(&CoherentSpec::new(alpha, dim)?)?;
    for t in [PI / 4.0, PI, 2.0 * PI] {
        let a = evolve_by_exponential(&s, t)?;
        let b = evolve_coherent(&EvolutionSpec { alpha0: alpha, t }, dim)?;
        rec.push(format!("evolution fidelity t={t:.4}"), 1.0 - a.fidelity(&b)?, 1e-9);
    }
    let ts: Vec<f64> = (0..=1000).map(|k| 2.0 * PI * k as f64 / 1000.0).collect();
    rec.push("SHM residual", classical_trajectory(alpha, &ts)?.shm_residual, 1e-4);
    Ok(())
}

fn pair(rec: &mut Recorder, p: &SuiteParams) -> Result<()> {
    let dim = p.dim.unwrap_or(32);
    let zeta = p.zeta.unwrap_or(C64::new(1.0, 0.0));
    let q = p.q.unwrap_or(0);
    let spec = PairCoherentSpec::new(zeta, q, dim)?;
    let s = pair_coherent(&spec)?;
    let r = pair_residuals(&s, zeta, spec.q);
    rec.push("pair eigen residual", r.eigen, 1e-8);
    rec.push("pair charge residual", r.charge, 1e-8);
    let xi = C64::new(0.5, 0.0);
    let pm = two_mode_perelomov(xi, q, 40 + spec.q, 40)?;
    rec.push(
        "two-mode Perelomov nonlinear relation",
        nonlinear_residual(&pm, perelomov_nonlinearity(spec.q), kappa(xi)),
        1e-7,
    );
    let pp = parity_pair_state(&spec)?;
    let sup = parity_pair_superposition(&spec)?;
    rec.push("parity-pair superposition", 1.0 - pp.fidelity(&sup)?, 1e-8);
    let other = PairCoherentSpec::with_dims(zeta, q + 1, spec.dim_a, spec.dim_b)?;
    rec.push("charge superselection", s.inner(&pair_coherent(&other)?)?.norm(), 0.0);
    let ops = TwoModeOps::new(10, 10)?;
    let diff = &ops.n1() - &ops.n2();
    let ab = ops.a1.matmul(&ops.a2)?;
    rec.push("[Na - Nb, ab] = 0", diff.commutator(&ab)?.max_abs(), 0.0);
    for k in [0.5, 0.75, 1.0, 2.0] {
        let rep = SU11Rep::new(k, 48)?;
        rec.push(format!("su(1,1) algebra k={k}"), su11_generators(&rep).algebra_defect(36)?, 1e-12);
    }
    for k in [0.5, 1.0] {
        for r in [0.25, 0.5, 1.0] {
            let rep = SU11Rep::new(k, 48)?;
            let xi = xi_from_polar(r, PI / 3.0);
            let a = perelomov_state(&rep, xi)?;
            let b = perelomov_exponential(&rep, xi)?;
            rec.push(format!("Perelomov closed form k={k} r={r}"), 1.0 - a.fidelity(&b)?, 1e-8);
        }
    }
    Ok(())
}

fn phase(rec: &mut Recorder, p: &SuiteParams) -> Result<()> {
    let dim = p.dim.unwrap_or(64);
    let set = build_phase_set(dim)?;
    let d = set.defects()?;
    rec.push("G-G+ = I", d.lower_upper, 0.0);
    rec.push("G+G- = I - |0><0|", d.upper_lower, 0.0);
    rec.push("vacuum witness = 1", (d.vacuum_witness - 1.0).abs(), 0.0);
    let r = build_r_ops(dim)?.algebra_defects()?;
    rec.push("R algebra", r.max(), 1e-12);
    for m in 1..=3 {
        let lad = build_omega_ops(m, dim)?;
        let dft = lad.algebra_defects()?;
        rec.push(format!("Omega m={m} factorization"), dft.factorization, 1e-12);
        rec.push(
            format!("Omega m={m} [N] relations"),
            dft.lower_number.max(dft.upper_number),
            1e-12,
        );
        rec.push(format!("Omega m={m} [O-,O+] = m(2N+m)"), dft.lower_upper, 1e-12);
        let ps = phase_squeeze_unitary(0.5, 0.3, m, dim)?;
        let cf = phase_squeeze_closed_form(0.5, 0.3, m, dim)?;
        rec.push(format!("phase squeeze m={m} closed form"), 1.0 - ps.state.fidelity(&cf)?, 1e-7);
    }
    let mut worst = 0f64;
    for n in 0..dim.min(16) {
        let rpt = number_phase_uncertainty(&FockState::basis(dim, n)?)?;
        worst = worst
            .max(rpt.bound_sin - rpt.dcos_dn)
            .max(rpt.bound_cos - rpt.dsin_dn);
    }
    rec.push("number-phase inequality deficit", worst.max(0.0), 1e-12);
    Ok(())
}

fn single_squeeze(rec: &mut Recorder, p: &SuiteParams) -> Result<()> {
    let dim = p.dim.unwrap_or(96);
    let r = p.r.unwrap_or(0.8);
    let phi = p.phi.unwrap_or(0.0);
    let spec = SqueezeSpec::new(r, phi, dim)?;
    let op = squeeze_operator(&spec)?;
    let s = FockState::vacuum(dim)?.apply(&op)?;
    let n = crate::fock::expectation(&number_operator(dim)?, &s)?.re;
    rec.push("<N> = sinh^2 r", (n - r.sinh().powi(2)).abs(), 1e-6);
    let q = quadrature_report(&s)?;
    let (lo, hi) = (q.var_x.min(q.var_p), q.var_x.max(q.var_p));
    let var_dev = (lo - (-2.0 * r).exp() / 2.0).abs().max((hi - (2.0 * r).exp() / 2.0).abs());
    if phi == 0.0 {
        rec.push("variance pair", var_dev, 1e-7);
    }
    rec.push("product = 1/4", (q.product - 0.25).abs(), 1e-8);
    let unit = op.dagger().matmul(&op)?;
    rec.push("S+S = I", interior_defect(&unit, &OperatorMatrix::identity(dim), dim * 3 / 4), 1e-8);
    let cf = squeezed_vacuum_closed_form(&spec)?;
    rec.push("closed form fidelity", 1.0 - cf.fidelity(&s)?, 1e-8);
    let tv = theta_vacuum(r, dim)?;
    rec.push("theta-vacuum annihilation", theta_annihilation_residual(&tv, r)?, 1e-8);
    let theta = p.theta.unwrap_or(0.4);
    for k in 1..=3 {
        let m = vacuum_moment_u(theta, k, 64)?;
        rec.push(format!("u_{k} closed form"), (m.numeric.re - m.closed_form).abs(), 1e-7);
    }
    rec.push("u_n recurrence", u_recurrence_residual(theta, 2, 64, 1e-4)?, 1e-5);
    let map = BogoliubovMap::new(0.7)?;
    rec.push("Bogoliubov determinant", (map.determinant() - 1.0).abs(), 1e-14);
    let (a, ad) = build_ladder(64)?;
    rec.push("Bogoliubov commutator", map.commutator_defect(&a, &ad)?, 1e-10);
    Ok(())
}

fn two_squeeze(rec: &mut Recorder, p: &SuiteParams) -> Result<()> {
    let dim = p.dim.unwrap_or(48);
    let theta = p.theta.unwrap_or(0.5);
    let s = p.s.unwrap_or(1.0);
    let tmsv = two_mode_squeezed_vacuum(s, dim, dim)?;
    let sch = schmidt_analysis(&tmsv);
    rec.push("off-diagonal mass", sch.off_diagonal_mass, 1e-12);
    rec.push("Schmidt ratio spread", sch.ratio_spread, 1e-8);
    let tv = two_mode_theta_vacuum(theta, dim, dim)?;
    let nr = NoiseReport::from_state(&tv)?;
    let ch = (2.0 * theta).cosh() / 2.0;
    rec.push(
        "mode variances = cosh(2T)/2",
        [nr.var_x1, nr.var_p1, nr.var_x2, nr.var_p2]
            .iter()
            .map(|v| (v - ch).abs())
            .fold(0.0, f64::max),
        1e-7,
    );
    rec.push(
        "|cross| = sinh^2(2T)/4",
        (nr.cross.abs() - (2.0 * theta).sinh().powi(2) / 4.0).abs(),
        1e-6,
    );
    rec.push("noise inequality deficit", (-nr.margin).max(0.0), 0.0);
    let half = s / 2.0;
    let k = su11_disentangle_general(C64::new(0.0, 0.0), C64::new(-half, 0.0), C64::new(half, 0.0))?;
    let dev = (k.gamma0 - C64::new(half.cosh().powi(-2), 0.0))
        .norm()
        .max((k.gamma_plus + C64::new(half.tanh(), 0.0)).norm())
        .max((k.gamma_minus - C64::new(half.tanh(), 0.0)).norm());
    rec.push("disentangle specialization", dev, 1e-14);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut draw = || C64::from_polar(0.5 * rng.random::<f64>(), rng.random_range(0.0..2.0 * PI));
    let mut worst = 0f64;
    for _ in 0..3 {
        let (z0, zp, zm) = (draw(), draw(), draw());
        worst = worst.max(disentangle_residual(z0, zp, zm, 24, 24)?);
    }
    rec.push("disentangle matrix identity", worst, 1e-8);
    Ok(())
}

fn factorization(rec: &mut Recorder, p: &SuiteParams) -> Result<()> {
    let dim = p.dim.unwrap_or(40);
    let theta = p.theta.unwrap_or(0.4);
    let l = lambda_mode_factorization(theta, dim, dim)?;
    rec.push("Lambda commutators", l.commutator, 1e-10);
    rec.push("Lambda vacuum annihilation", l.annihilation, 1e-12);
    rec.push("Lambda factorization fidelity", l.fidelity_deficit, 1e-7);
    let g = Grid::new(-10.0, 10.0, 2048)?;
    for t in [0.1, 0.5] {
        for c in [0.0, 1.0] {
            let sol = generalized_condition_solution(t, c, &g, &g)?;
            rec.push(format!("PDE residual T={t} c={c}"), sol.pde_residual, 1e-4);
        }
    }
    Ok(())
}

fn sqm(rec: &mut Recorder, p: &SuiteParams) -> Result<()> {
    let lambda = p.lambda.unwrap_or(1.0);
    let z = p.z.unwrap_or(C64::new(1.0, 0.0));
    let g = Grid::new(-12.0, 12.0, 2401)?;
    let f = build_family(lambda, &g)?;
    let sp = spectral_check(&f, 6)?;
    rec.push("isospectrality", sp.max_eigenvalue_error(), 1e-3);
    rec.push("eigenvector fidelity", 1.0 - sp.min_fidelity(), 1e-4);
    rec.push("chi_0 prefactor norm", (chi0_unnormalized(&f).norm_sqr() - 1.0).abs(), 1e-6);
    rec.push("chi orthonormality", gram_defect(&chi_states(&f, 12)?)?, 1e-5);
    let lc = lambda_coherent(z, &f, 16)?;
    rec.push("lambda-coherent eigen residual", lc.eigen_residual(z)?, 1e-6);
    rec.push("modal product = 1/4", (lc.modal.product - 0.25).abs(), 1e-5);
    let far = build_family(1e6, &g)?;
    let lc = lambda_coherent(z, &far, 16)?;
    let ho = coherent_wavefunction(z, &g)?;
    rec.push("undeformed limit", lc.wavefunction.distance_up_to_phase(&ho)?, 1e-4);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn ho_algebra_passes() {
        let r = run_suite(Suite::HoAlgebra, &SuiteParams::default()).unwrap();
        assert!(r.pass, "{:?}", r.checks);
    }

    #[test]
    fn zero_tolerance_fails() {
        let p = SuiteParams {
            tol: Some(0.0),
            ..Default::default()
        };
        let r = run_suite(Suite::Coherent, &p).unwrap();
        assert!(!r.pass);
        assert!(r.checks.iter().all(|c| c.bound == 0.0));
    }

    #[test]
    fn vacuum_coherent_suite() {
        let p = SuiteParams {
            alpha: Some(C64::new(0.0, 0.0)),
            ..Default::default()
        };
        assert!(run_suite(Suite::Coherent, &p).unwrap().pass);
    }
}
