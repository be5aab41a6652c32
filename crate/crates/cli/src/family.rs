use std::f64::consts::PI;

use clap::ValueEnum;
use fockbench::coherent::{coherent_ladder, evolve_by_exponential, evolve_coherent, CoherentSpec, EvolutionSpec};
use fockbench::grid::hermite_functions;
use fockbench::pair::{pair_coherent, parity_pair_state, parity_pair_superposition, PairCoherentSpec};
use fockbench::phase::{phase_squeeze_closed_form, phase_squeeze_unitary};
use fockbench::sqm::{build_family, lambda_coherent, lambda_squeezed, LambdaState};
use fockbench::squeezing::{
    squeeze_operator, squeezed_vacuum_closed_form, theta_vacuum, two_mode_squeezed_vacuum,
    two_mode_theta_vacuum, SqueezeSpec,
};
use fockbench::su11::{perelomov_exponential, perelomov_state, SU11Rep};
use fockbench::{FockState, Grid, GridWavefunction, TwoModeState, C64};
use serde_json::{json, Map, Value};

use crate::args::{GridArgs, Params};
use crate::error::CliError;
use crate::output::cx;

pub const DEFAULT_GRID: (f64, f64, usize) = (-12.0, 12.0, 2401);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Coherent,
    Squeezed,
    ThetaVacuum,
    TwoMode,
    Pair,
    Perelomov,
    ParityPair,
    PhaseSqueezed,
    LambdaCoherent,
    LambdaSqueezed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Single,
    Two,
    Lambda,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Coherent => "coherent",
            Family::Squeezed => "squeezed",
            Family::ThetaVacuum => "theta-vacuum",
            Family::TwoMode => "two-mode",
            Family::Pair => "pair",
            Family::Perelomov => "perelomov",
            Family::ParityPair => "parity-pair",
            Family::PhaseSqueezed => "phase-squeezed",
            Family::LambdaCoherent => "lambda-coherent",
            Family::LambdaSqueezed => "lambda-squeezed",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            Family::TwoMode | Family::Pair | Family::ParityPair => Kind::Two,
            Family::LambdaCoherent | Family::LambdaSqueezed => Kind::Lambda,
            _ => Kind::Single,
        }
    }

    pub fn required(self) -> &'static [&'static str] {
        match self {
            Family::Coherent => &["alpha"],
            Family::Squeezed | Family::PhaseSqueezed => &["r"],
            Family::ThetaVacuum => &["theta"],
            Family::TwoMode => &["s"],
            Family::Pair | Family::ParityPair => &["zeta"],
            Family::Perelomov => &["xi"],
            Family::LambdaCoherent => &["lambda", "z"],
            Family::LambdaSqueezed => &["lambda", "z", "xi"],
        }
    }

    pub fn optional(self) -> &'static [&'static str] {
        match self {
            Family::Coherent => &["t"],
            Family::Squeezed => &["phi"],
            Family::PhaseSqueezed => &["phi", "m"],
            Family::Pair | Family::ParityPair => &["q"],
            Family::Perelomov => &["k"],
            Family::LambdaCoherent | Family::LambdaSqueezed => &["levels"],
            Family::ThetaVacuum | Family::TwoMode => &[],
        }
    }

    pub fn uses(self, name: &str) -> bool {
        self.required().contains(&name) || self.optional().contains(&name)
    }
}

/// Fills optional parameters with defaults and checks required ones.
pub fn resolve(family: Family, p: &Params, default_dim: usize) -> Result<Params, CliError> {
    let mut p = p.clone();
    for name in family.required() {
        if param_value(&p, name).is_none() {
            return Err(CliError::Usage(format!("family {} needs --{name}", family.name())));
        }
    }
    p.dim = Some(p.dim.unwrap_or(default_dim));
    p.phi.get_or_insert(0.0);
    p.q.get_or_insert(0);
    p.k.get_or_insert(0.5);
    p.m.get_or_insert(1);
    p.t.get_or_insert(0.0);
    Ok(p)
}

pub fn grid_from(g: &GridArgs) -> Result<Grid, CliError> {
    let (lo, hi, n) = DEFAULT_GRID;
    Ok(Grid::new(g.x_min.unwrap_or(lo), g.x_max.unwrap_or(hi), g.points.unwrap_or(n))?)
}

/// The value of a named parameter as JSON, if set.
pub fn param_value(p: &Params, name: &str) -> Option<Value> {
    match name {
        "alpha" => p.alpha.map(cx),
        "r" => p.r.map(Value::from),
        "phi" => p.phi.map(Value::from),
        "theta" => p.theta.map(Value::from),
        "s" => p.s.map(Value::from),
        "zeta" => p.zeta.map(cx),
        "q" => p.q.map(Value::from),
        "k" => p.k.map(Value::from),
        "xi" => p.xi.map(cx),
        "lambda" => p.lambda.map(Value::from),
        "z" => p.z.map(cx),
        "m" => p.m.map(Value::from),
        "t" => p.t.map(Value::from),
        "levels" => p.levels.map(Value::from),
        _ => None,
    }
}

pub fn parameters_json(family: Family, p: &Params) -> Value {
    let mut m = Map::new();
    for name in family.required().iter().chain(family.optional()) {
        if let Some(v) = param_value(p, name) {
            m.insert(name.to_string(), v);
        }
    }
    Value::Object(m)
}

/// Sets a continuous parameter; complex ones take the value as real part.
pub fn set_param(p: &mut Params, name: &str, v: f64) -> Result<(), CliError> {
    let re = Some(C64::new(v, 0.0));
    match name {
        "alpha" => p.alpha = re,
        "zeta" => p.zeta = re,
        "xi" => p.xi = re,
        "z" => p.z = re,
        "r" => p.r = Some(v),
        "phi" => p.phi = Some(v),
        "theta" => p.theta = Some(v),
        "s" => p.s = Some(v),
        "k" => p.k = Some(v),
        "lambda" => p.lambda = Some(v),
        "t" => p.t = Some(v),
        _ => return Err(CliError::Usage(format!("cannot sweep {name:?}; it is not a continuous parameter"))),
    }
    Ok(())
}

pub enum Built {
    Single {
        state: FockState,
        closed_form: Option<FockState>,
    },
    Two {
        state: TwoModeState,
        closed_form: Option<TwoModeState>,
    },
    Lambda(LambdaState),
}

impl Built {
    pub fn closed_form_fidelity(&self) -> Result<Option<f64>, CliError> {
        Ok(match self {
            Built::Single { state, closed_form: Some(c) } => Some(state.fidelity(c)?),
            Built::Two { state, closed_form: Some(c) } => Some(state.fidelity(c)?),
            _ => None,
        })
    }

    /// Position-space wavefunction; single-mode states are synthesized on
    /// oscillator eigenfunctions.
    pub fn wavefunction(&self, grid: &Grid) -> Result<GridWavefunction, CliError> {
        match self {
            Built::Single { state, .. } => {
                let psi = hermite_functions(grid, state.dim());
                let mut values = vec![C64::new(0.0, 0.0); grid.n_points];
                for (c, f) in state.amps().iter().zip(&psi) {
                    for (v, x) in values.iter_mut().zip(f) {
                        *v += c * x;
                    }
                }
                Ok(GridWavefunction::new(*grid, values)?)
            }
            Built::Lambda(s) => Ok(s.wavefunction.clone()),
            Built::Two { .. } => Err(CliError::Usage("wavefunction needs a single-mode family".into())),
        }
    }
}

/// `p` must come from [`resolve`].
pub fn build(family: Family, p: &Params, grid: &Grid) -> Result<Built, CliError> {
    let dim = p.dim.expect("resolved");
    let f = |v: Option<f64>| v.expect("resolved");
    let c = |v: Option<C64>| v.expect("resolved");
    Ok(match family {
        Family::Coherent => {
            let alpha = c(p.alpha);
            let t = f(p.t);
            let start = coherent_ladder(&CoherentSpec::new(alpha, dim)?)?;
            let state = if t == 0.0 { start } else { evolve_by_exponential(&start, t)? };
            let closed = evolve_coherent(&EvolutionSpec { alpha0: alpha, t }, dim)?;
            Built::Single {
                state: state.with_tail_warning(closed.tail_warning),
                closed_form: Some(closed),
            }
        }
        Family::Squeezed => {
            let spec = SqueezeSpec::new(f(p.r), f(p.phi), dim)?;
            let state = FockState::vacuum(dim)?.apply(&squeeze_operator(&spec)?)?;
            Built::Single {
                state: state.with_tail_warning(!spec.is_tight()),
                closed_form: Some(squeezed_vacuum_closed_form(&spec)?),
            }
        }
        Family::ThetaVacuum => {
            let theta = f(p.theta);
            let phi = if theta < 0.0 { PI } else { 0.0 };
            Built::Single {
                state: theta_vacuum(theta, dim)?,
                closed_form: Some(squeezed_vacuum_closed_form(&SqueezeSpec::new(theta.abs(), phi, dim)?)?),
            }
        }
        Family::TwoMode => {
            let s = f(p.s);
            Built::Two {
                state: two_mode_squeezed_vacuum(s, dim, dim)?,
                closed_form: Some(two_mode_theta_vacuum(-s / 2.0, dim, dim)?),
            }
        }
        Family::Pair => Built::Two {
            state: pair_coherent(&PairCoherentSpec::new(c(p.zeta), p.q.expect("resolved"), dim)?)?,
            closed_form: None,
        },
        Family::ParityPair => {
            let spec = PairCoherentSpec::new(c(p.zeta), p.q.expect("resolved"), dim)?;
            Built::Two {
                state: parity_pair_state(&spec)?,
                closed_form: Some(parity_pair_superposition(&spec)?),
            }
        }
        Family::Perelomov => {
            let rep = SU11Rep::new(f(p.k), dim)?;
            let closed = perelomov_state(&rep, c(p.xi))?;
            Built::Single {
                state: perelomov_exponential(&rep, c(p.xi))?.with_tail_warning(closed.tail_warning),
                closed_form: Some(closed),
            }
        }
        Family::PhaseSqueezed => {
            let m = p.m.expect("resolved");
            Built::Single {
                state: phase_squeeze_unitary(f(p.r), f(p.phi), m, dim)?.state,
                closed_form: Some(phase_squeeze_closed_form(f(p.r), f(p.phi), m, dim)?),
            }
        }
        Family::LambdaCoherent => {
            let fam = build_family(f(p.lambda), grid)?;
            let levels = p.levels.unwrap_or_else(|| fam.max_level());
            Built::Lambda(lambda_coherent(c(p.z), &fam, levels)?)
        }
        Family::LambdaSqueezed => {
            let fam = build_family(f(p.lambda), grid)?;
            let levels = p.levels.unwrap_or_else(|| fam.max_level());
            Built::Lambda(lambda_squeezed(c(p.xi), c(p.z), &fam, levels)?)
        }
    })
}

/// Headline observables, one CSV row per state.
pub fn observable_header(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Single => &[
            "mean_n", "var_n", "mean_x", "mean_p", "var_x", "var_p", "product",
            "closed_form_fidelity", "tail_warning",
        ],
        Kind::Two => &[
            "mean_n1", "mean_n2", "var_x1", "var_p1", "var_x2", "var_p2", "cov_x", "cov_p",
            "off_diagonal_mass", "closed_form_fidelity", "tail_warning",
        ],
        Kind::Lambda => &[
            "mean_n", "var_n", "mean_x", "mean_p", "var_x", "var_p", "product", "modal_tail",
            "eigen_residual",
        ],
    }
}

pub fn observables(built: &Built, p: &Params) -> Result<Vec<crate::output::Cell>, CliError> {
    use fockbench::fock::quadrature_report;
    let fid = built.closed_form_fidelity()?;
    Ok(match built {
        Built::Single { state, .. } => {
            let q = quadrature_report(state)?;
            let (n, vn) = state.photon_statistics();
            vec![
                n.into(), vn.into(), q.mean_x.into(), q.mean_p.into(), q.var_x.into(),
                q.var_p.into(), q.product.into(), fid.into(), q.tail_warning.into(),
            ]
        }
        Built::Two { state, .. } => {
            let m = state.quadrature_moments()?;
            let (n1, n2) = two_mode_means(state);
            let tail = state.tail_warning || state.tail_mass(0.1) > fockbench::Tolerances::default().tail;
            vec![
                n1.into(), n2.into(), m.var_x1.into(), m.var_p1.into(), m.var_x2.into(),
                m.var_p2.into(), m.cov_x.into(), m.cov_p.into(), state.off_diagonal_mass().into(),
                fid.into(), tail.into(),
            ]
        }
        Built::Lambda(s) => {
            let (n, vn) = s.coefficients.photon_statistics();
            let q = &s.modal;
            let z = p.z.expect("resolved");
            vec![
                n.into(), vn.into(), q.mean_x.into(), q.mean_p.into(), q.var_x.into(),
                q.var_p.into(), q.product.into(), s.tail.into(), s.eigen_residual(z)?.into(),
            ]
        }
    })
}

pub fn two_mode_means(s: &TwoModeState) -> (f64, f64) {
    let joint = s.joint_distribution();
    let mut n = (0.0, 0.0);
    for ((i, j), w) in joint.indexed_iter() {
        n.0 += i as f64 * w;
        n.1 += j as f64 * w;
    }
    n
}

/// Amplitudes, distribution and moments as a JSON object body.
pub fn state_json(built: &Built) -> Result<Map<String, Value>, CliError> {
    use fockbench::fock::quadrature_report;
    let mut m = Map::new();
    match built {
        Built::Single { state, .. } => {
            let q = quadrature_report(state)?;
            m.insert("dim".into(), json!(state.dim()));
            m.insert("amplitudes".into(), state.amps().iter().map(|z| cx(*z)).collect());
            m.insert("photon_distribution".into(), json!(state.photon_distribution()));
            m.insert("quadrature_report".into(), to_value(&q));
            m.insert("tail_warning".into(), json!(q.tail_warning));
        }
        Built::Two { state, .. } => {
            let rows = |f: &dyn Fn(usize, usize) -> Value| -> Value {
                (0..state.dim_a())
                    .map(|i| (0..state.dim_b()).map(|j| f(i, j)).collect::<Value>())
                    .collect()
            };
            let joint = state.joint_distribution();
            let tail = state.tail_warning || state.tail_mass(0.1) > fockbench::Tolerances::default().tail;
            m.insert("dim".into(), json!([state.dim_a(), state.dim_b()]));
            m.insert("amplitudes".into(), rows(&|i, j| cx(state.amp(i, j))));
            m.insert("photon_distribution".into(), rows(&|i, j| json!(joint[[i, j]])));
            m.insert("quadrature_moments".into(), to_value(&state.quadrature_moments()?));
            m.insert("off_diagonal_mass".into(), json!(state.off_diagonal_mass()));
            m.insert("tail_warning".into(), json!(tail));
        }
        Built::Lambda(s) => {
            m.insert("dim".into(), json!(s.coefficients.dim()));
            m.insert("amplitudes".into(), s.coefficients.amps().iter().map(|z| cx(*z)).collect());
            m.insert("photon_distribution".into(), json!(s.coefficients.photon_distribution()));
            m.insert("quadrature_report".into(), to_value(&s.modal));
            m.insert("modal_tail".into(), json!(s.tail));
            m.insert("tail_warning".into(), json!(s.modal.tail_warning));
        }
    }
    if let Some(f) = built.closed_form_fidelity()? {
        m.insert("closed_form_fidelity".into(), json!(f));
    }
    Ok(m)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain numeric records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(f: impl FnOnce(&mut Params)) -> Params {
        let mut p = Params::default();
        f(&mut p);
        p
    }

    #[test]
    fn required_parameters() {
        assert!(resolve(Family::Coherent, &Params::default(), 64).is_err());
        let p = resolve(Family::Coherent, &params(|p| p.alpha = Some(C64::new(1.0, 0.0))), 64).unwrap();
        assert_eq!(p.dim, Some(64));
        assert_eq!(p.t, Some(0.0));
        assert!(resolve(Family::LambdaSqueezed, &params(|p| p.lambda = Some(1.0)), 64).is_err());
    }

    #[test]
    fn every_family_builds() {
        let g = grid_from(&GridArgs::default()).unwrap();
        let p = params(|p| {
            p.alpha = Some(C64::new(0.5, 0.5));
            p.r = Some(0.4);
            p.theta = Some(-0.3);
            p.s = Some(0.6);
            p.zeta = Some(C64::new(1.0, 0.0));
            p.xi = Some(C64::new(0.3, 0.1));
            p.lambda = Some(2.0);
            p.z = Some(C64::new(0.5, 0.0));
            p.dim = Some(24);
        });
        for family in Family::value_variants() {
            let p = resolve(*family, &p, 64).unwrap();
            let b = build(*family, &p, &g).unwrap();
            if let Some(fid) = b.closed_form_fidelity().unwrap() {
                assert!(fid > 1.0 - 1e-8, "{}: {fid}", family.name());
            }
            assert_eq!(observables(&b, &p).unwrap().len(), observable_header(family.kind()).len());
            assert!(state_json(&b).unwrap().contains_key("amplitudes"));
        }
    }

    #[test]
    fn synthesized_wavefunction_is_normalized() {
        let g = grid_from(&GridArgs::default()).unwrap();
        let p = resolve(Family::Squeezed, &params(|p| p.r = Some(0.5)), 48).unwrap();
        let psi = build(Family::Squeezed, &p, &g).unwrap().wavefunction(&g).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sweepable() {
        let mut p = Params::default();
        set_param(&mut p, "alpha", 2.0).unwrap();
        assert_eq!(p.alpha, Some(C64::new(2.0, 0.0)));
        assert!(set_param(&mut p, "q", 1.0).is_err());
        assert!(Family::Coherent.uses("t"));
        assert!(!Family::Coherent.uses("r"));
    }
}
