//! Command-line front end for `fockbench`.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 bad usage or
//! parameters. Output is deterministic for identical inputs.

pub mod args;
pub mod config;
pub mod error;
pub mod family;
pub mod output;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use fockbench::verify::{run_suite, SuiteParams};
use rayon::prelude::*;
use serde_json::{json, Value};

use args::{Cli, Command, Format, StateArgs, SweepArgs, VerifyArgs, WaveArgs};
use config::ConfigFile;
use error::{CliError, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use family::{build, grid_from, observable_header, observables, parameters_json, resolve, set_param, state_json, Kind};
use output::{emit, to_json, Cell, Table, SCHEMA};

/// Parses `argv`, runs, and reports errors on standard error.
pub fn main_with_args<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        // a closed reader (`| head`) is not an error of ours
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            eprintln!("fockbench: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::State(a) => state(a, &cfg),
        Command::Verify(a) => verify(a, &cfg),
        Command::Sweep(a) => sweep(a, &cfg),
        Command::Wavefunction(a) => wavefunction(a, &cfg),
    }
}

fn state(mut a: StateArgs, cfg: &ConfigFile) -> Result<u8, CliError> {
    cfg.apply_params(&mut a.params)?;
    cfg.apply_grid(&mut a.grid)?;
    cfg.apply_format(&mut a.out.format)?;
    let p = resolve(a.family, &a.params, config::env_dim()?)?;
    let grid = grid_from(&a.grid)?;
    let built = build(a.family, &p, &grid)?;
    let bytes = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut body = state_json(&built)?;
            body.insert("schema".into(), json!(SCHEMA));
            body.insert("family".into(), json!(a.family.name()));
            body.insert("parameters".into(), parameters_json(a.family, &p));
            to_json(&Value::Object(body))
        }
        Format::Csv => distribution_table(&built).to_csv(),
    };
    emit(&bytes, a.out.output.as_deref())?;
    Ok(EXIT_OK)
}

fn distribution_table(built: &family::Built) -> Table {
    match built {
        family::Built::Two { state, .. } => {
            let mut t = Table::new(&["n1", "n2", "probability"]);
            for ((i, j), w) in state.joint_distribution().indexed_iter() {
                t.rows.push(vec![i.into(), j.into(), (*w).into()]);
            }
            t
        }
        family::Built::Single { state, .. } => single_table(state),
        family::Built::Lambda(s) => single_table(&s.coefficients),
    }
}

fn single_table(s: &fockbench::FockState) -> Table {
    let mut t = Table::new(&["n", "probability"]);
    for (n, w) in s.photon_distribution().into_iter().enumerate() {
        t.rows.push(vec![n.into(), w.into()]);
    }
    t
}

fn verify(mut a: VerifyArgs, cfg: &ConfigFile) -> Result<u8, CliError> {
    cfg.apply_params(&mut a.params)?;
    cfg.apply_tol(&mut a.tol)?;
    cfg.apply_format(&mut a.out.format)?;
    let p = &a.params;
    // suites keep their own dimensions unless one is asked for
    let dim = match (p.dim, std::env::var_os(config::DIM_ENV)) {
        (Some(d), _) => Some(d),
        (None, Some(_)) => Some(config::env_dim()?),
        (None, None) => None,
    };
    let sp = SuiteParams {
        dim,
        alpha: p.alpha,
        r: p.r,
        phi: p.phi,
        theta: p.theta,
        s: p.s,
        zeta: p.zeta,
        q: p.q,
        lambda: p.lambda,
        z: p.z,
        tol: a.tol,
    };
    let started = Instant::now();
    let report = run_suite(a.suite, &sp)?;
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    eprintln!(
        "{}: {} checks, {} failed, {:.3} s",
        report.suite,
        report.checks.len(),
        failed,
        started.elapsed().as_secs_f64()
    );
    let bytes = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "measured": c.measured, "bound": c.bound, "pass": c.pass}))
                .collect();
            to_json(&json!({
                "schema": SCHEMA,
                "suite": report.suite,
                "pass": report.pass,
                "checks": checks,
            }))
        }
        Format::Csv => {
            let mut t = Table::new(&["check", "measured", "bound", "pass"]);
            for c in &report.checks {
                t.rows.push(vec![Cell::Text(c.name.clone()), c.measured.into(), c.bound.into(), c.pass.into()]);
            }
            t.to_csv()
        }
    };
    emit(&bytes, a.out.output.as_deref())?;
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY })
}

pub fn sweep_values(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(CliError::Usage("sweep bounds must be finite".into()));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let h = (stop - start) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { stop } else { start + h * i as f64 })
        .collect())
}

fn sweep(mut a: SweepArgs, cfg: &ConfigFile) -> Result<u8, CliError> {
    cfg.apply_params(&mut a.params)?;
    cfg.apply_grid(&mut a.grid)?;
    if !a.family.uses(&a.param) {
        return Err(CliError::Usage(format!(
            "family {} has no parameter {:?}",
            a.family.name(),
            a.param
        )));
    }
    let values = sweep_values(a.start, a.stop, a.steps)?;
    let mut base = a.params.clone();
    set_param(&mut base, &a.param, values[0])?;
    let base = resolve(a.family, &base, config::env_dim()?)?;
    let grid = grid_from(&a.grid)?;
    let rows: Vec<Result<Vec<Cell>, CliError>> = values
        .par_iter()
        .map(|v| {
            let mut p = base.clone();
            set_param(&mut p, &a.param, *v)?;
            let built = build(a.family, &p, &grid)?;
            let mut row = vec![Cell::Num(*v)];
            row.extend(observables(&built, &p)?);
            Ok(row)
        })
        .collect();
    let mut header = vec![a.param.as_str()];
    header.extend(observable_header(a.family.kind()));
    let mut t = Table::new(&header);
    for row in rows {
        t.rows.push(row?);
    }
    emit(&t.to_csv(), a.output.as_deref())?;
    Ok(EXIT_OK)
}

fn wavefunction(mut a: WaveArgs, cfg: &ConfigFile) -> Result<u8, CliError> {
    cfg.apply_params(&mut a.params)?;
    cfg.apply_grid(&mut a.grid)?;
    cfg.apply_format(&mut a.out.format)?;
    if a.family.kind() == Kind::Two {
        return Err(CliError::Usage(format!("{} is a two-mode family", a.family.name())));
    }
    let p = resolve(a.family, &a.params, config::env_dim()?)?;
    let grid = grid_from(&a.grid)?;
    let psi = build(a.family, &p, &grid)?.wavefunction(&grid)?;
    let xs = grid.points();
    let bytes = match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = Table::new(&["x", "re", "im", "density"]);
            for (x, v) in xs.iter().zip(&psi.values) {
                t.rows.push(vec![(*x).into(), v.re.into(), v.im.into(), v.norm_sqr().into()]);
            }
            t.to_csv()
        }
        Format::Json => to_json(&json!({
            "schema": SCHEMA,
            "family": a.family.name(),
            "parameters": parameters_json(a.family, &p),
            "grid": {"x_min": grid.x_min, "x_max": grid.x_max(), "points": grid.n_points},
            "x": xs,
            "values": psi.values.iter().map(|z| output::cx(*z)).collect::<Vec<_>>(),
        })),
    };
    emit(&bytes, a.out.output.as_deref())?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_points() {
        assert_eq!(sweep_values(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(sweep_values(0.3, 9.0, 1).unwrap(), vec![0.3]);
        assert!(sweep_values(0.0, 1.0, 0).is_err());
        let v = sweep_values(0.0, 1.0, 11).unwrap();
        assert_eq!(v[10], 1.0);
        assert!((v[3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(main_with_args(["fockbench", "state", "--family", "coherent", "--dim", "8"]), EXIT_USAGE);
        assert_eq!(main_with_args(["fockbench", "verify", "--suite", "nope"]), EXIT_USAGE);
        assert_eq!(main_with_args(["fockbench", "bogus"]), EXIT_USAGE);
    }
}
