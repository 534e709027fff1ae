//! One table per experiment. Angles in parameters and in angle columns are in units of π.

use std::f64::consts::PI;

use envcap_core::canonical::{
    canonical_unitary, in_region_a, in_region_d, swap_pow, CanonicalParams,
};
use envcap_core::capacity::{
    a1_spec, a2_spec, a3_spec, b1_spec, b2_spec, jammer_value_single, q_h_tensor,
    swap_gamma_eh_max, two_copy_coherent_info, A3Curve, CapacityResult, EnvState,
};
use envcap_core::channels::BipartiteUnitary;
use envcap_core::degradability::{
    bloch_grid, classify_env, is_universally_antidegradable, SYMMETRIC_TOL,
};
use envcap_core::linalg::PureState;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

/// Slopes of the A-1 sweep when no params are given.
pub const A1_DEFAULT_T: [f64; 3] = [0.0, 0.5, 1.0];
/// Plotted θ slices of the B-2 input family.
pub const B2_SLICES: [f64; 3] = [0.5, 1.0 / 64.0, 1.0 / 1024.0];
/// Points of the log-spaced θ = 2^(−10 s) grid, s ∈ [0, 1].
pub const B2_LOG_POINTS: usize = 33;
/// Bloch grid used by `region_scan` when params is empty.
pub const REGION_BLOCH_GRID: usize = 64;

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// θ values evaluated by `b2`: the plotted slices plus the log grid, descending and deduplicated.
pub fn b2_thetas() -> Vec<f64> {
    let mut th: Vec<f64> = linspace(0.0, 1.0, B2_LOG_POINTS)
        .into_iter()
        .map(|s| 2f64.powf(-10.0 * s))
        .chain(B2_SLICES)
        .collect();
    th.sort_by(|a, b| b.total_cmp(a));
    th.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    th
}

/// Default γ values of `eh_swap`: 0, 0.05, …, 1.
pub fn eh_default_gammas() -> Vec<f64> {
    (0..=20).map(|k| k as f64 / 20.0).collect()
}

/// Gate from three params in units of π.
pub fn gate_from_params(cfg: &ExperimentConfig) -> CliResult<(CanonicalParams, BipartiteUnitary)> {
    match cfg.params[..] {
        [x, y, z] => {
            let p = CanonicalParams::from_units_of_pi(x, y, z);
            Ok((p, canonical_unitary(&p)))
        }
        _ => Err(CliError::Config(format!(
            "{} needs --params with three gate angles in units of pi, got {} values",
            cfg.experiment,
            cfg.params.len()
        ))),
    }
}

fn unit_params(cfg: &ExperimentConfig, what: &str) -> CliResult<()> {
    match cfg.params.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        Some(p) => Err(CliError::Config(format!(
            "{what} must lie in [0, 1], got {p}"
        ))),
        None => Ok(()),
    }
}

fn rows<P: Sync>(
    params: &[P],
    f: impl Fn(&P) -> CliResult<Vec<Cell>> + Sync + Send,
) -> CliResult<Vec<Vec<Cell>>> {
    params.par_iter().map(f).collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<Table> {
    cfg.validate()?;
    let ts = || linspace(0.0, 1.0, cfg.grid);
    let (columns, rows) = match cfg.experiment {
        Experiment::A1 => {
            let t_values = if cfg.params.is_empty() {
                A1_DEFAULT_T.to_vec()
            } else {
                cfg.params.clone()
            };
            let pts: Vec<(f64, f64)> = t_values
                .iter()
                .flat_map(|&t| {
                    linspace(0.5, 1.0, cfg.grid)
                        .into_iter()
                        .map(move |g| (g, t))
                })
                .collect();
            let rows = rows(&pts, |&(g, t)| {
                let v = two_copy_coherent_info(&a1_spec(g, t)?);
                Ok(vec![g.into(), t.into(), v.into()])
            })?;
            (vec!["gamma", "t", "coherent_info"], rows)
        }
        Experiment::A2 => {
            let rows = rows(&ts(), |&t| {
                let v = two_copy_coherent_info(&a2_spec(t)?);
                Ok(vec![t.into(), "a2".into(), v.into()])
            })?;
            (vec!["t", "curve_label", "coherent_info"], rows)
        }
        Experiment::A3 => {
            let pts: Vec<(A3Curve, f64)> = A3Curve::ALL
                .iter()
                .flat_map(|&c| ts().into_iter().map(move |t| (c, t)))
                .collect();
            let rows = rows(&pts, |&(c, t)| {
                let v = two_copy_coherent_info(&a3_spec(c, t)?);
                Ok(vec![t.into(), c.label().into(), v.into()])
            })?;
            (vec!["t", "curve_label", "coherent_info"], rows)
        }
        Experiment::B1 => {
            let rows = rows(&ts(), |&t| {
                let v = two_copy_coherent_info(&b1_spec(t)?);
                Ok(vec![t.into(), "m".into(), v.into()])
            })?;
            (vec!["t", "curve_label", "coherent_info"], rows)
        }
        Experiment::B2 => {
            unit_params(cfg, "theta")?;
            let thetas = if cfg.params.is_empty() {
                b2_thetas()
            } else {
                cfg.params.clone()
            };
            let pts: Vec<(f64, f64)> = ts()
                .into_iter()
                .flat_map(|t| thetas.iter().map(move |&th| (t, th)))
                .collect();
            let rows = rows(&pts, |&(t, th)| {
                let v = two_copy_coherent_info(&b2_spec(t, th)?);
                Ok(vec![t.into(), th.into(), v.into()])
            })?;
            (vec!["t", "theta", "coherent_info"], rows)
        }
        Experiment::EhSwap => {
            unit_params(cfg, "gamma")?;
            let gammas = if cfg.params.is_empty() {
                eh_default_gammas()
            } else {
                cfg.params.clone()
            };
            let opts = cfg.optimizer();
            let rows = rows(&gammas, |&g| {
                let eh = swap_gamma_eh_max(g, &opts)?.value;
                let qh = q_h_tensor(&swap_pow(g), &opts)?.value;
                Ok(vec![g.into(), eh.into(), qh.into()])
            })?;
            (vec!["gamma", "qeh_tensor", "qh_tensor"], rows)
        }
        Experiment::RegionScan => {
            let bloch =
                match cfg.params[..] {
                    [] => REGION_BLOCH_GRID,
                    [n] if n >= 2.0 && n.fract() == 0.0 => n as usize,
                    _ => return Err(CliError::Config(
                        "region_scan takes at most one param: the Bloch grid size (integer >= 2)"
                            .into(),
                    )),
                };
            let axis = linspace(0.0, 0.5, cfg.grid);
            let mut pts = Vec::new();
            for (i, &x) in axis.iter().enumerate() {
                for (j, &y) in axis.iter().enumerate().take(i + 1) {
                    for &z in axis.iter().take(j + 1) {
                        pts.push([x, y, z]);
                    }
                }
            }
            let rows = rows(&pts, |&[x, y, z]| {
                let p = CanonicalParams::from_units_of_pi(x, y, z);
                let universal = is_universally_antidegradable(&canonical_unitary(&p), bloch)?;
                Ok(vec![
                    x.into(),
                    y.into(),
                    z.into(),
                    in_region_a(&p).into(),
                    in_region_d(&p).into(),
                    universal.into(),
                ])
            })?;
            (
                vec![
                    "alpha_x",
                    "alpha_y",
                    "alpha_z",
                    "in_A",
                    "in_D",
                    "universal_numeric",
                ],
                rows,
            )
        }
        Experiment::Classify => {
            let (_, v) = gate_from_params(cfg)?;
            let rows = rows(&bloch_grid(cfg.grid), |&(th, ph)| {
                let c = classify_env(&v, &PureState::from_bloch_angles(th, ph), SYMMETRIC_TOL)?;
                Ok(vec![
                    (th / PI).into(),
                    (ph / PI).into(),
                    c.index.into(),
                    c.class.as_str().into(),
                ])
            })?;
            (vec!["theta", "phi", "index", "class"], rows)
        }
        Experiment::Qhtens | Experiment::Jammer => {
            let (_, v) = gate_from_params(cfg)?;
            let opts = cfg.optimizer();
            let r = if cfg.experiment == Experiment::Qhtens {
                q_h_tensor(&v, &opts)?
            } else {
                jammer_value_single(&v, &opts)?
            };
            let row = vec![r.value.into(), Cell::Json(describe(&r))];
            (vec!["value", "argmax"], vec![row])
        }
    };
    Ok(Table { columns, rows })
}

fn bloch(v: Option<[f64; 3]>) -> Value {
    v.map_or(Value::Null, |b| json!(b))
}

/// Optimizer location and diagnostics of a capacity estimate.
pub fn describe(r: &CapacityResult) -> Value {
    let env = match &r.argmax_env {
        Some(EnvState::Pure(p)) => json!({"kind": "pure", "bloch": bloch(p.bloch_vector())}),
        Some(EnvState::Mixed(m)) => json!({"kind": "mixed", "bloch": bloch(m.bloch_vector())}),
        None => Value::Null,
    };
    let d = &r.diagnostics;
    json!({
        "input_bloch": bloch(r.argmax_input.bloch_vector()),
        "env": env,
        "diagnostics": {
            "raw_value": d.raw_value,
            "iterations": d.iterations,
            "evaluations": d.evaluations,
            "restarts": d.restarts,
            "restart_spread": d.restart_spread,
            "converged": d.converged,
            "outer_grid": d.outer_grid,
            "inner_grid": d.inner_grid,
        }
    })
}
