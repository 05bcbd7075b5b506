//! The `sweep` subcommand: a grid over the weakening u (and optionally
//! several query budgets), one CSV row per (algorithm, u, k, mode).

use crate::config::resolve;
use crate::point::{point_row, resolve_common, ResolvedCommon};
use crate::rows::{sort_rows, Row};
use crate::{emit_rows, CliError, Common, Mode};

const DEFAULT_U_MIN: f64 = 0.005;
const DEFAULT_U_MAX: f64 = 0.24;
const DEFAULT_U_STEPS: u64 = 100;
/// Large enough that the per-query rate dominates the O(ln k) corrections
/// over the default grid.
const DEFAULT_K: u64 = 10001;

pub fn run_sweep(
    common: &Common,
    u_min: Option<f64>,
    u_max: Option<f64>,
    u_steps: Option<u64>,
    modes: &[Mode],
) -> Result<(), CliError> {
    let cfg = common.config_file()?;
    let mut rc = resolve_common(common, &cfg)?;
    if rc.k.is_empty() {
        rc.k.push(DEFAULT_K);
    }
    let u_min = resolve(u_min, &cfg, "u-min", DEFAULT_U_MIN)?;
    let u_max = resolve(u_max, &cfg, "u-max", DEFAULT_U_MAX)?;
    let u_steps = resolve(u_steps, &cfg, "u-steps", DEFAULT_U_STEPS)?;
    let mut modes = modes.to_vec();
    if modes.is_empty() {
        if let Some(raw) = cfg.get("mode") {
            for part in raw.split(',') {
                modes.push(part.trim().parse().map_err(|e| {
                    CliError::Usage(format!("config key `mode` = `{raw}`: {e}"))
                })?);
            }
        }
    }
    if modes.is_empty() {
        modes.push(Mode::Asymptotic);
    }
    if !(0.0..0.5).contains(&u_min) || !(0.0..0.5).contains(&u_max) || u_min >= u_max {
        return Err(CliError::Usage(format!(
            "u range must satisfy 0 <= u_min < u_max < 1/2, got [{u_min}, {u_max}]"
        )));
    }
    if u_steps < 2 {
        return Err(CliError::Usage(format!(
            "--u-steps must be >= 2, got {u_steps}"
        )));
    }
    if rc.algos.is_empty() {
        return Err(CliError::Usage("no algorithms selected".into()));
    }

    let mut rows: Vec<Row> = Vec::new();
    for i in 0..u_steps {
        let u = u_min + (u_max - u_min) * i as f64 / (u_steps - 1) as f64;
        let cell = ResolvedCommon {
            u: Some(u),
            y: None, // per-point y derives from u when an exact engine runs
            k: rc.k.clone(),
            algos: rc.algos.clone(),
            out: None,
            ..copy_scalar(&rc)
        };
        for &mode in &modes {
            let leading_only = mode == Mode::Asymptotic;
            for &algo in &cell.algos {
                for &k in &cell.k {
                    rows.push(point_row(&cell, algo, k, mode, false, leading_only)?);
                }
            }
        }
    }
    sort_rows(&mut rows);
    emit_rows(&rows, rc.out.as_ref())
}

fn copy_scalar(rc: &ResolvedCommon) -> ResolvedCommon {
    ResolvedCommon {
        n: rc.n,
        y: rc.y,
        u: rc.u,
        k: Vec::new(),
        p: rc.p,
        algos: Vec::new(),
        model: rc.model,
        trials: rc.trials,
        seed: rc.seed,
        out: None,
    }
}
