//! Single-point evaluation: the `exact`, `asymptotic`, and `mc`
//! subcommands, plus the `wvd-dist` distribution dump.

use promiselab::montecarlo::{
    simulate_classical, simulate_dj, simulate_wvd, WvdSamplingMode,
};
use promiselab::wvd::{
    error_count_distribution, wvd_failure_reduced_model, wvd_ln_failure_asymptotic,
    InferenceRule,
};
use promiselab::{classical, crossover, dj, montecarlo, SamplingModel};
use std::path::PathBuf;

use crate::config::{resolve, resolve_opt, ConfigFile};
use crate::rows::Row;
use crate::{emit_rows, resolve_instance, Algo, CliError, Common, Mode, Model};

/// Majority voting stops being a test once the constant-case per-query
/// error reaches 1/2, at u = (2 - sqrt(2))/4: beyond it the failure
/// probability saturates instead of decaying, so the asymptotic report
/// uses ln(1/2) (the even-prior saturation value) there, and caps the
/// formula at the same value where its log-correction terms misbehave
/// near the pole.
pub fn dj_asymptotic_ln_saturating(u: f64, k: u64) -> Result<f64, CliError> {
    let pole = (2.0 - 2.0f64.sqrt()) / 4.0;
    let cap = 0.5f64.ln();
    if u >= pole {
        return Ok(cap);
    }
    Ok(dj::dj_ln_failure_asymptotic(u, k)?.min(cap))
}

/// ln P_fail approximation for the interrogation test; geometry factor
/// from N when available, else the N >> k limit f = 1.
pub fn wvd_asymptotic_ln(u: f64, k: u64, big_n: Option<u64>) -> Result<f64, CliError> {
    match big_n {
        Some(n) => Ok(wvd_ln_failure_asymptotic(u, k, n)?),
        None => {
            if !(u > 0.0 && u < 0.5) {
                return Err(CliError::Usage(format!(
                    "interrogation asymptotics need 0 < u < 1/2, got {u}"
                )));
            }
            Ok(-(k as f64) * crossover::wvd_leading_coefficient(u))
        }
    }
}

pub struct ResolvedCommon {
    pub n: Option<u32>,
    pub y: Option<u64>,
    pub u: Option<f64>,
    pub k: Vec<u64>,
    pub p: f64,
    pub algos: Vec<Algo>,
    pub model: SamplingModel,
    pub trials: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

pub fn resolve_common(common: &Common, cfg: &ConfigFile) -> Result<ResolvedCommon, CliError> {
    let mut k = common.k.clone();
    if k.is_empty() {
        if let Some(raw) = cfg.get("k") {
            for part in raw.split(',') {
                let v: u64 = part.trim().parse().map_err(|e| {
                    CliError::Usage(format!("config key `k` = `{raw}`: {e}"))
                })?;
                k.push(v);
            }
        }
    }
    let out = common
        .out
        .clone()
        .or_else(|| cfg.get("out").map(PathBuf::from));
    Ok(ResolvedCommon {
        n: resolve_opt(common.n, cfg, "n")?,
        y: resolve_opt(common.y, cfg, "y")?,
        u: resolve_opt(common.u, cfg, "u")?,
        k,
        p: resolve(common.p, cfg, "p", 0.5)?,
        algos: resolve(common.algo, cfg, "algo", Algo::All)?.selected(),
        model: resolve(common.model, cfg, "model", Model::With)?.sampling(),
        trials: resolve(common.trials, cfg, "trials", 100_000)?,
        seed: resolve(common.seed, cfg, "seed", 0)?,
        out,
    })
}

/// ln P_fail/query in the k -> infinity limit, times k: the pure decay
/// rates the conclusion figure compares. Unlike the full formulas these
/// carry no O(ln k) corrections for any algorithm, so the three curves
/// are ordered by their leading coefficients alone.
pub fn leading_order_ln(algo: Algo, u: f64, k: u64) -> Result<f64, CliError> {
    if !(u > 0.0 && u < 0.5) {
        return Err(CliError::Usage(format!(
            "leading-order rates need 0 < u < 1/2, got {u}"
        )));
    }
    let cap = 0.5f64.ln();
    let pole = (2.0 - 2.0f64.sqrt()) / 4.0;
    match algo {
        Algo::Dj => {
            if u >= pole {
                // Constant-case per-query error >= 1/2: majority voting
                // saturates at the even-prior failure floor.
                Ok(cap)
            } else {
                Ok((-(k as f64) * crossover::dj_leading_coefficient(u)).min(cap))
            }
        }
        Algo::Classical => {
            if u >= 0.25 {
                return Err(CliError::Usage(format!(
                    "classical rate needs u < 1/4, got {u}"
                )));
            }
            Ok(-(k as f64) * crossover::classical_leading_coefficient(u))
        }
        Algo::Wvd => Ok(-(k as f64) * crossover::wvd_leading_coefficient(u)),
        Algo::All => unreachable!("expanded before dispatch"),
    }
}

/// Rows for one (algo, k) cell in the requested mode. Shared with `sweep`,
/// which sets `leading_only` so all three asymptotic curves drop their
/// O(ln k) corrections consistently (the point command keeps the full
/// formulas for DJ and classical).
pub fn point_row(
    rc: &ResolvedCommon,
    algo: Algo,
    k: u64,
    mode: Mode,
    fixed_m: bool,
    leading_only: bool,
) -> Result<Row, CliError> {
    match mode {
        Mode::Exact | Mode::Mc => {
            let inst = resolve_instance(rc.n, rc.y, rc.u, rc.p)?;
            let n = inst.n();
            let big_n = inst.big_n();
            let base = Row {
                algorithm: algo_name(algo),
                mode: mode_name(mode),
                n: Some(n),
                big_n: Some(big_n),
                k,
                y: Some(inst.y()),
                u: inst.u(),
                p: inst.p(),
                p_fail: f64::NAN,
                ln_pfail: f64::NAN,
                trials: None,
                ci_low: None,
                ci_high: None,
                seed: None,
            };
            if mode == Mode::Exact {
                let (p_fail, ln_pfail) = match algo {
                    Algo::Dj => (
                        dj::dj_majority_failure(&inst, k)?,
                        dj::dj_majority_ln_failure(&inst, k)?,
                    ),
                    Algo::Classical => (
                        classical::classical_failure(&inst, k, rc.model)?,
                        classical::classical_ln_failure(&inst, k, rc.model)?,
                    ),
                    Algo::Wvd => {
                        let rule = InferenceRule::optimal(inst.u());
                        let p = wvd_failure_reduced_model(&inst, k, &rule)?;
                        (p, p.ln())
                    }
                    Algo::All => unreachable!("expanded before dispatch"),
                };
                Ok(Row {
                    p_fail,
                    ln_pfail,
                    ..base
                })
            } else {
                let report = match algo {
                    Algo::Dj => simulate_dj(&inst, k, rc.trials, rc.seed)?,
                    Algo::Classical => {
                        simulate_classical(&inst, k, rc.model, rc.trials, rc.seed)?
                    }
                    Algo::Wvd => {
                        let rule = InferenceRule::optimal(inst.u());
                        let mode = if fixed_m {
                            WvdSamplingMode::FixedM
                        } else {
                            WvdSamplingMode::SampledT
                        };
                        simulate_wvd(&inst, k, &rule, mode, rc.trials, rc.seed)?
                    }
                    Algo::All => unreachable!("expanded before dispatch"),
                };
                Ok(Row {
                    p_fail: report.rate,
                    ln_pfail: report.rate.ln(),
                    trials: Some(report.trials),
                    ci_low: Some(report.ci_low),
                    ci_high: Some(report.ci_high),
                    seed: Some(report.seed),
                    ..base
                })
            }
        }
        Mode::Asymptotic => {
            let (u, n, big_n, y) = match (rc.n, rc.y) {
                (Some(n), Some(y)) => {
                    let big_n = 1u64 << n;
                    (y as f64 / big_n as f64, Some(n), Some(big_n), Some(y))
                }
                (n, _) => {
                    let u = rc.u.ok_or_else(|| {
                        CliError::Usage("asymptotic mode needs --u (or --n with --y)".into())
                    })?;
                    let big_n = n.map(|n| 1u64 << n);
                    (u, n, big_n, None)
                }
            };
            let ln_pfail = if leading_only {
                leading_order_ln(algo, u, k)?
            } else {
                match algo {
                    Algo::Dj => dj_asymptotic_ln_saturating(u, k)?,
                    Algo::Classical => classical::classical_ln_failure_asymptotic(u, k)?,
                    Algo::Wvd => wvd_asymptotic_ln(u, k, big_n)?,
                    Algo::All => unreachable!("expanded before dispatch"),
                }
            };
            Ok(Row {
                algorithm: algo_name(algo),
                mode: "asymptotic",
                n,
                big_n,
                k,
                y,
                u,
                p: rc.p,
                p_fail: ln_pfail.exp(),
                ln_pfail,
                trials: None,
                ci_low: None,
                ci_high: None,
                seed: None,
            })
        }
    }
}

pub fn algo_name(algo: Algo) -> &'static str {
    match algo {
        Algo::Dj => "dj",
        Algo::Classical => "classical",
        Algo::Wvd => "wvd",
        Algo::All => "all",
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Asymptotic => "asymptotic",
        Mode::Mc => "mc",
    }
}

pub fn run_point(common: &Common, mode: Mode, fixed_m: bool) -> Result<(), CliError> {
    let cfg = common.config_file()?;
    let rc = resolve_common(common, &cfg)?;
    if rc.k.is_empty() {
        return Err(CliError::Usage("--k is required".into()));
    }
    let mut rows = Vec::new();
    for algo in &rc.algos {
        for &k in &rc.k {
            rows.push(point_row(&rc, *algo, k, mode, fixed_m, false)?);
        }
    }
    crate::rows::sort_rows(&mut rows);
    emit_rows(&rows, rc.out.as_ref())
}

pub fn run_wvd_dist(common: &Common, statevector: bool) -> Result<(), CliError> {
    let cfg = common.config_file()?;
    let rc = resolve_common(common, &cfg)?;
    let n = rc
        .n
        .ok_or_else(|| CliError::Usage("--n is required for wvd-dist".into()))?;
    let big_n = 1u64 << n;
    let [k] = rc.k[..] else {
        return Err(CliError::Usage(
            "wvd-dist needs exactly one --k value".into(),
        ));
    };
    let dist = if statevector {
        montecarlo::statevector_wvd_distribution(big_n, k)?
    } else {
        error_count_distribution(big_n, k)?
    };
    let mut text = String::from("N,k,t,prob\n");
    for (t, p) in dist.probs().iter().enumerate() {
        text.push_str(&format!("{big_n},{k},{t},{p}\n"));
    }
    match rc.out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
