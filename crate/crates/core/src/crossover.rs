//! Crossover weakenings at which two algorithms have equal leading
//! ln-failure rate per query.

use crate::wvd::optimal_alpha;
use crate::{Error, Result};

/// Which pair of per-query leading coefficients is being equated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverPair {
    DjClassical,
    DjWvd,
}

impl CrossoverPair {
    pub fn label(&self) -> &'static str {
        match self {
            CrossoverPair::DjClassical => "dj-classical",
            CrossoverPair::DjWvd => "dj-wvd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverResult {
    pub pair: CrossoverPair,
    pub u_star: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
}

/// Per-query decay coefficient of the majority-vote quantum test:
/// (1/32) u^{-1} [1 - 8u(1-u)]^2 / [(1-u)(1 - 4u + 4u^2)].
pub fn dj_leading_coefficient(u: f64) -> f64 {
    let b = 1.0 - 8.0 * u * (1.0 - u);
    b * b / (32.0 * u * (1.0 - u) * (1.0 - 4.0 * u + 4.0 * u * u))
}

/// Per-query decay coefficient of the classical proportion test:
/// (1/8) (1 - 4u)^2 / (1 - 4u^2).
pub fn classical_leading_coefficient(u: f64) -> f64 {
    let b = 1.0 - 4.0 * u;
    b * b / (8.0 * (1.0 - 4.0 * u * u))
}

/// Per-query decay coefficient of the interrogation test with the optimal
/// threshold, in the N >> k limit (geometry factor 1):
/// (alpha - 2u)^2 / (1 - 4u^2).
pub fn wvd_leading_coefficient(u: f64) -> f64 {
    let a = optimal_alpha(u);
    (a - 2.0 * u) * (a - 2.0 * u) / (1.0 - 4.0 * u * u)
}

const BRACKET_LO: f64 = 0.001;
const BRACKET_HI: f64 = 0.24;

/// Finds the first root of `g` in (lo, hi): a scan locates the first sign
/// change (the difference of coefficients can return to its original sign
/// further along the interval), bisection narrows it, and a secant polish
/// finishes. The residual of the returned root is at most 1e-10.
fn first_root<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64) -> Result<(f64, f64, (f64, f64))> {
    const SCAN_STEPS: usize = 2000;
    let step = (hi - lo) / SCAN_STEPS as f64;
    let mut a = lo;
    let mut fa = g(a);
    let mut bracket = None;
    for i in 1..=SCAN_STEPS {
        let b = lo + step * i as f64;
        let fb = g(b);
        if fa == 0.0 {
            bracket = Some((a, a, fa, fa));
            break;
        }
        if fa.signum() != fb.signum() {
            bracket = Some((a, b, fa, fb));
            break;
        }
        a = b;
        fa = fb;
    }
    let (mut a, mut b, mut fa, mut fb) = bracket.ok_or(Error::NoBracket {
        lo,
        hi,
        f_lo: g(lo),
        f_hi: g(hi),
    })?;
    let scan_bracket = (a, b);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = g(mid);
        if fm == 0.0 || b - a < 1e-14 {
            a = mid;
            fa = fm;
            b = mid;
            break;
        }
        if fa.signum() != fm.signum() {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
    }
    let mut root = 0.5 * (a + b);
    // Secant polish from the bisection endpoints.
    let (mut x0, mut x1) = (a, b);
    let (mut f0, mut f1) = (fa, fb);
    for _ in 0..8 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(lo..=hi).contains(&x2) {
            break;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = g(x2);
        if f1.abs() < 1e-15 {
            break;
        }
    }
    if f1.abs() < g(root).abs() {
        root = x1;
    }
    let residual = g(root);
    if residual.abs() > 1e-10 {
        return Err(Error::InvariantViolation(format!(
            "root residual {residual:e} exceeds 1e-10"
        )));
    }
    Ok((root, residual, scan_bracket))
}

/// Weakening at which the quantum majority vote and the classical
/// proportion test decay at the same per-query rate (about u = 0.0973).
pub fn solve_crossover_dj_classical() -> Result<CrossoverResult> {
    let g = |u: f64| dj_leading_coefficient(u) - classical_leading_coefficient(u);
    let (u_star, residual, bracket) = first_root(g, BRACKET_LO, BRACKET_HI)?;
    Ok(CrossoverResult {
        pair: CrossoverPair::DjClassical,
        u_star,
        residual,
        bracket,
    })
}

/// Weakening at which the quantum majority vote and the interrogation
/// test decay at the same per-query rate (about u = 0.0499), in the
/// N >> k limit. `geometry_factor_sq_override` scales the interrogation
/// coefficient to study a finite-N geometry factor; `None` uses 1.
pub fn solve_crossover_dj_wvd_with(
    geometry_factor_sq_override: Option<f64>,
) -> Result<CrossoverResult> {
    let f2 = geometry_factor_sq_override.unwrap_or(1.0);
    if !(f2 > 0.0 && f2 <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "geometry factor squared must be in (0, 1], got {f2}"
        )));
    }
    let g = |u: f64| dj_leading_coefficient(u) - f2 * wvd_leading_coefficient(u);
    let (u_star, residual, bracket) = first_root(g, BRACKET_LO, BRACKET_HI)?;
    Ok(CrossoverResult {
        pair: CrossoverPair::DjWvd,
        u_star,
        residual,
        bracket,
    })
}

pub fn solve_crossover_dj_wvd() -> Result<CrossoverResult> {
    solve_crossover_dj_wvd_with(None)
}
