//! Deutsch-Jozsa failure probabilities under a broken promise: exact
//! single-query and majority-vote values, and the large-`k` log-asymptotic.

use crate::numeric::{binomial, ln_big_rational};
use crate::oracle::ProblemInstance;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Single-query error probabilities conditioned on the string class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DjErrorPair {
    /// Error probability given a balanced-class string (observing z = 0).
    pub p_bal: f64,
    /// Error probability given a constant-class string (missing z = 0).
    pub p_con: f64,
}

/// Mean and variance of the wrong-vote count over `k` majority queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DjMajorityStats {
    pub mu_bal: f64,
    pub mu_con: f64,
    pub var_bal: f64,
    pub var_con: f64,
    pub k: u64,
}

impl DjMajorityStats {
    pub fn new(inst: &ProblemInstance, k: u64) -> Self {
        let e = dj_single_errors(inst);
        Self {
            mu_bal: k as f64 * e.p_bal,
            mu_con: k as f64 * e.p_con,
            var_bal: k as f64 * e.p_bal * (1.0 - e.p_bal),
            var_con: k as f64 * e.p_con * (1.0 - e.p_con),
            k,
        }
    }
}

/// Exact rational single-query errors: p_bal = 4y^2/N^2, p_con = 4y/N - 4y^2/N^2.
pub fn dj_single_errors_exact(inst: &ProblemInstance) -> (BigRational, BigRational) {
    let n = BigInt::from(inst.big_n());
    let y = BigInt::from(inst.y());
    let n2 = &n * &n;
    let p_bal = BigRational::new(4 * &y * &y, n2.clone());
    let p_con = BigRational::new(4 * &y * &n - 4 * &y * &y, n2);
    (p_bal, p_con)
}

pub fn dj_single_errors(inst: &ProblemInstance) -> DjErrorPair {
    let (pb, pc) = dj_single_errors_exact(inst);
    DjErrorPair {
        p_bal: pb.to_f64().unwrap(),
        p_con: pc.to_f64().unwrap(),
    }
}

/// Exact single-query failure probability p*p_bal + (1-p)*p_con.
///
/// The prior enters as the exact rational value of the f64 `inst.p()`.
pub fn dj_single_failure_exact(inst: &ProblemInstance) -> BigRational {
    let (pb, pc) = dj_single_errors_exact(inst);
    let p = BigRational::from_float(inst.p()).expect("prior is finite");
    &p * pb + (BigRational::one() - p) * pc
}

pub fn dj_single_failure(inst: &ProblemInstance) -> f64 {
    dj_single_failure_exact(inst).to_f64().unwrap()
}

/// Exact majority-vote failure probability over `k` queries.
///
/// Sums C(k,r) [p pb^r (1-pb)^{k-r} + (1-p) pc^r (1-pc)^{k-r}] for
/// r = ceil(k/2) .. k; for even `k` the tie r = k/2 counts as a failure.
/// All arithmetic is big-integer over the common denominator N^{2k}.
pub fn dj_majority_failure_exact(inst: &ProblemInstance, k: u64) -> Result<BigRational> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let n = BigInt::from(inst.big_n());
    let y = BigInt::from(inst.y());
    let d = &n * &n; // common denominator of the single-query errors
    let a = 4 * &y * &y; // p_bal numerator
    let b = &d - &a; // 1 - p_bal
    let c = 4 * &y * &n - 4 * &y * &y; // p_con numerator
    let e = &d - &c; // 1 - p_con

    let ku = k as usize;
    let pow_table = |base: &BigInt| -> Vec<BigInt> {
        let mut v = Vec::with_capacity(ku + 1);
        v.push(BigInt::one());
        for i in 1..=ku {
            let next = &v[i - 1] * base;
            v.push(next);
        }
        v
    };
    let (ap, bp, cp, ep) = (pow_table(&a), pow_table(&b), pow_table(&c), pow_table(&e));

    let prior = BigRational::from_float(inst.p()).expect("prior is finite");
    let (pn, pd) = (prior.numer().clone(), prior.denom().clone());
    let qn = &pd - &pn; // (1 - p) numerator over pd

    let r0 = k.div_ceil(2) as usize;
    let mut sum = BigInt::zero();
    let mut binom = binomial(k, r0 as u64);
    for r in r0..=ku {
        let term = &pn * (&ap[r] * &bp[ku - r]) + &qn * (&cp[r] * &ep[ku - r]);
        sum += &binom * term;
        // C(k, r+1) = C(k, r) * (k - r) / (r + 1)
        if r < ku {
            binom = binom * BigInt::from(k - r as u64) / BigInt::from(r as u64 + 1);
        }
    }
    // Common denominator: pd * (N^2)^k.
    Ok(BigRational::new(sum, pd * d.pow(k as u32)))
}

pub fn dj_majority_failure(inst: &ProblemInstance, k: u64) -> Result<f64> {
    Ok(dj_majority_failure_exact(inst, k)?.to_f64().unwrap())
}

/// ln of the exact majority-vote failure probability; finite even when the
/// probability itself underflows f64. Returns -inf for an exactly zero
/// probability.
pub fn dj_majority_ln_failure(inst: &ProblemInstance, k: u64) -> Result<f64> {
    let p = dj_majority_failure_exact(inst, k)?;
    if p.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(ln_big_rational(&p))
}

/// ln P_fail of the k-query majority vote in the regime y << N, k large,
/// evaluated term by term:
///
/// -(k/32) u^-1 [1-8u(1-u)]^2 / [(1-u)(1-4u+4u^2)]
///   - (1/2) ln k + (1/2) ln u + (1/2) ln[(1-u)(1-4u+4u^2)]
///   - ln|1-8u(1-u)| + (1/2) ln(1/pi)
pub fn dj_ln_failure_asymptotic(u: f64, k: u64) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if !(u > 0.0 && u < 0.5) {
        return Err(Error::OutsideApproximationDomain(format!(
            "requires 0 < u < 1/2, got u = {u}"
        )));
    }
    let g = 1.0 - 8.0 * u * (1.0 - u);
    if g == 0.0 {
        return Err(Error::OutsideApproximationDomain(
            "1 - 8u(1-u) = 0: logarithmic divergence".into(),
        ));
    }
    let k = k as f64;
    let h = (1.0 - u) * (1.0 - 4.0 * u + 4.0 * u * u);
    let leading = -(k / 32.0) * g * g / (u * h);
    Ok(leading - 0.5 * k.ln() + 0.5 * u.ln() + 0.5 * h.ln() - g.abs().ln()
        + 0.5 * (1.0 / std::f64::consts::PI).ln())
}

/// ln of the erfc-based intermediate approximation
/// P_fail ~ (1/4) erfc[(k/2 - mu_con)/(sigma_con sqrt(2))], the step the
/// log-asymptotic is derived from. Diagnostic only.
pub fn dj_ln_failure_erfc_intermediate(inst: &ProblemInstance, k: u64) -> f64 {
    let stats = DjMajorityStats::new(inst, k);
    let x = (k as f64 / 2.0 - stats.mu_con) / (stats.var_con.sqrt() * std::f64::consts::SQRT_2);
    crate::numeric::ln_erfc(x) - 4.0f64.ln()
}
