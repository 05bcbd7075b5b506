//! Classical algorithms under a broken promise: the naive promise-bound
//! identical-sample algorithm and the proportion-sampling algorithm, exact
//! and asymptotic.

use crate::numeric::{binomial, ln_big_rational};
use crate::oracle::ProblemInstance;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// How the `k` sample positions are drawn.
///
/// With replacement gives the binomial model the closed-form asymptotics
/// assume; without replacement (hypergeometric) is the physically faithful
/// variant for small `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingModel {
    WithReplacement,
    WithoutReplacement,
}

/// Conditional probabilities of observing the "balanced" window event B
/// given each of the four promise cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalConditional {
    pub b_given_1a: f64,
    pub b_given_1b: f64,
    pub b_given_2a: f64,
    pub b_given_2b: f64,
}

/// Inclusive window of zero counts that triggers the "balanced" inference:
/// ceil(k/4) <= k0 <= floor(3k/4).
pub fn balanced_window(k: u64) -> (u64, u64) {
    (k.div_ceil(4), 3 * k / 4)
}

/// Failure probability of the naive algorithm that answers "balanced" on the
/// first differing bit: 2p C(N/2, k) / C(N, k). Zero when k > N/2.
pub fn naive_classical_failure_exact(big_n: u64, k: u64, p: f64) -> Result<BigRational> {
    if big_n % 2 != 0 {
        return Err(Error::InvalidParameter("N must be even".into()));
    }
    if k < 1 || k > big_n {
        return Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k <= N, got k = {k}, N = {big_n}"
        )));
    }
    let prior = BigRational::from_float(p)
        .ok_or_else(|| Error::InvalidParameter("prior must be finite".into()))?;
    Ok(BigRational::from(BigInt::from(2))
        * prior
        * BigRational::new(binomial(big_n / 2, k), binomial(big_n, k)))
}

pub fn naive_classical_failure(big_n: u64, k: u64, p: f64) -> Result<f64> {
    Ok(naive_classical_failure_exact(big_n, k, p)?.to_f64().unwrap())
}

/// P(window | success probability num/den) for k0 ~ Binomial(k, num/den), exact.
fn binomial_window_exact(k: u64, num: &BigInt, den: &BigInt) -> BigRational {
    let (lo, hi) = balanced_window(k);
    let q = den - num;
    let ku = k as usize;
    let mut num_pows = Vec::with_capacity(ku + 1);
    let mut q_pows = Vec::with_capacity(ku + 1);
    num_pows.push(BigInt::one());
    q_pows.push(BigInt::one());
    for i in 1..=ku {
        let a = &num_pows[i - 1] * num;
        num_pows.push(a);
        let b = &q_pows[i - 1] * &q;
        q_pows.push(b);
    }
    let mut sum = BigInt::zero();
    for k0 in lo..=hi {
        sum += binomial(k, k0) * &num_pows[k0 as usize] * &q_pows[(k - k0) as usize];
    }
    BigRational::new(sum, den.pow(k as u32))
}

/// P(window) for k0 ~ Hypergeometric(N, n0, k), exact.
fn hypergeometric_window_exact(big_n: u64, n0: u64, k: u64) -> BigRational {
    let (lo, hi) = balanced_window(k);
    let mut sum = BigInt::zero();
    for k0 in lo..=hi {
        if k0 > n0 || k - k0 > big_n - n0 {
            continue;
        }
        sum += binomial(n0, k0) * binomial(big_n - n0, k - k0);
    }
    BigRational::new(sum, binomial(big_n, k))
}

/// Exact conditionals (P(B|A1a), P(B|A1b), P(B|A2a), P(B|A2b)).
pub fn classical_conditionals_exact(
    inst: &ProblemInstance,
    k: u64,
    model: SamplingModel,
) -> Result<[BigRational; 4]> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let big_n = inst.big_n();
    let y = inst.y();
    match model {
        SamplingModel::WithReplacement => {
            let den = BigInt::from(big_n);
            let probs = [
                BigInt::from(big_n / 2 + y),
                BigInt::from(big_n / 2 - y),
                BigInt::from(big_n - y),
                BigInt::from(y),
            ];
            Ok(probs.map(|num| binomial_window_exact(k, &num, &den)))
        }
        SamplingModel::WithoutReplacement => {
            if k > big_n {
                return Err(Error::InvalidParameter(format!(
                    "without replacement requires k <= N, got k = {k}, N = {big_n}"
                )));
            }
            let counts = [big_n / 2 + y, big_n / 2 - y, big_n - y, y];
            Ok(counts.map(|n0| hypergeometric_window_exact(big_n, n0, k)))
        }
    }
}

pub fn classical_conditionals(
    inst: &ProblemInstance,
    k: u64,
    model: SamplingModel,
) -> Result<ClassicalConditional> {
    let [a, b, c, d] = classical_conditionals_exact(inst, k, model)?;
    Ok(ClassicalConditional {
        b_given_1a: a.to_f64().unwrap(),
        b_given_1b: b.to_f64().unwrap(),
        b_given_2a: c.to_f64().unwrap(),
        b_given_2b: d.to_f64().unwrap(),
    })
}

/// Exact failure probability of the proportion sampler:
/// p (1 - b1a/2 - b1b/2) + (1-p)(b2a/2 + b2b/2).
pub fn classical_failure_exact(
    inst: &ProblemInstance,
    k: u64,
    model: SamplingModel,
) -> Result<BigRational> {
    let [b1a, b1b, b2a, b2b] = classical_conditionals_exact(inst, k, model)?;
    let p = BigRational::from_float(inst.p()).expect("prior is finite");
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let one = BigRational::one();
    Ok(&p * (&one - &half * (b1a + b1b)) + (&one - &p) * (&half * (b2a + b2b)))
}

pub fn classical_failure(inst: &ProblemInstance, k: u64, model: SamplingModel) -> Result<f64> {
    Ok(classical_failure_exact(inst, k, model)?.to_f64().unwrap())
}

/// ln of the exact failure probability; -inf if it is exactly zero.
pub fn classical_ln_failure(
    inst: &ProblemInstance,
    k: u64,
    model: SamplingModel,
) -> Result<f64> {
    let p = classical_failure_exact(inst, k, model)?;
    if p.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(ln_big_rational(&p))
}

/// ln P_fail of the proportion sampler for large `k`:
///
/// -(k/8)(1-4u)^2/(1-4u^2) - (1/2) ln k - (1/2) ln(1-4u)
///   + ln(1-4u^2) + (1/2) ln(8/pi)
pub fn classical_ln_failure_asymptotic(u: f64, k: u64) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if !(0.0..0.25).contains(&u) {
        return Err(Error::OutsideApproximationDomain(format!(
            "requires 0 <= u < 1/4, got u = {u}"
        )));
    }
    let k = k as f64;
    let a = 1.0 - 4.0 * u;
    let b = 1.0 - 4.0 * u * u;
    Ok(-(k / 8.0) * a * a / b - 0.5 * k.ln() - 0.5 * a.ln() + b.ln()
        + 0.5 * (8.0 / std::f64::consts::PI).ln())
}
