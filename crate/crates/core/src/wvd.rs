//! Van Dam approximate oracle interrogation: amplitude profile, exact
//! output distribution, moment kernels, estimator statistics, the shifted
//! inference band, and failure probabilities.

use crate::krawtchouk::KrawtchoukTable;
use crate::numeric::{ln_binomial, ln_erfc, log_add_exp, signed_log_sum};
use crate::oracle::{ProblemInstance, PromiseCase};
use crate::{Error, Result};
use std::f64::consts::LN_2;

/// Hamming-weight amplitudes of the interrogation start state: uniform
/// weight on the window k - floor(sqrt(k)) + 1 <= j <= k, zero elsewhere.
///
/// For perfect-square `k` the window holds exactly sqrt(k) entries of value
/// k^{-1/4}, which is unit norm on its own; otherwise the uniform window is
/// renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeProfile {
    k: u64,
    window_lo: u64,
    weight: f64,
}

impl AmplitudeProfile {
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Inclusive window of supported Hamming weights.
    pub fn window(&self) -> (u64, u64) {
        (self.window_lo, self.k)
    }

    /// alpha_j.
    pub fn alpha(&self, j: u64) -> f64 {
        if j >= self.window_lo && j <= self.k {
            self.weight
        } else {
            0.0
        }
    }

    /// Number of nonzero entries.
    pub fn support_len(&self) -> u64 {
        self.k - self.window_lo + 1
    }
}

pub fn amplitude_profile(k: u64) -> Result<AmplitudeProfile> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let w = k.isqrt();
    Ok(AmplitudeProfile {
        k,
        window_lo: k - w + 1,
        weight: 1.0 / (w as f64).sqrt(),
    })
}

/// Three-band kernel for the first moment of t:
/// (N/2) delta_ij - (1/2) sqrt(i(N-i+1)) delta_{i,j+1}
///                - (1/2) sqrt((i+1)(N-i)) delta_{i,j-1}.
pub fn moment_kernel_1(i: u64, j: u64, big_n: u64) -> f64 {
    let n = big_n as f64;
    let (fi, _fj) = (i as f64, j as f64);
    if i == j {
        n / 2.0
    } else if i == j + 1 {
        -0.5 * (fi * (n - fi + 1.0)).sqrt()
    } else if i + 1 == j {
        -0.5 * ((fi + 1.0) * (n - fi)).sqrt()
    } else {
        0.0
    }
}

/// Five-band kernel for the second moment of t.
pub fn moment_kernel_2(i: u64, j: u64, big_n: u64) -> f64 {
    let n = big_n as f64;
    let fi = i as f64;
    if i == j {
        0.25 * ((fi + 1.0) * (n - fi) + fi * (n - fi + 1.0) + n * n)
    } else if i == j + 1 {
        -0.5 * n * (fi * (n - fi + 1.0)).sqrt()
    } else if i + 1 == j {
        -0.5 * n * ((fi + 1.0) * (n - fi)).sqrt()
    } else if i + 2 == j {
        0.25 * ((n - fi) * (n - fi - 1.0) * (fi + 1.0) * (fi + 2.0)).sqrt()
    } else if i == j + 2 {
        0.25 * ((n - fi + 2.0) * (n - fi + 1.0) * (fi - 1.0) * fi).sqrt()
    } else {
        0.0
    }
}

/// Exact distribution of the number of incorrect bits t = 0..N in the
/// measured string after k queries.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCountDistribution {
    big_n: u64,
    k: u64,
    probs: Vec<f64>,
}

impl ErrorCountDistribution {
    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, t: u64) -> f64 {
        self.probs[t as usize]
    }

    /// Wraps an externally computed distribution (e.g. the statevector
    /// oracle), enforcing the same non-negativity and normalization
    /// invariants as the analytic constructor.
    pub fn from_probs(big_n: u64, k: u64, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != big_n as usize + 1 {
            return Err(Error::InvalidParameter(format!(
                "expected N + 1 = {} probabilities, got {}",
                big_n + 1,
                probs.len()
            )));
        }
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::InvariantViolation(
                "negative probability in error-count distribution".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvariantViolation(format!(
                "error-count distribution sums to {total}, off by {:e}",
                total - 1.0
            )));
        }
        Ok(Self { big_n, k, probs })
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(t, p)| t as f64 * p)
            .sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(t, p)| (t as f64) * (t as f64) * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    /// L1 distance to another distribution over the same support.
    pub fn l1_distance(&self, other: &ErrorCountDistribution) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// P(t | N, k) via the bilinear Krawtchouk form, collapsed to a perfect
/// square:
///
/// P(t) = 2^{-N} C(N,t) [ sum_j alpha_j K_j(t;N) / sqrt(C(N,j)) ]^2
///
/// Krawtchouk values are exact integers; binomials enter in log scale so
/// the evaluation is safe at large N. The result must sum to 1 within 1e-9
/// or an invariant violation is reported (it is never renormalized).
pub fn error_count_distribution(big_n: u64, k: u64) -> Result<ErrorCountDistribution> {
    if big_n < 1 || k < 1 || k > big_n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= N, got k = {k}, N = {big_n}"
        )));
    }
    let profile = amplitude_profile(k)?;
    let (j_lo, j_hi) = profile.window();
    let table = KrawtchoukTable::build_up_to(big_n, j_hi);
    let ln_weight = profile.alpha(j_hi).ln();
    let half_ln_binom: Vec<f64> = (j_lo..=j_hi)
        .map(|j| 0.5 * ln_binomial(big_n, j))
        .collect();

    let mut probs = Vec::with_capacity(big_n as usize + 1);
    let mut terms: Vec<(f64, i8)> = Vec::with_capacity(profile.support_len() as usize);
    for t in 0..=big_n {
        terms.clear();
        for j in j_lo..=j_hi {
            let (ln_k, sign) = table.ln_value(j, t);
            terms.push((ln_weight + ln_k - half_ln_binom[(j - j_lo) as usize], sign));
        }
        let (ln_s, sign) = signed_log_sum(&terms);
        if sign == 0 {
            probs.push(0.0);
        } else {
            let ln_p = ln_binomial(big_n, t) - big_n as f64 * LN_2 + 2.0 * ln_s;
            probs.push(ln_p.exp());
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvariantViolation(format!(
            "error-count distribution sums to {total}, off by {:e}",
            total - 1.0
        )));
    }
    Ok(ErrorCountDistribution {
        big_n,
        k,
        probs,
    })
}

/// Exact rational P(t) for query budgets whose window is a single Hamming
/// weight (floor(sqrt(k)) = 1): P(t) = C(N,t) K_k(t)^2 / (2^N C(N,k)).
pub fn error_count_distribution_exact_single(
    big_n: u64,
    k: u64,
) -> Result<Vec<num_rational::BigRational>> {
    let profile = amplitude_profile(k)?;
    if profile.support_len() != 1 {
        return Err(Error::InvalidParameter(format!(
            "exact rational form needs a single-weight window; k = {k} has {}",
            profile.support_len()
        )));
    }
    let table = KrawtchoukTable::build_up_to(big_n, k);
    let denom = (num_bigint::BigInt::from(1) << big_n) * crate::numeric::binomial(big_n, k);
    Ok((0..=big_n)
        .map(|t| {
            let kv = table.value(k, t);
            num_rational::BigRational::new(
                crate::numeric::binomial(big_n, t) * kv * kv,
                denom.clone(),
            )
        })
        .collect())
}

/// First and second moments of t as bilinear forms of the profile against
/// the band kernels; exact up to f64 rounding.
pub fn moments_of_t(big_n: u64, _k: u64, profile: &AmplitudeProfile) -> (f64, f64) {
    let (lo, hi) = profile.window();
    let mut e1 = 0.0;
    let mut e2 = 0.0;
    for i in lo..=hi {
        let ai = profile.alpha(i);
        let j_from = i.saturating_sub(2).max(lo);
        for j in j_from..=(i + 2).min(hi) {
            let aj = profile.alpha(j);
            e1 += ai * aj * moment_kernel_1(i, j, big_n);
            e2 += ai * aj * moment_kernel_2(i, j, big_n);
        }
    }
    (e1, e2 - e1 * e1)
}

/// Optimal expected number of correct bits, N/2 + sqrt(k(N-k)).
pub fn expected_correct_bits(big_n: u64, k: u64) -> f64 {
    big_n as f64 / 2.0 + ((k * (big_n - k)) as f64).sqrt()
}

/// Mean and variance of the observed zero count m0 for one promise case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseStats {
    pub mu: f64,
    pub var: f64,
    pub case: PromiseCase,
}

/// The printed per-case mean and variance of m0.
pub fn case_stats(inst: &ProblemInstance, k: u64, case: PromiseCase) -> Result<CaseStats> {
    let n = inst.big_n();
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "k must be <= N, got k = {k}, N = {n}"
        )));
    }
    let nf = n as f64;
    let u = inst.u();
    let s = ((k as f64 / nf) * (1.0 - k as f64 / nf)).sqrt();
    let bias = match case {
        PromiseCase::BalancedExcessZeros => 2.0 * u,
        PromiseCase::BalancedExcessOnes => -2.0 * u,
        PromiseCase::ConstantZeroBase => 1.0 - 2.0 * u,
        PromiseCase::ConstantOneBase => -(1.0 - 2.0 * u),
    };
    let mu = nf * (0.5 + bias * s);
    let var = if case.is_balanced() {
        nf * (1.0 - 4.0 * u * u) * (0.5 + s)
    } else {
        nf * (4.0 * u) * (1.0 - u) * (0.5 + s)
    };
    Ok(CaseStats { mu, var, case })
}

/// Decision band half-width, in units of sqrt((k/N)(1 - k/N)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InferenceRule {
    pub alpha_threshold: f64,
}

impl InferenceRule {
    pub fn new(alpha_threshold: f64) -> Result<Self> {
        if !(alpha_threshold >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold must be non-negative, got {alpha_threshold}"
            )));
        }
        Ok(Self { alpha_threshold })
    }

    /// Rule with the asymptotically optimal threshold for weakening u.
    pub fn optimal(u: f64) -> Self {
        Self {
            alpha_threshold: optimal_alpha(u),
        }
    }
}

/// Threshold that minimises the failure probability in the large-(k, N)
/// limit: alpha = 1 + 2u - 4u^2 - 2 sqrt(u(1-u)(1-4u^2)).
pub fn optimal_alpha(u: f64) -> f64 {
    1.0 + 2.0 * u - 4.0 * u * u - 2.0 * (u * (1.0 - u) * (1.0 - 4.0 * u * u)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Balanced,
    Constant,
}

/// Inference from the observed zero count: strictly inside the band
/// |m0/N - 1/2| < alpha sqrt((k/N)(1 - k/N)) infers balanced; the boundary
/// and everything outside infer constant.
pub fn infer(m0: u64, big_n: u64, k: u64, rule: &InferenceRule) -> Decision {
    let s = ((k as f64 / big_n as f64) * (1.0 - k as f64 / big_n as f64)).sqrt();
    // Compare |2 m0 - N| < 2 alpha s N to avoid an avoidable division.
    let dev = (2.0 * m0 as f64 - big_n as f64).abs();
    if dev < 2.0 * rule.alpha_threshold * s * big_n as f64 {
        Decision::Balanced
    } else {
        Decision::Constant
    }
}

/// Geometry factor f(N,k)^2 = (1 - k/N) / (1 + 2 sqrt((k/N)(1 - k/N))).
pub fn geometry_factor_sq(big_n: u64, k: u64) -> f64 {
    let r = k as f64 / big_n as f64;
    (1.0 - r) / (1.0 + 2.0 * (r * (1.0 - r)).sqrt())
}

fn erf_arguments(inst: &ProblemInstance, k: u64, rule: &InferenceRule) -> Result<(f64, f64)> {
    let n = inst.big_n();
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= N, got k = {k}, N = {n}"
        )));
    }
    let u = inst.u();
    if u >= 0.5 {
        return Err(Error::OutsideApproximationDomain(
            "u = 1/2: balanced-side variance vanishes".into(),
        ));
    }
    let a = rule.alpha_threshold;
    let f = geometry_factor_sq(n, k).sqrt();
    let sk = (k as f64).sqrt();
    let bal = sk * (a - 2.0 * u) / (1.0 - 4.0 * u * u).sqrt() * f;
    // Constant branch: distance from the case mean (1-2u)sN to the band
    // edge alpha sN, normalized by sigma_2. At u = 0 that variance is zero
    // and only the balanced term survives (degenerate constant branch).
    let con = if u == 0.0 {
        f64::INFINITY
    } else {
        sk * (1.0 - a - 2.0 * u) / (4.0 * u * (1.0 - u)).sqrt() * f
    };
    Ok((bal, con))
}

/// Central-limit failure probability of the interrogation algorithm with
/// the band rule:
///
/// P_fail = (1/4) [ erfc(sqrt(k) f (alpha - 2u) / sqrt(1 - 4u^2))
///                + erfc(sqrt(k) f (1 - alpha - 2u) / sqrt(4u(1-u))) ]
///
/// For u = 0 the constant branch is degenerate (sigma_2 = 0, a constant
/// string sits exactly on the band edge scaled by 1) and the single-term
/// balanced limit (1/4) erfc(sqrt(k) alpha f) is returned.
pub fn wvd_failure(inst: &ProblemInstance, k: u64, rule: &InferenceRule) -> Result<f64> {
    let (bal, con) = erf_arguments(inst, k, rule)?;
    let erfc = statrs::function::erf::erfc;
    if con.is_infinite() {
        return Ok(0.25 * erfc(bal));
    }
    Ok(0.25 * (erfc(bal) + erfc(con)))
}

/// ln of [`wvd_failure`], finite far past the f64 underflow point.
pub fn wvd_ln_failure(inst: &ProblemInstance, k: u64, rule: &InferenceRule) -> Result<f64> {
    let (bal, con) = erf_arguments(inst, k, rule)?;
    let quarter = -(4.0f64.ln());
    if con.is_infinite() {
        return Ok(ln_erfc(bal) + quarter);
    }
    Ok(log_add_exp(ln_erfc(bal), ln_erfc(con)) + quarter)
}

/// ln P_fail ~ -k (alpha - 2u)^2 / (1 - 4u^2) f(N,k)^2 with the optimal
/// threshold; the O(ln k) correction is omitted.
pub fn wvd_ln_failure_asymptotic(u: f64, k: u64, big_n: u64) -> Result<f64> {
    if !(u > 0.0 && u < 0.5) {
        return Err(Error::OutsideApproximationDomain(format!(
            "requires 0 < u < 1/2, got u = {u}"
        )));
    }
    if k < 1 || k > big_n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= N, got k = {k}, N = {big_n}"
        )));
    }
    let a = optimal_alpha(u);
    Ok(-(k as f64) * (a - 2.0 * u) * (a - 2.0 * u) / (1.0 - 4.0 * u * u)
        * geometry_factor_sq(big_n, k))
}

/// Exact failure probability of the reduced sampling model the appendix
/// works in: t is drawn from [`error_count_distribution`], the m = N - t
/// correct bits land at uniformly random positions, m0* ~ Binomial(m, N0/N)
/// of the zeros are recovered, and m0 = N - N0 - m + 2 m0* feeds [`infer`].
///
/// This is the analytic counterpart of `montecarlo::simulate_wvd`, free of
/// the central-limit approximation in [`wvd_failure`].
pub fn wvd_failure_reduced_model(
    inst: &ProblemInstance,
    k: u64,
    rule: &InferenceRule,
) -> Result<f64> {
    let dist = error_count_distribution(inst.big_n(), k)?;
    wvd_failure_reduced_model_with(inst, &dist, rule)
}

/// Same as [`wvd_failure_reduced_model`] with a precomputed distribution.
pub fn wvd_failure_reduced_model_with(
    inst: &ProblemInstance,
    dist: &ErrorCountDistribution,
    rule: &InferenceRule,
) -> Result<f64> {
    let n = inst.big_n();
    if dist.big_n() != n {
        return Err(Error::InvalidParameter(
            "distribution was built for a different N".into(),
        ));
    }
    let k = dist.k();
    let s = ((k as f64 / n as f64) * (1.0 - k as f64 / n as f64)).sqrt();
    let band = rule.alpha_threshold * s * n as f64;
    let p = inst.p();
    let mut total = 0.0;
    for case in PromiseCase::ALL {
        let weight = if case.is_balanced() {
            p / 2.0
        } else {
            (1.0 - p) / 2.0
        };
        if weight == 0.0 {
            continue;
        }
        let n0 = case.zero_count(inst);
        let mut wrong = 0.0;
        for (t, &pt) in dist.probs().iter().enumerate() {
            if pt == 0.0 {
                continue;
            }
            let m = n - t as u64;
            let p_bal = prob_balanced_decision(n, n0, m, band);
            let w = if case.is_balanced() { 1.0 - p_bal } else { p_bal };
            wrong += pt * w;
        }
        total += weight * wrong;
    }
    Ok(total)
}

/// P(infer balanced) when m of N bits are correct and the string has n0
/// zeros: sums the Binomial(m, n0/N) mass of the m0* values whose
/// reconstructed m0 = N - n0 - m + 2 m0* lies strictly inside the band
/// |m0 - N/2| < band.
fn prob_balanced_decision(n: u64, n0: u64, m: u64, band: f64) -> f64 {
    let base = n as f64 - n0 as f64 - m as f64;
    let center = n as f64 / 2.0;
    // base + 2x in (center - band, center + band), strictly.
    let lo_real = (center - band - base) / 2.0;
    let hi_real = (center + band - base) / 2.0;
    // Smallest integer strictly above lo_real and largest strictly below
    // hi_real; floor(x)+1 / ceil(x)-1 handle the exact-boundary tie rule.
    let x_min = (lo_real.floor() as i64 + 1).max(0);
    let x_max = (hi_real.ceil() as i64 - 1).min(m as i64);
    if x_min > x_max {
        return 0.0;
    }
    let p0 = n0 as f64 / n as f64;
    if p0 == 0.0 {
        return if x_min == 0 { 1.0 } else { 0.0 };
    }
    if p0 == 1.0 {
        return if x_min <= m as i64 && m as i64 <= x_max {
            1.0
        } else {
            0.0
        };
    }
    let (ln_p0, ln_q0) = (p0.ln(), (1.0 - p0).ln());
    let mut acc = 0.0;
    for x in x_min..=x_max {
        let xf = x as u64;
        let ln_pmf =
            ln_binomial(m, xf) + xf as f64 * ln_p0 + (m - xf) as f64 * ln_q0;
        acc += ln_pmf.exp();
    }
    acc.min(1.0)
}

/// Golden-section minimization of ln P_fail over the threshold; used to
/// confirm that [`optimal_alpha`] is the stationary point.
pub fn minimize_wvd_failure_threshold(inst: &ProblemInstance, k: u64) -> Result<f64> {
    let u = inst.u();
    let mut lo = 2.0 * u + 1e-9;
    let mut hi = 1.0;
    let obj = |a: f64| -> f64 {
        wvd_ln_failure(inst, k, &InferenceRule { alpha_threshold: a })
            .unwrap_or(f64::INFINITY)
    };
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = obj(c);
    let mut fd = obj(d);
    for _ in 0..200 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = obj(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = obj(d);
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::binomial;
    use approx::assert_relative_eq;
    use num_traits::ToPrimitive;

    #[test]
    fn profile_windows() {
        let p4 = amplitude_profile(4).unwrap();
        assert_eq!(p4.window(), (3, 4));
        assert_relative_eq!(p4.alpha(3), 1.0 / 2f64.sqrt());
        assert_relative_eq!(p4.alpha(4), 1.0 / 2f64.sqrt());
        assert_eq!(p4.alpha(2), 0.0);

        let p9 = amplitude_profile(9).unwrap();
        assert_eq!(p9.window(), (7, 9));
        for j in 7..=9 {
            assert_relative_eq!(p9.alpha(j), 1.0 / 3f64.sqrt());
        }

        let p1 = amplitude_profile(1).unwrap();
        assert_eq!(p1.window(), (1, 1));
        assert_relative_eq!(p1.alpha(1), 1.0);

        // Non-square k: floored window, renormalized.
        let p10 = amplitude_profile(10).unwrap();
        assert_eq!(p10.window(), (8, 10));
        let norm: f64 = (0..=10).map(|j| p10.alpha(j).powi(2)).sum();
        assert_relative_eq!(norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn kernel_examples() {
        assert_relative_eq!(moment_kernel_1(3, 3, 8), 4.0);
        assert_relative_eq!(moment_kernel_1(4, 3, 8), -0.5 * 20f64.sqrt());
        assert_eq!(moment_kernel_1(1, 4, 8), 0.0);

        assert_relative_eq!(moment_kernel_2(0, 0, 8), 18.0);
        assert_eq!(moment_kernel_2(0, 5, 8), 0.0);
    }

    /// Direct-sum definition of the moment kernels through exact Krawtchouk
    /// values: beta^{(n)}_ij = sum_t t^n 2^{-N} C(N,t) K_i K_j /
    /// sqrt(C(N,i) C(N,j)).
    fn kernel_direct(pow: u32, i: u64, j: u64, big_n: u64) -> f64 {
        let table = KrawtchoukTable::build(big_n);
        let mut acc = 0.0;
        for t in 0..=big_n {
            let term = binomial(big_n, t)
                * table.value(i, t)
                * table.value(j, t);
            acc += (t as f64).powi(pow as i32) * term.to_f64().unwrap();
        }
        acc / 2f64.powi(big_n as i32)
            / (binomial(big_n, i).to_f64().unwrap()
                * binomial(big_n, j).to_f64().unwrap())
            .sqrt()
    }

    #[test]
    fn kernels_match_direct_sums() {
        for big_n in [6u64, 8] {
            for i in 0..=big_n {
                for j in 0..=big_n {
                    let d1 = kernel_direct(1, i, j, big_n);
                    let d2 = kernel_direct(2, i, j, big_n);
                    assert_relative_eq!(
                        moment_kernel_1(i, j, big_n),
                        d1,
                        epsilon = 1e-9,
                        max_relative = 1e-9
                    );
                    assert_relative_eq!(
                        moment_kernel_2(i, j, big_n),
                        d2,
                        epsilon = 1e-9,
                        max_relative = 1e-9
                    );
                }
            }
        }
    }

    #[test]
    fn distribution_closed_form_n8_k1() {
        let dist = error_count_distribution(8, 1).unwrap();
        for t in 0..=8u64 {
            let expect = binomial(8, t).to_f64().unwrap()
                * ((8.0 - 2.0 * t as f64).powi(2))
                / (256.0 * 8.0);
            assert_relative_eq!(dist.prob(t), expect, epsilon = 1e-14);
        }
        let exact = error_count_distribution_exact_single(8, 1).unwrap();
        for t in 0..=8usize {
            assert_relative_eq!(
                dist.prob(t as u64),
                exact[t].to_f64().unwrap(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn distribution_normalizes_on_grid() {
        for big_n in [8u64, 16, 32, 64, 128] {
            for k in [1u64, 4, 9, 16] {
                if k > big_n {
                    continue;
                }
                let dist = error_count_distribution(big_n, k).unwrap();
                assert!(dist.probs().iter().all(|&p| p >= 0.0));
                let total: f64 = dist.probs().iter().sum();
                assert!((total - 1.0).abs() <= 1e-9, "N={big_n} k={k}: {total}");
            }
        }
    }

    #[test]
    fn moments_match_distribution() {
        for (big_n, k) in [(16u64, 4u64), (64, 16), (8, 1)] {
            let dist = error_count_distribution(big_n, k).unwrap();
            let profile = amplitude_profile(k).unwrap();
            let (e1, var) = moments_of_t(big_n, k, &profile);
            assert_relative_eq!(e1, dist.mean(), max_relative = 1e-9);
            assert_relative_eq!(
                var,
                dist.variance(),
                epsilon = 1e-6,
                max_relative = 1e-6
            );
        }
        // Single-j profile: E(t) = N/2 exactly (diagonal kernel only).
        let p1 = amplitude_profile(1).unwrap();
        let (e1, _) = moments_of_t(8, 1, &p1);
        assert_relative_eq!(e1, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn expected_correct_bits_examples() {
        assert_relative_eq!(
            expected_correct_bits(4096, 64),
            2048.0 + 258048f64.sqrt(),
            epsilon = 1e-9
        );
        assert_relative_eq!(expected_correct_bits(64, 32), 64.0);
    }

    #[test]
    fn mean_tracks_expected_correct_bits() {
        // E(m) = N - E(t) approaches N/2 + sqrt(k(N-k)) within 2 sqrt(N).
        let big_n = 1024u64;
        for k in [16u64, 64, 256] {
            let profile = amplitude_profile(k).unwrap();
            let (e_t, var) = moments_of_t(big_n, k, &profile);
            let e_m = big_n as f64 - e_t;
            let dev = (e_m - expected_correct_bits(big_n, k)).abs();
            assert!(dev <= 2.0 * (big_n as f64).sqrt(), "k={k}: dev={dev}");
            // The sharp-edged uniform window carries sinc-like sidelobes,
            // so Var(t) grows like N sqrt(k) (about 0.7 N sqrt(k) in
            // practice) rather than staying O(N). It is still o(N^2).
            assert!(
                var <= big_n as f64 * (k as f64).sqrt(),
                "k={k}: var={var}"
            );
            assert!(var >= 0.0);
        }
    }

    #[test]
    fn case_stats_examples() {
        let inst = ProblemInstance::new(12, 0, 0.5).unwrap();
        for case in PromiseCase::ALL {
            let st = case_stats(&inst, 64, case).unwrap();
            if case.is_balanced() {
                assert_relative_eq!(st.mu, 2048.0);
            } else {
                assert_relative_eq!(st.var, 0.0);
            }
        }
        let inst = ProblemInstance::new(12, 205, 0.5).unwrap();
        let st = case_stats(&inst, 64, PromiseCase::ConstantZeroBase).unwrap();
        let s = ((64.0f64 / 4096.0) * (1.0 - 64.0 / 4096.0)).sqrt();
        assert_relative_eq!(
            st.mu,
            4096.0 * (0.5 + (1.0 - 410.0 / 4096.0) * s),
            max_relative = 1e-12
        );
    }

    #[test]
    fn optimal_alpha_values() {
        assert_relative_eq!(optimal_alpha(0.0), 1.0);
        // 1 + 1/2 - 1/4 - 2 sqrt((1/4)(3/4)(3/4)) = 5/4 - 3/4 = 1/2.
        assert_relative_eq!(optimal_alpha(0.25), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn optimal_alpha_is_argmin() {
        let inst = ProblemInstance::new(16, (0.05f64 * 65536.0) as u64, 0.5).unwrap();
        let found = minimize_wvd_failure_threshold(&inst, 256).unwrap();
        assert!(
            (found - optimal_alpha(inst.u())).abs() <= 1e-3,
            "found {found}, expected {}",
            optimal_alpha(inst.u())
        );
    }

    #[test]
    fn infer_band_examples() {
        let rule = InferenceRule::new(0.5).unwrap();
        assert_eq!(infer(2048, 4096, 64, &rule), Decision::Balanced);
        assert_eq!(infer(4096, 4096, 64, &rule), Decision::Constant);
        assert_eq!(infer(0, 4096, 64, &rule), Decision::Constant);
        // Exact boundary ties go to Constant: N=16, k=4, s=sqrt(3)/4;
        // alpha chosen so the band edge is the integer 12.
        let s = (0.25f64 * 0.75).sqrt();
        let alpha = (12.0 / 16.0 - 0.5) / s;
        let tie = InferenceRule::new(alpha).unwrap();
        assert_eq!(infer(12, 16, 4, &tie), Decision::Constant);
        assert_eq!(infer(11, 16, 4, &tie), Decision::Balanced);
    }

    #[test]
    fn failure_probability_shapes() {
        let inst = ProblemInstance::new(16, 3277, 0.5).unwrap(); // u ~ 0.05
        let rule = InferenceRule::optimal(inst.u());
        let p = wvd_failure(&inst, 256, &rule).unwrap();
        assert!(p > 0.0 && p < 0.5);
        let lnp = wvd_ln_failure(&inst, 256, &rule).unwrap();
        assert_relative_eq!(lnp, p.ln(), max_relative = 1e-10);

        // Band edge at the balanced mean: balanced branch erfc(0) = 1.
        let edge = InferenceRule::new(2.0 * inst.u()).unwrap();
        let p_edge = wvd_failure(&inst, 256, &edge).unwrap();
        assert!(p_edge >= 0.25 && p_edge <= 0.5);

        // Degenerate u = 0: single-term limit.
        let exact0 = ProblemInstance::new(8, 0, 0.5).unwrap();
        let r1 = InferenceRule::new(1.0).unwrap();
        let f = geometry_factor_sq(256, 16).sqrt();
        let expect = 0.25 * statrs::function::erf::erfc(4.0 * f);
        assert_relative_eq!(
            wvd_failure(&exact0, 16, &r1).unwrap(),
            expect,
            max_relative = 1e-12
        );
    }

    #[test]
    fn asymptotic_matches_leading_coefficient() {
        let u = 0.05;
        let a = optimal_alpha(u);
        let f2 = geometry_factor_sq(1 << 16, 256);
        let expect = -256.0 * (a - 0.1) * (a - 0.1) / (1.0 - 0.01) * f2;
        assert_relative_eq!(
            wvd_ln_failure_asymptotic(u, 256, 1 << 16).unwrap(),
            expect,
            max_relative = 1e-12
        );
        // Linear in k at fixed u and N/k ratio.
        let l1 = wvd_ln_failure_asymptotic(u, 100, 10000).unwrap();
        let l2 = wvd_ln_failure_asymptotic(u, 300, 30000).unwrap();
        assert_relative_eq!(l2, 3.0 * l1, max_relative = 1e-12);
    }

    #[test]
    fn reduced_model_dominated_by_window_tails() {
        // The central-limit failure formula only sees the main lobe of
        // P(t). The sharp window edges leave roughly 0.3/sqrt(k) of the
        // mass in far sidelobes (e.g. beyond t = N/2), and those draws
        // misclassify about half the time, so the exact reduced-model
        // failure sits orders of magnitude above the erf estimate once
        // the main-lobe contribution is tiny.
        let inst = ProblemInstance::new(12, 205, 0.5).unwrap();
        let rule = InferenceRule::optimal(inst.u());
        let exact = wvd_failure_reduced_model(&inst, 64, &rule).unwrap();
        let clt = wvd_failure(&inst, 64, &rule).unwrap();
        assert!(clt < 1e-6, "main-lobe estimate should be tiny, got {clt}");
        assert!(
            exact > 0.01 && exact < 0.1,
            "tail-dominated failure expected near 0.04, got {exact}"
        );
        // Sidelobe mass shrinks with k, and so does the exact failure.
        let exact_k256 = wvd_failure_reduced_model(&inst, 256, &rule).unwrap();
        assert!(exact_k256 < exact, "k=256: {exact_k256} vs k=64: {exact}");
    }
}
