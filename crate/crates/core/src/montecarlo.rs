//! Independent statistical oracles: empirical simulation of all three
//! algorithms under the weakened promise, and a full statevector
//! simulation of the interrogation circuit at tiny N.
//!
//! Reproducibility contract: every trial owns a counter-based RNG stream
//! derived from (seed, trial index), so results are bitwise identical
//! regardless of how trials are distributed across threads.

use crate::classical::{balanced_window, SamplingModel};
use crate::oracle::{ProblemInstance, PromiseCase};
use crate::wvd::{
    amplitude_profile, error_count_distribution, infer, Decision, ErrorCountDistribution,
    InferenceRule,
};
use crate::{Error, Result};
use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Hypergeometric};
use rayon::prelude::*;

/// Outcome of a Monte Carlo run with its Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialReport {
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl TrialReport {
    fn from_counts(trials: u64, failures: u64, seed: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(failures, trials);
        Self {
            trials,
            failures,
            rate: failures as f64 / trials as f64,
            ci_low,
            ci_high,
            seed,
        }
    }

    /// Binomial standard error of the rate.
    pub fn standard_error(&self) -> f64 {
        (self.rate * (1.0 - self.rate) / self.trials as f64).sqrt()
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// How simulate_wvd obtains the number of incorrect bits per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WvdSamplingMode {
    /// Draw t from the exact error-count distribution.
    SampledT,
    /// Fix t at round(N/2 - sqrt(k(N-k))), the variance ~ 0 shortcut.
    FixedM,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-trial stream: same (seed, index) always yields the same generator.
fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

/// Draw a promise case: balanced with probability p (sub-variants uniform).
fn draw_case(rng: &mut ChaCha8Rng, p: f64) -> PromiseCase {
    let balanced = rng.gen::<f64>() < p;
    let first: bool = rng.gen();
    match (balanced, first) {
        (true, true) => PromiseCase::BalancedExcessZeros,
        (true, false) => PromiseCase::BalancedExcessOnes,
        (false, true) => PromiseCase::ConstantZeroBase,
        (false, false) => PromiseCase::ConstantOneBase,
    }
}

fn count_failures<F>(trials: u64, seed: u64, trial_fails: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            u64::from(trial_fails(&mut rng))
        })
        .sum()
}

fn draw_binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("valid binomial parameters").sample(rng)
}

/// Empirical failure rate of the k-query majority-vote Deutsch-Jozsa test.
///
/// Each trial draws one oracle per the prior, computes the exact
/// single-query outcome probability from the zero count, draws the number
/// of wrong queries binomially (the k queries are i.i.d. given the
/// oracle), and fails when wrong votes reach at least half of k (ties are
/// failures, matching the analytic majority sum).
pub fn simulate_dj(inst: &ProblemInstance, k: u64, trials: u64, seed: u64) -> Result<TrialReport> {
    if k < 1 || trials < 1 {
        return Err(Error::InvalidParameter(
            "k and trials must be >= 1".into(),
        ));
    }
    let big_n = inst.big_n() as f64;
    let p = inst.p();
    let inst = *inst;
    let failures = count_failures(trials, seed, move |rng| {
        let case = draw_case(rng, p);
        let n0 = case.zero_count(&inst) as f64;
        // P(measure all-zeros) = ((n0 - n1)/N)^2; all-zeros infers constant.
        let q0 = ((2.0 * n0 - big_n) / big_n).powi(2);
        let per_query_error = if case.is_balanced() { q0 } else { 1.0 - q0 };
        let wrong = draw_binomial(rng, k, per_query_error);
        2 * wrong >= k
    });
    Ok(TrialReport::from_counts(trials, failures, seed))
}

/// Empirical failure rate of the classical proportion test: sample k
/// positions (per the model), count zeros k0, decide balanced iff
/// ceil(k/4) <= k0 <= floor(3k/4).
pub fn simulate_classical(
    inst: &ProblemInstance,
    k: u64,
    model: SamplingModel,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    if k < 1 || trials < 1 {
        return Err(Error::InvalidParameter(
            "k and trials must be >= 1".into(),
        ));
    }
    let big_n = inst.big_n();
    if model == SamplingModel::WithoutReplacement && k > big_n {
        return Err(Error::InvalidParameter(format!(
            "without replacement requires k <= N, got k = {k}, N = {big_n}"
        )));
    }
    let (win_lo, win_hi) = balanced_window(k);
    let p = inst.p();
    let inst = *inst;
    let failures = count_failures(trials, seed, move |rng| {
        let case = draw_case(rng, p);
        let n0 = case.zero_count(&inst);
        let k0 = match model {
            SamplingModel::WithReplacement => {
                draw_binomial(rng, k, n0 as f64 / big_n as f64)
            }
            SamplingModel::WithoutReplacement => Hypergeometric::new(big_n, n0, k)
                .expect("valid hypergeometric parameters")
                .sample(rng),
        };
        let said_balanced = k0 >= win_lo && k0 <= win_hi;
        said_balanced != case.is_balanced()
    });
    Ok(TrialReport::from_counts(trials, failures, seed))
}

/// Empirical failure rate of the interrogation algorithm in the reduced
/// sampling model: draw t (the number of incorrect bits), place the
/// m = N - t correct bits at random (m0* ~ Binomial(m, N0/N) recovered
/// zeros), reconstruct m0 = N - N0 - m + 2 m0*, and apply the band rule.
pub fn simulate_wvd(
    inst: &ProblemInstance,
    k: u64,
    rule: &InferenceRule,
    mode: WvdSamplingMode,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    let big_n = inst.big_n();
    if k < 1 || k > big_n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= N, got k = {k}, N = {big_n}"
        )));
    }
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let cdf: Option<Vec<f64>> = match mode {
        WvdSamplingMode::SampledT => {
            let dist = error_count_distribution(big_n, k)?;
            let mut acc = 0.0;
            Some(
                dist.probs()
                    .iter()
                    .map(|&p| {
                        acc += p;
                        acc
                    })
                    .collect(),
            )
        }
        WvdSamplingMode::FixedM => None,
    };
    let fixed_t = (big_n as f64 / 2.0 - ((k * (big_n - k)) as f64).sqrt()).round() as u64;
    let p = inst.p();
    let rule = *rule;
    let inst = *inst;
    let failures = count_failures(trials, seed, move |rng| {
        let case = draw_case(rng, p);
        let n0 = case.zero_count(&inst);
        let t = match &cdf {
            Some(cdf) => {
                let x: f64 = rng.gen();
                cdf.partition_point(|&c| c < x) as u64
            }
            None => fixed_t,
        };
        let m = big_n - t.min(big_n);
        let m0_star = draw_binomial(rng, m, n0 as f64 / big_n as f64);
        let m0 = big_n as i64 - n0 as i64 - m as i64 + 2 * m0_star as i64;
        let m0 = m0.clamp(0, big_n as i64) as u64;
        let decision = infer(m0, big_n, k, &rule);
        let correct = if case.is_balanced() {
            decision == Decision::Balanced
        } else {
            decision == Decision::Constant
        };
        !correct
    });
    Ok(TrialReport::from_counts(trials, failures, seed))
}

/// Full statevector simulation of the interrogation circuit for tiny N:
/// prepare the Hamming-weight-windowed start state over all 2^N strings,
/// apply the oracle phase (-1)^{F.x} (phase-kickback form with the ancilla
/// eliminated), Hadamard-transform, and histogram the Hamming distance of
/// the measured string to F.
///
/// The result is independent of F; this is asserted against a second,
/// pseudorandom F.
pub fn statevector_wvd_distribution(big_n: u64, k: u64) -> Result<ErrorCountDistribution> {
    if big_n > 16 {
        return Err(Error::InvalidParameter(format!(
            "statevector oracle is limited to N <= 16, got {big_n}"
        )));
    }
    if k < 1 || k > big_n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= N, got k = {k}, N = {big_n}"
        )));
    }
    let probs_zero = statevector_distribution_for(big_n, k, 0)?;
    // F-independence: an arbitrary second string must give the same P(t).
    let f_alt = splitmix64(big_n * 31 + k) & ((1u64 << big_n) - 1);
    let probs_alt = statevector_distribution_for(big_n, k, f_alt)?;
    let l_inf = probs_zero
        .iter()
        .zip(&probs_alt)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    if l_inf > 1e-12 {
        return Err(Error::InvariantViolation(format!(
            "statevector P(t) depends on F: max deviation {l_inf:e}"
        )));
    }
    ErrorCountDistribution::from_probs(big_n, k, probs_zero)
}

fn statevector_distribution_for(big_n: u64, k: u64, oracle_f: u64) -> Result<Vec<f64>> {
    let profile = amplitude_profile(k)?;
    let dim = 1usize << big_n;
    let mut amps = vec![0.0f64; dim];
    for (x, a) in amps.iter_mut().enumerate() {
        let w = (x as u64).count_ones() as u64;
        let alpha = profile.alpha(w);
        if alpha != 0.0 {
            let c = crate::numeric::binomial(big_n, w);
            let cf: f64 = num_traits::ToPrimitive::to_f64(&c).unwrap();
            let mut v = alpha / cf.sqrt();
            if (x as u64 & oracle_f).count_ones() % 2 == 1 {
                v = -v;
            }
            *a = v;
        }
    }
    fwht(&mut amps);
    let norm: f64 = amps.iter().map(|a| a * a).sum();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvariantViolation(format!(
            "statevector norm after transform is {norm}"
        )));
    }
    let mut probs = vec![0.0f64; big_n as usize + 1];
    for (z, a) in amps.iter().enumerate() {
        let t = (z as u64 ^ oracle_f).count_ones() as usize;
        probs[t] += a * a;
    }
    Ok(probs)
}

/// In-place fast Walsh-Hadamard transform with 1/sqrt(2) per stage.
fn fwht(data: &mut [f64]) {
    let n = data.len();
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(h * 2) {
            for i in block..block + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = (a + b) * scale;
                data[i + h] = (a - b) * scale;
            }
        }
        h *= 2;
    }
}
