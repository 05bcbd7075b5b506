//! Domain types for the weakened promise problem and generation of concrete
//! oracle strings.

use crate::{Error, Result};
use num_rational::Ratio;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest `n` for which concrete oracle strings may be generated (N = 2^24
/// bits); the analytic formulas accept larger instances.
pub const MAX_GENERATE_N_BITS: u32 = 24;

/// Parameters of one weakened-promise problem: `n` input bits, string length
/// `N = 2^n`, `y` promise weakenings (bit-flips), and the prior probability
/// `p` that the string belongs to the balanced class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemInstance {
    n: u32,
    y: u64,
    p: f64,
}

impl ProblemInstance {
    pub fn new(n: u32, y: u64, p: f64) -> Result<Self> {
        if n == 0 || n > 48 {
            return Err(Error::InvalidParameter(format!(
                "n must be in 1..=48, got {n}"
            )));
        }
        let big_n = 1u64 << n;
        if y > big_n / 2 {
            return Err(Error::InvalidParameter(format!(
                "y = {y} exceeds N/2 = {}",
                big_n / 2
            )));
        }
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "prior p must lie in [0, 1], got {p}"
            )));
        }
        Ok(Self { n, y, p })
    }

    /// Number of input bits.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// String length N = 2^n.
    pub fn big_n(&self) -> u64 {
        1u64 << self.n
    }

    /// Number of promise weakenings.
    pub fn y(&self) -> u64 {
        self.y
    }

    /// Prior probability of the balanced class.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Degree of weakening u = y/N.
    pub fn u(&self) -> f64 {
        self.y as f64 / self.big_n() as f64
    }
}

/// The four concrete ways a weakened string can deviate from the promise.
///
/// A balanced string can carry its excess on either value; a constant string
/// is `y` flips away from all-zeros or all-ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PromiseCase {
    /// Balanced class, N/2 + y zeros.
    BalancedExcessZeros,
    /// Balanced class, N/2 - y zeros.
    BalancedExcessOnes,
    /// Constant class, flipped from all-zeros: N - y zeros.
    ConstantZeroBase,
    /// Constant class, flipped from all-ones: y zeros.
    ConstantOneBase,
}

impl PromiseCase {
    pub const ALL: [PromiseCase; 4] = [
        PromiseCase::BalancedExcessZeros,
        PromiseCase::BalancedExcessOnes,
        PromiseCase::ConstantZeroBase,
        PromiseCase::ConstantOneBase,
    ];

    pub fn is_balanced(&self) -> bool {
        matches!(
            self,
            PromiseCase::BalancedExcessZeros | PromiseCase::BalancedExcessOnes
        )
    }

    /// Zero count this case forces on the string.
    pub fn zero_count(&self, inst: &ProblemInstance) -> u64 {
        let n = inst.big_n();
        let y = inst.y();
        match self {
            PromiseCase::BalancedExcessZeros => n / 2 + y,
            PromiseCase::BalancedExcessOnes => n / 2 - y,
            PromiseCase::ConstantZeroBase => n - y,
            PromiseCase::ConstantOneBase => y,
        }
    }
}

/// A concrete N-bit function table, bit-packed, with its zero count cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleString {
    words: Vec<u64>,
    len: u64,
    n0: u64,
}

impl OracleString {
    /// Builds a string from explicit bits. Mostly useful in tests; generated
    /// strings come from [`generate_oracle`].
    pub fn from_bits(bits: &[u8]) -> Self {
        let len = bits.len() as u64;
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        let mut n0 = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                words[i / 64] |= 1 << (i % 64);
            } else {
                n0 += 1;
            }
        }
        Self { words, len, n0 }
    }

    fn filled(len: u64, ones: bool) -> Self {
        let nwords = (len as usize).div_ceil(64);
        let mut words = vec![if ones { !0u64 } else { 0u64 }; nwords];
        if ones {
            // Clear bits past the end so popcounts stay honest.
            let rem = (len % 64) as u32;
            if rem != 0 {
                *words.last_mut().unwrap() &= (1u64 << rem) - 1;
            }
        }
        let n0 = if ones { 0 } else { len };
        Self { words, len, n0 }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: u64) -> u8 {
        ((self.words[(i / 64) as usize] >> (i % 64)) & 1) as u8
    }

    fn flip(&mut self, i: u64) {
        let was_one = self.bit(i) == 1;
        self.words[(i / 64) as usize] ^= 1 << (i % 64);
        if was_one {
            self.n0 += 1;
        } else {
            self.n0 -= 1;
        }
    }

    /// Count of zero entries.
    pub fn zero_count(&self) -> u64 {
        self.n0
    }

    /// Count of one entries.
    pub fn one_count(&self) -> u64 {
        self.len - self.n0
    }

    /// Amplitude of |z = 0> after the Deutsch-Jozsa network: (n0 - n1)/N.
    ///
    /// Its square is the probability of observing z = 0.
    pub fn dj_zero_amplitude(&self) -> f64 {
        let r = self.dj_zero_amplitude_exact();
        *r.numer() as f64 / *r.denom() as f64
    }

    /// The same amplitude as an exact rational (n0 - n1)/N.
    pub fn dj_zero_amplitude_exact(&self) -> Ratio<i64> {
        Ratio::new(self.n0 as i64 - self.one_count() as i64, self.len as i64)
    }
}

/// Generates a concrete oracle string for the given case.
///
/// Constant variants start from the all-zeros or all-ones string and flip
/// `y` distinct positions; balanced variants are built directly with
/// N/2 +/- y zeros at uniformly random positions, so the net imbalance is
/// exactly `y`. Deterministic for fixed `(inst, case, seed)`.
pub fn generate_oracle(
    inst: &ProblemInstance,
    case: PromiseCase,
    seed: u64,
) -> Result<OracleString> {
    if inst.n() > MAX_GENERATE_N_BITS {
        return Err(Error::InvalidParameter(format!(
            "oracle generation supports n <= {MAX_GENERATE_N_BITS}, got {}",
            inst.n()
        )));
    }
    let n = inst.big_n();
    let y = inst.y();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = match case {
        PromiseCase::ConstantZeroBase | PromiseCase::ConstantOneBase => {
            let ones_base = case == PromiseCase::ConstantOneBase;
            let mut s = OracleString::filled(n, ones_base);
            for idx in index::sample(&mut rng, n as usize, y as usize) {
                s.flip(idx as u64);
            }
            s
        }
        PromiseCase::BalancedExcessZeros | PromiseCase::BalancedExcessOnes => {
            let n0 = case.zero_count(inst);
            // Start from all-ones and clear n0 positions to zero.
            let mut s = OracleString::filled(n, true);
            for idx in index::sample(&mut rng, n as usize, n0 as usize) {
                s.flip(idx as u64);
            }
            s
        }
    };
    debug_assert_eq!(s.zero_count(), case.zero_count(inst));
    Ok(s)
}

/// Side-by-side failure probability estimates from the different engines.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FailureEstimate {
    /// Exactly computed probability, when the exact engine ran.
    pub exact: Option<f64>,
    /// ln of the exact probability (meaningful even when the probability
    /// itself underflows f64).
    pub ln_exact: Option<f64>,
    /// Asymptotic ln P_fail.
    pub ln_asymptotic: Option<f64>,
    /// Empirical Monte Carlo rate.
    pub empirical: Option<f64>,
    /// Wilson 95% interval around the empirical rate.
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    /// Monte Carlo trial count (zero when no simulation ran).
    pub trials: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: u32, y: u64) -> ProblemInstance {
        ProblemInstance::new(n, y, 0.5).unwrap()
    }

    #[test]
    fn instance_invariants_enforced() {
        assert!(ProblemInstance::new(3, 5, 0.5).is_err()); // y > N/2
        assert!(ProblemInstance::new(3, 4, 0.5).is_ok()); // y = N/2 allowed
        assert!(ProblemInstance::new(3, 0, 1.5).is_err());
        assert!(ProblemInstance::new(0, 0, 0.5).is_err());
    }

    #[test]
    fn generated_counts_match_case() {
        // (n=3, A1a, y=0): n0 = n1 = 4
        let s = generate_oracle(&inst(3, 0), PromiseCase::BalancedExcessZeros, 1).unwrap();
        assert_eq!(s.zero_count(), 4);
        assert_eq!(s.one_count(), 4);
        // (n=2, A2a, y=1): n0 = 3, n1 = 1
        let s = generate_oracle(&inst(2, 1), PromiseCase::ConstantZeroBase, 7).unwrap();
        assert_eq!(s.zero_count(), 3);
        assert_eq!(s.one_count(), 1);
        // (n=4, A2b, y=2): n1 = 14, n0 = 2
        let s = generate_oracle(&inst(4, 2), PromiseCase::ConstantOneBase, 7).unwrap();
        assert_eq!(s.one_count(), 14);
        assert_eq!(s.zero_count(), 2);
        // (n=4, A1a, y=3): n0 = 11
        let s = generate_oracle(&inst(4, 3), PromiseCase::BalancedExcessZeros, 3).unwrap();
        assert_eq!(s.zero_count(), 11);
    }

    #[test]
    fn amplitude_examples() {
        let all_zeros = OracleString::from_bits(&[0, 0, 0, 0]);
        assert_eq!(all_zeros.dj_zero_amplitude(), 1.0);
        let balanced = OracleString::from_bits(&[0, 1, 1, 0, 1, 0, 0, 1]);
        assert_eq!(balanced.dj_zero_amplitude(), 0.0);
        // N=16 near-constant zero-base, y=2: (14 - 2)/16 = 0.75 = 1 - 2y/N
        let s = generate_oracle(&inst(4, 2), PromiseCase::ConstantZeroBase, 42).unwrap();
        assert_eq!(s.dj_zero_amplitude(), 0.75);
    }

    #[test]
    fn amplitude_magnitude_identity_exact() {
        // |amplitude| = 2y/N (balanced) or 1 - 2y/N (constant), exact rationals.
        for n in [2u32, 3, 4, 6] {
            let big_n = 1i64 << n;
            for y in 0..=(1u64 << (n - 1)) {
                for case in PromiseCase::ALL {
                    let s = generate_oracle(&inst(n, y), case, 99).unwrap();
                    let a = s.dj_zero_amplitude_exact();
                    let expect = if case.is_balanced() {
                        Ratio::new(2 * y as i64, big_n)
                    } else {
                        Ratio::new(big_n - 2 * y as i64, big_n)
                    };
                    assert_eq!(if a < Ratio::new(0, 1) { -a } else { a }, expect);
                }
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let i = inst(6, 5);
        for case in PromiseCase::ALL {
            let a = generate_oracle(&i, case, 12345).unwrap();
            let b = generate_oracle(&i, case, 12345).unwrap();
            assert_eq!(a, b);
            let c = generate_oracle(&i, case, 54321).unwrap();
            assert_eq!(c.zero_count(), a.zero_count());
        }
    }

    #[test]
    fn amplitude_square_is_z0_probability() {
        let s = generate_oracle(&inst(5, 3), PromiseCase::BalancedExcessZeros, 8).unwrap();
        let a = s.dj_zero_amplitude();
        let p_rest = 1.0 - a * a;
        assert!((a * a + p_rest - 1.0).abs() < 1e-15);
        assert!((0.0..=1.0).contains(&(a * a)));
    }
}
