//! Shared numeric helpers: exact binomials, logarithms of big integers and
//! rationals, and a log-domain complementary error function.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// ln C(n, k) in f64, via the log-gamma function.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Natural log of a positive big integer, accurate to f64 precision for any
/// magnitude (the value itself may far exceed f64 range).
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln_bigint requires a positive argument");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    // Keep the top 64 bits as the mantissa, account for the shift.
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive big rational.
pub fn ln_big_rational(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "ln_big_rational requires a positive argument");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// ln|x| and sign of a big integer. Returns (-inf, 0) for zero.
pub fn ln_abs_sign(x: &BigInt) -> (f64, i8) {
    if x.is_zero() {
        (f64::NEG_INFINITY, 0)
    } else if x.is_negative() {
        (ln_bigint(&-x), -1)
    } else {
        (ln_bigint(x), 1)
    }
}

/// Sum of signed terms given in log-magnitude form, returned the same way.
///
/// Shifts by the maximum magnitude so intermediate exponentials stay in
/// range regardless of scale.
pub fn signed_log_sum(terms: &[(f64, i8)]) -> (f64, i8) {
    let m = terms
        .iter()
        .filter(|(_, s)| *s != 0)
        .map(|(l, _)| *l)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return (f64::NEG_INFINITY, 0);
    }
    let mut acc = 0.0;
    for &(l, s) in terms {
        if s != 0 {
            acc += s as f64 * (l - m).exp();
        }
    }
    if acc == 0.0 {
        (f64::NEG_INFINITY, 0)
    } else if acc < 0.0 {
        (m + (-acc).ln(), -1)
    } else {
        (m + acc.ln(), 1)
    }
}

/// ln erfc(x), valid for arguments far beyond the f64 underflow point of
/// erfc itself.
pub fn ln_erfc(x: f64) -> f64 {
    if x < 20.0 {
        statrs::function::erf::erfc(x).ln()
    } else {
        // Asymptotic series erfc(x) ~ e^{-x^2}/(x sqrt(pi)) (1 - 1/(2x^2) + 3/(4x^4) - ...)
        let inv2 = 1.0 / (x * x);
        let series = 1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2;
        -x * x - (x * std::f64::consts::PI.sqrt()).ln() + series.ln()
    }
}

/// log(e^a + e^b) without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(16, 3), BigInt::from(560));
        assert_eq!(binomial(8, 9), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    #[test]
    fn ln_bigint_matches_f64_for_small_and_huge() {
        assert_relative_eq!(ln_bigint(&BigInt::from(1000u32)), 1000f64.ln());
        // 2^5000: ln = 5000 ln 2
        let big = BigInt::from(1u32) << 5000;
        assert_relative_eq!(
            ln_bigint(&big),
            5000.0 * std::f64::consts::LN_2,
            max_relative = 1e-14
        );
    }

    #[test]
    fn ln_binomial_matches_exact() {
        for &(n, k) in &[(10u64, 3u64), (100, 50), (4096, 101)] {
            let exact = ln_bigint(&binomial(n, k));
            assert_relative_eq!(ln_binomial(n, k), exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn ln_erfc_continuous_at_switchover() {
        // Compare the series against the direct value just below the switch.
        let x = 19.99;
        let direct = statrs::function::erf::erfc(x).ln();
        let inv2 = 1.0 / (x * x);
        let series = 1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2;
        let asym = -x * x - (x * std::f64::consts::PI.sqrt()).ln() + series.ln();
        assert_relative_eq!(direct, asym, max_relative = 1e-9);
    }

    #[test]
    fn signed_log_sum_cancellation() {
        // e^10 - e^10 + e^9 = e^9
        let (l, s) = signed_log_sum(&[(10.0, 1), (10.0, -1), (9.0, 1)]);
        assert_eq!(s, 1);
        assert_relative_eq!(l, 9.0, max_relative = 1e-12);
    }
}
