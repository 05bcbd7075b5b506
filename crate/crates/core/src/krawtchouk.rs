//! Exact integer Krawtchouk polynomial evaluation and the identities built
//! on top of it.
//!
//! K_j(t; N) = sum_r (-1)^r C(t, r) C(N-t, j-r), with the three-term
//! recursion (N-2t) K_j = (j+1) K_{j+1} + (N-j+1) K_{j-1} and the
//! orthogonality relation sum_t C(N,t) K_i K_j = 2^N C(N,j) delta_ij.

use crate::numeric::{binomial, ln_abs_sign};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;

/// Exact value of the defining alternating sum.
pub fn krawtchouk_direct(j: u64, t: u64, big_n: u64) -> Result<BigInt> {
    if j > big_n || t > big_n {
        return Err(Error::InvalidParameter(format!(
            "indices must satisfy 0 <= j, t <= N; got j = {j}, t = {t}, N = {big_n}"
        )));
    }
    let mut acc = BigInt::zero();
    for r in 0..=j.min(t) {
        let term = binomial(t, r) * binomial(big_n - t, j - r);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Table of K_j(t; N) for 0 <= j <= j_max, 0 <= t <= N, filled by the
/// three-term recursion. Immutable once built.
#[derive(Debug, Clone)]
pub struct KrawtchoukTable {
    big_n: u64,
    /// rows[j][t]
    rows: Vec<Vec<BigInt>>,
}

impl KrawtchoukTable {
    /// Full table, all degrees 0..=N.
    pub fn build(big_n: u64) -> Self {
        Self::build_up_to(big_n, big_n)
    }

    /// Rows for degrees 0..=j_max only; the van Dam analysis needs j <= k
    /// and N can be large.
    pub fn build_up_to(big_n: u64, j_max: u64) -> Self {
        assert!(big_n >= 1, "N must be >= 1");
        let j_max = j_max.min(big_n);
        let width = big_n as usize + 1;
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(j_max as usize + 1);
        rows.push(vec![BigInt::from(1); width]);
        if j_max >= 1 {
            let row1: Vec<BigInt> = (0..=big_n)
                .map(|t| BigInt::from(big_n as i64 - 2 * t as i64))
                .collect();
            rows.push(row1);
        }
        for j in 1..j_max {
            let ju = j as usize;
            let mut next = Vec::with_capacity(width);
            for t in 0..=big_n as usize {
                // (j+1) K_{j+1} = (N-2t) K_j - (N-j+1) K_{j-1}
                let lhs = BigInt::from(big_n as i64 - 2 * t as i64) * &rows[ju][t]
                    - BigInt::from(big_n - j + 1) * &rows[ju - 1][t];
                next.push(lhs / BigInt::from(j + 1));
            }
            rows.push(next);
        }
        Self { big_n, rows }
    }

    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    pub fn j_max(&self) -> u64 {
        self.rows.len() as u64 - 1
    }

    pub fn value(&self, j: u64, t: u64) -> &BigInt {
        &self.rows[j as usize][t as usize]
    }

    /// (ln|K_j(t;N)|, sign) for floating-point use at large N.
    pub fn ln_value(&self, j: u64, t: u64) -> (f64, i8) {
        ln_abs_sign(self.value(j, t))
    }

    /// Residual of the recursion identity at an interior degree; zero by
    /// construction, exposed for auditing.
    pub fn recursion_residual(&self, j: u64, t: u64) -> BigInt {
        let n = self.big_n;
        BigInt::from(n as i64 - 2 * t as i64) * self.value(j, t)
            - BigInt::from(j + 1) * self.value(j + 1, t)
            - BigInt::from(n - j + 1) * self.value(j - 1, t)
    }
}

/// sum_t C(N,t) K_i(t) K_j(t) - 2^N C(N,j) delta_ij, exactly. Zero is the
/// orthogonality relation.
pub fn orthogonality_residual(i: u64, j: u64, big_n: u64) -> Result<BigInt> {
    if i > big_n || j > big_n {
        return Err(Error::InvalidParameter(format!(
            "indices must satisfy 0 <= i, j <= N; got i = {i}, j = {j}, N = {big_n}"
        )));
    }
    let table = KrawtchoukTable::build_up_to(big_n, i.max(j));
    let mut acc = BigInt::zero();
    for t in 0..=big_n {
        acc += binomial(big_n, t) * table.value(i, t) * table.value(j, t);
    }
    if i == j {
        acc -= (BigInt::from(1) << big_n) * binomial(big_n, j);
    }
    Ok(acc)
}
