//! The fixed CSV schema shared by `exact`, `asymptotic`, `mc`, and `sweep`.

use std::io::Write;

pub const CSV_HEADER: &str =
    "algorithm,mode,n,N,k,y,u,p,p_fail,ln_pfail,ln_pfail_per_k,trials,ci_low,ci_high,seed";

/// One output record. Optional fields print as empty cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub algorithm: &'static str,
    pub mode: &'static str,
    pub n: Option<u32>,
    pub big_n: Option<u64>,
    pub k: u64,
    pub y: Option<u64>,
    pub u: f64,
    pub p: f64,
    pub p_fail: f64,
    pub ln_pfail: f64,
    pub trials: Option<u64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub seed: Option<u64>,
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl Row {
    pub fn to_csv_line(&self) -> String {
        // `{}` on f64 prints the shortest round-trip decimal.
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.mode,
            opt(&self.n),
            opt(&self.big_n),
            self.k,
            opt(&self.y),
            self.u,
            self.p,
            self.p_fail,
            self.ln_pfail,
            self.ln_pfail / self.k as f64,
            opt(&self.trials),
            opt(&self.ci_low),
            opt(&self.ci_high),
            opt(&self.seed),
        )
    }

    /// Deterministic output order: (algorithm, u, k, mode).
    pub fn sort_key(&self) -> (&'static str, f64, u64, &'static str) {
        (self.algorithm, self.u, self.k, self.mode)
    }
}

pub fn write_rows<W: Write>(out: &mut W, rows: &[Row]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv_line())?;
    }
    Ok(())
}

pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        let (aa, au, ak, am) = a.sort_key();
        let (ba, bu, bk, bm) = b.sort_key();
        aa.cmp(ba)
            .then(au.total_cmp(&bu))
            .then(ak.cmp(&bk))
            .then(am.cmp(bm))
    });
}
