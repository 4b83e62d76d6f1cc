//! Large-`j` behaviour of the derivative coefficients and of the binomial
//! moment sums that govern smoothness on the Hilbert sphere.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::deriv::build_b_table;
use crate::error::{Error, Result};
use crate::exact::{
    binomial, compensated_sum, log_binomial, pow2, ratio_to_f64, upow, ExactInt, ExactRatio, EXACT_LIMIT,
};

/// Leading constants `c_{n1,n2}` with `b^j_{n1,n2} ~ c_{n1,n2} j^n1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CTable {
    max_n: u32,
    /// `rows[n1][n2]`, `n2 <= n1`
    rows: Vec<Vec<ExactInt>>,
}

/// `c_{n1,0} = 1`, `c_{n1,n2} = c_{n1-1,n2} + (n1 - n2 + 1) c_{n1,n2-1}` for
/// `0 < n2 < n1`, and `c_{n1,n1} = c_{n1,n1-1}` (so `c_{1,1} = 1`).
pub fn build_c_table(max_n: u32) -> Result<CTable> {
    if max_n == 0 {
        return Err(Error::InvalidArgument("c-table needs max_n >= 1".into()));
    }
    let mut rows: Vec<Vec<ExactInt>> = vec![vec![BigInt::one()]];
    for n1 in 1..=max_n {
        let mut row = Vec::with_capacity(n1 as usize + 1);
        row.push(BigInt::one());
        for n2 in 1..n1 {
            let v = &rows[n1 as usize - 1][n2 as usize] + &row[n2 as usize - 1] * (n1 - n2 + 1);
            row.push(v);
        }
        let diag = row[n1 as usize - 1].clone();
        row.push(diag);
        rows.push(row);
    }
    Ok(CTable { max_n, rows })
}

impl CTable {
    pub fn max_n(&self) -> u32 {
        self.max_n
    }

    pub fn cell(&self, n1: u32, n2: u32) -> Option<&ExactInt> {
        self.rows.get(n1 as usize)?.get(n2 as usize)
    }

    pub fn cells(&self) -> impl Iterator<Item = ((u32, u32), &ExactInt)> {
        self.rows.iter().enumerate().flat_map(|(n1, row)| {
            row.iter()
                .enumerate()
                .map(move |(n2, v)| ((n1 as u32, n2 as u32), v))
        })
    }

    /// CSV with columns `n1,n2,value`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv write failed: {e}"));
        w.write_record(["n1", "n2", "value"]).map_err(io)?;
        for ((n1, n2), v) in self.cells() {
            w.write_record([n1.to_string(), n2.to_string(), v.to_string()])
                .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::InvalidArgument(format!("csv flush failed: {e}")))
    }
}

/// `b^j_{n1,n2} / (c_{n1,n2} j^n1)`, formed exactly and rounded once.
pub fn asymptotic_ratio(j: u64, n1: u32, n2: u32) -> Result<f64> {
    Ok(ratio_to_f64(&asymptotic_ratio_exact(j, n1, n2)?))
}

pub fn asymptotic_ratio_exact(j: u64, n1: u32, n2: u32) -> Result<ExactRatio> {
    if n2 > n1 || n1 == 0 {
        return Err(Error::UnsupportedRange(format!(
            "asymptotic ratio needs 0 <= n2 <= n1, n1 >= 1; got ({n1}, {n2})"
        )));
    }
    if (n1 + n2) as u64 >= j {
        return Err(Error::UnsupportedRange(format!(
            "cell ({n1}, {n2}) of cos^{j} needs n1 + n2 < j"
        )));
    }
    let b = build_b_table(j, n1 + n2)?.cell(n1, n2).cloned().unwrap();
    let c = build_c_table(n1)?.cell(n1, n2).cloned().unwrap();
    Ok(BigRational::new(b, c * num_traits::pow(BigInt::from(j), n1 as usize)))
}

/// Leading coefficient and degree of `j -> b^j_{n1,n2}` recovered by exact
/// Newton interpolation over `samples` consecutive values of `j` starting
/// just above `n1 + n2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTerm {
    pub degree: usize,
    pub coefficient: ExactRatio,
}

pub fn interpolate_leading_term(n1: u32, n2: u32, samples: usize) -> Result<LeadingTerm> {
    let first = (n1 + n2) as u64 + 1;
    let values: Vec<ExactInt> = (first..first + samples as u64)
        .map(|j| Ok(build_b_table(j, n1 + n2)?.cell(n1, n2).cloned().unwrap()))
        .collect::<Result<_>>()?;
    leading_term_of_samples(values)
}

/// Degree and leading coefficient of the polynomial through unit-spaced
/// samples, provided the samples determine it (degree < samples - 1).
pub fn leading_term_of_samples(mut values: Vec<ExactInt>) -> Result<LeadingTerm> {
    let mut diffs = Vec::new();
    while !values.is_empty() {
        diffs.push(values.clone());
        values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    // degree = last order whose differences are not identically zero
    let degree = diffs
        .iter()
        .rposition(|d| d.iter().any(|v| !v.is_zero()))
        .ok_or_else(|| Error::InvalidArgument("all samples are zero".into()))?;
    if degree + 1 >= diffs.len() {
        return Err(Error::InvalidArgument(
            "too few samples to certify the polynomial degree".into(),
        ));
    }
    let factorial: ExactInt = (1..=degree as u64).map(BigInt::from).product();
    Ok(LeadingTerm {
        degree,
        coefficient: BigRational::new(diffs[degree][0].clone(), factorial),
    })
}

/// `2^(-2j+1) sum_{n=1}^{j} (2n)^(2l) C(2j, j+n)`.
pub fn even_moment_sum(j: u64, l: u32) -> ExactRatio {
    if j == 0 {
        return BigRational::zero();
    }
    let sum: ExactInt = (1..=j)
        .map(|n| upow(2 * n, 2 * l) * binomial(2 * j, (j + n) as i64))
        .sum();
    BigRational::new(sum, pow2(2 * j - 1))
}

/// `2^(-2j) sum_{n=1}^{j} (2n-1)^(2l) C(2j-1, j+n-1)`.
pub fn odd_moment_sum(j: u64, l: u32) -> ExactRatio {
    if j == 0 {
        return BigRational::zero();
    }
    let sum: ExactInt = (1..=j)
        .map(|n| upow(2 * n - 1, 2 * l) * binomial(2 * j - 1, (j + n - 1) as i64))
        .sum();
    BigRational::new(sum, pow2(2 * j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::InvalidArgument(format!("parity must be even or odd, got {other}"))),
        }
    }
}

/// Log-domain evaluation of the even or odd sum, for large `j`.
pub fn moment_sum_f64(j: u64, l: u32, parity: Parity) -> f64 {
    if j == 0 {
        return 0.0;
    }
    let ln2 = std::f64::consts::LN_2;
    let terms = (1..=j).map(|n| {
        let (base, ln_choose, ln_scale) = match parity {
            Parity::Even => (
                2 * n,
                log_binomial(2 * j, (j + n) as i64).unwrap(),
                -((2 * j - 1) as f64) * ln2,
            ),
            Parity::Odd => (
                2 * n - 1,
                log_binomial(2 * j - 1, (j + n - 1) as i64).unwrap(),
                -((2 * j) as f64) * ln2,
            ),
        };
        (2.0 * l as f64 * (base as f64).ln() + ln_choose + ln_scale).exp()
    });
    compensated_sum(terms)
}

/// The sum at `j` as a float: exact below [`EXACT_LIMIT`], log domain above.
pub fn moment_sum(j: u64, l: u32, parity: Parity) -> f64 {
    if j <= EXACT_LIMIT {
        let exact = match parity {
            Parity::Even => even_moment_sum(j, l),
            Parity::Odd => odd_moment_sum(j, l),
        };
        ratio_to_f64(&exact)
    } else {
        moment_sum_f64(j, l, parity)
    }
}

/// Scaled sums `sum(j, l) / j^l` along a sequence of `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    pub ell: u32,
    pub parity: Parity,
    pub sample_js: Vec<u64>,
    pub scaled_values: Vec<f64>,
    pub estimated_constant: f64,
}

pub fn trace_convergence(l: u32, parity: Parity, sample_js: &[u64]) -> Result<ConvergenceTrace> {
    if l == 0 {
        return Err(Error::InvalidArgument("trace needs l >= 1".into()));
    }
    if sample_js.is_empty() || sample_js[0] == 0 || sample_js.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "sample js must be positive and strictly increasing".into(),
        ));
    }
    let scaled_values: Vec<f64> = sample_js
        .iter()
        .map(|&j| moment_sum(j, l, parity) / (j as f64).powi(l as i32))
        .collect();
    Ok(ConvergenceTrace {
        ell: l,
        parity,
        sample_js: sample_js.to_vec(),
        estimated_constant: *scaled_values.last().unwrap(),
        scaled_values,
    })
}

impl ConvergenceTrace {
    /// `|v(last) / v(second to last) - 1|`.
    pub fn last_step_change(&self) -> Option<f64> {
        let n = self.scaled_values.len();
        (n >= 2).then(|| (self.scaled_values[n - 1] / self.scaled_values[n - 2] - 1.0).abs())
    }

    /// Estimated constant divided by `2^l c_{l,l}`, the value suggested by
    /// `b^{2j}_{l,l} ~ c_{l,l} (2j)^l`.
    pub fn ratio_to_diagonal_constant(&self) -> Result<f64> {
        let c = build_c_table(self.ell)?;
        let reference = ratio_to_f64(&BigRational::from(c.cell(self.ell, self.ell).unwrap().clone()))
            * 2f64.powi(self.ell as i32);
        Ok(self.estimated_constant / reference)
    }
}

/// CSV with columns `ell,parity,j,scaled_value` for one or more traces.
pub fn write_traces_csv<W: Write>(traces: &[ConvergenceTrace], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv write failed: {e}"));
    w.write_record(["ell", "parity", "j", "scaled_value"]).map_err(io)?;
    for t in traces {
        for (j, v) in t.sample_js.iter().zip(&t.scaled_values) {
            w.write_record([t.ell.to_string(), t.parity.as_str().to_string(), j.to_string(), v.to_string()])
                .map_err(io)?;
        }
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("csv flush failed: {e}")))
}
