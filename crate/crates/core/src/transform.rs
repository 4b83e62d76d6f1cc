//! From cosine-power coefficients to circle coefficients, and smoothness
//! classification from coefficient decay.
//!
//! Power reduction writes `cos^m(theta) = sum_n w(m, n) cos(n theta)` over
//! `n <= m` of the same parity as `m`, with
//! `w(m, n) = eps_n 2^(-m) C(m, (m - n)/2)`, `eps_0 = 1`, `eps_n = 2`.
//! The circle ("d = 1") Schoenberg coefficient is then
//! `a_{n,1} = sum_m a_m w(m, n)`. Every weight lies in `[0, 1]` and each row
//! `w(m, .)` sums to one.

use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::asymptotics::build_c_table;
use crate::deriv::DiagonalPolynomial;
use crate::error::{Error, Result};
use crate::exact::{binomial, int_to_f64, log_binomial, CompensatedSum, EXACT_LIMIT};
use crate::kernel::cosine_power_series;
use crate::sequence::SequenceModel;

/// Power-reduction weight `w(m, n)`; zero unless `n <= m` with equal parity.
pub fn circle_weight(m: u64, n: u64) -> f64 {
    if n > m || (m - n) % 2 == 1 {
        return 0.0;
    }
    let k = ((m - n) / 2) as i64;
    let eps = if n == 0 { 1.0 } else { 2.0 };
    if m <= EXACT_LIMIT {
        eps * int_to_f64(&binomial(m, k)) * 2f64.powi(-(m as i32))
    } else {
        eps * (log_binomial(m, k).unwrap() - m as f64 * std::f64::consts::LN_2).exp()
    }
}

/// The weights `w(m, m), w(m, m-2), ...` indexed by `n`.
fn weight_row(m: u64) -> Vec<(u64, f64)> {
    let scale = 2f64.powi(-(m.min(EXACT_LIMIT) as i32));
    let mut choose = num_bigint::BigInt::from(1);
    (0..=m / 2)
        .map(|k| {
            let n = m - 2 * k;
            let eps = if n == 0 { 1.0 } else { 2.0 };
            let w = if m <= EXACT_LIMIT {
                let w = eps * int_to_f64(&choose) * scale;
                choose = &choose * (m - k) / (k + 1);
                w
            } else {
                eps * (log_binomial(m, k as i64).unwrap() - m as f64 * std::f64::consts::LN_2).exp()
            };
            (n, w)
        })
        .collect()
}

/// One circle coefficient with its certified truncation error.
#[derive(Debug, Clone, Copy, PartialEq, DeriveSerialize)]
pub struct CircleTerm {
    pub index: u64,
    pub value: f64,
    pub error_bound: f64,
}

/// `a_{n,1}` from the cosine-power coefficients, accurate to `tol`.
///
/// Dropping every `a_m` with `m >= M` changes the value by at most the
/// model's tail bound at `M`, since the weights are at most one.
pub fn transform_inf_to_circle(model: &SequenceModel, n: u64, tol: f64) -> Result<CircleTerm> {
    let cutoff = model.truncation_index(0, tol)?;
    let error_bound = model.weighted_tail_bound(cutoff, 0)?.bound;
    let mut acc = CompensatedSum::default();
    let mut m = n;
    while m < cutoff {
        acc.add(model.term(m) * circle_weight(m, n));
        m += 2;
    }
    Ok(CircleTerm {
        index: n,
        value: acc.value(),
        error_bound,
    })
}

/// Circle coefficients `a_{0,1}, ..., a_{N,1}`.
#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct CircleSequence {
    pub max_index: u64,
    pub terms: Vec<CircleTerm>,
    /// Bound on the summed truncation error of all listed terms.
    pub total_error_bound: f64,
    /// Bound on `sum_{n > N} a_{n,1}`.
    pub omitted_mass_bound: f64,
}

impl CircleSequence {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.value)
    }

    /// `sum_{n <= N} a_{n,1} cos(n theta)`.
    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for t in &self.terms {
            acc.add(t.value * (t.index as f64 * theta).cos());
        }
        acc.value()
    }
}

/// Circle coefficients up to `max_index`, each accurate to `tol`.
///
/// With `max_index = None` the cutoff `N` is the smallest index for which the
/// omitted mass `sum_{n > N} a_{n,1} <= sum_{m > N} a_m` is below `tol`.
pub fn transform_sequence(model: &SequenceModel, max_index: Option<u64>, tol: f64) -> Result<CircleSequence> {
    let cutoff = model.truncation_index(0, tol)?;
    let coefficient_error = model.weighted_tail_bound(cutoff, 0)?.bound;
    let max_index = match max_index {
        Some(n) => n,
        None => cutoff.saturating_sub(1),
    };
    let mut sums = vec![CompensatedSum::default(); max_index as usize + 1];
    for m in 0..cutoff {
        let a = model.term(m);
        if a == 0.0 {
            continue;
        }
        for (n, w) in weight_row(m) {
            if n <= max_index {
                sums[n as usize].add(a * w);
            }
        }
    }
    let terms = sums
        .iter()
        .enumerate()
        .map(|(n, s)| CircleTerm {
            index: n as u64,
            value: s.value(),
            error_bound: coefficient_error,
        })
        .collect();
    Ok(CircleSequence {
        max_index,
        terms,
        total_error_bound: coefficient_error,
        omitted_mass_bound: model.weighted_tail_bound(max_index + 1, 0)?.bound,
    })
}

/// Largest deviation between the circle expansion truncated at `N` and the
/// cosine-power series, over the sample angles.
pub fn reconstruct_error(model: &SequenceModel, thetas: &[f64], max_index: Option<u64>, tol: f64) -> Result<f64> {
    let seq = transform_sequence(model, max_index, tol)?;
    let mut worst = 0.0f64;
    for &theta in thetas {
        let direct = cosine_power_series(model, theta.cos(), tol)?;
        worst = worst.max((seq.eval(theta) - direct).abs());
    }
    Ok(worst)
}

/// Smoothness order: a finite maximum or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Unbounded,
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(v) => s.serialize_u32(*v),
            Order::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, DeriveSerialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    /// Certified upper bound on the full weighted sum.
    Bound,
    /// Partial sum of a divergent series over a fixed number of terms.
    PartialSum,
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct EllVerdict {
    pub ell: u32,
    pub converges: bool,
    pub value: f64,
    pub kind: ValueKind,
}

/// Result of a decay classification.
#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct SmoothnessReport {
    pub max_ell: Order,
    pub derivative_order: Order,
    pub per_ell: Vec<EllVerdict>,
}

const DIVERGENT_WITNESS_TERMS: u64 = 10_000;
const BOUND_HEAD_CAP: u64 = 100_000;

fn weighted_verdict(model: &SequenceModel, ell: u32, weight_power: u32) -> Result<EllVerdict> {
    let converges = model.weighted_sum_converges(weight_power);
    if !converges {
        let mut acc = CompensatedSum::default();
        (0..DIVERGENT_WITNESS_TERMS).for_each(|m| acc.add(model.weighted_term(m, weight_power)));
        return Ok(EllVerdict {
            ell,
            converges,
            value: acc.value(),
            kind: ValueKind::PartialSum,
        });
    }
    let head_len = model
        .truncation_index(weight_power, 1e-12)
        .unwrap_or(BOUND_HEAD_CAP)
        .min(BOUND_HEAD_CAP);
    let mut acc = CompensatedSum::default();
    (0..head_len).for_each(|m| acc.add(model.weighted_term(m, weight_power)));
    acc.add(model.weighted_tail_bound(head_len, weight_power)?.bound);
    Ok(EllVerdict {
        ell,
        converges,
        value: acc.value(),
        kind: ValueKind::Bound,
    })
}

fn classify(model: &SequenceModel, ell_max_probe: u32, weight: impl Fn(u32) -> u32, power_law_max: impl Fn(f64) -> u32) -> Result<SmoothnessReport> {
    let per_ell = (0..=ell_max_probe)
        .map(|ell| weighted_verdict(model, ell, weight(ell)))
        .collect::<Result<Vec<_>>>()?;
    let max_ell = match model {
        SequenceModel::PowerLaw { scale, exponent } if *scale > 0.0 => Order::Finite(power_law_max(*exponent)),
        _ => Order::Unbounded,
    };
    let derivative_order = match max_ell {
        Order::Finite(l) => Order::Finite(2 * l),
        Order::Unbounded => Order::Unbounded,
    };
    Ok(SmoothnessReport {
        max_ell,
        derivative_order,
        per_ell,
    })
}

/// Smoothness on the Hilbert sphere: `phi^(2l)(0)` exists iff
/// `sum a_m m^l` converges.
pub fn classify_inf(model: &SequenceModel, ell_max_probe: u32) -> Result<SmoothnessReport> {
    // power law: l < p - 1
    classify(model, ell_max_probe, |l| l, |p| ((p - 1.0).ceil() as u32).saturating_sub(1))
}

/// Smoothness on `S^d` from Gegenbauer coefficients: `phi^(2l)(0)` exists
/// iff `sum a_k k^(2l)` converges.
pub fn classify_d(model: &SequenceModel, ell_max_probe: u32) -> Result<SmoothnessReport> {
    // power law: 2l < p - 1
    classify(model, ell_max_probe, |l| 2 * l, |p| (((p - 1.0) / 2.0).ceil() as u32).saturating_sub(1))
}

/// `phi^(2l)(0) = (-1)^l sum_m a_m D_l(m)` where `D_l(m)` is the diagonal
/// coefficient of `cos^m`.
///
/// `D_l(m)` is the `2l`-th moment of a sum of `m` random signs, which is
/// dominated termwise by the Gaussian moment `(2l-1)!! m^l = c_{l,l} m^l`.
/// The tail is therefore certified by `c_{l,l}` times the model's bound on
/// `sum_{m >= M} a_m m^l`.
pub fn derivative_at_zero_series(model: &SequenceModel, l: u32, tol: f64) -> Result<f64> {
    if !model.weighted_sum_converges(l) {
        return Err(Error::DivergentSeries(format!(
            "sum a_m m^{l} diverges, so phi^({}) (0) does not exist for {model:?}",
            2 * l
        )));
    }
    let constant = if l == 0 {
        1.0
    } else {
        int_to_f64(build_c_table(l)?.cell(l, l).unwrap())
    };
    let cutoff = model.truncation_index(l, tol / constant)?;
    let poly = DiagonalPolynomial::new(l);
    let mut acc = CompensatedSum::default();
    for m in 0..cutoff {
        let a = model.term(m);
        if a == 0.0 {
            continue;
        }
        let d = if m <= EXACT_LIMIT {
            int_to_f64(&poly.eval_exact(m))
        } else {
            poly.eval_f64(m)
        };
        acc.add(a * d);
    }
    let value = acc.value();
    Ok(if l % 2 == 1 { -value } else { value })
}
