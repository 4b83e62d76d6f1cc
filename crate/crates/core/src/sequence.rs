//! Schoenberg coefficient sequences and certified tail bounds.
//!
//! A [`SequenceModel`] describes a nonnegative summable sequence `a_m`, either
//! as an explicit list or as one of a few parametric families. The same type
//! is used for the cosine-power coefficients on the Hilbert sphere and for the
//! Gegenbauer coefficients on a finite-dimensional sphere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::compensated_sum;

/// Relative slack added to every float tail bound so that rounding in the
/// head sums and log-domain terms cannot push the bound below the true tail.
const BOUND_SLACK: f64 = 2.5e-13;

/// Largest truncation index the search in [`SequenceModel::truncation_index`]
/// will return.
pub const MAX_TRUNCATION: u64 = 50_000_000;

/// Nonnegative summable coefficient sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "variant",
    rename_all = "lowercase",
    try_from = "RawSequenceModel"
)]
pub enum SequenceModel {
    /// `a_m = terms[m]`, zero past the end.
    Finite { terms: Vec<f64> },
    /// `a_m = c r^m`.
    Geometric {
        #[serde(rename = "c")]
        scale: f64,
        #[serde(rename = "r")]
        ratio: f64,
    },
    /// `a_m = C (m + 1)^(-p)`.
    #[serde(rename = "powerlaw")]
    PowerLaw {
        #[serde(rename = "C")]
        scale: f64,
        #[serde(rename = "p")]
        exponent: f64,
    },
    /// `a_m = e^(-c) c^m / m!`.
    #[serde(rename = "poisson")]
    Poisson {
        #[serde(rename = "c")]
        intensity: f64,
    },
}

#[derive(Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
enum RawSequenceModel {
    Finite {
        terms: Vec<f64>,
    },
    Geometric {
        c: f64,
        r: f64,
    },
    #[serde(rename = "powerlaw", alias = "power_law")]
    PowerLaw {
        #[serde(rename = "C", alias = "c")]
        scale: f64,
        p: f64,
    },
    #[serde(rename = "poisson", alias = "poissontype")]
    Poisson { c: f64 },
}

impl TryFrom<RawSequenceModel> for SequenceModel {
    type Error = Error;

    fn try_from(raw: RawSequenceModel) -> Result<Self> {
        match raw {
            RawSequenceModel::Finite { terms } => SequenceModel::finite(terms),
            RawSequenceModel::Geometric { c, r } => SequenceModel::geometric(c, r),
            RawSequenceModel::PowerLaw { scale, p } => SequenceModel::power_law(scale, p),
            RawSequenceModel::Poisson { c } => SequenceModel::poisson(c),
        }
    }
}

/// Certified upper bound on `sum_{m >= start_index} a_m m^weight_power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBound {
    pub start_index: u64,
    pub weight_power: u32,
    pub bound: f64,
}

fn nonneg_finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite and nonnegative, got {v}"
        )))
    }
}

impl SequenceModel {
    pub fn finite(terms: Vec<f64>) -> Result<Self> {
        for (m, t) in terms.iter().enumerate() {
            nonneg_finite(&format!("term {m}"), *t)?;
        }
        Ok(SequenceModel::Finite { terms })
    }

    pub fn geometric(scale: f64, ratio: f64) -> Result<Self> {
        nonneg_finite("c", scale)?;
        if !(0.0..1.0).contains(&ratio) {
            return Err(Error::InvalidArgument(format!(
                "geometric ratio must lie in [0, 1), got {ratio}"
            )));
        }
        Ok(SequenceModel::Geometric { scale, ratio })
    }

    pub fn power_law(scale: f64, exponent: f64) -> Result<Self> {
        nonneg_finite("C", scale)?;
        if !(exponent.is_finite() && exponent > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "power-law exponent must exceed 1, got {exponent}"
            )));
        }
        Ok(SequenceModel::PowerLaw { scale, exponent })
    }

    pub fn poisson(intensity: f64) -> Result<Self> {
        nonneg_finite("c", intensity)?;
        Ok(SequenceModel::Poisson { intensity })
    }

    /// Coefficient `a_m`.
    pub fn term(&self, m: u64) -> f64 {
        match self {
            SequenceModel::Finite { terms } => terms.get(m as usize).copied().unwrap_or(0.0),
            SequenceModel::Geometric { scale, ratio } => {
                if m == 0 {
                    *scale
                } else if m <= i32::MAX as u64 {
                    scale * ratio.powi(m as i32)
                } else {
                    scale * ratio.powf(m as f64)
                }
            }
            SequenceModel::PowerLaw { scale, exponent } => scale * ((m + 1) as f64).powf(-exponent),
            SequenceModel::Poisson { intensity } => poisson_weighted(*intensity, m, 0),
        }
    }

    /// `a_m m^weight_power`, with `0^0 = 1`.
    pub fn weighted_term(&self, m: u64, weight_power: u32) -> f64 {
        if weight_power == 0 {
            return self.term(m);
        }
        if m == 0 {
            return 0.0;
        }
        match self {
            SequenceModel::Poisson { intensity } => poisson_weighted(*intensity, m, weight_power),
            SequenceModel::Geometric { scale, ratio } if m > 64 => {
                if *scale == 0.0 || *ratio == 0.0 {
                    return 0.0;
                }
                (scale.ln() + m as f64 * ratio.ln() + weight_power as f64 * (m as f64).ln()).exp()
            }
            _ => self.term(m) * (m as f64).powi(weight_power as i32),
        }
    }

    /// Number of stored terms for finite models.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            SequenceModel::Finite { terms } => Some(terms.len()),
            _ => None,
        }
    }

    /// Whether `sum_m a_m m^weight_power` converges, decided analytically.
    pub fn weighted_sum_converges(&self, weight_power: u32) -> bool {
        match self {
            SequenceModel::PowerLaw { scale, exponent } => {
                *scale == 0.0 || (weight_power as f64) < exponent - 1.0
            }
            _ => true,
        }
    }

    /// Certified upper bound on `sum_{m >= start} a_m m^weight_power`.
    pub fn weighted_tail_bound(&self, start: u64, weight_power: u32) -> Result<TailBound> {
        if !self.weighted_sum_converges(weight_power) {
            return Err(Error::DivergentSeries(format!(
                "sum a_m m^{weight_power} diverges for {self:?}"
            )));
        }
        let raw = match self {
            SequenceModel::Finite { terms } => {
                compensated_sum((start..terms.len() as u64).map(|m| self.weighted_term(m, weight_power)))
            }
            SequenceModel::Geometric { scale, ratio } => {
                if *scale == 0.0 {
                    0.0
                } else if *ratio == 0.0 {
                    if start == 0 && weight_power == 0 {
                        *scale
                    } else {
                        0.0
                    }
                } else {
                    self.ratio_dominated_tail(start, weight_power, self.geometric_switch(start, weight_power))
                }
            }
            SequenceModel::PowerLaw { scale, exponent } => {
                // a_m m^l <= C (m+1)^(l-p); integral test on sum_{k >= start+1} k^(-s).
                let s = exponent - weight_power as f64;
                let k = (start + 1) as f64;
                let head = if start == 0 && weight_power > 0 { 0.0 } else { k.powf(-s) };
                scale * (head + k.powf(1.0 - s) / (s - 1.0))
            }
            SequenceModel::Poisson { intensity } => {
                if *intensity == 0.0 {
                    if start == 0 && weight_power == 0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    self.ratio_dominated_tail(start, weight_power, self.poisson_switch(start, weight_power))
                }
            }
        };
        Ok(TailBound {
            start_index: start,
            weight_power,
            bound: raw * (1.0 + BOUND_SLACK),
        })
    }

    /// Upper bound on the total mass `sum_m a_m`.
    pub fn mass_bound(&self) -> f64 {
        self.weighted_tail_bound(0, 0)
            .map(|b| b.bound)
            .unwrap_or(f64::INFINITY)
    }

    /// Smallest `M` with `weighted_tail_bound(M, weight_power) <= tol`.
    pub fn truncation_index(&self, weight_power: u32, tol: f64) -> Result<u64> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        let ok = |m: u64| -> Result<bool> { Ok(self.weighted_tail_bound(m, weight_power)?.bound <= tol) };
        if let Some(len) = self.finite_len() {
            // the bound is exactly zero past the stored terms
            let mut lo = 0u64;
            let mut hi = len as u64;
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if ok(mid)? {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            return Ok(lo);
        }
        if ok(0)? {
            return Ok(0);
        }
        let mut hi = 1u64;
        while !ok(hi)? {
            if hi >= MAX_TRUNCATION {
                return Err(Error::ToleranceUnreachable(format!(
                    "tail of sum a_m m^{weight_power} stays above {tol} past index {MAX_TRUNCATION} for {self:?}"
                )));
            }
            hi = (hi * 2).min(MAX_TRUNCATION);
        }
        let mut lo = hi / 2;
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if ok(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Head sum plus ratio-domination tail from `switch` on, where the term
    /// ratio at `switch` (and hence beyond) is below one.
    fn ratio_dominated_tail(&self, start: u64, weight_power: u32, switch: (u64, f64)) -> f64 {
        let (m0, rho) = switch;
        let head = compensated_sum((start..m0).map(|m| self.weighted_term(m, weight_power)));
        head + self.weighted_term(m0, weight_power) / (1.0 - rho)
    }

    /// Index `m0 >= max(start, 1)` where `r (1 + 1/m)^l <= (1 + r) / 2`.
    fn geometric_switch(&self, start: u64, weight_power: u32) -> (u64, f64) {
        let SequenceModel::Geometric { ratio, .. } = self else {
            unreachable!()
        };
        let rho = |m: u64| ratio * (1.0 + 1.0 / m as f64).powi(weight_power as i32);
        let mut m0 = start.max(1);
        if weight_power > 0 {
            let q = (1.0 + ratio) / (2.0 * ratio);
            let needed = 1.0 / (q.powf(1.0 / weight_power as f64) - 1.0);
            m0 = m0.max(needed.ceil() as u64);
        }
        while rho(m0) >= 1.0 {
            m0 += 1;
        }
        (m0, rho(m0))
    }

    /// Index `m0 >= max(start, 2c + l, 1)` where the Poisson term ratio
    /// `c/(m+1) (1 + 1/m)^l` has fallen to at most 3/4.
    fn poisson_switch(&self, start: u64, weight_power: u32) -> (u64, f64) {
        let SequenceModel::Poisson { intensity } = self else {
            unreachable!()
        };
        let rho = |m: u64| intensity / (m as f64 + 1.0) * (1.0 + 1.0 / m as f64).powi(weight_power as i32);
        let mut m0 = start
            .max(1)
            .max((2.0 * intensity + weight_power as f64).ceil() as u64);
        while rho(m0) > 0.75 {
            m0 += 1;
        }
        (m0, rho(m0))
    }
}

fn poisson_weighted(c: f64, m: u64, weight_power: u32) -> f64 {
    if c == 0.0 {
        return if m == 0 && weight_power == 0 { 1.0 } else { 0.0 };
    }
    if m == 0 {
        return if weight_power == 0 { (-c).exp() } else { 0.0 };
    }
    let mf = m as f64;
    (-c + mf * c.ln() - libm::lgamma(mf + 1.0) + weight_power as f64 * mf.ln()).exp()
}
