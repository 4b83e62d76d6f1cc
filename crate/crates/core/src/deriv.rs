//! Derivatives of `cos^j`.
//!
//! The `l`-th derivative of `cos^j(x)` for `j > l` is
//!
//! ```text
//! sum_{n1 + n2 = l, 0 <= n2 <= n1} (-1)^n1 b^j_{n1,n2} cos^(j-n1+n2)(x) sin^(n1-n2)(x)
//! ```
//!
//! with integer coefficients `b^j_{n1,n2}` produced by a two-term recursion
//! ([`BTable`]). [`SinCosPoly`] is an independent term-rewriting
//! differentiator used to check the tables, and the diagonal coefficients
//! `b^J_{l,l}` (the only ones surviving at `x = 0`) have the closed form
//! [`diagonal_closed_form`] obtained from the power-reduction identities.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, int_to_f64, pow2, upow, ExactInt, ExactRatio};

/// Triangular table of `b^j_{n1,n2}` for all `n2 <= n1`, `n1 + n2 <= max_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BTable {
    power: u64,
    max_order: u32,
    /// `rows[n1][n2]`
    rows: Vec<Vec<ExactInt>>,
}

fn row_len(n1: u32, max_order: u32) -> usize {
    n1.min(max_order - n1) as usize + 1
}

/// Builds the coefficient table for `cos^j` up to derivative order `max_order`.
///
/// Levels `l = n1 + n2` are filled in increasing order and, within a level,
/// by increasing `n2`, so both parents `(n1-1, n2)` and `(n1, n2-1)` sit on
/// the previous level. On even levels the diagonal cell is closed last with
/// `b_{q,q} = b_{q,q-1}`.
pub fn build_b_table(j: u64, max_order: u32) -> Result<BTable> {
    if max_order as u64 >= j {
        return Err(Error::UnsupportedRange(format!(
            "b-table needs order < power, got order {max_order} for cos^{j}"
        )));
    }
    let mut rows: Vec<Vec<ExactInt>> = (0..=max_order)
        .map(|n1| Vec::with_capacity(row_len(n1, max_order)))
        .collect();
    rows[0].push(BigInt::one());
    for level in 1..=max_order {
        for n2 in 0..=level / 2 {
            let n1 = level - n2;
            let value = if n2 == 0 {
                &rows[n1 as usize - 1][0] * (j - (n1 as u64 - 1))
            } else if n2 < n1 {
                let up = &rows[n1 as usize - 1][n2 as usize] * (j - (n1 as u64 - 1) + n2 as u64);
                let left = &rows[n1 as usize][n2 as usize - 1] * (n1 - (n2 - 1));
                up + left
            } else {
                rows[n1 as usize][n2 as usize - 1].clone()
            };
            debug_assert_eq!(rows[n1 as usize].len(), n2 as usize);
            rows[n1 as usize].push(value);
        }
    }
    Ok(BTable {
        power: j,
        max_order,
        rows,
    })
}

impl BTable {
    /// Assembles a table from explicit cells; every cell of the triangle must
    /// be supplied exactly once.
    pub fn from_cells(
        power: u64,
        max_order: u32,
        cells: impl IntoIterator<Item = ((u32, u32), ExactInt)>,
    ) -> Result<Self> {
        let mut slots: Vec<Vec<Option<ExactInt>>> =
            (0..=max_order).map(|n1| vec![None; row_len(n1, max_order)]).collect();
        for ((n1, n2), v) in cells {
            let slot = slots
                .get_mut(n1 as usize)
                .and_then(|r| r.get_mut(n2 as usize))
                .filter(|_| n2 <= n1)
                .ok_or_else(|| Error::InvalidArgument(format!("cell ({n1}, {n2}) outside table")))?;
            if slot.replace(v).is_some() {
                return Err(Error::InvalidArgument(format!("cell ({n1}, {n2}) given twice")));
            }
        }
        let rows = slots
            .into_iter()
            .enumerate()
            .map(|(n1, r)| {
                r.into_iter()
                    .enumerate()
                    .map(|(n2, v)| v.ok_or_else(|| Error::InvalidArgument(format!("cell ({n1}, {n2}) missing"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BTable {
            power,
            max_order,
            rows,
        })
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn cell(&self, n1: u32, n2: u32) -> Option<&ExactInt> {
        if n2 > n1 {
            return None;
        }
        self.rows.get(n1 as usize)?.get(n2 as usize)
    }

    /// All cells as `((n1, n2), value)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = ((u32, u32), &ExactInt)> {
        self.rows.iter().enumerate().flat_map(|(n1, row)| {
            row.iter()
                .enumerate()
                .map(move |(n2, v)| ((n1 as u32, n2 as u32), v))
        })
    }

    /// Cells of one derivative order, `n1 + n2 = order`, by increasing `n2`.
    pub fn level(&self, order: u32) -> impl Iterator<Item = ((u32, u32), &ExactInt)> {
        let max = if order <= self.max_order { order / 2 + 1 } else { 0 };
        (0..max).filter_map(move |n2| {
            let n1 = order - n2;
            self.cell(n1, n2).map(|v| ((n1, n2), v))
        })
    }

    /// The derivative of the given order as a mixed cos/sin polynomial.
    pub fn derivative_poly(&self, order: u32) -> Result<SinCosPoly> {
        if order > self.max_order {
            return Err(Error::UnsupportedRange(format!(
                "order {order} exceeds table order {}",
                self.max_order
            )));
        }
        let mut poly = SinCosPoly::zero();
        for ((n1, n2), b) in self.level(order) {
            let coeff = if n1 % 2 == 0 { b.clone() } else { -b.clone() };
            let cos = self.power - n1 as u64 + n2 as u64;
            poly.add_term(cos as u32, n1 - n2, coeff);
        }
        Ok(poly)
    }

    /// Numerical value of the derivative of the given order at `x`.
    pub fn derivative_value(&self, order: u32, x: f64) -> Result<f64> {
        if order > self.max_order {
            return Err(Error::UnsupportedRange(format!(
                "order {order} exceeds table order {}",
                self.max_order
            )));
        }
        let (c, s) = (x.cos(), x.sin());
        Ok(self
            .level(order)
            .map(|((n1, n2), b)| {
                let sign = if n1 % 2 == 0 { 1.0 } else { -1.0 };
                let cos_pow = (self.power - n1 as u64 + n2 as u64) as i32;
                sign * int_to_f64(b) * c.powi(cos_pow) * s.powi((n1 - n2) as i32)
            })
            .sum())
    }

    /// CSV with columns `j,n1,n2,value`, values as exact decimal strings.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv write failed: {e}"));
        w.write_record(["j", "n1", "n2", "value"]).map_err(io)?;
        for ((n1, n2), v) in self.cells() {
            w.write_record([self.power.to_string(), n1.to_string(), n2.to_string(), v.to_string()])
                .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::InvalidArgument(format!("csv flush failed: {e}")))?;
        Ok(())
    }
}

/// `d^l/dx^l cos^j(x)` evaluated through the b-table.
pub fn deriv_cos_power(j: u64, order: u32, x: f64) -> Result<f64> {
    if order == 0 {
        return Ok(x.cos().powi(j as i32));
    }
    build_b_table(j, order)?.derivative_value(order, x)
}

/// Exact polynomial in `cos(x)` and `sin(x)` with integer coefficients.
///
/// Terms are keyed by `(cos power, sin power)`. Arithmetic and
/// differentiation work in the mixed basis; [`SinCosPoly::canonical`]
/// rewrites `sin^2 = 1 - cos^2` until every sine power is 0 or 1, which is
/// the unique normal form used for equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SinCosPoly {
    terms: BTreeMap<(u32, u32), ExactInt>,
}

impl SinCosPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(cos_power: u32, sin_power: u32, coeff: impl Into<ExactInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(cos_power, sin_power, coeff.into());
        p
    }

    /// `cos^j`.
    pub fn cos_power(j: u32) -> Self {
        Self::monomial(j, 0, 1)
    }

    pub fn add_term(&mut self, cos_power: u32, sin_power: u32, coeff: ExactInt) {
        if coeff.is_zero() {
            return;
        }
        let key = (cos_power, sin_power);
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, cos_power: u32, sin_power: u32) -> ExactInt {
        self.terms
            .get(&(cos_power, sin_power))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &ExactInt)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Termwise `d/dx cos^a sin^b = -a cos^(a-1) sin^(b+1) + b cos^(a+1) sin^(b-1)`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), coeff) in &self.terms {
            if a > 0 {
                out.add_term(a - 1, b + 1, -(coeff * a));
            }
            if b > 0 {
                out.add_term(a + 1, b - 1, coeff * b);
            }
        }
        out
    }

    /// Normal form with every sine power reduced to 0 or 1.
    pub fn canonical(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), coeff) in &self.terms {
            // sin^(2q + r) = (1 - cos^2)^q sin^r
            let (q, r) = (b / 2, b % 2);
            for i in 0..=q {
                let mut c = coeff * binomial(q as u64, i as i64);
                if i % 2 == 1 {
                    c = -c;
                }
                out.add_term(a + 2 * i, r, c);
            }
        }
        out
    }

    /// Equality of the represented functions.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (c, s) = (x.cos(), x.sin());
        self.terms
            .iter()
            .map(|(&(a, b), coeff)| int_to_f64(coeff) * c.powi(a as i32) * s.powi(b as i32))
            .sum()
    }
}

impl fmt::Display for SinCosPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest cosine power first
        for (i, (&(a, b), coeff)) in self.terms.iter().rev().enumerate() {
            let mag = coeff.abs();
            match (i, coeff.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (name, p) in [("cos", a), ("sin", b)] {
                match p {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{p}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join(" "))?;
            } else {
                write!(f, "{mag} {}", factors.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Exact `l`-th derivative of `cos^j` by repeated term rewriting.
pub fn symbolic_derivative(j: u32, order: u32) -> SinCosPoly {
    let mut p = SinCosPoly::cos_power(j);
    for _ in 0..order {
        p = p.derivative();
    }
    p.canonical()
}

/// `(-1)^l` times the `2l`-th derivative of `cos^J` at zero, from the
/// power-reduction identities:
///
/// * `J = 2j`: `2^(-2j) sum_{k<j} 2 C(2j,k) (2(j-k))^(2l)`
/// * `J = 2j-1`: `2^(-(2j-2)) sum_{k<j} C(2j-1,k) (2j-2k-1)^(2l)`
///
/// The even case also carries the constant term `C(2j,j)` of the identity
/// with weight `0^(2l)`, so `l = 0` yields `cos^J(0) = 1`.
pub fn diagonal_closed_form(big_j: u64, l: u32) -> ExactRatio {
    if big_j == 0 {
        return if l == 0 { BigRational::one() } else { BigRational::zero() };
    }
    let two_l = 2 * l;
    if big_j.is_multiple_of(2) {
        let j = big_j / 2;
        let mut sum: ExactInt = (0..j)
            .map(|k| binomial(big_j, k as i64) * 2u32 * upow(2 * (j - k), two_l))
            .sum();
        if l == 0 {
            sum += binomial(big_j, j as i64);
        }
        BigRational::new(sum, pow2(big_j))
    } else {
        let j = big_j.div_ceil(2);
        let sum: ExactInt = (0..j)
            .map(|k| binomial(big_j, k as i64) * upow(2 * j - 2 * k - 1, two_l))
            .sum();
        BigRational::new(sum, pow2(big_j - 1))
    }
}

/// `d^order/dx^order cos^J(x)` at `x = 0`.
pub fn derivative_at_zero(big_j: u64, order: u32) -> ExactRatio {
    if order % 2 == 1 {
        return BigRational::zero();
    }
    let l = order / 2;
    let v = diagonal_closed_form(big_j, l);
    if l % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `m -> diagonal_closed_form(m, l)` as a polynomial of degree `l` in `m`.
///
/// The diagonal value is the `2l`-th moment of a sum of `m` independent
/// signs (from `cos^m x = E[cos(S_m x)]`), hence a polynomial in `m`. It is
/// stored in Newton form `sum_i D_i C(m, i)` with nonnegative integer forward
/// differences `D_i`, which evaluates stably in floats for large `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalPolynomial {
    order: u32,
    forward_differences: Vec<ExactInt>,
}

impl DiagonalPolynomial {
    pub fn new(l: u32) -> Self {
        let mut values: Vec<ExactInt> = (0..=l as u64)
            .map(|m| {
                let v = diagonal_closed_form(m, l);
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect();
        let mut forward_differences = Vec::with_capacity(values.len());
        while !values.is_empty() {
            forward_differences.push(values[0].clone());
            values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        DiagonalPolynomial {
            order: l,
            forward_differences,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn forward_differences(&self) -> &[ExactInt] {
        &self.forward_differences
    }

    pub fn eval_exact(&self, m: u64) -> ExactInt {
        self.forward_differences
            .iter()
            .enumerate()
            .map(|(i, d)| d * binomial(m, i as i64))
            .sum()
    }

    pub fn eval_f64(&self, m: u64) -> f64 {
        let mut choose = 1.0f64;
        let mut total = 0.0;
        for (i, d) in self.forward_differences.iter().enumerate() {
            if i as u64 > m {
                break;
            }
            if i > 0 {
                choose *= (m - i as u64 + 1) as f64 / i as f64;
            }
            total += int_to_f64(d) * choose;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::falling_factorial;

    fn int(v: i64) -> ExactInt {
        BigInt::from(v)
    }

    fn ratio(n: i64, d: i64) -> ExactRatio {
        BigRational::new(int(n), int(d))
    }

    #[test]
    fn table_base_cells() {
        for j in 2..20u64 {
            let t = build_b_table(j, 1).unwrap();
            assert_eq!(t.cell(0, 0), Some(&int(1)));
            assert_eq!(t.cell(1, 0), Some(&int(j as i64)));
        }
        let t = build_b_table(4, 2).unwrap();
        assert_eq!(t.cell(2, 0), Some(&int(12)));
        assert_eq!(t.cell(1, 1), Some(&int(4)));
        assert_eq!(t.cell(2, 1), None);
    }

    #[test]
    fn table_rejects_order_at_or_above_power() {
        assert!(matches!(build_b_table(3, 3), Err(Error::UnsupportedRange(_))));
        assert!(matches!(build_b_table(3, 5), Err(Error::UnsupportedRange(_))));
        assert!(matches!(deriv_cos_power(2, 2, 0.1), Err(Error::UnsupportedRange(_))));
    }

    #[test]
    fn second_row_closed_form() {
        // unrolling the recursion: b^j_{2,1} = j * j + 2 * j(j-1) = 3j^2 - 2j
        for j in 4..40i64 {
            let t = build_b_table(j as u64, 3).unwrap();
            assert_eq!(t.cell(2, 1), Some(&int(3 * j * j - 2 * j)));
        }
    }

    #[test]
    fn edge_law_and_positivity() {
        for j in 2..=30u64 {
            let t = build_b_table(j, (j - 1) as u32).unwrap();
            for ((n1, n2), v) in t.cells() {
                assert!(v.is_positive(), "j={j} ({n1},{n2})");
                if n2 == 0 {
                    assert_eq!(v, &falling_factorial(j, n1 as u64).unwrap());
                }
                if n1 == n2 && n1 > 0 {
                    assert_eq!(Some(v), t.cell(n1, n2 - 1));
                }
            }
        }
    }

    #[test]
    fn symbolic_examples() {
        let mut expected = SinCosPoly::monomial(1, 1, -2);
        assert_eq!(symbolic_derivative(2, 1), expected);
        expected = SinCosPoly::monomial(2, 2, 12);
        expected.add_term(4, 0, int(-4));
        assert!(symbolic_derivative(4, 2).equivalent(&expected));
        let mut cubic = SinCosPoly::monomial(1, 2, 6);
        cubic.add_term(3, 0, int(-3));
        assert!(symbolic_derivative(3, 2).equivalent(&cubic));
        assert_eq!(symbolic_derivative(5, 0), SinCosPoly::cos_power(5));
    }

    #[test]
    fn canonical_form_is_unique() {
        // sin^2 + cos^2 == 1
        let mut p = SinCosPoly::monomial(0, 2, 1);
        p.add_term(2, 0, int(1));
        assert_eq!(p.canonical(), SinCosPoly::monomial(0, 0, 1));
        let mut q = SinCosPoly::monomial(1, 3, 1);
        q.add_term(3, 1, int(1));
        assert_eq!(q.canonical(), SinCosPoly::monomial(1, 1, 1));
    }

    #[test]
    fn table_matches_symbolic_oracle() {
        for j in 2..=12u32 {
            let table = build_b_table(j as u64, j - 1).unwrap();
            for order in 1..j {
                let from_table = table.derivative_poly(order).unwrap();
                assert!(
                    from_table.equivalent(&symbolic_derivative(j, order)),
                    "j={j} order={order}: {from_table} vs {}",
                    symbolic_derivative(j, order)
                );
            }
        }
    }

    #[test]
    fn first_derivative_formula() {
        for j in 2..10u64 {
            for &x in &[0.0f64, 0.4, 1.9] {
                let expected = -(j as f64) * x.cos().powi(j as i32 - 1) * x.sin();
                assert!((deriv_cos_power(j, 1, x).unwrap() - expected).abs() < 1e-13);
            }
        }
        assert_eq!(deriv_cos_power(5, 0, 0.3).unwrap(), 0.3f64.cos().powi(5));
    }

    fn nine_point(f: impl Fn(f64) -> f64, x: f64, h: f64, order: u32) -> f64 {
        let (coeffs, scale): ([f64; 9], f64) = match order {
            1 => ([1.0 / 280.0, -4.0 / 105.0, 0.2, -0.8, 0.0, 0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0], h),
            2 => ([-1.0 / 560.0, 8.0 / 315.0, -0.2, 1.6, -205.0 / 72.0, 1.6, -0.2, 8.0 / 315.0, -1.0 / 560.0], h * h),
            3 => ([-7.0 / 240.0, 0.3, -169.0 / 120.0, 61.0 / 30.0, 0.0, -61.0 / 30.0, 169.0 / 120.0, -0.3, 7.0 / 240.0], h.powi(3)),
            4 => ([7.0 / 240.0, -0.4, 169.0 / 60.0, -122.0 / 15.0, 91.0 / 8.0, -122.0 / 15.0, 169.0 / 60.0, -0.4, 7.0 / 240.0], h.powi(4)),
            _ => unreachable!(),
        };
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * f(x + (i as f64 - 4.0) * h))
            .sum::<f64>()
            / scale
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let fd = |j: u64, order: u32, x: f64| nine_point(|t| t.cos().powi(j as i32), x, 1e-2, order);
        let v = deriv_cos_power(6, 4, 0.7).unwrap();
        assert!((v - fd(6, 4, 0.7)).abs() < 1e-6);
        for j in 1..=10u64 {
            for order in 1..=4u32 {
                if order as u64 >= j {
                    continue;
                }
                for x in [0.0, 0.3, 1.0, 2.5] {
                    let exact = deriv_cos_power(j, order, x).unwrap();
                    let approx = fd(j, order, x);
                    assert!((exact - approx).abs() < 1e-6, "j={j} order={order} x={x}: {exact} vs {approx}");
                }
            }
        }
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(diagonal_closed_form(4, 1), ratio(4, 1));
        assert_eq!(diagonal_closed_form(3, 1), ratio(3, 1));
        assert_eq!(diagonal_closed_form(6, 1), ratio(6, 1));
        assert_eq!(diagonal_closed_form(7, 0), ratio(1, 1));
        assert_eq!(diagonal_closed_form(8, 0), ratio(1, 1));
        assert_eq!(derivative_at_zero(9, 1), ratio(0, 1));
        assert_eq!(derivative_at_zero(4, 2), ratio(-4, 1));
        assert_eq!(derivative_at_zero(1, 2), ratio(-1, 1));
        assert_eq!(derivative_at_zero(1, 4), ratio(1, 1));
    }

    #[test]
    fn diagonal_matches_table() {
        for l in 1..=10u32 {
            for j in (l as u64 + 1)..=30 {
                let even = build_b_table(2 * j, 2 * l).unwrap();
                let odd = build_b_table(2 * j - 1, 2 * l).unwrap();
                let de = diagonal_closed_form(2 * j, l);
                let dodd = diagonal_closed_form(2 * j - 1, l);
                assert!(de.is_integer() && dodd.is_integer());
                assert_eq!(&de.to_integer(), even.cell(l, l).unwrap());
                assert_eq!(&dodd.to_integer(), odd.cell(l, l).unwrap());
            }
        }
    }

    #[test]
    fn diagonal_polynomial_reproduces_closed_form() {
        for l in 0..=8u32 {
            let poly = DiagonalPolynomial::new(l);
            assert!(poly.forward_differences().iter().all(|d| !d.is_negative()));
            for m in 0..=60u64 {
                assert_eq!(BigRational::from(poly.eval_exact(m)), diagonal_closed_form(m, l), "l={l} m={m}");
                let f = poly.eval_f64(m);
                let e = int_to_f64(&poly.eval_exact(m));
                assert!((f - e).abs() <= 1e-13 * e.abs().max(1.0));
            }
        }
        // b^j_{1,1} = j, b^j_{2,2} = 3j^2 - 2j
        assert_eq!(DiagonalPolynomial::new(1).eval_exact(11), int(11));
        assert_eq!(DiagonalPolynomial::new(2).eval_exact(11), int(3 * 121 - 22));
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        build_b_table(4, 2).unwrap().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "j,n1,n2,value\n4,0,0,1\n4,1,0,4\n4,1,1,4\n4,2,0,12\n");
    }

    #[test]
    fn from_cells_roundtrip_and_validation() {
        let t = build_b_table(7, 4).unwrap();
        let rebuilt = BTable::from_cells(7, 4, t.cells().map(|(k, v)| (k, v.clone()))).unwrap();
        assert_eq!(rebuilt, t);
        assert!(BTable::from_cells(7, 1, vec![((0, 0), int(1))]).is_err());
        assert!(BTable::from_cells(7, 0, vec![((0, 0), int(1)), ((0, 0), int(1))]).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(symbolic_derivative(4, 2).to_string(), "-16 cos^4 + 12 cos^2");
        assert_eq!(SinCosPoly::monomial(1, 1, -2).to_string(), "-2 cos sin");
    }
}
