//! End-to-end property suites, runnable from the CLI without a test harness.
//!
//! Every check recomputes its quantities from scratch and compares them with
//! an independent oracle. The b-table builder is injectable so a deliberately
//! broken recursion can be run through the same suites.

use std::fmt;
use std::time::Instant;

use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::asymptotics::{
    build_c_table, leading_term_of_samples, even_moment_sum, trace_convergence, ConvergenceTrace, Parity,
};
use crate::deriv::{build_b_table, diagonal_closed_form, symbolic_derivative, BTable};
use crate::error::{Error, Result};
use crate::exact::{ratio_to_f64, ExactRatio};
use crate::kernel::{phi_eval_inf, psd_spot_check, KernelSpec, UnitVector};
use crate::sequence::SequenceModel;
use crate::transform::{
    classify_d, classify_inf, derivative_at_zero_series, reconstruct_error, transform_sequence, Order,
};

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Recursion against the symbolic oracle and the diagonal closed form.
    Identities,
    /// Leading constants, ratio convergence and moment-sum traces.
    Asymptotics,
    /// Circle transform round trips.
    Reconstruction,
    /// Classifier, derivative series and positive-definiteness draws.
    Kernels,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {:>8.3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Moment-sum traces computed by the asymptotics suite.
    pub traces: Vec<ConvergenceTrace>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub type TableBuilder = fn(u64, u32) -> Result<BTable>;

/// Angles used by the reconstruction and derivative checks.
pub const RECONSTRUCTION_SAMPLES: usize = 20;
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
pub const DERIVATIVE_TOL: f64 = 1e-5;
pub const PSD_TOL: f64 = 1e-10;
pub const PSD_DRAWS: usize = 100;
pub const PSD_POINTS: usize = 8;
pub const TRACE_JS: [u64; 4] = [256, 512, 1024, 2048];

/// Finite monomials up to degree 8, geometric and Poisson coefficient models,
/// all with unit mass.
pub fn reconstruction_fixtures() -> Vec<(String, SequenceModel)> {
    let mut out = Vec::new();
    for m in 0..=8usize {
        let mut terms = vec![0.0; m + 1];
        terms[m] = 1.0;
        out.push((format!("cos^{m}"), SequenceModel::finite(terms).unwrap()));
    }
    for r in [0.3, 0.5, 0.9] {
        out.push((format!("geometric r={r}"), SequenceModel::geometric(1.0 - r, r).unwrap()));
    }
    for c in [0.5, 2.0] {
        out.push((format!("poisson c={c}"), SequenceModel::poisson(c).unwrap()));
    }
    out
}

/// Reconstruction fixtures plus a power law whose series are still cheap to
/// certify at `1e-10`.
pub fn kernel_fixtures() -> Vec<(String, SequenceModel)> {
    let mut out = reconstruction_fixtures();
    out.push(("powerlaw p=4.5".into(), SequenceModel::power_law(1.0, 4.5).unwrap()));
    out
}

/// Kernel fixtures plus a slowly decaying power law, used where only the
/// analytic classification is needed.
pub fn classifier_fixtures() -> Vec<(String, SequenceModel)> {
    let mut out = kernel_fixtures();
    out.push(("powerlaw p=2.2".into(), SequenceModel::power_law(1.0, 2.2).unwrap()));
    out
}

/// Nine-point central difference for a second or fourth derivative.
pub fn central_difference(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64, order: u32) -> Result<f64> {
    const SECOND: [f64; 9] = [
        -1.0 / 560.0, 8.0 / 315.0, -1.0 / 5.0, 8.0 / 5.0, -205.0 / 72.0,
        8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0,
    ];
    const FOURTH: [f64; 9] = [
        7.0 / 240.0, -2.0 / 5.0, 169.0 / 60.0, -122.0 / 15.0, 91.0 / 8.0,
        -122.0 / 15.0, 169.0 / 60.0, -2.0 / 5.0, 7.0 / 240.0,
    ];
    let weights = match order {
        2 => &SECOND,
        4 => &FOURTH,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "nine-point stencil available for orders 2 and 4, got {order}"
            )))
        }
    };
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w * f(x + (i as f64 - 4.0) * h)?;
    }
    Ok(acc / h.powi(order as i32))
}

fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| std::f64::consts::PI * i as f64 / (n - 1) as f64)
        .collect()
}

fn random_point(rng: &mut StdRng, ambient: usize) -> UnitVector {
    loop {
        let v: Vec<f64> = (0..ambient).map(|_| StandardNormal.sample(rng)).collect();
        if let Ok(u) = UnitVector::normalized(v) {
            return u;
        }
    }
}

/// Runs the suites with a configurable b-table builder.
#[derive(Debug, Clone, Copy)]
pub struct Verifier {
    builder: TableBuilder,
    seed: u64,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            builder: build_b_table,
            seed: 0x5eed,
        }
    }
}

fn timed(id: u32, name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(v) => v,
        Err(e) => (false, format!("{}: {e}", e.name())),
    };
    Check {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

impl Verifier {
    pub fn with_builder(builder: TableBuilder) -> Self {
        Verifier {
            builder,
            ..Verifier::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn run(&self, suite: Suite) -> Report {
        let mut report = Report::default();
        if suite.includes(Suite::Identities) {
            report.checks.push(self.oracle_equivalence());
            report.checks.push(self.diagonal_identity());
        }
        if suite.includes(Suite::Asymptotics) {
            report.checks.push(self.leading_coefficients());
            report.checks.push(self.ratio_convergence());
            let (check, traces) = self.moment_sum_shape();
            report.checks.push(check);
            report.traces = traces;
        }
        if suite.includes(Suite::Reconstruction) {
            report.checks.push(self.reconstruction());
        }
        if suite.includes(Suite::Kernels) {
            report.checks.push(self.classifier());
            report.checks.push(self.derivative_series());
            report.checks.push(self.psd_draws());
        }
        report
    }

    /// Table-derived derivatives of `cos^j` equal the term-rewriting ones
    /// for `1 <= l < j <= 12`.
    pub fn oracle_equivalence(&self) -> Check {
        timed(1, "oracle equivalence", || {
            let mut compared = 0;
            for j in 2..=12u32 {
                let table = (self.builder)(j as u64, j - 1)?;
                for l in 1..j {
                    let from_table = table.derivative_poly(l)?.canonical();
                    if !from_table.equivalent(&symbolic_derivative(j, l)) {
                        return Ok((false, format!("mismatch at j={j}, order {l}: table gives {from_table}")));
                    }
                    compared += 1;
                }
            }
            Ok((true, format!("{compared} derivatives identical")))
        })
    }

    /// `b^J_{l,l}` equals the closed form for `J = 2j, 2j-1`,
    /// `1 <= l <= 10`, `l < j <= 30`.
    pub fn diagonal_identity(&self) -> Check {
        timed(2, "diagonal identity", || {
            let mut compared = 0;
            for j in 2..=30u64 {
                let l_max = 10.min(j - 1) as u32;
                for big_j in [2 * j, 2 * j - 1] {
                    let table = (self.builder)(big_j, 2 * l_max)?;
                    for l in 1..=l_max {
                        let cell = table.cell(l, l).cloned().unwrap_or_default();
                        if BigRational::from(cell.clone()) != diagonal_closed_form(big_j, l) {
                            return Ok((false, format!("b^{big_j}_{{{l},{l}}} = {cell} differs from closed form")));
                        }
                        compared += 1;
                    }
                }
            }
            Ok((true, format!("{compared} diagonal cells identical")))
        })
    }

    /// Interpolating `j -> b^j_{n1,n2}` exactly gives degree `n1` and leading
    /// coefficient `c_{n1,n2}` for `n1 <= 4`.
    pub fn leading_coefficients(&self) -> Check {
        timed(3, "leading coefficients", || {
            let c = build_c_table(4)?;
            for n1 in 0..=4u32 {
                for n2 in 0..=n1 {
                    let first = (n1 + n2) as u64 + 1;
                    let samples = (first..first + n1 as u64 + 3)
                        .map(|j| Ok((self.builder)(j, n1 + n2)?.cell(n1, n2).cloned().unwrap_or_default()))
                        .collect::<Result<Vec<_>>>()?;
                    let lead = leading_term_of_samples(samples)?;
                    let expected = BigRational::from(c.cell(n1, n2).unwrap().clone());
                    if lead.degree != n1 as usize || lead.coefficient != expected {
                        return Ok((
                            false,
                            format!(
                                "({n1},{n2}): degree {} coefficient {} vs c = {expected}",
                                lead.degree, lead.coefficient
                            ),
                        ));
                    }
                }
            }
            Ok((true, "15 cells have degree n1 and leading coefficient c_{n1,n2}".into()))
        })
    }

    fn ratio(&self, j: u64, n1: u32, n2: u32, c: &ExactRatio) -> Result<f64> {
        let b = (self.builder)(j, n1 + n2)?.cell(n1, n2).cloned().unwrap_or_default();
        let scale = c * BigRational::from(num_traits::pow(num_bigint::BigInt::from(j), n1 as usize));
        Ok(ratio_to_f64(&(BigRational::from(b) / scale)))
    }

    /// `|b^j / (c j^n1) - 1| <= 0.05` at `j = 2048`, strictly below the
    /// deviation at `j = 256`. Cells whose ratio is identically one have no
    /// room to decrease and pass when both deviations vanish.
    pub fn ratio_convergence(&self) -> Check {
        timed(4, "ratio convergence", || {
            let c = build_c_table(4)?;
            let mut worst = 0.0f64;
            for n1 in 1..=4u32 {
                for n2 in 0..=n1 {
                    let cn = BigRational::from(c.cell(n1, n2).unwrap().clone());
                    let near = (self.ratio(256, n1, n2, &cn)? - 1.0).abs();
                    let far = (self.ratio(2048, n1, n2, &cn)? - 1.0).abs();
                    worst = worst.max(far);
                    let shrinking = far < near || (far == 0.0 && near == 0.0);
                    if far > 0.05 || !shrinking {
                        return Ok((
                            false,
                            format!("({n1},{n2}): deviation {far:.3e} at 2048, {near:.3e} at 256"),
                        ));
                    }
                }
            }
            Ok((true, format!("max deviation at j=2048 is {worst:.3e}")))
        })
    }

    /// Scaled moment sums settle to 2% between `j = 1024` and `2048`, and the
    /// even sum matches the diagonal closed form exactly for `l < j <= 20`.
    pub fn moment_sum_shape(&self) -> (Check, Vec<ConvergenceTrace>) {
        let mut traces = Vec::new();
        let check = timed(5, "moment sum shape", || {
            let mut worst = 0.0f64;
            let mut constants = Vec::new();
            for l in 1..=5u32 {
                let even = trace_convergence(l, Parity::Even, &TRACE_JS)?;
                let odd = trace_convergence(l, Parity::Odd, &TRACE_JS)?;
                for t in [&even, &odd] {
                    let change = t.last_step_change().unwrap();
                    worst = worst.max(change);
                    if change > 0.02 {
                        return Ok((false, format!("l={l} {}: v(2048)/v(1024) - 1 = {change:.3e}", t.parity.as_str())));
                    }
                }
                constants.push(format!("{:.4}", even.estimated_constant / odd.estimated_constant));
                traces.push(even);
                traces.push(odd);
            }
            for j in 2..=20u64 {
                for l in 1..j as u32 {
                    if even_moment_sum(j, l) != diagonal_closed_form(2 * j, l) {
                        return Ok((false, format!("even sum differs from closed form at j={j}, l={l}")));
                    }
                }
            }
            Ok((
                true,
                format!(
                    "max step change {worst:.3e}; even/odd constants for l=1..5: {}",
                    constants.join(" ")
                ),
            ))
        });
        (check, traces)
    }

    /// Circle coefficients reproduce the cosine-power series to `1e-9` with a
    /// certified truncation, and the `cos^2`, `cos^3` coefficients are exact.
    pub fn reconstruction(&self) -> Check {
        timed(6, "transform reconstruction", || {
            let thetas = uniform_angles(RECONSTRUCTION_SAMPLES);
            let tol = 1e-12;
            let mut worst = 0.0f64;
            for (name, model) in reconstruction_fixtures() {
                let seq = transform_sequence(&model, None, tol)?;
                let certified = seq.total_error_bound + seq.omitted_mass_bound + tol;
                let err = reconstruct_error(&model, &thetas, None, tol)?;
                worst = worst.max(err);
                if err > RECONSTRUCTION_TOL || certified > RECONSTRUCTION_TOL {
                    return Ok((false, format!("{name}: error {err:.3e}, certified bound {certified:.3e}")));
                }
            }
            let expect = [(2usize, [(0u64, 0.5), (2, 0.5)]), (3, [(1, 0.75), (3, 0.25)])];
            for (m, pairs) in expect {
                let mut terms = vec![0.0; m + 1];
                terms[m] = 1.0;
                let seq = transform_sequence(&SequenceModel::finite(terms)?, Some(m as u64), tol)?;
                for (n, v) in seq.terms.iter().map(|t| (t.index, t.value)) {
                    let want = pairs.iter().find(|p| p.0 == n).map_or(0.0, |p| p.1);
                    if (v - want).abs() > 1e-12 {
                        return Ok((false, format!("cos^{m}: a_{n} = {v}, expected {want}")));
                    }
                }
            }
            Ok((true, format!("max error {worst:.3e}; cos^2 and cos^3 coefficients exact")))
        })
    }

    /// Power laws land at the analytic orders, geometric and Poisson models
    /// are unbounded, and the two classifiers agree at doubled weight.
    pub fn classifier(&self) -> Check {
        timed(7, "smoothness classifier", || {
            let probe = 6;
            for (name, model) in classifier_fixtures() {
                let inf = classify_inf(&model, 2 * probe)?;
                let d = classify_d(&model, probe)?;
                let expected = match name.as_str() {
                    "powerlaw p=4.5" => Order::Finite(3),
                    "powerlaw p=2.2" => Order::Finite(1),
                    _ => Order::Unbounded,
                };
                if inf.max_ell != expected {
                    return Ok((false, format!("{name}: max_ell {:?}, expected {expected:?}", inf.max_ell)));
                }
                for v in &d.per_ell {
                    if v.converges != inf.per_ell[2 * v.ell as usize].converges {
                        return Ok((false, format!("{name}: d-mode and inf-mode disagree at l={}", v.ell)));
                    }
                }
            }
            Ok((true, "orders match; d/inf weight consistency on all fixtures".into()))
        })
    }

    /// `phi^(2l)(0)` from the diagonal series matches nine-point finite
    /// differences of the kernel at `l = 1, 2`.
    pub fn derivative_series(&self) -> Check {
        timed(8, "derivative series", || {
            let h = 5e-3;
            let mut worst = 0.0f64;
            for (name, model) in kernel_fixtures() {
                let spec = KernelSpec::on_hilbert_sphere(model.clone());
                let eval_tol = 1e-15 * model.mass_bound();
                // phi is even in theta
                let phi = |x: f64| phi_eval_inf(&spec, x.abs(), eval_tol);
                for l in 1..=2u32 {
                    if !model.weighted_sum_converges(l) {
                        continue;
                    }
                    let series = derivative_at_zero_series(&model, l, 1e-10)?;
                    let fd = central_difference(phi, 0.0, h, 2 * l)?;
                    let diff = (series - fd).abs();
                    worst = worst.max(diff);
                    if diff > DERIVATIVE_TOL {
                        return Ok((false, format!("{name}, l={l}: series {series} vs difference {fd}")));
                    }
                }
            }
            Ok((true, format!("max difference {worst:.3e}")))
        })
    }

    /// Quadratic forms of random point sets on `S^2` and `S^4` stay above the
    /// scaled tolerance for both kernel families.
    pub fn psd_draws(&self) -> Check {
        timed(9, "psd spot check", || {
            let mut rng = StdRng::seed_from_u64(self.seed);
            let fixtures = kernel_fixtures();
            let mut worst_margin = f64::INFINITY;
            let mut checked = 0usize;
            for d in [2u32, 4] {
                let specs = fixtures
                    .iter()
                    .flat_map(|(name, model)| {
                        [
                            (format!("{name} on S^inf"), KernelSpec::on_hilbert_sphere(model.clone())),
                            (format!("{name} on S^{d}"), KernelSpec::on_sphere(d, model.clone()).unwrap()),
                        ]
                    })
                    .collect::<Vec<_>>();
                for _ in 0..PSD_DRAWS {
                    let points: Vec<UnitVector> =
                        (0..PSD_POINTS).map(|_| random_point(&mut rng, d as usize + 1)).collect();
                    let weights: Vec<f64> = (0..PSD_POINTS).map(|_| StandardNormal.sample(&mut rng)).collect();
                    for (name, spec) in &specs {
                        let v = psd_spot_check(spec, &points, &weights, PSD_TOL)?;
                        checked += 1;
                        worst_margin = worst_margin.min(v.quadratic_form - v.threshold);
                        if !v.pass {
                            return Ok((
                                false,
                                format!("{name}: form {:.3e} below {:.3e}", v.quadratic_form, v.threshold),
                            ));
                        }
                    }
                }
            }
            Ok((true, format!("{checked} forms checked; smallest margin {worst_margin:.3e}")))
        })
    }
}
