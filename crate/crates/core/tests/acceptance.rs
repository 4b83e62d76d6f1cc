//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so every line is printed; exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use spherekernel::asymptotics::{
    asymptotic_ratio, build_c_table, interpolate_leading_term, even_moment_sum, trace_convergence, Parity,
};
use spherekernel::deriv::{build_b_table, diagonal_closed_form, symbolic_derivative, BTable};
use spherekernel::kernel::{phi_eval_inf, psd_spot_check};
use spherekernel::transform::{
    classify_d, classify_inf, derivative_at_zero_series, reconstruct_error, transform_sequence, Order,
};
use spherekernel::verify::{Suite, Verifier};
use spherekernel::{KernelSpec, Result, SequenceModel, UnitVector};

type Outcome = Result<std::result::Result<String, String>>;
type Criterion = (&'static str, fn() -> Outcome);

fn monomial(m: usize) -> SequenceModel {
    let mut terms = vec![0.0; m + 1];
    terms[m] = 1.0;
    SequenceModel::finite(terms).unwrap()
}

fn reconstruction_models() -> Vec<(String, SequenceModel)> {
    let mut out: Vec<_> = (0..=8).map(|m| (format!("cos^{m}"), monomial(m))).collect();
    for r in [0.3, 0.5, 0.9] {
        out.push((format!("geometric {r}"), SequenceModel::geometric(1.0 - r, r).unwrap()));
    }
    for c in [0.5, 2.0] {
        out.push((format!("poisson {c}"), SequenceModel::poisson(c).unwrap()));
    }
    out
}

fn kernel_models() -> Vec<(String, SequenceModel)> {
    let mut out = reconstruction_models();
    out.push(("powerlaw 4.5".into(), SequenceModel::power_law(1.0, 4.5).unwrap()));
    out
}

fn criterion_1() -> Outcome {
    for j in 2..=12u32 {
        let table = build_b_table(j as u64, j - 1)?;
        for l in 1..j {
            if !table.derivative_poly(l)?.canonical().equivalent(&symbolic_derivative(j, l)) {
                return Ok(Err(format!("j={j} order {l}")));
            }
        }
    }
    Ok(Ok("all 1 <= l < j <= 12 identical".into()))
}

fn criterion_2() -> Outcome {
    for j in 2..=30u64 {
        let l_max = 10.min(j - 1) as u32;
        for big_j in [2 * j, 2 * j - 1] {
            let table = build_b_table(big_j, 2 * l_max)?;
            for l in 1..=l_max {
                let cell = BigRational::from(table.cell(l, l).unwrap().clone());
                if cell != diagonal_closed_form(big_j, l) {
                    return Ok(Err(format!("J={big_j} l={l}")));
                }
            }
        }
    }
    Ok(Ok("1 <= l <= 10, l < j <= 30, both parities identical".into()))
}

fn criterion_3() -> Outcome {
    let c = build_c_table(4)?;
    for n1 in 0..=4u32 {
        for n2 in 0..=n1 {
            let lead = interpolate_leading_term(n1, n2, n1 as usize + 3)?;
            let want = BigRational::from(c.cell(n1, n2).unwrap().clone());
            if lead.degree != n1 as usize || lead.coefficient != want {
                return Ok(Err(format!("({n1},{n2}) degree {} coeff {}", lead.degree, lead.coefficient)));
            }
        }
    }
    Ok(Ok("degree n1, leading coefficient c_{n1,n2} for n1 <= 4".into()))
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    for n1 in 1..=4u32 {
        for n2 in 0..=n1 {
            let near = (asymptotic_ratio(256, n1, n2)? - 1.0).abs();
            let far = (asymptotic_ratio(2048, n1, n2)? - 1.0).abs();
            worst = worst.max(far);
            // (1,0) and (1,1) are exactly j, so both deviations are zero
            let shrinks = far < near || (far == 0.0 && near == 0.0);
            if far > 0.05 || !shrinks {
                return Ok(Err(format!("({n1},{n2}) {far:e} at 2048 vs {near:e} at 256")));
            }
        }
    }
    Ok(Ok(format!("max deviation at j=2048: {worst:.3e}")))
}

fn criterion_5() -> Outcome {
    let js = [1024, 2048];
    let mut ratios = Vec::new();
    for l in 1..=5u32 {
        let even = trace_convergence(l, Parity::Even, &js)?;
        let odd = trace_convergence(l, Parity::Odd, &js)?;
        for t in [&even, &odd] {
            let change = t.last_step_change().unwrap();
            if change > 0.02 {
                return Ok(Err(format!("l={l} {:?} change {change:e}", t.parity)));
            }
        }
        ratios.push(format!("{:.4}", even.estimated_constant / odd.estimated_constant));
    }
    for j in 2..=20u64 {
        for l in 1..j as u32 {
            if even_moment_sum(j, l) != diagonal_closed_form(2 * j, l) {
                return Ok(Err(format!("cross identity at j={j} l={l}")));
            }
        }
    }
    Ok(Ok(format!("even/odd constant ratios l=1..5: {}", ratios.join(", "))))
}

fn criterion_6() -> Outcome {
    let tol = 1e-12;
    let thetas: Vec<f64> = (0..20).map(|i| std::f64::consts::PI * i as f64 / 19.0).collect();
    let mut worst = 0.0f64;
    for (name, model) in reconstruction_models() {
        let seq = transform_sequence(&model, None, tol)?;
        let certified = seq.total_error_bound + seq.omitted_mass_bound + tol;
        let err = reconstruct_error(&model, &thetas, None, tol)?;
        worst = worst.max(err);
        if err > 1e-9 || certified > 1e-9 {
            return Ok(Err(format!("{name}: error {err:e}, bound {certified:e}")));
        }
    }
    let cos2 = transform_sequence(&monomial(2), Some(2), tol)?;
    let cos3 = transform_sequence(&monomial(3), Some(3), tol)?;
    let got2: Vec<f64> = cos2.values().collect();
    let got3: Vec<f64> = cos3.values().collect();
    let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12);
    if !close(&got2, &[0.5, 0.0, 0.5]) || !close(&got3, &[0.0, 0.75, 0.0, 0.25]) {
        return Ok(Err(format!("cos^2 -> {got2:?}, cos^3 -> {got3:?}")));
    }
    Ok(Ok(format!("max reconstruction error {worst:.3e}")))
}

fn criterion_7() -> Outcome {
    let p45 = classify_inf(&SequenceModel::power_law(1.0, 4.5)?, 6)?;
    let p22 = classify_inf(&SequenceModel::power_law(1.0, 2.2)?, 6)?;
    if p45.max_ell != Order::Finite(3) || p45.derivative_order != Order::Finite(6) {
        return Ok(Err(format!("p=4.5 gave {:?}", p45.max_ell)));
    }
    if p22.max_ell != Order::Finite(1) {
        return Ok(Err(format!("p=2.2 gave {:?}", p22.max_ell)));
    }
    let mut all = kernel_models();
    all.push(("powerlaw 2.2".into(), SequenceModel::power_law(1.0, 2.2)?));
    for (name, model) in &all {
        let inf = classify_inf(model, 12)?;
        let d = classify_d(model, 6)?;
        if !name.starts_with("powerlaw") && inf.max_ell != Order::Unbounded {
            return Ok(Err(format!("{name} not unbounded")));
        }
        for v in &d.per_ell {
            if v.converges != inf.per_ell[2 * v.ell as usize].converges {
                return Ok(Err(format!("{name}: weight mismatch at l={}", v.ell)));
            }
        }
    }
    Ok(Ok("p=4.5 -> 3, p=2.2 -> 1, others unbounded, d/inf consistent".into()))
}

fn nine_point(f: impl Fn(f64) -> Result<f64>, h: f64, order: u32) -> Result<f64> {
    let w: [f64; 9] = if order == 2 {
        [-1.0 / 560.0, 8.0 / 315.0, -0.2, 1.6, -205.0 / 72.0, 1.6, -0.2, 8.0 / 315.0, -1.0 / 560.0]
    } else {
        [7.0 / 240.0, -0.4, 169.0 / 60.0, -122.0 / 15.0, 91.0 / 8.0, -122.0 / 15.0, 169.0 / 60.0, -0.4, 7.0 / 240.0]
    };
    let mut acc = 0.0;
    for (i, wi) in w.iter().enumerate() {
        acc += wi * f((i as f64 - 4.0) * h)?;
    }
    Ok(acc / h.powi(order as i32))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    for (name, model) in kernel_models() {
        let spec = KernelSpec::on_hilbert_sphere(model.clone());
        for l in 1..=2u32 {
            let series = derivative_at_zero_series(&model, l, 1e-10)?;
            let fd = nine_point(|x| phi_eval_inf(&spec, x.abs(), 1e-15), 5e-3, 2 * l)?;
            worst = worst.max((series - fd).abs());
            if (series - fd).abs() > 1e-5 {
                return Ok(Err(format!("{name} l={l}: {series} vs {fd}")));
            }
        }
    }
    Ok(Ok(format!("max |series - finite difference| = {worst:.3e}")))
}

fn criterion_9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20261014);
    let mut lowest = f64::INFINITY;
    for d in [2u32, 4] {
        for _ in 0..100 {
            let points: Vec<UnitVector> = (0..8)
                .map(|_| {
                    let v: Vec<f64> = (0..=d).map(|_| StandardNormal.sample(&mut rng)).collect();
                    UnitVector::normalized(v).unwrap()
                })
                .collect();
            let weights: Vec<f64> = (0..8).map(|_| StandardNormal.sample(&mut rng)).collect();
            for (name, model) in kernel_models() {
                for spec in [KernelSpec::on_hilbert_sphere(model.clone()), KernelSpec::on_sphere(d, model)?] {
                    let v = psd_spot_check(&spec, &points, &weights, 1e-10)?;
                    lowest = lowest.min(v.quadratic_form - v.threshold);
                    if !v.pass {
                        return Ok(Err(format!("{name} {:?}: {} < {}", spec.sphere(), v.quadratic_form, v.threshold)));
                    }
                }
            }
        }
    }
    Ok(Ok(format!("smallest margin above threshold {lowest:.3e}")))
}

/// The b-table recursion with the edge factor `j - n1` in place of
/// `j - (n1 - 1)`.
fn corrupted_table(j: u64, max_order: u32) -> Result<BTable> {
    let mut cells: HashMap<(u32, u32), BigInt> = HashMap::new();
    cells.insert((0, 0), BigInt::from(1));
    for level in 1..=max_order {
        for n2 in 0..=level / 2 {
            let n1 = level - n2;
            let v = if n2 == 0 {
                &cells[&(n1 - 1, 0)] * (j - n1 as u64)
            } else if n2 < n1 {
                &cells[&(n1 - 1, n2)] * (j - (n1 as u64 - 1) + n2 as u64) + &cells[&(n1, n2 - 1)] * (n1 - n2 + 1)
            } else {
                cells[&(n1, n2 - 1)].clone()
            };
            cells.insert((n1, n2), v);
        }
    }
    BTable::from_cells(j, max_order, cells)
}

fn mutation_control() -> Outcome {
    let report = Verifier::with_builder(corrupted_table).run(Suite::All);
    let failed: Vec<u32> = report.checks.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    if report.passed() {
        Ok(Err("corrupted recursion passed every check".into()))
    } else {
        Ok(Ok(format!("corrupted recursion rejected by checks {failed:?}")))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 oracle equivalence", criterion_1),
        ("2 diagonal identity", criterion_2),
        ("3 exact leading coefficient", criterion_3),
        ("4 leading ratio", criterion_4),
        ("5 moment sum shape", criterion_5),
        ("6 transform reconstruction", criterion_6),
        ("7 smoothness classifier", criterion_7),
        ("8 derivative series", criterion_8),
        ("9 psd spot check", criterion_9),
        ("- mutation control", mutation_control),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("{}: {e}", e.name())),
        };
        failures += usize::from(!ok);
        println!(
            "{} criterion {name:<30} {:>7.3}s  {detail}",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
