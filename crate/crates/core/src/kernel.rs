//! Evaluation of isotropic positive definite functions on `S^d` and `S^inf`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::compensated_sum;
use crate::sequence::SequenceModel;

/// Slack allowed on `|t| <= 1` before an argument is rejected; values inside
/// the slack are clamped.
const ARG_SLACK: f64 = 1e-12;

/// Which sphere a kernel lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sphere {
    /// `S^d` embedded in `R^(d+1)`, `d >= 1`.
    Dimension(u32),
    /// The Hilbert sphere.
    Infinite,
}

/// An isotropic kernel given by its Schoenberg coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    sphere: Sphere,
    coefficients: SequenceModel,
}

impl KernelSpec {
    pub fn new(sphere: Sphere, coefficients: SequenceModel) -> Result<Self> {
        if let Sphere::Dimension(0) = sphere {
            return Err(Error::InvalidArgument("sphere dimension must be at least 1".into()));
        }
        Ok(KernelSpec { sphere, coefficients })
    }

    pub fn on_sphere(d: u32, coefficients: SequenceModel) -> Result<Self> {
        Self::new(Sphere::Dimension(d), coefficients)
    }

    pub fn on_hilbert_sphere(coefficients: SequenceModel) -> Self {
        KernelSpec {
            sphere: Sphere::Infinite,
            coefficients,
        }
    }

    pub fn sphere(&self) -> Sphere {
        self.sphere
    }

    pub fn coefficients(&self) -> &SequenceModel {
        &self.coefficients
    }

    /// Gegenbauer index `(d - 1) / 2`, `None` on the Hilbert sphere.
    pub fn lambda(&self) -> Option<f64> {
        match self.sphere {
            Sphere::Dimension(d) => Some((d as f64 - 1.0) / 2.0),
            Sphere::Infinite => None,
        }
    }

    /// `phi(theta)` on the kernel's sphere.
    pub fn eval(&self, theta: f64, tol: f64) -> Result<f64> {
        match self.sphere {
            Sphere::Dimension(_) => phi_eval_d(self, theta, tol),
            Sphere::Infinite => phi_eval_inf(self, theta, tol),
        }
    }
}

/// Point on a unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        let norm = components.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "unit vector has norm {norm}"
            )));
        }
        Ok(UnitVector(components))
    }

    /// Scales a nonzero vector onto the sphere.
    pub fn normalized(mut components: Vec<f64>) -> Result<Self> {
        let norm = components.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        components.iter_mut().for_each(|x| *x /= norm);
        Self::new(components)
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    let twice = 2.0 * lambda;
    if lambda < 0.0 || twice.fract() != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "lambda must be a nonnegative half-integer, got {lambda}"
        )));
    }
    Ok(())
}

fn clamp_argument(t: f64) -> Result<f64> {
    if t.is_nan() || t.abs() > 1.0 + ARG_SLACK {
        return Err(Error::InvalidArgument(format!("argument {t} outside [-1, 1]")));
    }
    Ok(t.clamp(-1.0, 1.0))
}

/// Normalized Gegenbauer polynomial `C_k^lambda(t) / C_k^lambda(1)`.
///
/// For `lambda = 0` this is the Chebyshev limit `cos(k arccos t)`.
pub fn gegenbauer_normalized(k: u32, lambda: f64, t: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let t = clamp_argument(t)?;
    if lambda == 0.0 {
        return Ok((k as f64 * t.acos()).cos());
    }
    Ok(GegenbauerSweep::new(lambda, t).nth(k as usize).unwrap())
}

/// Forward sweep over `k = 0, 1, 2, ...` of the normalized polynomials.
///
/// With `g_k = C_k(t)/C_k(1)` the three-term recurrence becomes
/// `g_{k+1} = (2(k + lambda) t g_k - k g_{k-1}) / (k + 2 lambda)`, which for
/// `lambda = 0` reduces to the Chebyshev recurrence.
struct GegenbauerSweep {
    lambda: f64,
    t: f64,
    k: u32,
    prev: f64,
    cur: f64,
}

impl GegenbauerSweep {
    fn new(lambda: f64, t: f64) -> Self {
        GegenbauerSweep {
            lambda,
            t,
            k: 0,
            prev: 0.0,
            cur: 1.0,
        }
    }
}

impl Iterator for GegenbauerSweep {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.cur;
        let k = self.k as f64;
        let next = if self.k == 0 {
            self.t
        } else {
            (2.0 * (k + self.lambda) * self.t * self.cur - k * self.prev) / (k + 2.0 * self.lambda)
        };
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        Some(out)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta.is_finite() && (-ARG_SLACK..=std::f64::consts::PI + ARG_SLACK).contains(&theta)) {
        return Err(Error::InvalidArgument(format!("theta {theta} outside [0, pi]")));
    }
    Ok(())
}

/// Gegenbauer expansion on `S^d`, truncated where the coefficient tail drops
/// below `tol` (the normalized polynomials are bounded by one).
pub fn phi_eval_d(spec: &KernelSpec, theta: f64, tol: f64) -> Result<f64> {
    let Some(lambda) = spec.lambda() else {
        return Err(Error::InvalidArgument("phi_eval_d needs a finite-dimensional sphere".into()));
    };
    check_theta(theta)?;
    let model = spec.coefficients();
    let terms = model.truncation_index(0, tol)?;
    let t = theta.cos();
    let values = GegenbauerSweep::new(lambda, t)
        .take(terms as usize)
        .enumerate()
        .map(|(k, g)| model.term(k as u64) * g);
    Ok(compensated_sum(values))
}

/// Cosine-power expansion on the Hilbert sphere with certified truncation.
pub fn phi_eval_inf(spec: &KernelSpec, theta: f64, tol: f64) -> Result<f64> {
    check_theta(theta)?;
    cosine_power_series(spec.coefficients(), theta.cos(), tol)
}

/// `sum_m a_m t^m` for `|t| <= 1`, truncated with tail bound `<= tol`.
pub(crate) fn cosine_power_series(model: &SequenceModel, t: f64, tol: f64) -> Result<f64> {
    let terms = model.truncation_index(0, tol)?;
    let mut power = 1.0;
    let values = (0..terms).map(|m| {
        let v = model.term(m) * power;
        power *= t;
        v
    });
    Ok(compensated_sum(values))
}

/// Geodesic distance `arccos(xi . zeta)`.
pub fn geodesic_distance(xi: &UnitVector, zeta: &UnitVector) -> Result<f64> {
    if xi.len() != zeta.len() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {}",
            xi.len(),
            zeta.len()
        )));
    }
    let dot: f64 = xi.0.iter().zip(&zeta.0).map(|(a, b)| a * b).sum();
    Ok(dot.clamp(-1.0, 1.0).acos())
}

/// Outcome of a quadratic-form positive-definiteness check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdVerdict {
    pub quadratic_form: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Evaluates `sum_ij w_i w_j phi(rho(x_i, x_j))` and compares it against
/// `-tol (sum |w|)^2 (sum a)`.
///
/// The kernel series is evaluated to `tol * mass / 2`, so truncation alone
/// moves the form by at most half the allowed slack.
pub fn psd_spot_check(
    spec: &KernelSpec,
    points: &[UnitVector],
    weights: &[f64],
    tol: f64,
) -> Result<PsdVerdict> {
    if points.len() != weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} points but {} weights",
            points.len(),
            weights.len()
        )));
    }
    if let (Sphere::Dimension(d), Some(p)) = (spec.sphere(), points.first()) {
        if p.len() != d as usize + 1 {
            return Err(Error::DimensionMismatch(format!(
                "points in R^{} do not lie on S^{d}",
                p.len()
            )));
        }
    }
    let mass = spec.coefficients().mass_bound();
    let weight_l1: f64 = weights.iter().map(|w| w.abs()).sum();
    let threshold = -tol * weight_l1 * weight_l1 * mass;
    if weight_l1 == 0.0 || mass == 0.0 {
        return Ok(PsdVerdict {
            quadratic_form: 0.0,
            threshold,
            pass: true,
        });
    }
    let eval_tol = tol * mass / 2.0;
    let diag = spec.eval(0.0, eval_tol)?;
    let mut terms = Vec::with_capacity(points.len() * (points.len() + 1) / 2);
    for i in 0..points.len() {
        terms.push(weights[i] * weights[i] * diag);
        for j in 0..i {
            let rho = geodesic_distance(&points[i], &points[j])?;
            terms.push(2.0 * weights[i] * weights[j] * spec.eval(rho, eval_tol)?);
        }
    }
    let quadratic_form = compensated_sum(terms);
    Ok(PsdVerdict {
        quadratic_form,
        threshold,
        pass: quadratic_form >= threshold,
    })
}
