//! Path-ordered exponential of the ring connection.
//!
//! Solves `dU/dφ = −i σ·𝓐(φ,θ) U` with `U(0) = I` on a uniform grid. Every
//! step multiplies the accumulated holonomy on the LEFT, so factors belonging
//! to larger φ always stand to the left of earlier ones:
//!
//! ```text
//! U(φ_N) = S_N · S_{N−1} · … · S_1
//! ```
//!
//! Each step factor is itself an SU(2) exponential, so the result stays on the
//! group up to rounding whatever the step count.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AcError, Result};
use crate::field::AcConfig;
use crate::su2::{Generator3, Su2};

/// Step count of the brute-force reference propagation.
pub const ORACLE_STEPS: usize = 1_000_000;

/// Default uniform step count.
pub const DEFAULT_STEPS: usize = 4096;

/// Hard cap for step doubling when a tolerance is requested.
pub const MAX_STEPS: usize = 1 << 24;

const RENORM_EVERY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Product of midpoint exponentials, second order.
    ProductExponentials,
    /// One-term Magnus expansion with midpoint quadrature. Numerically the
    /// same scheme as [`Method::ProductExponentials`].
    MidpointMagnus,
    /// Fourth-order commutator-free scheme with two Gauss-Legendre nodes.
    #[serde(rename = "commutator_free_4")]
    CommutatorFree4,
}

impl Method {
    pub const ALL: [Method; 3] = [
        Method::ProductExponentials,
        Method::MidpointMagnus,
        Method::CommutatorFree4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ProductExponentials => "product_exponentials",
            Method::MidpointMagnus => "midpoint_magnus",
            Method::CommutatorFree4 => "commutator_free_4",
        }
    }

    /// Formal order of accuracy.
    pub fn order(&self) -> u32 {
        match self {
            Method::ProductExponentials | Method::MidpointMagnus => 2,
            Method::CommutatorFree4 => 4,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = AcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product_exponentials" | "product" => Ok(Method::ProductExponentials),
            "midpoint_magnus" | "magnus" => Ok(Method::MidpointMagnus),
            "commutator_free_4" | "cf4" => Ok(Method::CommutatorFree4),
            other => Err(AcError::InvalidSpec(format!("unknown method {other:?}"))),
        }
    }
}

/// Discretisation of `[0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSpec {
    pub method: Method,
    pub steps: usize,
    /// When set, the step count is doubled until two successive holonomies
    /// differ by less than this (Frobenius norm).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        IntegratorSpec {
            method: Method::CommutatorFree4,
            steps: DEFAULT_STEPS,
            tolerance: None,
        }
    }
}

impl IntegratorSpec {
    pub fn new(method: Method, steps: usize) -> Self {
        IntegratorSpec {
            method,
            steps,
            tolerance: None,
        }
    }

    pub fn oracle() -> Self {
        IntegratorSpec::new(Method::ProductExponentials, ORACLE_STEPS)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 4 {
            return Err(AcError::InvalidSpec(format!(
                "steps must be >= 4, got {}",
                self.steps
            )));
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(AcError::InvalidSpec(format!(
                    "tolerance must be positive, got {tol}"
                )));
            }
        }
        Ok(())
    }
}

/// Node and weight set of the two-exponential commutator-free step
///
/// ```text
/// S = exp(h(w_late·A₁ + w_early·A₂)) · exp(h(w_early·A₁ + w_late·A₂))
/// ```
///
/// with `A_i = A(φ + c_i h)`. The standard fourth-order choice (Blanes & Moan,
/// "Fourth- and sixth-order commutator-free Magnus integrators", 2006) puts
/// `c_i` at the Gauss-Legendre points and `w = 1/4 ± √3/6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cf4Scheme {
    pub c1: f64,
    pub c2: f64,
    pub w_early: f64,
    pub w_late: f64,
}

impl Cf4Scheme {
    pub const STANDARD: Cf4Scheme = Cf4Scheme {
        c1: 0.5 - 0.288_675_134_594_812_9,
        c2: 0.5 + 0.288_675_134_594_812_9,
        w_early: 0.25 + 0.288_675_134_594_812_9,
        w_late: 0.25 - 0.288_675_134_594_812_9,
    };
}

impl Default for Cf4Scheme {
    fn default() -> Self {
        Cf4Scheme::STANDARD
    }
}

/// Partial holonomies `U(φ)` at increasing angles, starting at `(0, I)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyTrace {
    pub samples: Vec<(f64, Su2)>,
}

impl HolonomyTrace {
    pub fn last(&self) -> Option<&(f64, Su2)> {
        self.samples.last()
    }
}

/// Holonomy `U(2π)` around the full ring.
pub fn propagate(config: &AcConfig, spec: &IntegratorSpec) -> Result<Su2> {
    propagate_between(config, spec, 0.0, 2.0 * PI)
}

/// Transport `U(to ← from)` with `spec.steps` steps on `[from, to]`.
///
/// Honors `spec.tolerance` by step doubling.
pub fn propagate_between(
    config: &AcConfig,
    spec: &IntegratorSpec,
    from: f64,
    to: f64,
) -> Result<Su2> {
    spec.validate()?;
    config.check_geometry()?;
    let Some(tol) = spec.tolerance else {
        return integrate(config, spec.method, spec.steps, from, to, &Cf4Scheme::STANDARD);
    };
    let mut steps = spec.steps;
    let mut coarse = integrate(config, spec.method, steps, from, to, &Cf4Scheme::STANDARD)?;
    while steps < MAX_STEPS {
        steps *= 2;
        let fine = integrate(config, spec.method, steps, from, to, &Cf4Scheme::STANDARD)?;
        if fine.frobenius_distance(&coarse) < tol {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(AcError::InvalidSpec(format!(
        "tolerance {tol} not reached within {MAX_STEPS} steps"
    )))
}

/// Fourth-order commutator-free propagation with an explicit coefficient set.
pub fn propagate_cf4_with(
    config: &AcConfig,
    steps: usize,
    scheme: &Cf4Scheme,
) -> Result<Su2> {
    IntegratorSpec::new(Method::CommutatorFree4, steps).validate()?;
    config.check_geometry()?;
    integrate(config, Method::CommutatorFree4, steps, 0.0, 2.0 * PI, scheme)
}

fn integrate(
    config: &AcConfig,
    method: Method,
    steps: usize,
    from: f64,
    to: f64,
    scheme: &Cf4Scheme,
) -> Result<Su2> {
    let h = (to - from) / steps as f64;
    let mut u = Su2::identity();
    for k in 0..steps {
        let phi = from + h * k as f64;
        let step = match method {
            Method::ProductExponentials | Method::MidpointMagnus => {
                let g = config.generator(phi + 0.5 * h)?;
                Su2::exp_unchecked(&g, h)
            }
            Method::CommutatorFree4 => cf4_step(config, phi, h, scheme)?,
        };
        u = step.compose(&u);
        if (k + 1) % RENORM_EVERY == 0 {
            u = u.normalized();
        }
    }
    Ok(u.normalized())
}

#[inline]
fn cf4_step(config: &AcConfig, phi: f64, h: f64, s: &Cf4Scheme) -> Result<Su2> {
    let g1 = config.generator(phi + s.c1 * h)?;
    let g2 = config.generator(phi + s.c2 * h)?;
    let early: Generator3 = g1.scaled(s.w_early).add_scaled(&g2, s.w_late);
    let late: Generator3 = g1.scaled(s.w_late).add_scaled(&g2, s.w_early);
    Ok(Su2::exp_unchecked(&late, h).compose_raw(&Su2::exp_unchecked(&early, h)))
}

/// Partial holonomies at `sample_phis` (sorted, within `[0, 2π]`).
///
/// Each interval between consecutive samples gets a share of `spec.steps`
/// proportional to its length (at least one step).
pub fn propagate_trace(
    config: &AcConfig,
    spec: &IntegratorSpec,
    sample_phis: &[f64],
) -> Result<HolonomyTrace> {
    spec.validate()?;
    config.check_geometry()?;
    let two_pi = 2.0 * PI;
    for (i, &p) in sample_phis.iter().enumerate() {
        if !(0.0..=two_pi).contains(&p) {
            return Err(AcError::InvalidArgument(format!(
                "sample angle {p} outside [0, 2pi]"
            )));
        }
        if i > 0 && p <= sample_phis[i - 1] {
            return Err(AcError::NonMonotone { index: i });
        }
    }

    let mut samples = vec![(0.0, Su2::identity())];
    let mut u = Su2::identity();
    let mut prev = 0.0;
    for &p in sample_phis.iter().filter(|&&p| p > 0.0) {
        let share = ((spec.steps as f64) * (p - prev) / two_pi).round() as usize;
        let piece = integrate(
            config,
            spec.method,
            share.max(1),
            prev,
            p,
            &Cf4Scheme::STANDARD,
        )?;
        u = piece.compose(&u);
        samples.push((p, u));
        prev = p;
    }
    Ok(HolonomyTrace { samples })
}

/// Error of `method` at each step count, measured against the same method at
/// four times the largest count.
pub fn convergence_report(
    config: &AcConfig,
    method: Method,
    steps_list: &[usize],
) -> Result<Vec<(usize, f64)>> {
    if steps_list.is_empty() {
        return Ok(Vec::new());
    }
    for (i, w) in steps_list.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(AcError::NonMonotone { index: i + 1 });
        }
    }
    let largest = *steps_list.last().unwrap();
    let reference = propagate(config, &IntegratorSpec::new(method, 4 * largest))?;
    steps_list
        .iter()
        .map(|&n| {
            let u = propagate(config, &IntegratorSpec::new(method, n))?;
            Ok((n, u.frobenius_distance(&reference)))
        })
        .collect()
}

/// `log(e_i / e_{i+1}) / log(n_{i+1} / n_i)` for consecutive report rows.
pub fn empirical_orders(report: &[(usize, f64)]) -> Vec<f64> {
    report
        .windows(2)
        .map(|w| {
            let (n0, e0) = w[0];
            let (n1, e1) = w[1];
            (e0 / e1).ln() / (n1 as f64 / n0 as f64).ln()
        })
        .collect()
}
