//! Phase and axis extraction from the ring holonomy, branch continuation
//! along one-parameter sweeps, and the closed form at zero tilt.
//!
//! `U_AC = exp(−i φ b̂·σ)` gives `cos φ = ½ Tr U_AC` and `sin φ · b̂ = a`,
//! where `a` is the quaternion vector part. The principal phase is taken in
//! `[0, π]` with the sign absorbed into `b̂`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AcError, Result};
use crate::field::AcConfig;
use crate::holonomy::{propagate, IntegratorSpec};
use crate::su2::{norm, Generator3, Su2, Vec3};

/// `|a|` at or below which the rotation axis is reported as the zero vector.
pub const AXIS_DEGENERACY: f64 = 1e-9;

/// Largest principal-phase change tolerated between adjacent sweep points.
pub const MAX_PRINCIPAL_JUMP: f64 = PI / 2.0;

/// Parameter spacing (in `λ/λ₀`) of the internal sweep used to resolve the
/// branch of a single phase.
pub const FROM_ZERO_SPACING: f64 = 0.005;

const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcPhaseResult {
    /// `arccos(cos_phi)` in `[0, π]`.
    pub phi_ac_principal: f64,
    /// Branch-continued phase in `[0, 2π]`, set by [`continue_branch`].
    pub phi_ac_continued: Option<f64>,
    /// Unit rotation axis, or zero when `sin φ` vanishes.
    pub axis: Vec3,
    pub cos_phi: f64,
    pub holonomy: Su2,
}

impl AcPhaseResult {
    /// Continued phase if set, principal otherwise.
    pub fn phase(&self) -> f64 {
        self.phi_ac_continued.unwrap_or(self.phi_ac_principal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    LambdaRatio,
    Theta,
}

impl SweepParameter {
    pub fn config_at(&self, value: f64, fixed: f64) -> AcConfig {
        match self {
            SweepParameter::LambdaRatio => AcConfig::new(value, fixed),
            SweepParameter::Theta => AcConfig::new(fixed, value),
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParameter::LambdaRatio => "lambda",
            SweepParameter::Theta => "theta",
        })
    }
}

impl FromStr for SweepParameter {
    type Err = AcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" | "lambda_ratio" => Ok(SweepParameter::LambdaRatio),
            "theta" => Ok(SweepParameter::Theta),
            other => Err(AcError::InvalidArgument(format!(
                "unknown sweep parameter {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub points: Vec<(f64, AcPhaseResult)>,
}

/// Principal phase, cosine and axis of `u`. Leaves `phi_ac_continued` unset.
pub fn extract_phase(u: &Su2) -> AcPhaseResult {
    let (c, sb) = u.axis_decompose();
    let s = norm(&sb);
    // atan2 is the arccos of the normalised cosine without its loss of
    // precision near ±1.
    let phi = s.atan2(c);
    let axis = if s > AXIS_DEGENERACY {
        [sb[0] / s, sb[1] / s, sb[2] / s]
    } else {
        [0.0; 3]
    };
    AcPhaseResult {
        phi_ac_principal: phi,
        phi_ac_continued: None,
        axis,
        cos_phi: c.clamp(-1.0, 1.0),
        holonomy: *u,
    }
}

/// Propagate and extract in one go.
pub fn phase_at(config: &AcConfig, spec: &IntegratorSpec) -> Result<AcPhaseResult> {
    Ok(extract_phase(&propagate(config, spec)?))
}

/// Assigns continued phases along an increasing sweep.
///
/// The continued value at each point is one of `{p, 2π − p}` (`p` principal),
/// the two solutions of `cos φ = ½ Tr U` in `[0, 2π]`. The choice is the one
/// nearest to a prediction: `seed` for the first point, the previous value for
/// the second, and linear extrapolation through the previous two afterwards.
/// Equidistant candidates resolve to the smaller value. Passing through `π`
/// therefore keeps going while touching `0` or `2π` reflects, which yields the
/// triangle law at zero tilt.
///
/// Sequential by construction. Errors if parameters are not strictly
/// increasing or adjacent principal values jump by `π/2` or more.
pub fn continue_branch(
    parameter: SweepParameter,
    mut points: Vec<(f64, AcPhaseResult)>,
    seed: f64,
) -> Result<SweepResult> {
    for i in 1..points.len() {
        if points[i].0 <= points[i - 1].0 {
            return Err(AcError::NonMonotone { index: i });
        }
        let jump = (points[i].1.phi_ac_principal - points[i - 1].1.phi_ac_principal).abs();
        if jump >= MAX_PRINCIPAL_JUMP {
            return Err(AcError::RefineSweep {
                from: points[i - 1].0,
                to: points[i].0,
                jump,
            });
        }
    }

    for i in 0..points.len() {
        let target = match i {
            0 => seed,
            1 => points[0].1.phase(),
            _ => {
                let (x2, r2) = &points[i - 2];
                let (x1, r1) = &points[i - 1];
                let (y2, y1) = (r2.phase(), r1.phase());
                y1 + (y1 - y2) * (points[i].0 - x1) / (x1 - x2)
            }
        };
        let p = points[i].1.phi_ac_principal;
        points[i].1.phi_ac_continued = Some(nearest_branch(p, target));
    }
    Ok(SweepResult { parameter, points })
}

fn nearest_branch(principal: f64, target: f64) -> f64 {
    let lo = principal;
    let hi = TAU - principal;
    let (dl, dh) = ((lo - target).abs(), (hi - target).abs());
    if (dl - dh).abs() <= TIE_EPS {
        lo.min(hi)
    } else if dl < dh {
        lo
    } else {
        hi
    }
}

/// Zero-tilt holonomy `exp(−2πi r σ_z)` and the triangle-wave phase: `2π(r − 2n)`
/// on `[2n, 2n+1)` and `2π(2n − r)` on `[2n−1, 2n)`.
pub fn theta0_analytic(lambda_ratio: f64) -> (Su2, f64) {
    let u = Su2::exp_unchecked(&Generator3::new(0.0, 0.0, 1.0), TAU * lambda_ratio);
    let x = lambda_ratio.rem_euclid(2.0);
    let phi = if x < 1.0 { TAU * x } else { TAU * (2.0 - x) };
    (u, phi)
}

/// Evenly spaced values `from + (to − from)·i/(n − 1)`; `[from]` when `n == 1`.
pub fn linspace(from: f64, to: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..n)
            .map(|i| from + (to - from) * (i as f64) / ((n - 1) as f64))
            .collect(),
    }
}

/// Phases at each parameter value, propagated in parallel and returned in order.
pub fn sweep_phases(
    parameter: SweepParameter,
    fixed: f64,
    values: &[f64],
    spec: &IntegratorSpec,
) -> Result<Vec<(f64, AcPhaseResult)>> {
    values
        .par_iter()
        .map(|&v| Ok((v, phase_at(&parameter.config_at(v, fixed), spec)?)))
        .collect()
}

/// Continued phase at `config`, resolved by sweeping `λ/λ₀` from zero (where
/// the phase is unambiguously 0) to the target at fixed tilt.
pub fn continued_phase_from_zero(
    config: &AcConfig,
    spec: &IntegratorSpec,
) -> Result<AcPhaseResult> {
    config.check_geometry()?;
    let r = config.lambda_ratio;
    let n = ((r.abs() / FROM_ZERO_SPACING).ceil() as usize + 1).max(16);
    let magnitudes = linspace(0.0, r.abs(), n);
    if r == 0.0 {
        let mut res = phase_at(config, spec)?;
        res.phi_ac_continued = Some(nearest_branch(res.phi_ac_principal, 0.0));
        return Ok(res);
    }
    let sign = r.signum();
    let pts: Vec<(f64, AcPhaseResult)> = magnitudes
        .par_iter()
        .map(|&m| {
            let lam = if m == r.abs() { r } else { sign * m };
            Ok((m, phase_at(&AcConfig::new(lam, config.theta), spec)?))
        })
        .collect::<Result<_>>()?;
    let swept = continue_branch(SweepParameter::LambdaRatio, pts, 0.0)?;
    Ok(swept.points.last().unwrap().1)
}

/// Continued sweep over `values` with the other parameter fixed.
///
/// The first point's branch is resolved by [`continued_phase_from_zero`], so
/// theta sweeps at large `λ` start on the same branch as a lambda sweep would.
pub fn run_sweep(
    parameter: SweepParameter,
    fixed: f64,
    values: &[f64],
    spec: &IntegratorSpec,
) -> Result<SweepResult> {
    let points = sweep_phases(parameter, fixed, values, spec)?;
    let seed = match values.first() {
        Some(&v0) => continued_phase_from_zero(&parameter.config_at(v0, fixed), spec)?.phase(),
        None => 0.0,
    };
    continue_branch(parameter, points, seed)
}

/// `max_θ |φ(θ) − φ(0)|` of continued phases at fixed `λ/λ₀`. A positive value
/// means the phase depends on the tilt of the line, i.e. on the path geometry
/// relative to the field.
pub fn path_dependence_witness(
    lambda_ratio: f64,
    thetas: &[f64],
    spec: &IntegratorSpec,
) -> Result<f64> {
    if thetas.is_empty() {
        return Err(AcError::InvalidArgument("no tilt angles given".into()));
    }
    let reference = continued_phase_from_zero(&AcConfig::new(lambda_ratio, 0.0), spec)?.phase();
    let mut worst: f64 = 0.0;
    for &theta in thetas {
        let phi = continued_phase_from_zero(&AcConfig::new(lambda_ratio, theta), spec)?.phase();
        worst = worst.max((phi - reference).abs());
    }
    Ok(worst)
}
