//! Electric field and induced SU(2) vector potential of a tilted line charge,
//! evaluated on the unit ring in the x-y plane.
//!
//! The line lies in the x-z plane at angle `theta` from the z-axis. Everything
//! here is dimensionless: the field is measured in units of `λ/r₀` and the
//! charge density only enters through `lambda_ratio = λ/λ₀`. No function takes
//! a ring radius.

use serde::{Deserialize, Serialize};

use crate::error::{AcError, Result};
use crate::su2::Generator3;

/// Below this value of `cos²θ·cos²φ + sin²φ` the line is treated as touching the ring.
pub const SINGULAR_DENOMINATOR: f64 = 1e-24;

/// Physical configuration: charge density ratio `λ/λ₀` and tilt angle (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcConfig {
    pub lambda_ratio: f64,
    pub theta: f64,
}

impl AcConfig {
    pub fn new(lambda_ratio: f64, theta: f64) -> Self {
        AcConfig {
            lambda_ratio,
            theta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lambda_ratio.is_finite() {
            return Err(AcError::NonFinite("lambda_ratio"));
        }
        if !self.theta.is_finite() {
            return Err(AcError::NonFinite("theta"));
        }
        Ok(())
    }

    /// Cartesian generator `g(φ)` with `σ·𝓐(φ,θ) = g·σ`.
    #[inline]
    pub fn generator(&self, phi: f64) -> Result<Generator3> {
        let a = vector_potential(phi, self.theta, self.lambda_ratio)?;
        let g = a.to_cartesian(phi);
        if g.iter().all(|c| c.is_finite()) {
            Ok(Generator3(g))
        } else {
            Err(AcError::NonFinite("generator"))
        }
    }

    /// Fails if the line of charge meets the ring anywhere on it.
    pub fn check_geometry(&self) -> Result<()> {
        self.validate()?;
        // D(φ) ≥ cos²θ with equality at φ = 0, π.
        let c = self.theta.cos();
        if c * c < SINGULAR_DENOMINATOR {
            return Err(AcError::SingularGeometry {
                phi: 0.0,
                theta: self.theta,
            });
        }
        Ok(())
    }
}

/// Components along the local `(e_r, e_φ, e_z)` frame at a ring point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CylindricalVec3 {
    pub e_r: f64,
    pub e_phi: f64,
    pub e_z: f64,
}

impl CylindricalVec3 {
    pub fn new(e_r: f64, e_phi: f64, e_z: f64) -> Self {
        CylindricalVec3 { e_r, e_phi, e_z }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.e_r * self.e_r + self.e_phi * self.e_phi + self.e_z * self.e_z
    }

    /// Cartesian components at azimuth `phi`.
    #[inline]
    pub fn to_cartesian(&self, phi: f64) -> [f64; 3] {
        let (s, c) = phi.sin_cos();
        [
            self.e_r * c - self.e_phi * s,
            self.e_r * s + self.e_phi * c,
            self.e_z,
        ]
    }
}

#[inline]
fn denominator(phi: f64, theta: f64) -> Result<f64> {
    let (sp, cp) = phi.sin_cos();
    let ct = theta.cos();
    let d = ct * ct * cp * cp + sp * sp;
    if d < SINGULAR_DENOMINATOR {
        Err(AcError::SingularGeometry { phi, theta })
    } else {
        Ok(d)
    }
}

/// Dimensionless electric field `(2, sin²θ sin2φ / D, −sin2θ cosφ / D)`
/// with `D = cos²θ cos²φ + sin²φ`.
pub fn electric_field(phi: f64, theta: f64) -> Result<CylindricalVec3> {
    let d = denominator(phi, theta)?;
    let st = theta.sin();
    Ok(CylindricalVec3 {
        e_r: 2.0,
        e_phi: st * st * (2.0 * phi).sin() / d,
        e_z: -(2.0 * theta).sin() * phi.cos() / d,
    })
}

/// Dimensionless vector potential `(λ/λ₀)·(½ sin2θ cosφ / D, 0, 1)`.
#[inline]
pub fn vector_potential(phi: f64, theta: f64, lambda_ratio: f64) -> Result<CylindricalVec3> {
    let d = denominator(phi, theta)?;
    Ok(CylindricalVec3 {
        e_r: lambda_ratio * 0.5 * (2.0 * theta).sin() * phi.cos() / d,
        e_phi: 0.0,
        e_z: lambda_ratio,
    })
}

/// `(λ/λ₀)/2 · (𝓔 × e_φ)`, using `e_r × e_φ = e_z` and `e_z × e_φ = −e_r`.
pub fn potential_from_field(field: &CylindricalVec3, lambda_ratio: f64) -> CylindricalVec3 {
    let k = 0.5 * lambda_ratio;
    CylindricalVec3 {
        e_r: -k * field.e_z,
        e_phi: 0.0,
        e_z: k * field.e_r,
    }
}

/// `(|𝓔|², 𝓔_φ²)` at a ring point.
pub fn field_invariants(phi: f64, theta: f64) -> Result<(f64, f64)> {
    let e = electric_field(phi, theta)?;
    Ok((e.norm_sqr(), e.e_phi * e.e_phi))
}

/// `|𝓐|²` at a ring point.
pub fn potential_magnitude_squared(phi: f64, theta: f64, lambda_ratio: f64) -> Result<f64> {
    Ok(vector_potential(phi, theta, lambda_ratio)?.norm_sqr())
}
