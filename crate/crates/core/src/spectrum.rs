//! Bound states on the ring in the gauge where the spin-orbit coupling has
//! been absorbed into the boundary condition.
//!
//! Energies are in units of `ε₀ = ħ²/(2 M r₀²)`. In that gauge the Hamiltonian
//! is `−d²/dφ² + v(φ)` with a spin-independent potential
//!
//! ```text
//! v(φ) = κ_pol·𝓔² + (λ/λ₀)²·(3𝓔² + 𝓔_φ²)
//! ```
//!
//! and the spinor obeys `Ψ(φ + 2π) = U_AC⁻¹ Ψ(φ)`. In the eigenbasis of
//! `U_AC` (eigenvalues `e^{∓iφ_AC}`) this splits into two scalar problems with
//! Bloch offsets `±φ_AC/2π`, each diagonalised in plane waves `n = −N..N`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AcError, Result};
use crate::field::{field_invariants, AcConfig};
use crate::holonomy::{propagate_between, IntegratorSpec};
use crate::phase::extract_phase;

/// Minimum plane-wave cutoff.
pub const MIN_BASIS_CUTOFF: usize = 8;

/// Quadrature points per unit of cutoff for the potential's Fourier series.
pub const QUADRATURE_FACTOR: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub ac: AcConfig,
    /// `M λ² α / ħ²`, the polarizability strength in units of `ε₀`.
    pub kappa_pol: f64,
    /// Plane waves `n = −N..=N`.
    pub basis_cutoff: usize,
    pub holonomy_spec: IntegratorSpec,
}

impl SpectrumConfig {
    pub fn new(ac: AcConfig) -> Self {
        SpectrumConfig {
            ac,
            kappa_pol: 0.0,
            basis_cutoff: 32,
            holonomy_spec: IntegratorSpec::default(),
        }
    }

    pub fn with_kappa_pol(mut self, kappa_pol: f64) -> Self {
        self.kappa_pol = kappa_pol;
        self
    }

    pub fn with_basis_cutoff(mut self, n: usize) -> Self {
        self.basis_cutoff = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.ac.check_geometry()?;
        self.holonomy_spec.validate()?;
        if self.basis_cutoff < MIN_BASIS_CUTOFF {
            return Err(AcError::InvalidArgument(format!(
                "basis_cutoff must be >= {MIN_BASIS_CUTOFF}, got {}",
                self.basis_cutoff
            )));
        }
        if !self.kappa_pol.is_finite() {
            return Err(AcError::NonFinite("kappa_pol"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Ascending, in units of `ε₀`.
    pub energies: Vec<f64>,
    /// Bloch offsets `[+φ_AC/2π, −φ_AC/2π]`.
    pub quasi_momenta: [f64; 2],
    /// Zero Fourier mode of `v`.
    pub potential_mean: f64,
    /// Smallest sampled value of `v`.
    pub potential_min: f64,
    /// Principal phase of the holonomy used for the boundary condition.
    pub phi_ac: f64,
}

/// Spin-independent potential `κ_pol 𝓔² + (λ/λ₀)²(3𝓔² + 𝓔_φ²)`.
pub fn scalar_potential(phi: f64, config: &SpectrumConfig) -> Result<f64> {
    let (e2, ephi2) = field_invariants(phi, config.ac.theta)?;
    let r = config.ac.lambda_ratio;
    Ok(config.kappa_pol * e2 + r * r * (3.0 * e2 + ephi2))
}

/// Lowest `n_levels` energies with the angle origin at `φ = 0`.
pub fn solve_spectrum(config: &SpectrumConfig, n_levels: usize) -> Result<SpectrumResult> {
    solve_spectrum_with_origin(config, n_levels, 0.0)
}

/// Same problem with the ring coordinate measured from `origin`: the
/// potential is sampled at `origin + φ` and the holonomy runs from `origin`
/// to `origin + 2π`. The spectrum does not depend on `origin`.
pub fn solve_spectrum_with_origin(
    config: &SpectrumConfig,
    n_levels: usize,
    origin: f64,
) -> Result<SpectrumResult> {
    config.validate()?;
    let n = config.basis_cutoff;
    let dim = 2 * n + 1;
    if n_levels == 0 || n_levels > 2 * dim {
        return Err(AcError::InvalidArgument(format!(
            "n_levels must be in 1..={}, got {n_levels}",
            2 * dim
        )));
    }

    let u = propagate_between(&config.ac, &config.holonomy_spec, origin, origin + TAU)?;
    let phi_ac = extract_phase(&u).phi_ac_principal;
    let offset = phi_ac / TAU;

    let m = QUADRATURE_FACTOR * n;
    let samples = (0..m)
        .map(|j| scalar_potential(origin + TAU * j as f64 / m as f64, config))
        .collect::<Result<Vec<f64>>>()?;
    let potential_min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let coeffs = fourier_coefficients(&samples, 2 * n);

    let mut energies = Vec::with_capacity(2 * dim);
    for k in [offset, -offset] {
        energies.extend(branch_eigenvalues(&coeffs, n, k));
    }
    energies.sort_by(|a, b| a.total_cmp(b));
    energies.truncate(n_levels);

    let edge = (n as f64 - offset.abs()).powi(2) + potential_min;
    let top = *energies.last().unwrap();
    if top >= 0.99 * edge {
        return Err(AcError::BasisTooSmall(format!(
            "level {n_levels} at {top:.6} is within 1% of the basis edge {edge:.6} (cutoff {n})"
        )));
    }

    Ok(SpectrumResult {
        energies,
        quasi_momenta: [offset, -offset],
        potential_mean: coeffs[2 * n].re,
        potential_min,
        phi_ac,
    })
}

/// `v̂_m = (1/M) Σ_j v_j e^{−i m 2πj/M}` for `m = −max..=max`, stored at
/// index `m + max`.
fn fourier_coefficients(samples: &[f64], max: usize) -> Vec<Complex64> {
    let len = samples.len() as f64;
    (0..=2 * max)
        .map(|idx| {
            let mode = idx as f64 - max as f64;
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, &v)| Complex64::from_polar(v, -TAU * mode * j as f64 / len))
                .sum();
            sum / len
        })
        .collect()
}

/// Eigenvalues of `H_{nm} = δ_{nm}(n + k)² + v̂_{n−m}` on `n, m ∈ −N..=N`.
fn branch_eigenvalues(coeffs: &[Complex64], cutoff: usize, k: f64) -> Vec<f64> {
    let dim = 2 * cutoff + 1;
    let max = 2 * cutoff as isize;
    let h = DMatrix::from_fn(dim, dim, |i, j| {
        let diff = i as isize - j as isize;
        let mut value = coeffs[(diff + max) as usize];
        if i == j {
            let q = i as f64 - cutoff as f64 + k;
            value += q * q;
        }
        value
    });
    h.symmetric_eigenvalues().iter().copied().collect()
}
