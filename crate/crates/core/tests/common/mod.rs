//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::TAU;

use ac_holonomy::spectrum::{scalar_potential, SpectrumConfig};
use ac_holonomy::Su2;

/// Real-space reference for the twisted ring problem `−ψ'' + vψ = Eψ`,
/// `Ψ(φ+2π) = U⁻¹Ψ(φ)`.
///
/// Numerov discretisation on `grid` points. In the variables
/// `y_j = (1 + h²(E − v_j)/12) ψ_j` the scheme is a unimodular three-term
/// recurrence, so the one-turn transfer matrix `T(E)` has determinant one and
/// a spinor solution exists exactly when `T(E)` shares an eigenvalue with
/// `U⁻¹`. For a scalar potential that reduces to `tr T(E) = tr U⁻¹`, and each
/// root carries one solution per eigenvector of `U⁻¹`.
pub struct NumerovRing {
    potential: Vec<f64>,
    h: f64,
}

impl NumerovRing {
    pub fn new(cfg: &SpectrumConfig, grid: usize) -> Self {
        let potential = (0..grid)
            .map(|j| scalar_potential(TAU * j as f64 / grid as f64, cfg).unwrap())
            .collect();
        NumerovRing {
            potential,
            h: TAU / grid as f64,
        }
    }

    pub fn potential_min(&self) -> f64 {
        self.potential.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// One-turn transfer matrix `T(E)`.
    pub fn transfer(&self, e: f64) -> [[f64; 2]; 2] {
        let w = self.h * self.h / 12.0;
        // (y_{j+1}, y_j) = [[c_j, −1], [1, 0]] (y_j, y_{j−1})
        let mut t = [[1.0, 0.0], [0.0, 1.0]];
        for &v in &self.potential {
            let k2 = e - v;
            let c = 2.0 * (1.0 - 5.0 * w * k2) / (1.0 + w * k2);
            t = [[c * t[0][0] - t[1][0], c * t[0][1] - t[1][1]], t[0]];
        }
        t
    }

    /// `tr T(E)`.
    pub fn discriminant(&self, e: f64) -> f64 {
        let t = self.transfer(e);
        t[0][0] + t[1][1]
    }

    /// Lowest `count` spinor levels for the boundary holonomy `u`.
    ///
    /// Each simple root of `tr T = tr U⁻¹` carries two levels. When
    /// `U = ±I` a Bloch pair can stay degenerate; then `T = ±I`, the trace
    /// only touches the target, and roundoff splits the touch into a spurious
    /// close pair. Those levels are located instead as zeros of the
    /// off-diagonal element `T₀₁` at which the trace condition holds, and
    /// carry four levels.
    pub fn levels(&self, u: &Su2, count: usize) -> Vec<f64> {
        let target = u.inverse().trace_real();
        let degenerate_bc = (target.abs() - 2.0).abs() < 1e-9;
        let f = |e: f64| self.discriminant(e) - target;
        let g = |e: f64| self.transfer(e)[0][1];
        let step = 1e-3;
        let mut simple = Vec::new();
        let mut double = Vec::new();
        let mut lo = self.potential_min() - 0.5;
        let (mut flo, mut glo) = (f(lo), g(lo));
        let found = |s: &Vec<f64>, d: &Vec<f64>| 2 * s.len() + 4 * d.len();
        let mut stop_at = f64::INFINITY;
        while lo < stop_at {
            let hi = lo + step;
            let (fhi, ghi) = (f(hi), g(hi));
            if flo.signum() != fhi.signum() {
                simple.push(bisect(&f, lo, hi));
            }
            if degenerate_bc && glo.signum() != ghi.signum() {
                let root = bisect(&g, lo, hi);
                if f(root).abs() < 1e-6 {
                    double.push(root);
                }
            }
            lo = hi;
            flo = fhi;
            glo = ghi;
            if stop_at.is_infinite() && found(&simple, &double) >= count {
                stop_at = lo + 0.01;
            }
            assert!(lo < 1e4, "scan ran away");
        }
        simple.retain(|x| double.iter().all(|d| (x - d).abs() > 1e-4));
        let mut out: Vec<f64> = simple
            .iter()
            .flat_map(|&x| [x; 2])
            .chain(double.iter().flat_map(|&x| [x; 4]))
            .collect();
        out.sort_by(f64::total_cmp);
        out.truncate(count);
        out
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa0 = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a < 1e-14 {
            break;
        }
        if f(m).signum() == fa0.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Max absolute elementwise difference.
pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
