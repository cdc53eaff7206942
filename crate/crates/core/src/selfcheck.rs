//! Embedded invariant suite run by the `selfcheck` subcommand.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::field::{electric_field, potential_from_field, vector_potential, AcConfig};
use crate::holonomy::{
    empirical_orders, propagate, propagate_between, propagate_cf4_with, Cf4Scheme,
    IntegratorSpec, Method,
};
use crate::phase::{linspace, run_sweep, theta0_analytic, SweepParameter};
use crate::su2::{Generator3, Su2};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<24} {}", self.name, self.detail)
    }
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        detail,
    }
}

/// Runs every check with the standard integrator coefficients.
pub fn run_all() -> Vec<CheckOutcome> {
    run_with_scheme(&Cf4Scheme::STANDARD)
}

/// Runs every check; the fourth-order checks use `scheme`.
pub fn run_with_scheme(scheme: &Cf4Scheme) -> Vec<CheckOutcome> {
    vec![
        su2_unitarity(),
        field_cross_product(),
        abelian_exactness(),
        half_flux_holonomy(),
        splitting_consistency(),
        product_order(),
        cf4_order(scheme),
        cf4_matches_oracle(scheme),
        zero_tilt_triangle(),
    ]
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|c| c.passed)
}

fn su2_unitarity() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    let mut u = Su2::identity();
    for k in 0..100_000 {
        let t = k as f64 * 0.618_033_988_749_895;
        let g = Generator3::new(t.sin(), (1.3 * t).cos(), (0.7 * t).sin());
        u = Su2::exp_unchecked(&g, 0.37).compose(&u);
        worst = worst.max(u.norm_deviation());
    }
    for theta in [0.0, 0.3, 0.9, 1.3] {
        for r in [0.25, 1.7, 3.9] {
            if let Ok(v) = propagate(&AcConfig::new(r, theta), &IntegratorSpec::default()) {
                worst = worst.max(v.norm_deviation());
            }
        }
    }
    outcome("su2_unitarity", worst <= 1e-12, format!("max |norm - 1| = {worst:.2e}"))
}

fn field_cross_product() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let phi = TAU * i as f64 / 100.0;
        for j in 0..10 {
            let theta = 1.45 * j as f64 / 9.0;
            let (Ok(e), Ok(a)) = (electric_field(phi, theta), vector_potential(phi, theta, 0.83))
            else {
                return outcome("field_cross_product", false, "singular grid point".into());
            };
            let b = potential_from_field(&e, 0.83);
            worst = worst
                .max((a.e_r - b.e_r).abs())
                .max((a.e_phi - b.e_phi).abs())
                .max((a.e_z - b.e_z).abs());
        }
    }
    outcome("field_cross_product", worst <= 1e-12, format!("max deviation = {worst:.2e}"))
}

fn abelian_exactness() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for m in Method::ALL {
        for steps in [4, 64, 4096] {
            for r in [0.1, 0.5, 1.3, 3.7] {
                let u = propagate(&AcConfig::new(r, 0.0), &IntegratorSpec::new(m, steps));
                let exact = theta0_analytic(r).0;
                worst = worst.max(u.map_or(f64::INFINITY, |u| u.frobenius_distance(&exact)));
            }
        }
    }
    outcome("abelian_exactness", worst <= 1e-12, format!("max distance = {worst:.2e}"))
}

// At λ/λ₀ = 1/2 the rotating-frame generator is proportional to σ_x alone and
// averages to zero, so the holonomy is −I for every tilt.
fn half_flux_holonomy() -> CheckOutcome {
    let minus_id = Su2::from_components(-1.0, [0.0; 3]).unwrap();
    let mut worst: f64 = 0.0;
    for theta in [0.0, PI / 20.0, PI / 10.0, 3.0 * PI / 20.0, PI / 5.0, 1.2] {
        let u = propagate(&AcConfig::new(0.5, theta), &IntegratorSpec::default());
        worst = worst.max(u.map_or(f64::INFINITY, |u| u.frobenius_distance(&minus_id)));
    }
    outcome("half_flux_holonomy", worst <= 1e-10, format!("max distance to -I = {worst:.2e}"))
}

fn splitting_consistency() -> CheckOutcome {
    let cfg = AcConfig::new(0.9, PI / 5.0);
    let spec = IntegratorSpec::new(Method::CommutatorFree4, 8192);
    let Ok(full) = propagate(&cfg, &spec) else {
        return outcome("splitting_consistency", false, "propagation failed".into());
    };
    let mut worst: f64 = 0.0;
    for split in [0.3, 1.9, PI, 4.4] {
        let first = propagate_between(&cfg, &spec, 0.0, split);
        let second = propagate_between(&cfg, &spec, split, TAU);
        let d = match (first, second) {
            (Ok(a), Ok(b)) => b.compose(&a).frobenius_distance(&full),
            _ => f64::INFINITY,
        };
        worst = worst.max(d);
    }
    outcome("splitting_consistency", worst <= 1e-10, format!("max distance = {worst:.2e}"))
}

const ORDER_CONFIG: AcConfig = AcConfig {
    lambda_ratio: 0.9,
    theta: PI / 5.0,
};

fn order_check(name: &'static str, errors: &[(usize, f64)], expected: f64) -> CheckOutcome {
    let orders = empirical_orders(errors);
    let ok = orders.iter().all(|o| (o - expected).abs() <= 0.5);
    let shown: Vec<String> = orders.iter().map(|o| format!("{o:.2}")).collect();
    outcome(name, ok, format!("orders [{}], expected {expected}", shown.join(", ")))
}

fn product_order() -> CheckOutcome {
    let reference = propagate(&ORDER_CONFIG, &IntegratorSpec::new(Method::ProductExponentials, 8192));
    let errors: Vec<(usize, f64)> = [64, 128, 256, 512]
        .into_iter()
        .map(|n| {
            let u = propagate(&ORDER_CONFIG, &IntegratorSpec::new(Method::ProductExponentials, n));
            let e = match (&u, &reference) {
                (Ok(u), Ok(r)) => u.frobenius_distance(r),
                _ => f64::NAN,
            };
            (n, e)
        })
        .collect();
    order_check("product_order", &errors, 2.0)
}

fn cf4_order(scheme: &Cf4Scheme) -> CheckOutcome {
    let reference = propagate_cf4_with(&ORDER_CONFIG, 4096, scheme);
    let errors: Vec<(usize, f64)> = [32, 64, 128, 256]
        .into_iter()
        .map(|n| {
            let u = propagate_cf4_with(&ORDER_CONFIG, n, scheme);
            let e = match (&u, &reference) {
                (Ok(u), Ok(r)) => u.frobenius_distance(r),
                _ => f64::NAN,
            };
            (n, e)
        })
        .collect();
    order_check("cf4_order", &errors, 4.0)
}

fn cf4_matches_oracle(scheme: &Cf4Scheme) -> CheckOutcome {
    let oracle = propagate(&ORDER_CONFIG, &IntegratorSpec::oracle());
    let cf4 = propagate_cf4_with(&ORDER_CONFIG, 2048, scheme);
    let d = match (oracle, cf4) {
        (Ok(o), Ok(c)) => o.frobenius_distance(&c),
        _ => f64::INFINITY,
    };
    outcome("cf4_matches_oracle", d <= 1e-8, format!("distance = {d:.2e}"))
}

fn zero_tilt_triangle() -> CheckOutcome {
    let xs = linspace(0.0, 4.0, 201);
    let worst = match run_sweep(SweepParameter::LambdaRatio, 0.0, &xs, &IntegratorSpec::default()) {
        Ok(s) => s
            .points
            .iter()
            .map(|(x, r)| (r.phase() - theta0_analytic(*x).1).abs())
            .fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    };
    outcome("zero_tilt_triangle", worst <= 1e-8, format!("max deviation = {worst:.2e}"))
}
