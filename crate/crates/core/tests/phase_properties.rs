use std::f64::consts::{PI, TAU};

use ac_holonomy::holonomy::IntegratorSpec;
use ac_holonomy::phase::{
    continue_branch, continued_phase_from_zero, extract_phase, linspace, path_dependence_witness,
    phase_at, run_sweep, sweep_phases, theta0_analytic, SweepParameter,
};
use ac_holonomy::AcConfig;

fn spec() -> IntegratorSpec {
    IntegratorSpec::default()
}

#[test]
fn zero_tilt_sweep_matches_triangle_law() {
    let xs = linspace(0.0, 4.0, 801);
    let s = run_sweep(SweepParameter::LambdaRatio, 0.0, &xs, &spec()).unwrap();
    for (x, r) in &s.points {
        assert!((r.phase() - theta0_analytic(*x).1).abs() <= 1e-8, "x={x}");
        if r.axis != [0.0; 3] {
            assert!((r.axis[2].abs() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn continuation_never_changes_the_cosine() {
    for theta in [0.0, PI / 10.0, PI / 5.0, 1.1] {
        let xs = linspace(0.0, 4.0, 401);
        let s = run_sweep(SweepParameter::LambdaRatio, theta, &xs, &spec()).unwrap();
        for (_, r) in &s.points {
            let c = r.phi_ac_continued.unwrap();
            assert!((c.cos() - r.cos_phi).abs() <= 1e-9);
            assert!((0.0..=TAU).contains(&c));
            assert!((0.0..=PI).contains(&r.phi_ac_principal));
            assert!((r.phi_ac_principal.cos() - r.cos_phi).abs() <= 1e-12);
            let n: f64 = r.axis.iter().map(|a| a * a).sum();
            assert!(n == 0.0 || (n - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn continued_sweep_is_continuous() {
    let xs = linspace(0.0, 4.0, 801);
    let s = run_sweep(SweepParameter::LambdaRatio, PI / 5.0, &xs, &spec()).unwrap();
    let max_jump = s
        .points
        .windows(2)
        .map(|w| (w[1].1.phase() - w[0].1.phase()).abs())
        .fold(0.0, f64::max);
    // slope of the phase is about 2π per unit of λ/λ₀
    assert!(max_jump < 0.1, "{max_jump}");
}

#[test]
fn zero_tilt_cosine_symmetry_about_half_flux() {
    for x in linspace(0.0, 1.0, 50) {
        let a = phase_at(&AcConfig::new(x, 0.0), &spec()).unwrap().cos_phi;
        let b = phase_at(&AcConfig::new(1.0 - x, 0.0), &spec()).unwrap().cos_phi;
        assert!((a - b).abs() <= 1e-9);
    }
}

#[test]
fn tilted_phase_is_not_periodic_in_lambda() {
    let worst = linspace(0.0, 2.0, 41)
        .into_iter()
        .map(|x| {
            let a = phase_at(&AcConfig::new(x, PI / 5.0), &spec()).unwrap().cos_phi;
            let b = phase_at(&AcConfig::new(x + 1.0, PI / 5.0), &spec()).unwrap().cos_phi;
            (a - b).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-3, "{worst}");
}

#[test]
fn tilted_sweep_shape_on_oracle_fixture_points() {
    // Continued values from the 10⁶-step oracle (see holonomy_oracle fixtures).
    let r = continued_phase_from_zero(&AcConfig::new(0.9, PI / 5.0), &spec()).unwrap();
    assert!((r.phase() - 4.459463010940143).abs() < 1e-9);
    let r = continued_phase_from_zero(&AcConfig::new(1.3, PI / 10.0), &spec()).unwrap();
    assert!((r.phase() - 3.916652372829414).abs() < 1e-9);
    let r = continued_phase_from_zero(&AcConfig::new(0.3, 3.0 * PI / 20.0), &spec()).unwrap();
    assert!((r.phase() - 1.9156781201223818).abs() < 1e-9);
}

#[test]
fn tilted_sweep_rises_falls_and_recovers() {
    let xs = linspace(0.0, 1.2, 241);
    let s = run_sweep(SweepParameter::LambdaRatio, PI / 5.0, &xs, &spec()).unwrap();
    let v: Vec<f64> = s.points.iter().map(|p| p.1.phase()).collect();
    let (imax, vmax) = v.iter().copied().enumerate().fold((0, 0.0), |a, (i, x)| if x > a.1 { (i, x) } else { a });
    assert!(vmax < TAU && vmax > PI);
    assert!(xs[imax] > 0.8 && xs[imax] < 0.95, "{}", xs[imax]);
    assert!(v[..=imax].windows(2).all(|w| w[1] >= w[0]));
    assert!(v[imax..].windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn theta_sweep_starts_on_lambda_branch() {
    // At λ/λ₀ = 0.7 the zero-tilt phase sits on the upper branch, 1.4π.
    let ths = linspace(0.0, 0.45 * PI, 91);
    let s = run_sweep(SweepParameter::Theta, 0.7, &ths, &spec()).unwrap();
    assert!((s.points[0].1.phase() - 1.4 * PI).abs() < 1e-9);
    let r = continued_phase_from_zero(&AcConfig::new(0.7, ths[90]), &spec()).unwrap();
    assert!((s.points[90].1.phase() - r.phase()).abs() < 1e-9);
}

#[test]
fn coarse_sweeps_are_refused() {
    let xs = linspace(0.0, 4.0, 9);
    let pts = sweep_phases(SweepParameter::LambdaRatio, 0.3, &xs, &spec()).unwrap();
    assert!(continue_branch(SweepParameter::LambdaRatio, pts, 0.0).is_err());
}

#[test]
fn extraction_inverts_exponential() {
    let u = phase_at(&AcConfig::new(0.9, PI / 5.0), &spec()).unwrap();
    let back = extract_phase(&u.holonomy);
    assert_eq!(back, u);
}

// The rotating-frame argument in holonomy_oracle.rs makes U_AC = −I at
// λ/λ₀ = ½ for every tilt, so the witness vanishes there.
#[test]
fn witness_at_half_flux_vanishes() {
    let thetas = [0.0, PI / 20.0, PI / 10.0, 3.0 * PI / 20.0, PI / 5.0];
    let w = path_dependence_witness(0.5, &thetas, &spec()).unwrap();
    assert!(w < 1e-9, "{w}");
}

#[test]
fn witness_detects_tilt_dependence_away_from_half_flux() {
    let thetas = [0.0, PI / 20.0, PI / 10.0, 3.0 * PI / 20.0, PI / 5.0];
    for r in [0.3, 0.9, 1.3] {
        let w = path_dependence_witness(r, &thetas, &spec()).unwrap();
        assert!(w > 0.01, "r={r}: {w}");
    }
    // oracle: φ(0.9, 0) = 1.8π, φ(0.9, π/5) = 4.459463010940143
    let w = path_dependence_witness(0.9, &[0.0, PI / 5.0], &spec()).unwrap();
    assert!((w - (1.8 * PI - 4.459463010940143)).abs() < 1e-9);
}
