use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ac_holonomy::holonomy::{Cf4Scheme, IntegratorSpec, Method, DEFAULT_STEPS};
use ac_holonomy::manifest::RunManifest;
use ac_holonomy::output::write_sweep_csv_file;
use ac_holonomy::phase::{
    continued_phase_from_zero, linspace, phase_at, run_sweep, sweep_phases,
    SweepParameter, SweepResult,
};
use ac_holonomy::selfcheck;
use ac_holonomy::spectrum::{solve_spectrum, SpectrumConfig};
use ac_holonomy::{AcConfig, AcError};

const EXIT_USAGE: u8 = 2;
const EXIT_GEOMETRY: u8 = 3;
const EXIT_NUMERICS: u8 = 4;

/// Minimum points for a branch-continued sweep.
const MIN_CONTINUED_POINTS: usize = 16;

#[derive(Parser)]
#[command(name = "ac-holonomy", version, about = "Aharonov-Casher phase of a spin-1/2 particle on a ring around a tilted line charge")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Phase and rotation axis of the ring holonomy at one configuration.
    Phase(PhaseArgs),
    /// Phase along a lambda or theta sweep, written as CSV.
    Sweep(SweepArgs),
    /// Sweep sets behind the phase-vs-lambda and phase-vs-theta figures.
    Figures(FiguresArgs),
    /// Ring energies under the twisted boundary condition.
    Spectrum(SpectrumArgs),
    /// Run the embedded invariant checks.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args, Clone)]
struct IntegratorArgs {
    /// Uniform steps on [0, 2pi].
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::CommutatorFree4)]
    method: MethodArg,
    /// Double the step count until successive holonomies agree to this.
    #[arg(long)]
    tolerance: Option<f64>,
}

impl IntegratorArgs {
    fn spec(&self) -> IntegratorSpec {
        IntegratorSpec {
            method: self.method.into(),
            steps: self.steps,
            tolerance: self.tolerance,
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
#[value(rename_all = "snake_case")]
enum MethodArg {
    ProductExponentials,
    MidpointMagnus,
    CommutatorFree4,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::ProductExponentials => Method::ProductExponentials,
            MethodArg::MidpointMagnus => Method::MidpointMagnus,
            MethodArg::CommutatorFree4 => Method::CommutatorFree4,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Principal,
    ContinuedFromZero,
}

impl Branch {
    fn as_str(&self) -> &'static str {
        match self {
            Branch::Principal => "principal",
            Branch::ContinuedFromZero => "continued-from-zero",
        }
    }
}

#[derive(Args)]
struct PhaseArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda_ratio: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    /// Interpret angles in degrees.
    #[arg(long)]
    degrees: bool,
    #[arg(long, value_enum, default_value_t = Branch::ContinuedFromZero)]
    branch: Branch,
    #[command(flatten)]
    integrator: IntegratorArgs,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum SweepKind {
    Lambda,
    Theta,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    sweep: SweepKind,
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    #[arg(long)]
    points: usize,
    /// Fixed tilt for lambda sweeps.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Fixed charge ratio for theta sweeps.
    #[arg(long, allow_hyphen_values = true)]
    lambda_ratio: Option<f64>,
    #[arg(long)]
    degrees: bool,
    #[arg(long, value_enum, default_value_t = Branch::ContinuedFromZero)]
    branch: Branch,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    integrator: IntegratorArgs,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum FigureId {
    Fig2,
    Fig3,
}

#[derive(Args)]
struct FiguresArgs {
    #[arg(long, value_enum)]
    which: FigureId,
    #[arg(long)]
    out_dir: PathBuf,
    /// Points per series (default 801 for fig2, 181 for fig3).
    #[arg(long)]
    points: Option<usize>,
    #[command(flatten)]
    integrator: IntegratorArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda_ratio: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long)]
    degrees: bool,
    #[arg(long, default_value_t = 0.0)]
    kappa_pol: f64,
    #[arg(long, default_value_t = 6)]
    levels: usize,
    #[arg(long, default_value_t = 32)]
    basis_cutoff: usize,
    #[command(flatten)]
    integrator: IntegratorArgs,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Shift the fourth-order weights (negative control).
    #[arg(long, hide = true, allow_hyphen_values = true)]
    perturb_cf4: Option<f64>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<AcError> for Failure {
    fn from(e: AcError) -> Self {
        let code = match e {
            AcError::SingularGeometry { .. } => EXIT_GEOMETRY,
            AcError::BasisTooSmall(_) | AcError::RefineSweep { .. } | AcError::NonFinite(_) => {
                EXIT_NUMERICS
            }
            AcError::InvalidSpec(_) | AcError::InvalidArgument(_) | AcError::NonMonotone { .. } => {
                EXIT_USAGE
            }
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn to_radians(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_radians()
    } else {
        x
    }
}

/// Accepts `[0, π/2)`; `π/2` itself is the singular in-plane geometry.
fn check_theta(theta: f64) -> Result<(), Failure> {
    if !theta.is_finite() {
        return Err(usage("theta must be finite"));
    }
    if (theta - FRAC_PI_2).abs() < 1e-9 {
        return Err(AcError::SingularGeometry { phi: 0.0, theta }.into());
    }
    if !(0.0..FRAC_PI_2).contains(&theta) {
        return Err(usage(format!("theta must lie in [0, pi/2), got {theta}")));
    }
    Ok(())
}

fn check_integrator(spec: &IntegratorSpec) -> Result<(), Failure> {
    spec.validate().map_err(|e| usage(e.to_string()))
}

fn cmd_phase(args: &PhaseArgs) -> Result<(), Failure> {
    let theta = to_radians(args.theta, args.degrees);
    check_theta(theta)?;
    if !args.lambda_ratio.is_finite() {
        return Err(usage("lambda-ratio must be finite"));
    }
    let spec = args.integrator.spec();
    check_integrator(&spec)?;
    let cfg = AcConfig::new(args.lambda_ratio, theta);
    let r = match args.branch {
        Branch::Principal => phase_at(&cfg, &spec)?,
        Branch::ContinuedFromZero => continued_phase_from_zero(&cfg, &spec)?,
    };
    let out = json!({
        "phi_ac": r.phase(),
        "phi_ac_principal": r.phi_ac_principal,
        "cos_phi": r.cos_phi,
        "axis": r.axis,
        "lambda_ratio": cfg.lambda_ratio,
        "theta": cfg.theta,
        "branch": args.branch.as_str(),
        "method": spec.method.as_str(),
        "steps": spec.steps,
    });
    println!("{out}");
    Ok(())
}

fn compute_sweep(
    parameter: SweepParameter,
    fixed: f64,
    values: &[f64],
    branch: Branch,
    spec: &IntegratorSpec,
) -> Result<SweepResult, Failure> {
    Ok(match branch {
        Branch::ContinuedFromZero => run_sweep(parameter, fixed, values, spec)?,
        Branch::Principal => SweepResult {
            parameter,
            points: sweep_phases(parameter, fixed, values, spec)?,
        },
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let spec = args.integrator.spec();
    check_integrator(&spec)?;
    if args.points == 0 {
        return Err(usage("--points must be positive"));
    }
    if !(args.from.is_finite() && args.to.is_finite()) {
        return Err(usage("sweep bounds must be finite"));
    }
    if args.points == 1 && args.from != args.to {
        return Err(usage("a single-point sweep needs --from == --to"));
    }
    if args.points > 1 && args.to <= args.from {
        return Err(usage("--to must exceed --from"));
    }
    if args.branch == Branch::ContinuedFromZero && args.points < MIN_CONTINUED_POINTS {
        return Err(usage(format!(
            "continued branch needs --points >= {MIN_CONTINUED_POINTS}; use --branch principal for coarse sweeps"
        )));
    }

    let (parameter, fixed, from, to) = match args.sweep {
        SweepKind::Lambda => {
            let theta = args.theta.ok_or_else(|| usage("lambda sweep needs --theta"))?;
            let theta = to_radians(theta, args.degrees);
            check_theta(theta)?;
            (SweepParameter::LambdaRatio, theta, args.from, args.to)
        }
        SweepKind::Theta => {
            let lam = args
                .lambda_ratio
                .ok_or_else(|| usage("theta sweep needs --lambda-ratio"))?;
            let (from, to) = (to_radians(args.from, args.degrees), to_radians(args.to, args.degrees));
            check_theta(from)?;
            check_theta(to)?;
            (SweepParameter::Theta, lam, from, to)
        }
    };
    let values = linspace(from, to, args.points);
    let sweep = compute_sweep(parameter, fixed, &values, args.branch, &spec)?;
    write_sweep_csv_file(&args.out, &sweep)?;
    RunManifest::new("sweep", spec)
        .param("sweep", parameter.to_string())
        .param("from", from)
        .param("to", to)
        .param("points", args.points)
        .param("fixed", fixed)
        .param("branch", args.branch.as_str())
        .param("out", args.out.display().to_string())
        .write_for(&args.out)?;
    Ok(())
}

/// Tilt angles of the phase-vs-lambda figure, as multiples of π/20.
const FIG2_TILTS: [u32; 5] = [0, 1, 2, 3, 4];
/// Charge ratios of the phase-vs-theta figure.
const FIG3_LAMBDAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9, 1.0];
const FIG3_THETA_MAX: f64 = 0.45 * PI;

fn fig2_file(k: u32) -> String {
    if k == 0 {
        "fig2_theta_0.csv".to_string()
    } else {
        format!("fig2_theta_{k}pi20.csv")
    }
}

fn fig3_file(lam: f64) -> String {
    format!("fig3_lambda_{}.csv", format!("{lam:.1}").replace('.', "p"))
}

fn write_series(
    dir: &Path,
    name: &str,
    sweep: &SweepResult,
    manifest: RunManifest,
) -> Result<(), Failure> {
    let path = dir.join(name);
    write_sweep_csv_file(&path, sweep)?;
    manifest.param("out", path.display().to_string()).write_for(&path)?;
    Ok(())
}

fn cmd_figures(args: &FiguresArgs) -> Result<(), Failure> {
    let spec = args.integrator.spec();
    check_integrator(&spec)?;
    fs::create_dir_all(&args.out_dir)?;
    match args.which {
        FigureId::Fig2 => {
            let points = args.points.unwrap_or(801);
            if points < MIN_CONTINUED_POINTS {
                return Err(usage(format!("--points must be >= {MIN_CONTINUED_POINTS}")));
            }
            let values = linspace(0.0, 4.0, points);
            for k in FIG2_TILTS {
                let theta = PI * k as f64 / 20.0;
                let sweep = run_sweep(SweepParameter::LambdaRatio, theta, &values, &spec)?;
                let manifest = RunManifest::new("figures", spec)
                    .param("which", "fig2")
                    .param("sweep", "lambda")
                    .param("from", 0.0)
                    .param("to", 4.0)
                    .param("points", points)
                    .param("fixed", theta);
                write_series(&args.out_dir, &fig2_file(k), &sweep, manifest)?;
            }
        }
        FigureId::Fig3 => {
            let points = args.points.unwrap_or(181);
            if points < MIN_CONTINUED_POINTS {
                return Err(usage(format!("--points must be >= {MIN_CONTINUED_POINTS}")));
            }
            let values = linspace(0.0, FIG3_THETA_MAX, points);
            for lam in FIG3_LAMBDAS {
                let sweep = run_sweep(SweepParameter::Theta, lam, &values, &spec)?;
                let manifest = RunManifest::new("figures", spec)
                    .param("which", "fig3")
                    .param("sweep", "theta")
                    .param("from", 0.0)
                    .param("to", FIG3_THETA_MAX)
                    .param("points", points)
                    .param("fixed", lam);
                write_series(&args.out_dir, &fig3_file(lam), &sweep, manifest)?;
            }
        }
    }
    Ok(())
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    let theta = to_radians(args.theta, args.degrees);
    check_theta(theta)?;
    let spec = args.integrator.spec();
    check_integrator(&spec)?;
    let cfg = SpectrumConfig {
        ac: AcConfig::new(args.lambda_ratio, theta),
        kappa_pol: args.kappa_pol,
        basis_cutoff: args.basis_cutoff,
        holonomy_spec: spec,
    };
    if args.kappa_pol < 0.0 {
        return Err(usage("--kappa-pol must be non-negative"));
    }
    let s = solve_spectrum(&cfg, args.levels)?;
    let out = json!({
        "energies": s.energies,
        "quasi_momenta": s.quasi_momenta,
        "phi_ac": s.phi_ac,
        "potential_mean": s.potential_mean,
        "lambda_ratio": cfg.ac.lambda_ratio,
        "theta": cfg.ac.theta,
        "kappa_pol": cfg.kappa_pol,
        "basis_cutoff": cfg.basis_cutoff,
        "method": spec.method.as_str(),
        "steps": spec.steps,
    });
    println!("{out}");
    Ok(())
}

fn cmd_selfcheck(args: &SelfcheckArgs) -> Result<(), Failure> {
    let mut scheme = Cf4Scheme::STANDARD;
    if let Some(d) = args.perturb_cf4 {
        scheme.w_early += d;
    }
    let outcomes = selfcheck::run_with_scheme(&scheme);
    for c in &outcomes {
        println!("{c}");
    }
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    println!("{} checks, {} failed", outcomes.len(), failed);
    if failed > 0 {
        return Err(Failure {
            code: 1,
            message: format!("{failed} self-checks failed"),
        });
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("AC_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            // Only fails if a global pool already exists.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Phase(a) => cmd_phase(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Figures(a) => cmd_figures(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Selfcheck(a) => cmd_selfcheck(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
