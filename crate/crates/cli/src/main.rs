//! `quadode`: decide whether a planar quadratic ODE system is solvable in
//! closed form, reduce it, evaluate and sample exact trajectories,
//! classify long-time behavior, and verify everything against an
//! independent numerical integrator.
//!
//! Exit codes: 0 success; 1 malformed input; 2 constraint violation (or
//! failed comparison); 3 nongeneric/degenerate input; 4 pole or blow-up.

mod doc;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use quadode_core::algebra::{cplx, ComplexScalar, Tolerance};
use quadode_core::error::Error;
use quadode_core::forward_map::{forward, Coefficients};
use quadode_core::inverse_map::{
    check_constraints, reduce, reduced_from_structural, residual_suite, structural_from_reduced,
};
use quadode_core::oracle::{self, IntegrationSettings};
use quadode_core::solver::{classify, sample, solve_at, InitialState, Regime};
use quadode_core::special_cases::{match_case51, reduce51, solve51_at, Case51Match};
use quadode_core::ReducedForm;

use doc::{parse_document, SystemDocument};
use render::*;

#[derive(Parser)]
#[command(
    name = "quadode",
    version,
    about = "Closed-form solver and verifier for planar quadratic ODE systems",
    long_about = "Decides whether a system x_n' = quadratic(x1, x2) with 12 complex \
coefficients admits a closed-form solution (four algebraic constraints), reduces it to two \
decoupled scalar quadratic flows, evaluates exact trajectories, classifies long-time \
behavior, and cross-checks against an adaptive Runge-Kutta integrator.\n\n\
Input files are JSON objects; complex numbers are [re, im] pairs. Fields: `c` (2x6 \
coefficient rows), optional `A` (2x2 mixing matrix) and `a` (2x3 rate rows), optional \
`x0` (2 pairs), optional `metadata`."
)]
struct Cli {
    /// Relative tolerance for admissibility and reductions; the absolute
    /// tolerance scales along as 1e-3 * TOL [default: rel 1e-9, abs 1e-12]
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Largest denominator tried when testing whether the two oscillation
    /// frequencies are commensurate
    #[arg(long, global = true, default_value_t = 64)]
    max_denominator: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct X0Arg {
    /// Initial state override as four floats: re(x1),im(x1),re(x2),im(x2)
    #[arg(long, value_name = "RE,IM,RE,IM", allow_hyphen_values = true)]
    x0: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleFormat {
    Structured,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four solvability constraints and the genericity flags
    Check { file: PathBuf },
    /// Reduce admissible coefficients to the closed-form ingredients
    Reduce { file: PathBuf },
    /// Evaluate the closed-form solution at one time
    Solve {
        file: PathBuf,
        /// Evaluation time
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[command(flatten)]
        x0: X0Arg,
    },
    /// Sample a trajectory on a uniform grid; poles go to the diagnostic stream
    Sample {
        file: PathBuf,
        /// Grid start
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        /// Grid end
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        /// Number of grid intervals (steps + 1 points are emitted)
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = SampleFormat::Structured)]
        format: SampleFormat,
        #[command(flatten)]
        x0: X0Arg,
    },
    /// Classify long-time behavior (isochrony, equilibria)
    Classify { file: PathBuf },
    /// Compute the 12 coefficients from structural parameters
    Forward { file: PathBuf },
    /// Rebuild the system through the inverse map and compare
    Roundtrip { file: PathBuf },
    /// Compare the closed form against the numerical integrator
    Verify {
        file: PathBuf,
        /// End of the comparison window [0, t1]
        #[arg(long)]
        t1: f64,
        /// Largest accepted sup-error
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        /// Number of grid intervals
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[command(flatten)]
        x0: X0Arg,
    },
    /// Match and solve through the restricted-coupling special case
    Case51 {
        file: PathBuf,
        /// Optional evaluation time (requires an initial state)
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[command(flatten)]
        x0: X0Arg,
    },
}

/// A failed command: exit code plus a message for the diagnostic stream.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConstraintViolated { .. } => 2,
            Error::NonGeneric { .. }
            | Error::DegenerateZ
            | Error::DeterminantZero { .. }
            | Error::ZMismatch { .. }
            | Error::InvalidLambda => 3,
            Error::PoleAtTime { .. }
            | Error::BlowupDetected { .. }
            | Error::StepLimitExceeded { .. } => 4,
        };
        Self { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };

    let tol = match cli.tol {
        None => Tolerance::default(),
        Some(v) if v > 0.0 && v.is_finite() => Tolerance::new(v * 1e-3, v),
        Some(v) => {
            eprintln!("error: --tol must be a positive finite number, got {v}");
            return ExitCode::from(1);
        }
    };

    match run(cli.command, tol, cli.max_denominator) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path, tol: Tolerance) -> Result<SystemDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text, tol).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_x0(arg: &X0Arg, doc: &SystemDocument) -> Result<InitialState, Failure> {
    if let Some(text) = &arg.x0 {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 4 {
            return Err(Failure::input("--x0 takes four comma-separated floats"));
        }
        let mut vals = [0.0; 4];
        for (i, p) in parts.iter().enumerate() {
            vals[i] = p
                .trim()
                .parse::<f64>()
                .map_err(|e| Failure::input(format!("--x0 component {i}: {e}")))?;
            if !vals[i].is_finite() {
                return Err(Failure::input(format!("--x0 component {i} must be finite")));
            }
        }
        return Ok(InitialState { x1: cplx(vals[0], vals[1]), x2: cplx(vals[2], vals[3]) });
    }
    doc.x0.ok_or_else(|| Failure::input("no initial state: provide `x0` in the file or --x0"))
}

/// Reduced form of the document's system. Prefers the coefficient route;
/// systems whose coefficients are nongeneric fall back to the structural
/// data when the document carries it.
fn reduced_form_for(document: &SystemDocument, tol: Tolerance) -> Result<ReducedForm, Failure> {
    let co = document.coefficients(tol).map_err(Failure::input)?;
    match reduce(&co, tol) {
        Ok(rf) => Ok(rf),
        Err(primary) => {
            if let Some(sp) = &document.structural {
                if let Ok(rf) = reduced_from_structural(sp, tol) {
                    return Ok(rf);
                }
            }
            Err(primary.into())
        }
    }
}

fn run(command: Command, tol: Tolerance, max_denominator: u32) -> Result<(), Failure> {
    match command {
        Command::Check { file } => cmd_check(&file, tol),
        Command::Reduce { file } => cmd_reduce(&file, tol),
        Command::Solve { file, t, x0 } => cmd_solve(&file, t, &x0, tol),
        Command::Sample { file, t0, t1, steps, format, x0 } => {
            cmd_sample(&file, t0, t1, steps, format, &x0, tol)
        }
        Command::Classify { file } => cmd_classify(&file, tol, max_denominator),
        Command::Forward { file } => cmd_forward(&file, tol),
        Command::Roundtrip { file } => cmd_roundtrip(&file, tol),
        Command::Verify { file, t1, threshold, steps, x0 } => {
            cmd_verify(&file, t1, threshold, steps, &x0, tol)
        }
        Command::Case51 { file, t, x0 } => cmd_case51(&file, t, &x0, tol),
    }
}

fn cmd_check(file: &Path, tol: Tolerance) -> Result<(), Failure> {
    let document = load(file, tol)?;
    let co = document.coefficients(tol).map_err(Failure::input)?;
    let report = check_constraints(&co, tol);
    let f = &report.flags;
    println!(
        "{{\"residuals\": {}, \"max_residual\": {}, \"satisfied\": {}, \"genericity\": \
{{\"c21_nonzero\": {}, \"c12_nonzero\": {}, \"c24_nonzero\": {}, \"ineq1\": {}, \"ineq2\": {}}}, \
\"generic\": {}}}",
        fmt_pair_list(&report.residuals),
        fmt_f(report.max_residual()),
        fmt_bool(report.satisfied),
        fmt_bool(f.c21_nonzero),
        fmt_bool(f.c12_nonzero),
        fmt_bool(f.c24_nonzero),
        fmt_bool(f.ineq1),
        fmt_bool(f.ineq2),
        fmt_bool(f.all()),
    );
    if !report.satisfied {
        return Err(Failure {
            code: 2,
            message: format!("constraints violated (max residual {:.3e})", report.max_residual()),
        });
    }
    if !report.flags.all() {
        return Err(Failure { code: 3, message: "coefficients are nongeneric".into() });
    }
    Ok(())
}

fn cmd_reduce(file: &Path, tol: Tolerance) -> Result<(), Failure> {
    let document = load(file, tol)?;
    let co = document.coefficients(tol).map_err(Failure::input)?;
    let rf = reduce(&co, tol)?;
    let residuals = residual_suite(&co, &rf);
    let alpha_rows: Vec<String> =
        rf.alpha.iter().map(|a| fmt_pair_list(&[a.a2, a.a1, a.a0])).collect();
    let branches: Vec<String> =
        rf.flows.iter().map(|fl| format!("\"{}\"", branch_name(fl.branch))).collect();
    println!(
        "{{\"z\": {}, \"alpha\": [{}], \"beta\": {}, \"w_plus\": {}, \"w_minus\": {}, \
\"branches\": [{}], \"residual_suite\": {}}}",
        fmt_pair_list(&rf.z),
        alpha_rows.join(", "),
        fmt_pair_list(&[rf.beta(0), rf.beta(1)]),
        fmt_pair_list(&[rf.w_plus(0), rf.w_plus(1)]),
        fmt_pair_list(&[rf.w_minus(0), rf.w_minus(1)]),
        branches.join(", "),
        fmt_pair_list(&residuals),
    );
    Ok(())
}

fn cmd_solve(file: &Path, t: f64, x0arg: &X0Arg, tol: Tolerance) -> Result<(), Failure> {
    if !t.is_finite() {
        return Err(Failure::input("--t must be finite"));
    }
    let document = load(file, tol)?;
    let x0 = parse_x0(x0arg, &document)?;
    let rf = reduced_form_for(&document, tol)?;
    let point = solve_at(&rf, &x0, t, tol)?;
    println!("{}", fmt_point(&point));
    Ok(())
}

fn cmd_sample(
    file: &Path,
    t0: f64,
    t1: f64,
    steps: usize,
    format: SampleFormat,
    x0arg: &X0Arg,
    tol: Tolerance,
) -> Result<(), Failure> {
    if !(t0.is_finite() && t1.is_finite()) || t1 <= t0 || steps == 0 {
        return Err(Failure::input("need finite t0 < t1 and steps >= 1"));
    }
    let document = load(file, tol)?;
    let x0 = parse_x0(x0arg, &document)?;
    let rf = reduced_form_for(&document, tol)?;
    let grid: Vec<f64> = (0..=steps).map(|i| t0 + (t1 - t0) * i as f64 / steps as f64).collect();
    let (points, poles) = sample(&rf, &x0, &grid, tol)?;
    match format {
        SampleFormat::Csv => {
            println!("{CSV_HEADER}");
            for p in &points {
                println!("{}", csv_row(p));
            }
        }
        SampleFormat::Structured => {
            let pts: Vec<String> = points.iter().map(fmt_point).collect();
            let ws: Vec<String> = poles.iter().map(fmt_pole_window).collect();
            println!("{{\"points\": [{}], \"poles\": [{}]}}", pts.join(", "), ws.join(", "));
        }
    }
    for w in &poles {
        eprintln!(
            "pole window: t in [{}, {}] ({} grid point{})",
            w.t_first,
            w.t_last,
            w.points,
            if w.points == 1 { "" } else { "s" }
        );
    }
    Ok(())
}

fn cmd_classify(file: &Path, tol: Tolerance, max_denominator: u32) -> Result<(), Failure> {
    let document = load(file, tol)?;
    let rf = reduced_form_for(&document, tol)?;
    let report = classify(&rf, tol, max_denominator);
    let regime = match report.regime {
        Regime::Isochronous => "isochronous",
        Regime::AsymptoticallyIsochronous => "asymptotically_isochronous",
        Regime::ConvergesToEquilibrium => "converges_to_equilibrium",
        Regime::Generic => "generic",
    };
    let period = report.period.map_or("null".into(), fmt_f);
    let omega = report.omega.map_or("null".into(), fmt_f);
    let rho = report.rho.map_or("null".into(), |r| {
        format!("[[{}, {}], [{}, {}]]", r[0].numer(), r[0].denom(), r[1].numer(), r[1].denom())
    });
    let limit = report
        .limit_state
        .map_or("null".into(), |(x1, x2)| format!("[{}, {}]", fmt_pair(x1), fmt_pair(x2)));
    println!(
        "{{\"regime\": \"{regime}\", \"period\": {period}, \"rho\": {rho}, \"omega\": {omega}, \
\"limit_state\": {limit}, \"beta\": {}}}",
        fmt_pair_list(&[rf.beta(0), rf.beta(1)]),
    );
    Ok(())
}

fn cmd_forward(file: &Path, tol: Tolerance) -> Result<(), Failure> {
    let document = load(file, tol)?;
    let sp = document
        .structural
        .as_ref()
        .ok_or_else(|| Failure::input("forward needs the structural fields `A` and `a`"))?;
    let co = forward(sp, tol)?;
    println!("{}", coefficients_json(&co));
    Ok(())
}

fn coefficients_json(co: &Coefficients) -> String {
    format!("{{\"c\": [{}, {}]}}", fmt_pair_list(&co.c[0]), fmt_pair_list(&co.c[1]))
}

fn cmd_roundtrip(file: &Path, tol: Tolerance) -> Result<(), Failure> {
    let document = load(file, tol)?;
    let co = document.coefficients(tol).map_err(Failure::input)?;
    let rf = reduce(&co, tol)?;

    // Root recovery against the structural origin, when it is known.
    let z_deviation = document.structural.as_ref().map(|sp| {
        let expected = [sp.mixing[0][0] / sp.mixing[1][0], sp.mixing[0][1] / sp.mixing[1][1]];
        let rel = |x: ComplexScalar, y: ComplexScalar| {
            (x - y).norm() / x.norm().max(y.norm()).max(f64::MIN_POSITIVE)
        };
        let direct = rel(rf.z[0], expected[0]).max(rel(rf.z[1], expected[1]));
        let crossed = rel(rf.z[0], expected[1]).max(rel(rf.z[1], expected[0]));
        direct.min(crossed)
    });

    // Rebuild coefficients through arbitrary scalings and compare.
    let sp2 = structural_from_reduced(&rf, cplx(1.0, 0.0), cplx(1.0, 0.0))?;
    let co2 = forward(&sp2, tol)?;
    let scale = co.magnitude().max(1.0);
    let mut coefficient_deviation = 0.0_f64;
    for n in 0..2 {
        for j in 0..6 {
            coefficient_deviation =
                coefficient_deviation.max((co.c[n][j] - co2.c[n][j]).norm() / scale);
        }
    }

    let z_ok = z_deviation.is_none_or(|d| d <= 1e-8);
    let ok = z_ok && coefficient_deviation <= 1e-9;
    println!(
        "{{\"z_deviation\": {}, \"coefficient_deviation\": {}, \"ok\": {}}}",
        z_deviation.map_or("null".into(), fmt_f),
        fmt_f(coefficient_deviation),
        fmt_bool(ok),
    );
    if ok {
        Ok(())
    } else {
        Err(Failure { code: 2, message: "roundtrip comparison failed".into() })
    }
}

fn cmd_verify(
    file: &Path,
    t1: f64,
    threshold: f64,
    steps: usize,
    x0arg: &X0Arg,
    tol: Tolerance,
) -> Result<(), Failure> {
    if !t1.is_finite() || t1 <= 0.0 || steps == 0 || threshold <= 0.0 || !threshold.is_finite() {
        return Err(Failure::input("need finite t1 > 0, steps >= 1, threshold > 0"));
    }
    let document = load(file, tol)?;
    let x0 = parse_x0(x0arg, &document)?;
    let co = document.coefficients(tol).map_err(Failure::input)?;
    let rf = reduced_form_for(&document, tol)?;
    let grid: Vec<f64> = (0..=steps).map(|i| t1 * i as f64 / steps as f64).collect();
    let settings = IntegrationSettings::default();
    let numeric = oracle::integrate_grid(&co, &x0, &grid, &settings);

    // A point is pole-adjacent when the closed form raises a pole, the
    // analytic magnitude leaves the moderate regime, or the integrator
    // fails there; those points are excluded from the comparison.
    const POLE_ADJACENT_BOUND: f64 = 1e3;
    let mut sup = 0.0_f64;
    let mut compared = 0usize;
    let mut excluded = 0usize;
    for (&t, num) in grid.iter().zip(numeric.iter()) {
        let analytic = match solve_at(&rf, &x0, t, tol) {
            Ok(p) => p,
            Err(Error::PoleAtTime { .. }) => {
                excluded += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if analytic.x1.norm().max(analytic.x2.norm()) > POLE_ADJACENT_BOUND {
            excluded += 1;
            continue;
        }
        match num {
            Ok(p) => {
                sup = sup.max((analytic.x1 - p.x1).norm()).max((analytic.x2 - p.x2).norm());
                compared += 1;
            }
            Err(_) => excluded += 1,
        }
    }
    let ok = compared > 0 && sup <= threshold;
    println!(
        "{{\"sup_error\": {}, \"threshold\": {}, \"points_compared\": {compared}, \
\"points_excluded\": {excluded}, \"ok\": {}}}",
        fmt_f(sup),
        fmt_f(threshold),
        fmt_bool(ok),
    );
    if ok {
        Ok(())
    } else if compared == 0 {
        Err(Failure { code: 4, message: "no comparable points: the trajectory blows up".into() })
    } else {
        Err(Failure {
            code: 2,
            message: format!("sup error {sup:.3e} exceeds threshold {threshold:.3e}"),
        })
    }
}

fn cmd_case51(file: &Path, t: Option<f64>, x0arg: &X0Arg, tol: Tolerance) -> Result<(), Failure> {
    let document = load(file, tol)?;
    let co = document.coefficients(tol).map_err(Failure::input)?;
    match match_case51(&co, tol) {
        Case51Match::Rejected(reasons) => {
            let quoted: Vec<String> = reasons
                .iter()
                .map(|r| format!("\"{}\"", r.replace('\\', "\\\\").replace('"', "\\\"")))
                .collect();
            println!("{{\"matched\": false, \"reasons\": [{}]}}", quoted.join(", "));
            Err(Failure {
                code: 3,
                message: "coefficients do not match the restricted-coupling pattern".into(),
            })
        }
        Case51Match::Matched(p) => {
            let red = reduce51(&p, tol);
            let point = match t {
                Some(t) if t.is_finite() => {
                    let x0 = parse_x0(x0arg, &document)?;
                    let pt = solve51_at(&p, &x0, t, tol)?;
                    fmt_point(&pt)
                }
                Some(_) => return Err(Failure::input("--t must be finite")),
                None => "null".into(),
            };
            let eta_rows: Vec<String> =
                red.eta.iter().map(|e| fmt_pair_list(&[e.a2, e.a1, e.a0])).collect();
            println!(
                "{{\"matched\": true, \"f1\": {}, \"f2\": {}, \"g\": {}, \"h1\": {}, \"h2\": {}, \
\"eta\": [{}], \"gamma\": {}, \"xi_plus\": {}, \"xi_minus\": {}, \"point\": {}}}",
                fmt_pair(p.f1),
                fmt_pair(p.f2),
                fmt_pair(p.g),
                fmt_pair(p.h1),
                fmt_pair(p.h2),
                eta_rows.join(", "),
                fmt_pair_list(&[red.gamma(0), red.gamma(1)]),
                fmt_pair_list(&[red.xi_plus(0), red.xi_plus(1)]),
                fmt_pair_list(&[red.xi_minus(0), red.xi_minus(1)]),
                point,
            );
            Ok(())
        }
    }
}
