//! Command-line front end: bounds, quantum values, visibilities, direction
//! optimization, angle scans, and a pinned-reference verification suite.
//!
//! Exit codes: 0 success, 1 validation error, 2 degenerate computation,
//! 3 verification failures.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsteer::functionals::{bob_coefficients, lhs_bound};
use qsteer::quantum::{evaluate, quantum_value};
use qsteer::scan::{
    crossover_angles, linear_visibility_closed_form, scan_theta, threshold_angles, uniform_grid,
};
use qsteer::{
    presets, DirectionSet, Family, OptimizerConfig, SignAssignment, StateFamily, Strategy,
    SteeringFunctional,
};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, PI};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qsteer",
    version,
    about = "Steering-inequality bounds, quantum values, and noise thresholds for two-qubit states"
)]
struct RunSpec {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local-hidden-state bound of a functional on a direction set.
    Bound(BoundArgs),
    /// Quantum value of a functional on a direction set and state.
    Quantum(QuantumArgs),
    /// Bound, quantum value, and visibility threshold in one report.
    Visibility(VisibilityArgs),
    /// Search for direction sets minimizing the visibility threshold.
    Optimize(OptimizeArgs),
    /// Sweep the entanglement angle and tabulate visibility thresholds.
    Scan(ScanArgs),
    /// Re-derive every pinned reference value and report pass/fail.
    VerifyPaper(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Linear,
    Chained,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Linear => Family::Linear,
            FamilyArg::Chained => Family::Chained,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Werner,
    GeneralizedWerner,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    General,
    ProjectiveOnly,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::General => Strategy::General,
            StrategyArg::ProjectiveOnly => Strategy::ProjectiveOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Json,
    Csv,
}

#[derive(Args)]
struct InstanceArgs {
    /// Functional family.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Number of measurement settings.
    #[arg(long)]
    n: usize,
    /// Directions: `preset:NAME`, a JSON file path, or inline JSON.
    #[arg(long)]
    dirs: String,
}

#[derive(Args)]
struct StateSelect {
    /// State family.
    #[arg(long, value_enum, default_value = "werner")]
    state: StateArg,
    /// Entanglement angle in radians (generalized-werner only).
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
}

#[derive(Args)]
struct QuantumArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    state: StateSelect,
    /// Noise parameter of the state family member.
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    #[arg(long, value_enum, default_value = "general")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
}

#[derive(Args)]
struct VisibilityArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    state: StateSelect,
    #[arg(long, value_enum, default_value = "general")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Functional family.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Number of measurement settings.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    state: StateSelect,
    /// Polish this starting set instead of running the multistart search.
    #[arg(long)]
    from: Option<String>,
    /// Independent restarts of the multistart search.
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    /// Base seed of the deterministic restart streams.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Iteration budget per descent cycle.
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    /// Convergence tolerance on the objective spread.
    #[arg(long, default_value_t = 1e-10)]
    objective_tol: f64,
    /// Initial simplex edge length in radians.
    #[arg(long, default_value_t = 0.3)]
    simplex_scale: f64,
    /// Keep all angles free instead of pinning rotation symmetries.
    #[arg(long)]
    no_gauge_fix: bool,
    /// Write the best direction set as JSON to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Number of uniformly spaced angles in [0, pi/2].
    #[arg(long, default_value_t = 501)]
    grid: usize,
    #[arg(long, value_enum, default_value = "general")]
    strategy: StrategyArg,
    /// Write the table to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Write the machine-readable result table to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Skip the multistart optimizer checks (the slow block).
    #[arg(long)]
    skip_optimizer: bool,
}

/// Terminal failure: message for stderr plus the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<qsteer::Error> for Failure {
    fn from(e: qsteer::Error) -> Failure {
        let code = match e {
            qsteer::Error::Degenerate => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let spec = match RunSpec::try_parse() {
        Ok(spec) => spec,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(spec) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(spec: RunSpec) -> Result<u8, Failure> {
    match spec.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Quantum(args) => cmd_quantum(args),
        Command::Visibility(args) => cmd_visibility(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Scan(args) => cmd_scan(args),
        Command::VerifyPaper(args) => cmd_verify(args),
    }
}

/// Resolves `preset:NAME`, inline JSON, or a file path into a direction set,
/// warning when the set contains a repeated measurement axis.
fn resolve_dirs(arg: &str) -> Result<DirectionSet, Failure> {
    let set = if let Some(name) = arg.strip_prefix("preset:") {
        presets::preset_by_name(name)?
    } else if arg.trim_start().starts_with('{') {
        DirectionSet::from_json_str(arg)?
    } else {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| Failure::validation(format!("cannot read direction file {arg}: {e}")))?;
        DirectionSet::from_json_str(&text)?
    };
    if set.has_repeated_axes() {
        eprintln!("warning: direction set repeats a measurement axis; the instance may be degenerate");
    }
    Ok(set)
}

fn resolve_instance(args: &InstanceArgs) -> Result<(SteeringFunctional, DirectionSet), Failure> {
    let f = SteeringFunctional::new(args.family.into(), args.n)?;
    let b = resolve_dirs(&args.dirs)?;
    if b.len() != args.n {
        return Err(Failure::validation(format!(
            "--n is {} but the direction set has {} entries",
            args.n,
            b.len()
        )));
    }
    Ok((f, b))
}

fn resolve_family(select: &StateSelect) -> Result<StateFamily, Failure> {
    match select.state {
        StateArg::Werner => {
            if select.theta.is_some() {
                return Err(Failure::validation(
                    "--theta applies only to --state generalized-werner",
                ));
            }
            Ok(StateFamily::werner())
        }
        StateArg::GeneralizedWerner => {
            let theta = select
                .theta
                .ok_or_else(|| Failure::validation("--state generalized-werner requires --theta"))?;
            Ok(StateFamily::generalized_werner(theta)?)
        }
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::validation(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn reject_csv(format: FormatArg, command: &str) -> Result<(), Failure> {
    if matches!(format, FormatArg::Csv) {
        return Err(Failure::validation(format!(
            "csv format applies only to scan, not {command}"
        )));
    }
    Ok(())
}

fn signs_line(s: &SignAssignment) -> String {
    s.signs()
        .iter()
        .map(|&x| if x > 0 { "+1" } else { "-1" })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_bound(args: BoundArgs) -> Result<u8, Failure> {
    reject_csv(args.format, "bound")?;
    let (f, b) = resolve_instance(&args.instance)?;
    let (c, argmax) = lhs_bound(&f, &b)?;
    match args.format {
        FormatArg::Human => {
            println!("C = {c:.6}");
            println!("argmax signs: {}", signs_line(&argmax));
        }
        FormatArg::Json => {
            #[derive(Serialize)]
            struct BoundOut {
                c: f64,
                argmax_signs: SignAssignment,
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&BoundOut {
                    c,
                    argmax_signs: argmax
                })
                .expect("report serializes")
            );
        }
        FormatArg::Csv => unreachable!("rejected above"),
    }
    Ok(0)
}

fn cmd_quantum(args: QuantumArgs) -> Result<u8, Failure> {
    reject_csv(args.format, "quantum")?;
    let (f, b) = resolve_instance(&args.instance)?;
    let family = resolve_family(&args.state)?;
    let state = family.state(args.noise)?;
    let (q, axes) = quantum_value(&f, &b, &state, args.strategy.into())?;
    match args.format {
        FormatArg::Human => {
            println!("Q = {q:.6}");
            for (i, a) in axes.iter().enumerate() {
                println!("alice axis {}: [{:.6}, {:.6}, {:.6}]", i + 1, a.x(), a.y(), a.z());
            }
        }
        FormatArg::Json => {
            #[derive(Serialize)]
            struct QuantumOut {
                q: f64,
                alice_axes: Vec<qsteer::UnitVector3>,
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&QuantumOut { q, alice_axes: axes })
                    .expect("report serializes")
            );
        }
        FormatArg::Csv => unreachable!("rejected above"),
    }
    Ok(0)
}

fn cmd_visibility(args: VisibilityArgs) -> Result<u8, Failure> {
    reject_csv(args.format, "visibility")?;
    let (f, b) = resolve_instance(&args.instance)?;
    let family = resolve_family(&args.state)?;
    let report = evaluate(&f, &b, &family, args.strategy.into())?;
    match args.format {
        FormatArg::Human => {
            println!("C = {:.6}", report.c);
            println!("Q = {:.6}", report.q);
            println!("V = {:.6}", report.v);
            println!("argmax signs: {}", signs_line(&report.argmax_signs));
        }
        FormatArg::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
        FormatArg::Csv => unreachable!("rejected above"),
    }
    Ok(0)
}

fn cmd_optimize(args: OptimizeArgs) -> Result<u8, Failure> {
    reject_csv(args.format, "optimize")?;
    let f = SteeringFunctional::new(args.family.into(), args.n)?;
    let family = resolve_family(&args.state)?;
    let cfg = OptimizerConfig {
        restarts: args.restarts,
        seed: args.seed,
        max_iters: args.max_iters,
        objective_tol: args.objective_tol,
        simplex_scale: args.simplex_scale,
        gauge_fix: !args.no_gauge_fix,
    };
    let result = match &args.from {
        Some(dirs_arg) => {
            let start = resolve_dirs(dirs_arg)?;
            qsteer::optimizer::polish_directions(&f, &family, &start, &cfg)?
        }
        None => qsteer::optimizer::optimize_directions(&f, &family, &cfg)?,
    };
    if let Some(path) = &args.out {
        std::fs::write(path, result.best.to_json_string())
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display())))?;
    }
    match args.format {
        FormatArg::Human => {
            println!("best V = {:.6}", result.report.v);
            println!("C = {:.6}", result.report.c);
            println!("Q = {:.6}", result.report.q);
            println!(
                "restarts within tolerance of the best: {}",
                result.restarts_within_tol
            );
            println!("directions:");
            for d in result.best.directions() {
                println!("  [{:.6}, {:.6}, {:.6}]", d.x(), d.y(), d.z());
            }
        }
        FormatArg::Json => println!(
            "{}",
            serde_json::to_string_pretty(&result).expect("result serializes")
        ),
        FormatArg::Csv => unreachable!("rejected above"),
    }
    Ok(0)
}

/// The canonical partner set scanned into the companion column: the
/// pole-oriented Platonic set for a chained scan, the published optimized
/// chained set (or the reference fan) for a linear scan.
fn companion_scan(
    family: Family,
    n: usize,
    grid: &[f64],
    strategy: Strategy,
) -> Option<qsteer::ScanResult> {
    let (partner_family, partner, label) = match family {
        Family::Chained => (
            Family::Linear,
            presets::platonic(n).ok()?,
            format!("platonic-{n}"),
        ),
        Family::Linear => match presets::optimized_chained(n) {
            Ok(set) => (Family::Chained, set, format!("optimized-chained-{n}")),
            Err(_) => (
                Family::Chained,
                presets::chained_reference(n).ok()?,
                format!("chained-eq6-{n}"),
            ),
        },
    };
    let f = SteeringFunctional::new(partner_family, n).ok()?;
    scan_theta(&f, &partner, grid, strategy)
        .ok()
        .map(|s| s.with_label(&label))
}

fn cmd_scan(args: ScanArgs) -> Result<u8, Failure> {
    let (f, b) = resolve_instance(&args.instance)?;
    let grid = uniform_grid(args.grid)?;
    let strategy: Strategy = args.strategy.into();
    let label = args
        .instance
        .dirs
        .strip_prefix("preset:")
        .unwrap_or("custom")
        .to_string();
    let own = scan_theta(&f, &b, &grid, strategy)?.with_label(&label);
    let table = match companion_scan(f.family(), f.n(), &grid, strategy) {
        Some(partner) => qsteer::ScanResult::merge(&own, &partner)?,
        None => {
            eprintln!("note: no canonical partner set for this family and n; companion column left empty");
            own
        }
    };
    let text = match args.format {
        FormatArg::Csv => table.to_csv(),
        FormatArg::Json => serde_json::to_string_pretty(&table).expect("table serializes"),
        FormatArg::Human => {
            return Err(Failure::validation(
                "scan emits machine tables; use --format csv or json",
            ))
        }
    };
    write_or_print(&args.out, &text)?;
    Ok(0)
}

/// One verification row: `pass` is |observed - expected| <= tolerance, or
/// observed <= expected + tolerance for one-sided (optimizer) checks.
#[derive(Serialize)]
struct Check {
    name: String,
    expected: f64,
    observed: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn two_sided(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            expected,
            observed,
            tolerance,
            pass: (observed - expected).abs() <= tolerance,
        }
    }

    fn at_most(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            expected,
            observed,
            tolerance,
            pass: observed <= expected + tolerance,
        }
    }
}

fn verify_checks(skip_optimizer: bool) -> Result<Vec<Check>, Failure> {
    let mut checks = Vec::new();
    let werner = StateFamily::werner();

    // Chained reference fans: closed-form bound, quantum value, visibility.
    let mut worst_all_ones_gap = 0.0_f64;
    for n in 3..=12usize {
        let f = SteeringFunctional::new(Family::Chained, n)?;
        let b = presets::chained_reference(n)?;
        let report = evaluate(&f, &b, &werner, Strategy::General)?;
        let half = PI / (2.0 * n as f64);
        checks.push(Check::two_sided(
            format!("chained-eq6-{n} bound"),
            2.0 / half.tan(),
            report.c,
            1e-9,
        ));
        checks.push(Check::two_sided(
            format!("chained-eq6-{n} quantum value"),
            2.0 * n as f64 * half.cos(),
            report.q,
            1e-9,
        ));
        checks.push(Check::two_sided(
            format!("chained-eq6-{n} visibility"),
            1.0 / (n as f64 * half.sin()),
            report.v,
            1e-9,
        ));
        let all_ones = SignAssignment::new(vec![1; n])?;
        let coeffs = bob_coefficients(&f, &all_ones)?;
        let mut w = nalgebra::Vector3::zeros();
        for (ci, d) in coeffs.iter().zip(b.vectors()) {
            w += *ci * d;
        }
        worst_all_ones_gap = worst_all_ones_gap.max((report.c - w.norm()).abs());
    }
    checks.push(Check::two_sided(
        "chained-eq6 all-ones attainment gap (max over n=3..12)",
        0.0,
        worst_all_ones_gap,
        1e-9,
    ));

    // Pole-oriented Platonic linear bounds.
    let sqrt5 = 5.0_f64.sqrt();
    for (n, expected) in [
        (2usize, 1.0 / 2.0_f64.sqrt()),
        (3, 1.0 / 3.0_f64.sqrt()),
        (4, 1.0 / 3.0_f64.sqrt()),
        (6, (1.0 + sqrt5) / 6.0),
        (10, (3.0 + sqrt5) / 10.0),
    ] {
        let f = SteeringFunctional::new(Family::Linear, n)?;
        let (c, _) = lhs_bound(&f, &presets::platonic(n)?)?;
        checks.push(Check::two_sided(format!("platonic-{n} bound"), expected, c, 1e-9));
    }

    // Orthogonal-axes chained instance at n=3.
    {
        let f = SteeringFunctional::new(Family::Chained, 3)?;
        let b = presets::platonic(3)?;
        let report = evaluate(&f, &b, &werner, Strategy::General)?;
        let sqrt2 = 2.0_f64.sqrt();
        checks.push(Check::two_sided("chained xyz-3 bound", 2.0 * sqrt2, report.c, 1e-9));
        checks.push(Check::two_sided(
            "chained xyz-3 quantum value",
            3.0 * sqrt2,
            report.q,
            1e-9,
        ));
        checks.push(Check::two_sided(
            "chained xyz-3 visibility",
            2.0 / 3.0,
            report.v,
            1e-9,
        ));
    }

    // Worked four-setting example from explicit polar angles.
    {
        let f = SteeringFunctional::new(Family::Chained, 4)?;
        let report = evaluate(&f, &presets::example_chained_4(), &werner, Strategy::General)?;
        checks.push(Check::two_sided("paper-sec3a quantum value", 3.630746, report.q, 1e-5));
        checks.push(Check::two_sided("paper-sec3a bound", 2.055877, report.c, 1e-5));
        checks.push(Check::two_sided("paper-sec3a visibility", 0.566241, report.v, 1e-5));
    }

    // Published optimized chained sets.
    for (preset, q, c, v) in [
        ("paper-eq15", 3.605552, 2.0, 0.5547),
        ("paper-eq17", 8.387765, 4.426295, 0.527709),
        ("paper-eq18-0", 14.702807, 7.615109, 0.517936),
    ] {
        let b = presets::preset_by_name(preset)?;
        let f = SteeringFunctional::new(Family::Chained, b.len())?;
        let report = evaluate(&f, &b, &werner, Strategy::General)?;
        checks.push(Check::two_sided(format!("{preset} quantum value"), q, report.q, 1e-4));
        checks.push(Check::two_sided(format!("{preset} bound"), c, report.c, 1e-4));
        checks.push(Check::two_sided(format!("{preset} visibility"), v, report.v, 1e-4));
    }

    // Linear closed forms: quarter-angle identity and agreement with the
    // numerical scan.
    let grid = uniform_grid(100)?;
    for n in [4usize, 6, 10] {
        let f = SteeringFunctional::new(Family::Linear, n)?;
        let b = presets::platonic(n)?;
        let (bound, _) = lhs_bound(&f, &b)?;
        checks.push(Check::two_sided(
            format!("linear-{n} closed form at pi/4 equals the bound"),
            bound,
            linear_visibility_closed_form(n, FRAC_PI_4)?,
            1e-12,
        ));
        let scan = scan_theta(&f, &b, &grid, Strategy::General)?;
        let mut worst = 0.0_f64;
        for row in &scan.rows {
            let want = linear_visibility_closed_form(n, row.theta)?;
            let got = row.v_linear.expect("linear scan fills its column");
            worst = worst.max((got - want).abs());
        }
        checks.push(Check::two_sided(
            format!("linear-{n} closed form vs numerical scan (max gap)"),
            0.0,
            worst,
            1e-9,
        ));
    }

    // Violation windows of the published chained sets.
    for (preset, lo, hi) in [
        ("paper-eq15", 0.120673, 1.45012),
        ("paper-eq17", 0.0605856, 1.51021),
        ("paper-eq18-0", 0.0610922, 1.5097),
    ] {
        let b = presets::preset_by_name(preset)?;
        let f = SteeringFunctional::new(Family::Chained, b.len())?;
        let (got_lo, got_hi) = threshold_angles(&f, &b, Strategy::General)?;
        checks.push(Check::two_sided(format!("{preset} lower threshold"), lo, got_lo, 1e-3));
        checks.push(Check::two_sided(format!("{preset} upper threshold"), hi, got_hi, 1e-3));
    }

    // Windows where the chained sets beat the linear closed forms.
    for (preset, lo, hi) in [
        ("paper-eq15", 0.25981, 1.35482),
        ("paper-eq17", 0.121383, 1.44941),
        ("paper-eq18-0", 0.193389, 1.37741),
    ] {
        let b = presets::preset_by_name(preset)?;
        let f = SteeringFunctional::new(Family::Chained, b.len())?;
        let (got_lo, got_hi) = crossover_angles(&f, &b, Strategy::General)?;
        checks.push(Check::two_sided(format!("{preset} crossover start"), lo, got_lo, 1e-3));
        checks.push(Check::two_sided(format!("{preset} crossover end"), hi, got_hi, 1e-3));
    }

    // Multistart optimizer reaches the published visibilities (one-sided).
    if !skip_optimizer {
        let cfg = OptimizerConfig::default();
        for (n, target, tol) in [
            (2usize, 1.0 / 2.0_f64.sqrt(), 1e-6),
            (3, 2.0 / 3.0, 1e-6),
            (4, 0.5547, 1e-4),
            (6, 0.527709, 1e-4),
            (10, 0.517936, 5e-4),
        ] {
            let f = SteeringFunctional::new(Family::Chained, n)?;
            let result = qsteer::optimizer::optimize_directions(&f, &werner, &cfg)?;
            checks.push(Check::at_most(
                format!("optimizer best visibility n={n}"),
                target,
                result.report.v,
                tol,
            ));
        }
    }

    Ok(checks)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let checks = verify_checks(args.skip_optimizer)?;
    let passed = checks.iter().filter(|c| c.pass).count();
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {}: expected {:.7}, observed {:.7} (tol {:.0e})",
            c.name, c.expected, c.observed, c.tolerance
        );
    }
    println!("{passed}/{} checks passed", checks.len());
    if let Some(path) = &args.report {
        let text = serde_json::to_string_pretty(&checks).expect("checks serialize");
        std::fs::write(path, text)
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if passed == checks.len() { 0 } else { 3 })
}
