//! Command-line front end: body construction, invariant tables, flow runs,
//! floating-body estimation, and the verification suite.
//!
//! Exit status: 0 on success, 1 when a computation fails or the verification
//! suite reports violations, 2 when the request itself is malformed (unknown
//! flags, bad list syntax, excluded indices, unsupported grids).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use centroaffine::body::ConvexBody;
use centroaffine::error::{Error, Result};
use centroaffine::floating::omega_phi_limit;
use centroaffine::flow::{evolve, FlowConfig, FlowDriver, StopReason};
use centroaffine::harness::{random_body, run_suite, BaseShape, BodySpec};
use centroaffine::invariants::{
    isoperimetric_ratio, omega_2p, omega_p, omega_phi, PAffineIndex, PhiSpec,
};
use centroaffine::jsonio::{body_from_json, body_to_json, fmt_sig, trajectory_to_jsonl};
use centroaffine::spherical::SphereGrid;

#[derive(Parser)]
#[command(
    name = "centroaffine",
    version,
    about = "Centro-affine invariants, curvature flows, and floating bodies of smooth convex bodies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct bodies and write them as body JSON.
    #[command(subcommand)]
    Body(BodyCommand),
    /// Tabulate invariants of a stored body as CSV.
    Invariants(InvariantsArgs),
    /// Integrate a curvature flow and export the trajectory as JSON lines.
    Evolve(EvolveArgs),
    /// Estimate the weighted floating-body limit and report diagnostics.
    Floating(FloatingArgs),
    /// Run the randomized verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum BodyCommand {
    /// Build a ball, ellipse, or ellipsoid, optionally with a random
    /// harmonic perturbation of its support function.
    Make(MakeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Shape {
    Ball,
    Ellipse,
    Ellipsoid,
}

#[derive(Args)]
struct MakeArgs {
    /// Ambient dimension: 2 (plane) or 3 (space).
    #[arg(long)]
    dim: usize,
    #[arg(long, value_enum)]
    shape: Shape,
    /// Semiaxes: one number for a ball, two for an ellipse, three for an
    /// ellipsoid.
    #[arg(long)]
    axes: String,
    /// Random support perturbation "degree,amplitude" (max harmonic degree
    /// and per-coefficient amplitude bound).
    #[arg(long)]
    perturb: Option<String>,
    /// Seed for --perturb.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict the perturbation to even harmonics so the body stays
    /// origin-symmetric.
    #[arg(long)]
    symmetric: bool,
    /// Grid resolution: M for dim 2, "NT,NP" for dim 3.
    #[arg(long)]
    grid: String,
    /// Output body JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InvariantsArgs {
    /// Body JSON file.
    #[arg(long)]
    body: PathBuf,
    /// Comma-separated indices p (finite, p not in {0, -n}).
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    /// Also evaluate the weighted invariant for phi(s) = scale*s^alpha,
    /// given as "alpha" or "alpha,scale".
    #[arg(long)]
    phi: Option<String>,
    /// Fill the omega_2p column (second flow derivative, closed form).
    #[arg(long)]
    omega2: bool,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    /// Body JSON file.
    #[arg(long)]
    body: PathBuf,
    /// Drive by the power-of-curvature speed for this index p.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "phi", required_unless_present = "phi")]
    p: Option<f64>,
    /// Drive by the weighted speed phi(s) = s^alpha.
    #[arg(long)]
    phi: Option<f64>,
    /// Integration horizon.
    #[arg(long = "t-max")]
    t_max: f64,
    /// Initial step size.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Step-control factor in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    safety: f64,
    /// Keep every K-th accepted step as a snapshot.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Output JSONL path, one record per snapshot.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FloatingArgs {
    /// Body JSON file (planar bodies only).
    #[arg(long)]
    body: PathBuf,
    /// Weight exponent alpha in phi(s) = s^alpha.
    #[arg(long)]
    phi: f64,
    /// Strictly decreasing positive probe times "t1,t2,...".
    #[arg(long = "t-list")]
    t_list: String,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Master seed; reruns with the same configuration reproduce the report.
    #[arg(long)]
    seed: u64,
    /// Number of random-body trials per dimension.
    #[arg(long)]
    trials: usize,
    /// Dimensions to test: "2", "3", or "2,3".
    #[arg(long)]
    dims: String,
    /// Indices exercised by the per-index checks.
    #[arg(long = "p-set", allow_hyphen_values = true)]
    p_set: Option<String>,
    /// Report JSON path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_f64_list(text: &str, flag: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{flag}: {tok:?} is not a number")))
        })
        .collect()
}

fn parse_usize_list(text: &str, flag: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("{flag}: {tok:?} is not a positive integer")))
        })
        .collect()
}

fn load_body(path: &PathBuf) -> Result<ConvexBody> {
    body_from_json(&fs::read_to_string(path)?)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn body_make(a: MakeArgs) -> Result<ExitCode> {
    let res = parse_usize_list(&a.grid, "--grid")?;
    let grid = match (a.dim, res.as_slice()) {
        (2, [m]) => SphereGrid::circle(*m)?,
        (3, [nt, np]) => SphereGrid::sphere(*nt, *np)?,
        (2, _) => return Err(Error::Config("--dim 2 takes --grid M".into())),
        (3, _) => return Err(Error::Config("--dim 3 takes --grid NT,NP".into())),
        (d, _) => return Err(Error::Config(format!("--dim must be 2 or 3, got {d}"))),
    };
    let axes = parse_f64_list(&a.axes, "--axes")?;
    let base = match (a.shape, axes.as_slice()) {
        (Shape::Ball, [r]) => BaseShape::Ball(*r),
        (Shape::Ellipse, [x, y]) => BaseShape::Ellipse(*x, *y),
        (Shape::Ellipsoid, [x, y, z]) => BaseShape::Ellipsoid(*x, *y, *z),
        (s, got) => {
            return Err(Error::Config(format!(
                "--shape {} takes {} axes, got {}",
                match s {
                    Shape::Ball => "ball",
                    Shape::Ellipse => "ellipse",
                    Shape::Ellipsoid => "ellipsoid",
                },
                match s {
                    Shape::Ball => 1,
                    Shape::Ellipse => 2,
                    Shape::Ellipsoid => 3,
                },
                got.len()
            )))
        }
    };
    let (degree, amplitude) = match &a.perturb {
        None => (1, Some(0.0)),
        Some(text) => {
            let parts = parse_f64_list(text, "--perturb")?;
            match parts.as_slice() {
                [d, amp] if d.fract() == 0.0 && *d >= 1.0 => (*d as usize, Some(*amp)),
                _ => {
                    return Err(Error::Config(
                        "--perturb takes \"degree,amplitude\" with integer degree >= 1".into(),
                    ))
                }
            }
        }
    };
    let mut spec = BodySpec::new(grid, base, degree)?;
    spec.amplitude = amplitude;
    spec.symmetrize = a.symmetric;
    let body = random_body(a.seed, 0, &spec)?;
    fs::write(&a.out, body_to_json(&body))?;
    let v = body.validity();
    println!(
        "wrote {}: dim {}, {} nodes, min support {:.6e}, min curvature eigenvalue {:.6e}",
        a.out.display(),
        body.dim(),
        body.support().values().len(),
        v.min_h,
        v.min_eig
    );
    Ok(ExitCode::SUCCESS)
}

fn invariants_table(a: InvariantsArgs) -> Result<ExitCode> {
    let phi = match &a.phi {
        None => None,
        Some(text) => {
            let parts = parse_f64_list(text, "--phi")?;
            match parts.as_slice() {
                [alpha] => Some(PhiSpec::power(*alpha)?),
                [alpha, scale] => Some(PhiSpec::new(*alpha, *scale)?),
                _ => {
                    return Err(Error::Config(
                        "--phi takes \"alpha\" or \"alpha,scale\"".into(),
                    ))
                }
            }
        }
    };
    let ps = parse_f64_list(&a.p, "--p")?;
    let body = load_body(&a.body)?;
    // Reject bad indices before computing anything so the table is all or
    // nothing.
    let indices = ps
        .iter()
        .map(|&p| PAffineIndex::from_p(body.dim(), p))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("p,e,omega_p,omega_2p,iso_ratio\n");
    for (p, idx) in ps.iter().zip(&indices) {
        let o2 = if a.omega2 {
            omega_2p(&body, idx).map(|v| fmt_sig(v, 12)).unwrap_or_default()
        } else {
            String::new()
        };
        let iso = isoperimetric_ratio(&body, idx)
            .map(|v| fmt_sig(v, 12))
            .unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            p,
            fmt_sig(idx.exponent(), 12),
            fmt_sig(omega_p(&body, idx), 12),
            o2,
            iso
        ));
    }
    emit(a.out.as_ref(), &csv)?;
    if let Some(phi) = phi {
        println!(
            "omega_phi(alpha={}, scale={}) = {}",
            phi.alpha(),
            phi.scale(),
            fmt_sig(omega_phi(&body, &phi), 12)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn evolve_flow(a: EvolveArgs) -> Result<ExitCode> {
    let body = load_body(&a.body)?;
    let driver = match (a.p, a.phi) {
        (Some(p), None) => FlowDriver::Power(PAffineIndex::from_p(body.dim(), p)?),
        (None, Some(alpha)) => FlowDriver::Phi(PhiSpec::power(alpha)?),
        _ => unreachable!("clap enforces exactly one driver"),
    };
    let config = FlowConfig::new(driver, a.dt, a.t_max)?
        .with_safety(a.safety)?
        .with_stride(a.stride)?;
    let traj = evolve(&body, &config);
    fs::write(&a.out, trajectory_to_jsonl(&traj))?;
    let t_end = *traj.times.last().unwrap_or(&0.0);
    println!(
        "{} accepted steps to t = {:.6}, {} snapshots -> {}",
        traj.times.len().saturating_sub(1),
        t_end,
        traj.snapshots.len(),
        a.out.display()
    );
    match traj.stop_reason {
        StopReason::Completed | StopReason::NearExtinction => Ok(ExitCode::SUCCESS),
        reason => {
            eprintln!("error: flow stopped early at t = {t_end:.6}: {reason:?}");
            Ok(ExitCode::from(1))
        }
    }
}

fn floating_diagnostics(a: FloatingArgs) -> Result<ExitCode> {
    let ts = parse_f64_list(&a.t_list, "--t-list")?;
    let phi = PhiSpec::power(a.phi)?;
    let body = load_body(&a.body)?;
    let diag = omega_phi_limit(&body, &phi, &ts)?;
    let mut csv = String::from("t,slope,extrapolated,omega_phi_direct,ratio\n");
    for (t, slope) in diag.ts.iter().zip(&diag.slopes) {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            t,
            fmt_sig(*slope, 12),
            fmt_sig(diag.extrapolated, 12),
            fmt_sig(diag.omega_phi_direct, 12),
            fmt_sig(diag.ratio, 12)
        ));
    }
    emit(a.out.as_ref(), &csv)?;
    if a.out.is_some() {
        println!(
            "extrapolated/direct ratio = {} -> {}",
            fmt_sig(diag.ratio, 12),
            a.out.as_ref().unwrap().display()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_suite(a: VerifyArgs) -> Result<ExitCode> {
    let dims = parse_usize_list(&a.dims, "--dims")?;
    let p_set = match &a.p_set {
        Some(text) => parse_f64_list(text, "--p-set")?,
        None => vec![1.0, 2.0, -0.9, -0.5, 5.0],
    };
    let report = run_suite(a.seed, a.trials, &dims, &p_set, a.out.as_deref())?;
    print!("{}", report.human_table());
    if let Some(path) = &a.out {
        println!("report JSON -> {}", path.display());
    }
    if report.violations() == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Body(BodyCommand::Make(a)) => body_make(a),
        Command::Invariants(a) => invariants_table(a),
        Command::Evolve(a) => evolve_flow(a),
        Command::Floating(a) => floating_diagnostics(a),
        Command::Verify(a) => verify_suite(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::BadIndex(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
