//! Randomized verification suite: seeded generation of admissible bodies and
//! volume-preserving maps, plus the registry of every inequality and identity
//! the library claims, executed as deterministic checks with signed margins.
//!
//! Determinism contract: every random draw comes from a counter-based
//! substream keyed by (master seed, trial index, purpose), so trials can run
//! concurrently and a re-run with the same configuration produces a
//! byte-identical report.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::body::{ellipsoid_support, mat_det, mat_mul, ConvexBody, Mat3};
use crate::error::{Error, Result};
use crate::floating::omega_phi_limit;
use crate::flow::{
    check_containment, dual_flow_check, evolve, flow_derivatives, phi_flow_rate, FlowConfig,
    FlowDriver,
};
use crate::invariants::{
    isoperimetric_ratio, omega_1p, omega_2p, omega_exponent, omega_p, omega_phi,
    unit_ball_volume, volume_product, PAffineIndex, PhiSpec,
};
use crate::spherical::{direction_angles, ScalarField, SphereGrid};

/// Negative slack allowed before an inequality check counts as violated.
const TOL_INEQUALITY: f64 = 1e-8;
/// Relative tolerance for identities under planar volume-preserving maps
/// (resampling error of the image body).
const TOL_SL2: f64 = 1e-4;
/// Relative tolerance for identities under spatial volume-preserving maps.
const TOL_SL3: f64 = 1e-3;
/// Relative tolerance for the polarity identity on numerically constructed
/// polar bodies.
const TOL_DUALITY: f64 = 1e-4;
/// Slack for the three-point log-convexity inequality (log scale).
const TOL_LOG_CONVEXITY: f64 = 1e-10;
/// Relative tolerance of finite-difference first variations against the
/// closed-form rates.
const TOL_FIRST_VARIATION: f64 = 1e-3;
/// Relative tolerance of the flow second derivative against the closed form.
const TOL_SECOND_DERIVATIVE: f64 = 1e-2;
/// Relative tolerance of the polar-volume rate against the dual invariant.
const TOL_DUAL_FLOW: f64 = 1e-2;
/// Allowed per-step relative decrease of the volume product along a flow.
const TOL_VP_STEP: f64 = 1e-7;
/// Allowed negative support gap while co-evolving a nested pair.
const TOL_CONTAINMENT: f64 = 1e-8;
/// Relative tolerance of the equality cases on centered ellipsoids.
const TOL_EQUALITY: f64 = 1e-6;
/// Tolerance of the isoperimetric ratio's equality case (= 1) on ellipsoids.
const TOL_RATIO_EQUALITY: f64 = 1e-8;
/// Allowed relative drift of the volume product along an ellipsoid
/// trajectory (the flow is homothetic there, so the product is conserved).
const TOL_ELLIPSE_VP_DRIFT: f64 = 1e-6;
/// Allowed relative drift of the axis ratio along an ellipsoid trajectory.
const TOL_HOMOTHETY: f64 = 1e-5;
/// Allowed spread of the floating-body constant across bodies.
const TOL_C2_SPREAD: f64 = 2e-2;
/// Slack for the symmetric-body volume-product upper bound.
const TOL_SANTALO: f64 = 1e-8;
/// Relative sup-norm tolerance for the double-polar reconstruction.
const TOL_BIPOLAR_2: f64 = 1e-5;
const TOL_BIPOLAR_3: f64 = 1e-4;

/// Weight exponents used wherever the suite needs a concrete φ(s) = s^α.
const PHI_ALPHAS: [f64; 2] = [0.25, 0.5];
/// Probe times for the floating-body limit on unit-scale bodies.
const FLOATING_TIMES: [f64; 3] = [0.01, 0.005, 0.0025];

/// Horizon the trajectory checks integrate to.
const FLOW_T_MAX: f64 = 0.1;

/// Initial step for the trajectory checks on the default grids.
///
/// Explicit Euler amplifies a grid-frequency perturbation of the support
/// function by roughly |1 − dt·e·𝒦^e·h·j²/f| per step (j the highest
/// resolved wavenumber), so above a grid- and body-dependent threshold the
/// step control ends up riding the stability boundary: it halves until the
/// convexity check passes, which bounds the noise but leaves it large
/// enough to corrupt per-step volume-product differences near the 1e−6
/// level. These values sit a factor ≥ 2 below the smallest threshold
/// measured along the suite's trajectories (the expanding regime tightens
/// it over time: ≈ 1.2e−4 on the 256-point circle and ≈ 3e−5 on the 32×64
/// sphere at p = −0.9 by t = 0.1), where trajectories step uniformly and
/// conserved quantities drift at roundoff level.
fn stable_dt0(dim: usize) -> f64 {
    if dim == 2 {
        5e-5
    } else {
        2e-5
    }
}

const PURPOSE_BODY: u64 = 1;
const PURPOSE_SL: u64 = 2;
const PURPOSE_SYMMETRIC: u64 = 3;
const PURPOSE_OUTER: u64 = 4;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic substream for (master seed, trial, purpose): the inputs are
/// mixed through an avalanche function into a stream-cipher seed, so distinct
/// purposes never share a stream.
fn substream(master_seed: u64, trial: u64, purpose: u64) -> ChaCha8Rng {
    let mut state = master_seed
        ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ purpose.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// Unperturbed starting shape of a generated body.
#[derive(Clone, Copy, Debug)]
pub enum BaseShape {
    Ball(f64),
    Ellipse(f64, f64),
    Ellipsoid(f64, f64, f64),
}

impl BaseShape {
    fn min_semiaxis(&self) -> f64 {
        match *self {
            BaseShape::Ball(r) => r,
            BaseShape::Ellipse(a, b) => a.min(b),
            BaseShape::Ellipsoid(a, b, c) => a.min(b).min(c),
        }
    }

    fn support(&self, grid: &Arc<SphereGrid>) -> Result<ScalarField> {
        let axes: Vec<f64> = match (*self, grid.dim()) {
            (BaseShape::Ball(r), 2) => vec![r, r],
            (BaseShape::Ball(r), _) => vec![r, r, r],
            (BaseShape::Ellipse(a, b), _) => vec![a, b],
            (BaseShape::Ellipsoid(a, b, c), _) => vec![a, b, c],
        };
        ellipsoid_support(grid.clone(), &axes)
    }
}

/// Recipe for a random admissible body: a base shape plus a bounded random
/// harmonic perturbation of its support function.
#[derive(Clone, Debug)]
pub struct BodySpec {
    pub grid: Arc<SphereGrid>,
    pub base: BaseShape,
    /// Maximum harmonic degree of the perturbation.
    pub degree: usize,
    /// Per-coefficient amplitude bound; `None` uses
    /// 0.1·(smallest semiaxis)/degree², which keeps generated fields well
    /// inside the admissible class so rejections stay rare.
    pub amplitude: Option<f64>,
    /// Force h(u) = h(−u) exactly (even harmonics only, plus exact antipodal
    /// averaging of the sampled field).
    pub symmetrize: bool,
}

impl BodySpec {
    pub fn new(grid: Arc<SphereGrid>, base: BaseShape, degree: usize) -> Result<Self> {
        match (&base, grid.dim()) {
            (BaseShape::Ellipse(..), 3) => {
                return Err(Error::Config(
                    "an ellipse base requires a planar grid".into(),
                ))
            }
            (BaseShape::Ellipsoid(..), 2) => {
                return Err(Error::Config(
                    "an ellipsoid base requires a spatial grid".into(),
                ))
            }
            _ => {}
        }
        if !(base.min_semiaxis() > 0.0 && base.min_semiaxis().is_finite()) {
            return Err(Error::Config("base semiaxes must be positive".into()));
        }
        Ok(BodySpec {
            grid,
            base,
            degree,
            amplitude: None,
            symmetrize: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// The effective per-coefficient amplitude bound.
    pub fn amplitude_bound(&self) -> f64 {
        self.amplitude.unwrap_or_else(|| {
            let d = self.degree.max(1) as f64;
            0.1 * self.base.min_semiaxis() / (d * d)
        })
    }
}

/// Associated Legendre function P_ℓ^m(x) without phase factor; the standard
/// upward recurrence, adequate for the small degrees used here.
fn assoc_legendre(l: usize, m: usize, x: f64) -> f64 {
    let mut pmm = 1.0;
    if m > 0 {
        let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
        let mut factor = 1.0;
        for _ in 0..m {
            pmm *= factor * s;
            factor += 2.0;
        }
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut curr = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * curr - (ll + m - 1) as f64 * prev)
            / (ll - m) as f64;
        prev = curr;
        curr = next;
    }
    curr
}

/// Perturbation basis up to the given degree, one nodal field per harmonic,
/// each normalized to unit sup on the grid. With `symmetrize` only the even
/// degrees (the antipodally symmetric ones) are kept.
fn harmonic_basis(grid: &Arc<SphereGrid>, degree: usize, symmetrize: bool) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    if grid.dim() == 2 {
        for j in 1..=degree {
            if symmetrize && j % 2 == 1 {
                continue;
            }
            let jf = j as f64;
            basis.push((0..grid.len()).map(|i| (jf * grid.angle(i)).cos()).collect());
            basis.push((0..grid.len()).map(|i| (jf * grid.angle(i)).sin()).collect());
        }
    } else {
        let angles: Vec<(f64, f64)> = (0..grid.len())
            .map(|i| direction_angles(grid.node(i)))
            .collect();
        for l in 1..=degree {
            if symmetrize && l % 2 == 1 {
                continue;
            }
            for m in 0..=l {
                let p: Vec<f64> = angles
                    .iter()
                    .map(|&(theta, _)| assoc_legendre(l, m, theta.cos()))
                    .collect();
                if m == 0 {
                    basis.push(p);
                } else {
                    let mf = m as f64;
                    basis.push(
                        p.iter()
                            .zip(&angles)
                            .map(|(&v, &(_, phi))| v * (mf * phi).cos())
                            .collect(),
                    );
                    basis.push(
                        p.iter()
                            .zip(&angles)
                            .map(|(&v, &(_, phi))| v * (mf * phi).sin())
                            .collect(),
                    );
                }
            }
        }
    }
    for field in &mut basis {
        let sup = field.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
        if sup > 1e-14 {
            for v in field.iter_mut() {
                *v /= sup;
            }
        }
    }
    basis
}

/// Sample one perturbed support field from the spec with the given stream
/// and validate it; `None` when the draw leaves the admissible class.
fn draw_body(
    spec: &BodySpec,
    basis: &[Vec<f64>],
    base: &ScalarField,
    rng: &mut ChaCha8Rng,
) -> Option<ConvexBody> {
    let bound = spec.amplitude_bound();
    let mut h = base.values().to_vec();
    for field in basis {
        let c = bound * (2.0 * rng.gen::<f64>() - 1.0);
        for (hv, &fv) in h.iter_mut().zip(field) {
            *hv += c * fv;
        }
    }
    if spec.symmetrize {
        for i in 0..h.len() {
            let j = spec.grid.antipode(i);
            if j > i {
                let avg = 0.5 * (h[i] + h[j]);
                h[i] = avg;
                h[j] = avg;
            }
        }
    }
    let field = ScalarField::new(spec.grid.clone(), h).ok()?;
    ConvexBody::from_support(field).ok()
}

/// Draw a validated random body for (master seed, trial): the base support
/// plus one uniform coefficient in ±amplitude per basis harmonic, rejecting
/// and redrawing until validation passes. Same inputs, same body, bit for
/// bit.
pub fn random_body(master_seed: u64, trial: u64, spec: &BodySpec) -> Result<ConvexBody> {
    let purpose = if spec.symmetrize {
        PURPOSE_SYMMETRIC
    } else {
        PURPOSE_BODY
    };
    let base = spec.base.support(&spec.grid)?;
    let basis = harmonic_basis(&spec.grid, spec.degree, spec.symmetrize);
    let mut rng = substream(master_seed, trial, purpose);
    let attempts = 100;
    for _ in 0..attempts {
        if let Some(body) = draw_body(spec, &basis, &base, &mut rng) {
            return Ok(body);
        }
    }
    Err(Error::GenerationFailed {
        attempts,
        what: "no admissible body within the amplitude bound".into(),
    })
}

fn rotation_z(alpha: f64) -> Mat3 {
    let (s, c) = alpha.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

fn rotation_y(beta: f64) -> Mat3 {
    let (s, c) = beta.sin_cos();
    [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
}

/// Draw a deterministic volume-preserving map with condition number at most
/// `cond_max`: rotation · diagonal stretch · rotation, with the log-stretches
/// bounded so the condition constraint holds by construction, then the
/// determinant normalized away exactly. Planar maps come embedded as 3×3
/// matrices fixing the z-axis, matching what `linear_image` expects.
pub fn random_sl(master_seed: u64, trial: u64, dim: usize, cond_max: f64) -> Result<Mat3> {
    if dim != 2 && dim != 3 {
        return Err(Error::Config(format!("unsupported dimension {dim}")));
    }
    if !(cond_max >= 1.0 && cond_max.is_finite()) {
        return Err(Error::Config(format!(
            "condition bound must be ≥ 1, got {cond_max}"
        )));
    }
    let mut rng = substream(master_seed, trial, PURPOSE_SL);
    let tau = std::f64::consts::TAU;
    let attempts = 100;
    for _ in 0..attempts {
        let mut a: Mat3;
        if dim == 2 {
            // Singular values σ and 1/σ give condition number σ²; keeping
            // σ² ≤ cond_max bounds it by construction.
            let sigma = (0.5 * cond_max.ln() * rng.gen::<f64>()).exp();
            let r1 = rotation_z(rng.gen::<f64>() * tau);
            let r2 = rotation_z(rng.gen::<f64>() * tau);
            let d = [
                [sigma, 0.0, 0.0],
                [0.0, 1.0 / sigma, 0.0],
                [0.0, 0.0, 1.0],
            ];
            a = mat_mul(&r1, &mat_mul(&d, &r2));
            a[0][2] = 0.0;
            a[1][2] = 0.0;
            a[2] = [0.0, 0.0, 1.0];
            // Divide the roundoff out of the planar block so its determinant
            // is 1 to machine precision.
            let det2 = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det2 <= 0.0 {
                continue;
            }
            let s = det2.sqrt();
            for row in a.iter_mut().take(2) {
                row[0] /= s;
                row[1] /= s;
            }
        } else {
            // Three log-stretches summing to zero, each within
            // ln(cond_max)/3, so max − min ≤ ln(cond_max).
            let bound = cond_max.ln() / 3.0;
            let l1 = bound * (2.0 * rng.gen::<f64>() - 1.0);
            let l2 = bound * (2.0 * rng.gen::<f64>() - 1.0);
            let d = [
                [l1.exp(), 0.0, 0.0],
                [0.0, l2.exp(), 0.0],
                [0.0, 0.0, (-l1 - l2).exp()],
            ];
            let r1 = mat_mul(
                &rotation_z(rng.gen::<f64>() * tau),
                &rotation_y(rng.gen::<f64>() * std::f64::consts::PI),
            );
            let r2 = mat_mul(
                &rotation_z(rng.gen::<f64>() * tau),
                &rotation_y(rng.gen::<f64>() * std::f64::consts::PI),
            );
            a = mat_mul(&mat_mul(&r1, &d), &r2);
            let det = mat_det(&a);
            if det <= 0.0 {
                continue;
            }
            let s = det.cbrt();
            for row in a.iter_mut() {
                for v in row.iter_mut() {
                    *v /= s;
                }
            }
        }
        if (mat_det(&a) - 1.0).abs() <= 1e-12 {
            return Ok(a);
        }
    }
    Err(Error::GenerationFailed {
        attempts,
        what: "no volume-preserving map within tolerance".into(),
    })
}

/// Outcome of one executed (or explicitly skipped) check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub skipped: bool,
    /// Signed slack of the checked statement; for inequalities this is the
    /// (normalized) distance to the bound, for identities the tolerance
    /// minus the measured error. Negative beyond the check's tolerance means
    /// violated.
    pub margin: f64,
    pub details: String,
}

impl CheckResult {
    /// A check that passes iff `margin ≥ −tolerance`.
    fn graded(name: String, margin: f64, tolerance: f64, details: String) -> Self {
        let margin = if margin.is_finite() { margin } else { -1.0 };
        CheckResult {
            name,
            passed: margin >= -tolerance,
            skipped: false,
            margin,
            details,
        }
    }

    fn skip(name: String, reason: String) -> Self {
        CheckResult {
            name,
            passed: true,
            skipped: true,
            margin: 0.0,
            details: reason,
        }
    }

    fn failure(name: String, details: String) -> Self {
        CheckResult {
            name,
            passed: false,
            skipped: false,
            margin: -1.0,
            details,
        }
    }
}

/// Full suite outcome: every check result in deterministic order plus the
/// measured floating-body constant (planar runs only).
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub results: Vec<CheckResult>,
    pub c2_measured: Option<f64>,
}

impl SuiteReport {
    pub fn violations(&self) -> usize {
        self.results.iter().filter(|r| !r.passed).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    /// Aggregated per-check table: run/pass/skip counts and the worst margin
    /// seen, in first-appearance order.
    pub fn human_table(&self) -> String {
        struct Agg {
            runs: usize,
            passed: usize,
            skipped: usize,
            worst: Option<f64>,
            note: String,
        }
        let mut order: Vec<&str> = Vec::new();
        let mut agg: std::collections::HashMap<&str, Agg> = std::collections::HashMap::new();
        for r in &self.results {
            let entry = agg.entry(r.name.as_str()).or_insert_with(|| {
                order.push(r.name.as_str());
                Agg {
                    runs: 0,
                    passed: 0,
                    skipped: 0,
                    worst: None,
                    note: String::new(),
                }
            });
            entry.runs += 1;
            if r.skipped {
                entry.skipped += 1;
                if entry.note.is_empty() {
                    entry.note = r.details.clone();
                }
            } else {
                if r.passed {
                    entry.passed += 1;
                } else if entry.note.is_empty() {
                    entry.note = r.details.clone();
                }
                entry.worst = Some(match entry.worst {
                    Some(w) => w.min(r.margin),
                    None => r.margin,
                });
            }
        }
        let name_width = order.iter().map(|n| n.len()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>5} {:>5} {:>5}  {:>13}",
            "check", "runs", "pass", "skip", "worst margin"
        );
        for name in order {
            let a = &agg[name];
            let worst = match a.worst {
                Some(w) => format!("{w:+.3e}"),
                None => "—".into(),
            };
            let _ = writeln!(
                out,
                "{:<name_width$}  {:>5} {:>5} {:>5}  {:>13}{}",
                name,
                a.runs,
                a.passed,
                a.skipped,
                worst,
                if a.note.is_empty() {
                    String::new()
                } else {
                    format!("  ({})", a.note)
                }
            );
        }
        if let Some(c2) = self.c2_measured {
            let dev = (c2 - 1.0).abs();
            let _ = writeln!(
                out,
                "floating-body constant: c2 = {c2:.6} (|c2 − 1| = {dev:.3}, {} 2% of \
                 unity; reported as measured, never folded into the invariants)",
                if dev <= TOL_C2_SPREAD { "within" } else { "not within" }
            );
        }
        let _ = writeln!(out, "violations: {}", self.violations());
        out
    }
}

fn default_grid(dim: usize) -> Result<Arc<SphereGrid>> {
    match dim {
        2 => SphereGrid::circle(256),
        3 => SphereGrid::sphere(32, 64),
        other => Err(Error::Config(format!("unsupported dimension {other}"))),
    }
}

fn rel_err(measured: f64, reference: f64) -> f64 {
    (measured - reference).abs() / reference.abs().max(1e-300)
}

fn fmt_p(idx: &PAffineIndex) -> String {
    match idx.finite_p() {
        Some(p) => format!("{p}"),
        None => "inf".into(),
    }
}

/// Indices for the requested p values, with explicit skip rows for the
/// excluded values (p = 0 and p = −n admit no exponent).
fn indices_for(dim: usize, p_set: &[f64], rows: &mut Vec<CheckResult>) -> Vec<PAffineIndex> {
    let mut indices = Vec::new();
    for &p in p_set {
        match PAffineIndex::from_p(dim, p) {
            Ok(idx) => indices.push(idx),
            Err(e) => rows.push(CheckResult::skip(
                format!("index_excluded[n={dim},p={p}]"),
                format!("{e}"),
            )),
        }
    }
    indices
}

/// Dense boundary radial extrema for a planar body: |X(θ)|² = h² + h′² is
/// scanned at eight times the grid resolution and refined with a parabolic
/// vertex step.
fn dense_radial_bounds(body: &ConvexBody) -> (f64, f64) {
    let engine = body.grid().circle_engine();
    let itp = engine.interpolant(body.support().values());
    let m = body.grid().len();
    let dense = 8 * m;
    let step = std::f64::consts::TAU / dense as f64;
    let rho2 = |theta: f64| {
        let (h, dh, _) = itp.eval012(theta);
        h * h + dh * dh
    };
    let samples: Vec<f64> = (0..dense).map(|k| rho2(k as f64 * step)).collect();
    let mut imin = 0;
    let mut imax = 0;
    for (k, &v) in samples.iter().enumerate() {
        if v < samples[imin] {
            imin = k;
        }
        if v > samples[imax] {
            imax = k;
        }
    }
    let refine = |idx: usize, toward_max: bool| -> f64 {
        let a = samples[(idx + dense - 1) % dense];
        let b = samples[idx];
        let c = samples[(idx + 1) % dense];
        let denom = a - 2.0 * b + c;
        let mut best = b;
        if denom.abs() > 1e-300 {
            let offset = 0.5 * (a - c) / denom;
            if offset.abs() <= 1.0 {
                let v = rho2((idx as f64 + offset) * step);
                if (toward_max && v > best) || (!toward_max && v < best) {
                    best = v;
                }
            }
        }
        best
    };
    (refine(imin, false).sqrt(), refine(imax, true).sqrt())
}

/// Shared per-trial artifacts, built once and reused by every check.
struct TrialBodies {
    body: ConvexBody,
    polar: ConvexBody,
    symmetric: ConvexBody,
    symmetric_polar: ConvexBody,
}

fn build_trial_bodies(
    master_seed: u64,
    trial: u64,
    dim: usize,
    grid: &Arc<SphereGrid>,
) -> Result<TrialBodies> {
    let base = match (dim, trial % 2) {
        (2, 0) => BaseShape::Ball(1.0),
        (2, _) => BaseShape::Ellipse(1.3, 0.8),
        (_, 0) => BaseShape::Ball(1.0),
        (_, _) => BaseShape::Ellipsoid(1.25, 1.0, 0.8),
    };
    let spec = BodySpec::new(grid.clone(), base, 4)?;
    let body = random_body(master_seed, trial, &spec)?;
    let polar = body.polar_body()?;
    let mut sym_spec = BodySpec::new(grid.clone(), BaseShape::Ball(1.0), 4)?;
    sym_spec.symmetrize = true;
    let symmetric = random_body(master_seed, trial, &sym_spec)?;
    let symmetric_polar = symmetric.polar_body()?;
    Ok(TrialBodies {
        body,
        polar,
        symmetric,
        symmetric_polar,
    })
}

/// Outer companion for the containment check: the body inflated by a
/// direction-dependent factor in [1, 1.1], redrawn until the result
/// validates.
fn enlarged_body(master_seed: u64, trial: u64, body: &ConvexBody) -> Result<ConvexBody> {
    let grid = body.grid().clone();
    let basis = harmonic_basis(&grid, 3, false);
    let mut rng = substream(master_seed, trial, PURPOSE_OUTER);
    for _ in 0..100 {
        let coeffs: Vec<f64> = basis
            .iter()
            .map(|_| 2.0 * rng.gen::<f64>() - 1.0)
            .collect();
        let norm = coeffs.iter().map(|c| c.abs()).sum::<f64>().max(1.0);
        let mut w = vec![0.0_f64; grid.len()];
        for (field, &c) in basis.iter().zip(&coeffs) {
            for (wv, &fv) in w.iter_mut().zip(field) {
                *wv += c / norm * fv;
            }
        }
        let h: Vec<f64> = body
            .support()
            .values()
            .iter()
            .zip(&w)
            .map(|(&hv, &wv)| hv * (1.0 + 0.05 * (1.0 + wv)))
            .collect();
        let Ok(field) = ScalarField::new(grid.clone(), h) else {
            continue;
        };
        if let Ok(b) = ConvexBody::from_support(field) {
            return Ok(b);
        }
    }
    Err(Error::GenerationFailed {
        attempts: 100,
        what: "no admissible enlarged companion".into(),
    })
}

fn guarded(name: String, trial: u64, f: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    match f() {
        Ok(r) => r,
        Err(e) => CheckResult::failure(name, format!("trial {trial}: computation failed: {e}")),
    }
}

fn trajectory_config(idx: &PAffineIndex) -> Result<FlowConfig> {
    FlowConfig::new(FlowDriver::Power(*idx), stable_dt0(idx.dim()), FLOW_T_MAX)?
        .with_stride(1_000_000)
}

/// All checks for one random trial, in fixed order.
fn run_trial(
    master_seed: u64,
    trial: u64,
    dim: usize,
    p_set: &[f64],
    grid: &Arc<SphereGrid>,
    disk_c2: Option<f64>,
) -> Vec<CheckResult> {
    let mut rows = Vec::new();
    let bodies = match build_trial_bodies(master_seed, trial, dim, grid) {
        Ok(b) => b,
        Err(e) => {
            rows.push(CheckResult::failure(
                format!("trial_setup[n={dim}]"),
                format!("trial {trial}: {e}"),
            ));
            return rows;
        }
    };
    let body = &bodies.body;
    let polar = &bodies.polar;
    let n = dim as f64;
    let wn = unit_ball_volume(dim);
    let sl_tol = if dim == 2 { TOL_SL2 } else { TOL_SL3 };

    // --- checks that need no index set ---

    rows.push(guarded(format!("bipolar[n={dim}]"), trial, || {
        let back = polar.polar_body()?;
        let scale = body
            .support()
            .values()
            .iter()
            .fold(0.0_f64, |acc, &v| acc.max(v.abs()));
        let err = body
            .support()
            .values()
            .iter()
            .zip(back.support().values())
            .fold(0.0_f64, |acc, (&a, &b)| acc.max((a - b).abs()))
            / scale;
        let tol = if dim == 2 { TOL_BIPOLAR_2 } else { TOL_BIPOLAR_3 };
        Ok(CheckResult::graded(
            format!("bipolar[n={dim}]"),
            tol - err,
            0.0,
            format!("trial {trial}: sup |h(K°°) − h(K)| / sup h = {err:.3e}"),
        ))
    }));

    rows.push({
        let vp = volume_product(&bodies.symmetric);
        let bound = wn * wn;
        CheckResult::graded(
            format!("santalo_symmetric[n={dim}]"),
            (bound - vp) / bound,
            TOL_SANTALO,
            format!("trial {trial}: volume product {vp:.6} vs ball bound {bound:.6}"),
        )
    });

    let sl_map = match random_sl(master_seed, trial, dim, 3.0) {
        Ok(m) => Some(m),
        Err(e) => {
            rows.push(CheckResult::failure(
                format!("sl_volume[n={dim}]"),
                format!("trial {trial}: {e}"),
            ));
            None
        }
    };
    let image = sl_map.as_ref().and_then(|m| match body.linear_image(m) {
        Ok(img) => Some(img),
        Err(e) => {
            rows.push(CheckResult::failure(
                format!("sl_volume[n={dim}]"),
                format!("trial {trial}: image construction failed: {e}"),
            ));
            None
        }
    });
    if let Some(img) = &image {
        let err = rel_err(img.volume(), body.volume());
        rows.push(CheckResult::graded(
            format!("sl_volume[n={dim}]"),
            sl_tol - err,
            0.0,
            format!("trial {trial}: |Vol(AK) − Vol(K)|/Vol = {err:.3e}"),
        ));
    }

    if p_set.is_empty() {
        return rows;
    }

    // --- index-dependent invariant checks ---

    let indices = indices_for(dim, p_set, &mut rows);

    for idx in &indices {
        let p = idx.finite_p().unwrap_or(f64::INFINITY);
        let pf = fmt_p(idx);
        let e = idx.exponent();
        let sgn = idx.sgn();

        if p.is_finite() && p >= 1.0 {
            rows.push(guarded(format!("lutwak_iso[n={dim},p={pf}]"), trial, || {
                let ratio = isoperimetric_ratio(body, idx)?;
                Ok(CheckResult::graded(
                    format!("lutwak_iso[n={dim},p={pf}]"),
                    (1.0 - ratio).min(ratio),
                    TOL_INEQUALITY,
                    format!("trial {trial}: ratio = {ratio:.8} (must lie in (0, 1])"),
                ))
            }));
        }

        // The volume ratio Vol(K)/Vol(K°) sits between the two mixed
        // invariant ratios; the expanding regime flips both inequalities, so
        // sgn(e) normalizes the slack.
        rows.push({
            let lhs = omega_exponent(body, e) / omega_exponent(polar, -e);
            let mid = body.volume() / polar.volume();
            let rhs = omega_exponent(body, -e) / omega_exponent(polar, e);
            let m1 = sgn * (mid - lhs) / mid;
            let m2 = sgn * (rhs - mid) / mid;
            CheckResult::graded(
                format!("double_inequality[n={dim},p={pf}]"),
                m1.min(m2),
                TOL_INEQUALITY,
                format!("trial {trial}: relative gaps {m1:.3e} (lower), {m2:.3e} (upper)"),
            )
        });

        // Second-order comparison against its closed-form bound, on the
        // index range where it is asserted.
        if p.is_finite() && (p >= 1.0 || (p > -n / 2.0 && p <= -n / (n + 2.0) + 1e-12)) {
            rows.push(guarded(
                format!("second_order_iso[n={dim},p={pf}]"),
                trial,
                || {
                    let o2 = omega_2p(body, idx)?;
                    let op = omega_p(body, idx);
                    let bound = (p - n) / (n + p) * op * op / body.volume();
                    let scale = o2.abs().max(bound.abs()).max(op * op / body.volume());
                    Ok(CheckResult::graded(
                        format!("second_order_iso[n={dim},p={pf}]"),
                        (o2 - bound) / scale,
                        TOL_INEQUALITY,
                        format!("trial {trial}: Ω₂ = {o2:.6e}, bound = {bound:.6e}"),
                    ))
                },
            ));
        }

        // Inscribed/circumscribed origin-centered balls: the invariant
        // ratios against the analytic ball values r^{2n} and R^{2n}.
        if dim == 2 {
            rows.push({
                let (rad_in, rad_out) = dense_radial_bounds(body);
                // Nudge in the inequality-safe direction: the scan may only
                // under-resolve the true extrema.
                let r = rad_in * (1.0 - 1e-6);
                let big_r = rad_out * (1.0 + 1e-6);
                let ball_in = r.powi(2 * dim as i32);
                let ball_out = big_r.powi(2 * dim as i32);
                let ratio_plus = omega_exponent(body, -e) / omega_exponent(polar, e);
                let ratio_minus = omega_exponent(body, e) / omega_exponent(polar, -e);
                let (m_in, m_out) = if e > 0.0 {
                    (
                        (ratio_plus - ball_in) / ball_in,
                        (ball_out - ratio_minus) / ball_out,
                    )
                } else {
                    (
                        (ratio_minus - ball_in) / ball_in,
                        (ball_out - ratio_plus) / ball_out,
                    )
                };
                CheckResult::graded(
                    format!("ball_sandwich[n={dim},p={pf}]"),
                    m_in.min(m_out),
                    TOL_INEQUALITY,
                    format!(
                        "trial {trial}: inscribed slack {m_in:.3e}, circumscribed slack \
                         {m_out:.3e} (r = {r:.4}, R = {big_r:.4})"
                    ),
                )
            });
        }

        // Against the volume-matched origin-centered ball, on the symmetric
        // companion (its polarity reference point is the origin).
        rows.push({
            let sym = &bodies.symmetric;
            let rho = (sym.volume() / wn).powf(1.0 / n);
            let ball_side = rho.powi(2 * dim as i32);
            let lhs = if e > 0.0 {
                omega_exponent(sym, -e) / omega_exponent(&bodies.symmetric_polar, e)
            } else {
                omega_exponent(sym, e) / omega_exponent(&bodies.symmetric_polar, -e)
            };
            CheckResult::graded(
                format!("volume_matched_ball[n={dim},p={pf}]"),
                (lhs - ball_side) / ball_side,
                TOL_INEQUALITY,
                format!("trial {trial}: ratio {lhs:.6e} vs ball {ball_side:.6e}"),
            )
        });

        if let Some(img) = &image {
            let err = rel_err(omega_p(img, idx), omega_p(body, idx));
            rows.push(CheckResult::graded(
                format!("sl_omega_p[n={dim},p={pf}]"),
                sl_tol - err,
                0.0,
                format!("trial {trial}: relative change {err:.3e}"),
            ));
            rows.push(guarded(format!("sl_omega_2p[n={dim},p={pf}]"), trial, || {
                let a = omega_2p(img, idx)?;
                let b = omega_2p(body, idx)?;
                let scale = b.abs().max(omega_p(body, idx).powi(2) / body.volume());
                let err = (a - b).abs() / scale;
                Ok(CheckResult::graded(
                    format!("sl_omega_2p[n={dim},p={pf}]"),
                    sl_tol - err,
                    0.0,
                    format!("trial {trial}: relative change {err:.3e}"),
                ))
            }));
        }
    }

    // Polarity identity at the canonical index pairs q ↔ n²/q.
    for q in [1.0, 2.0, n] {
        rows.push(guarded(format!("duality[n={dim},q={q}]"), trial, || {
            let idx = PAffineIndex::from_p(dim, q)?;
            let eq = idx.exponent();
            let err = rel_err(omega_exponent(polar, 1.0 - eq), omega_exponent(body, eq));
            Ok(CheckResult::graded(
                format!("duality[n={dim},q={q}]"),
                TOL_DUALITY - err,
                0.0,
                format!("trial {trial}: relative mismatch {err:.3e}"),
            ))
        }));
    }

    if let Some(img) = &image {
        let phi = PhiSpec::power(0.5).expect("valid exponent");
        let err = rel_err(omega_phi(img, &phi), omega_phi(body, &phi));
        rows.push(CheckResult::graded(
            format!("sl_omega_phi[n={dim}]"),
            sl_tol - err,
            0.0,
            format!("trial {trial}: relative change {err:.3e}"),
        ));
        let err = rel_err(volume_product(img), volume_product(body));
        rows.push(CheckResult::graded(
            format!("sl_volume_product[n={dim}]"),
            sl_tol - err,
            0.0,
            format!("trial {trial}: relative change {err:.3e}"),
        ));
    }

    // Log-convexity of the exponent family at the three canonical exponents.
    rows.push({
        let o0 = omega_exponent(body, 0.0).ln();
        let o1 = omega_exponent(body, 1.0).ln();
        let oh = omega_exponent(body, 0.5).ln();
        let slack = 0.5 * (o0 + o1) - oh;
        CheckResult::graded(
            format!("log_convexity[n={dim}]"),
            slack,
            TOL_LOG_CONVEXITY,
            format!("trial {trial}: midpoint slack {slack:.3e} (log scale)"),
        )
    });

    // --- flow checks ---

    for idx in &indices {
        let pf = fmt_p(idx);
        rows.push(guarded(
            format!("p_flow_first_variation[n={dim},p={pf}]"),
            trial,
            || {
                let est = flow_derivatives(body, idx, 1, 1e-3)?[0];
                let expect = omega_1p(body, idx);
                let err = (est.value - expect).abs() / omega_p(body, idx);
                Ok(CheckResult::graded(
                    format!("p_flow_first_variation[n={dim},p={pf}]"),
                    TOL_FIRST_VARIATION - err,
                    0.0,
                    format!("trial {trial}: relative mismatch {err:.3e}"),
                ))
            },
        ));

        let run_second = dim == 2 || matches!(idx.finite_p(), Some(p) if p == 1.0 || p == 2.0);
        if run_second {
            rows.push(guarded(
                format!("second_derivative_crosscheck[n={dim},p={pf}]"),
                trial,
                || {
                    let est = flow_derivatives(body, idx, 2, 1e-3)?[1];
                    let closed = omega_2p(body, idx)?;
                    // Near the zero crossing of the second invariant a pure
                    // relative error is ill-posed; compare against the scale
                    // the finite-difference noise floor lives on.
                    let scale = closed
                        .abs()
                        .max(est.value.abs())
                        .max(1e-2 * omega_p(body, idx).powi(2) / body.volume());
                    let err = (est.value - closed).abs() / scale;
                    Ok(CheckResult::graded(
                        format!("second_derivative_crosscheck[n={dim},p={pf}]"),
                        TOL_SECOND_DERIVATIVE - err,
                        0.0,
                        format!(
                            "trial {trial}: flow estimate {:.6e} vs closed form {closed:.6e}",
                            est.value
                        ),
                    ))
                },
            ));
        } else {
            rows.push(CheckResult::skip(
                format!("second_derivative_crosscheck[n={dim},p={pf}]"),
                "spatial second-derivative sampling runs at p ∈ {1, 2} to bound cost".into(),
            ));
        }
    }

    // Volume-product monotonicity under one representative flow per sign
    // regime present in the index set.
    let mut regime_picks: Vec<usize> = Vec::new();
    if let Some(i) = indices.iter().position(|i| i.exponent() > 0.0) {
        regime_picks.push(i);
    }
    if let Some(i) = indices.iter().position(|i| i.exponent() < 0.0) {
        regime_picks.push(i);
    }
    for &i in &regime_picks {
        let idx = &indices[i];
        let pf = fmt_p(idx);
        rows.push(guarded(format!("vp_monotone[n={dim},p={pf}]"), trial, || {
            let config = trajectory_config(idx)?;
            let traj = evolve(body, &config);
            let worst = traj
                .volume_product
                .windows(2)
                .map(|w| (w[1] - w[0]) / w[0])
                .fold(f64::INFINITY, f64::min);
            Ok(CheckResult::graded(
                format!("vp_monotone[n={dim},p={pf}]"),
                if worst.is_finite() { worst } else { 0.0 },
                TOL_VP_STEP,
                format!(
                    "trial {trial}: worst per-step relative change {worst:.3e} over {} steps \
                     ({:?})",
                    traj.times.len().saturating_sub(1),
                    traj.stop_reason
                ),
            ))
        }));
    }

    // Containment is preserved: a scaled copy inside the body, and the body
    // inside a randomly enlarged companion.
    for p in [1.0, -1.0] {
        let Ok(idx) = PAffineIndex::from_p(dim, p) else {
            continue;
        };
        rows.push(guarded(
            format!("containment_scaled[n={dim},p={p}]"),
            trial,
            || {
                let inner = body.scaled(0.5)?;
                let config = trajectory_config(&idx)?;
                let report = check_containment(&inner, body, &config)?;
                Ok(CheckResult::graded(
                    format!("containment_scaled[n={dim},p={p}]"),
                    report.min_gap,
                    TOL_CONTAINMENT,
                    format!(
                        "trial {trial}: min gap {:.3e} at t = {:.4} over {} steps",
                        report.min_gap, report.t_at_min, report.steps
                    ),
                ))
            },
        ));
        rows.push(guarded(
            format!("containment_enlarged[n={dim},p={p}]"),
            trial,
            || {
                let outer = enlarged_body(master_seed, trial, body)?;
                let config = trajectory_config(&idx)?;
                let report = check_containment(body, &outer, &config)?;
                Ok(CheckResult::graded(
                    format!("containment_enlarged[n={dim},p={p}]"),
                    report.min_gap,
                    TOL_CONTAINMENT,
                    format!(
                        "trial {trial}: min gap {:.3e} at t = {:.4} over {} steps",
                        report.min_gap, report.t_at_min, report.steps
                    ),
                ))
            },
        ));
    }

    // Polar-volume rate along the direct flow vs the paired-index invariant
    // of the polar body. Spatial runs cover one representative index per
    // sign regime (each evaluation rebuilds a polar body).
    let dual_picks: Vec<usize> = if dim == 2 {
        (0..indices.len()).collect()
    } else {
        regime_picks.clone()
    };
    for (i, idx) in indices.iter().enumerate() {
        let pf = fmt_p(idx);
        let name = format!("dual_flow[n={dim},p={pf}]");
        if !dual_picks.contains(&i) {
            rows.push(CheckResult::skip(
                name,
                "spatial polar-volume rates run on one index per sign regime to bound cost"
                    .into(),
            ));
            continue;
        }
        if matches!(idx.finite_p(), Some(p) if (p + n / 2.0).abs() < 1e-12) {
            rows.push(CheckResult::skip(
                name,
                "the paired index has a pole at p = −n/2".into(),
            ));
            continue;
        }
        rows.push(guarded(name.clone(), trial, || {
            let report = dual_flow_check(body, idx, 1e-3)?;
            Ok(CheckResult::graded(
                name.clone(),
                TOL_DUAL_FLOW - report.rel_mismatch,
                0.0,
                format!(
                    "trial {trial}: measured {:.6e} vs predicted {:.6e}",
                    report.measured, report.predicted
                ),
            ))
        }));
    }

    // Weighted-flow first variation for two weight exponents.
    for alpha in PHI_ALPHAS {
        rows.push(guarded(
            format!("phi_first_variation[n={dim},alpha={alpha}]"),
            trial,
            || {
                let phi = PhiSpec::power(alpha)?;
                let est = phi_flow_rate(body, &phi, 1e-3)?;
                let target = omega_phi(body, &phi);
                let err = (est.value - target).abs() / target;
                Ok(CheckResult::graded(
                    format!("phi_first_variation[n={dim},alpha={alpha}]"),
                    TOL_FIRST_VARIATION - err,
                    0.0,
                    format!("trial {trial}: relative mismatch {err:.3e}"),
                ))
            },
        ));
    }

    // The floating-body constant must match the disk reference.
    if dim == 2 {
        match disk_c2 {
            Some(c2) => {
                rows.push(guarded(
                    format!("floating_limit_ratio[n={dim}]"),
                    trial,
                    || {
                        let phi = PhiSpec::power(0.5)?;
                        let diag = omega_phi_limit(body, &phi, &FLOATING_TIMES)?;
                        let spread = (diag.ratio / c2 - 1.0).abs();
                        Ok(CheckResult::graded(
                            format!("floating_limit_ratio[n={dim}]"),
                            TOL_C2_SPREAD - spread,
                            0.0,
                            format!(
                                "trial {trial}: ratio {:.5} vs disk reference {c2:.5} \
                                 (spread {spread:.3e})",
                                diag.ratio
                            ),
                        ))
                    },
                ));
            }
            None => rows.push(CheckResult::skip(
                format!("floating_limit_ratio[n={dim}]"),
                "disk reference constant unavailable".into(),
            )),
        }
    } else {
        rows.push(CheckResult::skip(
            format!("floating_limit_ratio[n={dim}]"),
            "floating bodies are implemented for planar bodies only".into(),
        ));
    }

    rows
}

/// Deterministic equality-case and reference checks for one dimension:
/// centered ellipsoids realize every equality case, and the planar block
/// also measures the floating-body constant on the unit disk.
fn equality_block(
    dim: usize,
    grid: &Arc<SphereGrid>,
    p_set: &[f64],
) -> (Vec<CheckResult>, Option<f64>) {
    let mut rows = Vec::new();
    if p_set.is_empty() {
        return (rows, None);
    }
    let n = dim as f64;
    let wn = unit_ball_volume(dim);
    let axes: Vec<f64> = if dim == 2 {
        vec![2.0, 1.0]
    } else {
        vec![1.5, 1.0, 0.7]
    };
    let axes_product: f64 = axes.iter().product();
    let build = || -> Result<(ConvexBody, ConvexBody)> {
        let e = ConvexBody::from_support(ellipsoid_support(grid.clone(), &axes)?)?;
        let inv: Vec<f64> = axes.iter().map(|a| 1.0 / a).collect();
        let e_polar = ConvexBody::from_support(ellipsoid_support(grid.clone(), &inv)?)?;
        Ok((e, e_polar))
    };
    let (ellipsoid, ellipsoid_polar) = match build() {
        Ok(pair) => pair,
        Err(err) => {
            rows.push(CheckResult::failure(
                format!("ellipsoid_block[n={dim}]"),
                format!("reference construction failed: {err}"),
            ));
            return (rows, None);
        }
    };
    let oracle_tol = if dim == 2 { 1e-6 } else { 1e-4 };

    let mut indices = Vec::new();
    for &p in p_set {
        if let Ok(idx) = PAffineIndex::from_p(dim, p) {
            indices.push(idx);
        }
    }

    for idx in &indices {
        let pf = fmt_p(idx);
        let e = idx.exponent();
        let sgn = idx.sgn();

        // Closed form: n · ω_n · (product of semiaxes)^{1−2e}.
        let closed = n * wn * axes_product.powf(1.0 - 2.0 * e);
        let err = rel_err(omega_p(&ellipsoid, idx), closed);
        rows.push(CheckResult::graded(
            format!("ellipsoid_omega_oracle[n={dim},p={pf}]"),
            oracle_tol - err,
            0.0,
            format!("relative error {err:.3e} against the closed form"),
        ));

        if idx.finite_p().map_or(false, |p| p >= 1.0) {
            rows.push(guarded(
                format!("ellipsoid_iso_equality[n={dim},p={pf}]"),
                0,
                || {
                    let ratio = isoperimetric_ratio(&ellipsoid, idx)?;
                    Ok(CheckResult::graded(
                        format!("ellipsoid_iso_equality[n={dim},p={pf}]"),
                        TOL_RATIO_EQUALITY - (ratio - 1.0).abs(),
                        0.0,
                        format!("ratio = {ratio:.10}"),
                    ))
                },
            ));
        }

        let lhs = omega_exponent(&ellipsoid, e) / omega_exponent(&ellipsoid_polar, -e);
        let mid = ellipsoid.volume() / ellipsoid_polar.volume();
        let rhs = omega_exponent(&ellipsoid, -e) / omega_exponent(&ellipsoid_polar, e);
        let gap = (sgn * (mid - lhs) / mid)
            .abs()
            .max((sgn * (rhs - mid) / mid).abs());
        rows.push(CheckResult::graded(
            format!("ellipsoid_double_equality[n={dim},p={pf}]"),
            TOL_EQUALITY - gap,
            0.0,
            format!("worst relative gap {gap:.3e} (both bounds are equalities here)"),
        ));

        if let Some(p) = idx.finite_p() {
            rows.push(guarded(
                format!("ellipsoid_second_order_equality[n={dim},p={pf}]"),
                0,
                || {
                    let o2 = omega_2p(&ellipsoid, idx)?;
                    let op = omega_p(&ellipsoid, idx);
                    let closed = (p - n) / (n + p) * op * op / ellipsoid.volume();
                    let scale = closed.abs().max(op * op / ellipsoid.volume());
                    let err = (o2 - closed).abs() / scale;
                    Ok(CheckResult::graded(
                        format!("ellipsoid_second_order_equality[n={dim},p={pf}]"),
                        TOL_EQUALITY - err,
                        0.0,
                        format!("Ω₂ = {o2:.6e} vs closed form {closed:.6e}"),
                    ))
                },
            ));
        }
    }

    // Trajectory diagnostics under one shrinking flow: centered ellipsoids
    // flow homothetically, so the volume product and axis ratio both stay
    // fixed.
    if let Some(idx) = indices
        .iter()
        .find(|i| i.finite_p() == Some(1.0))
        .or_else(|| indices.first())
    {
        let pf = fmt_p(idx);
        let vp_name = format!("ellipsoid_vp_drift[n={dim},p={pf}]");
        let hom_name = format!("ellipsoid_homothety[n={dim},p={pf}]");
        match FlowConfig::new(FlowDriver::Power(*idx), stable_dt0(dim), FLOW_T_MAX) {
            Ok(config) => {
                let traj = evolve(&ellipsoid, &config);
                let vp0 = traj.volume_product[0];
                let drift = traj
                    .volume_product
                    .iter()
                    .fold(0.0_f64, |acc, &v| acc.max((v - vp0).abs() / vp0));
                rows.push(CheckResult::graded(
                    vp_name,
                    TOL_ELLIPSE_VP_DRIFT - drift,
                    0.0,
                    format!(
                        "max relative drift {drift:.3e} over {} steps ({:?})",
                        traj.times.len().saturating_sub(1),
                        traj.stop_reason
                    ),
                ));
                let ratio_of = |b: &ConvexBody| {
                    let h = b.support().values();
                    h.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                        / h.iter().cloned().fold(f64::INFINITY, f64::min)
                };
                let r0 = ratio_of(&traj.snapshots[0].1);
                let ecc_drift = traj
                    .snapshots
                    .iter()
                    .map(|(_, b)| (ratio_of(b) / r0 - 1.0).abs())
                    .fold(0.0_f64, f64::max);
                rows.push(CheckResult::graded(
                    hom_name,
                    TOL_HOMOTHETY - ecc_drift,
                    0.0,
                    format!("max axis-ratio drift {ecc_drift:.3e} (the flow is homothetic)"),
                ));
            }
            Err(e) => {
                rows.push(CheckResult::failure(vp_name, format!("{e}")));
                rows.push(CheckResult::failure(hom_name, format!("{e}")));
            }
        }
    }

    let mut c2 = None;
    if dim == 2 {
        let row = guarded(format!("floating_c2_reference[n={dim}]"), 0, || {
            let disk = ConvexBody::from_support(ellipsoid_support(grid.clone(), &[1.0, 1.0])?)?;
            let phi = PhiSpec::power(0.5)?;
            let diag = omega_phi_limit(&disk, &phi, &[0.02, 0.01, 0.005, 0.0025])?;
            let dev = (diag.ratio - 1.0).abs();
            c2 = Some(diag.ratio);
            Ok(CheckResult {
                name: format!("floating_c2_reference[n={dim}]"),
                passed: true,
                skipped: false,
                margin: 0.0,
                details: format!(
                    "measured c2 = {:.6}; |c2 − 1| = {dev:.4} ({} 2% of unity) — reported \
                     as measured, never folded back into the invariants",
                    diag.ratio,
                    if dev <= TOL_C2_SPREAD { "within" } else { "not within" }
                ),
            })
        });
        rows.push(row);
        if let Some(c2ref) = c2 {
            rows.push(guarded(format!("floating_ellipsoid_ratio[n={dim}]"), 0, || {
                let phi = PhiSpec::power(0.25)?;
                let diag = omega_phi_limit(&ellipsoid, &phi, &[0.02, 0.01, 0.005, 0.0025])?;
                let spread = (diag.ratio / c2ref - 1.0).abs();
                Ok(CheckResult::graded(
                    format!("floating_ellipsoid_ratio[n={dim}]"),
                    TOL_C2_SPREAD - spread,
                    0.0,
                    format!("ratio {:.5} vs disk reference {c2ref:.5}", diag.ratio),
                ))
            }));
        }
    } else {
        rows.push(CheckResult::skip(
            format!("floating_c2_reference[n={dim}]"),
            "floating bodies are implemented for planar bodies only".into(),
        ));
        rows.push(CheckResult::skip(
            format!("ball_sandwich[n={dim}]"),
            "the dense boundary extremum search runs in the planar suite only".into(),
        ));
    }
    (rows, c2)
}

/// Run the whole registry: per dimension one deterministic equality block on
/// centered ellipsoids, then `trials` independent random trials (in
/// parallel, serialized in trial order). With an empty index set only the
/// index-free checks run. Writes the JSON report if a path is given.
pub fn run_suite(
    master_seed: u64,
    trials: usize,
    dims: &[usize],
    p_set: &[f64],
    report_path: Option<&Path>,
) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    if dims.is_empty() {
        return Err(Error::Config("at least one dimension is required".into()));
    }
    for &dim in dims {
        if dim != 2 && dim != 3 {
            return Err(Error::Config(format!("unsupported dimension {dim}")));
        }
    }
    for &p in p_set {
        if !p.is_finite() {
            return Err(Error::Config(format!(
                "index set entries must be finite, got {p}"
            )));
        }
    }
    let mut results = Vec::new();
    let mut c2_measured = None;
    for &dim in dims {
        let grid = default_grid(dim)?;
        let (block, c2) = equality_block(dim, &grid, p_set);
        results.extend(block);
        if dim == 2 && c2.is_some() {
            c2_measured = c2;
        }
        let trial_rows: Vec<Vec<CheckResult>> = (0..trials as u64)
            .into_par_iter()
            .map(|trial| run_trial(master_seed, trial, dim, p_set, &grid, c2_measured))
            .collect();
        for rows in trial_rows {
            results.extend(rows);
        }
    }
    let report = SuiteReport {
        seed: master_seed,
        results,
        c2_measured,
    };
    if let Some(path) = report_path {
        std::fs::write(path, report.to_json())?;
    }
    Ok(report)
}
