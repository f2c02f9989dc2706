//! Full acceptance run: every top-level guarantee of the library, each
//! verified at its stated tolerance and reported as one PASS/FAIL line
//! (run with `--nocapture` to see the table on success; failures reprint
//! it). All randomness is drawn from the seeded harness generator, so the
//! run is deterministic.
//!
//! Planar checks run at m = 512 nodes, spatial checks at 32×64; flow-based
//! checks pick their step from the measured explicit-Euler stability rate
//! of the grid's highest mode (the step must stay well below 2/rate, and
//! expanding flows stiffen over time, so contracting runs start at half the
//! boundary and expanding runs at a quarter).

use std::sync::Arc;

use centroaffine::body::{ellipsoid_support, ConvexBody};
use centroaffine::flow::{
    check_containment, evolve, flow_derivatives, phi_flow_rate, FlowConfig, FlowDriver,
};
use centroaffine::floating::omega_phi_limit;
use centroaffine::harness::{random_body, random_sl, run_suite, BaseShape, BodySpec};
use centroaffine::invariants::{
    isoperimetric_ratio, omega_1p, omega_2p, omega_exponent, omega_p, omega_phi,
    unit_ball_volume, volume_product, PAffineIndex, PhiSpec,
};
use centroaffine::spherical::{ScalarField, SphereGrid};
use centroaffine::Result;

const SEED: u64 = 42;

fn circle512() -> Arc<SphereGrid> {
    SphereGrid::circle(512).expect("valid grid")
}

fn sphere_grid() -> Arc<SphereGrid> {
    SphereGrid::sphere(32, 64).expect("valid grid")
}

fn grid_for(dim: usize) -> Arc<SphereGrid> {
    if dim == 2 {
        circle512()
    } else {
        sphere_grid()
    }
}

fn ellipsoid(grid: &Arc<SphereGrid>, axes: &[f64]) -> Result<ConvexBody> {
    ConvexBody::from_support(ellipsoid_support(grid.clone(), axes)?)
}

/// Random bodies drawn from the shared substream machinery: alternating
/// round/elongated bases with a degree-4 perturbation at the default
/// amplitude. Distinct checks use disjoint trial ranges.
fn std_bodies(grid: &Arc<SphereGrid>, first_trial: u64, count: u64) -> Result<Vec<ConvexBody>> {
    (first_trial..first_trial + count)
        .map(|trial| {
            let base = match (grid.dim(), trial % 2) {
                (2, 0) => BaseShape::Ball(1.0),
                (2, _) => BaseShape::Ellipse(1.3, 0.8),
                (_, 0) => BaseShape::Ball(1.0),
                _ => BaseShape::Ellipsoid(1.25, 1.0, 0.8),
            };
            let spec = BodySpec::new(grid.clone(), base, 4)?;
            random_body(SEED, trial, &spec)
        })
        .collect()
}

/// Largest explicit-Euler amplification rate of the grid's highest mode
/// under the power flow at exponent e: max over nodes of |e|·𝒦^e·h·j²/f
/// with j the Nyquist wavenumber. Steps are chosen well below 2/rate.
fn euler_rate(body: &ConvexBody, e: f64) -> f64 {
    let res = body.grid().resolution();
    let j = match body.dim() {
        2 => res[0] as f64 / 2.0,
        _ => (res[0] as f64).max(res[1] as f64 / 2.0),
    };
    let h = body.support().values();
    let f = body.curvature_function().values();
    let k = body.centro_affine_curvature().values();
    let mut rate = 0.0_f64;
    for i in 0..h.len() {
        rate = rate.max(e.abs() * k[i].powf(e) * h[i] * j * j / f[i]);
    }
    rate
}

/// Initial step for `evolve` (default safety 0.5 halves it): the effective
/// step lands at a quarter of the stability boundary, or an eighth for
/// expanding flows, which grow into stiffness along the trajectory.
fn stable_dt0(bodies: &[&ConvexBody], e: f64) -> f64 {
    let rate = bodies
        .iter()
        .map(|b| euler_rate(b, e))
        .fold(0.0_f64, f64::max);
    let guard = if e < 0.0 { 0.5 } else { 1.0 };
    (guard / rate).min(1e-3)
}

/// Base spacing for the finite-difference derivative helpers, whose fixed
/// substep is dt_base/256: keeps the substep at two thirds of the boundary.
fn stable_dt_base(body: &ConvexBody, e: f64) -> f64 {
    (170.0 / euler_rate(body, e)).min(1e-3)
}

struct Verdicts {
    lines: Vec<(bool, String)>,
}

impl Verdicts {
    fn record(&mut self, ok: bool, name: &str, details: String) {
        let n = self.lines.len() + 1;
        let verdict = if ok { "PASS" } else { "FAIL" };
        let line = format!("[{n:2}/13] {verdict} {name}: {details}");
        println!("{line}");
        self.lines.push((ok, line));
    }

    fn run(&mut self, name: &str, body: impl FnOnce() -> Result<(bool, String)>) {
        match body() {
            Ok((ok, details)) => self.record(ok, name, details),
            Err(e) => self.record(false, name, format!("did not finish: {e}")),
        }
    }
}

/// Closed forms on centered ellipsoids: the invariants against
/// nω_n(∏axes)^{(n−p)/(n+p)} and the isoperimetric ratio against 1.
fn ellipsoid_oracles() -> Result<(bool, String)> {
    let ps = [1.0, 2.0, 5.0, -0.5];
    let mut worst2 = 0.0_f64;
    let mut worst3 = 0.0_f64;
    let mut worst_iso = 0.0_f64;
    for axes in [vec![2.0, 1.0], vec![3.0, 1.0 / 3.0]] {
        let body = ellipsoid(&circle512(), &axes)?;
        let prod: f64 = axes.iter().product();
        for p in ps {
            let idx = PAffineIndex::from_p(2, p)?;
            let expect = 2.0 * unit_ball_volume(2) * prod.powf((2.0 - p) / (2.0 + p));
            worst2 = worst2.max((omega_p(&body, &idx) - expect).abs() / expect);
        }
        for p in [1.0, 2.0, 5.0] {
            let idx = PAffineIndex::from_p(2, p)?;
            worst_iso = worst_iso.max((isoperimetric_ratio(&body, &idx)? - 1.0).abs());
        }
    }
    for axes in [vec![1.5, 1.0, 0.7], vec![2.0, 1.0, 0.5]] {
        let body = ellipsoid(&sphere_grid(), &axes)?;
        let prod: f64 = axes.iter().product();
        for p in ps {
            let idx = PAffineIndex::from_p(3, p)?;
            let expect = 3.0 * unit_ball_volume(3) * prod.powf((3.0 - p) / (3.0 + p));
            worst3 = worst3.max((omega_p(&body, &idx) - expect).abs() / expect);
        }
    }
    // The spatial product quadrature resolves the equality case of the
    // isoperimetric ratio to 1e−8 only on moderately eccentric bodies.
    for axes in [vec![1.5, 1.0, 0.7], vec![1.25, 1.0, 0.8]] {
        let body = ellipsoid(&sphere_grid(), &axes)?;
        for p in [1.0, 2.0, 5.0] {
            let idx = PAffineIndex::from_p(3, p)?;
            worst_iso = worst_iso.max((isoperimetric_ratio(&body, &idx)? - 1.0).abs());
        }
    }
    let ok = worst2 <= 1e-6 && worst3 <= 1e-4 && worst_iso <= 1e-8;
    Ok((
        ok,
        format!(
            "planar rel err {worst2:.1e} (tol 1e-6), spatial {worst3:.1e} (tol 1e-4), \
             iso-ratio dev {worst_iso:.1e} (tol 1e-8)"
        ),
    ))
}

/// Finite-difference dVol/dt along the power flow against the closed-form
/// signed invariant.
fn first_variation() -> Result<(bool, String)> {
    let bodies = std_bodies(&circle512(), 100, 5)?;
    let mut worst = 0.0_f64;
    for body in &bodies {
        for p in [1.0, 2.0, -1.0] {
            let idx = PAffineIndex::from_p(2, p)?;
            let est = flow_derivatives(body, &idx, 1, 1e-3)?[0];
            worst = worst.max((est.value - omega_1p(body, &idx)).abs() / omega_p(body, &idx));
        }
    }
    Ok((
        worst <= 1e-3,
        format!("worst rel err {worst:.1e} over 5 bodies, p ∈ {{1, 2, −1}} (tol 1e-3)"),
    ))
}

/// The closed-form second invariant against the flow second derivative on
/// strongly perturbed bodies, and against ((p−n)/(n+p))·Ω_p²/Vol on
/// centered ellipses, where all three agree.
fn second_variation() -> Result<(bool, String)> {
    let grid = circle512();
    let mut spec = BodySpec::new(grid.clone(), BaseShape::Ball(1.0), 3)?;
    spec.amplitude = Some(0.06);
    let mut worst_random = 0.0_f64;
    for trial in 200..205u64 {
        let body = random_body(SEED, trial, &spec)?;
        for p in [1.0, 2.0] {
            let idx = PAffineIndex::from_p(2, p)?;
            let closed = omega_2p(&body, &idx)?;
            let est = flow_derivatives(&body, &idx, 2, 1e-3)?[1];
            let scale = closed.abs().max(est.value.abs());
            worst_random = worst_random.max((est.value - closed).abs() / scale);
        }
    }
    let mut worst_ellipse = 0.0_f64;
    for axes in [[2.0, 1.0], [3.0, 1.0 / 3.0]] {
        let body = ellipsoid(&grid, &axes)?;
        for p in [1.0, 2.0] {
            let idx = PAffineIndex::from_p(2, p)?;
            let op = omega_p(&body, &idx);
            let target = (p - 2.0) / (2.0 + p) * op * op / body.volume();
            // p = 2 sits at the sign change (the target is 0), so errors
            // are measured on the invariant's natural scale.
            let scale = target.abs().max(op * op / body.volume());
            let closed = omega_2p(&body, &idx)?;
            let est = flow_derivatives(&body, &idx, 2, stable_dt_base(&body, idx.exponent()))?[1];
            worst_ellipse = worst_ellipse
                .max((closed - target).abs() / scale)
                .max((est.value - target).abs() / scale);
        }
    }
    Ok((
        worst_random <= 1e-2 && worst_ellipse <= 1e-4,
        format!(
            "flow vs closed form rel err {worst_random:.1e} on 5 perturbed bodies (tol 1e-2), \
             ellipse closed-form agreement {worst_ellipse:.1e} (tol 1e-4)"
        ),
    ))
}

/// Second-order lower bound: Ω_{2,p} ≥ ((p−n)/(n+p))·Ω_p²/Vol on the index
/// range where the bound is asserted.
fn second_order_bound() -> Result<(bool, String)> {
    let mut worst = f64::INFINITY;
    for dim in [2usize, 3] {
        let bodies = std_bodies(&grid_for(dim), 0, 25)?;
        let n = dim as f64;
        let mut ps = vec![1.0, 1.5, 3.0];
        if dim == 2 {
            ps.extend([-0.9, -0.5]);
        }
        for body in &bodies {
            for &p in &ps {
                let idx = PAffineIndex::from_p(dim, p)?;
                let o2 = omega_2p(body, &idx)?;
                let op = omega_p(body, &idx);
                let bound = (p - n) / (n + p) * op * op / body.volume();
                let scale = o2.abs().max(bound.abs()).max(op * op / body.volume());
                worst = worst.min((o2 - bound) / scale);
            }
        }
    }
    Ok((
        worst >= -1e-8,
        format!("worst margin {worst:.1e} over 25 bodies per dimension (tol −1e-8)"),
    ))
}

/// Volume product along the contracting flow: non-decreasing per accepted
/// step on perturbed bodies, conserved to within drift tolerance on
/// centered ellipses (where the flow is an exact homothety).
fn volume_product_monotone() -> Result<(bool, String)> {
    let grid = circle512();
    let idx = PAffineIndex::from_p(2, 1.0)?;
    let mut worst_step = f64::INFINITY;
    for body in &std_bodies(&grid, 0, 25)? {
        let dt0 = stable_dt0(&[body], idx.exponent());
        let config = FlowConfig::new(FlowDriver::Power(idx.clone()), dt0, 0.1)?
            .with_stride(1_000_000)?;
        let traj = evolve(body, &config);
        let step_worst = traj
            .volume_product
            .windows(2)
            .map(|w| (w[1] - w[0]) / w[0])
            .fold(f64::INFINITY, f64::min);
        worst_step = worst_step.min(step_worst);
    }
    let mut worst_drift = 0.0_f64;
    for axes in [[2.0, 1.0], [3.0, 1.0 / 3.0]] {
        let body = ellipsoid(&grid, &axes)?;
        let dt0 = (1.8 / euler_rate(&body, idx.exponent())).min(1e-3);
        let config = FlowConfig::new(FlowDriver::Power(idx.clone()), dt0, 0.1)?
            .with_stride(1_000_000)?;
        let traj = evolve(&body, &config);
        let vp0 = traj.volume_product[0];
        let drift = traj
            .volume_product
            .iter()
            .fold(0.0_f64, |acc, &v| acc.max((v / vp0 - 1.0).abs()));
        worst_drift = worst_drift.max(drift);
    }
    Ok((
        worst_step >= -1e-7 && worst_drift <= 1e-6,
        format!(
            "worst per-step change {worst_step:.1e} over 25 bodies (tol −1e-7), \
             ellipse drift {worst_drift:.1e} (tol 1e-6)"
        ),
    ))
}

/// Outer companion for the containment check: the body inflated by a fixed
/// smooth direction-dependent factor in [1.005, 1.095].
fn enlarged_outer(body: &ConvexBody) -> Result<ConvexBody> {
    let h: Vec<f64> = body
        .grid()
        .nodes()
        .iter()
        .zip(body.support().values())
        .map(|(u, &hv)| {
            let w = 0.9 * (1.3 * u[0] + 2.1 * u[1] + 0.8 * u[2]).cos();
            hv * (1.0 + 0.05 * (1.0 + w))
        })
        .collect();
    ConvexBody::from_support(ScalarField::new(body.grid().clone(), h)?)
}

/// Nested pairs stay nested along the flow: a half-scale copy inside the
/// body, and the body inside a smoothly enlarged companion, in both sign
/// regimes.
fn containment() -> Result<(bool, String)> {
    let mut worst = f64::INFINITY;
    for dim in [2usize, 3] {
        let body = &std_bodies(&grid_for(dim), 600, 1)?[0];
        let inner = body.scaled(0.5)?;
        let outer = enlarged_outer(body)?;
        for p in [1.0, -1.0] {
            let idx = PAffineIndex::from_p(dim, p)?;
            let e = idx.exponent();
            let dt0 = stable_dt0(&[&inner, body, &outer], e);
            let config = FlowConfig::new(FlowDriver::Power(idx.clone()), dt0, 0.1)?
                .with_stride(1_000_000)?;
            let scaled = check_containment(&inner, body, &config)?;
            let enlarged = check_containment(body, &outer, &config)?;
            worst = worst.min(scaled.min_gap).min(enlarged.min_gap);
        }
    }
    Ok((
        worst >= -1e-8,
        format!("worst support gap {worst:.1e} over both pair types, dims, p ∈ {{1, −1}} (tol −1e-8)"),
    ))
}

/// The volume ratio Vol(K)/Vol(K°) sits between the two mixed invariant
/// ratios, with equality on centered ellipsoids.
fn double_inequality() -> Result<(bool, String)> {
    let mut worst = f64::INFINITY;
    for dim in [2usize, 3] {
        let bodies = std_bodies(&grid_for(dim), 0, 25)?;
        for body in &bodies {
            let polar = body.polar_body()?;
            for p in [1.0, 2.0, 5.0, -1.0] {
                let idx = PAffineIndex::from_p(dim, p)?;
                let e = idx.exponent();
                let sgn = idx.sgn();
                let lhs = omega_exponent(body, e) / omega_exponent(&polar, -e);
                let mid = body.volume() / polar.volume();
                let rhs = omega_exponent(body, -e) / omega_exponent(&polar, e);
                worst = worst
                    .min(sgn * (mid - lhs) / mid)
                    .min(sgn * (rhs - mid) / mid);
            }
        }
    }
    // Equality case on centered ellipsoids, against the analytic polar
    // (inverse axes).
    let mut worst_eq = 0.0_f64;
    for (dim, axes) in [(2usize, vec![2.0, 1.0]), (3, vec![1.5, 1.0, 0.7])] {
        let grid = grid_for(dim);
        let body = ellipsoid(&grid, &axes)?;
        let inv: Vec<f64> = axes.iter().map(|a| 1.0 / a).collect();
        let polar = ellipsoid(&grid, &inv)?;
        for p in [1.0, 2.0, 5.0, -1.0] {
            let idx = PAffineIndex::from_p(dim, p)?;
            let e = idx.exponent();
            let lhs = omega_exponent(&body, e) / omega_exponent(&polar, -e);
            let mid = body.volume() / polar.volume();
            let rhs = omega_exponent(&body, -e) / omega_exponent(&polar, e);
            worst_eq = worst_eq
                .max((lhs / mid - 1.0).abs())
                .max((rhs / mid - 1.0).abs());
        }
    }
    Ok((
        worst >= -1e-8 && worst_eq <= 1e-6,
        format!(
            "worst margin {worst:.1e} over 25 bodies per dimension (tol −1e-8), \
             ellipsoid equality {worst_eq:.1e} (tol 1e-6)"
        ),
    ))
}

/// Polarity identity: the invariant of the numeric polar body at the paired
/// exponent matches the body's own invariant.
fn duality() -> Result<(bool, String)> {
    let mut worst = 0.0_f64;
    for dim in [2usize, 3] {
        let bodies = std_bodies(&grid_for(dim), 500, 10)?;
        for body in &bodies {
            let polar = body.polar_body()?;
            for q in [1.0, 2.0, dim as f64] {
                let e = PAffineIndex::from_p(dim, q)?.exponent();
                let rhs = omega_exponent(body, e);
                worst = worst.max((omega_exponent(&polar, 1.0 - e) - rhs).abs() / rhs);
            }
        }
    }
    Ok((
        worst <= 1e-4,
        format!("worst rel mismatch {worst:.1e} over 10 bodies per dimension, q ∈ {{1, 2, n}} (tol 1e-4)"),
    ))
}

/// Invariance of all four invariants under random volume-preserving linear
/// maps of condition number ≤ 3 (the image body is resampled, so the planar
/// and spatial tolerances differ).
fn sl_invariance() -> Result<(bool, String)> {
    let mut worst2 = 0.0_f64;
    let mut worst3 = 0.0_f64;
    for dim in [2usize, 3] {
        let grid = grid_for(dim);
        let mut worst = 0.0_f64;
        for trial in 0..10u64 {
            let body = &std_bodies(&grid, 400 + trial, 1)?[0];
            let map = random_sl(SEED, trial, dim, 3.0)?;
            let image = body.linear_image(&map)?;
            let idx = PAffineIndex::from_p(dim, 1.0)?;
            let phi = PhiSpec::power(0.5)?;
            let op = omega_p(body, &idx);
            worst = worst.max((omega_p(&image, &idx) - op).abs() / op);
            let ophi = omega_phi(body, &phi);
            worst = worst.max((omega_phi(&image, &phi) - ophi).abs() / ophi);
            let o2 = omega_2p(body, &idx)?;
            let scale = o2.abs().max(op * op / body.volume());
            worst = worst.max((omega_2p(&image, &idx)? - o2).abs() / scale);
            let vp = volume_product(body);
            worst = worst.max((volume_product(&image) - vp).abs() / vp);
        }
        if dim == 2 {
            worst2 = worst;
        } else {
            worst3 = worst;
        }
    }
    Ok((
        worst2 <= 1e-4 && worst3 <= 1e-3,
        format!(
            "worst planar rel change {worst2:.1e} (tol 1e-4), spatial {worst3:.1e} (tol 1e-3), \
             10 maps each"
        ),
    ))
}

/// Finite-difference volume rate along the weighted flow against the
/// weighted invariant.
fn phi_first_variation() -> Result<(bool, String)> {
    let bodies = std_bodies(&circle512(), 100, 5)?;
    let mut worst = 0.0_f64;
    for body in &bodies {
        for alpha in [0.25, 0.5] {
            let phi = PhiSpec::power(alpha)?;
            let est = phi_flow_rate(body, &phi, 1e-3)?;
            let target = omega_phi(body, &phi);
            worst = worst.max((est.value - target).abs() / target);
        }
    }
    Ok((
        worst <= 1e-3,
        format!("worst rel err {worst:.1e} over 5 bodies, α ∈ {{1/4, 1/2}} (tol 1e-3)"),
    ))
}

/// The weighted floating-body slope, normalized by the weighted invariant,
/// is the same constant for every body. The constant itself is reported
/// against 1 but never used to rescale anything.
fn floating_limit() -> Result<(bool, String)> {
    let grid = circle512();
    let phi = PhiSpec::power(0.5)?;
    let times = [0.01, 0.005, 0.0025];
    let mut bodies = vec![
        ellipsoid(&grid, &[1.0, 1.0])?,
        ellipsoid(&grid, &[2.0, 1.0])?,
        ellipsoid(&grid, &[1.3, 0.8])?,
    ];
    bodies.extend(std_bodies(&grid, 300, 2)?);
    let mut ratios = Vec::new();
    for body in &bodies {
        ratios.push(omega_phi_limit(body, &phi, &times)?.ratio);
    }
    let rmin = ratios.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let rmax = ratios.iter().fold(0.0_f64, |a, &b| a.max(b));
    let spread = rmax / rmin - 1.0;
    let c2 = ratios[0];
    let unit_dev = (c2 - 1.0).abs();
    let c2_note = if unit_dev <= 0.02 {
        format!("constant {c2:.5} equals 1 within 2%")
    } else {
        format!(
            "constant {c2:.5} differs from 1 by {:.0}% — reported as measured, not rescaled",
            100.0 * unit_dev
        )
    };
    Ok((
        spread <= 0.02,
        format!(
            "body-to-body spread {spread:.1e} across disk/ellipses/random (tol 2e-2); {c2_note}"
        ),
    ))
}

/// Round bodies shrink self-similarly: the unit circle's radius follows
/// (1 − 4t/3)^{3/4} under the contracting flow.
fn circle_radius_law() -> Result<(bool, String)> {
    let body = ellipsoid(&circle512(), &[1.0, 1.0])?;
    let idx = PAffineIndex::from_p(2, 1.0)?;
    let config = FlowConfig::new(FlowDriver::Power(idx), 1e-4, 0.3)?
        .with_safety(0.25)?
        .with_stride(1_000_000)?;
    let traj = evolve(&body, &config);
    let (t_end, last) = traj.snapshots.last().expect("trajectory has snapshots");
    let law = (1.0_f64 - 4.0 * t_end / 3.0).powf(0.75);
    let h = last.support().values();
    let mean = h.iter().sum::<f64>() / h.len() as f64;
    let err = (mean - law).abs() / law;
    let spread = h.iter().fold(0.0_f64, |acc, &v| acc.max((v - mean).abs()));
    Ok((
        (t_end - 0.3).abs() < 1e-12 && err <= 1e-4 && spread <= 1e-10,
        format!("radius rel err {err:.1e} at t = 0.3 (tol 1e-4), roundness spread {spread:.1e}"),
    ))
}

/// The full randomized verification suite at its reference configuration
/// reports zero violations.
fn reference_suite() -> Result<(bool, String)> {
    let report = run_suite(SEED, 25, &[2], &[1.0, 2.0, -0.9, -0.5, 5.0], None)?;
    let violations = report.violations();
    Ok((
        violations == 0,
        format!("25 planar trials, seed {SEED}: {violations} violations"),
    ))
}

#[test]
fn acceptance() {
    let mut v = Verdicts { lines: Vec::new() };
    v.run("ellipsoid invariant oracles", ellipsoid_oracles);
    v.run("flow first variation", first_variation);
    v.run("flow second variation", second_variation);
    v.run("second-order lower bound", second_order_bound);
    v.run("volume product along flows", volume_product_monotone);
    v.run("containment principle", containment);
    v.run("double inequality", double_inequality);
    v.run("polarity identity", duality);
    v.run("volume-preserving invariance", sl_invariance);
    v.run("weighted-flow first variation", phi_first_variation);
    v.run("floating-body limit", floating_limit);
    v.run("circle radius law", circle_radius_law);
    v.run("reference verification suite", reference_suite);

    let failed: Vec<&String> = v
        .lines
        .iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, line)| line)
        .collect();
    assert!(
        failed.is_empty(),
        "{} of {} checks failed:\n{}\nfull table:\n{}",
        failed.len(),
        v.lines.len(),
        failed
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join("\n"),
        v.lines
            .iter()
            .map(|(_, l)| l.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    );
}
