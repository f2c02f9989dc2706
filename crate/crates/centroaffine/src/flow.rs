//! Centro-affine curvature flows on support functions.
//!
//! A driver assigns each body the normal velocity written in support-function
//! form as ∂h/∂t = −sgn(e)·h·𝒦^e with e = p/(n+p) (the power family), or
//! ∂h/∂t = −h·φ(𝒦) for a positive weight φ. Shrinking drivers (e > 0, or any
//! φ > 0) decrease volume; the power family with e < 0 expands. Trajectories
//! are integrated by explicit Euler steps with adaptive step control: the
//! step is capped so that no nodal support value changes by more than
//! 10%·safety per step, and a step that leaves the admissible class is
//! halved and retried.
//!
//! Alongside plain integration the module provides the monitors used by the
//! verification harness: volume derivatives along the flow (whose signs
//! recover the first- and second-order invariants), co-evolution of a
//! contained pair of bodies, and the rate of change of the polar volume
//! against its closed-form prediction on the polar body.

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::invariants::{omega_exponent, PAffineIndex, PhiSpec};
use crate::spherical::ScalarField;

/// Velocity law for a flow: either a member of the power family indexed by
/// p, or a general positive weight φ applied to the centro-affine curvature.
#[derive(Clone, Debug)]
pub enum FlowDriver {
    Power(PAffineIndex),
    Phi(PhiSpec),
}

impl FlowDriver {
    /// Signed speed factor multiplying h: the nodal velocity is
    /// −speed_factor(𝒦)·h.
    fn speed_factor(&self, kappa: f64) -> f64 {
        match self {
            FlowDriver::Power(index) => index.sgn() * kappa.powf(index.exponent()),
            FlowDriver::Phi(phi) => phi.eval(kappa),
        }
    }
}

/// Step-control and horizon parameters for [`evolve`].
#[derive(Clone, Debug)]
pub struct FlowConfig {
    pub driver: FlowDriver,
    /// Upper bound for the time step before adaptive capping.
    pub dt0: f64,
    /// Step-control factor in (0, 1]; the accepted step is safety times the
    /// adaptive cap.
    pub safety: f64,
    /// Integration horizon.
    pub t_max: f64,
    /// Record a body snapshot every this many accepted steps (≥ 1); the
    /// initial and final states are always recorded.
    pub snapshot_stride: usize,
}

impl FlowConfig {
    /// Config with the default safety factor 0.5 and snapshot stride 1.
    pub fn new(driver: FlowDriver, dt0: f64, t_max: f64) -> Result<Self> {
        let config = FlowConfig {
            driver,
            dt0,
            safety: 0.5,
            t_max,
            snapshot_stride: 1,
        };
        config.check()?;
        Ok(config)
    }

    pub fn with_safety(mut self, safety: f64) -> Result<Self> {
        self.safety = safety;
        self.check()?;
        Ok(self)
    }

    pub fn with_stride(mut self, stride: usize) -> Result<Self> {
        self.snapshot_stride = stride;
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<()> {
        if !(self.dt0 > 0.0 && self.dt0.is_finite()) {
            return Err(Error::Config(format!("dt0 must be positive, got {}", self.dt0)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::Config(format!(
                "safety must lie in (0, 1], got {}",
                self.safety
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Config("snapshot_stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// Why an integration ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The horizon t_max was reached.
    Completed,
    /// A step failed validation even after the maximum number of halvings.
    ConvexityLost,
    /// Step halving drove dt below the underflow floor 1e−12.
    StepUnderflow,
    /// The minimum support value fell below 5% of its initial value; the
    /// body is about to shrink to a point and the discretization is no
    /// longer trustworthy there.
    NearExtinction,
}

/// Integrated flow history: per-step monitor series plus strided body
/// snapshots.
#[derive(Clone, Debug)]
pub struct FlowTrajectory {
    /// Time after each accepted step; starts at 0 for the initial state.
    pub times: Vec<f64>,
    /// Volume at each entry of `times`.
    pub volume: Vec<f64>,
    /// Polar volume (volume of the polar body, computed as the dual volume
    /// integral) at each entry of `times`.
    pub polar_volume: Vec<f64>,
    /// volume · polar_volume at each entry of `times`.
    pub volume_product: Vec<f64>,
    /// Minimum eigenvalue of the convexity operator at each entry of
    /// `times`; positive along the whole trajectory.
    pub min_eig: Vec<f64>,
    /// (time, body) pairs every `snapshot_stride` accepted steps, always
    /// including the initial and final states.
    pub snapshots: Vec<(f64, ConvexBody)>,
    pub stop_reason: StopReason,
}

/// Nodal velocity field −speed(𝒦)·h of the driver at the given body.
fn velocity(body: &ConvexBody, driver: &FlowDriver) -> Vec<f64> {
    let h = body.support().values();
    let kappa = body.centro_affine_curvature().values();
    h.iter()
        .zip(kappa)
        .map(|(&hi, &ki)| -driver.speed_factor(ki) * hi)
        .collect()
}

/// One explicit Euler update h ← h + dt·v with the velocity field already
/// evaluated. Fails with ConvexityLost when the updated field leaves the
/// admissible class; the error's time field holds the offset dt from the
/// step's starting state.
fn euler_step(body: &ConvexBody, v: &[f64], dt: f64) -> Result<ConvexBody> {
    let h = body.support().values();
    let updated: Vec<f64> = h.iter().zip(v).map(|(&hi, &vi)| hi + dt * vi).collect();
    let field = ScalarField::new(body.grid().clone(), updated)
        .map_err(|_| Error::ConvexityLost { t: dt })?;
    ConvexBody::from_support(field).map_err(|_| Error::ConvexityLost { t: dt })
}

/// One explicit Euler step of size dt under the config's driver.
///
/// The update is h ← h − dt·sgn(e)·h·𝒦^e for the power driver and
/// h ← h − dt·h·φ(𝒦) for a φ-driver; the result is validated.
pub fn step(body: &ConvexBody, config: &FlowConfig, dt: f64) -> Result<ConvexBody> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Config(format!("step size must be positive, got {dt}")));
    }
    let v = velocity(body, &config.driver);
    euler_step(body, &v, dt)
}

const DT_FLOOR: f64 = 1e-12;
const MAX_HALVINGS: usize = 40;
const EXTINCTION_FRACTION: f64 = 0.05;

/// Integrate the flow from `body` until the horizon, convexity loss, step
/// underflow, or near-extinction. The outcome is encoded in the returned
/// trajectory's stop_reason; this function itself does not fail.
///
/// Step control: dt = safety · min(dt0, 0.1 / max|v/h|), clipped to land
/// exactly on t_max; a step that leaves the admissible class is halved and
/// retried, up to 40 times.
pub fn evolve(body: &ConvexBody, config: &FlowConfig) -> FlowTrajectory {
    config.check().expect("invalid flow configuration");
    let mut current = body.clone();
    let mut t = 0.0;
    let h_min_initial = current.validity().min_h;

    let mut trajectory = FlowTrajectory {
        times: Vec::new(),
        volume: Vec::new(),
        polar_volume: Vec::new(),
        volume_product: Vec::new(),
        min_eig: Vec::new(),
        snapshots: Vec::new(),
        stop_reason: StopReason::Completed,
    };
    record(&mut trajectory, t, &current);
    trajectory.snapshots.push((t, current.clone()));
    let mut steps_since_snapshot = 0usize;

    let stop_reason = loop {
        if config.t_max - t <= DT_FLOOR {
            break StopReason::Completed;
        }
        let v = velocity(&current, &config.driver);
        let max_rate = v
            .iter()
            .zip(current.support().values())
            .map(|(&vi, &hi)| (vi / hi).abs())
            .fold(0.0_f64, f64::max);
        let cap = if max_rate > 0.0 { 0.1 / max_rate } else { f64::INFINITY };
        let mut dt = config.safety * config.dt0.min(cap);
        if t + dt > config.t_max {
            dt = config.t_max - t;
        }

        let mut halvings = 0usize;
        let next = loop {
            match euler_step(&current, &v, dt) {
                Ok(next) => break Some(next),
                Err(_) => {
                    if halvings == MAX_HALVINGS {
                        break None;
                    }
                    halvings += 1;
                    dt *= 0.5;
                    if dt < DT_FLOOR {
                        break None;
                    }
                }
            }
        };
        let Some(next) = next else {
            break if dt < DT_FLOOR {
                StopReason::StepUnderflow
            } else {
                StopReason::ConvexityLost
            };
        };

        current = next;
        t += dt;
        record(&mut trajectory, t, &current);
        steps_since_snapshot += 1;
        if steps_since_snapshot == config.snapshot_stride {
            trajectory.snapshots.push((t, current.clone()));
            steps_since_snapshot = 0;
        }

        if current.validity().min_h < EXTINCTION_FRACTION * h_min_initial {
            break StopReason::NearExtinction;
        }
    };

    if steps_since_snapshot != 0 || trajectory.snapshots.is_empty() {
        trajectory.snapshots.push((t, current));
    }
    trajectory.stop_reason = stop_reason;
    trajectory
}

fn record(trajectory: &mut FlowTrajectory, t: f64, body: &ConvexBody) {
    let vol = body.volume();
    let pvol = body.polar_volume();
    trajectory.times.push(t);
    trajectory.volume.push(vol);
    trajectory.polar_volume.push(pvol);
    trajectory.volume_product.push(vol * pvol);
    trajectory.min_eig.push(body.validity().min_eig);
}

/// Integrate the driver with fixed Euler substeps (no adaptivity), recording
/// the volume and polar volume at the requested sample count: `samples + 1`
/// states at t = j·spacing for j = 0..=samples, with `substeps` Euler steps
/// per sample interval. Fixed stepping keeps the integration bias a smooth
/// function of time, which matters when the samples feed finite-difference
/// stencils.
fn sample_volumes(
    body: &ConvexBody,
    driver: &FlowDriver,
    spacing: f64,
    samples: usize,
    substeps: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let eta = spacing / substeps as f64;
    let mut current = body.clone();
    let mut vol = Vec::with_capacity(samples + 1);
    let mut pvol = Vec::with_capacity(samples + 1);
    vol.push(current.volume());
    pvol.push(current.polar_volume());
    for j in 0..samples {
        for s in 0..substeps {
            let v = velocity(&current, driver);
            current = euler_step(&current, &v, eta).map_err(|_| Error::ConvexityLost {
                t: j as f64 * spacing + s as f64 * eta,
            })?;
        }
        vol.push(current.volume());
        pvol.push(current.polar_volume());
    }
    Ok((vol, pvol))
}

/// Finite-difference weights for the m-th derivative at x0 from the given
/// nodes (Fornberg's recurrence). With 2m+1 equispaced one-sided nodes the
/// resulting stencil has truncation error of order spacing^(m+1).
fn fd_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0_f64; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[m]).collect()
}

/// A volume-derivative estimate along the flow, reported with the sign that
/// makes it comparable to the closed-form invariants: value ≈ −dᵏVol/dtᵏ at
/// t = 0. The error bar is the magnitude of the Richardson correction.
#[derive(Clone, Copy, Debug)]
pub struct DerivEstimate {
    pub order: usize,
    pub value: f64,
    pub error_bar: f64,
}

/// Estimate −dᵏVol/dtᵏ at t = 0 along the power flow for k = 1..=k_max.
///
/// Volume is sampled at t = j·dt_base/2 (j = 0..=4·k_max) with fixed Euler
/// substeps of dt_base/256. For each order k a one-sided stencil on 2k+1
/// nodes is evaluated at spacings dt_base and dt_base/2, and the two are
/// Richardson-extrapolated; the error bar is the distance between the
/// extrapolated and fine-spacing estimates. With this sign convention the
/// order-1 value matches sgn(e)·Ω_p and the order-2 value matches the
/// closed-form second invariant.
pub fn flow_derivatives(
    body: &ConvexBody,
    index: &PAffineIndex,
    k_max: usize,
    dt_base: f64,
) -> Result<Vec<DerivEstimate>> {
    if k_max == 0 || k_max > 3 {
        return Err(Error::Config(format!(
            "derivative order must lie in 1..=3, got {k_max}"
        )));
    }
    if !(dt_base > 0.0 && dt_base.is_finite()) {
        return Err(Error::Config(format!(
            "dt_base must be positive, got {dt_base}"
        )));
    }
    let driver = FlowDriver::Power(index.clone());
    let (vol, _) = sample_volumes(body, &driver, dt_base / 2.0, 4 * k_max, 128)?;
    Ok((1..=k_max).map(|k| stencil_estimate(&vol, dt_base, k)).collect())
}

/// Order-k one-sided stencil on volume samples spaced dt_base/2 apart,
/// Richardson-extrapolated against the same stencil at spacing dt_base
/// (which uses every other sample).
fn stencil_estimate(vol: &[f64], dt_base: f64, k: usize) -> DerivEstimate {
    let half = dt_base / 2.0;
    let fine_nodes: Vec<f64> = (0..=2 * k).map(|j| j as f64 * half).collect();
    let coarse_nodes: Vec<f64> = (0..=2 * k).map(|j| j as f64 * dt_base).collect();
    let wf = fd_weights(0.0, &fine_nodes, k);
    let wc = fd_weights(0.0, &coarse_nodes, k);
    let d_fine: f64 = wf.iter().zip(vol).map(|(w, v)| w * v).sum();
    let d_coarse: f64 = wc.iter().enumerate().map(|(j, w)| w * vol[2 * j]).sum();
    // The stencils have truncation error C·s^(k+1); halving s scales it
    // by 2^-(k+1), which the extrapolation cancels.
    let factor = 2.0_f64.powi(k as i32 + 1);
    let rich = (factor * d_fine - d_coarse) / (factor - 1.0);
    DerivEstimate {
        order: k,
        value: -rich,
        error_bar: (rich - d_fine).abs(),
    }
}

/// Estimate −dVol/dt at t = 0 along the φ-flow, with the same sampling and
/// extrapolation scheme as [`flow_derivatives`] at order 1. The value matches
/// Ω_φ: the flow removes volume at the weighted-surface-area rate.
pub fn phi_flow_rate(body: &ConvexBody, phi: &PhiSpec, dt_base: f64) -> Result<DerivEstimate> {
    if !(dt_base > 0.0 && dt_base.is_finite()) {
        return Err(Error::Config(format!(
            "dt_base must be positive, got {dt_base}"
        )));
    }
    let driver = FlowDriver::Phi(phi.clone());
    let (vol, _) = sample_volumes(body, &driver, dt_base / 2.0, 4, 128)?;
    Ok(stencil_estimate(&vol, dt_base, 1))
}

/// Outcome of co-evolving a nested pair of bodies; the flow preserves
/// containment, so the support gap should never become meaningfully
/// negative.
#[derive(Clone, Debug)]
pub struct ContainmentReport {
    /// Minimum over all recorded times and nodes of h_out − h_in.
    pub min_gap: f64,
    /// Time at which the minimum gap occurred.
    pub t_at_min: f64,
    /// Number of accepted shared steps.
    pub steps: usize,
    pub stop_reason: StopReason,
    /// min_gap ≥ −1e−8.
    pub passed: bool,
}

const CONTAINMENT_TOLERANCE: f64 = -1e-8;

/// Co-evolve an initially nested pair under the config's driver on a shared
/// time grid and report the worst nodal support gap h_out − h_in seen.
///
/// Both bodies must live on the same grid and satisfy h_in ≤ h_out at every
/// node initially. Each shared step uses the smaller of the two bodies'
/// adaptive step sizes; if either body's update fails validation the shared
/// step is halved and retried.
pub fn check_containment(
    body_in: &ConvexBody,
    body_out: &ConvexBody,
    config: &FlowConfig,
) -> Result<ContainmentReport> {
    config.check()?;
    if !body_in.grid().same_layout(body_out.grid()) {
        return Err(Error::Domain(
            "containment check requires both bodies on the same grid".into(),
        ));
    }
    let mut inner = body_in.clone();
    let mut outer = body_out.clone();
    for (node, (&hi, &ho)) in inner
        .support()
        .values()
        .iter()
        .zip(outer.support().values())
        .enumerate()
    {
        if ho - hi < 0.0 {
            return Err(Error::InitialNotContained { node, gap: ho - hi });
        }
    }

    let gap_of = |inner: &ConvexBody, outer: &ConvexBody| -> (f64, usize) {
        inner
            .support()
            .values()
            .iter()
            .zip(outer.support().values())
            .map(|(&hi, &ho)| ho - hi)
            .enumerate()
            .fold((f64::INFINITY, 0), |(best, at), (i, g)| {
                if g < best {
                    (g, i)
                } else {
                    (best, at)
                }
            })
    };

    let mut t = 0.0;
    let (mut min_gap, _) = gap_of(&inner, &outer);
    let mut t_at_min = 0.0;
    let mut steps = 0usize;
    let extinction_in = EXTINCTION_FRACTION * inner.validity().min_h;
    let extinction_out = EXTINCTION_FRACTION * outer.validity().min_h;

    let stop_reason = loop {
        if config.t_max - t <= DT_FLOOR {
            break StopReason::Completed;
        }
        let v_in = velocity(&inner, &config.driver);
        let v_out = velocity(&outer, &config.driver);
        let max_rate = v_in
            .iter()
            .zip(inner.support().values())
            .chain(v_out.iter().zip(outer.support().values()))
            .map(|(&vi, &hi)| (vi / hi).abs())
            .fold(0.0_f64, f64::max);
        let cap = if max_rate > 0.0 { 0.1 / max_rate } else { f64::INFINITY };
        let mut dt = config.safety * config.dt0.min(cap);
        if t + dt > config.t_max {
            dt = config.t_max - t;
        }

        let mut halvings = 0usize;
        let pair = loop {
            let attempt = euler_step(&inner, &v_in, dt)
                .and_then(|a| euler_step(&outer, &v_out, dt).map(|b| (a, b)));
            match attempt {
                Ok(pair) => break Some(pair),
                Err(_) => {
                    if halvings == MAX_HALVINGS {
                        break None;
                    }
                    halvings += 1;
                    dt *= 0.5;
                    if dt < DT_FLOOR {
                        break None;
                    }
                }
            }
        };
        let Some((next_in, next_out)) = pair else {
            break if dt < DT_FLOOR {
                StopReason::StepUnderflow
            } else {
                StopReason::ConvexityLost
            };
        };

        inner = next_in;
        outer = next_out;
        t += dt;
        steps += 1;
        let (gap, _) = gap_of(&inner, &outer);
        if gap < min_gap {
            min_gap = gap;
            t_at_min = t;
        }
        if inner.validity().min_h < extinction_in || outer.validity().min_h < extinction_out {
            break StopReason::NearExtinction;
        }
    };

    Ok(ContainmentReport {
        min_gap,
        t_at_min,
        steps,
        stop_reason,
        passed: min_gap >= CONTAINMENT_TOLERANCE,
    })
}

/// Comparison of the measured polar-volume rate along the direct flow with
/// its closed-form prediction on the polar body.
#[derive(Clone, Copy, Debug)]
pub struct DualFlowReport {
    /// Finite-difference d/dt of the polar volume at t = 0.
    pub measured: f64,
    /// sgn(e) times the dual-index invariant evaluated on the polar body.
    pub predicted: f64,
    /// |measured − predicted| / |predicted|.
    pub rel_mismatch: f64,
    /// rel_mismatch ≤ 1e−2.
    pub passed: bool,
}

const DUAL_FLOW_TOLERANCE: f64 = 1e-2;

/// Check that the polar volume changes along the direct flow at the rate of
/// the dual-index invariant of the polar body.
///
/// The polar volume is sampled at t = 0, dt, 2dt along the power flow with
/// fixed Euler substeps of dt/64, differentiated with a one-sided
/// second-order stencil, and compared against sgn(e)·Ω_{p°}(K°) where p° is
/// the dual index (undefined for p = −n/2, which is rejected).
pub fn dual_flow_check(
    body: &ConvexBody,
    index: &PAffineIndex,
    dt: f64,
) -> Result<DualFlowReport> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let dual = index.dual()?;
    let driver = FlowDriver::Power(index.clone());
    let (_, pvol) = sample_volumes(body, &driver, dt, 2, 64)?;
    let measured = (-3.0 * pvol[0] + 4.0 * pvol[1] - pvol[2]) / (2.0 * dt);

    let polar = body.polar_body()?;
    let predicted = index.sgn() * omega_exponent(&polar, dual.exponent());
    let rel_mismatch = (measured - predicted).abs() / predicted.abs();
    Ok(DualFlowReport {
        measured,
        predicted,
        rel_mismatch,
        passed: rel_mismatch <= DUAL_FLOW_TOLERANCE,
    })
}
