//! Grids, scalar fields, quadrature, and spectral calculus on S^1 and S^2.
//!
//! Everything downstream (curvature, invariants, flows) works with nodal
//! values of smooth functions on the unit sphere. The grid owns the
//! transform plans; fields are immutable value vectors tied to a shared
//! grid handle. Derivatives are covariant: on S^2, second derivatives are
//! returned in the orthonormal frame (e_theta, e_phi / sin theta), which is
//! exactly what the curvature matrix of a support function needs.

mod circle;
mod gauss;
mod sphere;

pub use circle::{CircleAntiderivative, CircleInterpolant};
pub use sphere::{SphereInterpolant, SpherePartials};

use crate::error::{Error, Result};
use circle::CircleEngine;
use sphere::SphereEngine;
use std::f64::consts::TAU;
use std::sync::Arc;

/// A point or direction in ambient coordinates; S^1 data keeps z = 0.
pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: Vec3) -> Vec3 {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

pub(crate) enum GridData {
    Circle(CircleEngine),
    Sphere(SphereEngine),
}

/// Quadrature/differentiation grid on the unit sphere S^{n-1}, n = 2 or 3.
///
/// * n = 2: uniform angles theta_i = 2 pi i / m with trapezoid weights
///   (spectrally exact for trigonometric polynomials); weights sum to 2 pi.
/// * n = 3: Gauss–Legendre nodes in cos(theta) (ascending colatitude, no
///   poles) times a uniform longitude grid; weights sum to 4 pi. Node
///   layout is theta-major: index = a * n_phi + b.
pub struct SphereGrid {
    pub(crate) data: GridData,
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
}

impl std::fmt::Debug for SphereGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.data {
            GridData::Circle(e) => write!(f, "SphereGrid(circle, m={})", e.m),
            GridData::Sphere(e) => {
                write!(f, "SphereGrid(sphere, {}x{})", e.n_theta, e.n_phi)
            }
        }
    }
}

impl SphereGrid {
    /// Uniform-angle grid on S^1. Requires m >= 16 and even.
    pub fn circle(m: usize) -> Result<Arc<Self>> {
        if m < 16 || m % 2 != 0 {
            return Err(Error::Config(format!(
                "circle grid needs m >= 16 and even, got {m}"
            )));
        }
        let nodes: Vec<Vec3> = (0..m)
            .map(|i| {
                let t = TAU * i as f64 / m as f64;
                [t.cos(), t.sin(), 0.0]
            })
            .collect();
        let w = TAU / m as f64;
        Ok(Arc::new(Self {
            data: GridData::Circle(CircleEngine::new(m)),
            nodes,
            weights: vec![w; m],
        }))
    }

    /// Gauss–Legendre x Fourier grid on S^2. Requires n_theta >= 8 and
    /// n_phi >= 16 even.
    pub fn sphere(n_theta: usize, n_phi: usize) -> Result<Arc<Self>> {
        if n_theta < 8 || n_phi < 16 || n_phi % 2 != 0 {
            return Err(Error::Config(format!(
                "sphere grid needs n_theta >= 8, n_phi >= 16 even, got {n_theta}x{n_phi}"
            )));
        }
        let eng = SphereEngine::new(n_theta, n_phi);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        let wphi = TAU / n_phi as f64;
        for a in 0..n_theta {
            let (st, ct) = (eng.sin_t[a], eng.x[a]);
            for b in 0..n_phi {
                let phi = TAU * b as f64 / n_phi as f64;
                nodes.push([st * phi.cos(), st * phi.sin(), ct]);
                weights.push(eng.glw[a] * wphi);
            }
        }
        Ok(Arc::new(Self {
            data: GridData::Sphere(eng),
            nodes,
            weights,
        }))
    }

    /// Dimension-dispatching constructor: `res` is `[m]` for n = 2 and
    /// `[n_theta, n_phi]` for n = 3.
    pub fn make(dim: usize, res: &[usize]) -> Result<Arc<Self>> {
        match (dim, res) {
            (2, [m]) => Self::circle(*m),
            (3, [nt, np]) => Self::sphere(*nt, *np),
            _ => Err(Error::Config(format!(
                "unsupported grid request: dim {dim}, resolution {res:?}"
            ))),
        }
    }

    /// Ambient dimension n (2 or 3); the grid itself lives on S^{n-1}.
    pub fn dim(&self) -> usize {
        match self.data {
            GridData::Circle(_) => 2,
            GridData::Sphere(_) => 3,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> Vec3 {
        self.nodes[i]
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Grid resolution: `[m]` or `[n_theta, n_phi]`.
    pub fn resolution(&self) -> Vec<usize> {
        match &self.data {
            GridData::Circle(e) => vec![e.m],
            GridData::Sphere(e) => vec![e.n_theta, e.n_phi],
        }
    }

    /// Two handles address the same layout (same kind and resolution).
    pub fn same_layout(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other)
            || (self.dim() == other.dim() && self.resolution() == other.resolution())
    }

    /// Index of the node antipodal to node i (grids are antipode-closed).
    pub fn antipode(&self, i: usize) -> usize {
        match &self.data {
            GridData::Circle(e) => (i + e.m / 2) % e.m,
            GridData::Sphere(e) => {
                let (a, b) = (i / e.n_phi, i % e.n_phi);
                (e.n_theta - 1 - a) * e.n_phi + ((b + e.n_phi / 2) % e.n_phi)
            }
        }
    }

    pub(crate) fn circle_engine(&self) -> &CircleEngine {
        match &self.data {
            GridData::Circle(e) => e,
            GridData::Sphere(_) => panic!("circle engine requested from sphere grid"),
        }
    }

    pub(crate) fn sphere_engine(&self) -> &SphereEngine {
        match &self.data {
            GridData::Sphere(e) => e,
            GridData::Circle(_) => panic!("sphere engine requested from circle grid"),
        }
    }

    /// Colatitude of theta-row a (n = 3 only).
    pub fn colatitude(&self, a: usize) -> f64 {
        self.sphere_engine().theta[a]
    }

    /// Polar angle of node i on the circle (n = 2 only).
    pub fn angle(&self, i: usize) -> f64 {
        let m = self.circle_engine().m;
        TAU * i as f64 / m as f64
    }
}

/// Convert a unit direction to (theta, phi) with phi in [0, 2 pi).
pub fn direction_angles(u: Vec3) -> (f64, f64) {
    let z = u[2].clamp(-1.0, 1.0);
    let theta = z.acos();
    let mut phi = u[1].atan2(u[0]);
    if phi < 0.0 {
        phi += TAU;
    }
    (theta, phi)
}

/// Nodal values of a smooth function, tied to a shared grid.
#[derive(Debug, Clone)]
pub struct ScalarField {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Domain(format!(
                "field length {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerics(format!(
                "non-finite field value at node {i}"
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<SphereGrid>, f: impl Fn(Vec3) -> f64) -> Result<Self> {
        let values: Vec<f64> = grid.nodes().iter().map(|&u| f(u)).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Arc<SphereGrid>, c: f64) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![c; n])
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Integral over the sphere with the grid's quadrature weights.
    pub fn integrate(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(v, w)| v * w)
            .sum()
    }

    /// Pointwise combination with another field on the same grid.
    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.grid.same_layout(&other.grid) {
            return Err(Error::Domain("fields live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid.clone(), values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }
}

/// Covariant derivatives of a field, in the orthonormal frame.
///
/// * n = 2, order 1: `[f']`; order 2: `[f'']`.
/// * n = 3, order 1: `[f_theta, f_phi / sin theta]`; order 2: the covariant
///   Hessian `[H_tt, H_tp, H_pp]` with
///   H_tt = f_tt, H_tp = (f_tp - cot(theta) f_p) / sin(theta),
///   H_pp = f_pp / sin^2(theta) + cot(theta) f_t.
pub fn differentiate(field: &ScalarField, order: u32) -> Result<Vec<ScalarField>> {
    if order != 1 && order != 2 {
        return Err(Error::Domain(format!("derivative order {order} not supported")));
    }
    let grid = field.grid().clone();
    let out_values: Vec<Vec<f64>> = match &grid.data {
        GridData::Circle(eng) => {
            vec![eng.derivative(field.values(), order)]
        }
        GridData::Sphere(eng) => {
            let d = eng.partials(field.values());
            let (nt, np) = (eng.n_theta, eng.n_phi);
            let mut out = Vec::new();
            if order == 1 {
                let mut g1 = vec![0.0; nt * np];
                let mut g2 = vec![0.0; nt * np];
                for a in 0..nt {
                    let st = eng.sin_t[a];
                    for b in 0..np {
                        let i = a * np + b;
                        g1[i] = d.f_t[i];
                        g2[i] = d.f_p[i] / st;
                    }
                }
                out.push(g1);
                out.push(g2);
            } else {
                let mut htt = vec![0.0; nt * np];
                let mut htp = vec![0.0; nt * np];
                let mut hpp = vec![0.0; nt * np];
                for a in 0..nt {
                    let st = eng.sin_t[a];
                    let cot = eng.x[a] / st;
                    for b in 0..np {
                        let i = a * np + b;
                        htt[i] = d.f_tt[i];
                        htp[i] = (d.f_tp[i] - cot * d.f_p[i]) / st;
                        hpp[i] = d.f_pp[i] / (st * st) + cot * d.f_t[i];
                    }
                }
                out.push(htt);
                out.push(htp);
                out.push(hpp);
            }
            out
        }
    };
    out_values
        .into_iter()
        .map(|v| {
            ScalarField::new(grid.clone(), v).map_err(|_| {
                Error::Numerics("spectral derivative produced non-finite values".into())
            })
        })
        .collect()
}

/// First and second covariant derivatives in one pass, sharing the
/// spectral analysis. Returns `(differentiate(f, 1), differentiate(f, 2))`.
pub fn jet2(field: &ScalarField) -> Result<(Vec<ScalarField>, Vec<ScalarField>)> {
    let grid = field.grid().clone();
    match &grid.data {
        GridData::Circle(eng) => {
            let d1 = ScalarField::new(grid.clone(), eng.derivative(field.values(), 1))?;
            let d2 = ScalarField::new(grid.clone(), eng.derivative(field.values(), 2))?;
            Ok((vec![d1], vec![d2]))
        }
        GridData::Sphere(eng) => {
            let d = eng.partials(field.values());
            let (nt, np) = (eng.n_theta, eng.n_phi);
            let mut g1 = vec![0.0; nt * np];
            let mut g2 = vec![0.0; nt * np];
            let mut htt = vec![0.0; nt * np];
            let mut htp = vec![0.0; nt * np];
            let mut hpp = vec![0.0; nt * np];
            for a in 0..nt {
                let st = eng.sin_t[a];
                let cot = eng.x[a] / st;
                for b in 0..np {
                    let i = a * np + b;
                    g1[i] = d.f_t[i];
                    g2[i] = d.f_p[i] / st;
                    htt[i] = d.f_tt[i];
                    htp[i] = (d.f_tp[i] - cot * d.f_p[i]) / st;
                    hpp[i] = d.f_pp[i] / (st * st) + cot * d.f_t[i];
                }
            }
            let wrap = |v: Vec<f64>| ScalarField::new(grid.clone(), v);
            Ok((
                vec![wrap(g1)?, wrap(g2)?],
                vec![wrap(htt)?, wrap(htp)?, wrap(hpp)?],
            ))
        }
    }
}

/// Spectrally interpolate a field at an arbitrary unit direction.
///
/// At a grid node the stored nodal value is returned exactly.
pub fn evaluate_off_grid(field: &ScalarField, direction: Vec3) -> Result<f64> {
    check_unit(direction)?;
    let grid = field.grid();
    // Snap to a node if the direction coincides with one.
    match &grid.data {
        GridData::Circle(eng) => {
            let theta = direction[1].atan2(direction[0]).rem_euclid(TAU);
            let step = TAU / eng.m as f64;
            let i = (theta / step).round() as usize % eng.m;
            if angle_close(theta, grid.angle(i), step) {
                return Ok(field.values()[i]);
            }
            Ok(Interpolant::new(field).eval(direction))
        }
        GridData::Sphere(eng) => {
            let (theta, phi) = direction_angles(direction);
            let pstep = TAU / eng.n_phi as f64;
            let b = (phi / pstep).round() as usize % eng.n_phi;
            if angle_close(phi, TAU * b as f64 / eng.n_phi as f64, pstep) {
                for a in 0..eng.n_theta {
                    if (theta - eng.theta[a]).abs() < 1e-12 {
                        return Ok(field.values()[a * eng.n_phi + b]);
                    }
                }
            }
            Ok(Interpolant::new(field).eval(direction))
        }
    }
}

fn angle_close(a: f64, b: f64, period_step: f64) -> bool {
    let d = (a - b).abs();
    let d = d.min((d - TAU).abs());
    d < 1e-12 * period_step.max(1.0) + 1e-13
}

pub fn check_unit(u: Vec3) -> Result<()> {
    if (norm(u) - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "direction {u:?} is not a unit vector"
        )));
    }
    Ok(())
}

/// Reusable off-grid evaluator for a single field.
pub enum Interpolant {
    Circle(CircleInterpolant),
    Sphere {
        grid: Arc<SphereGrid>,
        itp: SphereInterpolant,
    },
}

impl Interpolant {
    pub fn new(field: &ScalarField) -> Self {
        match &field.grid().data {
            GridData::Circle(eng) => Interpolant::Circle(eng.interpolant(field.values())),
            GridData::Sphere(eng) => {
                let modes = eng.analyze(field.values());
                Interpolant::Sphere {
                    grid: field.grid().clone(),
                    itp: eng.interpolant(&modes),
                }
            }
        }
    }

    pub fn eval(&self, direction: Vec3) -> f64 {
        match self {
            Interpolant::Circle(itp) => {
                let theta = direction[1].atan2(direction[0]);
                itp.eval(theta)
            }
            Interpolant::Sphere { grid, itp } => {
                let (theta, phi) = direction_angles(direction);
                itp.eval(grid.sphere_engine(), theta, phi)
            }
        }
    }

    /// Value and first two derivatives along the angle (n = 2 only).
    pub fn eval_angle012(&self, theta: f64) -> (f64, f64, f64) {
        match self {
            Interpolant::Circle(itp) => itp.eval012(theta),
            Interpolant::Sphere { .. } => panic!("angle evaluation is S^1-only"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_preconditions_enforced() {
        assert!(SphereGrid::circle(14).is_err());
        assert!(SphereGrid::circle(17).is_err());
        assert!(SphereGrid::sphere(7, 16).is_err());
        assert!(SphereGrid::sphere(8, 15).is_err());
        assert!(SphereGrid::circle(16).is_ok());
        assert!(SphereGrid::sphere(8, 16).is_ok());
    }

    #[test]
    fn weights_sum_to_sphere_measure() {
        let g2 = SphereGrid::circle(64).unwrap();
        let s2: f64 = g2.weights().iter().sum();
        assert!((s2 - TAU).abs() < 1e-12 * TAU);

        let g3 = SphereGrid::sphere(16, 32).unwrap();
        let s3: f64 = g3.weights().iter().sum();
        assert!((s3 - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
    }

    #[test]
    fn integrate_cos_squared_on_s2() {
        // integral of z^2 over S^2 is 4 pi / 3.
        let g = SphereGrid::sphere(8, 16).unwrap();
        let f = ScalarField::from_fn(g, |u| u[2] * u[2]).unwrap();
        assert!((f.integrate() - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn circle_derivatives_are_exact_for_low_harmonics() {
        let g = SphereGrid::circle(32).unwrap();
        let f = ScalarField::from_fn(g.clone(), |u| {
            let t = u[1].atan2(u[0]);
            (2.0 * t).cos()
        })
        .unwrap();
        let d2 = &differentiate(&f, 2).unwrap()[0];
        for i in 0..g.len() {
            let t = g.angle(i);
            assert!((d2.values()[i] + 4.0 * (2.0 * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn hessian_of_linear_restriction_cancels_identity() {
        // f = u . e_z restricted to S^2 has covariant Hessian -f Id, so
        // Hess + f Id = 0: linear functions generate translations, which do
        // not change curvature.
        let g = SphereGrid::sphere(10, 16).unwrap();
        let f = ScalarField::from_fn(g.clone(), |u| u[2]).unwrap();
        let h = differentiate(&f, 2).unwrap();
        for i in 0..g.len() {
            let fv = f.values()[i];
            assert!((h[0].values()[i] + fv).abs() < 1e-11, "H_tt node {i}");
            assert!(h[1].values()[i].abs() < 1e-11, "H_tp node {i}");
            assert!((h[2].values()[i] + fv).abs() < 1e-11, "H_pp node {i}");
        }
    }

    #[test]
    fn hessian_of_tesseral_harmonic() {
        // Same identity for f = u . e_x = sin theta cos phi, which exercises
        // the odd-mode (sin-type) code path.
        let g = SphereGrid::sphere(12, 16).unwrap();
        let f = ScalarField::from_fn(g.clone(), |u| u[0]).unwrap();
        let h = differentiate(&f, 2).unwrap();
        for i in 0..g.len() {
            let fv = f.values()[i];
            assert!((h[0].values()[i] + fv).abs() < 1e-11);
            assert!(h[1].values()[i].abs() < 1e-11);
            assert!((h[2].values()[i] + fv).abs() < 1e-11);
        }
    }

    #[test]
    fn off_grid_eval_reproduces_nodes_exactly() {
        let g = SphereGrid::circle(32).unwrap();
        let f = ScalarField::from_fn(g.clone(), |u| 1.0 + 0.3 * u[0] + 0.1 * u[1] * u[1]).unwrap();
        for i in [0usize, 5, 17, 31] {
            let v = evaluate_off_grid(&f, g.node(i)).unwrap();
            assert_eq!(v, f.values()[i]);
        }

        let g3 = SphereGrid::sphere(8, 16).unwrap();
        let f3 = ScalarField::from_fn(g3.clone(), |u| 1.0 + 0.2 * u[2]).unwrap();
        for i in [0usize, 20, 77, 127] {
            let v = evaluate_off_grid(&f3, g3.node(i)).unwrap();
            assert_eq!(v, f3.values()[i]);
        }
    }

    #[test]
    fn off_grid_eval_rejects_non_unit_directions() {
        let g = SphereGrid::circle(16).unwrap();
        let f = ScalarField::constant(g, 1.0).unwrap();
        assert!(evaluate_off_grid(&f, [1.1, 0.0, 0.0]).is_err());
    }

    #[test]
    fn antipode_indices_are_involutive_and_opposite() {
        for g in [SphereGrid::circle(20).unwrap(), SphereGrid::sphere(9, 18).unwrap()] {
            for i in 0..g.len() {
                let j = g.antipode(i);
                assert_eq!(g.antipode(j), i);
                let (u, v) = (g.node(i), g.node(j));
                for k in 0..3 {
                    assert!((u[k] + v[k]).abs() < 1e-12);
                }
            }
        }
    }
}
