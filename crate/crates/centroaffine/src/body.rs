//! Convex bodies represented by support functions.
//!
//! A body K with the origin in its interior is stored as the nodal values
//! of its support function h(u) = sup { x·u : x in K } on a SphereGrid.
//! Membership in the admissible class (smooth, origin interior, strictly
//! positive Gauss curvature) is equivalent to h > 0 together with positive
//! definiteness of the curvature matrix
//!
//!   ã = ∇̄²h + h·Id,
//!
//! whose determinant is the curvature function f = 1/k (the reciprocal
//! Gauss curvature composed with the normal parameterization). From these
//! the centro-affine curvature 𝒦 = k / h^{n+1} = 1 / (f h^{n+1}), volumes
//!
//!   Vol(K) = (1/n) ∫ h f dμ,   Vol(K°) = (1/n) ∫ h^{-n} dμ,
//!
//! polar bodies, boundary points X(u) = h u + ∇̄h, mixed curvature
//! functions, and SL(n) images are all computed here.

use crate::error::{Error, Result};
use crate::spherical::{
    direction_angles, dot, jet2, norm, normalize, Interpolant, ScalarField, SphereGrid,
    SphereInterpolant, Vec3,
};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// Positivity floor for the support function: the origin must stay
/// strictly interior.
pub const SUPPORT_FLOOR: f64 = 1e-9;
/// Positivity floor for the smallest eigenvalue of ã: strict convexity
/// must be detectable before curvature quantities degenerate.
pub const CONVEXITY_FLOOR: f64 = 1e-9;

/// Row-major 3x3 matrix; planar maps embed as the top-left 2x2 block with
/// a trivial third row/column.
pub type Mat3 = [[f64; 3]; 3];

pub fn mat_det(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn mat_transpose(a: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn mat_vec(a: &Mat3, v: Vec3) -> Vec3 {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// Outcome of testing a support field for membership in the admissible
/// class. `ok` holds iff min_h and min_eig clear the module floors.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    pub ok: bool,
    pub min_h: f64,
    pub min_eig: f64,
    pub failing_node: Option<usize>,
}

struct CurvaturePack {
    report: ValidityReport,
    f: Vec<f64>,
    grad: Vec<Vec<f64>>,
}

fn curvature_pack(h: &ScalarField) -> Result<CurvaturePack> {
    let (grad, hess) = jet2(h)?;
    let n = h.grid().len();
    let dim = h.grid().dim();
    let mut f = vec![0.0; n];
    let (mut min_h, mut h_node) = (f64::INFINITY, 0usize);
    let (mut min_eig, mut e_node) = (f64::INFINITY, 0usize);
    for i in 0..n {
        let hv = h.values()[i];
        if hv < min_h {
            min_h = hv;
            h_node = i;
        }
        let eig = if dim == 2 {
            let a = hess[0].values()[i] + hv;
            f[i] = a;
            a
        } else {
            let a11 = hess[0].values()[i] + hv;
            let a12 = hess[1].values()[i];
            let a22 = hess[2].values()[i] + hv;
            f[i] = a11 * a22 - a12 * a12;
            0.5 * ((a11 + a22) - ((a11 - a22).powi(2) + 4.0 * a12 * a12).sqrt())
        };
        if eig < min_eig {
            min_eig = eig;
            e_node = i;
        }
    }
    let ok = min_h > SUPPORT_FLOOR && min_eig > CONVEXITY_FLOOR;
    let failing_node = if ok {
        None
    } else if min_h <= SUPPORT_FLOOR {
        Some(h_node)
    } else {
        Some(e_node)
    };
    Ok(CurvaturePack {
        report: ValidityReport {
            ok,
            min_h,
            min_eig,
            failing_node,
        },
        f,
        grad: grad.into_iter().map(|g| g.values().to_vec()).collect(),
    })
}

/// Test a candidate support field without constructing a body. Never
/// errors: numerical blow-ups are reported as invalid.
pub fn validate_support(h: &ScalarField) -> ValidityReport {
    match curvature_pack(h) {
        Ok(pack) => pack.report,
        Err(_) => ValidityReport {
            ok: false,
            min_h: f64::NEG_INFINITY,
            min_eig: f64::NEG_INFINITY,
            failing_node: None,
        },
    }
}

/// A validated convex body. Curvature caches are filled at construction,
/// so every instance is immutable, internally consistent, and admissible.
#[derive(Clone)]
pub struct ConvexBody {
    h: ScalarField,
    f: ScalarField,
    kappa: ScalarField,
    grad: Vec<ScalarField>,
    report: ValidityReport,
}

impl std::fmt::Debug for ConvexBody {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            fm,
            "ConvexBody({:?}, min_h={:.3e}, min_eig={:.3e})",
            self.grid(),
            self.report.min_h,
            self.report.min_eig
        )
    }
}

impl ConvexBody {
    /// Build a body from nodal support values, rejecting fields outside
    /// the admissible class.
    pub fn from_support(h: ScalarField) -> Result<Self> {
        let pack = curvature_pack(&h)?;
        if !pack.report.ok {
            return Err(Error::InvalidBody {
                min_h: pack.report.min_h,
                min_eig: pack.report.min_eig,
                failing_node: pack.report.failing_node,
            });
        }
        let grid = h.grid().clone();
        let np1 = grid.dim() as i32 + 1;
        let kappa_vals: Vec<f64> = pack
            .f
            .iter()
            .zip(h.values())
            .map(|(&fv, &hv)| 1.0 / (fv * hv.powi(np1)))
            .collect();
        let f = ScalarField::new(grid.clone(), pack.f)?;
        let kappa = ScalarField::new(grid.clone(), kappa_vals)?;
        let grad = pack
            .grad
            .into_iter()
            .map(|g| ScalarField::new(grid.clone(), g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            h,
            f,
            kappa,
            grad,
            report: pack.report,
        })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        self.h.grid()
    }

    pub fn dim(&self) -> usize {
        self.grid().dim()
    }

    /// Support function h.
    pub fn support(&self) -> &ScalarField {
        &self.h
    }

    /// Curvature function f = 1/k = det(∇̄²h + h Id).
    pub fn curvature_function(&self) -> &ScalarField {
        &self.f
    }

    /// Centro-affine curvature 𝒦 = k/h^{n+1}.
    pub fn centro_affine_curvature(&self) -> &ScalarField {
        &self.kappa
    }

    /// Covariant gradient of h in the orthonormal frame.
    pub fn support_gradient(&self) -> &[ScalarField] {
        &self.grad
    }

    pub fn validity(&self) -> &ValidityReport {
        &self.report
    }

    /// Vol(K) = (1/n) ∫ h f dμ.
    pub fn volume(&self) -> f64 {
        let n = self.dim() as f64;
        self.h
            .values()
            .iter()
            .zip(self.f.values())
            .zip(self.grid().weights())
            .map(|((&h, &f), &w)| h * f * w)
            .sum::<f64>()
            / n
    }

    /// Vol(K°) = (1/n) ∫ h^{-n} dμ, the polar volume without constructing
    /// the polar body.
    pub fn polar_volume(&self) -> f64 {
        let n = self.dim() as i32;
        self.h
            .values()
            .iter()
            .zip(self.grid().weights())
            .map(|(&h, &w)| h.powi(-n) * w)
            .sum::<f64>()
            / n as f64
    }

    /// Boundary point with outer normal equal to grid node i:
    /// X = h u + ∇̄h in the node's tangent frame.
    pub fn boundary_point_at_node(&self, i: usize) -> Vec3 {
        let u = self.grid().node(i);
        let hv = self.h.values()[i];
        if self.dim() == 2 {
            let hp = self.grad[0].values()[i];
            [hv * u[0] - hp * u[1], hv * u[1] + hp * u[0], 0.0]
        } else {
            let (theta, phi) = direction_angles(u);
            let (st, ct) = theta.sin_cos();
            let (sp, cp) = phi.sin_cos();
            let e_t = [ct * cp, ct * sp, -st];
            let e_p = [-sp, cp, 0.0];
            let g1 = self.grad[0].values()[i];
            let g2 = self.grad[1].values()[i];
            [
                hv * u[0] + g1 * e_t[0] + g2 * e_p[0],
                hv * u[1] + g1 * e_t[1] + g2 * e_p[1],
                hv * u[2] + g1 * e_t[2] + g2 * e_p[2],
            ]
        }
    }

    /// Boundary point with outer normal u (arbitrary unit direction).
    pub fn boundary_point(&self, u: Vec3) -> Result<Vec3> {
        let ev = BoundaryEvaluator::new(self);
        ev.point(u)
    }

    /// Minimum and maximum distance from the origin to the boundary,
    /// sampled at the grid nodes.
    pub fn radial_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.grid().len() {
            let r = norm(self.boundary_point_at_node(i));
            lo = lo.min(r);
            hi = hi.max(r);
        }
        (lo, hi)
    }

    /// The scaled body λK (λ > 0).
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if lambda <= 0.0 {
            return Err(Error::Domain(format!(
                "scale factor must be positive, got {lambda}"
            )));
        }
        Self::from_support(self.h.scale(lambda))
    }

    /// The translated body K + x0 (support function h + x0·u).
    pub fn translated(&self, x0: Vec3) -> Result<Self> {
        let grid = self.grid().clone();
        let vals: Vec<f64> = self
            .h
            .values()
            .iter()
            .zip(grid.nodes())
            .map(|(&h, &u)| h + dot(x0, u))
            .collect();
        Self::from_support(ScalarField::new(grid, vals)?)
    }

    /// Polar body K° = { y : x·y ≤ 1 for all x in K }, computed on the
    /// same grid via h_{K°}(v) = max_u (u·v)/h(u): a dense scan at 4x the
    /// grid resolution locates the maximizing direction, a local solve
    /// refines it to machine precision, so the result is smooth enough to
    /// differentiate spectrally.
    pub fn polar_body(&self) -> Result<Self> {
        let field = if self.dim() == 2 {
            self.polar_support_s1()?
        } else {
            self.polar_support_s2()?
        };
        Self::from_support(field).map_err(|e| match e {
            Error::InvalidBody {
                min_h, min_eig, ..
            } => Error::PolarDegenerate(format!(
                "polar support field failed validation (min_h={min_h:.3e}, min_eig={min_eig:.3e})"
            )),
            other => other,
        })
    }

    fn polar_support_s1(&self) -> Result<ScalarField> {
        let grid = self.grid().clone();
        let m = grid.resolution()[0];
        let dense = 4 * m;
        let itp = Interpolant::new(&self.h);
        let hd: Vec<f64> = (0..dense)
            .map(|i| itp.eval_angle012(TAU * i as f64 / dense as f64).0)
            .collect();
        let step = TAU / dense as f64;
        let mut hp = vec![0.0; m];
        for (j, out) in hp.iter_mut().enumerate() {
            let psi = grid.angle(j);
            let mut best = f64::NEG_INFINITY;
            let mut best_i = 0usize;
            for (i, &hv) in hd.iter().enumerate() {
                let c = (step * i as f64 - psi).cos();
                if c > 0.0 {
                    let g = c / hv;
                    if g > best {
                        best = g;
                        best_i = i;
                    }
                }
            }
            let theta = refine_polar_angle(&itp, psi, step * best_i as f64, step);
            let (h, _, _) = itp.eval_angle012(theta);
            *out = (theta - psi).cos() / h;
        }
        ScalarField::new(grid, hp)
    }

    fn polar_support_s2(&self) -> Result<ScalarField> {
        use rayon::prelude::*;
        let grid = self.grid().clone();
        let eng = grid.sphere_engine();
        let res = grid.resolution();
        let (dn_t, dn_p) = (4 * res[0], 4 * res[1]);
        let modes = eng.analyze(self.h.values());
        let itp = eng.interpolant(&modes);
        let dense_thetas: Vec<f64> = (0..dn_t)
            .map(|a| PI * (a as f64 + 0.5) / dn_t as f64)
            .collect();
        let hd = eng.eval_grid(&itp, &dense_thetas, dn_p);
        let mut dense_nodes = Vec::with_capacity(dn_t * dn_p);
        for &t in &dense_thetas {
            let (st, ct) = t.sin_cos();
            for b in 0..dn_p {
                let phi = TAU * b as f64 / dn_p as f64;
                dense_nodes.push([st * phi.cos(), st * phi.sin(), ct]);
            }
        }
        let trust = PI / dn_t as f64;
        let hp: Vec<f64> = grid
            .nodes()
            .par_iter()
            .map(|&v| {
                let mut best = f64::NEG_INFINITY;
                let mut best_i = 0usize;
                for (i, &hv) in hd.iter().enumerate() {
                    let g = dot(dense_nodes[i], v) / hv;
                    if g > best {
                        best = g;
                        best_i = i;
                    }
                }
                let eval = |w: Vec3| {
                    let (t, p) = direction_angles(w);
                    itp.eval(eng, t, p)
                };
                let w = refine_polar_direction(&eval, v, dense_nodes[best_i], trust);
                dot(w, v) / eval(w)
            })
            .collect();
        ScalarField::new(grid, hp)
    }

    /// The image AK under a linear map with det A = 1, resampled onto the
    /// body's grid via h_{AK}(u) = |Aᵀu| · h(Aᵀu / |Aᵀu|).
    pub fn linear_image(&self, a: &Mat3) -> Result<Self> {
        let det = mat_det(a);
        if (det - 1.0).abs() > 1e-10 {
            return Err(Error::DetNotOne(det));
        }
        if self.dim() == 2 {
            let planar = a[0][2] == 0.0
                && a[1][2] == 0.0
                && a[2][0] == 0.0
                && a[2][1] == 0.0
                && a[2][2] == 1.0;
            if !planar {
                return Err(Error::Domain(
                    "linear image of a planar body must fix the plane z = 0".into(),
                ));
            }
        }
        let at = mat_transpose(a);
        let ev = BoundaryEvaluator::new(self);
        let grid = self.grid().clone();
        let vals: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&u| {
                let w = mat_vec(&at, u);
                let r = norm(w);
                r * ev.support(normalize(w))
            })
            .collect();
        Self::from_support(ScalarField::new(grid, vals)?).map_err(|e| match e {
            Error::InvalidBody {
                min_h, min_eig, ..
            } => Error::PolarDegenerate(format!(
                "resampled linear image failed validation (min_h={min_h:.3e}, min_eig={min_eig:.3e})"
            )),
            other => other,
        })
    }
}

/// Locate the minimum of F(θ) = log h(θ) − log cos(θ−ψ) near θ0 by
/// safeguarded Newton iteration inside an expanding bracket.
fn refine_polar_angle(itp: &Interpolant, psi: f64, theta0: f64, step: f64) -> f64 {
    let fprime = |t: f64| {
        let (h, hp, _) = itp.eval_angle012(t);
        hp / h + (t - psi).tan()
    };
    // Bracket the root of F'; the scan maximum may sit one sample off the
    // continuous peak, so widen a few times if needed.
    let mut lo = theta0 - step;
    let mut hi = theta0 + step;
    let mut flo = fprime(lo);
    let mut fhi = fprime(hi);
    for _ in 0..5 {
        if flo <= 0.0 && fhi >= 0.0 {
            break;
        }
        lo -= step;
        hi += step;
        // Keep the window inside the half-circle where cos(θ−ψ) > 0.
        lo = lo.max(psi - 0.499 * PI);
        hi = hi.min(psi + 0.499 * PI);
        flo = fprime(lo);
        fhi = fprime(hi);
    }
    if !(flo <= 0.0 && fhi >= 0.0) {
        return theta0;
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..80 {
        let (h, hp, hpp) = itp.eval_angle012(t);
        let d = t - psi;
        let fp = hp / h + d.tan();
        let fpp = (hpp * h - hp * hp) / (h * h) + 1.0 / d.cos().powi(2);
        if fp <= 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let newton = if fpp > 0.0 { t - fp / fpp } else { f64::NAN };
        t = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 {
            break;
        }
    }
    t
}

/// Maximize (w·v)/h(w) over unit directions w near w0: Newton iteration on
/// L(s) = log h(w(s)) − log(w(s)·v) in a moving tangent chart, with
/// finite-difference derivatives and a trust-region step cap.
fn refine_polar_direction(eval: &dyn Fn(Vec3) -> f64, v: Vec3, w0: Vec3, trust: f64) -> Vec3 {
    let mut w = w0;
    let delta = 1e-4;
    for _ in 0..40 {
        let (e1, e2) = tangent_frame(w);
        let chart = |s1: f64, s2: f64| -> f64 {
            let p = normalize([
                w[0] + s1 * e1[0] + s2 * e2[0],
                w[1] + s1 * e1[1] + s2 * e2[1],
                w[2] + s1 * e1[2] + s2 * e2[2],
            ]);
            let c = dot(p, v);
            if c <= 1e-12 {
                return f64::INFINITY;
            }
            eval(p).ln() - c.ln()
        };
        let l00 = chart(0.0, 0.0);
        let lp0 = chart(delta, 0.0);
        let lm0 = chart(-delta, 0.0);
        let l0p = chart(0.0, delta);
        let l0m = chart(0.0, -delta);
        let lpp = chart(delta, delta);
        let lpm = chart(delta, -delta);
        let lmp = chart(-delta, delta);
        let lmm = chart(-delta, -delta);
        if ![l00, lp0, lm0, l0p, l0m, lpp, lpm, lmp, lmm]
            .iter()
            .all(|x| x.is_finite())
        {
            break;
        }
        let g1 = (lp0 - lm0) / (2.0 * delta);
        let g2 = (l0p - l0m) / (2.0 * delta);
        let h11 = (lp0 - 2.0 * l00 + lm0) / (delta * delta);
        let h22 = (l0p - 2.0 * l00 + l0m) / (delta * delta);
        let h12 = (lpp - lpm - lmp + lmm) / (4.0 * delta * delta);
        let det = h11 * h22 - h12 * h12;
        let (mut s1, mut s2) = if det > 0.0 && h11 > 0.0 {
            ((-g1 * h22 + g2 * h12) / det, (-g2 * h11 + g1 * h12) / det)
        } else {
            // Not locally convex in the chart: take a damped descent step.
            (-g1 * trust, -g2 * trust)
        };
        let snorm = (s1 * s1 + s2 * s2).sqrt();
        if snorm > trust {
            s1 *= trust / snorm;
            s2 *= trust / snorm;
        }
        w = normalize([
            w[0] + s1 * e1[0] + s2 * e2[0],
            w[1] + s1 * e1[1] + s2 * e2[1],
            w[2] + s1 * e1[2] + s2 * e2[2],
        ]);
        if snorm < 1e-9 {
            break;
        }
    }
    w
}

fn tangent_frame(w: Vec3) -> (Vec3, Vec3) {
    let pick = if w[0].abs() <= w[1].abs() && w[0].abs() <= w[2].abs() {
        [1.0, 0.0, 0.0]
    } else if w[1].abs() <= w[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let e1 = normalize([
        pick[1] * w[2] - pick[2] * w[1],
        pick[2] * w[0] - pick[0] * w[2],
        pick[0] * w[1] - pick[1] * w[0],
    ]);
    let e2 = [
        w[1] * e1[2] - w[2] * e1[1],
        w[2] * e1[0] - w[0] * e1[2],
        w[0] * e1[1] - w[1] * e1[0],
    ];
    (e1, e2)
}

/// Off-grid evaluator for support values and boundary points of one body.
/// Construct once, query many times.
pub struct BoundaryEvaluator {
    dim: usize,
    h_itp: Interpolant,
    // S^2 only: spectral interpolants of the raw partials h_θ and h_φ,
    // from which the tangential gradient is assembled pointwise. The frame
    // components themselves are not smooth across the poles, so they are
    // never interpolated directly.
    sphere_grad: Option<(SphereInterpolant, SphereInterpolant)>,
    grid: Arc<SphereGrid>,
}

impl BoundaryEvaluator {
    pub fn new(body: &ConvexBody) -> Self {
        let grid = body.grid().clone();
        let dim = grid.dim();
        let h_itp = Interpolant::new(body.support());
        let sphere_grad = if dim == 3 {
            let eng = grid.sphere_engine();
            let modes = eng.analyze(body.support().values());
            let mt = eng.dtheta(&modes);
            let mp = eng.dphi(&modes, 1);
            Some((eng.interpolant(&mt), eng.interpolant(&mp)))
        } else {
            None
        };
        Self {
            dim,
            h_itp,
            sphere_grad,
            grid,
        }
    }

    /// Interpolated support value at a unit direction.
    pub fn support(&self, u: Vec3) -> f64 {
        self.h_itp.eval(u)
    }

    /// Boundary point with outer normal u: X = h u + ∇̄h.
    pub fn point(&self, u: Vec3) -> Result<Vec3> {
        crate::spherical::check_unit(u)?;
        if self.dim == 2 {
            let theta = u[1].atan2(u[0]);
            let (h, hp, _) = self.h_itp.eval_angle012(theta);
            return Ok([h * u[0] - hp * u[1], h * u[1] + hp * u[0], 0.0]);
        }
        let (theta, phi) = direction_angles(u);
        let st = theta.sin();
        if st < 1e-9 {
            return Err(Error::Domain(
                "boundary point at a pole direction is frame-degenerate; query a nearby direction"
                    .into(),
            ));
        }
        let eng = self.grid.sphere_engine();
        let (gt, gp) = self.sphere_grad.as_ref().unwrap();
        let h = self.h_itp.eval(u);
        let ht = gt.eval(eng, theta, phi);
        let hp = gp.eval(eng, theta, phi) / st;
        let ct = theta.cos();
        let (sp, cp) = phi.sin_cos();
        let e_t = [ct * cp, ct * sp, -st];
        let e_p = [-sp, cp, 0.0];
        Ok([
            h * u[0] + ht * e_t[0] + hp * e_p[0],
            h * u[1] + ht * e_t[1] + hp * e_p[1],
            h * u[2] + ht * e_t[2] + hp * e_p[2],
        ])
    }
}

/// Mixed curvature function s(g_1, …, g_{n−1}): the multilinear symmetric
/// polarization of the curvature determinant. For n = 2, s(g) = g″ + g;
/// for n = 3, s(g₁, g₂) = ½ [det(Ã₁+Ã₂) − det Ã₁ − det Ã₂] with
/// Ã_i = ∇̄²g_i + g_i Id. The diagonal s(h, …, h) is the curvature
/// function of the body with support h.
pub fn mixed_curvature(args: &[&ScalarField]) -> Result<ScalarField> {
    if args.is_empty() {
        return Err(Error::Domain("mixed curvature needs at least one field".into()));
    }
    let grid = args[0].grid().clone();
    for g in args {
        if !grid.same_layout(g.grid()) {
            return Err(Error::Domain(
                "mixed curvature arguments live on different grids".into(),
            ));
        }
    }
    let dim = grid.dim();
    if args.len() != dim - 1 {
        return Err(Error::Domain(format!(
            "mixed curvature in dimension {dim} takes {} fields, got {}",
            dim - 1,
            args.len()
        )));
    }
    if dim == 2 {
        let (_, hess) = jet2(args[0])?;
        let vals: Vec<f64> = hess[0]
            .values()
            .iter()
            .zip(args[0].values())
            .map(|(&d2, &g)| d2 + g)
            .collect();
        return ScalarField::new(grid, vals);
    }
    let (_, ha) = jet2(args[0])?;
    let (_, hb) = jet2(args[1])?;
    let n = grid.len();
    let mut vals = vec![0.0; n];
    for i in 0..n {
        let a = [
            ha[0].values()[i] + args[0].values()[i],
            ha[1].values()[i],
            ha[2].values()[i] + args[0].values()[i],
        ];
        let b = [
            hb[0].values()[i] + args[1].values()[i],
            hb[1].values()[i],
            hb[2].values()[i] + args[1].values()[i],
        ];
        let det = |m: [f64; 3]| m[0] * m[2] - m[1] * m[1];
        let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        vals[i] = 0.5 * (det(sum) - det(a) - det(b));
    }
    ScalarField::new(grid, vals)
}

/// Mixed volume V(L, g_1, …, g_{n−1}) = (1/n) ∫ h_L · s(g_1, …) dμ.
pub fn mixed_volume(l: &ScalarField, args: &[&ScalarField]) -> Result<f64> {
    let s = mixed_curvature(args)?;
    if !l.grid().same_layout(s.grid()) {
        return Err(Error::Domain(
            "mixed volume support field lives on a different grid".into(),
        ));
    }
    let n = l.grid().dim() as f64;
    Ok(l.zip_with(&s, |a, b| a * b)?.integrate() / n)
}

/// Support field of a centered ellipse/ellipsoid with the given semi-axes
/// (z-axis ignored for n = 2): h(u) = √(Σ a_i² u_i²).
pub fn ellipsoid_support(grid: Arc<SphereGrid>, axes: &[f64]) -> Result<ScalarField> {
    let dim = grid.dim();
    if axes.len() != dim {
        return Err(Error::Config(format!(
            "expected {dim} semi-axes, got {}",
            axes.len()
        )));
    }
    if axes.iter().any(|&a| a <= 0.0) {
        return Err(Error::Config("semi-axes must be positive".into()));
    }
    let a = axes.to_vec();
    ScalarField::from_fn(grid, move |u| {
        let mut s = 0.0;
        for (ai, ui) in a.iter().zip(u.iter()) {
            s += ai * ai * ui * ui;
        }
        s.sqrt()
    })
}
