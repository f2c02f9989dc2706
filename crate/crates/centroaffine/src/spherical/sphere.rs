//! Spectral machinery on the two-sphere: Gauss–Legendre colatitudes times
//! a uniform Fourier grid in longitude.
//!
//! A smooth function f(theta, phi) has longitudinal Fourier coefficients
//! c_k(theta) of the form
//!
//!   k even:  c_k = P(cos theta)
//!   k odd:   c_k = sin(theta) * P(cos theta)
//!
//! with P smooth in x = cos theta. Working on the polynomial part P keeps
//! colatitude interpolation and differentiation spectrally accurate through
//! the poles, where naive interpolation in x would hit the sqrt(1 - x^2)
//! singularity of the odd modes. One theta-derivative swaps the two forms:
//!
//!   d/dtheta [P(x)]            = sin(theta) * (-P'(x))
//!   d/dtheta [sin(theta) Q(x)] = x Q(x) - (1 - x^2) Q'(x)
//!
//! so each coefficient column stays exactly representable; `Modes` tracks
//! how many theta-derivatives have been applied.

use super::gauss::{gauss_legendre, Barycentric};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

type C64 = Complex<f64>;

pub struct SphereEngine {
    pub n_theta: usize,
    pub n_phi: usize,
    /// Colatitudes, ascending in (0, pi); no pole nodes.
    pub theta: Vec<f64>,
    /// x = cos(theta), descending; Gauss–Legendre nodes.
    pub x: Vec<f64>,
    pub sin_t: Vec<f64>,
    /// Gauss–Legendre weights in x (sum to 2).
    pub glw: Vec<f64>,
    bary: Barycentric,
    /// Collocation derivative d/dx at the Gauss nodes, row-major.
    dmat: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SphereEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SphereEngine")
            .field("n_theta", &self.n_theta)
            .field("n_phi", &self.n_phi)
            .finish()
    }
}

/// Longitudinal Fourier coefficients, column-major: `c[k * n_theta + a]`
/// is bin k evaluated at colatitude a. Unnormalized (raw forward FFT).
#[derive(Debug, Clone)]
pub struct Modes {
    pub c: Vec<C64>,
    /// Number of theta-derivatives applied; decides which columns carry a
    /// sin(theta) prefactor.
    pub dtheta_count: u8,
}

impl SphereEngine {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (x, glw) = gauss_legendre(n_theta);
        let theta: Vec<f64> = x.iter().map(|&v| v.acos()).collect();
        let sin_t: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
        let bary = Barycentric::new(x.clone());
        let dmat = bary.diff_matrix();
        let mut planner = FftPlanner::new();
        Self {
            n_theta,
            n_phi,
            theta,
            x,
            sin_t,
            glw,
            bary,
            dmat,
            fwd: planner.plan_fft_forward(n_phi),
            inv: planner.plan_fft_inverse(n_phi),
        }
    }

    /// True if Fourier column k carries a sin(theta) prefactor.
    fn sin_type(&self, k: usize, dtheta_count: u8) -> bool {
        ((k % 2) as u8 + dtheta_count) % 2 == 1
    }

    /// Forward transform of theta-major nodal values.
    pub fn analyze(&self, values: &[f64]) -> Modes {
        let (nt, np) = (self.n_theta, self.n_phi);
        debug_assert_eq!(values.len(), nt * np);
        let mut c = vec![C64::new(0.0, 0.0); nt * np];
        let mut row: Vec<C64> = vec![C64::new(0.0, 0.0); np];
        for a in 0..nt {
            for b in 0..np {
                row[b] = C64::new(values[a * np + b], 0.0);
            }
            self.fwd.process(&mut row);
            for k in 0..np {
                c[k * nt + a] = row[k];
            }
        }
        Modes { c, dtheta_count: 0 }
    }

    /// Inverse of [`analyze`]: theta-major nodal values.
    pub fn synthesize(&self, modes: &Modes) -> Vec<f64> {
        let (nt, np) = (self.n_theta, self.n_phi);
        let mut values = vec![0.0; nt * np];
        let mut row: Vec<C64> = vec![C64::new(0.0, 0.0); np];
        let scale = 1.0 / np as f64;
        for a in 0..nt {
            for k in 0..np {
                row[k] = modes.c[k * nt + a];
            }
            self.inv.process(&mut row);
            for b in 0..np {
                values[a * np + b] = row[b].re * scale;
            }
        }
        values
    }

    fn wavenumber(&self, k: usize) -> i64 {
        if k <= self.n_phi / 2 {
            k as i64
        } else {
            k as i64 - self.n_phi as i64
        }
    }

    /// d/dphi of the given order, at coefficient level.
    pub fn dphi(&self, modes: &Modes, order: u32) -> Modes {
        let (nt, np) = (self.n_theta, self.n_phi);
        let mut out = modes.clone();
        for k in 0..np {
            let sk = self.wavenumber(k) as f64;
            let factor = if order % 2 == 1 && k == np / 2 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(0.0, sk).powu(order)
            };
            for a in 0..nt {
                out.c[k * nt + a] *= factor;
            }
        }
        out
    }

    /// Apply the derivative matrix to a complex column.
    fn dx_col(&self, col: &[C64]) -> Vec<C64> {
        let nt = self.n_theta;
        let mut out = vec![C64::new(0.0, 0.0); nt];
        for j in 0..nt {
            let mut acc = C64::new(0.0, 0.0);
            let row = &self.dmat[j * nt..(j + 1) * nt];
            for (k, d) in row.iter().enumerate() {
                acc += col[k] * *d;
            }
            out[j] = acc;
        }
        out
    }

    /// d/dtheta at coefficient level; flips the per-column representation.
    pub fn dtheta(&self, modes: &Modes) -> Modes {
        let (nt, np) = (self.n_theta, self.n_phi);
        let mut c = vec![C64::new(0.0, 0.0); nt * np];
        let mut col = vec![C64::new(0.0, 0.0); nt];
        for k in 0..np {
            for a in 0..nt {
                col[a] = modes.c[k * nt + a];
            }
            if !self.sin_type(k, modes.dtheta_count) {
                // P(x) -> -sin(theta) P'(x); stored as nodal values.
                let dp = self.dx_col(&col);
                for a in 0..nt {
                    c[k * nt + a] = -dp[a] * self.sin_t[a];
                }
            } else {
                // sin(theta) Q(x) -> x Q - (1 - x^2) Q'.
                for a in 0..nt {
                    col[a] /= self.sin_t[a];
                }
                let dq = self.dx_col(&col);
                for a in 0..nt {
                    let xa = self.x[a];
                    c[k * nt + a] = col[a] * xa - dq[a] * (1.0 - xa * xa);
                }
            }
        }
        Modes { c, dtheta_count: modes.dtheta_count + 1 }
    }

    /// All coordinate partials up to second order in one sweep.
    pub fn partials(&self, values: &[f64]) -> SpherePartials {
        let m = self.analyze(values);
        let mt = self.dtheta(&m);
        let mp = self.dphi(&m, 1);
        let mtt = self.dtheta(&mt);
        let mtp = self.dtheta(&mp);
        let mpp = self.dphi(&m, 2);
        SpherePartials {
            f_t: self.synthesize(&mt),
            f_p: self.synthesize(&mp),
            f_tt: self.synthesize(&mtt),
            f_tp: self.synthesize(&mtp),
            f_pp: self.synthesize(&mpp),
        }
    }

    /// Interpolant for off-grid evaluation.
    pub fn interpolant(&self, modes: &Modes) -> SphereInterpolant {
        let (nt, np) = (self.n_theta, self.n_phi);
        let half = np / 2;
        let mut poly = vec![C64::new(0.0, 0.0); (half + 1) * nt];
        let mut sin_flag = vec![false; half + 1];
        for k in 0..=half {
            let flag = self.sin_type(k, modes.dtheta_count);
            sin_flag[k] = flag;
            for a in 0..nt {
                let v = modes.c[k * nt + a];
                poly[k * nt + a] = if flag { v / self.sin_t[a] } else { v };
            }
        }
        SphereInterpolant { n_theta: nt, n_phi: np, poly, sin_flag }
    }

    /// Evaluate an interpolant on a tensor grid `thetas x (uniform n_phi_out)`.
    ///
    /// Used for dense resampling (polar-body scans); `n_phi_out` must be a
    /// multiple of `n_phi`. Output is theta-major.
    pub fn eval_grid(
        &self,
        itp: &SphereInterpolant,
        thetas: &[f64],
        n_phi_out: usize,
    ) -> Vec<f64> {
        assert!(n_phi_out >= self.n_phi && n_phi_out % 2 == 0);
        let (nt, np) = (self.n_theta, self.n_phi);
        let half = np / 2;
        let mut planner = FftPlanner::new();
        let inv = planner.plan_fft_inverse(n_phi_out);
        let mut out = vec![0.0; thetas.len() * n_phi_out];
        let mut row = vec![C64::new(0.0, 0.0); n_phi_out];
        let scale = 1.0 / np as f64;
        for (ti, &th) in thetas.iter().enumerate() {
            let psi = self.bary.basis_at(th.cos());
            let st = th.sin();
            for v in row.iter_mut() {
                *v = C64::new(0.0, 0.0);
            }
            for k in 0..=half {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..nt {
                    acc += itp.poly[k * nt + a] * psi[a];
                }
                if itp.sin_flag[k] {
                    acc *= st;
                }
                if k == 0 {
                    row[0] = acc;
                } else if k == half {
                    // Split the Nyquist bin evenly over +/- frequencies.
                    row[half] = acc * 0.5;
                    row[n_phi_out - half] = acc.conj() * 0.5;
                } else {
                    row[k] = acc;
                    row[n_phi_out - k] = acc.conj();
                }
            }
            inv.process(&mut row);
            for b in 0..n_phi_out {
                out[ti * n_phi_out + b] = row[b].re * scale;
            }
        }
        out
    }

    pub fn bary(&self) -> &Barycentric {
        &self.bary
    }
}

/// Coordinate partial derivatives of a field at the grid nodes.
pub struct SpherePartials {
    pub f_t: Vec<f64>,
    pub f_p: Vec<f64>,
    pub f_tt: Vec<f64>,
    pub f_tp: Vec<f64>,
    pub f_pp: Vec<f64>,
}

/// Off-grid evaluator for sphere data.
///
/// Stores, per longitudinal bin k <= n_phi/2, the nodal values of the
/// polynomial part in x = cos(theta) plus a flag for the sin(theta)
/// prefactor; evaluation is barycentric in x and a trigonometric sum in
/// phi.
#[derive(Debug, Clone)]
pub struct SphereInterpolant {
    n_theta: usize,
    n_phi: usize,
    poly: Vec<C64>,
    sin_flag: Vec<bool>,
}

impl SphereInterpolant {
    /// Evaluate at colatitude/longitude, given the engine that built this.
    pub fn eval(&self, engine: &SphereEngine, theta: f64, phi: f64) -> f64 {
        let nt = self.n_theta;
        let half = self.n_phi / 2;
        let psi = engine.bary.basis_at(theta.cos());
        let st = theta.sin();
        let mut vals = vec![C64::new(0.0, 0.0); half + 1];
        for k in 0..=half {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..nt {
                acc += self.poly[k * nt + a] * psi[a];
            }
            vals[k] = if self.sin_flag[k] { acc * st } else { acc };
        }
        // f = (1/n_phi) [ v_0 + 2 sum_{k<half} Re(v_k e^{i k phi})
        //                + Re(v_half) cos(half phi) ]
        let mut f = vals[0].re;
        let (cp, sp) = (phi.cos(), phi.sin());
        let (mut ck, mut sk) = (1.0, 0.0);
        for (k, v) in vals.iter().enumerate().skip(1) {
            let (cn, sn) = (ck * cp - sk * sp, sk * cp + ck * sp);
            ck = cn;
            sk = sn;
            if k < half {
                f += 2.0 * (v.re * ck - v.im * sk);
            } else {
                f += v.re * ck;
            }
        }
        f / self.n_phi as f64
    }
}
