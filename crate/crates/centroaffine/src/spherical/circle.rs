//! Fourier spectral machinery on the unit circle.
//!
//! Data lives at the uniform angles theta_i = 2 pi i / m. Differentiation
//! multiplies Fourier coefficients by (i k)^order, with the Nyquist mode
//! zeroed for odd orders (the standard choice: the real interpolant carries
//! cos(m theta / 2), whose derivative vanishes at every node). Off-grid
//! evaluation sums the trigonometric interpolant directly.

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

type C64 = Complex<f64>;

pub struct CircleEngine {
    pub m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CircleEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CircleEngine").field("m", &self.m).finish()
    }
}

impl CircleEngine {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            m,
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
        }
    }

    /// Unnormalized forward transform of real samples.
    pub fn spectrum(&self, values: &[f64]) -> Vec<C64> {
        let mut buf: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Inverse of [`spectrum`]: real samples (imaginary parts discarded).
    pub fn values(&self, mut spectrum: Vec<C64>) -> Vec<f64> {
        self.inv.process(&mut spectrum);
        let scale = 1.0 / self.m as f64;
        spectrum.iter().map(|c| c.re * scale).collect()
    }

    /// Signed wavenumber of FFT bin k.
    fn wavenumber(&self, k: usize) -> i64 {
        if k <= self.m / 2 {
            k as i64
        } else {
            k as i64 - self.m as i64
        }
    }

    /// Spectral derivative of the given order at the nodes.
    pub fn derivative(&self, values: &[f64], order: u32) -> Vec<f64> {
        let mut spec = self.spectrum(values);
        for (k, c) in spec.iter_mut().enumerate() {
            let sk = self.wavenumber(k) as f64;
            if order % 2 == 1 && k == self.m / 2 {
                *c = C64::new(0.0, 0.0);
            } else {
                let factor = C64::new(0.0, sk).powu(order);
                *c *= factor;
            }
        }
        self.values(spec)
    }

    /// Trigonometric interpolant with its first two derivatives.
    pub fn interpolant(&self, values: &[f64]) -> CircleInterpolant {
        let spec = self.spectrum(values);
        let m = self.m;
        let half = m / 2;
        let scale = 1.0 / m as f64;
        let mut a = vec![0.0; half + 1];
        let mut b = vec![0.0; half + 1];
        a[0] = spec[0].re * scale;
        for k in 1..half {
            a[k] = 2.0 * spec[k].re * scale;
            b[k] = -2.0 * spec[k].im * scale;
        }
        a[half] = spec[half].re * scale;
        CircleInterpolant { a, b }
    }

    /// Antiderivative interpolant of the samples: F with F' = f and
    /// F(0) = 0; the mean of f contributes a linear-in-theta term.
    pub fn antiderivative(&self, values: &[f64]) -> CircleAntiderivative {
        let itp = self.interpolant(values);
        let half = itp.a.len() - 1;
        let mean = itp.a[0];
        let mut sa = vec![0.0; half + 1];
        let mut sb = vec![0.0; half + 1];
        // d/dtheta [ (a_k/k) sin k theta - (b_k/k) cos k theta ]
        //        = a_k cos k theta + b_k sin k theta
        for k in 1..=half {
            sa[k] = itp.a[k] / k as f64;
            sb[k] = itp.b[k] / k as f64;
        }
        CircleAntiderivative { mean, sa, sb }
    }
}

/// Real trigonometric interpolant on the circle.
#[derive(Debug, Clone)]
pub struct CircleInterpolant {
    /// Cosine coefficients; a[0] is the mean, a[m/2] the (undoubled) Nyquist.
    a: Vec<f64>,
    /// Sine coefficients; b[0] and b[m/2] are unused (zero).
    b: Vec<f64>,
}

impl CircleInterpolant {
    pub fn eval(&self, theta: f64) -> f64 {
        self.eval012(theta).0
    }

    /// Value, first and second derivative at an arbitrary angle.
    pub fn eval012(&self, theta: f64) -> (f64, f64, f64) {
        let half = self.a.len() - 1;
        let (ct, st) = (theta.cos(), theta.sin());
        // cos/sin of k*theta by rotation recurrence.
        let (mut ck, mut sk) = (1.0, 0.0);
        let mut f = self.a[0];
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for k in 1..=half {
            let (cn, sn) = (ck * ct - sk * st, sk * ct + ck * st);
            ck = cn;
            sk = sn;
            let kf = k as f64;
            f += self.a[k] * ck + self.b[k] * sk;
            d1 += kf * (self.b[k] * ck - self.a[k] * sk);
            d2 -= kf * kf * (self.a[k] * ck + self.b[k] * sk);
        }
        (f, d1, d2)
    }
}

/// Antiderivative of a trigonometric interpolant (see
/// [`CircleEngine::antiderivative`]).
#[derive(Debug, Clone)]
pub struct CircleAntiderivative {
    mean: f64,
    sa: Vec<f64>,
    sb: Vec<f64>,
}

impl CircleAntiderivative {
    /// F(theta) with F(0) = 0; well-defined for theta outside [0, 2 pi)
    /// as the running integral along the parameter.
    pub fn eval(&self, theta: f64) -> f64 {
        let half = self.sa.len() - 1;
        let (ct, st) = (theta.cos(), theta.sin());
        let (mut ck, mut sk) = (1.0, 0.0);
        let mut f = self.mean * theta;
        for k in 1..=half {
            let (cn, sn) = (ck * ct - sk * st, sk * ct + ck * st);
            ck = cn;
            sk = sn;
            // (a_k/k) sin - (b_k/k) cos, anchored so F(0) = 0.
            f += self.sa[k] * sk - self.sb[k] * (ck - 1.0);
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn nodes(m: usize) -> Vec<f64> {
        (0..m).map(|i| TAU * i as f64 / m as f64).collect()
    }

    #[test]
    fn derivative_exact_on_trig_polynomials() {
        let m = 32;
        let th = nodes(m);
        let f: Vec<f64> = th.iter().map(|t| (3.0 * t).cos() + 0.5 * (5.0 * t).sin()).collect();
        let eng = CircleEngine::new(m);
        let d1 = eng.derivative(&f, 1);
        let d2 = eng.derivative(&f, 2);
        for (i, t) in th.iter().enumerate() {
            let e1 = -3.0 * (3.0 * t).sin() + 2.5 * (5.0 * t).cos();
            let e2 = -9.0 * (3.0 * t).cos() - 12.5 * (5.0 * t).sin();
            assert!((d1[i] - e1).abs() < 1e-12, "d1 node {i}");
            assert!((d2[i] - e2).abs() < 1e-11, "d2 node {i}");
        }
    }

    #[test]
    fn interpolant_matches_function_between_nodes() {
        let m = 64;
        let th = nodes(m);
        let f: Vec<f64> = th.iter().map(|t| (2.0 * t).cos() + 0.25 * (7.0 * t).sin()).collect();
        let itp = CircleEngine::new(m).interpolant(&f);
        let t = 0.987654;
        let (v, d1, d2) = itp.eval012(t);
        assert!((v - ((2.0 * t).cos() + 0.25 * (7.0 * t).sin())).abs() < 1e-12);
        assert!((d1 - (-2.0 * (2.0 * t).sin() + 1.75 * (7.0 * t).cos())).abs() < 1e-11);
        assert!((d2 - (-4.0 * (2.0 * t).cos() - 12.25 * (7.0 * t).sin())).abs() < 1e-10);
    }

    #[test]
    fn antiderivative_integrates_trig_polynomials() {
        let m = 32;
        let th = nodes(m);
        // f = 2 + cos(3 t); F = 2 t + sin(3 t)/3
        let f: Vec<f64> = th.iter().map(|t| 2.0 + (3.0 * t).cos()).collect();
        let anti = CircleEngine::new(m).antiderivative(&f);
        for t in [0.0, 0.3, 1.7, PI, 5.9] {
            let exact = 2.0 * t + (3.0 * t).sin() / 3.0;
            assert!((anti.eval(t) - exact).abs() < 1e-12, "t={t}");
        }
    }
}
