//! Gauss–Legendre nodes/weights and barycentric Lagrange machinery.
//!
//! Colatitude grids on the two-sphere place nodes at the Gauss–Legendre
//! points of x = cos(theta), so that integration against sin(theta) dtheta
//! becomes a plain weighted sum that is exact for polynomials in x up to
//! degree 2n - 1. Interpolation and differentiation along colatitude use
//! the barycentric form of the Lagrange interpolant, which is stable at
//! these clustered nodes.

/// Gauss–Legendre nodes (descending in x, so colatitudes come out
/// ascending) and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, z);
        x[i] = z;
        x[n - 1 - i] = -z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        // The middle root of an odd-degree Legendre polynomial is exactly 0.
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Legendre polynomial P_n and its derivative at z, by upward recurrence.
fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

/// Barycentric Lagrange interpolation data for a fixed node set.
#[derive(Debug, Clone)]
pub struct Barycentric {
    pub nodes: Vec<f64>,
    /// Barycentric weights lambda_j, normalized to unit max magnitude.
    pub lambda: Vec<f64>,
}

impl Barycentric {
    pub fn new(nodes: Vec<f64>) -> Self {
        let n = nodes.len();
        let mut lambda = vec![0.0; n];
        for j in 0..n {
            let mut prod = 1.0;
            for k in 0..n {
                if k != j {
                    prod *= nodes[j] - nodes[k];
                }
            }
            lambda[j] = 1.0 / prod;
        }
        let scale = lambda.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for v in &mut lambda {
            *v /= scale;
        }
        Self { nodes, lambda }
    }

    /// First-derivative collocation matrix, row-major n x n.
    ///
    /// Diagonal entries use the negative-sum trick so each row of D
    /// annihilates constants exactly.
    pub fn diff_matrix(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut d = vec![0.0; n * n];
        for j in 0..n {
            let mut diag = 0.0;
            for k in 0..n {
                if k == j {
                    continue;
                }
                let v = (self.lambda[k] / self.lambda[j]) / (self.nodes[j] - self.nodes[k]);
                d[j * n + k] = v;
                diag -= v;
            }
            d[j * n + j] = diag;
        }
        d
    }

    /// Interpolation basis psi_j(x*): f(x*) = sum_j psi_j f(x_j).
    ///
    /// Evaluation exactly at a node returns the Kronecker basis vector, so
    /// nodal values are reproduced bit-for-bit.
    pub fn basis_at(&self, xs: f64) -> Vec<f64> {
        let n = self.nodes.len();
        for (j, &xj) in self.nodes.iter().enumerate() {
            if xs == xj || (xs - xj).abs() < 1e-15 {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                return e;
            }
        }
        let mut num = vec![0.0; n];
        let mut den = 0.0;
        for j in 0..n {
            let t = self.lambda[j] / (xs - self.nodes[j]);
            num[j] = t;
            den += t;
        }
        for v in &mut num {
            *v /= den;
        }
        num
    }
}
