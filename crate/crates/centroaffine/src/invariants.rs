//! Centro-affine invariant functionals: the one-parameter family of
//! p-affine surface areas, weighted (φ) affine surface areas, the
//! second-order functional Ω_{2,p}, volume products, and isoperimetric
//! ratios.
//!
//! Everything is computed through the exponent parameterization
//!
//!   e = p/(n+p),   omega_exponent(K, e) = ∫ 𝒦^e h f dμ,
//!
//! the integral being the cone-measure weighted moment of the
//! centro-affine curvature (h f dμ = h/k dμ is the cone measure pulled to
//! the sphere, total mass n·Vol(K)). The map p ↦ e removes every special
//! case from the integration path: e = 0 gives n·Vol(K), e = 1 gives
//! n·Vol(K°) (the p = ±∞ limit), and indices that are singular in p, such
//! as the first term of Ω_{2,p} at p = n, are regular in e.

use crate::body::{mixed_curvature, ConvexBody};
use crate::error::{Error, Result};
use crate::spherical::ScalarField;
use std::f64::consts::PI;

/// Volume of the unit ball: π in the plane, 4π/3 in space.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => panic!("unsupported dimension {dim}"),
    }
}

/// Extended-real index p of the p-affine surface area family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PValue {
    Finite(f64),
    Infinite,
}

/// A validated index (p, e = p/(n+p)) for dimension n. The excluded
/// values p = 0 and p = −n are rejected at construction, so downstream
/// code never branches on them.
#[derive(Debug, Clone, Copy)]
pub struct PAffineIndex {
    dim: usize,
    p: PValue,
    e: f64,
}

impl PAffineIndex {
    pub fn from_p(dim: usize, p: f64) -> Result<Self> {
        check_dim(dim)?;
        if p.is_nan() {
            return Err(Error::BadIndex("index p is NaN".into()));
        }
        if p.is_infinite() {
            return Ok(Self::infinite(dim));
        }
        let n = dim as f64;
        if p == 0.0 {
            return Err(Error::BadIndex(
                "p = 0 is excluded (the functional degenerates to n·Vol)".into(),
            ));
        }
        if p == -n {
            return Err(Error::BadIndex(format!(
                "p = −{n} is excluded (the affine surface area does not exist there)"
            )));
        }
        Ok(Self {
            dim,
            p: PValue::Finite(p),
            e: p / (n + p),
        })
    }

    /// The p = ±∞ member, exponent e = 1.
    pub fn infinite(dim: usize) -> Self {
        Self {
            dim,
            p: PValue::Infinite,
            e: 1.0,
        }
    }

    /// Build from the exponent e = p/(n+p); e = 1 yields the infinite
    /// index, e = 0 is rejected (it corresponds to p = 0).
    pub fn from_exponent(dim: usize, e: f64) -> Result<Self> {
        check_dim(dim)?;
        if !e.is_finite() {
            return Err(Error::BadIndex("exponent must be finite".into()));
        }
        if e == 1.0 {
            return Ok(Self::infinite(dim));
        }
        if e == 0.0 {
            return Err(Error::BadIndex("exponent 0 corresponds to p = 0".into()));
        }
        let n = dim as f64;
        Ok(Self {
            dim,
            p: PValue::Finite(n * e / (1.0 - e)),
            e,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> PValue {
        self.p
    }

    pub fn finite_p(&self) -> Option<f64> {
        match self.p {
            PValue::Finite(p) => Some(p),
            PValue::Infinite => None,
        }
    }

    /// The exponent e = p/(n+p).
    pub fn exponent(&self) -> f64 {
        self.e
    }

    /// Sign of the flow: +1 in the shrinking regime (e > 0), −1 in the
    /// expanding regime (e < 0).
    pub fn sgn(&self) -> f64 {
        if self.e > 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Index of the dual flow, p° = −np/(n+2p); its exponent is −e, so
    /// dualization is an involution away from p = −n/2.
    pub fn dual(&self) -> Result<Self> {
        let n = self.dim as f64;
        match self.p {
            PValue::Infinite => Self::from_p(self.dim, -n / 2.0),
            PValue::Finite(p) => {
                let pd = dual_p(self.dim, p)?;
                Self::from_p(self.dim, pd)
            }
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::Config(format!("unsupported dimension {dim}")))
    }
}

/// Index exchanged by polarity at fixed functional: q ↦ n²/q.
pub fn dual_index(dim: usize, q: f64) -> Result<f64> {
    check_dim(dim)?;
    if q == 0.0 || !q.is_finite() {
        return Err(Error::BadIndex("dual index requires finite q ≠ 0".into()));
    }
    Ok((dim * dim) as f64 / q)
}

/// Index of the dual flow: p ↦ −np/(n+2p), an involution with a pole at
/// p = −n/2.
pub fn dual_p(dim: usize, p: f64) -> Result<f64> {
    check_dim(dim)?;
    if !p.is_finite() {
        return Err(Error::BadIndex("dual flow index requires finite p".into()));
    }
    let n = dim as f64;
    if (n + 2.0 * p).abs() < 1e-300 {
        return Err(Error::BadIndex(format!(
            "p = −{}/2 has no dual flow index (pole of −np/(n+2p))",
            dim
        )));
    }
    Ok(-n * p / (n + 2.0 * p))
}

/// Weight function φ(s) = scale · s^α for the weighted affine surface
/// area and the φ-flow.
#[derive(Debug, Clone, Copy)]
pub struct PhiSpec {
    alpha: f64,
    scale: f64,
}

impl PhiSpec {
    pub fn new(alpha: f64, scale: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Config(format!(
                "phi exponent must be positive and finite, got {alpha}"
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Config(format!(
                "phi scale must be positive and finite, got {scale}"
            )));
        }
        Ok(Self { alpha, scale })
    }

    /// φ(s) = s^α.
    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.scale * s.powf(self.alpha)
    }

    /// Whether φ lies in the concave admissible class with
    /// φ(0+) = 0 and φ(t)/t → 0 at ∞; for powers this is 0 < α < 1.
    pub fn lr_admissible(&self) -> bool {
        self.alpha < 1.0
    }
}

fn cone_moment(body: &ConvexBody, weight: impl Fn(f64) -> f64) -> f64 {
    let h = body.support().values();
    let f = body.curvature_function().values();
    let k = body.centro_affine_curvature().values();
    let w = body.grid().weights();
    let mut acc = 0.0;
    for i in 0..h.len() {
        acc += weight(k[i]) * h[i] * f[i] * w[i];
    }
    acc
}

/// ∫ 𝒦^e h f dμ: the exponent-parameterized family containing every
/// p-affine surface area. e = 0 is n·Vol(K); e = 1 is n·Vol(K°).
pub fn omega_exponent(body: &ConvexBody, e: f64) -> f64 {
    cone_moment(body, |k| k.powf(e))
}

/// The p-affine surface area Ω_p (always positive).
pub fn omega_p(body: &ConvexBody, index: &PAffineIndex) -> f64 {
    assert_eq!(body.dim(), index.dim(), "index dimension mismatch");
    omega_exponent(body, index.exponent())
}

/// The signed first-variation form sgn(e)·Ω_p: the rate −dVol/dt of the
/// p-flow at t = 0.
pub fn omega_1p(body: &ConvexBody, index: &PAffineIndex) -> f64 {
    index.sgn() * omega_p(body, index)
}

/// Weighted affine surface area Ω_φ = ∫ φ(𝒦) h f dμ.
pub fn omega_phi(body: &ConvexBody, phi: &PhiSpec) -> f64 {
    cone_moment(body, |k| phi.eval(k))
}

/// Second-order functional Ω_{2,p}: the negated second time derivative of
/// volume along the p-flow, in closed form
///
///   Ω_{2,p} = (n(p−1)/(n+p)) · omega_exponent(2e)
///           − (n(n−1)/(n+p)) · ∫ g · s(g, h, …, h) dμ,   g = h 𝒦^e,
///
/// where s is the mixed curvature function and the second integral runs
/// against the plain sphere measure. On centered ellipsoids this equals
/// ((p−n)/(n+p)) Ω_p²/Vol, the equality case of the second-order
/// isoperimetric inequality.
pub fn omega_2p(body: &ConvexBody, index: &PAffineIndex) -> Result<f64> {
    assert_eq!(body.dim(), index.dim(), "index dimension mismatch");
    let p = index.finite_p().ok_or_else(|| {
        Error::BadIndex("the second-order functional requires a finite index p".into())
    })?;
    let n = body.dim() as f64;
    let e = index.exponent();
    let coef1 = n * (p - 1.0) / (n + p);
    let coef2 = n * (n - 1.0) / (n + p);
    let term1 = coef1 * omega_exponent(body, 2.0 * e);

    let h = body.support();
    let grid = body.grid().clone();
    let g_vals: Vec<f64> = h
        .values()
        .iter()
        .zip(body.centro_affine_curvature().values())
        .map(|(&hv, &kv)| hv * kv.powf(e))
        .collect();
    let g = ScalarField::new(grid, g_vals)?;
    let s = if body.dim() == 2 {
        mixed_curvature(&[&g])?
    } else {
        mixed_curvature(&[&g, h])?
    };
    let term2 = coef2 * g.zip_with(&s, |a, b| a * b)?.integrate();
    Ok(term1 - term2)
}

/// Vol(K) · Vol(K°), computed from the support field alone.
pub fn volume_product(body: &ConvexBody) -> f64 {
    body.volume() * body.polar_volume()
}

/// The scale-free isoperimetric ratio Ω_p^{n+p} / (n^{n+p} ω_n^{2p}
/// Vol^{n−p}) ∈ (0, 1], equal to 1 exactly on centered ellipsoids.
/// Defined for finite p ≥ 1.
pub fn isoperimetric_ratio(body: &ConvexBody, index: &PAffineIndex) -> Result<f64> {
    let p = index.finite_p().ok_or_else(|| {
        Error::BadIndex("isoperimetric ratio requires a finite index p".into())
    })?;
    if p < 1.0 {
        return Err(Error::BadIndex(format!(
            "isoperimetric ratio is stated for p ≥ 1, got {p}"
        )));
    }
    let n = body.dim() as f64;
    let omega = omega_p(body, index);
    let wn = unit_ball_volume(body.dim());
    let vol = body.volume();
    Ok(omega.powf(n + p) / (n.powf(n + p) * wn.powf(2.0 * p) * vol.powf(n - p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::ellipsoid_support;
    use crate::spherical::SphereGrid;

    fn ellipse(m: usize, a: f64, b: f64) -> ConvexBody {
        let g = SphereGrid::circle(m).unwrap();
        ConvexBody::from_support(ellipsoid_support(g, &[a, b]).unwrap()).unwrap()
    }

    fn ellipsoid(nt: usize, np: usize, a: f64, b: f64, c: f64) -> ConvexBody {
        let g = SphereGrid::sphere(nt, np).unwrap();
        ConvexBody::from_support(ellipsoid_support(g, &[a, b, c]).unwrap()).unwrap()
    }

    fn perturbed_disk(m: usize) -> ConvexBody {
        let g = SphereGrid::circle(m).unwrap();
        let h = ScalarField::from_fn(g, |u| {
            let t = u[1].atan2(u[0]);
            1.0 + 0.05 * (3.0 * t).cos() + 0.02 * (4.0 * t).sin()
        })
        .unwrap();
        ConvexBody::from_support(h).unwrap()
    }

    #[test]
    fn index_construction_rules() {
        assert!(PAffineIndex::from_p(2, 0.0).is_err());
        assert!(PAffineIndex::from_p(2, -2.0).is_err());
        assert!(PAffineIndex::from_p(3, -3.0).is_err());
        let inf = PAffineIndex::from_p(2, f64::INFINITY).unwrap();
        assert_eq!(inf.exponent(), 1.0);
        assert!(inf.finite_p().is_none());
        let p1 = PAffineIndex::from_p(2, 1.0).unwrap();
        assert!((p1.exponent() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(p1.sgn(), 1.0);
        let pneg = PAffineIndex::from_p(2, -1.0).unwrap();
        assert_eq!(pneg.exponent(), -1.0);
        assert_eq!(pneg.sgn(), -1.0);
        let from_e = PAffineIndex::from_exponent(2, 1.0 / 3.0).unwrap();
        assert!((from_e.finite_p().unwrap() - 1.0).abs() < 1e-14);
        assert!(PAffineIndex::from_exponent(2, 0.0).is_err());
    }

    #[test]
    fn dual_maps() {
        assert!((dual_index(2, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((dual_index(3, 3.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((dual_index(2, 1.0).unwrap() - 4.0).abs() < 1e-15);
        assert!(dual_index(2, 0.0).is_err());

        assert!((dual_p(2, 1.0).unwrap() + 0.5).abs() < 1e-15);
        for p in [1.0, 2.0, 5.0, -0.7, 7.3] {
            let pd = dual_p(2, p).unwrap();
            assert!((dual_p(2, pd).unwrap() - p).abs() < 1e-12);
        }
        assert!(dual_p(2, -1.0).is_err());
        assert!(dual_p(3, -1.5).is_err());

        let idx = PAffineIndex::from_p(2, 1.0).unwrap();
        let dual = idx.dual().unwrap();
        assert!((dual.finite_p().unwrap() + 0.5).abs() < 1e-15);
        assert!((dual.exponent() + idx.exponent()).abs() < 1e-15);
        let inf_dual = PAffineIndex::infinite(2).dual().unwrap();
        assert!((inf_dual.finite_p().unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn unit_ball_values() {
        let g = SphereGrid::circle(64).unwrap();
        let b = ConvexBody::from_support(ScalarField::constant(g, 1.0).unwrap()).unwrap();
        for p in [1.0, 2.0, -0.5, 17.0] {
            let idx = PAffineIndex::from_p(2, p).unwrap();
            assert!((omega_p(&b, &idx) - 2.0 * PI).abs() < 1e-12);
        }
        assert!((omega_p(&b, &PAffineIndex::infinite(2)) - 2.0 * PI).abs() < 1e-12);
        assert!((omega_exponent(&b, 0.5) - 2.0 * PI).abs() < 1e-12);

        let b3 = ellipsoid(8, 16, 1.0, 1.0, 1.0);
        let idx = PAffineIndex::from_p(3, 1.0).unwrap();
        assert!((omega_p(&b3, &idx) - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn ellipse_power_law() {
        for (a, b) in [(2.0, 1.0), (3.0, 1.0 / 3.0)] {
            let body = ellipse(256, a, b);
            for p in [1.0, 2.0, 5.0, -0.5] {
                let idx = PAffineIndex::from_p(2, p).unwrap();
                let expect = 2.0 * PI * (a * b).powf((2.0 - p) / (2.0 + p));
                let got = omega_p(&body, &idx);
                assert!(
                    (got - expect).abs() < 1e-6 * expect.abs(),
                    "(a,b)=({a},{b}) p={p}: {got} vs {expect}"
                );
            }
            // p = n makes the exponent vanish: the value is n ω_n for
            // every centered ellipse.
            let idx = PAffineIndex::from_p(2, 2.0).unwrap();
            assert!((omega_p(&body, &idx) - 2.0 * PI).abs() < 1e-8);
        }
    }

    #[test]
    fn ellipsoid_power_law() {
        let body = ellipsoid(24, 48, 2.0, 1.0, 1.0);
        let prod: f64 = 2.0;
        for p in [1.0, 2.0, 5.0, -0.5] {
            let idx = PAffineIndex::from_p(3, p).unwrap();
            let expect = 4.0 * PI * prod.powf((3.0 - p) / (3.0 + p));
            let got = omega_p(&body, &idx);
            assert!(
                (got - expect).abs() < 1e-4 * expect.abs(),
                "p={p}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn exponent_endpoints_match_volumes() {
        let body = perturbed_disk(128);
        assert!(
            (omega_exponent(&body, 0.0) - 2.0 * body.volume()).abs()
                < 1e-12 * body.volume()
        );
        assert!(
            (omega_exponent(&body, 1.0) - 2.0 * body.polar_volume()).abs()
                < 1e-12 * body.polar_volume()
        );
    }

    #[test]
    fn phi_weight_reduces_to_power_family() {
        let body = ellipse(128, 2.0, 1.0);
        let phi = PhiSpec::power(0.25).unwrap();
        let got = omega_phi(&body, &phi);
        let expect = 2.0 * PI * 2.0_f64.sqrt();
        assert!((got - expect).abs() < 1e-8 * expect);

        let idx = PAffineIndex::from_p(2, 1.0).unwrap();
        let phi_match = PhiSpec::power(idx.exponent()).unwrap();
        assert!((omega_phi(&body, &phi_match) - omega_p(&body, &idx)).abs() < 1e-12);

        assert!(PhiSpec::power(0.5).unwrap().lr_admissible());
        assert!(!PhiSpec::power(1.5).unwrap().lr_admissible());
        assert!(PhiSpec::new(0.5, -1.0).is_err());
        assert!(PhiSpec::power(0.0).is_err());
    }

    #[test]
    fn second_order_matches_ellipse_identity() {
        // On centered ellipses Ω_{2,p} = ((p−n)/(n+p)) Ω_p² / Vol.
        let body = ellipse(256, 2.0, 1.0);
        for p in [1.0, 2.0, -0.9, 3.0] {
            let idx = PAffineIndex::from_p(2, p).unwrap();
            let expect = (p - 2.0) / (2.0 + p) * omega_p(&body, &idx).powi(2) / body.volume();
            let got = omega_2p(&body, &idx).unwrap();
            assert!(
                (got - expect).abs() < 1e-8 * expect.abs().max(1.0),
                "p={p}: {got} vs {expect}"
            );
        }
        // Unit disk at p = 1: (−1/3)(2π)²/π = −4π/3.
        let g = SphereGrid::circle(64).unwrap();
        let disk = ConvexBody::from_support(ScalarField::constant(g, 1.0).unwrap()).unwrap();
        let idx = PAffineIndex::from_p(2, 1.0).unwrap();
        let got = omega_2p(&disk, &idx).unwrap();
        assert!((got + 4.0 * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn second_order_matches_ellipsoid_identity() {
        let body = ellipsoid(24, 48, 2.0, 1.0, 1.0);
        for p in [1.0, 2.0] {
            let idx = PAffineIndex::from_p(3, p).unwrap();
            let expect = (p - 3.0) / (3.0 + p) * omega_p(&body, &idx).powi(2) / body.volume();
            let got = omega_2p(&body, &idx).unwrap();
            assert!(
                (got - expect).abs() < 1e-4 * expect.abs(),
                "p={p}: {got} vs {expect}"
            );
        }
        // Unit ball at p = 1: (−1/2)(4π)²/(4π/3) = −6π.
        let ball = ellipsoid(8, 16, 1.0, 1.0, 1.0);
        let idx = PAffineIndex::from_p(3, 1.0).unwrap();
        let got = omega_2p(&ball, &idx).unwrap();
        assert!((got + 6.0 * PI).abs() < 1e-8);
        // The infinite index has no closed form here.
        assert!(omega_2p(&ball, &PAffineIndex::infinite(3)).is_err());
    }

    #[test]
    fn volume_product_of_centered_ellipses() {
        for (a, b) in [(2.0, 1.0), (3.0, 1.0 / 3.0)] {
            let body = ellipse(256, a, b);
            let vp = volume_product(&body);
            assert!((vp - PI * PI).abs() < 1e-8 * PI * PI, "(a,b)=({a},{b}): {vp}");
        }
    }

    #[test]
    fn isoperimetric_ratio_peaks_on_ellipsoids() {
        let body = ellipse(256, 2.0, 1.0);
        let idx = PAffineIndex::from_p(2, 1.0).unwrap();
        let r = isoperimetric_ratio(&body, &idx).unwrap();
        assert!((r - 1.0).abs() < 1e-8, "{r}");

        let ball = ellipsoid(8, 16, 1.0, 1.0, 1.0);
        let idx3 = PAffineIndex::from_p(3, 2.0).unwrap();
        let r3 = isoperimetric_ratio(&ball, &idx3).unwrap();
        assert!((r3 - 1.0).abs() < 1e-10, "{r3}");

        let bumpy = perturbed_disk(256);
        let rb = isoperimetric_ratio(&bumpy, &idx).unwrap();
        assert!(rb > 0.0 && rb < 1.0, "{rb}");

        let low = PAffineIndex::from_p(2, 0.5).unwrap();
        assert!(isoperimetric_ratio(&bumpy, &low).is_err());
    }

    #[test]
    fn duality_exchanges_exponents() {
        // omega_exponent(K, e) = omega_exponent(K°, 1−e).
        let body = ellipse(128, 2.0, 1.0);
        let polar = body.polar_body().unwrap();
        for e in [1.0 / 3.0, 0.5, 0.25, -0.4] {
            let lhs = omega_exponent(&body, e);
            let rhs = omega_exponent(&polar, 1.0 - e);
            assert!((lhs - rhs).abs() < 1e-6 * lhs.abs(), "e={e}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn log_convex_in_exponent() {
        // Hölder: Ω_{e}² ≤ Ω_{e−d} Ω_{e+d} for non-constant 𝒦, checked at
        // e ∈ {0, 1/2, 1}.
        let body = perturbed_disk(128);
        let o0 = omega_exponent(&body, 0.0);
        let oh = omega_exponent(&body, 0.5);
        let o1 = omega_exponent(&body, 1.0);
        assert!(oh * oh <= o0 * o1 * (1.0 + 1e-10));
        // Strict on a genuinely non-spherical body.
        assert!(oh * oh < o0 * o1);
    }

    proptest::proptest! {
        /// p ↦ e = p/(n+p) ↦ n·e/(1−e) recovers p for every admissible
        /// finite index; the map is well conditioned away from p = −n.
        #[test]
        fn exponent_round_trip_recovers_p(dim in 2usize..=3, p in -50.0f64..50.0) {
            let n = dim as f64;
            proptest::prop_assume!(p.abs() > 1e-3 && (p + n).abs() > 1e-2);
            let idx = PAffineIndex::from_p(dim, p).unwrap();
            let back = PAffineIndex::from_exponent(dim, idx.exponent()).unwrap();
            let q = back.finite_p().unwrap();
            proptest::prop_assert!((q - p).abs() <= 1e-9 * p.abs());
        }

        /// The dual-flow pairing p ↦ −np/(n+2p) is an involution away from
        /// its pole at p = −n/2 (the partner never lands on the pole: its
        /// distance to −n/2 is n²/|2(n+2p)|).
        #[test]
        fn dual_flow_index_is_an_involution(dim in 2usize..=3, p in -50.0f64..50.0) {
            let n = dim as f64;
            proptest::prop_assume!(p.abs() > 1e-3 && (2.0 * p + n).abs() > 1e-2);
            let q = dual_p(dim, p).unwrap();
            let back = dual_p(dim, q).unwrap();
            proptest::prop_assert!((back - p).abs() <= 1e-9 * p.abs().max(1.0));
        }
    }
}
