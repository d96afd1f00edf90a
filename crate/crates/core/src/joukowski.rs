//! Outer ellipse `E_t` and the Joukowski map
//! `φ_t(w) = (t² w + 1/w)/(1 + t²)`, which sends the unit disk onto the
//! exterior of `E_t` (semi-axes `1` and `(1 − t²)/(1 + t²)`).

use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::conic::{complex_quadratic_roots, ConicGeneral, EllipseStandard};
use crate::error::{Error, Result};
use crate::mapped::{exterior_intersection_disk, BlaschkeLike, BoundaryMap, BOUNDARY_TOL};
use crate::verify;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct JoukowskiParam(f64);

impl TryFrom<f64> for JoukowskiParam {
    type Error = Error;
    fn try_from(t: f64) -> Result<Self> {
        JoukowskiParam::new(t)
    }
}

impl From<JoukowskiParam> for f64 {
    fn from(p: JoukowskiParam) -> f64 {
        p.0
    }
}

impl JoukowskiParam {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidParameter(format!("t must lie in (0, 1), got {t}")));
        }
        Ok(JoukowskiParam(t))
    }

    pub fn t(self) -> f64 {
        self.0
    }

    /// Ratio of the minor to the major semi-axis of `E_t`.
    pub fn axis_ratio(self) -> f64 {
        let t2 = self.0 * self.0;
        (1.0 - t2) / (1.0 + t2)
    }

    /// `φ_t(w)`; `w = 0` maps to infinity and is rejected.
    pub fn phi_forward(self, w: C64) -> Result<C64> {
        if w.norm() == 0.0 {
            return Err(Error::ZeroInput);
        }
        let t2 = self.0 * self.0;
        Ok((t2 * w + w.inv()) / (1.0 + t2))
    }

    /// `φ_t` on the unit circle: `(t² w + w̄)/(1 + t²)`.
    pub fn phi_boundary(self, w: C64) -> C64 {
        let t2 = self.0 * self.0;
        (t2 * w + w.conj()) / (1.0 + t2)
    }

    /// Real-affine inverse of [`JoukowskiParam::phi_boundary`]: `(z̄ − t² z)/(1 − t²)`.
    pub fn boundary_inverse(self, z: C64) -> C64 {
        let t2 = self.0 * self.0;
        (z.conj() - t2 * z) / (1.0 - t2)
    }

    /// Branch of `φ_t⁻¹(z)` in the closed unit disk.
    pub fn phi_inverse(self, z: C64) -> Result<C64> {
        if self.ellipse().evaluate(z).abs() <= BOUNDARY_TOL * (1.0 + z.norm_sqr()) {
            return Ok(self.boundary_inverse(z));
        }
        let t2 = self.0 * self.0;
        let (w1, w2) = complex_quadratic_roots(C64::from(t2), -(1.0 + t2) * z, C64::from(1.0));
        // w₁ w₂ = 1/t² > 1, so at most one root lies in the disk.
        let w = if w1.norm() <= w2.norm() { w1 } else { w2 };
        if w.norm() >= 1.0 {
            return Err(Error::InsideEllipse);
        }
        Ok(w)
    }

    /// `t² z² − (1 + t⁴) z z̄ + t² z̄² + (1 − t²)² = 0`.
    pub fn ellipse(self) -> ConicGeneral {
        let t2 = self.0 * self.0;
        ConicGeneral {
            u: C64::from(t2),
            p: -(1.0 + t2 * t2),
            v: C64::from(0.0),
            q: (1.0 - t2).powi(2),
        }
    }

    /// Foci `±2t/(1 + t²)`, focal sum `2`.
    pub fn ellipse_standard(self) -> EllipseStandard {
        let f = 2.0 * self.0 / (1.0 + self.0 * self.0);
        EllipseStandard { f1: C64::from(f), f2: C64::from(-f), r: 2.0 }
    }

    /// Meeting point of the `E_t` tangents at `φ_t(ω₁)` and `φ_t(ω₂)`.
    pub fn exterior_intersection(self, w1: C64, w2: C64) -> Result<C64> {
        let w0 = exterior_intersection_disk(w1, w2)?;
        let t2 = self.0 * self.0;
        Ok((t2 * w0 + w0.conj()) / (1.0 + t2))
    }
}

impl BoundaryMap for JoukowskiParam {
    fn forward(&self, w: C64) -> Result<C64> {
        self.phi_forward(w)
    }
    fn inverse(&self, z: C64) -> Result<C64> {
        self.phi_inverse(z)
    }
    fn boundary_forward(&self, w: C64) -> Result<C64> {
        Ok(self.phi_boundary(w))
    }
    fn boundary_inverse(&self, z: C64) -> Result<C64> {
        Ok(JoukowskiParam::boundary_inverse(*self, z))
    }
    fn boundary_conic(&self) -> ConicGeneral {
        self.ellipse()
    }
    fn tangent_intersection(&self, w1: C64, w2: C64) -> Result<C64> {
        self.exterior_intersection(w1, w2)
    }
}

/// `φ_t ∘ B ∘ φ_t⁻¹` on the exterior of `E_t`.
pub type EllipticBlaschkeLike = BlaschkeLike<JoukowskiParam>;

/// Envelope of the boundary chords for zeros `{0, a, b}`.
pub fn interior_curve_elliptic(a: C64, b: C64, t: JoukowskiParam) -> ConicGeneral {
    let t = t.t();
    let t2 = t * t;
    let t4 = t2 * t2;
    let (ac, bc) = (a.conj(), b.conj());
    let ab2 = (a * b).norm_sqr();
    let s2 = (a + b).norm_sqr();
    let k = 2.0 * ab2 - s2 + 2.0;
    let dm = a - b;
    let u = dm * dm * t4 + 2.0 * k * t2 + (ac - bc) * (ac - bc);
    let p = -2.0 * (k * (t4 + 1.0) + (dm * dm + (ac - bc) * (ac - bc)).re * t2);
    let v = -2.0
        * (1.0 - t2)
        * (((ab2 + 1.0) * (a + b) - (a * a + b * b) * (ac + bc)) * t2 + (a + b) * (ac * ac + bc * bc)
            - (ab2 + 1.0) * (ac + bc));
    let q = (1.0 - t2).powi(2) * ((ab2 - s2 - 1.0).powi(2) - 4.0 * s2);
    ConicGeneral { u, p, v, q }
}

/// Closed form of `P² − 4|U|²` for [`interior_curve_elliptic`].
pub fn interior_discriminant_closed_form(a: C64, b: C64, t: JoukowskiParam) -> f64 {
    let t4 = t.t().powi(4);
    16.0 * (1.0 - a.norm_sqr()) * (1.0 - b.norm_sqr()) * (C64::from(1.0) - a * b.conj()).norm_sqr() * (t4 - 1.0).powi(2)
}

/// Foci of [`interior_curve_elliptic`] from the focal quadratic.
pub fn interior_foci(a: C64, b: C64, t: JoukowskiParam) -> (C64, C64) {
    let t2 = t.t() * t.t();
    let (ac, bc) = (a.conj(), b.conj());
    let qa = C64::from((t2 + 1.0).powi(2));
    let qb = -(t2 + 1.0) * ((a + b) * t2 + ac + bc);
    let qc = (ac + t2 * a) * (bc + t2 * b) - t2 * (1.0 - a.norm_sqr()) * (1.0 - b.norm_sqr());
    complex_quadratic_roots(qa, qb, qc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorRadius {
    pub f1: C64,
    pub f2: C64,
    pub r: f64,
    /// Set when the foci coincide and the circle formula was used.
    pub circle_fallback: bool,
}

impl InteriorRadius {
    pub fn ellipse(&self) -> EllipseStandard {
        EllipseStandard { f1: self.f1, f2: self.f2, r: self.r }
    }
}

/// Foci and focal sum of the interior ellipse.
pub fn interior_r(a: C64, b: C64, t: JoukowskiParam) -> Result<InteriorRadius> {
    let conic = interior_curve_elliptic(a, b, t);
    let (f1, f2) = interior_foci(a, b, t);
    let gap = (f1 - f2).norm();
    if gap <= 1e-12 || conic.u.norm() <= 1e-14 * conic.scale() {
        let e = conic.to_standard()?;
        let f = e.center();
        let r = e.r;
        return Ok(InteriorRadius { f1: f, f2: f, r, circle_fallback: true });
    }
    let r = 0.5 * gap * (2.0 + (conic.p / conic.u.norm()).abs()).sqrt();
    Ok(InteriorRadius { f1, f2, r, circle_fallback: false })
}

/// Coefficients `(A, B, C)` of the quadratic `A x² + B x + C` in `x = r²`
/// whose roots are the focal sums of 3-inscribed ellipses with foci `f₁, f₂`.
pub fn cayley_quadratic(f1: C64, f2: C64, t: JoukowskiParam) -> (f64, f64, f64) {
    let t2 = t.t() * t.t();
    let t4 = t2 * t2;
    let one = C64::from(1.0);
    let a = t4;
    let b = (1.0 + t4) * t2 * (2.0 * (f1 * f2).re + 2.0) - 2.0 * (f1.norm_sqr() + f2.norm_sqr()) * t4 - (1.0 + t4).powi(2);
    let inner = (f1.conj() * f2 - one) * t4 - (f2 * f2 + f1.conj() * f1.conj() - 2.0) * t2 + f1.conj() * f2 - one;
    (a, b, inner.norm_sqr())
}

/// The two roots `r` (as `+√(r²)`) of [`cayley_quadratic`], smaller first.
pub fn cayley_r(f1: C64, f2: C64, t: JoukowskiParam) -> Result<(f64, f64)> {
    let (a, b, c) = cayley_quadratic(f1, f2, t);
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-12 * b * b {
        return Err(Error::ComplexRoots);
    }
    let sq = disc.max(0.0).sqrt();
    let qq = -0.5 * (b + b.signum() * sq);
    let (x1, x2) = (qq / a, c / qq);
    if x1 <= 0.0 || x2 <= 0.0 {
        return Err(Error::ComplexRoots);
    }
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    Ok((lo.sqrt(), hi.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusCandidate {
    pub r: f64,
    /// Worst triangle-closure distance over the starts, `None` when the
    /// candidate is not an ellipse nested inside `E_t`.
    pub closure: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CayleySelection {
    pub accepted: RadiusCandidate,
    pub rejected: RadiusCandidate,
}

/// Picks the root of [`cayley_r`] whose ellipse closes Poncelet triangles
/// inside `E_t`, starting from `starts` boundary parameters.
pub fn select_inscribed_r(f1: C64, f2: C64, t: JoukowskiParam, starts: &[f64]) -> Result<CayleySelection> {
    let (r_small, r_large) = cayley_r(f1, f2, t)?;
    let outer = t.ellipse();
    let probe = |r: f64| -> RadiusCandidate {
        let closure = EllipseStandard::new(f1, f2, r).ok().and_then(|e| {
            let inner = e.to_general();
            let mut worst = 0.0f64;
            for &theta in starts {
                let z0 = t.phi_boundary(C64::from_polar(1.0, theta));
                worst = worst.max(verify::poncelet_closure(&outer, &inner, z0, 3).ok()?);
            }
            Some(worst)
        });
        RadiusCandidate { r, closure }
    };
    let (s, l) = (probe(r_small), probe(r_large));
    let better_small = match (s.closure, l.closure) {
        (Some(a), Some(b)) => a <= b,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => return Err(Error::NoTangent),
    };
    Ok(if better_small {
        CayleySelection { accepted: s, rejected: l }
    } else {
        CayleySelection { accepted: l, rejected: s }
    })
}

/// Locus of vertex centroids: a point, or an ellipse similar to `E_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CentroidLocus {
    Point { z: C64 },
    Ellipse { ellipse: EllipseStandard },
}

impl CentroidLocus {
    /// Distance-like residual of `z` against the locus.
    pub fn residual(&self, z: C64) -> f64 {
        match self {
            CentroidLocus::Point { z: c } => (z - c).norm(),
            CentroidLocus::Ellipse { ellipse } => ellipse.residual(z).abs(),
        }
    }
}

/// Image of the disk centroid circle under `X + iY ↦ X + i s Y` with
/// `s = (t² − 1)/(1 + t²)`.
pub fn centroid_locus_elliptic(b: &BlaschkeProduct, t: JoukowskiParam) -> CentroidLocus {
    let circle = b.centroid_circle();
    let s = -t.axis_ratio();
    let c = C64::new(circle.center.re, s * circle.center.im);
    if circle.is_point() {
        return CentroidLocus::Point { z: c };
    }
    let rho = circle.radius;
    let f = rho * (1.0 - s * s).sqrt();
    CentroidLocus::Ellipse {
        ellipse: EllipseStandard { f1: c + f, f2: c - f, r: 2.0 * rho },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::unit_circle_grid;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn jp(t: f64) -> JoukowskiParam {
        JoukowskiParam::new(t).unwrap()
    }

    fn reference() -> (C64, C64, JoukowskiParam) {
        (c(0.2, 0.17), c(-0.42, -0.17), jp(0.5))
    }

    fn random_in_disk(rng: &mut ChaCha8Rng, rmax: f64) -> C64 {
        C64::from_polar(rmax * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU))
    }

    #[test]
    fn param_validation() {
        assert!(JoukowskiParam::new(0.0).is_err());
        assert!(JoukowskiParam::new(1.0).is_err());
        assert!(JoukowskiParam::new(f64::NAN).is_err());
        assert_eq!(serde_json::to_string(&jp(0.5)).unwrap(), "0.5");
        assert!(serde_json::from_str::<JoukowskiParam>("1.5").is_err());
    }

    #[test]
    fn phi_forward_examples() {
        let t = jp(0.5);
        assert!((t.phi_forward(c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((t.phi_forward(c(0.0, 1.0)).unwrap() - c(0.0, -0.6)).norm() < 1e-15);
        assert!((t.phi_forward(c(-1.0, 0.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(t.phi_forward(c(0.0, 0.0)), Err(Error::ZeroInput));
    }

    #[test]
    fn phi_inverse_examples() {
        let t = jp(0.5);
        assert!((t.phi_inverse(c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(t.phi_inverse(c(0.0, 0.0)), Err(Error::InsideEllipse));
        let z = t.phi_boundary(C64::from_polar(1.0, 2.0));
        let w = t.phi_inverse(z).unwrap();
        assert!((w - JoukowskiParam::boundary_inverse(t, z)).norm() < 1e-15);
        assert!((w.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ellipse_et_examples() {
        let t = jp(0.5);
        let e = t.ellipse().to_standard().unwrap();
        assert!(e.approx_eq(&EllipseStandard { f1: c(0.8, 0.0), f2: c(-0.8, 0.0), r: 2.0 }, 1e-12));
        for k in 1..20 {
            let t = jp(k as f64 / 20.0);
            assert!(t.ellipse().evaluate(c(1.0, 0.0)).abs() < 1e-15);
            assert!(t.ellipse().to_standard().unwrap().approx_eq(&t.ellipse_standard(), 1e-12));
        }
    }

    #[test]
    fn blaschke_like_apply_examples() {
        let t = jp(0.5);
        let m = EllipticBlaschkeLike::new(BlaschkeProduct::monomial(3).unwrap(), t);
        assert!((m.apply(c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let (a, b, _) = reference();
        let m = EllipticBlaschkeLike::new(BlaschkeProduct::new(vec![a, b]).unwrap(), t);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let z = t.phi_boundary(C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)));
            let image = m.apply(z).unwrap();
            assert!(t.ellipse().evaluate(image).abs() < 1e-10);
            let w0 = random_in_disk(&mut rng, 0.95);
            let bw = m.blaschke.evaluate(w0).unwrap();
            if bw.norm() < 1e-6 {
                continue;
            }
            let lhs = m.apply(t.phi_forward(w0).unwrap()).unwrap();
            let rhs = t.phi_forward(bw).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn preimages_on_et_examples() {
        let t = jp(0.5);
        let m = EllipticBlaschkeLike::new(BlaschkeProduct::monomial(3).unwrap(), t);
        let z = m.preimages_on_boundary(c(1.0, 0.0)).unwrap();
        let expected = [0.0, 1.0, 2.0].map(|k| {
            let w = C64::from_polar(1.0, k * std::f64::consts::TAU / 3.0);
            c(w.re, -0.6 * w.im)
        });
        for (a, b) in z.iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(matches!(m.preimages_on_boundary(c(0.0, 0.0)), Err(Error::NotOnBoundary(_))));

        let (a, b, t) = reference();
        let m = EllipticBlaschkeLike::new(BlaschkeProduct::new(vec![a, b]).unwrap(), t);
        for l in unit_circle_grid(36) {
            let lt = t.phi_boundary(l);
            let zs = m.preimages_on_boundary(lt).unwrap();
            let ws: Vec<C64> = zs.iter().map(|&z| t.phi_inverse(z).unwrap()).collect();
            let sum: C64 = ws.iter().sum();
            let prod: C64 = ws.iter().product();
            assert!((sum - (a + b + l * (a.conj() * b.conj()))).norm() < 1e-9);
            assert!((prod - l).norm() < 1e-9);
            for z in zs {
                assert!(t.ellipse().evaluate(z).abs() < 1e-10);
                assert!((m.apply(z).unwrap() - lt).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn reference_chords_are_tangent() {
        let (a, b, t) = reference();
        let m = EllipticBlaschkeLike::new(BlaschkeProduct::new(vec![a, b]).unwrap(), t);
        let conic = interior_curve_elliptic(a, b, t);
        assert_eq!(conic.classify(), crate::conic::ConicClass::Ellipse);
        let worst = m.max_chord_tangency(&conic, 360, Exec::Sequential).unwrap();
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn interior_curve_at_origin_is_half_scaled_et() {
        for k in 1..10 {
            let t = jp(k as f64 / 10.0);
            let t2 = t.t() * t.t();
            let g = interior_curve_elliptic(c(0.0, 0.0), c(0.0, 0.0), t);
            let expected = ConicGeneral {
                u: C64::from(4.0 * t2),
                p: -4.0 * (1.0 + t2 * t2),
                v: C64::from(0.0),
                q: (1.0 - t2).powi(2),
            };
            assert!(g.distance_up_to_scale(&expected) < 1e-14);
            let et = t.ellipse();
            for j in 0..8 {
                let z = et.ellipse_point(j as f64).unwrap();
                assert!(g.evaluate(z / 2.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn contraction_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_in_disk(&mut rng, 0.95);
            let b = random_in_disk(&mut rng, 0.95);
            let t = jp(rng.random_range(0.05..0.95));
            let gi = BlaschkeProduct::new(vec![a, b]).unwrap().interior_curve().unwrap();
            let gphi = interior_curve_elliptic(a, b, t);
            let t2 = t.t() * t.t();
            for _ in 0..5 {
                let z = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
                let lhs = (t2 - 1.0).powi(2) * gi.evaluate(JoukowskiParam::boundary_inverse(t, z));
                let rhs = gphi.evaluate(z);
                assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
            }
        }
    }

    #[test]
    fn foci_examples() {
        let t = jp(0.5);
        let (f1, f2) = interior_foci(c(0.0, 0.0), c(0.0, 0.0), t);
        let f = 0.5 / 1.25;
        assert!((f1.re.abs() - f).abs() < 1e-15 && (f1 + f2).norm() < 1e-15);
        let r = interior_r(c(0.0, 0.0), c(0.0, 0.0), t).unwrap();
        assert!((r.r - 1.0).abs() < 1e-14 && !r.circle_fallback);
        let (lo, hi) = cayley_r(f1, f2, t).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 || (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_zeros_give_an_ellipse_similar_to_et() {
        let t = jp(0.5);
        let a = c(0.2, -0.1);
        let r = interior_r(a, a, t).unwrap();
        assert!(!r.circle_fallback);
        let e = r.ellipse();
        assert!((e.semi_minor() / e.semi_major() - t.axis_ratio()).abs() < 1e-12);
        assert!(interior_curve_elliptic(a, a, t).to_standard().unwrap().approx_eq(&e, 1e-12));
    }

    #[test]
    fn reference_cayley_selection() {
        let (a, b, t) = reference();
        let ir = interior_r(a, b, t).unwrap();
        let starts: Vec<f64> = (0..5).map(|k| 0.37 + 1.1 * k as f64).collect();
        let sel = select_inscribed_r(ir.f1, ir.f2, t, &starts).unwrap();
        assert!((sel.accepted.r - ir.r).abs() < 1e-9);
        assert!(sel.accepted.closure.unwrap() < 1e-7);
        assert!(sel.rejected.closure.is_none_or(|c| c > 1e-3));
    }

    #[test]
    fn exterior_intersection_examples() {
        let t = jp(0.5);
        let z = t.exterior_intersection(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!((z - c(1.0, -0.6)).norm() < 1e-15);
        assert_eq!(t.exterior_intersection(c(1.0, 0.0), c(-1.0, 0.0)), Err(Error::AntipodalPoints));
        let et = t.ellipse();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let w1 = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            let w2 = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            let z = t.exterior_intersection(w1, w2).unwrap();
            let t2 = 0.25;
            let direct = 2.0 * (w1 * w2 * t2 + 1.0) / ((t2 + 1.0) * (w1 + w2));
            assert!((z - direct).norm() < 1e-10 * (1.0 + z.norm()));
            for w in [w1, w2] {
                let l = et.tangent_line_at(t.phi_boundary(w)).unwrap();
                assert!(l.residual(z).abs() < 1e-10 * (1.0 + z.norm()));
            }
        }
    }

    #[test]
    fn centroid_locus_examples() {
        let t = jp(0.5);
        assert_eq!(
            centroid_locus_elliptic(&BlaschkeProduct::monomial(3).unwrap(), t),
            CentroidLocus::Point { z: c(0.0, 0.0) }
        );
        let (a, b, _) = reference();
        let CentroidLocus::Ellipse { ellipse } = centroid_locus_elliptic(&BlaschkeProduct::new(vec![a, b]).unwrap(), t) else {
            panic!("expected an ellipse");
        };
        let m3 = (a + b) / 3.0;
        assert!((ellipse.center() - c(m3.re, -0.6 * m3.im)).norm() < 1e-15);
        assert!((ellipse.semi_major() - (a * b).norm() / 3.0).abs() < 1e-15);
        assert!((ellipse.semi_minor() - 0.6 * (a * b).norm() / 3.0).abs() < 1e-15);

        let zeros = vec![c(0.3, 0.0), c(0.0, -0.2), c(0.1, 0.1)];
        let m = EllipticBlaschkeLike::new(BlaschkeProduct::new(zeros).unwrap(), t);
        let locus = centroid_locus_elliptic(&m.blaschke, t);
        for s in m.centroid_samples(100, Exec::Sequential).unwrap() {
            assert!(locus.residual(s.z) < 1e-8);
        }
    }

    proptest! {
        #[test]
        fn boundary_formula_matches_forward(theta in 0.0..std::f64::consts::TAU, t in 0.01f64..0.99) {
            let t = jp(t);
            let w = C64::from_polar(1.0, theta);
            prop_assert!((t.phi_forward(w).unwrap() - t.phi_boundary(w)).norm() < 1e-12);
        }

        #[test]
        fn inverse_roundtrip(r in 0.01f64..0.999, theta in 0.0..std::f64::consts::TAU, t in 0.05f64..0.95) {
            let t = jp(t);
            let w = C64::from_polar(r, theta);
            let z = t.phi_forward(w).unwrap();
            let back = t.phi_inverse(z).unwrap();
            prop_assert!((back - w).norm() < 1e-12 * (1.0 + 1.0 / r));
        }

        #[test]
        fn interior_ellipse_positivity_and_tangency(
            ar in 0.0f64..0.9, at in 0.0..std::f64::consts::TAU,
            br in 0.0f64..0.9, bt in 0.0..std::f64::consts::TAU,
            t in 0.1f64..0.9,
        ) {
            let (a, b, t) = (C64::from_polar(ar, at), C64::from_polar(br, bt), jp(t));
            let g = interior_curve_elliptic(a, b, t);
            let closed = interior_discriminant_closed_form(a, b, t);
            prop_assert!(closed > 0.0);
            prop_assert!((g.discriminant() - closed).abs() <= 1e-9 * closed);
            prop_assert!(g.nondegeneracy() > 0.0);
            let m = EllipticBlaschkeLike::new(BlaschkeProduct::new(vec![a, b]).unwrap(), t);
            prop_assert!(m.max_chord_tangency(&g, 90, Exec::Sequential).unwrap() < 1e-8);
        }

        #[test]
        fn dual_path_foci_and_cayley_roots(
            ar in 0.0f64..0.9, at in 0.0..std::f64::consts::TAU,
            br in 0.0f64..0.9, bt in 0.0..std::f64::consts::TAU,
            t in 0.1f64..0.9,
        ) {
            let (a, b, t) = (C64::from_polar(ar, at), C64::from_polar(br, bt), jp(t));
            let ir = interior_r(a, b, t).unwrap();
            prop_assume!(!ir.circle_fallback && (ir.f1 - ir.f2).norm() > 1e-6);
            let from_conic = interior_curve_elliptic(a, b, t).to_standard().unwrap();
            prop_assert!(from_conic.approx_eq(&ir.ellipse(), 1e-9));
            let (lo, hi) = cayley_r(ir.f1, ir.f2, t).unwrap();
            prop_assert!(lo > 0.0 && hi > 0.0);
            let rel = ((lo * lo - ir.r * ir.r).abs()).min((hi * hi - ir.r * ir.r).abs()) / (ir.r * ir.r);
            prop_assert!(rel < 1e-9);
        }
    }
}
