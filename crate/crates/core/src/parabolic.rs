//! Outer parabola `P_t: (z − z̄)² = 8t²(z + z̄)` and the map
//! `ψ_t(w) = ((1 − w)/(1 + w) + t)² − t²` of the unit disk onto its exterior.
//!
//! `P_t` opens to the left with vertex `0`, focus `−t²` and directrix
//! `Re z = t²`.

use serde::{Deserialize, Serialize};

use crate::conic::ConicGeneral;
use crate::error::{Error, Result};
use crate::mapped::{BlaschkeLike, BoundaryMap, BOUNDARY_TOL};
use crate::C64;

/// Inputs with `|w + 1|` below this are treated as the pole of `ψ_t`.
pub const POLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ParabolaParam(f64);

impl TryFrom<f64> for ParabolaParam {
    type Error = Error;
    fn try_from(t: f64) -> Result<Self> {
        ParabolaParam::new(t)
    }
}

impl From<ParabolaParam> for f64 {
    fn from(p: ParabolaParam) -> f64 {
        p.0
    }
}

impl ParabolaParam {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
        }
        Ok(ParabolaParam(t))
    }

    pub fn t(self) -> f64 {
        self.0
    }

    pub fn psi_forward(self, w: C64) -> Result<C64> {
        if (w + 1.0).norm() < POLE_TOL {
            return Err(Error::PoleInput);
        }
        let t = self.0;
        let s = (1.0 - w) / (1.0 + w) + t;
        Ok(s * s - t * t)
    }

    /// `ψ_t` on the unit circle: `w = X + iY ↦ (X − 1)/(X + 1) − 2iYt/(X + 1)`.
    pub fn boundary_transform(self, w: C64) -> Result<C64> {
        if (w + 1.0).norm() < POLE_TOL {
            return Err(Error::PoleInput);
        }
        let x1 = w.re + 1.0;
        Ok(C64::new((w.re - 1.0) / x1, -2.0 * w.im * self.0 / x1))
    }

    /// Inverse of [`ParabolaParam::boundary_transform`] for `z` on `P_t`:
    /// `(−(z + z̄ + 2)t + z − z̄)/((z + z̄ − 2)t)`.
    pub fn boundary_inverse(self, z: C64) -> C64 {
        let t = self.0;
        let s = 2.0 * z.re;
        (C64::from(-(s + 2.0) * t) + (z - z.conj())) / ((s - 2.0) * t)
    }

    /// The preimage of `z` under `ψ_t` inside the closed disk.
    pub fn psi_inverse(self, z: C64) -> Result<C64> {
        if self.boundary_residual_of(z) <= BOUNDARY_TOL {
            return Ok(self.boundary_inverse(z));
        }
        let t = self.0;
        // (u + t)² = z + t² with u = (1 − w)/(1 + w); Re u > 0 ⇔ |w| < 1.
        let s = (z + t * t).sqrt();
        for u in [s - t, -s - t] {
            if u.re > 0.0 {
                let w = (1.0 - u) / (1.0 + u);
                if w.norm() < 1.0 {
                    return Ok(w);
                }
            }
        }
        Err(Error::InsideParabola)
    }

    /// The preimage of `z` that is not returned by [`ParabolaParam::psi_inverse`].
    pub fn other_preimage(self, z: C64) -> C64 {
        let t = self.0;
        let s = (z + t * t).sqrt();
        let u = -s - t;
        (1.0 - u) / (1.0 + u)
    }

    fn boundary_residual_of(self, z: C64) -> f64 {
        self.parabola().evaluate(z).abs() / (self.parabola().scale() * (1.0 + z.norm_sqr()))
    }

    /// `z² − 2 z z̄ + z̄² − 8t² z − 8t² z̄ = 0`.
    pub fn parabola(self) -> ConicGeneral {
        let t2 = self.0 * self.0;
        ConicGeneral { u: C64::from(1.0), p: -2.0, v: C64::from(-8.0 * t2), q: 0.0 }
    }

    pub fn focus(self) -> C64 {
        C64::from(-self.0 * self.0)
    }

    /// Abscissa of the vertical directrix.
    pub fn directrix(self) -> f64 {
        self.0 * self.0
    }
}

impl BoundaryMap for ParabolaParam {
    fn forward(&self, w: C64) -> Result<C64> {
        self.psi_forward(w)
    }
    fn inverse(&self, z: C64) -> Result<C64> {
        self.psi_inverse(z)
    }
    fn boundary_forward(&self, w: C64) -> Result<C64> {
        self.boundary_transform(w)
    }
    fn boundary_inverse(&self, z: C64) -> Result<C64> {
        Ok(ParabolaParam::boundary_inverse(*self, z))
    }
    fn boundary_conic(&self) -> ConicGeneral {
        self.parabola()
    }
}

/// `ψ_t ∘ B ∘ ψ_t⁻¹` on the exterior of `P_t`.
pub type ParabolicBlaschkeLike = BlaschkeLike<ParabolaParam>;

/// Envelope of the boundary chords for zeros `{0, a, b}`.
pub fn interior_curve_parabolic(a: C64, b: C64, t: ParabolaParam) -> ConicGeneral {
    let t = t.t();
    let t2 = t * t;
    let (ac, bc) = (a.conj(), b.conj());
    let one = C64::from(1.0);
    let ab2 = (a * b).norm_sqr();
    let s2 = (a + b).norm_sqr();
    let dd = (a - b) * (a - b) + (ac - bc) * (ac - bc);
    let lead_plus = (ab2 - (a + b + one).norm_sqr()).powi(2) - 4.0 * (a + one).norm_sqr() * (b + one).norm_sqr();
    let u = lead_plus * t2
        + 2.0
            * (ab2 * (a + b - ac - bc) - (ac + bc + one) * (a * a + b * b + one) + (a + b + one) * (ac * ac + bc * bc + one)
                + 2.0 * (a * b - ac * bc))
            * t
        + dd
        - 2.0 * s2
        + 4.0 * (ab2 + 1.0);
    let p = 2.0 * lead_plus * t2 - 2.0 * (4.0 * ab2 + dd.re - 2.0 * s2 + 4.0);
    let v = -4.0 * (ab2 * (ab2 - 2.0 * s2 + 2.0) + (s2 - 2.0).powi(2) - dd + 1.0) * t2
        - 4.0
            * ((ab2 - (a + b - one).norm_sqr()) * (a + b - ac - bc) + 2.0 * (ac + bc - 2.0) * (a * b - one)
                - 2.0 * (a + b - 2.0) * (ac * bc - one))
            * t;
    let q = 4.0 * ((ab2 - (a + b - one).norm_sqr()).powi(2) - 4.0 * (a - one).norm_sqr() * (b - one).norm_sqr()) * t2;
    ConicGeneral { u, p, v, q }
}

/// Closed form of `P² − 4|U|²` for [`interior_curve_parabolic`].
pub fn interior_discriminant_closed_form(a: C64, b: C64, t: ParabolaParam) -> f64 {
    let (ma, mb) = (1.0 - a.norm_sqr(), 1.0 - b.norm_sqr());
    let t2 = t.t() * t.t();
    -64.0 * mb * ma * (C64::from(1.0) - a * b.conj()).norm_sqr() * t2 * (mb * ma - 4.0 * (a.re + 1.0) * (b.re + 1.0))
}
