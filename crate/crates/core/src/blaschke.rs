//! Finite Blaschke products on the unit disk.
//!
//! A canonical product of degree `d` is
//!
//! ```text
//! B(w) = w ∏_{k=1}^{d-1} (w − a_k) / (1 − ā_k w),     |a_k| < 1,
//! ```
//!
//! i.e. unimodular factor 1 and a zero at the origin. Only the remaining
//! zeros `a_1 … a_{d−1}` are stored.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::conic::{ConicGeneral, EllipseStandard};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::C64;

/// Tolerance on `|λ| − 1` accepted by [`BlaschkeProduct::preimages`].
pub const UNIMODULAR_TOL: f64 = 1e-12;
/// Preimages must satisfy `||w| − 1| <` this.
pub const PREIMAGE_MODULUS_TOL: f64 = 1e-8;
/// Preimages must satisfy `|B(w) − λ| <` this.
pub const PREIMAGE_RESIDUAL_TOL: f64 = 1e-9;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn check_zeros(zeros: &[C64]) -> Result<()> {
    for a in zeros {
        if a.norm().is_nan() || a.norm() >= 1.0 {
            return Err(Error::InvalidParameter(format!("zero {a} is not in the open unit disk")));
        }
    }
    Ok(())
}

/// Canonical Blaschke product; the zero at the origin is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeRepr")]
pub struct BlaschkeProduct {
    zeros: Vec<C64>,
}

#[derive(Deserialize)]
struct BlaschkeRepr {
    zeros: Vec<C64>,
}

impl TryFrom<BlaschkeRepr> for BlaschkeProduct {
    type Error = Error;
    fn try_from(r: BlaschkeRepr) -> Result<Self> {
        BlaschkeProduct::new(r.zeros)
    }
}

/// `e^{iθ} ∏ (z − a_k)/(1 − ā_k z)` with arbitrary zeros and rotation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralBlaschke {
    pub zeros: Vec<C64>,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: C64,
    pub radius: f64,
}

/// The pre-rotation `f₁(z) = e^{iφ} z` and post-automorphism
/// `f₂(z) = (z − c)/(1 − c̄ z)` that turn a general product canonical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusPair {
    pub rotation: f64,
    pub shift: C64,
}

impl MobiusPair {
    pub fn identity() -> Self {
        MobiusPair { rotation: 0.0, shift: C64::new(0.0, 0.0) }
    }

    pub fn is_identity(&self) -> bool {
        self.rotation == 0.0 && self.shift == C64::new(0.0, 0.0)
    }

    pub fn pre(&self, z: C64) -> C64 {
        C64::from_polar(1.0, self.rotation) * z
    }

    pub fn pre_inverse(&self, z: C64) -> C64 {
        C64::from_polar(1.0, -self.rotation) * z
    }

    pub fn post(&self, z: C64) -> C64 {
        (z - self.shift) / (one() - self.shift.conj() * z)
    }

    pub fn post_inverse(&self, z: C64) -> C64 {
        (z + self.shift) / (one() + self.shift.conj() * z)
    }
}

impl Circle {
    pub fn is_point(&self) -> bool {
        self.radius == 0.0
    }

    pub fn residual(&self, z: C64) -> f64 {
        (z - self.center).norm() - self.radius
    }
}

/// `(w − a)/(1 − ā w)` summed over zeros as a logarithmic derivative.
fn log_derivative(zeros: &[C64], w: C64) -> C64 {
    zeros
        .iter()
        .map(|&a| (1.0 - a.norm_sqr()) / ((w - a) * (one() - a.conj() * w)))
        .sum()
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<C64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::InvalidParameter("degree must be at least 2".into()));
        }
        check_zeros(&zeros)?;
        Ok(BlaschkeProduct { zeros })
    }

    /// `B(w) = w^d`.
    pub fn monomial(degree: usize) -> Result<Self> {
        Self::new(vec![C64::new(0.0, 0.0); degree.saturating_sub(1)])
    }

    pub fn degree(&self) -> usize {
        self.zeros.len() + 1
    }

    /// Zeros other than the implicit one at the origin.
    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    /// All `d` zeros, origin first.
    pub fn all_zeros(&self) -> Vec<C64> {
        std::iter::once(C64::new(0.0, 0.0)).chain(self.zeros.iter().copied()).collect()
    }

    pub fn evaluate(&self, w: C64) -> Result<C64> {
        let mut value = w;
        for &a in &self.zeros {
            let den = one() - a.conj() * w;
            if den.norm() <= 1e-14 {
                return Err(Error::PoleInput);
            }
            value *= (w - a) / den;
        }
        Ok(value)
    }

    pub fn derivative(&self, w: C64) -> Result<C64> {
        // B' = B·Σ(1 − |a|²)/((w − a)(1 − ā w)); written as a product rule to
        // stay finite at the zeros.
        let factors: Vec<(C64, C64)> = std::iter::once((w, one()))
            .chain(self.zeros.iter().map(|&a| {
                let den = one() - a.conj() * w;
                ((w - a) / den, (1.0 - a.norm_sqr()) / (den * den))
            }))
            .collect();
        if factors.iter().any(|(f, _)| !f.is_finite()) {
            return Err(Error::PoleInput);
        }
        let mut total = C64::new(0.0, 0.0);
        for i in 0..factors.len() {
            let mut term = factors[i].1;
            for (j, f) in factors.iter().enumerate() {
                if j != i {
                    term *= f.0;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Monic degree-`d` polynomial whose roots are the solutions of `B(w) = λ`:
    /// `w ∏(w − a_k) − λ ∏(1 − ā_k w)`.
    pub fn preimage_polynomial(&self, lambda: C64) -> Poly {
        let numerator = self
            .zeros
            .iter()
            .fold(Poly(vec![C64::new(0.0, 0.0), one()]), |acc, &a| acc.mul_linear(-a, one()));
        let denominator = self.zeros.iter().fold(Poly::one(), |acc, &a| acc.mul_linear(one(), -a.conj()));
        numerator.sub(&denominator.scale(lambda))
    }

    /// The `d` distinct solutions of `B(w) = λ` on the unit circle, sorted by
    /// argument in `[0, 2π)`.
    pub fn preimages(&self, lambda: C64) -> Result<Vec<C64>> {
        let dev = lambda.norm() - 1.0;
        if dev.abs() > UNIMODULAR_TOL {
            return Err(Error::NotUnimodular(dev));
        }
        let mut roots = self.preimage_polynomial(lambda).roots()?;
        let all = self.all_zeros();
        for w in roots.iter_mut() {
            for _ in 0..3 {
                let b = self.evaluate(*w)?;
                let r = b - lambda;
                if r.norm() < 1e-16 {
                    break;
                }
                let db = b * log_derivative(&all, *w);
                if db.norm() == 0.0 {
                    break;
                }
                *w -= r / db;
            }
        }
        roots.sort_by(|a, b| arg_2pi(*a).total_cmp(&arg_2pi(*b)));
        for w in &roots {
            let m = (w.norm() - 1.0).abs();
            if m >= PREIMAGE_MODULUS_TOL {
                return Err(Error::RootQualityFailure(format!("|w| - 1 = {m:e} at {w}")));
            }
            let r = (self.evaluate(*w)? - lambda).norm();
            if r >= PREIMAGE_RESIDUAL_TOL {
                return Err(Error::RootQualityFailure(format!("|B(w) - λ| = {r:e} at {w}")));
            }
        }
        let n = roots.len();
        for i in 0..n {
            let gap = (roots[i] - roots[(i + 1) % n]).norm();
            if n > 1 && gap < 1e-10 {
                return Err(Error::RootQualityFailure(format!("preimages collide (gap {gap:e})")));
            }
        }
        Ok(roots)
    }

    /// Interior curve of a degree-3 product with zeros `{0, a, b}`: the ellipse
    /// `|w − a| + |w − b| = |1 − ā b|` in general form.
    pub fn interior_curve(&self) -> Result<ConicGeneral> {
        let (a, b) = self.degree3_zeros()?;
        let ab2 = (a * b).norm_sqr();
        let s2 = (a + b).norm_sqr();
        let (ac, bc) = (a.conj(), b.conj());
        Ok(ConicGeneral {
            u: (a - b) * (a - b),
            p: -2.0 * (2.0 * (1.0 + ab2) - s2),
            v: 2.0 * ((1.0 + ab2) * (a + b) - (a * a + b * b) * (ac + bc)),
            q: (1.0 - ab2).powi(2) - s2 * (2.0 * (1.0 + ab2) - s2),
        })
    }

    /// Focal form of [`BlaschkeProduct::interior_curve`].
    pub fn interior_ellipse(&self) -> Result<EllipseStandard> {
        let (a, b) = self.degree3_zeros()?;
        Ok(EllipseStandard { f1: a, f2: b, r: (one() - a.conj() * b).norm() })
    }

    pub(crate) fn degree3_zeros(&self) -> Result<(C64, C64)> {
        match self.zeros.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(Error::InvalidParameter(format!(
                "closed-form interior curve needs degree 3, got degree {}",
                self.degree()
            ))),
        }
    }

    /// Circle traced by the centroid of the preimages of `λ` as `λ` runs
    /// over the unit circle.
    pub fn centroid_circle(&self) -> Circle {
        let d = self.degree() as f64;
        let sum: C64 = self.zeros.iter().sum();
        let prod: C64 = self.zeros.iter().product();
        Circle { center: sum / d, radius: prod.norm() / d }
    }

    /// Centroid of the preimages of a given `λ`.
    pub fn centroid(&self, lambda: C64) -> Result<C64> {
        let w = self.preimages(lambda)?;
        Ok(w.iter().sum::<C64>() / w.len() as f64)
    }

    pub fn as_general(&self) -> GeneralBlaschke {
        GeneralBlaschke { zeros: self.all_zeros(), theta: 0.0 }
    }
}

/// Argument in `[0, 2π)`.
pub fn arg_2pi(z: C64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

impl GeneralBlaschke {
    pub fn new(zeros: Vec<C64>, theta: f64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::InvalidParameter("at least one zero is required".into()));
        }
        check_zeros(&zeros)?;
        Ok(GeneralBlaschke { zeros, theta })
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn evaluate(&self, z: C64) -> Result<C64> {
        let mut value = C64::from_polar(1.0, self.theta);
        for &a in &self.zeros {
            let den = one() - a.conj() * z;
            if den.norm() <= 1e-14 {
                return Err(Error::PoleInput);
            }
            value *= (z - a) / den;
        }
        Ok(value)
    }

    /// Solutions of `B(z) = λ`, sorted by argument.
    pub fn preimages(&self, lambda: C64) -> Result<Vec<C64>> {
        let rot = C64::from_polar(1.0, self.theta);
        let num = self.zeros.iter().fold(Poly::one(), |acc, &a| acc.mul_linear(-a, one())).scale(rot);
        let den = self.zeros.iter().fold(Poly::one(), |acc, &a| acc.mul_linear(one(), -a.conj()));
        let mut roots = num.sub(&den.scale(lambda)).roots()?;
        roots.sort_by(|a, b| arg_2pi(*a).total_cmp(&arg_2pi(*b)));
        Ok(roots)
    }

    /// Returns the canonical product `f₂ ∘ B ∘ f₁` and the pair `(f₁, f₂)`.
    pub fn canonicalize(&self) -> Result<(BlaschkeProduct, MobiusPair)> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::InvalidParameter("degree must be at least 2".into()));
        }
        let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
        let prod: C64 = self.zeros.iter().product();
        let shift = sign * prod * C64::from_polar(1.0, self.theta);
        let rotation = -self.theta / d as f64;
        if shift == C64::new(0.0, 0.0) && rotation == 0.0 {
            // Already canonical: drop one zero at the origin.
            let mut zeros = self.zeros.clone();
            let idx = zeros.iter().position(|a| *a == C64::new(0.0, 0.0)).expect("product vanishes");
            zeros.remove(idx);
            return Ok((BlaschkeProduct::new(zeros)?, MobiusPair::identity()));
        }
        let pair = MobiusPair { rotation, shift };
        // f₂(B(f₁ z)) = (N − c D)/(D − c̄ N) with N, D the numerator and
        // denominator of B ∘ f₁. Its zeros are the roots of N − c D, one of
        // which is the origin.
        let e = C64::from_polar(1.0, rotation);
        let rot = C64::from_polar(1.0, self.theta);
        let num = self.zeros.iter().fold(Poly::one(), |acc, &a| acc.mul_linear(-a, e)).scale(rot);
        let den = self.zeros.iter().fold(Poly::one(), |acc, &a| acc.mul_linear(one(), -a.conj() * e));
        let top = num.sub(&den.scale(shift));
        let reduced = Poly(top.0[1..].to_vec());
        let mut zeros = reduced.roots()?;
        for z in zeros.iter_mut() {
            if z.norm() >= 1.0 {
                *z /= z.norm() * (1.0 + 1e-15);
            }
        }
        Ok((BlaschkeProduct::new(zeros)?, pair))
    }
}
