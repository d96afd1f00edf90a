//! Conformal map `γ̃` of the unit disk onto the interior of the ellipse with
//! semi-axes `1`, `p` and foci `±√(1 − p²)`.
//!
//! On the upper half-disk `γ = z ∘ x ∘ v ∘ u` with
//! `u = (w − 1)/(w + 1)`, `v = c · sn⁻¹(u, k)`, `x = R eᵛ` and
//! `z = (√(1 − p²)/2)(x + 1/x)`, where `R = √((1 + p)/(1 − p))`; the lower
//! half follows by reflection.

use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::conic::EllipseStandard;
use crate::ellint::{elliptic_k, elliptic_kprime, inverse_sn};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::joukowski::JoukowskiParam;
use crate::verify::{fit_conic, polygon_side_envelope};
use crate::C64;

/// Residual above which the fitted envelope is declared not an ellipse.
pub const NON_ELLIPSE_THRESHOLD: f64 = 1e-3;
/// Residual the `φ_t` control must stay under.
pub const CONTROL_THRESHOLD: f64 = 1e-6;
/// Half-step of the symmetric line intersections in the envelope.
pub const ENVELOPE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorMapParam {
    pub p: f64,
    pub k: f64,
    pub c: f64,
    #[serde(rename = "K")]
    pub big_k: f64,
    #[serde(rename = "K_prime")]
    pub big_k_prime: f64,
}

/// `log √((1 + p)/(1 − p))`.
pub fn log_radius(p: f64) -> f64 {
    p.atanh()
}

/// `π K(k)/K′(k)`, increasing in `k`.
pub fn modulus_ratio(k: f64) -> Result<f64> {
    Ok(std::f64::consts::PI * elliptic_k(k)? / elliptic_kprime(k)?)
}

/// Solves `π K/K′ = log √((1 + p)/(1 − p))` for `k` by bisection, then
/// `c = log √((1 + p)/(1 − p)) / K`.
pub fn solve_params(p: f64) -> Result<InteriorMapParam> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    let target = log_radius(p);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut converged = false;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            converged = true;
            break;
        }
        if modulus_ratio(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = 0.5 * (lo + hi);
    if !converged && (modulus_ratio(k)? - target).abs() > 1e-10 * target.max(1.0) {
        return Err(Error::NoConvergence(format!("bisection bracket [{lo}, {hi}]")));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::NoConvergence(format!("bisection bracket [{lo}, {hi}]")));
    }
    let big_k = elliptic_k(k)?;
    Ok(InteriorMapParam { p, k, c: target / big_k, big_k, big_k_prime: elliptic_kprime(k)? })
}

impl InteriorMapParam {
    /// Half the focal distance, `√(1 − p²)`.
    pub fn focus(&self) -> f64 {
        ((1.0 - self.p) * (1.0 + self.p)).sqrt()
    }

    /// `|z − f| + |z + f| = 2`.
    pub fn ellipse(&self) -> EllipseStandard {
        let f = self.focus();
        EllipseStandard { f1: C64::from(f), f2: C64::from(-f), r: 2.0 }
    }

    fn radius(&self) -> f64 {
        ((1.0 + self.p) / (1.0 - self.p)).sqrt()
    }

    /// `γ(w)` on the closed upper half-disk.
    pub fn gamma_map(&self, w: C64) -> Result<C64> {
        if w.norm() > 1.0 + 1e-12 || w.im < -1e-15 {
            return Err(Error::DomainViolation("gamma_map needs |w| ≤ 1 and Im w ≥ 0".into()));
        }
        if (w + 1.0).norm() < 1e-14 {
            return Ok(C64::from(-1.0));
        }
        let w = C64::new(w.re, w.im.max(0.0));
        let u = (w - 1.0) / (w + 1.0);
        let u = C64::new(u.re, u.im.max(0.0));
        let v = self.c * inverse_sn(u, self.k)?;
        let x = self.radius() * v.exp();
        Ok(0.5 * self.focus() * (x + x.inv()))
    }

    /// `γ̃(w)` on the closed disk, with `γ̃(w̄) = conj γ̃(w)`.
    pub fn gamma_extended(&self, w: C64) -> Result<C64> {
        if w.im >= 0.0 {
            self.gamma_map(w)
        } else {
            Ok(self.gamma_map(w.conj())?.conj())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ellipse,
    NonEllipse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub envelope: Vec<C64>,
    pub fit_residual_max: f64,
    pub fit_residual_mean: f64,
}

/// Envelope of the polygon sides pushed forward by `boundary`, and the
/// residuals of its best conic fit.
pub fn envelope_fit<G>(b: &BlaschkeProduct, boundary: &G, n: usize, exec: Exec) -> Result<EnvelopeFit>
where
    G: Fn(C64) -> Result<C64> + Sync,
{
    let envelope = polygon_side_envelope(b, boundary, n, ENVELOPE_STEP, exec)?;
    let fit = fit_conic(&envelope)?;
    Ok(EnvelopeFit { envelope, fit_residual_max: fit.residual_max, fit_residual_mean: fit.residual_mean })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub verdict: Verdict,
    pub fit_residual_max: f64,
    pub fit_residual_mean: f64,
    pub n_samples: usize,
    pub params: InteriorMapParam,
    /// Same pipeline with `φ_t` in place of `γ̃`.
    pub control_fit_residual_max: f64,
    pub control_t: f64,
    #[serde(skip)]
    pub envelope: Vec<C64>,
}

/// Envelopes the polygon sides under `γ̃` and tests whether the result is a
/// conic.
pub fn non_ellipse_experiment(param: &InteriorMapParam, b: &BlaschkeProduct, n: usize, exec: Exec) -> Result<ExperimentReport> {
    let gamma = |w: C64| param.gamma_extended(w);
    let main = envelope_fit(b, &gamma, n, exec)?;
    let t = JoukowskiParam::new(0.5)?;
    let phi = |w: C64| -> Result<C64> { Ok(t.phi_boundary(w)) };
    let control = envelope_fit(b, &phi, n, exec)?;
    Ok(ExperimentReport {
        verdict: if main.fit_residual_max > NON_ELLIPSE_THRESHOLD { Verdict::NonEllipse } else { Verdict::Ellipse },
        fit_residual_max: main.fit_residual_max,
        fit_residual_mean: main.fit_residual_mean,
        n_samples: main.envelope.len(),
        params: *param,
        control_fit_residual_max: control.fit_residual_max,
        control_t: t.t(),
        envelope: main.envelope,
    })
}

/// `B(w) = w (w² − a²)/(1 − ā² w²)`.
pub fn experiment_product(a: C64) -> Result<BlaschkeProduct> {
    BlaschkeProduct::new(vec![a, -a])
}

/// Largest distance between the envelope of `B = w^d` under `γ̃` and its
/// mirror image in the real axis, at `n` parameters.
pub fn real_axis_symmetry_residual(param: &InteriorMapParam, d: usize, n: usize) -> Result<f64> {
    let b = BlaschkeProduct::monomial(d)?;
    let gamma = |w: C64| param.gamma_extended(w);
    let family = |s: f64| crate::verify::chord_from_vertex(&b, &gamma, s);
    let step = std::f64::consts::TAU / d as f64;
    let mut worst = 0.0f64;
    for j in 0..n {
        let s = std::f64::consts::TAU * (j as f64 + 0.25) / n as f64;
        // The side from e^{is} to e^{i(s+step)} mirrors onto the side from
        // e^{−i(s+step)} to e^{−is}.
        let z = crate::verify::envelope_point(&family, s, ENVELOPE_STEP)?;
        let mirrored = crate::verify::envelope_point(&family, -s - step, ENVELOPE_STEP)?;
        worst = worst.max((z.conj() - mirrored).norm());
    }
    Ok(worst)
}
