//! Complete and incomplete elliptic integrals of the first kind.
//!
//! `K` uses the arithmetic-geometric mean, `sn⁻¹` uses Carlson's symmetric
//! integral `R_F` with explicit formulas on the real axis beyond the branch
//! points. [`inverse_sn_quadrature`] integrates the defining integral along
//! the straight segment and serves as an independent check.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::quadrature::integrate_complex;
use crate::C64;

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::ModulusOutOfRange(k));
    }
    Ok(())
}

/// `√(1 − k²)` without cancellation near `k = 1`.
pub fn complementary_modulus(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Complete integral `K(k)` for `0 ≤ k < 1`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    check_modulus(k)?;
    Ok(FRAC_PI_2 / agm(1.0, complementary_modulus(k)))
}

/// `K′(k) = K(√(1 − k²))` for `0 < k < 1`.
pub fn elliptic_kprime(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::ModulusOutOfRange(k));
    }
    Ok(FRAC_PI_2 / agm(1.0, k))
}

/// Carlson's `R_F(x, y, z)` for arguments off the negative real axis, at
/// most one of them zero.
pub fn carlson_rf(x: C64, y: C64, z: C64) -> Result<C64> {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..100 {
        let a = (x + y + z) / 3.0;
        let (dx, dy, dz) = (1.0 - x / a, 1.0 - y / a, 1.0 - z / a);
        if dx.norm().max(dy.norm()).max(dz.norm()) < 1e-3 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0;
            return Ok(series / a.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    Err(Error::NoConvergence("carlson_rf".into()))
}

/// Incomplete integral `F(φ, k) = sin φ · R_F(cos²φ, 1 − k² sin²φ, 1)` for real `φ ∈ [0, π/2]`.
pub fn incomplete_f(phi: f64, k: f64) -> Result<f64> {
    let (s, c) = phi.sin_cos();
    Ok(s * carlson_rf(C64::from(c * c), C64::from(1.0 - k * k * s * s), C64::from(1.0))?.re)
}

/// `sn⁻¹(u, k) = ∫₀ᵘ dω / √((1 − ω²)(1 − k²ω²))`, continued from the upper
/// half-plane onto the real axis. The branch points `±1`, `±1/k` take their
/// finite limit values `±K`, `±K + iK′`.
pub fn inverse_sn(u: C64, k: f64) -> Result<C64> {
    check_modulus(k)?;
    if u.im < 0.0 {
        return Err(Error::DomainViolation("inverse_sn is defined on the closed upper half-plane".into()));
    }
    if u.im > 0.0 || u.re.abs() <= 1.0 {
        let u2 = u * u;
        return Ok(u * carlson_rf(1.0 - u2, 1.0 - k * k * u2, C64::from(1.0))?);
    }
    let x = u.re.abs();
    let sign = u.re.signum();
    // Limits from above the cut: the real part flips with the sign of u,
    // the imaginary part does not.
    if k * x < 1.0 {
        let kp = complementary_modulus(k);
        let s2 = ((1.0 - 1.0 / (x * x)) / (kp * kp)).min(1.0);
        let im = incomplete_f(s2.sqrt().asin(), kp)?;
        Ok(C64::new(sign * elliptic_k(k)?, im))
    } else {
        let re = incomplete_f((1.0 / (k * x)).min(1.0).asin(), k)?;
        Ok(C64::new(sign * re, elliptic_kprime(k)?))
    }
}

/// `sn⁻¹(u, k)` by adaptive quadrature along the segment `0 → u`.
pub fn inverse_sn_quadrature(u: C64, k: f64, tol: f64) -> Result<C64> {
    check_modulus(k)?;
    let near = |a: f64| (u - a).norm() <= 1e-14 || (u + a).norm() <= 1e-14;
    if near(1.0) || (k > 0.0 && near(1.0 / k)) {
        return Err(Error::BranchPointInput);
    }
    if u.im == 0.0 && u.re.abs() > 1.0 {
        return Err(Error::BranchPointInput);
    }
    integrate_complex(
        |s| {
            let w = u * s;
            let w2 = w * w;
            u / ((1.0 - w2).sqrt() * (1.0 - k * k * w2).sqrt())
        },
        0.0,
        1.0,
        tol,
    )
}
