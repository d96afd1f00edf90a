//! Blaschke-like maps on domains bounded by conics.
//!
//! A canonical Blaschke product `B` of degree `d` is conjugated by a conformal
//! map `φ` from the unit disk onto a conic-bounded domain, giving the
//! Blaschke-like map `φ ∘ B ∘ φ⁻¹`. For each boundary point the `d` boundary
//! preimages span a polygon. The envelope of its edges is the interior curve.
//! The locus of tangent-line intersections is the exterior curve. This crate
//! computes both, plus the locus of vertex centroids, and checks every closed
//! form against an independent numerical route.
//!
//! Modules:
//! - [`conic`]: conic forms and their tangent lines.
//! - [`blaschke`]: canonical products, boundary preimages, the degree-3 ellipse.
//! - [`joukowski`]: outer ellipse `E_t` via the Joukowski map.
//! - [`parabolic`]: outer parabola `P_t`.
//! - [`mapped`]: the generic Blaschke-like layer shared by every boundary map.
//! - [`jacobi`]: inner ellipse via the elliptic-integral chain.
//! - [`ellint`]: elliptic integrals of the first kind.
//! - [`verify`]: envelopes, conic fitting, Poncelet closure, Cayley's criterion.

pub mod blaschke;
pub mod conic;
pub mod ellint;
pub mod error;
pub mod exec;
pub mod jacobi;
pub mod joukowski;
pub mod mapped;
pub mod parabolic;
pub mod poly;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use num_complex::Complex64;

/// Shorthand used throughout the crate.
pub type C64 = Complex64;

/// `λ` values uniformly spaced in argument, `n` of them, starting at `1`.
pub fn unit_circle_grid(n: usize) -> Vec<C64> {
    (0..n)
        .map(|j| C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64))
        .collect()
}
