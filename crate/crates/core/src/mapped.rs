//! Blaschke-like maps `φ ∘ B ∘ φ⁻¹` for a conformal map `φ` of the unit disk
//! onto a domain bounded by a conic.
//!
//! Everything here only needs `φ` on the closed disk and its boundary
//! restriction; the concrete maps live in [`crate::joukowski`] and
//! [`crate::parabolic`].

use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::conic::{ConicGeneral, RealLine};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::{unit_circle_grid, C64};

/// Relative conic residual below which a point counts as on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-10;

pub trait BoundaryMap: Sync {
    /// `φ(w)` for `w` in the closed disk.
    fn forward(&self, w: C64) -> Result<C64>;
    /// The branch of `φ⁻¹(z)` inside the disk.
    fn inverse(&self, z: C64) -> Result<C64>;
    /// `φ` restricted to the unit circle.
    fn boundary_forward(&self, w: C64) -> Result<C64>;
    /// Inverse of [`BoundaryMap::boundary_forward`] for `z` on the boundary conic.
    fn boundary_inverse(&self, z: C64) -> Result<C64>;
    fn boundary_conic(&self) -> ConicGeneral;

    /// Relative residual of `z` against the boundary conic.
    fn boundary_residual(&self, z: C64) -> f64 {
        let c = self.boundary_conic();
        c.evaluate(z).abs() / (c.scale() * (1.0 + z.norm_sqr()))
    }

    /// Intersection of the boundary tangent lines at `φ(ω₁)` and `φ(ω₂)`.
    fn tangent_intersection(&self, w1: C64, w2: C64) -> Result<C64> {
        let conic = self.boundary_conic();
        let l1 = conic.tangent_line_at(self.boundary_forward(w1)?)?;
        let l2 = conic.tangent_line_at(self.boundary_forward(w2)?)?;
        l1.intersect(&l2).ok_or(Error::AntipodalPoints)
    }
}

/// The Blaschke-like map attached to a canonical product and a boundary map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeLike<M> {
    pub blaschke: BlaschkeProduct,
    pub map: M,
}

/// Boundary preimages of one boundary point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPolygon {
    /// `arg λ` of the disk-side boundary value.
    pub arg_lambda: f64,
    /// Boundary value `φ(λ)`.
    pub image: C64,
    /// Disk-side preimages `w_k`, sorted by argument.
    pub disk_vertices: Vec<C64>,
    /// Mapped vertices `z_k = φ(w_k)`.
    pub vertices: Vec<C64>,
}

impl BoundaryPolygon {
    pub fn centroid(&self) -> C64 {
        self.vertices.iter().sum::<C64>() / self.vertices.len() as f64
    }

    /// Lines through every pair of vertices.
    pub fn chords(&self) -> Result<Vec<RealLine>> {
        chords(&self.vertices)
    }
}

/// Lines joining every pair of the given points.
pub fn chords(points: &[C64]) -> Result<Vec<RealLine>> {
    let mut out = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            out.push(RealLine::through(points[i], points[j])?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub z: C64,
    pub arg_lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExteriorSamples {
    pub points: Vec<SamplePoint>,
    /// Pairs dropped because the tangents were (nearly) parallel.
    pub skipped: usize,
}

impl ExteriorSamples {
    pub fn coordinates(&self) -> Vec<C64> {
        self.points.iter().map(|p| p.z).collect()
    }

    /// Keeps points with `|z| ≤ radius`, counting the rest as skipped.
    pub fn within(mut self, radius: f64) -> Self {
        let before = self.points.len();
        self.points.retain(|p| p.z.norm() <= radius);
        self.skipped += before - self.points.len();
        self
    }
}

impl<M: BoundaryMap> BlaschkeLike<M> {
    pub fn new(blaschke: BlaschkeProduct, map: M) -> Self {
        BlaschkeLike { blaschke, map }
    }

    pub fn degree(&self) -> usize {
        self.blaschke.degree()
    }

    /// `φ(B(φ⁻¹(z)))`.
    pub fn apply(&self, z: C64) -> Result<C64> {
        let w = self.map.inverse(z)?;
        let b = self.blaschke.evaluate(w)?;
        self.map.forward(b)
    }

    /// Polygon of boundary preimages of a disk-side boundary value `λ`.
    pub fn polygon_for_lambda(&self, lambda: C64) -> Result<BoundaryPolygon> {
        let disk_vertices = self.blaschke.preimages(lambda)?;
        let vertices = disk_vertices
            .iter()
            .map(|&w| self.map.boundary_forward(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundaryPolygon {
            arg_lambda: crate::blaschke::arg_2pi(lambda),
            image: self.map.boundary_forward(lambda)?,
            disk_vertices,
            vertices,
        })
    }

    /// Preimages `z_k` of a boundary point `λ̃` under the Blaschke-like map.
    pub fn preimages_on_boundary(&self, image: C64) -> Result<Vec<C64>> {
        let res = self.map.boundary_residual(image);
        if res > BOUNDARY_TOL {
            return Err(Error::NotOnBoundary(res));
        }
        let lambda = self.map.boundary_inverse(image)?;
        let lambda = lambda / lambda.norm();
        Ok(self.polygon_for_lambda(lambda)?.vertices)
    }

    /// Runs `f` over `n` values of `λ` uniform in argument. Samples that hit
    /// the pole of the boundary map are dropped and counted.
    fn sample<T, F>(&self, n: usize, exec: Exec, f: F) -> Result<(Vec<T>, usize)>
    where
        T: Send,
        F: Fn(C64) -> Result<T> + Sync + Send,
    {
        let grid = unit_circle_grid(n);
        let mut out = Vec::with_capacity(n);
        let mut skipped = 0;
        for r in exec.map_slice(&grid, |&l| f(l)) {
            match r {
                Ok(v) => out.push(v),
                Err(Error::PoleInput) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        Ok((out, skipped))
    }

    /// Polygons for `n` values of `λ` uniform in argument, omitting any
    /// with a vertex at the pole of the boundary map.
    pub fn polygons(&self, n: usize, exec: Exec) -> Result<Vec<BoundaryPolygon>> {
        Ok(self.sample(n, exec, |l| self.polygon_for_lambda(l))?.0)
    }

    /// Largest `|tangency residual|` of any chord against `conic` over `n` samples.
    pub fn max_chord_tangency(&self, conic: &ConicGeneral, n: usize, exec: Exec) -> Result<f64> {
        let (per, _) = self.sample(n, exec, |l| {
            let poly = self.polygon_for_lambda(l)?;
            let mut worst = 0.0f64;
            for line in poly.chords()? {
                worst = worst.max(conic.tangency_residual(&line)?.abs());
            }
            Ok(worst)
        })?;
        Ok(per.into_iter().fold(0.0, f64::max))
    }

    /// Pairwise tangent-line intersections for `n` values of `λ`.
    ///
    /// Pairs with `|ω_j + ω_k| < min_separation` are skipped.
    pub fn exterior_curve_samples(&self, n: usize, min_separation: f64, exec: Exec) -> Result<ExteriorSamples> {
        if n < 3 {
            return Err(Error::InvalidParameter("at least 3 samples are required".into()));
        }
        let (per, pole_hits) = self.sample(n, exec, |l| {
            let w = self.blaschke.preimages(l)?;
            let arg_lambda = crate::blaschke::arg_2pi(l);
            let mut pts = Vec::new();
            let mut skipped = 0;
            for i in 0..w.len() {
                for j in i + 1..w.len() {
                    if (w[i] + w[j]).norm() < min_separation {
                        skipped += 1;
                        continue;
                    }
                    match self.map.tangent_intersection(w[i], w[j]) {
                        Ok(z) => pts.push(SamplePoint { z, arg_lambda }),
                        Err(Error::AntipodalPoints) | Err(Error::PoleInput) => skipped += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok((pts, skipped))
        })?;
        let mut out = ExteriorSamples { points: Vec::new(), skipped: pole_hits };
        for (pts, s) in per {
            out.points.extend(pts);
            out.skipped += s;
        }
        Ok(out)
    }

    /// Vertex centroids of the boundary polygons over `n` samples.
    pub fn centroid_samples(&self, n: usize, exec: Exec) -> Result<Vec<SamplePoint>> {
        Ok(self
            .polygons(n, exec)?
            .into_iter()
            .map(|p| SamplePoint { z: p.centroid(), arg_lambda: p.arg_lambda })
            .collect())
    }
}

/// The unit disk itself (`φ = id`), for the classical Blaschke case.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct UnitDisk;

impl BoundaryMap for UnitDisk {
    fn forward(&self, w: C64) -> Result<C64> {
        Ok(w)
    }
    fn inverse(&self, z: C64) -> Result<C64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::DomainViolation("point outside the unit disk".into()));
        }
        Ok(z)
    }
    fn boundary_forward(&self, w: C64) -> Result<C64> {
        Ok(w)
    }
    fn boundary_inverse(&self, z: C64) -> Result<C64> {
        Ok(z)
    }
    fn boundary_conic(&self) -> ConicGeneral {
        ConicGeneral { u: C64::new(0.0, 0.0), p: 1.0, v: C64::new(0.0, 0.0), q: -1.0 }
    }
    fn tangent_intersection(&self, w1: C64, w2: C64) -> Result<C64> {
        exterior_intersection_disk(w1, w2)
    }
}

/// Intersection `2ω₁ω₂/(ω₁ + ω₂)` of the unit-circle tangents at `ω₁`, `ω₂`.
pub fn exterior_intersection_disk(w1: C64, w2: C64) -> Result<C64> {
    let s = w1 + w2;
    if s.norm() <= 1e-12 {
        return Err(Error::AntipodalPoints);
    }
    Ok(2.0 * w1 * w2 / s)
}
