//! Geometric oracles: projective conic matrices, the triangle case of
//! Cayley's criterion, Poncelet closure, discrete envelopes and
//! least-squares algebraic curve fits.

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::conic::{ConicClass, ConicGeneral, RealLine};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::C64;

/// Symmetric matrix of the quadratic form in `(x, y, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicMatrix(pub Matrix3<f64>);

pub fn conic_to_matrix(c: &ConicGeneral) -> ConicMatrix {
    let (ur, ui) = (c.u.re, c.u.im);
    ConicMatrix(Matrix3::new(
        c.p + 2.0 * ur,
        2.0 * ui,
        c.v.re,
        2.0 * ui,
        c.p - 2.0 * ur,
        c.v.im,
        c.v.re,
        c.v.im,
        c.q,
    ))
}

impl ConicMatrix {
    /// Value of the quadratic form at `(x, y, 1)`.
    pub fn evaluate(&self, z: C64) -> f64 {
        let x = Vector3::new(z.re, z.im, 1.0);
        x.dot(&(self.0 * x))
    }

    pub fn to_general(&self) -> ConicGeneral {
        let m = &self.0;
        ConicGeneral {
            u: C64::new(0.25 * (m[(0, 0)] - m[(1, 1)]), 0.5 * m[(0, 1)]),
            p: 0.5 * (m[(0, 0)] + m[(1, 1)]),
            v: C64::new(m[(0, 2)], m[(1, 2)]),
            q: m[(2, 2)],
        }
    }

    /// Scaled to unit Frobenius norm.
    pub fn normalized(&self) -> ConicMatrix {
        ConicMatrix(self.0 / self.0.norm())
    }
}

fn adjugate(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)];
    Matrix3::new(
        c(1, 2, 1, 2),
        -c(0, 2, 1, 2),
        c(0, 1, 1, 2),
        -c(1, 2, 0, 2),
        c(0, 2, 0, 2),
        -c(0, 1, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 0, 1),
        c(0, 1, 0, 1),
    )
}

/// Coefficients `[F(0), F'(0), F''(0)/2, F'''(0)/6]` of `F(s) = det(sA + B)`.
pub fn pencil_cubic(a: &ConicMatrix, b: &ConicMatrix) -> [f64; 4] {
    let (a, b) = (&a.0, &b.0);
    [
        b.determinant(),
        (adjugate(b) * a).trace(),
        (adjugate(a) * b).trace(),
        a.determinant(),
    ]
}

/// `(−F′² + 2 F F″)/F²` at `s = 0` for `F(s) = det(sA + B)`, with `A` the
/// outer and `B` the inner conic, both scaled to unit Frobenius norm.
/// Vanishes exactly when a triangle is inscribed in `A` and circumscribed
/// about `B`.
pub fn cayley_c2_residual(outer: &ConicMatrix, inner: &ConicMatrix) -> Result<f64> {
    let (a, b) = (outer.normalized(), inner.normalized());
    let [f0, f1, f2_half, _] = pencil_cubic(&a, &b);
    if f0.abs() <= 1e-14 {
        return Err(Error::SingularInner);
    }
    Ok((-f1 * f1 + 4.0 * f0 * f2_half) / (f0 * f0))
}

/// `| |c|² − (1 − 2r) |`.
pub fn chapple_check(c: C64, r: f64) -> f64 {
    (c.norm_sqr() - (1.0 - 2.0 * r)).abs()
}

/// Number of inner-boundary points tested against the outer conic.
const CONTAINMENT_SAMPLES: usize = 64;

/// Checks that the ellipse `inner` lies strictly inside `outer`.
pub fn inner_is_contained(outer: &ConicGeneral, inner: &ConicGeneral) -> Result<bool> {
    let e = inner.to_standard()?;
    let inside = outer.evaluate(e.center()).signum();
    Ok((0..CONTAINMENT_SAMPLES).all(|k| {
        let z = e.point_at(std::f64::consts::TAU * k as f64 / CONTAINMENT_SAMPLES as f64);
        outer.evaluate(z).signum() == inside
    }))
}

fn cross(a: C64, b: C64) -> f64 {
    (a.conj() * b).im
}

/// One step of the Poncelet map: the next vertex on `outer` along the
/// tangent to `inner` that keeps `inner` on the left.
pub fn poncelet_step(outer: &ConicGeneral, inner: &ConicGeneral, m_inner: &ConicMatrix, center: C64, z: C64) -> Result<C64> {
    let polar = m_inner.0 * Vector3::new(z.re, z.im, 1.0);
    let line = RealLine::from_cartesian(polar[0], polar[1], polar[2]).map_err(|_| Error::NoTangent)?;
    let touch = inner.intersect_line(&line);
    if touch.len() != 2 {
        return Err(Error::NoTangent);
    }
    let t = touch
        .into_iter()
        .find(|&t| cross(t - z, center - z) > 0.0)
        .ok_or(Error::NoTangent)?;
    let d = t - z;
    let (a, b, _) = outer.restrict_to_line(z, d);
    if a.abs() <= 1e-14 * outer.scale() * d.norm_sqr() {
        return Err(Error::NoTangent);
    }
    Ok(z + d * (-b / a))
}

/// Distance between `z₀` and the vertex reached after `n` Poncelet steps.
pub fn poncelet_closure(outer: &ConicGeneral, inner: &ConicGeneral, z0: C64, n: usize) -> Result<f64> {
    Ok((poncelet_polygon(outer, inner, z0, n)?[n] - z0).norm())
}

/// Vertices `z₀, …, z_n` of the Poncelet iteration.
pub fn poncelet_polygon(outer: &ConicGeneral, inner: &ConicGeneral, z0: C64, n: usize) -> Result<Vec<C64>> {
    let scale = outer.scale() * (1.0 + z0.norm_sqr());
    let res = outer.evaluate(z0);
    if res.abs() > 1e-8 * scale {
        return Err(Error::NotOnConic(res / scale));
    }
    match inner.classify() {
        ConicClass::Ellipse | ConicClass::Circle => {}
        other => return Err(Error::NotAnEllipse(other.to_string())),
    }
    if !inner_is_contained(outer, inner)? {
        return Err(Error::DomainViolation("inner conic is not inside the outer conic".into()));
    }
    let center = inner.to_standard()?.center();
    let m = conic_to_matrix(inner);
    let mut out = Vec::with_capacity(n + 1);
    out.push(z0);
    let mut z = z0;
    for _ in 0..n {
        z = poncelet_step(outer, inner, &m, center, z)?;
        out.push(z);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub points: Vec<C64>,
    /// Consecutive pairs skipped because the lines were parallel.
    pub skipped: usize,
}

/// Intersections of consecutive lines of an ordered family.
pub fn envelope_points_numeric(lines: &[RealLine]) -> Result<Envelope> {
    if lines.len() < 3 {
        return Err(Error::InvalidParameter("at least 3 lines are required".into()));
    }
    let mut env = Envelope { points: Vec::with_capacity(lines.len() - 1), skipped: 0 };
    for pair in lines.windows(2) {
        match pair[0].intersect(&pair[1]) {
            Some(z) => env.points.push(z),
            None => env.skipped += 1,
        }
    }
    Ok(env)
}

/// Envelope point of a smooth line family at parameter `s`, from symmetric
/// neighbour intersections at offsets `h` and `2h` combined by Richardson
/// extrapolation.
pub fn envelope_point<F>(family: &F, s: f64, h: f64) -> Result<C64>
where
    F: Fn(f64) -> Result<RealLine>,
{
    let meet = |h: f64| -> Result<C64> {
        family(s - h)?.intersect(&family(s + h)?).ok_or(Error::AntipodalPoints)
    };
    let (p1, p2) = (meet(h)?, meet(2.0 * h)?);
    Ok((4.0 * p1 - p2) / 3.0)
}

/// Chord from the boundary preimage `e^{iθ}` to the next preimage of
/// `B(e^{iθ})` counterclockwise, pushed forward by `boundary`.
pub fn chord_from_vertex<G>(b: &BlaschkeProduct, boundary: &G, theta: f64) -> Result<RealLine>
where
    G: Fn(C64) -> Result<C64>,
{
    let w1 = C64::from_polar(1.0, theta);
    let w = b.preimages(b.evaluate(w1)?)?;
    let i = (0..w.len())
        .min_by(|&i, &j| (w[i] - w1).norm().total_cmp(&(w[j] - w1).norm()))
        .ok_or(Error::Degenerate)?;
    let next = w[(i + 1) % w.len()];
    RealLine::through(boundary(w1)?, boundary(next)?)
}

/// Envelope of the side family of the boundary polygons, `n` points uniform
/// in the starting-vertex angle.
pub fn polygon_side_envelope<G>(b: &BlaschkeProduct, boundary: &G, n: usize, h: f64, exec: Exec) -> Result<Vec<C64>>
where
    G: Fn(C64) -> Result<C64> + Sync,
{
    let family = |s: f64| chord_from_vertex(b, boundary, s);
    exec.map(n, |k| {
        let s = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
        envelope_point(&family, s, h)
    })
    .into_iter()
    .collect()
}

/// Affine normalization `z ↦ (z − center)/scale` to unit diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub center: C64,
    pub scale: f64,
}

impl Normalization {
    /// Centers at the mean and scales the largest pairwise distance to `1`.
    pub fn unit_diameter(points: &[C64]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::RankDeficient);
        }
        let center = points.iter().sum::<C64>() / points.len() as f64;
        let mut diam = 0.0f64;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                diam = diam.max((a - b).norm());
            }
        }
        if diam == 0.0 || !diam.is_finite() {
            return Err(Error::RankDeficient);
        }
        Ok(Normalization { center, scale: diam })
    }

    pub fn apply(&self, z: C64) -> C64 {
        (z - self.center) / self.scale
    }
}

/// Exponents `(i, j)` of `xⁱ yʲ` with `i + j ≤ degree`, highest degree first.
pub fn monomials(degree: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for total in (0..=degree).rev() {
        for j in 0..=total {
            out.push((total - j, j));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFit {
    pub degree: usize,
    /// Unit-norm coefficients in normalized coordinates, ordered as [`monomials`].
    pub coefficients: Vec<f64>,
    pub normalization: Normalization,
    /// Largest first-order geometric distance `|Q|/|∇Q|` in normalized coordinates.
    pub residual_max: f64,
    pub residual_mean: f64,
    /// Smallest singular value of the design matrix.
    pub singular_value: f64,
}

impl CurveFit {
    pub fn evaluate_normalized(&self, x: f64, y: f64) -> f64 {
        monomials(self.degree)
            .iter()
            .zip(&self.coefficients)
            .map(|(&(i, j), c)| c * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    fn gradient_normalized(&self, x: f64, y: f64) -> (f64, f64) {
        let mut g = (0.0, 0.0);
        for (&(i, j), c) in monomials(self.degree).iter().zip(&self.coefficients) {
            if i > 0 {
                g.0 += c * i as f64 * x.powi(i as i32 - 1) * y.powi(j as i32);
            }
            if j > 0 {
                g.1 += c * j as f64 * x.powi(i as i32) * y.powi(j as i32 - 1);
            }
        }
        g
    }

    /// First-order distance of `z` to the fitted curve, in normalized units.
    pub fn distance(&self, z: C64) -> f64 {
        let n = self.normalization.apply(z);
        let q = self.evaluate_normalized(n.re, n.im);
        let (gx, gy) = self.gradient_normalized(n.re, n.im);
        let g = gx.hypot(gy);
        if g == 0.0 {
            if q == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            q.abs() / g
        }
    }
}

/// Unit-norm least-squares bivariate polynomial of total degree `degree`
/// through `points`.
pub fn fit_algebraic_curve(points: &[C64], degree: usize) -> Result<CurveFit> {
    if degree == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let mons = monomials(degree);
    let m = mons.len();
    if points.len() + 1 < m {
        return Err(Error::RankDeficient);
    }
    let norm = Normalization::unit_diameter(points)?;
    let rows = points.len().max(m);
    let mut design = DMatrix::<f64>::zeros(rows, m);
    for (r, z) in points.iter().enumerate() {
        let n = norm.apply(*z);
        for (c, &(i, j)) in mons.iter().enumerate() {
            design[(r, c)] = n.re.powi(i as i32) * n.im.powi(j as i32);
        }
    }
    let svd = design.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::RankDeficient)?;
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let (smallest, second) = (order[0], order[1]);
    if sv[second] <= 1e-12 * sv[order[order.len() - 1]] {
        return Err(Error::RankDeficient);
    }
    let coefficients: Vec<f64> = v_t.row(smallest).iter().copied().collect();
    let mut fit = CurveFit {
        degree,
        coefficients,
        normalization: norm,
        residual_max: 0.0,
        residual_mean: 0.0,
        singular_value: sv[smallest],
    };
    let d: Vec<f64> = points.iter().map(|&z| fit.distance(z)).collect();
    fit.residual_max = d.iter().copied().fold(0.0, f64::max);
    fit.residual_mean = d.iter().sum::<f64>() / d.len() as f64;
    Ok(fit)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicFit {
    /// The fitted conic in original coordinates.
    pub conic: ConicGeneral,
    pub residual_max: f64,
    pub residual_mean: f64,
    pub curve: CurveFit,
}

/// Least-squares conic through at least 6 points.
pub fn fit_conic(points: &[C64]) -> Result<ConicFit> {
    if points.len() < 6 {
        return Err(Error::RankDeficient);
    }
    let curve = fit_algebraic_curve(points, 2)?;
    // Order: x², xy, y², x, y, 1.
    let c = &curve.coefficients;
    let normalized = Matrix3::new(c[0], 0.5 * c[1], 0.5 * c[3], 0.5 * c[1], c[2], 0.5 * c[4], 0.5 * c[3], 0.5 * c[4], c[5]);
    let Normalization { center, scale } = curve.normalization;
    let t = Matrix3::new(1.0 / scale, 0.0, -center.re / scale, 0.0, 1.0 / scale, -center.im / scale, 0.0, 0.0, 1.0);
    let original = ConicMatrix(t.transpose() * normalized * t).normalized();
    Ok(ConicFit {
        conic: original.to_general(),
        residual_max: curve.residual_max,
        residual_mean: curve.residual_mean,
        curve,
    })
}

/// One named residual compared against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual < tolerance`.
    pub fn below(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check { name: name.into(), residual, tolerance, pass: residual < tolerance }
    }

    /// Passes when `residual > tolerance`.
    pub fn above(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check { name: name.into(), residual, tolerance, pass: residual > tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
