//! One function per subcommand. Each returns the artifacts to write and
//! whether every check passed.

use std::f64::consts::{PI, TAU};

use poncelet_core::blaschke::{arg_2pi, BlaschkeProduct, Circle};
use poncelet_core::conic::{ConicGeneral, EllipseStandard};
use poncelet_core::jacobi::{non_ellipse_experiment, CONTROL_THRESHOLD, ENVELOPE_STEP};
use poncelet_core::joukowski::{
    cayley_quadratic, cayley_r, centroid_locus_elliptic, interior_curve_elliptic, interior_r, select_inscribed_r, CentroidLocus,
};
use poncelet_core::mapped::{BlaschkeLike, BoundaryMap, SamplePoint, UnitDisk};
use poncelet_core::parabolic::interior_curve_parabolic;
use poncelet_core::verify::{
    cayley_c2_residual, chapple_check, conic_to_matrix, fit_algebraic_curve, fit_conic, inner_is_contained, polygon_side_envelope,
    poncelet_closure, poncelet_polygon, Check, Report,
};
use poncelet_core::{Exec, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Boundary, BoundarySpec, Product};
use crate::error::CliError;
use crate::output::{Artifacts, Geometry};

const TANGENCY_TOL: f64 = 1e-8;
const ENVELOPE_TOL: f64 = 1e-6;
const CLOSURE_TOL: f64 = 1e-7;
const CAYLEY_TOL: f64 = 1e-7;
const CENTROID_TOL: f64 = 1e-8;
const RATIO_TOL: f64 = 1e-10;
const FIT_TOL: f64 = 1e-6;
const CHAPPLE_TOL: f64 = 1e-12;
/// A rejected Cayley root must miss closure by more than this.
const REJECT_GAP: f64 = 1e-3;
const CLOSURE_STARTS: usize = 20;
const PLOT_POLYGONS: usize = 12;
const PLOT_CURVE_POINTS: usize = 240;
const PLOT_BOUNDARY_POINTS: usize = 720;

pub struct Job {
    pub spec: BoundarySpec,
    pub boundary: Boundary,
    pub product: Option<Product>,
    pub samples: usize,
    pub tol: Option<f64>,
    pub seed: u64,
    pub exec: Exec,
}

pub type Outcome = Result<(Artifacts, bool), CliError>;

macro_rules! with_map {
    ($boundary:expr, $b:expr, |$m:ident| $body:expr) => {
        match $boundary {
            Boundary::Disk => {
                let $m = BlaschkeLike::new($b.clone(), UnitDisk);
                Some($body)
            }
            Boundary::Ellipse(t) => {
                let $m = BlaschkeLike::new($b.clone(), t);
                Some($body)
            }
            Boundary::Parabola(t) => {
                let $m = BlaschkeLike::new($b.clone(), t);
                Some($body)
            }
            Boundary::Jacobi(_) => None,
        }
    };
}

impl Job {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn product(&self) -> Result<&Product, CliError> {
        self.product.as_ref().ok_or_else(|| CliError::Validation("--zeros is required".into()))
    }

    fn inputs(&self) -> Value {
        let product = self.product.as_ref().map(|p| match &p.general {
            None => json!({ "zeros": p.canonical.zeros() }),
            Some((g, pair)) => json!({
                "zeros": g.zeros,
                "theta": g.theta,
                "canonical_zeros": p.canonical.zeros(),
                "mobius": pair,
            }),
        });
        json!({
            "boundary": self.spec,
            "blaschke": product,
            "samples": self.samples,
            "tol": self.tol,
            "seed": self.seed,
        })
    }

    fn unsupported(&self, what: &str) -> CliError {
        CliError::Validation(format!("{what} is not available for boundary {}", self.spec))
    }

    fn require_degree(&self, d: usize, want: usize, what: &str) -> Result<(), CliError> {
        if d != want {
            return Err(CliError::Validation(format!("{what} needs a degree-{want} product, got degree {d}")));
        }
        Ok(())
    }

    fn starts(&self, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        // Stays off w = −1, the pole of the parabolic boundary map.
        (0..n).map(|_| rng.random_range(-3.0..3.0)).collect()
    }
}

fn vertex_angle(n: usize, k: usize) -> f64 {
    TAU * (k as f64 + 0.5) / n as f64
}

/// Closed-form degree-3 interior conic for the boundary, if there is one.
fn closed_interior(boundary: &Boundary, b: &BlaschkeProduct) -> Result<Option<ConicGeneral>, CliError> {
    let z = b.zeros();
    if b.degree() != 3 {
        return Ok(None);
    }
    Ok(match boundary {
        Boundary::Disk => Some(b.interior_curve()?),
        Boundary::Ellipse(t) => Some(interior_curve_elliptic(z[0], z[1], *t)),
        Boundary::Parabola(t) => Some(interior_curve_parabolic(z[0], z[1], *t)),
        Boundary::Jacobi(_) => None,
    })
}

fn outer_conic(boundary: &Boundary) -> Option<ConicGeneral> {
    match boundary {
        Boundary::Disk => Some(UnitDisk.boundary_conic()),
        Boundary::Ellipse(t) => Some(t.ellipse()),
        Boundary::Parabola(t) => Some(t.parabola()),
        Boundary::Jacobi(_) => None,
    }
}

/// `|g| / |∇g|`, a first-order distance from `z` to the conic.
fn conic_distance(c: &ConicGeneral, z: C64) -> f64 {
    let dz = c.p * z + 2.0 * c.u * z.conj() + c.v;
    c.evaluate(z).abs() / (2.0 * dz.norm())
}

fn side_envelope(job: &Job, b: &BlaschkeProduct) -> Result<Vec<SamplePoint>, CliError> {
    let boundary = job.boundary;
    let forward = |w: C64| boundary.forward(w);
    let n = job.samples;
    let points = polygon_side_envelope(b, &forward, n, ENVELOPE_STEP, job.exec)?;
    points
        .into_iter()
        .enumerate()
        .map(|(k, z)| Ok(SamplePoint { z, arg_lambda: arg_2pi(b.evaluate(C64::from_polar(1.0, vertex_angle(n, k)))?) }))
        .collect()
}

fn ellipse_points(e: &EllipseStandard) -> Vec<C64> {
    (0..=PLOT_CURVE_POINTS).map(|j| e.point_at(TAU * j as f64 / PLOT_CURVE_POINTS as f64)).collect()
}

fn circle_points(c: &Circle) -> Vec<C64> {
    (0..=PLOT_CURVE_POINTS)
        .map(|j| c.center + C64::from_polar(c.radius, TAU * j as f64 / PLOT_CURVE_POINTS as f64))
        .collect()
}

/// Boundary polylines, cut wherever a point is undefined or beyond `clip`.
fn boundary_lines(boundary: &Boundary, clip: f64) -> Vec<Vec<C64>> {
    let mut lines = Vec::new();
    let mut current = Vec::new();
    for j in 0..=PLOT_BOUNDARY_POINTS {
        let w = C64::from_polar(1.0, -PI + TAU * j as f64 / PLOT_BOUNDARY_POINTS as f64);
        match boundary.forward(w) {
            Ok(z) if z.norm() <= clip => current.push(z),
            _ if !current.is_empty() => lines.push(std::mem::take(&mut current)),
            _ => {}
        }
    }
    if !current.is_empty() {
        lines.push(current);
    }
    lines
}

/// Plot radius for unbounded boundaries, from the data they frame.
fn clip_radius<'a>(boundary: &Boundary, data: impl Iterator<Item = &'a C64>) -> f64 {
    if boundary.is_bounded() {
        return f64::INFINITY;
    }
    1.5 * data.map(|z| z.norm()).filter(|r| r.is_finite()).fold(2.0 / 1.5, f64::max)
}

fn polygon_edges(vertices: &[C64]) -> Vec<[C64; 2]> {
    let d = vertices.len();
    (0..d).map(|i| [vertices[i], vertices[(i + 1) % d]]).collect()
}

/// Sides of a few boundary polygons.
fn sample_chords(boundary: &Boundary, b: &BlaschkeProduct) -> Vec<[C64; 2]> {
    let mut chords = Vec::new();
    for j in 0..PLOT_POLYGONS {
        let lambda = C64::from_polar(1.0, vertex_angle(PLOT_POLYGONS, j));
        let Ok(w) = b.preimages(lambda) else { continue };
        let Ok(z) = w.iter().map(|&w| boundary.forward(w)).collect::<poncelet_core::Result<Vec<_>>>() else { continue };
        chords.extend(polygon_edges(&z));
    }
    chords
}

fn standard_json(e: &EllipseStandard) -> Value {
    json!({
        "f1": e.f1,
        "f2": e.f2,
        "r": e.r,
        "center": e.center(),
        "semi_major": e.semi_major(),
        "semi_minor": e.semi_minor(),
    })
}

fn finish(name: &'static str, job: &Job, mut body: Value, report: &Report, geometry: Geometry, points: Vec<SamplePoint>) -> Outcome {
    let pass = report.pass();
    let map = body.as_object_mut().expect("report body is an object");
    map.insert("command".into(), json!(name));
    map.insert("inputs".into(), job.inputs());
    map.insert("checks".into(), json!(report.checks));
    map.insert("pass".into(), json!(pass));
    map.insert("geometry".into(), serde_json::to_value(geometry)?);
    Ok((Artifacts { name, report: body, points }, pass))
}

pub fn interior_curve(job: &Job) -> Outcome {
    let b = &job.product()?.canonical;
    let closed = closed_interior(&job.boundary, b)?;
    let envelope = side_envelope(job, b)?;
    let mut report = Report::default();
    let mut curves = Vec::new();
    let mut closed_json = Value::Null;
    let mut fit_json = Value::Null;
    if let Some(c) = closed {
        let tangency = with_map!(job.boundary, b, |m| m.max_chord_tangency(&c, job.samples, job.exec)?).expect("closed form implies a boundary map");
        report.push(Check::below("chord_tangency", tangency, job.tol(TANGENCY_TOL)));
        let on_curve = envelope.iter().map(|p| conic_distance(&c, p.z)).fold(0.0, f64::max);
        report.push(Check::below("envelope_on_curve", on_curve, job.tol(ENVELOPE_TOL)));
        let standard = c.to_standard().ok();
        if let Some(e) = &standard {
            curves.push(ellipse_points(e));
        }
        closed_json = json!({
            "general": c,
            "class": c.classify(),
            "standard": standard.as_ref().map(standard_json),
        });
    } else {
        let coords: Vec<C64> = envelope.iter().map(|p| p.z).collect();
        if let Ok(f) = fit_conic(&coords) {
            fit_json = json!({ "conic": f.conic, "residual_max": f.residual_max, "residual_mean": f.residual_mean });
        }
    }
    let clip = clip_radius(&job.boundary, envelope.iter().map(|p| &p.z).chain(curves.iter().flatten()));
    let geometry = Geometry {
        boundary: boundary_lines(&job.boundary, clip),
        chords: sample_chords(&job.boundary, b),
        curves,
    };
    let body = json!({
        "degree": b.degree(),
        "closed_form": closed_json,
        "envelope": { "points": envelope.len(), "conic_fit": fit_json },
    });
    finish("interior-curve", job, body, &report, geometry, envelope)
}

pub fn exterior_curve(job: &Job, fit_radius: f64) -> Outcome {
    let b = &job.product()?.canonical;
    let d = b.degree();
    if d < 2 {
        return Err(CliError::Validation("exterior-curve needs degree at least 2".into()));
    }
    let samples = with_map!(job.boundary, b, |m| m.exterior_curve_samples(job.samples, 1e-9, job.exec)?)
        .ok_or_else(|| job.unsupported("exterior-curve"))?;
    let (total, skipped) = (samples.points.len(), samples.skipped);
    let kept = samples.within(fit_radius);
    let coords = kept.coordinates();
    let tol = job.tol(FIT_TOL);
    let mut fits = Vec::new();
    let mut best: Option<(usize, f64)> = None;
    let mut last_residual = f64::INFINITY;
    for degree in 1..d {
        match fit_algebraic_curve(&coords, degree) {
            Ok(f) => {
                fits.push(json!({ "degree": degree, "residual_max": f.residual_max, "residual_mean": f.residual_mean }));
                last_residual = f.residual_max;
                if f.residual_max < tol {
                    best = Some((degree, f.residual_max));
                    break;
                }
            }
            Err(e) => fits.push(json!({ "degree": degree, "error": e.to_string() })),
        }
    }
    let mut report = Report::default();
    report.push(Check {
        name: "fit_degree_at_most_d_minus_1".into(),
        residual: best.map_or(last_residual, |(_, r)| r),
        tolerance: tol,
        pass: best.is_some(),
    });
    let clip = clip_radius(&job.boundary, coords.iter());
    let geometry = Geometry { boundary: boundary_lines(&job.boundary, clip), ..Default::default() };
    let body = json!({
        "degree": d,
        "fit_radius": fit_radius,
        "samples_total": total,
        "skipped_parallel_tangents": skipped,
        "samples_fitted": coords.len(),
        "fits": fits,
        "fitted_degree": best.map(|(deg, _)| deg),
    });
    finish("exterior-curve", job, body, &report, geometry, kept.points)
}

pub fn centroid_locus(job: &Job) -> Outcome {
    let b = &job.product()?.canonical;
    let (n, exec) = (job.samples, job.exec);
    let mut report = Report::default();
    let (locus_json, ratio_json, samples, residual, curves) = match job.boundary {
        Boundary::Disk => {
            let circle = b.centroid_circle();
            let samples = BlaschkeLike::new(b.clone(), UnitDisk).centroid_samples(n, exec)?;
            let residual = samples.iter().map(|s| circle.residual(s.z)).fold(0.0, f64::max);
            let kind = if circle.is_point() { "point" } else { "circle" };
            let curves = if circle.is_point() { vec![] } else { vec![circle_points(&circle)] };
            (json!({ "kind": kind, "circle": circle }), Value::Null, samples, residual, curves)
        }
        Boundary::Ellipse(t) => {
            let locus = centroid_locus_elliptic(b, t);
            let samples = BlaschkeLike::new(b.clone(), t).centroid_samples(n, exec)?;
            let residual = samples.iter().map(|s| locus.residual(s.z)).fold(0.0, f64::max);
            let mut curves = Vec::new();
            let mut ratio = Value::Null;
            if let CentroidLocus::Ellipse { ellipse } = &locus {
                let measured = ellipse.semi_minor() / ellipse.semi_major();
                report.push(Check::below("axis_ratio", (measured - t.axis_ratio()).abs(), job.tol(RATIO_TOL)));
                ratio = json!({ "measured": measured, "predicted": t.axis_ratio() });
                curves.push(ellipse_points(ellipse));
            }
            (json!(locus), ratio, samples, residual, curves)
        }
        _ => return Err(job.unsupported("centroid-locus")),
    };
    report.checks.insert(0, Check::below("centroid_on_locus", residual, job.tol(CENTROID_TOL)));
    let geometry = Geometry {
        boundary: boundary_lines(&job.boundary, f64::INFINITY),
        chords: sample_chords(&job.boundary, b),
        curves,
    };
    let body = json!({ "degree": b.degree(), "locus": locus_json, "similarity_ratio": ratio_json });
    finish("centroid-locus", job, body, &report, geometry, samples)
}

fn scaled_about_center(c: &ConicGeneral, s: f64) -> Result<ConicGeneral, CliError> {
    let e = c.to_standard()?;
    let m = e.center();
    Ok(EllipseStandard::new(m + s * (e.f1 - m), m + s * (e.f2 - m), s * e.r)?.to_general())
}

pub fn verify(job: &Job, inner_scale: f64) -> Outcome {
    let b = &job.product()?.canonical;
    job.require_degree(b.degree(), 3, "verify")?;
    if !(inner_scale > 0.0 && inner_scale.is_finite()) {
        return Err(CliError::Validation(format!("--inner-scale must be positive, got {inner_scale}")));
    }
    let outer = outer_conic(&job.boundary).ok_or_else(|| job.unsupported("verify"))?;
    let closed = closed_interior(&job.boundary, b)?.expect("degree 3 on a conic boundary");
    let inner = if inner_scale == 1.0 { closed } else { scaled_about_center(&closed, inner_scale)? };

    let mut report = Report::default();
    let mut errors = Vec::new();
    let tangency = with_map!(job.boundary, b, |m| m.max_chord_tangency(&inner, job.samples, job.exec)?).expect("conic boundary");
    report.push(Check::below("chord_tangency", tangency, job.tol(TANGENCY_TOL)));

    let starts: Vec<C64> =
        job.starts(CLOSURE_STARTS).into_iter().map(|s| job.boundary.forward(C64::from_polar(1.0, s))).collect::<Result<_, _>>()?;
    let mut closure = 0.0f64;
    for &z0 in &starts {
        match poncelet_closure(&outer, &inner, z0, 3) {
            Ok(d) => closure = closure.max(d),
            Err(e) => {
                errors.push(format!("closure from {z0}: {e}"));
                closure = f64::INFINITY;
            }
        }
    }
    report.push(Check::below("poncelet_closure", closure, job.tol(CLOSURE_TOL)));

    let c2 = cayley_c2_residual(&conic_to_matrix(&outer), &conic_to_matrix(&inner))?;
    report.push(Check::below("cayley_c2", c2.abs(), job.tol(CAYLEY_TOL)));

    let centroid = match job.boundary {
        Boundary::Disk => {
            let circle = b.centroid_circle();
            let s = BlaschkeLike::new(b.clone(), UnitDisk).centroid_samples(job.samples, job.exec)?;
            Some(s.iter().map(|p| circle.residual(p.z)).fold(0.0, f64::max))
        }
        Boundary::Ellipse(t) => {
            let locus = centroid_locus_elliptic(b, t);
            let s = BlaschkeLike::new(b.clone(), t).centroid_samples(job.samples, job.exec)?;
            Some(s.iter().map(|p| locus.residual(p.z)).fold(0.0, f64::max))
        }
        _ => None,
    };
    if let Some(r) = centroid {
        report.push(Check::below("centroid_on_locus", r, job.tol(CENTROID_TOL)));
    }

    let mut chords = Vec::new();
    for &z0 in starts.iter().take(3) {
        if let Ok(poly) = poncelet_polygon(&outer, &inner, z0, 3) {
            chords.extend(poly.windows(2).map(|w| [w[0], w[1]]));
        }
    }
    let curves = inner.to_standard().map(|e| vec![ellipse_points(&e)]).unwrap_or_default();
    let clip = clip_radius(&job.boundary, curves.iter().flatten().chain(chords.iter().flatten()));
    let geometry = Geometry { boundary: boundary_lines(&job.boundary, clip), chords, curves };
    let body = json!({
        "inner_scale": inner_scale,
        "inner": inner,
        "inner_contained": inner_is_contained(&outer, &inner).ok(),
        "errors": errors,
    });
    finish("verify", job, body, &report, geometry, Vec::new())
}

pub fn verify_chapple(job: &Job, center: C64, radius: f64) -> Outcome {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(CliError::Validation(format!("--radius must lie in (0, 1), got {radius}")));
    }
    let mut report = Report::default();
    report.push(Check::below("chapple", chapple_check(center, radius), job.tol(CHAPPLE_TOL)));
    let circle = Circle { center, radius };
    let unit = Circle { center: C64::new(0.0, 0.0), radius: 1.0 };
    let inner = EllipseStandard::circle(center, radius)?.to_general();
    let chords = poncelet_polygon(&UnitDisk.boundary_conic(), &inner, C64::new(1.0, 0.0), 3)
        .map(|p| p.windows(2).map(|w| [w[0], w[1]]).collect())
        .unwrap_or_default();
    let geometry = Geometry { boundary: vec![circle_points(&unit)], chords, curves: vec![circle_points(&circle)] };
    let body = json!({ "check": "chapple", "center": center, "radius": radius });
    finish("verify", job, body, &report, geometry, Vec::new())
}

pub fn cayley(job: &Job) -> Outcome {
    let Boundary::Ellipse(t) = job.boundary else {
        return Err(job.unsupported("cayley"));
    };
    let b = &job.product()?.canonical;
    job.require_degree(b.degree(), 3, "cayley")?;
    let z = b.zeros();
    let ir = interior_r(z[0], z[1], t)?;
    let (qa, qb, qc) = cayley_quadratic(ir.f1, ir.f2, t);
    let (r_small, r_large) = cayley_r(ir.f1, ir.f2, t)?;
    let selection = select_inscribed_r(ir.f1, ir.f2, t, &job.starts(8))?;
    let outer = conic_to_matrix(&t.ellipse());
    let c2 = |r: f64| -> Option<f64> {
        let e = EllipseStandard::new(ir.f1, ir.f2, r).ok()?;
        cayley_c2_residual(&outer, &conic_to_matrix(&e.to_general())).ok()
    };
    let (accepted, rejected) = (selection.accepted, selection.rejected);

    let mut report = Report::default();
    report.push(Check::below("accepted_matches_closed_form", (accepted.r - ir.r).abs(), job.tol(CLOSURE_TOL)));
    report.push(Check::below("accepted_closes", accepted.closure.unwrap_or(f64::INFINITY), job.tol(CLOSURE_TOL)));
    report.push(Check::below("accepted_cayley_c2", c2(accepted.r).map_or(f64::INFINITY, f64::abs), job.tol(CAYLEY_TOL)));
    report.push(Check::above("rejected_misses_closure", rejected.closure.unwrap_or(f64::INFINITY), REJECT_GAP));

    let curves = [accepted.r, rejected.r]
        .iter()
        .filter_map(|&r| EllipseStandard::new(ir.f1, ir.f2, r).ok())
        .map(|e| ellipse_points(&e))
        .collect();
    let geometry = Geometry { boundary: boundary_lines(&job.boundary, f64::INFINITY), chords: Vec::new(), curves };
    let body = json!({
        "foci": [ir.f1, ir.f2],
        "closed_form_r": ir.r,
        "quadratic": { "a": qa, "b": qb, "c": qc },
        "roots": [r_small, r_large],
        "accepted": { "r": accepted.r, "closure": accepted.closure, "cayley_c2": c2(accepted.r) },
        "rejected": { "r": rejected.r, "closure": rejected.closure, "cayley_c2": c2(rejected.r) },
    });
    finish("cayley", job, body, &report, geometry, Vec::new())
}

pub fn jacobi_experiment(job: &Job) -> Outcome {
    let Boundary::Jacobi(param) = job.boundary else {
        return Err(job.unsupported("jacobi-experiment"));
    };
    let b = &job.product()?.canonical;
    let n = job.samples;
    let result = non_ellipse_experiment(&param, b, n, job.exec)?;
    let mut report = Report::default();
    report.push(Check::below("control_fit", result.control_fit_residual_max, job.tol(CONTROL_THRESHOLD)));
    let points = result
        .envelope
        .iter()
        .enumerate()
        .map(|(k, &z)| Ok(SamplePoint { z, arg_lambda: arg_2pi(b.evaluate(C64::from_polar(1.0, vertex_angle(n, k)))?) }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let geometry = Geometry {
        boundary: boundary_lines(&job.boundary, f64::INFINITY),
        chords: sample_chords(&job.boundary, b),
        curves: Vec::new(),
    };
    let body = serde_json::to_value(&result)?;
    finish("jacobi-experiment", job, body, &report, geometry, points)
}
