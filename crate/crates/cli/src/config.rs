//! Command-line value parsing and validated job configuration.

use std::fmt;
use std::str::FromStr;

use poncelet_core::blaschke::{BlaschkeProduct, GeneralBlaschke, MobiusPair};
use poncelet_core::jacobi::{solve_params, InteriorMapParam};
use poncelet_core::joukowski::JoukowskiParam;
use poncelet_core::parabolic::ParabolaParam;
use poncelet_core::C64;
use serde::Serialize;

use crate::error::CliError;

/// Parses `a`, `bi`, `a+bi` or `a-bi` with no spaces; `i` alone means `1i`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let bad = || format!("cannot parse complex number {s:?}");
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().filter(|x| x.is_finite()).map(C64::from).ok_or_else(bad);
    };
    // The split is the last sign that is not the sign of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    let z = match split {
        Some(j) => C64::new(body[..j].parse::<f64>().map_err(|_| bad())?, imag(&body[j..])?),
        None => C64::new(0.0, imag(body)?),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

pub fn parse_complex_list(s: &str) -> Result<Vec<C64>, String> {
    s.split(',').map(parse_complex).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundarySpec {
    Disk,
    Ellipse(f64),
    Parabola(f64),
    Jacobi(f64),
}

impl FromStr for BoundarySpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, value) = match s.split_once(':') {
            Some((k, v)) => (k, Some(v)),
            None => (s, None),
        };
        let number = || -> Result<f64, String> {
            let v = value.ok_or_else(|| format!("boundary {kind:?} needs a parameter, e.g. {kind}:0.5"))?;
            v.parse::<f64>().map_err(|_| format!("cannot parse boundary parameter {v:?}"))
        };
        match kind {
            "disk" if value.is_none() => Ok(BoundarySpec::Disk),
            "ellipse" => Ok(BoundarySpec::Ellipse(number()?)),
            "parabola" => Ok(BoundarySpec::Parabola(number()?)),
            "jacobi" => Ok(BoundarySpec::Jacobi(number()?)),
            _ => Err(format!("unknown boundary {s:?}; expected disk, ellipse:t, parabola:t or jacobi:p")),
        }
    }
}

impl fmt::Display for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundarySpec::Disk => write!(f, "disk"),
            BoundarySpec::Ellipse(t) => write!(f, "ellipse:{t}"),
            BoundarySpec::Parabola(t) => write!(f, "parabola:{t}"),
            BoundarySpec::Jacobi(p) => write!(f, "jacobi:{p}"),
        }
    }
}

impl Serialize for BoundarySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A boundary with validated parameters.
#[derive(Debug, Clone, Copy)]
pub enum Boundary {
    Disk,
    Ellipse(JoukowskiParam),
    Parabola(ParabolaParam),
    Jacobi(InteriorMapParam),
}

impl Boundary {
    pub fn resolve(spec: BoundarySpec) -> Result<Self, CliError> {
        Ok(match spec {
            BoundarySpec::Disk => Boundary::Disk,
            BoundarySpec::Ellipse(t) => Boundary::Ellipse(JoukowskiParam::new(t).map_err(CliError::validation)?),
            BoundarySpec::Parabola(t) => Boundary::Parabola(ParabolaParam::new(t).map_err(CliError::validation)?),
            BoundarySpec::Jacobi(p) => {
                if !(p > 0.0 && p < 1.0) {
                    return Err(CliError::Validation(format!("jacobi parameter p = {p} must lie in (0, 1)")));
                }
                Boundary::Jacobi(solve_params(p)?)
            }
        })
    }

    /// The boundary parametrization by the unit circle.
    pub fn forward(&self, w: C64) -> poncelet_core::Result<C64> {
        match self {
            Boundary::Disk => Ok(w),
            Boundary::Ellipse(t) => Ok(t.phi_boundary(w)),
            Boundary::Parabola(t) => t.boundary_transform(w),
            Boundary::Jacobi(m) => m.gamma_extended(w),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Boundary::Parabola(_))
    }
}

/// The canonical product to work with, and the general one it came from.
#[derive(Debug, Clone)]
pub struct Product {
    pub canonical: BlaschkeProduct,
    pub general: Option<(GeneralBlaschke, MobiusPair)>,
}

impl Product {
    /// Without `theta` the zeros are the nonzero zeros of a canonical
    /// product; with it they are all zeros of `e^{iθ} ∏ (z − a)/(1 − ā z)`.
    pub fn build(zeros: Vec<C64>, theta: Option<f64>) -> Result<Self, CliError> {
        match theta {
            None => Ok(Product { canonical: BlaschkeProduct::new(zeros).map_err(CliError::validation)?, general: None }),
            Some(theta) => {
                let g = GeneralBlaschke::new(zeros, theta).map_err(CliError::validation)?;
                let (canonical, pair) = g.canonicalize().map_err(CliError::validation)?;
                Ok(Product { canonical, general: Some((g, pair)) })
            }
        }
    }
}
