//! Dense complex polynomials and an all-roots solver.
//!
//! Roots come from the eigenvalues of the companion matrix (complex Schur
//! form) and are then refined with a few Newton steps on the polynomial.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Coefficients in ascending order: `c[0] + c[1] z + … + c[n] zⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<C64>);

impl Poly {
    pub fn one() -> Self {
        Poly(vec![C64::new(1.0, 0.0)])
    }

    /// `∏ (z − r)`.
    pub fn from_roots(roots: &[C64]) -> Self {
        roots.iter().fold(Poly::one(), |acc, &r| acc.mul_linear(-r, C64::new(1.0, 0.0)))
    }

    /// Multiplies by `c0 + c1 z`.
    pub fn mul_linear(&self, c0: C64, c1: C64) -> Self {
        let mut out = vec![C64::new(0.0, 0.0); self.0.len() + 1];
        for (i, &a) in self.0.iter().enumerate() {
            out[i] += a * c0;
            out[i + 1] += a * c1;
        }
        Poly(out)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.0.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for &c in self.0.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = C64::new(0.0, 0.0);
        Poly(
            (0..n)
                .map(|i| *self.0.get(i).unwrap_or(&zero) - *other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly(self.0.iter().map(|&c| c * s).collect())
    }

    /// All complex roots. The leading coefficient must be nonzero.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let n = self.degree();
        let lead = *self.0.last().ok_or_else(|| Error::InvalidParameter("empty polynomial".into()))?;
        if lead.norm() == 0.0 {
            return Err(Error::InvalidParameter("leading coefficient is zero".into()));
        }
        match n {
            0 => return Ok(Vec::new()),
            1 => return Ok(vec![-self.0[0] / lead]),
            _ => {}
        }
        let monic: Vec<C64> = self.0.iter().map(|&c| c / lead).collect();
        let mut companion = DMatrix::<C64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        for i in 0..n {
            companion[(i, n - 1)] = -monic[i];
        }
        let schur = companion.schur();
        let (_, t) = schur.unpack();
        let mut roots: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
        for r in roots.iter_mut() {
            *r = self.newton_polish(*r, 4);
        }
        Ok(roots)
    }

    fn newton_polish(&self, mut z: C64, steps: usize) -> C64 {
        for _ in 0..steps {
            let (p, dp) = self.eval_with_derivative(z);
            if dp.norm() == 0.0 || p.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let candidate = z - step;
            // Only accept steps that do not increase the residual.
            if self.eval(candidate).norm() <= p.norm() {
                z = candidate;
            } else {
                break;
            }
        }
        z
    }
}
