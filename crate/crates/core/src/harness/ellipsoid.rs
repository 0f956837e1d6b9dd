use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::green::{green_bilinear, SpectralFunction};

/// Largest accepted condition number of the Green-Gram matrix.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// Slack on `Σ a_ij v_i v_j ≤ 1`, so boundary points count as members.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-12;

/// `E = {z : Σ a_ij z_i z_j ≤ 1}` with `a = (m₀/2) B^{-1}`, `B_ij = (f_i, G f_j)`.
///
/// This scaling makes `E` the ball of radius `√(2/m₀)` when `B = I`, matching
/// `limsup μ_t(f) = √((2/m₀)(Gf, f))` along every direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidSpec {
    pub n: usize,
    /// Row-major `a_ij`.
    pub a: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub form: f64,
    pub member: bool,
}

/// Ellipsoid of the functions `f_1..f_n`; rejects (nearly) dependent families.
pub fn ellipsoid_from(functions: &[SpectralFunction<f64>]) -> Result<EllipsoidSpec> {
    let n = functions.len();
    let Some(first) = functions.first() else {
        return Err(Error::InvalidConfig("ellipsoid needs at least one function".into()));
    };
    let m0 = first.spectrum().volume();
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = green_bilinear(&functions[i], &functions[j])?;
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    let eig = b.clone().symmetric_eigen().eigenvalues;
    let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e.abs())));
    let cond = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(cond <= MAX_GRAM_CONDITION) {
        return Err(Error::SingularGram(cond));
    }
    let inv = b.cholesky().ok_or(Error::SingularGram(cond))?.inverse();
    let mut a = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(m0 / 2.0 * 0.5 * (inv[(i, j)] + inv[(j, i)]));
        }
    }
    Ok(EllipsoidSpec { n, a })
}

impl EllipsoidSpec {
    pub fn form(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        let m = DMatrix::from_row_slice(self.n, self.n, &self.a);
        let z = DVector::from_column_slice(v);
        Ok(z.dot(&(m * &z)))
    }
}

/// Quadratic form value and the predicate `form ≤ 1`.
pub fn ball_membership(v: &[f64], e: &EllipsoidSpec) -> Result<Membership> {
    let form = e.form(v)?;
    Ok(Membership { form, member: form <= 1.0 + MEMBERSHIP_TOLERANCE })
}
