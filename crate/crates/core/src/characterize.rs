//! Membership of a spectral density `g = dμ/dm` in the set of limit points
//! of `μ_t`: mean zero, square integrable, and `‖G_{1/2}^{-1} g‖ ≤ √(2/m₀)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::green::{apply_g_half_inverse, inner_product_l2, SpectralFunction};
use crate::harness::{ball_membership, ellipsoid_from, make_basis};
use crate::scalar::Scalar;

/// Relative slack on the squared comparison `‖G_{1/2}^{-1} g‖² ≤ 2/m₀`; boundary
/// densities are members. Equal to the ellipsoid membership slack, so both
/// predicates flip at the same point.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// A candidate signed measure `μ(dx) = g(x) m(dx)`.
#[derive(Debug, Clone)]
pub struct CandidateDensity<T> {
    pub g: SpectralFunction<T>,
}

impl<T: Scalar> CandidateDensity<T> {
    pub fn new(g: SpectralFunction<T>) -> Self {
        CandidateDensity { g }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// The candidate is a signed measure; always true for an L² density.
    pub cond_a: bool,
    /// `μ(M) = √m₀ g_0 = 0`.
    pub cond_b: bool,
    pub total_mass: f64,
    /// `g ∈ L²`; always true for a finite coefficient vector.
    pub cond_c: bool,
    pub l2_norm: f64,
    /// `‖G_{1/2}^{-1} g‖_{L²} ≤ √(2/m₀)`, evaluated on the mean-zero part.
    pub cond_d: bool,
    pub half_inverse_norm: f64,
    pub threshold: f64,
    /// `threshold − half_inverse_norm`.
    pub margin: f64,
    pub verdict: bool,
}

/// Evaluates conditions (a)-(d); every input yields a report.
pub fn check<T: Scalar>(candidate: &CandidateDensity<T>) -> CheckReport {
    let g = &candidate.g;
    let m0 = g.spectrum().volume().as_f64();
    let l2_norm = g.coeffs().iter().map(|c| c.as_f64().powi(2)).sum::<f64>().sqrt();
    let half = apply_g_half_inverse(&g.centered()).expect("centered density is mean-zero");
    let sq: f64 = half.function.coeffs().iter().map(|c| c.as_f64().powi(2)).sum();
    let threshold = (2.0 / m0).sqrt();
    let cond_b = g.is_mean_zero();
    let cond_c = l2_norm.is_finite();
    let cond_d = sq <= (2.0 / m0) * (1.0 + BOUNDARY_TOLERANCE);
    let half_inverse_norm = sq.sqrt();
    CheckReport {
        cond_a: true,
        cond_b,
        total_mass: g.integral().as_f64(),
        cond_c,
        l2_norm,
        cond_d,
        half_inverse_norm,
        threshold,
        margin: threshold - half_inverse_norm,
        verdict: cond_b && cond_c && cond_d,
    }
}

/// `μ(f) = (g, f)_{L²}`.
pub fn mu_of<T: Scalar>(candidate: &CandidateDensity<T>, f: &SpectralFunction<T>) -> Result<T> {
    inner_product_l2(&candidate.g, f)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallEquivalenceReport {
    /// Number of modes `N` carried by the density.
    pub n: usize,
    /// `Σ_{k≤N} (λ_k/2) g_k²`, the square of the condition (d) norm.
    pub cond_d_sum: f64,
    /// `Σ_{k≤N} μ(f_k)²` for the default basis.
    pub ball_sum: f64,
    pub discrepancy: f64,
    pub cond_d: bool,
    /// Form value of `(μ(f_1), …, μ(f_N))` in the default ellipsoid.
    pub form: f64,
    pub ball_member: bool,
    pub agree: bool,
}

/// Compares condition (d) with ball membership of `(μ(f_1), …, μ(f_N))`.
pub fn ball_equivalence_check(candidate: &CandidateDensity<f64>, n_max: usize) -> Result<BallEquivalenceReport> {
    let g = &candidate.g;
    if !g.is_mean_zero() {
        return Err(Error::NotMeanZero(g.coeff(0)));
    }
    let n = g.spectrum().len() - 1;
    if n > n_max {
        return Err(Error::BasisTooLarge { requested: n, available: n_max });
    }
    let report = check(candidate);
    let cond_d_sum = report.half_inverse_norm * report.half_inverse_norm;
    let (ball_sum, form, ball_member) = if n == 0 {
        (0.0, 0.0, true)
    } else {
        let basis = make_basis(g.spectrum(), n)?;
        let v = basis.functions.iter().map(|f| mu_of(candidate, f)).collect::<Result<Vec<_>>>()?;
        let m = ball_membership(&v, &ellipsoid_from(&basis.functions)?)?;
        (v.iter().map(|x| x * x).sum(), m.form, m.member)
    };
    Ok(BallEquivalenceReport {
        n,
        cond_d_sum,
        ball_sum,
        discrepancy: (cond_d_sum - ball_sum).abs(),
        cond_d: report.cond_d,
        form,
        ball_member,
        agree: report.cond_d == ball_member,
    })
}
