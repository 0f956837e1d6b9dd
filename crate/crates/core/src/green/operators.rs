//! Fractional Green operators `G_α = (-Δ/2)^{-α}` on mean-zero functions and
//! the Sobolev scale `H₀^α` they generate, all as diagonal multipliers in the
//! eigenbasis.

use crate::error::{Error, Result};
use crate::manifold::Spectrum;
use crate::scalar::Scalar;

use super::SpectralFunction;

/// Which diagonal operator to apply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorTag<T> {
    /// `G_α φ_n = 2^α λ_n^{-α} φ_n`, `G_α φ_0 = 0`.
    GAlpha(T),
    /// `G_{1/2}^{-1} φ_n = √(λ_n/2) φ_n` on L²₀.
    GHalfInverse,
}

impl<T: Scalar> OperatorTag<T> {
    /// Multiplier on the eigenspace of `λ > 0`.
    pub fn multiplier(&self, lambda: T) -> T {
        match *self {
            OperatorTag::GAlpha(alpha) => g_alpha_multiplier(lambda, alpha),
            OperatorTag::GHalfInverse => (lambda / T::of(2.0)).sqrt(),
        }
    }

    pub fn apply(&self, f: &SpectralFunction<T>) -> Result<SpectralFunction<T>> {
        match *self {
            OperatorTag::GAlpha(alpha) => apply_g_alpha(f, alpha),
            OperatorTag::GHalfInverse => apply_g_half_inverse(f).map(|r| r.function),
        }
    }
}

#[inline]
pub(crate) fn g_alpha_multiplier<T: Scalar>(lambda: T, alpha: T) -> T {
    T::of(2.0).powf(alpha) * lambda.powf(-alpha)
}

pub(crate) fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveAlpha(alpha.as_f64()))
    }
}

pub fn apply_g_alpha<T: Scalar>(f: &SpectralFunction<T>, alpha: T) -> Result<SpectralFunction<T>> {
    check_alpha(alpha)?;
    let lam = f.spectrum().eigenvalues();
    Ok(f.map_coeffs(|n, c| if n == 0 { T::zero() } else { g_alpha_multiplier(lam[n], alpha) * c }))
}

/// `G_{1/2}^{-1} g` together with `Σ λ_n g_n²`, which callers can watch for
/// blow-up as the truncation is refined.
#[derive(Debug, Clone)]
pub struct HalfInverse<T> {
    pub function: SpectralFunction<T>,
    pub domain_monitor: T,
}

pub fn apply_g_half_inverse<T: Scalar>(g: &SpectralFunction<T>) -> Result<HalfInverse<T>> {
    g.require_mean_zero()?;
    let lam = g.spectrum().eigenvalues();
    let function = g.map_coeffs(|n, c| if n == 0 { T::zero() } else { (lam[n] / T::of(2.0)).sqrt() * c });
    let domain_monitor = g.coeffs().iter().zip(lam).skip(1).map(|(&c, &l)| l * c * c).sum();
    Ok(HalfInverse { function, domain_monitor })
}

/// `(f, g)_{H₀^α} = Σ λ_n^α f_n g_n`.
pub fn sobolev_inner<T: Scalar>(f: &SpectralFunction<T>, g: &SpectralFunction<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    if f.manifold() != g.manifold() {
        return Err(Error::ManifoldMismatch);
    }
    f.require_mean_zero()?;
    g.require_mean_zero()?;
    let spec = if f.spectrum().len() >= g.spectrum().len() { f.spectrum() } else { g.spectrum() };
    Ok((1..spec.len()).map(|n| spec.eigenvalue(n).powf(alpha) * f.coeff(n) * g.coeff(n)).sum())
}

/// `‖f‖_{H₀^α} = √(Σ λ_n^α f_n²)`.
pub fn sobolev_norm<T: Scalar>(f: &SpectralFunction<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    f.require_mean_zero()?;
    let lam = f.spectrum().eigenvalues();
    Ok(f.coeffs().iter().zip(lam).skip(1).map(|(&c, &l)| l.powf(alpha) * c * c).sum::<T>().sqrt())
}

/// Parseval: `(f, g)_{L²} = Σ f_n g_n`.
pub fn inner_product_l2<T: Scalar>(f: &SpectralFunction<T>, g: &SpectralFunction<T>) -> Result<T> {
    if f.manifold() != g.manifold() {
        return Err(Error::ManifoldMismatch);
    }
    let n = f.coeffs().len().min(g.coeffs().len());
    Ok(f.coeffs()[..n].iter().zip(&g.coeffs()[..n]).map(|(&a, &b)| a * b).sum())
}

/// `(Gf, f)_{L²} = Σ_{n≥1} 2 λ_n^{-1} f_n²`.
pub fn green_quadratic_form<T: Scalar>(f: &SpectralFunction<T>) -> Result<T> {
    f.require_mean_zero()?;
    let lam = f.spectrum().eigenvalues();
    Ok(f.coeffs().iter().zip(lam).skip(1).map(|(&c, &l)| T::of(2.0) / l * c * c).sum())
}

/// `(f_i, G f_j)_{L²}`, the bilinear form behind [`green_quadratic_form`].
pub fn green_bilinear<T: Scalar>(f: &SpectralFunction<T>, g: &SpectralFunction<T>) -> Result<T> {
    if f.manifold() != g.manifold() {
        return Err(Error::ManifoldMismatch);
    }
    f.require_mean_zero()?;
    g.require_mean_zero()?;
    let spec = if f.spectrum().len() >= g.spectrum().len() { f.spectrum() } else { g.spectrum() };
    Ok((1..spec.len()).map(|n| T::of(2.0) / spec.eigenvalue(n) * f.coeff(n) * g.coeff(n)).sum())
}

/// The iterated-logarithm constant `σ_f = √((2/m₀)(Gf, f))`.
pub fn lil_sigma<T: Scalar>(f: &SpectralFunction<T>) -> Result<T> {
    let q = green_quadratic_form(f)?;
    Ok((T::of(2.0) / f.spectrum().volume() * q).sqrt())
}

/// Constant `C` in `‖f‖_{L²} ≤ C ‖f‖_{H₀^α}`: `max(1, λ₁^{-α/2})`.
pub fn l2_embedding_constant<T: Scalar>(spectrum: &Spectrum<T>, alpha: T) -> T {
    embedding_constant(spectrum, T::zero(), alpha)
}

/// Constant in `‖f‖_{H₀^{α₁}} ≤ C ‖f‖_{H₀^{α₂}}` for `α₁ < α₂`: `max(1, λ₁^{(α₁-α₂)/2})`.
pub fn embedding_constant<T: Scalar>(spectrum: &Spectrum<T>, alpha1: T, alpha2: T) -> T {
    match spectrum.spectral_gap() {
        Some(l1) => T::one().max(l1.powf((alpha1 - alpha2) / T::of(2.0))),
        None => T::one(),
    }
}

/// Outcome of comparing `G_β G_α f` with `G_{α+β} f` coefficientwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupReport<T> {
    pub alpha: T,
    pub beta: T,
    pub max_relative_error: T,
    pub passed: bool,
}

/// Relative tolerance for [`semigroup_check`].
pub const SEMIGROUP_TOLERANCE: f64 = 1e-12;

pub fn semigroup_check<T: Scalar>(f: &SpectralFunction<T>, alpha: T, beta: T) -> Result<SemigroupReport<T>> {
    let composed = apply_g_alpha(&apply_g_alpha(f, alpha)?, beta)?;
    let direct = apply_g_alpha(f, alpha + beta)?;
    let mut worst = T::zero();
    for (&a, &b) in composed.coeffs().iter().zip(direct.coeffs()) {
        let err = if b == T::zero() { a.abs() } else { ((a - b) / b).abs() };
        worst = worst.max(err);
    }
    let passed = worst.as_f64() <= SEMIGROUP_TOLERANCE;
    Ok(SemigroupReport { alpha, beta, max_relative_error: worst, passed })
}
