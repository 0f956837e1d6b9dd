//! The kernels `g_α(x, y)` of `G_α`, by two independent routes: the
//! eigenfunction series, and numerical quadrature of the time integral
//! `Γ(α)^{-1} ∫_0^∞ t^{α-1} (p(t,x,y) - 1/m₀) dt` over the heat kernel.

use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::manifold::{Point, Spectrum};
use crate::quadrature::gauss_legendre;
use crate::scalar::Scalar;

use super::operators::{check_alpha, g_alpha_multiplier};

/// A kernel value; `on_diagonal` marks `x = y`, where the untruncated
/// kernel may diverge and the number depends on the truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue<T> {
    pub value: T,
    pub on_diagonal: bool,
    /// Estimated absolute quadrature error (zero for the series route).
    pub error_estimate: T,
}

/// Σ_{n=1..N} 2^α λ_n^{-α} φ_n(x) φ_n(y).
pub fn kernel_g_alpha_spectral<T: Scalar>(spectrum: &Spectrum<T>, alpha: T, x: &Point<T>, y: &Point<T>) -> Result<KernelValue<T>> {
    check_alpha(alpha)?;
    let fx = spectrum.eval_all(x)?;
    let fy = spectrum.eval_all(y)?;
    let mut acc = T::zero();
    for n in (1..spectrum.len()).rev() {
        acc = acc + g_alpha_multiplier(spectrum.eigenvalue(n), alpha) * (fx[n] * fy[n]);
    }
    Ok(KernelValue { value: acc, on_diagonal: x == y, error_estimate: T::zero() })
}

/// Settings for the time-integral route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeQuadrature {
    /// Gauss–Legendre points per panel; the error estimate reruns at twice this.
    pub order: usize,
    /// Dyadic panels covering (0, 1].
    pub small_panels: usize,
    /// Accepted error, relative to Σ_n |2^α λ_n^{-α} φ_n(x) φ_n(y)|.
    pub tolerance: f64,
}

impl Default for TimeQuadrature {
    fn default() -> Self {
        TimeQuadrature { order: 20, small_panels: 48, tolerance: 1e-10 }
    }
}

/// `e^{-λ₁ T₁ / 2}` at the truncation point of the long-time integral.
const TAIL_CUTOFF: f64 = 1e-14;

pub fn kernel_g_alpha_timeint<T: Scalar>(
    spectrum: &Spectrum<T>,
    alpha: T,
    x: &Point<T>,
    y: &Point<T>,
    quad: &TimeQuadrature,
) -> Result<KernelValue<T>> {
    check_alpha(alpha)?;
    let a = alpha.as_f64();
    let on_diagonal = x == y;
    let half_dim = spectrum.manifold().dimension() as f64 / 2.0;
    if on_diagonal && a <= half_dim {
        return Err(Error::DiagonalDivergent { alpha: a, half_dim });
    }
    let fx = spectrum.eval_all(x)?;
    let fy = spectrum.eval_all(y)?;
    let lam: Vec<f64> = spectrum.eigenvalues().iter().map(|l| l.as_f64()).collect();
    let fx: Vec<f64> = fx.iter().map(|v| v.as_f64()).collect();
    let fy: Vec<f64> = fy.iter().map(|v| v.as_f64()).collect();
    let inv_vol = 1.0 / spectrum.volume().as_f64();

    // centered heat kernel p_N(t,x,y) - 1/m₀
    let centered = |t: f64| -> f64 {
        let mut acc = 0.0;
        for n in (0..lam.len()).rev() {
            acc += (-lam[n] * t / 2.0).exp() * (fx[n] * fy[n]);
        }
        acc - inv_vol
    };

    let Some(gap) = lam.get(1).copied() else {
        return Ok(KernelValue { value: T::zero(), on_diagonal, error_estimate: T::zero() });
    };
    let t_end = (2.0 * (1.0 / TAIL_CUTOFF).ln() / gap).max(1.0);

    let integrate = |order: usize| -> f64 {
        let (nodes, weights) = gauss_legendre(order);
        let mut total = 0.0;
        // (0, 1]: dyadic panels; t = u^{1/α} turns t^{α-1} dt into du / α
        let mut edges: Vec<f64> = (0..quad.small_panels).map(|k| 0.5f64.powi((quad.small_panels - k) as i32)).collect();
        edges.insert(0, 0.0);
        edges.push(1.0);
        for w in edges.windows(2) {
            let (ua, ub) = (w[0].powf(a), w[1].powf(a));
            let (mid, half) = (0.5 * (ua + ub), 0.5 * (ub - ua));
            for (&z, &wt) in nodes.iter().zip(&weights) {
                let u = mid + half * z;
                total += half * wt * centered(u.powf(1.0 / a)) / a;
            }
        }
        // [1, T₁]: doubling panels
        let mut lo = 1.0;
        while lo < t_end {
            let hi = (2.0 * lo).min(t_end);
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for (&z, &wt) in nodes.iter().zip(&weights) {
                let t = mid + half * z;
                total += half * wt * t.powf(a - 1.0) * centered(t);
            }
            lo = hi;
        }
        total
    };

    let coarse = integrate(quad.order);
    let fine = integrate(2 * quad.order);

    // [T₁, ∞): only the λ₁ eigenspace is not yet below the cutoff
    let mut tail = 0.0;
    for n in 1..lam.len() {
        if lam[n] != gap {
            break;
        }
        tail += fx[n] * fy[n] * (2.0 / gap).powf(a) * gamma_ur(a, gap * t_end / 2.0);
    }

    let value = fine / gamma(a) + tail;
    let error = (fine - coarse).abs() / gamma(a);
    let scale: f64 = (1..lam.len()).map(|n| (2.0 / lam[n]).powf(a) * (fx[n] * fy[n]).abs()).sum();
    if error > quad.tolerance * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::QuadratureTolerance { achieved: error / scale, requested: quad.tolerance });
    }
    Ok(KernelValue { value: T::of(value), on_diagonal, error_estimate: T::of(error) })
}
