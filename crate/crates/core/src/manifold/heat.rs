use super::{ManifoldSpec, Mode, Point, Spectrum};
use crate::error::{Error, Result};
use crate::quadrature::{periodic_nodes, SphereGrid};
use crate::scalar::Scalar;

/// Below this time the truncated heat series is refused; raise N instead.
pub const MIN_HEAT_TIME: f64 = 1e-4;

/// Truncated heat kernel value with a certified bound on the dropped tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatKernelValue<T> {
    pub value: T,
    /// Upper bound on `|p(t,x,y) - p_N(t,x,y)|`.
    pub tail_bound: T,
}

/// p_N(t,x,y) = Σ_{n≤N} e^{-λ_n t/2} φ_n(x) φ_n(y), the kernel of e^{tΔ/2}.
pub fn heat_kernel<T: Scalar>(spectrum: &Spectrum<T>, t: T, x: &Point<T>, y: &Point<T>) -> Result<HeatKernelValue<T>> {
    check_time(t)?;
    let fx = spectrum.eval_all(x)?;
    let fy = spectrum.eval_all(y)?;
    let value = heat_series(spectrum, t, &fx, &fy);
    Ok(HeatKernelValue { value, tail_bound: truncation_tail_bound(spectrum, t) })
}

fn check_time<T: Scalar>(t: T) -> Result<()> {
    let tf = t.as_f64();
    if !(tf > 0.0) {
        return Err(Error::NonPositiveTime(tf));
    }
    if tf < MIN_HEAT_TIME {
        return Err(Error::TimeBelowCutoff { t: tf, min: MIN_HEAT_TIME });
    }
    Ok(())
}

/// Series with precomputed mode values; terms are summed from the top mode
/// down so small tail terms are not swamped.
pub(crate) fn heat_series<T: Scalar>(spectrum: &Spectrum<T>, t: T, fx: &[T], fy: &[T]) -> T {
    let half_t = t * T::of(0.5);
    let mut acc = T::zero();
    for n in (0..spectrum.len()).rev() {
        acc = acc + (-spectrum.eigenvalue(n) * half_t).exp() * (fx[n] * fy[n]);
    }
    acc
}

/// Bound on Σ_{n>N} e^{-λ_n t/2} sup|φ_n|².
pub fn truncation_tail_bound<T: Scalar>(spectrum: &Spectrum<T>, t: T) -> T {
    let t = t.as_f64();
    let bound = match spectrum.manifold() {
        ManifoldSpec::Sphere2 => sphere_tail(spectrum, t),
        m => {
            // every dropped wave vector has λ >= Λ = λ_{N+1}; split e^{-λt/2} = e^{-λt/4} e^{-λt/4}
            // and sum the second factor over the whole lattice as a product of theta series
            let periods = m.periods().expect("periodic manifold");
            let big = spectrum.next_eigenvalue().as_f64();
            let theta: f64 = periods
                .iter()
                .map(|&l| {
                    let a = (std::f64::consts::TAU / l).powi(2) * t / 4.0;
                    let mut s = 1.0;
                    let mut k = 1.0f64;
                    loop {
                        let term = 2.0 * (-a * k * k).exp();
                        s += term;
                        if term < 1e-18 * s {
                            break;
                        }
                        k += 1.0;
                    }
                    s
                })
                .product();
            2.0 / spectrum.volume().as_f64() * (-big * t / 4.0).exp() * theta
        }
    };
    T::of(bound)
}

fn sphere_tail<T: Scalar>(spectrum: &Spectrum<T>, t: f64) -> f64 {
    let n = spectrum.len();
    let weight = |l: f64| (2.0 * l + 1.0) / (4.0 * std::f64::consts::PI) * (-l * (l + 1.0) * t / 2.0).exp();
    // remainder of the last (possibly partial) block
    let (mut l, filled) = match spectrum.modes().last() {
        Some(Mode::Harmonic { degree, order }) => (*degree as usize, (*order + *degree as i32 + 1) as usize),
        _ => (0, 1),
    };
    let mut total = (2 * l + 1 - filled) as f64 * weight(l as f64);
    debug_assert!(n >= 1);
    loop {
        l += 1;
        let lf = l as f64;
        let term = (2.0 * lf + 1.0) * weight(lf);
        total += term;
        let next = (2.0 * lf + 3.0) * weight(lf + 1.0);
        let ratio = next / term;
        if ratio < 0.5 && term < 1e-17 * total.max(f64::MIN_POSITIVE) {
            total += next / (1.0 - ratio);
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    total
}

/// `(t, sup_x |p_N(t,x,x) - 1/m₀|)` over a point lattice, with a fitted log-slope.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingProfile<T> {
    pub rows: Vec<(T, T)>,
    /// Least-squares slope of `ln sup` against `t`; `None` when the profile vanishes.
    pub fitted_slope: Option<T>,
    /// `-λ₁/2`, the dominant-mode decay rate.
    pub expected_slope: Option<T>,
}

impl<T: Scalar> MixingProfile<T> {
    /// Relative gap between fitted and expected slope.
    pub fn slope_error(&self) -> Option<T> {
        match (self.fitted_slope, self.expected_slope) {
            (Some(f), Some(e)) => Some(((f - e) / e).abs()),
            _ => None,
        }
    }
}

fn lattice<T: Scalar>(manifold: &ManifoldSpec) -> Vec<Vec<T>> {
    match manifold {
        ManifoldSpec::Sphere2 => SphereGrid::new(16, 32).iter().map(|(p, _)| p.iter().map(|&c| T::of(c)).collect()).collect(),
        m => {
            let periods = m.periods().expect("periodic manifold");
            let per_axis = ((4096f64).powf(1.0 / periods.len() as f64).floor() as usize).clamp(2, 256);
            let axes: Vec<Vec<f64>> = periods.iter().map(|&l| periodic_nodes(l, per_axis)).collect();
            let mut pts = vec![Vec::new()];
            for axis in &axes {
                pts = pts
                    .into_iter()
                    .flat_map(|p| {
                        axis.iter().map(move |&c| {
                            let mut q = p.clone();
                            q.push(T::of(c));
                            q
                        })
                    })
                    .collect();
            }
            pts
        }
    }
}

pub fn mixing_decay_profile<T: Scalar>(spectrum: &Spectrum<T>, grid: &[T]) -> Result<MixingProfile<T>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &t in grid {
        check_time(t)?;
    }
    let pts = lattice::<T>(spectrum.manifold());
    let mut ev = spectrum.evaluator();
    let mut buf = vec![T::zero(); spectrum.len()];
    let mut sups = vec![T::zero(); grid.len()];
    for p in &pts {
        ev.fill(p, &mut buf);
        for (sup, &t) in sups.iter_mut().zip(grid) {
            // drop the constant mode: it is exactly 1/m₀
            let half_t = t * T::of(0.5);
            let mut acc = T::zero();
            for n in (1..spectrum.len()).rev() {
                acc = acc + (-spectrum.eigenvalue(n) * half_t).exp() * buf[n] * buf[n];
            }
            *sup = sup.max(acc.abs());
        }
    }
    let rows: Vec<(T, T)> = grid.iter().copied().zip(sups).collect();
    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(_, s)| s.as_f64() > 0.0)
        .map(|(t, s)| (t.as_f64(), s.as_f64().ln()))
        .collect();
    let fitted_slope = if fit.len() >= 2 {
        let k = fit.len() as f64;
        let mt = fit.iter().map(|p| p.0).sum::<f64>() / k;
        let my = fit.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = fit.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
        let sxx: f64 = fit.iter().map(|p| (p.0 - mt).powi(2)).sum();
        (sxx > 0.0).then(|| T::of(sxy / sxx))
    } else {
        None
    };
    let expected_slope = spectrum.spectral_gap().map(|l| -l * T::of(0.5));
    Ok(MixingProfile { rows, fitted_slope, expected_slope })
}
