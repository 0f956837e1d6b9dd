//! Real spherical harmonics on the unit sphere, L²-orthonormal w.r.t. surface area.

use crate::scalar::Scalar;

/// Fully normalized associated Legendre values `P̄_ℓ^m(x)` for `0 <= m <= ℓ <= lmax`,
/// scaled so that `2π ∫ P̄² dx = 1`. No Condon–Shortley phase. Stored at `ℓ(ℓ+1)/2 + m`.
pub(crate) fn legendre_table<T: Scalar>(lmax: usize, x: T, out: &mut Vec<T>) {
    let size = (lmax + 1) * (lmax + 2) / 2;
    out.clear();
    out.resize(size, T::zero());
    let at = |l: usize, m: usize| l * (l + 1) / 2 + m;
    let s = (T::one() - x * x).max(T::zero()).sqrt();
    let four_pi = T::of(4.0) * T::PI();
    out[0] = (T::one() / four_pi).sqrt();
    for m in 1..=lmax {
        let mf = T::of(m as f64);
        out[at(m, m)] = ((T::of(2.0) * mf + T::one()) / (T::of(2.0) * mf)).sqrt() * s * out[at(m - 1, m - 1)];
    }
    for m in 0..lmax {
        let mf = T::of(m as f64);
        out[at(m + 1, m)] = (T::of(2.0) * mf + T::of(3.0)).sqrt() * x * out[at(m, m)];
    }
    for m in 0..=lmax {
        let m2 = (m * m) as f64;
        for l in (m + 2)..=lmax {
            let l2 = (l * l) as f64;
            let lm1 = ((l - 1) * (l - 1)) as f64;
            let a = T::of(((4.0 * l2 - 1.0) / (l2 - m2)).sqrt());
            let b = T::of(((lm1 - m2) / (4.0 * lm1 - 1.0)).sqrt());
            out[at(l, m)] = a * (x * out[at(l - 1, m)] - b * out[at(l - 2, m)]);
        }
    }
}

/// Colatitude cosine and longitude of a unit vector.
pub(crate) fn angles<T: Scalar>(v: &[T]) -> (T, T) {
    (v[2].max(-T::one()).min(T::one()), v[1].atan2(v[0]))
}

/// Value of the real harmonic `Y_ℓm` at the unit vector `v`.
pub(crate) fn real_harmonic<T: Scalar>(degree: usize, order: i32, v: &[T]) -> T {
    let (z, phi) = angles(v);
    let mut table = Vec::new();
    legendre_table(degree, z, &mut table);
    let m = order.unsigned_abs() as usize;
    let p = table[degree * (degree + 1) / 2 + m];
    let sqrt2 = T::of(2.0).sqrt();
    let mf = T::of(m as f64);
    match order.signum() {
        0 => p,
        1 => sqrt2 * p * (mf * phi).cos(),
        _ => sqrt2 * p * (mf * phi).sin(),
    }
}

/// All harmonics with `ℓ <= lmax` in the order (ℓ, m = -ℓ..ℓ), truncated to `out.len()`.
pub(crate) fn fill_harmonics<T: Scalar>(lmax: usize, v: &[T], table: &mut Vec<T>, out: &mut [T]) {
    let (z, phi) = angles(v);
    legendre_table(lmax, z, table);
    let sqrt2 = T::of(2.0).sqrt();
    let (s1, c1) = phi.sin_cos();
    let (mut cm, mut sm) = (T::one(), T::zero());
    // cos(mφ), sin(mφ) by rotation; lmax is small so drift stays near machine precision
    let mut trig = Vec::with_capacity(lmax + 1);
    for _ in 0..=lmax {
        trig.push((cm, sm));
        let c = cm * c1 - sm * s1;
        sm = sm * c1 + cm * s1;
        cm = c;
    }
    for l in 0..=lmax {
        let base = l * l + l;
        if base >= out.len() + l {
            break;
        }
        for m in 0..=l {
            let p = table[l * (l + 1) / 2 + m];
            let (c, s) = trig[m];
            if m == 0 {
                if base < out.len() {
                    out[base] = p;
                }
            } else {
                if base + m < out.len() {
                    out[base + m] = sqrt2 * p * c;
                }
                if base - m < out.len() {
                    out[base - m] = sqrt2 * p * s;
                }
            }
        }
    }
}
