use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::sphere;
use super::{ManifoldSpec, Point};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of nonconstant eigenmodes retained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectralTruncation(usize);

impl SpectralTruncation {
    /// `n = 0` keeps only the constant mode.
    pub fn new(n: usize) -> Self {
        SpectralTruncation(n)
    }

    /// 128 modes on the circle, every wave vector with |k_i| <= 32 on a torus, ℓ <= 20 on the sphere.
    pub fn default_for(manifold: &ManifoldSpec) -> Self {
        match manifold {
            ManifoldSpec::Circle { .. } => SpectralTruncation(128),
            ManifoldSpec::FlatTorus { lengths } => SpectralTruncation(65usize.pow(lengths.len() as u32) - 1),
            ManifoldSpec::Sphere2 => SpectralTruncation(21 * 21 - 1),
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Closed-form identity of an eigenfunction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Constant,
    /// `√(2/m₀) cos(2π k·x / L)` with `k` canonical (first nonzero entry positive).
    Cos(Vec<i32>),
    Sin(Vec<i32>),
    /// Real spherical harmonic of degree ℓ and order m.
    Harmonic { degree: u32, order: i32 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |k: &[i32]| k.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Mode::Constant => write!(f, "const"),
            Mode::Cos(k) => write!(f, "cos({})", join(k)),
            Mode::Sin(k) => write!(f, "sin({})", join(k)),
            Mode::Harmonic { degree, order } => write!(f, "Y({degree},{order})"),
        }
    }
}

/// `(n, λ_n, φ_n)` for -Δ_M.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    pub index: usize,
    pub eigenvalue: T,
    pub mode: Mode,
}

/// Truncated orthonormal eigenbasis of -Δ_M, indices `0..=N`.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    manifold: ManifoldSpec,
    modes: Vec<Mode>,
    eigenvalues: Vec<T>,
    next_eigenvalue: T,
    volume: T,
    // Fourier layout: wave vectors flattened, plus the largest |k_i| per axis.
    waves: Vec<i32>,
    kmax: Vec<usize>,
    lmax: usize,
}

impl<T: Scalar> PartialEq for Spectrum<T> {
    fn eq(&self, other: &Self) -> bool {
        self.manifold == other.manifold && self.modes.len() == other.modes.len()
    }
}

fn fourier_eigenvalue(k: &[i32], periods: &[f64]) -> f64 {
    k.iter()
        .zip(periods)
        .map(|(&ki, &l)| {
            let w = std::f64::consts::TAU * ki as f64 / l;
            w * w
        })
        .sum()
}

/// Canonical wave vectors (first nonzero entry positive) in tie-break order,
/// at least `count` of them and complete up to the last one's eigenvalue.
fn canonical_waves(periods: &[f64], count: usize) -> Vec<(f64, Vec<i32>)> {
    let d = periods.len();
    let mut radius: i32 = 4;
    loop {
        let mut list = Vec::new();
        let side = (2 * radius + 1) as usize;
        let total = side.pow(d as u32);
        let mut k = vec![0i32; d];
        for idx in 0..total {
            let mut r = idx;
            for ki in k.iter_mut() {
                *ki = (r % side) as i32 - radius;
                r /= side;
            }
            match k.iter().find(|&&v| v != 0) {
                Some(&first) if first > 0 => list.push((fourier_eigenvalue(&k, periods), k.clone())),
                _ => {}
            }
        }
        list.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then_with(|| a.1.cmp(&b.1)));
        let outside = periods
            .iter()
            .map(|&l| {
                let w = std::f64::consts::TAU * (radius + 1) as f64 / l;
                w * w
            })
            .fold(f64::INFINITY, f64::min);
        if list.len() >= count && (count == 0 || list[count - 1].0 < outside) {
            list.truncate(count);
            return list;
        }
        radius *= 2;
    }
}

impl<T: Scalar> Spectrum<T> {
    pub fn new(manifold: &ManifoldSpec, trunc: SpectralTruncation) -> Result<Self> {
        let n = trunc.get();
        let volume: T = manifold.volume();
        let mut modes = Vec::with_capacity(n + 1);
        let mut eigenvalues = Vec::with_capacity(n + 1);
        modes.push(Mode::Constant);
        eigenvalues.push(T::zero());
        let mut waves = Vec::new();
        let mut kmax = Vec::new();
        let mut lmax = 0;
        let next_eigenvalue;
        match manifold.periods() {
            Some(periods) => {
                let d = periods.len();
                kmax = vec![0; d];
                // one extra real mode so that λ_{N+1} is known
                let list = canonical_waves(periods, (n + 2) / 2);
                let mut next = None;
                'outer: for (_, k) in &list {
                    for cos in [true, false] {
                        let lam = Self::fourier_lambda(k, periods);
                        if modes.len() == n + 1 {
                            next = Some(lam);
                            break 'outer;
                        }
                        for (i, &ki) in k.iter().enumerate() {
                            kmax[i] = kmax[i].max(ki.unsigned_abs() as usize);
                        }
                        waves.extend_from_slice(k);
                        modes.push(if cos { Mode::Cos(k.clone()) } else { Mode::Sin(k.clone()) });
                        eigenvalues.push(lam);
                    }
                }
                next_eigenvalue = match next {
                    Some(l) => l,
                    None => {
                        let more = canonical_waves(periods, list.len() + 1);
                        Self::fourier_lambda(&more[list.len()].1, periods)
                    }
                };
                // flatten with a placeholder row for the constant mode
                let mut flat = vec![0; d];
                flat.extend(waves);
                waves = flat;
            }
            None => {
                let mut l = 1u32;
                'sph: loop {
                    for m in -(l as i32)..=(l as i32) {
                        if modes.len() == n + 1 {
                            break 'sph;
                        }
                        modes.push(Mode::Harmonic { degree: l, order: m });
                        eigenvalues.push(T::of((l * (l + 1)) as f64));
                        lmax = l as usize;
                    }
                    l += 1;
                }
                let (next_l, _) = Self::sphere_degree_order(n + 1);
                next_eigenvalue = T::of((next_l * (next_l + 1)) as f64);
            }
        }
        Ok(Spectrum { manifold: manifold.clone(), modes, eigenvalues, next_eigenvalue, volume, waves, kmax, lmax })
    }

    /// Spectrum at the default truncation for `manifold`.
    pub fn default_for(manifold: &ManifoldSpec) -> Result<Self> {
        Self::new(manifold, SpectralTruncation::default_for(manifold))
    }

    fn fourier_lambda(k: &[i32], periods: &[f64]) -> T {
        k.iter()
            .zip(periods)
            .map(|(&ki, &l)| {
                let w = T::of(2.0) * T::PI() * T::of(ki as f64) / T::of(l);
                w * w
            })
            .sum()
    }

    fn sphere_degree_order(n: usize) -> (usize, i32) {
        let l = (n as f64).sqrt().floor() as usize;
        (l, n as i32 - (l * l + l) as i32)
    }

    pub fn manifold(&self) -> &ManifoldSpec {
        &self.manifold
    }

    /// Total number of modes, constant included (`N + 1`).
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of nonconstant modes `N`.
    pub fn truncation(&self) -> SpectralTruncation {
        SpectralTruncation(self.modes.len() - 1)
    }

    pub fn volume(&self) -> T {
        self.volume
    }

    pub fn eigenvalue(&self, n: usize) -> T {
        self.eigenvalues[n]
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// λ_{N+1}, the first eigenvalue dropped by the truncation.
    pub fn next_eigenvalue(&self) -> T {
        self.next_eigenvalue
    }

    /// Spectral gap λ₁, if any nonconstant mode is retained.
    pub fn spectral_gap(&self) -> Option<T> {
        self.eigenvalues.get(1).copied()
    }

    pub fn mode(&self, n: usize) -> Result<&Mode> {
        self.modes.get(n).ok_or(Error::IndexOutOfRange { index: n, len: self.modes.len() })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn eigenpairs(&self) -> Vec<EigenPair<T>> {
        self.modes
            .iter()
            .zip(&self.eigenvalues)
            .enumerate()
            .map(|(index, (mode, &eigenvalue))| EigenPair { index, eigenvalue, mode: mode.clone() })
            .collect()
    }

    /// sup_x |φ_n(x)|² in closed form.
    pub fn sup_sq(&self, n: usize) -> T {
        match &self.modes[n] {
            Mode::Constant => T::one() / self.volume,
            Mode::Cos(_) | Mode::Sin(_) => T::of(2.0) / self.volume,
            Mode::Harmonic { degree, .. } => T::of((2 * degree + 1) as f64) / (T::of(4.0) * T::PI()),
        }
    }

    /// φ_n(x) by its closed form.
    pub fn eval(&self, n: usize, x: &Point<T>) -> Result<T> {
        self.manifold.check_point(x)?;
        let mode = self.mode(n)?;
        Ok(match mode {
            Mode::Constant => self.volume.sqrt().recip(),
            Mode::Cos(k) | Mode::Sin(k) => {
                let periods = self.manifold.periods().expect("fourier mode on a periodic manifold");
                let theta: T = k
                    .iter()
                    .zip(periods)
                    .zip(x.coords())
                    .map(|((&ki, &l), &xi)| T::of(2.0) * T::PI() * T::of(ki as f64) * xi / T::of(l))
                    .sum();
                let amp = (T::of(2.0) / self.volume).sqrt();
                if matches!(mode, Mode::Cos(_)) {
                    amp * theta.cos()
                } else {
                    amp * theta.sin()
                }
            }
            Mode::Harmonic { degree, order } => sphere::real_harmonic(*degree as usize, *order, x.coords()),
        })
    }

    /// Evaluator that fills all φ_0..φ_N at a point, reusing scratch space.
    pub fn evaluator(&self) -> ModeEvaluator<'_, T> {
        let mut offsets = Vec::with_capacity(self.kmax.len() + 1);
        let mut total = 0;
        for &km in &self.kmax {
            offsets.push(total);
            total += km + 1;
        }
        let periods = self.manifold.periods().unwrap_or(&[]);
        ModeEvaluator {
            spectrum: self,
            scales: periods.iter().map(|&l| T::of(2.0) * T::PI() / T::of(l)).collect(),
            offsets,
            is_cos: self.modes.iter().map(|m| matches!(m, Mode::Cos(_))).collect(),
            amp: (T::of(2.0) / self.volume).sqrt(),
            constant: self.volume.sqrt().recip(),
            trig: vec![(T::zero(), T::zero()); total],
            table: Vec::new(),
        }
    }

    /// Values of all modes at `x` (allocating convenience over [`ModeEvaluator`]).
    pub fn eval_all(&self, x: &Point<T>) -> Result<Vec<T>> {
        self.manifold.check_point(x)?;
        let mut out = vec![T::zero(); self.len()];
        self.evaluator().fill(x.coords(), &mut out);
        Ok(out)
    }
}

/// Batch evaluation of every retained eigenfunction at one point.
///
/// Harmonics of increasing frequency are generated by rotation recurrences,
/// so one call costs one `sin_cos` per axis plus O(N) multiplies.
pub struct ModeEvaluator<'a, T> {
    spectrum: &'a Spectrum<T>,
    scales: Vec<T>,
    offsets: Vec<usize>,
    is_cos: Vec<bool>,
    amp: T,
    constant: T,
    // axis i occupies trig[offsets[i]..=offsets[i] + kmax[i]]
    trig: Vec<(T, T)>,
    table: Vec<T>,
}

impl<T: Scalar> ModeEvaluator<'_, T> {
    /// Writes φ_n(x) into `out[n]` for `n < out.len()`; `out.len()` must not exceed `N + 1`.
    pub fn fill(&mut self, coords: &[T], out: &mut [T]) {
        let s = self.spectrum;
        debug_assert!(out.len() <= s.len());
        if out.is_empty() {
            return;
        }
        if self.scales.is_empty() {
            sphere::fill_harmonics(s.lmax, coords, &mut self.table, out);
            return;
        }
        for (i, &scale) in self.scales.iter().enumerate() {
            let block = &mut self.trig[self.offsets[i]..=self.offsets[i] + s.kmax[i]];
            let (s1, c1) = (scale * coords[i]).sin_cos();
            let (mut c, mut sn) = (T::one(), T::zero());
            for slot in block.iter_mut() {
                *slot = (c, sn);
                let nc = c * c1 - sn * s1;
                sn = sn * c1 + c * s1;
                c = nc;
            }
        }
        out[0] = self.constant;
        let d = self.scales.len();
        if d == 1 {
            for (n, slot) in out.iter_mut().enumerate().skip(1) {
                let (c, sn) = self.trig[s.waves[n] as usize];
                *slot = self.amp * if self.is_cos[n] { c } else { sn };
            }
            return;
        }
        for (n, slot) in out.iter_mut().enumerate().skip(1) {
            let k = &s.waves[n * d..(n + 1) * d];
            let (mut re, mut im) = (T::one(), T::zero());
            for (i, &ki) in k.iter().enumerate() {
                if ki == 0 {
                    continue;
                }
                let (c, mut sn) = self.trig[self.offsets[i] + ki.unsigned_abs() as usize];
                if ki < 0 {
                    sn = -sn;
                }
                let nre = re * c - im * sn;
                im = re * sn + im * c;
                re = nre;
            }
            *slot = self.amp * if self.is_cos[n] { re } else { im };
        }
    }
}
