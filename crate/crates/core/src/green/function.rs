use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{ManifoldSpec, Point, SpectralTruncation, Spectrum};
use crate::scalar::Scalar;

/// A function on M stored by its eigenbasis coefficients `f_n = (f, φ_n)`.
///
/// `f_0 = 0` is exactly the mean-zero condition `∫ f dm = 0`.
#[derive(Debug, Clone)]
pub struct SpectralFunction<T> {
    spectrum: Arc<Spectrum<T>>,
    coeffs: Vec<T>,
}

impl<T: Scalar> PartialEq for SpectralFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.manifold() != other.manifold() {
            return false;
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.coeff(i) == other.coeff(i))
    }
}

impl<T: Scalar> SpectralFunction<T> {
    /// Coefficients beyond `coeffs.len()` are zero; at most `N + 1` may be given.
    pub fn new(spectrum: Arc<Spectrum<T>>, mut coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() > spectrum.len() {
            return Err(Error::IndexOutOfRange { index: coeffs.len() - 1, len: spectrum.len() });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidConfig("spectral coefficients must be finite".into()));
        }
        coeffs.resize(spectrum.len(), T::zero());
        Ok(SpectralFunction { spectrum, coeffs })
    }

    pub fn zero(spectrum: Arc<Spectrum<T>>) -> Self {
        let coeffs = vec![T::zero(); spectrum.len()];
        SpectralFunction { spectrum, coeffs }
    }

    /// The eigenfunction φ_n itself.
    pub fn basis(spectrum: Arc<Spectrum<T>>, n: usize) -> Result<Self> {
        if n >= spectrum.len() {
            return Err(Error::IndexOutOfRange { index: n, len: spectrum.len() });
        }
        let mut f = Self::zero(spectrum);
        f.coeffs[n] = T::one();
        Ok(f)
    }

    /// The constant function `c`, i.e. `c √m₀ φ_0`.
    pub fn constant(spectrum: Arc<Spectrum<T>>, c: T) -> Self {
        let mut f = Self::zero(spectrum);
        f.coeffs[0] = c * f.spectrum.volume().sqrt();
        f
    }

    pub fn spectrum(&self) -> &Arc<Spectrum<T>> {
        &self.spectrum
    }

    pub fn manifold(&self) -> &ManifoldSpec {
        self.spectrum.manifold()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `f_n`, zero past the truncation.
    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).copied().unwrap_or_else(T::zero)
    }

    pub fn is_mean_zero(&self) -> bool {
        self.coeffs[0] == T::zero()
    }

    pub(crate) fn require_mean_zero(&self) -> Result<()> {
        if self.is_mean_zero() {
            Ok(())
        } else {
            Err(Error::NotMeanZero(self.coeffs[0].as_f64()))
        }
    }

    /// ∫_M f dm = √m₀ f_0.
    pub fn integral(&self) -> T {
        self.spectrum.volume().sqrt() * self.coeffs[0]
    }

    /// Projection onto L²₀: drops the constant mode.
    pub fn centered(&self) -> Self {
        let mut f = self.clone();
        f.coeffs[0] = T::zero();
        f
    }

    /// Keeps modes `0..=n` only.
    pub fn truncated(&self, n: usize) -> Self {
        let mut f = self.clone();
        for c in f.coeffs.iter_mut().skip(n + 1) {
            *c = T::zero();
        }
        f
    }

    pub fn scaled(&self, a: T) -> Self {
        SpectralFunction { spectrum: self.spectrum.clone(), coeffs: self.coeffs.iter().map(|&c| a * c).collect() }
    }

    /// `a f + b g`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.manifold() != other.manifold() {
            return Err(Error::ManifoldMismatch);
        }
        let spectrum = if self.spectrum.len() >= other.spectrum.len() { &self.spectrum } else { &other.spectrum };
        let coeffs = (0..spectrum.len()).map(|n| a * self.coeff(n) + b * other.coeff(n)).collect();
        Ok(SpectralFunction { spectrum: spectrum.clone(), coeffs })
    }

    /// Pointwise value Σ f_n φ_n(x).
    pub fn evaluate(&self, x: &Point<T>) -> Result<T> {
        let phi = self.spectrum.eval_all(x)?;
        Ok(phi.iter().zip(&self.coeffs).map(|(&p, &c)| p * c).sum())
    }

    pub(crate) fn map_coeffs(&self, mut f: impl FnMut(usize, T) -> T) -> Self {
        SpectralFunction {
            spectrum: self.spectrum.clone(),
            coeffs: self.coeffs.iter().enumerate().map(|(n, &c)| f(n, c)).collect(),
        }
    }

    /// Wire form; zero coefficients are omitted.
    pub fn to_wire(&self) -> SpectralFunctionWire {
        SpectralFunctionWire {
            manifold: self.manifold().clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != T::zero())
                .map(|(n, c)| CoeffEntry { n, c: c.as_f64() })
                .collect(),
        }
    }

    /// Builds from the wire form at truncation `max(N_min, largest index)`.
    pub fn from_wire(wire: &SpectralFunctionWire, min_truncation: usize) -> Result<Self> {
        let top = wire.coeffs.iter().map(|e| e.n).max().unwrap_or(0).max(min_truncation);
        let spectrum = Arc::new(Spectrum::new(&wire.manifold, SpectralTruncation::new(top))?);
        Self::from_wire_in(wire, spectrum)
    }

    /// Builds from the wire form inside an existing spectrum.
    pub fn from_wire_in(wire: &SpectralFunctionWire, spectrum: Arc<Spectrum<T>>) -> Result<Self> {
        if &wire.manifold != spectrum.manifold() {
            return Err(Error::ManifoldMismatch);
        }
        let mut f = Self::zero(spectrum);
        for e in &wire.coeffs {
            if e.n >= f.coeffs.len() {
                return Err(Error::IndexOutOfRange { index: e.n, len: f.coeffs.len() });
            }
            if !e.c.is_finite() {
                return Err(Error::InvalidConfig(format!("coefficient {} is not finite", e.n)));
            }
            f.coeffs[e.n] = f.coeffs[e.n] + T::of(e.c);
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("wire form serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: SpectralFunctionWire = serde_json::from_str(s)?;
        Self::from_wire(&wire, 0)
    }
}

/// `{"manifold": …, "coeffs": [{"n": 1, "c": 0.5}, …]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralFunctionWire {
    pub manifold: ManifoldSpec,
    pub coeffs: Vec<CoeffEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntry {
    pub n: usize,
    pub c: f64,
}
