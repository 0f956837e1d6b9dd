use std::sync::Arc;

use crate::error::{Error, Result};
use crate::green::{green_bilinear, SpectralFunction};
use crate::manifold::Spectrum;

/// The family `f_k = √(λ_k/2) φ_k`, `k = 1..n`, orthonormal for `(f, Gg)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableBasis {
    pub functions: Vec<SpectralFunction<f64>>,
}

/// Builds the first `n` members of the default basis.
pub fn make_basis(spectrum: &Arc<Spectrum<f64>>, n: usize) -> Result<ObservableBasis> {
    if n == 0 {
        return Err(Error::InvalidConfig("basis size must be at least 1".into()));
    }
    if n >= spectrum.len() {
        return Err(Error::BasisTooLarge { requested: n, available: spectrum.len() - 1 });
    }
    let functions = (1..=n)
        .map(|k| Ok(SpectralFunction::basis(spectrum.clone(), k)?.scaled((spectrum.eigenvalue(k) / 2.0).sqrt())))
        .collect::<Result<_>>()?;
    Ok(ObservableBasis { functions })
}

impl ObservableBasis {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Row-major Gram matrix `(f_i, G f_j)`.
    pub fn gram(&self) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.len() * self.len());
        for f in &self.functions {
            for g in &self.functions {
                out.push(green_bilinear(f, g)?);
            }
        }
        Ok(out)
    }
}
