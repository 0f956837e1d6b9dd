use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use lil_core::green::{SpectralFunction, SpectralFunctionWire};
use lil_core::manifold::{ManifoldSpec, Point, SpectralTruncation, Spectrum};
use rand::Rng;
use rand_distr::StandardNormal;
use lil_core::sim::{CheckpointSchedule, StartPoint};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Reads a subcommand config; unknown keys are rejected by the target type.
pub fn load<C: DeserializeOwned + Default>(path: Option<&Path>) -> Result<C> {
    match path {
        None => Ok(C::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", p.display()))
        }
    }
}

pub fn default_manifold() -> ManifoldSpec {
    ManifoldSpec::circle(std::f64::consts::TAU).expect("valid circle")
}

pub fn parse_manifold(s: &str) -> Result<ManifoldSpec> {
    serde_json::from_str(s).map_err(|e| anyhow!("invalid manifold JSON {s:?}: {e}"))
}

/// An observable named by label (`phi3`, `f2`, `const`) or given by coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Observable {
    Label(String),
    Function(SpectralFunctionWire),
}

enum Parsed {
    Phi(usize),
    F(usize),
}

impl Observable {
    fn label(&self) -> Result<Option<Parsed>> {
        let Observable::Label(s) = self else { return Ok(None) };
        let num = |rest: &str| rest.parse::<usize>().map_err(|_| anyhow!("unknown observable {s:?}; use phiN, fN or const"));
        if s == "const" {
            Ok(Some(Parsed::Phi(0)))
        } else if let Some(rest) = s.strip_prefix("phi") {
            Ok(Some(Parsed::Phi(num(rest)?)))
        } else if let Some(rest) = s.strip_prefix('f') {
            let k = num(rest)?;
            if k == 0 {
                bail!("f0 is not defined; the orthonormal family starts at f1");
            }
            Ok(Some(Parsed::F(k)))
        } else {
            bail!("unknown observable {s:?}; use phiN, fN or const")
        }
    }

    /// Largest eigen-index this observable touches.
    pub fn top_index(&self) -> Result<usize> {
        Ok(match (self.label()?, self) {
            (Some(Parsed::Phi(n) | Parsed::F(n)), _) => n,
            (None, Observable::Function(w)) => w.coeffs.iter().map(|e| e.n).max().unwrap_or(0),
            (None, Observable::Label(_)) => unreachable!(),
        })
    }

    pub fn resolve(&self, spectrum: &Arc<Spectrum<f64>>) -> Result<SpectralFunction<f64>> {
        Ok(match (self.label()?, self) {
            (Some(Parsed::Phi(n)), _) => SpectralFunction::basis(spectrum.clone(), n)?,
            (Some(Parsed::F(k)), _) => SpectralFunction::basis(spectrum.clone(), k)?.scaled((spectrum.eigenvalue(k) / 2.0).sqrt()),
            (None, Observable::Function(w)) => SpectralFunction::from_wire_in(w, spectrum.clone())?,
            (None, Observable::Label(_)) => unreachable!(),
        })
    }
}

/// Smallest spectrum carrying all `observables` (at least one nonconstant mode).
pub fn spectrum_for(manifold: &ManifoldSpec, observables: &[Observable]) -> Result<Arc<Spectrum<f64>>> {
    let mut top = 1;
    for o in observables {
        top = top.max(o.top_index()?);
    }
    Ok(Arc::new(Spectrum::new(manifold, SpectralTruncation::new(top))?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Start {
    Named(StartName),
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartName {
    Origin,
    Uniform,
}

impl Default for Start {
    fn default() -> Self {
        Start::Named(StartName::Origin)
    }
}

impl Start {
    pub fn to_start_point(&self, m: &ManifoldSpec) -> StartPoint {
        match self {
            Start::Named(StartName::Uniform) => StartPoint::Uniform,
            Start::Named(StartName::Origin) => match m {
                ManifoldSpec::Sphere2 => StartPoint::Fixed(vec![0.0, 0.0, 1.0]),
                _ => StartPoint::Fixed(vec![0.0; m.dimension()]),
            },
            Start::Fixed(c) => StartPoint::Fixed(c.clone()),
        }
    }
}

pub fn default_schedule() -> CheckpointSchedule {
    CheckpointSchedule::default()
}

/// A point drawn from the normalized volume measure.
pub fn random_point<R: Rng>(m: &ManifoldSpec, rng: &mut R) -> Result<Point<f64>> {
    Ok(match m {
        ManifoldSpec::Sphere2 => {
            let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
            Point::on_sphere(v)?
        }
        _ => {
            let periods = m.periods().expect("periodic manifold");
            Point::periodic(m, periods.iter().map(|&l| rng.gen_range(0.0..l)).collect())?
        }
    })
}
