//! Concrete compact manifolds: the circle, flat tori and the unit 2-sphere.
//!
//! Each manifold carries a closed-form orthonormal eigenbasis of the
//! Laplace–Beltrami operator (see [`Spectrum`]), which is what the Green
//! calculus and the simulator are built on.

mod heat;
mod sphere;
mod spectrum;

pub use heat::{heat_kernel, mixing_decay_profile, HeatKernelValue, MixingProfile, MIN_HEAT_TIME};
pub use spectrum::{EigenPair, Mode, ModeEvaluator, SpectralTruncation, Spectrum};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which compact manifold, with its geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ManifoldWire", into = "ManifoldWire")]
pub enum ManifoldSpec {
    /// Circle of circumference `length`.
    Circle { length: f64 },
    /// Flat torus `R^d / (L_1 Z x ... x L_d Z)`.
    FlatTorus { lengths: Vec<f64> },
    /// Unit sphere in R^3.
    Sphere2,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ManifoldWire {
    Circle {
        #[serde(rename = "L")]
        length: f64,
    },
    Torus {
        #[serde(rename = "L")]
        lengths: Vec<f64>,
    },
    Sphere,
}

impl TryFrom<ManifoldWire> for ManifoldSpec {
    type Error = Error;

    fn try_from(w: ManifoldWire) -> Result<Self> {
        match w {
            ManifoldWire::Circle { length } => ManifoldSpec::circle(length),
            ManifoldWire::Torus { lengths } => ManifoldSpec::torus(lengths),
            ManifoldWire::Sphere => Ok(ManifoldSpec::Sphere2),
        }
    }
}

impl From<ManifoldSpec> for ManifoldWire {
    fn from(m: ManifoldSpec) -> Self {
        match m {
            ManifoldSpec::Circle { length } => ManifoldWire::Circle { length },
            ManifoldSpec::FlatTorus { lengths } => ManifoldWire::Torus { lengths },
            ManifoldSpec::Sphere2 => ManifoldWire::Sphere,
        }
    }
}

fn check_length(l: f64) -> Result<()> {
    if l.is_finite() && l > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidManifold(format!("side length must be positive and finite, got {l}")))
    }
}

impl ManifoldSpec {
    pub fn circle(length: f64) -> Result<Self> {
        check_length(length)?;
        Ok(ManifoldSpec::Circle { length })
    }

    /// The circle of circumference 2π, the workhorse of the test suite.
    pub fn unit_circle() -> Self {
        ManifoldSpec::Circle { length: std::f64::consts::TAU }
    }

    pub fn torus(lengths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidManifold("torus needs dimension >= 1".into()));
        }
        for &l in &lengths {
            check_length(l)?;
        }
        Ok(ManifoldSpec::FlatTorus { lengths })
    }

    pub fn sphere() -> Self {
        ManifoldSpec::Sphere2
    }

    pub fn dimension(&self) -> usize {
        match self {
            ManifoldSpec::Circle { .. } => 1,
            ManifoldSpec::FlatTorus { lengths } => lengths.len(),
            ManifoldSpec::Sphere2 => 2,
        }
    }

    /// Side lengths of the periodic cell; `None` for the sphere.
    pub fn periods(&self) -> Option<&[f64]> {
        match self {
            ManifoldSpec::Circle { length } => Some(std::slice::from_ref(length)),
            ManifoldSpec::FlatTorus { lengths } => Some(lengths),
            ManifoldSpec::Sphere2 => None,
        }
    }

    /// Total volume m₀ = m(M).
    pub fn volume<T: Scalar>(&self) -> T {
        match self {
            ManifoldSpec::Circle { length } => T::of(*length),
            ManifoldSpec::FlatTorus { lengths } => lengths.iter().map(|&l| T::of(l)).fold(T::one(), |a, b| a * b),
            ManifoldSpec::Sphere2 => T::of(4.0) * T::PI(),
        }
    }

    /// Number of coordinates in a [`Point`] on this manifold.
    pub fn coordinate_len(&self) -> usize {
        match self {
            ManifoldSpec::Sphere2 => 3,
            _ => self.dimension(),
        }
    }

    /// Riemannian distance between two points.
    pub fn geodesic_distance<T: Scalar>(&self, x: &Point<T>, y: &Point<T>) -> Result<T> {
        self.check_point(x)?;
        self.check_point(y)?;
        match self.periods() {
            Some(periods) => {
                let mut acc = T::zero();
                for ((&a, &b), &l) in x.coords.iter().zip(&y.coords).zip(periods) {
                    let l = T::of(l);
                    let d = (a - b).abs() % l;
                    let d = d.min(l - d);
                    acc = acc + d * d;
                }
                Ok(acc.sqrt())
            }
            None => {
                let (a, b) = (&x.coords, &y.coords);
                let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
                let cx = a[1] * b[2] - a[2] * b[1];
                let cy = a[2] * b[0] - a[0] * b[2];
                let cz = a[0] * b[1] - a[1] * b[0];
                let cross = (cx * cx + cy * cy + cz * cz).sqrt();
                Ok(cross.atan2(dot))
            }
        }
    }

    pub(crate) fn check_point<T: Scalar>(&self, p: &Point<T>) -> Result<()> {
        if p.coords.len() != self.coordinate_len() {
            return Err(Error::DimensionMismatch { expected: self.coordinate_len(), got: p.coords.len() });
        }
        Ok(())
    }
}

/// A point on a manifold.
///
/// Circle/torus points are angle-like coordinates reduced into `[0, L_i)`;
/// sphere points are unit 3-vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Point<T> {
    /// Periodic coordinates, reduced modulo the side lengths.
    pub fn periodic(manifold: &ManifoldSpec, coords: Vec<T>) -> Result<Self> {
        let periods = manifold
            .periods()
            .ok_or_else(|| Error::InvalidPoint("periodic coordinates on the sphere".into()))?;
        if coords.len() != periods.len() {
            return Err(Error::DimensionMismatch { expected: periods.len(), got: coords.len() });
        }
        let mut p = Point { coords };
        p.wrap(periods);
        Ok(p)
    }

    /// Unit vector on the sphere; the input is normalized.
    pub fn on_sphere(v: [T; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::InvalidPoint("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(Point { coords: vec![v[0] / n, v[1] / n, v[2] / n] })
    }

    /// Sphere point from colatitude θ and longitude φ.
    pub fn spherical(theta: T, phi: T) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Point { coords: vec![st * cp, st * sp, ct] }
    }

    /// Builds a point appropriate to `manifold` from raw coordinates.
    pub fn new(manifold: &ManifoldSpec, coords: Vec<T>) -> Result<Self> {
        match manifold {
            ManifoldSpec::Sphere2 => {
                if coords.len() != 3 {
                    return Err(Error::DimensionMismatch { expected: 3, got: coords.len() });
                }
                Self::on_sphere([coords[0], coords[1], coords[2]])
            }
            _ => Self::periodic(manifold, coords),
        }
    }

    /// A canonical base point: the origin of the cell, or the north pole.
    pub fn origin(manifold: &ManifoldSpec) -> Self {
        match manifold {
            ManifoldSpec::Sphere2 => Point { coords: vec![T::zero(), T::zero(), T::one()] },
            m => Point { coords: vec![T::zero(); m.dimension()] },
        }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [T] {
        &mut self.coords
    }

    pub(crate) fn wrap(&mut self, periods: &[f64]) {
        for (c, &l) in self.coords.iter_mut().zip(periods) {
            let l = T::of(l);
            let mut r = *c % l;
            if r < T::zero() {
                r = r + l;
            }
            // x % l + l can round up to l for tiny negative x
            if r >= l {
                r = T::zero();
            }
            *c = r;
        }
    }

    pub fn cast<U: Scalar>(&self) -> Point<U> {
        Point { coords: self.coords.iter().map(|&c| U::of(c.as_f64())).collect() }
    }
}
