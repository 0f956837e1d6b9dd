use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::ellipsoid::{ball_membership, EllipsoidSpec};
use crate::error::{Error, Result};
use crate::sim::Checkpoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudPoint {
    pub t: f64,
    pub v: Vec<f64>,
}

/// The vectors `v_{n,t} = (μ_t(f_1), …, μ_t(f_n))` along one path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCloud {
    pub n: usize,
    pub points: Vec<CloudPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    /// Points with `t ≥ t_min`.
    pub considered: usize,
    pub inside: usize,
}

impl Containment {
    pub fn fraction(&self) -> f64 {
        if self.considered == 0 {
            1.0
        } else {
            self.inside as f64 / self.considered as f64
        }
    }

    pub fn all_inside(&self) -> bool {
        self.inside == self.considered
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularCoverage {
    /// Per angular bin, whether some point with normalized radius ≥ the floor fell in it.
    pub hit: Vec<bool>,
}

impl AngularCoverage {
    pub fn covered(&self) -> usize {
        self.hit.iter().filter(|&&h| h).count()
    }
}

impl ClusterCloud {
    /// Takes the first `n` observables of each checkpoint as `f_1..f_n`.
    pub fn from_checkpoints(checkpoints: &[Checkpoint], n: usize) -> Result<Self> {
        let mut points = Vec::with_capacity(checkpoints.len());
        let mut prev = f64::NEG_INFINITY;
        for c in checkpoints {
            if c.t < 3.0 {
                return Err(Error::NormalizationUndefined(c.t));
            }
            if c.t <= prev {
                return Err(Error::InvalidConfig(format!("checkpoint times must increase strictly ({} after {prev})", c.t)));
            }
            if c.mu.len() < n {
                return Err(Error::DimensionMismatch { expected: n, got: c.mu.len() });
            }
            prev = c.t;
            points.push(CloudPoint { t: c.t, v: c.mu[..n].to_vec() });
        }
        Ok(ClusterCloud { n, points })
    }

    /// Points with `t ≥ t_min` inside the ellipsoid inflated by `1 + delta`.
    pub fn containment(&self, e: &EllipsoidSpec, delta: f64, t_min: f64) -> Result<Containment> {
        let bound = (1.0 + delta) * (1.0 + delta);
        let mut c = Containment { considered: 0, inside: 0 };
        for p in self.points.iter().filter(|p| p.t >= t_min) {
            c.considered += 1;
            if e.form(&p.v)? <= bound {
                c.inside += 1;
            }
        }
        Ok(c)
    }

    /// Angular bins of the first two coordinates reached at normalized radius
    /// `√form ≥ min_radius` (for the default basis, `|v| ≥ min_radius · √(2/m₀)`).
    pub fn angular_coverage(&self, e: &EllipsoidSpec, bins: usize, min_radius: f64) -> Result<AngularCoverage> {
        if self.n < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.n });
        }
        let mut hit = vec![false; bins];
        for p in &self.points {
            if e.form(&p.v)?.sqrt() >= min_radius {
                let angle = p.v[1].atan2(p.v[0]).rem_euclid(std::f64::consts::TAU);
                let b = ((angle / std::f64::consts::TAU) * bins as f64) as usize;
                hit[b.min(bins - 1)] = true;
            }
        }
        Ok(AngularCoverage { hit })
    }

    /// CSV with columns `t, v1..vn, form_value, member`.
    pub fn write_csv<W: Write>(&self, e: &EllipsoidSpec, mut w: W) -> io::Result<()> {
        let mut header = vec!["t".to_string()];
        header.extend((1..=self.n).map(|i| format!("v{i}")));
        header.push("form_value".into());
        header.push("member".into());
        writeln!(w, "{}", header.join(","))?;
        for p in &self.points {
            let m = ball_membership(&p.v, e).map_err(|err| io::Error::new(io::ErrorKind::InvalidInput, err))?;
            write!(w, "{}", p.t)?;
            for v in &p.v {
                write!(w, ",{v}")?;
            }
            writeln!(w, ",{},{}", m.form, m.member)?;
        }
        Ok(())
    }
}
