use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::config::{SimConfig, StartPoint};
use super::lil_normalizer;
use crate::error::{Error, Result};
use crate::manifold::{ModeEvaluator, ManifoldSpec, Point, SpectralTruncation, Spectrum};

/// Running trapezoid integral of a sampled function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidAccumulator {
    pub total: f64,
    pub last: f64,
}

impl TrapezoidAccumulator {
    pub fn new(first_value: f64) -> Self {
        TrapezoidAccumulator { total: 0.0, last: first_value }
    }

    /// Adds `(h/2)(f_old + f_new)`.
    #[inline]
    pub fn push(&mut self, half_step: f64, value: f64) {
        self.total += half_step * (self.last + value);
        self.last = value;
    }
}

/// A trajectory in flight.
///
/// Accumulators hold `∫_0^t (f_k - f_k,0 φ_0)(X_s) ds`; the constant part is
/// added back analytically, so constant observables have `μ_t = 0` exactly.
#[derive(Debug, Clone)]
pub struct PathState {
    path_id: u64,
    steps: u64,
    step: f64,
    position: Point<f64>,
    acc: Vec<TrapezoidAccumulator>,
    rng: ChaCha8Rng,
}

impl PathState {
    pub fn path_id(&self) -> u64 {
        self.path_id
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Current time `t = steps · h`.
    pub fn time(&self) -> f64 {
        self.steps as f64 * self.step
    }

    pub fn position(&self) -> &Point<f64> {
        &self.position
    }
}

/// JSON-able image of a [`PathState`], including the RNG counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSnapshot {
    pub path_id: u64,
    pub steps: u64,
    pub step: f64,
    pub position: Vec<f64>,
    pub accumulators: Vec<TrapezoidAccumulator>,
    pub rng: RngSnapshot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RngSnapshot {
    pub seed: u64,
    pub stream: u64,
    /// 128-bit word position, as a decimal string.
    pub word_pos: String,
}

/// Values recorded at a checkpoint time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub t: f64,
    /// μ_t(f_k) per observable.
    pub mu: Vec<f64>,
    /// L_t(f_k) = ∫_0^t f_k(X_s) ds per observable.
    pub occupation: Vec<f64>,
    pub position: Vec<f64>,
}

/// Brownian motion driver for one [`SimConfig`].
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimConfig,
    spectrum: Arc<Spectrum<f64>>,
    // centered coefficients, one row of `width` per observable
    coef: Vec<f64>,
    width: usize,
    constants: Vec<f64>,
    inv_sqrt_volume: f64,
    horizon_steps: u64,
    sqrt_step: f64,
}

impl Simulator {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let top = config
            .observables
            .iter()
            .filter_map(|f| f.coeffs().iter().enumerate().skip(1).rev().find(|(_, c)| **c != 0.0).map(|(n, _)| n))
            .max()
            .unwrap_or(0);
        let spectrum: Arc<Spectrum<f64>> = Arc::new(Spectrum::new(&config.manifold, SpectralTruncation::new(top))?);
        let width = top + 1;
        let mut coef = vec![0.0; width * config.observables.len()];
        for (k, f) in config.observables.iter().enumerate() {
            for n in 1..width {
                coef[k * width + n] = f.coeff(n);
            }
        }
        let constants = config.observables.iter().map(|f| f.coeff(0)).collect();
        let inv_sqrt_volume = 1.0 / spectrum.volume().sqrt();
        let horizon_steps = config.horizon_steps();
        let sqrt_step = config.step.sqrt();
        Ok(Simulator { config, spectrum, coef, width, constants, inv_sqrt_volume, horizon_steps, sqrt_step })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn n_observables(&self) -> usize {
        self.constants.len()
    }

    fn stream(&self, path_id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(path_id);
        rng
    }

    fn scratch(&self) -> Scratch<'_> {
        Scratch { eval: self.spectrum.evaluator(), buf: vec![0.0; self.width] }
    }

    fn centered_value(&self, buf: &[f64], k: usize) -> f64 {
        let row = &self.coef[k * self.width..(k + 1) * self.width];
        row.iter().zip(buf).map(|(c, v)| c * v).sum()
    }

    /// Fresh path `path_id` at time 0.
    pub fn start(&self, path_id: u64) -> PathState {
        let mut rng = self.stream(path_id);
        let m = &self.config.manifold;
        let position = match &self.config.start {
            StartPoint::Fixed(c) => Point::new(m, c.clone()).expect("validated start point"),
            StartPoint::Uniform => match m {
                ManifoldSpec::Sphere2 => {
                    let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
                    Point::on_sphere(v).expect("gaussian vector is nonzero")
                }
                _ => {
                    let periods = m.periods().expect("periodic manifold");
                    Point::periodic(m, periods.iter().map(|&l| rng.gen::<f64>() * l).collect()).expect("in range")
                }
            },
        };
        let mut scratch = self.scratch();
        scratch.eval.fill(position.coords(), &mut scratch.buf);
        let acc = (0..self.n_observables())
            .map(|k| TrapezoidAccumulator::new(self.centered_value(&scratch.buf, k)))
            .collect();
        PathState { path_id, steps: 0, step: self.config.step, position, acc, rng }
    }

    /// Advances one step of size h.
    pub fn step(&self, state: &mut PathState) -> Result<()> {
        self.advance(state, 1)
    }

    /// Advances `n` steps; refuses to pass the horizon.
    pub fn advance(&self, state: &mut PathState, n: u64) -> Result<()> {
        if state.steps + n > self.horizon_steps {
            return Err(Error::HorizonExceeded(self.config.horizon));
        }
        let mut scratch = self.scratch();
        let half = 0.5 * self.config.step;
        let k_obs = self.n_observables();
        for _ in 0..n {
            self.move_point(&mut state.position, &mut state.rng);
            scratch.eval.fill(state.position.coords(), &mut scratch.buf);
            for k in 0..k_obs {
                let v = self.centered_value(&scratch.buf, k);
                state.acc[k].push(half, v);
            }
            state.steps += 1;
        }
        Ok(())
    }

    /// Advances to the last grid time not after `t`.
    pub fn run_until(&self, state: &mut PathState, t: f64) -> Result<()> {
        let target = (t / self.config.step + 1e-9).floor() as u64;
        if target > state.steps {
            self.advance(state, target - state.steps)?;
        }
        Ok(())
    }

    #[inline]
    fn move_point(&self, p: &mut Point<f64>, rng: &mut ChaCha8Rng) {
        let h = self.sqrt_step;
        match &self.config.manifold {
            ManifoldSpec::Sphere2 => {
                let x = p.coords_mut();
                // tangent frame at x from the least aligned axis
                let (ax, ay, az) = (x[0].abs(), x[1].abs(), x[2].abs());
                let a = if ax <= ay && ax <= az {
                    [1.0, 0.0, 0.0]
                } else if ay <= az {
                    [0.0, 1.0, 0.0]
                } else {
                    [0.0, 0.0, 1.0]
                };
                let mut e1 = cross(&a, x);
                let n1 = norm(&e1);
                e1.iter_mut().for_each(|c| *c /= n1);
                let e2 = cross(x, &e1);
                let z1: f64 = rng.sample(StandardNormal);
                let z2: f64 = rng.sample(StandardNormal);
                let v = [h * (z1 * e1[0] + z2 * e2[0]), h * (z1 * e1[1] + z2 * e2[1]), h * (z1 * e1[2] + z2 * e2[2])];
                let r = norm(&v);
                if r > 0.0 {
                    let (s, c) = r.sin_cos();
                    for i in 0..3 {
                        x[i] = c * x[i] + s * v[i] / r;
                    }
                    let n = norm(&[x[0], x[1], x[2]]);
                    x.iter_mut().for_each(|c| *c /= n);
                }
            }
            m => {
                let periods = m.periods().expect("periodic manifold");
                for (c, &l) in p.coords_mut().iter_mut().zip(periods) {
                    let z: f64 = rng.sample(StandardNormal);
                    let mut y = *c + h * z;
                    if y >= l {
                        y -= l;
                    } else if y < 0.0 {
                        y += l;
                    }
                    if !(0.0..l).contains(&y) {
                        y = y.rem_euclid(l);
                        if y >= l {
                            y = 0.0;
                        }
                    }
                    *c = y;
                }
            }
        }
    }

    /// L_t(f_k) = ∫_0^t f_k(X_s) ds.
    pub fn occupation(&self, state: &PathState, k: usize) -> f64 {
        state.acc[k].total + self.constants[k] * self.inv_sqrt_volume * state.time()
    }

    /// μ_t(f_k) = (L_t(f_k) - t m₀^{-1} ∫ f_k dm) / √(2t log log t).
    pub fn mu(&self, state: &PathState, k: usize) -> Result<f64> {
        Ok(state.acc[k].total / lil_normalizer(state.time())?)
    }

    pub fn checkpoint(&self, state: &PathState) -> Result<Checkpoint> {
        let norm = lil_normalizer(state.time())?;
        Ok(Checkpoint {
            t: state.time(),
            mu: state.acc.iter().map(|a| a.total / norm).collect(),
            occupation: (0..self.n_observables()).map(|k| self.occupation(state, k)).collect(),
            position: state.position.coords().to_vec(),
        })
    }

    pub fn snapshot(&self, state: &PathState) -> PathSnapshot {
        PathSnapshot {
            path_id: state.path_id,
            steps: state.steps,
            step: state.step,
            position: state.position.coords().to_vec(),
            accumulators: state.acc.clone(),
            rng: RngSnapshot {
                seed: self.config.seed,
                stream: state.rng.get_stream(),
                word_pos: state.rng.get_word_pos().to_string(),
            },
        }
    }

    pub fn resume(&self, snap: &PathSnapshot) -> Result<PathState> {
        let bad = |m: &str| Error::InvalidConfig(format!("snapshot does not match simulator: {m}"));
        if snap.rng.seed != self.config.seed {
            return Err(bad("seed"));
        }
        if snap.step != self.config.step {
            return Err(bad("step"));
        }
        if snap.accumulators.len() != self.n_observables() {
            return Err(bad("observable count"));
        }
        let word_pos: u128 = snap.rng.word_pos.parse().map_err(|_| bad("word_pos"))?;
        let mut rng = self.stream(snap.rng.stream);
        rng.set_word_pos(word_pos);
        let m = &self.config.manifold;
        if snap.position.len() != m.coordinate_len() {
            return Err(bad("position"));
        }
        let position = Point::new(m, snap.position.clone())?;
        Ok(PathState { path_id: snap.path_id, steps: snap.steps, step: snap.step, position, acc: snap.accumulators.clone(), rng })
    }

    /// Lazily simulated checkpoints of path `path_id` on the configured schedule.
    pub fn checkpoints(&self, path_id: u64) -> CheckpointStream<'_> {
        let indices = self.config.checkpoints.step_indices(self.config.step, self.horizon_steps);
        CheckpointStream { sim: self, state: self.start(path_id), indices, next: 0 }
    }
}

struct Scratch<'a> {
    eval: ModeEvaluator<'a, f64>,
    buf: Vec<f64>,
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(v: &[f64]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Iterator over a path's checkpoints, simulating only as far as consumed.
pub struct CheckpointStream<'a> {
    sim: &'a Simulator,
    state: PathState,
    indices: Vec<u64>,
    next: usize,
}

impl CheckpointStream<'_> {
    pub fn state(&self) -> &PathState {
        &self.state
    }

    /// Checkpoint step indices still to come.
    pub fn remaining(&self) -> &[u64] {
        &self.indices[self.next..]
    }
}

impl Iterator for CheckpointStream<'_> {
    type Item = Checkpoint;

    fn next(&mut self) -> Option<Checkpoint> {
        let idx = *self.indices.get(self.next)?;
        self.next += 1;
        let n = idx - self.state.steps;
        self.sim.advance(&mut self.state, n).expect("schedule within horizon");
        Some(self.sim.checkpoint(&self.state).expect("checkpoints are at t >= 3"))
    }
}
