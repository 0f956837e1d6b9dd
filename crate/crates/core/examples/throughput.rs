use std::sync::Arc;
use std::time::Instant;

use lil_core::green::SpectralFunction;
use lil_core::manifold::{ManifoldSpec, SpectralTruncation, Spectrum};
use lil_core::sim::{CheckpointSchedule, SimConfig, Simulator, StartPoint};

fn main() {
    let m = ManifoldSpec::unit_circle();
    let s = Arc::new(Spectrum::new(&m, SpectralTruncation::new(2)).unwrap());
    let obs = vec![SpectralFunction::basis(s.clone(), 1).unwrap(), SpectralFunction::basis(s, 2).unwrap()];
    let cfg = SimConfig {
        manifold: m,
        start: StartPoint::Fixed(vec![0.0]),
        step: 0.01,
        horizon: 1e5,
        seed: 1,
        observables: obs,
        checkpoints: CheckpointSchedule::default(),
    };
    let sim = Simulator::new(cfg).unwrap();
    let mut st = sim.start(0);
    let t0 = Instant::now();
    sim.advance(&mut st, 1_000_000).unwrap();
    let dt = t0.elapsed();
    println!("{:.2} ns/step, mu = {:?}", dt.as_nanos() as f64 / 1e6, sim.mu(&st, 0));
}
