//! Quadrature rules: periodic trapezoid, Gauss–Legendre, and the product
//! Gauss–Legendre × uniform-longitude grid on the sphere.

use std::f64::consts::{PI, TAU};

/// Equispaced nodes `k L / n`, `k = 0..n`; with weight `L / n` this is the
/// periodic trapezoid rule, exact for trigonometric polynomials of degree < n.
pub fn periodic_nodes(length: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| length * k as f64 / n as f64).collect()
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    x.into_iter().zip(w).map(move |(x, w)| (mid + half * x, half * w))
}

/// Product rule on the unit sphere: Gauss–Legendre in cos θ, uniform in φ.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (z, wz) = gauss_legendre(n_theta);
        let mut points = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        let dphi = TAU / n_phi as f64;
        for (&zi, &wi) in z.iter().zip(&wz) {
            let s = (1.0 - zi * zi).sqrt();
            for j in 0..n_phi {
                let (sp, cp) = (j as f64 * dphi).sin_cos();
                points.push([s * cp, s * sp, zi]);
                weights.push(wi * dphi);
            }
        }
        SphereGrid { points, weights }
    }

    /// The default 64 × 128 grid.
    pub fn standard() -> Self {
        Self::new(64, 128)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ([f64; 3], f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        for deg in 0..20 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn mapped_rule() {
        let q: f64 = gauss_legendre_on(8, 1.0, 3.0).map(|(t, w)| w * t.exp()).sum();
        assert!((q - (3f64.exp() - 1f64.exp())).abs() < 1e-12);
    }

    #[test]
    fn sphere_area() {
        let g = SphereGrid::standard();
        let a: f64 = g.iter().map(|(_, w)| w).sum();
        assert!((a - 4.0 * PI).abs() < 1e-12);
        let z2: f64 = g.iter().map(|(p, w)| w * p[2] * p[2]).sum();
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
    }
}
