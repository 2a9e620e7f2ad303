//! Tensor Gauss–Legendre quadrature for phase-space moments.
//!
//! Sums run in parallel over the outermost axis and each worker accumulates its
//! slab in a fixed order; slabs are then added in index order, so results do
//! not depend on the number of threads.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::linalg::Mat;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi's initial guess, refined by Newton on Pₙ.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A one-dimensional rule on `[−half_width, half_width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AxisRule {
    pub fn new(points: usize, half_width: f64) -> Self {
        let (x, w) = gauss_legendre(points);
        Self {
            nodes: x.iter().map(|x| x * half_width).collect(),
            weights: w.iter().map(|w| w * half_width).collect(),
        }
    }
}

/// Zeroth, first and second moments of a density on a tensor grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub norm: f64,
    pub means: Vec<f64>,
    /// Central second moments, normalised by `norm`.
    pub sigma: Mat,
}

impl Moments {
    pub(crate) fn from_raw(norm: f64, first: &[f64], second: &Mat) -> Self {
        let d = first.len();
        let means: Vec<f64> = first.iter().map(|m| m / norm).collect();
        let sigma = Mat::from_fn(d, d, |i, j| second[(i, j)] / norm - means[i] * means[j]);
        Self { norm, means, sigma }
    }
}

#[derive(Clone)]
struct Acc {
    m0: f64,
    m1: Vec<f64>,
    m2: Mat,
}

impl Acc {
    fn zero(d: usize) -> Self {
        Self {
            m0: 0.0,
            m1: vec![0.0; d],
            m2: Mat::zeros(d, d),
        }
    }
    fn add_point(&mut self, z: &[f64], w: f64) {
        self.m0 += w;
        for i in 0..z.len() {
            self.m1[i] += w * z[i];
            for j in i..z.len() {
                self.m2[(i, j)] += w * z[i] * z[j];
            }
        }
    }
    fn merge(&mut self, other: &Acc) {
        self.m0 += other.m0;
        for (a, b) in self.m1.iter_mut().zip(&other.m1) {
            *a += b;
        }
        self.m2 += &other.m2;
    }
    fn finish(mut self) -> Moments {
        let d = self.m1.len();
        for i in 0..d {
            for j in 0..i {
                self.m2[(i, j)] = self.m2[(j, i)];
            }
        }
        Moments::from_raw(self.m0, &self.m1, &self.m2)
    }
}

/// Moments of `density` over the tensor product of `axes`.
pub fn tensor_moments<F>(axes: &[AxisRule], density: F) -> Moments
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let d = axes.len();
    assert!(d >= 1, "at least one axis");
    let slabs: Vec<Acc> = (0..axes[0].nodes.len())
        .into_par_iter()
        .map(|i0| {
            let mut acc = Acc::zero(d);
            let mut z = vec![0.0; d];
            let mut idx = vec![0usize; d];
            z[0] = axes[0].nodes[i0];
            let w0 = axes[0].weights[i0];
            loop {
                let mut w = w0;
                for k in 1..d {
                    z[k] = axes[k].nodes[idx[k]];
                    w *= axes[k].weights[idx[k]];
                }
                acc.add_point(&z, w * density(&z));
                // Odometer over axes 1..d, last axis fastest.
                let mut k = d;
                loop {
                    k -= 1;
                    if k == 0 {
                        return acc;
                    }
                    idx[k] += 1;
                    if idx[k] < axes[k].nodes.len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        })
        .collect();
    let mut total = Acc::zero(d);
    for slab in &slabs {
        total.merge(slab);
    }
    total.finish()
}
