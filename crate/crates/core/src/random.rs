//! Seeded random labeled graphs for stress tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, LabeledGraph, Mode};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    /// Each graph draws its own probability of label 1, sometimes 0 or 1.
    Mixed,
    AllZero,
    AllOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomOptions {
    pub vertices: usize,
    /// Edges added on top of a spanning tree; parallel edges are allowed.
    pub extra_edges: usize,
    pub labels: LabelMode,
    pub mode: Mode,
    /// Largest label in general mode.
    pub max_label: u32,
}

impl RandomOptions {
    pub fn binary(vertices: usize) -> Self {
        RandomOptions {
            vertices,
            extra_edges: vertices / 2,
            labels: LabelMode::Mixed,
            mode: Mode::Binary,
            max_label: 1,
        }
    }

    pub fn general(vertices: usize, dimension: u32) -> Self {
        RandomOptions {
            mode: Mode::General { dimension },
            max_label: 4,
            ..Self::binary(vertices)
        }
    }
}

/// Random connected binary graph with `budget` vertices.
pub fn gen_random(budget: usize, seed: u64) -> LabeledGraph {
    gen_random_with(&RandomOptions::binary(budget), seed)
}

pub fn gen_random_with(opts: &RandomOptions, seed: u64) -> LabeledGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = opts.vertices.max(2);
    let value = |rng: &mut ChaCha8Rng| {
        let q = rng.gen_range(1..=3);
        Rational::new(rng.gen_range(0..4 * n as i128), q)
    };
    let mut values: Vec<Rational> = (0..n).map(|_| value(&mut rng)).collect();
    let ones = match opts.labels {
        LabelMode::AllZero => 0.0,
        LabelMode::AllOne => 1.0,
        LabelMode::Mixed => *[0.0, 1.0, 0.5, rng.gen::<f64>()].choose(&mut rng).unwrap(),
    };

    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for i in 1..n {
        while (0..i).all(|j| values[j] == values[i]) {
            values[i] = value(&mut rng);
        }
        let j = loop {
            let j = rng.gen_range(0..i);
            if values[j] != values[i] {
                break j;
            }
        };
        pairs.push((j as u64, i as u64));
    }
    let mut attempts = 0;
    while pairs.len() < n - 1 + opts.extra_edges && attempts < 100 * (opts.extra_edges + 1) {
        attempts += 1;
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if values[a] != values[b] {
            pairs.push((a as u64, b as u64));
        }
    }

    let mut degree = vec![0usize; n];
    for &(a, b) in &pairs {
        degree[a as usize] += 1;
        degree[b as usize] += 1;
    }
    let edges: Vec<Edge> = pairs
        .iter()
        .enumerate()
        .map(|(id, &(u, v))| {
            let label = match opts.mode {
                Mode::Binary => u32::from(rng.gen_bool(ones)),
                Mode::General { .. } => {
                    let label = if rng.gen_bool(ones) {
                        rng.gen_range(1..=opts.max_label.max(1))
                    } else {
                        0
                    };
                    // Degree-1 vertices only realize labels up to 2.
                    if degree[u as usize] == 1 || degree[v as usize] == 1 {
                        label.min(2)
                    } else {
                        label
                    }
                }
            };
            Edge {
                id: id as u64,
                u,
                v,
                label,
            }
        })
        .collect();
    let vertices: Vec<_> = values.iter().enumerate().map(|(i, &f)| (i as u64, f)).collect();
    LabeledGraph::new(opts.mode, vertices, edges).expect("generator builds valid graphs")
}
