#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wgqed_core::transparency::Permutation;
use wgqed_core::EmitterChain;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random chain with `n` sites; `lossless` forces `gamma0 = 0`.
pub fn random_chain(rng: &mut ChaCha8Rng, n: usize, lossless: bool) -> EmitterChain {
    let gamma = rng.random_range(0.2..3.0);
    let gamma0 = if lossless { 0.0 } else { rng.random_range(0.0..2.0) };
    let detunings = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
    let phases = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    EmitterChain::new(gamma, gamma0, detunings, phases).unwrap()
}

/// `n` distinct magnitudes in `[0.05, 10)`.
pub fn random_magnitudes(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(n);
    while out.len() < n {
        let m = rng.random_range(0.05..10.0);
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Permutation::new(order).unwrap()
}
