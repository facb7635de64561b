#![allow(dead_code)]

pub mod duhamel;

use latdisp::{Complex, GridFunction, Lattice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_field(lat: Lattice<f64>, rng: &mut ChaCha8Rng) -> GridFunction<f64> {
    let vals = (0..lat.len())
        .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    GridFunction::from_values(lat, vals).unwrap()
}

pub fn random_nonnegative(lat: Lattice<f64>, rng: &mut ChaCha8Rng) -> GridFunction<f64> {
    let vals = (0..lat.len())
        .map(|_| Complex::new(rng.random_range(0.0..1.0), 0.0))
        .collect();
    GridFunction::from_values(lat, vals).unwrap()
}

pub fn gaussian(lat: Lattice<f64>, width: f64, k0: f64) -> GridFunction<f64> {
    GridFunction::from_positions(lat, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let phase: f64 = x.iter().map(|v| k0 * v).sum();
        Complex::from_polar((-r2 / (2.0 * width * width)).exp(), phase)
    })
}
