//! Seeded random data for constant scans.
//!
//! Member `j` of an ensemble draws from its own ChaCha stream, so a member is
//! the same function of (seed, j, lattice) whatever order cells are computed in.

use latdisp::spectral::Symbol;
use latdisp::{BumpProfile, Grid64, Lattice64, Spectral, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

pub const DEFAULT_ENSEMBLE_SIZE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberKind {
    PointMass,
    KnappBlock,
    FilteredNoise,
    WhiteNoise,
    Gaussian,
    SparseMasses,
}

impl MemberKind {
    pub fn of_index(j: usize) -> Self {
        if j == 0 {
            return MemberKind::PointMass;
        }
        match (j - 1) % 5 {
            0 => MemberKind::KnappBlock,
            1 => MemberKind::FilteredNoise,
            2 => MemberKind::WhiteNoise,
            3 => MemberKind::Gaussian,
            _ => MemberKind::SparseMasses,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MemberKind::PointMass => "point_mass",
            MemberKind::KnappBlock => "knapp_block",
            MemberKind::FilteredNoise => "filtered_noise",
            MemberKind::WhiteNoise => "white_noise",
            MemberKind::Gaussian => "gaussian",
            MemberKind::SparseMasses => "sparse_masses",
        }
    }
}

pub fn member_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn normal_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn window_sites(lat: &Lattice64) -> i64 {
    (lat.points_per_axis() / 4) as i64
}

/// Complex noise on |n|_∞ ≤ w with a smooth taper.
fn tapered_noise(lat: &Lattice64, w: i64, rng: &mut ChaCha8Rng) -> Grid64 {
    let mut out = Grid64::zeros(*lat);
    let d = lat.dim();
    let wf = w as f64;
    let mut idx = [0i64; 3];
    let side = (2 * w + 1) as usize;
    for flat in 0..side.pow(d as u32) {
        let mut rem = flat;
        let mut taper = 1.0;
        for a in (0..d).rev() {
            idx[a] = (rem % side) as i64 - w;
            rem /= side;
            taper *= BumpProfile::chi(2.0 * idx[a] as f64 / wf);
        }
        let z = normal_complex(rng);
        if taper > 0.0 {
            out.set_site(&idx[..d], z * taper);
        }
    }
    out
}

/// Draw member `index` on `lat`. Index-space structures are sized in sites,
/// the Gaussian member in physical units relative to the box.
pub fn ensemble_member(lat: &Lattice64, seed: u64, index: usize) -> Grid64 {
    let mut rng = member_rng(seed, index);
    let d = lat.dim();
    let w_max = window_sites(lat).min(16);
    match MemberKind::of_index(index) {
        MemberKind::PointMass => Grid64::point_mass(*lat),
        MemberKind::KnappBlock => {
            let width = rng.random_range(1.5..(w_max as f64 / 4.0).max(2.0));
            let mut y0 = [0.0; 3];
            for y in y0.iter_mut().take(d) {
                *y = if rng.random_bool(0.5) {
                    0.25
                } else {
                    rng.random_range(0.0..0.5)
                };
            }
            Grid64::from_sites(*lat, |n| {
                let mut phase = 0.0;
                let mut r2 = 0.0;
                for (a, &k) in n.iter().enumerate() {
                    phase += std::f64::consts::TAU * y0[a] * k as f64;
                    r2 += (k * k) as f64;
                }
                C64::from_polar((-r2 / (2.0 * width * width)).exp(), phase)
            })
        }
        MemberKind::FilteredNoise => {
            let w = [4, 8, 16][rng.random_range(0..3)].min(w_max);
            let cut = [0.25, 0.125, 0.0625, 0.03125][rng.random_range(0..4)];
            let noise = tapered_noise(lat, w, &mut rng);
            let h = lat.h();
            let filter = Symbol::real("filter", move |xi: &[f64]| {
                xi.iter().fold(1.0, |acc, &x| {
                    acc * BumpProfile::chi((h * x).abs() / (std::f64::consts::TAU * cut))
                })
            });
            let filtered = Spectral::new(*lat)
                .apply(&filter, &noise)
                .expect("filter on own lattice");
            // Re-taper so the filter's tails stay clear of the boundary band.
            let reach = w_max as f64;
            let taper = Grid64::from_sites(*lat, |n| {
                C64::new(
                    n.iter()
                        .fold(1.0, |acc, &k| acc * BumpProfile::chi(2.0 * k as f64 / reach)),
                    0.0,
                )
            });
            filtered.mul(&taper).expect("same lattice")
        }
        MemberKind::WhiteNoise => {
            let w = [2, 4, 8, 16][rng.random_range(0..4)].min(w_max);
            tapered_noise(lat, w, &mut rng)
        }
        MemberKind::Gaussian => {
            let l = lat.box_length();
            let sigma = rng.random_range(l / 64.0..l / 16.0);
            let mut kappa = [0.0; 3];
            for k in kappa.iter_mut().take(d) {
                *k = rng.random_range(0.0..2.0);
            }
            Grid64::from_positions(*lat, |x| {
                let mut r2 = 0.0;
                let mut phase = 0.0;
                for (a, &xa) in x.iter().enumerate() {
                    r2 += xa * xa;
                    phase += kappa[a] * xa;
                }
                C64::from_polar((-r2 / (2.0 * sigma * sigma)).exp(), phase)
            })
        }
        MemberKind::SparseMasses => {
            let count = rng.random_range(1..=8);
            let spread = w_max.min(16);
            let mut out = Grid64::zeros(*lat);
            let mut n = [0i64; 3];
            for _ in 0..count {
                for v in n.iter_mut().take(d) {
                    *v = rng.random_range(-spread..=spread);
                }
                let z = out.at_site(&n[..d]) + normal_complex(&mut rng);
                out.set_site(&n[..d], z);
            }
            out
        }
    }
}

/// Broadband data fixed in index space: h^{-d/2} g(x/h) with g tapered noise
/// on a few sites, so its L² norm is the same at every h.
pub fn index_scaled_noise(lat: &Lattice64, seed: u64, window: i64) -> Grid64 {
    let mut rng = member_rng(seed, 0);
    let g = tapered_noise(lat, window.min(window_sites(lat)), &mut rng);
    g.scale_real(lat.h().powf(-(lat.dim() as f64) / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_are_reproducible_and_finite() {
        let lat = Lattice64::new(0.5, 2, 32).unwrap();
        for j in 0..12 {
            let a = ensemble_member(&lat, 7, j);
            let b = ensemble_member(&lat, 7, j);
            assert_eq!(a.values(), b.values());
            assert!(a.is_finite());
            assert!(a.max_abs() > 0.0, "member {j} vanished");
        }
        assert_ne!(
            ensemble_member(&lat, 7, 3).values(),
            ensemble_member(&lat, 8, 3).values()
        );
    }

    #[test]
    fn members_stay_inside_the_box() {
        let lat = Lattice64::new(1.0, 1, 64).unwrap();
        for j in 0..DEFAULT_ENSEMBLE_SIZE {
            let f = ensemble_member(&lat, 1, j);
            assert!(
                f.boundary_mass_fraction() < 1e-6,
                "member {j} ({:?})",
                MemberKind::of_index(j)
            );
        }
    }

    #[test]
    fn index_scaled_noise_has_fixed_mass() {
        let a = index_scaled_noise(&Lattice64::new(1.0, 1, 64).unwrap(), 3, 8);
        let b = index_scaled_noise(&Lattice64::new(0.25, 1, 256).unwrap(), 3, 8);
        let na = latdisp::lp_norm(&a, 2.0).unwrap();
        let nb = latdisp::lp_norm(&b, 2.0).unwrap();
        assert!((na - nb).abs() < 1e-12 * na);
    }
}
