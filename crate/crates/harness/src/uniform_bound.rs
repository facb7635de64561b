//! DNLS runs across h: the S¹ norm of the solution and the Ḣ¹ bounds that
//! follow from mass and energy conservation.

use crate::error::{HarnessError, Result};
use crate::scan::{grid_size, with_threads, Bound, ScanCell, ScanMetadata, ScanResult};
use latdisp::{admissible_pairs_capped, evolve, s1_norm, Grid64, Lattice64, NlsConfig64, C64, DEFAULT_R_MAX};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct UniformBoundConfig {
    pub d: usize,
    pub box_length: f64,
    pub h_values: Vec<f64>,
    pub amplitude: f64,
    /// Gaussian width in physical units.
    pub width: f64,
    pub lambda: f64,
    pub p: f64,
    pub dt: f64,
    pub t_final: f64,
    pub pair_count: usize,
    pub r_max: f64,
    pub threads: usize,
}

impl UniformBoundConfig {
    pub fn new(lambda: f64, p: f64, h_values: Vec<f64>) -> Self {
        Self {
            d: 1,
            box_length: 64.0,
            h_values,
            amplitude: 1.0,
            width: 3.0,
            lambda,
            p,
            dt: 0.01,
            t_final: 1.0,
            pair_count: 5,
            r_max: DEFAULT_R_MAX,
            threads: 1,
        }
    }
}

pub const S1_LABEL: &str = "s1";
pub const HDOT1_LABEL: &str = "hdot1_bound";

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub h: f64,
    pub mass: f64,
    pub energy: f64,
    pub max_hdot1: f64,
    pub hdot1_bound: f64,
    pub held_at_every_sample: bool,
    pub samples: usize,
}

/// Largest X with ½X² − c(√M0·X + m)^α ≤ E0 (α < 2). None if no X ≥ 0 qualifies.
fn focusing_bound(e0: f64, c: f64, m0: f64, m: f64, alpha: f64) -> Option<f64> {
    let g = |x: f64| 0.5 * x * x - c * (m0.sqrt() * x + m).powf(alpha) - e0;
    let mut hi = 1.0;
    while g(hi) <= 0.0 || 0.25 * hi * hi < c * (m0.sqrt() * hi + m).powf(alpha) {
        hi *= 2.0;
    }
    const STEPS: usize = 4096;
    let mut lo = (0..STEPS)
        .rev()
        .map(|k| hi * k as f64 / STEPS as f64)
        .find(|&x| g(x) <= 0.0)?;
    let mut up = lo + hi / STEPS as f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + up);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            up = mid;
        }
    }
    Some(up)
}

pub fn uniform_bound_experiment(cfg: &UniformBoundConfig) -> Result<(ScanResult, Vec<BoundCheck>)> {
    if cfg.d != 1 {
        return Err(HarnessError::config(
            "the uniform bound experiment is implemented for d = 1",
        ));
    }
    if !(cfg.p > 1.0 && cfg.p < 1.0 + 4.0 / cfg.d as f64) {
        return Err(HarnessError::config(format!("need 1 < p < 1 + 4/d, got p = {}", cfg.p)));
    }
    if cfg.h_values.is_empty() {
        return Err(HarnessError::config("h-list is empty"));
    }
    let pairs = admissible_pairs_capped(cfg.d, cfg.pair_count, cfg.r_max)?;
    let sizes = cfg
        .h_values
        .iter()
        .map(|&h| grid_size(cfg.box_length, h))
        .collect::<Result<Vec<_>>>()?;
    let runs = with_threads(cfg.threads, || {
        cfg.h_values
            .par_iter()
            .zip(&sizes)
            .map(|(&h, &m)| -> Result<(Vec<ScanCell>, BoundCheck)> {
                let lat = Lattice64::new(h, cfg.d, m)?;
                let (a, w) = (cfg.amplitude, cfg.width);
                let u0 = Grid64::from_positions(lat, |x| C64::new(a * (-x[0] * x[0] / (2.0 * w * w)).exp(), 0.0));
                let mut nls = NlsConfig64::new(cfg.lambda, cfg.p, cfg.dt, cfg.t_final);
                nls.snapshot_stride = 1;
                let traj = evolve(&u0, &nls)?;
                let s1 = s1_norm(&traj, cfg.d, &pairs, cfg.r_max)?;
                let (m0, e0) = (traj.mass[0], traj.energy[0]);
                let max_hdot1 = traj.hdot1.iter().copied().fold(0.0, f64::max);
                let bound = if cfg.lambda >= 0.0 {
                    (2.0 * e0).sqrt()
                } else {
                    let m_max = traj
                        .snapshots
                        .iter()
                        .map(|u| u.values().iter().map(|z| z.norm_sqr()).fold(f64::INFINITY, f64::min))
                        .fold(0.0, f64::max);
                    focusing_bound(
                        e0,
                        cfg.lambda.abs() / (cfg.p + 1.0) * m0,
                        m0,
                        m_max,
                        (cfg.p - 1.0) / 2.0,
                    )
                    .unwrap_or(0.0)
                };
                let held = traj.hdot1.iter().all(|&x| x <= bound);
                let cells = vec![
                    ScanCell {
                        h,
                        m,
                        label: S1_LABEL.into(),
                        bound: Bound::Max,
                        member: None,
                        param: None,
                        lhs: s1,
                        rhs: traj.h1[0],
                        ratio: s1 / traj.h1[0],
                    },
                    ScanCell {
                        h,
                        m,
                        label: HDOT1_LABEL.into(),
                        bound: Bound::Max,
                        member: None,
                        param: None,
                        lhs: max_hdot1,
                        rhs: bound,
                        ratio: max_hdot1 / bound,
                    },
                ];
                let check = BoundCheck {
                    h,
                    mass: m0,
                    energy: e0,
                    max_hdot1,
                    hdot1_bound: bound,
                    held_at_every_sample: held,
                    samples: traj.hdot1.len(),
                };
                Ok((cells, check))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let (cells, checks): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    let metadata = ScanMetadata {
        experiment: "s1".into(),
        d: cfg.d,
        box_length: cfg.box_length,
        h_values: cfg.h_values.clone(),
        grid_sizes: sizes,
        seed: 0,
        threads: cfg.threads,
        ensemble_size: 1,
        config: serde_json::json!({
            "lambda": cfg.lambda, "p": cfg.p, "dt": cfg.dt, "t_final": cfg.t_final,
            "amplitude": cfg.amplitude, "width": cfg.width, "pair_count": cfg.pair_count,
            "r_max": cfg.r_max, "checks": checks,
        }),
    };
    Ok((ScanResult::new(metadata, cells.into_iter().flatten().collect()), checks))
}
