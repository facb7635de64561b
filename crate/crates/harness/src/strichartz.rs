//! Strichartz norms ‖e^{itΔ_h}u0‖_{L^q_t L^r_x} over a truncated time line.

use crate::decay::BOUNDARY_TOLERANCE;
use crate::ensemble::index_scaled_noise;
use crate::error::{HarnessError, Result};
use crate::fit::linear_fit;
use crate::scan::{grid_size, with_threads, Bound, ScanCell, ScanMetadata, ScanResult};
use latdisp::quadrature::{time_norm, trapezoid_weights};
use latdisp::spectral::dispersion;
use latdisp::{lp_norm, sobolev_norm, AdmissiblePair, Error, Grid64, Lattice64, PhaseKind, Propagator64, C64};
use rayon::prelude::*;
use serde::Serialize;

pub const MIN_TIME_NODES: usize = 64;

/// 1/⟨ω⟩ of the data (spectral mean of the rate): the time over which its phases move by O(1).
pub fn characteristic_time(u0: &Grid64) -> Result<f64> {
    let lat = *u0.lattice();
    let spec = latdisp::Spectral::new(lat).forward(u0)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (flat, z) in spec.coefficients().iter().enumerate() {
        let xi = lat.frequency(flat);
        let w = z.norm_sqr();
        num += w * dispersion(lat.h(), &xi[..lat.dim()]);
        den += w;
    }
    if !(den > 0.0) || !(num > 0.0) {
        return Err(Error::domain("Strichartz data must be nonzero and non-constant").into());
    }
    Ok(den / num)
}

/// Symmetric nodes on [−T, T], t = T sinh(a u)/sinh(a) with sinh(a) = T/τ.
pub fn time_nodes(horizon: f64, n_t: usize, tau: f64) -> Vec<f64> {
    let a = (horizon / tau).max(1e-12).asinh();
    let sa = a.sinh();
    (0..n_t)
        .map(|j| {
            let u = -1.0 + 2.0 * j as f64 / (n_t - 1) as f64;
            if a < 1e-6 {
                horizon * u
            } else {
                horizon * (a * u).sinh() / sa
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TimeProfile {
    pub times: Vec<f64>,
    /// ‖u(t)‖_{L^r} at each node.
    pub values: Vec<f64>,
    pub max_boundary_fraction: f64,
}

pub fn time_profile(u0: &Grid64, r: f64, times: &[f64]) -> Result<TimeProfile> {
    let lat = *u0.lattice();
    let prop = Propagator64::new(lat, PhaseKind::Schrodinger, None)?;
    let prepared = prop.prepare(u0)?;
    let samples: Vec<Result<(f64, f64)>> = times
        .par_iter()
        .map(|&t| {
            let u = prop.at(&prepared, t);
            Ok((lp_norm(&u, r)?, u.boundary_mass_fraction()))
        })
        .collect();
    let mut values = Vec::with_capacity(times.len());
    let mut max_boundary_fraction: f64 = 0.0;
    // Report the first violation in |t| order.
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].abs().total_cmp(&times[b].abs()));
    let mut last_valid = 0.0;
    let pairs: Vec<(f64, f64)> = samples.into_iter().collect::<Result<_>>()?;
    for &j in &order {
        let fraction = pairs[j].1;
        if fraction > BOUNDARY_TOLERANCE {
            return Err(Error::Window {
                t: times[j].abs(),
                fraction,
                last_valid,
            }
            .into());
        }
        last_valid = times[j].abs();
    }
    for (v, f) in pairs {
        values.push(v);
        max_boundary_fraction = max_boundary_fraction.max(f);
    }
    Ok(TimeProfile {
        times: times.to_vec(),
        values,
        max_boundary_fraction,
    })
}

fn check_inputs(u0: &Grid64, pair: &AdmissiblePair, n_t: usize) -> Result<()> {
    if n_t < MIN_TIME_NODES {
        return Err(HarnessError::config(format!(
            "n_t must be at least {MIN_TIME_NODES}, got {n_t}"
        )));
    }
    if pair.d != u0.lattice().dim() {
        return Err(HarnessError::config(format!(
            "pair is for d = {}, data has d = {}",
            pair.d,
            u0.lattice().dim()
        )));
    }
    Ok(())
}

/// Composite trapezoid on graded nodes over [−T, T]; sup over nodes when q = ∞.
pub fn strichartz_norm(u0: &Grid64, pair: &AdmissiblePair, horizon: f64, n_t: usize) -> Result<f64> {
    check_inputs(u0, pair, n_t)?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(HarnessError::config(format!("horizon must be positive, got {horizon}")));
    }
    let tau = characteristic_time(u0)?;
    let profile = time_profile(u0, pair.r, &time_nodes(horizon, n_t, tau))?;
    Ok(time_norm(&trapezoid_weights(&profile.times), &profile.values, pair.q))
}

#[derive(Clone, Debug, Serialize)]
pub struct StrichartzMeasurement {
    pub value: f64,
    pub horizon: f64,
    pub n_t: usize,
    pub characteristic_time: f64,
    /// Estimated share of the q-th power integral lying beyond ±T.
    pub tail_fraction: f64,
    /// Fitted decay exponent of ‖u(t)‖^q_{L^r} near the horizon.
    pub tail_exponent: Option<f64>,
    pub max_boundary_fraction: f64,
}

/// Tail beyond ±T from a power-law fit of the q-th power over T/8 ≤ |t| ≤ T.
fn tail_fraction(profile: &TimeProfile, q: f64, horizon: f64) -> (f64, Option<f64>) {
    let peak = profile.values.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return (0.0, None);
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (&t, &v) in profile.times.iter().zip(&profile.values) {
        if t.abs() >= horizon / 8.0 && v > 0.0 {
            x.push(t.abs().ln());
            y.push(q * (v / peak).ln());
        }
    }
    let Some(fit) = linear_fit(&x, &y) else {
        return (1.0, None);
    };
    let gamma = -fit.slope;
    let weights = trapezoid_weights(&profile.times);
    let body: f64 = weights
        .iter()
        .zip(&profile.values)
        .map(|(w, v)| w * (v / peak).powf(q))
        .sum();
    if gamma <= 1.0 {
        return (1.0, Some(gamma));
    }
    let edge = |v: f64| (v / peak).powf(q) * horizon / (gamma - 1.0);
    let tail = edge(profile.values[0]) + edge(*profile.values.last().unwrap());
    (tail / (body + tail), Some(gamma))
}

/// Doubles T from 2τ until the estimated tail share is below `tail_tolerance`.
pub fn strichartz_auto(
    u0: &Grid64,
    pair: &AdmissiblePair,
    n_t: usize,
    tail_tolerance: f64,
) -> Result<StrichartzMeasurement> {
    check_inputs(u0, pair, n_t)?;
    let tau = characteristic_time(u0)?;
    let mut horizon = 2.0 * tau;
    for _ in 0..40 {
        let profile = time_profile(u0, pair.r, &time_nodes(horizon, n_t, tau))?;
        let value = time_norm(&trapezoid_weights(&profile.times), &profile.values, pair.q);
        let (tail, exponent) = if pair.q.is_infinite() {
            (0.0, None)
        } else {
            tail_fraction(&profile, pair.q, horizon)
        };
        if tail < tail_tolerance {
            return Ok(StrichartzMeasurement {
                value,
                horizon,
                n_t,
                characteristic_time: tau,
                tail_fraction: tail,
                tail_exponent: exponent,
                max_boundary_fraction: profile.max_boundary_fraction,
            });
        }
        horizon *= 2.0;
    }
    Err(HarnessError::config(
        "time integral tail did not fall below tolerance; the L^q_t norm may diverge",
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DataFamily {
    /// h^{-d/2} g(x/h) with g tapered noise on |n| ≤ window.
    IndexNoise {
        window: i64,
    },
    /// exp(−|x|²/2σ²) in physical units.
    Gaussian {
        sigma: f64,
    },
    PointMass,
}

impl DataFamily {
    pub fn sample(&self, lat: &Lattice64, seed: u64) -> Grid64 {
        match *self {
            DataFamily::IndexNoise { window } => index_scaled_noise(lat, seed, window),
            DataFamily::Gaussian { sigma } => Grid64::from_positions(*lat, |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                C64::new((-r2 / (2.0 * sigma * sigma)).exp(), 0.0)
            }),
            DataFamily::PointMass => Grid64::point_mass(*lat).scale_real(lat.h().powf(-(lat.dim() as f64) / 2.0)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformityConfig {
    pub d: usize,
    pub box_length: f64,
    pub h_values: Vec<f64>,
    #[serde(serialize_with = "crate::output::ser_exponent")]
    pub q: f64,
    #[serde(serialize_with = "crate::output::ser_exponent")]
    pub r: f64,
    pub family: DataFamily,
    pub n_t: usize,
    pub tail_tolerance: f64,
    pub seed: u64,
    pub threads: usize,
}

impl UniformityConfig {
    pub fn new(d: usize, box_length: f64, h_values: Vec<f64>, pair: AdmissiblePair) -> Self {
        Self {
            d,
            box_length,
            h_values,
            q: pair.q,
            r: pair.r,
            family: DataFamily::IndexNoise { window: 8 },
            n_t: 512,
            tail_tolerance: 0.01,
            seed: 0,
            threads: 1,
        }
    }
}

pub const WITH_DERIVATIVE: &str = "with_derivative";
pub const WITHOUT_DERIVATIVE: &str = "without_derivative";

/// Strichartz norm over ‖|∇_h|^{1/q}u0‖₂ and over ‖u0‖₂ at each h, fitted against 1/h.
pub fn uniformity_scan(cfg: &UniformityConfig) -> Result<ScanResult> {
    let pair = AdmissiblePair::new(cfg.q, cfg.r, cfg.d)?;
    if cfg.h_values.is_empty() {
        return Err(HarnessError::config("h-list is empty"));
    }
    let sizes = cfg
        .h_values
        .iter()
        .map(|&h| grid_size(cfg.box_length, h))
        .collect::<Result<Vec<_>>>()?;
    let runs = with_threads(cfg.threads, || {
        cfg.h_values
            .iter()
            .zip(&sizes)
            .map(|(&h, &m)| -> Result<(Vec<ScanCell>, StrichartzMeasurement)> {
                let lat = Lattice64::new(h, cfg.d, m)?;
                let u0 = cfg.family.sample(&lat, cfg.seed);
                let meas = strichartz_auto(&u0, &pair, cfg.n_t, cfg.tail_tolerance)?;
                let with = sobolev_norm(&u0, pair.inv_q(), 2.0, true)?;
                let without = lp_norm(&u0, 2.0)?;
                let cell = |label: &str, rhs: f64| ScanCell {
                    h,
                    m,
                    label: label.into(),
                    bound: Bound::Max,
                    member: None,
                    param: Some(meas.horizon),
                    lhs: meas.value,
                    rhs,
                    ratio: meas.value / rhs,
                };
                Ok((
                    vec![cell(WITH_DERIVATIVE, with), cell(WITHOUT_DERIVATIVE, without)],
                    meas,
                ))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut cells = Vec::new();
    let mut measurements = Vec::new();
    for (c, m) in runs {
        cells.extend(c);
        measurements.push(m);
    }
    let metadata = ScanMetadata {
        experiment: "uniformity".into(),
        d: cfg.d,
        box_length: cfg.box_length,
        h_values: cfg.h_values.clone(),
        grid_sizes: sizes,
        seed: cfg.seed,
        threads: cfg.threads,
        ensemble_size: 1,
        config: serde_json::json!({
            "q": crate::output::exponent(cfg.q),
            "r": crate::output::exponent(cfg.r),
            "family": cfg.family,
            "n_t": cfg.n_t,
            "tail_tolerance": cfg.tail_tolerance,
            "measurements": measurements,
        }),
    };
    Ok(ScanResult::new(metadata, cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smooth(lat: Lattice64) -> Grid64 {
        Grid64::from_positions(lat, |x| C64::from_polar((-x[0] * x[0] / 8.0).exp(), 0.5 * x[0]))
    }

    #[test]
    fn energy_pair_is_l2_norm() {
        let lat = Lattice64::new(0.5, 1, 256).unwrap();
        let f = smooth(lat);
        let pair = AdmissiblePair::new(f64::INFINITY, 2.0, 1).unwrap();
        let s = strichartz_norm(&f, &pair, 5.0, 64).unwrap();
        let l2 = lp_norm(&f, 2.0).unwrap();
        assert!((s - l2).abs() < 1e-12 * l2);
    }

    #[test]
    fn nodes_are_symmetric_and_graded() {
        let t = time_nodes(100.0, 65, 0.1);
        assert_eq!(t.len(), 65);
        assert!((t[0] + 100.0).abs() < 1e-9 && (t[64] - 100.0).abs() < 1e-9);
        assert_eq!(t[32], 0.0);
        assert!(t[33] - t[32] < t[64] - t[63]);
        for j in 0..65 {
            assert!((t[j] + t[64 - j]).abs() < 1e-9);
        }
    }

    #[test]
    fn doubling_nodes_changes_little() {
        let lat = Lattice64::new(0.5, 1, 512).unwrap();
        let f = smooth(lat);
        let pair = AdmissiblePair::new(6.0, f64::INFINITY, 1).unwrap();
        let a = strichartz_norm(&f, &pair, 20.0, 256).unwrap();
        let b = strichartz_norm(&f, &pair, 20.0, 512).unwrap();
        assert!((a - b).abs() < 5e-3 * b, "{a} vs {b}");
    }

    #[test]
    fn configuration_errors() {
        let lat = Lattice64::new(1.0, 1, 64).unwrap();
        let f = smooth(lat);
        let pair = AdmissiblePair::new(6.0, f64::INFINITY, 1).unwrap();
        assert!(strichartz_norm(&f, &pair, 1.0, 32).unwrap_err().is_configuration());
        let p2 = AdmissiblePair::new(3.0, f64::INFINITY, 2).unwrap();
        assert!(strichartz_norm(&f, &p2, 1.0, 64).unwrap_err().is_configuration());
        let err = strichartz_norm(&f, &pair, 1e4, 64).unwrap_err();
        assert!(!err.is_configuration(), "{err}");
    }

    #[test]
    fn single_h_scan_has_no_slope() {
        let pair = AdmissiblePair::new(6.0, f64::INFINITY, 1).unwrap();
        let mut cfg = UniformityConfig::new(1, 512.0, vec![1.0], pair);
        cfg.n_t = 128;
        let scan = uniformity_scan(&cfg).unwrap();
        assert_eq!(scan.cells.len(), 2);
        assert!(scan.fits.iter().all(|f| f.slope.is_none()));
        assert!(scan.cells.iter().all(|c| c.ratio.is_finite() && c.ratio > 0.0));
    }
}
