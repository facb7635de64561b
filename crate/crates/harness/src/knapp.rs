//! Knapp block: both sides of the dual Strichartz estimate for a frequency
//! block at hξ = π/2 whose time frequency sits on the dispersion surface.
//!
//! With a = ε³/h², β = 2ε/h and z = x + 2t/h the space-time function is
//! |f(t,x)| = π^{−(d+1)} |sin(at)/t| Π_i |sin(βz_i)/z_i|.

use crate::error::{HarnessError, Result};
use crate::fit::{log_log_fit, LinearFit};
use latdisp::{AdmissiblePair, Error};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Debug, Serialize)]
pub struct KnappConfig {
    pub d: usize,
    /// Dual-grid points per axis for the left-side quadrature.
    pub quad_points: usize,
    /// Lattice sums run over |β(x − y0)| ≤ space_cutoff.
    pub space_cutoff: f64,
    /// Time integral runs over |at| ≤ time_periods·π.
    pub time_periods: usize,
    pub simpson_per_period: usize,
    /// Samples of the lattice-shift average over one period.
    pub shifts: usize,
    /// Add the asymptotic tails beyond the cutoffs.
    pub tail_correction: bool,
}

impl KnappConfig {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            quad_points: if d == 1 { 1 << 20 } else { 1 << 14 },
            space_cutoff: 2000.0,
            time_periods: 4000,
            simpson_per_period: 64,
            shifts: 16,
            tail_correction: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KnappReport {
    pub d: usize,
    pub h: f64,
    pub epsilon: f64,
    pub s: f64,
    #[serde(serialize_with = "crate::output::ser_exponent")]
    pub q: f64,
    #[serde(serialize_with = "crate::output::ser_exponent")]
    pub r: f64,
    /// ‖∫ e^{itΔ_h}|∇_h|^{−s} f dt‖_{L²_h}
    pub left_norm: f64,
    /// ‖f‖_{L^{q'}_t L^{r'}_x}
    pub right_norm: f64,
    pub ratio: f64,
    /// h^s (ε/h)^{d/2}
    pub predicted_left_scaling: f64,
    /// (ε/h)^{d(1−1/r')} (ε³/h²)^{1−1/q'}
    pub predicted_right_scaling: f64,
    pub block_points: usize,
    /// Set when q' = 1 or r' = 1: the norm diverges and only the truncated value is reported.
    pub right_truncated: bool,
}

fn conjugate(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// x − sin x without cancellation near 0.
pub fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    } else {
        x - x.sin()
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let dx = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for j in 1..n {
        acc += f(a + j as f64 * dx) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * dx / 3.0
}

/// Period mean of |sin v|^p.
pub fn mean_abs_sin_pow(p: f64) -> f64 {
    simpson(|v| v.sin().abs().powf(p), 0.0, PI, 4096) / PI
}

fn sinc_pow(u: f64, p: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        (u.sin() / u).abs().powf(p)
    }
}

/// ∫_R |sin u/u|^p du over |u| ≤ Kπ, plus the tail 2μ_p (Kπ)^{1−p}/(p−1) if requested and p > 1.
pub fn sinc_pow_integral(p: f64, periods: usize, per_period: usize, tail: bool) -> f64 {
    let mut acc = 0.0;
    for k in 0..periods {
        let a = k as f64 * PI;
        acc += simpson(|u| sinc_pow(u, p), a, a + PI, per_period);
    }
    let mut total = 2.0 * acc;
    if tail && p > 1.0 {
        let u = periods as f64 * PI;
        total += 2.0 * mean_abs_sin_pow(p) * u.powf(1.0 - p) / (p - 1.0);
    }
    total
}

/// h Σ_{x ∈ hZ} |sin(β(x − y0))/(x − y0)|^{p} over |β(x − y0)| ≤ V.
fn lattice_sinc_sum(h: f64, beta: f64, y0: f64, p: f64, cutoff: f64, tail: bool) -> f64 {
    let reach = cutoff / beta;
    let lo = ((y0 - reach) / h).ceil() as i64;
    let hi = ((y0 + reach) / h).floor() as i64;
    let mut acc = 0.0;
    for n in lo..=hi {
        acc += sinc_pow(beta * (n as f64 * h - y0), p);
    }
    let mut total = h * beta.powf(p) * acc;
    if tail && p > 1.0 {
        // Each side: (1/(βh)) ∫_V^∞ |sin v/v|^p dv in sum units.
        total += h * beta.powf(p) * 2.0 / (beta * h) * mean_abs_sin_pow(p) * cutoff.powf(1.0 - p) / (p - 1.0);
    }
    total
}

pub fn knapp_experiment(h: f64, epsilon: f64, s: f64, pair: &AdmissiblePair, cfg: &KnappConfig) -> Result<KnappReport> {
    if !(cfg.d == 1 || cfg.d == 2) || pair.d != cfg.d {
        return Err(HarnessError::config(format!(
            "Knapp experiment supports d = 1, 2 with a matching pair (d = {}, pair d = {})",
            cfg.d, pair.d
        )));
    }
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::domain(format!("h must lie in (0, 1], got {h}")).into());
    }
    if !(epsilon > 0.0) || epsilon / (h * h) > PI / 2.0 {
        return Err(Error::domain(format!(
            "need 0 < eps and eps/h^2 <= pi/2, got eps = {epsilon}, h = {h}"
        ))
        .into());
    }
    if epsilon >= PI / 4.0 {
        return Err(Error::domain("eps must stay below pi/4 so the block fits in the dual torus").into());
    }
    if !(s >= 0.0) {
        return Err(Error::domain(format!("s must be nonnegative, got {s}")).into());
    }
    if cfg.quad_points < 16
        || cfg.shifts == 0
        || cfg.time_periods == 0
        || cfg.simpson_per_period < 2
        || !(cfg.space_cutoff > 0.0)
    {
        return Err(HarnessError::config("Knapp quadrature settings out of range"));
    }
    let d = cfg.d;
    let (left, block_points) = left_side(h, epsilon, s, d, cfg.quad_points);
    let qc = conjugate(pair.q);
    let rc = conjugate(pair.r);
    let a = epsilon.powi(3) / (h * h);
    let beta = 2.0 * epsilon / h;
    let time = a.powf(qc - 1.0) * sinc_pow_integral(qc, cfg.time_periods, cfg.simpson_per_period, cfg.tail_correction);
    let power = d as f64 * qc / rc;
    let shift_mean = (0..cfg.shifts)
        .map(|j| {
            let y0 = h * j as f64 / cfg.shifts as f64;
            lattice_sinc_sum(h, beta, y0, rc, cfg.space_cutoff, cfg.tail_correction).powf(power)
        })
        .sum::<f64>()
        / cfg.shifts as f64;
    let right = PI.powi(-(d as i32 + 1)) * (time * shift_mean).powf(1.0 / qc);
    let ratio_eh = epsilon / h;
    Ok(KnappReport {
        d,
        h,
        epsilon,
        s,
        q: pair.q,
        r: pair.r,
        left_norm: left,
        right_norm: right,
        ratio: left / right,
        predicted_left_scaling: h.powf(s) * ratio_eh.powf(d as f64 / 2.0),
        predicted_right_scaling: ratio_eh.powf(d as f64 * (1.0 - 1.0 / rc)) * a.powf(1.0 - 1.0 / qc),
        block_points,
        right_truncated: qc == 1.0 || rc == 1.0,
    })
}

/// ((2π)^{−d} Σ_block |ξ|^{−2s} (2π/(hM))^d)^{1/2} over dual-grid points with
/// |y_i| < ε (y = hξ/2 − π/4) and 2|Σ(2y_i − sin 2y_i)| < ε³.
fn left_side(h: f64, eps: f64, s: f64, d: usize, m: usize) -> (f64, usize) {
    let mf = m as f64;
    let k_lo = (mf * (PI / 4.0 - eps) / PI).ceil() as i64;
    let k_hi = (mf * (PI / 4.0 + eps) / PI).floor() as i64;
    let ks: Vec<(f64, f64)> = (k_lo..=k_hi)
        .filter_map(|k| {
            let y = PI * k as f64 / mf - PI / 4.0;
            (y.abs() < eps).then(|| (2.0 * PI * k as f64 / (h * mf), x_minus_sin(2.0 * y)))
        })
        .collect();
    let eps3 = eps.powi(3);
    let mut acc = 0.0;
    let mut count = 0usize;
    match d {
        1 => {
            for &(xi, g) in &ks {
                if (2.0 * g).abs() < eps3 {
                    acc += xi.abs().powf(-2.0 * s);
                    count += 1;
                }
            }
        }
        _ => {
            for &(x1, g1) in &ks {
                for &(x2, g2) in &ks {
                    if (2.0 * (g1 + g2)).abs() < eps3 {
                        acc += (x1 * x1 + x2 * x2).powf(-s);
                        count += 1;
                    }
                }
            }
        }
    }
    let cell = (2.0 * PI / (h * mf)).powi(d as i32);
    ((acc * cell / (2.0 * PI).powi(d as i32)).sqrt(), count)
}

#[derive(Clone, Debug, Serialize)]
pub struct KnappScan {
    pub reports: Vec<KnappReport>,
    /// Fitted ε-exponents at fixed h (absent unless ≥ 2 ε values share one h).
    pub left_eps_fit: Option<LinearFit>,
    pub right_eps_fit: Option<LinearFit>,
    pub predicted_left_eps_exponent: f64,
    pub predicted_right_eps_exponent: f64,
    /// Fitted exponent of left/right against 1/h (absent unless ≥ 2 h values).
    pub ratio_h_fit: Option<LinearFit>,
}

fn predicted_exponents(d: usize, pair: &AdmissiblePair) -> (f64, f64) {
    let dd = d as f64;
    let (qc, rc) = (conjugate(pair.q), conjugate(pair.r));
    (dd / 2.0, 3.0 * (1.0 - 1.0 / qc) + dd * (1.0 - 1.0 / rc))
}

/// Fixed h, several ε.
pub fn knapp_eps_scan(h: f64, eps: &[f64], s: f64, pair: &AdmissiblePair, cfg: &KnappConfig) -> Result<KnappScan> {
    let reports = eps
        .iter()
        .map(|&e| knapp_experiment(h, e, s, pair, cfg))
        .collect::<Result<Vec<_>>>()?;
    let (pl, pr) = predicted_exponents(cfg.d, pair);
    let left: Vec<f64> = reports.iter().map(|r| r.left_norm).collect();
    let right: Vec<f64> = reports.iter().map(|r| r.right_norm).collect();
    Ok(KnappScan {
        left_eps_fit: log_log_fit(eps, &left),
        right_eps_fit: log_log_fit(eps, &right),
        predicted_left_eps_exponent: pl,
        predicted_right_eps_exponent: pr,
        ratio_h_fit: None,
        reports,
    })
}

/// ε = κh² along an h-list; the ratio fit exposes growth when s < 1/q.
pub fn knapp_h_scan(kappa: f64, hs: &[f64], s: f64, pair: &AdmissiblePair, cfg: &KnappConfig) -> Result<KnappScan> {
    let reports = hs
        .iter()
        .map(|&h| knapp_experiment(h, kappa * h * h, s, pair, cfg))
        .collect::<Result<Vec<_>>>()?;
    let (pl, pr) = predicted_exponents(cfg.d, pair);
    let inv_h: Vec<f64> = hs.iter().map(|h| h.recip()).collect();
    let ratio: Vec<f64> = reports.iter().map(|r| r.ratio).collect();
    Ok(KnappScan {
        left_eps_fit: None,
        right_eps_fit: None,
        predicted_left_eps_exponent: pl,
        predicted_right_eps_exponent: pr,
        ratio_h_fit: log_log_fit(&inv_h, &ratio),
        reports,
    })
}
