//! Ensemble estimates of inequality constants across an h-scan.

use crate::ensemble::{ensemble_member, DEFAULT_ENSEMBLE_SIZE};
use crate::error::{HarnessError, Result};
use crate::scan::{grid_size, with_threads, Bound, ScanCell, ScanMetadata, ScanResult};
use latdisp::{dyadic_scales, forward_difference, lp_norm, Grid64, Lattice64, Spectral};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Inequality {
    /// ‖P_N f‖_q ≤ C (N/h)^{d(1/p−1/q)} ‖f‖_p.
    Bernstein {
        #[serde(serialize_with = "crate::output::ser_exponent")]
        p: f64,
        #[serde(serialize_with = "crate::output::ser_exponent")]
        q: f64,
    },
    /// ‖f‖_q ≤ C ‖f‖_p^{1−θ} ‖|∇_h|^s f‖_p^θ.
    GagliardoNirenberg {
        #[serde(serialize_with = "crate::output::ser_exponent")]
        p: f64,
        #[serde(serialize_with = "crate::output::ser_exponent")]
        q: f64,
        s: f64,
        theta: f64,
    },
    /// ‖f‖_q ≤ C ‖|∇_h|^s f‖_p.
    SobolevEndpoint {
        #[serde(serialize_with = "crate::output::ser_exponent")]
        p: f64,
        #[serde(serialize_with = "crate::output::ser_exponent")]
        q: f64,
        s: f64,
    },
    /// (−Δ_h)^{s/2} against |∇_h|^s, and Σ_j‖D_j⁺f‖ against ‖|∇_h|f‖ when s = 1.
    NormEquivalence {
        #[serde(serialize_with = "crate::output::ser_exponent")]
        p: f64,
        s: f64,
    },
    /// c ‖f‖_p ≤ ‖(Σ_N |P_N f|²)^{1/2}‖_p ≤ C ‖f‖_p.
    SquareFunction {
        #[serde(serialize_with = "crate::output::ser_exponent")]
        p: f64,
    },
}

impl Inequality {
    pub fn name(&self) -> &'static str {
        match self {
            Inequality::Bernstein { .. } => "bernstein",
            Inequality::GagliardoNirenberg { .. } => "gagliardo_nirenberg",
            Inequality::SobolevEndpoint { .. } => "sobolev_endpoint",
            Inequality::NormEquivalence { .. } => "norm_equivalence",
            Inequality::SquareFunction { .. } => "square_function",
        }
    }

    /// Checks the hypotheses under which the inequality is asserted.
    pub fn validate(&self, d: usize) -> Result<()> {
        let dd = d as f64;
        let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
        let bad = |what: &str| Err(HarnessError::config(format!("{}: {what}", self.name())));
        match *self {
            Inequality::Bernstein { p, q } => {
                if !(1.0 <= p && p <= q) {
                    return bad("requires 1 <= p <= q <= inf");
                }
            }
            Inequality::GagliardoNirenberg { p, q, s, theta } => {
                if !(1.0 <= p && p <= q) {
                    return bad("requires 1 <= p <= q <= inf");
                }
                if !(theta > 0.0 && theta < 1.0) {
                    return bad("requires 0 < theta < 1");
                }
                if !(s > 0.0) {
                    return bad("requires s > 0");
                }
                if (inv(q) - (1.0 / p - theta * s / dd)).abs() > 1e-12 {
                    return bad("requires 1/q = 1/p - theta*s/d");
                }
            }
            Inequality::SobolevEndpoint { p, q, s } => {
                if !(1.0 < p && p < q && q.is_finite()) {
                    return bad("requires 1 < p < q < inf");
                }
                if !(s > 0.0 && s < dd) {
                    return bad("requires 0 < s < d");
                }
                if (1.0 / q - (1.0 / p - s / dd)).abs() > 1e-12 {
                    return bad("requires 1/q = 1/p - s/d");
                }
            }
            Inequality::NormEquivalence { p, s } => {
                if !(p >= 1.0) {
                    return bad("requires 1 <= p <= inf");
                }
                if !(s > 0.0) {
                    return bad("requires s > 0");
                }
            }
            Inequality::SquareFunction { p } => {
                if !(p > 1.0 && p.is_finite()) {
                    return bad("requires 1 < p < inf");
                }
            }
        }
        Ok(())
    }

    fn needs_mean_zero(&self) -> bool {
        !matches!(self, Inequality::Bernstein { .. })
    }

    fn two_sided(&self) -> bool {
        matches!(
            self,
            Inequality::NormEquivalence { .. } | Inequality::SquareFunction { .. }
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantScanConfig {
    pub inequality: Inequality,
    pub d: usize,
    pub box_length: f64,
    pub h_values: Vec<f64>,
    pub ensemble_size: usize,
    pub seed: u64,
    pub threads: usize,
}

impl ConstantScanConfig {
    pub fn new(inequality: Inequality, d: usize, box_length: f64, h_values: Vec<f64>) -> Self {
        Self {
            inequality,
            d,
            box_length,
            h_values,
            ensemble_size: DEFAULT_ENSEMBLE_SIZE,
            seed: 0,
            threads: 1,
        }
    }
}

/// One measured ratio for one member: (label, lhs, rhs, param).
type Sample = (&'static str, f64, f64, Option<f64>);

fn measure(ineq: &Inequality, spec: &Spectral<f64>, f: &Grid64) -> Result<Vec<Sample>> {
    let lat = spec.lattice();
    let d = lat.dim() as f64;
    let h = lat.h();
    let mut out = Vec::new();
    match *ineq {
        Inequality::Bernstein { p, q } => {
            let norm_p = lp_norm(f, p)?;
            let gap = if q.is_infinite() { 1.0 / p } else { 1.0 / p - 1.0 / q };
            for n in dyadic_scales(lat) {
                let pn = spec.lp_projection(f, n)?;
                let lhs = lp_norm(&pn, q)?;
                out.push(("bernstein", lhs, (n / h).powf(d * gap) * norm_p, Some(n)));
            }
        }
        Inequality::GagliardoNirenberg { p, q, s, theta } => {
            let lhs = lp_norm(f, q)?;
            let a = lp_norm(f, p)?;
            let b = lp_norm(&spec.fractional_derivative(f, s)?, p)?;
            out.push(("gagliardo_nirenberg", lhs, a.powf(1.0 - theta) * b.powf(theta), None));
        }
        Inequality::SobolevEndpoint { p, q, s } => {
            let lhs = lp_norm(f, q)?;
            let rhs = lp_norm(&spec.fractional_derivative(f, s)?, p)?;
            out.push(("sobolev_endpoint", lhs, rhs, None));
        }
        Inequality::NormEquivalence { p, s } => {
            let grad = lp_norm(&spec.fractional_derivative(f, s)?, p)?;
            let lap = lp_norm(&spec.laplacian_power(f, s)?, p)?;
            out.push(("laplacian_power", lap, grad, None));
            if s == 1.0 {
                let mut sum = 0.0;
                for axis in 0..lat.dim() {
                    sum += lp_norm(&forward_difference(f, axis)?, p)?;
                }
                out.push(("forward_differences", sum, grad, None));
            }
        }
        Inequality::SquareFunction { p } => {
            let sq = lp_norm(&spec.square_function(f)?, p)?;
            out.push(("square_function", sq, lp_norm(f, p)?, None));
        }
    }
    Ok(out)
}

/// Extremal ensemble ratios per h, fitted against 1/h.
pub fn inequality_constant_scan(cfg: &ConstantScanConfig) -> Result<ScanResult> {
    if !(1..=3).contains(&cfg.d) {
        return Err(HarnessError::config(format!(
            "dimension must be 1, 2 or 3, got {}",
            cfg.d
        )));
    }
    cfg.inequality.validate(cfg.d)?;
    if cfg.h_values.is_empty() {
        return Err(HarnessError::config("h-list is empty"));
    }
    if cfg.ensemble_size == 0 {
        return Err(HarnessError::config("ensemble size must be positive"));
    }
    let sizes = cfg
        .h_values
        .iter()
        .map(|&h| grid_size(cfg.box_length, h))
        .collect::<Result<Vec<_>>>()?;
    let ineq = cfg.inequality;
    let per_h = with_threads(cfg.threads, || {
        cfg.h_values
            .iter()
            .zip(&sizes)
            .map(|(&h, &m)| -> Result<Vec<ScanCell>> {
                let lat = Lattice64::new(h, cfg.d, m)?;
                let spec = Spectral::new(lat);
                let samples: Vec<Vec<Sample>> = (0..cfg.ensemble_size)
                    .into_par_iter()
                    .map(|j| {
                        let mut f = ensemble_member(&lat, cfg.seed, j);
                        if ineq.needs_mean_zero() {
                            f = f.mean_zero();
                        }
                        measure(&ineq, &spec, &f)
                    })
                    .collect::<Result<_>>()?;
                Ok(extremes(h, m, &samples, ineq.two_sided()))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let metadata = ScanMetadata {
        experiment: format!("constants/{}", ineq.name()),
        d: cfg.d,
        box_length: cfg.box_length,
        h_values: cfg.h_values.clone(),
        grid_sizes: sizes,
        seed: cfg.seed,
        threads: cfg.threads,
        ensemble_size: cfg.ensemble_size,
        config: serde_json::to_value(ineq)?,
    };
    Ok(ScanResult::new(metadata, per_h.into_iter().flatten().collect()))
}

/// Max (and min, if two-sided) ratio per label; ties keep the first member.
fn extremes(h: f64, m: usize, samples: &[Vec<Sample>], two_sided: bool) -> Vec<ScanCell> {
    let mut labels: Vec<&'static str> = Vec::new();
    for s in samples.iter().flatten() {
        if !labels.contains(&s.0) {
            labels.push(s.0);
        }
    }
    let mut cells = Vec::new();
    for label in labels {
        let mut bounds = vec![Bound::Max];
        if two_sided {
            bounds.push(Bound::Min);
        }
        for bound in bounds {
            let mut best: Option<ScanCell> = None;
            for (j, member) in samples.iter().enumerate() {
                for &(l, lhs, rhs, param) in member {
                    if l != label || !(rhs > 0.0) {
                        continue;
                    }
                    let ratio = lhs / rhs;
                    let better = match &best {
                        None => true,
                        Some(b) => match bound {
                            Bound::Max => ratio > b.ratio,
                            Bound::Min => ratio < b.ratio,
                        },
                    };
                    if better {
                        best = Some(ScanCell {
                            h,
                            m,
                            label: label.into(),
                            bound,
                            member: Some(j),
                            param,
                            lhs,
                            rhs,
                            ratio,
                        });
                    }
                }
            }
            cells.extend(best);
        }
    }
    cells
}
