//! Dispersive decay: sup-norm of the flow against t, fitted in log-log.

use crate::error::Result;
use crate::fit::log_log_fit;
use latdisp::{lp_norm, Error, Grid64, PhaseKind, Propagator64};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "band", content = "n", rename_all = "snake_case")]
pub enum Band {
    Full,
    Localized(f64),
}

impl Band {
    pub fn scale(self) -> Option<f64> {
        match self {
            Band::Full => None,
            Band::Localized(n) => Some(n),
        }
    }

    pub fn label(self) -> String {
        match self {
            Band::Full => "full".into(),
            Band::Localized(n) => format!("{n}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    pub kind: &'static str,
    pub d: usize,
    pub h: f64,
    pub m: usize,
    pub band: Band,
    pub times: Vec<f64>,
    pub sup_norms: Vec<f64>,
    pub boundary_fractions: Vec<f64>,
    /// L¹ norm of the data before normalization.
    pub data_l1: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Boundary mass tolerated before the periodic box contaminates the flow.
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;

pub fn dispersive_decay_scan(kind: PhaseKind, data: &Grid64, band: Band, times: &[f64]) -> Result<DecayFit> {
    if times.len() < 2 {
        return Err(Error::config("decay scan needs at least two times").into());
    }
    if times.iter().any(|t| !(t.is_finite() && *t > 0.0)) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("times must be positive and strictly increasing").into());
    }
    let lat = *data.lattice();
    let data_l1 = lp_norm(data, 1.0)?;
    if !(data_l1 > 0.0) {
        return Err(Error::domain("decay data must be nonzero").into());
    }
    let normalized = data.scale_real(data_l1.recip());
    let prop = Propagator64::new(lat, kind, band.scale())?;
    let prepared = prop.prepare(&normalized)?;
    let mut sup_norms = Vec::with_capacity(times.len());
    let mut boundary_fractions = Vec::with_capacity(times.len());
    let mut last_valid = 0.0;
    for &t in times {
        let u = prop.at(&prepared, t);
        let fraction = u.boundary_mass_fraction();
        if fraction > BOUNDARY_TOLERANCE {
            return Err(Error::Window {
                t,
                fraction,
                last_valid,
            }
            .into());
        }
        last_valid = t;
        sup_norms.push(u.max_abs());
        boundary_fractions.push(fraction);
    }
    let fit = log_log_fit(times, &sup_norms).ok_or_else(|| Error::domain("degenerate decay data"))?;
    Ok(DecayFit {
        kind: kind.name(),
        d: lat.dim(),
        h: lat.h(),
        m: lat.points_per_axis(),
        band,
        times: times.to_vec(),
        sup_norms,
        boundary_fractions,
        data_l1,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
    })
}
