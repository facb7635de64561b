//! Strichartz-admissible exponent pairs, 3/q + d/r = d/2.

use crate::error::{Error, Result};

/// Default stand-in for the "∞^−" cap on r in three dimensions.
pub const DEFAULT_R_MAX: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdmissiblePair {
    pub q: f64,
    pub r: f64,
    pub d: usize,
}

fn recip(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

impl AdmissiblePair {
    pub fn new(q: f64, r: f64, d: usize) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::config(format!("dimension must be 1, 2 or 3, got {d}")));
        }
        if !(q >= 2.0) || !(r >= 2.0) {
            return Err(Error::config(format!("need 2 <= q, r <= inf, got q={q}, r={r}")));
        }
        let pair = Self { q, r, d };
        if pair.defect().abs() > 1e-12 {
            return Err(Error::config(format!(
                "(q, r) = ({q}, {r}) violates 3/q + d/r = d/2 for d = {d}"
            )));
        }
        if d == 3 && q == 2.0 && r.is_infinite() {
            return Err(Error::config("(q, r, d) = (2, inf, 3) is excluded"));
        }
        Ok(pair)
    }

    /// Pair with r = ∞ endpoint replaced: q from 3/q = d/2 − d/r.
    pub fn from_r(r: f64, d: usize) -> Result<Self> {
        let three_over_q = d as f64 / 2.0 - d as f64 * recip(r);
        let q = if three_over_q.abs() < 1e-15 {
            f64::INFINITY
        } else {
            3.0 / three_over_q
        };
        Self::new(q, r, d)
    }

    /// 3/q + d/r − d/2.
    pub fn defect(&self) -> f64 {
        3.0 * recip(self.q) + self.d as f64 * recip(self.r) - self.d as f64 / 2.0
    }

    pub fn inv_q(&self) -> f64 {
        recip(self.q)
    }

    pub fn inv_r(&self) -> f64 {
        recip(self.r)
    }
}

/// `count` pairs with 1/r evenly spaced over its admissible range.
pub fn admissible_pairs(d: usize, count: usize) -> Result<Vec<AdmissiblePair>> {
    admissible_pairs_capped(d, count, DEFAULT_R_MAX)
}

pub fn admissible_pairs_capped(d: usize, count: usize, r_max: f64) -> Result<Vec<AdmissiblePair>> {
    if !(1..=3).contains(&d) {
        return Err(Error::config(format!("dimension must be 1, 2 or 3, got {d}")));
    }
    if count < 2 {
        return Err(Error::config(format!("need at least 2 pairs, got {count}")));
    }
    if !(r_max > 2.0) {
        return Err(Error::config(format!("r_max must exceed 2, got {r_max}")));
    }
    let dd = d as f64;
    let mut lo = (0.5 - 1.5 / dd).max(0.0);
    if d == 3 {
        lo = lo.max(1.0 / r_max);
    }
    let hi = 0.5;
    (0..count)
        .map(|j| {
            let t = j as f64 / (count - 1) as f64;
            // Endpoint-exact interpolation: the last pair must land on 1/r = 1/2.
            let inv_r = lo * (1.0 - t) + hi * t;
            let r = if inv_r == 0.0 { f64::INFINITY } else { 1.0 / inv_r };
            let three_over_q = dd / 2.0 - dd * inv_r;
            let q = if three_over_q.abs() < 1e-15 {
                f64::INFINITY
            } else {
                3.0 / three_over_q
            };
            AdmissiblePair::new(q, r, d)
        })
        .collect()
}
