//! Experiment drivers over the lattice toolkit: decay fits, Strichartz
//! scans, inequality constants, Knapp sharpness and the DNLS uniform bound.

// NaN must fail validation, so negated comparisons are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod decay;
pub mod ensemble;
pub mod error;
pub mod fit;
pub mod knapp;
pub mod output;
pub mod scan;
pub mod strichartz;
pub mod uniform_bound;

pub use latdisp::{admissible_pairs, admissible_pairs_capped, AdmissiblePair, DEFAULT_R_MAX};

pub use constants::{inequality_constant_scan, ConstantScanConfig, Inequality};
pub use decay::{dispersive_decay_scan, Band, DecayFit};
pub use error::{HarnessError, Result};
pub use fit::{linear_fit, log_log_fit, log_space, LinearFit};
pub use knapp::{knapp_eps_scan, knapp_experiment, knapp_h_scan, KnappConfig, KnappReport, KnappScan};
pub use scan::{Bound, GroupFit, ScanCell, ScanMetadata, ScanResult};
pub use strichartz::{
    strichartz_auto, strichartz_norm, uniformity_scan, DataFamily, StrichartzMeasurement, UniformityConfig,
};
pub use uniform_bound::{uniform_bound_experiment, BoundCheck, UniformBoundConfig};
