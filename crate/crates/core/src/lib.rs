//! Harmonic analysis and dispersive flows on the periodic lattice hZ^d.
//!
//! The numerical core is generic over the real scalar `T: Real` (f32 or f64);
//! the aliases below fix f64, which the experiment harness uses throughout.

// NaN must fail validation, so negated comparisons are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissible;
pub mod dnls;
pub mod dyadic;
pub mod error;
pub mod fft;
pub mod lattice;
pub mod norms;
pub mod propagators;
pub mod quadrature;
pub mod scalar;
pub mod spectral;

pub use num_complex::Complex;

pub use admissible::{admissible_pairs, admissible_pairs_capped, AdmissiblePair, DEFAULT_R_MAX};
pub use dnls::{
    energy, evolve, mass, nonlinear_phase_flow, read_snapshots, s1_norm, step_strang, Dnls, Monitors, NlsConfig,
    Trajectory,
};
pub use dyadic::{cz_decompose, dyadic_average, dyadic_maximal, CzDecomposition, DyadicCube};
pub use error::{Error, Result};
pub use lattice::{GridFunction, Lattice};
pub use norms::{convolve, inner_product, lp_norm, weak_lp_norm};
pub use propagators::{
    degenerate_points, klein_gordon_flow, localized_flow, schrodinger_flow, PhaseKind, PhaseSpec, Propagator,
};
pub use scalar::Real;
pub use spectral::{
    apply_multiplier, bessel_derivative, discrete_laplacian, dyadic_scales, forward_difference, forward_transform,
    fractional_derivative, inverse_transform, laplacian_power, lp_projection, sobolev_norm, square_function,
    widened_projection, BumpProfile, Spectral, SpectralFunction, Symbol,
};

pub type Lattice64 = Lattice<f64>;
pub type Lattice32 = Lattice<f32>;
pub type Grid64 = GridFunction<f64>;
pub type Grid32 = GridFunction<f32>;
pub type Spectrum64 = SpectralFunction<f64>;
pub type Symbol64 = Symbol<f64>;
pub type Propagator64 = Propagator<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type NlsConfig64 = NlsConfig<f64>;
pub type C64 = Complex<f64>;
