//! Exact spectral propagators: e^{itΔ_h}, e^{itΔ_h}P_N and the 1-d
//! Klein–Gordon half-wave e^{it√(1−Δ_h)}.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lattice::{GridFunction, Lattice};
use crate::scalar::Real;
use crate::spectral::{dispersion, BumpProfile, Spectral, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseKind {
    Schrodinger,
    KleinGordon,
}

impl PhaseKind {
    pub fn name(self) -> &'static str {
        match self {
            PhaseKind::Schrodinger => "schrodinger",
            PhaseKind::KleinGordon => "klein_gordon",
        }
    }

    /// Rate ρ(ξ) with the propagator symbol written as e^{itρ(ξ)}.
    pub fn rate<T: Real>(self, h: T, xi: &[T]) -> T {
        match self {
            PhaseKind::Schrodinger => -dispersion(h, xi),
            PhaseKind::KleinGordon => (T::one() + dispersion(h, xi)).sqrt(),
        }
    }

    pub fn check_dimension(self, d: usize) -> Result<()> {
        if self == PhaseKind::KleinGordon && d != 1 {
            return Err(Error::Scope(format!(
                "Klein-Gordon flow is implemented for d = 1 only, got d = {d}"
            )));
        }
        Ok(())
    }
}

impl std::str::FromStr for PhaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schrodinger" | "s" => Ok(PhaseKind::Schrodinger),
            "klein_gordon" | "klein-gordon" | "kg" => Ok(PhaseKind::KleinGordon),
            other => Err(Error::config(format!("unknown propagator kind '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSpec<T> {
    pub kind: PhaseKind,
    pub t: T,
    pub lattice: Lattice<T>,
}

impl<T: Real> PhaseSpec<T> {
    pub fn new(kind: PhaseKind, t: T, lattice: Lattice<T>) -> Result<Self> {
        kind.check_dimension(lattice.dim())?;
        Ok(Self { kind, t, lattice })
    }

    pub fn symbol(&self) -> Symbol<T> {
        let (kind, t, h) = (self.kind, self.t, self.lattice.h());
        Symbol::new(format!("{}(t={})", kind.name(), t), move |xi: &[T]| {
            let theta = t * kind.rate(h, xi);
            Complex::new(theta.cos(), theta.sin())
        })
    }
}

/// Propagator with the phase-rate table and optional LP cutoff precomputed.
#[derive(Clone, Debug)]
pub struct Propagator<T: Real> {
    kind: PhaseKind,
    spectral: Spectral<T>,
    rates: Vec<T>,
    band: Option<Vec<T>>,
}

/// Transformed data ready for evaluation at many times.
#[derive(Clone, Debug)]
pub struct Prepared<T> {
    coefficients: Vec<Complex<T>>,
}

impl<T: Real> Propagator<T> {
    pub fn new(lattice: Lattice<T>, kind: PhaseKind, band: Option<T>) -> Result<Self> {
        kind.check_dimension(lattice.dim())?;
        let h = lattice.h();
        let spectral = Spectral::new(lattice);
        let rates = Symbol::real("rate", move |xi: &[T]| kind.rate(h, xi))
            .on_grid(&lattice)?
            .into_iter()
            .map(|z| z.re)
            .collect();
        let band = match band {
            None => None,
            Some(n) => {
                // Validates the scale.
                spectral.lp_projection(&GridFunction::zeros(lattice), n)?;
                let table = crate::spectral::lp_symbol(h, n).on_grid(&lattice)?;
                Some(table.into_iter().map(|z| z.re).collect())
            }
        };
        Ok(Self {
            kind,
            spectral,
            rates,
            band,
        })
    }

    pub fn kind(&self) -> PhaseKind {
        self.kind
    }

    pub fn lattice(&self) -> &Lattice<T> {
        self.spectral.lattice()
    }

    pub fn prepare(&self, f: &GridFunction<T>) -> Result<Prepared<T>> {
        let mut coefficients = self.spectral.forward(f)?.coefficients().to_vec();
        if let Some(band) = &self.band {
            for (z, &b) in coefficients.iter_mut().zip(band) {
                *z *= b;
            }
        }
        Ok(Prepared { coefficients })
    }

    pub fn at(&self, prepared: &Prepared<T>, t: T) -> GridFunction<T> {
        let mut buf: Vec<Complex<T>> = prepared
            .coefficients
            .iter()
            .zip(&self.rates)
            .map(|(z, &r)| {
                let theta = t * r;
                z * Complex::new(theta.cos(), theta.sin())
            })
            .collect();
        self.spectral.inverse_in_place(&mut buf);
        GridFunction::from_values(*self.lattice(), buf).expect("propagator output finite")
    }

    pub fn evolve(&self, f: &GridFunction<T>, t: T) -> Result<GridFunction<T>> {
        Ok(self.at(&self.prepare(f)?, t))
    }
}

pub fn schrodinger_flow<T: Real>(f: &GridFunction<T>, t: T) -> GridFunction<T> {
    Propagator::new(*f.lattice(), PhaseKind::Schrodinger, None)
        .and_then(|p| p.evolve(f, t))
        .expect("Schrodinger flow is defined on every lattice")
}

pub fn localized_flow<T: Real>(f: &GridFunction<T>, t: T, n: T) -> Result<GridFunction<T>> {
    Propagator::new(*f.lattice(), PhaseKind::Schrodinger, Some(n))?.evolve(f, t)
}

pub fn klein_gordon_flow<T: Real>(f: &GridFunction<T>, t: T) -> Result<GridFunction<T>> {
    Propagator::new(*f.lattice(), PhaseKind::KleinGordon, None)?.evolve(f, t)
}

/// cos(hξ_h) at the Klein–Gordon inflection point: the root c ≤ 1 of
/// −c² + (h²+2)c − 1 = 0.
pub fn kg_degenerate_cosine<T: Real>(h: T) -> T {
    let half = T::lit(0.5);
    T::one() + h * h * half - h * half * (h * h + T::lit(4.0)).sqrt()
}

/// Frequencies where the phase Hessian degenerates (per axis for Schrödinger).
pub fn degenerate_points<T: Real>(kind: PhaseKind, h: T) -> Result<Vec<T>> {
    if !(h > T::zero()) {
        return Err(Error::domain(format!("lattice spacing must be positive, got {h}")));
    }
    let xi = match kind {
        PhaseKind::Schrodinger => T::FRAC_PI_2() / h,
        PhaseKind::KleinGordon => kg_degenerate_cosine(h).acos() / h,
    };
    Ok(vec![-xi, xi])
}

/// d²/dξ² of t√(1 + (4/h²) sin²(hξ/2)).
pub fn kg_phase_second_derivative<T: Real>(h: T, t: T, xi: T) -> T {
    let two = T::lit(2.0);
    let c = (h * xi).cos();
    let s = (h * xi).sin();
    let g = T::one() + two * (T::one() - c) / (h * h);
    let g1 = two * s / h;
    let g2 = two * c;
    t * (two * g * g2 - g1 * g1) / (T::lit(4.0) * g.powf(T::lit(1.5)))
}

/// Π_j |2cos(hξ_j)|, the Schrödinger Hessian determinant per unit t^d.
pub fn hessian_factor<T: Real>(h: T, xi: &[T]) -> T {
    xi.iter()
        .fold(T::one(), |acc, &x| acc * (T::lit(2.0) * (h * x).cos()).abs())
}

/// Minimum of the Hessian factor over grid frequencies where ψ_N ≠ 0.
pub fn min_hessian_factor<T: Real>(lattice: &Lattice<T>, n: T) -> T {
    let h = lattice.h();
    let d = lattice.dim();
    let mut best = T::infinity();
    for flat in 0..lattice.len() {
        let xi = lattice.frequency(flat);
        if BumpProfile::psi(h, n, &xi[..d]) != T::zero() {
            best = best.min(hessian_factor(h, &xi[..d]));
        }
    }
    best
}

/// Minimum of |φ''(ξ)|/|t| for the Klein–Gordon phase over grid frequencies with |ξ| ≤ 1.
pub fn min_kg_curvature<T: Real>(lattice: &Lattice<T>) -> Result<T> {
    PhaseKind::KleinGordon.check_dimension(lattice.dim())?;
    let h = lattice.h();
    Ok(lattice
        .axis_frequencies()
        .into_iter()
        .filter(|xi| xi.abs() <= T::one())
        .map(|xi| kg_phase_second_derivative(h, T::one(), xi).abs())
        .fold(T::infinity(), T::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn degenerate_point_values() {
        let s = degenerate_points(PhaseKind::Schrodinger, 1.0f64).unwrap();
        assert_relative_eq!(s[1], std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
        let kg = degenerate_points(PhaseKind::KleinGordon, 1.0f64).unwrap();
        // Root of −c² + 3c − 1 at h = 1 is c = (3 − √5)/2.
        assert_relative_eq!(kg[1], ((3.0 - 5f64.sqrt()) / 2.0).acos(), epsilon = 1e-14);
        assert!((kg[1] - 1.17887).abs() < 1e-5);
        assert_relative_eq!(kg[0], -kg[1]);
    }

    #[test]
    fn kg_degenerate_point_is_inflection() {
        for h in [1.0f64, 0.5, 0.1, 0.01] {
            let xi = degenerate_points(PhaseKind::KleinGordon, h).unwrap()[1];
            assert!(kg_phase_second_derivative(h, 1.0, xi).abs() < 1e-9);
            assert!(kg_phase_second_derivative(h, 1.0, 0.9 * xi) > 0.0);
            assert!(kg_phase_second_derivative(h, 1.0, 1.1 * xi) < 0.0);
        }
    }

    #[test]
    fn kg_needs_one_dimension() {
        let lat = Lattice::new(1.0f64, 2, 8).unwrap();
        let f = GridFunction::point_mass(lat);
        assert!(matches!(klein_gordon_flow(&f, 1.0), Err(Error::Scope(_))));
        assert!(PhaseSpec::new(PhaseKind::KleinGordon, 1.0, lat).is_err());
    }

    #[test]
    fn kg_constant_picks_up_unit_phase() {
        let lat = Lattice::new(0.5f64, 1, 16).unwrap();
        let f = GridFunction::constant(lat, Complex::new(1.0, 0.0));
        let g = klein_gordon_flow(&f, 0.7).unwrap();
        for z in g.values() {
            assert!((z - Complex::from_polar(1.0, 0.7)).norm() < 1e-12);
        }
    }

    #[test]
    fn spec_symbol_matches_propagator() {
        let lat = Lattice::new(0.5f64, 1, 32).unwrap();
        let f = GridFunction::from_sites(lat, |n| Complex::new((-(n[0] * n[0]) as f64 / 9.0).exp(), 0.0));
        let spec = PhaseSpec::new(PhaseKind::Schrodinger, 1.3, lat).unwrap();
        let a = crate::spectral::apply_multiplier(&spec.symbol(), &f).unwrap();
        let b = schrodinger_flow(&f, 1.3);
        assert!(a.max_abs_diff(&b).unwrap() < 1e-13);
    }
}
