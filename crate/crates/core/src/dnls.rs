//! Discrete NLS  i∂_t u + Δ_h u − λ|u|^{p−1}u = 0  by Strang splitting.
//!
//! With this sign λ > 0 is defocusing and the conserved energy is
//! E(u) = ½‖√(−Δ_h)u‖² + λ/(p+1)‖u‖^{p+1}_{p+1}.

use std::io::{self, Read, Write};

use num_complex::Complex;

use crate::admissible::AdmissiblePair;
use crate::error::{Error, Result};
use crate::lattice::{GridFunction, Lattice};
use crate::norms::lp_norm_unchecked;
use crate::quadrature::{time_norm, trapezoid_weights};
use crate::scalar::{CompensatedSum, Real};
use crate::spectral::{bessel_symbol, dispersion, Spectral, Symbol};

/// Which series `evolve` records at every step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monitors {
    pub mass: bool,
    pub energy: bool,
    /// ‖⟨∇_h⟩u‖_{L²} and ‖√(−Δ_h)u‖_{L²}.
    pub s1_norm: bool,
    pub boundary_mass: bool,
}

impl Default for Monitors {
    fn default() -> Self {
        Self {
            mass: true,
            energy: true,
            s1_norm: true,
            boundary_mass: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NlsConfig<T> {
    pub lambda: T,
    pub p: T,
    pub dt: T,
    pub t_final: T,
    pub monitors: Monitors,
    pub snapshot_stride: usize,
    /// Boundary-mass fraction that stops the run.
    pub boundary_tolerance: T,
}

impl<T: Real> NlsConfig<T> {
    pub fn new(lambda: T, p: T, dt: T, t_final: T) -> Self {
        Self {
            lambda,
            p,
            dt,
            t_final,
            monitors: Monitors::default(),
            snapshot_stride: 16,
            boundary_tolerance: T::lit(1e-6),
        }
    }

    pub fn validate(&self) -> Result<usize> {
        if !(self.p > T::one()) {
            return Err(Error::config(format!(
                "nonlinearity power must exceed 1, got {}",
                self.p
            )));
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::config(format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= T::zero()) || !self.t_final.is_finite() {
            return Err(Error::config(format!(
                "horizon must be nonnegative, got {}",
                self.t_final
            )));
        }
        if !self.lambda.is_finite() {
            return Err(Error::config("coupling must be finite"));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::config("snapshot stride must be at least 1"));
        }
        let ratio = self.t_final / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > T::lit(1e-6) * ratio.max(T::one()) {
            return Err(Error::config(format!(
                "horizon {} is not a whole number of steps of {}",
                self.t_final, self.dt
            )));
        }
        Ok(steps.to_usize().unwrap_or(0))
    }
}

pub fn mass<T: Real>(u: &GridFunction<T>) -> T {
    let mut acc = CompensatedSum::new();
    for z in u.values() {
        acc.add(z.norm_sqr());
    }
    acc.value() * u.lattice().cell_volume()
}

/// ½⟨−Δ_h u, u⟩ = ½ h^d Σ_j Σ_x |D_j^+ u|², by summation by parts.
pub fn kinetic_energy<T: Real>(u: &GridFunction<T>) -> T {
    let lat = u.lattice();
    let (d, m) = (lat.dim(), lat.points_per_axis());
    let vals = u.values();
    let mut acc = CompensatedSum::new();
    for axis in 0..d {
        let stride = lat.stride(axis);
        for flat in 0..lat.len() {
            let i = lat.axis_indices(flat)[axis];
            let up = if i + 1 == m {
                flat + stride - m * stride
            } else {
                flat + stride
            };
            acc.add((vals[up] - vals[flat]).norm_sqr());
        }
    }
    T::lit(0.5) * acc.value() * lat.cell_volume() / (lat.h() * lat.h())
}

pub fn potential_energy<T: Real>(u: &GridFunction<T>, lambda: T, p: T) -> T {
    let q = p + T::one();
    let norm = lp_norm_unchecked(u.values(), u.lattice().cell_volume(), q);
    lambda / q * norm.powf(q)
}

pub fn energy<T: Real>(u: &GridFunction<T>, lambda: T, p: T) -> T {
    kinetic_energy(u) + potential_energy(u, lambda, p)
}

/// Exact solution of i∂_t u = λ|u|^{p−1}u over time τ.
pub fn nonlinear_phase_flow<T: Real>(u: &GridFunction<T>, tau: T, lambda: T, p: T) -> GridFunction<T> {
    let pm1 = p - T::one();
    u.map(|z| {
        let a = z.norm();
        if a == T::zero() {
            return z;
        }
        let theta = -lambda * a.powf(pm1) * tau;
        z * Complex::new(theta.cos(), theta.sin())
    })
}

/// Strang integrator with the linear half-step precomputed.
#[derive(Clone, Debug)]
pub struct Dnls<T: Real> {
    spectral: Spectral<T>,
    lambda: T,
    p: T,
    dt: T,
    half_step: Vec<Complex<T>>,
    bessel: Vec<Complex<T>>,
}

impl<T: Real> Dnls<T> {
    pub fn new(lattice: Lattice<T>, lambda: T, p: T, dt: T) -> Result<Self> {
        let h = lattice.h();
        let half = dt * T::lit(0.5);
        let half_step = Symbol::new("half", move |xi: &[T]| {
            let theta = -half * dispersion(h, xi);
            Complex::new(theta.cos(), theta.sin())
        })
        .on_grid(&lattice)?;
        let bessel = bessel_symbol(T::one()).on_grid(&lattice)?;
        Ok(Self {
            spectral: Spectral::new(lattice),
            lambda,
            p,
            dt,
            half_step,
            bessel,
        })
    }

    fn linear_half(&self, buf: &mut [Complex<T>]) {
        self.spectral.forward_in_place(buf);
        for (z, m) in buf.iter_mut().zip(&self.half_step) {
            *z *= m;
        }
        self.spectral.inverse_in_place(buf);
    }

    pub fn step(&self, u: &GridFunction<T>) -> GridFunction<T> {
        let mut buf = u.values().to_vec();
        self.linear_half(&mut buf);
        let mid = GridFunction::from_raw(*u.lattice(), buf);
        let mut buf = nonlinear_phase_flow(&mid, self.dt, self.lambda, self.p).into_values();
        self.linear_half(&mut buf);
        GridFunction::from_raw(*u.lattice(), buf)
    }

    /// ‖⟨∇_h⟩u‖_{L²} via Parseval.
    pub fn h1_norm(&self, u: &GridFunction<T>) -> T {
        let mut buf = u.values().to_vec();
        self.spectral.forward_in_place(&mut buf);
        let mut acc = CompensatedSum::new();
        for (z, b) in buf.iter().zip(&self.bessel) {
            acc.add((z * b).norm_sqr());
        }
        let lat = self.spectral.lattice();
        (acc.value() * lat.dual_cell_volume() / T::TAU().powi(lat.dim() as i32)).sqrt()
    }
}

/// One Strang step: linear(dt/2) ∘ nonlinear(dt) ∘ linear(dt/2).
pub fn step_strang<T: Real>(u: &GridFunction<T>, dt: T, cfg: &NlsConfig<T>) -> Result<GridFunction<T>> {
    Ok(Dnls::new(*u.lattice(), cfg.lambda, cfg.p, dt)?.step(u))
}

#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    pub lattice: Lattice<T>,
    pub times: Vec<T>,
    pub snapshot_times: Vec<T>,
    pub snapshots: Vec<GridFunction<T>>,
    pub mass: Vec<T>,
    pub energy: Vec<T>,
    pub h1: Vec<T>,
    pub hdot1: Vec<T>,
    pub boundary_mass: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    fn record(&mut self, solver: &Dnls<T>, monitors: &Monitors, t: T, u: &GridFunction<T>) {
        self.times.push(t);
        if monitors.mass {
            self.mass.push(mass(u));
        }
        let kinetic = if monitors.energy || monitors.s1_norm {
            kinetic_energy(u)
        } else {
            T::zero()
        };
        if monitors.energy {
            self.energy.push(kinetic + potential_energy(u, solver.lambda, solver.p));
        }
        if monitors.s1_norm {
            self.h1.push(solver.h1_norm(u));
            self.hdot1.push((T::lit(2.0) * kinetic).sqrt());
        }
        if monitors.boundary_mass {
            self.boundary_mass.push(u.boundary_mass_fraction());
        }
    }

    pub fn final_state(&self) -> Option<&GridFunction<T>> {
        self.snapshots.last()
    }

    /// Binary dump: h (f64), d (u64), M (u64), snapshot count (u64), then per
    /// snapshot t (f64) followed by the M^d values as (re, im) f64 pairs in
    /// row-major order. All little-endian.
    pub fn write_snapshots<W: Write>(&self, mut w: W) -> io::Result<()> {
        let lat = &self.lattice;
        w.write_all(&lat.h().to_f64_lossy().to_le_bytes())?;
        w.write_all(&(lat.dim() as u64).to_le_bytes())?;
        w.write_all(&(lat.points_per_axis() as u64).to_le_bytes())?;
        w.write_all(&(self.snapshots.len() as u64).to_le_bytes())?;
        for (t, u) in self.snapshot_times.iter().zip(&self.snapshots) {
            w.write_all(&t.to_f64_lossy().to_le_bytes())?;
            for z in u.values() {
                w.write_all(&z.re.to_f64_lossy().to_le_bytes())?;
                w.write_all(&z.im.to_f64_lossy().to_le_bytes())?;
            }
        }
        Ok(())
    }
}

/// Reads a dump written by [`Trajectory::write_snapshots`].
pub fn read_snapshots<R: Read>(mut r: R) -> io::Result<Vec<(f64, GridFunction<f64>)>> {
    fn f64_le<R: Read>(r: &mut R) -> io::Result<f64> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        Ok(f64::from_le_bytes(b))
    }
    fn u64_le<R: Read>(r: &mut R) -> io::Result<u64> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }
    let h = f64_le(&mut r)?;
    let d = u64_le(&mut r)? as usize;
    let m = u64_le(&mut r)? as usize;
    let count = u64_le(&mut r)? as usize;
    let lat = Lattice::new(h, d, m).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let t = f64_le(&mut r)?;
        let mut vals = Vec::with_capacity(lat.len());
        for _ in 0..lat.len() {
            let re = f64_le(&mut r)?;
            let im = f64_le(&mut r)?;
            vals.push(Complex::new(re, im));
        }
        let u = GridFunction::from_values(lat, vals)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
        out.push((t, u));
    }
    Ok(out)
}

/// Runs Strang steps up to `cfg.t_final`, sampling monitors every step.
pub fn evolve<T: Real>(u0: &GridFunction<T>, cfg: &NlsConfig<T>) -> Result<Trajectory<T>> {
    let steps = cfg.validate()?;
    if !u0.is_finite() {
        return Err(Error::domain("initial data must be finite"));
    }
    let lat = *u0.lattice();
    let solver = Dnls::new(lat, cfg.lambda, cfg.p, cfg.dt)?;
    let mut traj = Trajectory {
        lattice: lat,
        times: Vec::with_capacity(steps + 1),
        snapshot_times: vec![T::zero()],
        snapshots: vec![u0.clone()],
        mass: Vec::new(),
        energy: Vec::new(),
        h1: Vec::new(),
        hdot1: Vec::new(),
        boundary_mass: Vec::new(),
    };
    traj.record(&solver, &cfg.monitors, T::zero(), u0);
    let mut u = u0.clone();
    let mut last_valid = T::zero();
    for k in 1..=steps {
        let t = cfg.dt * T::from_usize_lossy(k);
        let next = solver.step(&u);
        if !next.is_finite() {
            return Err(Error::Divergence {
                last_valid: last_valid.to_f64_lossy(),
            });
        }
        if cfg.monitors.boundary_mass {
            let fraction = next.boundary_mass_fraction();
            if fraction > cfg.boundary_tolerance {
                return Err(Error::Window {
                    t: t.to_f64_lossy(),
                    fraction: fraction.to_f64_lossy(),
                    last_valid: last_valid.to_f64_lossy(),
                });
            }
        }
        u = next;
        last_valid = t;
        traj.record(&solver, &cfg.monitors, t, &u);
        if k % cfg.snapshot_stride == 0 || k == steps {
            traj.snapshot_times.push(t);
            traj.snapshots.push(u.clone());
        }
    }
    Ok(traj)
}

/// max over pairs of ‖⟨∇_h⟩^{1−1/q} u‖_{L^q_t L^r_x} on the snapshot grid.
pub fn s1_norm<T: Real>(traj: &Trajectory<T>, d: usize, pairs: &[AdmissiblePair], r_max: f64) -> Result<T> {
    if pairs.is_empty() {
        return Err(Error::config("S1 norm needs at least one admissible pair"));
    }
    if d != traj.lattice.dim() {
        return Err(Error::config(format!(
            "pairs are for d = {d}, trajectory has d = {}",
            traj.lattice.dim()
        )));
    }
    for pair in pairs {
        if pair.d != d {
            return Err(Error::config("pair dimension does not match trajectory"));
        }
        if d == 3 && pair.r > r_max {
            return Err(Error::config(format!(
                "r = {} exceeds the cap {r_max} in d = 3",
                pair.r
            )));
        }
    }
    let spectral = Spectral::new(traj.lattice);
    let weights = trapezoid_weights(&traj.snapshot_times);
    let cell = traj.lattice.cell_volume();
    let mut best = T::zero();
    for pair in pairs {
        let s = T::lit(1.0 - pair.inv_q());
        let table = bessel_symbol(s).on_grid(&traj.lattice)?;
        let r = T::lit(pair.r);
        let spatial: Vec<T> = traj
            .snapshots
            .iter()
            .map(|u| {
                let w = spectral.apply_table(&table, u).expect("same lattice");
                lp_norm_unchecked(w.values(), cell, r)
            })
            .collect();
        best = best.max(time_norm(&weights, &spatial, T::lit(pair.q)));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_site_energy() {
        let lat = Lattice::new(1.0f64, 1, 8).unwrap();
        let a = 0.7;
        let u = GridFunction::point_mass(lat).scale_real(a);
        for (lambda, p) in [(1.0, 3.0), (-1.0, 2.5), (0.0, 2.0)] {
            let e = energy(&u, lambda, p);
            assert_relative_eq!(e, a * a + lambda * a.powf(p + 1.0) / (p + 1.0), epsilon = 1e-14);
        }
        assert_relative_eq!(mass(&GridFunction::point_mass(Lattice::new(0.5, 1, 8).unwrap())), 0.5);
    }

    #[test]
    fn plane_wave_kinetic_energy() {
        let lat = Lattice::new(0.5f64, 1, 16).unwrap();
        let u = GridFunction::plane_wave(lat, &[3]);
        let xi = lat.axis_frequency(3);
        let w = dispersion(0.5, &[xi]);
        assert_relative_eq!(kinetic_energy(&u), 0.5 * w * mass(&u), epsilon = 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(NlsConfig::new(1.0f64, 1.0, 0.1, 1.0).validate().is_err());
        assert!(NlsConfig::new(1.0f64, 3.0, 0.0, 1.0).validate().is_err());
        assert!(NlsConfig::new(1.0f64, 3.0, 0.3, 1.0).validate().is_err());
        assert_eq!(NlsConfig::new(1.0f64, 3.0, 0.1, 1.0).validate().unwrap(), 10);
    }

    #[test]
    fn zero_data_stays_zero() {
        let lat = Lattice::new(1.0f64, 1, 16).unwrap();
        let cfg = NlsConfig::new(1.0, 3.0, 0.1, 1.0);
        let traj = evolve(&GridFunction::zeros(lat), &cfg).unwrap();
        assert!(traj.snapshots.iter().all(|u| u.max_abs() == 0.0));
        assert_eq!(traj.times.len(), 11);
        assert_eq!(traj.mass.len(), 11);
        let pairs = crate::admissible::admissible_pairs(1, 3).unwrap();
        assert_eq!(s1_norm(&traj, 1, &pairs, 100.0).unwrap(), 0.0);
        assert!(s1_norm(&traj, 1, &[], 100.0).is_err());
    }

    #[test]
    fn boundary_contact_stops_the_run() {
        let lat = Lattice::new(1.0f64, 1, 16).unwrap();
        let cfg = NlsConfig::new(0.0, 3.0, 0.5, 20.0);
        let err = evolve(&GridFunction::point_mass(lat), &cfg).unwrap_err();
        assert!(matches!(err, Error::Window { .. }));
    }

    #[test]
    fn divergence_is_reported() {
        let lat = Lattice::new(1.0f64, 1, 16).unwrap();
        let mut cfg = NlsConfig::new(1.0, 3.0, 0.1, 1.0);
        cfg.monitors.boundary_mass = false;
        let u = GridFunction::point_mass(lat).scale_real(1e200);
        assert!(matches!(evolve(&u, &cfg), Err(Error::Divergence { .. })));
    }

    #[test]
    fn snapshot_dump_round_trip() {
        let lat = Lattice::new(0.5f64, 1, 8).unwrap();
        let u = GridFunction::from_sites(lat, |n| Complex::new(n[0] as f64, -0.25 * n[0] as f64));
        let mut cfg = NlsConfig::new(1.0, 3.0, 0.01, 0.04);
        cfg.snapshot_stride = 2;
        cfg.monitors.boundary_mass = false;
        let traj = evolve(&u, &cfg).unwrap();
        let mut bytes = Vec::new();
        traj.write_snapshots(&mut bytes).unwrap();
        assert_eq!(bytes.len(), 32 + 3 * (8 + 8 * 16));
        let back = read_snapshots(&bytes[..]).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[0].1, u);
        assert_eq!(back[2].0, 0.04);
    }
}
