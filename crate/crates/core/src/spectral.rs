//! Lattice Fourier transform, Fourier multipliers and Littlewood–Paley pieces.
//!
//! Forward: f̂(ξ) = h^d Σ_x f(x) e^{-ix·ξ} at the dual grid ξ_k = 2πk/(hM).
//! Inverse: (2π)^{-d} Σ_k F(ξ_k) e^{ix·ξ_k} (2π/(hM))^d.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft::Fourier;
use crate::lattice::{GridFunction, Lattice, MAX_DIM};
use crate::norms::lp_norm;
use crate::scalar::{CompensatedSum, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFunction<T> {
    lattice: Lattice<T>,
    coefficients: Vec<Complex<T>>,
}

impl<T: Real> SpectralFunction<T> {
    pub fn from_coefficients(lattice: Lattice<T>, coefficients: Vec<Complex<T>>) -> Result<Self> {
        if coefficients.len() != lattice.len() {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                lattice.len(),
                coefficients.len()
            )));
        }
        Ok(Self { lattice, coefficients })
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coefficients
    }

    /// (2π)^{-d} ∫_{T_h^d} |F|² by the dual-grid Riemann sum.
    pub fn l2_norm_squared(&self) -> T {
        let mut acc = CompensatedSum::new();
        for z in &self.coefficients {
            acc.add(z.norm_sqr());
        }
        let scale = self.lattice.dual_cell_volume() / T::TAU().powi(self.lattice.dim() as i32);
        acc.value() * scale
    }
}

/// Frequency-domain function with a label.
#[derive(Clone)]
pub struct Symbol<T> {
    label: String,
    eval: Arc<dyn Fn(&[T]) -> Complex<T> + Send + Sync>,
}

impl<T> std::fmt::Debug for Symbol<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Symbol").field("label", &self.label).finish()
    }
}

impl<T: Real> Symbol<T> {
    pub fn new(label: impl Into<String>, eval: impl Fn(&[T]) -> Complex<T> + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn real(label: impl Into<String>, eval: impl Fn(&[T]) -> T + Send + Sync + 'static) -> Self {
        Self::new(label, move |xi| Complex::new(eval(xi), T::zero()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, xi: &[T]) -> Complex<T> {
        (self.eval)(xi)
    }

    /// Pointwise product symbol.
    pub fn product(&self, other: &Symbol<T>) -> Symbol<T> {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Symbol {
            label: format!("{}*{}", self.label, other.label),
            eval: Arc::new(move |xi| a(xi) * b(xi)),
        }
    }

    /// Values on the dual grid in storage order.
    pub fn on_grid(&self, lattice: &Lattice<T>) -> Result<Vec<Complex<T>>> {
        let d = lattice.dim();
        let freqs = lattice.axis_frequencies();
        let m = lattice.points_per_axis();
        let mut xi = [T::zero(); MAX_DIM];
        let mut out = Vec::with_capacity(lattice.len());
        for flat in 0..lattice.len() {
            let mut rest = flat;
            for axis in (0..d).rev() {
                xi[axis] = freqs[rest % m];
                rest /= m;
            }
            let z = self.evaluate(&xi[..d]);
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::domain(format!(
                    "symbol {} is not finite at ξ = {:?}",
                    self.label,
                    &xi[..d]
                )));
            }
            out.push(z);
        }
        Ok(out)
    }
}

/// ω(ξ) = (4/h²) Σ sin²(hξ_j/2), minus the Laplacian symbol.
pub fn dispersion<T: Real>(h: T, xi: &[T]) -> T {
    let half = T::lit(0.5);
    let s: T = xi.iter().fold(T::zero(), |acc, &x| {
        let v = (h * x * half).sin();
        acc + v * v
    });
    T::lit(4.0) * s / (h * h)
}

fn euclid<T: Real>(xi: &[T]) -> T {
    xi.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
}

pub fn laplacian_symbol<T: Real>(h: T) -> Symbol<T> {
    Symbol::real("laplacian", move |xi: &[T]| -dispersion(h, xi))
}

/// |ξ|^s, value 0 at ξ = 0.
pub fn fractional_symbol<T: Real>(s: T) -> Symbol<T> {
    Symbol::real(format!("|xi|^{s}"), move |xi: &[T]| {
        let r = euclid(xi);
        if r == T::zero() {
            T::zero()
        } else {
            r.powf(s)
        }
    })
}

/// (1 + |ξ|²)^{s/2}.
pub fn bessel_symbol<T: Real>(s: T) -> Symbol<T> {
    Symbol::real(format!("<xi>^{s}"), move |xi: &[T]| {
        let r2 = xi.iter().fold(T::zero(), |acc, &x| acc + x * x);
        (T::one() + r2).powf(s * T::lit(0.5))
    })
}

/// ω(ξ)^{s/2}, value 0 at ξ = 0.
pub fn laplacian_power_symbol<T: Real>(h: T, s: T) -> Symbol<T> {
    Symbol::real(format!("(-lap)^{s}/2"), move |xi: &[T]| {
        let w = dispersion(h, xi);
        if w == T::zero() {
            T::zero()
        } else {
            w.powf(s * T::lit(0.5))
        }
    })
}

/// (e^{ihξ_j} − 1)/h.
pub fn forward_difference_symbol<T: Real>(h: T, axis: usize) -> Symbol<T> {
    Symbol::new(format!("D+_{axis}"), move |xi: &[T]| {
        let t = h * xi[axis];
        Complex::new(t.cos() - T::one(), t.sin()) / h
    })
}

/// Smooth cutoff φ ≡ 1 on [-1,1]^d, φ ≡ 0 off [-2,2]^d, and φ − φ(2·).
#[derive(Clone, Copy, Debug, Default)]
pub struct BumpProfile;

impl BumpProfile {
    /// e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}), clamped to [0,1] outside (0,1).
    pub fn smooth_step<T: Real>(t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        if t >= T::one() {
            return T::one();
        }
        let a = (-t.recip()).exp();
        let b = (-(T::one() - t).recip()).exp();
        a / (a + b)
    }

    /// One-dimensional factor: 1 for |r| ≤ 1, 0 for |r| ≥ 2.
    pub fn chi<T: Real>(r: T) -> T {
        T::one() - Self::smooth_step(r.abs() - T::one())
    }

    pub fn phi<T: Real>(y: &[T]) -> T {
        y.iter().fold(T::one(), |acc, &v| acc * Self::chi(v))
    }

    pub fn varphi<T: Real>(y: &[T]) -> T {
        let mut twice = [T::zero(); MAX_DIM];
        for (t, &v) in twice.iter_mut().zip(y) {
            *t = v + v;
        }
        Self::phi(y) - Self::phi(&twice[..y.len()])
    }

    /// ψ_N(ξ) = varphi(hξ/(2πN)).
    pub fn psi<T: Real>(h: T, n: T, xi: &[T]) -> T {
        let mut y = [T::zero(); MAX_DIM];
        let scale = h / (T::TAU() * n);
        for (t, &v) in y.iter_mut().zip(xi) {
            *t = v * scale;
        }
        Self::varphi(&y[..xi.len()])
    }
}

pub fn lp_symbol<T: Real>(h: T, n: T) -> Symbol<T> {
    Symbol::real(format!("psi_{n}"), move |xi: &[T]| BumpProfile::psi(h, n, xi))
}

/// Dyadic LP scales with grid support, 2^{-K} ≤ N ≤ 1 where 2^K ≥ M.
pub fn dyadic_scales<T: Real>(lattice: &Lattice<T>) -> Vec<T> {
    let m = lattice.points_per_axis();
    let k = m.next_power_of_two().trailing_zeros() as i32;
    (0..=k).rev().map(|j| T::lit(2.0).powi(-j)).collect()
}

fn check_scale<T: Real>(lattice: &Lattice<T>, n: T) -> Result<()> {
    if !(n > T::zero()) || n > T::one() {
        return Err(Error::domain(format!("LP scale must lie in (0,1], got {n}")));
    }
    let scales = dyadic_scales(lattice);
    if !scales.contains(&n) {
        return Err(Error::domain(format!(
            "LP scale {n} is not a dyadic scale supported by M = {}",
            lattice.points_per_axis()
        )));
    }
    Ok(())
}

/// Planned transforms plus helpers for repeated multiplier work on one lattice.
#[derive(Clone, Debug)]
pub struct Spectral<T: Real> {
    lattice: Lattice<T>,
    fourier: Fourier<T>,
}

impl<T: Real> Spectral<T> {
    pub fn new(lattice: Lattice<T>) -> Self {
        Self {
            fourier: Fourier::new(&lattice),
            lattice,
        }
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn forward(&self, f: &GridFunction<T>) -> Result<SpectralFunction<T>> {
        self.lattice.ensure_same(f.lattice())?;
        let mut buf = f.values().to_vec();
        self.forward_in_place(&mut buf);
        Ok(SpectralFunction {
            lattice: self.lattice,
            coefficients: buf,
        })
    }

    pub fn inverse(&self, f: &SpectralFunction<T>) -> Result<GridFunction<T>> {
        self.lattice.ensure_same(&f.lattice)?;
        let mut buf = f.coefficients.clone();
        self.inverse_in_place(&mut buf);
        Ok(GridFunction::from_raw(self.lattice, buf))
    }

    /// Scaled forward transform on a raw buffer.
    pub fn forward_in_place(&self, buf: &mut [Complex<T>]) {
        self.fourier.forward(buf);
        let c = self.lattice.cell_volume();
        for z in buf.iter_mut() {
            *z *= c;
        }
    }

    /// Scaled inverse transform on a raw buffer.
    pub fn inverse_in_place(&self, buf: &mut [Complex<T>]) {
        self.fourier.inverse(buf);
        let c = (self.lattice.cell_volume() * T::from_usize_lossy(self.lattice.len())).recip();
        for z in buf.iter_mut() {
            *z *= c;
        }
    }

    /// Multiplies by a precomputed symbol table (storage order) in frequency space.
    pub fn apply_table(&self, table: &[Complex<T>], f: &GridFunction<T>) -> Result<GridFunction<T>> {
        self.lattice.ensure_same(f.lattice())?;
        if table.len() != self.lattice.len() {
            return Err(Error::Shape("symbol table does not match lattice".into()));
        }
        // Unscaled transforms: the h^d factors cancel, only 1/M^d remains.
        let mut buf = f.values().to_vec();
        self.fourier.forward(&mut buf);
        let c = T::from_usize_lossy(self.lattice.len()).recip();
        for (z, m) in buf.iter_mut().zip(table) {
            *z = *z * *m * c;
        }
        self.fourier.inverse(&mut buf);
        Ok(GridFunction::from_raw(self.lattice, buf))
    }

    pub fn apply(&self, symbol: &Symbol<T>, f: &GridFunction<T>) -> Result<GridFunction<T>> {
        let table = symbol.on_grid(&self.lattice)?;
        self.apply_table(&table, f)
    }

    /// Errors unless f̂(0) vanishes to roundoff relative to ‖f‖_{L¹}.
    pub fn require_mean_zero(&self, f: &GridFunction<T>) -> Result<()> {
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        let mut l1 = CompensatedSum::new();
        for z in f.values() {
            re.add(z.re);
            im.add(z.im);
            l1.add(z.norm());
        }
        let dc = Complex::new(re.value(), im.value()).norm();
        let tol = T::lit(1e-10).max(T::epsilon() * T::lit(1e3));
        if dc <= tol * l1.value() {
            Ok(())
        } else {
            Err(Error::SingularAtDc)
        }
    }

    pub fn lp_projection(&self, f: &GridFunction<T>, n: T) -> Result<GridFunction<T>> {
        check_scale(&self.lattice, n)?;
        self.apply(&lp_symbol(self.lattice.h(), n), f)
    }

    pub fn widened_projection(&self, f: &GridFunction<T>, n: T) -> Result<GridFunction<T>> {
        check_scale(&self.lattice, n)?;
        let h = self.lattice.h();
        let scales = dyadic_scales(&self.lattice);
        let lo = scales[0];
        let two = T::lit(2.0);
        let pieces: Vec<T> = [n / two, n, n * two]
            .into_iter()
            .filter(|&s| s >= lo && s <= T::one())
            .collect();
        let sym = Symbol::real(format!("psi~_{n}"), move |xi: &[T]| {
            pieces
                .iter()
                .fold(T::zero(), |acc, &s| acc + BumpProfile::psi(h, s, xi))
        });
        self.apply(&sym, f)
    }

    /// (Σ_N |P_N f|²)^{1/2} over all grid-supported dyadic scales.
    pub fn square_function(&self, f: &GridFunction<T>) -> Result<GridFunction<T>> {
        self.lattice.ensure_same(f.lattice())?;
        let h = self.lattice.h();
        let mut fhat = f.values().to_vec();
        self.fourier.forward(&mut fhat);
        let c = T::from_usize_lossy(self.lattice.len()).recip();
        let mut acc = vec![T::zero(); self.lattice.len()];
        for n in dyadic_scales(&self.lattice) {
            let table = lp_symbol(h, n).on_grid(&self.lattice)?;
            if table.iter().all(|z| z.re == T::zero()) {
                continue;
            }
            let mut buf: Vec<_> = fhat.iter().zip(&table).map(|(z, m)| z * m * c).collect();
            self.fourier.inverse(&mut buf);
            for (a, z) in acc.iter_mut().zip(&buf) {
                *a += z.norm_sqr();
            }
        }
        let values = acc.into_iter().map(|a| Complex::new(a.sqrt(), T::zero())).collect();
        Ok(GridFunction::from_raw(self.lattice, values))
    }

    pub fn fractional_derivative(&self, f: &GridFunction<T>, s: T) -> Result<GridFunction<T>> {
        if s < T::zero() {
            self.require_mean_zero(f)?;
        }
        self.apply(&fractional_symbol(s), f)
    }

    pub fn bessel_derivative(&self, f: &GridFunction<T>, s: T) -> Result<GridFunction<T>> {
        self.apply(&bessel_symbol(s), f)
    }

    pub fn laplacian_power(&self, f: &GridFunction<T>, s: T) -> Result<GridFunction<T>> {
        if s < T::zero() {
            self.require_mean_zero(f)?;
        }
        self.apply(&laplacian_power_symbol(self.lattice.h(), s), f)
    }

    pub fn sobolev_norm(&self, f: &GridFunction<T>, s: T, p: T, homogeneous: bool) -> Result<T> {
        let g = if homogeneous {
            self.fractional_derivative(f, s)?
        } else {
            self.bessel_derivative(f, s)?
        };
        lp_norm(&g, p)
    }
}

pub fn forward_transform<T: Real>(f: &GridFunction<T>) -> SpectralFunction<T> {
    Spectral::new(*f.lattice()).forward(f).expect("same lattice")
}

pub fn inverse_transform<T: Real>(f: &SpectralFunction<T>) -> GridFunction<T> {
    Spectral::new(f.lattice).inverse(f).expect("same lattice")
}

pub fn apply_multiplier<T: Real>(m: &Symbol<T>, f: &GridFunction<T>) -> Result<GridFunction<T>> {
    Spectral::new(*f.lattice()).apply(m, f)
}

pub fn lp_projection<T: Real>(f: &GridFunction<T>, n: T) -> Result<GridFunction<T>> {
    Spectral::new(*f.lattice()).lp_projection(f, n)
}

pub fn widened_projection<T: Real>(f: &GridFunction<T>, n: T) -> Result<GridFunction<T>> {
    Spectral::new(*f.lattice()).widened_projection(f, n)
}

pub fn square_function<T: Real>(f: &GridFunction<T>) -> Result<GridFunction<T>> {
    Spectral::new(*f.lattice()).square_function(f)
}

pub fn fractional_derivative<T: Real>(f: &GridFunction<T>, s: T) -> Result<GridFunction<T>> {
    Spectral::new(*f.lattice()).fractional_derivative(f, s)
}

pub fn bessel_derivative<T: Real>(f: &GridFunction<T>, s: T) -> Result<GridFunction<T>> {
    Spectral::new(*f.lattice()).bessel_derivative(f, s)
}

pub fn laplacian_power<T: Real>(f: &GridFunction<T>, s: T) -> Result<GridFunction<T>> {
    Spectral::new(*f.lattice()).laplacian_power(f, s)
}

pub fn sobolev_norm<T: Real>(f: &GridFunction<T>, s: T, p: T, homogeneous: bool) -> Result<T> {
    Spectral::new(*f.lattice()).sobolev_norm(f, s, p, homogeneous)
}

/// Periodic nearest-neighbour Laplacian stencil.
pub fn discrete_laplacian<T: Real>(f: &GridFunction<T>) -> GridFunction<T> {
    let lat = *f.lattice();
    let (d, m) = (lat.dim(), lat.points_per_axis());
    let inv_h2 = (lat.h() * lat.h()).recip();
    let two = T::lit(2.0);
    let vals = f.values();
    let out = (0..lat.len())
        .map(|flat| {
            let idx = lat.axis_indices(flat);
            let centre = vals[flat];
            let mut acc = Complex::new(T::zero(), T::zero());
            for axis in 0..d {
                let stride = lat.stride(axis);
                let i = idx[axis];
                let up = if i + 1 == m {
                    flat + stride - m * stride
                } else {
                    flat + stride
                };
                let down = if i == 0 { flat + (m - 1) * stride } else { flat - stride };
                acc += vals[up] + vals[down] - centre * two;
            }
            acc * inv_h2
        })
        .collect();
    GridFunction::from_raw(lat, out)
}

/// (f(x + h e_axis) − f(x))/h, periodic; `axis` is zero-based.
pub fn forward_difference<T: Real>(f: &GridFunction<T>, axis: usize) -> Result<GridFunction<T>> {
    let lat = *f.lattice();
    if axis >= lat.dim() {
        return Err(Error::domain(format!("axis {axis} out of range for d = {}", lat.dim())));
    }
    let m = lat.points_per_axis();
    let stride = lat.stride(axis);
    let inv_h = lat.h().recip();
    let vals = f.values();
    let out = (0..lat.len())
        .map(|flat| {
            let i = lat.axis_indices(flat)[axis];
            let up = if i + 1 == m {
                flat + stride - m * stride
            } else {
                flat + stride
            };
            (vals[up] - vals[flat]) * inv_h
        })
        .collect();
    Ok(GridFunction::from_raw(lat, out))
}
