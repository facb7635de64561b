//! Periodic truncation of hZ^d and complex fields on it.
//!
//! Storage is row-major with the last axis fastest. Axis index `i` in `0..M`
//! stands for the site `n = i` when `i < M/2` and `n = i - M` otherwise, so the
//! origin sits at flat index 0 and the layout matches the FFT ordering.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice<T> {
    h: T,
    d: usize,
    m: usize,
}

impl<T: Real> Lattice<T> {
    pub fn new(h: T, d: usize, m: usize) -> Result<Self> {
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::domain(format!("lattice spacing must be positive, got {h}")));
        }
        if !(1..=MAX_DIM).contains(&d) {
            return Err(Error::domain(format!("dimension must be 1, 2 or 3, got {d}")));
        }
        if m < 4 || m % 2 != 0 {
            return Err(Error::domain(format!("points per axis must be even and >= 4, got {m}")));
        }
        Ok(Self { h, d, m })
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn points_per_axis(&self) -> usize {
        self.m
    }

    /// Total number of sites, M^d.
    pub fn len(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume element h^d.
    pub fn cell_volume(&self) -> T {
        self.h.powi(self.d as i32)
    }

    /// Dual-grid cell (2π/(hM))^d.
    pub fn dual_cell_volume(&self) -> T {
        (T::TAU() / (self.h * T::from_usize_lossy(self.m))).powi(self.d as i32)
    }

    /// Side length hM of the periodic box.
    pub fn box_length(&self) -> T {
        self.h * T::from_usize_lossy(self.m)
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.m.pow((self.d - 1 - axis) as u32)
    }

    /// Signed site coordinate n for an axis index i.
    pub fn wrap(&self, i: usize) -> i64 {
        let m = self.m as i64;
        let i = i as i64;
        if i < m / 2 {
            i
        } else {
            i - m
        }
    }

    /// Axis index for a (possibly out-of-range) site coordinate, with periodic identification.
    pub fn unwrap_index(&self, n: i64) -> usize {
        n.rem_euclid(self.m as i64) as usize
    }

    pub fn axis_indices(&self, flat: usize) -> [usize; MAX_DIM] {
        let mut out = [0; MAX_DIM];
        let mut rest = flat;
        for axis in (0..self.d).rev() {
            out[axis] = rest % self.m;
            rest /= self.m;
        }
        out
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().take(self.d).fold(0, |acc, &i| acc * self.m + i)
    }

    pub fn site(&self, flat: usize) -> [i64; MAX_DIM] {
        let idx = self.axis_indices(flat);
        let mut n = [0; MAX_DIM];
        for axis in 0..self.d {
            n[axis] = self.wrap(idx[axis]);
        }
        n
    }

    pub fn site_flat(&self, n: &[i64]) -> usize {
        n.iter()
            .take(self.d)
            .fold(0, |acc, &k| acc * self.m + self.unwrap_index(k))
    }

    pub fn position(&self, flat: usize) -> [T; MAX_DIM] {
        let n = self.site(flat);
        let mut x = [T::zero(); MAX_DIM];
        for axis in 0..self.d {
            x[axis] = self.h * T::from_i64(n[axis]).unwrap();
        }
        x
    }

    /// Dual frequency 2πk/(hM) for axis index i.
    pub fn axis_frequency(&self, i: usize) -> T {
        let k = T::from_i64(self.wrap(i)).unwrap();
        T::TAU() * k / self.box_length()
    }

    /// Dual frequencies for all axis indices, in storage order.
    pub fn axis_frequencies(&self) -> Vec<T> {
        (0..self.m).map(|i| self.axis_frequency(i)).collect()
    }

    pub fn frequency(&self, flat: usize) -> [T; MAX_DIM] {
        let idx = self.axis_indices(flat);
        let mut xi = [T::zero(); MAX_DIM];
        for axis in 0..self.d {
            xi[axis] = self.axis_frequency(idx[axis]);
        }
        xi
    }

    /// True if the site lies in the outer eighth of the box along some axis.
    pub fn near_boundary(&self, flat: usize) -> bool {
        let band = (3 * self.m / 8) as i64;
        let n = self.site(flat);
        n[..self.d].iter().any(|&k| k >= band || k < -band)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.d == other.d && self.m == other.m && self.h == other.h
    }

    pub fn ensure_same(&self, other: &Self) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "lattices differ: (h={}, d={}, M={}) vs (h={}, d={}, M={})",
                self.h, self.d, self.m, other.h, other.d, other.m
            )))
        }
    }
}

/// Complex field on a lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    lattice: Lattice<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn zeros(lattice: Lattice<T>) -> Self {
        Self {
            lattice,
            values: vec![Complex::new(T::zero(), T::zero()); lattice.len()],
        }
    }

    pub fn constant(lattice: Lattice<T>, c: Complex<T>) -> Self {
        Self {
            lattice,
            values: vec![c; lattice.len()],
        }
    }

    pub fn from_values(lattice: Lattice<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                lattice.len(),
                values.len()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("grid values must be finite"));
        }
        Ok(Self { lattice, values })
    }

    /// Skips validation; used by internal operators whose output is finite by construction.
    pub(crate) fn from_raw(lattice: Lattice<T>, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(values.len(), lattice.len());
        Self { lattice, values }
    }

    /// Builds a field from signed site coordinates n (x = h n).
    pub fn from_sites(lattice: Lattice<T>, mut f: impl FnMut(&[i64]) -> Complex<T>) -> Self {
        let d = lattice.dim();
        let values = (0..lattice.len()).map(|flat| f(&lattice.site(flat)[..d])).collect();
        Self { lattice, values }
    }

    /// Builds a field from physical positions x = h n.
    pub fn from_positions(lattice: Lattice<T>, mut f: impl FnMut(&[T]) -> Complex<T>) -> Self {
        let d = lattice.dim();
        let values = (0..lattice.len()).map(|flat| f(&lattice.position(flat)[..d])).collect();
        Self { lattice, values }
    }

    /// Value 1 at the origin, 0 elsewhere.
    pub fn point_mass(lattice: Lattice<T>) -> Self {
        let mut f = Self::zeros(lattice);
        f.values[0] = Complex::new(T::one(), T::zero());
        f
    }

    /// e^{i x·ξ_k} for the dual-grid frequency with integer index k.
    pub fn plane_wave(lattice: Lattice<T>, k: &[i64]) -> Self {
        let m = lattice.points_per_axis() as i64;
        let d = lattice.dim();
        let mut kk = [0i64; MAX_DIM];
        kk[..d].copy_from_slice(&k[..d]);
        Self::from_sites(lattice, |n| {
            // Reduce the phase exactly in integers before going to floats.
            let mut num = 0i64;
            for axis in 0..d {
                num = (num + (n[axis] * kk[axis]).rem_euclid(m)) % m;
            }
            let theta = T::TAU() * T::from_i64(num).unwrap() / T::from_i64(m).unwrap();
            Complex::new(theta.cos(), theta.sin())
        })
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn at_site(&self, n: &[i64]) -> Complex<T> {
        self.values[self.lattice.site_flat(n)]
    }

    pub fn set_site(&mut self, n: &[i64], z: Complex<T>) {
        let flat = self.lattice.site_flat(n);
        self.values[flat] = z;
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn map(&self, mut f: impl FnMut(Complex<T>) -> Complex<T>) -> Self {
        Self::from_raw(self.lattice, self.values.iter().map(|&z| f(z)).collect())
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_real(&self, c: T) -> Self {
        self.map(|z| z * c)
    }

    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        self.lattice.ensure_same(&other.lattice)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_raw(self.lattice, values))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn abs(&self) -> Self {
        self.map(|z| Complex::new(z.norm(), T::zero()))
    }

    /// Plain average of the values over all M^d sites.
    pub fn mean(&self) -> Complex<T> {
        let n = T::from_usize_lossy(self.values.len());
        let re = crate::scalar::compensated_sum(self.values.iter().map(|z| z.re));
        let im = crate::scalar::compensated_sum(self.values.iter().map(|z| z.im));
        Complex::new(re / n, im / n)
    }

    /// Removes the plain average so the zero frequency vanishes.
    pub fn mean_zero(&self) -> Self {
        let mu = self.mean();
        self.map(|z| z - mu)
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.lattice.ensure_same(&other.lattice)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Fraction of the ℓ² mass sitting in the outer eighth of the box.
    pub fn boundary_mass_fraction(&self) -> T {
        let mut total = crate::scalar::CompensatedSum::new();
        let mut edge = crate::scalar::CompensatedSum::new();
        for (flat, z) in self.values.iter().enumerate() {
            let w = z.norm_sqr();
            total.add(w);
            if self.lattice.near_boundary(flat) {
                edge.add(w);
            }
        }
        let total = total.value();
        if total == T::zero() {
            T::zero()
        } else {
            edge.value() / total
        }
    }
}
