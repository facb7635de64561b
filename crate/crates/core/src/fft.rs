//! Unscaled multidimensional DFT over a lattice's storage layout.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::lattice::Lattice;
use crate::scalar::Real;

/// Planned forward/inverse transforms for one lattice shape.
#[derive(Clone)]
pub struct Fourier<T: Real> {
    d: usize,
    m: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for Fourier<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier")
            .field("d", &self.d)
            .field("m", &self.m)
            .finish()
    }
}

impl<T: Real> Fourier<T> {
    pub fn new(lattice: &Lattice<T>) -> Self {
        let mut planner = FftPlanner::new();
        let m = lattice.points_per_axis();
        Self {
            d: lattice.dim(),
            m,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        }
    }

    pub fn matches(&self, lattice: &Lattice<T>) -> bool {
        self.d == lattice.dim() && self.m == lattice.points_per_axis()
    }

    /// Σ_n f(n) e^{-2πi n·k/M}, in place.
    pub fn forward(&self, buf: &mut [Complex<T>]) {
        self.run(&*self.forward, buf);
    }

    /// Σ_k F(k) e^{+2πi n·k/M}, in place, without the 1/M^d factor.
    pub fn inverse(&self, buf: &mut [Complex<T>]) {
        self.run(&*self.inverse, buf);
    }

    fn run(&self, fft: &dyn Fft<T>, buf: &mut [Complex<T>]) {
        let m = self.m;
        assert_eq!(buf.len(), m.pow(self.d as u32), "buffer does not match lattice");
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
        // Last axis is contiguous.
        fft.process_with_scratch(buf, &mut scratch);
        if self.d == 1 {
            return;
        }
        let mut line = vec![Complex::new(T::zero(), T::zero()); m];
        for axis in 0..self.d - 1 {
            let stride = m.pow((self.d - 1 - axis) as u32);
            let block = stride * m;
            for base in (0..buf.len()).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (k, z) in line.iter_mut().enumerate() {
                        *z = buf[start + k * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (k, z) in line.iter().enumerate() {
                        buf[start + k * stride] = *z;
                    }
                }
            }
        }
    }
}
