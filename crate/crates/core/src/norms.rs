//! h-weighted Lebesgue norms, inner product and convolution on the lattice.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft::Fourier;
use crate::lattice::GridFunction;
use crate::scalar::{CompensatedSum, Real};

fn check_exponent<T: Real>(p: T) -> Result<()> {
    if p.is_nan() || p < T::one() {
        return Err(Error::domain(format!("Lebesgue exponent must be >= 1, got {p}")));
    }
    Ok(())
}

/// (h^d Σ |f|^p)^{1/p}, or sup |f| for p = ∞.
pub fn lp_norm<T: Real>(f: &GridFunction<T>, p: T) -> Result<T> {
    check_exponent(p)?;
    Ok(lp_norm_unchecked(f.values(), f.lattice().cell_volume(), p))
}

pub(crate) fn lp_norm_unchecked<T: Real>(values: &[Complex<T>], cell: T, p: T) -> T {
    let peak = values.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if p.is_infinite() || peak == T::zero() {
        return peak;
    }
    // Normalise by the peak so large p cannot overflow.
    let mut acc = CompensatedSum::new();
    if p == T::lit(2.0) {
        for z in values {
            acc.add((z / peak).norm_sqr());
        }
        return peak * (cell * acc.value()).sqrt();
    }
    for z in values {
        let a = z.norm() / peak;
        if a > T::zero() {
            acc.add(a.powf(p));
        }
    }
    peak * (cell * acc.value()).powf(p.recip())
}

/// sup_λ λ |{|f| ≥ λ}|^{1/p}, scanned over the distinct values of |f|.
pub fn weak_lp_norm<T: Real>(f: &GridFunction<T>, p: T) -> Result<T> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Err(Error::domain("weak norm needs a finite exponent"));
    }
    let mut mags: Vec<T> = f.values().iter().map(|z| z.norm()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    let cell = f.lattice().cell_volume();
    let mut best = T::zero();
    for (i, &lambda) in mags.iter().enumerate() {
        if lambda == T::zero() {
            break;
        }
        // Evaluate each level once, at the last site sharing that magnitude.
        if i + 1 < mags.len() && mags[i + 1] == lambda {
            continue;
        }
        let measure = cell * T::from_usize_lossy(i + 1);
        best = best.max(lambda * measure.powf(p.recip()));
    }
    Ok(best)
}

/// h^d Σ f conj(g).
pub fn inner_product<T: Real>(f: &GridFunction<T>, g: &GridFunction<T>) -> Result<Complex<T>> {
    f.lattice().ensure_same(g.lattice())?;
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for (a, b) in f.values().iter().zip(g.values()) {
        let z = a * b.conj();
        re.add(z.re);
        im.add(z.im);
    }
    let cell = f.lattice().cell_volume();
    Ok(Complex::new(re.value() * cell, im.value() * cell))
}

/// Cyclic convolution h^d Σ_y f(x−y) g(y), computed spectrally.
pub fn convolve<T: Real>(f: &GridFunction<T>, g: &GridFunction<T>) -> Result<GridFunction<T>> {
    f.lattice().ensure_same(g.lattice())?;
    let lat = *f.lattice();
    let fourier = Fourier::new(&lat);
    let mut a = f.values().to_vec();
    let mut b = g.values().to_vec();
    fourier.forward(&mut a);
    fourier.forward(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fourier.inverse(&mut a);
    let scale = lat.cell_volume() / T::from_usize_lossy(lat.len());
    for z in a.iter_mut() {
        *z *= scale;
    }
    Ok(GridFunction::from_raw(lat, a))
}
