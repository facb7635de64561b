//! Time quadrature for mixed L^q_t norms on nonuniform node sets.

use crate::scalar::{CompensatedSum, Real};

/// Composite trapezoid weights for strictly increasing nodes.
pub fn trapezoid_weights<T: Real>(times: &[T]) -> Vec<T> {
    let n = times.len();
    let mut w = vec![T::zero(); n];
    let half = T::lit(0.5);
    for j in 0..n.saturating_sub(1) {
        let dt = (times[j + 1] - times[j]) * half;
        w[j] += dt;
        w[j + 1] += dt;
    }
    w
}

/// (Σ_j w_j a_j^q)^{1/q}, or max_j a_j for q = ∞.
pub fn time_norm<T: Real>(weights: &[T], values: &[T], q: T) -> T {
    let peak = values.iter().copied().fold(T::zero(), T::max);
    if q.is_infinite() || peak == T::zero() {
        return peak;
    }
    let mut acc = CompensatedSum::new();
    for (&w, &a) in weights.iter().zip(values) {
        acc.add(w * (a / peak).powf(q));
    }
    peak * acc.value().powf(q.recip())
}
