//! Independent reference for the DNLS: Picard iteration of the Duhamel formula.

use latdisp::spectral::dispersion;
use latdisp::{Complex, GridFunction, Spectral, Symbol};

/// Reference solution of i u_t = −Δu + λ|u|^{p−1}u at time T by Picard iteration
/// of the Duhamel formula in the interaction picture, with cumulative trapezoid
/// quadrature on a fine uniform grid.
pub fn duhamel_reference(u0: &GridFunction<f64>, lambda: f64, p: f64, t_final: f64, nodes: usize) -> GridFunction<f64> {
    let lat = *u0.lattice();
    let spectral = Spectral::new(lat);
    let h = lat.h();
    let omega: Vec<f64> = Symbol::real("w", move |xi: &[f64]| dispersion(h, xi))
        .on_grid(&lat)
        .unwrap()
        .iter()
        .map(|z| z.re)
        .collect();
    let delta = t_final / nodes as f64;
    let times: Vec<f64> = (0..=nodes).map(|j| j as f64 * delta).collect();
    let u0_hat = spectral.forward(u0).unwrap().coefficients().to_vec();

    // Interaction variable v = e^{-itΔ}u stored in Fourier space: v̂(t) = e^{itω} û(t).
    let to_physical = |v: &[Complex<f64>], t: f64| {
        let mut buf: Vec<_> = v
            .iter()
            .zip(&omega)
            .map(|(z, w)| z * Complex::from_polar(1.0, -t * w))
            .collect();
        spectral.inverse_in_place(&mut buf);
        GridFunction::from_values(lat, buf).unwrap()
    };
    let mut v: Vec<Vec<Complex<f64>>> = vec![u0_hat.clone(); nodes + 1];
    for _iteration in 0..200 {
        let integrand: Vec<Vec<Complex<f64>>> = times
            .iter()
            .zip(&v)
            .map(|(&t, vj)| {
                let u = to_physical(vj, t);
                let nl = u.map(|z| z * z.norm().powf(p - 1.0));
                let mut buf = nl.into_values();
                spectral.forward_in_place(&mut buf);
                buf.iter()
                    .zip(&omega)
                    .map(|(z, w)| z * Complex::from_polar(1.0, t * w))
                    .collect()
            })
            .collect();
        let mut next = Vec::with_capacity(nodes + 1);
        let mut acc = vec![Complex::new(0.0, 0.0); lat.len()];
        next.push(u0_hat.clone());
        for j in 1..=nodes {
            for (a, (x, y)) in acc.iter_mut().zip(integrand[j - 1].iter().zip(&integrand[j])) {
                *a += (x + y) * (0.5 * delta);
            }
            let vj: Vec<_> = u0_hat
                .iter()
                .zip(&acc)
                .map(|(z, a)| z - Complex::new(0.0, lambda) * a)
                .collect();
            next.push(vj);
        }
        let change = next[nodes]
            .iter()
            .zip(&v[nodes])
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let scale = next[nodes].iter().map(|z| z.norm()).fold(0.0, f64::max);
        v = next;
        if change <= 1e-10 * scale {
            return to_physical(&v[nodes], t_final);
        }
    }
    panic!("Picard iteration did not converge");
}
