mod common;

use latdisp::spectral::{
    bessel_symbol, dispersion, forward_difference_symbol, fractional_symbol, laplacian_symbol, lp_symbol,
};
use latdisp::{
    apply_multiplier, bessel_derivative, convolve, discrete_laplacian, dyadic_scales, forward_difference,
    forward_transform, fractional_derivative, inverse_transform, laplacian_power, lp_norm, lp_projection, sobolev_norm,
    widened_projection, BumpProfile, Complex, GridFunction, Lattice, Symbol,
};
use proptest::prelude::*;

fn lattices() -> Vec<Lattice<f64>> {
    vec![
        Lattice::new(1.0, 1, 64).unwrap(),
        Lattice::new(0.125, 1, 256).unwrap(),
        Lattice::new(0.5, 2, 16).unwrap(),
        Lattice::new(0.25, 3, 8).unwrap(),
    ]
}

#[test]
fn parseval_and_round_trip() {
    let mut rng = common::rng(1);
    for lat in lattices() {
        let f = common::random_field(lat, &mut rng);
        let fh = forward_transform(&f);
        let lhs = fh.l2_norm_squared();
        let rhs = lp_norm(&f, 2.0).unwrap().powi(2);
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        let back = inverse_transform(&fh);
        assert!(back.max_abs_diff(&f).unwrap() <= 1e-12 * f.max_abs());
    }
}

#[test]
fn transform_matches_defining_sum() {
    let lat = Lattice::new(0.4, 2, 6).unwrap();
    let mut rng = common::rng(2);
    let f = common::random_field(lat, &mut rng);
    let fh = forward_transform(&f);
    for k in 0..lat.len() {
        let xi = lat.frequency(k);
        let mut acc = Complex::new(0.0, 0.0);
        for n in 0..lat.len() {
            let x = lat.position(n);
            acc += f.values()[n] * Complex::from_polar(1.0, -(x[0] * xi[0] + x[1] * xi[1]));
        }
        acc *= lat.cell_volume();
        assert!((acc - fh.coefficients()[k]).norm() < 1e-12);
    }
}

#[test]
fn linearity_of_inverse() {
    let lat = Lattice::new(0.5, 1, 32).unwrap();
    let mut rng = common::rng(3);
    let f = forward_transform(&common::random_field(lat, &mut rng));
    let g = forward_transform(&common::random_field(lat, &mut rng));
    let (a, b) = (Complex::new(0.3, -1.2), Complex::new(2.0, 0.5));
    let combo: Vec<_> = f
        .coefficients()
        .iter()
        .zip(g.coefficients())
        .map(|(x, y)| a * x + b * y)
        .collect();
    let combo = latdisp::SpectralFunction::from_coefficients(lat, combo).unwrap();
    let lhs = inverse_transform(&combo);
    let rhs = inverse_transform(&f)
        .scale(a)
        .add(&inverse_transform(&g).scale(b))
        .unwrap();
    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
}

#[test]
fn convolution_theorem() {
    let mut rng = common::rng(4);
    for lat in lattices() {
        let f = common::random_field(lat, &mut rng);
        let g = common::random_field(lat, &mut rng);
        let lhs = forward_transform(&convolve(&f, &g).unwrap());
        let (fh, gh) = (forward_transform(&f), forward_transform(&g));
        let scale = lhs.coefficients().iter().map(|z| z.norm()).fold(0.0, f64::max);
        for ((l, a), b) in lhs.coefficients().iter().zip(fh.coefficients()).zip(gh.coefficients()) {
            assert!((l - a * b).norm() <= 1e-10 * scale);
        }
    }
}

#[test]
fn laplacian_eigenvalues() {
    for lat in lattices() {
        let d = lat.dim();
        for k in [[1i64, 0, 0], [3, -2, 1], [-(lat.points_per_axis() as i64) / 2, 1, 2]] {
            let wave = GridFunction::plane_wave(lat, &k[..d]);
            let flat = lat.site_flat(&k[..d]);
            let xi = lat.frequency(flat);
            let h = lat.h();
            let expected: f64 = -(4.0 / (h * h)) * xi[..d].iter().map(|x| (h * x / 2.0).sin().powi(2)).sum::<f64>();
            let lap = discrete_laplacian(&wave);
            let via_symbol = apply_multiplier(&laplacian_symbol(h), &wave).unwrap();
            for ((a, b), w) in lap.values().iter().zip(via_symbol.values()).zip(wave.values()) {
                assert!((a - w * expected).norm() <= 1e-12 * expected.abs().max(1.0));
                assert!((b - w * expected).norm() <= 1e-10 * expected.abs().max(1.0));
            }
        }
    }
}

#[test]
fn stencils_match_multipliers() {
    let mut rng = common::rng(5);
    for lat in lattices() {
        let f = common::random_field(lat, &mut rng);
        let scale = 4.0 * lat.dim() as f64 / lat.h().powi(2) * f.max_abs();
        let lap = discrete_laplacian(&f);
        let sym = apply_multiplier(&laplacian_symbol(lat.h()), &f).unwrap();
        assert!(lap.max_abs_diff(&sym).unwrap() <= 1e-10 * scale);
        let neg = laplacian_power(&f, 2.0).unwrap().scale_real(-1.0);
        assert!(lap.max_abs_diff(&neg).unwrap() <= 1e-10 * scale);
        for axis in 0..lat.dim() {
            let df = forward_difference(&f, axis).unwrap();
            let dsym = apply_multiplier(&forward_difference_symbol(lat.h(), axis), &f).unwrap();
            assert!(df.max_abs_diff(&dsym).unwrap() <= 1e-10 * scale);
        }
    }
}

#[test]
fn littlewood_paley_partition() {
    for lat in [
        Lattice::new(1.0, 1, 1024).unwrap(),
        Lattice::new(0.1, 2, 64).unwrap(),
        Lattice::new(1.0, 3, 16).unwrap(),
        Lattice::new(1.0, 1, 24).unwrap(),
    ] {
        let d = lat.dim();
        let scales = dyadic_scales(&lat);
        for flat in 1..lat.len() {
            let xi = lat.frequency(flat);
            let total: f64 = scales.iter().map(|&n| BumpProfile::psi(lat.h(), n, &xi[..d])).sum();
            assert!((total - 1.0).abs() <= 1e-12, "sum {total} at {:?}", &xi[..d]);
        }
        let at_zero: f64 = scales
            .iter()
            .map(|&n| BumpProfile::psi(lat.h(), n, &[0.0; 3][..d]))
            .sum();
        assert_eq!(at_zero, 0.0);
    }
}

#[test]
fn lp_projection_examples() {
    let lat = Lattice::new(0.5, 1, 64).unwrap();
    let mut rng = common::rng(6);
    let f = common::random_field(lat, &mut rng);
    let mut sum = GridFunction::zeros(lat);
    for n in dyadic_scales(&lat) {
        sum = sum.add(&lp_projection(&f, n).unwrap()).unwrap();
    }
    assert!(sum.max_abs_diff(&f.mean_zero()).unwrap() < 1e-12);

    // varphi(y) = 1 exactly at |y| = 1, i.e. k/M = N.
    let wave = GridFunction::plane_wave(lat, &[16]);
    assert!(lp_projection(&wave, 0.25).unwrap().max_abs_diff(&wave).unwrap() < 1e-12);

    let constant = GridFunction::constant(lat, Complex::new(1.0, 0.0));
    for n in dyadic_scales(&lat) {
        assert!(lp_projection(&constant, n).unwrap().max_abs() < 1e-13);
        assert!(widened_projection(&constant, n).unwrap().max_abs() < 1e-13);
    }
}

#[test]
fn widened_projection_reproduces_piece() {
    let mut rng = common::rng(7);
    for lat in [Lattice::new(0.25, 1, 128).unwrap(), Lattice::new(1.0, 2, 32).unwrap()] {
        let f = common::random_field(lat, &mut rng);
        for n in dyadic_scales(&lat) {
            let p = lp_projection(&f, n).unwrap();
            let wp = widened_projection(&p, n).unwrap();
            assert!(wp.max_abs_diff(&p).unwrap() < 1e-12);
        }
    }
}

#[test]
fn multiplier_composition_and_inverses() {
    let mut rng = common::rng(8);
    for lat in lattices() {
        let f = common::random_field(lat, &mut rng).mean_zero();
        let m1 = bessel_symbol(0.7);
        let m2 = lp_symbol(lat.h(), 0.25);
        let composed = apply_multiplier(&m1, &apply_multiplier(&m2, &f).unwrap()).unwrap();
        let product = apply_multiplier(&m1.product(&m2), &f).unwrap();
        assert!(composed.max_abs_diff(&product).unwrap() <= 1e-10 * f.max_abs().max(composed.max_abs()));

        let half = fractional_derivative(&fractional_derivative(&f, 0.5).unwrap(), 0.5).unwrap();
        let one = fractional_derivative(&f, 1.0).unwrap();
        assert!(half.max_abs_diff(&one).unwrap() <= 1e-10 * one.max_abs());

        let down_up = bessel_derivative(&bessel_derivative(&f, -1.3).unwrap(), 1.3).unwrap();
        assert!(down_up.max_abs_diff(&f).unwrap() <= 1e-10 * f.max_abs());

        let neg = fractional_derivative(&fractional_derivative(&f, -0.5).unwrap(), 0.5).unwrap();
        assert!(neg.max_abs_diff(&f).unwrap() <= 1e-10 * f.max_abs());

        assert!(fractional_derivative(&f, 0.0).unwrap().max_abs_diff(&f).unwrap() <= 1e-12);
        assert!(laplacian_power(&f, 0.0).unwrap().max_abs_diff(&f).unwrap() <= 1e-12);
    }
}

#[test]
fn eigenfunction_scalings() {
    let lat = Lattice::new(0.5, 1, 32).unwrap();
    let k = 5i64;
    let wave = GridFunction::plane_wave(lat, &[k]);
    let xi: f64 = lat.axis_frequency(5);
    let s = 0.8f64;
    let frac = fractional_derivative(&wave, s).unwrap();
    assert!(frac.max_abs_diff(&wave.scale_real(xi.powf(s))).unwrap() < 1e-12);
    let lp = laplacian_power(&wave, s).unwrap();
    let w: f64 = dispersion(lat.h(), &[xi]);
    assert!(lp.max_abs_diff(&wave.scale_real(w.powf(s / 2.0))).unwrap() < 1e-12);
    let constant = GridFunction::constant(lat, Complex::new(2.0, 1.0));
    assert!(
        bessel_derivative(&constant, 1.7)
            .unwrap()
            .max_abs_diff(&constant)
            .unwrap()
            < 1e-12
    );
    assert!(bessel_derivative(&wave, 0.0).unwrap().max_abs_diff(&wave).unwrap() < 1e-12);
    let h1: f64 = sobolev_norm(&wave, 1.0, 2.0, false).unwrap();
    let expected = (1.0 + xi * xi).sqrt() * lp_norm(&wave, 2.0).unwrap();
    assert!((h1 - expected).abs() < 1e-12 * expected);
    let l3: f64 = sobolev_norm(&wave, 0.0, 3.0, false).unwrap();
    assert!((l3 - lp_norm(&wave, 3.0).unwrap()).abs() < 1e-12);
}

#[test]
fn sobolev_controls_lebesgue() {
    // ‖f‖_{L²} ≤ ‖f‖_{H^s} for s ≥ 0, since ⟨ξ⟩^s ≥ 1.
    let mut rng = common::rng(9);
    for lat in lattices() {
        let f = common::random_field(lat, &mut rng);
        for s in [0.0, 0.5, 1.0, 2.0] {
            assert!(lp_norm(&f, 2.0).unwrap() <= sobolev_norm(&f, s, 2.0, false).unwrap() * (1.0 + 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multipliers_commute(seed in any::<u64>(), s in -1.0f64..2.0, j in 0usize..5) {
        let lat = Lattice::new(0.5, 2, 16).unwrap();
        let mut rng = common::rng(seed);
        let f = common::random_field(lat, &mut rng);
        let n = dyadic_scales(&lat)[j];
        let a = Symbol::real("a", move |xi: &[f64]| (1.0 + xi[0] * xi[0] + xi[1] * xi[1]).powf(s / 2.0));
        let b = lp_symbol(0.5, n);
        let ab = apply_multiplier(&a, &apply_multiplier(&b, &f).unwrap()).unwrap();
        let ba = apply_multiplier(&b, &apply_multiplier(&a, &f).unwrap()).unwrap();
        prop_assert!(ab.max_abs_diff(&ba).unwrap() <= 1e-11 * ab.max_abs().max(1e-300));
    }

    #[test]
    fn parseval_random(seed in any::<u64>(), d in 1usize..4, h in 0.05f64..2.0) {
        let m = [0, 32, 8, 4][d];
        let lat = Lattice::new(h, d, m).unwrap();
        let mut rng = common::rng(seed);
        let f = common::random_field(lat, &mut rng);
        let lhs = forward_transform(&f).l2_norm_squared();
        let rhs = lp_norm(&f, 2.0).unwrap().powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn fractional_symbol_is_homogeneous(x in 0.1f64..3.0, y in -3.0f64..3.0, s in -2.0f64..2.0, c in 0.1f64..4.0) {
        let sym = fractional_symbol(s);
        let a = sym.evaluate(&[c * x, c * y]).re;
        let b = sym.evaluate(&[x, y]).re * c.powf(s);
        prop_assert!((a - b).abs() <= 1e-12 * b.abs());
    }
}
