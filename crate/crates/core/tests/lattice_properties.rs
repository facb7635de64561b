mod common;

use latdisp::{
    convolve, cz_decompose, dyadic_average, dyadic_maximal, inner_product, lp_norm, weak_lp_norm, Complex,
    GridFunction, Lattice,
};
use proptest::prelude::*;

fn field_strategy(d: usize, m: usize) -> impl Strategy<Value = GridFunction<f64>> {
    let len = m.pow(d as u32);
    (prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), len), 0.05f64..2.0).prop_map(move |(v, h)| {
        let lat = Lattice::new(h, d, m).unwrap();
        GridFunction::from_values(lat, v.into_iter().map(|(a, b)| Complex::new(a, b)).collect()).unwrap()
    })
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY), 1.0f64..8.0]
}

/// Direct O(n²) cyclic convolution, independent of the spectral route.
fn direct_convolution(f: &GridFunction<f64>, g: &GridFunction<f64>) -> GridFunction<f64> {
    let lat = *f.lattice();
    let d = lat.dim();
    GridFunction::from_sites(lat, |x| {
        let mut acc = Complex::new(0.0, 0.0);
        for flat in 0..lat.len() {
            let y = lat.site(flat);
            let mut diff = [0i64; 3];
            for a in 0..d {
                diff[a] = x[a] - y[a];
            }
            acc += f.at_site(&diff[..d]) * g.values()[flat];
        }
        acc * lat.cell_volume()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn holder(f in field_strategy(1, 16), seed in any::<u64>(), p1 in exponent(), p2 in exponent()) {
        let mut rng = common::rng(seed);
        let g = common::random_field(*f.lattice(), &mut rng);
        let inv = 1.0 / p1 + 1.0 / p2;
        prop_assume!(inv <= 1.0);
        let p = 1.0 / inv;
        let lhs = lp_norm(&f.mul(&g).unwrap(), p).unwrap();
        let rhs = lp_norm(&f, p1).unwrap() * lp_norm(&g, p2).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn young(f in field_strategy(1, 16), seed in any::<u64>(), p in exponent(), q in exponent()) {
        let mut rng = common::rng(seed);
        let g = common::random_field(*f.lattice(), &mut rng);
        let inv_r = 1.0 / p + 1.0 / q - 1.0;
        prop_assume!(inv_r >= 0.0);
        let r = if inv_r == 0.0 { f64::INFINITY } else { 1.0 / inv_r };
        let lhs = lp_norm(&convolve(&f, &g).unwrap(), r).unwrap();
        let rhs = lp_norm(&f, p).unwrap() * lp_norm(&g, q).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-10));
    }

    #[test]
    fn chebyshev(f in field_strategy(2, 8), p in 1.0f64..6.0) {
        prop_assert!(weak_lp_norm(&f, p).unwrap() <= lp_norm(&f, p).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn inner_product_is_squared_norm(f in field_strategy(2, 8)) {
        let ip = inner_product(&f, &f).unwrap();
        let n2 = lp_norm(&f, 2.0).unwrap().powi(2);
        prop_assert!((ip.re - n2).abs() <= 1e-12 * n2);
        prop_assert!(ip.im.abs() <= 1e-12 * n2);
    }

    #[test]
    fn convolution_matches_direct_sum(f in field_strategy(2, 4), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = common::random_field(*f.lattice(), &mut rng);
        let fast = convolve(&f, &g).unwrap();
        let slow = direct_convolution(&f, &g);
        let scale = slow.max_abs().max(1e-300);
        prop_assert!(fast.max_abs_diff(&slow).unwrap() <= 1e-12 * scale);
        let swapped = convolve(&g, &f).unwrap();
        prop_assert!(fast.max_abs_diff(&swapped).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn dyadic_average_is_nested_projection(f in field_strategy(2, 16), a in 0u32..5, b in 0u32..5) {
        let (small, large) = (1usize << a.min(b), 1usize << a.max(b));
        let en = dyadic_average(&f, small).unwrap();
        let enen = dyadic_average(&en, small).unwrap();
        prop_assert!(enen.max_abs_diff(&en).unwrap() <= 1e-14 * f.max_abs());
        let nested = dyadic_average(&en, large).unwrap();
        let direct = dyadic_average(&f, large).unwrap();
        prop_assert!(nested.max_abs_diff(&direct).unwrap() <= 1e-14 * f.max_abs());
    }

    #[test]
    fn maximal_function_dominates(f in field_strategy(1, 32)) {
        let mf = dyadic_maximal(&f);
        for (m, v) in mf.values().iter().zip(f.values()) {
            prop_assert!(m.re >= v.norm());
        }
    }
}

#[test]
fn constants_are_fixed_by_averaging() {
    let lat = Lattice::new(0.3, 3, 8).unwrap();
    let c = GridFunction::constant(lat, Complex::new(0.7, -0.2));
    for n in [1, 2, 4, 8] {
        assert!(dyadic_average(&c, n).unwrap().max_abs_diff(&c).unwrap() < 1e-15);
    }
    let pos = GridFunction::constant(lat, Complex::new(0.7, 0.0));
    assert!(dyadic_maximal(&pos).max_abs_diff(&pos).unwrap() < 1e-15);
}

#[test]
fn maximal_weak_type_bound() {
    // |{Mf > λ}| ≤ ‖f‖₁/λ for nonnegative f, over a fuzzed family.
    let mut rng = common::rng(17);
    for d in [1usize, 2] {
        let lat = Lattice::new(0.5, d, if d == 1 { 64 } else { 16 }).unwrap();
        for _ in 0..200 {
            let f = sparse_nonnegative(lat, &mut rng);
            let l1 = lp_norm(&f, 1.0).unwrap();
            let mf = dyadic_maximal(&f);
            for lambda in [0.5, 1.0, 2.0, 5.0] {
                let count = mf.values().iter().filter(|z| z.re > lambda).count();
                let measure = count as f64 * lat.cell_volume();
                assert!(measure <= l1 / lambda, "d={d} λ={lambda}: {measure} > {}", l1 / lambda);
            }
        }
    }
}

fn sparse_nonnegative(lat: Lattice<f64>, rng: &mut rand_chacha::ChaCha8Rng) -> GridFunction<f64> {
    use rand::Rng;
    let density: f64 = rng.random_range(0.02..0.3);
    let vals = (0..lat.len())
        .map(|_| {
            let v = if rng.random::<f64>() < density {
                rng.random_range(0.0..10.0)
            } else {
                0.0
            };
            Complex::new(v, 0.0)
        })
        .collect();
    GridFunction::from_values(lat, vals).unwrap()
}

#[test]
fn cz_fuzz_real_valued() {
    let mut rng = common::rng(99);
    for d in [1usize, 2] {
        let lat = Lattice::new(0.25, d, if d == 1 { 64 } else { 16 }).unwrap();
        let mut nontrivial = 0;
        for _ in 0..500 {
            let f = sparse_nonnegative(lat, &mut rng);
            let avg = f.mean().re;
            let lambda = avg * (1.0 + 20.0 * rand::Rng::random::<f64>(&mut rng)) + 1e-9;
            let cz = cz_decompose(&f, lambda).unwrap();
            assert!(cz.check(&f).all());
            if !cz.cubes.is_empty() {
                nontrivial += 1;
            }
            let rec = cz.reconstruct();
            assert!(rec.max_abs_diff(&f).unwrap() <= 4.0 * f64::EPSILON * f.max_abs());
            for b in &cz.bads {
                let sum: f64 = b.values().iter().map(|z| z.re).sum::<f64>() * lat.cell_volume();
                assert!(sum.abs() <= 1e-12);
            }
        }
        assert!(nontrivial > 100);
    }
}
