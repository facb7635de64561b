//! Dyadic averages E_N, the dyadic maximal function and the
//! Calderón–Zygmund decomposition.
//!
//! Cubes are aligned with the storage layout: a cube of side N contains the
//! sites whose axis indices share the same `i / N`. Block sums are built
//! bottom-up (each parent is the sum of its 2^d children in a fixed order) so
//! child/parent comparisons are monotone in floating point.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lattice::{GridFunction, Lattice, MAX_DIM};
use crate::scalar::Real;

/// Largest dyadic cube side that tiles the periodic box.
pub fn max_dyadic_side(m: usize) -> usize {
    1 << m.trailing_zeros()
}

fn check_side(lattice: &Lattice<impl Real>, n: usize) -> Result<u32> {
    let m = lattice.points_per_axis();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::domain(format!("cube side {n} is not a power of two")));
    }
    if n > m || m % n != 0 {
        return Err(Error::domain(format!(
            "cube side {n} does not tile {m} points per axis"
        )));
    }
    Ok(n.trailing_zeros())
}

/// Sums over every dyadic cube, levels 0..=top.
struct BlockSums<T> {
    d: usize,
    m: usize,
    levels: Vec<Vec<Complex<T>>>,
}

impl<T: Real> BlockSums<T> {
    fn new(f: &GridFunction<T>, top: u32) -> Self {
        let lat = f.lattice();
        let (d, m) = (lat.dim(), lat.points_per_axis());
        let mut levels = vec![f.values().to_vec()];
        for k in 0..top as usize {
            let child_m = m >> k;
            let parent_m = child_m / 2;
            let prev = &levels[k];
            let mut next = vec![Complex::new(T::zero(), T::zero()); parent_m.pow(d as u32)];
            for (p, slot) in next.iter_mut().enumerate() {
                let pc = unflatten(p, parent_m, d);
                let mut acc = Complex::new(T::zero(), T::zero());
                for corner in 0..(1usize << d) {
                    let mut cc = [0usize; MAX_DIM];
                    for axis in 0..d {
                        cc[axis] = 2 * pc[axis] + ((corner >> (d - 1 - axis)) & 1);
                    }
                    acc += prev[flatten(&cc, child_m, d)];
                }
                *slot = acc;
            }
            levels.push(next);
        }
        Self { d, m, levels }
    }

    fn cube_of(&self, flat: usize, level: usize) -> usize {
        let idx = unflatten(flat, self.m, self.d);
        let mut c = [0usize; MAX_DIM];
        for axis in 0..self.d {
            c[axis] = idx[axis] >> level;
        }
        flatten(&c, self.m >> level, self.d)
    }

    /// Plain average over the cube; division by 2^{level·d} is exact.
    fn average(&self, level: usize, cube: usize) -> Complex<T> {
        let scale = T::lit(2.0).powi(-((level * self.d) as i32));
        self.levels[level][cube] * scale
    }
}

fn unflatten(flat: usize, m: usize, d: usize) -> [usize; MAX_DIM] {
    let mut out = [0; MAX_DIM];
    let mut rest = flat;
    for axis in (0..d).rev() {
        out[axis] = rest % m;
        rest /= m;
    }
    out
}

fn flatten(idx: &[usize; MAX_DIM], m: usize, d: usize) -> usize {
    idx[..d].iter().fold(0, |acc, &i| acc * m + i)
}

/// E_N f: the plain average over each dyadic cube of side N.
pub fn dyadic_average<T: Real>(f: &GridFunction<T>, n: usize) -> Result<GridFunction<T>> {
    let level = check_side(f.lattice(), n)? as usize;
    let sums = BlockSums::new(f, level as u32);
    let values = (0..f.lattice().len())
        .map(|flat| sums.average(level, sums.cube_of(flat, level)))
        .collect();
    Ok(GridFunction::from_raw(*f.lattice(), values))
}

/// sup_N |E_N f| over every dyadic side that tiles the box.
pub fn dyadic_maximal<T: Real>(f: &GridFunction<T>) -> GridFunction<T> {
    let lat = f.lattice();
    let top = max_dyadic_side(lat.points_per_axis()).trailing_zeros();
    let sums = BlockSums::new(f, top);
    let values = (0..lat.len())
        .map(|flat| {
            let best = (0..=top as usize)
                .map(|level| sums.average(level, sums.cube_of(flat, level)).norm())
                .fold(T::zero(), T::max);
            Complex::new(best, T::zero())
        })
        .collect();
    GridFunction::from_raw(*lat, values)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DyadicCube<T> {
    /// Site coordinates n of the cube corner with smallest axis indices.
    pub origin: [i64; MAX_DIM],
    /// Side N in lattice sites.
    pub scale: usize,
    /// Physical side length N·h.
    pub side: T,
    /// Plain average of f over the cube.
    pub average: T,
    /// Flat indices of the member sites.
    pub sites: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CzDecomposition<T: Real> {
    pub good: GridFunction<T>,
    pub bads: Vec<GridFunction<T>>,
    pub cubes: Vec<DyadicCube<T>>,
    pub lambda: T,
}

/// Outcome of checking the three decomposition properties on a result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CzCheck {
    pub bounded_off_cubes: bool,
    pub measure_bound: bool,
    pub average_bracket: bool,
    pub disjoint: bool,
}

impl CzCheck {
    pub fn all(&self) -> bool {
        self.bounded_off_cubes && self.measure_bound && self.average_bracket && self.disjoint
    }
}

impl<T: Real> CzDecomposition<T> {
    /// good + Σ bads.
    pub fn reconstruct(&self) -> GridFunction<T> {
        let mut out = self.good.clone();
        for b in &self.bads {
            for (o, v) in out.values_mut().iter_mut().zip(b.values()) {
                *o += v;
            }
        }
        out
    }

    /// Total measure h^d·#sites of the selected cubes.
    pub fn covered_measure(&self) -> T {
        let lat = self.good.lattice();
        let count: usize = self.cubes.iter().map(|q| q.sites.len()).sum();
        lat.cell_volume() * T::from_usize_lossy(count)
    }

    /// Checks f ≤ λ off the cubes, |∪Q| ≤ ‖f‖₁/λ, λ < avg_Q ≤ 2^d λ and disjointness.
    pub fn check(&self, f: &GridFunction<T>) -> CzCheck {
        let lat = f.lattice();
        let mut owner = vec![usize::MAX; lat.len()];
        let mut disjoint = true;
        for (k, q) in self.cubes.iter().enumerate() {
            for &s in &q.sites {
                if owner[s] != usize::MAX {
                    disjoint = false;
                }
                owner[s] = k;
            }
        }
        let bounded_off_cubes = f
            .values()
            .iter()
            .zip(&owner)
            .all(|(z, &o)| o != usize::MAX || z.re <= self.lambda);
        let l1 = crate::norms::lp_norm_unchecked(f.values(), lat.cell_volume(), T::one());
        let measure_bound = self.covered_measure() * self.lambda <= l1;
        let cap = self.lambda * T::lit(2.0).powi(lat.dim() as i32);
        let average_bracket = self.cubes.iter().all(|q| self.lambda < q.average && q.average <= cap);
        CzCheck {
            bounded_off_cubes,
            measure_bound,
            average_bracket,
            disjoint,
        }
    }
}

/// Calderón–Zygmund decomposition of a nonnegative field at height λ.
pub fn cz_decompose<T: Real>(f: &GridFunction<T>, lambda: T) -> Result<CzDecomposition<T>> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::domain(format!("threshold must be positive, got {lambda}")));
    }
    if f.values().iter().any(|z| z.im != T::zero() || z.re < T::zero()) {
        return Err(Error::domain("decomposition needs a real nonnegative field"));
    }
    let lat = *f.lattice();
    let (d, m) = (lat.dim(), lat.points_per_axis());
    let top = max_dyadic_side(m).trailing_zeros() as usize;
    let sums = BlockSums::new(f, top as u32);

    let top_max = (0..sums.levels[top].len())
        .map(|c| sums.average(top, c).re)
        .fold(T::zero(), T::max);
    if top_max > lambda {
        return Err(Error::ThresholdTooSmall {
            average: top_max.to_f64_lossy(),
            lambda: lambda.to_f64_lossy(),
        });
    }

    // Walk down from the top; a cube is selected when it exceeds λ and no ancestor was selected.
    let mut cubes = Vec::new();
    let mut covered = vec![false; sums.levels[top].len()];
    for level in (0..top).rev() {
        let lm = m >> level;
        let mut next_covered = vec![false; sums.levels[level].len()];
        for (c, slot) in next_covered.iter_mut().enumerate() {
            let idx = unflatten(c, lm, d);
            let mut parent = [0usize; MAX_DIM];
            for axis in 0..d {
                parent[axis] = idx[axis] / 2;
            }
            if covered[flatten(&parent, lm / 2, d)] {
                *slot = true;
                continue;
            }
            let avg = sums.average(level, c).re;
            if avg > lambda {
                *slot = true;
                cubes.push((level, c, avg));
            }
        }
        covered = next_covered;
    }
    cubes.sort_by_key(|&(level, c, _)| {
        let lm = m >> level;
        let idx = unflatten(c, lm, d);
        let mut first = [0usize; MAX_DIM];
        for axis in 0..d {
            first[axis] = idx[axis] << level;
        }
        flatten(&first, m, d)
    });

    let mut good = f.clone();
    let mut bads = Vec::with_capacity(cubes.len());
    let mut out_cubes = Vec::with_capacity(cubes.len());
    for (level, c, avg) in cubes {
        let n = 1usize << level;
        let lm = m >> level;
        let cidx = unflatten(c, lm, d);
        let sites = cube_sites(&cidx, n, m, d);
        let mut bad = GridFunction::zeros(lat);
        let avg_z = Complex::new(avg, T::zero());
        for &s in &sites {
            let v = f.values()[s];
            bad.values_mut()[s] = v - avg_z;
            good.values_mut()[s] = avg_z;
        }
        let mut origin = [0i64; MAX_DIM];
        for axis in 0..d {
            origin[axis] = lat.wrap(cidx[axis] * n);
        }
        bads.push(bad);
        out_cubes.push(DyadicCube {
            origin,
            scale: n,
            side: lat.h() * T::from_usize_lossy(n),
            average: avg,
            sites,
        });
    }
    Ok(CzDecomposition {
        good,
        bads,
        cubes: out_cubes,
        lambda,
    })
}

fn cube_sites(cidx: &[usize; MAX_DIM], n: usize, m: usize, d: usize) -> Vec<usize> {
    let count = n.pow(d as u32);
    (0..count)
        .map(|j| {
            let off = unflatten(j, n, d);
            let mut idx = [0usize; MAX_DIM];
            for axis in 0..d {
                idx[axis] = cidx[axis] * n + off[axis];
            }
            flatten(&idx, m, d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(lat: Lattice<f64>, vals: &[f64]) -> GridFunction<f64> {
        GridFunction::from_values(lat, vals.iter().map(|&v| Complex::new(v, 0.0)).collect()).unwrap()
    }

    #[test]
    fn average_of_single_site() {
        let lat = Lattice::new(1.0, 1, 8).unwrap();
        let f = real(lat, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let e2 = dyadic_average(&f, 2).unwrap();
        let got: Vec<f64> = e2.values().iter().map(|z| z.re).collect();
        assert_eq!(got, vec![0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(dyadic_average(&f, 1).unwrap(), f);
        assert!(dyadic_average(&f, 3).is_err());
        assert!(dyadic_average(&f, 16).is_err());
    }

    #[test]
    fn maximal_function_example() {
        let lat = Lattice::new(1.0, 1, 8).unwrap();
        let f = GridFunction::point_mass(lat);
        let mf = dyadic_maximal(&f);
        assert_eq!(mf.at_site(&[1]).re, 0.5);
        assert_eq!(mf.at_site(&[0]).re, 1.0);
        assert_eq!(mf.at_site(&[3]).re, 0.25);
        assert_eq!(mf.at_site(&[-1]).re, 0.125);
    }

    #[test]
    fn cz_single_spike() {
        let lat = Lattice::new(1.0, 1, 8).unwrap();
        let f = real(lat, &[4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let cz = cz_decompose(&f, 1.0).unwrap();
        assert_eq!(cz.cubes.len(), 1);
        assert_eq!(cz.cubes[0].scale, 2);
        assert_eq!(cz.cubes[0].origin[0], 0);
        assert_eq!(cz.cubes[0].average, 2.0);
        assert!(cz.check(&f).all());
        assert_eq!(cz.reconstruct(), f);
    }

    #[test]
    fn cz_below_threshold_is_trivial() {
        let lat = Lattice::new(1.0, 2, 8).unwrap();
        let f = GridFunction::constant(lat, Complex::new(0.5, 0.0));
        let cz = cz_decompose(&f, 1.0).unwrap();
        assert!(cz.cubes.is_empty());
        assert_eq!(cz.good, f);
    }

    #[test]
    fn cz_rejects_bad_input() {
        let lat = Lattice::new(1.0, 1, 8).unwrap();
        let f = GridFunction::constant(lat, Complex::new(2.0, 0.0));
        assert!(matches!(cz_decompose(&f, 1.0), Err(Error::ThresholdTooSmall { .. })));
        let neg = real(lat, &[-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(cz_decompose(&neg, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn non_power_of_two_box_uses_dividing_sides() {
        let lat = Lattice::new(1.0, 1, 12).unwrap();
        assert_eq!(max_dyadic_side(12), 4);
        let f = GridFunction::point_mass(lat);
        assert!(dyadic_average(&f, 8).is_err());
        assert_eq!(dyadic_maximal(&f).at_site(&[3]).re, 0.25);
    }
}
