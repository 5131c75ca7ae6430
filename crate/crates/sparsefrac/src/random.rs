//! Counter-based random inputs: case `j` of a battery draws from ChaCha
//! stream `j` of the battery seed, independently of every other case.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sparsefrac_core::dyadic::MAX_DIM;
use sparsefrac_core::functions::FunctionSpec;
use sparsefrac_core::weights::{ExponentTriple, WeightSpec};
use sparsefrac_core::DyadicCube;

/// Depth of the piecewise-constant random functions.
pub const COARSE_DEPTH: u32 = 4;

/// The generator for case `case` under `seed`.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Non-negative piecewise-constant function on the depth-[`COARSE_DEPTH`]
/// mesh; about a quarter of the coarse cells vanish.
pub fn random_function<R: Rng>(rng: &mut R, dim: usize) -> FunctionSpec {
    let count = 1usize << (COARSE_DEPTH as usize * dim);
    let values = (0..count)
        .map(|_| if rng.gen_bool(0.25) { 0.0 } else { rng.gen_range(0.0..1.0) })
        .collect();
    FunctionSpec::Coarse { depth: COARSE_DEPTH, values }
}

/// Power weight with `γ` uniform in `frac` times the admissible range.
pub fn random_power_weight<R: Rng>(rng: &mut R, e: &ExponentTriple, frac: f64) -> WeightSpec {
    let (lo, hi) = e.power_weight_range();
    let gamma = rng.gen_range(frac * lo..=frac * hi);
    let mut x0 = [0.0; MAX_DIM];
    for x in x0.iter_mut().take(e.n()) {
        *x = rng.gen_range(0.0..1.0);
    }
    WeightSpec::Power { x0, gamma }
}

/// A random cube of the given grid inside the unit root box, level in `levels`.
pub fn random_cube<R: Rng>(rng: &mut R, grid: usize, dim: usize, levels: std::ops::RangeInclusive<u32>) -> DyadicCube {
    loop {
        let level = rng.gen_range(levels.clone());
        let mut u = [0.0; MAX_DIM];
        for x in u.iter_mut().take(dim) {
            *x = rng.gen_range(0.0..1.0);
        }
        let c = sparsefrac_core::dyadic::cube_containing_unit(grid, level, &u[..dim]);
        if c.bounds().inside_root() {
            return c;
        }
    }
}

/// A random sub-box of the unit box with sides in `[min_side, 1]`.
pub fn random_box<R: Rng>(rng: &mut R, dim: usize, min_side: f64) -> ([f64; MAX_DIM], [f64; MAX_DIM]) {
    let mut lo = [0.0; MAX_DIM];
    let mut hi = [0.0; MAX_DIM];
    for d in 0..dim {
        let side = rng.gen_range(min_side..=1.0);
        lo[d] = rng.gen_range(0.0..=1.0 - side);
        hi[d] = lo[d] + side;
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_of_order() {
        let a: f64 = case_rng(7, 3).gen();
        let _ = case_rng(7, 2).gen::<f64>();
        let b: f64 = case_rng(7, 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, case_rng(7, 4).gen::<f64>());
    }
}
