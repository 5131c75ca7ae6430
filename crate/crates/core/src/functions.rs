//! Test functions `f` and BMO functions `b` on the mesh.

use alloc::vec::Vec;

use crate::dyadic::{cube_containing_unit, GridFunction, Mesh, UnitBox, MAX_DIM};
use crate::error::{Error, Result};
use crate::math;
use crate::weights::Weight;

/// Input functions. Boxes and points are in unit coordinates of the root box.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Zero,
    Constant(f64),
    /// Indicator of `[lo, hi)`; need not be mesh-aligned (cells get the
    /// overlap fraction).
    Indicator { lo: [f64; MAX_DIM], hi: [f64; MAX_DIM] },
    /// Indicator of the level-`level` unshifted dyadic cube containing `at`.
    Spike { at: [f64; MAX_DIM], level: u32 },
    /// `σ = w^{−p′}` (or `w^q` when `p = 1`) restricted to `[lo, hi)`.
    DualWeight { lo: [f64; MAX_DIM], hi: [f64; MAX_DIM] },
    /// Piecewise constant on the depth-`depth` mesh, row-major, axis 0 fastest;
    /// refined exactly onto finer meshes.
    Coarse { depth: u32, values: Vec<f64> },
}

fn overlap_fraction(mesh: &Mesh, cell: usize, lo: &[f64; MAX_DIM], hi: &[f64; MAX_DIM]) -> f64 {
    let b = mesh.cell_unit_box(cell);
    let side = mesh.cell_unit_side();
    (0..mesh.dim())
        .map(|d| ((b.hi[d].min(hi[d]) - b.lo[d].max(lo[d])) / side).max(0.0))
        .product()
}

impl FunctionSpec {
    /// Cell values on `mesh`; `weight` is needed for [`FunctionSpec::DualWeight`].
    pub fn discretize(&self, mesh: Mesh, weight: Option<&Weight>) -> Result<GridFunction> {
        let dim = mesh.dim();
        match self {
            FunctionSpec::Zero => Ok(GridFunction::zeros(mesh)),
            FunctionSpec::Constant(c) => GridFunction::constant(mesh, *c),
            FunctionSpec::Indicator { lo, hi } => GridFunction::new(
                mesh,
                (0..mesh.len()).map(|i| overlap_fraction(&mesh, i, lo, hi)).collect(),
            ),
            FunctionSpec::Spike { at, level } => {
                if *level > mesh.depth() {
                    return Err(Error::LevelOutOfRange { level: *level, max: mesh.depth() });
                }
                let cube = cube_containing_unit(0, *level, &at[..dim]);
                let b = cube.unit_box();
                GridFunction::new(
                    mesh,
                    (0..mesh.len())
                        .map(|i| overlap_fraction(&mesh, i, &b.lo, &b.hi))
                        .collect(),
                )
            }
            FunctionSpec::DualWeight { lo, hi } => {
                let w = weight.ok_or(Error::Invalid("dual-weight function needs a weight"))?;
                if w.base().mesh() != &mesh {
                    return Err(Error::MeshMismatch);
                }
                let dual = w.sigma().unwrap_or(w.v());
                GridFunction::new(
                    mesh,
                    (0..mesh.len())
                        .map(|i| dual.values()[i] * overlap_fraction(&mesh, i, lo, hi))
                        .collect(),
                )
            }
            FunctionSpec::Coarse { depth, values } => {
                let coarse = Mesh::new(*mesh.root(), *depth)?;
                if values.len() != coarse.len() {
                    return Err(Error::CellCount { expected: coarse.len(), got: values.len() });
                }
                if *depth > mesh.depth() {
                    return Err(Error::LevelOutOfRange { level: *depth, max: mesh.depth() });
                }
                let shift = mesh.depth() - depth;
                GridFunction::new(
                    mesh,
                    (0..mesh.len())
                        .map(|i| {
                            let mi = mesh.multi_index(i);
                            let ci: [usize; MAX_DIM] = [mi[0] >> shift, mi[1] >> shift];
                            values[coarse.index(&ci[..dim])]
                        })
                        .collect(),
                )
            }
        }
    }
}

/// BMO test functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BmoSpec {
    Constant(f64),
    /// `1` for `u₀ < at`, `0` otherwise.
    Step { at: f64 },
    /// `log |x − x₀|` (actual distance); exact cell average on the cells
    /// touching `x₀`.
    LogDistance { x0: [f64; MAX_DIM] },
}

impl BmoSpec {
    pub fn discretize(&self, mesh: Mesh) -> Result<GridFunction> {
        let dim = mesh.dim();
        match *self {
            BmoSpec::Constant(c) => GridFunction::constant(mesh, c),
            BmoSpec::Step { at } => GridFunction::new(
                mesh,
                (0..mesh.len())
                    .map(|i| overlap_fraction(&mesh, i, &[f64::NEG_INFINITY; MAX_DIM], &[at, f64::INFINITY]))
                    .collect(),
            ),
            BmoSpec::LogDistance { x0 } => {
                let ln_side = math::ln(mesh.root().side());
                GridFunction::new(
                    mesh,
                    (0..mesh.len())
                        .map(|i| {
                            let b = mesh.cell_unit_box(i);
                            let touches = (0..dim).all(|d| b.lo[d] <= x0[d] && x0[d] <= b.hi[d]);
                            ln_side
                                + if touches {
                                    log_cell_average(&b, &x0)
                                } else {
                                    let c = mesh.cell_center_unit(i);
                                    let r2: f64 = (0..dim).map(|d| (c[d] - x0[d]) * (c[d] - x0[d])).sum();
                                    0.5 * math::ln(r2)
                                }
                        })
                        .collect(),
                )
            }
        }
    }
}

/// Exact average of `log |x − x₀|` over a box whose closure contains `x₀`.
pub fn log_cell_average(b: &UnitBox, x0: &[f64; MAX_DIM]) -> f64 {
    let piece = |u: f64| if u > 0.0 { u * (math::ln(u) - 1.0) } else { 0.0 };
    if b.dim == 1 {
        (piece(b.hi[0] - x0[0]) + piece(x0[0] - b.lo[0])) / (b.hi[0] - b.lo[0])
    } else {
        let mut total = 0.0;
        for &a in &[x0[0] - b.lo[0], b.hi[0] - x0[0]] {
            for &c in &[x0[1] - b.lo[1], b.hi[1] - x0[1]] {
                if a > 0.0 && c > 0.0 {
                    // ∫ R²/2 (ln R − 1/2) dθ with R the distance to the far edge
                    let radial = |r: f64| 0.5 * r * r * (math::ln(r) - 0.5);
                    let split = math::atan2(c, a);
                    total += math::adaptive_simpson(&|t: f64| radial(a / math::cos(t)), 0.0, split, 1e-14)
                        + math::adaptive_simpson(
                            &|t: f64| radial(c / math::sin(t)),
                            split,
                            core::f64::consts::FRAC_PI_2,
                            1e-14,
                        );
                }
            }
        }
        total / b.unit_volume()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn coarse_refines_exactly() {
        let m = Mesh::unit(1, 4).unwrap();
        let f = FunctionSpec::Coarse { depth: 2, values: vec![1.0, 2.0, 3.0, 4.0] }
            .discretize(m, None)
            .unwrap();
        assert_eq!(&f.values()[..5], &[1.0, 1.0, 1.0, 1.0, 2.0]);
        assert!((f.total_integral() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn indicator_partial_cells() {
        let m = Mesh::unit(1, 2).unwrap();
        let f = FunctionSpec::Indicator { lo: [0.0, 0.0], hi: [1.0 / 3.0, 0.0] }
            .discretize(m, None)
            .unwrap();
        assert!((f.total_integral() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn log_average_1d() {
        // ∫_0^1 ln u du = −1
        let b = UnitBox::new(&[0.0], &[1.0]);
        assert!((log_cell_average(&b, &[0.0, 0.0]) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn log_average_2d_unit_square_corner() {
        // ∫∫_{[0,1]²} ln|x| dx = (ln 2 − 3)/2 + π/4
        let b = UnitBox::new(&[0.0, 0.0], &[1.0, 1.0]);
        let want = 0.5 * (core::f64::consts::LN_2 - 3.0) + core::f64::consts::FRAC_PI_4;
        assert!((log_cell_average(&b, &[0.0, 0.0]) - want).abs() < 1e-10);
    }

    #[test]
    fn step_is_left_indicator() {
        let m = Mesh::unit(1, 3).unwrap();
        let b = BmoSpec::Step { at: 0.5 }.discretize(m).unwrap();
        assert_eq!(b.values(), &[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }
}
