//! Direct reference definitions, independent of [`GridTree`](crate::GridTree)
//! and of cumulative tables: every cube average is an explicit sum over
//! overlapping cells. Quadratic or worse; intended for small meshes.

use alloc::vec::Vec;

use crate::dyadic::{cube_containing_unit, DyadicCube, GridFunction};
use crate::error::Result;
use crate::math;
use crate::orlicz::{DiscreteMeasure, YoungFunction};

fn cube_integral(f: &GridFunction, cube: &DyadicCube) -> f64 {
    let mesh = f.mesh();
    let vals = f.values();
    mesh.overlaps(&cube.unit_box()).iter().map(|&(j, w)| w * vals[j]).sum::<f64>() * mesh.cell_volume()
}

fn ancestors(f: &GridFunction, grid: usize, cell: usize) -> Vec<DyadicCube> {
    let mesh = f.mesh();
    let c = mesh.cell_center_unit(cell);
    (0..=mesh.depth()).map(|k| cube_containing_unit(grid, k, &c[..mesh.dim()])).collect()
}

fn side(f: &GridFunction, cube: &DyadicCube) -> f64 {
    f.mesh().root().side() * cube.unit_side()
}

fn volume(f: &GridFunction, cube: &DyadicCube) -> f64 {
    f.mesh().root().volume() * cube.unit_volume()
}

/// `I^D_α f` cell by cell.
pub fn dyadic_fractional_integral(f: &GridFunction, alpha: f64, grid: usize) -> Result<GridFunction> {
    let cells = (0..f.mesh().len())
        .map(|cell| {
            ancestors(f, grid, cell)
                .iter()
                .map(|q| math::pow(side(f, q), alpha) * cube_integral(f, q) / volume(f, q))
                .sum()
        })
        .collect();
    GridFunction::new(*f.mesh(), cells)
}

/// `I^S_α f` for an explicit list of cubes.
pub fn sparse_fractional_integral(f: &GridFunction, alpha: f64, cubes: &[DyadicCube]) -> Result<GridFunction> {
    let mesh = f.mesh();
    let cells = (0..mesh.len())
        .map(|cell| {
            let c = mesh.cell_center_unit(cell);
            cubes
                .iter()
                .filter(|q| q.contains_unit_point(&c[..mesh.dim()]))
                .map(|q| math::pow(side(f, q), alpha) * cube_integral(f, q) / volume(f, q))
                .sum()
        })
        .collect();
    GridFunction::new(*mesh, cells)
}

/// `M^D_α f` cell by cell.
pub fn fractional_maximal_dyadic(f: &GridFunction, alpha: f64, grid: usize) -> Result<GridFunction> {
    let g = f.abs();
    let cells = (0..f.mesh().len())
        .map(|cell| {
            ancestors(f, grid, cell)
                .iter()
                .map(|q| math::pow(side(f, q), alpha) * cube_integral(&g, q) / volume(f, q))
                .fold(0.0, f64::max)
        })
        .collect();
    GridFunction::new(*f.mesh(), cells)
}

/// `M^D_{Φ,σ,α} f` cell by cell.
pub fn weighted_orlicz_fractional_maximal(
    f: &GridFunction,
    sigma: &GridFunction,
    alpha: f64,
    phi: YoungFunction,
    grid: usize,
) -> Result<GridFunction> {
    let n = f.dim() as f64;
    let mesh = f.mesh();
    let cells = (0..mesh.len())
        .map(|cell| {
            ancestors(f, grid, cell)
                .iter()
                .map(|q| {
                    let mass = cube_integral(sigma, q);
                    let region = q.unit_box();
                    let norm = match phi {
                        YoungFunction::Power(p) => {
                            let s = mesh
                                .overlaps(&region)
                                .iter()
                                .map(|&(j, w)| w * sigma.values()[j] * math::pow(f.values()[j].abs(), p))
                                .sum::<f64>()
                                * mesh.cell_volume();
                            math::pow(s / mass, 1.0 / p)
                        }
                        _ => DiscreteMeasure::on_region(f, Some(sigma), &region)
                            .map(|m| m.luxemburg(phi))
                            .unwrap_or(0.0),
                    };
                    math::pow(mass, alpha / n) * norm
                })
                .fold(0.0, f64::max)
        })
        .collect();
    GridFunction::new(*mesh, cells)
}

/// `C^D_b f` by the triple loop over cells, ancestor cubes and source cells.
pub fn dyadic_commutator(b: &GridFunction, f: &GridFunction, alpha: f64, grid: usize) -> Result<GridFunction> {
    let mesh = f.mesh();
    let bv = b.values();
    let fv = f.values();
    let cells = (0..mesh.len())
        .map(|cell| {
            ancestors(f, grid, cell)
                .iter()
                .map(|q| {
                    let inner = mesh
                        .overlaps(&q.unit_box())
                        .iter()
                        .map(|&(j, w)| w * (bv[cell] - bv[j]).abs() * fv[j])
                        .sum::<f64>()
                        * mesh.cell_volume();
                    math::pow(side(f, q), alpha) * inner / volume(f, q)
                })
                .sum()
        })
        .collect();
    GridFunction::new(*mesh, cells)
}
