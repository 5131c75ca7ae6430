use alloc::vec;
use alloc::vec::Vec;

use super::OperatorOutput;
use crate::dyadic::{GridFunction, GridTree};
use crate::error::{Error, Result};
use crate::math;
use crate::orlicz::{DiscreteMeasure, YoungFunction};
use crate::sparse::SparseFamily;

fn check_mesh(f: &GridFunction, tree: &GridTree) -> Result<()> {
    if f.mesh() != tree.mesh() {
        return Err(Error::MeshMismatch);
    }
    Ok(())
}

fn output(f: &GridFunction, cells: Vec<f64>, name: &'static str, alpha: f64, grid: Option<usize>, visits: u64) -> Result<OperatorOutput> {
    Ok(OperatorOutput {
        values: GridFunction::new(*f.mesh(), cells)?,
        operator: name,
        alpha,
        grid,
        cube_visits: visits,
    })
}

/// `I^D_α f = Σ_Q ℓ(Q)^α ⟨f⟩_Q χ_Q` over levels `0..=K` of one grid, from
/// per-level cube averages in `O(N·K)`.
pub fn dyadic_fractional_integral(f: &GridFunction, alpha: f64, tree: &GridTree) -> Result<OperatorOutput> {
    check_mesh(f, tree)?;
    let avgs = tree.cube_averages(f)?;
    let mut out = vec![0.0; f.mesh().len()];
    for (level, row) in avgs.iter().enumerate() {
        let level = level as u32;
        let scale = math::pow(tree.cube_side(level), alpha);
        for (cell, o) in out.iter_mut().enumerate() {
            *o += scale * row[tree.containing(level, cell)];
        }
    }
    let visits = (out.len() * avgs.len()) as u64;
    output(f, out, "dyadic_fractional_integral", alpha, Some(tree.grid()), visits)
}

/// `I^S_α f`, the dyadic sum restricted to the cubes of `family`.
pub fn sparse_fractional_integral(
    f: &GridFunction,
    alpha: f64,
    tree: &GridTree,
    family: &SparseFamily,
) -> Result<OperatorOutput> {
    check_mesh(f, tree)?;
    if family.grid() != tree.grid() {
        return Err(Error::MixedGrids);
    }
    let mut out = vec![0.0; f.mesh().len()];
    let mut visits = 0u64;
    for cube in family.cubes() {
        let idx = tree
            .index_of(cube)
            .ok_or(Error::Invalid("sparse cube not in the grid tree"))?;
        let term = math::pow(tree.cube_side(cube.level), alpha) * f.cube_average(cube);
        for &cell in tree.members(cube.level, idx) {
            out[cell as usize] += term;
            visits += 1;
        }
    }
    output(f, out, "sparse_fractional_integral", alpha, Some(tree.grid()), visits)
}

/// Dyadic `M^D_α f = max_Q ℓ(Q)^α ⟨|f|⟩_Q χ_Q` for one grid.
pub fn fractional_maximal_dyadic(f: &GridFunction, alpha: f64, tree: &GridTree) -> Result<OperatorOutput> {
    check_mesh(f, tree)?;
    let avgs = tree.cube_averages(&f.abs())?;
    let mut out = vec![0.0f64; f.mesh().len()];
    for (level, row) in avgs.iter().enumerate() {
        let level = level as u32;
        let scale = math::pow(tree.cube_side(level), alpha);
        for (cell, o) in out.iter_mut().enumerate() {
            *o = o.max(scale * row[tree.containing(level, cell)]);
        }
    }
    let visits = (out.len() * avgs.len()) as u64;
    output(f, out, "fractional_maximal_dyadic", alpha, Some(tree.grid()), visits)
}

/// `M_α f` as the cellwise maximum of the dyadic operators over all grids.
pub fn fractional_maximal(f: &GridFunction, alpha: f64, trees: &[GridTree]) -> Result<OperatorOutput> {
    let mut out = vec![0.0f64; f.mesh().len()];
    let mut visits = 0;
    for tree in trees {
        let o = fractional_maximal_dyadic(f, alpha, tree)?;
        visits += o.cube_visits;
        for (a, &b) in out.iter_mut().zip(o.values.values()) {
            *a = a.max(b);
        }
    }
    output(f, out, "fractional_maximal", alpha, None, visits)
}

/// `‖f‖_{Φ,Q,σ}` for every cube of the tree, per level.
pub(crate) fn cube_orlicz_norms(
    f: &GridFunction,
    sigma: &GridFunction,
    phi: YoungFunction,
    tree: &GridTree,
) -> Result<Vec<Vec<f64>>> {
    let masses = tree.cube_integrals(sigma)?;
    match phi {
        YoungFunction::Power(p) => {
            let powered = f.zip_with(sigma, |a, s| math::pow(a.abs(), p) * s)?;
            let ints = tree.cube_integrals(&powered)?;
            Ok(ints
                .iter()
                .zip(&masses)
                .map(|(row, mrow)| {
                    row.iter()
                        .zip(mrow)
                        .map(|(&i, &m)| if m > 0.0 { math::pow(i / m, 1.0 / p) } else { 0.0 })
                        .collect()
                })
                .collect())
        }
        _ => Ok((0..=tree.depth())
            .map(|level| {
                (0..tree.cube_count(level))
                    .map(|i| {
                        if masses[level as usize][i] > 0.0 {
                            DiscreteMeasure::on_region(f, Some(sigma), &tree.unit_box(level, i))
                                .map(|m| m.luxemburg(phi))
                                .unwrap_or(0.0)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect()),
    }
}

/// `M^D_{Φ,σ,α} f = max_Q σ(Q)^{α/n} ‖f‖_{Φ,Q,σ} χ_Q` for one grid.
pub fn weighted_orlicz_fractional_maximal(
    f: &GridFunction,
    sigma: &GridFunction,
    alpha: f64,
    phi: YoungFunction,
    tree: &GridTree,
) -> Result<OperatorOutput> {
    check_mesh(f, tree)?;
    check_mesh(sigma, tree)?;
    let n = f.dim() as f64;
    let norms = cube_orlicz_norms(f, sigma, phi, tree)?;
    let masses = tree.cube_integrals(sigma)?;
    let mut out = vec![0.0f64; f.mesh().len()];
    for level in 0..=tree.depth() {
        let l = level as usize;
        let terms: Vec<f64> = norms[l]
            .iter()
            .zip(&masses[l])
            .map(|(&nm, &m)| math::pow(m, alpha / n) * nm)
            .collect();
        for (cell, o) in out.iter_mut().enumerate() {
            *o = o.max(terms[tree.containing(level, cell)]);
        }
    }
    let visits = (out.len() * (tree.depth() as usize + 1)) as u64;
    output(f, out, "weighted_orlicz_fractional_maximal", alpha, Some(tree.grid()), visits)
}
