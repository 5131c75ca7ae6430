use alloc::vec;
use alloc::vec::Vec;

use super::fractional::{dyadic_fractional_integral, fractional_maximal_dyadic};
use crate::dyadic::{DyadicCube, GridFunction, GridTree};
use crate::error::{Error, Result};
use crate::math;

/// `I^D_α f` on a cube `Q` split into the part from cubes `P ⊆ Q` and the
/// constant part from cubes `P ⊋ Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerOuter {
    pub cells: Vec<usize>,
    pub inner: Vec<f64>,
    pub outer: f64,
}

pub(crate) fn split_from_averages(
    avgs: &[Vec<f64>],
    alpha: f64,
    tree: &GridTree,
    level: u32,
    idx: usize,
) -> InnerOuter {
    let cells: Vec<usize> = tree.members(level, idx).iter().map(|&c| c as usize).collect();
    let mut outer = 0.0;
    let mut up = idx;
    for l in (0..level).rev() {
        up = tree.parent(l + 1, up);
        outer += math::pow(tree.cube_side(l), alpha) * avgs[l as usize][up];
    }
    let inner = cells
        .iter()
        .map(|&cell| {
            (level..=tree.depth())
                .map(|l| math::pow(tree.cube_side(l), alpha) * avgs[l as usize][tree.containing(l, cell)])
                .sum()
        })
        .collect();
    InnerOuter { cells, inner, outer }
}

/// Inner/outer split of `I^D_α f` on the cube `Q` of the tree's grid.
pub fn inner_outer_split(f: &GridFunction, alpha: f64, tree: &GridTree, cube: &DyadicCube) -> Result<InnerOuter> {
    let idx = tree.index_of(cube).ok_or(Error::Invalid("cube not in the grid tree"))?;
    let avgs = tree.cube_averages(f)?;
    Ok(split_from_averages(&avgs, alpha, tree, cube.level, idx))
}

/// Maximal cubes of the tree all of whose member cells have `output > t`.
/// Their member cells partition `{output > t}`.
pub fn level_set_cubes(output: &GridFunction, t: f64, tree: &GridTree) -> Result<Vec<DyadicCube>> {
    if output.mesh() != tree.mesh() {
        return Err(Error::MeshMismatch);
    }
    let vals = output.values();
    let mut prev: Vec<bool> = Vec::new();
    let mut found = Vec::new();
    for level in 0..=tree.depth() {
        let inside: Vec<bool> = (0..tree.cube_count(level))
            .map(|i| {
                let m = tree.members(level, i);
                !m.is_empty() && m.iter().all(|&c| vals[c as usize] > t)
            })
            .collect();
        for (i, &ok) in inside.iter().enumerate() {
            if ok && (level == 0 || !prev[tree.parent(level, i)]) {
                found.push(tree.cube(level, i));
            }
        }
        prev = inside;
    }
    Ok(found)
}

/// Off-support comparison of `I^D_α f` with `M^D_α f`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    /// `max I^D_α f / M^D_α f` over cells outside the support cube.
    pub ratio: f64,
    /// `1 / (1 − 2^{α−n})`.
    pub bound: f64,
    pub cells: usize,
}

/// Tail estimate for `f` supported in the cube `support` of the tree's grid.
pub fn tail_bound_ratio(f: &GridFunction, alpha: f64, tree: &GridTree, support: &DyadicCube) -> Result<TailBound> {
    let idx = tree.index_of(support).ok_or(Error::Invalid("cube not in the grid tree"))?;
    let mut inside = vec![false; f.mesh().len()];
    for &c in tree.members(support.level, idx) {
        inside[c as usize] = true;
    }
    let b = support.unit_box();
    let mesh = f.mesh();
    let outside_mass: f64 = (0..mesh.len())
        .filter(|&c| {
            let cb = mesh.cell_unit_box(c);
            !(0..mesh.dim()).all(|d| cb.lo[d] >= b.lo[d] && cb.hi[d] <= b.hi[d])
        })
        .map(|c| f.values()[c].abs())
        .sum();
    if outside_mass > 0.0 {
        return Err(Error::Invalid("f must be supported in the cube"));
    }
    let i = dyadic_fractional_integral(f, alpha, tree)?;
    let m = fractional_maximal_dyadic(f, alpha, tree)?;
    let mut ratio = 0.0f64;
    let mut cells = 0;
    for c in 0..mesh.len() {
        let mv = m.values.values()[c];
        if !inside[c] && mv > 0.0 {
            ratio = ratio.max(i.values.values()[c] / mv);
            cells += 1;
        }
    }
    let bound = 1.0 / (1.0 - math::pow(2.0, alpha - f.dim() as f64));
    Ok(TailBound { ratio, bound, cells })
}
