use alloc::vec;
use alloc::vec::Vec;

use super::riesz::riesz_potential_1d;
use super::OperatorOutput;
use crate::dyadic::{GridFunction, GridTree};
use crate::error::{Error, Result};
use crate::math;

/// `[b, I_α] f = b·I_α f − I_α(b f)` in one dimension.
pub fn commutator_1d(b: &GridFunction, f: &GridFunction, alpha: f64) -> Result<OperatorOutput> {
    if b.mesh() != f.mesh() {
        return Err(Error::MeshMismatch);
    }
    let i_f = riesz_potential_1d(f, alpha)?;
    let bf = b.zip_with(f, |x, y| x * y)?;
    let i_bf = riesz_potential_1d(&bf, alpha)?;
    let cells = b
        .values()
        .iter()
        .zip(i_f.values.values())
        .zip(i_bf.values.values())
        .map(|((&bx, &a), &c)| bx * a - c)
        .collect();
    Ok(OperatorOutput {
        values: GridFunction::new(*f.mesh(), cells)?,
        operator: "commutator_1d",
        alpha,
        grid: None,
        cube_visits: i_f.cube_visits + i_bf.cube_visits,
    })
}

/// `C^D_b f(x) = Σ_Q ℓ(Q)^α ⨍_Q |b(x) − b(y)| f(y) dy χ_Q(x)`.
///
/// Per cube the overlapping cells are sorted by `b` and prefix sums of
/// `f` and `b f` give each inner average by one binary search.
pub fn dyadic_commutator(b: &GridFunction, f: &GridFunction, alpha: f64, tree: &GridTree) -> Result<OperatorOutput> {
    if b.mesh() != f.mesh() || f.mesh() != tree.mesh() {
        return Err(Error::MeshMismatch);
    }
    let mesh = f.mesh();
    let cell_vol = mesh.cell_volume();
    let bv = b.values();
    let fv = f.values();
    let mut out = vec![0.0; mesh.len()];
    let mut visits = 0u64;
    let mut items: Vec<(f64, f64)> = Vec::new();
    let mut s0: Vec<f64> = Vec::new();
    let mut s1: Vec<f64> = Vec::new();
    for level in 0..=tree.depth() {
        let scale = math::pow(tree.cube_side(level), alpha) * cell_vol / tree.cube_volume(level);
        for idx in 0..tree.cube_count(level) {
            let members = tree.members(level, idx);
            if members.is_empty() {
                continue;
            }
            items.clear();
            items.extend(
                mesh.overlaps(&tree.unit_box(level, idx))
                    .into_iter()
                    .filter(|&(j, _)| fv[j] != 0.0)
                    .map(|(j, w)| (bv[j], w * fv[j])),
            );
            if items.is_empty() {
                continue;
            }
            items.sort_by(|x, y| x.0.total_cmp(&y.0));
            s0.clear();
            s1.clear();
            s0.push(0.0);
            s1.push(0.0);
            for &(bj, wf) in &items {
                s0.push(s0.last().unwrap() + wf);
                s1.push(s1.last().unwrap() + wf * bj);
            }
            let (t0, t1) = (*s0.last().unwrap(), *s1.last().unwrap());
            for &cell in members {
                let bx = bv[cell as usize];
                let k = items.partition_point(|&(bj, _)| bj <= bx);
                let below = bx * s0[k] - s1[k];
                let above = (t1 - s1[k]) - bx * (t0 - s0[k]);
                out[cell as usize] += scale * (below + above);
                visits += 1;
            }
        }
    }
    Ok(OperatorOutput {
        values: GridFunction::new(*mesh, out)?,
        operator: "dyadic_commutator",
        alpha,
        grid: Some(tree.grid()),
        cube_visits: visits,
    })
}
