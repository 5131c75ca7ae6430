use alloc::vec;
use alloc::vec::Vec;

use super::OperatorOutput;
use crate::dyadic::GridFunction;
use crate::error::{Error, Result};
use crate::math;

fn check(f: &GridFunction, alpha: f64) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::UnsupportedDimension { op: "riesz_potential_1d", dim: f.dim() });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Exponents("riesz potential needs 0 < alpha < 1"));
    }
    Ok(())
}

/// `I_α f` at cell centers, integrating `|x − y|^{α−1}` exactly against each
/// source cell.
pub fn riesz_potential_1d(f: &GridFunction, alpha: f64) -> Result<OperatorOutput> {
    check(f, alpha)?;
    let n = f.mesh().len();
    let h = f.mesh().root().side() / n as f64;
    // kernel[d] = ∫ over a cell at center offset d·h of |u|^{α−1}
    let mut kernel: Vec<f64> = Vec::with_capacity(n);
    kernel.push(2.0 * math::pow(0.5 * h, alpha) / alpha);
    for d in 1..n {
        let hi = math::pow((d as f64 + 0.5) * h, alpha);
        let lo = math::pow((d as f64 - 0.5) * h, alpha);
        kernel.push((hi - lo) / alpha);
    }
    let vals = f.values();
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for (j, &v) in vals.iter().enumerate() {
            if v != 0.0 {
                s += v * kernel[i.abs_diff(j)];
            }
        }
        *o = s;
    }
    Ok(OperatorOutput {
        values: GridFunction::new(*f.mesh(), out)?,
        operator: "riesz",
        alpha,
        grid: None,
        cube_visits: (n * n) as u64,
    })
}

/// `I_α f(x)` at an arbitrary point `x` (actual coordinates), inside or
/// outside the root box.
pub fn riesz_point(f: &GridFunction, alpha: f64, x: f64) -> Result<f64> {
    check(f, alpha)?;
    let mesh = f.mesh();
    let n = mesh.len();
    let h = mesh.root().side() / n as f64;
    let origin = mesh.root().origin()[0];
    let prim = |u: f64| math::pow(u, alpha) / alpha;
    Ok(f.values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(j, &v)| {
            let a = origin + j as f64 * h;
            let b = a + h;
            let piece = if x <= a {
                prim(b - x) - prim(a - x)
            } else if x >= b {
                prim(x - a) - prim(x - b)
            } else {
                prim(x - a) + prim(b - x)
            };
            v * piece
        })
        .sum())
}
