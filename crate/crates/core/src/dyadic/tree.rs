use alloc::vec;
use alloc::vec::Vec;

use super::geometry::{axis_range, parent_coord, shift_num, DyadicCube, UnitBox, MAX_DIM};
use super::mesh::{GridFunction, Mesh};
use crate::error::{Error, Result};
use crate::math;

/// One level of a [`GridTree`]: the cubes meeting the root box, the cube that
/// holds each cell center, and the inverse (members in CSR form).
#[derive(Clone, Debug)]
struct TreeLevel {
    m_lo: [i64; MAX_DIM],
    extent: [usize; MAX_DIM],
    cell_cube: Vec<u32>,
    start: Vec<u32>,
    members: Vec<u32>,
    parent: Vec<u32>,
}

/// The cubes of one grid at levels `0..=depth` that meet the root box, indexed
/// against the mesh cells by center membership.
///
/// Cell centers never lie on a cube boundary (they are dyadic rationals with
/// an odd numerator, while shifted boundaries are not dyadic), so membership
/// is unambiguous and nested across levels.
#[derive(Clone, Debug)]
pub struct GridTree {
    mesh: Mesh,
    grid: usize,
    levels: Vec<TreeLevel>,
}

impl GridTree {
    pub fn new(mesh: Mesh, grid: usize) -> Result<Self> {
        let dim = mesh.dim();
        let count = 1usize << dim;
        if grid >= count {
            return Err(Error::GridOutOfRange { grid, count });
        }
        let depth = mesh.depth();
        let n = mesh.cells_per_axis();
        let mut levels: Vec<TreeLevel> = Vec::with_capacity(depth as usize + 1);
        for level in 0..=depth {
            let mut m_lo = [0i64; MAX_DIM];
            let mut extent = [1usize; MAX_DIM];
            // per-axis cube coordinate of each cell index
            let mut axis_cube: [Vec<u32>; MAX_DIM] = [Vec::new(), Vec::new()];
            for d in 0..dim {
                let (lo, hi) = axis_range(grid, d, level, 0, 1);
                m_lo[d] = lo;
                extent[d] = (hi - lo + 1) as usize;
                let e = shift_num(grid, d, level as i32);
                let den = 3i64 << (depth + 1);
                axis_cube[d] = (0..n as i64)
                    .map(|i| {
                        let num = 3 * (2 * i + 1) * (1i64 << level) - e * (1i64 << (depth + 1));
                        (math::div_floor(num, den) - lo) as u32
                    })
                    .collect();
            }
            let cubes = extent[..dim].iter().product::<usize>();
            let cell_cube: Vec<u32> = (0..mesh.len())
                .map(|idx| {
                    let mi = mesh.multi_index(idx);
                    if dim == 1 {
                        axis_cube[0][mi[0]]
                    } else {
                        axis_cube[0][mi[0]] + extent[0] as u32 * axis_cube[1][mi[1]]
                    }
                })
                .collect();
            let mut start = vec![0u32; cubes + 1];
            for &c in &cell_cube {
                start[c as usize + 1] += 1;
            }
            for i in 0..cubes {
                start[i + 1] += start[i];
            }
            let mut fill = start.clone();
            let mut members = vec![0u32; mesh.len()];
            for (cell, &c) in cell_cube.iter().enumerate() {
                members[fill[c as usize] as usize] = cell as u32;
                fill[c as usize] += 1;
            }
            let parent = if level == 0 {
                Vec::new()
            } else {
                let up = &levels[level as usize - 1];
                (0..cubes)
                    .map(|c| {
                        let coords = coords_of(&m_lo, &extent, dim, c);
                        let mut pc = [0i64; MAX_DIM];
                        for d in 0..dim {
                            pc[d] = parent_coord(grid, d, level as i32, coords[d]);
                        }
                        index_of(&up.m_lo, &up.extent, dim, &pc).unwrap_or(u32::MAX as usize) as u32
                    })
                    .collect()
            };
            levels.push(TreeLevel { m_lo, extent, cell_cube, start, members, parent });
        }
        Ok(Self { mesh, grid, levels })
    }

    /// One tree per grid of the family.
    pub fn family(mesh: Mesh) -> Vec<GridTree> {
        (0..1usize << mesh.dim())
            .map(|g| GridTree::new(mesh, g).expect("grid id in range"))
            .collect()
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn depth(&self) -> u32 {
        self.mesh.depth()
    }

    pub fn cube_count(&self, level: u32) -> usize {
        self.levels[level as usize].start.len() - 1
    }

    pub fn cube(&self, level: u32, idx: usize) -> DyadicCube {
        let l = &self.levels[level as usize];
        let c = coords_of(&l.m_lo, &l.extent, self.dim(), idx);
        DyadicCube::new(self.grid, level, &c[..self.dim()])
    }

    pub fn index_of(&self, cube: &DyadicCube) -> Option<usize> {
        if cube.grid != self.grid || cube.level > self.depth() || cube.dim != self.dim() {
            return None;
        }
        let l = &self.levels[cube.level as usize];
        index_of(&l.m_lo, &l.extent, self.dim(), &cube.coords)
    }

    /// Cells whose centers lie in the cube.
    pub fn members(&self, level: u32, idx: usize) -> &[u32] {
        let l = &self.levels[level as usize];
        &l.members[l.start[idx] as usize..l.start[idx + 1] as usize]
    }

    /// Index of the level-`level` cube containing the center of `cell`.
    #[inline]
    pub fn containing(&self, level: u32, cell: usize) -> usize {
        self.levels[level as usize].cell_cube[cell] as usize
    }

    /// Parent index at `level - 1` (level must be positive).
    pub fn parent(&self, level: u32, idx: usize) -> usize {
        self.levels[level as usize].parent[idx] as usize
    }

    /// Children indices at `level + 1`.
    pub fn children(&self, level: u32, idx: usize) -> Vec<usize> {
        self.cube(level, idx)
            .children()
            .iter()
            .filter_map(|c| self.index_of(c))
            .collect()
    }

    pub fn unit_box(&self, level: u32, idx: usize) -> UnitBox {
        self.cube(level, idx).unit_box()
    }

    /// Actual volume of a level-`level` cube.
    pub fn cube_volume(&self, level: u32) -> f64 {
        self.mesh.root().volume() * math::exp2i(-(level as i32) * self.dim() as i32)
    }

    /// Actual side of a level-`level` cube.
    pub fn cube_side(&self, level: u32) -> f64 {
        self.mesh.root().side() * math::exp2i(-(level as i32))
    }

    /// Integral of `f` over every cube, per level.
    pub fn cube_integrals(&self, f: &GridFunction) -> Result<Vec<Vec<f64>>> {
        if f.mesh() != &self.mesh {
            return Err(Error::MeshMismatch);
        }
        Ok((0..=self.depth())
            .map(|level| {
                (0..self.cube_count(level))
                    .map(|i| f.integral_over(&self.unit_box(level, i)))
                    .collect()
            })
            .collect())
    }

    /// Lebesgue averages `⟨f⟩_Q` for every cube, per level.
    pub fn cube_averages(&self, f: &GridFunction) -> Result<Vec<Vec<f64>>> {
        let mut ints = self.cube_integrals(f)?;
        for (level, row) in ints.iter_mut().enumerate() {
            let vol = self.cube_volume(level as u32);
            for v in row.iter_mut() {
                *v /= vol;
            }
        }
        Ok(ints)
    }

    /// Maximum average over the virtual ancestors (levels below zero) of each
    /// level-0 cube, with the function extended by zero outside the root box.
    pub fn virtual_ceiling(&self, f: &GridFunction) -> Result<Vec<f64>> {
        if f.mesh() != &self.mesh {
            return Err(Error::MeshMismatch);
        }
        let dim = self.dim();
        let root_vol = self.mesh.root().volume();
        let total = f.total_integral();
        Ok((0..self.cube_count(0))
            .map(|i| {
                let mut coords = self.cube(0, i).coords;
                let mut best: f64 = 0.0;
                let mut level: i32 = 0;
                loop {
                    let mut pc = [0i64; MAX_DIM];
                    for d in 0..dim {
                        pc[d] = parent_coord(self.grid, d, level, coords[d]);
                    }
                    level -= 1;
                    coords = pc;
                    let side = math::exp2i(-level);
                    let mut b = UnitBox::root(dim);
                    for d in 0..dim {
                        let e = shift_num(self.grid, d, level);
                        b.lo[d] = (3 * coords[d] + e) as f64 / 3.0 * side;
                        b.hi[d] = b.lo[d] + side;
                    }
                    let vol = math::pow(side, dim as f64) * root_vol;
                    let integral = f.integral_over(&b);
                    best = best.max(integral / vol);
                    let covers_root = (0..dim).all(|d| b.lo[d] <= 0.0 && b.hi[d] >= 1.0);
                    if (covers_root && (integral - total).abs() <= 1e-12 * total.abs())
                        || level < -64
                    {
                        break;
                    }
                }
                best
            })
            .collect())
    }
}

fn coords_of(m_lo: &[i64; MAX_DIM], extent: &[usize; MAX_DIM], dim: usize, idx: usize) -> [i64; MAX_DIM] {
    let mut c = [0i64; MAX_DIM];
    if dim == 1 {
        c[0] = m_lo[0] + idx as i64;
    } else {
        c[0] = m_lo[0] + (idx % extent[0]) as i64;
        c[1] = m_lo[1] + (idx / extent[0]) as i64;
    }
    c
}

fn index_of(m_lo: &[i64; MAX_DIM], extent: &[usize; MAX_DIM], dim: usize, c: &[i64; MAX_DIM]) -> Option<usize> {
    let mut off = [0usize; MAX_DIM];
    for d in 0..dim {
        let o = c[d] - m_lo[d];
        if o < 0 || o as usize >= extent[d] {
            return None;
        }
        off[d] = o as usize;
    }
    Some(if dim == 1 { off[0] } else { off[0] + extent[0] * off[1] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_match_center_membership() {
        for dim in 1..=2 {
            let mesh = Mesh::unit(dim, 4).unwrap();
            for tree in GridTree::family(mesh) {
                for level in 0..=4 {
                    let mut seen = vec![false; mesh.len()];
                    for c in 0..tree.cube_count(level) {
                        let b = tree.unit_box(level, c);
                        for &cell in tree.members(level, c) {
                            let u = mesh.cell_center_unit(cell as usize);
                            assert!(b.contains_point(&u[..dim]));
                            assert!(!seen[cell as usize]);
                            seen[cell as usize] = true;
                        }
                    }
                    assert!(seen.iter().all(|&s| s));
                }
            }
        }
    }

    #[test]
    fn parents_contain_children() {
        let mesh = Mesh::unit(2, 4).unwrap();
        for tree in GridTree::family(mesh) {
            for level in 1..=4 {
                for c in 0..tree.cube_count(level) {
                    let p = tree.parent(level, c);
                    assert!(tree.cube(level, c).is_subset_of(&tree.cube(level - 1, p)));
                    for &cell in tree.members(level, c) {
                        assert_eq!(tree.containing(level - 1, cell as usize), p);
                    }
                }
            }
        }
    }

    #[test]
    fn unshifted_virtual_ceiling_is_scaled_total() {
        let mesh = Mesh::unit(1, 4).unwrap();
        let f = GridFunction::constant(mesh, 3.0).unwrap();
        let tree = GridTree::new(mesh, 0).unwrap();
        let ceil = tree.virtual_ceiling(&f).unwrap();
        assert_eq!(ceil.len(), 1);
        assert!((ceil[0] - 1.5).abs() < 1e-14);
    }
}
