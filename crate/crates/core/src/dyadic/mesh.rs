use alloc::vec;
use alloc::vec::Vec;

use super::geometry::{DyadicCube, RootBox, UnitBox, MAX_DIM};
use crate::error::{Error, Result};
use crate::math;

/// Maximum mesh depth per dimension.
pub const fn max_depth(dim: usize) -> u32 {
    if dim == 1 {
        12
    } else {
        8
    }
}

/// The finest dyadic mesh of a root box: `2^depth` cells per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mesh {
    root: RootBox,
    depth: u32,
}

impl Mesh {
    pub fn new(root: RootBox, depth: u32) -> Result<Self> {
        let max = max_depth(root.dim());
        if depth > max {
            return Err(Error::Depth { dim: root.dim(), depth, max });
        }
        Ok(Self { root, depth })
    }

    /// Mesh over `[0,1)^dim`.
    pub fn unit(dim: usize, depth: u32) -> Result<Self> {
        Self::new(RootBox::unit(dim)?, depth)
    }

    pub fn root(&self) -> &RootBox {
        &self.root
    }

    pub fn dim(&self) -> usize {
        self.root.dim()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn cells_per_axis(&self) -> usize {
        1 << self.depth
    }

    pub fn len(&self) -> usize {
        1 << (self.depth as usize * self.dim())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cell volume in actual units.
    pub fn cell_volume(&self) -> f64 {
        self.root.volume() * math::exp2i(-(self.depth as i32) * self.dim() as i32)
    }

    /// Cell side in unit coordinates.
    pub fn cell_unit_side(&self) -> f64 {
        math::exp2i(-(self.depth as i32))
    }

    /// Flat index of multi-index `i` (axis 0 fastest).
    pub fn index(&self, i: &[usize]) -> usize {
        if self.dim() == 1 {
            i[0]
        } else {
            i[0] + self.cells_per_axis() * i[1]
        }
    }

    pub fn multi_index(&self, idx: usize) -> [usize; MAX_DIM] {
        let n = self.cells_per_axis();
        if self.dim() == 1 {
            [idx, 0]
        } else {
            [idx % n, idx / n]
        }
    }

    pub fn cell_center_unit(&self, idx: usize) -> [f64; MAX_DIM] {
        let mi = self.multi_index(idx);
        let h = self.cell_unit_side();
        let mut c = [0.0; MAX_DIM];
        for d in 0..self.dim() {
            c[d] = (mi[d] as f64 + 0.5) * h;
        }
        c
    }

    pub fn cell_center(&self, idx: usize) -> [f64; MAX_DIM] {
        let u = self.cell_center_unit(idx);
        self.root.from_unit(&u[..self.dim()])
    }

    pub fn cell_unit_box(&self, idx: usize) -> UnitBox {
        let mi = self.multi_index(idx);
        let h = self.cell_unit_side();
        let mut b = UnitBox::root(self.dim());
        for d in 0..self.dim() {
            b.lo[d] = mi[d] as f64 * h;
            b.hi[d] = (mi[d] + 1) as f64 * h;
        }
        b
    }

    /// Cell containing a unit point inside the root box.
    pub fn cell_of_unit(&self, u: &[f64]) -> Option<usize> {
        let n = self.cells_per_axis();
        let mut mi = [0usize; MAX_DIM];
        for d in 0..self.dim() {
            if !(0.0..1.0).contains(&u[d]) {
                return None;
            }
            mi[d] = ((u[d] * n as f64) as usize).min(n - 1);
        }
        Some(self.index(&mi[..self.dim()]))
    }

    /// Cells overlapping `region` with their overlap as a fraction of a cell.
    pub fn overlaps(&self, region: &UnitBox) -> Vec<(usize, f64)> {
        let dim = self.dim();
        let n = self.cells_per_axis();
        let nf = n as f64;
        let mut axes: [Vec<(usize, f64)>; MAX_DIM] = [Vec::new(), Vec::new()];
        for (d, axis) in axes.iter_mut().enumerate().take(dim) {
            let a = (region.lo[d] * nf).clamp(0.0, nf);
            let b = (region.hi[d] * nf).clamp(0.0, nf);
            if !(b > a) {
                return Vec::new();
            }
            let first = math::floor(a) as usize;
            let last = (math::ceil(b) as usize).min(n);
            for i in first..last {
                let lo = a.max(i as f64);
                let hi = b.min((i + 1) as f64);
                if hi > lo {
                    axis.push((i, hi - lo));
                }
            }
        }
        if dim == 1 {
            core::mem::take(&mut axes[0])
        } else {
            let mut out = Vec::with_capacity(axes[0].len() * axes[1].len());
            for &(i1, w1) in &axes[1] {
                for &(i0, w0) in &axes[0] {
                    out.push((i0 + n * i1, w0 * w1));
                }
            }
            out
        }
    }
}

/// A piecewise-constant function on a [`Mesh`], extended by zero outside the
/// root box, with a cumulative table for exact box integrals.
#[derive(Clone, Debug)]
pub struct GridFunction {
    mesh: Mesh,
    cells: Vec<f64>,
    cumulative: Vec<f64>,
}

impl PartialEq for GridFunction {
    fn eq(&self, other: &Self) -> bool {
        self.mesh == other.mesh && self.cells == other.cells
    }
}

impl GridFunction {
    pub fn new(mesh: Mesh, cells: Vec<f64>) -> Result<Self> {
        if cells.len() != mesh.len() {
            return Err(Error::CellCount { expected: mesh.len(), got: cells.len() });
        }
        if cells.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("cell values must be finite"));
        }
        let cumulative = build_cumulative(&mesh, &cells);
        Ok(Self { mesh, cells, cumulative })
    }

    pub fn constant(mesh: Mesh, value: f64) -> Result<Self> {
        Self::new(mesh, vec![value; mesh.len()])
    }

    pub fn zeros(mesh: Mesh) -> Self {
        Self::new(mesh, vec![0.0; mesh.len()]).expect("zero cells are valid")
    }

    /// Samples `f` at cell centers (actual coordinates).
    pub fn from_fn<F: FnMut(&[f64]) -> f64>(mesh: Mesh, mut f: F) -> Result<Self> {
        let dim = mesh.dim();
        let cells = (0..mesh.len()).map(|i| f(&mesh.cell_center(i)[..dim])).collect();
        Self::new(mesh, cells)
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn depth(&self) -> u32 {
        self.mesh.depth()
    }

    pub fn values(&self) -> &[f64] {
        &self.cells
    }

    pub fn into_values(self) -> Vec<f64> {
        self.cells
    }

    pub fn map<F: FnMut(f64) -> f64>(&self, f: F) -> Result<Self> {
        Self::new(self.mesh, self.cells.iter().copied().map(f).collect())
    }

    pub fn zip_with<F: FnMut(f64, f64) -> f64>(&self, other: &Self, mut f: F) -> Result<Self> {
        if self.mesh != other.mesh {
            return Err(Error::MeshMismatch);
        }
        let cells = self.cells.iter().zip(&other.cells).map(|(&a, &b)| f(a, b)).collect();
        Self::new(self.mesh, cells)
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs).expect("abs of finite values is finite")
    }

    pub fn max_abs(&self) -> f64 {
        self.cells.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Integral over the whole root box.
    pub fn total_integral(&self) -> f64 {
        let n = self.mesh.cells_per_axis();
        let last = if self.dim() == 1 { n } else { (n + 1) * (n + 1) - 1 };
        self.cumulative[last] * self.mesh.cell_volume()
    }

    /// Exact integral of the piecewise-constant function over a unit-coordinate box.
    pub fn integral_over(&self, region: &UnitBox) -> f64 {
        if region.is_degenerate() {
            return 0.0;
        }
        let nf = self.mesh.cells_per_axis() as f64;
        let clamp = |x: f64| (x * nf).clamp(0.0, nf);
        let sum = if self.dim() == 1 {
            let a = clamp(region.lo[0]);
            let b = clamp(region.hi[0]);
            if b <= a {
                return 0.0;
            }
            self.prefix_1d(b) - self.prefix_1d(a)
        } else {
            let (a0, b0) = (clamp(region.lo[0]), clamp(region.hi[0]));
            let (a1, b1) = (clamp(region.lo[1]), clamp(region.hi[1]));
            if b0 <= a0 || b1 <= a1 {
                return 0.0;
            }
            self.prefix_2d(b0, b1) - self.prefix_2d(a0, b1) - self.prefix_2d(b0, a1)
                + self.prefix_2d(a0, a1)
        };
        sum * self.mesh.cell_volume()
    }

    /// Exact integral over the box `[lo, hi)` given in actual coordinates.
    pub fn box_integral(&self, lo: &[f64], hi: &[f64]) -> f64 {
        self.integral_over(&self.mesh.root().unit_box(lo, hi))
    }

    pub fn cube_integral(&self, cube: &DyadicCube) -> f64 {
        self.integral_over(&cube.unit_box())
    }

    /// `⟨f⟩_Q`, the Lebesgue average over the (full) cube.
    pub fn cube_average(&self, cube: &DyadicCube) -> f64 {
        self.cube_integral(cube) / (cube.unit_volume() * self.mesh.root().volume())
    }

    /// Integral of `f` over cells given as `(index, fraction)` pairs.
    pub fn integral_over_cells(&self, cells: &[(usize, f64)]) -> f64 {
        cells.iter().map(|&(i, w)| self.cells[i] * w).sum::<f64>() * self.mesh.cell_volume()
    }

    /// Cumulative sum in cell units at fractional position `p ∈ [0, N]`.
    fn prefix_1d(&self, p: f64) -> f64 {
        let n = self.mesh.cells_per_axis();
        let j = (math::floor(p) as usize).min(n - 1);
        let fr = p - j as f64;
        self.cumulative[j] + fr * self.cells[j]
    }

    fn prefix_2d(&self, p0: f64, p1: f64) -> f64 {
        let n = self.mesh.cells_per_axis();
        let stride = n + 1;
        let j0 = (math::floor(p0) as usize).min(n - 1);
        let j1 = (math::floor(p1) as usize).min(n - 1);
        let f0 = p0 - j0 as f64;
        let f1 = p1 - j1 as f64;
        let s = |a: usize, b: usize| self.cumulative[a + stride * b];
        let base = s(j0, j1);
        // partial column / row strips and the partial corner cell
        let col = s(j0 + 1, j1) - base;
        let row = s(j0, j1 + 1) - base;
        base + f0 * col + f1 * row + f0 * f1 * self.cells[j0 + n * j1]
    }
}

fn build_cumulative(mesh: &Mesh, cells: &[f64]) -> Vec<f64> {
    let n = mesh.cells_per_axis();
    if mesh.dim() == 1 {
        let mut c = Vec::with_capacity(n + 1);
        c.push(0.0);
        let mut acc = 0.0;
        for &v in cells {
            acc += v;
            c.push(acc);
        }
        c
    } else {
        let stride = n + 1;
        let mut c = vec![0.0; stride * stride];
        for i1 in 0..n {
            let mut row = 0.0;
            for i0 in 0..n {
                row += cells[i0 + n * i1];
                c[(i0 + 1) + stride * (i1 + 1)] = c[(i0 + 1) + stride * i1] + row;
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_integral(f: &GridFunction, region: &UnitBox) -> f64 {
        // naive overlap loop
        let mesh = f.mesh();
        let mut s = 0.0;
        for i in 0..mesh.len() {
            let c = mesh.cell_unit_box(i).intersect(region);
            if !c.is_degenerate() {
                s += f.values()[i] * c.unit_volume();
            }
        }
        s * mesh.root().volume()
    }

    #[test]
    fn constant_half_box() {
        let m = Mesh::unit(1, 6).unwrap();
        let f = GridFunction::constant(m, 1.0).unwrap();
        assert!((f.box_integral(&[0.25], &[0.75]) - 0.5).abs() < 1e-15);
        assert!((f.box_integral(&[1.0 / 3.0], &[1.0]) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(f.box_integral(&[0.3], &[0.3]), 0.0);
        assert!((f.total_integral() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_cell_overlap() {
        let k = 6;
        let m = Mesh::unit(1, k).unwrap();
        let mut cells = vec![0.0; m.len()];
        cells[0] = 1.0;
        let f = GridFunction::new(m, cells).unwrap();
        let h = math::exp2i(-(k as i32));
        let v = f.box_integral(&[h / 2.0], &[1.0]);
        assert!((v - h / 2.0).abs() < 1e-15);
        let region = UnitBox::new(&[h / 2.0], &[1.0]);
        assert!((v - direct_integral(&f, &region)).abs() < 1e-15);
    }

    #[test]
    fn box_matches_direct_two_dim() {
        let m = Mesh::unit(2, 4).unwrap();
        let f = GridFunction::from_fn(m, |x| 1.0 + x[0] * 3.0 - x[1] * x[1]).unwrap();
        let boxes = [
            UnitBox::new(&[0.1, 0.2], &[0.77, 0.9]),
            UnitBox::new(&[-0.5, 1.0 / 3.0], &[0.4, 1.7]),
            UnitBox::new(&[0.0, 0.0], &[1.0, 1.0]),
        ];
        for b in &boxes {
            assert!((f.integral_over(b) - direct_integral(&f, b)).abs() < 1e-13);
        }
    }

    #[test]
    fn overlaps_sum_to_volume() {
        let m = Mesh::unit(2, 3).unwrap();
        let region = UnitBox::new(&[0.1, 1.0 / 3.0], &[0.6, 0.95]);
        let total: f64 = m.overlaps(&region).iter().map(|&(_, w)| w).sum();
        let expected = region.unit_volume() / (m.cell_unit_side() * m.cell_unit_side());
        assert!((total - expected).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let m = Mesh::unit(1, 3).unwrap();
        assert!(matches!(GridFunction::new(m, vec![0.0; 3]), Err(Error::CellCount { .. })));
        assert!(Mesh::unit(1, 13).is_err());
        assert!(Mesh::unit(2, 9).is_err());
        assert!(Mesh::unit(3, 2).is_err());
    }
}
