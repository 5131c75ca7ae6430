use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::math;

/// Largest supported dimension.
pub const MAX_DIM: usize = 2;

/// Axis-aligned box `origin + [0, side)^n` carrying all data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootBox {
    origin: [f64; MAX_DIM],
    side: f64,
    dim: usize,
}

impl RootBox {
    pub fn new(origin: &[f64], side: f64) -> Result<Self> {
        let dim = origin.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Dimension(dim));
        }
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::RootSide(side));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::Invalid("root origin must be finite"));
        }
        let mut o = [0.0; MAX_DIM];
        o[..dim].copy_from_slice(origin);
        Ok(Self { origin: o, side, dim })
    }

    /// `[0, 1)^dim`.
    pub fn unit(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Dimension(dim));
        }
        Self::new(&[0.0; MAX_DIM][..dim], 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin[..self.dim]
    }

    pub fn volume(&self) -> f64 {
        math::pow(self.side, self.dim as f64)
    }

    /// Maps a point to unit coordinates (root box becomes `[0,1)^n`).
    pub fn to_unit(&self, x: &[f64]) -> [f64; MAX_DIM] {
        let mut u = [0.0; MAX_DIM];
        for d in 0..self.dim {
            u[d] = (x[d] - self.origin[d]) / self.side;
        }
        u
    }

    pub fn from_unit(&self, u: &[f64]) -> [f64; MAX_DIM] {
        let mut x = [0.0; MAX_DIM];
        for d in 0..self.dim {
            x[d] = self.origin[d] + u[d] * self.side;
        }
        x
    }

    /// Converts an actual-coordinate box into unit coordinates.
    pub fn unit_box(&self, lo: &[f64], hi: &[f64]) -> UnitBox {
        let l = self.to_unit(lo);
        let h = self.to_unit(hi);
        UnitBox::new(&l[..self.dim], &h[..self.dim])
    }
}

/// Half-open box `[lo, hi)` in unit coordinates of a root box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitBox {
    pub lo: [f64; MAX_DIM],
    pub hi: [f64; MAX_DIM],
    pub dim: usize,
}

impl UnitBox {
    pub fn new(lo: &[f64], hi: &[f64]) -> Self {
        let dim = lo.len();
        let mut l = [0.0; MAX_DIM];
        let mut h = [0.0; MAX_DIM];
        l[..dim].copy_from_slice(lo);
        h[..dim].copy_from_slice(&hi[..dim]);
        Self { lo: l, hi: h, dim }
    }

    /// The root box itself.
    pub fn root(dim: usize) -> Self {
        Self::new(&[0.0; MAX_DIM][..dim], &[1.0; MAX_DIM][..dim])
    }

    pub fn is_degenerate(&self) -> bool {
        (0..self.dim).any(|d| !(self.hi[d] > self.lo[d]))
    }

    /// Volume in unit coordinates.
    pub fn unit_volume(&self) -> f64 {
        (0..self.dim).map(|d| (self.hi[d] - self.lo[d]).max(0.0)).product()
    }

    pub fn contains_point(&self, u: &[f64]) -> bool {
        (0..self.dim).all(|d| self.lo[d] <= u[d] && u[d] < self.hi[d])
    }

    pub fn intersect(&self, other: &UnitBox) -> UnitBox {
        let mut out = *self;
        for d in 0..self.dim {
            out.lo[d] = self.lo[d].max(other.lo[d]);
            out.hi[d] = self.hi[d].min(other.hi[d]);
        }
        out
    }
}

/// Shift numerator `3 * (-1)^level * t` for grid `grid` on `axis`: 0 for the
/// unshifted axis, ±1 for the one-third shift.
#[inline]
pub(crate) fn shift_num(grid: usize, axis: usize, level: i32) -> i64 {
    if (grid >> axis) & 1 == 1 {
        if level.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// Unit-coordinate lower corner of cube `m` at `level` (levels may be negative).
#[inline]
pub(crate) fn cube_lo_unit(grid: usize, axis: usize, level: i32, m: i64) -> f64 {
    let e = shift_num(grid, axis, level);
    (3 * m + e) as f64 / 3.0 * math::exp2i(-level)
}

/// Coordinates of the parent (level - 1) of a cube coordinate at `level`.
#[inline]
pub(crate) fn parent_coord(grid: usize, axis: usize, level: i32, m: i64) -> i64 {
    let e = shift_num(grid, axis, level);
    math::div_floor(2 * m + 1 + 2 * e, 4)
}

/// Cube coordinates at `level` whose cubes meet the unit interval
/// `[lo, hi)` with `lo`, `hi` integers.
pub(crate) fn axis_range(grid: usize, axis: usize, level: u32, lo: i64, hi: i64) -> (i64, i64) {
    let e = shift_num(grid, axis, level as i32);
    let scale = 1i64 << level;
    let m_min = math::div_floor(3 * lo * scale - e - 3, 3) + 1;
    let m_max = math::div_floor(3 * hi * scale - e - 1, 3);
    (m_min, m_max)
}

/// A cube of one of the shifted dyadic grids.
///
/// In unit coordinates the cube is `2^-level * ([0,1)^n + m + (-1)^level t)`
/// where `t` is the shift vector of `grid` (bit `d` set means `t_d = 1/3`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicCube {
    pub grid: usize,
    pub level: u32,
    pub coords: [i64; MAX_DIM],
    pub dim: usize,
}

/// Exact cube bounds: numerators over the common denominator `3 * 2^level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubeBounds {
    pub level: u32,
    pub lo: [i64; MAX_DIM],
    pub dim: usize,
}

impl CubeBounds {
    /// Numerators rescaled to denominator `3 * 2^level` with `level >= self.level`.
    fn at_level(&self, level: u32) -> ([i128; MAX_DIM], i128) {
        let scale = 1i128 << (level - self.level);
        let mut lo = [0i128; MAX_DIM];
        for d in 0..self.dim {
            lo[d] = self.lo[d] as i128 * scale;
        }
        (lo, 3 * scale)
    }

    /// `self ⊆ other`, exactly.
    pub fn is_subset_of(&self, other: &CubeBounds) -> bool {
        let l = self.level.max(other.level);
        let (a, wa) = self.at_level(l);
        let (b, wb) = other.at_level(l);
        (0..self.dim).all(|d| b[d] <= a[d] && a[d] + wa <= b[d] + wb)
    }

    pub fn intersects(&self, other: &CubeBounds) -> bool {
        let l = self.level.max(other.level);
        let (a, wa) = self.at_level(l);
        let (b, wb) = other.at_level(l);
        (0..self.dim).all(|d| a[d] < b[d] + wb && b[d] < a[d] + wa)
    }

    /// Whether the cube lies inside the closed unit root box.
    pub fn inside_root(&self) -> bool {
        let den = 3i128 << self.level;
        (0..self.dim).all(|d| {
            let lo = self.lo[d] as i128;
            lo >= 0 && lo + 3 <= den
        })
    }
}

impl DyadicCube {
    pub fn new(grid: usize, level: u32, coords: &[i64]) -> Self {
        let dim = coords.len();
        let mut c = [0i64; MAX_DIM];
        c[..dim].copy_from_slice(coords);
        Self { grid, level, coords: c, dim }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.dim]
    }

    pub fn bounds(&self) -> CubeBounds {
        let mut lo = [0i64; MAX_DIM];
        for d in 0..self.dim {
            lo[d] = 3 * self.coords[d] + shift_num(self.grid, d, self.level as i32);
        }
        CubeBounds { level: self.level, lo, dim: self.dim }
    }

    /// Side length in unit coordinates.
    pub fn unit_side(&self) -> f64 {
        math::exp2i(-(self.level as i32))
    }

    /// Volume in unit coordinates.
    pub fn unit_volume(&self) -> f64 {
        math::exp2i(-(self.level as i32) * self.dim as i32)
    }

    pub fn unit_box(&self) -> UnitBox {
        let mut b = UnitBox { lo: [0.0; MAX_DIM], hi: [0.0; MAX_DIM], dim: self.dim };
        let side = self.unit_side();
        for d in 0..self.dim {
            b.lo[d] = cube_lo_unit(self.grid, d, self.level as i32, self.coords[d]);
            b.hi[d] = b.lo[d] + side;
        }
        b
    }

    pub fn contains_unit_point(&self, u: &[f64]) -> bool {
        self.unit_box().contains_point(u)
    }

    pub fn parent(&self) -> Option<DyadicCube> {
        if self.level == 0 {
            return None;
        }
        let mut c = [0i64; MAX_DIM];
        for d in 0..self.dim {
            c[d] = parent_coord(self.grid, d, self.level as i32, self.coords[d]);
        }
        Some(DyadicCube { grid: self.grid, level: self.level - 1, coords: c, dim: self.dim })
    }

    /// The `2^n` children.
    pub fn children(&self) -> Vec<DyadicCube> {
        let child_level = self.level + 1;
        let mut axes: [[i64; 2]; MAX_DIM] = [[0; 2]; MAX_DIM];
        for (d, axis) in axes.iter_mut().enumerate().take(self.dim) {
            // the two child coordinates whose parent is this cube
            let base = 2 * self.coords[d] - 2;
            let mut found = 0;
            for cand in base..base + 6 {
                if parent_coord(self.grid, d, child_level as i32, cand) == self.coords[d] {
                    axis[found] = cand;
                    found += 1;
                    if found == 2 {
                        break;
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(1 << self.dim);
        for bits in 0..(1usize << self.dim) {
            let mut c = [0i64; MAX_DIM];
            for d in 0..self.dim {
                c[d] = axes[d][(bits >> d) & 1];
            }
            out.push(DyadicCube { grid: self.grid, level: child_level, coords: c, dim: self.dim });
        }
        out
    }

    /// Exact `self ⊆ other` (cubes of any grids).
    pub fn is_subset_of(&self, other: &DyadicCube) -> bool {
        self.bounds().is_subset_of(&other.bounds())
    }
}

/// Cube of `grid` at `level` containing the unit point `u` (half-open).
pub fn cube_containing_unit(grid: usize, level: u32, u: &[f64]) -> DyadicCube {
    let dim = u.len();
    let scale = math::exp2i(level as i32);
    let mut c = [0i64; MAX_DIM];
    for d in 0..dim {
        let e = shift_num(grid, d, level as i32) as f64;
        c[d] = math::floor((3.0 * scale * u[d] - e) / 3.0) as i64;
    }
    DyadicCube { grid, level, coords: c, dim }
}

/// The family of `2^n` shifted dyadic grids over a root box, materialised on
/// the ambient box (root enlarged by one root side per direction) for levels
/// `0..=depth`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyadicGridFamily {
    root: RootBox,
    depth: u32,
}

impl DyadicGridFamily {
    pub fn new(root: RootBox, depth: u32) -> Self {
        Self { root, depth }
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

    pub fn grid_count(&self) -> usize {
        1 << self.dim()
    }

    /// Shift vector of a grid (unit coordinates).
    pub fn shift(&self, grid: usize) -> [f64; MAX_DIM] {
        let mut t = [0.0; MAX_DIM];
        for (d, td) in t.iter_mut().enumerate().take(self.dim()) {
            if (grid >> d) & 1 == 1 {
                *td = 1.0 / 3.0;
            }
        }
        t
    }

    /// Ambient box `[-1, 2)^n` in unit coordinates.
    pub fn ambient(&self) -> UnitBox {
        let d = self.dim();
        UnitBox::new(&[-1.0; MAX_DIM][..d], &[2.0; MAX_DIM][..d])
    }

    fn check_grid(&self, grid: usize) -> Result<()> {
        if grid >= self.grid_count() {
            return Err(Error::GridOutOfRange { grid, count: self.grid_count() });
        }
        Ok(())
    }

    fn check_level(&self, level: u32) -> Result<()> {
        if level > self.depth {
            return Err(Error::LevelOutOfRange { level, max: self.depth });
        }
        Ok(())
    }

    /// Volume of a level-`k` cube in actual units.
    pub fn cube_volume(&self, level: u32) -> f64 {
        self.root.volume() * math::exp2i(-(level as i32) * self.dim() as i32)
    }

    /// Side of a level-`k` cube in actual units.
    pub fn cube_side(&self, level: u32) -> f64 {
        self.root.side() * math::exp2i(-(level as i32))
    }

    /// Every cube of `grid` at the given levels meeting the ambient box.
    pub fn enumerate_cubes(
        &self,
        grid: usize,
        levels: RangeInclusive<u32>,
    ) -> Result<Vec<DyadicCube>> {
        self.check_grid(grid)?;
        self.check_level(*levels.start())?;
        self.check_level(*levels.end())?;
        let dim = self.dim();
        let mut out = Vec::new();
        for level in levels {
            let mut ranges = [(0i64, 0i64); MAX_DIM];
            for (d, r) in ranges.iter_mut().enumerate().take(dim) {
                *r = axis_range(grid, d, level, -1, 2);
            }
            if dim == 1 {
                for m in ranges[0].0..=ranges[0].1 {
                    out.push(DyadicCube::new(grid, level, &[m]));
                }
            } else {
                for m1 in ranges[1].0..=ranges[1].1 {
                    for m0 in ranges[0].0..=ranges[0].1 {
                        out.push(DyadicCube::new(grid, level, &[m0, m1]));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The cube of `grid` at `level` containing the point `x` (actual coordinates).
    pub fn containing_cube(&self, grid: usize, level: u32, x: &[f64]) -> Result<DyadicCube> {
        self.check_grid(grid)?;
        self.check_level(level)?;
        if x.len() != self.dim() {
            return Err(Error::Dimension(x.len()));
        }
        let u = self.root.to_unit(x);
        if !self.ambient().contains_point(&u[..self.dim()]) {
            return Err(Error::OutsideAmbient);
        }
        Ok(cube_containing_unit(grid, level, &u[..self.dim()]))
    }

    /// Actual-coordinate bounds of a cube.
    pub fn cube_box(&self, cube: &DyadicCube) -> ([f64; MAX_DIM], [f64; MAX_DIM]) {
        let b = cube.unit_box();
        (self.root.from_unit(&b.lo[..b.dim]), self.root.from_unit(&b.hi[..b.dim]))
    }

    /// Smallest cube over all grids containing the unit box `target`
    /// (levels are not capped by the mesh depth).
    pub fn covering_cube(&self, target: &UnitBox) -> Option<DyadicCube> {
        let dim = self.dim();
        let side = (0..dim).map(|d| target.hi[d] - target.lo[d]).fold(0.0, f64::max);
        if !(side > 0.0) {
            return None;
        }
        let finest = math::floor(-libm::log2(side)).clamp(0.0, 60.0) as u32;
        for level in (0..=finest).rev() {
            for grid in 0..self.grid_count() {
                let c = cube_containing_unit(grid, level, &target.lo[..dim]);
                let b = c.unit_box();
                if (0..dim).all(|d| b.lo[d] <= target.lo[d] && target.hi[d] <= b.hi[d]) {
                    return Some(c);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(dim: usize, depth: u32) -> DyadicGridFamily {
        DyadicGridFamily::new(RootBox::unit(dim).unwrap(), depth)
    }

    #[test]
    fn level_zero_unshifted_is_root() {
        let f = fam(1, 4);
        let cubes = f.enumerate_cubes(0, 0..=0).unwrap();
        let inside: Vec<_> = cubes.iter().filter(|c| c.bounds().inside_root()).collect();
        assert_eq!(inside.len(), 1);
        assert_eq!(inside[0].unit_box().lo[0], 0.0);
        assert_eq!(inside[0].unit_box().hi[0], 1.0);
    }

    #[test]
    fn level_two_quarters() {
        let f = fam(1, 4);
        let cubes: Vec<_> = f
            .enumerate_cubes(0, 2..=2)
            .unwrap()
            .into_iter()
            .filter(|c| c.bounds().inside_root())
            .collect();
        assert_eq!(cubes.len(), 4);
        for (i, c) in cubes.iter().enumerate() {
            assert_eq!(c.unit_box().lo[0], i as f64 / 4.0);
            assert_eq!(c.unit_side(), 0.25);
        }
    }

    #[test]
    fn two_dim_level_three_count() {
        let f = fam(2, 4);
        let cubes: Vec<_> = f
            .enumerate_cubes(0, 3..=3)
            .unwrap()
            .into_iter()
            .filter(|c| c.bounds().inside_root())
            .collect();
        assert_eq!(cubes.len(), 64);
        let area: f64 = cubes.iter().map(|c| c.unit_volume()).sum();
        assert!((area - 1.0).abs() < 1e-15);
    }

    #[test]
    fn containing_cube_half_open() {
        let f = fam(1, 4);
        let c = f.containing_cube(0, 1, &[0.49]).unwrap();
        assert_eq!(c.coords(), &[0]);
        let c = f.containing_cube(0, 1, &[0.5]).unwrap();
        assert_eq!(c.coords(), &[1]);
        let c = f.containing_cube(0, 3, &[0.0]).unwrap();
        assert_eq!(c.coords(), &[0]);
        assert_eq!(f.containing_cube(0, 1, &[2.5]), Err(Error::OutsideAmbient));
        assert!(matches!(f.containing_cube(0, 9, &[0.1]), Err(Error::LevelOutOfRange { .. })));
    }

    #[test]
    fn shifted_level_zero_cubes() {
        let f = fam(1, 4);
        let c = f.containing_cube(1, 0, &[0.5]).unwrap();
        let b = c.unit_box();
        assert!((b.lo[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((b.hi[0] - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn parent_children_roundtrip() {
        for grid in 0..4 {
            for level in 0..5u32 {
                for m0 in -3..5 {
                    for m1 in -2..3 {
                        let c = DyadicCube::new(grid, level, &[m0, m1]);
                        for ch in c.children() {
                            assert_eq!(ch.parent(), Some(c));
                            assert!(ch.is_subset_of(&c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn level_errors() {
        let f = fam(1, 3);
        assert!(f.enumerate_cubes(0, 0..=4).is_err());
        assert!(f.enumerate_cubes(2, 0..=1).is_err());
    }
}
