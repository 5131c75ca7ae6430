//! Sparse families, stopping-cube selection and domination checks.
//!
//! Stopping thresholds are compared against the maximum of all ancestor
//! averages. For the Calderón–Zygmund construction the ancestors continue
//! below level 0 (coarser cubes of the same grid, with the function extended
//! by zero), so every selected cube satisfies `a^k < ⟨g⟩_Q ≤ 2^n a^k`,
//! including level-0 cubes. For operator selection each level-0 cube `Q₀`
//! carries its own threshold scale `⟨f⟩_{Q₀}/2^n`, which always selects `Q₀`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::dyadic::{DyadicCube, GridFunction, GridTree};
use crate::error::{Error, Result};
use crate::math;
use crate::operators::{
    commutator_1d, dyadic_commutator, dyadic_fractional_integral, riesz_potential_1d,
    sparse_fractional_integral,
};

/// A set of cubes of one grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseFamily {
    grid: usize,
    dim: usize,
    cubes: Vec<DyadicCube>,
}

impl SparseFamily {
    /// Sorts by `(level, coords)` and drops duplicates.
    pub fn new(grid: usize, dim: usize, mut cubes: Vec<DyadicCube>) -> Result<Self> {
        if cubes.iter().any(|c| c.grid != grid) {
            return Err(Error::MixedGrids);
        }
        if cubes.iter().any(|c| c.dim != dim) {
            return Err(Error::Invalid("cube dimension differs from the family"));
        }
        cubes.sort_by(|a, b| (a.level, a.coords).cmp(&(b.level, b.coords)));
        cubes.dedup();
        Ok(Self { grid, dim, cubes })
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cubes(&self) -> &[DyadicCube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn contains(&self, cube: &DyadicCube) -> bool {
        self.cubes.binary_search_by(|c| (c.level, c.coords).cmp(&(cube.level, cube.coords))).is_ok()
            && cube.grid == self.grid
    }
}

/// Carrier data for one cube of a certified family.
#[derive(Clone, Debug, PartialEq)]
pub struct Carrier {
    pub cube: DyadicCube,
    /// Indices (into the family) of the maximal selected strict descendants.
    pub children: Vec<usize>,
    /// `|E(Q)|/|Q|`, exact (dyadic volumes).
    pub density: f64,
    /// Cells whose centers lie in `E(Q)`.
    pub cells: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SparseViolation {
    /// A cell lies in two carriers.
    Overlap { cube: DyadicCube, cell: usize },
    /// `|E(Q)| < |Q|/2`.
    Density { cube: DyadicCube, density: f64 },
}

/// Result of [`certify_sparse`]: carriers for every cube and the first
/// violation, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseCertificate {
    pub carriers: Vec<Carrier>,
    pub violation: Option<SparseViolation>,
}

impl SparseCertificate {
    pub fn is_sparse(&self) -> bool {
        self.violation.is_none()
    }

    pub fn min_density(&self) -> f64 {
        self.carriers.iter().map(|c| c.density).fold(1.0, f64::min)
    }

    /// `σ(E(Q))` for carrier `i`, as `σ(Q)` minus the maximal descendants.
    pub fn carrier_measure(&self, i: usize, sigma: &GridFunction) -> f64 {
        let c = &self.carriers[i];
        let removed: f64 = c
            .children
            .iter()
            .map(|&j| sigma.integral_over(&self.carriers[j].cube.unit_box()))
            .sum();
        (sigma.integral_over(&c.cube.unit_box()) - removed).max(0.0)
    }
}

/// Computes the carriers `E(Q)` and checks disjointness (on cells) and the
/// half-density condition (on exact volumes).
pub fn certify_sparse(family: &SparseFamily, tree: &GridTree) -> Result<SparseCertificate> {
    if family.grid() != tree.grid() {
        return Err(Error::MixedGrids);
    }
    let index: BTreeMap<DyadicCube, usize> =
        family.cubes().iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); family.len()];
    for (i, cube) in family.cubes().iter().enumerate() {
        let mut up = cube.parent();
        while let Some(p) = up {
            if let Some(&j) = index.get(&p) {
                children[j].push(i);
                break;
            }
            up = p.parent();
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; tree.mesh().len()];
    let mut violation = None;
    let mut carriers = Vec::with_capacity(family.len());
    for (i, cube) in family.cubes().iter().enumerate() {
        let idx = tree
            .index_of(cube)
            .ok_or(Error::Invalid("family cube not in the grid tree"))?;
        let mut removed = vec![false; 0];
        let members = tree.members(cube.level, idx);
        if !children[i].is_empty() {
            removed = vec![false; members.len()];
            for &j in &children[i] {
                let c = &family.cubes()[j];
                let cb = c.unit_box();
                for (k, &cell) in members.iter().enumerate() {
                    let u = tree.mesh().cell_center_unit(cell as usize);
                    if cb.contains_point(&u[..cube.dim]) {
                        removed[k] = true;
                    }
                }
            }
        }
        let cells: Vec<u32> = members
            .iter()
            .enumerate()
            .filter(|(k, _)| removed.get(*k).map_or(true, |r| !r))
            .map(|(_, &c)| c)
            .collect();
        for &c in &cells {
            if owner[c as usize].is_some() && violation.is_none() {
                violation = Some(SparseViolation::Overlap { cube: *cube, cell: c as usize });
            }
            owner[c as usize] = Some(i);
        }
        let vol = cube.unit_volume();
        let kept = vol - children[i].iter().map(|&j| family.cubes()[j].unit_volume()).sum::<f64>();
        let density = kept / vol;
        if density < 0.5 && violation.is_none() {
            violation = Some(SparseViolation::Density { cube: *cube, density });
        }
        carriers.push(Carrier { cube: *cube, children: core::mem::take(&mut children[i]), density, cells });
    }
    Ok(SparseCertificate { carriers, violation })
}

/// The families `S_k` of the stopping construction.
#[derive(Clone, Debug, PartialEq)]
pub struct StoppingCubes {
    pub a: f64,
    pub grid: usize,
    pub dim: usize,
    /// `(k, S_k)` in increasing `k`; only non-empty `S_k` are kept.
    pub levels: Vec<(i32, Vec<DyadicCube>)>,
    /// `⟨g⟩_Q` for every selected cube, keyed like `levels`.
    pub averages: Vec<Vec<f64>>,
}

impl StoppingCubes {
    /// `S = ⋃_k S_k` as a family.
    pub fn union(&self) -> SparseFamily {
        let all = self.levels.iter().flat_map(|(_, s)| s.iter().copied()).collect();
        SparseFamily::new(self.grid, self.dim, all).expect("single-grid cubes")
    }

    /// Whether `a^k < ⟨g⟩_Q ≤ 2^n a^k` holds for every selected cube.
    pub fn brackets_hold(&self) -> bool {
        let top = (1u32 << self.dim) as f64;
        self.levels.iter().zip(&self.averages).all(|((k, _), avgs)| {
            let t = math::pow(self.a, *k as f64);
            avgs.iter().all(|&g| t < g && g <= top * t * (1.0 + 1e-12))
        })
    }
}

/// Smallest integer `k` with `c·a^k ≥ m` (for `m, c > 0`).
fn first_k(m: f64, c: f64, a: f64) -> i32 {
    let mut k = math::ceil(math::ln(m / c) / math::ln(a)) as i32;
    while c * math::pow(a, (k - 1) as f64) >= m {
        k -= 1;
    }
    while c * math::pow(a, k as f64) < m {
        k += 1;
    }
    k
}

/// Selects, for thresholds `scale·a^k`, the cubes `P` with
/// `ceiling(P) ≤ scale·a^k < ⟨g⟩_P`.
fn select(
    avgs: &[Vec<f64>],
    tree: &GridTree,
    roots: &[(f64, f64)],
    a: f64,
) -> BTreeMap<i32, Vec<(DyadicCube, f64)>> {
    let mut out: BTreeMap<i32, Vec<(DyadicCube, f64)>> = BTreeMap::new();
    // per cube: (running ancestor max, threshold scale)
    let mut state: Vec<(f64, f64)> = roots.to_vec();
    for level in 0..=tree.depth() {
        if level > 0 {
            state = (0..tree.cube_count(level))
                .map(|i| {
                    let p = tree.parent(level, i);
                    let (m, c) = state[p];
                    (m.max(avgs[level as usize - 1][p]), c)
                })
                .collect();
        }
        for (i, &(m, c)) in state.iter().enumerate() {
            let g = avgs[level as usize][i];
            if !(c > 0.0) || !(g > m) {
                continue;
            }
            let mut k = first_k(m.max(f64::MIN_POSITIVE), c, a);
            loop {
                let t = c * math::pow(a, k as f64);
                if !(t < g) {
                    break;
                }
                out.entry(k).or_default().push((tree.cube(level, i), g));
                k += 1;
            }
        }
    }
    out
}

fn check_nonnegative(g: &GridFunction) -> Result<()> {
    if g.values().iter().any(|&v| v < 0.0) {
        return Err(Error::Invalid("function must be non-negative"));
    }
    Ok(())
}

/// Maximal cubes with `⟨g⟩_Q > a^k` for every integer `k`.
pub fn cz_stopping_cubes(g: &GridFunction, tree: &GridTree, a: f64) -> Result<StoppingCubes> {
    check_nonnegative(g)?;
    let dim = g.dim();
    if !(a > (1u32 << dim) as f64) {
        return Err(Error::Invalid("stopping ratio must exceed 2^n"));
    }
    let avgs = tree.cube_averages(g)?;
    let empty = StoppingCubes { a, grid: tree.grid(), dim, levels: Vec::new(), averages: Vec::new() };
    if !(g.total_integral() > 0.0) {
        return Ok(empty);
    }
    let roots: Vec<(f64, f64)> = tree.virtual_ceiling(g)?.into_iter().map(|m| (m, 1.0)).collect();
    let picked = select(&avgs, tree, &roots, a);
    let mut levels = Vec::new();
    let mut averages = Vec::new();
    for (k, v) in picked {
        averages.push(v.iter().map(|x| x.1).collect());
        levels.push((k, v.into_iter().map(|x| x.0).collect()));
    }
    Ok(StoppingCubes { a, grid: tree.grid(), dim, levels, averages })
}

/// Sparse family for `I^D_α f`: stopping cubes with `a = 2^{n+1}` under
/// each level-0 cube `Q₀`, thresholds `⟨f⟩_{Q₀} 2^{−n} a^k`, `k ≥ 0`.
pub fn sparse_select_for_operator(f: &GridFunction, tree: &GridTree) -> Result<SparseFamily> {
    check_nonnegative(f)?;
    let dim = f.dim();
    let a = (1u32 << (dim + 1)) as f64;
    let avgs = tree.cube_averages(f)?;
    let top = (1u32 << dim) as f64;
    let roots: Vec<(f64, f64)> = avgs[0].iter().map(|&g| (g / top, g / top)).collect();
    let picked = select(&avgs, tree, &roots, a);
    let cubes = picked.into_values().flatten().map(|x| x.0).collect();
    SparseFamily::new(tree.grid(), dim, cubes)
}

/// Cellwise comparison `numerator ≤ C · denominator`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DominationReport {
    /// Largest `numerator/denominator` over cells with positive denominator.
    pub max_ratio: f64,
    /// Cells with a positive numerator but zero denominator.
    pub uncovered: usize,
    /// Cells with positive denominator.
    pub compared: usize,
    pub family_size: usize,
}

impl DominationReport {
    pub fn holds(&self) -> bool {
        self.uncovered == 0 && self.max_ratio.is_finite()
    }
}

fn compare(num: &[f64], den: &[f64], family_size: usize) -> DominationReport {
    let scale = num.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut r = DominationReport { max_ratio: 0.0, uncovered: 0, compared: 0, family_size };
    for (&a, &b) in num.iter().zip(den) {
        if b > 0.0 {
            r.max_ratio = r.max_ratio.max(a.abs() / b);
            r.compared += 1;
        } else if a.abs() > 1e-12 * scale {
            r.uncovered += 1;
        }
    }
    r
}

/// `I^D_α f ≤ C I^S_α f` with `S` from [`sparse_select_for_operator`].
pub fn verify_sparse_domination(f: &GridFunction, alpha: f64, tree: &GridTree) -> Result<DominationReport> {
    let family = sparse_select_for_operator(f, tree)?;
    let full = dyadic_fractional_integral(f, alpha, tree)?;
    let sparse = sparse_fractional_integral(f, alpha, tree, &family)?;
    Ok(compare(full.values.values(), sparse.values.values(), family.len()))
}

/// `I_α f ≤ C max_i I^{D_i}_α f` in one dimension.
pub fn verify_grid_domination(f: &GridFunction, alpha: f64, trees: &[GridTree]) -> Result<DominationReport> {
    let cont = riesz_potential_1d(f, alpha)?;
    let mut best = vec![0.0f64; f.mesh().len()];
    for tree in trees {
        let d = dyadic_fractional_integral(f, alpha, tree)?;
        for (m, &v) in best.iter_mut().zip(d.values.values()) {
            *m = m.max(v);
        }
    }
    Ok(compare(cont.values.values(), &best, trees.len()))
}

/// `|[b, I_α] f| ≤ C max_i C^{D_i}_b f` in one dimension.
pub fn verify_commutator_domination(
    b: &GridFunction,
    f: &GridFunction,
    alpha: f64,
    trees: &[GridTree],
) -> Result<DominationReport> {
    let cont = commutator_1d(b, f, alpha)?;
    let mut best = vec![0.0f64; f.mesh().len()];
    for tree in trees {
        let d = dyadic_commutator(b, f, alpha, tree)?;
        for (m, &v) in best.iter_mut().zip(d.values.values()) {
            *m = m.max(v);
        }
    }
    Ok(compare(cont.values.values(), &best, trees.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Mesh;

    fn tree1(k: u32) -> GridTree {
        GridTree::new(Mesh::unit(1, k).unwrap(), 0).unwrap()
    }

    #[test]
    fn root_only_is_sparse() {
        let t = tree1(4);
        let fam = SparseFamily::new(0, 1, vec![DyadicCube::new(0, 0, &[0])]).unwrap();
        let cert = certify_sparse(&fam, &t).unwrap();
        assert!(cert.is_sparse());
        assert_eq!(cert.carriers[0].cells.len(), 16);
    }

    #[test]
    fn both_children_rejected_one_child_accepted() {
        let t = tree1(4);
        let q = DyadicCube::new(0, 0, &[0]);
        let kids = q.children();
        let fam = SparseFamily::new(0, 1, vec![q, kids[0], kids[1]]).unwrap();
        let cert = certify_sparse(&fam, &t).unwrap();
        assert!(matches!(cert.violation, Some(SparseViolation::Density { density, .. }) if density == 0.0));
        let fam = SparseFamily::new(0, 1, vec![q, kids[1]]).unwrap();
        let cert = certify_sparse(&fam, &t).unwrap();
        assert!(cert.is_sparse());
        assert_eq!(cert.min_density(), 0.5);
    }

    #[test]
    fn mixed_grids_rejected() {
        let cubes = vec![DyadicCube::new(0, 1, &[0]), DyadicCube::new(1, 1, &[1])];
        assert_eq!(SparseFamily::new(0, 1, cubes), Err(Error::MixedGrids));
    }

    #[test]
    fn constant_selects_root_once() {
        let m = Mesh::unit(1, 5).unwrap();
        let t = GridTree::new(m, 0).unwrap();
        let f = GridFunction::constant(m, 1.0).unwrap();
        let fam = sparse_select_for_operator(&f, &t).unwrap();
        assert_eq!(fam.cubes(), &[DyadicCube::new(0, 0, &[0])]);
        let t3 = tree1(3);
        let f3 = GridFunction::constant(*t3.mesh(), 1.0).unwrap();
        let r = verify_sparse_domination(&f3, 0.5, &t3).unwrap();
        assert!((r.max_ratio - 2.560660171779821).abs() < 1e-9);
    }

    #[test]
    fn stopping_constant_function() {
        // g ≡ 5, a = 4: virtual parents of the root have averages 5/2, 5/4, ...
        let m = Mesh::unit(1, 4).unwrap();
        let t = GridTree::new(m, 0).unwrap();
        let g = GridFunction::constant(m, 5.0).unwrap();
        let s = cz_stopping_cubes(&g, &t, 4.0).unwrap();
        assert_eq!(s.levels.len(), 1);
        assert_eq!(s.levels[0].0, 1);
        assert_eq!(s.levels[0].1, vec![DyadicCube::new(0, 0, &[0])]);
        assert!(s.brackets_hold());
    }

    #[test]
    fn virtual_ancestors_keep_union_sparse() {
        // without coarse ancestors both the root and [0, 1/2) would be selected
        let m = Mesh::unit(1, 4).unwrap();
        let t = GridTree::new(m, 0).unwrap();
        let g = GridFunction::from_fn(m, |x| if x[0] < 0.75 { 1.1 } else { 0.0 }).unwrap();
        let s = cz_stopping_cubes(&g, &t, 4.0).unwrap();
        assert!(s.brackets_hold());
        assert!(certify_sparse(&s.union(), &t).unwrap().is_sparse());
    }
}
