//! Exponent triples, weights, cube batteries and Muckenhoupt-type
//! characteristics.
//!
//! Every supremum over cubes is a maximum over a [`CubeBattery`]. The same
//! battery is used on both sides of a verified inequality.

use alloc::vec::Vec;

use crate::dyadic::{DyadicCube, GridFunction, Mesh, UnitBox, MAX_DIM};
use crate::error::{Error, Result};
use crate::math;

/// `(n, α, p, q)` with `1/p − 1/q = α/n`, plus the derived `p′`, `r`, `r′`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentTriple {
    n: usize,
    alpha: f64,
    p: f64,
    q: f64,
    p_prime: f64,
    r: f64,
    r_prime: f64,
}

impl ExponentTriple {
    /// Fractional exponents: `0 < α < n`, `1 ≤ p < n/α`.
    pub fn new(n: usize, alpha: f64, p: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Exponents("alpha must be positive"));
        }
        Self::build(n, alpha, p)
    }

    /// Exponents for maximal operators, allowing `α = 0` (then `q = p`).
    pub fn maximal(n: usize, alpha: f64, p: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::Exponents("alpha must be non-negative"));
        }
        Self::build(n, alpha, p)
    }

    fn build(n: usize, alpha: f64, p: f64) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::Dimension(n));
        }
        let nf = n as f64;
        if !(alpha < nf) || !alpha.is_finite() {
            return Err(Error::Exponents("alpha must be below the dimension"));
        }
        if !(p >= 1.0) || !(p * alpha < nf) {
            return Err(Error::Exponents("p must satisfy 1 <= p < n/alpha"));
        }
        let q = 1.0 / (1.0 / p - alpha / nf);
        let (p_prime, r, r_prime) = if p == 1.0 {
            (f64::INFINITY, 1.0, f64::INFINITY)
        } else {
            let pp = p / (p - 1.0);
            let r = 1.0 + q / pp;
            (pp, r, r / (r - 1.0))
        };
        Ok(Self { n, alpha, p, q, p_prime, r, r_prime })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `p′`; infinite when `p = 1`.
    pub fn p_prime(&self) -> f64 {
        self.p_prime
    }

    /// `r = 1 + q/p′` with `q/p′ = 0` when `p = 1`.
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn r_prime(&self) -> f64 {
        self.r_prime
    }

    pub fn q_over_p_prime(&self) -> f64 {
        if self.p == 1.0 {
            0.0
        } else {
            self.q / self.p_prime
        }
    }

    pub fn is_endpoint(&self) -> bool {
        self.p == 1.0
    }

    /// Characteristic power in the weak `(1, q)` bound: `1 + q`.
    pub fn weak_exponent(&self) -> f64 {
        1.0 + self.q
    }

    /// Characteristic power in the strong `(p, q)` bound: `1 + q/p′ + p′/p`.
    pub fn strong_exponent(&self) -> f64 {
        1.0 + self.q_over_p_prime() + self.p_prime / self.p
    }

    /// Characteristic power in the commutator bound.
    pub fn commutator_exponent(&self) -> f64 {
        self.p_prime.max(self.q) + self.strong_exponent()
    }

    /// Open range of `γ` for which `|x − x₀|^γ` is in `A_{p,q}`; the upper
    /// end is closed (`0`) when `p = 1`.
    pub fn power_weight_range(&self) -> (f64, f64) {
        let nf = self.n as f64;
        let hi = if self.p == 1.0 { 0.0 } else { nf / self.p_prime };
        (-nf / self.q, hi)
    }
}

/// The finite set of cubes over which characteristics are maximised: every
/// cube of every grid at levels `0..=k_char` contained in the closed root box.
#[derive(Clone, Debug)]
pub struct CubeBattery {
    mesh: Mesh,
    k_char: u32,
    cubes: Vec<DyadicCube>,
    boxes: Vec<UnitBox>,
    cells: Vec<Vec<(usize, f64)>>,
}

impl CubeBattery {
    pub fn new(mesh: Mesh, k_char: u32) -> Result<Self> {
        if k_char > mesh.depth() {
            return Err(Error::LevelOutOfRange { level: k_char, max: mesh.depth() });
        }
        let dim = mesh.dim();
        let mut cubes = Vec::new();
        for grid in 0..1usize << dim {
            for level in 0..=k_char {
                let side = 1i64 << level;
                let (lo0, hi0) = (-side, 2 * side);
                let (lo1, hi1) = if dim == 2 { (-side, 2 * side) } else { (0, 0) };
                for m1 in lo1..=hi1 {
                    for m0 in lo0..=hi0 {
                        let c = DyadicCube::new(grid, level, &[m0, m1][..dim]);
                        if c.bounds().inside_root() {
                            cubes.push(c);
                        }
                    }
                }
            }
        }
        let boxes: Vec<UnitBox> = cubes.iter().map(DyadicCube::unit_box).collect();
        let cells = boxes.iter().map(|b| mesh.overlaps(b)).collect();
        Ok(Self { mesh, k_char, cubes, boxes, cells })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn k_char(&self) -> u32 {
        self.k_char
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn cubes(&self) -> &[DyadicCube] {
        &self.cubes
    }

    pub fn boxes(&self) -> &[UnitBox] {
        &self.boxes
    }

    /// Actual volume of battery cube `i`.
    pub fn volume(&self, i: usize) -> f64 {
        self.cubes[i].unit_volume() * self.mesh.root().volume()
    }

    pub fn contains(&self, cube: &DyadicCube) -> bool {
        cube.level <= self.k_char && cube.dim == self.mesh.dim() && cube.bounds().inside_root()
    }

    /// Lebesgue averages of `f` over every battery cube, summed cell by cell
    /// so that small averages keep their relative accuracy.
    pub fn averages(&self, f: &GridFunction) -> Result<Vec<f64>> {
        if f.mesh() != &self.mesh {
            return Err(Error::MeshMismatch);
        }
        Ok((0..self.len()).map(|i| f.integral_over_cells(&self.cells[i]) / self.volume(i)).collect())
    }

    /// Largest value of `f` over the cells meeting each battery cube.
    pub fn cell_maxima(&self, f: &GridFunction) -> Result<Vec<f64>> {
        if f.mesh() != &self.mesh {
            return Err(Error::MeshMismatch);
        }
        let vals = f.values();
        Ok(self
            .cells
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .map(|&(i, _)| vals[i])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect())
    }
}

/// A positive weight bound to an exponent triple, with `v = w^q` and
/// `σ = w^{−p′}` cached (`σ` only when `p > 1`).
#[derive(Clone, Debug)]
pub struct Weight {
    base: GridFunction,
    exponents: ExponentTriple,
    v: GridFunction,
    sigma: Option<GridFunction>,
    w_p: GridFunction,
}

impl Weight {
    pub fn new(base: GridFunction, exponents: ExponentTriple) -> Result<Self> {
        check_positive(&base)?;
        if base.dim() != exponents.n() {
            return Err(Error::Exponents("weight and exponent dimensions differ"));
        }
        let q = exponents.q();
        let v = base.map(|x| math::pow(x, q))?;
        let sigma = if exponents.is_endpoint() {
            None
        } else {
            let pp = exponents.p_prime();
            Some(base.map(|x| math::pow(x, -pp))?)
        };
        let p = exponents.p();
        let w_p = base.map(|x| math::pow(x, p))?;
        Ok(Self { base, exponents, v, sigma, w_p })
    }

    /// A weight whose powers are supplied separately (for instance as exact
    /// cell averages of the continuous powers).
    pub fn from_powers(
        base: GridFunction,
        exponents: ExponentTriple,
        v: GridFunction,
        sigma: Option<GridFunction>,
        w_p: GridFunction,
    ) -> Result<Self> {
        if base.dim() != exponents.n() {
            return Err(Error::Exponents("weight and exponent dimensions differ"));
        }
        if sigma.is_some() == exponents.is_endpoint() {
            return Err(Error::Exponents("σ must be given exactly when p > 1"));
        }
        for g in [Some(&base), Some(&v), sigma.as_ref(), Some(&w_p)].into_iter().flatten() {
            if g.mesh() != base.mesh() {
                return Err(Error::MeshMismatch);
            }
            check_positive(g)?;
        }
        Ok(Self { base, exponents, v, sigma, w_p })
    }

    pub fn base(&self) -> &GridFunction {
        &self.base
    }

    pub fn exponents(&self) -> &ExponentTriple {
        &self.exponents
    }

    /// `v = w^q`.
    pub fn v(&self) -> &GridFunction {
        &self.v
    }

    /// `σ = w^{−p′}`; `None` when `p = 1`.
    pub fn sigma(&self) -> Option<&GridFunction> {
        self.sigma.as_ref()
    }

    /// `w^p`.
    pub fn w_p(&self) -> &GridFunction {
        &self.w_p
    }
}

fn check_positive(f: &GridFunction) -> Result<()> {
    match f.values().iter().position(|&x| !(x > 0.0)) {
        Some(cell) => Err(Error::NonPositiveWeight { cell }),
        None => Ok(()),
    }
}

/// Discretisation recipe for the test weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightSpec {
    Constant(f64),
    /// `|x − x₀|^γ` with `x₀` in unit coordinates of the root box.
    Power { x0: [f64; MAX_DIM], gamma: f64 },
    /// `low` on the left half of the root box (first axis), `high` on the right.
    Step { low: f64, high: f64 },
}

impl WeightSpec {
    /// Cell values: cell averages of `|x − x₀|^γ` for power weights
    /// (see [`power_cell_values`]), center samples otherwise.
    pub fn discretize(&self, mesh: Mesh) -> Result<GridFunction> {
        match *self {
            WeightSpec::Constant(c) => GridFunction::constant(mesh, c),
            WeightSpec::Step { low, high } => GridFunction::new(
                mesh,
                (0..mesh.len())
                    .map(|i| if mesh.cell_center_unit(i)[0] < 0.5 { low } else { high })
                    .collect(),
            ),
            WeightSpec::Power { x0, gamma } => power_cell_values(mesh, &x0, gamma),
        }
    }

    /// The weight with its powers. For power weights each power is
    /// discretised as the cell average of `|x − x₀|^{sγ}`; otherwise powers
    /// are taken cellwise.
    pub fn weight(&self, mesh: Mesh, exponents: ExponentTriple) -> Result<Weight> {
        match *self {
            WeightSpec::Power { x0, gamma } => {
                let power = |s: f64| power_cell_values(mesh, &x0, s * gamma);
                let sigma = if exponents.is_endpoint() {
                    None
                } else {
                    Some(power(-exponents.p_prime())?)
                };
                Weight::from_powers(power(1.0)?, exponents, power(exponents.q())?, sigma, power(exponents.p())?)
            }
            _ => Weight::new(self.discretize(mesh)?, exponents),
        }
    }
}

const GAUSS4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
];

/// Cell averages of `|x − x₀|^γ` (actual distance), `γ > −n`. Exact in 1D;
/// in 2D exact on cells whose closure contains `x₀` and 4×4 Gauss–Legendre
/// elsewhere.
pub fn power_cell_values(mesh: Mesh, x0: &[f64; MAX_DIM], gamma: f64) -> Result<GridFunction> {
    let dim = mesh.dim();
    if !(gamma > -(dim as f64)) {
        return Err(Error::Invalid("power weight exponent must exceed -n"));
    }
    let scale = math::pow(mesh.root().side(), gamma);
    let h = mesh.cell_unit_side();
    let cells = (0..mesh.len())
        .map(|i| {
            let b = mesh.cell_unit_box(i);
            let touches = (0..dim).all(|d| b.lo[d] <= x0[d] && x0[d] <= b.hi[d]);
            let v = if dim == 1 {
                let g1 = gamma + 1.0;
                let prim = |u: f64| if u < 0.0 { -math::pow(-u, g1) / g1 } else { math::pow(u, g1) / g1 };
                (prim(b.hi[0] - x0[0]) - prim(b.lo[0] - x0[0])) / h
            } else if touches {
                power_cell_average(&b, x0, gamma)
            } else {
                let c = mesh.cell_center_unit(i);
                let mut acc = 0.0;
                for &(s0, w0) in &GAUSS4 {
                    for &(s1, w1) in &GAUSS4 {
                        let dx = c[0] + 0.5 * h * s0 - x0[0];
                        let dy = c[1] + 0.5 * h * s1 - x0[1];
                        acc += w0 * w1 * math::pow(dx * dx + dy * dy, 0.5 * gamma);
                    }
                }
                0.25 * acc
            };
            v * scale
        })
        .collect();
    GridFunction::new(mesh, cells)
}

/// Exact average of `|x − x₀|^γ` over a box whose closure contains `x₀`.
pub fn power_cell_average(b: &UnitBox, x0: &[f64; MAX_DIM], gamma: f64) -> f64 {
    if b.dim == 1 {
        let (l, r) = (x0[0] - b.lo[0], b.hi[0] - x0[0]);
        (math::pow(r, gamma + 1.0) + math::pow(l, gamma + 1.0)) / ((gamma + 1.0) * (b.hi[0] - b.lo[0]))
    } else {
        let mut total = 0.0;
        for &a in &[x0[0] - b.lo[0], b.hi[0] - x0[0]] {
            for &c in &[x0[1] - b.lo[1], b.hi[1] - x0[1]] {
                total += corner_rect_integral(a, c, gamma);
            }
        }
        total / b.unit_volume()
    }
}

/// `∫∫_{[0,a]×[0,c]} |x|^γ dx` by integrating the radial part in closed form.
fn corner_rect_integral(a: f64, c: f64, gamma: f64) -> f64 {
    if !(a > 0.0 && c > 0.0) {
        return 0.0;
    }
    let g2 = gamma + 2.0;
    let split = math::atan2(c, a);
    let lower = |t: f64| math::pow(a / math::cos(t), g2) / g2;
    let upper = |t: f64| math::pow(c / math::sin(t), g2) / g2;
    let tol = 1e-12 * math::pow(a.max(c), g2);
    math::adaptive_simpson(&lower, 0.0, split, tol)
        + math::adaptive_simpson(&upper, split, core::f64::consts::FRAC_PI_2, tol)
}

/// `σ(region)` for a non-negative mesh function.
pub fn weighted_measure(sigma: &GridFunction, region: &UnitBox) -> f64 {
    sigma.integral_over(region)
}

/// `∫_Q f dσ / σ(Q)`.
pub fn weighted_average(f: &GridFunction, sigma: &GridFunction, region: &UnitBox) -> Result<f64> {
    let mass = weighted_measure(sigma, region);
    if !(mass > 0.0) {
        return Err(Error::DegenerateMeasure);
    }
    let product = f.zip_with(sigma, |a, b| a * b)?;
    Ok(product.integral_over(region) / mass)
}

/// `[w]_{A_{p,q}} = max_Q ⟨w^q⟩^{1/q} ⟨w^{−p′}⟩^{1/p′}` over the battery.
pub fn apq_characteristic(w: &Weight, battery: &CubeBattery) -> Result<f64> {
    let e = w.exponents();
    let sigma = w.sigma().ok_or(Error::Exponents("p = 1: use the A_{1,q} characteristic"))?;
    let av = battery.averages(w.v())?;
    let asg = battery.averages(sigma)?;
    let (iq, ipp) = (1.0 / e.q(), 1.0 / e.p_prime());
    Ok(av
        .iter()
        .zip(&asg)
        .map(|(&a, &b)| math::pow(a, iq) * math::pow(b, ipp))
        .fold(0.0, f64::max))
}

/// `[w]_{A_{1,q}} = max_Q ⟨w^q⟩^{1/q} max_{cells meeting Q} w^{−1}`.
pub fn a1q_characteristic(w: &Weight, battery: &CubeBattery) -> Result<f64> {
    let e = w.exponents();
    if !e.is_endpoint() {
        return Err(Error::Exponents("A_{1,q} needs p = 1"));
    }
    let av = battery.averages(w.v())?;
    let inv = w.base().map(|x| 1.0 / x)?;
    let mx = battery.cell_maxima(&inv)?;
    let iq = 1.0 / e.q();
    Ok(av.iter().zip(&mx).map(|(&a, &m)| math::pow(a, iq) * m).fold(0.0, f64::max))
}

/// `[σ]_{A_p} = max_Q ⟨σ⟩ ⟨σ^{1−p′}⟩^{p−1}`; `p = 1` gives `[σ]_{A_1}`.
pub fn ap_characteristic(sigma: &GridFunction, p: f64, battery: &CubeBattery) -> Result<f64> {
    check_positive(sigma)?;
    if !(p >= 1.0) {
        return Err(Error::Exponents("A_p needs p >= 1"));
    }
    if p == 1.0 {
        return a1_characteristic(sigma, battery);
    }
    let pp = p / (p - 1.0);
    let dual = sigma.map(|x| math::pow(x, 1.0 - pp))?;
    let a = battery.averages(sigma)?;
    let b = battery.averages(&dual)?;
    Ok(a.iter().zip(&b).map(|(&x, &y)| x * math::pow(y, p - 1.0)).fold(0.0, f64::max))
}

/// `[σ]_{A_1} = max_Q ⟨σ⟩ max_{cells meeting Q} σ^{−1}`.
pub fn a1_characteristic(sigma: &GridFunction, battery: &CubeBattery) -> Result<f64> {
    check_positive(sigma)?;
    let inv = sigma.map(|x| 1.0 / x)?;
    let a = battery.averages(sigma)?;
    let m = battery.cell_maxima(&inv)?;
    Ok(a.iter().zip(&m).map(|(&x, &y)| x * y).fold(0.0, f64::max))
}

/// Operational `A_∞` value: the `A_p` characteristic for the contextual `p`.
pub fn ainfty_characteristic(sigma: &GridFunction, context_p: f64, battery: &CubeBattery) -> Result<f64> {
    ap_characteristic(sigma, context_p, battery)
}

/// Upper end of the reverse-Hölder search.
pub const REVERSE_HOLDER_CAP: f64 = 64.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReverseHolder {
    pub s: f64,
    /// The inequality still held at [`REVERSE_HOLDER_CAP`].
    pub capped: bool,
}

impl ReverseHolder {
    /// `s′ = s/(s − 1)`.
    pub fn s_prime(&self) -> f64 {
        if self.s > 1.0 {
            self.s / (self.s - 1.0)
        } else {
            f64::INFINITY
        }
    }
}

/// Whether `(⨍_Q σ^s)^{1/s} ≤ 2 ⨍_Q σ` on every battery cube.
pub fn reverse_holder_holds(sigma: &GridFunction, s: f64, battery: &CubeBattery) -> Result<bool> {
    let top = sigma.max_abs();
    if !(top > 0.0) {
        return Err(Error::DegenerateMeasure);
    }
    let scaled = sigma.map(|x| x / top)?;
    let powered = scaled.map(|x| math::pow(x, s))?;
    let a = battery.averages(&scaled)?;
    let b = battery.averages(&powered)?;
    Ok(a.iter().zip(&b).all(|(&m1, &ms)| math::pow(ms, 1.0 / s) <= 2.0 * m1 * (1.0 + 1e-14)))
}

/// Largest `s ∈ [1, 64]` (bisection to `1e−6`) such that the factor-2 reverse
/// Hölder inequality holds on every battery cube.
pub fn reverse_holder_exponent(sigma: &GridFunction, battery: &CubeBattery) -> Result<ReverseHolder> {
    check_positive(sigma)?;
    if reverse_holder_holds(sigma, REVERSE_HOLDER_CAP, battery)? {
        return Ok(ReverseHolder { s: REVERSE_HOLDER_CAP, capped: true });
    }
    if !reverse_holder_holds(sigma, 1.0 + 1e-9, battery)? {
        return Ok(ReverseHolder { s: 1.0, capped: false });
    }
    let (mut lo, mut hi) = (1.0 + 1e-9, REVERSE_HOLDER_CAP);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if reverse_holder_holds(sigma, mid, battery)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ReverseHolder { s: lo, capped: false })
}

/// Both sides of the two `A_∞` subset estimates for `E ⊆ Q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubsetBounds {
    /// `(|E|/|Q|)^p`
    pub lhs1: f64,
    /// `[σ]_{A_p} σ(E)/σ(Q)`
    pub rhs1: f64,
    /// `σ(E)/σ(Q)`
    pub lhs2: f64,
    /// `2 (|E|/|Q|)^{1/s′}`
    pub rhs2: f64,
}

/// Evaluates the subset estimates for `E` (a set of mesh cells lying inside
/// `Q`) given the battery characteristic `[σ]_{A_p}` and reverse-Hölder `s`.
pub fn ainfty_subset_bounds_check(
    sigma: &GridFunction,
    cube: &DyadicCube,
    cells: &[usize],
    p: f64,
    ap: f64,
    rh: &ReverseHolder,
) -> Result<SubsetBounds> {
    let mesh = sigma.mesh();
    let b = cube.unit_box();
    for &c in cells {
        let cb = mesh.cell_unit_box(c);
        if (0..mesh.dim()).any(|d| cb.lo[d] < b.lo[d] || cb.hi[d] > b.hi[d]) {
            return Err(Error::Invalid("E must consist of cells inside Q"));
        }
    }
    let q_vol = cube.unit_volume() * mesh.root().volume();
    let e_vol = cells.len() as f64 * mesh.cell_volume();
    let sq = sigma.integral_over(&b);
    let se = cells.iter().map(|&c| sigma.values()[c]).sum::<f64>() * mesh.cell_volume();
    if cells.is_empty() {
        return Ok(SubsetBounds { lhs1: 0.0, rhs1: 0.0, lhs2: 0.0, rhs2: 0.0 });
    }
    let frac = e_vol / q_vol;
    let ratio = se / sq;
    let sp = rh.s_prime();
    Ok(SubsetBounds {
        lhs1: math::pow(frac, p),
        rhs1: ap * ratio,
        lhs2: ratio,
        rhs2: 2.0 * math::pow(frac, 1.0 / sp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mesh1(k: u32) -> Mesh {
        Mesh::unit(1, k).unwrap()
    }

    #[test]
    fn exponent_relations() {
        let e = ExponentTriple::new(1, 1.0 / 3.0, 2.0).unwrap();
        assert!((e.q() - 6.0).abs() < 1e-12);
        assert!((e.p_prime() - 2.0).abs() < 1e-15);
        assert!((e.r() - 4.0).abs() < 1e-12);
        assert!((e.r_prime() - 4.0 / 3.0).abs() < 1e-12);
        let e1 = ExponentTriple::new(1, 0.5, 1.0).unwrap();
        assert!((e1.q() - 2.0).abs() < 1e-12);
        assert_eq!(e1.r(), 1.0);
        assert_eq!(e1.q_over_p_prime(), 0.0);
        assert!(ExponentTriple::new(1, 0.5, 2.0).is_err());
        assert!(ExponentTriple::new(1, 0.0, 2.0).is_err());
        assert!(ExponentTriple::maximal(1, 0.0, 2.0).is_ok());
    }

    #[test]
    fn battery_cubes_inside_root() {
        let b = CubeBattery::new(mesh1(3), 3).unwrap();
        // unshifted: 1 + 2 + 4 + 8; shifted: 0 + 1 + 3 + 7
        assert_eq!(b.len(), 15 + 11);
        assert!(b.cubes().iter().all(|c| c.bounds().inside_root()));
    }

    #[test]
    fn constant_weight_characteristics_are_one() {
        let m = mesh1(6);
        let bat = CubeBattery::new(m, 6).unwrap();
        let e = ExponentTriple::new(1, 1.0 / 3.0, 2.0).unwrap();
        let w = Weight::new(GridFunction::constant(m, 2.5).unwrap(), e).unwrap();
        assert!((apq_characteristic(&w, &bat).unwrap() - 1.0).abs() < 1e-12);
        let one = GridFunction::constant(m, 1.0).unwrap();
        assert!((ap_characteristic(&one, 3.0, &bat).unwrap() - 1.0).abs() < 1e-12);
        assert!((a1_characteristic(&one, &bat).unwrap() - 1.0).abs() < 1e-12);
        let rh = reverse_holder_exponent(&one, &bat).unwrap();
        assert!(rh.capped);
    }

    #[test]
    fn singular_cell_average_1d() {
        let b = UnitBox::new(&[0.25], &[0.5]);
        let got = power_cell_average(&b, &[0.5, 0.0], -0.5);
        // ∫_0^{1/4} u^{-1/2} du / (1/4) = 2·(1/2)·4
        assert!((got - 4.0).abs() < 1e-12);
    }

    #[test]
    fn singular_cell_average_2d_matches_closed_form() {
        // γ = 0 gives 1; γ = 2 gives the second moment (a² + c²)/3 per corner box.
        let b = UnitBox::new(&[0.0, 0.0], &[0.5, 0.25]);
        let x0 = [0.0, 0.0];
        assert!((power_cell_average(&b, &x0, 0.0) - 1.0).abs() < 1e-10);
        let want = (0.25 + 0.0625) / 3.0;
        assert!((power_cell_average(&b, &x0, 2.0) - want).abs() < 1e-10);
        // centered point splits into four rectangles
        let b = UnitBox::new(&[0.0, 0.0], &[1.0, 1.0]);
        let got = power_cell_average(&b, &[0.5, 0.5], 2.0);
        assert!((got - 1.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn weighted_average_reductions() {
        let m = mesh1(5);
        let f = GridFunction::from_fn(m, |x| x[0] * x[0]).unwrap();
        let one = GridFunction::constant(m, 1.0).unwrap();
        let q = UnitBox::new(&[0.25], &[0.75]);
        let got = weighted_average(&f, &one, &q).unwrap();
        assert!((got - f.integral_over(&q) / 0.5).abs() < 1e-14);
        let sigma = WeightSpec::Power { x0: [0.5, 0.0], gamma: 0.7 }.discretize(m).unwrap();
        let inv = sigma.map(|x| 1.0 / x).unwrap();
        let got = weighted_average(&inv, &sigma, &q).unwrap();
        assert!((got - 0.5 / weighted_measure(&sigma, &q)).abs() < 1e-12);
    }

    #[test]
    fn identity_pair_holds() {
        let m = mesh1(8);
        let bat = CubeBattery::new(m, 6).unwrap();
        let e = ExponentTriple::new(1, 0.25, 1.5).unwrap();
        let base = WeightSpec::Power { x0: [1.0 / 3.0, 0.0], gamma: 0.2 }.discretize(m).unwrap();
        let w = Weight::new(base, e).unwrap();
        let apq = apq_characteristic(&w, &bat).unwrap();
        let ar = ap_characteristic(w.v(), e.r(), &bat).unwrap();
        let arp = ap_characteristic(w.sigma().unwrap(), e.r_prime(), &bat).unwrap();
        assert!((ar / math::pow(apq, e.q()) - 1.0).abs() < 1e-10);
        assert!((arp / math::pow(apq, e.p_prime()) - 1.0).abs() < 1e-10);
    }
}
