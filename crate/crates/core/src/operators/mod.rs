//! Fractional integrals, maximal operators, commutators and BMO norms on
//! mesh functions.
//!
//! Cube weights `|Q|^{α/n}` use actual side lengths, so `|Q|^{α/n} = ℓ(Q)^α`.
//! Sums over cubes run over levels `0..=K` of one grid; coarser cubes are
//! not included.

mod bmo;
mod commutator;
mod decomposition;
mod fractional;
pub mod naive;
mod riesz;

pub use bmo::{bmo_norm, BmoFunction};
pub use commutator::{commutator_1d, dyadic_commutator};
pub use decomposition::{inner_outer_split, level_set_cubes, tail_bound_ratio, InnerOuter, TailBound};
pub(crate) use fractional::cube_orlicz_norms;
pub use fractional::{
    dyadic_fractional_integral, fractional_maximal, fractional_maximal_dyadic,
    sparse_fractional_integral, weighted_orlicz_fractional_maximal,
};
pub use riesz::{riesz_point, riesz_potential_1d};

use crate::dyadic::GridFunction;

/// An operator applied to a mesh function, with what produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorOutput {
    pub values: GridFunction,
    pub operator: &'static str,
    pub alpha: f64,
    pub grid: Option<usize>,
    /// Number of (cube, cell) or (cell, cell) terms visited.
    pub cube_visits: u64,
}

impl OperatorOutput {
    pub fn values(&self) -> &GridFunction {
        &self.values
    }

    pub fn into_values(self) -> GridFunction {
        self.values
    }
}
