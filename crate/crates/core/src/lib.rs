//! Dyadic-grid and sparse-operator machinery for fractional integrals.
//!
//! Everything here works on piecewise-constant functions over the finest
//! dyadic mesh of a root box in one or two dimensions:
//!
//! * [`dyadic`]: cubes, the shifted grid family, mesh functions with exact
//!   box integration, and per-grid cube trees.
//! * [`weights`]: exponent triples, weights and Muckenhoupt-type
//!   characteristics evaluated over a finite cube battery.
//! * [`orlicz`]: Young functions, Luxemburg and Amemiya norms.
//! * [`operators`]: Riesz potentials, dyadic/sparse fractional integrals,
//!   fractional maximal operators, commutators and BMO norms.
//! * [`sparse`]: stopping-cube selection and sparsity certificates.
//! * [`verify`]: per-case evaluation of the weighted inequalities.
//!
//! The crate is `no_std` and only needs `alloc`; IO lives in the companion
//! `sparsefrac` crate.
#![no_std]

extern crate alloc;

pub mod dyadic;
pub mod error;
pub mod functions;
pub(crate) mod math;
pub mod operators;
pub mod orlicz;
pub mod sparse;
pub mod verify;
pub mod weights;

pub use dyadic::{
    CubeBounds, DyadicCube, DyadicGridFamily, GridFunction, GridTree, Mesh, RootBox, UnitBox,
};
pub use error::{Error, Result};
pub use operators::OperatorOutput;
pub use orlicz::{DiscreteMeasure, YoungFunction};
pub use sparse::{SparseCertificate, SparseFamily};
pub use weights::{CubeBattery, ExponentTriple, Weight};
