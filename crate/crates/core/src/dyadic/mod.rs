//! Dyadic cubes, the shifted grid family, mesh functions and per-grid trees.

mod geometry;
mod mesh;
mod tree;

pub use geometry::{
    cube_containing_unit, CubeBounds, DyadicCube, DyadicGridFamily, RootBox, UnitBox, MAX_DIM,
};
pub use mesh::{max_depth, GridFunction, Mesh};
pub use tree::GridTree;
