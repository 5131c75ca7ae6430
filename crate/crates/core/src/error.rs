use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Dimension outside the supported set {1, 2}.
    Dimension(usize),
    /// Mesh depth outside the allowed range for the dimension.
    Depth { dim: usize, depth: u32, max: u32 },
    /// Root box side must be finite and positive.
    RootSide(f64),
    /// A level outside `[0, max]` was requested.
    LevelOutOfRange { level: u32, max: u32 },
    /// A grid id outside the family.
    GridOutOfRange { grid: usize, count: usize },
    /// Point outside the ambient box.
    OutsideAmbient,
    /// Cell data length does not match the mesh.
    CellCount { expected: usize, got: usize },
    /// Two inputs live on different meshes.
    MeshMismatch,
    /// Exponent constraints violated.
    Exponents(&'static str),
    /// A weight cell is not strictly positive (or not finite).
    NonPositiveWeight { cell: usize },
    /// The measure of the region is zero.
    DegenerateMeasure,
    /// Operation only implemented in one dimension.
    UnsupportedDimension { op: &'static str, dim: usize },
    /// A sparse family mixes cubes from several grids.
    MixedGrids,
    /// Generic invalid argument.
    Invalid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(n) => write!(f, "dimension {n} not supported (expected 1 or 2)"),
            Error::Depth { dim, depth, max } => {
                write!(f, "depth {depth} out of range for n={dim} (max {max})")
            }
            Error::RootSide(s) => write!(f, "root side {s} must be finite and positive"),
            Error::LevelOutOfRange { level, max } => {
                write!(f, "level {level} out of range [0, {max}]")
            }
            Error::GridOutOfRange { grid, count } => {
                write!(f, "grid {grid} out of range (family has {count} grids)")
            }
            Error::OutsideAmbient => write!(f, "point outside the ambient box"),
            Error::CellCount { expected, got } => {
                write!(f, "expected {expected} cell values, got {got}")
            }
            Error::MeshMismatch => write!(f, "inputs are defined on different meshes"),
            Error::Exponents(msg) => write!(f, "invalid exponents: {msg}"),
            Error::NonPositiveWeight { cell } => {
                write!(f, "weight cell {cell} is not strictly positive")
            }
            Error::DegenerateMeasure => write!(f, "region has zero measure"),
            Error::UnsupportedDimension { op, dim } => {
                write!(f, "{op} is not available for n={dim}")
            }
            Error::MixedGrids => write!(f, "cubes come from more than one grid"),
            Error::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for Error {}
