//! File formats for grid functions and sparse families.
//!
//! Text formats are line based with a magic first line and `key,value`
//! header lines; floats use 17 significant digits so that reading back is
//! exact.

use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};
use sparsefrac_core::{DyadicCube, GridFunction, Mesh, RootBox, SparseFamily};
use thiserror::Error;

const GRID_MAGIC: &str = "# sparsefrac grid-function v1";
const FAMILY_MAGIC: &str = "# sparsefrac sparse-family v1";
const BINARY_MAGIC: &[u8; 8] = b"SFGRIDF1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] sparsefrac_core::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// Float text with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn new(r: R) -> Self {
        Self { inner: r.lines(), line: 0 }
    }

    fn next_line(&mut self) -> Result<Option<String>, FormatError> {
        match self.inner.next() {
            None => Ok(None),
            Some(l) => {
                self.line += 1;
                Ok(Some(l?))
            }
        }
    }

    fn expect_line(&mut self) -> Result<String, FormatError> {
        self.next_line()?.ok_or_else(|| parse_err(self.line + 1, "unexpected end of input"))
    }

    fn header(&mut self, key: &str) -> Result<Vec<String>, FormatError> {
        let l = self.expect_line()?;
        let mut parts = l.split(',').map(|s| s.trim().to_string());
        match parts.next() {
            Some(k) if k == key => Ok(parts.collect()),
            _ => Err(parse_err(self.line, format!("expected `{key},...`"))),
        }
    }

    fn float(&self, s: &str) -> Result<f64, FormatError> {
        s.parse().map_err(|_| parse_err(self.line, format!("invalid number `{s}`")))
    }

    fn int<T: std::str::FromStr>(&self, s: &str) -> Result<T, FormatError> {
        s.parse().map_err(|_| parse_err(self.line, format!("invalid integer `{s}`")))
    }
}

/// Writes the text form of `f`.
pub fn write_grid_function<W: Write>(mut w: W, f: &GridFunction) -> Result<(), FormatError> {
    let mesh = f.mesh();
    writeln!(w, "{GRID_MAGIC}")?;
    writeln!(w, "dim,{}", mesh.dim())?;
    writeln!(w, "depth,{}", mesh.depth())?;
    let origin: Vec<String> = mesh.root().origin().iter().map(|&o| fmt_f64(o)).collect();
    writeln!(w, "origin,{}", origin.join(","))?;
    writeln!(w, "side,{}", fmt_f64(mesh.root().side()))?;
    writeln!(w, "cell,value")?;
    for (i, v) in f.values().iter().enumerate() {
        writeln!(w, "{i},{}", fmt_f64(*v))?;
    }
    Ok(())
}

/// Reads the text form written by [`write_grid_function`].
pub fn read_grid_function<R: BufRead>(r: R) -> Result<GridFunction, FormatError> {
    let mut lines = Lines::new(r);
    if lines.expect_line()?.trim() != GRID_MAGIC {
        return Err(parse_err(1, "not a grid-function file"));
    }
    let dim: usize = one(&mut lines, "dim", |l, s| l.int(s))?;
    let depth: u32 = one(&mut lines, "depth", |l, s| l.int(s))?;
    let origin = lines
        .header("origin")?
        .iter()
        .map(|s| lines.float(s))
        .collect::<Result<Vec<_>, _>>()?;
    if origin.len() != dim {
        return Err(parse_err(lines.line, "origin length differs from dim"));
    }
    let side: f64 = one(&mut lines, "side", |l, s| l.float(s))?;
    lines.header("cell")?;
    let mesh = Mesh::new(RootBox::new(&origin, side)?, depth)?;
    let mut values = Vec::with_capacity(mesh.len());
    while let Some(l) = lines.next_line()? {
        if l.trim().is_empty() {
            continue;
        }
        let (idx, val) = l.split_once(',').ok_or_else(|| parse_err(lines.line, "expected `cell,value`"))?;
        let idx: usize = lines.int(idx.trim())?;
        if idx != values.len() {
            return Err(parse_err(lines.line, format!("expected cell {}, found {idx}", values.len())));
        }
        values.push(lines.float(val.trim())?);
    }
    Ok(GridFunction::new(mesh, values)?)
}

fn one<R: BufRead, T>(
    lines: &mut Lines<R>,
    key: &str,
    parse: impl Fn(&Lines<R>, &str) -> Result<T, FormatError>,
) -> Result<T, FormatError> {
    let v = lines.header(key)?;
    match v.as_slice() {
        [s] => parse(lines, s),
        _ => Err(parse_err(lines.line, format!("`{key}` takes one value"))),
    }
}

/// Little-endian binary form: magic, dim (u32), depth (u32), origin, side,
/// cell count (u64), values.
pub fn write_grid_function_binary<W: Write>(mut w: W, f: &GridFunction) -> Result<(), FormatError> {
    let mesh = f.mesh();
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&(mesh.dim() as u32).to_le_bytes())?;
    w.write_all(&mesh.depth().to_le_bytes())?;
    for o in mesh.root().origin() {
        w.write_all(&o.to_le_bytes())?;
    }
    w.write_all(&mesh.root().side().to_le_bytes())?;
    w.write_all(&(f.values().len() as u64).to_le_bytes())?;
    for v in f.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_grid_function_binary<R: Read>(mut r: R) -> Result<GridFunction, FormatError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(parse_err(0, "not a binary grid-function file"));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4)?;
    let dim = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let depth = u32::from_le_bytes(b4);
    if dim == 0 || dim > 2 {
        return Err(sparsefrac_core::Error::Dimension(dim).into());
    }
    let mut origin = vec![0.0; dim];
    for o in origin.iter_mut() {
        r.read_exact(&mut b8)?;
        *o = f64::from_le_bytes(b8);
    }
    r.read_exact(&mut b8)?;
    let side = f64::from_le_bytes(b8);
    let mesh = Mesh::new(RootBox::new(&origin, side)?, depth)?;
    r.read_exact(&mut b8)?;
    let count = u64::from_le_bytes(b8) as usize;
    if count != mesh.len() {
        return Err(sparsefrac_core::Error::CellCount { expected: mesh.len(), got: count }.into());
    }
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        r.read_exact(&mut b8)?;
        values.push(f64::from_le_bytes(b8));
    }
    Ok(GridFunction::new(mesh, values)?)
}

/// Writes a family as `level,c0[,c1]` rows after a small header.
pub fn write_sparse_family<W: Write>(mut w: W, family: &SparseFamily) -> Result<(), FormatError> {
    writeln!(w, "{FAMILY_MAGIC}")?;
    writeln!(w, "dim,{}", family.dim())?;
    writeln!(w, "grid,{}", family.grid())?;
    let coords: Vec<String> = (0..family.dim()).map(|d| format!("c{d}")).collect();
    writeln!(w, "level,{}", coords.join(","))?;
    for c in family.cubes() {
        let coords: Vec<String> = c.coords().iter().map(|m| m.to_string()).collect();
        writeln!(w, "{},{}", c.level, coords.join(","))?;
    }
    Ok(())
}

pub fn read_sparse_family<R: BufRead>(r: R) -> Result<SparseFamily, FormatError> {
    let mut lines = Lines::new(r);
    if lines.expect_line()?.trim() != FAMILY_MAGIC {
        return Err(parse_err(1, "not a sparse-family file"));
    }
    let dim: usize = one(&mut lines, "dim", |l, s| l.int(s))?;
    let grid: usize = one(&mut lines, "grid", |l, s| l.int(s))?;
    lines.header("level")?;
    let mut cubes = Vec::new();
    while let Some(l) = lines.next_line()? {
        if l.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = l.split(',').map(str::trim).collect();
        if parts.len() != dim + 1 {
            return Err(parse_err(lines.line, format!("expected {} fields", dim + 1)));
        }
        let level: u32 = lines.int(parts[0])?;
        let coords = parts[1..].iter().map(|s| lines.int(s)).collect::<Result<Vec<i64>, _>>()?;
        cubes.push(DyadicCube::new(grid, level, &coords));
    }
    Ok(SparseFamily::new(grid, dim, cubes)?)
}

/// JSON form of a grid function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunctionJson {
    pub dim: usize,
    pub depth: u32,
    pub origin: Vec<f64>,
    pub side: f64,
    pub values: Vec<f64>,
}

impl GridFunctionJson {
    pub fn from_function(f: &GridFunction) -> Self {
        let m = f.mesh();
        Self {
            dim: m.dim(),
            depth: m.depth(),
            origin: m.root().origin().to_vec(),
            side: m.root().side(),
            values: f.values().to_vec(),
        }
    }

    pub fn to_function(&self) -> Result<GridFunction, FormatError> {
        if self.origin.len() != self.dim {
            return Err(parse_err(0, "origin length differs from dim"));
        }
        let mesh = Mesh::new(RootBox::new(&self.origin, self.side)?, self.depth)?;
        Ok(GridFunction::new(mesh, self.values.clone())?)
    }
}

/// JSON form of a sparse family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseFamilyJson {
    pub dim: usize,
    pub grid: usize,
    pub cubes: Vec<CubeJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeJson {
    pub level: u32,
    pub coords: Vec<i64>,
}

impl SparseFamilyJson {
    pub fn from_family(f: &SparseFamily) -> Self {
        Self {
            dim: f.dim(),
            grid: f.grid(),
            cubes: f.cubes().iter().map(|c| CubeJson { level: c.level, coords: c.coords().to_vec() }).collect(),
        }
    }

    pub fn to_family(&self) -> Result<SparseFamily, FormatError> {
        if self.cubes.iter().any(|c| c.coords.len() != self.dim) {
            return Err(parse_err(0, "cube coordinates differ from dim"));
        }
        let cubes = self.cubes.iter().map(|c| DyadicCube::new(self.grid, c.level, &c.coords)).collect();
        Ok(SparseFamily::new(self.grid, self.dim, cubes)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let m = Mesh::new(RootBox::new(&[-0.25, 1.5], 3.0).unwrap(), 2).unwrap();
        let f = GridFunction::from_fn(m, |x| (x[0] * 7.1).sin() + x[1] / 3.0).unwrap();
        let mut buf = Vec::new();
        write_grid_function(&mut buf, &f).unwrap();
        assert_eq!(read_grid_function(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn rejects_bad_header() {
        let e = read_grid_function("# sparsefrac grid-function v1\ndim,x\n".as_bytes()).unwrap_err();
        assert!(e.to_string().starts_with("line 2"));
    }
}
