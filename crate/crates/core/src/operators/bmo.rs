use crate::dyadic::GridFunction;
use crate::error::{Error, Result};
use crate::weights::CubeBattery;

/// `max_Q ⨍_Q |b − ⟨b⟩_Q|` over the battery.
pub fn bmo_norm(b: &GridFunction, battery: &CubeBattery) -> Result<f64> {
    if b.mesh() != battery.mesh() {
        return Err(Error::MeshMismatch);
    }
    let mesh = b.mesh();
    let vals = b.values();
    let cell_vol = mesh.cell_volume();
    let mut best = 0.0f64;
    for (i, region) in battery.boxes().iter().enumerate() {
        let vol = battery.volume(i);
        let avg = b.integral_over(region) / vol;
        let osc: f64 = mesh
            .overlaps(region)
            .iter()
            .map(|&(j, w)| w * (vals[j] - avg).abs())
            .sum::<f64>()
            * cell_vol
            / vol;
        best = best.max(osc);
    }
    Ok(best)
}

/// A function together with its battery BMO norm.
#[derive(Clone, Debug, PartialEq)]
pub struct BmoFunction {
    b: GridFunction,
    norm: f64,
}

impl BmoFunction {
    pub fn new(b: GridFunction, battery: &CubeBattery) -> Result<Self> {
        let norm = bmo_norm(&b, battery)?;
        Ok(Self { b, norm })
    }

    pub fn function(&self) -> &GridFunction {
        &self.b
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_constant(&self) -> bool {
        self.norm == 0.0
    }
}
