//! Young functions and the Luxemburg and Amemiya norms on cube-restricted
//! weighted measures.

use alloc::vec::Vec;

use crate::dyadic::{GridFunction, UnitBox};
use crate::error::{Error, Result};
use crate::math;

/// `Φ(t) = t^p`, `t log(e + t)` or `e^t − 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum YoungFunction {
    Power(f64),
    LLog,
    Expm1,
}

impl YoungFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            YoungFunction::Power(p) => math::pow(t, p),
            YoungFunction::LLog => t * math::ln(core::f64::consts::E + t),
            YoungFunction::Expm1 => libm::expm1(t),
        }
    }

    /// `ln Φ(t)` for `t > 0`, stable where `Φ` overflows.
    pub fn ln_eval(&self, t: f64) -> f64 {
        match *self {
            YoungFunction::Power(p) => p * math::ln(t),
            YoungFunction::LLog => math::ln(t) + math::ln(math::ln(core::f64::consts::E + t)),
            YoungFunction::Expm1 if t > 700.0 => t + libm::log1p(-math::exp(-t)),
            YoungFunction::Expm1 => math::ln(libm::expm1(t)),
        }
    }
}

/// Root `t*` of `t log(e + t) = 1`; `‖1‖_{Φ} = 1/t*` for `Φ = t log(e + t)`.
pub fn llog_unit_root() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if YoungFunction::LLog.eval(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `‖1‖` for `Φ̄(t) = e^t − 1`, i.e. `1/ln 2`.
pub const EXPM1_UNIT_NORM: f64 = core::f64::consts::LOG2_E;

/// Generalised Hölder constant for the pair `(t log(e + t), e^t − 1)`.
pub const HOLDER_CONSTANT: f64 = 2.0;

/// Values with non-negative masses: the restriction of `f dσ` to a cube.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    values: Vec<f64>,
    masses: Vec<f64>,
    total: f64,
}

impl DiscreteMeasure {
    pub fn new(values: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if values.len() != masses.len() {
            return Err(Error::CellCount { expected: values.len(), got: masses.len() });
        }
        if masses.iter().any(|m| !(*m >= 0.0)) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("masses must be non-negative and values finite"));
        }
        let total = masses.iter().sum::<f64>();
        if !(total > 0.0) {
            return Err(Error::DegenerateMeasure);
        }
        Ok(Self { values, masses, total })
    }

    /// `f` on `region`, with `dσ` (Lebesgue measure when `sigma` is `None`).
    pub fn on_region(f: &GridFunction, sigma: Option<&GridFunction>, region: &UnitBox) -> Result<Self> {
        if let Some(s) = sigma {
            if s.mesh() != f.mesh() {
                return Err(Error::MeshMismatch);
            }
        }
        let mesh = f.mesh();
        let vol = mesh.cell_volume();
        let mut values = Vec::new();
        let mut masses = Vec::new();
        for (i, frac) in mesh.overlaps(region) {
            let density = sigma.map_or(1.0, |s| s.values()[i]);
            values.push(f.values()[i]);
            masses.push(density * frac * vol);
        }
        Self::new(values, masses)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `⨍ g(f) dσ`.
    pub fn mean<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.values.iter().zip(&self.masses).map(|(&v, &m)| m * g(v)).sum::<f64>() / self.total
    }

    /// `⨍ Φ(|f|/λ) dσ`, summing in log space where `Φ` would overflow.
    pub fn modular(&self, phi: YoungFunction, lambda: f64) -> f64 {
        let mut sum = 0.0;
        for (&v, &m) in self.values.iter().zip(&self.masses) {
            let t = v.abs() / lambda;
            if t == 0.0 || m == 0.0 {
                continue;
            }
            let term = if matches!(phi, YoungFunction::Expm1) && t > 700.0 {
                math::exp(math::ln(m / self.total) + phi.ln_eval(t))
            } else {
                m / self.total * phi.eval(t)
            };
            sum += term;
        }
        sum
    }

    /// `(⨍ |f|^p dσ)^{1/p}`.
    pub fn lp_average(&self, p: f64) -> f64 {
        math::pow(self.mean(|v| math::pow(v.abs(), p)), 1.0 / p)
    }

    /// `inf{λ > 0 : ⨍ Φ(|f|/λ) dσ ≤ 1}` to about `1e−13` relative.
    pub fn luxemburg(&self, phi: YoungFunction) -> f64 {
        let top = self.max_abs();
        if top == 0.0 {
            return 0.0;
        }
        let mut hi = top;
        while self.modular(phi, hi) > 1.0 {
            hi *= 2.0;
        }
        let mut lo = hi;
        while self.modular(phi, lo) <= 1.0 && lo > 1e-300 {
            lo *= 0.5;
        }
        for _ in 0..200 {
            if hi / lo - 1.0 <= 1e-14 {
                break;
            }
            let mid = math::sqrt(lo * hi);
            if !(mid > lo && mid < hi) {
                break;
            }
            if self.modular(phi, mid) <= 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// `λ (1 + ⨍ Φ(|f|/λ) dσ)`.
    pub fn amemiya_objective(&self, phi: YoungFunction, lambda: f64) -> f64 {
        lambda * (1.0 + self.modular(phi, lambda))
    }

    /// `inf_λ λ (1 + ⨍ Φ(|f|/λ) dσ)` by golden-section search on `log λ`.
    pub fn amemiya(&self, phi: YoungFunction) -> f64 {
        let lux = self.luxemburg(phi);
        if lux == 0.0 {
            return 0.0;
        }
        let h = |x: f64| self.amemiya_objective(phi, math::exp(x));
        let invphi = 0.5 * (math::sqrt(5.0) - 1.0);
        let (mut a, mut b) = (math::ln(lux * 1e-12), math::ln(2.0 * lux));
        let mut c = b - invphi * (b - a);
        let mut d = a + invphi * (b - a);
        let (mut hc, mut hd) = (h(c), h(d));
        for _ in 0..120 {
            if b - a <= 1e-10 {
                break;
            }
            if hc <= hd {
                b = d;
                d = c;
                hd = hc;
                c = b - invphi * (b - a);
                hc = h(c);
            } else {
                a = c;
                c = d;
                hc = hd;
                d = a + invphi * (b - a);
                hd = h(d);
            }
        }
        let best = h(0.5 * (a + b)).min(h(a)).min(hc).min(hd);
        best.min(self.amemiya_objective(phi, lux))
    }
}

/// `‖f‖_{Φ,Q,σ}`.
pub fn luxemburg_norm(
    f: &GridFunction,
    region: &UnitBox,
    sigma: Option<&GridFunction>,
    phi: YoungFunction,
) -> Result<f64> {
    Ok(DiscreteMeasure::on_region(f, sigma, region)?.luxemburg(phi))
}

/// Amemiya form of the Orlicz norm.
pub fn amemiya_norm(
    f: &GridFunction,
    region: &UnitBox,
    sigma: Option<&GridFunction>,
    phi: YoungFunction,
) -> Result<f64> {
    Ok(DiscreteMeasure::on_region(f, sigma, region)?.amemiya(phi))
}

/// `(⨍_Q |fg| dσ, 2‖f‖_{Φ,Q,σ}‖g‖_{Φ̄,Q,σ})` for `Φ = t log(e + t)`, `Φ̄ = e^t − 1`.
pub fn generalized_holder_check(
    f: &GridFunction,
    g: &GridFunction,
    region: &UnitBox,
    sigma: Option<&GridFunction>,
) -> Result<(f64, f64)> {
    let mf = DiscreteMeasure::on_region(f, sigma, region)?;
    let mg = DiscreteMeasure::on_region(g, sigma, region)?;
    let lhs = mf
        .values()
        .iter()
        .zip(mg.values())
        .zip(mf.masses())
        .map(|((&a, &b), &m)| (a * b).abs() * m)
        .sum::<f64>()
        / mf.total_mass();
    let rhs = HOLDER_CONSTANT * mf.luxemburg(YoungFunction::LLog) * mg.luxemburg(YoungFunction::Expm1);
    Ok((lhs, rhs))
}

/// `(‖f‖_{1,Q,σ}, ‖f‖_{Φ,Q,σ}, ‖f‖_{p,Q,σ})` with `Φ = t log(e + t)`.
pub fn norm_sandwich_check(
    f: &GridFunction,
    region: &UnitBox,
    sigma: Option<&GridFunction>,
    p: f64,
) -> Result<(f64, f64, f64)> {
    if !(p > 1.0) {
        return Err(Error::Exponents("sandwich needs p > 1"));
    }
    let m = DiscreteMeasure::on_region(f, sigma, region)?;
    Ok((m.lp_average(1.0), m.luxemburg(YoungFunction::LLog), m.lp_average(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Mesh;
    use alloc::vec;

    fn flat(values: Vec<f64>) -> DiscreteMeasure {
        let n = values.len();
        DiscreteMeasure::new(values, vec![1.0; n]).unwrap()
    }

    #[test]
    fn llog_root_value() {
        let t = llog_unit_root();
        assert!((t * math::ln(core::f64::consts::E + t) - 1.0).abs() < 1e-14);
        assert!((1.0 / t - 1.2567).abs() < 1e-3);
    }

    #[test]
    fn power_luxemburg_is_lp() {
        let m = DiscreteMeasure::new(vec![1.0, -3.0, 0.5], vec![0.2, 0.3, 0.5]).unwrap();
        for p in [1.0, 1.5, 2.0, 4.0] {
            let got = m.luxemburg(YoungFunction::Power(p));
            assert!((got / m.lp_average(p) - 1.0).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn constant_norms() {
        let m = flat(vec![1.0; 4]);
        assert!((m.luxemburg(YoungFunction::LLog) - 1.0 / llog_unit_root()).abs() < 1e-12);
        assert!((m.luxemburg(YoungFunction::Expm1) - EXPM1_UNIT_NORM).abs() < 1e-12);
        let m = flat(vec![0.0; 3]);
        assert_eq!(m.luxemburg(YoungFunction::LLog), 0.0);
        assert_eq!(m.amemiya(YoungFunction::LLog), 0.0);
    }

    #[test]
    fn modular_at_norm_is_one() {
        let m = DiscreteMeasure::new(vec![0.1, 4.0, 2.0, 0.0], vec![1.0, 0.01, 0.3, 2.0]).unwrap();
        for phi in [YoungFunction::LLog, YoungFunction::Expm1, YoungFunction::Power(3.0)] {
            let l = m.luxemburg(phi);
            let v = m.modular(phi, l);
            assert!(v <= 1.0 && v >= 1.0 - 1e-8, "{phi:?} {v}");
        }
    }

    #[test]
    fn expm1_log_space_guard() {
        // a tiny mass carrying a huge value: the norm is set by the tail
        let m = DiscreteMeasure::new(vec![1.0, 1e6], vec![1.0, 1e-200]).unwrap();
        let l = m.luxemburg(YoungFunction::Expm1);
        assert!(l.is_finite() && l > 0.0);
        let v = m.modular(YoungFunction::Expm1, l);
        assert!(v <= 1.0 && v >= 1.0 - 1e-8);
    }

    #[test]
    fn amemiya_linear_limit() {
        let m = DiscreteMeasure::new(vec![1.0, 3.0], vec![0.5, 0.5]).unwrap();
        let got = m.amemiya(YoungFunction::Power(1.0));
        assert!((got - 2.0).abs() < 1e-9);
    }

    #[test]
    fn amemiya_sandwich_and_young() {
        let m = DiscreteMeasure::new(vec![0.3, 2.0, 7.0, 0.0], vec![0.4, 0.3, 0.1, 0.2]).unwrap();
        for phi in [YoungFunction::LLog, YoungFunction::Expm1, YoungFunction::Power(2.0)] {
            let l = m.luxemburg(phi);
            let a = m.amemiya(phi);
            assert!(l <= a * (1.0 + 1e-12) && a <= 2.0 * l * (1.0 + 1e-12), "{phi:?}");
        }
        // st ≤ Φ(s) + Φ̄(t) on a log grid, the inequality behind C = 2
        for i in -40..40 {
            for j in -40..40 {
                let s = math::pow(1.3, i as f64);
                let t = math::pow(1.3, j as f64).min(600.0);
                assert!(s * t <= YoungFunction::LLog.eval(s) + YoungFunction::Expm1.eval(t) + 1e-12 * s * t);
            }
        }
    }

    #[test]
    fn region_measures() {
        let mesh = Mesh::unit(1, 4).unwrap();
        let f = GridFunction::constant(mesh, 1.0).unwrap();
        let region = UnitBox::new(&[0.0], &[0.5]);
        let (lhs, rhs) = generalized_holder_check(&f, &f, &region, None).unwrap();
        assert!((lhs - 1.0).abs() < 1e-14);
        assert!((rhs - 2.0 / llog_unit_root() * EXPM1_UNIT_NORM).abs() < 1e-10);
        let (a, b, c) = norm_sandwich_check(&f, &region, None, 3.0).unwrap();
        assert!((a - 1.0).abs() < 1e-14 && (c - 1.0).abs() < 1e-14);
        assert!((b - 1.2567).abs() < 1e-3);
    }
}
