//! Verification batteries, calibration, refinement stability and `γ`-sweeps.
//!
//! Cases run concurrently on a rayon pool; every case is evaluated on one
//! thread and results are merged in case-id order, so output does not
//! depend on the number of jobs.

use rayon::prelude::*;
use sparsefrac_core::dyadic::MAX_DIM;
use sparsefrac_core::functions::{BmoSpec, FunctionSpec};
use sparsefrac_core::verify::{run, TestCase, Theorem, VerificationReport};
use sparsefrac_core::weights::{ExponentTriple, WeightSpec};
use sparsefrac_core::YoungFunction;
use thiserror::Error;

use crate::random::{case_rng, random_function, random_power_weight};
use crate::report::{PlotPoint, ReportRow};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("case {case}: {source}")]
    Case { case: String, source: sparsefrac_core::Error },
    #[error(transparent)]
    Core(#[from] sparsefrac_core::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Default gap between the mesh depth and the finest battery level.
pub const K_CHAR_GAP: u32 = 4;
/// Threshold factor over the `w ≡ 1` calibration constant.
pub const THRESHOLD_FACTOR: f64 = 4.0;
/// Allowed relative change of a measured constant between `K` and `K + 2`.
pub const STABILITY_TOLERANCE: f64 = 0.2;
/// Allowed excess of the sweep slope over the characteristic exponent.
pub const SLOPE_SLACK: f64 = 0.3;
/// Center of the log-distance BMO function, away from the weight singularities.
pub const LOG_CENTER: [f64; MAX_DIM] = [0.8, 0.8];

pub fn default_k_char(depth: u32) -> u32 {
    depth.saturating_sub(K_CHAR_GAP)
}

/// Spike level used by the standard battery.
pub fn spike_level(n: usize) -> u32 {
    if n == 1 {
        5
    } else {
        3
    }
}

/// Exponent triples of the standard battery.
pub fn standard_exponents(theorem: Theorem, n: usize) -> Result<Vec<ExponentTriple>> {
    let pairs: &[(f64, f64)] = match (theorem, n) {
        (Theorem::WeakFractional, 1) => &[(0.5, 1.0), (1.0 / 3.0, 1.0)],
        (Theorem::WeakFractional, _) => &[(0.5, 1.0), (1.0, 1.0)],
        (Theorem::Summation, 1) => &[(1.0 / 3.0, 2.0), (0.5, 1.5)],
        (_, 1) => &[(1.0 / 3.0, 2.0), (0.25, 4.0 / 3.0)],
        (_, _) => &[(0.5, 2.0), (1.0, 4.0 / 3.0)],
    };
    pairs
        .iter()
        .map(|&(a, p)| {
            if theorem == Theorem::Maximal {
                ExponentTriple::maximal(n, a, p)
            } else {
                ExponentTriple::new(n, a, p)
            }
            .map_err(HarnessError::from)
        })
        .collect()
}

fn weight_points(n: usize) -> Vec<[f64; MAX_DIM]> {
    if n == 1 {
        vec![[0.5, 0.0], [1.0 / 3.0, 0.0]]
    } else {
        vec![[0.5, 0.5], [1.0 / 3.0, 0.6]]
    }
}

/// `w ≡ 1` plus power weights at `γ ∈ {0.5, 0.9} ×` each end of the range.
pub fn standard_weights(e: &ExponentTriple) -> Vec<(String, WeightSpec)> {
    let (lo, hi) = e.power_weight_range();
    let mut out = vec![("one".to_string(), WeightSpec::Constant(1.0))];
    for x0 in weight_points(e.n()) {
        for gamma in [0.5 * lo, 0.9 * lo, 0.5 * hi, 0.9 * hi] {
            if gamma != 0.0 {
                out.push((weight_name(gamma, &x0[..e.n()]), WeightSpec::Power { x0, gamma }));
            }
        }
    }
    out
}

fn weight_name(gamma: f64, x0: &[f64]) -> String {
    let x: Vec<String> = x0.iter().map(|v| format!("{v:.4}")).collect();
    format!("pow({gamma:+.4}@{})", x.join(":"))
}

fn fill(n: usize, v: [f64; MAX_DIM]) -> [f64; MAX_DIM] {
    let mut out = [0.0; MAX_DIM];
    out[..n].copy_from_slice(&v[..n]);
    out
}

/// The standard function battery.
pub fn standard_functions(n: usize, depth: u32) -> Vec<(&'static str, FunctionSpec)> {
    let b = |lo: f64, hi: f64, lo2: f64, hi2: f64| (fill(n, [lo, lo2]), fill(n, [hi, hi2]));
    let (dlo, dhi) = b(0.0, 0.5, 0.0, 0.5);
    let (nlo, nhi) = b(0.2, 0.7, 0.1, 0.6);
    let (wlo, whi) = b(0.25, 0.75, 0.25, 0.75);
    vec![
        ("one", FunctionSpec::Constant(1.0)),
        ("ind-dyadic", FunctionSpec::Indicator { lo: dlo, hi: dhi }),
        ("ind-offgrid", FunctionSpec::Indicator { lo: nlo, hi: nhi }),
        ("spike", FunctionSpec::Spike { at: fill(n, [0.3, 0.3]), level: spike_level(n).min(depth) }),
        ("dual-weight", FunctionSpec::DualWeight { lo: wlo, hi: whi }),
    ]
}

/// BMO functions used by the commutator and weighted-BMO batteries.
pub fn standard_bmo(n: usize) -> Vec<(&'static str, BmoSpec)> {
    vec![("step", BmoSpec::Step { at: 0.5 }), ("log", BmoSpec::LogDistance { x0: fill(n, LOG_CENTER) })]
}

fn needs_bmo(theorem: Theorem) -> bool {
    matches!(theorem, Theorem::StrongCommutator | Theorem::WeightedBmo)
}

fn case_id(theorem: Theorem, e: &ExponentTriple, weight: &str, function: &str, bmo: Option<&str>) -> String {
    let mut id = format!("{}|n{}|a{:.4}|p{:.4}|{}|{}", theorem.id(), e.n(), e.alpha(), e.p(), weight, function);
    if let Some(b) = bmo {
        id.push('|');
        id.push_str(b);
    }
    id
}

/// The deterministic battery for one inequality.
pub fn standard_battery(theorem: Theorem, n: usize, depth: u32, k_char: u32, young: YoungFunction) -> Result<Vec<TestCase>> {
    let mut cases = Vec::new();
    for e in standard_exponents(theorem, n)? {
        for (wname, weight) in standard_weights(&e) {
            let functions = if theorem == Theorem::WeightedBmo {
                vec![("one", FunctionSpec::Constant(1.0))]
            } else {
                standard_functions(n, depth)
            };
            for (fname, function) in functions {
                let bmos: Vec<(&str, Option<BmoSpec>)> = if needs_bmo(theorem) {
                    standard_bmo(n).into_iter().map(|(b, s)| (b, Some(s))).collect()
                } else {
                    vec![("", None)]
                };
                for (bname, bmo) in bmos {
                    let id = case_id(theorem, &e, &wname, fname, bmo.map(|_| bname));
                    cases.push(TestCase {
                        id,
                        exponents: e,
                        weight,
                        function: function.clone(),
                        bmo,
                        young,
                        depth,
                        k_char,
                    });
                }
            }
        }
    }
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(cases)
}

/// The `w ≡ 1` cases of the standard battery.
pub fn calibration_battery(theorem: Theorem, n: usize, depth: u32, k_char: u32, young: YoungFunction) -> Result<Vec<TestCase>> {
    Ok(standard_battery(theorem, n, depth, k_char, young)?
        .into_iter()
        .filter(|c| c.weight == WeightSpec::Constant(1.0))
        .collect())
}

/// `count` cases with random coarse functions and power weights
/// (`γ` within 90% of the admissible range); case `j` uses stream `j`.
pub fn random_battery(
    theorem: Theorem,
    n: usize,
    depth: u32,
    k_char: u32,
    young: YoungFunction,
    seed: u64,
    count: usize,
) -> Result<Vec<TestCase>> {
    let triples = standard_exponents(theorem, n)?;
    let bmos = standard_bmo(n);
    let mut cases: Vec<TestCase> = (0..count)
        .map(|j| {
            let mut rng = case_rng(seed, j as u64);
            let e = triples[j % triples.len()];
            let weight = random_power_weight(&mut rng, &e, 0.9);
            let function = random_function(&mut rng, n);
            let bmo = needs_bmo(theorem).then(|| bmos[j % bmos.len()].1);
            TestCase {
                id: format!("{}|random|{j:05}", theorem.id()),
                exponents: e,
                weight,
                function,
                bmo,
                young,
                depth,
                k_char,
            }
        })
        .collect();
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(cases)
}

pub fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

/// Runs `theorem` on every case; results are in case-id order.
pub fn evaluate(
    theorem: Theorem,
    cases: &[TestCase],
    pool: &rayon::ThreadPool,
) -> Result<Vec<(TestCase, VerificationReport)>> {
    let mut out = pool.install(|| {
        cases
            .par_iter()
            .map(|c| {
                run(theorem, c)
                    .map(|r| (c.clone(), r))
                    .map_err(|source| HarnessError::Case { case: c.id.clone(), source })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    out.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    Ok(out)
}

/// Calibrated threshold for one inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    pub theorem: Theorem,
    /// Largest measured constant over the `w ≡ 1` battery.
    pub constant: f64,
    pub threshold: f64,
}

pub fn calibrate(
    theorem: Theorem,
    n: usize,
    depth: u32,
    k_char: u32,
    young: YoungFunction,
    factor: f64,
    pool: &rayon::ThreadPool,
) -> Result<Calibration> {
    let cases = calibration_battery(theorem, n, depth, k_char, young)?;
    let constant = evaluate(theorem, &cases, pool)?
        .iter()
        .filter(|(_, r)| !r.degenerate)
        .map(|(_, r)| r.measured_constant)
        .fold(0.0, f64::max);
    if !(constant > 0.0) {
        return Err(HarnessError::Invalid(format!("calibration of {} is degenerate", theorem.id())));
    }
    Ok(Calibration { theorem, constant, threshold: factor * constant })
}

/// Which cases a battery run uses.
#[derive(Clone, Debug, PartialEq)]
pub enum BatteryCases {
    Standard,
    Random { seed: u64, count: usize },
    Explicit(Vec<TestCase>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatterySpec {
    pub theorems: Vec<Theorem>,
    pub n: usize,
    pub depth: u32,
    pub k_char: u32,
    pub young: YoungFunction,
    pub cases: BatteryCases,
    pub threshold_factor: f64,
}

impl BatterySpec {
    pub fn standard(n: usize, depth: u32) -> Self {
        Self {
            theorems: Theorem::ALL.to_vec(),
            n,
            depth,
            k_char: default_k_char(depth),
            young: YoungFunction::LLog,
            cases: BatteryCases::Standard,
            threshold_factor: THRESHOLD_FACTOR,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub rows: Vec<ReportRow>,
    pub calibrations: Vec<Calibration>,
}

impl Outcome {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn first_failure(&self) -> Option<&ReportRow> {
        self.rows.iter().find(|r| !r.pass)
    }
}

/// Calibrates and runs every requested inequality.
pub fn run_battery(spec: &BatterySpec, pool: &rayon::ThreadPool) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut calibrations = Vec::new();
    for &theorem in &spec.theorems {
        let cal = calibrate(theorem, spec.n, spec.depth, spec.k_char, spec.young, spec.threshold_factor, pool)?;
        let cases = match &spec.cases {
            BatteryCases::Standard => standard_battery(theorem, spec.n, spec.depth, spec.k_char, spec.young)?,
            BatteryCases::Random { seed, count } => {
                random_battery(theorem, spec.n, spec.depth, spec.k_char, spec.young, *seed, *count)?
            }
            BatteryCases::Explicit(cases) => cases.clone(),
        };
        for (case, r) in evaluate(theorem, &cases, pool)? {
            rows.push(ReportRow::new(&case, &r, cal.threshold));
        }
        calibrations.push(cal);
    }
    rows.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    Ok(Outcome { rows, calibrations })
}

/// Measured constants of one case at two depths.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityRow {
    pub case_id: String,
    pub coarse: f64,
    pub fine: f64,
    pub relative_change: f64,
}

/// Standard battery at `depth` and `depth + 2` (battery levels `depth − 4`
/// and `depth − 2`); degenerate cases are skipped.
pub fn stability(
    theorem: Theorem,
    n: usize,
    depth: u32,
    young: YoungFunction,
    pool: &rayon::ThreadPool,
) -> Result<Vec<StabilityRow>> {
    let run_at = |k: u32| -> Result<Vec<(TestCase, VerificationReport)>> {
        evaluate(theorem, &standard_battery(theorem, n, k, default_k_char(k), young)?, pool)
    };
    let coarse = run_at(depth)?;
    let fine = run_at(depth + 2)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .filter(|((_, a), (_, b))| !a.degenerate && !b.degenerate)
        .map(|((c, a), (_, b))| StabilityRow {
            case_id: c.id.clone(),
            coarse: a.measured_constant,
            fine: b.measured_constant,
            relative_change: (b.measured_constant - a.measured_constant).abs() / a.measured_constant,
        })
        .collect())
}

/// Exponent of the characteristic in the bound for `theorem`.
pub fn characteristic_exponent(theorem: Theorem, e: &ExponentTriple) -> f64 {
    match theorem {
        Theorem::WeakFractional => e.weak_exponent(),
        Theorem::StrongFractional | Theorem::DualityCube => e.strong_exponent(),
        Theorem::StrongCommutator => e.commutator_exponent(),
        Theorem::WeightedBmo => 1.0,
        Theorem::Maximal | Theorem::Summation => 0.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub theorem: Theorem,
    pub exponent: f64,
    pub points: Vec<PlotPoint>,
    pub rows: Vec<ReportRow>,
    /// Least-squares slope of the log-normalised left side against the log characteristic.
    pub slope: f64,
}

impl Sweep {
    pub fn slope_ok(&self) -> bool {
        self.slope <= self.exponent + SLOPE_SLACK
    }
}

/// Least-squares slope of `y` on `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = points
        .iter()
        .fold((0.0, 0.0), |(n, d), &(x, y)| (n + (x - mx) * (y - my), d + (x - mx) * (x - mx)));
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Sweeps `γ` over `fraction` of the admissible range in `steps` points for
/// the first standard exponent triple, the off-grid indicator and the
/// log-distance BMO function.
#[allow(clippy::too_many_arguments)]
pub fn gamma_sweep(
    theorem: Theorem,
    n: usize,
    depth: u32,
    k_char: u32,
    steps: usize,
    fraction: f64,
    x0: [f64; MAX_DIM],
    pool: &rayon::ThreadPool,
) -> Result<Sweep> {
    if steps < 2 {
        return Err(HarnessError::Invalid("a sweep needs at least two steps".into()));
    }
    let e = standard_exponents(theorem, n)?[0];
    let (lo, hi) = e.power_weight_range();
    let function = standard_functions(n, depth).into_iter().find(|(f, _)| *f == "ind-offgrid").map(|(_, f)| f);
    let bmo = needs_bmo(theorem).then(|| BmoSpec::LogDistance { x0: fill(n, LOG_CENTER) });
    let cases: Vec<TestCase> = (0..steps)
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            let gamma = fraction * (lo + t * (hi - lo));
            TestCase {
                id: format!("{}|sweep|{i:03}", theorem.id()),
                exponents: e,
                weight: WeightSpec::Power { x0, gamma },
                function: function.clone().expect("standard function"),
                bmo,
                young: YoungFunction::LLog,
                depth,
                k_char,
            }
        })
        .collect();
    let cal = calibrate(theorem, n, depth, k_char, YoungFunction::LLog, THRESHOLD_FACTOR, pool)?;
    let results = evaluate(theorem, &cases, pool)?;
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for (c, r) in &results {
        rows.push(ReportRow::new(c, r, cal.threshold));
        if !r.degenerate && r.lhs > 0.0 {
            points.push(PlotPoint {
                gamma: c.gamma().unwrap_or(0.0),
                log_characteristic: r.characteristic.ln(),
                log_normalized_lhs: (r.lhs / r.norm_of_input).ln(),
            });
        }
    }
    let slope = fit_slope(&points.iter().map(|p| (p.log_characteristic, p.log_normalized_lhs)).collect::<Vec<_>>());
    Ok(Sweep { theorem, exponent: characteristic_exponent(theorem, &e), points, rows, slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 2.5 * i as f64 + 1.0)).collect();
        assert!((fit_slope(&pts) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn battery_ids_unique_and_sorted() {
        for th in Theorem::ALL {
            let cases = standard_battery(th, 1, 6, 2, YoungFunction::LLog).unwrap();
            assert!(cases.windows(2).all(|w| w[0].id < w[1].id), "{}", th.id());
        }
    }

    #[test]
    fn results_independent_of_jobs() {
        let cases = standard_battery(Theorem::StrongFractional, 1, 6, 2, YoungFunction::LLog).unwrap();
        let a = evaluate(Theorem::StrongFractional, &cases, &pool(1).unwrap()).unwrap();
        let b = evaluate(Theorem::StrongFractional, &cases, &pool(4).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
