use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sparsefrac::config::{self, ConfigError, ExperimentConfig, OperatorName, OutputFormat};
use sparsefrac::harness::{self, BatteryCases, BatterySpec, Outcome};
use sparsefrac::io::{self as formats, GridFunctionJson, SparseFamilyJson};
use sparsefrac::report::{self, ReportRow};
use sparsefrac_core::dyadic::MAX_DIM;
use sparsefrac_core::operators::{
    dyadic_commutator, dyadic_fractional_integral, fractional_maximal, riesz_potential_1d,
    sparse_fractional_integral, weighted_orlicz_fractional_maximal,
};
use sparsefrac_core::sparse::{certify_sparse, sparse_select_for_operator};
use sparsefrac_core::verify::{TestCase, Theorem};
use sparsefrac_core::weights::{
    a1q_characteristic, ap_characteristic, apq_characteristic, reverse_holder_exponent, CubeBattery,
};
use sparsefrac_core::{GridTree, Mesh};

#[derive(Parser)]
#[command(name = "sparsefrac", version, about = "Sparse bounds for fractional integrals: operators, characteristics and verification batteries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (TOML)
    #[arg(long, global = true, env = "SPARSEFRAC_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, env = "SPARSEFRAC_OUT")]
    out: Option<PathBuf>,
    /// Seed for randomized batteries
    #[arg(long, global = true, env = "SPARSEFRAC_SEED")]
    seed: Option<u64>,
    /// Mesh depth K
    #[arg(long, global = true, env = "SPARSEFRAC_DEPTH")]
    depth: Option<u32>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, env = "SPARSEFRAC_JOBS")]
    jobs: Option<usize>,
    /// Report format
    #[arg(long, global = true, env = "SPARSEFRAC_FORMAT", value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an operator and write the resulting grid function
    Op,
    /// Extract and certify a sparse family for the configured function
    Sparse,
    /// Compute weight characteristics
    Char,
    /// Run a verification battery and write a report
    Verify,
    /// Run gamma sweeps (and optional refinement checks) with plot data
    Sweep,
}

enum Failure {
    /// Bad configuration or input; exit code 2.
    Config(String),
    /// An asserted inequality failed; exit code 1.
    Check(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

struct Run {
    cfg: ExperimentConfig,
    out: PathBuf,
    seed: u64,
    depth: Option<u32>,
    jobs: usize,
    format: OutputFormat,
}

impl Run {
    fn new(cli: &Cli) -> Result<Self, Failure> {
        let cfg = match &cli.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        Ok(Self {
            out: cli.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out")),
            seed: cli.seed.or(cfg.seed).unwrap_or(0),
            depth: cli.depth.or(cfg.depth),
            jobs: cli.jobs.or(cfg.jobs).unwrap_or(0),
            format: cli.format.or(cfg.format).unwrap_or_default(),
            cfg,
        })
    }

    fn depth(&self, default: u32) -> u32 {
        self.depth.unwrap_or(default)
    }

    fn file(&self, stem: &str) -> Result<(PathBuf, BufWriter<File>), Failure> {
        std::fs::create_dir_all(&self.out).map_err(|e| input(format!("{}: {e}", self.out.display())))?;
        let ext = match self.format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        };
        let path = self.out.join(format!("{stem}.{ext}"));
        let f = File::create(&path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        Ok((path, BufWriter::new(f)))
    }

    fn csv_file(&self, name: &str) -> Result<(PathBuf, BufWriter<File>), Failure> {
        std::fs::create_dir_all(&self.out).map_err(|e| input(format!("{}: {e}", self.out.display())))?;
        let path = self.out.join(name);
        let f = File::create(&path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        Ok((path, BufWriter::new(f)))
    }

    fn pool(&self) -> Result<rayon::ThreadPool, Failure> {
        harness::pool(self.jobs).map_err(input)
    }

    /// The single case described by the config sections.
    fn single_case(&self, id: &str, maximal: bool) -> Result<TestCase, Failure> {
        let c = &self.cfg;
        let ex = c.require(&c.exponents, "exponents")?;
        let e = if maximal { ex.maximal_triple()? } else { ex.triple()? };
        let depth = self.depth(if e.n() == 1 { 10 } else { 6 });
        let weight = match &c.weight {
            Some(w) => w.spec(e.n())?,
            None => sparsefrac_core::weights::WeightSpec::Constant(1.0),
        };
        let young = match &c.operator {
            Some(o) => config::young(o.young, o.young_p)?,
            None => match &c.verify {
                Some(v) => config::young(v.young, v.young_p)?,
                None => sparsefrac_core::YoungFunction::LLog,
            },
        };
        Ok(TestCase {
            id: id.to_string(),
            exponents: e,
            weight,
            function: c.require(&c.function, "function")?.spec(e.n(), self.seed)?,
            bmo: c.bmo.as_ref().map(|b| b.spec(e.n())).transpose()?,
            young,
            depth,
            k_char: c.k_char_for(depth),
        })
    }
}

fn write_rows(run: &Run, stem: &str, rows: &[ReportRow]) -> Result<PathBuf, Failure> {
    let (path, w) = run.file(stem)?;
    match run.format {
        OutputFormat::Csv => report::write_csv(w, rows),
        OutputFormat::Json => report::write_json(w, rows),
    }
    .map_err(input)?;
    Ok(path)
}

fn cmd_op(run: &Run) -> Result<(), Failure> {
    let c = &run.cfg;
    let op = c.require(&c.operator, "operator")?;
    let case = run.single_case("op", op.name == OperatorName::OrliczMaximal)?;
    let pr = case.prepare().map_err(input)?;
    let alpha = case.exponents.alpha();
    let out = match op.name {
        OperatorName::FractionalIntegral => dyadic_fractional_integral(&pr.f, alpha, &pr.tree),
        OperatorName::SparseFractionalIntegral => sparse_select_for_operator(&pr.f, &pr.tree)
            .and_then(|fam| sparse_fractional_integral(&pr.f, alpha, &pr.tree, &fam)),
        OperatorName::FractionalMaximal => fractional_maximal(&pr.f, alpha, &GridTree::family(pr.mesh)),
        OperatorName::OrliczMaximal => {
            let sigma = pr.weight.sigma().unwrap_or(pr.weight.v());
            weighted_orlicz_fractional_maximal(&pr.f, sigma, alpha, case.young, &pr.tree)
        }
        OperatorName::Commutator => {
            let b = c.require(&case.bmo, "bmo")?.discretize(pr.mesh).map_err(input)?;
            dyadic_commutator(&b, &pr.f, alpha, &pr.tree)
        }
        OperatorName::Riesz => riesz_potential_1d(&pr.f, alpha),
    }
    .map_err(input)?;
    let (path, w) = run.file("op")?;
    match run.format {
        OutputFormat::Csv => formats::write_grid_function(w, &out.values).map_err(input)?,
        OutputFormat::Json => {
            serde_json::to_writer(w, &GridFunctionJson::from_function(&out.values)).map_err(input)?
        }
    }
    println!(
        "{}: {} cells, max {:.16e}, {} cube visits -> {}",
        out.operator,
        out.values.values().len(),
        out.values.max_abs(),
        out.cube_visits,
        path.display()
    );
    Ok(())
}

fn cmd_sparse(run: &Run) -> Result<(), Failure> {
    let case = run.single_case("sparse", false)?;
    let pr = case.prepare().map_err(input)?;
    let family = sparse_select_for_operator(&pr.f, &pr.tree).map_err(input)?;
    let cert = certify_sparse(&family, &pr.tree).map_err(input)?;
    let (path, w) = run.file("sparse_family")?;
    match run.format {
        OutputFormat::Csv => formats::write_sparse_family(w, &family).map_err(input)?,
        OutputFormat::Json => serde_json::to_writer(w, &SparseFamilyJson::from_family(&family)).map_err(input)?,
    }
    println!(
        "family of {} cubes, sparse {}, min density {:.16e} -> {}",
        family.len(),
        cert.is_sparse(),
        cert.min_density(),
        path.display()
    );
    if cert.is_sparse() {
        Ok(())
    } else {
        Err(Failure::Check(format!("family is not sparse: {:?}", cert.violation)))
    }
}

fn cmd_char(run: &Run) -> Result<(), Failure> {
    let c = &run.cfg;
    let e = c.require(&c.exponents, "exponents")?.triple()?;
    let spec = c.require(&c.weight, "weight")?.spec(e.n())?;
    let depth = run.depth(if e.n() == 1 { 10 } else { 6 });
    let mesh = Mesh::unit(e.n(), depth).map_err(input)?;
    let battery = CubeBattery::new(mesh, c.k_char_for(depth)).map_err(input)?;
    let w = spec.weight(mesh, e).map_err(input)?;
    let mut values: Vec<(&str, f64)> = Vec::new();
    if e.is_endpoint() {
        values.push(("a1q", a1q_characteristic(&w, &battery).map_err(input)?));
    } else {
        values.push(("apq", apq_characteristic(&w, &battery).map_err(input)?));
    }
    values.push(("ar_of_v", ap_characteristic(w.v(), e.r(), &battery).map_err(input)?));
    if let Some(sigma) = w.sigma() {
        values.push(("ar_prime_of_sigma", ap_characteristic(sigma, e.r_prime(), &battery).map_err(input)?));
        let rh = reverse_holder_exponent(sigma, &battery).map_err(input)?;
        values.push(("reverse_holder_s_sigma", rh.s));
    }
    let (path, mut w) = run.file("char")?;
    match run.format {
        OutputFormat::Csv => {
            use std::io::Write;
            writeln!(w, "quantity,value").map_err(input)?;
            for (k, v) in &values {
                writeln!(w, "{k},{}", formats::fmt_f64(*v)).map_err(input)?;
            }
        }
        OutputFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                values.iter().map(|(k, v)| (k.to_string(), serde_json::json!(v))).collect();
            serde_json::to_writer_pretty(w, &map).map_err(input)?;
        }
    }
    for (k, v) in &values {
        println!("{k} = {v}");
    }
    println!("-> {}", path.display());
    Ok(())
}

fn summarize(outcome: &Outcome) {
    for cal in &outcome.calibrations {
        println!(
            "{}: calibration constant {:.6}, threshold {:.6}",
            cal.theorem.id(),
            cal.constant,
            cal.threshold
        );
    }
    let failed = outcome.rows.iter().filter(|r| !r.pass).count();
    println!("{} cases, {} failed", outcome.rows.len(), failed);
}

fn check_outcome(outcome: &Outcome) -> Result<(), Failure> {
    match outcome.first_failure() {
        None => Ok(()),
        Some(r) => Err(Failure::Check(format!(
            "case {} failed: measured constant {:.6e} (threshold {:.6e}), {} violations",
            r.case_id, r.measured_constant, r.threshold, r.violations
        ))),
    }
}

fn cmd_verify(run: &Run) -> Result<(), Failure> {
    let c = &run.cfg;
    let v = c.verify.clone().unwrap_or(config::VerifyConfig {
        theorems: None,
        battery: None,
        n: None,
        random_cases: None,
        threshold_factor: None,
        young: None,
        young_p: None,
    });
    let theorems = config::parse_theorems(v.theorems.as_ref())?;
    let kind = v.battery.unwrap_or(config::BatteryKind::Standard);
    let n = match (kind, &c.exponents) {
        (config::BatteryKind::Single, Some(e)) => e.n,
        _ => v.n.unwrap_or(1),
    };
    let depth = run.depth(if n == 1 { 10 } else { 6 });
    let cases = match kind {
        config::BatteryKind::Standard => BatteryCases::Standard,
        config::BatteryKind::Random => BatteryCases::Random { seed: run.seed, count: v.random_cases.unwrap_or(20) },
        config::BatteryKind::Single => BatteryCases::Explicit(Vec::new()),
    };
    let spec = BatterySpec {
        theorems: theorems.clone(),
        n,
        depth,
        k_char: c.k_char_for(depth),
        young: config::young(v.young, v.young_p)?,
        cases,
        threshold_factor: v.threshold_factor.unwrap_or(harness::THRESHOLD_FACTOR),
    };
    let pool = run.pool()?;
    let outcome = if kind == config::BatteryKind::Single {
        let mut rows = Vec::new();
        let mut calibrations = Vec::new();
        for th in theorems {
            let case = run.single_case(&format!("{}|single", th.id()), th == Theorem::Maximal)?;
            let one = BatterySpec { theorems: vec![th], cases: BatteryCases::Explicit(vec![case]), ..spec.clone() };
            let o = harness::run_battery(&one, &pool).map_err(input)?;
            rows.extend(o.rows);
            calibrations.extend(o.calibrations);
        }
        Outcome { rows, calibrations }
    } else {
        harness::run_battery(&spec, &pool).map_err(input)?
    };
    let path = write_rows(run, "report", &outcome.rows)?;
    summarize(&outcome);
    println!("-> {}", path.display());
    check_outcome(&outcome)
}

fn cmd_sweep(run: &Run) -> Result<(), Failure> {
    let c = &run.cfg;
    let s = c.sweep.clone().unwrap_or(config::SweepConfig {
        theorems: None,
        n: None,
        steps: None,
        fraction: None,
        x0: None,
        depths: None,
    });
    let theorems = match &s.theorems {
        Some(_) => config::parse_theorems(s.theorems.as_ref())?,
        None => vec![Theorem::WeakFractional, Theorem::StrongFractional, Theorem::StrongCommutator],
    };
    let n = s.n.unwrap_or(1);
    let depth = run.depth(if n == 1 { 10 } else { 6 });
    let mut x0 = [0.5; MAX_DIM];
    if let Some(v) = &s.x0 {
        if v.len() != n {
            return Err(Failure::Config(format!("sweep.x0 needs {n} coordinates")));
        }
        x0[..n].copy_from_slice(v);
    }
    let pool = run.pool()?;
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for th in theorems {
        let sw = harness::gamma_sweep(
            th,
            n,
            depth,
            c.k_char_for(depth),
            s.steps.unwrap_or(13),
            s.fraction.unwrap_or(0.95),
            x0,
            &pool,
        )
        .map_err(input)?;
        let (path, w) = run.csv_file(&format!("plot_{}.csv", th.id()))?;
        report::write_plot_csv(w, th.id(), &sw.points).map_err(input)?;
        println!(
            "{}: slope {:.4} (exponent {:.4}, limit {:.4}) -> {}",
            th.id(),
            sw.slope,
            sw.exponent,
            sw.exponent + harness::SLOPE_SLACK,
            path.display()
        );
        if !sw.slope_ok() {
            problems.push(format!("{} sweep slope {:.4} exceeds {:.4}", th.id(), sw.slope, sw.exponent + harness::SLOPE_SLACK));
        }
        rows.extend(sw.rows);
        for &d in s.depths.as_deref().unwrap_or(&[]) {
            let st = harness::stability(th, n, d, sparsefrac_core::YoungFunction::LLog, &pool).map_err(input)?;
            let (path, mut w) = run.csv_file(&format!("stability_{}_{d}.csv", th.id()))?;
            {
                use std::io::Write;
                writeln!(w, "case_id,coarse,fine,relative_change").map_err(input)?;
                for r in &st {
                    writeln!(
                        w,
                        "{},{},{},{}",
                        r.case_id,
                        formats::fmt_f64(r.coarse),
                        formats::fmt_f64(r.fine),
                        formats::fmt_f64(r.relative_change)
                    )
                    .map_err(input)?;
                }
            }
            let worst = st.iter().map(|r| r.relative_change).fold(0.0, f64::max);
            println!("{}: K={d} vs K={} worst relative change {worst:.4} -> {}", th.id(), d + 2, path.display());
            if worst > harness::STABILITY_TOLERANCE {
                problems.push(format!("{} unstable between K={d} and K={}", th.id(), d + 2));
            }
        }
    }
    rows.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    let path = write_rows(run, "sweep", &rows)?;
    println!("-> {}", path.display());
    if let Some(r) = rows.iter().find(|r| !r.pass) {
        problems.insert(0, format!("case {} failed", r.case_id));
    }
    match problems.first() {
        None => Ok(()),
        Some(p) => Err(Failure::Check(p.clone())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Run::new(&cli).and_then(|run| match cli.command {
        Command::Op => cmd_op(&run),
        Command::Sparse => cmd_sparse(&run),
        Command::Char => cmd_char(&run),
        Command::Verify => cmd_verify(&run),
        Command::Sweep => cmd_sweep(&run),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
