//! Command-line front end. [`dispatch`] parses arguments, runs one subcommand, and
//! returns the exit code together with the rendered output, so the binary is a thin
//! wrapper and the whole surface is testable in-process.

mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::{format_rational, rat, Rational, RayId};
use crate::error::{Error, Result};
use crate::flop::{
    associativity_report, chart_ring, flop_ring, local_flop_check, verify_ruan_isomorphism,
    FlopCorrespondence, GlobalRingData, GlobalRingWire, LocalFlopReport,
};
use crate::geometry::{certify, sample_qr, write_csv, SampleConfig};
use crate::local::{
    cr_basis, gw_invariant, product_table, quantum_three_point, valid_weights, validate_model,
    CRClass, Side,
};
use crate::resolution::{resolve, ConifoldConfig, DEFAULT_CAP};

pub use report::{inputs_digest, Provenance, RunReport};

#[derive(Debug, Parser)]
#[command(name = "orbiconifold", version, about = "Exact and numerical checks on local orbi-conifolds and their flops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the full run report as JSON
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit a human-readable table (default)
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chen-Ruan basis and product table of a local chart
    Ring {
        #[arg(long)]
        r: u32,
        /// Weight; defaults to 0 for r = 1 and 1 otherwise
        #[arg(long)]
        a: Option<u32>,
        #[arg(long, default_value = "s")]
        side: Side,
    },
    /// Degree-d invariant of the exceptional curve
    Gw {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        a: Option<u32>,
        #[arg(long)]
        d: u32,
    },
    /// Quantum-corrected three-point function of three classes, e.g. `H "2*p_1 + 1" q_2`
    Threepoint {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        a: Option<u32>,
        #[arg(long, default_value = "s")]
        side: Side,
        /// Three class expressions; they may start with `-`, so give flags first
        #[arg(num_args = 3, required = true, allow_hyphen_values = true)]
        classes: Vec<String>,
    },
    /// Local flop identity over every ordered basis triple
    FlopCheck {
        #[arg(long)]
        r: u32,
        /// Check a single weight instead of all valid ones
        #[arg(long)]
        a: Option<u32>,
    },
    /// Symplectic small resolutions of a global orbi-conifold
    Resolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_kappa: usize,
    },
    /// Ruan-ring isomorphism between ring data of X and its flop Y
    RuanVerify {
        /// JSON with `x` and optionally `y` and `correspondence`
        #[arg(long, conflicts_with = "charts")]
        config: Option<PathBuf>,
        /// Synthetic charts as `r:a,r:a,...`
        #[arg(long)]
        charts: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sampled certification of the smoothing, its symplectic form, and the leaf maps
    VerifyGeometry {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        a: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Equation and leaf residual tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Sample configuration JSON; overrides --seed, --count, --tol
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the sampled points of Q_r as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<RunReport>,
}

/// A validated configuration file of any of the three kinds.
#[derive(Debug)]
pub enum LoadedConfig {
    Conifold(ConifoldConfig),
    Ring(Box<GlobalRingData>),
    Sample(SampleConfig),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read `{}`: {e}", path.display())))
}

/// Loads and validates a config, telling the kinds apart by their keys:
/// `theta` for a conifold, `basis` for ring data, `seed` for sampling.
pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("malformed JSON in `{}`: {e}", path.display())))?;
    if v.get("theta").is_some() {
        ConifoldConfig::from_json(&text).map(LoadedConfig::Conifold)
    } else if v.get("basis").is_some() {
        GlobalRingData::from_json(&text).map(|r| LoadedConfig::Ring(Box::new(r)))
    } else if v.get("seed").is_some() {
        SampleConfig::from_json(&text).map(LoadedConfig::Sample)
    } else {
        Err(Error::Config(format!(
            "`{}` is not a conifold, ring, or sample config",
            path.display()
        )))
    }
}

fn default_weight(r: u32) -> u32 {
    if r == 1 {
        0
    } else {
        1
    }
}

struct Run {
    pass: bool,
    summary: String,
    table: String,
    results: Value,
    provenance: Provenance,
    inputs: Vec<u8>,
}

impl Run {
    fn exact(pass: bool, summary: String, table: String, results: Value) -> Run {
        Run {
            pass,
            summary,
            table,
            results,
            provenance: Provenance::default(),
            inputs: Vec::new(),
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
///
/// Exit codes: 0 when every check passes, 1 when a verification fails, 2 on a
/// usage error, unreadable file, or invalid input.
pub fn dispatch<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: 0,
                        stdout: text,
                        stderr: String::new(),
                        report: None,
                    }
                }
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                    report: None,
                },
            };
        }
    };
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let run = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let code = if matches!(e, Error::BudgetExhausted(_)) { 1 } else { 2 };
            return Outcome {
                code,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                report: None,
            };
        }
    };
    let report = RunReport {
        inputs_digest: inputs_digest(&echo, &run.inputs),
        command: echo,
        pass: run.pass,
        summary: run.summary.clone(),
        provenance: run.provenance,
        results: run.results,
    };
    let stdout = if cli.json {
        let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        run.table
    };
    Outcome {
        code: if run.pass { 0 } else { 1 },
        stdout,
        stderr: String::new(),
        report: Some(report),
    }
}

fn run(cmd: &Command) -> Result<Run> {
    match cmd {
        Command::Ring { r, a, side } => ring(*r, a.unwrap_or(default_weight(*r)), *side),
        Command::Gw { r, a, d } => gw(*r, a.unwrap_or(default_weight(*r)), *d),
        Command::Threepoint { r, a, side, classes } => {
            threepoint(*r, a.unwrap_or(default_weight(*r)), *side, classes)
        }
        Command::FlopCheck { r, a } => flop_check(*r, *a),
        Command::Resolve { config, max_kappa } => resolve_cmd(config, *max_kappa),
        Command::RuanVerify { config, charts, seed } => ruan(config.as_deref(), charts.as_deref(), *seed),
        Command::VerifyGeometry {
            r,
            a,
            seed,
            count,
            tol,
            config,
            csv,
        } => {
            let mut inputs = Vec::new();
            let cfg = match config {
                Some(p) => {
                    inputs = read(p)?.into_bytes();
                    match load_config(p)? {
                        LoadedConfig::Sample(c) => c,
                        _ => return Err(Error::Config(format!("`{}` is not a sample config", p.display()))),
                    }
                }
                None => {
                    let mut c = SampleConfig::new(*seed, *count);
                    if let Some(t) = tol {
                        c.tol_eq = *t;
                    }
                    c
                }
            };
            let mut out = geometry(*r, a.unwrap_or(default_weight(*r)), &cfg, csv.as_deref())?;
            out.inputs = inputs;
            Ok(out)
        }
    }
}

fn ring(r: u32, a: u32, side: Side) -> Result<Run> {
    let model = validate_model(r, a, side)?;
    let basis: Vec<Value> = cr_basis(&model)
        .iter()
        .map(|(l, d)| json!({"label": l.to_string(), "degree": format_rational(d)}))
        .collect();
    let mut table = format!("{model}\nbasis:");
    for (l, d) in cr_basis(&model) {
        write!(table, " {l} ({})", format_rational(&d)).unwrap();
    }
    table.push('\n');
    let mut products = Vec::new();
    for (x, y, p) in product_table(&model) {
        let value = match &p {
            Some(c) => c.to_string(),
            None => "requires global pairing data".to_string(),
        };
        writeln!(table, "{x} * {y} = {value}").unwrap();
        products.push(json!({"left": x.to_string(), "right": y.to_string(), "product": p.map(|c| c.to_string())}));
    }
    let summary = format!("{} basis classes, {} products", basis.len(), products.len());
    Ok(Run::exact(
        true,
        summary,
        table,
        json!({"model": model.to_string(), "basis": basis, "products": products}),
    ))
}

fn gw(r: u32, a: u32, d: u32) -> Result<Run> {
    let model = validate_model(r, a, Side::S)?;
    let v = gw_invariant(&model, d)?;
    let s = format_rational(&v);
    Ok(Run::exact(
        true,
        format!("N(r = {r}, d = {d}) = {s}"),
        format!("{s}\n"),
        json!({"r": r, "a": a, "d": d, "value": s}),
    ))
}

fn threepoint(r: u32, a: u32, side: Side, classes: &[String]) -> Result<Run> {
    let model = validate_model(r, a, side)?;
    let parsed: Vec<CRClass> = classes
        .iter()
        .map(|c| CRClass::parse(&model, c))
        .collect::<Result<_>>()?;
    let tp = quantum_three_point(&model, [&parsed[0], &parsed[1], &parsed[2]])?;
    let table = format!(
        "{model}\nclassical: {}\nquantum:   {}\n",
        tp.classical,
        tp.quantum.display_with(model.ray_variable())
    );
    Ok(Run::exact(
        true,
        "three-point function evaluated".into(),
        table,
        json!({
            "model": model.to_string(),
            "inputs": parsed.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "classical": tp.classical,
            "quantum": tp.quantum,
        }),
    ))
}

fn flop_check(r: u32, a: Option<u32>) -> Result<Run> {
    let weights = match a {
        Some(a) => vec![a],
        None => valid_weights(r),
    };
    let reports: Vec<LocalFlopReport> = weights
        .iter()
        .map(|&a| local_flop_check(r, a))
        .collect::<Result<_>>()?;
    let mut table = String::new();
    let mut results = Vec::new();
    for rep in &reports {
        let failed: Vec<_> = rep.triples.iter().filter(|t| !t.pass).collect();
        writeln!(
            table,
            "r = {}, a = {}: {} triples, {}",
            rep.r,
            rep.a,
            rep.triples.len(),
            if rep.all_pass { "all pass".to_string() } else { format!("{} fail", failed.len()) }
        )
        .unwrap();
        for f in &failed {
            writeln!(table, "  ({}, {}, {}): total {}", f.inputs[0], f.inputs[1], f.inputs[2], f.total).unwrap();
        }
        results.push(json!({
            "r": rep.r,
            "a": rep.a,
            "triples": rep.triples.len(),
            "all_pass": rep.all_pass,
            "failures": failed,
        }));
    }
    let pass = reports.iter().all(|r| r.all_pass);
    let summary = format!(
        "local flop identity {} for r = {r}",
        if pass { "holds" } else { "fails" }
    );
    Ok(Run::exact(pass, summary, table, json!(results)))
}

fn resolve_cmd(path: &Path, cap: usize) -> Result<Run> {
    let text = read(path)?;
    let cfg = match load_config(path)? {
        LoadedConfig::Conifold(c) => c,
        _ => return Err(Error::Config(format!("`{}` is not a conifold config", path.display()))),
    };
    let rep = resolve(&cfg, cap)?;
    let summary = format!(
        "{} of {} small resolutions admit a symplectic structure",
        rep.feasible.len(),
        rep.patterns_examined
    );
    let mut run = Run::exact(true, summary, rep.summary(), serde_json::to_value(&rep).expect("serializable"));
    run.inputs = text.into_bytes();
    Ok(run)
}

#[derive(Deserialize)]
struct RuanConfig {
    x: GlobalRingWire,
    y: Option<GlobalRingWire>,
    correspondence: Option<FlopCorrespondence>,
}

fn parse_charts(s: &str) -> Result<Vec<(u32, u32)>> {
    s.split(',')
        .map(|c| {
            let (r, a) = c
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("chart `{c}` is not of the form r:a")))?;
            let num = |t: &str| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad integer `{t}` in chart `{c}`")))
            };
            Ok((num(r)?, num(a)?))
        })
        .collect()
}

fn ruan(config: Option<&Path>, charts: Option<&str>, seed: u64) -> Result<Run> {
    let mut inputs = Vec::new();
    let (x, y, corr) = match (config, charts) {
        (Some(p), _) => {
            let text = read(p)?;
            let c: RuanConfig = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("malformed ring config `{}`: {e}", p.display())))?;
            inputs = text.into_bytes();
            let x = GlobalRingData::from_wire(c.x)?;
            match (c.y, c.correspondence) {
                (Some(y), Some(corr)) => (x, GlobalRingData::from_wire(y)?, corr),
                (None, None) => {
                    let (y, corr) = flop_ring(&x);
                    (x, y, corr)
                }
                _ => {
                    return Err(Error::Config(
                        "`y` and `correspondence` must be given together".into(),
                    ))
                }
            }
        }
        (None, Some(c)) => {
            let x = chart_ring(&parse_charts(c)?, seed)?;
            let (y, corr) = flop_ring(&x);
            (x, y, corr)
        }
        (None, None) => return Err(Error::Config("give --config or --charts".into())),
    };
    let rep = verify_ruan_isomorphism(&x, &y, &corr)?;
    // informational: associativity of the X-side product at t = 1/2
    let point: BTreeMap<RayId, Rational> =
        x.rays().iter().map(|r| (r.id.clone(), rat(1, 2))).collect();
    let assoc = associativity_report(&x, &point)?;
    let mut table = format!(
        "basis size {}, rays {}\npairing compatible: {}\nthree-point functions checked: {}\nstructure constants checked: {}\nmismatches: {}\n",
        x.dim(),
        x.rays().len(),
        rep.pairing_compatible,
        rep.three_point_checked,
        rep.structure_constants_checked,
        rep.mismatches.len()
    );
    for m in rep.mismatches.iter().take(10) {
        writeln!(table, "  {} {:?}: X -> {}, Y -> {}", m.kind, m.labels, m.x_value, m.y_value).unwrap();
    }
    writeln!(
        table,
        "associativity of X at t = 1/2 (informational): {} of {} triples fail",
        assoc.failures.len(),
        assoc.checked
    )
    .unwrap();
    let summary = format!(
        "Ruan rings {}",
        if rep.success { "are isomorphic" } else { "differ" }
    );
    let mut run = Run::exact(
        rep.success,
        summary,
        table,
        json!({"isomorphism": rep, "associativity": assoc}),
    );
    run.provenance.seed = charts.map(|_| seed);
    run.inputs = inputs;
    Ok(run)
}

fn geometry(r: u32, a: u32, cfg: &SampleConfig, csv: Option<&Path>) -> Result<Run> {
    let rep = certify(r, a, cfg)?;
    if let Some(path) = csv {
        let file = std::fs::File::create(path)
            .map_err(|e| Error::Config(format!("cannot write `{}`: {e}", path.display())))?;
        write_csv(&sample_qr(r, cfg)?, file)?;
    }
    let mut table = format!("r = {r}, a = {a}, seed {}, {} samples\n", cfg.seed, cfg.count);
    for c in &rep.checks {
        writeln!(
            table,
            "  {:<30} {:>6}/{:<6} worst {:.3e} ({} {:e})",
            c.name,
            c.passed,
            c.total,
            c.worst,
            c.bound,
            c.tolerance
        )
        .unwrap();
    }
    writeln!(
        table,
        "  closed-form pairing: max deviation {:.3e} with 2f|f'|^2, {:.3e} with 2f^2|f'|^2",
        rep.closed_form.max_dev_linear_f, rep.closed_form.max_dev_squared_f
    )
    .unwrap();
    let summary = format!(
        "geometry certification {}",
        if rep.all_pass { "passed" } else { "failed" }
    );
    let mut prov = Provenance {
        seed: Some(cfg.seed),
        ..Provenance::default()
    };
    for c in &rep.checks {
        prov.tolerances.insert(c.name.to_string(), c.tolerance);
    }
    Ok(Run {
        pass: rep.all_pass,
        summary,
        table,
        results: serde_json::to_value(&rep).expect("serializable"),
        provenance: prov,
        inputs: Vec::new(),
    })
}
