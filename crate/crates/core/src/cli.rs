//! `adialab` command-line front end.
//!
//! Every subcommand produces a report that is written either as CSV (header,
//! rows, then `# key=value,...` summary lines) or as a single JSON object
//! `{command, config, results, summary}`. Numbers in CSV use 17 significant
//! digits so values round-trip exactly. Output depends only on the arguments
//! and the seed; worker count (`ADIALAB_THREADS`) never changes it.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::dynamics::{
    evolve_with, find_constant_time, ConstantTime, ConstantTimeOptions, EvolveOptions,
    DEFAULT_TOLERANCE, DEFAULT_TRAJECTORY_SAMPLES,
};
use crate::error::Error;
use crate::hilbert::Overlap;
use crate::paths::{InterpolantSpec, Knot, PathModel};
use crate::schedule::{
    runtime_global, runtime_local_from_profile, sweep_scaling, RuntimeEstimate, RuntimeKind,
    DEFAULT_EPSILON,
};
use crate::spectra::{scan, validate_closed_forms, DEFAULT_POINTS};
use crate::theorems::{case_rng, crossing_campaign, variant_campaign};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const THREADS_ENV: &str = "ADIALAB_THREADS";

const DEFAULT_SEED: u64 = 42;
const DEFAULT_EVOLVE_TIME: f64 = 100.0;
const DEFAULT_SWEEP: [f64; 4] = [0.02, 0.05, 0.1, 0.2];
const VALIDATION_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "adialab", version, about = "Adiabatic path laboratory for projector search Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Overlap <alpha|beta> as `re,im`
    #[arg(long = "a", global = true, value_name = "RE,IM", allow_hyphen_values = true, value_parser = parse_complex)]
    overlap: Option<(f64, f64)>,
    #[arg(long, global = true, value_enum)]
    model: Option<ModelName>,
    /// Polynomial interpolant parameter, or `inv` for 1/|a|
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_x)]
    x: Option<XSetting>,
    /// Interpolant control point `s:f:g` (repeatable); endpoints are pinned
    #[arg(long = "fg", global = true, value_name = "S:F:G", value_parser = parse_knot)]
    fg: Vec<Knot>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Grid points for spectral scans
    #[arg(long = "n", global = true)]
    n_points: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// JSON file with default values for any of these options
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Instantaneous spectrum, gap and transition rate along the path
    Spectrum,
    /// Global and local adiabatic runtime estimates
    Schedule,
    /// Schrödinger evolution and final fidelity
    Evolve(EvolveArgs),
    /// Gap-crossing campaign for the general f/g path at zero overlap
    Theorem1(CampaignArgs),
    /// Zero-ground-energy variant campaign at zero overlap
    Theorem2(CampaignArgs),
    /// Runtime scaling over a list of real overlaps
    Sweep(SweepArgs),
    /// Closed-form spectra against the eigensolver on random overlaps
    Validate(CampaignArgs),
}

#[derive(Debug, Args)]
struct EvolveArgs {
    /// Total evolution time
    #[arg(long = "T", visible_alias = "time", value_name = "T")]
    time: Option<f64>,
    /// Integrator error tolerance per unit time
    #[arg(long)]
    tol: Option<f64>,
    /// Record 201 evenly spaced trajectory samples
    #[arg(long)]
    trajectory: bool,
    /// Search for the smallest time reaching this fidelity instead
    #[arg(long)]
    target: Option<f64>,
}

#[derive(Debug, Args)]
struct CampaignArgs {
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated overlap magnitudes
    #[arg(long = "a-list", value_parser = parse_list)]
    a_list: Option<Magnitudes>,
}

#[derive(Debug, Clone)]
struct Magnitudes(Vec<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Linear,
    Driving,
    General,
    Variant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Interpolant parameter: a fixed value or `1/|a|` per overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XSetting {
    Value(f64),
    Keyword(Keyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Keyword {
    Inv,
}

/// Fully resolved run configuration; also the schema of `--config` files,
/// where every field is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub overlap_re: f64,
    pub overlap_im: f64,
    pub model: ModelName,
    pub x: Option<XSetting>,
    /// Interior control points `[s, f, g]`.
    pub fg: Vec<[f64; 3]>,
    pub epsilon: f64,
    pub n_points: usize,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub time: f64,
    pub tolerance: f64,
    pub trajectory: bool,
    pub target: Option<f64>,
    pub trials: Option<usize>,
    pub a_list: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            overlap_re: 0.0,
            overlap_im: 0.0,
            model: ModelName::Linear,
            x: None,
            fg: Vec::new(),
            epsilon: DEFAULT_EPSILON,
            n_points: DEFAULT_POINTS,
            seed: DEFAULT_SEED,
            output_format: OutputFormat::Csv,
            output_path: None,
            time: DEFAULT_EVOLVE_TIME,
            tolerance: DEFAULT_TOLERANCE,
            trajectory: false,
            target: None,
            trials: None,
            a_list: DEFAULT_SWEEP.to_vec(),
        }
    }
}

impl RunConfig {
    fn overlap(&self) -> Result<Overlap, Error> {
        Overlap::new(self.overlap_re, self.overlap_im)
    }

    fn interpolants(&self, o: &Overlap) -> Result<InterpolantSpec, Error> {
        if !self.fg.is_empty() {
            let knots: Vec<Knot> = self.fg.iter().map(|k| Knot::new(k[0], k[1], k[2])).collect();
            return InterpolantSpec::pinned(&knots);
        }
        let x = match self.x {
            None => 0.0,
            Some(XSetting::Value(x)) => x,
            Some(XSetting::Keyword(Keyword::Inv)) => {
                if o.magnitude() == 0.0 {
                    return Err(Error::Domain("x = inv needs a non-zero overlap".into()));
                }
                1.0 / o.magnitude()
            }
        };
        InterpolantSpec::polynomial(x)
    }

    fn path_model(&self, o: &Overlap) -> Result<PathModel, Error> {
        Ok(match self.model {
            ModelName::Linear => PathModel::Linear,
            ModelName::Driving => PathModel::Driving,
            ModelName::General => PathModel::GeneralFG(self.interpolants(o)?),
            ModelName::Variant => PathModel::VariantShifted(self.interpolants(o)?),
        })
    }
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `re,im`, got `{s}`"))?;
    let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((re, im))
}

fn parse_x(s: &str) -> Result<XSetting, String> {
    if s == "inv" {
        Ok(XSetting::Keyword(Keyword::Inv))
    } else {
        s.parse::<f64>()
            .map(XSetting::Value)
            .map_err(|_| format!("expected a number or `inv`, got `{s}`"))
    }
}

fn parse_knot(s: &str) -> Result<Knot, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected `s:f:g`, got `{s}`"));
    }
    let v = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Knot::new(v[0], v[1], v[2]))
}

fn parse_list(s: &str) -> Result<Magnitudes, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad number `{p}`: {e}")))
        .collect::<Result<_, _>>()
        .map(Magnitudes)
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros removed.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One CSV cell or JSON summary value.
#[derive(Debug, Clone)]
enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(i) => json!(i),
            Cell::Text(t) => json!(t),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i.into())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(t: &str) -> Self {
        Cell::Text(t.to_string())
    }
}

struct Report {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    summary: Vec<(&'static str, Cell)>,
    results: Value,
    exit_code: i32,
}

impl Report {
    fn new(header: Vec<&'static str>, results: Value) -> Self {
        Report {
            header,
            rows: Vec::new(),
            summary: Vec::new(),
            results,
            exit_code: EXIT_OK,
        }
    }

    fn row(&mut self, cells: Vec<Cell>) {
        self.rows.push(cells);
    }

    fn summary(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    fn render(&self, command: &str, config: &RunConfig) -> String {
        match config.output_format {
            OutputFormat::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                if !self.summary.is_empty() {
                    let pairs: Vec<String> = self
                        .summary
                        .iter()
                        .map(|(k, v)| format!("{k}={}", v.csv()))
                        .collect();
                    out.push_str("# ");
                    out.push_str(&pairs.join(","));
                    out.push('\n');
                }
                out
            }
            OutputFormat::Json => {
                let summary: Map<String, Value> = self
                    .summary
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.json()))
                    .collect();
                let doc = json!({
                    "command": command,
                    "config": config,
                    "results": self.results,
                    "summary": summary,
                });
                let mut out = serde_json::to_string_pretty(&doc).expect("report is serializable");
                out.push('\n');
                out
            }
        }
    }
}

fn runtime_cells(est: &RuntimeEstimate) -> Vec<Cell> {
    let method = match est.method {
        crate::schedule::Method::Global => "global",
        crate::schedule::Method::Local => "local",
    };
    match est.kind {
        RuntimeKind::Finite { t } => vec![
            method.into(),
            "finite".into(),
            t.into(),
            Cell::Text(String::new()),
            Cell::Text(String::new()),
            est.epsilon.into(),
        ],
        RuntimeKind::Unbounded { witness_s, witness_gap } => vec![
            method.into(),
            "unbounded".into(),
            f64::INFINITY.into(),
            witness_s.into(),
            witness_gap.into(),
            est.epsilon.into(),
        ],
    }
}

fn runtime_kind(est: &RuntimeEstimate) -> &'static str {
    if est.is_unbounded() {
        "unbounded"
    } else {
        "finite"
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results are serializable")
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<Report, Error> {
    let o = cfg.overlap()?;
    let model = cfg.path_model(&o)?;
    let p = scan(&model, &o, cfg.n_points)?;
    let mut r = Report::new(vec!["s", "e0", "e1", "gap", "ground_energy", "rate"], to_value(&p.points));
    for pt in &p.points {
        r.row(vec![
            pt.s.into(),
            pt.e0.into(),
            pt.e1.into(),
            pt.gap.into(),
            pt.ground_energy.into(),
            pt.rate.into(),
        ]);
    }
    r.summary("delta_min", p.delta_min);
    r.summary("s_star", p.s_star);
    r.summary("delta_max", p.delta_max);
    r.summary("peak_ground_energy", p.peak_ground_energy);
    r.summary("s_peak", p.s_peak);
    r.summary("degenerate", p.degenerate);
    r.summary("kinks", p.points.iter().filter(|pt| pt.kink).count());
    Ok(r)
}

fn cmd_schedule(cfg: &RunConfig) -> Result<Report, Error> {
    let o = cfg.overlap()?;
    let model = cfg.path_model(&o)?;
    let p = scan(&model, &o, cfg.n_points)?;
    let global = runtime_global(&p, cfg.epsilon)?;
    let local = runtime_local_from_profile(&p, cfg.epsilon)?;
    let mut r = Report::new(
        vec!["method", "kind", "T", "witness_s", "witness_gap", "epsilon"],
        to_value(&[global, local]),
    );
    r.row(runtime_cells(&global));
    r.row(runtime_cells(&local));
    r.summary("delta_min", p.delta_min);
    r.summary("s_star", p.s_star);
    r.summary("delta_max", p.delta_max);
    r.summary("degenerate", p.degenerate);
    Ok(r)
}

fn cmd_evolve(cfg: &RunConfig) -> Result<Report, Error> {
    let o = cfg.overlap()?;
    let model = cfg.path_model(&o)?;
    if let Some(target) = cfg.target {
        let opts = ConstantTimeOptions::default();
        let found = find_constant_time(&model, &o, target, &opts)?;
        let mut r = Report::new(vec!["target", "kind", "t_star", "fidelity"], to_value(&found));
        match found {
            ConstantTime::Reached { t_star, fidelity } => {
                r.row(vec![target.into(), "reached".into(), t_star.into(), fidelity.into()]);
                r.summary("t_star", t_star);
            }
            ConstantTime::Unreachable { max_time, best_fidelity } => {
                r.row(vec![target.into(), "unreachable".into(), f64::INFINITY.into(), best_fidelity.into()]);
                r.summary("t_star", f64::INFINITY);
                r.summary("max_time", max_time);
            }
        }
        return Ok(r);
    }

    let opts = EvolveOptions {
        tolerance: cfg.tolerance,
        trajectory_samples: cfg.trajectory.then_some(DEFAULT_TRAJECTORY_SAMPLES),
        ..EvolveOptions::default()
    };
    let res = evolve_with(&model, &o, cfg.time, &opts)?;
    let state_cells = |psi: &crate::hilbert::StateVector2| -> Vec<Cell> {
        vec![psi.c1.re.into(), psi.c1.im.into(), psi.c2.re.into(), psi.c2.im.into()]
    };
    let mut r;
    if let Some(tr) = &res.trajectory {
        r = Report::new(vec!["t", "c1_re", "c1_im", "c2_re", "c2_im"], to_value(&res));
        for sample in tr {
            let mut row = vec![sample.t.into()];
            row.extend(state_cells(&sample.state));
            r.row(row);
        }
    } else {
        r = Report::new(
            vec!["T", "fidelity", "norm_drift", "c1_re", "c1_im", "c2_re", "c2_im", "steps"],
            to_value(&res),
        );
        let mut row = vec![res.total_time.into(), res.fidelity.into(), res.norm_drift.into()];
        row.extend(state_cells(&res.final_state));
        row.push(res.steps.into());
        r.row(row);
    }
    r.summary("fidelity", res.fidelity);
    r.summary("norm_drift", res.norm_drift);
    r.summary("T", res.total_time);
    r.summary("steps", res.steps);
    Ok(r)
}

fn cmd_theorem1(cfg: &RunConfig) -> Result<Report, Error> {
    let trials = cfg.trials.unwrap_or(1000);
    let campaign = crossing_campaign(trials, cfg.seed, cfg.epsilon, cfg.n_points)?;
    let mut r = Report::new(
        vec!["trial", "s_root", "F_at_root", "gap_at_root", "iterations", "runtime", "counterexample"],
        to_value(&campaign.trials),
    );
    for t in &campaign.trials {
        r.row(vec![
            t.index.into(),
            t.crossing.s_root.into(),
            t.crossing.f_at_root.into(),
            t.crossing.gap_at_root.into(),
            t.crossing.bisection_iterations.into(),
            runtime_kind(&t.runtime).into(),
            t.counterexample.into(),
        ]);
    }
    let max_gap = campaign
        .trials
        .iter()
        .map(|t| t.crossing.gap_at_root)
        .fold(0.0, f64::max);
    let verdict = if campaign.confirmed() {
        "THEOREM1_CONFIRMED"
    } else {
        "THEOREM1_COUNTEREXAMPLE"
    };
    r.summary("verdict", verdict);
    r.summary("trials", trials);
    r.summary("counterexamples", campaign.counterexamples);
    r.summary("max_gap_at_root", max_gap);
    r.summary("seed", cfg.seed);
    Ok(r)
}

fn cmd_theorem2(cfg: &RunConfig) -> Result<Report, Error> {
    let trials = cfg.trials.unwrap_or(200);
    let campaign = variant_campaign(trials, cfg.seed, cfg.epsilon, cfg.n_points)?;
    let mut r = Report::new(
        vec![
            "trial",
            "h_at_0",
            "h_at_1",
            "max_ground_energy",
            "delta_min",
            "s_root",
            "runtime",
            "counterexample",
        ],
        to_value(&campaign.trials),
    );
    for t in &campaign.trials {
        let rep = &t.report;
        r.row(vec![
            t.index.into(),
            rep.h_at_0.into(),
            rep.h_at_1.into(),
            rep.max_ground_energy.into(),
            rep.delta_min.into(),
            rep.crossing.s_root.into(),
            runtime_kind(&rep.runtime).into(),
            t.counterexample.into(),
        ]);
    }
    let verdict = if campaign.confirmed() {
        "THEOREM2_CONFIRMED"
    } else {
        "THEOREM2_COUNTEREXAMPLE"
    };
    r.summary("verdict", verdict);
    r.summary("trials", trials);
    r.summary("counterexamples", campaign.counterexamples);
    r.summary("seed", cfg.seed);
    Ok(r)
}

fn cmd_sweep(cfg: &RunConfig) -> Result<Report, Error> {
    let sweep = sweep_scaling(|o| cfg.path_model(o), &cfg.a_list, cfg.epsilon, cfg.n_points)?;
    let mut r = Report::new(
        vec![
            "overlap_magnitude",
            "T_global",
            "T_local",
            "delta_min",
            "peak_ground_energy",
            "driving_budget",
        ],
        to_value(&sweep.rows),
    );
    let time = |e: &RuntimeEstimate| e.time().unwrap_or(f64::INFINITY);
    for row in &sweep.rows {
        r.row(vec![
            row.overlap_magnitude.into(),
            time(&row.t_global).into(),
            time(&row.t_local).into(),
            row.delta_min.into(),
            row.peak_ground_energy.into(),
            row.driving_budget.into(),
        ]);
    }
    let slope = |s: Option<f64>| s.map(Cell::Num).unwrap_or_else(|| "absent".into());
    r.summary("slope_global", slope(sweep.slope_global));
    r.summary("slope_local", slope(sweep.slope_local));
    r.summary("slope_peak_energy", slope(sweep.slope_peak_energy));
    Ok(r)
}

fn cmd_validate(cfg: &RunConfig) -> Result<Report, Error> {
    let trials = cfg.trials.unwrap_or(50);
    let mut rows = Vec::new();
    for i in 0..trials {
        let mut rng = case_rng(cfg.seed, i as u64);
        let radius = rng.random::<f64>().sqrt();
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let o = Overlap::new(radius * angle.cos(), radius * angle.sin())?;
        let x = rng.random_range(0.0..10.0);
        let spec = InterpolantSpec::polynomial(x)?;
        let models = [
            PathModel::Linear,
            PathModel::Driving,
            PathModel::GeneralFG(spec.clone()),
            PathModel::VariantShifted(spec),
        ];
        for model in &models {
            let err = validate_closed_forms(model, &o, cfg.n_points)?;
            rows.push((model.name(), o, err));
        }
    }
    let results: Vec<Value> = rows
        .iter()
        .map(|(name, o, err)| {
            json!({"model": name, "overlap_re": o.a().re, "overlap_im": o.a().im, "max_abs_error": err})
        })
        .collect();
    let mut r = Report::new(
        vec!["model", "overlap_re", "overlap_im", "max_abs_error"],
        Value::Array(results),
    );
    let mut worst = 0.0_f64;
    for (name, o, err) in &rows {
        worst = worst.max(*err);
        r.row(vec![(*name).into(), o.a().re.into(), o.a().im.into(), (*err).into()]);
    }
    let pass = worst <= VALIDATION_TOL;
    r.summary("max_abs_error", worst);
    r.summary("tolerance", VALIDATION_TOL);
    r.summary("verdict", if pass { "PASS" } else { "FAIL" });
    if !pass {
        r.exit_code = EXIT_NUMERIC;
    }
    Ok(r)
}

type Runner = fn(&RunConfig) -> Result<Report, Error>;

fn merge(file: Option<RunConfig>, common: &CommonArgs, command: &Command) -> RunConfig {
    let mut cfg = file.unwrap_or_default();
    if let Some((re, im)) = common.overlap {
        cfg.overlap_re = re;
        cfg.overlap_im = im;
    }
    if let Some(m) = common.model {
        cfg.model = m;
    }
    if common.x.is_some() {
        cfg.x = common.x;
    }
    if !common.fg.is_empty() {
        cfg.fg = common.fg.iter().map(|k| [k.s, k.f, k.g]).collect();
    }
    if let Some(e) = common.epsilon {
        cfg.epsilon = e;
    }
    if let Some(n) = common.n_points {
        cfg.n_points = n;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(f) = common.format {
        cfg.output_format = f;
    }
    if common.output.is_some() {
        cfg.output_path = common.output.clone();
    }
    match command {
        Command::Evolve(args) => {
            if let Some(t) = args.time {
                cfg.time = t;
            }
            if let Some(t) = args.tol {
                cfg.tolerance = t;
            }
            cfg.trajectory |= args.trajectory;
            if args.target.is_some() {
                cfg.target = args.target;
            }
        }
        Command::Theorem1(args) | Command::Theorem2(args) | Command::Validate(args) => {
            if args.trials.is_some() {
                cfg.trials = args.trials;
            }
        }
        Command::Sweep(args) => {
            if let Some(list) = &args.a_list {
                cfg.a_list = list.0.clone();
            }
        }
        Command::Spectrum | Command::Schedule => {}
    }
    cfg
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) => EXIT_DOMAIN,
        Error::Numeric(_) | Error::Resource { .. } => EXIT_NUMERIC,
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| e.to_string())
}

/// Runs the command line `argv` (program name first) and returns the
/// process exit code: 0 on success, 1 for domain errors, 2 for numeric or
/// resource errors and 64 for usage errors.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };

    let file = match &cli.common.config {
        None => None,
        Some(path) => {
            let parsed = fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|text| serde_json::from_str::<RunConfig>(&text).map_err(|e| e.to_string()));
            match parsed {
                Ok(cfg) => Some(cfg),
                Err(e) => {
                    eprintln!("error: config {}: {e}", path.display());
                    return EXIT_DOMAIN;
                }
            }
        }
    };
    let cfg = merge(file, &cli.common, &cli.command);

    let (name, run): (&str, Runner) = match cli.command {
        Command::Spectrum => ("spectrum", cmd_spectrum),
        Command::Schedule => ("schedule", cmd_schedule),
        Command::Evolve(_) => ("evolve", cmd_evolve),
        Command::Theorem1(_) => ("theorem1", cmd_theorem1),
        Command::Theorem2(_) => ("theorem2", cmd_theorem2),
        Command::Sweep(_) => ("sweep", cmd_sweep),
        Command::Validate(_) => ("validate", cmd_validate),
    };

    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match &pool {
        Some(pool) => pool.install(|| run(&cfg)),
        None => run(&cfg),
    };
    let report = match outcome {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };

    let text = report.render(name, &cfg);
    let written = match &cfg.output_path {
        Some(path) => fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return EXIT_NUMERIC;
    }
    report.exit_code
}
