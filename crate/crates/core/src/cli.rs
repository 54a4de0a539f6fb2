//! Config-driven task runner behind the `nodal-atlas` binary.

use crate::autonomous::branch_sweep;
use crate::certify::{
    check_compat, check_linear_window, check_twist, enumerate_itineraries, lower_bound, Annulus, BoundaryMode, LambdaSign, TwistVariant,
    Verdict, WindowParams, WindowVariant,
};
use crate::error::Error;
use crate::model::{NonlinSpec, ProblemSpec, Quadrant, Side, StepWeight, Tolerances};
use crate::quadrature::{lambda_bounds, level_crossing, quarter_times, script_t1};
use crate::shoot::{find_solutions, ArcSegment, ShootOptions, SolveReport};
use clap::Parser;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "nodal-atlas", version, about = "Period maps, twist certificates and nodal solutions of switched planar systems")]
pub struct Cli {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "tol-quad")]
    pub tol_quad: Option<f64>,
    #[arg(long = "tol-ode")]
    pub tol_ode: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskName {
    Periods,
    Twist,
    Windows,
    Itineraries,
    Bound,
    Solve,
    Sweep,
    ReproduceExample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub name: TaskName,
    #[serde(default)]
    pub params: toml::Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolSpec {
    pub quad: Option<f64>,
    pub ode: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: Option<ProblemSpec>,
    pub task: TaskSpec,
    pub output: Option<OutputSpec>,
    pub tolerances: Option<TolSpec>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(Error),
    Violated(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Violated(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "config error: {s}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Violated(s) => write!(f, "certification violated: {s}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(s) => CliError::Config(s),
            e => CliError::Numerical(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(p) = &cfg.problem {
        p.validate().map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(cfg)
}

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct Csv {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Csv { header: header.to_vec(), rows: vec![] }
    }
    pub fn row(&mut self, r: Vec<String>) {
        self.rows.push(r);
    }
    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
    /// JSON array of objects keyed by the CSV header.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: serde_json::Map<String, serde_json::Value> =
                    self.header.iter().zip(r).map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone()))).collect();
                serde_json::Value::Object(m)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

pub struct Outputs {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Outputs {
    pub fn new(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Outputs { dir: dir.to_path_buf(), written: vec![] })
    }
    fn write(&mut self, name: &str, body: &str) -> CliResult<()> {
        let p = self.dir.join(name);
        fs::write(&p, body).map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display())))?;
        self.written.push(p);
        Ok(())
    }
    pub fn table(&mut self, stem: &str, csv: &Csv) -> CliResult<()> {
        self.write(&format!("{stem}.csv"), &csv.render())?;
        let json = serde_json::to_string_pretty(&csv.to_json()).expect("serializable");
        self.write(&format!("{stem}.json"), &(json + "\n"))
    }
    pub fn svg(&mut self, name: &str, body: &str) -> CliResult<()> {
        self.write(name, body)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub tol_quad: Option<f64>,
    pub tol_ode: Option<f64>,
    pub seed: u64,
}

fn params<T: for<'de> Deserialize<'de>>(task: &TaskSpec) -> CliResult<T> {
    toml::Value::Table(task.params.clone()).try_into().map_err(|e: toml::de::Error| CliError::Config(format!("task.params: {e}")))
}

fn problem(cfg: &RunConfig, opts: &RunOptions) -> CliResult<ProblemSpec> {
    let mut p = cfg.problem.clone().ok_or_else(|| CliError::Config("missing [problem] section".into()))?;
    let mut tol = Tolerances::default();
    if let Some(t) = cfg.tolerances {
        tol.quad = t.quad.unwrap_or(tol.quad);
        tol.ode = t.ode.unwrap_or(tol.ode);
    }
    tol.quad = opts.tol_quad.unwrap_or(tol.quad);
    tol.ode = opts.tol_ode.unwrap_or(tol.ode);
    if !(tol.quad > 0.0 && tol.ode > 0.0) {
        return Err(CliError::Config("tolerances must be positive".into()));
    }
    p.tol = tol;
    Ok(p)
}

/// Run one config; returns the files written.
pub fn run(cfg: &RunConfig, out: &Path, opts: &RunOptions) -> CliResult<Vec<PathBuf>> {
    let mut o = Outputs::new(out)?;
    match cfg.task.name {
        TaskName::Periods => task_periods(cfg, opts, &mut o)?,
        TaskName::Twist => task_twist(cfg, opts, &mut o)?,
        TaskName::Windows => task_windows(cfg, opts, &mut o)?,
        TaskName::Itineraries => task_itineraries(cfg, opts, &mut o)?,
        TaskName::Bound => task_bound(cfg, opts, &mut o)?,
        TaskName::Solve => task_solve(cfg, opts, &mut o)?,
        TaskName::Sweep => task_sweep(cfg, opts, &mut o)?,
        TaskName::ReproduceExample => task_reproduce(cfg, &mut o)?,
    }
    Ok(o.written)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PeriodsParams {
    #[serde(default)]
    hump: usize,
    levels: Vec<f64>,
}

fn task_periods(cfg: &RunConfig, opts: &RunOptions, o: &mut Outputs) -> CliResult<()> {
    let pr = problem(cfg, opts)?;
    let p: PeriodsParams = params(&cfg.task)?;
    let mut csv = Csv::new(&["c", "T", "T_I", "T_II", "T_III", "T_IV", "error_est"]);
    for &c in &p.levels {
        let q = quarter_times(&pr, p.hump, c)?;
        csv.row(vec![num(c), num(q.period), num(q.t_i), num(q.t_ii), num(q.t_iii), num(q.t_iv), num(q.error)]);
    }
    o.table("periods", &csv)
}

fn parse_variant<T>(s: &str, f: fn(&str) -> Option<T>) -> CliResult<T> {
    f(s).ok_or_else(|| CliError::Config(format!("unknown variant {s}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistParams {
    #[serde(default)]
    hump: usize,
    c1: f64,
    c2: f64,
    alpha: u32,
    beta: u32,
    variant: String,
    tau: Option<f64>,
    #[serde(default = "yes")]
    expect: bool,
}

fn yes() -> bool {
    true
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "satisfied",
        Verdict::Violated => "violated",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn task_twist(cfg: &RunConfig, opts: &RunOptions, o: &mut Outputs) -> CliResult<()> {
    let pr = problem(cfg, opts)?;
    let p: TwistParams = params(&cfg.task)?;
    let v = parse_variant(&p.variant, TwistVariant::parse)?;
    let a = Annulus::new(&pr, p.hump, p.c1, p.c2)?;
    let tau = p.tau.unwrap_or_else(|| pr.weight.tau(p.hump));
    let ch = check_twist(&pr, &a, tau, p.alpha, p.beta, v)?;
    let mut csv = Csv::new(&["inequality", "lhs", "rhs", "slack", "error_est", "verdict"]);
    for q in &ch.inequalities {
        csv.row(vec![q.label.replace(',', ";"), num(q.lhs), num(q.rhs), num(q.slack), num(q.tol), verdict_label(q.verdict()).into()]);
    }
    o.table("twist", &csv)?;
    if p.expect && ch.verdict != Verdict::Satisfied {
        return Err(CliError::Violated(format!("twist {}: {}", p.variant, verdict_label(ch.verdict))));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowsParams {
    #[serde(default)]
    gap: usize,
    variant: String,
    c1: [f64; 2],
    c2: [f64; 2],
    varsigma: Option<f64>,
    kappa: Option<Quadrant>,
    c: Option<f64>,
    d_hat: Option<f64>,
    e_hat: Option<f64>,
    #[serde(default)]
    xi: u32,
    #[serde(default)]
    zeta: u32,
    #[serde(default = "yes")]
    expect: bool,
}

fn task_windows(cfg: &RunConfig, opts: &RunOptions, o: &mut Outputs) -> CliResult<()> {
    let pr = problem(cfg, opts)?;
    let p: WindowsParams = params(&cfg.task)?;
    let v = parse_variant(&p.variant, WindowVariant::parse)?;
    let a = Annulus::new(&pr, p.gap, p.c1[0], p.c2[0])?;
    let b = Annulus::new(&pr, p.gap + 1, p.c1[1], p.c2[1])?;
    let mut wp = WindowParams::new(&a, &b);
    wp.varsigma = p.varsigma;
    wp.kappa = p.kappa.unwrap_or(Quadrant::I);
    wp.c = p.c;
    wp.d_hat = p.d_hat;
    wp.e_hat = p.e_hat;
    wp.xi = p.xi;
    wp.zeta = p.zeta;
    let ch = check_linear_window(&pr, p.gap, v, &wp)?;
    let mut csv = Csv::new(&["inequality", "lhs", "rhs", "slack", "error_est", "verdict"]);
    for q in &ch.inequalities {
        csv.row(vec![q.label.replace(',', ";"), num(q.lhs), num(q.rhs), num(q.slack), num(q.tol), verdict_label(q.verdict()).into()]);
    }
    o.table("windows", &csv)?;
    if p.expect && ch.verdict != Verdict::Satisfied {
        return Err(CliError::Violated(format!("window {}: {}", p.variant, verdict_label(ch.verdict))));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ItinParams {
    m: Option<usize>,
    kappa0: Option<Quadrant>,
}

fn task_itineraries(cfg: &RunConfig, opts: &RunOptions, o: &mut Outputs) -> CliResult<()> {
    let pr = problem(cfg, opts)?;
    let p: ItinParams = params(&cfg.task)?;
    let m = p.m.unwrap_or_else(|| pr.weight.m());
    let its = enumerate_itineraries(m, LambdaSign::of(pr.lambda), p.kappa0.unwrap_or(Quadrant::I));
    let mut csv = Csv::new(&["index", "itinerary", "kappas", "channels"]);
    for (k, it) in its.iter().enumerate() {
        let kappas: Vec<&str> = it.kappas.iter().map(|q| q.label()).collect();
        let ch: Vec<String> = it.steps.iter().map(|s| format!("{:?}:{}", s.kind, s.via.label())).collect();
        csv.row(vec![k.to_string(), it.to_string(), kappas.join(";"), ch.join(";")]);
    }
    o.table("itineraries", &csv)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundParams {
    alpha: Vec<u32>,
    beta: Vec<u32>,
    c1: Vec<f64>,
    c2: Vec<f64>,
    variant: String,
    #[serde(default)]
    multipliers: Vec<u32>,
    #[serde(default)]
    all_four: bool,
}

fn task_bound(cfg: &RunConfig, opts: &RunOptions, o: &mut Outputs) -> CliResult<()> {
    let pr = problem(cfg, opts)?;
    let p: BoundParams = params(&cfg.task)?;
    let v = parse_variant(&p.variant, TwistVariant::parse)?;
    let m = pr.weight.m();
    let mut certs = Vec::new();
    let mut failures = Vec::new();
    for i in 0..=m {
        let (Some(&al), Some(&be), Some(&c1), Some(&c2)) = (p.alpha.get(i), p.beta.get(i), p.c1.get(i), p.c2.get(i)) else {
            return Err(CliError::Config(format!("bound needs alpha, beta, c1, c2 for hump {i}")));
        };
        let a = Annulus::new(&pr, i, c1, c2)?;
        let ch = check_twist(&pr, &a, pr.weight.tau(i), al, be, v)?;
        match ch.certificate {
            Some(c) => certs.push(c),
            None => failures.push(i),
        }
    }
    let mode = if p.all_four { BoundaryMode::AllFour } else { BoundaryMode::PerChoice };
    let bound = lower_bound(m, &certs, &p.multipliers, LambdaSign::of(pr.lambda), mode);
    let mut csv = Csv::new(&["itinerary", "product"]);
    if let Ok(b) = &bound {
        for (k, v) in &b.per_itinerary {
            csv.row(vec![k.clone(), v.to_string()]);
        }
        csv.row(vec!["total".into(), b.total.to_string()]);
    }
    o.table("bound", &csv)?;
    if !failures.is_empty() {
        return Err(CliError::Violated(format!("no twist certificate for humps {failures:?}")));
    }
    bound?;
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveParams {
    /// Annulus levels per hump; also the default arc range.
    c1: Option<Vec<f64>>,
    c2: Option<Vec<f64>>,
    arc_min: Option<f64>,
    arc_max: Option<f64>,
    #[serde(default)]
    prune: bool,
    samples: Option<usize>,
    max_doublings: Option<usize>,
    max_winding: Option<f64>,
}

fn task_solve(cfg: &RunConfig, opts: &RunOptions, o: &mut Outputs) -> CliResult<()> {
    let pr = problem(cfg, opts)?;
    let p: SolveParams = params(&cfg.task)?;
    let annuli = match (&p.c1, &p.c2) {
        (Some(a), Some(b)) if a.len() == pr.weight.m() + 1 && b.len() == a.len() => {
            Some((0..a.len()).map(|i| Annulus::new(&pr, i, a[i], b[i])).collect::<crate::Result<Vec<_>>>()?)
        }
        (None, None) => None,
        _ => return Err(CliError::Config("c1 and c2 need one entry per hump".into())),
    };
    let seg = match (p.arc_min, p.arc_max, &annuli) {
        (Some(lo), Some(hi), _) => ArcSegment::new(pr.r0.clone(), lo, hi)?,
        (None, None, Some(a)) => ArcSegment::across_annulus(&pr, pr.r0.clone(), a[0].c1, a[0].c2)?,
        _ => return Err(CliError::Config("solve needs arc_min/arc_max or annulus levels".into())),
    };
    let mut so = ShootOptions { seed: opts.seed, max_winding: p.max_winding, ..Default::default() };
    if let Some(n) = p.samples {
        so.samples = n;
    }
    if let Some(d) = p.max_doublings {
        so.max_doublings = d;
    }
    if p.prune {
        so.annuli = annuli.clone();
    }
    let rep = find_solutions(&pr, &seg, std::slice::from_ref(&pr.r_l), &so)?;
    o.table("solve", &solve_csv(&rep))?;
    o.svg("phase.svg", &phase_svg(&pr, annuli.as_deref(), &rep))
}

pub fn solve_csv(rep: &SolveReport) -> Csv {
    let mut csv = Csv::new(&["solution_id", "arc_param", "x0", "y0", "itinerary", "zeros_x_per_interval", "zeros_y_per_interval", "residual"]);
    for s in &rep.solutions {
        let j = |v: Vec<usize>| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";");
        csv.row(vec![
            s.id.to_string(),
            num(s.arc_param),
            num(s.x0),
            num(s.y0),
            s.signature.itinerary.as_ref().map(|i| i.to_string()).unwrap_or_else(|| "-".into()),
            j(s.zeros_x()),
            j(s.zeros_y()),
            num(s.residual),
        ]);
    }
    csv
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepParams {
    #[serde(default = "one")]
    n: u32,
    lambdas: Vec<f64>,
}

fn one() -> u32 {
    1
}

fn task_sweep(cfg: &RunConfig, opts: &RunOptions, o: &mut Outputs) -> CliResult<()> {
    let pr = problem(cfg, opts)?;
    let p: SweepParams = params(&cfg.task)?;
    let NonlinSpec::PowerP { p: pe } = pr.g else {
        return Err(CliError::Config("sweep needs a power nonlinearity".into()));
    };
    if pr.weight.m() != 0 {
        return Err(CliError::Config("sweep needs a constant weight (m = 0)".into()));
    }
    let sw = branch_sweep(p.n, &p.lambdas, pr.mu(0), pe, pr.weight.length())?;
    let mut csv = Csv::new(&["n", "lambda", "M_plus", "x_plus", "error_est"]);
    for b in &sw.points {
        csv.row(vec![b.n.to_string(), num(b.lambda), num(b.m_plus), num(b.x_plus), num(b.error_est)]);
    }
    o.table("sweep", &csv)?;
    let pts: Vec<(f64, f64)> = sw.points.iter().map(|b| (b.lambda, b.m_plus)).collect();
    o.svg("bifurcation.svg", &line_svg(&[pts], "λ", "M₊"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReproduceParams {
    name: String,
}

/// `reproduce-example 4.1` quantities for one parameter choice:
/// x_com, the λ = 1 transit 2∫₀^{x_com} dx/√(2c₁ − x²), x₊²(c₁), x₊²(c₂), 𝒯(c₁), 𝒯(c₂), each with an error estimate.
pub fn example41(mu: f64, c1: f64, c2: f64) -> crate::Result<Vec<(&'static str, f64, f64)>> {
    let w = StepWeight::uniform(1, 1.0, 1.0, mu)?;
    let pr = ProblemSpec::semilinear(3.0, 1.0, w)?;
    let cp = check_compat(&pr, 0, (c2, c2), c1)?;
    let transit = 2.0 * (cp.x_com / (2.0 * c1).sqrt()).asin();
    let l1 = level_crossing(&pr, 0, c1)?;
    let l2 = level_crossing(&pr, 0, c2)?;
    let q1 = quarter_times(&pr, 0, c1)?;
    let q2 = quarter_times(&pr, 0, c2)?;
    Ok(vec![
        ("x_com", cp.x_com, 1e-15 * cp.x_com),
        ("transit", transit, 1e-15),
        ("x_plus_sq_c1", l1.x_plus * l1.x_plus, 1e-15),
        ("x_plus_sq_c2", l2.x_plus * l2.x_plus, 1e-15),
        ("T_c1", q1.period, q1.error),
        ("T_c2", q2.period, q2.error),
    ])
}

/// `reproduce-example 4.2` quantities: 𝒯₁(1.5), 𝒯₁(14), Λ₁, Λ₂, 2Λ* (λ = −1 so √|λ| = 1).
pub fn example42() -> crate::Result<Vec<(&'static str, f64, f64)>> {
    let b = lambda_bounds(1.5, 14.0, 3.0, -1.0)?;
    Ok(vec![
        ("T1_1.5", script_t1(1.5, 3.0)?, 1e-12),
        ("T1_14", script_t1(14.0, 3.0)?, 1e-12),
        ("Lambda1", b.lambda1, 1e-15),
        ("Lambda2", b.lambda2, 1e-15),
        ("2Lambda_star", b.lambda_star, 1e-15),
    ])
}

fn task_reproduce(cfg: &RunConfig, o: &mut Outputs) -> CliResult<()> {
    let p: ReproduceParams = params(&cfg.task)?;
    match p.name.as_str() {
        "4.1" => {
            let mut csv = Csv::new(&["choice", "quantity", "value", "error_est"]);
            for (k, (mu, c1, c2)) in [(20.0, 1.0, 5.0), (130.0, 0.8, 20.0)].into_iter().enumerate() {
                for (q, v, e) in example41(mu, c1, c2)? {
                    csv.row(vec![(k + 1).to_string(), q.into(), num(v), num(e)]);
                }
            }
            o.table("example_4_1", &csv)
        }
        "4.2" => {
            let mut csv = Csv::new(&["quantity", "value", "error_est"]);
            for (q, v, e) in example42()? {
                csv.row(vec![q.into(), num(v), num(e)]);
            }
            o.table("example_4_2", &csv)
        }
        other => Err(CliError::Config(format!("unknown example {other}"))),
    }
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const PAD: f64 = 40.0;

fn bounds(series: &[Vec<(f64, f64)>]) -> (f64, f64, f64, f64) {
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in s {
            b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
        }
    }
    if !b.0.is_finite() {
        return (-1.0, 1.0, -1.0, 1.0);
    }
    if b.1 - b.0 < 1e-12 {
        b.0 -= 1.0;
        b.1 += 1.0;
    }
    if b.3 - b.2 < 1e-12 {
        b.2 -= 1.0;
        b.3 += 1.0;
    }
    b
}

/// Polylines on shared axes.
pub fn line_svg(series: &[Vec<(f64, f64)>], xlabel: &str, ylabel: &str) -> String {
    let (x0, x1, y0, y1) = bounds(series);
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n");
    let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(s, "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>", W - 2.0 * PAD, H - 2.0 * PAD);
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" font-size=\"12\">{xlabel} [{x0:.3}, {x1:.3}]</text>", PAD, H - 10.0);
    let _ = writeln!(s, "<text x=\"4\" y=\"{}\" font-size=\"12\">{ylabel} [{y0:.3}, {y1:.3}]</text>", PAD - 10.0);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    for (k, ser) in series.iter().enumerate() {
        if ser.is_empty() {
            continue;
        }
        let pts: Vec<String> = ser.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"{}\"/>", colors[k % colors.len()], pts.join(" "));
    }
    s.push_str("</svg>\n");
    s
}

/// Annulus boundaries of hump 0 and the found trajectories in the (x, y) plane.
pub fn phase_svg(problem: &ProblemSpec, annuli: Option<&[Annulus]>, rep: &SolveReport) -> String {
    let mut series = Vec::new();
    if let Some(a) = annuli.and_then(|a| a.first()) {
        for c in [a.c1, a.c2] {
            if let Ok(lc) = level_crossing(problem, 0, c) {
                let n = 200;
                let mut ring = Vec::new();
                for k in 0..=n {
                    let x = lc.x_minus + (lc.x_plus - lc.x_minus) * k as f64 / n as f64;
                    let v = c - problem.f(0, x);
                    if let Ok(y) = problem.h.h_inv(v.max(0.0), Side::Plus) {
                        ring.push((x, y));
                    }
                }
                for k in (0..=n).rev() {
                    let x = lc.x_minus + (lc.x_plus - lc.x_minus) * k as f64 / n as f64;
                    let v = c - problem.f(0, x);
                    if let Ok(y) = problem.h.h_inv(v.max(0.0), Side::Minus) {
                        ring.push((x, y));
                    }
                }
                series.push(ring);
            }
        }
    }
    for s in &rep.solutions {
        let step = (s.trajectory.samples.len() / 2000).max(1);
        series.push(s.trajectory.samples.iter().step_by(step).map(|p| (p.x, p.y)).collect());
    }
    line_svg(&series, "x", "y")
}

pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("NODAL_ATLAS_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parse flags, run, and map the outcome to an exit code.
pub fn main_with(cli: Cli) -> i32 {
    init_logging();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool: {e}");
        }
    }
    let text = match fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("config error: cannot read {}: {e}", cli.config.display());
            return 2;
        }
    };
    let res = parse_config(&text).and_then(|cfg| {
        let out = cli.out.clone().or_else(|| cfg.output.as_ref().map(|o| o.dir.clone())).unwrap_or_else(|| PathBuf::from("out"));
        let opts = RunOptions { tol_quad: cli.tol_quad, tol_ode: cli.tol_ode, seed: cli.seed };
        run(&cfg, &out, &opts)
    });
    match res {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
