//! Shooting along r₀: winding scans, lattice-angle bracketing against r_L, and nodal classification.

use crate::certify::{admissible_steps, Annulus, Itinerary, LambdaSign, Step, StepKind, TwistCertificate};
use crate::error::{Error, Result};
use crate::flow::{count_zeros, integrate_with, Component, EventKind, FlowOptions, Trajectory, Window};
use crate::model::{angle_of, ArcKind, BoundaryArc, ProblemSpec, Quadrant};
use crate::numeric::{brent, geometric_bracket};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// A parametrized piece of a boundary arc: radius for rays and axes, polyline fraction for curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcSegment {
    pub arc: BoundaryArc,
    pub lo: f64,
    pub hi: f64,
}

impl ArcSegment {
    pub fn new(arc: BoundaryArc, lo: f64, hi: f64) -> Result<Self> {
        arc.validate()?;
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidSpec(format!("arc range [{lo}, {hi}]")));
        }
        if let ArcKind::ParamCurve { .. } = arc.kind {
            if lo < 0.0 || hi > 1.0 {
                return Err(Error::InvalidSpec("curve parameter must lie in [0, 1]".into()));
            }
        } else if lo < 0.0 {
            return Err(Error::InvalidSpec("ray radius must be non-negative".into()));
        }
        Ok(ArcSegment { arc, lo, hi })
    }

    pub fn point(&self, s: f64) -> (f64, f64) {
        match &self.arc.kind {
            ArcKind::ParamCurve { samples } => polyline_point(samples, s),
            _ => {
                let a = self.arc.angle().unwrap_or(0.0);
                let (sn, cs) = a.sin_cos();
                // exact zeros on the axes
                let x = if sn.abs() < 1e-15 { 0.0 } else { s * sn };
                let y = if cs.abs() < 1e-15 { 0.0 } else { s * cs };
                (x, y)
            }
        }
    }

    /// Sub-arc between the levels 𝓗₀ = c₁ and 𝓗₀ = c₂ (first crossings from the origin side).
    pub fn across_annulus(problem: &ProblemSpec, arc: BoundaryArc, c1: f64, c2: f64) -> Result<Self> {
        let probe = ArcSegment { arc: arc.clone(), lo: 0.0, hi: 1.0 };
        let level = |s: f64| {
            let (x, y) = probe.point(s);
            if problem.h.in_domain(y) {
                problem.hamiltonian(0, x, y)
            } else {
                f64::INFINITY
            }
        };
        let cross = |c: f64| -> Result<f64> {
            match &arc.kind {
                ArcKind::ParamCurve { .. } => {
                    let n = 2048;
                    let mut prev = 0.0;
                    for k in 1..=n {
                        let s = k as f64 / n as f64;
                        if level(s) >= c {
                            return brent(|s| level(s) - c, prev, s, 1e-15, 0.0);
                        }
                        prev = s;
                    }
                    Err(Error::NoBracket(format!("curve never reaches level {c}")))
                }
                _ => {
                    let (a, b) = geometric_bracket(|r| level(r) >= c, 1e-8)
                        .ok_or_else(|| Error::NoBracket(format!("arc never reaches level {c}")))?;
                    brent(|r| level(r).min(1e300) - c, a, b, 0.0, 1e-15)
                }
            }
        };
        ArcSegment::new(arc.clone(), cross(c1)?, cross(c2)?)
    }
}

fn polyline_point(samples: &[[f64; 2]], s: f64) -> (f64, f64) {
    let lens: Vec<f64> = samples.windows(2).map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1])).collect();
    let total: f64 = lens.iter().sum();
    let mut rem = s.clamp(0.0, 1.0) * total;
    for (k, l) in lens.iter().enumerate() {
        if rem <= *l || k + 1 == lens.len() {
            let f = if *l > 0.0 { (rem / l).min(1.0) } else { 0.0 };
            let (a, b) = (samples[k], samples[k + 1]);
            return (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]));
        }
        rem -= l;
    }
    (samples[0][0], samples[0][1])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ShotStatus {
    Ok,
    BlowUp,
    /// Entered hump i outside its annulus.
    Pruned(usize),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Shot {
    pub s: f64,
    pub theta: f64,
    pub end: (f64, f64),
    pub status: ShotStatus,
}

impl Shot {
    pub fn ok(&self) -> bool {
        self.status == ShotStatus::Ok
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootOptions {
    /// Initial scan resolution.
    pub samples: usize,
    pub max_doublings: usize,
    /// Consecutive doublings with an unchanged bracket count before stopping.
    pub stable_rounds: usize,
    /// Bisection depth for intervals that turn by more than π/2 or change status.
    pub refine_depth: usize,
    pub max_winding: Option<f64>,
    /// Discard shots entering hump i outside annulus i.
    pub annuli: Option<Vec<Annulus>>,
    /// Scan jitter; 0 disables it.
    pub seed: u64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions { samples: 4096, max_doublings: 4, stable_rounds: 2, refine_depth: 24, max_winding: None, annuli: None, seed: 0 }
    }
}

/// θ(L) and 𝒫_L(z₀) for one initial point.
pub fn shoot(problem: &ProblemSpec, z0: (f64, f64), annuli: Option<&[Annulus]>) -> Shot {
    let opts = FlowOptions::for_problem(problem).quiet();
    let l = problem.weight.length();
    let run = |a: f64, b: f64, z: (f64, f64)| integrate_with(problem, z, a, b, &opts, None);
    let mk = |theta: f64, end: (f64, f64), status| Shot { s: f64::NAN, theta, end, status };
    let Some(annuli) = annuli else {
        return match run(0.0, l, z0) {
            Ok(tr) if tr.blown_up => mk(f64::NAN, tr.end_point(), ShotStatus::BlowUp),
            Ok(tr) => mk(tr.end.theta, tr.end_point(), ShotStatus::Ok),
            Err(e) => mk(f64::NAN, z0, ShotStatus::Failed(e.to_string())),
        };
    };
    let w = &problem.weight;
    let mut z = z0;
    let mut theta = angle_of(z0.0, z0.1);
    for i in 0..=w.m() {
        if i > 0 {
            if let Some(a) = annuli.iter().find(|a| a.i == i) {
                if !a.contains(problem, z.0, z.1) {
                    return mk(f64::NAN, z, ShotStatus::Pruned(i));
                }
            }
        }
        let b = if i < w.m() { w.t(i + 1) } else { l };
        match run(w.t(i), b, z) {
            Ok(tr) if tr.blown_up => return mk(f64::NAN, tr.end_point(), ShotStatus::BlowUp),
            Ok(tr) => {
                theta += tr.winding();
                z = tr.end_point();
            }
            Err(e) => return mk(f64::NAN, z, ShotStatus::Failed(e.to_string())),
        }
    }
    mk(theta, z, ShotStatus::Ok)
}

fn shoot_at(problem: &ProblemSpec, seg: &ArcSegment, s: f64, annuli: Option<&[Annulus]>) -> Shot {
    let mut sh = shoot(problem, seg.point(s), annuli);
    sh.s = s;
    sh
}

/// Endpoint angle and position of 𝒫_L along the arc at n evenly spaced parameters.
pub fn scan_arc(problem: &ProblemSpec, seg: &ArcSegment, n_samples: usize, annuli: Option<&[Annulus]>) -> Vec<Shot> {
    let n = if seg.lo == seg.hi { 1 } else { n_samples.max(2) };
    (0..n)
        .into_par_iter()
        .map(|k| {
            let s = if n == 1 { seg.lo } else { seg.lo + (seg.hi - seg.lo) * k as f64 / (n - 1) as f64 };
            shoot_at(problem, seg, s, annuli)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodalVerdict {
    Consistent,
    /// Counts agree with the winding but the path is not one the itinerary diagram predicts.
    Unpredicted,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalCount {
    pub hump: bool,
    pub index: usize,
    pub start: f64,
    pub end: f64,
    pub x_zeros: usize,
    pub y_zeros: usize,
    pub theta_start: f64,
    pub theta_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalSignature {
    pub intervals: Vec<IntervalCount>,
    pub entries: Vec<Quadrant>,
    pub exits: Vec<Quadrant>,
    pub itinerary: Option<Itinerary>,
    /// αᵢ + jᵢ per hump, read off the x-zero count.
    pub lap_index: Vec<usize>,
    /// jᵢ when certificates are supplied.
    pub j: Vec<Option<i64>>,
    pub interior_x_zeros: usize,
    pub simple_zeros: bool,
    pub winding_consistent: bool,
    pub verdict: NodalVerdict,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalSolution {
    pub id: usize,
    pub arc_param: f64,
    pub x0: f64,
    pub y0: f64,
    pub target_angle: f64,
    pub theta_end: f64,
    pub residual: f64,
    pub signature: NodalSignature,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

impl NodalSolution {
    pub fn zeros_x(&self) -> Vec<usize> {
        self.signature.intervals.iter().map(|c| c.x_zeros).collect()
    }
    pub fn zeros_y(&self) -> Vec<usize> {
        self.signature.intervals.iter().map(|c| c.y_zeros).collect()
    }
    pub fn is_positive(&self) -> bool {
        self.signature.interior_x_zeros == 0 && self.y0 > 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub solutions: Vec<NodalSolution>,
    /// Bracket count after each scan pass.
    pub pass_counts: Vec<usize>,
    pub shots: usize,
    pub invalid_shots: usize,
    pub discarded: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
struct Key(f64);
impl Eq for Key {}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&o.0)
    }
}

fn target_angles(targets: &[BoundaryArc]) -> Result<Vec<f64>> {
    targets
        .iter()
        .map(|t| t.angle().ok_or_else(|| Error::InvalidSpec("r_L must be an axis or a ray".into())))
        .collect()
}

/// Lattice values φ + 2πk strictly between a and b.
fn lattice_between(a: f64, b: f64, phi: f64) -> Vec<f64> {
    let (lo, hi) = (a.min(b), a.max(b));
    let k0 = ((lo - phi) / (2.0 * PI)).floor() as i64;
    let k1 = ((hi - phi) / (2.0 * PI)).ceil() as i64;
    (k0..=k1).map(|k| phi + 2.0 * PI * k as f64).filter(|&v| v > lo && v < hi).collect()
}

pub fn find_solutions(problem: &ProblemSpec, seg: &ArcSegment, targets: &[BoundaryArc], opts: &ShootOptions) -> Result<SolveReport> {
    let phis = target_angles(targets)?;
    let annuli = opts.annuli.as_deref();
    let mut cache: BTreeMap<Key, Shot> = BTreeMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let theta0 = {
        let (x, y) = seg.point(seg.lo);
        angle_of(x, y)
    };
    let in_range = |v: f64| opts.max_winding.map_or(true, |w| (v - theta0).abs() <= w);
    let mut pass_counts = Vec::new();
    let mut n = opts.samples.max(2);
    let degenerate = seg.lo == seg.hi;
    let mut brackets: Vec<(Shot, Shot, f64)> = Vec::new();
    for pass in 0..=opts.max_doublings {
        let grid: Vec<f64> = if degenerate {
            vec![seg.lo]
        } else {
            let h = (seg.hi - seg.lo) / (n - 1) as f64;
            (0..n)
                .map(|k| {
                    let mut s = seg.lo + h * k as f64;
                    if opts.seed != 0 && k > 0 && k + 1 < n {
                        s += h * rng.gen_range(-0.25..0.25);
                    }
                    s
                })
                .collect()
        };
        let new: Vec<f64> = grid.into_iter().filter(|s| !cache.contains_key(&Key(*s))).collect();
        let shots: Vec<Shot> = new.par_iter().map(|&s| shoot_at(problem, seg, s, annuli)).collect();
        for sh in shots {
            cache.insert(Key(sh.s), sh);
        }
        refine(problem, seg, annuli, &mut cache, opts.refine_depth);
        brackets.clear();
        let pts: Vec<&Shot> = cache.values().collect();
        for w in pts.windows(2) {
            if !(w[0].ok() && w[1].ok()) {
                continue;
            }
            for &phi in &phis {
                for v in lattice_between(w[0].theta, w[1].theta, phi) {
                    if in_range(v) {
                        brackets.push((w[0].clone(), w[1].clone(), v));
                    }
                }
            }
        }
        pass_counts.push(brackets.len());
        log::debug!("scan pass {pass}: {} samples, {} brackets", cache.len(), brackets.len());
        if degenerate {
            break;
        }
        let k = pass_counts.len();
        if k > opts.stable_rounds && pass_counts[k - 1 - opts.stable_rounds..].iter().all(|&c| c == pass_counts[k - 1]) {
            break;
        }
        n = 2 * n - 1;
    }
    let invalid_shots = cache.values().filter(|s| !s.ok()).count();
    let shots = cache.len();
    let results: Vec<std::result::Result<(f64, f64), String>> = brackets
        .par_iter()
        .map(|(a, b, target)| {
            let f = |s: f64| {
                let sh = shoot_at(problem, seg, s, annuli);
                if sh.ok() {
                    sh.theta - target
                } else {
                    f64::NAN
                }
            };
            brent(f, a.s, b.s, 1e-12 * (seg.hi - seg.lo).abs().max(1e-300), 1e-13)
                .map(|s| (s, *target))
                .map_err(|e| format!("bracket [{}, {}] → {target}: {e}", a.s, b.s))
        })
        .collect();
    let mut discarded = Vec::new();
    let mut roots = Vec::new();
    for r in results {
        match r {
            Ok(v) => roots.push(v),
            Err(e) => discarded.push(e),
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    let built: Vec<std::result::Result<NodalSolution, String>> =
        roots.par_iter().map(|&(s, target)| build_solution(problem, seg, s, target)).collect();
    let mut solutions: Vec<NodalSolution> = Vec::new();
    for b in built {
        match b {
            Ok(sol) => {
                let dup = solutions.iter().any(|o| {
                    let d = (o.x0 - sol.x0).hypot(o.y0 - sol.y0);
                    d <= 1e-9 * o.x0.hypot(o.y0).max(1.0)
                });
                if dup {
                    discarded.push(format!("duplicate at s = {}", sol.arc_param));
                } else {
                    solutions.push(sol);
                }
            }
            Err(e) => discarded.push(e),
        }
    }
    for d in &discarded {
        log::info!("discarded: {d}");
    }
    for (k, s) in solutions.iter_mut().enumerate() {
        s.id = k;
    }
    Ok(SolveReport { solutions, pass_counts, shots, invalid_shots, discarded })
}

/// Insert midpoints where neighbours disagree in status or turn by more than π/2.
fn refine(problem: &ProblemSpec, seg: &ArcSegment, annuli: Option<&[Annulus]>, cache: &mut BTreeMap<Key, Shot>, depth: usize) {
    let min_width = 1e-12 * (seg.hi - seg.lo).abs().max(1e-300);
    for _ in 0..depth {
        let pts: Vec<&Shot> = cache.values().collect();
        let mids: Vec<f64> = pts
            .windows(2)
            .filter(|w| {
                let differ = w[0].ok() != w[1].ok();
                let steep = w[0].ok() && w[1].ok() && (w[1].theta - w[0].theta).abs() > 0.5 * PI;
                (differ || steep) && w[1].s - w[0].s > min_width
            })
            .map(|w| 0.5 * (w[0].s + w[1].s))
            .collect();
        if mids.is_empty() {
            break;
        }
        let shots: Vec<Shot> = mids.par_iter().map(|&s| shoot_at(problem, seg, s, annuli)).collect();
        for sh in shots {
            cache.insert(Key(sh.s), sh);
        }
    }
}

fn build_solution(problem: &ProblemSpec, seg: &ArcSegment, s: f64, target: f64) -> std::result::Result<NodalSolution, String> {
    let z0 = seg.point(s);
    let l = problem.weight.length();
    let tr = integrate_with(problem, z0, 0.0, l, &FlowOptions::for_problem(problem), None).map_err(|e| e.to_string())?;
    if tr.blown_up {
        return Err(format!("blow-up from s = {s}"));
    }
    let (x, y) = tr.end_point();
    let residual = x.hypot(y) * (tr.end.theta - target).sin().abs();
    let signature = signature(problem, &tr, None, Some(residual)).map_err(|e| e.to_string())?;
    Ok(NodalSolution { id: 0, arc_param: s, x0: z0.0, y0: z0.1, target_angle: target, theta_end: tr.end.theta, residual, signature, trajectory: tr })
}

pub fn classify_nodal(solution: &NodalSolution, problem: &ProblemSpec, certificates: Option<&[TwistCertificate]>) -> Result<NodalSignature> {
    signature(problem, &solution.trajectory, certificates, Some(solution.residual))
}

/// Signed count of lattice values offset + kπ in (a, b), shrunk by ε at both ends.
fn lattice_count(a: f64, b: f64, offset: f64, eps: f64) -> i64 {
    let (lo, hi) = (a + eps, b - eps);
    if hi <= lo {
        return 0;
    }
    let n = ((hi - offset) / PI).ceil() as i64 - ((lo - offset) / PI).floor() as i64 - 1;
    n.max(0)
}

pub fn signature(problem: &ProblemSpec, tr: &Trajectory, certificates: Option<&[TwistCertificate]>, residual: Option<f64>) -> Result<NodalSignature> {
    let w = &problem.weight;
    let m = w.m();
    let sign = LambdaSign::of(problem.lambda);
    let mut notes = Vec::new();
    let mut inconsistent = false;
    let mut unpredicted = false;
    let theta_at = |t: f64| tr.theta_at_switch(t).ok_or_else(|| Error::Integration(format!("no switch record at t = {t}")));
    let mut intervals = Vec::new();
    for sg in w.segments() {
        let x = count_zeros(tr, Component::X, Window::open(sg.start, sg.end))?;
        let y = count_zeros(tr, Component::Y, if sg.hump { Window::closed(sg.start, sg.end) } else { Window::open(sg.start, sg.end) })?;
        intervals.push(IntervalCount {
            hump: sg.hump,
            index: sg.index,
            start: sg.start,
            end: sg.end,
            x_zeros: x,
            y_zeros: y,
            theta_start: theta_at(sg.start)?,
            theta_end: theta_at(sg.end)?,
        });
    }
    // breakpoint zeros belong to the incoming interval
    let tol = 1e-9 * w.length().max(1.0);
    for e in tr.events_of(EventKind::XZero) {
        if let Some(k) = intervals.iter().position(|c| (e.t - c.end).abs() <= tol) {
            if k + 1 < intervals.len() {
                intervals[k].x_zeros += 1;
                notes.push(format!("x-zero at breakpoint t = {}", e.t));
            }
        }
    }
    // winding against events
    let mut winding_consistent = true;
    let eps = 1e-7;
    for c in &intervals {
        for (kind, offset, fwd) in [(EventKind::XZero, 0.0, 1i64), (EventKind::YZero, 0.5 * PI, -1i64)] {
            let net = lattice_count(c.theta_start, c.theta_end, offset, eps) - lattice_count(c.theta_end, c.theta_start, offset, eps);
            let signed: i64 = tr
                .events_of(kind)
                .filter(|e| e.t > c.start && e.t < c.end && e.theta > c.theta_start.min(c.theta_end) + eps && e.theta < c.theta_start.max(c.theta_end) - eps)
                .map(|e| {
                    let other = if kind == EventKind::XZero { e.y } else { e.x };
                    fwd * e.direction as i64 * other.signum() as i64
                })
                .sum();
            if signed != net {
                winding_consistent = false;
                notes.push(format!("{kind:?} winding mismatch on [{}, {}]: events {signed}, lattice {net}", c.start, c.end));
            }
        }
    }
    if !winding_consistent {
        inconsistent = true;
    }
    let l = w.length();
    let scale = tr.scale();
    let interior: Vec<_> = tr.events_of(EventKind::XZero).filter(|e| e.t > tol && e.t < l - tol).collect();
    let simple_zeros = interior.iter().all(|e| e.y.abs() > 1e-8 * scale);
    if !simple_zeros {
        inconsistent = true;
        notes.push("non-simple x-zero".into());
    }
    if let Some(r) = residual {
        if r > 1e-8 * scale {
            inconsistent = true;
            notes.push(format!("terminal residual {r:e}"));
        }
    }
    let entries: Vec<Quadrant> = (0..=m).map(|i| Quadrant::of_angle(intervals[2 * i].theta_start)).collect();
    let exits: Vec<Quadrant> = (0..m).map(|i| Quadrant::of_angle(intervals[2 * i].theta_end)).collect();
    let hump_x: Vec<usize> = (0..=m).map(|i| intervals[2 * i].x_zeros).collect();
    let lap_index: Vec<usize> = hump_x.iter().map(|&x| x.div_ceil(2)).collect();
    // itinerary
    let mut itinerary = None;
    if entries.iter().all(|k| matches!(k, Quadrant::I | Quadrant::III)) {
        let mut steps = Vec::new();
        for i in 0..m {
            let (k, via, next) = (entries[i], exits[i], entries[i + 1]);
            let kind = if next == k { StepKind::Horizontal } else { StepKind::Diagonal };
            let st = Step { kind, via };
            if !admissible_steps(k, sign).contains(&st) {
                unpredicted = true;
                notes.push(format!("step {}→{}→{} not admissible", k.label(), via.label(), next.label()));
            }
            steps.push(st);
        }
        itinerary = Some(Itinerary { kappas: entries.clone(), steps });
    } else {
        unpredicted = true;
        notes.push("hump entry outside quadrants I/III".into());
    }
    for i in 0..m {
        let (k, via, x) = (entries[i], exits[i], hump_x[i]);
        let expect_odd = if via == k.prev() {
            Some(true)
        } else if via == k.next() {
            Some(false)
        } else {
            None
        };
        match expect_odd {
            Some(odd) if (x % 2 == 1) != odd => {
                inconsistent = true;
                notes.push(format!("hump {i}: {x} x-zeros with exit in {}", via.label()));
            }
            None => {
                unpredicted = true;
                notes.push(format!("hump {i} exits in {}", via.label()));
            }
            _ => {}
        }
        let gap = &intervals[2 * i + 1];
        if problem.lambda <= 0.0 && gap.x_zeros > 1 {
            inconsistent = true;
            notes.push(format!("gap {i}: {} x-zeros for λ ≤ 0", gap.x_zeros));
        }
    }
    let j: Vec<Option<i64>> = (0..=m)
        .map(|i| {
            let c = certificates?.iter().find(|c| c.i == i)?;
            Some(lap_index[i] as i64 - c.alpha as i64)
        })
        .collect();
    if let Some(cs) = certificates {
        for i in 0..m {
            if let (Some(jj), Some(c)) = (j[i], cs.iter().find(|c| c.i == i)) {
                if jj < 1 || jj > (c.beta - c.alpha) as i64 {
                    unpredicted = true;
                    notes.push(format!("hump {i}: j = {jj} outside 1..={}", c.beta - c.alpha));
                }
            }
        }
    }
    let verdict = if inconsistent {
        NodalVerdict::Inconsistent
    } else if unpredicted {
        NodalVerdict::Unpredicted
    } else {
        NodalVerdict::Consistent
    };
    Ok(NodalSignature {
        interior_x_zeros: interior.len(),
        intervals,
        entries,
        exits,
        itinerary,
        lap_index,
        j,
        simple_zeros,
        winding_consistent,
        verdict,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autonomous::{branch_point, sigma_n};
    use crate::model::*;

    #[test]
    fn lattice() {
        assert_eq!(lattice_between(0.0, 7.0, 0.0), vec![2.0 * PI]);
        assert_eq!(lattice_between(7.0, 0.5, PI).len(), 1);
        assert_eq!(lattice_count(0.0, 2.0 * PI, 0.0, 1e-7), 1);
        assert_eq!(lattice_count(0.1, 3.5 * PI, 0.5 * PI, 1e-7), 3);
    }

    #[test]
    fn degenerate_arc_single_sample() {
        let pr = ProblemSpec::semilinear(3.0, 0.0, StepWeight::constant(1.0, 1.0).unwrap()).unwrap();
        let seg = ArcSegment::new(BoundaryArc::positive_y(), 2.0, 2.0).unwrap();
        assert_eq!(scan_arc(&pr, &seg, 100, None).len(), 1);
    }

    #[test]
    fn monotone_scan_lambda0() {
        let pr = ProblemSpec::semilinear(3.0, 0.0, StepWeight::constant(1.0, 3.0).unwrap()).unwrap();
        let seg = ArcSegment::new(BoundaryArc::positive_y(), 0.1, 10.0).unwrap();
        let sc = scan_arc(&pr, &seg, 400, None);
        assert!(sc.windows(2).all(|w| w[1].theta > w[0].theta));
    }

    #[test]
    fn autonomous_dirichlet_unique_positive() {
        let l = PI;
        let (lam, mu) = (0.3, 1.0);
        let pr = ProblemSpec::semilinear(3.0, lam, StepWeight::constant(mu, l).unwrap()).unwrap();
        let seg = ArcSegment::new(BoundaryArc::positive_y(), 1e-3, 30.0).unwrap();
        let opts = ShootOptions { samples: 512, ..Default::default() };
        let rep = find_solutions(&pr, &seg, &[BoundaryArc::positive_y(), BoundaryArc::negative_y()], &opts).unwrap();
        let pos: Vec<_> = rep.solutions.iter().filter(|s| s.is_positive()).collect();
        assert_eq!(pos.len(), 1);
        let b = branch_point(1, lam, mu, 3.0, l).unwrap().unwrap();
        // the positive solution peaks at x₊ of the branch
        let xmax = pos[0].trajectory.samples.iter().map(|s| s.x).fold(0.0, f64::max);
        assert!((xmax - b.x_plus).abs() < 1e-4 * b.x_plus.max(1.0));
        assert_eq!(pos[0].signature.verdict, NodalVerdict::Consistent);
        // nodal solutions: node count n−1 with equidistant nodes
        for s in &rep.solutions {
            let n = s.signature.interior_x_zeros + 1;
            let nodes: Vec<f64> = s.trajectory.events_of(EventKind::XZero).map(|e| e.t).filter(|&t| t > 1e-9 && t < l - 1e-9).collect();
            for (k, t) in nodes.iter().enumerate() {
                assert!((t - (k + 1) as f64 * l / n as f64).abs() < 1e-6 * l);
            }
            assert!(lam < sigma_n(n as u32, l));
        }
    }

    #[test]
    fn no_solution_above_sigma() {
        let l = PI;
        let pr = ProblemSpec::semilinear(3.0, 1.2, StepWeight::constant(1.0, l).unwrap()).unwrap();
        let seg = ArcSegment::new(BoundaryArc::positive_y(), 1e-3, 10.0).unwrap();
        let opts = ShootOptions { samples: 256, ..Default::default() };
        let rep = find_solutions(&pr, &seg, &[BoundaryArc::positive_y(), BoundaryArc::negative_y()], &opts).unwrap();
        assert!(rep.solutions.iter().all(|s| s.signature.interior_x_zeros >= 1));
    }

    #[test]
    fn across_annulus_levels() {
        let pr = ProblemSpec::semilinear(3.0, 1.0, StepWeight::constant(20.0, 1.0).unwrap()).unwrap();
        let seg = ArcSegment::across_annulus(&pr, BoundaryArc::positive_y(), 1.0, 5.0).unwrap();
        assert!((seg.lo - 2f64.sqrt()).abs() < 1e-12 && (seg.hi - 10f64.sqrt()).abs() < 1e-12);
    }
}
