//! Dormand-Prince 5(4) integration of the switched system with axis-crossing events,
//! unwrapped winding angle and the Poincaré maps.

use crate::error::{Error, Result};
use crate::model::{angle_of, ProblemSpec};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    XZero,
    YZero,
    HumpSwitch,
    BlowUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub kind: EventKind,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    /// +1 for a − → + crossing, −1 for + → −, 0 for a sign-preserving touch.
    pub direction: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    pub start: Sample,
    pub end: Sample,
    pub min_radius: f64,
    pub max_radius: f64,
    pub blown_up: bool,
    pub steps: usize,
}

impl Trajectory {
    pub fn end_point(&self) -> (f64, f64) {
        (self.end.x, self.end.y)
    }

    /// θ(t₁) − θ(t₀) without the origin check.
    pub fn winding(&self) -> f64 {
        self.end.theta - self.start.theta
    }

    pub fn scale(&self) -> f64 {
        self.max_radius.max(1.0)
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    /// θ at a hump switch or at either end.
    pub fn theta_at_switch(&self, t: f64) -> Option<f64> {
        let tol = 1e-12 * t.abs().max(1.0);
        if (t - self.start.t).abs() <= tol {
            return Some(self.start.theta);
        }
        if (t - self.end.t).abs() <= tol {
            return Some(self.end.theta);
        }
        self.events_of(EventKind::HumpSwitch).find(|e| (e.t - t).abs() <= tol).map(|e| e.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub tol: f64,
    pub max_step: f64,
    /// Keep every accepted step in `samples`.
    pub record: bool,
    /// Dense-output probes per step for sign changes.
    pub probes: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { tol: 1e-10, max_step: f64::INFINITY, record: true, probes: 4 }
    }
}

impl FlowOptions {
    pub fn for_problem(problem: &ProblemSpec) -> Self {
        FlowOptions { tol: problem.tol.ode, ..Default::default() }
    }
    pub fn quiet(mut self) -> Self {
        self.record = false;
        self
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

type V = [f64; 2];

struct Dense {
    t0: f64,
    h: f64,
    r: [V; 5],
}

impl Dense {
    fn at_s(&self, s: f64) -> V {
        let s1 = 1.0 - s;
        let mut out = [0.0; 2];
        for (k, o) in out.iter_mut().enumerate() {
            let r = &self.r;
            *o = r[0][k] + s * (r[1][k] + s1 * (r[2][k] + s * (r[3][k] + s1 * r[4][k])));
        }
        out
    }
    fn t(&self, s: f64) -> f64 {
        self.t0 + s * self.h
    }
}

fn wrap(d: f64) -> f64 {
    let mut d = d.rem_euclid(2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    }
    d
}

fn sgn(v: f64) -> i8 {
    if v < 0.0 {
        -1
    } else {
        1
    }
}

struct Run<'a> {
    problem: &'a ProblemSpec,
    opts: FlowOptions,
    t: f64,
    z: V,
    k1: Option<V>,
    theta: f64,
    raw: f64,
    h: f64,
    /// Compensated-summation carry for the state update.
    comp: V,
    traj: Trajectory,
    done: bool,
    checkpoint: Option<&'a mut dyn FnMut(&Sample)>,
}

impl<'a> Run<'a> {
    fn new(problem: &'a ProblemSpec, z0: V, t0: f64, opts: FlowOptions, mu0: f64, checkpoint: Option<&'a mut dyn FnMut(&Sample)>) -> Result<Self> {
        if !problem.h.in_domain(z0[1]) || !z0[0].is_finite() {
            return Err(Error::DomainViolation(format!("initial point ({}, {}) outside the phase domain", z0[0], z0[1])));
        }
        let raw = angle_of(z0[0], z0[1]);
        let s = Sample { t: t0, x: z0[0], y: z0[1], theta: raw };
        let r = z0[0].hypot(z0[1]);
        let mut run = Run {
            problem,
            opts,
            t: t0,
            z: z0,
            k1: None,
            theta: raw,
            raw,
            h: 0.0,
            comp: [0.0; 2],
            traj: Trajectory {
                samples: if opts.record { vec![s] } else { vec![] },
                events: vec![],
                start: s,
                end: s,
                min_radius: r,
                max_radius: r,
                blown_up: false,
                steps: 0,
            },
            done: false,
            checkpoint,
        };
        // zeros sitting exactly at t0
        let d = run.problem.rhs(mu0, z0[0], z0[1]);
        if z0[0] == 0.0 {
            run.push_event(EventKind::XZero, t0, z0, sgn(d.0));
        }
        if z0[1] == 0.0 {
            run.push_event(EventKind::YZero, t0, z0, sgn(d.1));
        }
        Ok(run)
    }

    fn push_event(&mut self, kind: EventKind, t: f64, z: V, direction: i8) {
        let theta = self.theta + wrap(angle_of(z[0], z[1]) - self.raw);
        self.traj.events.push(Event { kind, t, x: z[0], y: z[1], theta, direction });
    }

    fn f(&self, mu: f64, z: V) -> Option<V> {
        if !z[0].is_finite() || !self.problem.h.in_domain(z[1]) {
            return None;
        }
        let (a, b) = self.problem.rhs(mu, z[0], z[1]);
        (a.is_finite() && b.is_finite()).then_some([a, b])
    }

    fn blow_up(&mut self) {
        self.traj.blown_up = true;
        self.push_event(EventKind::BlowUp, self.t, self.z, 0);
        self.done = true;
    }

    /// One attempted step of size h; None if a stage left the domain.
    fn attempt(&self, mu: f64, h: f64, k1: V) -> Option<(V, [V; 7], f64)> {
        let mut k = [[0.0; 2]; 7];
        k[0] = k1;
        let z = self.z;
        for s in 1..7 {
            let mut zz = z;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    zz[0] += h * a * kj[0];
                    zz[1] += h * a * kj[1];
                }
            }
            k[s] = self.f(mu, zz)?;
            if s == 6 {
                let tol = self.opts.tol;
                let mut acc = 0.0;
                for c in 0..2 {
                    let e: f64 = (0..7).map(|j| E[j] * k[j][c]).sum::<f64>() * h;
                    let sc = tol + tol * z[c].abs().max(zz[c].abs());
                    acc += (e / sc).powi(2);
                }
                return Some((zz, k, (acc / 2.0).sqrt()));
            }
        }
        unreachable!()
    }

    fn piece(&mut self, mu: f64, t_end: f64) {
        let dir = if t_end >= self.t { 1.0 } else { -1.0 };
        if self.h == 0.0 {
            self.h = (t_end - self.t).abs().clamp(1e-6, 1e-2);
        }
        while !self.done {
            let rem = (t_end - self.t).abs();
            if rem <= 1e-14 * self.t.abs().max(1.0) {
                break;
            }
            let k1 = match self.k1.or_else(|| self.f(mu, self.z)) {
                Some(k) => k,
                None => {
                    self.blow_up();
                    return;
                }
            };
            let mut h = self.h.min(self.opts.max_step);
            let last = h >= rem;
            if last {
                h = rem;
            }
            let hs = dir * h;
            match self.attempt(mu, hs, k1) {
                Some((z1, k, err)) if err <= 1.0 => {
                    let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    if !last {
                        self.h = h * fac;
                    } else {
                        self.h = self.h.max(h * fac);
                    }
                    let t1 = if last { t_end } else { self.t + hs };
                    let mut z1 = z1;
                    for (c, zc) in z1.iter_mut().enumerate() {
                        let inc = hs * (0..6).map(|j| A[6][j] * k[j][c]).sum::<f64>();
                        let y = inc - self.comp[c];
                        let sum = self.z[c] + y;
                        self.comp[c] = (sum - self.z[c]) - y;
                        *zc = sum;
                    }
                    self.accept(mu, z1, k, t1, hs);
                }
                Some((_, _, err)) => {
                    self.h = h * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                    self.k1 = Some(k1);
                }
                None => {
                    self.h = h * 0.25;
                    self.k1 = Some(k1);
                }
            }
            if !self.done && self.h < 1e-13 * self.t.abs().max(1.0) {
                self.blow_up();
            }
        }
    }

    fn accept(&mut self, mu: f64, z1: V, k: [V; 7], t1: f64, hs: f64) {
        let z0 = self.z;
        let mut r = [[0.0; 2]; 5];
        for c in 0..2 {
            let dy = z1[c] - z0[c];
            let bspl = hs * k[0][c] - dy;
            r[0][c] = z0[c];
            r[1][c] = dy;
            r[2][c] = bspl;
            r[3][c] = dy - hs * k[6][c] - bspl;
            r[4][c] = hs * (0..7).map(|j| D[j] * k[j][c]).sum::<f64>();
        }
        let dense = Dense { t0: self.t, h: t1 - self.t, r };
        let n = self.opts.probes.max(1);
        let mut prev_s = 0.0;
        let mut prev = z0;
        let mut found: Vec<(EventKind, f64, V, i8)> = Vec::new();
        for j in 1..=n {
            let s = j as f64 / n as f64;
            let cur = if j == n { z1 } else { dense.at_s(s) };
            for (c, kind) in [(0, EventKind::XZero), (1, EventKind::YZero)] {
                let (a, b) = (prev[c], cur[c]);
                if a != 0.0 && sgn(a) != sgn(b) && b != 0.0 || (a != 0.0 && b == 0.0) {
                    let fs = |s: f64| dense.at_s(s)[c];
                    let stol = 1e-13 / dense.h.abs().max(1e-300);
                    let root = if b == 0.0 { s } else { crate::numeric::brent(fs, prev_s, s, stol, 0.0).unwrap_or(0.5 * (prev_s + s)) };
                    let mut zr = if root == s { cur } else { dense.at_s(root) };
                    zr[c] = 0.0;
                    found.push((kind, dense.t(root), zr, if a < 0.0 { 1 } else { -1 }));
                }
            }
            // theta bookkeeping through the probes
            let raw = angle_of(cur[0], cur[1]);
            let rad = cur[0].hypot(cur[1]);
            self.traj.min_radius = self.traj.min_radius.min(rad);
            self.traj.max_radius = self.traj.max_radius.max(rad);
            found.sort_by(|a, b| a.1.total_cmp(&b.1));
            for (kind, t, z, d) in found.drain(..) {
                self.push_event(kind, t, z, d);
            }
            self.theta += wrap(raw - self.raw);
            self.raw = raw;
            prev = cur;
            prev_s = s;
        }
        self.t = t1;
        self.z = z1;
        self.k1 = Some(k[6]);
        self.traj.steps += 1;
        let _ = mu;
        if !(z1[0].abs() < 1e150 && z1[1].abs() < 1e150) {
            self.blow_up();
            return;
        }
        let s = Sample { t: t1, x: z1[0], y: z1[1], theta: self.theta };
        if self.opts.record {
            self.traj.samples.push(s);
        }
        if let Some(cb) = self.checkpoint.as_mut() {
            cb(&s);
        }
    }

    fn switch(&mut self) {
        self.k1 = None;
        if !self.done {
            self.push_event(EventKind::HumpSwitch, self.t, self.z, 0);
        }
    }

    fn finish(mut self) -> Trajectory {
        self.traj.end = Sample { t: self.t, x: self.z[0], y: self.z[1], theta: self.theta };
        self.traj
    }
}

/// Integrate the switched system on [t0, t1] ⊂ [0, L] (t1 < t0 integrates backwards).
pub fn integrate_with<'a>(
    problem: &'a ProblemSpec,
    z0: (f64, f64),
    t0: f64,
    t1: f64,
    opts: &FlowOptions,
    checkpoint: Option<&'a mut dyn FnMut(&Sample)>,
) -> Result<Trajectory> {
    let l = problem.weight.length();
    let slack = 1e-12 * l.max(1.0);
    if !(t0.is_finite() && t1.is_finite()) || t0 == t1 || t0.min(t1) < -slack || t0.max(t1) > l + slack {
        return Err(Error::InvalidWindow { t0, t1 });
    }
    let forward = t1 > t0;
    let mut segs = problem.weight.segments();
    if !forward {
        segs.reverse();
    }
    let active: Vec<_> = segs
        .into_iter()
        .filter(|s| if forward { s.end > t0 && s.start < t1 } else { s.start < t0 && s.end > t1 })
        .collect();
    let mu0 = active.first().map(|s| s.mu).unwrap_or(0.0);
    let mut run = Run::new(problem, [z0.0, z0.1], t0, *opts, mu0, checkpoint)?;
    for (k, s) in active.iter().enumerate() {
        if k > 0 {
            run.switch();
        }
        let stop = if forward { s.end.min(t1) } else { s.start.max(t1) };
        run.piece(s.mu, stop);
        if run.done {
            break;
        }
    }
    Ok(run.finish())
}

pub fn integrate(problem: &ProblemSpec, z0: (f64, f64), t0: f64, t1: f64) -> Result<Trajectory> {
    if !(t0 < t1) {
        return Err(Error::InvalidWindow { t0, t1 });
    }
    integrate_with(problem, z0, t0, t1, &FlowOptions::for_problem(problem), None)
}

/// Constant-weight system x' = h(y), y' = −λx − μg(x) over [0, duration] (negative duration runs backwards).
pub fn integrate_autonomous(problem: &ProblemSpec, mu: f64, z0: (f64, f64), duration: f64, opts: &FlowOptions) -> Result<Trajectory> {
    if !duration.is_finite() || duration == 0.0 {
        return Err(Error::InvalidWindow { t0: 0.0, t1: duration });
    }
    let mut run = Run::new(problem, [z0.0, z0.1], 0.0, *opts, mu, None)?;
    run.piece(mu, duration);
    Ok(run.finish())
}

/// Time of the first return to the starting half-axis crossing of y = 0.
pub fn first_return_time(problem: &ProblemSpec, mu: f64, x0: f64, guess: f64) -> Result<f64> {
    let mut dur = guess.max(1e-3) * 1.5;
    for _ in 0..40 {
        let tr = integrate_autonomous(problem, mu, (x0, 0.0), dur, &FlowOptions::for_problem(problem).quiet())?;
        if tr.blown_up {
            return Err(Error::BlowUp { t: tr.end.t, y: tr.end.y });
        }
        let ev: Vec<_> = tr.events_of(EventKind::YZero).filter(|e| e.t > 0.0).collect();
        if ev.len() >= 2 {
            return Ok(ev[1].t);
        }
        dur *= 2.0;
    }
    Err(Error::Integration(format!("no return from ({x0}, 0)")))
}

fn endpoint(tr: Trajectory) -> Result<(f64, f64)> {
    if tr.blown_up {
        return Err(Error::BlowUp { t: tr.end.t, y: tr.end.y });
    }
    Ok(tr.end_point())
}

/// Φᵢ: flow across the hump [tᵢ, sᵢ].
pub fn poincare_phi(problem: &ProblemSpec, i: usize, z0: (f64, f64)) -> Result<(f64, f64)> {
    let w = &problem.weight;
    if i > w.m() {
        return Err(Error::OutOfRange(format!("hump {i}")));
    }
    endpoint(integrate_with(problem, z0, w.t(i), w.s(i), &FlowOptions::for_problem(problem).quiet(), None)?)
}

/// Ψᵢ: flow across the gap [sᵢ, tᵢ₊₁].
pub fn poincare_psi(problem: &ProblemSpec, i: usize, z0: (f64, f64)) -> Result<(f64, f64)> {
    let w = &problem.weight;
    if i >= w.m() {
        return Err(Error::OutOfRange(format!("gap {i}")));
    }
    endpoint(integrate_with(problem, z0, w.s(i), w.t(i + 1), &FlowOptions::for_problem(problem).quiet(), None)?)
}

/// 𝒫_L = Φₘ∘Ψₘ₋₁∘…∘Ψ₀∘Φ₀.
pub fn poincare_full(problem: &ProblemSpec, z0: (f64, f64)) -> Result<(f64, f64)> {
    endpoint(integrate_with(problem, z0, 0.0, problem.weight.length(), &FlowOptions::for_problem(problem).quiet(), None)?)
}

pub fn winding(traj: &Trajectory) -> Result<f64> {
    if traj.min_radius < 1e-9 * traj.scale() {
        let t = traj.samples.iter().min_by(|a, b| a.x.hypot(a.y).total_cmp(&b.x.hypot(b.y))).map(|s| s.t).unwrap_or(traj.start.t);
        return Err(Error::OriginCrossing { t });
    }
    Ok(traj.winding())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Component {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub a: f64,
    pub b: f64,
    pub closed: bool,
}

impl Window {
    pub fn open(a: f64, b: f64) -> Self {
        Window { a, b, closed: false }
    }
    pub fn closed(a: f64, b: f64) -> Self {
        Window { a, b, closed: true }
    }
}

/// Simple sign changes of one component inside the window; endpoint zeros count only when closed.
pub fn count_zeros(traj: &Trajectory, component: Component, window: Window) -> Result<usize> {
    let kind = match component {
        Component::X => EventKind::XZero,
        Component::Y => EventKind::YZero,
    };
    let (a, b) = (window.a.min(window.b), window.a.max(window.b));
    // zeros within the integration accuracy of an end count as endpoint zeros
    let tol = 1e-9 * b.abs().max(1.0);
    let scale = traj.scale();
    let mut n = 0;
    let (mut at_a, mut at_b) = (false, false);
    for e in traj.events_of(kind) {
        if e.t < a - tol || e.t > b + tol {
            continue;
        }
        if e.direction == 0 {
            return Err(Error::TangentialZero { component: if kind == EventKind::XZero { 'x' } else { 'y' }, t: e.t });
        }
        if (e.t - a).abs() <= tol {
            at_a = true;
        } else if (e.t - b).abs() <= tol {
            at_b = true;
        } else {
            n += 1;
        }
    }
    if window.closed {
        let val = |s: &Sample| if component == Component::X { s.x } else { s.y };
        let near = |v: f64| v.abs() <= 1e-9 * scale;
        if (traj.start.t - a).abs() <= tol && near(val(&traj.start)) {
            at_a = true;
        }
        if (traj.end.t - b).abs() <= tol && near(val(&traj.end)) {
            at_b = true;
        }
        n += at_a as usize + at_b as usize;
    }
    Ok(n)
}

/// Largest relative drift of 𝓗ᵢ on humps and 𝓔 on gaps across recorded samples.
pub fn conservation_drift(problem: &ProblemSpec, traj: &Trajectory) -> f64 {
    let segs = problem.weight.segments();
    let mut worst: f64 = 0.0;
    for s in &segs {
        let inv = |x: f64, y: f64| if s.hump { problem.hamiltonian(s.index, x, y) } else { problem.energy(x, y) };
        let tol = 1e-12 * s.end.max(1.0);
        let pts: Vec<f64> = traj
            .samples
            .iter()
            .filter(|p| p.t >= s.start - tol && p.t <= s.end + tol)
            .map(|p| inv(p.x, p.y))
            .collect();
        if pts.len() < 2 {
            continue;
        }
        let r = pts[0];
        let scale = pts.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        for v in &pts {
            worst = worst.max((v - r).abs() / scale);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use crate::quadrature::{level_crossing, period, quarter_times};

    fn gap_problem(lambda: f64, len: f64) -> ProblemSpec {
        // m = 1 with a tiny first hump so [s₀, t₁] is a long linear gap
        let w = StepWeight::new(vec![0.0, 1e-3, 1e-3 + len, 2e-3 + len], vec![1.0, 1.0]).unwrap();
        ProblemSpec::semilinear(3.0, lambda, w).unwrap()
    }

    #[test]
    fn linear_rotation() {
        let pr = gap_problem(1.0, 10.0);
        let s = pr.weight.s(0);
        let tr = integrate(&pr, (1.0, 0.0), s, s + PI / 2.0).unwrap();
        let (x, y) = tr.end_point();
        assert!(x.abs() < 1e-8 && (y + 1.0).abs() < 1e-8);
        let tr = integrate(&pr, (0.0, 1.0), s, s + 2.0 * PI).unwrap();
        assert!((winding(&tr).unwrap() - 2.0 * PI).abs() < 1e-8);
        assert_eq!(count_zeros(&tr, Component::X, Window::open(s, s + 2.0 * PI)).unwrap(), 1);
        assert_eq!(count_zeros(&tr, Component::X, Window::closed(s, s + 2.0 * PI)).unwrap(), 3);
        assert_eq!(count_zeros(&tr, Component::Y, Window::open(s, s + 2.0 * PI)).unwrap(), 2);
    }

    #[test]
    fn hamiltonian_conserved_and_reversible() {
        let pr = ProblemSpec::semilinear(3.0, 0.7, StepWeight::uniform(1, 2.0, 1.0, 5.0).unwrap()).unwrap();
        let tr = integrate(&pr, (0.0, 2.0), 0.0, pr.weight.length()).unwrap();
        assert!(conservation_drift(&pr, &tr) < 1e-7);
        let back = integrate_with(&pr, tr.end_point(), pr.weight.length(), 0.0, &FlowOptions::default(), None).unwrap();
        let (x, y) = back.end_point();
        assert!(x.abs() < 1e-8 && (y - 2.0).abs() < 1e-8, "{x} {y}");
    }

    #[test]
    fn minkowski_blow_up() {
        let w = StepWeight::constant(50.0, 5.0).unwrap();
        let pr = ProblemSpec::new(
            HomeoSpec::MinkowskiInverse,
            NonlinSpec::PowerP { p: 3.0 },
            0.0,
            w,
            BoundaryArc::positive_y(),
            BoundaryArc::positive_y(),
        )
        .unwrap();
        let tr = integrate(&pr, (3.0, 0.0), 0.0, 5.0).unwrap();
        assert!(tr.blown_up);
        let ev = tr.events.last().unwrap();
        assert_eq!(ev.kind, EventKind::BlowUp);
        assert!(ev.t < 5.0 && ev.y < -0.99);
        assert!(poincare_full(&pr, (3.0, 0.0)).is_err());
    }

    #[test]
    fn psi_maps() {
        let pr = gap_problem(0.0, 2.0);
        let (x, y) = poincare_psi(&pr, 0, (0.7, 0.0)).unwrap();
        assert_eq!((x, y), (0.7, 0.0));
        let pr = gap_problem(-1.0, 2.0);
        let (x, y) = poincare_psi(&pr, 0, (1.0, -1.0)).unwrap();
        assert!((x + y).abs() < 1e-7 && x < 1.0 && x > 0.0);
        // saddle: stays in the first quadrant
        let s = pr.weight.s(0);
        for len in [0.5, 1.0, 1.9] {
            let tr = integrate(&pr, (0.3, 1.0), s, s + len).unwrap();
            assert!(winding(&tr).unwrap() < PI / 2.0);
        }
    }

    #[test]
    fn phi_periodic_and_quarter_times() {
        let mut pr = ProblemSpec::semilinear(3.0, 1.0, StepWeight::constant(20.0, 1.0).unwrap()).unwrap();
        let c = 5.0;
        let tp = period(&pr, 0, c).unwrap();
        pr.weight = StepWeight::constant(20.0, tp).unwrap();
        let lc = level_crossing(&pr, 0, c).unwrap();
        let (x, y) = poincare_phi(&pr, 0, (0.0, lc.y_plus)).unwrap();
        assert!(x.abs() < 1e-6 && (y - lc.y_plus).abs() < 1e-6);
        let tr = integrate(&pr, (0.0, lc.y_plus), 0.0, tp).unwrap();
        let q = quarter_times(&pr, 0, c).unwrap();
        let ev: Vec<_> = tr.events.iter().filter(|e| matches!(e.kind, EventKind::XZero | EventKind::YZero)).collect();
        // x=0 at t0, then y=0 (T_I), x=0 (T_IV), y=0 (T_III), x=0 at T
        assert!((ev[1].t - q.t_i).abs() < 1e-6);
        assert!((ev[2].t - ev[1].t - q.t_iv).abs() < 1e-6);
        assert!((ev[3].t - ev[2].t - q.t_iii).abs() < 1e-6);
        assert!((winding(&tr).unwrap() - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn return_time_matches_period() {
        let pr = ProblemSpec::semilinear(0.5, -0.5, StepWeight::constant(2.0, 1.0).unwrap()).unwrap();
        let c = 0.3;
        let lc = level_crossing(&pr, 0, c).unwrap();
        let tq = period(&pr, 0, c).unwrap();
        let tr = first_return_time(&pr, 2.0, lc.x_plus, tq).unwrap();
        assert!((tr - tq).abs() < 1e-6, "{tr} {tq}");
    }

    #[test]
    fn invalid_window() {
        let pr = gap_problem(1.0, 1.0);
        assert!(matches!(integrate(&pr, (1.0, 0.0), 0.5, 0.5), Err(Error::InvalidWindow { .. })));
        assert!(matches!(integrate(&pr, (1.0, 0.0), 0.0, 99.0), Err(Error::InvalidWindow { .. })));
    }
}
