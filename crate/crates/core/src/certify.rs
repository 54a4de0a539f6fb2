//! Twist, compatibility and linear-window certificates; itineraries and count bounds.

use crate::autonomous::critical_points;
use crate::error::{Error, Result};
use crate::model::{HomeoSpec, NonlinSpec, ProblemSpec, Quadrant, Side};
use crate::quadrature::{
    lambda_bounds, level_crossing, linear_period, quarter_times, solve_level_abscissa, transit_linear_quad, AnnulusPair, Crossing,
    GapRoute, LevelRoute, QuarterTimes,
};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Annulus {
    pub i: usize,
    pub c1: f64,
    pub c2: f64,
}

impl Annulus {
    pub fn new(problem: &ProblemSpec, i: usize, c1: f64, c2: f64) -> Result<Self> {
        if i > problem.weight.m() {
            return Err(Error::InvalidSpec(format!("hump {i} does not exist")));
        }
        if !(0.0 < c1 && c1 < c2) {
            return Err(Error::InvalidSpec(format!("annulus needs 0 < c1 < c2, got {c1}, {c2}")));
        }
        if c2 >= problem.h.h_star() {
            return Err(Error::DomainViolation(format!("c2 = {c2} ≥ H*")));
        }
        level_crossing(problem, i, c1)?;
        level_crossing(problem, i, c2)?;
        Ok(Annulus { i, c1, c2 })
    }

    pub fn contains(&self, problem: &ProblemSpec, x: f64, y: f64) -> bool {
        let e = problem.hamiltonian(self.i, x, y);
        e >= self.c1 && e <= self.c2
    }
}

pub fn annulus_pair(a: &Annulus, b: &Annulus) -> AnnulusPair {
    AnnulusPair { i: a.i, inner: [a.c1, b.c1], outer: [a.c2, b.c2] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistVariant {
    /// Two-quarter lower and upper bounds in every quadrant.
    FourQuadrant,
    /// One-quarter lower bound in every quadrant.
    Strong,
    /// Lower bounds in I and III only, upper bound βT(e) < τ.
    OddQuadrant,
    /// (α+1/2)T(d) > τ > (β+1/2)T(e), λ = 0.
    ZeroHalfLap,
    /// (α+1/4)T(d) > τ > (β+1/2)T(e), λ = 0.
    ZeroQuarterLap,
    PositiveHalfLap,
    PositiveQuarterLap,
    /// Half-lap form with the roles of c₁ and c₂ swapped (p < 1).
    SublinearHalfLap,
}

impl TwistVariant {
    pub fn parse(s: &str) -> Option<Self> {
        use TwistVariant::*;
        Some(match s {
            "four-quadrant" => FourQuadrant,
            "strong" => Strong,
            "odd-quadrant" => OddQuadrant,
            "zero-half-lap" => ZeroHalfLap,
            "zero-quarter-lap" => ZeroQuarterLap,
            "positive-half-lap" => PositiveHalfLap,
            "positive-quarter-lap" => PositiveQuarterLap,
            "sublinear-half-lap" => SublinearHalfLap,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Satisfied,
    Violated,
    Indeterminate,
}

/// One evaluated inequality `lhs > rhs` (or `≥`), slack = lhs − rhs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
}

impl Inequality {
    fn new(label: impl Into<String>, lhs: f64, rhs: f64, err: f64) -> Self {
        Inequality { label: label.into(), lhs, rhs, slack: lhs - rhs, tol: 10.0 * err.max(1e-12) }
    }
    pub fn verdict(&self) -> Verdict {
        if self.slack > self.tol {
            Verdict::Satisfied
        } else if self.slack < -self.tol {
            Verdict::Violated
        } else {
            Verdict::Indeterminate
        }
    }
}

fn combine(ineqs: &[Inequality]) -> Verdict {
    if ineqs.iter().any(|q| q.verdict() == Verdict::Violated) {
        Verdict::Violated
    } else if ineqs.iter().all(|q| q.verdict() == Verdict::Satisfied) {
        Verdict::Satisfied
    } else {
        Verdict::Indeterminate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistCertificate {
    pub i: usize,
    pub alpha: u32,
    pub beta: u32,
    pub variant: TwistVariant,
    pub d: f64,
    pub e: f64,
    pub margins: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistCheck {
    pub verdict: Verdict,
    pub inequalities: Vec<Inequality>,
    pub certificate: Option<TwistCertificate>,
}

impl TwistCheck {
    pub fn first_violation(&self) -> Option<&Inequality> {
        self.inequalities.iter().find(|q| q.verdict() == Verdict::Violated)
    }
}

/// (d, e) for the regime: superlinear humps take d = c₁, sublinear ones d = c₂.
pub fn default_roles(problem: &ProblemSpec, annulus: &Annulus) -> (f64, f64) {
    if problem.g.is_superlinear() {
        (annulus.c1, annulus.c2)
    } else {
        (annulus.c2, annulus.c1)
    }
}

pub fn check_twist(problem: &ProblemSpec, annulus: &Annulus, tau: f64, alpha: u32, beta: u32, variant: TwistVariant) -> Result<TwistCheck> {
    let (mut d, mut e) = default_roles(problem, annulus);
    if variant == TwistVariant::SublinearHalfLap {
        d = annulus.c2;
        e = annulus.c1;
    }
    check_twist_with_roles(problem, annulus, tau, alpha, beta, variant, d, e)
}

fn variant_sign_ok(lambda: f64, v: TwistVariant) -> bool {
    use TwistVariant::*;
    match v {
        ZeroHalfLap | ZeroQuarterLap => lambda == 0.0,
        OddQuadrant | PositiveHalfLap | PositiveQuarterLap => lambda > 0.0,
        _ => true,
    }
}

#[allow(clippy::too_many_arguments)]
pub fn check_twist_with_roles(
    problem: &ProblemSpec,
    annulus: &Annulus,
    tau: f64,
    alpha: u32,
    beta: u32,
    variant: TwistVariant,
    d: f64,
    e: f64,
) -> Result<TwistCheck> {
    use TwistVariant::*;
    if alpha >= beta {
        return Err(Error::InvalidSpec(format!("need α < β, got {alpha}, {beta}")));
    }
    if !variant_sign_ok(problem.lambda, variant) {
        return Err(Error::SignViolation(format!("{variant:?} does not apply at λ = {}", problem.lambda)));
    }
    let i = annulus.i;
    let td = quarter_times(problem, i, d)?;
    let te = quarter_times(problem, i, e)?;
    let (a, b) = (alpha as f64, beta as f64);
    let mut ineqs = Vec::new();
    let lower = |label: String, v: f64, err: f64| Inequality::new(label, v, tau, err);
    let upper = |label: String, v: f64, err: f64| Inequality::new(label, tau, v, err);
    let quads_all = [Quadrant::IV, Quadrant::III, Quadrant::II, Quadrant::I];
    let quads_odd = [Quadrant::I, Quadrant::III];
    let qt = |t: &QuarterTimes, k: Quadrant| t.get(k);
    match variant {
        FourQuadrant => {
            for k in quads_all {
                let (k1, k2) = (k.next(), k.next().next());
                ineqs.push(lower(
                    format!("T_{}(d)+T_{}(d)+αT(d) > τ", k1.label(), k2.label()),
                    qt(&td, k1) + qt(&td, k2) + a * td.period,
                    td.error * (a + 1.0),
                ));
                ineqs.push(upper(
                    format!("T_{}(e)+T_{}(e)+βT(e) < τ", k.label(), k1.label()),
                    qt(&te, k) + qt(&te, k1) + b * te.period,
                    te.error * (b + 1.0),
                ));
            }
        }
        Strong => {
            for k in quads_all {
                let k1 = k.next();
                ineqs.push(lower(format!("T_{}(d)+αT(d) > τ", k1.label()), qt(&td, k1) + a * td.period, td.error * (a + 1.0)));
                ineqs.push(upper(
                    format!("T_{}(e)+T_{}(e)+βT(e) < τ", k.label(), k1.label()),
                    qt(&te, k) + qt(&te, k1) + b * te.period,
                    te.error * (b + 1.0),
                ));
            }
        }
        OddQuadrant => {
            for k in quads_odd {
                let k1 = k.next();
                ineqs.push(lower(format!("T_{}(d)+αT(d) > τ", k1.label()), qt(&td, k1) + a * td.period, td.error * (a + 1.0)));
            }
            ineqs.push(upper("βT(e) < τ".into(), b * te.period, te.error * b));
        }
        ZeroHalfLap | PositiveHalfLap | SublinearHalfLap => {
            ineqs.push(lower("(α+1/2)T(d) > τ".into(), (a + 0.5) * td.period, td.error * (a + 1.0)));
            ineqs.push(upper("τ > (β+1/2)T(e)".into(), (b + 0.5) * te.period, te.error * (b + 1.0)));
        }
        ZeroQuarterLap | PositiveQuarterLap => {
            ineqs.push(lower("(α+1/4)T(d) > τ".into(), (a + 0.25) * td.period, td.error * (a + 1.0)));
            ineqs.push(upper("τ > (β+1/2)T(e)".into(), (b + 0.5) * te.period, te.error * (b + 1.0)));
        }
    }
    let verdict = combine(&ineqs);
    let certificate = (verdict == Verdict::Satisfied).then(|| TwistCertificate {
        i,
        alpha,
        beta,
        variant,
        d,
        e,
        margins: ineqs.iter().map(|q| q.slack).collect(),
    });
    Ok(TwistCheck { verdict, inequalities: ineqs, certificate })
}

/// Open interval of τ values for which the half-lap and quarter-lap variants certify, if any.
pub fn twist_window(problem: &ProblemSpec, annulus: &Annulus, alpha: u32, beta: u32, variant: TwistVariant) -> Result<Option<(f64, f64)>> {
    use TwistVariant::*;
    let (mut d, mut e) = default_roles(problem, annulus);
    if variant == SublinearHalfLap {
        d = annulus.c2;
        e = annulus.c1;
    }
    let td = quarter_times(problem, annulus.i, d)?.period;
    let te = quarter_times(problem, annulus.i, e)?.period;
    let k = match variant {
        ZeroQuarterLap | PositiveQuarterLap => 0.25,
        ZeroHalfLap | PositiveHalfLap | SublinearHalfLap => 0.5,
        _ => return Err(Error::InvalidSpec(format!("{variant:?} has no closed-form τ window"))),
    };
    let hi = (alpha as f64 + k) * td;
    let lo = (beta as f64 + 0.5) * te;
    Ok((lo < hi).then_some((lo, hi)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Compat {
    pub compatible: bool,
    pub x_com: f64,
    pub root: f64,
    pub slack: f64,
}

/// Compatibility of the λ > 0 level 𝓔 = c with the outer levels of humps i and i+1.
pub fn check_compat(problem: &ProblemSpec, i: usize, outer: (f64, f64), c: f64) -> Result<Compat> {
    if problem.lambda <= 0.0 {
        return Err(Error::SignViolation(format!("compatibility needs λ > 0, got {}", problem.lambda)));
    }
    let root = (2.0 * c / problem.lambda).sqrt();
    let mut x_com: f64 = 0.0;
    let mut levels = vec![(i, outer.0)];
    if i < problem.weight.m() {
        levels.push((i + 1, outer.1));
    }
    for (j, cj) in levels {
        let v = ((cj - c) / problem.mu(j)).max(0.0);
        for side in [Side::Plus, Side::Minus] {
            x_com = x_com.max(problem.g.g_inv(v, side)?.abs());
        }
    }
    Ok(Compat { compatible: root > x_com, x_com, root, slack: root - x_com })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowVariant {
    /// S(II→I), S(IV→III) ≤ ς.
    DirectTransit,
    /// S(IV→I), S(II→III) ≤ ς.
    CrossTransit,
    AllTransits,
    /// Level-line transits bracket ς at levels ê, d̂.
    LevelBand,
    /// As `LevelBand` with ξ, ζ extra laps; yields multiplier ξ − ζ + 1.
    LevelBandLaps,
    LevelTurn,
    /// Closed-form gap bound for λ = 0 and power g.
    ZeroLambdaBound,
    /// λ > 0: 2∫₀^x_com + ξT ≤ ς ≤ π/(2√λ) + ξT.
    PositiveCompat,
    /// λ < 0: ς ≥ Λ*.
    NegativeThreshold,
}

impl WindowVariant {
    pub fn parse(s: &str) -> Option<Self> {
        use WindowVariant::*;
        Some(match s {
            "direct-transit" => DirectTransit,
            "cross-transit" => CrossTransit,
            "all-transits" => AllTransits,
            "level-band" => LevelBand,
            "level-band-laps" => LevelBandLaps,
            "level-turn" => LevelTurn,
            "zero-lambda-bound" => ZeroLambdaBound,
            "positive-compat" => PositiveCompat,
            "negative-threshold" => NegativeThreshold,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowParams {
    pub pair: AnnulusPair,
    /// Defaults to ςᵢ from the weight.
    pub varsigma: Option<f64>,
    pub kappa: Quadrant,
    /// Level c for `LevelTurn` and `PositiveCompat`; defaults to min c₁.
    pub c: Option<f64>,
    pub d_hat: Option<f64>,
    pub e_hat: Option<f64>,
    pub xi: u32,
    pub zeta: u32,
}

impl WindowParams {
    pub fn new(a: &Annulus, b: &Annulus) -> Self {
        WindowParams { pair: annulus_pair(a, b), varsigma: None, kappa: Quadrant::I, c: None, d_hat: None, e_hat: None, xi: 0, zeta: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowCheck {
    pub variant: WindowVariant,
    pub verdict: Verdict,
    pub inequalities: Vec<Inequality>,
    /// 𝔪 = ξ − ζ + 1 for `LevelBandLaps`.
    pub multiplier: Option<u32>,
    /// The monotone-angle hypothesis was only sampled, not proven.
    pub empirical_only: bool,
}

impl WindowCheck {
    pub fn slack(&self) -> f64 {
        self.inequalities.iter().map(|q| q.slack).fold(f64::INFINITY, f64::min)
    }
}

pub fn check_linear_window(problem: &ProblemSpec, i: usize, variant: WindowVariant, params: &WindowParams) -> Result<WindowCheck> {
    use WindowVariant::*;
    let lam = problem.lambda;
    let ok = match variant {
        DirectTransit | ZeroLambdaBound => lam <= 0.0,
        CrossTransit | AllTransits | NegativeThreshold => lam < 0.0,
        LevelBand | LevelBandLaps | LevelTurn | PositiveCompat => lam > 0.0,
    };
    if !ok {
        return Err(Error::SignViolation(format!("{variant:?} does not apply at λ = {lam}")));
    }
    if i >= problem.weight.m() {
        return Err(Error::InvalidSpec(format!("no gap after hump {i}")));
    }
    let sg = params.varsigma.unwrap_or_else(|| problem.weight.varsigma(i));
    let pair = AnnulusPair { i, ..params.pair };
    let gap = |route| transit_linear_quad(problem, &Crossing::Gap { pair, route });
    let lev = |c, route| transit_linear_quad(problem, &Crossing::Level { pair, c, route });
    let cmin = pair.inner[0].min(pair.inner[1]);
    let mut ineqs = Vec::new();
    let mut multiplier = None;
    let mut empirical_only = false;
    let le = |label: &str, s: crate::numeric::Quad| Inequality::new(label, sg, s.value, s.error);
    let ge = |label: &str, s: crate::numeric::Quad| Inequality::new(label, s.value, sg, s.error);
    let (into_k, outer_route, inner_route, turn_route) = match params.kappa {
        Quadrant::I => ("II→I", LevelRoute::OuterIIToI, LevelRoute::InnerIIToI, LevelRoute::InnerToTurnIIToI),
        Quadrant::III => ("IV→III", LevelRoute::OuterIVToIII, LevelRoute::InnerIVToIII, LevelRoute::InnerToTurnIVToIII),
        k => return Err(Error::InvalidSpec(format!("κ must be I or III, got {k:?}"))),
    };
    let need_compat = |c: f64| -> Result<()> {
        let cp = check_compat(problem, i, (pair.outer[0], pair.outer[1]), c)?;
        if !cp.compatible {
            return Err(Error::IncompatibleGeometry(format!("level {c} fails compatibility (slack {:.3e})", cp.slack)));
        }
        Ok(())
    };
    match variant {
        DirectTransit => {
            ineqs.push(le("S_{II→I} ≤ ς", gap(GapRoute::IIToI)?));
            ineqs.push(le("S_{IV→III} ≤ ς", gap(GapRoute::IVToIII)?));
        }
        CrossTransit => {
            ineqs.push(le("S_{IV→I} ≤ ς", gap(GapRoute::IVToI)?));
            ineqs.push(le("S_{II→III} ≤ ς", gap(GapRoute::IIToIII)?));
        }
        AllTransits => {
            ineqs.push(le("S_{II→I} ≤ ς", gap(GapRoute::IIToI)?));
            ineqs.push(le("S_{IV→III} ≤ ς", gap(GapRoute::IVToIII)?));
            ineqs.push(le("S_{IV→I} ≤ ς", gap(GapRoute::IVToI)?));
            ineqs.push(le("S_{II→III} ≤ ς", gap(GapRoute::IIToIII)?));
        }
        LevelBand | LevelBandLaps => {
            let dh = params.d_hat.unwrap_or(cmin);
            let eh = params.e_hat.unwrap_or(cmin);
            need_compat(dh)?;
            need_compat(eh)?;
            let (xi, zeta) = if variant == LevelBandLaps { (params.xi, params.zeta) } else { (0, 0) };
            if zeta > xi {
                return Err(Error::InvalidSpec(format!("need ζ ≤ ξ, got ζ = {zeta}, ξ = {xi}")));
            }
            let lo = lev(eh, outer_route)?;
            let hi = lev(dh, inner_route)?;
            let (te, td) = if variant == LevelBandLaps { (linear_period(problem, eh)?, linear_period(problem, dh)?) } else { (0.0, 0.0) };
            ineqs.push(Inequality::new(format!("S^c2_{into_k}(ê)+ξT(ê) ≤ ς"), sg, lo.value + xi as f64 * te, lo.error));
            ineqs.push(Inequality::new(format!("ς ≤ S^c1_{into_k}(d̂)+ζT(d̂)"), hi.value + zeta as f64 * td, sg, hi.error));
            if variant == LevelBandLaps {
                multiplier = Some(xi - zeta + 1);
            }
        }
        LevelTurn => {
            let c = params.c.unwrap_or(cmin);
            need_compat(c)?;
            ineqs.push(Inequality::new(format!("S^c2_{into_k}(c) < ς"), sg, lev(c, outer_route)?.value, lev(c, outer_route)?.error));
            let t = lev(c, turn_route)?;
            ineqs.push(ge(&format!("ς < S^c1→√_{into_k}(c)"), t));
            let across = if params.kappa == Quadrant::I { LevelRoute::IIIToI } else { LevelRoute::IToIII };
            ineqs.push(ge("S_{κ+2→κ}(c) > ς", lev(c, across)?));
            empirical_only = !matches!(problem.h, HomeoSpec::Identity);
            if empirical_only && !monotone_angle_sample(problem, i, pair.inner[0], c, sg)? {
                ineqs.push(Inequality::new("monotone angle (sampled)", -1.0, 0.0, 0.0));
            }
        }
        PositiveCompat => {
            let c = params.c.unwrap_or(cmin);
            need_compat(c)?;
            let t = linear_period(problem, c)?;
            let xi = params.xi as f64;
            let lo = lev(c, outer_route)?;
            let hi = lev(c, turn_route)?;
            ineqs.push(Inequality::new("2∫₀^x_com + ξT_λ ≤ ς", sg, lo.value + xi * t, lo.error));
            ineqs.push(Inequality::new("ς ≤ π/(2√λ) + ξT_λ", hi.value + xi * t, sg, hi.error));
        }
        ZeroLambdaBound => {
            let p = match (problem.h, problem.g) {
                (HomeoSpec::Identity, NonlinSpec::PowerP { p }) => p,
                _ => return Err(Error::IncompatibleGeometry("the zero-λ bound needs h = id and a power nonlinearity".into())),
            };
            let (mi, mj) = (problem.mu(i), problem.mu(i + 1));
            let num = ((p + 1.0) * pair.outer[0] / mi).powf(1.0 / (p + 1.0)) + ((p + 1.0) * pair.outer[1] / mj).powf(1.0 / (p + 1.0));
            let bound = num / (2.0 * cmin).sqrt();
            ineqs.push(Inequality::new("ς ≥ Σ((p+1)c₂/μ)^{1/(p+1)}/√(2c₁)", sg, bound, 1e-15 * bound));
        }
        NegativeThreshold => {
            let p = match (problem.h, problem.g) {
                (HomeoSpec::Identity, NonlinSpec::PowerP { p }) if p > 1.0 => p,
                _ => return Err(Error::IncompatibleGeometry("the Λ* threshold needs h = id and g = |x|^{p−1}x, p > 1".into())),
            };
            let mut worst: f64 = 0.0;
            for (k, j) in [(0usize, i), (1, i + 1)] {
                let (xs, _, _) = critical_points(lam, problem.mu(j), p)?;
                let x1 = solve_level_abscissa(problem, j, pair.inner[k], Side::Plus)?;
                let x2 = solve_level_abscissa(problem, j, pair.outer[k], Side::Plus)?;
                worst = worst.max(lambda_bounds(x1 / xs, x2 / xs, p, lam)?.lambda_star);
            }
            ineqs.push(Inequality::new("ς ≥ Λ*", sg, worst, 1e-14 * worst));
        }
    }
    Ok(WindowCheck { variant, verdict: combine(&ineqs), inequalities: ineqs, multiplier, empirical_only })
}

/// Sampled check that the linear flow over time ς preserves the angular order of
/// points on {𝓗ᵢ = c₁} ∩ {𝓔 ≤ c}.
fn monotone_angle_sample(problem: &ProblemSpec, i: usize, c1: f64, c: f64, sg: f64) -> Result<bool> {
    use crate::flow::{integrate_autonomous, FlowOptions};
    let n = 64;
    let mut pts = Vec::new();
    for k in 0..n {
        let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let dir = (th.sin(), th.cos());
        let r = crate::numeric::geometric_bracket(|r| problem.hamiltonian(i, r * dir.0, r * dir.1) >= c1, 1e-8)
            .and_then(|(lo, hi)| crate::numeric::brent(|r| problem.hamiltonian(i, r * dir.0, r * dir.1) - c1, lo, hi, 0.0, 1e-14).ok());
        if let Some(r) = r {
            let (x, y) = (r * dir.0, r * dir.1);
            if problem.energy(x, y) <= c {
                pts.push((th, x, y));
            }
        }
    }
    let mut ends = Vec::new();
    for &(th, x, y) in &pts {
        let tr = integrate_autonomous(problem, 0.0, (x, y), sg, &FlowOptions::default())?;
        ends.push(th + tr.winding());
    }
    Ok(ends.windows(2).all(|w| w[1] > w[0]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StepKind {
    Horizontal,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Step {
    pub kind: StepKind,
    /// Quadrant of the annulus occupied at the end of the hump (the channel).
    pub via: Quadrant,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Itinerary {
    pub kappas: Vec<Quadrant>,
    pub steps: Vec<Step>,
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kappas[0].label())?;
        for (k, s) in self.kappas[1..].iter().zip(&self.steps) {
            write!(f, ">{}>{}", s.via.label(), k.label())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LambdaSign {
    Negative,
    Zero,
    Positive,
}

impl LambdaSign {
    pub fn of(lambda: f64) -> Self {
        if lambda < 0.0 {
            LambdaSign::Negative
        } else if lambda == 0.0 {
            LambdaSign::Zero
        } else {
            LambdaSign::Positive
        }
    }
}

/// Admissible one-step moves from κ: (channel, next κ).
pub fn admissible_steps(kappa: Quadrant, sign: LambdaSign) -> Vec<Step> {
    let mut v = vec![Step { kind: StepKind::Horizontal, via: kappa.prev() }, Step { kind: StepKind::Diagonal, via: kappa.next() }];
    if sign == LambdaSign::Negative {
        v.push(Step { kind: StepKind::Horizontal, via: kappa.next() });
        v.push(Step { kind: StepKind::Diagonal, via: kappa.prev() });
    }
    v
}

pub fn step_target(kappa: Quadrant, step: Step) -> Quadrant {
    match step.kind {
        StepKind::Horizontal => kappa,
        StepKind::Diagonal => kappa.next().next(),
    }
}

/// All channel-paths of length m from κ₀ (2^m for λ ≥ 0, 4^m for λ < 0).
pub fn enumerate_itineraries(m: usize, sign: LambdaSign, kappa0: Quadrant) -> Vec<Itinerary> {
    let mut out = vec![Itinerary { kappas: vec![kappa0], steps: vec![] }];
    for _ in 0..m {
        let mut next = Vec::new();
        for it in &out {
            let k = *it.kappas.last().unwrap();
            for st in admissible_steps(k, sign) {
                let mut n = it.clone();
                n.kappas.push(step_target(k, st));
                n.steps.push(st);
                next.push(n);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryMode {
    /// One fixed choice of (r₀, r_L).
    PerChoice,
    /// Both half-axes at each end.
    AllFour,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountBound {
    pub total: u64,
    pub per_itinerary: BTreeMap<String, u64>,
}

pub fn lower_bound(m: usize, certificates: &[TwistCertificate], multipliers: &[u32], sign: LambdaSign, mode: BoundaryMode) -> Result<CountBound> {
    let mut crossing = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let c = certificates.iter().find(|c| c.i == i).ok_or(Error::MissingCertificate(i))?;
        crossing.push((c.beta - c.alpha) as u64);
    }
    let gaps: u64 = (0..m).map(|i| multipliers.get(i).copied().unwrap_or(1) as u64).product();
    let product: u64 = crossing.iter().product::<u64>() * gaps;
    let mut per_itinerary = BTreeMap::new();
    let mut total = 0;
    let starts: &[Quadrant] = match mode {
        BoundaryMode::PerChoice => &[Quadrant::I],
        BoundaryMode::AllFour => &[Quadrant::I, Quadrant::III],
    };
    let ends = if mode == BoundaryMode::AllFour { 2 } else { 1 };
    for &k0 in starts {
        for it in enumerate_itineraries(m, sign, k0) {
            for e in 0..ends {
                let key = if ends == 1 { it.to_string() } else { format!("{it}|end{e}") };
                per_itinerary.insert(key, product);
                total += product;
            }
        }
    }
    Ok(CountBound { total, per_itinerary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use crate::quadrature::period;

    fn example(mu: f64, m: usize, tau: f64, sg: f64) -> ProblemSpec {
        ProblemSpec::semilinear(3.0, 1.0, StepWeight::uniform(m, tau, sg, mu).unwrap()).unwrap()
    }

    #[test]
    fn twist_first_choice() {
        let pr = example(20.0, 1, 5.9, 1.5);
        let a = Annulus::new(&pr, 0, 1.0, 5.0).unwrap();
        let ch = check_twist(&pr, &a, 5.9, 2, 3, TwistVariant::PositiveHalfLap).unwrap();
        assert_eq!(ch.verdict, Verdict::Satisfied);
        for al in 0..=2 {
            assert!(twist_window(&pr, &a, al, al + 1, TwistVariant::PositiveQuarterLap).unwrap().is_none());
        }
    }

    #[test]
    fn twist_second_choice() {
        let pr = example(130.0, 1, 1.9, 1.55);
        let a = Annulus::new(&pr, 0, 0.8, 20.0).unwrap();
        let ch = check_twist(&pr, &a, 1.9, 1, 2, TwistVariant::PositiveQuarterLap).unwrap();
        assert_eq!(ch.verdict, Verdict::Satisfied);
        assert_eq!(ch.certificate.unwrap().d, 0.8);
        let ch = check_twist(&pr, &a, 2.2, 1, 2, TwistVariant::PositiveQuarterLap).unwrap();
        assert_eq!(ch.verdict, Verdict::Violated);
        assert!(ch.first_violation().is_some());
    }

    #[test]
    fn compat_examples() {
        let pr = example(20.0, 1, 1.0, 1.0);
        let c = check_compat(&pr, 0, (5.0, 5.0), 1.0).unwrap();
        assert!(c.compatible && (c.x_com - 0.8f64.powf(0.25)).abs() < 1e-12);
        let c = check_compat(&pr, 0, (1.0, 1.0), 1.0).unwrap();
        assert!(c.compatible && c.x_com == 0.0);
        let pr = example(130.0, 1, 1.0, 1.0);
        let c = check_compat(&pr, 0, (20.0, 20.0), 0.8).unwrap();
        assert!(c.compatible && (c.x_com - (4.0 * 19.2 / 130.0f64).powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn positive_compat_first_choice() {
        let pr = example(20.0, 1, 5.9, 1.5);
        let a = Annulus::new(&pr, 0, 1.0, 5.0).unwrap();
        let b = Annulus::new(&pr, 1, 1.0, 5.0).unwrap();
        let w = check_linear_window(&pr, 0, WindowVariant::PositiveCompat, &WindowParams::new(&a, &b)).unwrap();
        assert_eq!(w.verdict, Verdict::Satisfied);
        let w = check_linear_window(&pr, 0, WindowVariant::LevelTurn, &WindowParams::new(&a, &b)).unwrap();
        assert_eq!(w.verdict, Verdict::Satisfied);
        assert!(!w.empirical_only);
    }

    #[test]
    fn zero_lambda_bound_implies_direct_transit() {
        let w = StepWeight::uniform(1, 1.0, 12.0, 1.0).unwrap();
        let pr = ProblemSpec::semilinear(3.0, 0.0, w).unwrap();
        let a = Annulus::new(&pr, 0, 2.0, 5000.0).unwrap();
        let b = Annulus::new(&pr, 1, 2.0, 5000.0).unwrap();
        let v6 = check_linear_window(&pr, 0, WindowVariant::ZeroLambdaBound, &WindowParams::new(&a, &b)).unwrap();
        let p1 = check_linear_window(&pr, 0, WindowVariant::DirectTransit, &WindowParams::new(&a, &b)).unwrap();
        assert_eq!(v6.verdict, Verdict::Satisfied);
        assert_eq!(p1.verdict, Verdict::Satisfied);
        // the closed-form bound is sufficient for the exact transit
        assert!(p1.slack() >= v6.slack());
    }

    #[test]
    fn itinerary_counts() {
        assert_eq!(enumerate_itineraries(0, LambdaSign::Zero, Quadrant::I).len(), 1);
        assert_eq!(enumerate_itineraries(2, LambdaSign::Zero, Quadrant::I).len(), 4);
        let v = enumerate_itineraries(1, LambdaSign::Negative, Quadrant::I);
        assert_eq!(v.len(), 4);
        let distinct: std::collections::BTreeSet<_> = v.iter().map(|i| i.kappas.clone()).collect();
        assert_eq!(distinct.len(), 2);
        for it in enumerate_itineraries(3, LambdaSign::Positive, Quadrant::III) {
            assert!(it.kappas.iter().all(|k| matches!(k, Quadrant::I | Quadrant::III)));
        }
    }

    fn cert(i: usize, alpha: u32, beta: u32) -> TwistCertificate {
        TwistCertificate { i, alpha, beta, variant: TwistVariant::FourQuadrant, d: 1.0, e: 2.0, margins: vec![] }
    }

    #[test]
    fn bounds() {
        let b = lower_bound(1, &[cert(0, 0, 1), cert(1, 0, 1)], &[], LambdaSign::Zero, BoundaryMode::PerChoice).unwrap();
        assert_eq!(b.total, 2);
        let cs = [cert(0, 0, 2), cert(1, 1, 3), cert(2, 0, 2)];
        let b = lower_bound(2, &cs, &[], LambdaSign::Negative, BoundaryMode::PerChoice).unwrap();
        assert_eq!(b.total, 128);
        assert_eq!(b.per_itinerary.values().sum::<u64>(), b.total);
        assert_eq!(b.per_itinerary.len(), enumerate_itineraries(2, LambdaSign::Negative, Quadrant::I).len());
        let b = lower_bound(0, &[cert(0, 2, 5)], &[], LambdaSign::Positive, BoundaryMode::PerChoice).unwrap();
        assert_eq!(b.total, 3);
        let b = lower_bound(1, &[cert(0, 0, 1), cert(1, 0, 1)], &[], LambdaSign::Zero, BoundaryMode::AllFour).unwrap();
        assert_eq!(b.total, 8);
        let b = lower_bound(1, &[cert(0, 0, 2), cert(1, 0, 2)], &[2], LambdaSign::Positive, BoundaryMode::PerChoice).unwrap();
        assert_eq!(b.total, 2 * 4 * 2);
        assert!(matches!(lower_bound(1, &[cert(0, 0, 1)], &[], LambdaSign::Zero, BoundaryMode::PerChoice), Err(Error::MissingCertificate(1))));
    }

    #[test]
    fn lambda0_threshold_scan() {
        // equal humps, α = 0: a τ window exists iff θ = e/d exceeds (2(2β+1))^{2(p+1)/(p−1)}
        for &(p, beta) in &[(3.0, 1u32), (2.0, 1), (3.0, 2)] {
            let w = StepWeight::uniform(1, 1.0, 1.0, 1.0).unwrap();
            let pr = ProblemSpec::semilinear(p, 0.0, w).unwrap();
            let thr = (2.0 * (2.0 * beta as f64 + 1.0)).powf(2.0 * (p + 1.0) / (p - 1.0));
            for f in [0.5, 0.9, 0.99, 1.01, 1.1, 2.0] {
                let d = 0.3;
                let a = Annulus::new(&pr, 0, d, d * thr * f).unwrap();
                let win = twist_window(&pr, &a, 0, beta, TwistVariant::ZeroQuarterLap).unwrap();
                assert_eq!(win.is_some(), f > 1.0, "p={p} β={beta} f={f}");
                if let Some((lo, hi)) = win {
                    let tau = (lo * hi).sqrt();
                    let ch = check_twist(&pr, &a, tau, 0, beta, TwistVariant::ZeroQuarterLap).unwrap();
                    assert_eq!(ch.verdict, Verdict::Satisfied);
                }
            }
            let _ = period(&pr, 0, 1.0).unwrap();
        }
    }
}
