//! Problem objects: the homeomorphism h, the nonlinearity g, the stepwise weight,
//! boundary arcs and the potentials built from them.

use crate::error::{Error, Result};
use crate::numeric::{brent, geometric_bracket};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Increasing homeomorphism h: (ρ₋, ρ₊) → ℝ with h(0) = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HomeoSpec {
    Identity,
    PowerQ { q: f64 },
    MinkowskiInverse,
    RelativisticInverse,
    RationalCubic,
    LogBarrier { rho_plus: f64 },
}

/// Sign selector for the two branches of an inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

impl HomeoSpec {
    pub fn rho_minus(&self) -> f64 {
        match self {
            HomeoSpec::MinkowskiInverse => -1.0,
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn rho_plus(&self) -> f64 {
        match *self {
            HomeoSpec::MinkowskiInverse => 1.0,
            HomeoSpec::LogBarrier { rho_plus } => rho_plus,
            _ => f64::INFINITY,
        }
    }

    /// Guard band half-width at finite domain edges.
    pub fn margin(&self) -> f64 {
        let w = self.rho_plus() - self.rho_minus();
        if w.is_finite() {
            1e-9 * w
        } else {
            1e-9
        }
    }

    pub fn in_domain(&self, y: f64) -> bool {
        let m = self.margin();
        y > self.rho_minus() + m && y < self.rho_plus() - m
    }

    /// h(y) without the domain check.
    pub fn h_raw(&self, y: f64) -> f64 {
        match *self {
            HomeoSpec::Identity => y,
            HomeoSpec::PowerQ { q } => y.abs().powf(q).copysign(y),
            HomeoSpec::MinkowskiInverse => y / (1.0 - y * y).sqrt(),
            HomeoSpec::RelativisticInverse => y / (1.0 + y * y).sqrt(),
            HomeoSpec::RationalCubic => y * y * y / (1.0 + y * y),
            HomeoSpec::LogBarrier { rho_plus } => -(-y / rho_plus).ln_1p(),
        }
    }

    pub fn eval_h(&self, y: f64) -> Result<f64> {
        if !self.in_domain(y) {
            return Err(Error::DomainViolation(format!(
                "y = {y:e} outside ({}, {})",
                self.rho_minus(),
                self.rho_plus()
            )));
        }
        Ok(self.h_raw(y))
    }

    /// Primitive H(y) = ∫₀ʸ h.
    pub fn big_h(&self, y: f64) -> f64 {
        match *self {
            HomeoSpec::Identity => 0.5 * y * y,
            HomeoSpec::PowerQ { q } => y.abs().powf(q + 1.0) / (q + 1.0),
            HomeoSpec::MinkowskiInverse => y * y / (1.0 + (1.0 - y * y).max(0.0).sqrt()),
            HomeoSpec::RelativisticInverse => y * y / (1.0 + (1.0 + y * y).sqrt()),
            HomeoSpec::RationalCubic => {
                let u = y * y;
                if u < 1e-2 {
                    // u/2 − ln(1+u)/2 = Σ_{n≥2} (−1)^n u^n / (2n)
                    let mut s = 0.0;
                    let mut un = u;
                    for n in 2..12 {
                        un *= u;
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        s += sign * un / (2 * n) as f64;
                    }
                    s
                } else {
                    0.5 * u - 0.5 * u.ln_1p()
                }
            }
            HomeoSpec::LogBarrier { rho_plus } => {
                let s = y / rho_plus;
                if s >= 1.0 {
                    return rho_plus;
                }
                if s.abs() < 0.1 {
                    let mut acc = 0.0;
                    let mut sn = s;
                    for n in 2..40 {
                        sn *= s;
                        acc += sn / (n * (n - 1)) as f64;
                    }
                    rho_plus * acc
                } else {
                    y + (rho_plus - y) * (-s).ln_1p()
                }
            }
        }
    }

    /// H* = min{H(ρ₋), H(ρ₊)}.
    pub fn h_star(&self) -> f64 {
        match *self {
            HomeoSpec::MinkowskiInverse => 1.0,
            HomeoSpec::LogBarrier { rho_plus } => rho_plus,
            _ => f64::INFINITY,
        }
    }

    /// H restricted to the chosen half-domain, inverted: H(y) = v, sign(y) = side.
    pub fn h_inv(&self, v: f64, side: Side) -> Result<f64> {
        if v < 0.0 {
            return Err(Error::DomainViolation(format!("H⁻¹ of negative level {v:e}")));
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        let s = side.sign();
        let y = match *self {
            HomeoSpec::Identity => (2.0 * v).sqrt(),
            HomeoSpec::PowerQ { q } => ((q + 1.0) * v).powf(1.0 / (q + 1.0)),
            HomeoSpec::MinkowskiInverse => {
                if v >= 1.0 {
                    return Err(Error::DomainViolation(format!("level {v:e} ≥ H* = 1")));
                }
                (v * (2.0 - v)).sqrt()
            }
            HomeoSpec::RelativisticInverse => (v * (2.0 + v)).sqrt(),
            HomeoSpec::RationalCubic => {
                let f = |y: f64| self.big_h(y) - v;
                let (lo, hi) = geometric_bracket(|y| f(y) >= 0.0, 1e-8)
                    .ok_or_else(|| Error::NoBracket(format!("H⁻¹({v:e})")))?;
                brent(f, lo, hi, 0.0, 1e-15)?
            }
            HomeoSpec::LogBarrier { rho_plus } => match side {
                Side::Plus => {
                    if v >= rho_plus {
                        return Err(Error::DomainViolation(format!("level {v:e} ≥ H* = {rho_plus}")));
                    }
                    let f = |y: f64| self.big_h(y) - v;
                    let (lo, hi) = geometric_bracket(|y| y >= rho_plus || f(y) >= 0.0, 1e-8 * rho_plus)
                        .ok_or_else(|| Error::NoBracket(format!("H⁻¹({v:e})")))?;
                    brent(f, lo, hi.min(rho_plus), 0.0, 1e-15)?
                }
                Side::Minus => {
                    let f = |y: f64| self.big_h(-y) - v;
                    let (lo, hi) = geometric_bracket(|y| f(y) >= 0.0, 1e-8 * rho_plus)
                        .ok_or_else(|| Error::NoBracket(format!("H⁻¹({v:e})")))?;
                    brent(f, lo, hi, 0.0, 1e-15)?
                }
            },
        };
        Ok(s * y)
    }

    /// |h(H⁻¹_±(v))|: the horizontal speed on the level H = v.
    pub fn speed(&self, v: f64, side: Side) -> Result<f64> {
        if v <= 0.0 {
            return Ok(0.0);
        }
        match *self {
            HomeoSpec::Identity => Ok((2.0 * v).sqrt()),
            HomeoSpec::PowerQ { q } => Ok(((q + 1.0) * v).powf(q / (q + 1.0))),
            HomeoSpec::MinkowskiInverse => {
                if v >= 1.0 {
                    return Err(Error::DomainViolation(format!("level {v:e} ≥ H* = 1")));
                }
                Ok((v * (2.0 - v)).sqrt() / (1.0 - v))
            }
            HomeoSpec::RelativisticInverse => Ok((v * (2.0 + v)).sqrt() / (1.0 + v)),
            _ => Ok(self.h_raw(self.h_inv(v, side)?).abs()),
        }
    }

    /// Exponent q with h(y) ~ |y|^q near 0.
    pub fn small_y_order(&self) -> f64 {
        match *self {
            HomeoSpec::PowerQ { q } => q,
            HomeoSpec::RationalCubic => 3.0,
            _ => 1.0,
        }
    }

    /// Substitution power that makes the level-crossing singularity bounded.
    pub fn singular_power(&self) -> u32 {
        ((self.small_y_order() + 1.0).ceil() as u32).max(2)
    }

    pub fn is_odd(&self) -> bool {
        !matches!(self, HomeoSpec::LogBarrier { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            HomeoSpec::PowerQ { q } if !(q > 0.0 && q.is_finite()) => {
                return Err(Error::InvalidSpec(format!("power-q needs q > 0, got {q}")))
            }
            HomeoSpec::LogBarrier { rho_plus } if !(rho_plus > 0.0 && rho_plus.is_finite()) => {
                return Err(Error::InvalidSpec(format!("log-barrier needs rho_plus > 0, got {rho_plus}")))
            }
            _ => {}
        }
        if self.h_raw(0.0) != 0.0 {
            return Err(Error::InvalidSpec("h(0) ≠ 0".into()));
        }
        let lo = if self.rho_minus().is_finite() { self.rho_minus() } else { -100.0 };
        let hi = if self.rho_plus().is_finite() { self.rho_plus() } else { 100.0 };
        let m = 1e-6 * (hi - lo);
        let n = 1024;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..n {
            let y = lo + m + (hi - lo - 2.0 * m) * k as f64 / (n - 1) as f64;
            let v = self.h_raw(y);
            if !(v > prev) {
                return Err(Error::InvalidSpec(format!("h not strictly increasing near y = {y:e}")));
            }
            prev = v;
        }
        Ok(())
    }
}

pub fn eval_h(spec: &HomeoSpec, y: f64) -> Result<f64> {
    spec.eval_h(y)
}

pub fn h_star(spec: &HomeoSpec) -> f64 {
    spec.h_star()
}

/// Nonlinearity g with g(0) = 0 and g(s)s > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NonlinSpec {
    PowerP { p: f64 },
    ExpMinusOne,
}

impl NonlinSpec {
    pub fn g(&self, x: f64) -> f64 {
        match *self {
            NonlinSpec::PowerP { p } => x.abs().powf(p).copysign(x),
            NonlinSpec::ExpMinusOne => x.exp_m1(),
        }
    }

    pub fn big_g(&self, x: f64) -> f64 {
        match *self {
            NonlinSpec::PowerP { p } => x.abs().powf(p + 1.0) / (p + 1.0),
            NonlinSpec::ExpMinusOne => {
                if x.abs() < 1e-2 {
                    let mut s = 0.0;
                    let mut term = x;
                    for n in 2..14 {
                        term *= x / n as f64;
                        s += term;
                    }
                    s
                } else {
                    x.exp_m1() - x
                }
            }
        }
    }

    /// G restricted to the chosen half-line, inverted.
    pub fn g_inv(&self, v: f64, side: Side) -> Result<f64> {
        if v < 0.0 {
            return Err(Error::DomainViolation(format!("G⁻¹ of negative level {v:e}")));
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        match *self {
            NonlinSpec::PowerP { p } => Ok(side.sign() * ((p + 1.0) * v).powf(1.0 / (p + 1.0))),
            NonlinSpec::ExpMinusOne => {
                let s = side.sign();
                let f = |x: f64| self.big_g(s * x) - v;
                let (lo, hi) = geometric_bracket(|x| f(x) >= 0.0, 1e-8)
                    .ok_or_else(|| Error::NoBracket(format!("G⁻¹({v:e})")))?;
                Ok(s * brent(f, lo, hi, 0.0, 1e-15)?)
            }
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match *self {
            NonlinSpec::PowerP { p } => Some(p),
            NonlinSpec::ExpMinusOne => None,
        }
    }

    pub fn is_odd(&self) -> bool {
        matches!(self, NonlinSpec::PowerP { .. })
    }

    /// Superlinear at infinity and at zero.
    pub fn is_superlinear(&self) -> bool {
        match *self {
            NonlinSpec::PowerP { p } => p > 1.0,
            NonlinSpec::ExpMinusOne => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let NonlinSpec::PowerP { p } = *self {
            if !(p > 0.0 && p.is_finite()) || p == 1.0 {
                return Err(Error::InvalidSpec(format!("power-p needs p > 0, p ≠ 1, got {p}")));
            }
        }
        for k in 1..=512 {
            let s = 20.0 * k as f64 / 512.0;
            if !(self.g(s) * s > 0.0 && self.g(-s) * -s > 0.0) {
                return Err(Error::InvalidSpec(format!("g(s)s ≤ 0 at s = ±{s}")));
            }
        }
        Ok(())
    }
}

/// Stepwise weight: μᵢ on [tᵢ, sᵢ], 0 on (sᵢ, tᵢ₊₁).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepWeight {
    /// t₀ = 0, s₀, t₁, s₁, …, tₘ, sₘ = L
    pub breakpoints: Vec<f64>,
    pub heights: Vec<f64>,
}

impl StepWeight {
    pub fn new(breakpoints: Vec<f64>, heights: Vec<f64>) -> Result<Self> {
        let w = StepWeight { breakpoints, heights };
        w.validate()?;
        Ok(w)
    }

    /// m+1 humps of length τ separated by gaps of length ς, all of height μ.
    pub fn uniform(m: usize, tau: f64, varsigma: f64, mu: f64) -> Result<Self> {
        let mut b = Vec::with_capacity(2 * (m + 1));
        let mut t = 0.0;
        for i in 0..=m {
            b.push(t);
            b.push(t + tau);
            t += tau;
            if i < m {
                t += varsigma;
            }
        }
        Self::new(b, vec![mu; m + 1])
    }

    /// a ≡ μ on [0, L].
    pub fn constant(mu: f64, l: f64) -> Result<Self> {
        Self::new(vec![0.0, l], vec![mu])
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.breakpoints;
        if b.len() < 2 || b.len() % 2 != 0 {
            return Err(Error::InvalidSpec("breakpoints must hold t₀,s₀,…,tₘ,sₘ".into()));
        }
        if b.len() / 2 != self.heights.len() {
            return Err(Error::InvalidSpec(format!(
                "{} humps but {} heights",
                b.len() / 2,
                self.heights.len()
            )));
        }
        if b[0] != 0.0 {
            return Err(Error::InvalidSpec("t₀ must be 0".into()));
        }
        if b.windows(2).any(|w| !(w[1] > w[0])) || b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("breakpoints must be strictly increasing".into()));
        }
        if self.heights.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidSpec("hump heights must be positive".into()));
        }
        Ok(())
    }

    /// Number of gaps; there are m+1 humps.
    pub fn m(&self) -> usize {
        self.heights.len() - 1
    }
    pub fn t(&self, i: usize) -> f64 {
        self.breakpoints[2 * i]
    }
    pub fn s(&self, i: usize) -> f64 {
        self.breakpoints[2 * i + 1]
    }
    pub fn tau(&self, i: usize) -> f64 {
        self.s(i) - self.t(i)
    }
    pub fn varsigma(&self, i: usize) -> f64 {
        self.t(i + 1) - self.s(i)
    }
    pub fn mu(&self, i: usize) -> f64 {
        self.heights[i]
    }
    pub fn length(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }
    pub fn sup_norm(&self) -> f64 {
        self.heights.iter().cloned().fold(0.0, f64::max)
    }

    /// Consecutive segments (t_start, t_end, weight, kind).
    pub fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        for i in 0..=self.m() {
            out.push(Segment { index: i, hump: true, start: self.t(i), end: self.s(i), mu: self.mu(i) });
            if i < self.m() {
                out.push(Segment { index: i, hump: false, start: self.s(i), end: self.t(i + 1), mu: 0.0 });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub index: usize,
    pub hump: bool,
    pub start: f64,
    pub end: f64,
    pub mu: f64,
}

/// Quadrants of the phase plane; clockwise motion visits I → IV → III → II → I.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
}

impl Quadrant {
    /// κ+1 in the cyclic order IV ≺ III ≺ II ≺ I (the next quadrant visited clockwise).
    pub fn next(self) -> Quadrant {
        match self {
            Quadrant::I => Quadrant::IV,
            Quadrant::IV => Quadrant::III,
            Quadrant::III => Quadrant::II,
            Quadrant::II => Quadrant::I,
        }
    }
    /// κ−1.
    pub fn prev(self) -> Quadrant {
        self.next().next().next()
    }
    pub fn all() -> [Quadrant; 4] {
        [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV]
    }
    /// Start of the quadrant's angular sector, clockwise from the positive y-axis.
    pub fn start_angle(self) -> f64 {
        match self {
            Quadrant::I => 0.0,
            Quadrant::IV => 0.5 * PI,
            Quadrant::III => PI,
            Quadrant::II => 1.5 * PI,
        }
    }
    /// Quadrant containing the angle (clockwise from +y).
    pub fn of_angle(theta: f64) -> Quadrant {
        let a = theta.rem_euclid(2.0 * PI);
        if a < 0.5 * PI {
            Quadrant::I
        } else if a < PI {
            Quadrant::IV
        } else if a < 1.5 * PI {
            Quadrant::III
        } else {
            Quadrant::II
        }
    }
    pub fn of_point(x: f64, y: f64) -> Quadrant {
        Self::of_angle(angle_of(x, y))
    }
    pub fn label(self) -> &'static str {
        match self {
            Quadrant::I => "I",
            Quadrant::II => "II",
            Quadrant::III => "III",
            Quadrant::IV => "IV",
        }
    }
}

/// Angle clockwise from the positive y-axis, in [0, 2π).
pub fn angle_of(x: f64, y: f64) -> f64 {
    let a = x.atan2(y);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ArcKind {
    PositiveYAxis,
    NegativeYAxis,
    PositiveXAxis,
    NegativeXAxis,
    Ray { angle: f64 },
    ParamCurve { samples: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryArc {
    #[serde(flatten)]
    pub kind: ArcKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrant_hint: Option<Quadrant>,
}

impl BoundaryArc {
    pub fn new(kind: ArcKind) -> Self {
        BoundaryArc { kind, quadrant_hint: None }
    }
    pub fn positive_y() -> Self {
        Self::new(ArcKind::PositiveYAxis)
    }
    pub fn negative_y() -> Self {
        Self::new(ArcKind::NegativeYAxis)
    }
    pub fn ray(angle: f64) -> Self {
        Self::new(ArcKind::Ray { angle })
    }
    /// Direction angle for half-line arcs.
    pub fn angle(&self) -> Option<f64> {
        match self.kind {
            ArcKind::PositiveYAxis => Some(0.0),
            ArcKind::PositiveXAxis => Some(0.5 * PI),
            ArcKind::NegativeYAxis => Some(PI),
            ArcKind::NegativeXAxis => Some(1.5 * PI),
            ArcKind::Ray { angle } => Some(angle.rem_euclid(2.0 * PI)),
            ArcKind::ParamCurve { .. } => None,
        }
    }
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            ArcKind::Ray { angle } if !angle.is_finite() => Err(Error::InvalidSpec("ray angle must be finite".into())),
            ArcKind::ParamCurve { samples } if samples.len() < 2 => {
                Err(Error::InvalidSpec("param-curve needs at least two samples".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Numeric tolerances carried along with a problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub quad: f64,
    pub ode: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { quad: 1e-10, ode: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub h: HomeoSpec,
    pub g: NonlinSpec,
    pub lambda: f64,
    pub weight: StepWeight,
    pub r0: BoundaryArc,
    #[serde(rename = "rl")]
    pub r_l: BoundaryArc,
    #[serde(skip)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potentials {
    pub g_prim: f64,
    pub h_prim: f64,
    pub f_i: f64,
    pub hamiltonian: f64,
    pub energy: f64,
}

impl ProblemSpec {
    pub fn new(h: HomeoSpec, g: NonlinSpec, lambda: f64, weight: StepWeight, r0: BoundaryArc, r_l: BoundaryArc) -> Result<Self> {
        let p = ProblemSpec { h, g, lambda, weight, r0, r_l, tol: Tolerances::default() };
        p.validate()?;
        Ok(p)
    }

    /// Identity h, power g, Dirichlet arcs on the positive y-axis.
    pub fn semilinear(p: f64, lambda: f64, weight: StepWeight) -> Result<Self> {
        Self::new(
            HomeoSpec::Identity,
            NonlinSpec::PowerP { p },
            lambda,
            weight,
            BoundaryArc::positive_y(),
            BoundaryArc::positive_y(),
        )
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_arcs(mut self, r0: BoundaryArc, r_l: BoundaryArc) -> Self {
        self.r0 = r0;
        self.r_l = r_l;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.h.validate()?;
        self.g.validate()?;
        self.weight.validate()?;
        self.r0.validate()?;
        self.r_l.validate()?;
        if !self.lambda.is_finite() {
            return Err(Error::InvalidSpec("lambda must be finite".into()));
        }
        if self.uniqueness_caveat() {
            log::warn!("h = {:?} with λ = {} may lose uniqueness of the Cauchy problem", self.h, self.lambda);
        }
        Ok(())
    }

    /// h(y)=|y|^q sgn y with q < 1 and λ < 0: solutions may reach the origin in finite time.
    pub fn uniqueness_caveat(&self) -> bool {
        matches!(self.h, HomeoSpec::PowerQ { q } if q < 1.0) && self.lambda < 0.0
    }

    pub fn mu(&self, i: usize) -> f64 {
        self.weight.mu(i)
    }

    /// F_{i,λ}(x) = λx²/2 + μᵢG(x).
    pub fn f(&self, i: usize, x: f64) -> f64 {
        self.f_mu(self.mu(i), x)
    }

    pub fn f_mu(&self, mu: f64, x: f64) -> f64 {
        0.5 * self.lambda * x * x + mu * self.g.big_g(x)
    }

    pub fn f_prime(&self, i: usize, x: f64) -> f64 {
        self.lambda * x + self.mu(i) * self.g.g(x)
    }

    pub fn hamiltonian(&self, i: usize, x: f64, y: f64) -> f64 {
        self.h.big_h(y) + self.f(i, x)
    }

    pub fn energy(&self, x: f64, y: f64) -> f64 {
        self.h.big_h(y) + 0.5 * self.lambda * x * x
    }

    pub fn eval_potentials(&self, i: usize, x: f64, y: f64) -> Result<Potentials> {
        if !self.h.in_domain(y) {
            return Err(Error::DomainViolation(format!("y = {y:e} outside the domain of h")));
        }
        let g_prim = self.g.big_g(x);
        let h_prim = self.h.big_h(y);
        let f_i = self.f(i, x);
        Ok(Potentials { g_prim, h_prim, f_i, hamiltonian: h_prim + f_i, energy: h_prim + 0.5 * self.lambda * x * x })
    }

    /// Right-hand side with weight μ.
    #[inline]
    pub fn rhs(&self, mu: f64, x: f64, y: f64) -> (f64, f64) {
        let gx = if mu == 0.0 { 0.0 } else { mu * self.g.g(x) };
        (self.h.h_raw(y), -self.lambda * x - gx)
    }
}

pub fn eval_potentials(problem: &ProblemSpec, i: usize, x: f64, y: f64) -> Result<Potentials> {
    problem.eval_potentials(i, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate;

    #[test]
    fn eval_h_examples() {
        assert_eq!(HomeoSpec::Identity.eval_h(0.0).unwrap(), 0.0);
        assert!((HomeoSpec::MinkowskiInverse.eval_h(0.6).unwrap() - 0.75).abs() < 1e-15);
        let lb = HomeoSpec::LogBarrier { rho_plus: 4.0 };
        assert!((lb.eval_h(2.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(HomeoSpec::MinkowskiInverse.eval_h(1.0), Err(Error::DomainViolation(_))));
        assert!(matches!(lb.eval_h(4.5), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn primitives_match_quadrature() {
        let kinds = [
            HomeoSpec::Identity,
            HomeoSpec::PowerQ { q: 0.5 },
            HomeoSpec::PowerQ { q: 2.5 },
            HomeoSpec::MinkowskiInverse,
            HomeoSpec::RelativisticInverse,
            HomeoSpec::RationalCubic,
            HomeoSpec::LogBarrier { rho_plus: 4.0 },
        ];
        for h in kinds {
            for &y in &[-0.9, -0.3, 1e-3, 0.05, 0.4, 0.95] {
                let q = integrate(|s| h.h_raw(s), 0.0, y, 1e-15, 1e-13).unwrap();
                let rel = (h.big_h(y) - q.value).abs() / q.value.abs().max(1e-300);
                assert!(rel < 1e-9, "{h:?} y={y}: {} vs {}", h.big_h(y), q.value);
            }
        }
    }

    #[test]
    fn h_star_values() {
        assert_eq!(HomeoSpec::Identity.h_star(), f64::INFINITY);
        assert_eq!(HomeoSpec::MinkowskiInverse.h_star(), 1.0);
        assert!((HomeoSpec::MinkowskiInverse.big_h(1.0 - 1e-12) - 1.0).abs() < 1e-5);
        let lb = HomeoSpec::LogBarrier { rho_plus: 4.0 };
        // improper integral of the log singularity at ρ₊
        let q = crate::numeric::integrate_from_singular(|d| lb.h_raw(4.0 - d), 4.0, 2, 1e-13, 1e-13).unwrap();
        assert!((q.value - lb.h_star()).abs() < 1e-9);
    }

    #[test]
    fn inverses_roundtrip() {
        let kinds = [
            HomeoSpec::Identity,
            HomeoSpec::PowerQ { q: 3.0 },
            HomeoSpec::MinkowskiInverse,
            HomeoSpec::RelativisticInverse,
            HomeoSpec::RationalCubic,
            HomeoSpec::LogBarrier { rho_plus: 4.0 },
        ];
        for h in kinds {
            for &v in &[1e-9, 1e-3, 0.3, 0.9] {
                for side in [Side::Plus, Side::Minus] {
                    let y = h.h_inv(v, side).unwrap();
                    assert!(y * side.sign() > 0.0);
                    assert!((h.big_h(y) - v).abs() <= 1e-12 * v.max(1e-3), "{h:?} {v} {side:?}");
                    assert!((h.speed(v, side).unwrap() - h.h_raw(y).abs()).abs() < 1e-10 * (1.0 + h.h_raw(y).abs()));
                }
            }
        }
        let g = NonlinSpec::ExpMinusOne;
        for &v in &[1e-6, 0.2, 3.0] {
            for side in [Side::Plus, Side::Minus] {
                let x = g.g_inv(v, side).unwrap();
                assert!((g.big_g(x) - v).abs() < 1e-12 * v.max(1e-3));
            }
        }
    }

    #[test]
    fn example_hamiltonian() {
        let w = StepWeight::constant(20.0, 1.0).unwrap();
        let p = ProblemSpec::semilinear(3.0, 1.0, w).unwrap();
        let x = 0.4f64.sqrt();
        let pot = p.eval_potentials(0, x, 0.0).unwrap();
        assert!((pot.hamiltonian - 1.0).abs() < 1e-14);
        assert_eq!(p.eval_potentials(0, 0.0, 0.0).unwrap().hamiltonian, 0.0);
    }

    #[test]
    fn finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let w = StepWeight::constant(2.5, 1.0).unwrap();
        for h in [HomeoSpec::MinkowskiInverse, HomeoSpec::LogBarrier { rho_plus: 4.0 }, HomeoSpec::RationalCubic] {
            for g in [NonlinSpec::PowerP { p: 3.0 }, NonlinSpec::ExpMinusOne] {
                let p = ProblemSpec::new(h, g, -0.7, w.clone(), BoundaryArc::positive_y(), BoundaryArc::positive_y()).unwrap();
                for _ in 0..100 {
                    let y = rng.gen_range(-0.8..0.8);
                    let x = rng.gen_range(-2.0..2.0);
                    let e = 1e-6;
                    let dh = (h.big_h(y + e) - h.big_h(y - e)) / (2.0 * e);
                    assert!((dh - h.h_raw(y)).abs() <= 1e-6 * h.h_raw(y).abs().max(1e-3));
                    let df = (p.f(0, x + e) - p.f(0, x - e)) / (2.0 * e);
                    assert!((df - p.f_prime(0, x)).abs() <= 1e-6 * p.f_prime(0, x).abs().max(1e-3));
                }
            }
        }
    }

    #[test]
    fn weight_layout() {
        let w = StepWeight::uniform(2, 1.0, 0.5, 3.0).unwrap();
        assert_eq!(w.breakpoints, vec![0.0, 1.0, 1.5, 2.5, 3.0, 4.0]);
        assert_eq!(w.m(), 2);
        assert_eq!(w.varsigma(1), 0.5);
        assert_eq!(w.length(), 4.0);
        assert!(StepWeight::new(vec![0.0, 1.0, 1.0, 2.0], vec![1.0, 1.0]).is_err());
        assert!(StepWeight::new(vec![0.1, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn quadrant_cycle() {
        assert_eq!(Quadrant::I.next(), Quadrant::IV);
        assert_eq!(Quadrant::I.prev(), Quadrant::II);
        assert_eq!(Quadrant::of_point(1.0, 1.0), Quadrant::I);
        assert_eq!(Quadrant::of_point(1.0, -1.0), Quadrant::IV);
        assert_eq!(Quadrant::of_point(-1.0, -1.0), Quadrant::III);
        assert_eq!(Quadrant::of_point(-1.0, 1.0), Quadrant::II);
    }

    #[test]
    fn uniqueness_flag() {
        let w = StepWeight::constant(1.0, 1.0).unwrap();
        let p = ProblemSpec::new(HomeoSpec::PowerQ { q: 0.5 }, NonlinSpec::PowerP { p: 3.0 }, -1.0, w, BoundaryArc::positive_y(), BoundaryArc::positive_y()).unwrap();
        assert!(p.uniqueness_caveat());
    }
}
