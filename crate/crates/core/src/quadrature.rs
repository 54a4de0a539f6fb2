//! Periods, quarter-lap times and linear-system transit times.

use crate::error::{Error, Result};
use crate::model::{ProblemSpec, Side};
use crate::numeric::{brent, geometric_bracket, integrate, integrate_from_singular, Quad};
use serde::Serialize;
use statrs::function::beta::beta;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelCrossing {
    pub c: f64,
    pub x_plus: f64,
    pub x_minus: f64,
    pub y_plus: f64,
    pub y_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarterTimes {
    pub t_i: f64,
    pub t_ii: f64,
    pub t_iii: f64,
    pub t_iv: f64,
    pub period: f64,
    /// Sum of the quadrature error estimates.
    pub error: f64,
}

impl QuarterTimes {
    pub fn get(&self, q: crate::model::Quadrant) -> f64 {
        use crate::model::Quadrant::*;
        match q {
            I => self.t_i,
            II => self.t_ii,
            III => self.t_iii,
            IV => self.t_iv,
        }
    }
}

/// Root of F(x) = c nearest 0 on the chosen side, for F(x) = λx²/2 + μG(x).
pub fn level_abscissa_mu(problem: &ProblemSpec, mu: f64, c: f64, side: Side) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::DomainViolation(format!("level c = {c:e} must be positive")));
    }
    let s = side.sign();
    let f = |x: f64| problem.f_mu(mu, s * x) - c;
    let (mut lo, mut hi) = geometric_bracket(|x| f(x) >= 0.0, 1e-8)
        .ok_or_else(|| Error::NoBracket(format!("F = {c:e} has no {side:?} crossing")))?;
    let mut root = brent(f, lo, hi, 0.0, 1e-15)?;
    // enforce F < c on (0, root)
    for _ in 0..8 {
        let n = 64;
        let hit = (1..n).map(|k| root * k as f64 / n as f64).find(|&x| f(x) >= 0.0);
        match hit {
            Some(x) => {
                hi = x;
                lo = x - root / n as f64;
                root = brent(f, lo, hi, 0.0, 1e-15)?;
            }
            None => break,
        }
    }
    let x = s * root;
    let slope = problem.lambda * x + mu * problem.g.g(x);
    if (slope * x).abs() <= 1e-9 * c {
        return Err(Error::DegenerateLevel { c, x, slope });
    }
    Ok(x)
}

pub fn solve_level_abscissa(problem: &ProblemSpec, i: usize, c: f64, side: Side) -> Result<f64> {
    level_abscissa_mu(problem, problem.mu(i), c, side)
}

pub fn level_crossing(problem: &ProblemSpec, i: usize, c: f64) -> Result<LevelCrossing> {
    Ok(LevelCrossing {
        c,
        x_plus: solve_level_abscissa(problem, i, c, Side::Plus)?,
        x_minus: solve_level_abscissa(problem, i, c, Side::Minus)?,
        y_plus: problem.h.h_inv(c, Side::Plus)?,
        y_minus: problem.h.h_inv(c, Side::Minus)?,
    })
}

/// ∫ between 0 and the turning point x_end of dx / speed(c − F(x)).
fn quarter(problem: &ProblemSpec, mu: f64, c: f64, x_end: f64, yside: Side) -> Result<Quad> {
    let h = problem.h;
    let fp = |x: f64| problem.lambda * x + mu * problem.g.g(x);
    let slope = fp(x_end).abs();
    let len = x_end.abs();
    let dir = x_end.signum();
    let e = 1e-5 * len;
    let curv = (fp(x_end + e) - fp(x_end - e)) / (2.0 * e);
    let r0 = c - problem.f_mu(mu, x_end);
    let mut err = None;
    let q = integrate_from_singular(
        |d| {
            let x = x_end - dir * d;
            // second-order expansion near the turning point avoids cancellation in c − F
            let v = if d < 1e-5 * len { r0 + slope * d - 0.5 * curv * d * d } else { c - problem.f_mu(mu, x) };
            match h.speed(v, yside) {
                Ok(s) if s > 0.0 => 1.0 / s,
                Ok(_) => 0.0,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        },
        len,
        h.singular_power(),
        problem.tol.quad,
        problem.tol.quad,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(q)
}

pub fn quarter_times_mu(problem: &ProblemSpec, mu: f64, c: f64) -> Result<QuarterTimes> {
    let hs = problem.h.h_star();
    if c >= hs {
        return Err(Error::DomainViolation(format!("level c = {c:e} ≥ H* = {hs:e}")));
    }
    let xp = level_abscissa_mu(problem, mu, c, Side::Plus)?;
    let xm = level_abscissa_mu(problem, mu, c, Side::Minus)?;
    let qi = quarter(problem, mu, c, xp, Side::Plus)?;
    let qiv = quarter(problem, mu, c, xp, Side::Minus)?;
    let qiii = quarter(problem, mu, c, xm, Side::Minus)?;
    let qii = quarter(problem, mu, c, xm, Side::Plus)?;
    Ok(QuarterTimes {
        t_i: qi.value,
        t_ii: qii.value,
        t_iii: qiii.value,
        t_iv: qiv.value,
        period: qi.value + qii.value + qiii.value + qiv.value,
        error: qi.error + qii.error + qiii.error + qiv.error,
    })
}

pub fn quarter_times(problem: &ProblemSpec, i: usize, c: f64) -> Result<QuarterTimes> {
    quarter_times_mu(problem, problem.mu(i), c)
}

pub fn period(problem: &ProblemSpec, i: usize, c: f64) -> Result<f64> {
    Ok(quarter_times(problem, i, c)?.period)
}

/// Single-integral period of the orbit through (x₊, 0) for h = id, g = |x|^{p−1}x.
pub fn period_semilinear(lambda: f64, mu: f64, p: f64, x_plus: f64) -> Result<Quad> {
    let k = 2.0 * mu / (p + 1.0) * x_plus.powf(p - 1.0);
    let mut bad = false;
    let q = integrate_from_singular(
        |d| {
            let a = d * (2.0 - d);
            let b = -((p + 1.0) * (-d).ln_1p()).exp_m1();
            let v = lambda * a + k * b;
            if v <= 0.0 {
                bad = true;
                return 0.0;
            }
            1.0 / v.sqrt()
        },
        1.0,
        2,
        1e-13,
        1e-12,
    );
    // the integrand is only C¹ at d = 1 for p < 1; accept a slightly looser but still tight estimate
    let q = match q {
        Err(Error::Quadrature { value, error }) if error <= 1e-9 * value.abs() => Quad { value, error, evals: 0 },
        r => r?,
    };
    if bad {
        return Err(Error::DomainViolation(format!("x₊ = {x_plus:e} is not on a closed orbit")));
    }
    Ok(Quad { value: 4.0 * q.value, error: 4.0 * q.error, evals: q.evals })
}

/// C(p) = B(1/(p+1), 1/2) / (√2 (p+1)^{p/(p+1)}).
pub fn scaling_constant(p: f64) -> f64 {
    beta(1.0 / (p + 1.0), 0.5) / (2f64.sqrt() * (p + 1.0).powf(p / (p + 1.0)))
}

/// 𝒯/4 at λ = 0: μ^{−1/(p+1)} c^{(1−p)/(2(p+1))} C(p).
pub fn period_scaling_lambda0(p: f64, mu: f64, c: f64) -> f64 {
    mu.powf(-1.0 / (p + 1.0)) * c.powf((1.0 - p) / (2.0 * (p + 1.0))) * scaling_constant(p)
}

/// θ* = ((p+1)/2)^{1/(1−p)}, the upper end of the sublinear range.
pub fn theta_star(p: f64) -> f64 {
    ((p + 1.0) / 2.0).powf(1.0 / (1.0 - p))
}

/// 𝒯₁(θ) = ∫₀¹ ds / √(−(1−s²) + θ^{p−1}(1−s^{p+1})).
pub fn script_t1(theta: f64, p: f64) -> Result<f64> {
    let ok = if p > 1.0 { theta > 1.0 } else { p > 0.0 && theta > 0.0 && theta < theta_star(p) };
    if !ok || !theta.is_finite() {
        return Err(Error::OutOfRange(format!("θ = {theta} outside the admissible range for p = {p}")));
    }
    let k = theta.powf(p - 1.0);
    let q = integrate_from_singular(
        |d| {
            let a = d * (2.0 - d);
            let b = -((p + 1.0) * (-d).ln_1p()).exp_m1();
            let v = -a + k * b;
            if v <= 0.0 {
                0.0
            } else {
                1.0 / v.sqrt()
            }
        },
        1.0,
        2,
        1e-12,
        1e-12,
    )?;
    Ok(q.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaBounds {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_star: f64,
}

/// Λ₁ = arcsinh(θ₂/(θ₁√(θ₁^{p−1}−1))), Λ₂ = arccosh(θ₂/θ₁), Λ* = (2/√|λ|) max(Λ₁, Λ₂).
pub fn lambda_bounds(theta1: f64, theta2: f64, p: f64, lambda: f64) -> Result<LambdaBounds> {
    if lambda >= 0.0 {
        return Err(Error::SignViolation(format!("λ = {lambda} must be negative")));
    }
    let ordered = if p > 1.0 { 1.0 < theta1 && theta1 <= theta2 } else { 0.0 < theta1 && theta1 <= theta2 && theta2 < theta_star(p) };
    let base = theta1.powf(p - 1.0) - 1.0;
    if !ordered || !(base > 0.0) {
        return Err(Error::OutOfRange(format!("θ₁ = {theta1}, θ₂ = {theta2} for p = {p}")));
    }
    let l1 = (theta2 / (theta1 * base.sqrt())).asinh();
    let l2 = (theta2 / theta1).acosh();
    Ok(LambdaBounds { lambda1: l1, lambda2: l2, lambda_star: 2.0 / (-lambda).sqrt() * l1.max(l2) })
}

/// ∫_a^b dx / |h(H±⁻¹(c − λx²/2))| along the level line 𝓔 = c (a ≤ b).
pub fn level_arc_time(problem: &ProblemSpec, c: f64, a: f64, b: f64, side: Side) -> Result<Quad> {
    if b < a {
        return level_arc_time(problem, c, b, a, side);
    }
    let lam = problem.lambda;
    let h = problem.h;
    let v = |x: f64| c - 0.5 * lam * x * x;
    let scale = c.abs().max(1.0);
    let (va, vb) = (v(a), v(b));
    if va < -1e-12 * scale || vb < -1e-12 * scale || (lam > 0.0 && a < 0.0 && b > 0.0 && c < 0.0) {
        return Err(Error::IncompatibleGeometry(format!("level {c:e} does not span [{a:e}, {b:e}]")));
    }
    let vmax = if lam > 0.0 && a <= 0.0 && b >= 0.0 { c } else { va.max(vb) };
    if vmax >= h.h_star() {
        return Err(Error::DomainViolation(format!("arc on level {c:e} leaves the strip")));
    }
    if lam == 0.0 {
        let s = h.speed(c, side)?;
        return Ok(Quad { value: (b - a) / s, error: 0.0, evals: 1 });
    }
    let sing_a = va.abs() <= 1e-12 * scale;
    let sing_b = vb.abs() <= 1e-12 * scale;
    let tol = problem.tol.quad;
    let k = h.singular_power();
    let mut err = None;
    let mut inv = |vv: f64, x: f64, x0: f64, d: f64| -> f64 {
        // near a turning point use the linearization c − λx²/2 ≈ λ x0 d
        let lin = (lam * x0).abs() * d;
        let vv = if d < 1e-6 * x0.abs().max(1e-300) && vv < 0.5 * lin { lin } else { vv };
        let _ = x;
        match h.speed(vv, side) {
            Ok(s) if s > 0.0 => 1.0 / s,
            Ok(_) => 0.0,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let q = match (sing_a, sing_b) {
        (false, false) => integrate(|x| inv(v(x), x, 1.0, 1.0), a, b, tol, tol)?,
        (true, false) => integrate_from_singular(|d| inv(v(a + d), a + d, a, d), b - a, k, tol, tol)?,
        (false, true) => integrate_from_singular(|d| inv(v(b - d), b - d, b, d), b - a, k, tol, tol)?,
        (true, true) => {
            let m = 0.5 * (a + b);
            let q1 = integrate_from_singular(|d| inv(v(a + d), a + d, a, d), m - a, k, tol, tol)?;
            let q2 = integrate_from_singular(|d| inv(v(b - d), b - d, b, d), b - m, k, tol, tol)?;
            Quad { value: q1.value + q2.value, error: q1.error + q2.error, evals: q1.evals + q2.evals }
        }
    };
    if let Some(e) = err {
        return Err(e);
    }
    Ok(q)
}

/// Quadrant-to-quadrant routes through a gap for λ ≤ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GapRoute {
    IIToI,
    IVToIII,
    IVToI,
    IIToIII,
}

/// Routes along a closed level 𝓔 = c of the linear centre (λ > 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LevelRoute {
    OuterIIToI,
    InnerIIToI,
    InnerToTurnIIToI,
    OuterIVToIII,
    InnerIVToIII,
    InnerToTurnIVToIII,
    IIIToI,
    IToIII,
}

/// Inner and outer levels of two consecutive annuli.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusPair {
    pub i: usize,
    pub inner: [f64; 2],
    pub outer: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    /// 𝒮^λ(ℓ, r; (0, y₊)).
    AxisUpper { left: f64, right: f64, y_plus: f64 },
    /// 𝒮^λ(r, ℓ; (0, y₋)).
    AxisLower { right: f64, left: f64, y_minus: f64 },
    /// 𝒮^λ(r₁, r₂; (x₊, 0)), λ < 0.
    TurnRight { r1: f64, r2: f64, x_plus: f64 },
    /// 𝒮^λ(ℓ₁, ℓ₂; (x₋, 0)), λ < 0.
    TurnLeft { l1: f64, l2: f64, x_minus: f64 },
    /// Annulus-to-annulus transit for λ ≤ 0.
    Gap { pair: AnnulusPair, route: GapRoute },
    /// Transit along 𝓔 = c for λ > 0.
    Level { pair: AnnulusPair, c: f64, route: LevelRoute },
}

/// Abscissas where 𝓔 = c meets the level 𝓗_j = c_j, for λ > 0: G±⁻¹((c_j − c)/μ_j).
fn level_meet(problem: &ProblemSpec, j: usize, cj: f64, c: f64, side: Side) -> Result<f64> {
    let v = (cj - c) / problem.mu(j);
    if v < -1e-14 * cj.abs().max(1.0) {
        return Err(Error::IncompatibleGeometry(format!("level {c:e} exceeds annulus level {cj:e}")));
    }
    problem.g.g_inv(v.max(0.0), side)
}

pub fn transit_linear(problem: &ProblemSpec, crossing: &Crossing) -> Result<f64> {
    Ok(transit_linear_quad(problem, crossing)?.value)
}

pub fn transit_linear_quad(problem: &ProblemSpec, crossing: &Crossing) -> Result<Quad> {
    let lam = problem.lambda;
    let h = problem.h;
    let add = |a: Quad, b: Quad| Quad { value: a.value + b.value, error: a.error + b.error, evals: a.evals + b.evals };
    match *crossing {
        Crossing::AxisUpper { left, right, y_plus } => level_arc_time(problem, h.big_h(y_plus), left, right, Side::Plus),
        Crossing::AxisLower { right, left, y_minus } => level_arc_time(problem, h.big_h(y_minus), left, right, Side::Minus),
        Crossing::TurnRight { r1, r2, x_plus } => {
            if lam >= 0.0 {
                return Err(Error::SignViolation("turning transits need λ < 0".into()));
            }
            let c = 0.5 * lam * x_plus * x_plus;
            Ok(add(level_arc_time(problem, c, x_plus, r2, Side::Plus)?, level_arc_time(problem, c, x_plus, r1, Side::Minus)?))
        }
        Crossing::TurnLeft { l1, l2, x_minus } => {
            if lam >= 0.0 {
                return Err(Error::SignViolation("turning transits need λ < 0".into()));
            }
            let c = 0.5 * lam * x_minus * x_minus;
            Ok(add(level_arc_time(problem, c, l1, x_minus, Side::Plus)?, level_arc_time(problem, c, l2, x_minus, Side::Minus)?))
        }
        Crossing::Gap { pair, route } => {
            if lam > 0.0 {
                return Err(Error::IncompatibleGeometry("gap routes are for λ ≤ 0".into()));
            }
            let (i, j) = (pair.i, pair.i + 1);
            let (mi, mj) = (problem.mu(i), problem.mu(j));
            let g = problem.g;
            match route {
                GapRoute::IIToI => {
                    let yp = h.h_inv(pair.inner[0], Side::Plus)?.min(h.h_inv(pair.inner[1], Side::Plus)?);
                    let e = h.big_h(yp);
                    let xl = g.g_inv((pair.outer[0] - e) / mi, Side::Minus)?;
                    let xr = g.g_inv((pair.outer[1] - e) / mj, Side::Plus)?;
                    transit_linear_quad(problem, &Crossing::AxisUpper { left: xl, right: xr, y_plus: yp })
                }
                GapRoute::IVToIII => {
                    let ym = h.h_inv(pair.inner[0], Side::Minus)?.max(h.h_inv(pair.inner[1], Side::Minus)?);
                    let e = h.big_h(ym);
                    let xr = g.g_inv((pair.outer[0] - e) / mi, Side::Plus)?;
                    let xl = g.g_inv((pair.outer[1] - e) / mj, Side::Minus)?;
                    transit_linear_quad(problem, &Crossing::AxisLower { right: xr, left: xl, y_minus: ym })
                }
                GapRoute::IVToI => {
                    if lam == 0.0 {
                        return Err(Error::SignViolation("turning routes need λ < 0".into()));
                    }
                    let xp = solve_level_abscissa(problem, i, pair.inner[0], Side::Plus)?
                        .min(solve_level_abscissa(problem, j, pair.inner[1], Side::Plus)?);
                    let x2i = solve_level_abscissa(problem, i, pair.outer[0], Side::Plus)?;
                    let x2j = solve_level_abscissa(problem, j, pair.outer[1], Side::Plus)?;
                    let r1 = g.g_inv(g.big_g(x2i) + lam / (2.0 * mi) * (x2i * x2i - xp * xp), Side::Plus)?;
                    let r2 = g.g_inv(g.big_g(x2j) + lam / (2.0 * mj) * (x2j * x2j - xp * xp), Side::Plus)?;
                    transit_linear_quad(problem, &Crossing::TurnRight { r1, r2, x_plus: xp })
                }
                GapRoute::IIToIII => {
                    if lam == 0.0 {
                        return Err(Error::SignViolation("turning routes need λ < 0".into()));
                    }
                    let xm = solve_level_abscissa(problem, i, pair.inner[0], Side::Minus)?
                        .max(solve_level_abscissa(problem, j, pair.inner[1], Side::Minus)?);
                    let x2i = solve_level_abscissa(problem, i, pair.outer[0], Side::Minus)?;
                    let x2j = solve_level_abscissa(problem, j, pair.outer[1], Side::Minus)?;
                    let l1 = g.g_inv(g.big_g(x2i) + lam / (2.0 * mi) * (x2i * x2i - xm * xm), Side::Minus)?;
                    let l2 = g.g_inv(g.big_g(x2j) + lam / (2.0 * mj) * (x2j * x2j - xm * xm), Side::Minus)?;
                    transit_linear_quad(problem, &Crossing::TurnLeft { l1, l2, x_minus: xm })
                }
            }
        }
        Crossing::Level { pair, c, route } => {
            if lam <= 0.0 {
                return Err(Error::SignViolation("level routes need λ > 0".into()));
            }
            let compat = crate::certify::check_compat(problem, pair.i, (pair.outer[0], pair.outer[1]), c)?;
            if !compat.compatible {
                return Err(Error::IncompatibleGeometry(format!("level {c:e} fails the compatibility condition")));
            }
            let (i, j) = (pair.i, pair.i + 1);
            let root = (2.0 * c / lam).sqrt();
            let up = |a: f64, b: f64| level_arc_time(problem, c, a, b, Side::Plus);
            let down = |a: f64, b: f64| level_arc_time(problem, c, a, b, Side::Minus);
            match route {
                LevelRoute::OuterIIToI => up(level_meet(problem, i, pair.outer[0], c, Side::Minus)?, level_meet(problem, j, pair.outer[1], c, Side::Plus)?),
                LevelRoute::InnerIIToI => up(level_meet(problem, i, pair.inner[0], c, Side::Minus)?, level_meet(problem, j, pair.inner[1], c, Side::Plus)?),
                LevelRoute::InnerToTurnIIToI => up(level_meet(problem, i, pair.inner[0], c, Side::Minus)?, root),
                LevelRoute::OuterIVToIII => down(level_meet(problem, j, pair.outer[1], c, Side::Minus)?, level_meet(problem, i, pair.outer[0], c, Side::Plus)?),
                LevelRoute::InnerIVToIII => down(level_meet(problem, j, pair.inner[1], c, Side::Minus)?, level_meet(problem, i, pair.inner[0], c, Side::Plus)?),
                LevelRoute::InnerToTurnIVToIII => down(-root, level_meet(problem, i, pair.inner[0], c, Side::Plus)?),
                LevelRoute::IIIToI => Ok(add(
                    down(-root, level_meet(problem, i, pair.outer[0], c, Side::Minus)?)?,
                    up(-root, level_meet(problem, j, pair.inner[1], c, Side::Plus)?)?,
                )),
                LevelRoute::IToIII => Ok(add(
                    up(level_meet(problem, i, pair.outer[0], c, Side::Plus)?, root)?,
                    down(level_meet(problem, j, pair.inner[1], c, Side::Minus)?, root)?,
                )),
            }
        }
    }
}

/// Period of the linear centre orbit 𝓔 = c (λ > 0).
pub fn linear_period(problem: &ProblemSpec, c: f64) -> Result<f64> {
    if problem.lambda <= 0.0 {
        return Err(Error::SignViolation("closed linear orbits need λ > 0".into()));
    }
    let r = (2.0 * c / problem.lambda).sqrt();
    Ok(level_arc_time(problem, c, -r, r, Side::Plus)?.value + level_arc_time(problem, c, -r, r, Side::Minus)?.value)
}

/// 2π/√λ, the small-amplitude period limit for λ > 0.
pub fn linear_limit(lambda: f64) -> f64 {
    2.0 * PI / lambda.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    fn semi(p: f64, lambda: f64, mu: f64) -> ProblemSpec {
        ProblemSpec::semilinear(p, lambda, StepWeight::uniform(1, 1.0, 1.0, mu).unwrap()).unwrap()
    }

    #[test]
    fn example_abscissas() {
        let pr = semi(3.0, 1.0, 20.0);
        let x = solve_level_abscissa(&pr, 0, 1.0, Side::Plus).unwrap();
        assert!((x * x - 0.4).abs() < 1e-10);
        let x = solve_level_abscissa(&pr, 0, 5.0, Side::Plus).unwrap();
        assert!((x * x - (401f64.sqrt() - 1.0) / 20.0).abs() < 1e-10);
        let x = solve_level_abscissa(&pr, 0, 5.0, Side::Minus).unwrap();
        assert!((x * x - (401f64.sqrt() - 1.0) / 20.0).abs() < 1e-10 && x < 0.0);
    }

    #[test]
    fn no_bracket_above_heteroclinic() {
        // p < 1, λ < 0: F is bounded above by c*
        let pr = semi(0.5, -1.0, 1.0);
        assert!(matches!(solve_level_abscissa(&pr, 0, 10.0, Side::Plus), Err(Error::NoBracket(_))));
    }

    #[test]
    fn harmonic_quarters() {
        // λ = 1 with vanishing μ: harmonic oscillator
        let pr = semi(3.0, 1.0, 1e-14);
        let q = quarter_times(&pr, 0, 0.5).unwrap();
        for t in [q.t_i, q.t_ii, q.t_iii, q.t_iv] {
            assert!((t - PI / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn odd_symmetry_and_single_integral() {
        for &(p, lam, mu, c) in &[(3.0, 1.0, 20.0, 1.0), (3.0, -1.0, 2.0, 3.0), (0.5, 0.5, 1.0, 0.7), (2.0, 0.0, 1.5, 2.0)] {
            let pr = semi(p, lam, mu);
            let q = quarter_times(&pr, 0, c).unwrap();
            for t in [q.t_ii, q.t_iii, q.t_iv] {
                assert!((t - q.t_i).abs() < 1e-9, "{p} {lam}");
            }
            let xp = solve_level_abscissa(&pr, 0, c, Side::Plus).unwrap();
            let s = period_semilinear(lam, mu, p, xp).unwrap();
            assert!((s.value - q.period).abs() < 1e-8);
        }
    }

    #[test]
    fn lambda0_scaling() {
        for &p in &[0.5, 2.0, 3.0] {
            let pr = semi(p, 0.0, 1.7);
            let t = period(&pr, 0, 2.3).unwrap();
            assert!((t - 4.0 * period_scaling_lambda0(p, 1.7, 2.3)).abs() < 1e-8);
        }
        let (p, mu, c, k) = (3.0, 2.0, 1.5, 3.0);
        let base = period_scaling_lambda0(p, mu, c);
        assert!((period_scaling_lambda0(p, mu, k * c) / base - k.powf((1.0 - p) / (2.0 * (p + 1.0)))).abs() < 1e-13);
        assert!((period_scaling_lambda0(p, k * mu, c) / base - k.powf(-1.0 / (p + 1.0))).abs() < 1e-13);
    }

    #[test]
    fn asymmetric_quarters_log_barrier() {
        let w = StepWeight::constant(0.8, 1.0).unwrap();
        let pr = ProblemSpec::new(HomeoSpec::LogBarrier { rho_plus: 4.0 }, NonlinSpec::ExpMinusOne, -0.05, w, BoundaryArc::positive_y(), BoundaryArc::positive_y()).unwrap();
        let q = quarter_times(&pr, 0, 0.3).unwrap();
        assert!((q.t_i - q.t_ii).abs() > 1e-3);
        assert!(q.period.is_finite() && q.period > 0.0);
    }

    #[test]
    fn rational_cubic_order_three() {
        let w = StepWeight::constant(1.0, 1.0).unwrap();
        let pr = ProblemSpec::new(HomeoSpec::RationalCubic, NonlinSpec::PowerP { p: 2.0 }, 1.0, w, BoundaryArc::positive_y(), BoundaryArc::positive_y()).unwrap();
        let q = quarter_times(&pr, 0, 2.0).unwrap();
        assert!((q.t_i - q.t_iv).abs() < 1e-9);
        assert!(q.error < 1e-8);
    }

    #[test]
    fn domain_violation_at_h_star() {
        let w = StepWeight::constant(1.0, 1.0).unwrap();
        let pr = ProblemSpec::new(HomeoSpec::MinkowskiInverse, NonlinSpec::PowerP { p: 3.0 }, 0.0, w, BoundaryArc::positive_y(), BoundaryArc::positive_y()).unwrap();
        assert!(matches!(quarter_times(&pr, 0, 1.0), Err(Error::DomainViolation(_))));
        assert!(quarter_times(&pr, 0, 0.5).is_ok());
    }

    #[test]
    fn transit_basics() {
        let pr = semi(3.0, 0.0, 1.0);
        let t = transit_linear(&pr, &Crossing::AxisUpper { left: -1.0, right: 1.0, y_plus: 1.0 }).unwrap();
        assert!((t - 2.0).abs() < 1e-15);
        let pr = semi(3.0, 1.0, 20.0);
        let pair = AnnulusPair { i: 0, inner: [1.0, 1.0], outer: [5.0, 5.0] };
        let t = transit_linear(&pr, &Crossing::Level { pair, c: 1.0, route: LevelRoute::InnerToTurnIIToI }).unwrap();
        assert!((t - PI / 2.0).abs() < 1e-9);
        let t = transit_linear(&pr, &Crossing::Level { pair, c: 1.0, route: LevelRoute::InnerToTurnIVToIII }).unwrap();
        assert!((t - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn t1_values_and_range() {
        assert!(script_t1(1.0, 3.0).is_err());
        assert!(script_t1(0.4, 0.5).is_ok());
        assert!(script_t1(theta_star(0.5) + 0.1, 0.5).is_err());
        // 𝒯₁(θ(x₊)) = (𝒯/4)√|λ|
        let (lam, mu, p): (f64, f64, f64) = (-2.0, 3.0, 3.0);
        let xs = (-lam * (p + 1.0) / (2.0 * mu)).powf(1.0 / (p - 1.0));
        let xp = 1.7 * xs;
        let t = period_semilinear(lam, mu, p, xp).unwrap().value;
        assert!((script_t1(1.7, p).unwrap() - t / 4.0 * (-lam).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn lambda_bounds_closed_form_vs_transits() {
        let (p, lam, mu): (f64, f64, f64) = (3.0, -1.0, 2.0);
        let pr = semi(p, lam, mu);
        let xs = (-lam * (p + 1.0) / (2.0 * mu)).powf(1.0 / (p - 1.0));
        let (t1, t2) = (2.0, 4.0);
        let b = lambda_bounds(t1, t2, p, lam).unwrap();
        let (x1, x2) = (t1 * xs, t2 * xs);
        let c1 = pr.f(0, x1);
        let yp = (2.0 * c1).sqrt();
        let s1 = transit_linear(&pr, &Crossing::AxisUpper { left: 0.0, right: x2, y_plus: yp }).unwrap();
        assert!((s1 * (-lam).sqrt() - b.lambda1).abs() < 1e-8);
        let s2 = transit_linear(&pr, &Crossing::TurnRight { r1: x1, r2: x2, x_plus: x1 }).unwrap();
        assert!((s2 * (-lam).sqrt() - b.lambda2).abs() < 1e-8);
        assert_eq!(lambda_bounds(1.5, 1.5, 3.0, -1.0).unwrap().lambda2, 0.0);
        assert!(lambda_bounds(0.5, 2.0, 3.0, -1.0).is_err());
    }
}
