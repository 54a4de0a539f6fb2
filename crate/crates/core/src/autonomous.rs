//! Constant-weight semilinear theory: σₙ, the λ < 0 constants, and the M₊(λ) branches.

use crate::error::{Error, Result};
use crate::numeric::brent;
use crate::quadrature::period_semilinear;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// σₙ = (nπ/L)².
pub fn sigma_n(n: u32, l: f64) -> f64 {
    (n as f64 * PI / l).powi(2)
}

/// (x*, ω₊, c*) for λ < 0: x* = (−λ(p+1)/(2μ))^{1/(p−1)}, ω₊ = (−λ/μ)^{1/(p−1)}, c* = 𝓗(ω₊, 0).
pub fn critical_points(lambda: f64, mu: f64, p: f64) -> Result<(f64, f64, f64)> {
    if lambda >= 0.0 {
        return Err(Error::SignViolation(format!("λ = {lambda} must be negative")));
    }
    if !(mu > 0.0 && p > 0.0 && p != 1.0) {
        return Err(Error::InvalidSpec(format!("μ = {mu}, p = {p}")));
    }
    let e = 1.0 / (p - 1.0);
    let x_star = (-lambda * (p + 1.0) / (2.0 * mu)).powf(e);
    let omega = (-lambda / mu).powf(e);
    let c_star = 0.5 * lambda * omega * omega + mu * omega.powf(p + 1.0) / (p + 1.0);
    Ok((x_star, omega, c_star))
}

/// Lower bound (−λ/‖a‖∞)^{1/(p−1)} on M₊ for λ < 0.
pub fn apriori_curve(lambda: f64, a_sup_norm: f64, p: f64) -> Result<f64> {
    if lambda >= 0.0 {
        return Err(Error::SignViolation(format!("λ = {lambda} must be negative")));
    }
    Ok((-lambda / a_sup_norm).powf(1.0 / (p - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoint {
    pub lambda: f64,
    pub n: u32,
    pub m_plus: f64,
    pub x_plus: f64,
    /// Sign of u'(0).
    pub slope_sign: i8,
    pub error_est: f64,
    /// x₊ hit the 1e−12 floor, the 1e12 cap, or the separatrix resolution limit.
    pub saturated: bool,
}

const FLOOR: f64 = 1e-12;
const CAP: f64 = 1e12;

/// Admissible x₊ range per regime; `singular` marks the end where 𝒯 → ∞.
fn x_range(lambda: f64, mu: f64, p: f64) -> Result<(f64, f64, Option<f64>)> {
    if lambda < 0.0 {
        let (xs, om, _) = critical_points(lambda, mu, p)?;
        if p > 1.0 {
            return Ok((xs, CAP, Some(xs)));
        }
        return Ok((FLOOR, om, Some(om)));
    }
    Ok((FLOOR, CAP, None))
}

/// The orbit with 𝒯_λ(x₊) = 2L/n, if λ < σₙ.
pub fn branch_point(n: u32, lambda: f64, mu: f64, p: f64, l: f64) -> Result<Option<BranchPoint>> {
    if n == 0 || !(l > 0.0) {
        return Err(Error::InvalidSpec(format!("n = {n}, L = {l}")));
    }
    if lambda >= sigma_n(n, l) {
        return Ok(None);
    }
    let target = 2.0 * l / n as f64;
    let (mut lo, mut hi, singular) = x_range(lambda, mu, p)?;
    let per = |x: f64| period_semilinear(lambda, mu, p, x);
    let point = |x: f64, saturated: bool| -> Result<Option<BranchPoint>> {
        let q = per(x)?;
        Ok(Some(BranchPoint { lambda, n, m_plus: x, x_plus: x, slope_sign: 1, error_est: q.error, saturated }))
    };
    if let Some(xs) = singular {
        // walk towards the separatrix until 𝒯 exceeds the target
        let mut eps: f64 = 0.5;
        let mut last: Option<(f64, f64)> = None;
        let mut found = false;
        while eps >= 1e-12 {
            let x = if p > 1.0 { xs * (1.0 + eps) } else { xs * (1.0 - eps) };
            match per(x) {
                Ok(q) if q.value > target => {
                    if p > 1.0 {
                        lo = x;
                    } else {
                        hi = x;
                    }
                    found = true;
                    break;
                }
                Ok(q) => {
                    last = Some((x, q.error));
                    eps *= 0.1;
                }
                Err(_) => break,
            }
        }
        if !found {
            // the orbit hugs the separatrix closer than the quadrature resolves: M₊ lies between xs and x
            let (x, _) = last.ok_or(Error::Quadrature { value: f64::NAN, error: f64::NAN })?;
            return Ok(Some(BranchPoint { lambda, n, m_plus: x, x_plus: x, slope_sign: 1, error_est: (x - xs).abs(), saturated: true }));
        }
    }
    let f = |u: f64| per(u.exp()).map(|q| q.value.ln() - target.ln()).unwrap_or(f64::NAN);
    let (ulo, uhi) = (lo.ln(), hi.ln());
    let (flo, fhi) = (f(ulo), f(uhi));
    if flo.is_nan() || fhi.is_nan() {
        return Err(Error::Quadrature { value: f64::NAN, error: f64::NAN });
    }
    if flo.signum() == fhi.signum() {
        // target lies beyond the floor/cap: report the saturated end
        let x = if flo.abs() < fhi.abs() { lo } else { hi };
        return point(x, true);
    }
    let u = brent(f, ulo, uhi, 1e-14, 1e-14)?;
    point(u.exp(), false)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub points: Vec<BranchPoint>,
    /// Decreasing M₊ for p > 1, increasing for p < 1.
    pub monotone: bool,
}

/// One branch point per admissible λ of an ascending grid.
pub fn branch_sweep(n: u32, lambda_grid: &[f64], mu: f64, p: f64, l: f64) -> Result<Sweep> {
    if lambda_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidSpec("λ grid must be ascending".into()));
    }
    let pts: Vec<Option<BranchPoint>> =
        lambda_grid.par_iter().map(|&lam| branch_point(n, lam, mu, p, l)).collect::<Result<Vec<_>>>()?;
    let points: Vec<BranchPoint> = pts.into_iter().flatten().collect();
    let monotone = points.windows(2).all(|w| if p > 1.0 { w[1].m_plus < w[0].m_plus } else { w[1].m_plus > w[0].m_plus });
    Ok(Sweep { points, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmas() {
        assert!((sigma_n(1, PI) - 1.0).abs() < 1e-15);
        assert!((sigma_n(2, PI) - 4.0).abs() < 1e-14);
        assert!((sigma_n(3, 1.0) - 9.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn critical() {
        let (xs, om, _) = critical_points(-2.0, 1.0, 3.0).unwrap();
        assert!((xs - 2.0).abs() < 1e-14 && (om - 2f64.sqrt()).abs() < 1e-14);
        // F'(ω₊) = 0
        assert!((-2.0 * om + om.powi(3)).abs() < 1e-13);
        let (_, om, _) = critical_points(-3.0, 3.0, 3.0).unwrap();
        assert!((om - 1.0).abs() < 1e-15);
        let (_, om, cs) = critical_points(-1.0, 1.0, 0.5).unwrap();
        let h = -0.5 * om * om + om.powf(1.5) / 1.5;
        assert!((cs - h).abs() < 1e-14 && cs > 0.0);
        assert!(critical_points(0.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn apriori() {
        assert!((apriori_curve(-1.0, 1.0, 3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((apriori_curve(-4.0, 1.0, 3.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(apriori_curve(1.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn branch_existence_and_period() {
        assert!(branch_point(1, 1.0, 1.0, 3.0, PI).unwrap().is_none());
        let b = branch_point(2, 1.0, 1.0, 3.0, PI).unwrap().unwrap();
        let t = period_semilinear(1.0, 1.0, 3.0, b.x_plus).unwrap().value;
        assert!((t - PI).abs() < 1e-9);
        let b = branch_point(1, -2.0, 1.0, 3.0, PI).unwrap().unwrap();
        assert!(b.m_plus > 2.0);
        let b = branch_point(1, -1.0, 1.0, 0.5, PI).unwrap().unwrap();
        assert!(b.m_plus < 1.0);
    }

    #[test]
    fn sweep_monotone_and_n_independent() {
        let grid: Vec<f64> = (0..12).map(|k| -3.0 + 0.3 * k as f64).collect();
        let s = branch_sweep(1, &grid, 1.0, 3.0, PI).unwrap();
        assert!(s.monotone && s.points.len() == grid.iter().filter(|&&l| l < 1.0).count());
        let s = branch_sweep(1, &grid, 1.0, 0.5, PI).unwrap();
        assert!(s.monotone);
        // σ-independence: same M₊ for n and n+1 when L scales with n
        let a = branch_point(1, 0.2, 1.0, 3.0, PI).unwrap().unwrap();
        let b = branch_point(2, 0.2, 1.0, 3.0, 2.0 * PI).unwrap().unwrap();
        assert!((a.m_plus - b.m_plus).abs() < 1e-9);
    }
}
