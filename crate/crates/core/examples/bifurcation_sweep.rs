//! The M₊(λ) branch of the constant-weight problem and the σₙ existence threshold.
use nodal_atlas::autonomous::{branch_sweep, critical_points, sigma_n};
use std::f64::consts::PI;

fn main() -> nodal_atlas::Result<()> {
    let grid: Vec<f64> = (0..=12).map(|k| -5.0 + 0.5 * k as f64).collect();
    for p in [3.0, 0.5] {
        for n in 1..=2 {
            let sw = branch_sweep(n, &grid, 1.0, p, PI)?;
            println!("p = {p}, n = {n} (σ = {}): {} points, monotone {}", sigma_n(n, PI), sw.points.len(), sw.monotone);
            for b in &sw.points {
                let reference = if b.lambda < 0.0 {
                    let (xs, om, _) = critical_points(b.lambda, 1.0, p)?;
                    if p > 1.0 { format!("x* = {xs:.5}") } else { format!("ω+ = {om:.5}") }
                } else {
                    String::new()
                };
                println!("    λ = {:>5.2}  M+ = {:>12.6}{}  {reference}", b.lambda, b.m_plus, if b.saturated { " (saturated)" } else { "" });
            }
        }
    }
    Ok(())
}
