//! Quarter-lap times and the period of a hump orbit, across the regimes of λ.
use nodal_atlas::model::{ProblemSpec, StepWeight};
use nodal_atlas::quadrature::{level_crossing, period_semilinear, quarter_times};

fn main() -> nodal_atlas::Result<()> {
    for (lambda, p) in [(1.0, 3.0), (0.0, 3.0), (-1.0, 3.0), (1.0, 0.5)] {
        let pr = ProblemSpec::semilinear(p, lambda, StepWeight::constant(1.0, 1.0)?)?;
        println!("λ = {lambda}, p = {p}");
        println!("{:>8} {:>10} {:>10} {:>10} {:>10} {:>10} {:>9}", "c", "x+", "T_I", "T_II", "T_III", "T_IV", "T");
        for c in [0.05, 0.5, 5.0] {
            let q = quarter_times(&pr, 0, c)?;
            let x = level_crossing(&pr, 0, c)?.x_plus;
            println!("{c:>8} {x:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>9.6}", q.t_i, q.t_ii, q.t_iii, q.t_iv, q.period);
            // the single-integral form agrees with the four quarter times
            let t = period_semilinear(lambda, 1.0, p, x)?.value;
            assert!((t - q.period).abs() < 1e-8);
        }
    }
    Ok(())
}
