//! Gap-length windows linking consecutive humps, for each sign of λ.
use nodal_atlas::certify::{check_compat, check_linear_window, Annulus, WindowParams, WindowVariant};
use nodal_atlas::model::{ProblemSpec, StepWeight};

fn show(pr: &ProblemSpec, c: (f64, f64), v: WindowVariant) -> nodal_atlas::Result<()> {
    let a = Annulus::new(pr, 0, c.0, c.1)?;
    let b = Annulus::new(pr, 1, c.0, c.1)?;
    let w = check_linear_window(pr, 0, v, &WindowParams::new(&a, &b))?;
    println!("λ = {:>4}, ς = {:>5}, {v:?}: {:?}", pr.lambda, pr.weight.varsigma(0), w.verdict);
    for q in &w.inequalities {
        println!("    {:<24} {:>12.6} vs {:>12.6}", q.label, q.lhs, q.rhs);
    }
    Ok(())
}

fn main() -> nodal_atlas::Result<()> {
    for sg in [1.5, 1.55] {
        let pr = ProblemSpec::semilinear(3.0, 1.0, StepWeight::uniform(1, 1.9, sg, 130.0)?)?;
        let cp = check_compat(&pr, 0, (20.0, 20.0), 0.8)?;
        println!("compatibility: {} (x_com = {:.6})", cp.compatible, cp.x_com);
        show(&pr, (0.8, 20.0), WindowVariant::PositiveCompat)?;
    }
    let pr = ProblemSpec::semilinear(3.0, 0.0, StepWeight::uniform(1, 1.0, 12.0, 1.0)?)?;
    show(&pr, (2.0, 5000.0), WindowVariant::ZeroLambdaBound)?;
    show(&pr, (2.0, 5000.0), WindowVariant::DirectTransit)?;
    let pr = ProblemSpec::semilinear(3.0, -1.0, StepWeight::uniform(1, 1.0, 6.0, 2.0)?)?;
    show(&pr, (1.40625, 19110.0), WindowVariant::NegativeThreshold)?;
    Ok(())
}
