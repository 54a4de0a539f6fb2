//! Certify twist conditions on an annulus and scan τ for the admissible window.
use nodal_atlas::certify::{check_twist, twist_window, Annulus, TwistVariant};
use nodal_atlas::model::{ProblemSpec, StepWeight};

fn main() -> nodal_atlas::Result<()> {
    let pr = ProblemSpec::semilinear(3.0, 1.0, StepWeight::uniform(1, 1.9, 1.55, 130.0)?)?;
    let a = Annulus::new(&pr, 0, 0.8, 20.0)?;
    for tau in [1.5, 1.9, 2.2] {
        let ch = check_twist(&pr, &a, tau, 1, 2, TwistVariant::PositiveQuarterLap)?;
        println!("τ = {tau}: {:?}", ch.verdict);
        for q in &ch.inequalities {
            println!("    {:<28} lhs {:>12.6} rhs {:>12.6} slack {:>+10.3e}", q.label, q.lhs, q.rhs, q.slack);
        }
    }
    match twist_window(&pr, &a, 1, 2, TwistVariant::PositiveQuarterLap)? {
        Some((lo, hi)) => println!("τ window for (α, β) = (1, 2): [{lo:.6}, {hi:.6}]"),
        None => println!("no τ satisfies the condition"),
    }
    // λ = 0: the energy ratio threshold
    let pr = ProblemSpec::semilinear(3.0, 0.0, StepWeight::uniform(1, 1.0, 12.0, 1.0)?)?;
    let a = Annulus::new(&pr, 0, 2.0, 5000.0)?;
    let ch = check_twist(&pr, &a, 1.0, 0, 1, TwistVariant::ZeroQuarterLap)?;
    println!("λ = 0, c ∈ [2, 5000]: {:?}, certificate {:?}", ch.verdict, ch.certificate);
    Ok(())
}
