//! Admissible quadrant itineraries and the resulting lower bound on nodal solutions.
use nodal_atlas::certify::{check_twist, enumerate_itineraries, lower_bound, Annulus, BoundaryMode, LambdaSign, TwistVariant};
use nodal_atlas::model::{ProblemSpec, Quadrant, StepWeight};

fn main() -> nodal_atlas::Result<()> {
    for sign in [LambdaSign::Negative, LambdaSign::Zero, LambdaSign::Positive] {
        let its = enumerate_itineraries(2, sign, Quadrant::I);
        let shown: Vec<String> = its.iter().map(|i| i.to_string()).collect();
        println!("{sign:?}, m = 2: {} itineraries {}", its.len(), shown.join(" "));
    }
    let pr = ProblemSpec::semilinear(3.0, -1.0, StepWeight::uniform(1, 1.0, 6.0, 2.0)?)?;
    let mut certs = Vec::new();
    for i in 0..=1 {
        let a = Annulus::new(&pr, i, 1.40625, 19110.0)?;
        let ch = check_twist(&pr, &a, 1.0, 0, 2, TwistVariant::Strong)?;
        println!("hump {i}: {:?}", ch.verdict);
        certs.extend(ch.certificate);
    }
    for mode in [BoundaryMode::PerChoice, BoundaryMode::AllFour] {
        let b = lower_bound(1, &certs, &[], LambdaSign::Negative, mode)?;
        println!("{mode:?}: at least {} nodal solutions", b.total);
        for (it, n) in &b.per_itinerary {
            println!("    {it:<12} {n}");
        }
    }
    Ok(())
}
