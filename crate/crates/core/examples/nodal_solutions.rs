//! Shoot across an annulus, then classify each solution's nodal signature.
use nodal_atlas::certify::{check_twist, Annulus, TwistVariant};
use nodal_atlas::model::{BoundaryArc, ProblemSpec, StepWeight};
use nodal_atlas::shoot::{classify_nodal, find_solutions, ArcSegment, ShootOptions};

fn main() -> nodal_atlas::Result<()> {
    let pr = ProblemSpec::semilinear(3.0, 1.0, StepWeight::uniform(1, 1.9, 1.55, 130.0)?)?;
    let annuli = vec![Annulus::new(&pr, 0, 0.8, 20.0)?, Annulus::new(&pr, 1, 0.8, 20.0)?];
    let mut certs = Vec::new();
    for a in &annuli {
        certs.extend(check_twist(&pr, a, 1.9, 1, 2, TwistVariant::PositiveQuarterLap)?.certificate);
    }
    let seg = ArcSegment::across_annulus(&pr, BoundaryArc::positive_y(), 0.8, 20.0)?;
    let opts = ShootOptions { samples: 1024, annuli: Some(annuli), ..Default::default() };
    let rep = find_solutions(&pr, &seg, &[BoundaryArc::positive_y()], &opts)?;
    println!("{} solutions from {} shots (pass counts {:?})", rep.solutions.len(), rep.shots, rep.pass_counts);
    for s in &rep.solutions {
        let sig = classify_nodal(s, &pr, Some(&certs))?;
        let itin = sig.itinerary.map(|i| i.to_string()).unwrap_or_else(|| "-".into());
        println!(
            "  #{:<2} y0 = {:>12.8}  x-zeros {:?}  itinerary {itin:<8} {:?}  residual {:.1e}",
            s.id,
            s.y0,
            s.zeros_x(),
            sig.verdict,
            s.residual
        );
    }
    Ok(())
}
