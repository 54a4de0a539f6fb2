//! Positive solutions for a weight vanishing on a middle interval: one for a short gap, three for a long one.
use nodal_atlas::model::{BoundaryArc, ProblemSpec, StepWeight};
use nodal_atlas::shoot::{find_solutions, ArcSegment, ShootOptions};
use std::f64::consts::PI;

fn main() -> nodal_atlas::Result<()> {
    for alpha in [1.5, 2.0] {
        let w = StepWeight::new(vec![0.0, 1.0, alpha, alpha + 1.0], vec![1.0, 1.0])?;
        let pr = ProblemSpec::semilinear(3.0, 0.0, w)?.with_arcs(BoundaryArc::positive_y(), BoundaryArc::negative_y());
        let seg = ArcSegment::new(BoundaryArc::positive_y(), 1e-3, 15.0)?;
        let opts = ShootOptions { samples: 1024, max_winding: Some(1.5 * PI), ..Default::default() };
        let rep = find_solutions(&pr, &seg, &[BoundaryArc::negative_y()], &opts)?;
        let pos: Vec<f64> = rep.solutions.iter().filter(|s| s.is_positive()).map(|s| s.y0).collect();
        println!("a = 1 on [0,1] ∪ [{alpha}, {}]: {} positive solutions, u'(0) = {pos:.6?}", alpha + 1.0, pos.len());
    }
    Ok(())
}
