//! Integrate through a switched weight, list crossings, and check conservation and zero counts.
use nodal_atlas::flow::{conservation_drift, count_zeros, integrate, winding, Component, EventKind, Window};
use nodal_atlas::model::{ProblemSpec, StepWeight};

fn main() -> nodal_atlas::Result<()> {
    let pr = ProblemSpec::semilinear(3.0, 1.0, StepWeight::uniform(1, 1.9, 1.55, 130.0)?)?;
    let l = pr.weight.length();
    let tr = integrate(&pr, (0.0, 1.5), 0.0, l)?;
    for e in &tr.events {
        if e.kind != EventKind::YZero {
            println!("{:<10} t = {:>9.6}  (x, y) = ({:>10.6}, {:>10.6})  θ = {:>9.6}", format!("{:?}", e.kind), e.t, e.x, e.y, e.theta);
        }
    }
    for seg in pr.weight.segments() {
        let n = count_zeros(&tr, Component::X, Window::open(seg.start, seg.end))?;
        println!("[{:.3}, {:.3}] {}: {n} x-zeros", seg.start, seg.end, if seg.hump { "hump" } else { "gap" });
    }
    println!("winding {:.6} rad, {} steps, conservation drift {:.2e}", winding(&tr)?, tr.steps, conservation_drift(&pr, &tr));
    Ok(())
}
