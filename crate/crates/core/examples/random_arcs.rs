//! Moments of random subsets and their largest arcs.

use arclab::randlab::{random_arc_experiment, ArcMode, ExperimentConfig};

fn main() -> arclab::Result<()> {
    let q = 13u32;
    let p = (q as f64).powf(-1.25);
    let report =
        random_arc_experiment(&ExperimentConfig::new(q, p, 300, 42).arc_mode(ArcMode::Exact))?;
    for m in &report.moment_checks {
        println!(
            "{:<10} observed {:>9.3} expected {:>9.3} within: {}",
            m.name, m.observed, m.expected, m.within
        );
    }
    let arc = report.arc.as_ref().expect("exact mode records arcs");
    println!(
        "a(Q): mean {:.3} median {} max {}",
        arc.mean, arc.median, arc.max
    );
    println!("median a(Q)/sqrt(q) = {:?}", report.median_arc_over_sqrt_q);
    println!(
        "two-event frequency {} (guaranteed at least {})",
        report.two_event_frequency, report.two_event_guarantee
    );
    Ok(())
}
