//! Line histograms, collinear tuples and the supersaturation chain on random subsets of AG(2,11).

use arclab::randlab::{sample_random, RandomModel};
use arclab::sets::{count_collinear_tuples, line_histogram, supersaturation_report};
use arclab::{PlaneKind, PlaneModel};

fn main() -> arclab::Result<()> {
    let m = PlaneModel::from_order(11, PlaneKind::Affine)?;
    for p in [0.5, 0.7, 0.9] {
        let set = sample_random(&m, &RandomModel::new(11, p, 5)?)?;
        let hist = line_histogram(&m, &set);
        let report = supersaturation_report(&m, &set)?;
        println!(
            "p={p}: |P|={} max line {} T={} 4-tuples={} T*q/|P|^3={:.4} chain holds: {}",
            set.len(),
            hist.max_line(),
            report.triples,
            count_collinear_tuples(&m, &set, 4)?,
            report.ratio_f64,
            report.all_hold()
        );
    }
    Ok(())
}
