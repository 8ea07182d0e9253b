//! Exact arc counts in AG(2,q) for small q, with and without the frame reduction.

use arclab::bounds::{trivial_bounds, within_trivial};
use arclab::census::{count_arcs_exact, CensusMode, CensusQuery, CensusResult, Reduction};
use arclab::{PlaneKind, PlaneModel};

fn main() -> arclab::Result<()> {
    println!("{}", CensusResult::CSV_HEADER);
    for q in [3u64, 4, 5, 7] {
        let m = PlaneModel::from_order(q, PlaneKind::Affine)?;
        for k in 3..=4 {
            let plain = count_arcs_exact(&CensusQuery::new(&m, k).mode(CensusMode::Exact))?;
            let framed = count_arcs_exact(
                &CensusQuery::new(&m, k)
                    .mode(CensusMode::Exact)
                    .reduction(Reduction::Frame),
            )?;
            assert_eq!(plain.count, framed.count);
            let (lo, hi) = trivial_bounds(q, k as u64);
            assert!(within_trivial(q, k as u64, &plain.count));
            println!("{}  # trivial range [{lo}, {hi}]", plain.csv_row(false));
        }
    }
    Ok(())
}
