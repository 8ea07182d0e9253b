//! Arc counts in PG(2,q) and the number of MDS codes they determine.

use arclab::bounds::mds_count;
use arclab::census::{count_arcs_projective, CensusMode, Reduction};

fn main() -> arclab::Result<()> {
    for (q, n) in [(3u64, 4usize), (4, 5), (4, 6), (5, 6)] {
        let r = count_arcs_projective(q, n, CensusMode::Exact, Reduction::Frame)?;
        let codes = mds_count(q, n as u64, &r.count)?;
        println!(
            "q={q} n={n}: {} arcs, {codes} MDS codes of length {n} and dimension 3",
            r.count
        );
    }
    Ok(())
}
