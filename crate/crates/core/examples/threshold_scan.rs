//! How often a(Q) exceeds the predicted thresholds as p = q^-e varies.

use arclab::randlab::{threshold_scan, ArcMode, ScanConfig, ScanRow};

fn main() -> arclab::Result<()> {
    let rows = threshold_scan(&ScanConfig {
        qs: vec![9, 11, 13],
        p_exponents: vec![1.1, 1.25, 1.5],
        trials: 100,
        seed: 7,
        delta: 0.05,
        arc_mode: ArcMode::Exact,
    })?;
    println!("{}", ScanRow::CSV_HEADER);
    for r in rows {
        println!("{}", r.csv_row());
    }
    Ok(())
}
