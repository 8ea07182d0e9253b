//! A random point set of AG(2,49) with no four collinear points and no large arc, certified.

use arclab::randlab::{
    construct_no_l_tuples, verify_certificate, ConstructConfig, ConstructionCertificate,
};

fn main() -> arclab::Result<()> {
    let cert = construct_no_l_tuples(&ConstructConfig::new(49, 4, 7))?;
    println!(
        "expected size p*q^2 = {:.3} (below scale: {})",
        cert.expected_size, cert.below_scale
    );
    println!(
        "q=49 l=4: {} attempts, |P|={} after removing {}, T(P)={} <= {}, a(P)={} (threshold {:.3})",
        cert.attempts,
        cert.size,
        cert.removed,
        cert.triples,
        cert.triples_bound,
        cert.arc_size,
        cert.arc_threshold
    );
    let json = cert.to_json();
    let reread = ConstructionCertificate::from_json(&json)?;
    let v = verify_certificate(&reread)?;
    println!("independent re-verification passed: {}", v.passed());
    Ok(())
}
