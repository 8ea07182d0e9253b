//! Arithmetic in GF(9) and GF(16).

use arclab::FieldSpec;

fn main() -> arclab::Result<()> {
    for q in [9u64, 16] {
        let f = FieldSpec::from_order(q)?;
        println!(
            "GF({q}) = GF({}^{}), modulus coefficients {:?}",
            f.p(),
            f.r(),
            f.modulus()
        );
        let g = f
            .elements()
            .find(|&a| !a.is_zero() && (1..q - 1).all(|e| f.pow(a, e) != f.from_int(1)))
            .expect("multiplicative group is cyclic");
        println!("  smallest generator: {g}");
        let a = f.element(5)?;
        let b = f.element(7)?;
        println!(
            "  5 + 7 = {}  5 * 7 = {}  5 / 7 = {}",
            f.add(a, b),
            f.mul(a, b),
            f.div(a, b)?
        );
    }
    Ok(())
}
