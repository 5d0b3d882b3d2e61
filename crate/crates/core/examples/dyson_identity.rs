//! Time-ordering identity: the ordered-simplex integral equals 1/n! times the
//! hypercube integral of the time-ordered product.
//!
//! Run with `cargo run --release --example dyson_identity`.

use zeno_qft::resummation::dyson_identity_check;
use zeno_qft::Result;

fn main() -> Result<()> {
    let cases: [(&[f64], f64); 4] = [
        (&[0.0, 0.0], 1.0),
        (&[1.0, -0.5], 1.0),
        (&[0.3, 0.3, 0.3], 2.0),
        (&[2.0, -1.0, 0.5], 1.5),
    ];
    for (freqs, dt) in cases {
        let c = dyson_identity_check(freqs, dt, 1e-9)?;
        println!(
            "freqs {freqs:?} dt {dt}: nested {:.12} hypercube/n! {:.12} gap {:.1e} (bound {:.1e})",
            c.nested, c.symmetrized, c.gap, c.error_bound
        );
    }
    Ok(())
}
