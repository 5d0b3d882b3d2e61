//! Exact nested chain integrals as exponential-polynomial sums, checked
//! against brute-force simplex quadrature, including a confluent chain and one
//! whose closed form cancels catastrophically.
//!
//! Run with `cargo run --release --example chain_integrals`.

use zeno_qft::expsum::{chain_integral, chain_value, chain_value_bidiagonal};
use zeno_qft::oracle::chain_quadrature;
use zeno_qft::Result;

fn main() -> Result<()> {
    let freqs = [0.7, -0.2, 1.3];
    let sum = chain_integral(&freqs)?;
    println!("closed form for {freqs:?}: {} terms", sum.len());
    for t in sum.terms() {
        println!("  ({:.6}) tau^{} exp(-i {} tau)", t.coeff, t.degree, t.freq);
    }
    let q = chain_quadrature(&freqs, 1.5, 1e-10)?;
    println!("value at 1.5: {} | quadrature {} +- {:.1e}", sum.evaluate(1.5)?, q.value, q.error_bound);

    let confluent = [0.4, -0.4, 0.4];
    println!("\nconfluent {confluent:?}: {}", chain_value(&confluent, 1.0)?);

    let mut bubble = vec![0.0; 25];
    bubble[0] = 1.0;
    println!("\n25-fold bubble chain, stable route: {:.6e}", chain_value_bidiagonal(&bubble, 1.0)?.norm());
    let naive = chain_integral(&bubble)?;
    println!(
        "closed-form terms reach {:.1e} while the value is {:.1e}",
        naive.magnitude_bound(1.0),
        chain_value(&bubble, 1.0)?.norm()
    );
    Ok(())
}
