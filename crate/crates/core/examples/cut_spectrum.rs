//! Cut structure of powers of the transformed free propagator: inside
//! |w - e_k| < 1 the n-th power grows, outside it decays.
//!
//! Run with `cargo run --example cut_spectrum`.

use zeno_qft::spectral::{classify_cut, ft_free_chain, omega_grid};
use zeno_qft::Result;

fn main() -> Result<()> {
    let (eps_k, delta) = (2.0, 1e-3);
    println!("{:>6} {:>11} {:>10} {:>12} {:>12} {:>12}", "omega", "kind", "growth", "ln|F^1|", "ln|F^100|", "ln|F^10000|");
    for omega in omega_grid(0.0, 4.0, 21)? {
        let c = classify_cut(omega, eps_k, 1e-9)?;
        let logs: Vec<f64> = [1, 100, 10_000]
            .iter()
            .map(|&n| ft_free_chain(omega, eps_k, delta, n).map(|p| p.log_magnitude))
            .collect::<Result<_>>()?;
        println!(
            "{omega:>6.2} {:>11} {:>10.4} {:>12.4} {:>12.4} {:>12.4}",
            c.kind.label(),
            c.growth_exponent,
            logs[0],
            logs[1],
            logs[2]
        );
    }
    Ok(())
}
