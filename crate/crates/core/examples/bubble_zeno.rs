//! Static Zeno limit of repeated bubbles: the vacuum amplitude tends to 1 and
//! the connected bubble vanishes as the repetition count grows.
//!
//! Run with `cargo run --example bubble_zeno`.

use zeno_qft::bubble::{connected_bubble_ln, free_chain, linked_cluster_energy, vacuum_zeno_amplitude};
use zeno_qft::resummation::zeno_resum_bubble;
use zeno_qft::{InteractionSpec, Result};

fn main() -> Result<()> {
    println!("{:>3} {:>14} {:>14} {:>14} {:>14}", "n", "|R|-1", "|L^n|", "|P_zeno|^2", "Im E0");
    for n in [1, 2, 4, 8, 12, 16, 25] {
        let spec = InteractionSpec::bubble(1.0, 1.0, 1.0, n)?;
        let vacuum = vacuum_zeno_amplitude(&spec, 64)?;
        let ln = connected_bubble_ln(&spec)?;
        let zeno = zeno_resum_bubble(ln, free_chain(&spec))?;
        let energy = linked_cluster_energy(&spec, 0.0)?;
        println!(
            "{n:>3} {:>14.6e} {:>14.6e} {:>14.12} {:>14.6e}",
            vacuum.resummed.norm() - 1.0,
            ln.norm(),
            zeno.probability,
            energy.im
        );
    }
    Ok(())
}
