//! Open-oyster chains: the single interaction, a three-level chain, and the
//! growth profile of |L^n| under two level layouts.
//!
//! Run with `cargo run --example open_oyster_chain`.

use zeno_qft::open_oyster::{
    chain_growth_profile, open_oyster_chain, open_oyster_single, EnergyChain, GapRule,
};
use zeno_qft::Result;

fn main() -> Result<()> {
    println!("single  V=0.7 e_k=1 e_l=2 : {}", open_oyster_single(0.7, 1.0, 2.0, 1.0)?);
    println!("near-confluent gap 1e-6   : {}", open_oyster_single(0.7, 1.0, 1.0 + 1e-6, 1.0)?);

    let chain = EnergyChain::new(vec![0.0, 1.0, 2.5])?;
    println!("chain [0, 1, 2.5], V=0.9  : {}", open_oyster_chain(0.9, &chain, 1.0)?);

    for (label, rule) in [("fixed gap 0.5", GapRule::FixedGap(0.5)), ("span 1, gap 1/n", GapRule::ShrinkingGap)] {
        println!("\n{label}");
        for row in chain_growth_profile(1.0, 1.0, 12, rule)? {
            match row.magnitude {
                Ok(m) => println!("  n={:>2}  |L^n| = {m:.6e}", row.n),
                Err(e) => println!("  n={:>2}  {e}", row.n),
            }
        }
    }
    Ok(())
}
