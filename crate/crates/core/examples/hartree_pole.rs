//! Poles in the frequency plane: Hartree and conventional open-oyster poles,
//! a numeric peak search on the resummed propagator, and the Zeno-limit
//! open-oyster pole at zero.
//!
//! Run with `cargo run --example hartree_pole`.

use zeno_qft::spectral::{
    conventional_open_oyster_pole, ft_open_oyster_zeno, hartree_peak_search, hartree_pole, lifetime,
    open_oyster_zeno_pole,
};
use zeno_qft::Result;

fn main() -> Result<()> {
    let (eps_k, v, delta) = (2.0, 0.5, 0.01);
    let pole = hartree_pole(eps_k, v, delta)?;
    let peak = hartree_peak_search(eps_k, v, delta)?;
    println!("Hartree pole                 {pole}");
    println!("peak of |G0/(1 - V G0)|      {peak:.12}  (offset {:.2e})", (peak - pole.re).abs());
    println!("conventional open-oyster     {}", conventional_open_oyster_pole(eps_k, v, delta)?);
    println!("quasi-particle lifetime      {}", lifetime(pole)?);
    let zeno = open_oyster_zeno_pole(delta)?;
    println!("Zeno open-oyster pole        {zeno}");
    println!("|F(0)| = {} against 1/delta = {}", ft_open_oyster_zeno(0.0, delta)?.norm(), 1.0 / delta);
    Ok(())
}
