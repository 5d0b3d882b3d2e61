//! Runs the verification suite and prints each closed form against its oracle.
//!
//! Run with `cargo run --release --example verify_suite`.

use zeno_qft::sweep::{run_verify, Mode, SweepConfig};
use zeno_qft::Result;

fn main() -> Result<()> {
    let cfg = SweepConfig {
        mode: Mode::Verify,
        ..SweepConfig::default()
    };
    let table = run_verify(&cfg)?;
    print!("{}", table.to_csv()?);
    eprintln!("{} failing check(s)", table.failures);
    Ok(())
}
