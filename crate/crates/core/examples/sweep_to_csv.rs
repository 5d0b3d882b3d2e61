//! Builds a sweep configuration from `key = value` text, runs all three sweep
//! modes and writes CSV and JSON into a directory (default `target/sweeps`).
//!
//! Run with `cargo run --example sweep_to_csv [DIR]`.

use std::path::PathBuf;

use zeno_qft::sweep::{run, Mode, OutputFormat, SweepConfig};
use zeno_qft::Result;

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("target/sweeps"));
    std::fs::create_dir_all(&dir).expect("output directory");

    let mut cfg = SweepConfig::default();
    cfg.apply_text(
        "# dense-measurement sweep\n\
         n_min = 1\n\
         n_max = 30\n\
         potential = 1\n\
         epsilon = 1\n\
         delta_t = 1\n",
    )?;
    for mode in [Mode::BubbleSweep, Mode::OysterSweep, Mode::Spectrum] {
        cfg.mode = mode;
        let table = run(&cfg)?;
        for (format, ext) in [(OutputFormat::Csv, "csv"), (OutputFormat::Json, "json")] {
            let path = dir.join(format!("{mode}.{ext}"));
            std::fs::write(&path, table.render(format)?).expect("write sweep output");
            println!("wrote {} ({} rows)", path.display(), table.rows.len());
        }
    }
    Ok(())
}
