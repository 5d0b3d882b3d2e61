use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use zeno_qft::sweep::{self, SweepConfig};
use zeno_qft::ZenoError;

/// Zeno-limit amplitude sweeps, spectrum scans and the oracle verification suite.
#[derive(Parser, Debug)]
#[command(name = "zeno", version)]
struct Args {
    /// bubble, oyster, spectrum or verify
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    n_min: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    potential: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// Comma-separated energy chain
    #[arg(long, allow_hyphen_values = true)]
    energies: Option<String>,
    #[arg(long)]
    delta_t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega_max: Option<String>,
    #[arg(long)]
    omega_steps: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<String>,
    /// Plain-text `key = value` file applied before the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build_config(args: Args) -> Result<SweepConfig, ZenoError> {
    let mut cfg = match &args.config {
        Some(path) => SweepConfig::from_file(path)?,
        None => SweepConfig::default(),
    };
    let flags = [
        ("mode", args.mode),
        ("n_min", args.n_min),
        ("n_max", args.n_max),
        ("potential", args.potential),
        ("epsilon", args.epsilon),
        ("energies", args.energies),
        ("delta_t", args.delta_t),
        ("omega_min", args.omega_min),
        ("omega_max", args.omega_max),
        ("omega_steps", args.omega_steps),
        ("delta", args.delta),
        ("tolerance", args.tolerance),
        ("format", args.format),
        ("out", args.out),
    ];
    for (key, value) in flags {
        if let Some(value) = value {
            cfg.set(key, &value)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cfg = match build_config(Args::parse()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("zeno: {e}");
            return ExitCode::from(1);
        }
    };
    let result = sweep::run(&cfg);
    let code = sweep::exit_code(&result);
    let table = match result {
        Ok(table) => table,
        Err(e) => {
            eprintln!("zeno: {e}");
            return ExitCode::from(code as u8);
        }
    };
    let mut out: Box<dyn Write> = match &cfg.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("zeno: cannot create {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => Box::new(io::stdout().lock()),
    };
    if let Err(e) = table.write_to(cfg.format, &mut out).and_then(|_| {
        out.flush().map_err(|e| ZenoError::Config {
            field: "out".into(),
            reason: e.to_string(),
        })
    }) {
        eprintln!("zeno: {e}");
        return ExitCode::from(1);
    }
    if table.failures > 0 {
        eprintln!("zeno: {} verification check(s) failed", table.failures);
    }
    ExitCode::from(code as u8)
}
