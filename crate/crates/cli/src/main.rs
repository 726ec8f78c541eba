//! `alnls <config-path> [--override key=value ...]`
//!
//! Runs the experiment described by a plain-text config, writing
//! `report.json` and CSV artifacts to the output directory (overridable via
//! the `ALNLS_OUTPUT_DIR` environment variable). Exit status: 0 for a
//! completed run (a detected blow-up is a successful outcome), 2 for a
//! configuration error, 3 for a runtime or I/O failure.

use alnls_cli::config::{apply_key, parse_document, validate, ConfigError};
use alnls_cli::harness::run_experiment;
use alnls_cli::output::{summary_line, write_report};
use alnls_cli::DispatchError;
use std::path::PathBuf;
use std::process::ExitCode;

fn usage() -> String {
    "usage: alnls <config-path> [--override key=value ...]".into()
}

fn run() -> Result<(), DispatchError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut config_path: Option<String> = None;
    let mut overrides: Vec<(String, String)> = Vec::new();
    let mut i = 0;
    while i < args.len() {
        match args[i].as_str() {
            "--override" => {
                let Some(pair) = args.get(i + 1) else {
                    return Err(ConfigError {
                        key: "--override".into(),
                        message: "expects a key=value argument".into(),
                    }
                    .into());
                };
                let Some((k, v)) = pair.split_once('=') else {
                    return Err(ConfigError {
                        key: "--override".into(),
                        message: format!("`{pair}` is not key=value"),
                    }
                    .into());
                };
                overrides.push((k.trim().into(), v.trim().into()));
                i += 2;
            }
            "--help" | "-h" => {
                println!("{}", usage());
                return Ok(());
            }
            other => {
                if config_path.is_some() {
                    return Err(ConfigError {
                        key: "argv".into(),
                        message: format!("unexpected argument `{other}`; {}", usage()),
                    }
                    .into());
                }
                config_path = Some(other.into());
                i += 1;
            }
        }
    }
    let Some(config_path) = config_path else {
        return Err(ConfigError {
            key: "argv".into(),
            message: usage(),
        }
        .into());
    };

    let text = std::fs::read_to_string(&config_path).map_err(|e| {
        DispatchError::Config(ConfigError {
            key: "config-path".into(),
            message: format!("cannot read `{config_path}`: {e}"),
        })
    })?;
    let mut cfg = parse_document(&text)?;
    for (k, v) in &overrides {
        apply_key(&mut cfg, k, v)?;
    }
    validate(&cfg)?;
    if let Ok(dir) = std::env::var("ALNLS_OUTPUT_DIR") {
        if !dir.is_empty() {
            cfg.output_dir = dir;
        }
    }

    let report = run_experiment(&cfg)?;
    let dir = PathBuf::from(&cfg.output_dir);
    write_report(&report, &dir)?;
    println!("{}", summary_line(&report, &dir));
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("alnls: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
