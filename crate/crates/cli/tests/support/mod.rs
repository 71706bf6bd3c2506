#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn demo_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/demo")
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/fixtures")
}

pub fn senti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_senti"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs the binary and turns a non-zero exit into an error carrying stderr.
pub fn run_senti(args: &[&str]) -> Result<(), String> {
    let out = senti(args);
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "senti {} failed: {}",
            args[0],
            String::from_utf8_lossy(&out.stderr).trim()
        ))
    }
}
