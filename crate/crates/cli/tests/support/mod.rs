//! Shared helpers for driving the `telerot` binary.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

/// One pinned invocation per subcommand; paths are relative to `tests/golden`.
pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "enumerate",
        args: &["enumerate", "--config", "config-n1.json"],
    },
    GoldenCase {
        name: "run",
        args: &["run", "--config", "config-n3.json", "--seed", "5"],
    },
    GoldenCase {
        name: "fidelity-sweep",
        args: &["fidelity-sweep", "--samples", "20000", "--seed", "3"],
    },
    GoldenCase {
        name: "secret-share",
        args: &["secret-share", "--config", "config-n3.json", "--bob", "1", "--withhold", "2", "--trials", "2000"],
    },
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn golden_path(name: &str) -> PathBuf {
    golden_dir().join(format!("{name}.json"))
}

pub fn telerot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_telerot"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("telerot binary runs")
}

/// Standard output of a successful run.
pub fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = telerot(args);
    if !out.status.success() {
        return Err(format!(
            "telerot {} exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}
