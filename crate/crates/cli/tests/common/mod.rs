//! Helpers to drive the built binary and compare against goldens.
#![allow(dead_code)] // each test target uses a different subset

use std::path::PathBuf;
use std::process::Command;

pub struct CmdResult {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(args: &[&str]) -> CmdResult {
    let out = Command::new(env!("CARGO_BIN_EXE_chainkit"))
        .args(args)
        .output()
        .expect("binary runs");
    CmdResult {
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
        code: out.status.code().expect("exit code"),
    }
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn golden(name: &str) -> String {
    std::fs::read_to_string(golden_path(name))
        .unwrap_or_else(|e| panic!("golden {name}: {e}"))
}

/// Path to a corpus chain file in the core crate.
pub fn corpus_file(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/corpus")
        .join(name)
        .display()
        .to_string()
}
