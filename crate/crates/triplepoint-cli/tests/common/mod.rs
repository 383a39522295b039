// Shared between test binaries; not every binary uses every helper.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .display()
        .to_string()
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triplepoint"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

pub fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code, not a signal")
}

/// Scratch directory for files a test writes; unique per test name.
pub fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("triplepoint-cli-{test}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}
