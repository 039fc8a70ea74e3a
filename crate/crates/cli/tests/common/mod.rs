#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub const GOLDEN: &[(&str, &[&str], i32)] = &[
    ("h1_bounded", &["bounded", "-f", "h1.json"], 1),
    ("h1_minvalue", &["minvalue", "-f", "h1.json"], 1),
    ("h1_argmin", &["argmin", "-f", "h1.json"], 1),
    ("h2_bounded", &["bounded", "-f", "h2.json"], 0),
    ("h2_minvalue", &["minvalue", "-f", "h2.json"], 0),
    ("h2_argmin", &["argmin", "-f", "h2.json"], 0),
    ("h2_eval", &["eval", "-f", "h2.json", "-x", "-3"], 0),
    ("h2_point_lp", &["point", "-f", "h2.json", "--method", "lp"], 0),
    ("h2_point_penalty", &["point", "-f", "h2.json", "--method", "penalty"], 0),
    ("h2_convert", &["convert", "-f", "h2.json", "--to", "maxmin"], 0),
    ("h2_oracle", &["oracle", "-f", "h2.json", "--box", "-10,10", "--steps", "2001"], 0),
    ("h3_minvalue", &["minvalue", "-f", "h3.json"], 0),
    ("h3_argmin", &["argmin", "-f", "h3.json", "--pretty"], 0),
    ("h3_eval", &["eval", "-f", "h3.json", "-x", "1,-2"], 0),
    ("h4_minvalue", &["minvalue", "-f", "h4.json"], 0),
    ("h4_argmin", &["argmin", "-f", "h4.json"], 0),
    ("h4_oracle", &["oracle", "-f", "h4.json", "--box", "-10,10", "--steps", "2001"], 0),
    ("h5_bounded", &["bounded", "-f", "h5.json"], 0),
    ("h5_minvalue", &["minvalue", "-f", "h5.json"], 0),
    ("h5_argmin", &["argmin", "-f", "h5.json"], 0),
    ("h5_point_lp", &["point", "-f", "h5.json"], 0),
    ("h5_n3_argmin", &["argmin", "-f", "h5_n3.json"], 0),
    ("h5_n3_oracle", &["oracle", "-f", "h5_n3.json", "--box", "-2,2", "--steps", "101"], 0),
];

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture_path(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.out"))
}

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

/// Runs the binary; arguments ending in `.json` are resolved against the
/// fixtures directory.
pub fn pamin(args: &[&str], threads: Option<usize>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pamin"));
    for a in args {
        if a.ends_with(".json") && !a.contains('/') {
            cmd.arg(fixture_path(a));
        } else {
            cmd.arg(a);
        }
    }
    cmd.env_remove("THREADS");
    if let Some(t) = threads {
        cmd.env("THREADS", t.to_string());
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}
