#![allow(dead_code)]

use std::path::PathBuf;
pub mod oracles;


use pamin::{parse_instance, PiecewiseAffineFn};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> PiecewiseAffineFn {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_instance(&text).expect("fixture parses")
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
