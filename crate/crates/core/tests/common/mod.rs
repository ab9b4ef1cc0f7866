#![allow(dead_code)]

use std::path::PathBuf;

use bicrossed::io::{read_json, ExampleFile, FactorizationFile};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn example(name: &str) -> ExampleFile {
    read_json(&fixture(name)).expect("fixture parses")
}

pub fn corpus() -> Vec<FactorizationFile> {
    read_json(&fixture("factorizations.json")).expect("corpus parses")
}
