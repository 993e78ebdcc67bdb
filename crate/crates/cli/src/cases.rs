//! The shipped case records, kept as data next to the binary.

use std::path::Path;

use adesieve_core::cuspintegral::CaseRecord;

const SHIPPED: &str = include_str!("../data/cases.json");

pub fn shipped() -> Vec<CaseRecord> {
    serde_json::from_str(SHIPPED).expect("shipped case file parses")
}

pub fn load(path: &Path) -> Result<Vec<CaseRecord>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}
