//! JSON algebra configuration files.
//!
//! Schema (version 1):
//! {
//!   "name": "so3",
//!   "dim": 3,
//!   "bilinear": [[1,0,0],[0,1,0],[0,0,1]],
//!   "brackets": [{"a":0,"b":1,"c":2,"value":1.0}, ...],
//!   "split": {"k":[2],"p":[0,1]},          // optional
//!   "automorphism": [[...], ...]            // optional
//! }
//!
//! Parse failures and validation failures carry distinct error codes.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::blade::GeneratorSystem;
use crate::error::{Error, Result};
use crate::lie::catalog::{self, CatalogEntry};
use crate::lie::{OrthogonalAutomorphism, QuadraticLieAlgebra, SubalgebraSplit};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketEntry {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitConfig {
    pub k: Vec<usize>,
    pub p: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub name: String,
    pub dim: usize,
    pub bilinear: Vec<Vec<f64>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub split: Option<SplitConfig>,
    #[serde(default)]
    pub automorphism: Option<Vec<Vec<f64>>>,
}

fn rows_to_matrix(rows: &[Vec<f64>], dim: usize, what: &str) -> Result<DMatrix<f64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Validation(format!(
            "{what} must be a {dim}x{dim} matrix"
        )));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

/// Parse and validate a configuration document.
pub fn parse_algebra_config(text: &str) -> Result<CatalogEntry> {
    let config: AlgebraConfig =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    build_entry(&config)
}

pub fn build_entry(config: &AlgebraConfig) -> Result<CatalogEntry> {
    let bilinear = rows_to_matrix(&config.bilinear, config.dim, "bilinear")?;
    let system = GeneratorSystem::from_bilinear(bilinear)
        .map_err(|e| Error::Validation(e.to_string()))?;
    let brackets: Vec<(usize, usize, usize, f64)> = config
        .brackets
        .iter()
        .map(|e| (e.a, e.b, e.c, e.value))
        .collect();
    let algebra = QuadraticLieAlgebra::new(&config.name, system, &brackets)?;
    let split = match &config.split {
        Some(s) => {
            let split = SubalgebraSplit::new(s.k.clone(), s.p.clone());
            split.validate(&algebra)?;
            Some(split)
        }
        None => None,
    };
    let automorphism = match &config.automorphism {
        Some(rows) => {
            let c = OrthogonalAutomorphism::new(rows_to_matrix(rows, config.dim, "automorphism")?);
            c.validate(&algebra, split.as_ref())?;
            Some(c)
        }
        None => None,
    };
    Ok(CatalogEntry {
        algebra,
        split,
        automorphism,
    })
}

/// Resolve an algebra argument: a catalog name, or a path to a JSON config.
pub fn load_algebra(spec: &str) -> Result<CatalogEntry> {
    if let Ok(entry) = catalog::by_name(spec) {
        return Ok(entry);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::Parse(format!("cannot read '{spec}': {e}")))?;
    parse_algebra_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SO3_JSON: &str = r#"{
        "name": "so3-from-file",
        "dim": 3,
        "bilinear": [[1,0,0],[0,1,0],[0,0,1]],
        "brackets": [
            {"a":0,"b":1,"c":2,"value":1.0},
            {"a":1,"b":2,"c":0,"value":1.0},
            {"a":2,"b":0,"c":1,"value":1.0}
        ],
        "split": {"k":[2],"p":[0,1]}
    }"#;

    #[test]
    fn valid_config_parses() {
        let entry = parse_algebra_config(SO3_JSON).unwrap();
        assert_eq!(entry.algebra.dim(), 3);
        assert!(entry.split.is_some());
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        let err = parse_algebra_config("{not json").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn broken_jacobi_is_a_validation_error_naming_indices() {
        let broken = r#"{
            "name": "broken",
            "dim": 3,
            "bilinear": [[1,0,0],[0,1,0],[0,0,1]],
            "brackets": [
                {"a":0,"b":1,"c":2,"value":1.0},
                {"a":1,"b":2,"c":0,"value":1.0},
                {"a":2,"b":0,"c":1,"value":0.5}
            ]
        }"#;
        let err = parse_algebra_config(broken).unwrap_err();
        match err {
            Error::Validation(msg) => {
                assert!(msg.contains("jacobi") || msg.contains("invariance"), "{msg}");
                assert!(msg.contains("worst at"), "diagnostic should name indices: {msg}");
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn non_orthogonal_split_rejected() {
        let bad_split = r#"{
            "name": "semidirect-bad-split",
            "dim": 4,
            "bilinear": [[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]],
            "brackets": [
                {"a":0,"b":1,"c":1,"value":1.0},
                {"a":0,"b":3,"c":3,"value":-1.0},
                {"a":1,"b":3,"c":2,"value":1.0}
            ],
            "split": {"k":[0,1],"p":[2,3]}
        }"#;
        let err = parse_algebra_config(bad_split).unwrap_err();
        match err {
            Error::Validation(msg) => assert!(msg.contains("block-diagonal"), "{msg}"),
            other => panic!("expected split validation error, got {other}"),
        }
    }
}
