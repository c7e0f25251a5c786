//! Input documents: a rectangular grid of ascending coefficient lists plus
//! an optional perturbation structure.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use snf_core::{MatPoly, PerturbStructure, Poly};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSpec>,
}

/// `"full"`, `"support"`, `"degree"` or an explicit row-major mask grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructureSpec {
    Named(String),
    Mask(Vec<Vec<Vec<bool>>>),
}

impl InputDocument {
    pub fn from_matpoly(a: &MatPoly) -> Self {
        let d = a.degree_bound();
        let entries = (0..a.rows())
            .map(|i| {
                (0..a.cols())
                    .map(|j| (0..=d).map(|k| a.coeff(i, j, k)).collect())
                    .collect()
            })
            .collect();
        Self {
            rows: a.rows(),
            cols: a.cols(),
            entries,
            structure: None,
        }
    }

    pub fn degree_bound(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .map(|c| c.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(CliError::Validation("rows and cols must be positive".into()));
        }
        if self.entries.len() != self.rows {
            return Err(CliError::Validation(format!(
                "entries has {} rows, expected {}",
                self.entries.len(),
                self.rows
            )));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                return Err(CliError::Validation(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    self.cols
                )));
            }
            for (j, c) in row.iter().enumerate() {
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::Validation(format!(
                        "entry ({i}, {j}) has a non-finite coefficient"
                    )));
                }
            }
        }
        if let Some(s) = &self.structure {
            check_structure(s, self.rows, self.cols, self.degree_bound())?;
        }
        Ok(())
    }

    pub fn matpoly(&self) -> Result<MatPoly, CliError> {
        self.validate()?;
        let grid = self
            .entries
            .iter()
            .map(|row| row.iter().map(|c| Poly::new(c.clone())).collect())
            .collect();
        Ok(MatPoly::from_rows_with_bound(grid, self.degree_bound())?)
    }

    /// The structure named by `flag`, else the document's own, else full.
    pub fn perturb_structure(&self, a: &MatPoly, flag: Option<&str>) -> Result<PerturbStructure, CliError> {
        let spec = match flag {
            Some(f) => parse_structure_flag(f)?,
            None => self.structure.clone().unwrap_or(StructureSpec::Named("full".into())),
        };
        build_structure(&spec, a)
    }

    /// Square input required by every solver command.
    pub fn require_square(&self) -> Result<(), CliError> {
        if self.rows != self.cols {
            return Err(CliError::Validation(format!(
                "matrix is {}x{}, not square",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

fn check_structure(s: &StructureSpec, rows: usize, cols: usize, d: usize) -> Result<(), CliError> {
    match s {
        StructureSpec::Named(name) => match name.as_str() {
            "full" | "support" | "degree" => Ok(()),
            other => Err(CliError::Validation(format!("unknown structure {other:?}"))),
        },
        StructureSpec::Mask(m) => {
            let ok = m.len() == rows && m.iter().all(|r| r.len() == cols && r.iter().all(|c| c.len() == d + 1));
            if ok {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "mask must be a {rows}x{cols} grid of lists of length {}",
                    d + 1
                )))
            }
        }
    }
}

fn parse_structure_flag(flag: &str) -> Result<StructureSpec, CliError> {
    match flag {
        "full" | "support" | "degree" => Ok(StructureSpec::Named(flag.to_string())),
        path => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Validation(format!("mask file {path}: {e}")))?;
            let mask: Vec<Vec<Vec<bool>>> =
                serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("mask file {path}: {e}")))?;
            Ok(StructureSpec::Mask(mask))
        }
    }
}

fn build_structure(spec: &StructureSpec, a: &MatPoly) -> Result<PerturbStructure, CliError> {
    check_structure(spec, a.rows(), a.cols(), a.degree_bound())?;
    Ok(match spec {
        StructureSpec::Named(name) => match name.as_str() {
            "support" => PerturbStructure::support(a),
            "degree" => PerturbStructure::degree(a),
            _ => PerturbStructure::full(a),
        },
        StructureSpec::Mask(m) => {
            let cells = m.iter().flatten().cloned().collect();
            PerturbStructure::from_mask(a.rows(), a.cols(), a.degree_bound(), cells)?
        }
    })
}

pub fn parse_str(text: &str) -> Result<InputDocument, CliError> {
    let doc: InputDocument = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    doc.validate()?;
    Ok(doc)
}

pub fn parse(path: &Path) -> Result<(InputDocument, Vec<u8>), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let doc = parse_str(text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok((doc, bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let doc = parse_str(r#"{"rows":1,"cols":1,"entries":[[[1.0]]]}"#).unwrap();
        let a = doc.matpoly().unwrap();
        assert_eq!(a.degree_bound(), 0);
        assert_eq!(a.coeff(0, 0, 0), 1.0);
    }

    #[test]
    fn ragged_grid_is_rejected() {
        let e = parse_str(r#"{"rows":2,"cols":2,"entries":[[[1.0],[0.0]],[[1.0]]]}"#).unwrap_err();
        assert!(matches!(e, CliError::Validation(_)));
    }

    #[test]
    fn bad_json_reports_position() {
        let e = parse_str("{\"rows\":1,\n\"cols\":}").unwrap_err();
        match e {
            CliError::Parse(m) => assert!(m.contains("line 2"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_structure_name() {
        let e = parse_str(r#"{"rows":1,"cols":1,"entries":[[[1.0]]],"structure":"banded"}"#).unwrap_err();
        assert!(matches!(e, CliError::Validation(_)));
    }

    #[test]
    fn explicit_mask() {
        let doc =
            parse_str(r#"{"rows":1,"cols":2,"entries":[[[1.0,2.0],[3.0]]],"structure":[[[true,false],[false,true]]]}"#)
                .unwrap();
        let a = doc.matpoly().unwrap();
        let s = doc.perturb_structure(&a, None).unwrap();
        assert_eq!(s.positions(), vec![(0, 0, 0), (0, 1, 1)]);
    }
}
