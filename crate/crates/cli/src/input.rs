//! TOML datum files.
//!
//! ```toml
//! gram = [[2, 1], [1, -2]]
//! basis = ["D", "Gamma"]      # optional
//! ample = [1, 0]
//! L = [2, 1]
//!
//! [options]                   # optional, defaults shown
//! max_degree_budget = 100000
//! candidate_budget = 10000000
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use k3gon::enumeration::{Budget, DEFAULT_CANDIDATE_BUDGET, DEFAULT_MAX_DEGREE};
use k3gon::lattice::{DivClass, GramLattice};
use k3gon::linear_system::PolarizedDatum;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub gram: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    pub ample: Vec<i64>,
    #[serde(rename = "L")]
    pub l: Vec<i64>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_max_degree")]
    pub max_degree_budget: i64,
    #[serde(default = "default_candidates")]
    pub candidate_budget: u64,
}

fn default_max_degree() -> i64 {
    DEFAULT_MAX_DEGREE
}

fn default_candidates() -> u64 {
    DEFAULT_CANDIDATE_BUDGET
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_degree_budget: DEFAULT_MAX_DEGREE,
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
        }
    }
}

impl Options {
    pub fn budget(&self) -> Budget {
        Budget {
            max_degree: self.max_degree_budget,
            candidates: self.candidate_budget,
        }
    }
}

impl DatumFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::InvalidDatum(format!("ParseError: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::InvalidDatum(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Datum file for a validated datum, with its basis names.
    pub fn from_datum(datum: &PolarizedDatum) -> Self {
        DatumFile {
            gram: datum.lattice().gram().to_vec(),
            basis: Some(datum.lattice().basis_names().to_vec()),
            ample: datum.ample().coords().to_vec(),
            l: datum.polarization().coords().to_vec(),
            options: Options {
                max_degree_budget: datum.budget().max_degree,
                candidate_budget: datum.budget().candidates,
            },
        }
    }

    pub fn lattice(&self) -> Result<GramLattice, CliError> {
        let lat = match &self.basis {
            Some(names) => GramLattice::with_names(self.gram.clone(), names.clone()),
            None => GramLattice::new(self.gram.clone()),
        };
        lat.map_err(|e| CliError::InvalidDatum(e.to_string()))
    }

    pub fn datum(&self) -> Result<PolarizedDatum, CliError> {
        Ok(PolarizedDatum::validate(
            self.lattice()?,
            DivClass::new(self.ample.clone()),
            DivClass::new(self.l.clone()),
            self.options.budget(),
        )?)
    }
}

/// Parses `"1,0"` or `"(1,0)"`.
pub fn parse_class(text: &str) -> Result<DivClass, CliError> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map(DivClass::new)
        .map_err(|e| CliError::Usage(format!("cannot parse class {text:?}: {e}")))
}
