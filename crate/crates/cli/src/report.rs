//! Serialized outputs. Every listing is in a fixed order and every number
//! is an integer, so equal inputs give byte-identical JSON.

use serde::{Deserialize, Serialize};

use k3gon::classifier::{
    BSearchTranscript, CaseTag, ClassificationReport, ElmsChecklist, ElmsWitness,
};
use k3gon::decomposition::{
    Decomposition, DecompositionConditions, IncidenceDimensions, MinimalDecompositions,
    Normalization,
};
use k3gon::enumeration::EnumQuery;
use k3gon::lattice::DivClass;
use k3gon::oracle::RadiusCertificate;

use crate::input::DatumFile;

/// Output of `classify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool_version: String,
    pub input: DatumFile,
    pub classification: ClassificationReport,
    pub decomposition: DecompositionSummary,
    pub transcripts: Transcripts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub k_max: i64,
    pub k_min: Option<i64>,
    pub minimizers: Vec<Decomposition>,
    /// Tag of the normalization outcome of the first minimizer.
    pub outcome: Option<String>,
    pub normalization: Option<Normalization>,
    /// Conditions on the normalized pair with `d = k`.
    pub conditions: Option<DecompositionConditions>,
    pub incidence: Option<IncidenceDimensions>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcripts {
    /// Candidates `N` scanned by the Clifford search before the `h^0` filter.
    pub clifford_search: SearchTranscript,
    /// Roots `Γ` with `Γ.L = 0` and `Γ.A > 0`.
    pub roots_orthogonal_to_l: Vec<DivClass>,
    /// Bound on `Δ.A` for effective roots negative on `L`.
    pub wall_degree_bound_l: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTranscript {
    pub degree_range: [i64; 2],
    pub square_min: i64,
    pub visited: u64,
    pub candidates: usize,
}

/// One member of the `[[2n, 1], [1, -2]]` family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElmsCertificate {
    pub n: i64,
    pub holds: bool,
    pub case_tag: CaseTag,
    pub g: i64,
    pub c: i64,
    pub r: Option<i64>,
    pub gonality: i64,
    pub witness: Option<ElmsWitness>,
    pub transcript: Option<BSearchTranscript>,
    pub checklist: Option<ElmsChecklist>,
}

/// Output of `enumerate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub tool_version: String,
    pub input: DatumFile,
    pub query: EnumQuery,
    pub visited: u64,
    pub classes: Vec<DivClass>,
    pub certified_radius: i64,
    pub certificate: RadiusCertificate,
}

/// Output of `oracle-check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheckReport {
    pub tool_version: String,
    pub input: DatumFile,
    pub seed: u64,
    pub trials: usize,
    pub data_checked: usize,
    pub queries_checked: usize,
    pub mismatches: Vec<OracleMismatch>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleMismatch {
    pub datum: DatumFile,
    pub what: String,
    pub optimized: String,
    pub oracle: String,
}

/// Output of `decompose`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub tool_version: String,
    pub input: DatumFile,
    pub k_max: i64,
    pub minimal: MinimalDecompositions,
    pub m: DivClass,
    pub n: DivClass,
    pub outcome: String,
    pub normalization: Normalization,
    pub conditions: DecompositionConditions,
    pub incidence: IncidenceDimensions,
    pub note: Option<String>,
}
