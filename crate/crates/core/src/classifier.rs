//! Clifford index, gonality and exceptional-curve classification of the
//! smooth curves in `|L|`.
//!
//! The gonality of the smooth curves in `|L|` is constant except in the
//! Donagi–Morrison case `L = 3B`, `B^2 = 2`, and the curves are exceptional
//! (`gon = Cliff + 3`) exactly in that case and for polarizations
//! `L = 2D + Γ` with no small class `B` (generalized ELMS). Everything else
//! has `gon = Cliff + 2`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::decomposition::admissible_decompositions;
use crate::enumeration::{enumerate, EnumError, EnumQuery, IntRange};
use crate::lattice::{brill_noether_rho, DivClass};
use crate::linear_system::PolarizedDatum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Search(#[from] EnumError),
    #[error("InternalInconsistency: {0}")]
    InternalInconsistency(String),
}

/// Recorded in every report: the Clifford search only ranges over these
/// classes.
pub const SEARCH_RESTRICTIONS: &str = "Clifford search over classes N with N^2 >= 0, h0(N) >= 2, \
h0(L-N) >= 2 and N.(L-N) <= floor((g-1)/2) + 2; h0 by subtraction of effective (-2)-classes \
of least degree against the ample class";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    DonagiMorrison,
    GeneralizedELMS,
    Ordinary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExceptionalMembers {
    None,
    GeneralMembers,
    AllMembers,
}

/// Clifford dimension; only pinned down in the exceptional and
/// Clifford-index-computed-by-a-pencil cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordDimension {
    Value(i64),
    Generic,
}

impl Serialize for CliffordDimension {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CliffordDimension::Value(v) => s.serialize_i64(*v),
            CliffordDimension::Generic => s.serialize_str("generic"),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntOrWord {
    Int(i64),
    Word(String),
}

impl<'de> Deserialize<'de> for CliffordDimension {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match IntOrWord::deserialize(d)? {
            IntOrWord::Int(v) => Ok(CliffordDimension::Value(v)),
            IntOrWord::Word(w) if w == "generic" => Ok(CliffordDimension::Generic),
            IntOrWord::Word(w) => Err(serde::de::Error::custom(format!(
                "unknown clifford dimension {w:?}"
            ))),
        }
    }
}

/// Dimension of `W^1_d` for the general curve, where known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum W1dNote {
    Zero,
    One,
    NotApplicable,
}

impl Serialize for W1dNote {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            W1dNote::Zero => s.serialize_i64(0),
            W1dNote::One => s.serialize_i64(1),
            W1dNote::NotApplicable => s.serialize_str("not-applicable"),
        }
    }
}

impl<'de> Deserialize<'de> for W1dNote {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match IntOrWord::deserialize(d)? {
            IntOrWord::Int(0) => Ok(W1dNote::Zero),
            IntOrWord::Int(1) => Ok(W1dNote::One),
            IntOrWord::Word(w) if w == "not-applicable" => Ok(W1dNote::NotApplicable),
            _ => Err(serde::de::Error::custom(
                "expected 0, 1 or \"not-applicable\"",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordIndex {
    pub c: i64,
    /// All minimizing `N` in canonical form; empty when the generic value
    /// `floor((g-1)/2)` is attained.
    pub witnesses: Vec<DivClass>,
    pub generic_value: i64,
}

/// Record of the search for a class `B` with `0 <= B^2 <= D^2 - 1` and
/// `0 < B.L - B^2 <= D^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BSearchTranscript {
    pub degree_range: [i64; 2],
    pub square_range: [i64; 2],
    pub visited: u64,
    /// Classes in the degree and square ranges.
    pub candidates: usize,
    /// Those also satisfying `0 < B.L - B^2 <= D^2`.
    pub matches: Vec<DivClass>,
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElmsWitness {
    pub d: DivClass,
    pub gamma: DivClass,
    pub d_square: i64,
    pub b_search: BSearchTranscript,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElmsChecklist {
    pub r: i64,
    pub g: i64,
    pub c: i64,
    pub gonality: i64,
    /// `g = 4r - 2`.
    pub genus_matches: bool,
    /// `c = 2r - 3`.
    pub clifford_matches: bool,
    /// `gonality = 2r`.
    pub gonality_matches: bool,
    /// The conjecture concerns `r >= 3`.
    pub in_conjecture_scope: bool,
    pub non_arithmetic_items: String,
}

impl ElmsChecklist {
    pub fn arithmetic_holds(&self) -> bool {
        self.genus_matches && self.clifford_matches && self.gonality_matches
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub genus: i64,
    pub clifford_index: i64,
    pub clifford_witnesses: Vec<DivClass>,
    pub gonality_general: i64,
    pub gonality_min: i64,
    pub gonality_constant: bool,
    pub case_tag: CaseTag,
    pub exceptional_members: ExceptionalMembers,
    pub clifford_dimension: CliffordDimension,
    pub brill_noether_rho: i64,
    pub w1d_dimension_note: W1dNote,
    pub donagi_morrison_b: Option<DivClass>,
    pub elms_witness: Option<ElmsWitness>,
    pub elms_checklist: Option<ElmsChecklist>,
    pub search_restrictions: String,
}

/// `c = min(floor((g-1)/2), min_N N.(L-N) - 2)`.
pub fn clifford_index(datum: &PolarizedDatum) -> Result<CliffordIndex, EnumError> {
    let g = datum.genus();
    let generic_value = (g - 1).div_euclid(2);
    let decs = admissible_decompositions(datum, generic_value + 2)?;
    let best = decs.iter().map(|d| d.k - 2).min();
    Ok(match best {
        Some(b) if b < generic_value => CliffordIndex {
            c: b,
            witnesses: decs
                .into_iter()
                .filter(|d| d.k - 2 == b)
                .map(|d| d.n)
                .collect(),
            generic_value,
        },
        _ => CliffordIndex {
            c: generic_value,
            witnesses: Vec::new(),
            generic_value,
        },
    })
}

/// `B` with `L = 3B`, `B^2 = 2` and `|B|` a base point free double plane.
pub fn detect_donagi_morrison(datum: &PolarizedDatum) -> Result<Option<DivClass>, EnumError> {
    let Some(b) = datum.polarization().div_exact(3) else {
        return Ok(None);
    };
    if datum.square(&b) != 2 || datum.degree(&b) <= 0 {
        return Ok(None);
    }
    if !datum.is_base_point_free(&b)?.holds {
        return Ok(None);
    }
    Ok(Some(b))
}

/// Searches `L = 2D + Γ` with `Γ` an effective root orthogonal to `L`,
/// `D` nef, `D^2 >= 2`, `D.Γ = 1` and no class `B` with
/// `0 <= B^2 <= D^2 - 1`, `0 < B.L - B^2 <= D^2`.
pub fn detect_generalized_elms(datum: &PolarizedDatum) -> Result<Option<ElmsWitness>, EnumError> {
    let l = datum.polarization();
    let orth = enumerate(
        &EnumQuery::new(l.clone(), IntRange::exact(0), IntRange::exact(-2)),
        datum.lattice(),
        datum.budget().candidates,
    )?;
    let mut gammas: Vec<DivClass> = orth
        .classes
        .into_iter()
        .filter(|g| datum.degree(g) > 0)
        .collect();
    gammas.sort_by_key(|g| (datum.degree(g), g.clone()));
    for gamma in gammas {
        let Some(d) = (l - &gamma).div_exact(2) else {
            continue;
        };
        let d2 = datum.square(&d);
        if d2 < 2 || datum.pair(&d, &gamma) != 1 {
            continue;
        }
        if !datum.is_nef(&d)?.holds {
            continue;
        }
        let b_search = b_search(datum, d2)?;
        if b_search.empty {
            return Ok(Some(ElmsWitness {
                d,
                gamma,
                d_square: d2,
                b_search,
            }));
        }
    }
    Ok(None)
}

fn b_search(datum: &PolarizedDatum, d2: i64) -> Result<BSearchTranscript, EnumError> {
    let l = datum.polarization();
    // B.L - B^2 > 0 with B^2 >= 0 forces B.L >= 1; B.L <= B^2 + D^2 <= 2D^2 - 1.
    let degree_range = [1, 2 * d2 - 1];
    let square_range = [0, d2 - 1];
    let q = EnumQuery::new(
        l.clone(),
        IntRange::between(degree_range[0], degree_range[1]),
        IntRange::between(square_range[0], square_range[1]),
    );
    let found = enumerate(&q, datum.lattice(), datum.budget().candidates)?;
    let candidates = found.classes.len();
    let matches: Vec<DivClass> = found
        .classes
        .into_iter()
        .filter(|b| {
            let excess = datum.pair(b, l) - datum.square(b);
            excess > 0 && excess <= d2
        })
        .collect();
    Ok(BSearchTranscript {
        degree_range,
        square_range,
        visited: found.visited,
        candidates,
        empty: matches.is_empty(),
        matches,
    })
}

/// Arithmetic items of the conjecture on curves of Clifford dimension `r`.
pub fn elms_conjecture_check(r: i64, g: i64, c: i64, d: i64) -> ElmsChecklist {
    ElmsChecklist {
        r,
        g,
        c,
        gonality: d,
        genus_matches: g == 4 * r - 2,
        clifford_matches: c == 2 * r - 3,
        gonality_matches: d == 2 * r,
        in_conjecture_scope: r >= 3,
        non_arithmetic_items: "uniqueness of the bundle computing c and the ACM embedding by it \
are statements about the curve and are not checked"
            .to_string(),
    }
}

pub fn classify(datum: &PolarizedDatum) -> Result<ClassificationReport, ClassifyError> {
    let g = datum.genus();
    let cliff = clifford_index(datum)?;
    let c = cliff.c;
    let dm = detect_donagi_morrison(datum)?;
    let elms = if dm.is_none() {
        detect_generalized_elms(datum)?
    } else {
        None
    };

    let (case_tag, gonality_min, gonality_general, exceptional_members, clifford_dimension) =
        if dm.is_some() {
            if c != 2 {
                return Err(ClassifyError::InternalInconsistency(format!(
                    "L = 3B with B^2 = 2 but the Clifford search gives c = {c}, expected 2"
                )));
            }
            (
                CaseTag::DonagiMorrison,
                4,
                5,
                ExceptionalMembers::GeneralMembers,
                CliffordDimension::Value(2),
            )
        } else if let Some(w) = &elms {
            if c != w.d_square - 1 {
                return Err(ClassifyError::InternalInconsistency(format!(
                    "L = 2D + Γ with D^2 = {} but the Clifford search gives c = {c}",
                    w.d_square
                )));
            }
            (
                CaseTag::GeneralizedELMS,
                c + 3,
                c + 3,
                ExceptionalMembers::AllMembers,
                CliffordDimension::Value(w.d_square / 2 + 1),
            )
        } else {
            let r = if c < cliff.generic_value {
                CliffordDimension::Value(1)
            } else {
                CliffordDimension::Generic
            };
            (CaseTag::Ordinary, c + 2, c + 2, ExceptionalMembers::None, r)
        };

    let rho = brill_noether_rho(g, gonality_min);
    let w1d_dimension_note = match case_tag {
        CaseTag::GeneralizedELMS => W1dNote::One,
        CaseTag::Ordinary if rho < 0 => W1dNote::Zero,
        _ => W1dNote::NotApplicable,
    };
    let elms_checklist = match (case_tag, clifford_dimension) {
        (CaseTag::GeneralizedELMS, CliffordDimension::Value(r)) => {
            Some(elms_conjecture_check(r, g, c, gonality_general))
        }
        _ => None,
    };

    Ok(ClassificationReport {
        genus: g,
        clifford_index: c,
        clifford_witnesses: cliff.witnesses,
        gonality_general,
        gonality_min,
        gonality_constant: case_tag != CaseTag::DonagiMorrison,
        case_tag,
        exceptional_members,
        clifford_dimension,
        brill_noether_rho: rho,
        w1d_dimension_note,
        donagi_morrison_b: dm,
        elms_witness: elms,
        elms_checklist,
        search_restrictions: SEARCH_RESTRICTIONS.to_string(),
    })
}
