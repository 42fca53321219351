//! Human-readable summaries. JSON is the default output.

use std::fmt::Write;

use serde::Serialize;

use k3gon::classifier::CliffordDimension;
use k3gon::lattice::DivClass;

use crate::report::{
    DecomposeReport, ElmsCertificate, EnumerationReport, OracleCheckReport, ReportFile,
};

/// Pretty JSON with a trailing newline.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// One compact JSON object per line.
pub fn json_lines<T: Serialize>(values: &[T]) -> String {
    values
        .iter()
        .map(|v| serde_json::to_string(v).expect("reports serialize") + "\n")
        .collect()
}

fn classes(v: &[DivClass]) -> String {
    if v.is_empty() {
        return "none".to_string();
    }
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or("none".to_string(), |x| x.to_string())
}

pub fn classify_text(r: &ReportFile) -> String {
    let c = &r.classification;
    let mut s = String::new();
    writeln!(s, "case: {:?}", c.case_tag).unwrap();
    writeln!(s, "clifford witnesses: {}", classes(&c.clifford_witnesses)).unwrap();
    if let Some(b) = &c.donagi_morrison_b {
        writeln!(s, "B: {b}").unwrap();
    }
    if let Some(w) = &c.elms_witness {
        writeln!(s, "D: {}  Gamma: {}  D^2: {}", w.d, w.gamma, w.d_square).unwrap();
        writeln!(
            s,
            "B search: degree {:?} square {:?} candidates {} matches {}",
            w.b_search.degree_range,
            w.b_search.square_range,
            w.b_search.candidates,
            classes(&w.b_search.matches)
        )
        .unwrap();
    }
    writeln!(s, "genus: {}", c.genus).unwrap();
    writeln!(s, "clifford index: {}", c.clifford_index).unwrap();
    writeln!(
        s,
        "gonality: min {} general {} constant {}",
        c.gonality_min, c.gonality_general, c.gonality_constant
    )
    .unwrap();
    writeln!(s, "exceptional members: {:?}", c.exceptional_members).unwrap();
    let dim = match c.clifford_dimension {
        CliffordDimension::Value(v) => v.to_string(),
        CliffordDimension::Generic => "generic".to_string(),
    };
    writeln!(s, "clifford dimension: {dim}").unwrap();
    writeln!(s, "brill-noether rho: {}", c.brill_noether_rho).unwrap();
    writeln!(
        s,
        "w1d dimension: {}",
        serde_json::to_string(&c.w1d_dimension_note)
            .unwrap()
            .trim_matches('"')
    )
    .unwrap();
    if let Some(k) = &c.elms_checklist {
        writeln!(
            s,
            "conjecture arithmetic: g = 4r-2 {}, c = 2r-3 {}, gon = 2r {}, in scope {}",
            k.genus_matches, k.clifford_matches, k.gonality_matches, k.in_conjecture_scope
        )
        .unwrap();
    }
    let d = &r.decomposition;
    writeln!(s, "k_min: {} (k_max {})", opt(&d.k_min), d.k_max).unwrap();
    for m in &d.minimizers {
        writeln!(s, "  L = {} + {}  k = {}", m.m, m.n, m.k).unwrap();
    }
    writeln!(
        s,
        "normalization: {}",
        d.outcome.as_deref().unwrap_or("none")
    )
    .unwrap();
    writeln!(s, "version: {}", r.tool_version).unwrap();
    s
}

pub fn scan_text(certs: &[ElmsCertificate]) -> String {
    let mut s = String::new();
    for c in certs {
        writeln!(
            s,
            "n={} holds={} g={} c={} r={} gonality={} case={:?}",
            c.n,
            c.holds,
            c.g,
            c.c,
            opt(&c.r),
            c.gonality,
            c.case_tag
        )
        .unwrap();
    }
    s
}

pub fn enumerate_text(r: &EnumerationReport) -> String {
    let mut s = String::new();
    writeln!(s, "classes: {}", classes(&r.classes)).unwrap();
    writeln!(s, "count: {}", r.classes.len()).unwrap();
    writeln!(s, "visited: {}", r.visited).unwrap();
    writeln!(s, "certified radius: {}", r.certified_radius).unwrap();
    s
}

pub fn oracle_text(r: &OracleCheckReport) -> String {
    let mut s = String::new();
    writeln!(s, "{}", r.verdict).unwrap();
    writeln!(
        s,
        "seed {} trials {} data {} queries {}",
        r.seed, r.trials, r.data_checked, r.queries_checked
    )
    .unwrap();
    for m in &r.mismatches {
        writeln!(
            s,
            "mismatch: {}: optimized {} oracle {}",
            m.what, m.optimized, m.oracle
        )
        .unwrap();
    }
    s
}

pub fn decompose_text(r: &DecomposeReport) -> String {
    let mut s = String::new();
    writeln!(s, "outcome: {}", r.outcome).unwrap();
    writeln!(
        s,
        "{}",
        serde_json::to_string(&r.normalization.outcome).expect("outcome serializes")
    )
    .unwrap();
    if let Some(note) = &r.note {
        writeln!(s, "note: {note}").unwrap();
    }
    writeln!(
        s,
        "input: M = {} N = {}  k = {}",
        r.m, r.n, r.normalization.k
    )
    .unwrap();
    writeln!(s, "moved roots: {}", classes(&r.normalization.moved_roots)).unwrap();
    writeln!(
        s,
        "final: M' = {} N' = {}",
        r.normalization.m_final, r.normalization.n_final
    )
    .unwrap();
    if let Some(c) = &r.normalization.checklist {
        writeln!(
            s,
            "checklist: sum {} squares {} n_gg {} h1 {} base {}",
            c.sum_preserved,
            c.squares_ordered,
            c.n_globally_generated,
            c.h1_vanishing,
            c.base_divisor_orthogonal
        )
        .unwrap();
    }
    s
}
