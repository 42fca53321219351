//! The subcommands, as functions from parsed input to reports.

use k3gon::classifier::{classify, clifford_index, CaseTag, CliffordDimension};
use k3gon::decomposition::{
    decomposition_conditions, default_k_max, incidence_dimension_report, minimal_decompositions,
    normalize, NormalizationOutcome,
};
use k3gon::enumeration::{enumerate, EnumQuery, IntRange};
use k3gon::lattice::DivClass;
use k3gon::linear_system::PolarizedDatum;
use k3gon::oracle::{
    certified_box_classes, certified_radius, clifford_oracle, seeded_data, seeded_queries,
    RandomDatumSpec,
};

use crate::input::DatumFile;
use crate::report::{
    DecomposeReport, DecompositionSummary, ElmsCertificate, EnumerationReport, OracleCheckReport,
    OracleMismatch, ReportFile, SearchTranscript, Transcripts,
};
use crate::{CliError, TOOL_VERSION};

pub fn cmd_classify(file: &DatumFile) -> Result<ReportFile, CliError> {
    let datum = file.datum()?;
    let classification = classify(&datum)?;
    let decomposition = decomposition_summary(&datum)?;
    let transcripts = transcripts(&datum)?;
    Ok(ReportFile {
        tool_version: TOOL_VERSION.to_string(),
        input: file.clone(),
        classification,
        decomposition,
        transcripts,
    })
}

fn decomposition_summary(datum: &PolarizedDatum) -> Result<DecompositionSummary, CliError> {
    let k_max = default_k_max(datum.genus());
    let min = minimal_decompositions(datum, k_max)?;
    let mut summary = DecompositionSummary {
        k_max,
        k_min: min.k_min,
        minimizers: min.decompositions.clone(),
        outcome: None,
        normalization: None,
        conditions: None,
        incidence: None,
    };
    if let Some(first) = min.decompositions.first() {
        let norm = normalize(datum, &first.m, &first.n)?;
        summary.conditions = Some(decomposition_conditions(
            datum,
            &norm.m_final,
            &norm.n_final,
            norm.k,
        )?);
        summary.incidence = Some(incidence_dimension_report(datum, &norm.n_final, norm.k));
        summary.outcome = Some(norm.outcome.tag().to_string());
        summary.normalization = Some(norm);
    }
    Ok(summary)
}

fn transcripts(datum: &PolarizedDatum) -> Result<Transcripts, CliError> {
    let l = datum.polarization();
    let l2 = datum.square(l);
    let q = EnumQuery::new(
        l.clone(),
        IntRange::between(0, l2 / 2),
        IntRange::at_least(0),
    );
    let scan = enumerate(&q, datum.lattice(), datum.budget().candidates)?;
    let orth = enumerate(
        &EnumQuery::new(l.clone(), IntRange::exact(0), IntRange::exact(-2)),
        datum.lattice(),
        datum.budget().candidates,
    )?;
    Ok(Transcripts {
        clifford_search: SearchTranscript {
            degree_range: [0, l2 / 2],
            square_min: 0,
            visited: scan.visited,
            candidates: scan.classes.len(),
        },
        roots_orthogonal_to_l: orth
            .classes
            .into_iter()
            .filter(|g| datum.degree(g) > 0)
            .collect(),
        wall_degree_bound_l: datum.wall_degree_bound(l),
    })
}

/// The datum `[[2n, 1], [1, -2]]`, `A = (1, 0)`, `L = (2, 1)`.
pub fn elms_file(n: i64) -> DatumFile {
    DatumFile {
        gram: vec![vec![2 * n, 1], vec![1, -2]],
        basis: Some(vec!["D".to_string(), "Gamma".to_string()]),
        ample: vec![1, 0],
        l: vec![2, 1],
        options: Default::default(),
    }
}

pub fn elms_certificate(n: i64) -> Result<ElmsCertificate, CliError> {
    let datum = elms_file(n).datum()?;
    let rep = classify(&datum)?;
    let r = match rep.clifford_dimension {
        CliffordDimension::Value(r) => Some(r),
        CliffordDimension::Generic => None,
    };
    let holds = rep.case_tag == CaseTag::GeneralizedELMS
        && rep.genus == 4 * n + 2
        && rep.clifford_index == 2 * n - 1
        && r == Some(n + 1)
        && rep.gonality_general == rep.clifford_index + 3
        && rep.gonality_min == rep.gonality_general;
    Ok(ElmsCertificate {
        n,
        holds,
        case_tag: rep.case_tag,
        g: rep.genus,
        c: rep.clifford_index,
        r,
        gonality: rep.gonality_general,
        transcript: rep.elms_witness.as_ref().map(|w| w.b_search.clone()),
        witness: rep.elms_witness,
        checklist: rep.elms_checklist,
    })
}

/// Certificates for `n_min..=n_max`, computed in parallel, in ascending `n`.
pub fn cmd_scan_elms(n_min: i64, n_max: i64) -> Result<Vec<ElmsCertificate>, CliError> {
    if n_min < 1 || n_min > n_max {
        return Err(CliError::Usage(format!(
            "scan-elms needs 1 <= min <= max, got min = {n_min}, max = {n_max}"
        )));
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let ns: Vec<i64> = (n_min..=n_max).collect();
    let chunk = ns.len().div_ceil(workers);
    let results: Vec<Result<ElmsCertificate, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = ns
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&n| elms_certificate(n))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

pub fn cmd_enumerate(
    file: &DatumFile,
    square: i64,
    degree_min: i64,
    degree_max: i64,
    primitive: bool,
) -> Result<EnumerationReport, CliError> {
    let datum = file.datum()?;
    let mut query = EnumQuery::new(
        datum.polarization().clone(),
        IntRange::between(degree_min, degree_max),
        IntRange::exact(square),
    );
    if primitive {
        query = query.primitive();
    }
    let found = enumerate(&query, datum.lattice(), datum.budget().candidates)?;
    let (radius, certificate) = certified_radius(datum.lattice(), &query)?;
    Ok(EnumerationReport {
        tool_version: TOOL_VERSION.to_string(),
        input: file.clone(),
        query,
        visited: found.visited,
        classes: found.classes,
        certified_radius: radius,
        certificate,
    })
}

/// Compares the optimized searches with the oracle on one datum.
pub fn oracle_compare(
    datum: &PolarizedDatum,
    queries: &[EnumQuery],
) -> Result<Vec<OracleMismatch>, CliError> {
    let mut out = Vec::new();
    let budget = datum.budget().candidates;
    let ci = clifford_index(datum)?;
    let (c, w) = clifford_oracle(datum)?;
    if (ci.c, &ci.witnesses) != (c, &w) {
        out.push(OracleMismatch {
            datum: DatumFile::from_datum(datum),
            what: "clifford index".to_string(),
            optimized: format!("{} {}", ci.c, list(&ci.witnesses)),
            oracle: format!("{c} {}", list(&w)),
        });
    }
    for q in queries {
        let fast = enumerate(q, datum.lattice(), budget)?.classes;
        let slow = certified_box_classes(datum.lattice(), q, budget)?;
        if fast != slow {
            out.push(OracleMismatch {
                datum: DatumFile::from_datum(datum),
                what: format!(
                    "query reference {} degree {:?} square {:?} primitive {}",
                    q.reference, q.degree, q.square, q.primitive_only
                ),
                optimized: list(&fast),
                oracle: list(&slow),
            });
        }
    }
    Ok(out)
}

fn list(v: &[DivClass]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn cmd_oracle_check(
    file: &DatumFile,
    seed: u64,
    trials: usize,
) -> Result<OracleCheckReport, CliError> {
    let datum = file.datum()?;
    let mut mismatches = oracle_compare(&datum, &seeded_queries(&datum, seed))?;
    let data = seeded_data(
        seed,
        trials,
        &RandomDatumSpec::default(),
        file.options.budget(),
    );
    for (i, d) in data.iter().enumerate() {
        mismatches.extend(oracle_compare(
            d,
            &seeded_queries(d, seed.wrapping_add(i as u64 + 1)),
        )?);
    }
    let verdict = if mismatches.is_empty() {
        "all equal".to_string()
    } else {
        format!("{} mismatches", mismatches.len())
    };
    Ok(OracleCheckReport {
        tool_version: TOOL_VERSION.to_string(),
        input: file.clone(),
        seed,
        trials,
        data_checked: trials + 1,
        queries_checked: 2 * (trials + 1),
        mismatches,
        verdict,
    })
}

pub fn cmd_decompose(
    file: &DatumFile,
    m: Option<DivClass>,
    n: Option<DivClass>,
) -> Result<DecomposeReport, CliError> {
    let datum = file.datum()?;
    let k_max = default_k_max(datum.genus());
    let minimal = minimal_decompositions(&datum, k_max)?;
    let l = datum.polarization();
    let (m, n) = match (m, n) {
        (Some(m), Some(n)) => (m, n),
        (Some(m), None) => (m.clone(), l - &m),
        (None, Some(n)) => (l - &n, n),
        (None, None) => {
            let first = minimal.decompositions.first().ok_or_else(|| {
                CliError::Usage(format!(
                    "no decomposition with k <= {k_max}; pass --M and --N"
                ))
            })?;
            (first.m.clone(), first.n.clone())
        }
    };
    let normalization = normalize(&datum, &m, &n)?;
    let conditions = decomposition_conditions(
        &datum,
        &normalization.m_final,
        &normalization.n_final,
        normalization.k,
    )?;
    let incidence = incidence_dimension_report(&datum, &normalization.n_final, normalization.k);
    let note = match normalization.outcome {
        NormalizationOutcome::CaseB { .. } if normalization.l_square_is_4k_minus_2 => {
            Some(format!("L^2 = 4k-2 = {}", 4 * normalization.k - 2))
        }
        NormalizationOutcome::CaseB { .. } => Some("L^2 differs from 4k-2".to_string()),
        _ => None,
    };
    Ok(DecomposeReport {
        tool_version: TOOL_VERSION.to_string(),
        input: file.clone(),
        k_max,
        minimal,
        m,
        n,
        outcome: normalization.outcome.tag().to_string(),
        normalization,
        conditions,
        incidence,
        note,
    })
}
