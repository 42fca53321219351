//! Acceptance criteria 1 to 8. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. All comparisons are exact (tolerance 0).

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use k3gon::classifier::{
    classify, clifford_index, CaseTag, ClassificationReport, ExceptionalMembers,
};
use k3gon::decomposition::{
    admissible_decompositions, default_k_max, incidence_dimension_report, minimal_decompositions,
    normalize, NormalizationOutcome,
};
use k3gon::enumeration::{classes_matching, Budget};
use k3gon::lattice::{gamma_candidate, DivClass, Unimodular};
use k3gon::linear_system::PolarizedDatum;
use k3gon::oracle::{
    certified_box_classes, clifford_oracle, random_lattice, seeded_data, seeded_queries,
    RandomDatumSpec,
};
use k3gon_cli::commands::cmd_scan_elms;
use k3gon_cli::input::DatumFile;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit: Duration) -> Result<(), String> {
    check(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn repo(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn file_datum(name: &str) -> PolarizedDatum {
    DatumFile::read(&repo(&format!("data/{name}.toml")))
        .and_then(|f| f.datum())
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn c(v: &[i64]) -> DivClass {
    DivClass::new(v.to_vec())
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let d = file_datum("dm");
    let r = classify(&d).map_err(|e| e.to_string())?;
    let el = t.elapsed();
    check(r.genus == 10, format!("genus {}", r.genus))?;
    check(r.clifford_index == 2, format!("c {}", r.clifford_index))?;
    check(r.gonality_min == 4, format!("gon_min {}", r.gonality_min))?;
    check(
        r.gonality_general == 5,
        format!("gon_general {}", r.gonality_general),
    )?;
    check(!r.gonality_constant, "gonality reported constant")?;
    check(
        r.case_tag == CaseTag::DonagiMorrison,
        format!("{:?}", r.case_tag),
    )?;
    within(el, Duration::from_secs(1))?;
    Ok(format!(
        "g=10 c=2 gon 4/5 nonconstant DonagiMorrison in {el:?}"
    ))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let certs = cmd_scan_elms(1, 25).map_err(|e| e.to_string())?;
    let el = t.elapsed();
    check(certs.len() == 25, "wrong number of certificates")?;
    for (i, cert) in certs.iter().enumerate() {
        let n = i as i64 + 1;
        let d2 = 2 * n;
        check(cert.n == n, "certificates out of order")?;
        check(cert.holds, format!("n={n} does not hold"))?;
        check(
            cert.g == 2 * d2 + 2 && cert.g == 4 * n + 2,
            format!("n={n} g={}", cert.g),
        )?;
        check(
            cert.c == d2 - 1 && cert.c == 2 * n - 1,
            format!("n={n} c={}", cert.c),
        )?;
        check(cert.r == Some(n + 1), format!("n={n} r={:?}", cert.r))?;
        check(
            cert.gonality == cert.c + 3,
            format!("n={n} gon={}", cert.gonality),
        )?;
        check(
            cert.transcript.as_ref().is_some_and(|t| t.empty),
            format!("n={n} B search not empty"),
        )?;
    }
    within(el, Duration::from_secs(10))?;
    Ok(format!("n=1..25 all hold in {el:?}"))
}

fn criterion_3() -> Outcome {
    let certs = cmd_scan_elms(2, 25).map_err(|e| e.to_string())?;
    for cert in &certs {
        let k = cert
            .checklist
            .as_ref()
            .ok_or(format!("n={} has no checklist", cert.n))?;
        check(k.in_conjecture_scope, format!("n={} out of scope", cert.n))?;
        check(
            k.g == 4 * k.r - 2 && k.genus_matches,
            format!("n={} g != 4r-2", cert.n),
        )?;
        check(
            k.c == 2 * k.r - 3 && k.clifford_matches,
            format!("n={} c != 2r-3", cert.n),
        )?;
        check(
            k.gonality == 2 * k.r && k.gonality_matches,
            format!("n={} gon != 2r", cert.n),
        )?;
    }
    Ok(format!(
        "g=4r-2, c=2r-3, gon=2r for n=2..25 ({} members)",
        certs.len()
    ))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let d = file_datum("elms_n1");
    let min = minimal_decompositions(&d, default_k_max(d.genus())).map_err(|e| e.to_string())?;
    let first = min
        .decompositions
        .first()
        .ok_or("ELMS n=1 has no decomposition")?;
    let n = normalize(&d, &first.m, &first.n).map_err(|e| e.to_string())?;
    check(
        n.outcome == NormalizationOutcome::CaseB { gamma: c(&[0, 1]) },
        format!("ELMS n=1 outcome {:?}", n.outcome),
    )?;
    let l2 = d.square(d.polarization());
    check(
        n.l_square_is_4k_minus_2 && l2 == 4 * n.k - 2 && l2 == 10,
        format!("L^2={l2}, k={}", n.k),
    )?;

    let d = file_datum("dm");
    let min = minimal_decompositions(&d, default_k_max(d.genus())).map_err(|e| e.to_string())?;
    let first = min
        .decompositions
        .first()
        .ok_or("DM has no decomposition")?;
    let n = normalize(&d, &first.m, &first.n).map_err(|e| e.to_string())?;
    check(
        matches!(n.outcome, NormalizationOutcome::Normalized { .. }),
        format!("DM outcome {:?}", n.outcome),
    )?;
    check(
        n.checklist.as_ref().is_some_and(|k| k.all()),
        format!("DM checklist {:?}", n.checklist),
    )?;
    let el = t.elapsed();
    within(el, Duration::from_secs(1))?;
    Ok(format!(
        "ELMS n=1 CaseB gamma=(0,1) L^2=4k-2=10; DM Normalized, 5/5 checks in {el:?}"
    ))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let spec = RandomDatumSpec::default();
    let data = seeded_data(20240501, 200, &spec, Budget::default());
    let mut queries = 0usize;
    let mut ranks = BTreeSet::new();
    for (i, d) in data.iter().enumerate() {
        ranks.insert(d.rank());
        check(
            d.lattice().gram().iter().flatten().all(|v| v.abs() <= 8),
            "entry bound",
        )?;
        check(d.square(d.polarization()) <= 60, "L^2 bound")?;
        let ci = clifford_index(d).map_err(|e| e.to_string())?;
        let (oc, ow) = clifford_oracle(d).map_err(|e| e.to_string())?;
        check(
            ci.c == oc && ci.witnesses == ow,
            format!(
                "datum {i}: clifford {} {:?} vs oracle {oc} {ow:?}",
                ci.c, ci.witnesses
            ),
        )?;
        for q in seeded_queries(d, i as u64) {
            let fast = classes_matching(&q, d.lattice(), d.budget().candidates)
                .map_err(|e| e.to_string())?;
            let slow = certified_box_classes(d.lattice(), &q, d.budget().candidates)
                .map_err(|e| e.to_string())?;
            check(fast == slow, format!("datum {i}: query {q:?} differs"))?;
            queries += 1;
        }
    }
    check(ranks.len() == 2, format!("ranks covered {ranks:?}"))?;
    let el = t.elapsed();
    within(el, Duration::from_secs(120))?;
    Ok(format!(
        "200 data, {queries} queries, Clifford index and enumeration equal in {el:?}"
    ))
}

fn criterion_6() -> Outcome {
    let spec = RandomDatumSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut gammas = 0;
    while gammas < 1000 {
        let lat = random_lattice(&mut rng, &spec);
        let v = |rng: &mut ChaCha8Rng| {
            DivClass::new((0..lat.rank()).map(|_| rng.gen_range(-6..=6)).collect())
        };
        let (n, l) = (v(&mut rng), v(&mut rng));
        let l2 = lat.pair(&l, &l).map_err(|e| e.to_string())?;
        if l2 <= 0 {
            continue;
        }
        let n2 = lat.pair(&n, &n).map_err(|e| e.to_string())?;
        let d = lat.pair(&n, &l).map_err(|e| e.to_string())? - n2;
        let g = gamma_candidate(&n, &l, d, &lat).map_err(|e| e.to_string())?;
        check(
            g.degree_l.is_zero(),
            format!("Gamma'.L = {} for N={n} L={l}", g.degree_l),
        )?;
        gammas += 1;
    }
    let mut incidences = 0;
    for dat in seeded_data(66, 60, &spec, Budget::default()) {
        let decs = admissible_decompositions(&dat, default_k_max(dat.genus()))
            .map_err(|e| e.to_string())?;
        for dec in decs {
            let r = incidence_dimension_report(&dat, &dec.n, dec.k);
            check(
                r.dim_pairs == dec.k,
                format!("dim I = {} != d = {}", r.dim_pairs, dec.k),
            )?;
            check(
                r.dim_l_through_z == r.dim_l - dec.k + 1,
                "dim |L (x) I_Z| mismatch",
            )?;
            incidences += 1;
        }
    }
    check(
        incidences >= 50,
        format!("only {incidences} admissible inputs"),
    )?;
    Ok(format!(
        "{gammas} Gamma'.L = 0 identities, {incidences} incidence identities"
    ))
}

fn invariants(r: &ClassificationReport) -> Result<(), String> {
    let c = r.clifford_index;
    check(
        c + 2 <= r.gonality_general && r.gonality_general <= c + 3,
        "c+2 <= gon <= c+3",
    )?;
    check(
        c + 2 <= r.gonality_min && r.gonality_min <= c + 3,
        "c+2 <= gon_min <= c+3",
    )?;
    check(c <= (r.genus - 1).div_euclid(2), "c <= floor((g-1)/2)")?;
    check(
        !r.gonality_constant == (r.case_tag == CaseTag::DonagiMorrison),
        "nonconstant iff DM",
    )?;
    if r.case_tag == CaseTag::GeneralizedELMS {
        check(
            r.gonality_general == c + 3 && r.exceptional_members == ExceptionalMembers::AllMembers,
            "ELMS implies gon = c+3, all exceptional",
        )?;
    }
    Ok(())
}

fn witness_pairs(l: &DivClass, ws: &[DivClass]) -> BTreeSet<(DivClass, DivClass)> {
    ws.iter()
        .map(|n| {
            let m = l - n;
            if *n <= m {
                (n.clone(), m)
            } else {
                (m, n.clone())
            }
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let mut data: Vec<PolarizedDatum> = ["dm", "elms_n1", "elms_n2"]
        .iter()
        .map(|n| file_datum(n))
        .collect();
    data.extend(seeded_data(
        77,
        27,
        &RandomDatumSpec::default(),
        Budget::default(),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut conjugations = 0;
    let mut cases = BTreeSet::new();
    for (i, d) in data.iter().enumerate() {
        let r = classify(d).map_err(|e| e.to_string())?;
        invariants(&r).map_err(|e| format!("datum {i}: {e}"))?;
        cases.insert(format!("{:?}", r.case_tag));
        let l = d.polarization();
        let base = witness_pairs(l, &r.clifford_witnesses);
        for _ in 0..50 {
            let steps = rng.gen_range(1..12);
            let u = Unimodular::random(d.rank(), steps, &mut rng);
            let t = d.transformed(&u);
            let s = classify(&t).map_err(|e| e.to_string())?;
            invariants(&s).map_err(|e| format!("datum {i} conjugated: {e}"))?;
            let same = (
                s.genus,
                s.clifford_index,
                s.gonality_min,
                s.gonality_general,
                s.case_tag,
                s.clifford_dimension,
            ) == (
                r.genus,
                r.clifford_index,
                r.gonality_min,
                r.gonality_general,
                r.case_tag,
                r.clifford_dimension,
            );
            check(
                same,
                format!("datum {i}: report changed under a change of basis"),
            )?;
            let back: Vec<DivClass> = s.clifford_witnesses.iter().map(|w| u.to_old(w)).collect();
            check(
                witness_pairs(l, &back) == base,
                format!("datum {i}: witnesses changed"),
            )?;
            conjugations += 1;
        }
    }
    check(cases.len() == 3, format!("cases covered {cases:?}"))?;
    Ok(format!(
        "{} data, {conjugations} conjugations, cases {cases:?}",
        data.len()
    ))
}

fn criterion_8() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_k3gon");
    for name in ["dm", "elms_n1", "elms_n2"] {
        let path = repo(&format!("data/{name}.toml"));
        let run = || {
            Command::new(exe)
                .arg("classify")
                .arg(&path)
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        check(
            a.status.success() && b.status.success(),
            format!("{name}: nonzero exit"),
        )?;
        check(a.stdout == b.stdout, format!("{name}: runs differ"))?;
        let golden = std::fs::read(
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{name}.json")),
        )
        .map_err(|e| format!("{name}: {e}"))?;
        check(a.stdout == golden, format!("{name}: differs from golden"))?;
    }
    Ok("dm, elms_n1, elms_n2 byte-identical across two runs and equal to goldens".to_string())
}

fn main() {
    // `cargo test` passes filter arguments; run everything regardless, but
    // honour `--list` so test discovery does not execute the suite.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 8] = [
        ("1 Donagi-Morrison reproduction", criterion_1),
        ("2 generalized ELMS family n=1..25", criterion_2),
        ("3 ELMS conjecture arithmetic", criterion_3),
        ("4 decomposition dichotomy", criterion_4),
        ("5 oracle equivalence", criterion_5),
        ("6 identity suite", criterion_6),
        ("7 invariant suite", criterion_7),
        ("8 golden reports", criterion_8),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
