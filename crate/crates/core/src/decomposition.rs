//! Decompositions `L = M + N` with `h^0(M), h^0(N) >= 2`.
//!
//! A decomposition of least `k = M.N` is normalized by moving fixed
//! `(-2)`-curves of `N` into `M`; the result either exhibits a pencil of
//! degree at most `k` on the curves of `|L|` (case A), is a normalized pair
//! `(M', N')` with `N'` base point free, or has `M' - N'` a `(-2)`-curve
//! meeting `N'` once (case B, forcing `L^2 = 4k - 2`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::{classes_matching, EnumError, EnumQuery, IntRange};
use crate::lattice::DivClass;
use crate::linear_system::PolarizedDatum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("NotADecomposition: {0}")]
    NotADecomposition(String),
    #[error("NotMinimal: {0}")]
    NotMinimal(String),
    #[error(transparent)]
    Search(#[from] EnumError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decomposition {
    pub m: DivClass,
    pub n: DivClass,
    pub k: i64,
}

/// The `k_max`-bounded minimum and its minimizers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalDecompositions {
    pub k_min: Option<i64>,
    pub decompositions: Vec<Decomposition>,
}

/// Why the curves of `|L|` carry a pencil of degree at most `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseAWitness {
    /// `|E|` cuts a pencil of degree `E.L` on every curve of `|L|`.
    EllipticPencil { e: DivClass, degree: i64 },
    /// `N'` is isotropic with `N'.L = k`.
    IsotropicPencil { n: DivClass, degree: i64 },
    /// Moving a root produced a decomposition with smaller `k`.
    SmallerDecomposition { decomposition: Decomposition },
    /// `M ~ N` with `N` base point free and `N^2 > 0`: `O_D(M)` is the
    /// canonical bundle of `D in |N|`.
    CanonicalPencil { n: DivClass },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum NormalizationOutcome {
    CaseA { witness: CaseAWitness },
    Normalized { m: DivClass, n: DivClass },
    CaseB { gamma: DivClass },
}

impl NormalizationOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            NormalizationOutcome::CaseA { .. } => "CaseA",
            NormalizationOutcome::Normalized { .. } => "Normalized",
            NormalizationOutcome::CaseB { .. } => "CaseB",
        }
    }
}

/// The five properties of a normalized decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedChecklist {
    /// `M' - M0` is the sum of moved roots, `N' = N0 - (same)`, `M'.N' = k`.
    pub sum_preserved: bool,
    /// `M'^2 >= N'^2 > 0`.
    pub squares_ordered: bool,
    /// `N'` base point free with `h^0(N') >= 2`.
    pub n_globally_generated: bool,
    /// No effective root has degree `<= -2` on `M'` or on `N'`.
    pub h1_vanishing: bool,
    /// Every effective root negative on `M'` is orthogonal to `L`.
    pub base_divisor_orthogonal: bool,
}

impl NormalizedChecklist {
    pub fn all(&self) -> bool {
        self.sum_preserved
            && self.squares_ordered
            && self.n_globally_generated
            && self.h1_vanishing
            && self.base_divisor_orthogonal
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub outcome: NormalizationOutcome,
    pub k: i64,
    /// Input pair after orienting so that `M.L >= N.L`.
    pub start: Decomposition,
    /// Roots moved from `N` to `M`, in order.
    pub moved_roots: Vec<DivClass>,
    /// Final pair reached by the loop.
    pub m_final: DivClass,
    pub n_final: DivClass,
    /// Present for [`NormalizationOutcome::Normalized`] and
    /// [`NormalizationOutcome::CaseB`].
    pub checklist: Option<NormalizedChecklist>,
    /// `L^2 = 4k - 2`; meaningful for case B.
    pub l_square_is_4k_minus_2: bool,
}

/// `floor((g+3)/2) + 1`.
pub fn default_k_max(genus: i64) -> i64 {
    (genus + 3).div_euclid(2) + 1
}

/// Admissible decompositions with `k <= k_max`, canonical representative
/// `N.L <= M.L` (ties: `N <= M` lexicographically), sorted by `(k, N)`.
pub fn admissible_decompositions(
    datum: &PolarizedDatum,
    k_max: i64,
) -> Result<Vec<Decomposition>, EnumError> {
    let l = datum.polarization();
    let l2 = datum.square(l);
    let q = EnumQuery::new(
        l.clone(),
        IntRange::between(0, l2 / 2),
        IntRange::at_least(0),
    );
    let mut out = Vec::new();
    for n in classes_matching(&q, datum.lattice(), datum.budget().candidates)? {
        let m = l - &n;
        let nl = datum.pair(&n, l);
        let k = nl - datum.square(&n);
        if k > k_max || nl > datum.pair(&m, l) || (nl * 2 == l2 && n > m) {
            continue;
        }
        if datum.degree(&n) <= 0 || datum.degree(&m) <= 0 {
            continue;
        }
        if datum.h0(&n)? < 2 || datum.h0(&m)? < 2 {
            continue;
        }
        out.push(Decomposition { m, n, k });
    }
    out.sort_by(|a, b| (a.k, &a.n).cmp(&(b.k, &b.n)));
    Ok(out)
}

/// Least `k <= k_max` admitting a decomposition, with all its minimizers.
pub fn minimal_decompositions(
    datum: &PolarizedDatum,
    k_max: i64,
) -> Result<MinimalDecompositions, EnumError> {
    let all = admissible_decompositions(datum, k_max)?;
    let k_min = all.iter().map(|d| d.k).min();
    let decompositions = all.into_iter().filter(|d| Some(d.k) == k_min).collect();
    Ok(MinimalDecompositions {
        k_min,
        decompositions,
    })
}

fn is_decomposition(
    datum: &PolarizedDatum,
    m: &DivClass,
    n: &DivClass,
) -> Result<(), DecompositionError> {
    let l = datum.polarization();
    datum.lattice().check_class(m).map_err(EnumError::from)?;
    datum.lattice().check_class(n).map_err(EnumError::from)?;
    if &(m + n) != l {
        return Err(DecompositionError::NotADecomposition(format!(
            "{m} + {n} differs from L = {l}"
        )));
    }
    for x in [m, n] {
        let h = datum.h0(x)?;
        if h < 2 {
            return Err(DecompositionError::NotADecomposition(format!(
                "h0({x}) = {h} < 2"
            )));
        }
    }
    Ok(())
}

/// Normalizes a decomposition of minimal `k`.
pub fn normalize(
    datum: &PolarizedDatum,
    m0: &DivClass,
    n0: &DivClass,
) -> Result<Normalization, DecompositionError> {
    is_decomposition(datum, m0, n0)?;
    let l = datum.polarization().clone();
    let k0 = datum.pair(m0, n0);
    let min = minimal_decompositions(datum, k0)?;
    if let Some(k_min) = min.k_min.filter(|&k| k < k0) {
        return Err(DecompositionError::NotMinimal(format!(
            "k = {k0} but a decomposition with k = {k_min} exists"
        )));
    }
    let l2 = datum.square(&l);
    let l_square_is_4k_minus_2 = l2 == 4 * k0 - 2;

    let (mut m, mut n) = (m0.clone(), n0.clone());
    let finish =
        |outcome, start: Decomposition, moved, m: DivClass, n: DivClass, checklist| Normalization {
            outcome,
            k: k0,
            start,
            moved_roots: moved,
            m_final: m,
            n_final: n,
            checklist,
            l_square_is_4k_minus_2,
        };

    if m == n {
        let start = Decomposition {
            m: m.clone(),
            n: n.clone(),
            k: k0,
        };
        let bpf = datum.is_base_point_free(&n)?;
        let witness = if !bpf.holds {
            let e = bpf
                .witness
                .expect("nef class failing bpf has an elliptic witness");
            CaseAWitness::EllipticPencil {
                degree: datum.pair(&e, &l),
                e,
            }
        } else if datum.square(&n) == 0 {
            CaseAWitness::IsotropicPencil {
                degree: datum.pair(&n, &l),
                n: n.clone(),
            }
        } else {
            CaseAWitness::CanonicalPencil { n: n.clone() }
        };
        return Ok(finish(
            NormalizationOutcome::CaseA { witness },
            start,
            Vec::new(),
            m,
            n,
            None,
        ));
    }

    // Orient: M.L >= N.L, and h0(N - M) = 0.
    let (ml, nl) = (datum.pair(&m, &l), datum.pair(&n, &l));
    if ml < nl || (ml == nl && datum.h0(&(&n - &m))? > 0) {
        std::mem::swap(&mut m, &mut n);
    }
    let start = Decomposition {
        m: m.clone(),
        n: n.clone(),
        k: k0,
    };

    let mut moved = Vec::new();
    loop {
        let negative = datum.negative_roots(&n)?;
        let Some(gamma) = negative.into_iter().next() else {
            break;
        };
        let (gn, gm) = (datum.pair(&gamma, &n), datum.pair(&gamma, &m));
        if gn != -1 || gm != 1 {
            let m1 = &m + &gamma;
            let n1 = &n - &gamma;
            let k1 = datum.pair(&m1, &n1);
            let decomposition = Decomposition {
                m: m1,
                n: n1,
                k: k1,
            };
            return Ok(finish(
                NormalizationOutcome::CaseA {
                    witness: CaseAWitness::SmallerDecomposition { decomposition },
                },
                start,
                moved,
                m,
                n,
                None,
            ));
        }
        m = &m + &gamma;
        n = &n - &gamma;
        moved.push(gamma);
    }

    if datum.square(&n) == 0 {
        let witness = CaseAWitness::IsotropicPencil {
            degree: datum.pair(&n, &l),
            n: n.clone(),
        };
        return Ok(finish(
            NormalizationOutcome::CaseA { witness },
            start,
            moved,
            m,
            n,
            None,
        ));
    }
    let bpf = datum.is_base_point_free(&n)?;
    if !bpf.holds {
        let e = bpf
            .witness
            .expect("nef class failing bpf has an elliptic witness");
        let witness = CaseAWitness::EllipticPencil {
            degree: datum.pair(&e, &l),
            e,
        };
        return Ok(finish(
            NormalizationOutcome::CaseA { witness },
            start,
            moved,
            m,
            n,
            None,
        ));
    }

    let checklist = normalized_checklist(datum, &start, &moved, &m, &n)?;

    let r = &m - &n;
    if datum.square(&r) == -2 && datum.pair(&r, &n) == 1 && datum.degree(&r) > 0 {
        debug_assert!(l_square_is_4k_minus_2);
        return Ok(finish(
            NormalizationOutcome::CaseB { gamma: r },
            start,
            moved,
            m,
            n,
            Some(checklist),
        ));
    }

    if !checklist.base_divisor_orthogonal {
        // The moving part of |M'| is a multiple of an elliptic pencil, or k
        // was not minimal.
        let red = datum.reduce(&m)?;
        let moving = red.residual;
        if datum.square(&moving) == 0 && !moving.is_zero() {
            let e = moving
                .div_exact(moving.content())
                .expect("content divides every coordinate");
            let witness = CaseAWitness::EllipticPencil {
                degree: datum.pair(&e, &l),
                e,
            };
            return Ok(finish(
                NormalizationOutcome::CaseA { witness },
                start,
                moved,
                m,
                n,
                None,
            ));
        }
        return Err(DecompositionError::NotMinimal(format!(
            "base divisor of |{m}| meets L positively"
        )));
    }

    Ok(finish(
        NormalizationOutcome::Normalized {
            m: m.clone(),
            n: n.clone(),
        },
        start,
        moved,
        m,
        n,
        Some(checklist),
    ))
}

fn normalized_checklist(
    datum: &PolarizedDatum,
    start: &Decomposition,
    moved: &[DivClass],
    m: &DivClass,
    n: &DivClass,
) -> Result<NormalizedChecklist, EnumError> {
    let l = datum.polarization();
    let shift = moved
        .iter()
        .fold(DivClass::zero(datum.rank()), |acc, g| &acc + g);
    let sum_preserved =
        &(&start.m + &shift) == m && &(&start.n - &shift) == n && datum.pair(m, n) == start.k;
    let (m2, n2) = (datum.square(m), datum.square(n));
    let squares_ordered = m2 >= n2 && n2 > 0;
    let n_globally_generated = datum.is_base_point_free(n)?.holds && datum.h0(n)? >= 2;
    let h1_vanishing =
        datum.h1_vanishing_root_test(m)?.holds && datum.h1_vanishing_root_test(n)?.holds;
    let base_divisor_orthogonal = datum
        .negative_roots(m)?
        .iter()
        .all(|g| datum.pair(g, l) == 0);
    Ok(NormalizedChecklist {
        sum_preserved,
        squares_ordered,
        n_globally_generated,
        h1_vanishing,
        base_divisor_orthogonal,
    })
}

/// `M.L >= N.L` and `h^0(N - M) = 0`, unless `M ~ N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeOrderCondition {
    pub holds: bool,
    pub m_degree: i64,
    pub n_degree: i64,
    pub h0_n_minus_m: i64,
    /// `M ~ N`: the condition is waived.
    pub symmetric: bool,
}

/// `M` is not `N + Δ` for a root `Δ` with `Δ.N = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootShiftCondition {
    pub holds: bool,
    pub witness: Option<DivClass>,
}

/// `L^2 >= 4d - 2` and `M - N` effective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusBoundCondition {
    pub holds: bool,
    pub l_square: i64,
    pub l_square_bound: bool,
    pub h0_m_minus_n: i64,
}

/// `M^2 > 0` and `N^2 > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigSummandsCondition {
    pub holds: bool,
    pub m_square: i64,
    pub n_square: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionConditions {
    pub degree_order: DegreeOrderCondition,
    pub root_shift: RootShiftCondition,
    pub genus_bound: GenusBoundCondition,
    pub big_summands: BigSummandsCondition,
    /// Statements about curves in `|N|` and `|L|` that follow from the others
    /// and are not computed.
    pub curve_statements: String,
}

/// Numerical conditions on a decomposition `L = M + N` with `M.N = d`.
pub fn decomposition_conditions(
    datum: &PolarizedDatum,
    m: &DivClass,
    n: &DivClass,
    d: i64,
) -> Result<DecompositionConditions, DecompositionError> {
    let l = datum.polarization();
    if &(m + n) != l {
        return Err(DecompositionError::NotADecomposition(format!(
            "{m} + {n} differs from L = {l}"
        )));
    }
    let symmetric = m == n;
    let (m_degree, n_degree) = (datum.pair(m, l), datum.pair(n, l));
    let h0_n_minus_m = datum.h0(&(n - m))?;
    let degree_order = DegreeOrderCondition {
        holds: symmetric || (m_degree >= n_degree && h0_n_minus_m == 0),
        m_degree,
        n_degree,
        h0_n_minus_m,
        symmetric,
    };
    let delta = m - n;
    let shifted =
        datum.square(&delta) == -2 && datum.pair(&delta, n) == 1 && datum.degree(&delta) > 0;
    let root_shift = RootShiftCondition {
        holds: !shifted,
        witness: shifted.then_some(delta),
    };
    let l_square = datum.square(l);
    let l_square_bound = l_square >= 4 * d - 2;
    let h0_m_minus_n = datum.h0(&(m - n))?;
    let genus_bound = GenusBoundCondition {
        holds: l_square_bound && h0_m_minus_n > 0,
        l_square,
        l_square_bound,
        h0_m_minus_n,
    };
    let (m_square, n_square) = (datum.square(m), datum.square(n));
    let big_summands = BigSummandsCondition {
        holds: m_square > 0 && n_square > 0,
        m_square,
        n_square,
    };
    Ok(DecompositionConditions {
        degree_order,
        root_shift,
        genus_bound,
        big_summands,
        curve_statements: "implied by root_shift and the gonality hypotheses; not computed"
            .to_string(),
    })
}

/// Dimension counts attached to the incidence of `(C, D, Z)` with
/// `C in |L|`, `D in |N|` and `Z in |O_D(M)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceDimensions {
    pub genus: i64,
    /// `dim |L| = g`.
    pub dim_l: i64,
    /// `dim |L ⊗ I_Z| = g - d + 1`.
    pub dim_l_through_z: i64,
    /// `dim I_{L,N,d} = g + 1`.
    pub dim_incidence: i64,
    /// `dim |N| + dim |O_D(M)| = (N^2/2 + 1) + (d - N^2/2 - 1)`.
    pub dim_pairs: i64,
    /// `dim |L ⊗ I_Z| > 0`.
    pub through_z_positive: bool,
}

pub fn incidence_dimension_report(
    datum: &PolarizedDatum,
    n: &DivClass,
    d: i64,
) -> IncidenceDimensions {
    let g = datum.genus();
    let half_n2 = datum.square(n) / 2;
    let dim_n = half_n2 + 1;
    let dim_od = d - half_n2 - 1;
    let dim_l_through_z = g - d + 1;
    IncidenceDimensions {
        genus: g,
        dim_l: g,
        dim_l_through_z,
        dim_incidence: g + 1,
        dim_pairs: dim_n + dim_od,
        through_z_positive: dim_l_through_z > 0,
    }
}
