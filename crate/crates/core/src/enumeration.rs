//! Complete enumeration of classes with bounded degree and square.
//!
//! For a reference class `R` with `r = R^2 > 0` the form
//!
//! ```text
//! P(x) = 2 (x.R)^2 / r - x^2
//! ```
//!
//! is positive definite: writing `x = (x.R / r) R + x'` with `x'` in the
//! orthogonal complement of `R` gives `P(x) = (x.R)^2 / r - x'^2`, and the
//! complement is negative definite by the Hodge index theorem. Every class
//! with `|x.R| <= T` and `x^2 >= s` therefore satisfies
//! `P(x) <= 2 T^2 / r - s`, an ellipsoid. The ellipsoid is searched
//! depth-first (Fincke–Pohst) on an exact rational `LDLᵀ` factorisation of
//! `r P`, which is an integer matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{floor_sqrt, rat, DivClass, GramLattice};

/// Default cap on lattice points visited by a single search.
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 10_000_000;
/// Default cap on the degree of root and elliptic searches against the
/// ample class.
pub const DEFAULT_MAX_DEGREE: i64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("UnboundedQuery: {0}")]
    UnboundedQuery(&'static str),
    #[error("EmptyRange: {0}")]
    EmptyRange(&'static str),
    #[error("NonPositiveReference: reference class must have positive square, found {0}")]
    NonPositiveReference(i64),
    #[error("BudgetExceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}

/// Search limits carried by a polarized datum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest degree against the ample class any root or elliptic search
    /// may need.
    pub max_degree: i64,
    /// Lattice points visited per enumeration.
    pub candidates: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: DEFAULT_MAX_DEGREE,
            candidates: DEFAULT_CANDIDATE_BUDGET,
        }
    }
}

/// A closed integer interval; a missing end is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl IntRange {
    pub fn exact(v: i64) -> Self {
        IntRange {
            lo: Some(v),
            hi: Some(v),
        }
    }

    pub fn between(lo: i64, hi: i64) -> Self {
        IntRange {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn at_least(lo: i64) -> Self {
        IntRange {
            lo: Some(lo),
            hi: None,
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|lo| v >= lo) && self.hi.is_none_or(|hi| v <= hi)
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(lo), Some(hi)) if lo > hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumQuery {
    pub reference: DivClass,
    pub degree: IntRange,
    pub square: IntRange,
    pub primitive_only: bool,
}

impl EnumQuery {
    pub fn new(reference: DivClass, degree: IntRange, square: IntRange) -> Self {
        EnumQuery {
            reference,
            degree,
            square,
            primitive_only: false,
        }
    }

    pub fn primitive(mut self) -> Self {
        self.primitive_only = true;
        self
    }

    /// Exact membership test for a single class.
    pub fn matches(&self, lat: &GramLattice, x: &DivClass) -> bool {
        self.degree.contains(lat.ip(x, &self.reference))
            && self.square.contains(lat.sq(x))
            && (!self.primitive_only || x.is_primitive())
    }
}

/// The positive definite form `r P` and the bound `r (2 T^2 / r - s)` of a
/// query, both integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryEllipsoid {
    /// `2 w wᵀ - r G` where `w = G R`.
    pub matrix: Vec<Vec<BigInt>>,
    /// `2 T^2 - r s`; negative when no class can match.
    pub bound: BigInt,
    /// `r = R^2`.
    pub reference_square: i64,
    /// `T = max(|deg_lo|, |deg_hi|)`.
    pub degree_extent: i64,
    /// `s`, the lower end of the square range.
    pub square_floor: i64,
}

impl QueryEllipsoid {
    pub fn for_query(lat: &GramLattice, q: &EnumQuery) -> Result<Self, EnumError> {
        lat.check_class(&q.reference)?;
        let r = lat.sq(&q.reference);
        if r <= 0 {
            return Err(EnumError::NonPositiveReference(r));
        }
        if q.degree.is_empty() {
            return Err(EnumError::EmptyRange("degree range"));
        }
        if q.square.is_empty() {
            return Err(EnumError::EmptyRange("square range"));
        }
        let (dlo, dhi) = match (q.degree.lo, q.degree.hi) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(EnumError::UnboundedQuery(
                    "degree range must be bounded on both sides",
                ))
            }
        };
        let s = q.square.lo.ok_or(EnumError::UnboundedQuery(
            "square range needs a finite lower bound",
        ))?;
        let t = dlo.abs().max(dhi.abs());
        let w = lat.dual_vector(&q.reference);
        let n = lat.rank();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        BigInt::from(2) * BigInt::from(w[i]) * BigInt::from(w[j])
                            - BigInt::from(r) * BigInt::from(lat.gram()[i][j])
                    })
                    .collect()
            })
            .collect();
        let bound =
            BigInt::from(2) * BigInt::from(t) * BigInt::from(t) - BigInt::from(r) * BigInt::from(s);
        Ok(QueryEllipsoid {
            matrix,
            bound,
            reference_square: r,
            degree_extent: t,
            square_floor: s,
        })
    }

    /// Rational `LDLᵀ` of the matrix: `value(x) = Σ d_i (x_i + Σ_{j>i} u_ij x_j)^2`.
    pub fn factor(&self) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
        let n = self.matrix.len();
        let p: Vec<Vec<BigRational>> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect()
            })
            .collect();
        let mut d = vec![BigRational::zero(); n];
        let mut u = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut di = p[i][i].clone();
            for k in 0..i {
                di -= &d[k] * &u[k][i] * &u[k][i];
            }
            debug_assert!(di.is_positive(), "query form must be positive definite");
            for j in i + 1..n {
                let mut v = p[i][j].clone();
                for k in 0..i {
                    v -= &d[k] * &u[k][i] * &u[k][j];
                }
                u[i][j] = v / &di;
            }
            d[i] = di;
        }
        (d, u)
    }
}

/// Result of a search together with what it cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub classes: Vec<DivClass>,
    /// Lattice points of the ellipsoid visited.
    pub visited: u64,
}

/// All classes `x` with `x.R` in the degree range, `x^2` in the square range
/// and, when requested, primitive; sorted lexicographically.
pub fn classes_matching(
    q: &EnumQuery,
    lat: &GramLattice,
    candidate_budget: u64,
) -> Result<Vec<DivClass>, EnumError> {
    Ok(enumerate(q, lat, candidate_budget)?.classes)
}

/// [`classes_matching`] with visit statistics.
pub fn enumerate(
    q: &EnumQuery,
    lat: &GramLattice,
    candidate_budget: u64,
) -> Result<Enumeration, EnumError> {
    let ell = QueryEllipsoid::for_query(lat, q)?;
    let mut out = Enumeration {
        classes: Vec::new(),
        visited: 0,
    };
    if ell.bound.is_negative() {
        return Ok(out);
    }
    let (d, u) = ell.factor();
    let n = lat.rank();
    let mut search = Search {
        d: &d,
        u: &u,
        x: vec![0i64; n],
        visited: 0,
        budget: candidate_budget,
        found: Vec::new(),
    };
    search.descend(n, &BigRational::from_integer(ell.bound.clone()))?;
    out.visited = search.visited;
    let mut classes: Vec<DivClass> = search
        .found
        .into_iter()
        .map(DivClass::new)
        .filter(|x| q.matches(lat, x))
        .collect();
    classes.sort();
    out.classes = classes;
    Ok(out)
}

struct Search<'a> {
    d: &'a [BigRational],
    u: &'a [Vec<BigRational>],
    x: Vec<i64>,
    visited: u64,
    budget: u64,
    found: Vec<Vec<i64>>,
}

impl Search<'_> {
    /// Assigns coordinates `level-1, ..., 0` given the remaining bound.
    fn descend(&mut self, level: usize, remaining: &BigRational) -> Result<(), EnumError> {
        if level == 0 {
            self.found.push(self.x.clone());
            return Ok(());
        }
        let i = level - 1;
        let mut centre = BigRational::zero();
        for j in level..self.x.len() {
            if self.x[j] != 0 {
                centre += &self.u[i][j] * rat(self.x[j]);
            }
        }
        let di = &self.d[i];
        let cost = |xi: i64| -> BigRational {
            let t = rat(xi) + &centre;
            di * &t * &t
        };
        let spread = floor_sqrt(&(remaining / di));
        let spread = i64::try_from(spread).expect("search radius overflows i64");
        let mid = i64::try_from((-&centre).floor().to_integer()).expect("centre overflows i64");
        let mut lo = mid - spread - 1;
        let mut hi = mid + spread + 2;
        while lo <= hi && cost(lo) > *remaining {
            lo += 1;
        }
        while hi >= lo && cost(hi) > *remaining {
            hi -= 1;
        }
        for xi in lo..=hi {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(EnumError::BudgetExceeded {
                    what: "lattice points visited",
                    limit: self.budget,
                });
            }
            let rest = remaining - cost(xi);
            self.x[i] = xi;
            self.descend(i, &rest)?;
        }
        self.x[i] = 0;
        Ok(())
    }
}

fn check_degree_budget(max_degree: i64, limit: i64) -> Result<(), EnumError> {
    if max_degree > limit {
        return Err(EnumError::BudgetExceeded {
            what: "degree against the ample class",
            limit: limit.max(0) as u64,
        });
    }
    Ok(())
}

/// Roots `Δ` (`Δ^2 = -2`) with `1 <= Δ.A <= max_degree`: the effective
/// `(-2)`-classes of bounded degree in the chamber of `A`.
pub fn roots_positive(
    lat: &GramLattice,
    ample: &DivClass,
    max_degree: i64,
    budget: &Budget,
) -> Result<Vec<DivClass>, EnumError> {
    check_degree_budget(max_degree, budget.max_degree)?;
    if max_degree < 1 {
        return Ok(Vec::new());
    }
    let q = EnumQuery::new(
        ample.clone(),
        IntRange::between(1, max_degree),
        IntRange::exact(-2),
    );
    classes_matching(&q, lat, budget.candidates)
}

/// Primitive isotropic classes `E` with `1 <= E.A <= max_degree`.
pub fn elliptic_classes(
    lat: &GramLattice,
    ample: &DivClass,
    max_degree: i64,
    budget: &Budget,
) -> Result<Vec<DivClass>, EnumError> {
    check_degree_budget(max_degree, budget.max_degree)?;
    if max_degree < 1 {
        return Ok(Vec::new());
    }
    let q = EnumQuery::new(
        ample.clone(),
        IntRange::between(1, max_degree),
        IntRange::exact(0),
    )
    .primitive();
    classes_matching(&q, lat, budget.candidates)
}
