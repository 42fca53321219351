//! Brute-force reference searches.
//!
//! Nothing here prunes beyond a coordinate box, so each routine can be
//! checked by reading it. The optimized searches are tested against these.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumeration::{Budget, EnumError, EnumQuery, IntRange, QueryEllipsoid};
use crate::lattice::{floor_sqrt, DivClass, GramLattice};
use crate::linear_system::PolarizedDatum;

/// All classes in `[-radius, radius]^rank` matching `predicate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxQuery {
    pub radius: i64,
    pub predicate: EnumQuery,
}

/// Box search in lexicographic order. Counts every point of the box against
/// `candidate_budget`.
pub fn box_classes(
    lat: &GramLattice,
    q: &BoxQuery,
    candidate_budget: u64,
) -> Result<Vec<DivClass>, EnumError> {
    lat.check_class(&q.predicate.reference)?;
    if q.radius < 0 {
        return Err(EnumError::EmptyRange("box radius"));
    }
    let n = lat.rank();
    let side = 2 * q.radius as u128 + 1;
    let points = side.checked_pow(n as u32).unwrap_or(u128::MAX);
    if points > candidate_budget as u128 {
        return Err(EnumError::BudgetExceeded {
            what: "box points",
            limit: candidate_budget,
        });
    }
    let mut x = vec![-q.radius; n];
    let mut out = Vec::new();
    loop {
        let c = DivClass::new(x.clone());
        if q.predicate.matches(lat, &c) {
            out.push(c);
        }
        // odometer, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] < q.radius {
                x[i] += 1;
                break;
            }
            x[i] = -q.radius;
        }
    }
}

/// The numbers behind a certified radius.
///
/// Every match `x` satisfies `xᵀ M x <= C` with `M` positive definite, hence
/// `x_i^2 <= C (M^{-1})_ii` by Cauchy–Schwarz in the inner product `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusCertificate {
    /// `M = 2 w wᵀ - r G`, `w = G R`, `r = R^2`.
    pub matrix: Vec<Vec<String>>,
    /// `C = 2 T^2 - r s`.
    pub bound: String,
    /// `(M^{-1})_ii`, exact.
    pub inverse_diagonal: Vec<String>,
    /// `floor(sqrt(C (M^{-1})_ii))`, or 0 when `C < 0`.
    pub coordinate_bounds: Vec<String>,
}

/// Sup-norm radius containing every solution of `q`, at least 1.
pub fn certified_radius(
    lat: &GramLattice,
    q: &EnumQuery,
) -> Result<(i64, RadiusCertificate), EnumError> {
    let ell = QueryEllipsoid::for_query(lat, q)?;
    let inv_diag = inverse_diagonal(&ell.matrix);
    let bound = BigRational::from_integer(ell.bound.clone());
    let coord: Vec<BigInt> = inv_diag
        .iter()
        .map(|d| {
            if bound.is_negative() {
                BigInt::zero()
            } else {
                floor_sqrt(&(&bound * d))
            }
        })
        .collect();
    let max = coord.iter().max().cloned().unwrap_or_default();
    let radius = i64::try_from(max)
        .map_err(|_| EnumError::UnboundedQuery("certified radius overflows i64"))?
        .max(1);
    let cert = RadiusCertificate {
        matrix: ell
            .matrix
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect(),
        bound: ell.bound.to_string(),
        inverse_diagonal: inv_diag.iter().map(|v| v.to_string()).collect(),
        coordinate_bounds: coord.iter().map(|v| v.to_string()).collect(),
    };
    Ok((radius, cert))
}

/// Diagonal of the inverse of a nonsingular integer matrix, by Gauss–Jordan.
fn inverse_diagonal(m: &[Vec<BigInt>]) -> Vec<BigRational> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect();
            r.extend((0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("query form is nonsingular");
        a.swap(col, p);
        let pivot = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &pivot;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..2 * n {
                    let delta = &f * &a[col][j];
                    a[r][j] -= delta;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n + i].clone()).collect()
}

/// Box search at the certified radius.
pub fn certified_box_classes(
    lat: &GramLattice,
    q: &EnumQuery,
    candidate_budget: u64,
) -> Result<Vec<DivClass>, EnumError> {
    let (radius, _) = certified_radius(lat, q)?;
    box_classes(
        lat,
        &BoxQuery {
            radius,
            predicate: q.clone(),
        },
        candidate_budget,
    )
}

/// Clifford index and its witnesses `N` by exhaustion.
///
/// Scans the certified box for `0 <= N.L <= L^2`, `N^2 >= 0`, keeps `N` with
/// `h^0(N), h^0(L-N) >= 2`, positive degree on both sides, and reports each
/// unordered pair once by `N.L <= (L-N).L`, ties broken by `N <= L-N`.
/// Witnesses are empty when the generic value `floor((g-1)/2)` is attained.
pub fn clifford_oracle(datum: &PolarizedDatum) -> Result<(i64, Vec<DivClass>), EnumError> {
    let l = datum.polarization();
    let l2 = datum.square(l);
    let generic = (datum.genus() - 1).div_euclid(2);
    let q = EnumQuery::new(l.clone(), IntRange::between(0, l2), IntRange::at_least(0));
    let mut best: Option<i64> = None;
    let mut witnesses: Vec<DivClass> = Vec::new();
    for n in certified_box_classes(datum.lattice(), &q, datum.budget().candidates)? {
        let m = l - &n;
        let (nl, ml) = (datum.pair(&n, l), datum.pair(&m, l));
        if nl > ml || (nl == ml && n > m) {
            continue;
        }
        if datum.degree(&n) <= 0 || datum.degree(&m) <= 0 {
            continue;
        }
        let value = datum.pair(&n, &m) - 2;
        if value >= generic || best.is_some_and(|b| value > b) {
            continue;
        }
        if datum.h0(&n)? < 2 || datum.h0(&m)? < 2 {
            continue;
        }
        if best != Some(value) {
            best = Some(value);
            witnesses.clear();
        }
        witnesses.push(n);
    }
    witnesses.sort();
    Ok(match best {
        Some(b) => (b, witnesses),
        None => (generic, Vec::new()),
    })
}

/// Limits for [`random_datum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomDatumSpec {
    pub min_rank: usize,
    pub max_rank: usize,
    pub max_entry: i64,
    pub max_l_square: i64,
    pub coord_range: i64,
}

impl Default for RandomDatumSpec {
    fn default() -> Self {
        RandomDatumSpec {
            min_rank: 2,
            max_rank: 3,
            max_entry: 8,
            max_l_square: 60,
            coord_range: 4,
        }
    }
}

/// A random even lattice of signature `(1, rank-1)` with entries in
/// `[-max_entry, max_entry]`, by rejection.
pub fn random_lattice<R: Rng>(rng: &mut R, spec: &RandomDatumSpec) -> GramLattice {
    loop {
        let n = rng.gen_range(spec.min_rank..=spec.max_rank);
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            let half = spec.max_entry / 2;
            g[i][i] = 2 * rng.gen_range(-half..=half);
            for j in i + 1..n {
                let v = rng.gen_range(-spec.max_entry..=spec.max_entry);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        if let Ok(lat) = GramLattice::new(g) {
            return lat;
        }
    }
}

fn random_class<R: Rng>(rng: &mut R, n: usize, range: i64) -> DivClass {
    DivClass::new((0..n).map(|_| rng.gen_range(-range..=range)).collect())
}

/// A random datum accepted by [`PolarizedDatum::validate`]: random lattice,
/// random ample class with no orthogonal root, random nef and base point
/// free `L` with `0 < L^2 <= max_l_square`.
pub fn random_datum<R: Rng>(rng: &mut R, spec: &RandomDatumSpec, budget: Budget) -> PolarizedDatum {
    'lattice: loop {
        let lat = random_lattice(rng, spec);
        let n = lat.rank();
        for _ in 0..50 {
            let a = random_class(rng, n, spec.coord_range);
            if lat.sq(&a) <= 0 {
                continue;
            }
            for _ in 0..200 {
                let l = random_class(rng, n, spec.coord_range);
                let l2 = lat.sq(&l);
                if l2 <= 0 || l2 > spec.max_l_square || lat.ip(&l, &a) <= 0 {
                    continue;
                }
                match PolarizedDatum::validate(lat.clone(), a.clone(), l, budget) {
                    Ok(d) => return d,
                    Err(crate::linear_system::DatumError::RootOrthogonalToAmple(_)) => break,
                    Err(_) => continue,
                }
            }
        }
        continue 'lattice;
    }
}

/// `count` data from a ChaCha8 stream seeded with `seed`.
pub fn seeded_data(
    seed: u64,
    count: usize,
    spec: &RandomDatumSpec,
    budget: Budget,
) -> Vec<PolarizedDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_datum(&mut rng, spec, budget))
        .collect()
}

/// Two queries, against `A` and against `L`, derived from `seed`.
pub fn seeded_queries(datum: &PolarizedDatum, seed: u64) -> Vec<EnumQuery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        random_query(&mut rng, datum.lattice(), datum.ample()),
        random_query(&mut rng, datum.lattice(), datum.polarization()),
    ]
}

/// A random query against `reference` with small ranges.
pub fn random_query<R: Rng>(rng: &mut R, lat: &GramLattice, reference: &DivClass) -> EnumQuery {
    let lo = rng.gen_range(-6..=6);
    let hi = lo + rng.gen_range(0..=6);
    let s = rng.gen_range(-4..=2);
    let t = s + rng.gen_range(0..=4);
    let q = EnumQuery::new(
        reference.clone(),
        IntRange::between(lo, hi),
        IntRange::between(s, t),
    );
    debug_assert!(lat.sq(reference) > 0);
    if rng.gen_bool(0.2) {
        q.primitive()
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::clifford_index;
    use crate::enumeration::{classes_matching, DEFAULT_CANDIDATE_BUDGET};

    fn c(v: &[i64]) -> DivClass {
        DivClass::new(v.to_vec())
    }

    fn lat(g: Vec<Vec<i64>>) -> GramLattice {
        GramLattice::new(g).unwrap()
    }

    const B: u64 = DEFAULT_CANDIDATE_BUDGET;

    #[test]
    fn box_finds_orthogonal_roots() {
        let q = BoxQuery {
            radius: 3,
            predicate: EnumQuery::new(c(&[2, 1]), IntRange::exact(0), IntRange::exact(-2)),
        };
        let got = box_classes(&lat(vec![vec![2, 1], vec![1, -2]]), &q, B).unwrap();
        assert_eq!(got, vec![c(&[0, -1]), c(&[0, 1])]);
    }

    #[test]
    fn radius_zero_box_is_origin_or_empty() {
        let l = lat(vec![vec![2, 1], vec![1, -2]]);
        let hit = BoxQuery {
            radius: 0,
            predicate: EnumQuery::new(c(&[1, 0]), IntRange::exact(0), IntRange::exact(0)),
        };
        assert_eq!(box_classes(&l, &hit, B).unwrap(), vec![c(&[0, 0])]);
        let miss = BoxQuery {
            radius: 0,
            predicate: EnumQuery::new(c(&[1, 0]), IntRange::exact(0), IntRange::exact(-2)),
        };
        assert!(box_classes(&l, &miss, B).unwrap().is_empty());
    }

    #[test]
    fn rank_one_box() {
        let q = BoxQuery {
            radius: 5,
            predicate: EnumQuery::new(c(&[1]), IntRange::between(-100, 100), IntRange::exact(2)),
        };
        assert_eq!(
            box_classes(&lat(vec![vec![2]]), &q, B).unwrap(),
            vec![c(&[-1]), c(&[1])]
        );
    }

    #[test]
    fn box_respects_budget() {
        let q = BoxQuery {
            radius: 10,
            predicate: EnumQuery::new(c(&[1, 0]), IntRange::exact(0), IntRange::exact(0)),
        };
        let err = box_classes(&lat(vec![vec![2, 1], vec![1, -2]]), &q, 100).unwrap_err();
        assert!(matches!(err, EnumError::BudgetExceeded { .. }));
    }

    #[test]
    fn certified_radius_elms_roots() {
        let l = lat(vec![vec![2, 1], vec![1, -2]]);
        let q = EnumQuery::new(c(&[2, 1]), IntRange::exact(0), IntRange::exact(-2));
        let (r, cert) = certified_radius(&l, &q).unwrap();
        assert!(r >= 1);
        assert_eq!(cert.coordinate_bounds.len(), 2);
        assert_eq!(
            certified_box_classes(&l, &q, B).unwrap(),
            vec![c(&[0, -1]), c(&[0, 1])]
        );
    }

    #[test]
    fn certified_radius_trivial_query() {
        let l = lat(vec![vec![2, 1], vec![1, -2]]);
        let q = EnumQuery::new(c(&[1, 0]), IntRange::exact(0), IntRange::exact(0));
        let (r, _) = certified_radius(&l, &q).unwrap();
        assert!(r >= 1);
        assert_eq!(certified_box_classes(&l, &q, B).unwrap(), vec![c(&[0, 0])]);
    }

    #[test]
    fn certified_radius_confirms_empty_b_search_n2() {
        // D^2 = 4: degree in [1, 7] against D, square in [0, 3].
        let l = lat(vec![vec![4, 1], vec![1, -2]]);
        let q = EnumQuery::new(c(&[1, 0]), IntRange::between(1, 7), IntRange::between(0, 3));
        let lv = c(&[2, 1]);
        let hits: Vec<_> = certified_box_classes(&l, &q, B)
            .unwrap()
            .into_iter()
            .filter(|b| {
                let k = l.pair(b, &lv).unwrap() - l.pair(b, b).unwrap();
                0 < k && k <= 4
            })
            .collect();
        assert!(hits.is_empty());
    }

    #[test]
    fn certified_radius_rejects_unbounded() {
        let l = lat(vec![vec![2]]);
        let q = EnumQuery::new(c(&[1]), IntRange::at_least(0), IntRange::exact(2));
        assert!(matches!(
            certified_radius(&l, &q),
            Err(EnumError::UnboundedQuery(_))
        ));
    }

    #[test]
    fn radius_is_monotone_in_ranges() {
        let l = lat(vec![vec![2, 3], vec![3, -2]]);
        let small = EnumQuery::new(
            c(&[1, 0]),
            IntRange::between(0, 3),
            IntRange::between(-2, 0),
        );
        let big = EnumQuery::new(
            c(&[1, 0]),
            IntRange::between(-5, 3),
            IntRange::between(-6, 4),
        );
        assert!(certified_radius(&l, &small).unwrap().0 <= certified_radius(&l, &big).unwrap().0);
    }

    fn datum(g: Vec<Vec<i64>>, a: &[i64], l: &[i64]) -> PolarizedDatum {
        PolarizedDatum::validate(lat(g), c(a), c(l), Budget::default()).unwrap()
    }

    #[test]
    fn oracle_dm() {
        let d = datum(vec![vec![2]], &[1], &[3]);
        assert_eq!(clifford_oracle(&d).unwrap(), (2, vec![c(&[1])]));
    }

    #[test]
    fn oracle_elms_n2() {
        let d = datum(vec![vec![4, 1], vec![1, -2]], &[1, 0], &[2, 1]);
        assert_eq!(clifford_oracle(&d).unwrap(), (3, vec![c(&[1, 0])]));
    }

    #[test]
    fn oracle_rank_one_hyperelliptic() {
        let d = datum(vec![vec![2]], &[1], &[2]);
        assert_eq!(clifford_oracle(&d).unwrap(), (0, vec![c(&[1])]));
    }

    #[test]
    fn random_data_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = RandomDatumSpec::default();
        for _ in 0..20 {
            let d = random_datum(&mut rng, &spec, Budget::default());
            let ci = clifford_index(&d).unwrap();
            let (c0, w) = clifford_oracle(&d).unwrap();
            assert_eq!((ci.c, ci.witnesses), (c0, w), "{:?}", d);
            let q = random_query(&mut rng, d.lattice(), d.ample());
            assert_eq!(
                classes_matching(&q, d.lattice(), B).unwrap(),
                certified_box_classes(d.lattice(), &q, B).unwrap()
            );
        }
    }
}
