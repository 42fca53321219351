use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use k3gon::classifier::{classify, clifford_index, CaseTag, ExceptionalMembers};
use k3gon::decomposition::incidence_dimension_report;
use k3gon::enumeration::{classes_matching, Budget, EnumQuery, IntRange, DEFAULT_CANDIDATE_BUDGET};
use k3gon::lattice::{gamma_candidate, DivClass, GramLattice, Unimodular};
use k3gon::linear_system::PolarizedDatum;
use k3gon::oracle::{
    certified_box_classes, certified_radius, clifford_oracle, random_datum, random_lattice,
    seeded_queries, RandomDatumSpec,
};

const B: u64 = DEFAULT_CANDIDATE_BUDGET;

fn datum_from_seed(seed: u64) -> PolarizedDatum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_datum(&mut rng, &RandomDatumSpec::default(), Budget::default())
}

fn lattice_from_seed(seed: u64) -> GramLattice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_lattice(&mut rng, &RandomDatumSpec::default())
}

fn vector(n: usize) -> impl Strategy<Value = DivClass> {
    prop::collection::vec(-6i64..=6, n).prop_map(DivClass::new)
}

/// Unordered pairs `{N, L - N}` in the original basis.
fn pairs(
    l: &DivClass,
    ws: &[DivClass],
    to_old: impl Fn(&DivClass) -> DivClass,
) -> BTreeSet<(DivClass, DivClass)> {
    ws.iter()
        .map(|w| {
            let n = to_old(w);
            let m = l - &n;
            if n <= m {
                (n, m)
            } else {
                (m, n)
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_symmetric_and_bilinear(
        seed in any::<u64>(),
        x in vector(3), y in vector(3), z in vector(3), a in -5i64..=5,
    ) {
        let lat = lattice_from_seed(seed);
        let n = lat.rank();
        let cut = |v: &DivClass| DivClass::new(v.coords()[..n].to_vec());
        let (x, y, z) = (cut(&x), cut(&y), cut(&z));
        let p = |u: &DivClass, v: &DivClass| lat.pair(u, v).unwrap();
        prop_assert_eq!(p(&x, &y), p(&y, &x));
        prop_assert_eq!(p(&(&x.scale(a) + &y), &z), a * p(&x, &z) + p(&y, &z));
        prop_assert_eq!(p(&x, &x) % 2, 0);
    }

    #[test]
    fn hodge_index_inequality(seed in any::<u64>(), x in vector(3), y in vector(3)) {
        let lat = lattice_from_seed(seed);
        let n = lat.rank();
        let x = DivClass::new(x.coords()[..n].to_vec());
        let y = DivClass::new(y.coords()[..n].to_vec());
        let x2 = lat.pair(&x, &x).unwrap();
        prop_assume!(x2 > 0);
        let xy = lat.pair(&x, &y).unwrap();
        prop_assert!(xy * xy >= x2 * lat.pair(&y, &y).unwrap());
    }

    #[test]
    fn genus_is_basis_independent(seed in any::<u64>(), steps in 1usize..12) {
        let d = datum_from_seed(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let u = Unimodular::random(d.rank(), steps, &mut rng);
        let t = d.transformed(&u);
        prop_assert_eq!(t.genus(), d.genus());
        prop_assert_eq!(u.to_old(t.polarization()), d.polarization().clone());
    }

    #[test]
    fn gamma_candidate_is_orthogonal_to_l(
        seed in any::<u64>(), n in vector(3), l in vector(3),
    ) {
        let lat = lattice_from_seed(seed);
        let r = lat.rank();
        let n = DivClass::new(n.coords()[..r].to_vec());
        let l = DivClass::new(l.coords()[..r].to_vec());
        let l2 = lat.pair(&l, &l).unwrap();
        prop_assume!(l2 > 0);
        let d = lat.pair(&n, &l).unwrap() - lat.pair(&n, &n).unwrap();
        let g = gamma_candidate(&n, &l, d, &lat).unwrap();
        prop_assert!(g.degree_l.is_zero());
    }

    #[test]
    fn symmetric_queries_give_symmetric_sets(
        seed in any::<u64>(), t in 0i64..8, s in -6i64..=2, w in 0i64..4,
    ) {
        let d = datum_from_seed(seed);
        let q = EnumQuery::new(d.ample().clone(), IntRange::between(-t, t), IntRange::between(s, s + w));
        let found = classes_matching(&q, d.lattice(), B).unwrap();
        let set: BTreeSet<_> = found.iter().cloned().collect();
        for x in &found {
            prop_assert!(set.contains(&-x));
        }
    }

    #[test]
    fn enumeration_matches_box_search(seed in any::<u64>(), qseed in any::<u64>()) {
        let d = datum_from_seed(seed);
        for q in seeded_queries(&d, qseed) {
            prop_assert_eq!(
                classes_matching(&q, d.lattice(), B).unwrap(),
                certified_box_classes(d.lattice(), &q, B).unwrap()
            );
        }
    }

    #[test]
    fn clifford_index_matches_oracle(seed in any::<u64>()) {
        let d = datum_from_seed(seed);
        let ci = clifford_index(&d).unwrap();
        let (c, w) = clifford_oracle(&d).unwrap();
        prop_assert_eq!(ci.c, c);
        prop_assert_eq!(ci.witnesses, w);
    }

    #[test]
    fn certified_radius_is_monotone(seed in any::<u64>(), lo in -4i64..4, w in 0i64..4, s in -4i64..2, grow in 1i64..4) {
        let d = datum_from_seed(seed);
        let a = d.ample().clone();
        let small = EnumQuery::new(a.clone(), IntRange::between(lo, lo + w), IntRange::between(s, s + 2));
        let big = EnumQuery::new(a, IntRange::between(lo - grow, lo + w + grow), IntRange::between(s - grow, s + 2));
        prop_assert!(certified_radius(d.lattice(), &small).unwrap().0 <= certified_radius(d.lattice(), &big).unwrap().0);
    }

    #[test]
    fn h0_satisfies_riemann_roch(seed in any::<u64>(), x in vector(3)) {
        let d = datum_from_seed(seed);
        let x = DivClass::new(x.coords()[..d.rank()].to_vec());
        let x2 = d.square(&x);
        prop_assume!(x2 >= -2 && d.degree(&x) > 0);
        prop_assert!(d.h0(&x).unwrap() >= x2 / 2 + 2);
    }

    #[test]
    fn classification_invariants(seed in any::<u64>()) {
        let d = datum_from_seed(seed);
        let r = classify(&d).unwrap();
        let c = r.clifford_index;
        prop_assert!(c + 2 <= r.gonality_general && r.gonality_general <= c + 3);
        prop_assert!(c + 2 <= r.gonality_min && r.gonality_min <= r.gonality_general);
        prop_assert!(c <= (r.genus - 1).div_euclid(2));
        prop_assert!(c >= 0);
        prop_assert_eq!(!r.gonality_constant, r.case_tag == CaseTag::DonagiMorrison);
        if r.case_tag == CaseTag::GeneralizedELMS {
            prop_assert_eq!(r.gonality_general, c + 3);
            prop_assert_eq!(r.exceptional_members, ExceptionalMembers::AllMembers);
        }
    }

    #[test]
    fn classification_is_basis_independent(seed in any::<u64>(), steps in 1usize..10) {
        let d = datum_from_seed(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(17));
        let u = Unimodular::random(d.rank(), steps, &mut rng);
        let t = d.transformed(&u);
        let (r0, r1) = (classify(&d).unwrap(), classify(&t).unwrap());
        prop_assert_eq!(r0.genus, r1.genus);
        prop_assert_eq!(r0.clifford_index, r1.clifford_index);
        prop_assert_eq!(r0.gonality_general, r1.gonality_general);
        prop_assert_eq!(r0.gonality_min, r1.gonality_min);
        prop_assert_eq!(r0.case_tag, r1.case_tag);
        prop_assert_eq!(r0.clifford_dimension, r1.clifford_dimension);
        let l = d.polarization();
        prop_assert_eq!(
            pairs(l, &r0.clifford_witnesses, |w| w.clone()),
            pairs(l, &r1.clifford_witnesses, |w| u.to_old(w))
        );
    }

    #[test]
    fn incidence_dimensions_add_up(seed in any::<u64>(), x in vector(3), d in 1i64..30) {
        let dat = datum_from_seed(seed);
        let n = DivClass::new(x.coords()[..dat.rank()].to_vec());
        let rep = incidence_dimension_report(&dat, &n, d);
        prop_assert_eq!(rep.dim_pairs, d);
        prop_assert_eq!(rep.dim_l_through_z, rep.dim_l - d + 1);
        prop_assert_eq!(rep.dim_incidence, rep.genus + 1);
    }
}
