use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::gen;
use crate::matroid::{is_base, MatroidHandle};
use crate::rational::{frac, int};
use crate::weights::WeightVector;

fn k3() -> MatroidHandle {
    MatroidHandle::graphic(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
}

fn k4() -> MatroidHandle {
    MatroidHandle::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

fn triangle_bridge() -> MatroidHandle {
    MatroidHandle::graphic(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap()
}

fn subsets(n: usize) -> impl Iterator<Item = SubsetMask> {
    (1..1u64 << n).map(move |b| SubsetMask::from_bits(n, b))
}

/// Brute-force `max σ(X)/r(X)` with the union of all optimizers.
fn brute_arboricity(m: &MatroidHandle, s: &WeightVector) -> (Rational, SubsetMask) {
    let mut best = Rational::zero();
    let mut set = m.empty_set();
    for x in subsets(m.len()) {
        let v = s.sum(&x) / int(m.rank(&x) as i64);
        if v > best {
            best = v;
            set = x;
        } else if v == best {
            set = set.union(&x);
        }
    }
    (best, set)
}

fn brute_strength(m: &MatroidHandle, s: &WeightVector) -> (Rational, SubsetMask) {
    let r = m.full_rank();
    let mut best: Option<Rational> = None;
    let mut set = m.empty_set();
    for x in subsets(m.len()) {
        let drop = r - m.rank(&x.complement());
        if drop == 0 {
            continue;
        }
        let v = s.sum(&x) / int(drop as i64);
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => set = set.union(&x),
            _ => {
                best = Some(v);
                set = x;
            }
        }
    }
    (best.unwrap(), set)
}

#[test]
fn sfm_examples() {
    let card = FnSet { n: 5, f: |x: &SubsetMask| int(x.count() as i64) };
    let r = sfm_minimize(&card).unwrap();
    assert!(r.minimizer.is_empty());
    assert!(r.value.is_zero());

    let m = k3();
    let f = FnSet { n: 3, f: |x: &SubsetMask| int(m.rank(x) as i64 - x.count() as i64) };
    let r = sfm_minimize(&f).unwrap();
    assert_eq!(r.value, int(-1));
    assert!(r.maximal_minimizer.is_full());

    let tb = triangle_bridge();
    let f = FnSet { n: 4, f: |x: &SubsetMask| int(2 * tb.rank(x) as i64 - x.count() as i64) };
    let r = sfm_minimize(&f).unwrap();
    let brute = subsets(4).map(|x| f.eval(&x)).min().unwrap();
    assert_eq!(r.value, brute.min(Rational::zero()));
    assert!(r.minimizer.is_empty());
    assert!(r.maximal_minimizer.is_empty());
}

#[test]
fn exhaustive_only_rejects_large_ground() {
    let f = FnSet { n: 30, f: |x: &SubsetMask| int(x.count() as i64) };
    let cfg = SfmConfig { exhaustive_limit: 22, strategy: SfmStrategy::ExhaustiveOnly };
    assert!(matches!(sfm_minimize_with(&f, &cfg), Err(Error::Capacity { .. })));
}

#[test]
fn min_norm_matches_exhaustive() {
    let mut rng = gen::rng(11);
    for _ in 0..20 {
        let m = gen::random_matroid(&mut rng, 10, 5000);
        let s = gen::random_weights(&mut rng, m.len(), 5, 3);
        let lambda = frac(3, 2);
        let f = FnSet { n: m.len(), f: |x: &SubsetMask| &lambda * int(m.rank(x) as i64) - s.sum(x) };
        let exact = sfm_minimize(&f).unwrap();
        let approx = min_norm(&f);
        assert_eq!(exact.value, approx.value);
    }
}

#[test]
fn arboricity_examples() {
    let ones = |n| WeightVector::ones(n);
    assert_eq!(fractional_arboricity(&k4(), &ones(6)).unwrap(), (int(2), SubsetMask::full(6)));
    let (d, core) = fractional_arboricity(&triangle_bridge(), &ones(4)).unwrap();
    assert_eq!(d, frac(3, 2));
    assert_eq!(core.to_vec(), vec![0, 1, 2]);
    let s = WeightVector::from_ints(&[1, 1, 2]).unwrap();
    assert_eq!(fractional_arboricity(&k3(), &s).unwrap(), (int(2), SubsetMask::full(3)));
}

#[test]
fn strength_examples() {
    assert_eq!(strength(&k4(), &WeightVector::ones(6)).unwrap(), (int(2), SubsetMask::full(6)));
    let tb = triangle_bridge();
    let (s, set) = strength(&tb, &WeightVector::ones(4)).unwrap();
    assert_eq!(s, int(1));
    assert_eq!((s, set), brute_strength(&tb, &WeightVector::ones(4)));
    let w = WeightVector::from_ints(&[1, 1, 2]).unwrap();
    assert_eq!(strength(&k3(), &w).unwrap(), (int(2), SubsetMask::full(3)));
}

#[test]
fn density_report_rounds() {
    let r = density_report(&triangle_bridge(), &WeightVector::ones(4)).unwrap();
    assert_eq!(r.tau, 1.into());
    assert_eq!(r.cover_number, 2.into());
}

#[test]
fn packing_examples() {
    let m = k4();
    match base_packing(&m, 2).unwrap() {
        Packing::Bases(b) => {
            assert_eq!(b.len(), 2);
            assert!(b.iter().all(|x| is_base(&m, x)));
            assert_eq!(b[0].intersection_count(&b[1]), 0);
        }
        other => panic!("{other:?}"),
    }
    let tb = triangle_bridge();
    match base_packing(&tb, 2).unwrap() {
        Packing::Deficient(x) => {
            assert!(x.complement().count() < 2 * (tb.full_rank() - tb.rank(&x)));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(base_packing(&tb, 1).unwrap(), Packing::Bases(b) if b.len() == 1));
}

#[test]
fn covering_examples() {
    let m = k4();
    match base_covering(&m, 2).unwrap() {
        Covering::Bases(b) => {
            assert!(b.iter().all(|x| is_base(&m, x)));
            assert!(b[0].union(&b[1]).is_full());
        }
        other => panic!("{other:?}"),
    }
    match base_covering(&m, 1).unwrap() {
        Covering::Violating(x) => assert!(x.count() > m.rank(&x)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(base_covering(&triangle_bridge(), 2).unwrap(), Covering::Bases(_)));
}

#[test]
fn partition_path_matches_enumeration() {
    let mut rng = gen::rng(5);
    let forced = OracleConfig { exhaustive_limit: 0, ..OracleConfig::default() };
    for _ in 0..60 {
        let m = gen::random_matroid(&mut rng, 11, 5000);
        let s = gen::random_weights(&mut rng, m.len(), 6, 4);
        let exact = OracleConfig::default();
        assert_eq!(
            fractional_arboricity_with(&m, &s, &forced).unwrap(),
            fractional_arboricity_with(&m, &s, &exact).unwrap()
        );
        assert_eq!(strength_with(&m, &s, &forced).unwrap(), strength_with(&m, &s, &exact).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn densities_match_brute_force(seed in any::<u64>(), weighted in any::<bool>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_matroid(&mut rng, 10, 5000);
        let s = if weighted { gen::random_weights(&mut rng, m.len(), 7, 5) } else { WeightVector::ones(m.len()) };
        let forced = OracleConfig { exhaustive_limit: 0, ..OracleConfig::default() };
        prop_assert_eq!(fractional_arboricity_with(&m, &s, &forced).unwrap(), brute_arboricity(&m, &s));
        prop_assert_eq!(strength_with(&m, &s, &forced).unwrap(), brute_strength(&m, &s));
    }

    #[test]
    fn packing_and_covering_follow_rounded_densities(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = gen::rng(seed);
        let m = gen::random_matroid(&mut rng, 10, 5000);
        let r = density_report(&m, &WeightVector::ones(m.len())).unwrap();
        let packs = matches!(base_packing(&m, k).unwrap(), Packing::Bases(_));
        let covers = matches!(base_covering(&m, k).unwrap(), Covering::Bases(_));
        prop_assert_eq!(packs, r.tau >= k.into());
        prop_assert_eq!(covers, r.cover_number <= k.into());
        prop_assert!(r.strength <= r.arboricity);
    }

    #[test]
    fn contraction_and_deletion_monotone(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_matroid(&mut rng, 9, 5000);
        let s = gen::random_weights(&mut rng, m.len(), 4, 3);
        let n = m.len();
        let h = SubsetMask::from_indices(n, (0..n).filter(|_| rand::Rng::gen_bool(&mut rng, 0.3)));
        prop_assume!(!h.is_full() && !h.is_empty());
        let keep: Vec<usize> = h.complement().to_vec();
        let sk = s.restrict(&keep);
        let (Ok(del), Ok(con)) = (m.delete(&h), m.contract(&h)) else { return Ok(()); };
        let (sd, _) = strength(&del, &sk).unwrap();
        let (sc, _) = strength(&con, &sk).unwrap();
        let (dd, _) = fractional_arboricity(&del, &sk).unwrap();
        let (dc, _) = fractional_arboricity(&con, &sk).unwrap();
        let (s0, _) = strength(&m, &s).unwrap();
        let (d0, _) = fractional_arboricity(&m, &s).unwrap();
        prop_assert!(sd <= sc);
        prop_assert!(dd <= dc);
        prop_assert!(d0 >= dd);
        prop_assert!(s0 <= sc);
    }
}
