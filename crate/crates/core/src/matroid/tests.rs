use super::*;

fn k3() -> MatroidHandle {
    MatroidHandle::graphic(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
}

fn k4() -> MatroidHandle {
    MatroidHandle::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

fn triangle_bridge() -> MatroidHandle {
    MatroidHandle::graphic(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap()
}

fn all_subsets(n: usize) -> impl Iterator<Item = SubsetMask> {
    (0..1u64 << n).map(move |b| SubsetMask::from_bits(n, b))
}

fn same_rank(a: &MatroidHandle, b: &MatroidHandle) -> bool {
    a.len() == b.len() && all_subsets(a.len()).all(|x| a.rank(&x) == b.rank(&x))
}

#[test]
fn rank_examples() {
    assert_eq!(k3().rank(&SubsetMask::full(3)), 2);
    let u = MatroidHandle::uniform(4, 2).unwrap();
    assert_eq!(u.rank(&SubsetMask::from_indices(4, [0, 1, 3])), 2);
    assert_eq!(k3().dual().rank(&SubsetMask::full(3)), 1);
}

#[test]
fn closure_examples() {
    let m = k3();
    assert_eq!(closure(&m, &SubsetMask::from_indices(3, [0, 1])).count(), 3);
    let tb = triangle_bridge();
    assert_eq!(closure(&tb, &SubsetMask::from_indices(4, [0, 1])).to_vec(), vec![0, 1, 2]);
    assert!(closure(&tb, &tb.full()).is_full());
}

#[test]
fn minor_examples() {
    let tb = triangle_bridge();
    let same = tb.minor(&tb.empty_set(), &tb.empty_set()).unwrap();
    assert!(same_rank(&same, &tb));
    let c = tb.contract(&SubsetMask::from_indices(4, [3])).unwrap();
    assert!(same_rank(&c, &k3()));
    assert_eq!(c.ground().labels(), &["e1", "e2", "e3"]);
    let bad = tb.minor(&SubsetMask::from_indices(4, [0]), &SubsetMask::from_indices(4, [0]));
    assert!(matches!(bad, Err(Error::Input(_))));
    let looped = k3().contract(&SubsetMask::from_indices(3, [0, 1]));
    assert!(matches!(looped, Err(Error::Domain(_))));
}

#[test]
fn generic_minor_matches_graphic_minor() {
    let g = k4();
    let generic = g.with_cache(1024);
    let del = SubsetMask::from_indices(6, [5]);
    let con = SubsetMask::from_indices(6, [0]);
    let a = g.minor(&del, &con).unwrap();
    let b = generic.minor(&del, &con).unwrap();
    assert_eq!(a.kind(), KindTag::Graphic);
    assert_eq!(b.kind(), KindTag::Minor);
    assert!(same_rank(&a, &b));
}

#[test]
fn dual_examples() {
    let u = MatroidHandle::uniform(4, 1).unwrap();
    assert!(same_rank(&u.dual(), &MatroidHandle::uniform(4, 3).unwrap()));
    let d = k3().dual();
    let bases = enumerate_bases(&d, 10).unwrap();
    assert_eq!(bases.len(), 3);
    assert!(bases.iter().all(|b| b.count() == 1));
    let tb = triangle_bridge();
    assert_eq!(tb.dual().loops().to_vec(), vec![3]);
    assert!(tb.dual().ensure_loopless().is_err());
}

#[test]
fn truncation_examples() {
    assert!(same_rank(&k4().truncation(3).unwrap(), &k4()));
    assert!(same_rank(&k3().truncation(1).unwrap(), &MatroidHandle::uniform(3, 1).unwrap()));
    let free = k3().truncation(3).unwrap();
    assert!(all_subsets(3).all(|x| free.rank(&x) == x.count()));
    assert!(k3().truncation(0).is_err());
    assert!(k3().truncation(4).is_err());
}

#[test]
fn dual_truncation_formula_matches_composition() {
    for m in [k4(), triangle_bridge()] {
        let n = m.len();
        for t in m.full_rank() + 1..n {
            let direct = m.truncation(t).unwrap();
            assert_eq!(direct.kind(), KindTag::DualTruncation);
            let composed = m.dual().truncation(n - t).unwrap().dual();
            assert!(same_rank(&direct, &composed), "t = {t}");
        }
    }
}

#[test]
fn direct_sum_examples() {
    let a = MatroidHandle::uniform(2, 1).unwrap().prefixed("a").unwrap();
    let b = MatroidHandle::uniform(2, 1).unwrap().prefixed("b").unwrap();
    let s = MatroidHandle::direct_sum(&[a.clone(), b]).unwrap();
    assert_eq!(s.full_rank(), 2);
    assert_eq!(enumerate_bases(&s, 10).unwrap().len(), 4);
    assert!(same_rank(&MatroidHandle::direct_sum(&[a.clone()]).unwrap(), &a));
    assert!(matches!(MatroidHandle::direct_sum(&[a.clone(), a]), Err(Error::Input(_))));
    let comps = components(&s);
    assert_eq!(comps.len(), 2);
    assert_eq!(s.ground().names(&comps[0]), vec!["ae1", "ae2"]);
}

#[test]
fn enumeration_counts() {
    assert_eq!(enumerate_bases(&k3(), 100).unwrap().len(), 3);
    assert_eq!(enumerate_bases(&MatroidHandle::uniform(4, 2).unwrap(), 100).unwrap().len(), 6);
    assert_eq!(enumerate_bases(&k4(), 100).unwrap().len(), 16);
    match enumerate_bases(&k4(), 5) {
        Err(Error::Capacity { count, .. }) => assert_eq!(count, 5),
        other => panic!("{other:?}"),
    }
}

#[test]
fn components_examples() {
    assert_eq!(components(&k4()).len(), 1);
    let tb = triangle_bridge();
    let c = components(&tb);
    assert_eq!(c.len(), 2);
    assert_eq!(c[1].to_vec(), vec![3]);
}

#[test]
fn explicit_checks_exchange_axiom() {
    let g = GroundSet::numbered("x", 4).unwrap();
    assert!(MatroidHandle::explicit_from_labels(g.clone(), &[vec!["x1", "x2"], vec!["x3", "x4"]]).is_err());
    let m = MatroidHandle::explicit_from_labels(
        g,
        &[vec!["x1", "x2"], vec!["x1", "x3"], vec!["x2", "x3"], vec!["x1", "x4"], vec!["x2", "x4"], vec!["x3", "x4"]],
    )
    .unwrap();
    assert!(same_rank(&m, &MatroidHandle::uniform(4, 2).unwrap()));
}

#[test]
fn truncation_exchange_matches_generic() {
    let t = k4().truncation(2).unwrap();
    let i = SubsetMask::from_indices(6, [0, 5]);
    let fast = t.exchange(&i);
    let slow = Exchange::Generic { m: &t, set: i.clone(), size: 2 };
    for x in [1, 2, 3, 4] {
        let mut a = fast.circuit(x);
        let mut b = slow.circuit(x);
        a.as_mut().map(|v| v.sort());
        b.as_mut().map(|v| v.sort());
        assert_eq!(a, b);
    }
}
