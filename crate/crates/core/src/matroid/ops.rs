use super::graphic::UnionFind;
use super::{Kind, MatroidHandle};
use crate::error::{Error, Result};
use crate::subset::SubsetMask;

pub fn is_independent(m: &MatroidHandle, x: &SubsetMask) -> bool {
    m.rank(x) == x.count()
}

pub fn is_base(m: &MatroidHandle, x: &SubsetMask) -> bool {
    x.count() == m.full_rank() && is_independent(m, x)
}

/// `{e : r(X + e) = r(X)}`.
pub fn closure(m: &MatroidHandle, x: &SubsetMask) -> SubsetMask {
    let rx = m.rank(x);
    let mut out = x.clone();
    for e in 0..m.len() {
        if !x.contains(e) && m.rank(&x.with(e)) == rx {
            out.insert(e);
        }
    }
    out
}

/// Scan `order` and keep every element that stays independent.
pub fn greedy_base(m: &MatroidHandle, order: &[usize]) -> SubsetMask {
    let n = m.len();
    let target = m.full_rank();
    let mut b = SubsetMask::empty(n);
    let mut size = 0;
    match m.kind_ref() {
        Kind::Graphic(g) => {
            let mut uf = UnionFind::new(g.vertices());
            for &e in order {
                let (u, v) = g.ends()[e];
                if uf.union(u, v) {
                    b.insert(e);
                    size += 1;
                    if size == target {
                        break;
                    }
                }
            }
        }
        Kind::Truncation { inner, t } => {
            let full = greedy_base(inner, order);
            for &e in order {
                if size == *t {
                    break;
                }
                if full.contains(e) {
                    b.insert(e);
                    size += 1;
                }
            }
        }
        _ => {
            for &e in order {
                if size == target {
                    break;
                }
                let with = b.with(e);
                if m.rank(&with) > size {
                    b = with;
                    size += 1;
                }
            }
        }
    }
    b
}

/// The unique circuit in `b + e` for `e` outside the base `b`.
pub fn fundamental_circuit(m: &MatroidHandle, b: &SubsetMask, e: usize) -> Option<SubsetMask> {
    if b.contains(e) {
        return None;
    }
    let c = m.exchange(b).circuit(e)?;
    Some(SubsetMask::from_indices(m.len(), c.into_iter().chain([e])))
}

/// All bases in lexicographic order, or a capacity error past `limit`.
pub fn enumerate_bases(m: &MatroidHandle, limit: usize) -> Result<Vec<SubsetMask>> {
    let n = m.len();
    let r = m.full_rank();
    let mut out = Vec::new();
    let mut cur = SubsetMask::empty(n);
    // suffix[i] = {i, ..., n-1}
    let suffix: Vec<SubsetMask> = (0..=n).map(|i| SubsetMask::from_indices(n, i..n)).collect();
    fn rec(
        m: &MatroidHandle,
        i: usize,
        size: usize,
        r: usize,
        cur: &mut SubsetMask,
        suffix: &[SubsetMask],
        out: &mut Vec<SubsetMask>,
        limit: usize,
    ) -> Result<()> {
        if size == r {
            if out.len() >= limit {
                return Err(Error::capacity("base enumeration", limit, out.len()));
            }
            out.push(cur.clone());
            return Ok(());
        }
        if i == m.len() || m.rank(&cur.union(&suffix[i])) < r {
            return Ok(());
        }
        cur.insert(i);
        if m.rank(cur) == size + 1 {
            rec(m, i + 1, size + 1, r, cur, suffix, out, limit)?;
        }
        cur.remove(i);
        rec(m, i + 1, size, r, cur, suffix, out, limit)
    }
    rec(m, 0, 0, r, &mut cur, &suffix, &mut out, limit)?;
    Ok(out)
}

/// Connected components (finest separator partition), in order of least element.
///
/// Two elements share a component iff they are linked through fundamental
/// circuits of any fixed base.
pub fn components(m: &MatroidHandle) -> Vec<SubsetMask> {
    let n = m.len();
    let order: Vec<usize> = (0..n).collect();
    let b = greedy_base(m, &order);
    let mut uf = UnionFind::new(n);
    let ex = m.exchange(&b);
    for x in 0..n {
        if b.contains(x) || m.loops().contains(x) {
            continue;
        }
        if let Some(c) = ex.circuit(x) {
            for y in c {
                uf.union(x, y);
            }
        }
    }
    let mut groups: Vec<(usize, SubsetMask)> = Vec::new();
    for e in 0..n {
        let root = uf.find(e);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.insert(e),
            None => groups.push((root, SubsetMask::from_indices(n, [e]))),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}
