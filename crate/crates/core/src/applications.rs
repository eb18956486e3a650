//! Removal number, addable edges, and edge toughness via truncation.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matroid::MatroidHandle;
use crate::rational::{self, Rational};
use crate::sfm::{base_covering, base_packing, fractional_arboricity, strength, Covering, Packing};
use crate::subset::SubsetMask;
use crate::universal::universal_density;
use crate::weights::WeightVector;

/// `a(M) = ⌈D(M)⌉`, zero on an empty or rank-zero ground set.
pub fn covering_number(m: &MatroidHandle) -> Result<usize> {
    if m.full_rank() == 0 {
        return Ok(0);
    }
    let d = fractional_arboricity(m, &WeightVector::ones(m.len()))?.0;
    Ok(rational::ceil_int(&d).to_usize().expect("small covering number"))
}

#[derive(Clone, Debug)]
pub struct RemovalAnswer {
    pub n_value: usize,
    pub witness: SubsetMask,
    /// `None` when every level exceeds `1/k` and the whole ground set qualifies.
    pub i_of_k: Option<usize>,
    pub s_set: SubsetMask,
    pub covering_verified: bool,
    pub rank_preserved: bool,
}

/// Largest `|X|` with `a(M|X) ≤ k`, with a witness.
pub fn removal_number(m: &MatroidHandle, k: usize) -> Result<RemovalAnswer> {
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    m.ensure_loopless()?;
    let n = m.len();
    let (eta, _) = universal_density(m, &WeightVector::ones(n))?;
    let mut levels: Vec<Rational> = eta.values().to_vec();
    levels.sort();
    levels.dedup();
    let bound = rational::frac(1, k as i64);
    let i_of_k = levels.iter().rposition(|l| *l <= bound);
    let s_set = match i_of_k {
        Some(i) => SubsetMask::from_indices(n, (0..n).filter(|&e| eta[e] <= levels[i])),
        None => SubsetMask::empty(n),
    };
    let rs = m.rank(&s_set);
    let n_value = (n - s_set.count()) + k * rs;

    let mut witness = s_set.complement();
    if !s_set.is_empty() {
        let keep = s_set.to_vec();
        match base_packing(&m.restrict(&s_set)?, k)? {
            Packing::Bases(bases) => {
                for b in bases {
                    witness = witness.union(&b.lift(&keep, n));
                }
            }
            Packing::Deficient(x) => {
                return Err(Error::domain(format!(
                    "restriction to S has no {k} disjoint bases (deficient set of size {})",
                    x.count()
                )))
            }
        }
    }
    let restricted = m.restrict(&witness)?;
    let covering_verified = witness.is_empty() || matches!(base_covering(&restricted, k)?, Covering::Bases(_));
    let rank_preserved = m.rank(&witness) == m.full_rank();
    Ok(RemovalAnswer { n_value, witness, i_of_k, s_set, covering_verified, rank_preserved })
}

/// Exhaustive removal number: the largest `X` containing no `Y` with `|Y| > k·r(Y)`.
pub fn removal_oracle(m: &MatroidHandle, k: usize, limit: usize) -> Result<usize> {
    let n = m.len();
    if n >= 63 || (1usize << n) > limit {
        return Err(Error::capacity("subsets for removal oracle", limit, if n >= 63 { usize::MAX } else { 1 << n }));
    }
    let mut ok = vec![false; 1 << n];
    let mut best = 0;
    for bits in 0..1u64 << n {
        let x = SubsetMask::from_bits(n, bits);
        let dense = x.count() > k * m.rank(&x);
        ok[bits as usize] = !dense && x.iter().all(|e| ok[(bits & !(1 << e)) as usize]);
        if ok[bits as usize] {
            best = best.max(x.count());
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AddableCase {
    Below,
    HomogeneousTight,
    Partitioned,
}

impl AddableCase {
    pub fn name(self) -> &'static str {
        match self {
            AddableCase::Below => "below",
            AddableCase::HomogeneousTight => "homogeneous-tight",
            AddableCase::Partitioned => "partitioned",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedPair {
    pub pair: (usize, usize),
    /// Vertex set of a connected induced subgraph of density `k` spanning both ends.
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct AddableEdgeReport {
    pub case: AddableCase,
    pub arboricity: Rational,
    pub addable: Vec<(usize, usize)>,
    pub blocked: Vec<BlockedPair>,
}

fn vertex_components(vertices: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut touched = vec![false; vertices];
    for &(u, v) in edges {
        touched[u] = true;
        touched[v] = true;
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for v in (0..vertices).filter(|&v| touched[v]) {
        let r = find(&mut parent, v);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(v),
            None => groups.push((r, vec![v])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Vertex pairs whose new edge keeps the arboricity at `k`.
pub fn addable_edges(g: &Graph, k: usize) -> Result<AddableEdgeReport> {
    if k < 2 {
        return Err(Error::input("k must be at least 2"));
    }
    if !g.is_connected() {
        return Err(Error::input("graph must be connected"));
    }
    let m = g.matroid()?;
    m.ensure_loopless()?;
    let ones = WeightVector::ones(m.len());
    let (d, _) = fractional_arboricity(&m, &ones)?;
    let a = rational::ceil_int(&d).to_usize().expect("small");
    if a != k {
        return Err(Error::input(format!("graph has arboricity {a}, not {k}")));
    }
    let nv = g.vertex_count();
    let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|u| (u + 1..nv).map(move |v| (u, v))).collect();
    let kk = rational::int(k as i64);
    if d < kk {
        return Ok(AddableEdgeReport { case: AddableCase::Below, arboricity: d, addable: pairs, blocked: Vec::new() });
    }
    let (eta, _) = universal_density(&m, &ones)?;
    let low = eta.values().iter().min().expect("nonempty").clone();
    let homogeneous = eta.values().iter().all(|x| *x == low);
    let (case, groups) = if homogeneous {
        (AddableCase::HomogeneousTight, vec![(0..nv).collect::<Vec<_>>()])
    } else {
        let h: Vec<(usize, usize)> = (0..m.len()).filter(|&e| eta[e] == low).map(|e| g.edges()[e]).collect();
        (AddableCase::Partitioned, vertex_components(nv, &h))
    };
    let mut addable = Vec::new();
    let mut blocked = Vec::new();
    for (u, v) in pairs {
        match groups.iter().find(|grp| grp.contains(&u) && grp.contains(&v)) {
            Some(grp) => blocked.push(BlockedPair { pair: (u, v), witness: grp.clone() }),
            None => addable.push((u, v)),
        }
    }
    Ok(AddableEdgeReport { case, arboricity: d, addable, blocked })
}

/// Whether `G + uv` keeps arboricity at most `k`, by direct computation.
pub fn addable_direct(g: &Graph, k: usize, u: usize, v: usize) -> Result<bool> {
    Ok(covering_number(&g.with_edge(u, v).matroid()?)? <= k)
}

/// `τ_c(G) = min |X| / (ω(G − X) − c)` as the strength of the `(|V| − c)`-truncation.
pub fn edge_toughness(g: &Graph, c: usize) -> Result<Rational> {
    let nv = g.vertex_count();
    if c == 0 || c + 1 > nv {
        return Err(Error::input(format!("c = {c} outside [1, {}]", nv.saturating_sub(1))));
    }
    if !g.is_connected() {
        return Err(Error::input("graph must be connected"));
    }
    let m = g.matroid()?;
    m.ensure_loopless()?;
    let mt = m.truncation(nv - c)?;
    Ok(strength(&mt, &WeightVector::ones(m.len()))?.0)
}

/// Direct minimization over edge subsets.
pub fn edge_toughness_direct(g: &Graph, c: usize, limit: usize) -> Result<Rational> {
    let ne = g.edge_count();
    if ne >= 63 || (1usize << ne) > limit {
        return Err(Error::capacity("edge subsets for toughness", limit, if ne >= 63 { usize::MAX } else { 1 << ne }));
    }
    let nv = g.vertex_count();
    let mut best: Option<Rational> = None;
    for bits in 0..1u64 << ne {
        let kept: Vec<(usize, usize)> = (0..ne).filter(|e| bits & (1 << e) == 0).map(|e| g.edges()[e]).collect();
        let isolated = {
            let mut touched = vec![false; nv];
            for &(u, v) in &kept {
                touched[u] = true;
                touched[v] = true;
            }
            touched.iter().filter(|&&t| !t).count()
        };
        let omega = vertex_components(nv, &kept).len() + isolated;
        if omega > c {
            let r = rational::frac(bits.count_ones() as i64, (omega - c) as i64);
            if best.as_ref().map_or(true, |b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.ok_or_else(|| Error::domain("no edge set leaves more than c components"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerialArboricity {
    pub a_whole: usize,
    pub a_part: usize,
    pub a_contracted: usize,
    pub premise: bool,
    pub holds: bool,
}

/// `a(M|X) ≤ k` and `a(M/X) ≤ k` imply `a(M) ≤ k`.
pub fn serial_arboricity_matroid(m: &MatroidHandle, x: &SubsetMask, k: usize) -> Result<SerialArboricity> {
    m.ensure_loopless()?;
    let a_whole = covering_number(m)?;
    let a_part = if x.is_empty() { 0 } else { covering_number(&m.restrict(x)?)? };
    // a contraction with loops has no finite covering
    let a_contracted = if x.is_full() {
        0
    } else {
        match m.contract(x) {
            Ok(con) => covering_number(&con)?,
            Err(Error::Domain(_)) => usize::MAX,
            Err(e) => return Err(e),
        }
    };
    let premise = a_part <= k && a_contracted <= k;
    Ok(SerialArboricity { a_whole, a_part, a_contracted, premise, holds: !premise || a_whole <= k })
}

/// Graph form: the components of `H` (an edge set) must be vertex-induced in `G`.
pub fn serial_arboricity_check(g: &Graph, h: &SubsetMask, k: usize) -> Result<SerialArboricity> {
    if h.len() != g.edge_count() {
        return Err(Error::input("edge mask length differs from edge count"));
    }
    let h_edges: Vec<(usize, usize)> = h.iter().map(|e| g.edges()[e]).collect();
    let comps = vertex_components(g.vertex_count(), &h_edges);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !h.contains(e) && comps.iter().any(|c| c.contains(&u) && c.contains(&v)) {
            return Err(Error::input(format!("edge e{} joins vertices of one component of H", e + 1)));
        }
    }
    serial_arboricity_matroid(&g.matroid()?, h, k)
}
