//! Rank-oracle matroids built compositionally from graphic, uniform and
//! explicit-base leaves.

mod exchange;
mod graphic;
mod ops;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;

pub use exchange::Exchange;
pub use graphic::{Forest, Graphic};
pub use ops::{closure, components, enumerate_bases, fundamental_circuit, greedy_base, is_base, is_independent};

use crate::error::{Error, Result};
use crate::subset::SubsetMask;

/// Ordered, duplicate-free element identifiers.
#[derive(Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Arc<Vec<String>>,
}

impl GroundSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::input("ground set must be nonempty"));
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(j) = seen.insert(l.as_str(), i) {
                return Err(Error::input(format!("duplicate element identifier {l:?} at positions {j} and {i}")));
            }
        }
        Ok(GroundSet { labels: Arc::new(labels) })
    }

    /// `prefix1 .. prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mask<S: AsRef<str>>(&self, labels: &[S]) -> Result<SubsetMask> {
        let mut m = SubsetMask::empty(self.len());
        for l in labels {
            let i =
                self.index_of(l.as_ref()).ok_or_else(|| Error::input(format!("unknown element {:?}", l.as_ref())))?;
            m.insert(i);
        }
        Ok(m)
    }

    pub fn mask_from_indices(&self, idx: &[usize]) -> Result<SubsetMask> {
        let n = self.len();
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::input(format!("element index {bad} out of range for ground set of size {n}")));
        }
        Ok(SubsetMask::from_indices(n, idx.iter().copied()))
    }

    pub fn names(&self, m: &SubsetMask) -> Vec<String> {
        m.iter().map(|i| self.labels[i].clone()).collect()
    }

    pub fn prefixed(&self, prefix: &str) -> Self {
        GroundSet { labels: Arc::new(self.labels.iter().map(|l| format!("{prefix}{l}")).collect()) }
    }

    pub fn restricted(&self, keep: &[usize]) -> Self {
        GroundSet { labels: Arc::new(keep.iter().map(|&i| self.labels[i].clone()).collect()) }
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindTag {
    Graphic,
    Uniform,
    Explicit,
    Free,
    Dual,
    Minor,
    Truncation,
    DualTruncation,
    DirectSum,
}

impl KindTag {
    pub fn name(self) -> &'static str {
        match self {
            KindTag::Graphic => "graphic",
            KindTag::Uniform => "uniform",
            KindTag::Explicit => "explicit-bases",
            KindTag::Free => "free",
            KindTag::Dual => "dual",
            KindTag::Minor => "minor",
            KindTag::Truncation => "truncation",
            KindTag::DualTruncation => "dual-truncation",
            KindTag::DirectSum => "direct-sum",
        }
    }
}

pub(crate) enum Kind {
    Graphic(Graphic),
    Uniform {
        r: usize,
    },
    Explicit {
        bases: Vec<SubsetMask>,
    },
    Free,
    Dual {
        inner: MatroidHandle,
    },
    Minor {
        inner: MatroidHandle,
        keep: Vec<usize>,
        contract: SubsetMask,
        contract_rank: usize,
    },
    Truncation {
        inner: MatroidHandle,
        t: usize,
    },
    /// Rank min{|X|, t - r(M) + r(X)} for r(M) < t < |E|.
    DualTruncation {
        inner: MatroidHandle,
        t: usize,
    },
    DirectSum {
        parts: Vec<MatroidHandle>,
        offsets: Vec<usize>,
    },
}

const DEFAULT_CACHE: usize = 1 << 16;

struct RankCache {
    capacity: usize,
    map: Mutex<HashMap<SubsetMask, usize>>,
}

impl RankCache {
    fn new(capacity: usize) -> Self {
        RankCache { capacity, map: Mutex::new(HashMap::new()) }
    }

    fn get(&self, x: &SubsetMask) -> Option<usize> {
        self.map.lock().get(x).copied()
    }

    fn put(&self, x: &SubsetMask, r: usize) {
        let mut map = self.map.lock();
        if map.len() >= self.capacity {
            map.clear();
        }
        map.insert(x.clone(), r);
    }
}

struct Node {
    ground: GroundSet,
    kind: Kind,
    full_rank: usize,
    loops: SubsetMask,
    cache: Option<RankCache>,
}

/// Immutable, cheaply clonable matroid given by its rank oracle.
#[derive(Clone)]
pub struct MatroidHandle {
    node: Arc<Node>,
}

impl fmt::Debug for MatroidHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatroidHandle")
            .field("kind", &self.kind().name())
            .field("ground", &self.node.ground)
            .field("rank", &self.node.full_rank)
            .finish()
    }
}

impl MatroidHandle {
    fn build(ground: GroundSet, kind: Kind, cache: bool) -> Self {
        let n = ground.len();
        let mut node = Node { ground, kind, full_rank: 0, loops: SubsetMask::empty(n), cache: None };
        if cache {
            node.cache = Some(RankCache::new(DEFAULT_CACHE));
        }
        let mut h = MatroidHandle { node: Arc::new(node) };
        let full_rank = h.rank_uncached(&SubsetMask::full(n));
        let loops =
            SubsetMask::from_indices(n, (0..n).filter(|&e| h.rank_uncached(&SubsetMask::from_indices(n, [e])) == 0));
        let node = Arc::get_mut(&mut h.node).expect("fresh handle");
        node.full_rank = full_rank;
        node.loops = loops;
        h
    }

    fn require_proper(self) -> Result<Self> {
        if let Some(e) = self.node.loops.iter().next() {
            return Err(Error::domain(format!("element {} is a loop", self.label(e))));
        }
        if self.node.full_rank == 0 {
            return Err(Error::domain("matroid has rank 0"));
        }
        Ok(self)
    }

    /// Graphic matroid of a multigraph; edges are labelled `e1..em`.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::graphic_labeled(vertices, edges, GroundSet::numbered("e", edges.len())?)
    }

    pub fn graphic_labeled(vertices: usize, edges: &[(usize, usize)], ground: GroundSet) -> Result<Self> {
        if ground.len() != edges.len() {
            return Err(Error::input("edge label count differs from edge count"));
        }
        let g = Graphic::new(vertices, edges.to_vec())?;
        Self::build(ground, Kind::Graphic(g), false).require_proper()
    }

    /// U(n, r), elements `e1..en`.
    pub fn uniform(n: usize, r: usize) -> Result<Self> {
        Self::uniform_labeled(GroundSet::numbered("e", n)?, r)
    }

    pub fn uniform_labeled(ground: GroundSet, r: usize) -> Result<Self> {
        if r > ground.len() {
            return Err(Error::input(format!("uniform rank {r} exceeds ground size {}", ground.len())));
        }
        Self::build(ground, Kind::Uniform { r }, false).require_proper()
    }

    pub fn free(ground: GroundSet) -> Self {
        Self::build(ground, Kind::Free, false)
    }

    /// Matroid given by its list of bases; the basis exchange axiom is checked.
    pub fn explicit(ground: GroundSet, bases: Vec<SubsetMask>) -> Result<Self> {
        let n = ground.len();
        if bases.is_empty() {
            return Err(Error::input("explicit matroid needs at least one base"));
        }
        let r = bases[0].count();
        for b in &bases {
            if b.len() != n {
                return Err(Error::input("base mask length differs from ground size"));
            }
            if b.count() != r {
                return Err(Error::input("bases have different cardinalities"));
            }
        }
        let mut bases = bases;
        bases.sort();
        bases.dedup();
        let set: std::collections::HashSet<&SubsetMask> = bases.iter().collect();
        for a in &bases {
            for b in &bases {
                for x in a.difference(b).iter() {
                    let ok = b.difference(a).iter().any(|y| set.contains(&a.without(x).with(y)));
                    if !ok {
                        return Err(Error::input(format!(
                            "base family violates the exchange axiom at element {}",
                            ground.label(x)
                        )));
                    }
                }
            }
        }
        Self::build(ground, Kind::Explicit { bases }, true).require_proper()
    }

    pub fn explicit_from_labels<S: AsRef<str>>(ground: GroundSet, bases: &[Vec<S>]) -> Result<Self> {
        let masks = bases.iter().map(|b| ground.mask(b)).collect::<Result<Vec<_>>>()?;
        Self::explicit(ground, masks)
    }

    /// Dual matroid; loops (coloops of `self`) are permitted and flagged.
    pub fn dual(&self) -> Self {
        if let Kind::Dual { inner } = &self.node.kind {
            return inner.clone();
        }
        Self::build(self.ground().clone(), Kind::Dual { inner: self.clone() }, false)
    }

    /// `(M / contract) \ delete`, on `E - delete - contract` in parent order.
    pub fn minor(&self, delete: &SubsetMask, contract: &SubsetMask) -> Result<Self> {
        let n = self.len();
        if delete.len() != n || contract.len() != n {
            return Err(Error::input("minor sets must match the ground size"));
        }
        if !delete.intersection(contract).is_empty() {
            return Err(Error::input("deleted and contracted sets overlap"));
        }
        let gone = delete.union(contract);
        if gone.is_full() {
            return Err(Error::input("minor would have an empty ground set"));
        }
        let keep: Vec<usize> = gone.complement().to_vec();
        let ground = self.ground().restricted(&keep);
        let h = match &self.node.kind {
            Kind::Graphic(g) => {
                let g2 = g.minor(&keep, contract);
                Self::build(ground, Kind::Graphic(g2), false)
            }
            Kind::Minor { inner, keep: k0, contract: c0, .. } => {
                let len0 = inner.len();
                let c = c0.union(&contract.lift(k0, len0));
                let keep2: Vec<usize> = keep.iter().map(|&i| k0[i]).collect();
                let contract_rank = inner.rank(&c);
                Self::build(
                    ground,
                    Kind::Minor { inner: inner.clone(), keep: keep2, contract: c, contract_rank },
                    false,
                )
            }
            _ => {
                let contract_rank = self.rank(contract);
                Self::build(
                    ground,
                    Kind::Minor { inner: self.clone(), keep, contract: contract.clone(), contract_rank },
                    self.node.cache.is_some(),
                )
            }
        };
        h.require_proper()
    }

    pub fn delete(&self, x: &SubsetMask) -> Result<Self> {
        self.minor(x, &SubsetMask::empty(self.len()))
    }

    pub fn contract(&self, x: &SubsetMask) -> Result<Self> {
        self.minor(&SubsetMask::empty(self.len()), x)
    }

    /// `M | X`.
    pub fn restrict(&self, x: &SubsetMask) -> Result<Self> {
        self.delete(&x.complement())
    }

    /// `M_t` for `1 <= t <= |E|`; dual truncation above `r(M)`, free at `|E|`.
    pub fn truncation(&self, t: usize) -> Result<Self> {
        let n = self.len();
        let r = self.full_rank();
        if t == 0 || t > n {
            return Err(Error::input(format!("truncation level {t} outside [1, {n}]")));
        }
        Ok(if t == r {
            self.clone()
        } else if t < r {
            Self::build(self.ground().clone(), Kind::Truncation { inner: self.clone(), t }, self.node.cache.is_some())
        } else if t == n {
            Self::free(self.ground().clone())
        } else {
            Self::build(
                self.ground().clone(),
                Kind::DualTruncation { inner: self.clone(), t },
                self.node.cache.is_some(),
            )
        })
    }

    pub fn direct_sum(parts: &[MatroidHandle]) -> Result<Self> {
        match parts.len() {
            0 => return Err(Error::input("direct sum of no parts")),
            1 => return Ok(parts[0].clone()),
            _ => {}
        }
        let mut labels = Vec::new();
        let mut offsets = Vec::new();
        for p in parts {
            offsets.push(labels.len());
            labels.extend(p.ground().labels().iter().cloned());
        }
        let ground = GroundSet::new(labels)?;
        Ok(Self::build(ground, Kind::DirectSum { parts: parts.to_vec(), offsets }, false))
    }

    /// Same matroid with identifiers replaced.
    pub fn relabeled(&self, ground: GroundSet) -> Result<Self> {
        if ground.len() != self.len() {
            return Err(Error::input("relabel size mismatch"));
        }
        let kind = match &self.node.kind {
            Kind::Graphic(g) => Kind::Graphic(g.clone()),
            Kind::Uniform { r } => Kind::Uniform { r: *r },
            Kind::Explicit { bases } => Kind::Explicit { bases: bases.clone() },
            Kind::Free => Kind::Free,
            _ => {
                let keep: Vec<usize> = (0..self.len()).collect();
                Kind::Minor { inner: self.clone(), keep, contract: SubsetMask::empty(self.len()), contract_rank: 0 }
            }
        };
        Ok(Self::build(ground, kind, self.node.cache.is_some()))
    }

    pub fn prefixed(&self, prefix: &str) -> Result<Self> {
        self.relabeled(self.ground().prefixed(prefix))
    }

    /// Copy of this handle with a bounded rank memo.
    pub fn with_cache(&self, capacity: usize) -> Self {
        let keep: Vec<usize> = (0..self.len()).collect();
        let kind = Kind::Minor { inner: self.clone(), keep, contract: SubsetMask::empty(self.len()), contract_rank: 0 };
        let mut h = Self::build(self.ground().clone(), kind, false);
        Arc::get_mut(&mut h.node).expect("fresh handle").cache = Some(RankCache::new(capacity.max(1)));
        h
    }

    pub fn ground(&self) -> &GroundSet {
        &self.node.ground
    }

    pub fn len(&self) -> usize {
        self.node.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, i: usize) -> &str {
        self.node.ground.label(i)
    }

    pub fn full_rank(&self) -> usize {
        self.node.full_rank
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.len())
    }

    pub fn empty_set(&self) -> SubsetMask {
        SubsetMask::empty(self.len())
    }

    pub fn loops(&self) -> &SubsetMask {
        &self.node.loops
    }

    pub fn ensure_loopless(&self) -> Result<()> {
        if let Some(e) = self.node.loops.iter().next() {
            return Err(Error::domain(format!("element {} is a loop", self.label(e))));
        }
        if self.node.full_rank == 0 {
            return Err(Error::domain("matroid has rank 0"));
        }
        Ok(())
    }

    pub fn kind(&self) -> KindTag {
        match &self.node.kind {
            Kind::Graphic(_) => KindTag::Graphic,
            Kind::Uniform { .. } => KindTag::Uniform,
            Kind::Explicit { .. } => KindTag::Explicit,
            Kind::Free => KindTag::Free,
            Kind::Dual { .. } => KindTag::Dual,
            Kind::Minor { .. } => KindTag::Minor,
            Kind::Truncation { .. } => KindTag::Truncation,
            Kind::DualTruncation { .. } => KindTag::DualTruncation,
            Kind::DirectSum { .. } => KindTag::DirectSum,
        }
    }

    pub fn as_graphic(&self) -> Option<&Graphic> {
        match &self.node.kind {
            Kind::Graphic(g) => Some(g),
            _ => None,
        }
    }

    pub(crate) fn kind_ref(&self) -> &Kind {
        &self.node.kind
    }

    pub fn rank(&self, x: &SubsetMask) -> usize {
        assert_eq!(x.len(), self.len(), "subset length differs from ground size");
        if let Some(c) = &self.node.cache {
            if let Some(r) = c.get(x) {
                return r;
            }
            let r = self.rank_uncached(x);
            c.put(x, r);
            return r;
        }
        self.rank_uncached(x)
    }

    /// Rank with validation of the subset length.
    pub fn try_rank(&self, x: &SubsetMask) -> Result<usize> {
        if x.len() != self.len() {
            return Err(Error::input(format!("subset of length {} for ground set of size {}", x.len(), self.len())));
        }
        Ok(self.rank(x))
    }

    pub fn rank_of(&self, idx: &[usize]) -> usize {
        self.rank(&SubsetMask::from_indices(self.len(), idx.iter().copied()))
    }

    fn rank_uncached(&self, x: &SubsetMask) -> usize {
        match &self.node.kind {
            Kind::Graphic(g) => g.rank(x),
            Kind::Uniform { r } => x.count().min(*r),
            Kind::Free => x.count(),
            Kind::Explicit { bases } => bases.iter().map(|b| b.intersection_count(x)).max().unwrap_or(0),
            Kind::Dual { inner } => x.count() + inner.rank(&x.complement()) - inner.full_rank(),
            Kind::Minor { inner, keep, contract, contract_rank } => {
                inner.rank(&x.lift(keep, inner.len()).union(contract)) - contract_rank
            }
            Kind::Truncation { inner, t } => inner.rank(x).min(*t),
            Kind::DualTruncation { inner, t } => x.count().min(t - inner.full_rank() + inner.rank(x)),
            Kind::DirectSum { parts, offsets } => parts
                .iter()
                .zip(offsets)
                .map(|(p, &o)| p.rank(&SubsetMask::from_indices(p.len(), (0..p.len()).filter(|&i| x.contains(o + i)))))
                .sum(),
        }
    }

    /// Parts and their offsets if this is a direct sum.
    pub fn sum_parts(&self) -> Option<(&[MatroidHandle], &[usize])> {
        match &self.node.kind {
            Kind::DirectSum { parts, offsets } => Some((parts, offsets)),
            _ => None,
        }
    }

    /// Exchange oracle for the independent set `indep`.
    pub fn exchange(&self, indep: &SubsetMask) -> Exchange<'_> {
        Exchange::new(self, indep)
    }
}

#[cfg(test)]
mod tests;
