use crate::error::{Error, Result};
use crate::subset::SubsetMask;

/// Edge list of a multigraph on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graphic {
    vertices: usize,
    ends: Vec<(usize, usize)>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

impl Graphic {
    pub fn new(vertices: usize, ends: Vec<(usize, usize)>) -> Result<Self> {
        if ends.is_empty() {
            return Err(Error::input("graph has no edges"));
        }
        for (i, &(u, v)) in ends.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::input(format!("edge {} endpoint out of range for {vertices} vertices", i + 1)));
            }
        }
        Ok(Graphic { vertices, ends })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    pub fn rank(&self, x: &SubsetMask) -> usize {
        let mut uf = UnionFind::new(self.vertices);
        x.iter().filter(|&e| uf.union(self.ends[e].0, self.ends[e].1)).count()
    }

    /// Number of connected components of `(V, x)`.
    pub fn components(&self, x: &SubsetMask) -> usize {
        self.vertices - self.rank(x)
    }

    /// Contract the edges in `contract`, keep the edges listed in `keep`.
    pub(crate) fn minor(&self, keep: &[usize], contract: &SubsetMask) -> Graphic {
        let mut uf = UnionFind::new(self.vertices);
        for e in contract.iter() {
            uf.union(self.ends[e].0, self.ends[e].1);
        }
        let mut id = vec![usize::MAX; self.vertices];
        let mut next = 0;
        for v in 0..self.vertices {
            let root = uf.find(v);
            if id[root] == usize::MAX {
                id[root] = next;
                next += 1;
            }
            id[v] = id[root];
        }
        let ends = keep.iter().map(|&e| (id[self.ends[e].0], id[self.ends[e].1])).collect();
        Graphic { vertices: next, ends }
    }
}

/// Rooted spanning forest of an edge subset, answering path queries.
pub struct Forest {
    parent: Vec<usize>,
    parent_edge: Vec<usize>,
    depth: Vec<usize>,
    root: Vec<usize>,
    ends: Vec<(usize, usize)>,
}

impl Forest {
    pub(crate) fn new(g: &Graphic, edges: &SubsetMask) -> Self {
        let n = g.vertices;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for e in edges.iter() {
            let (u, v) = g.ends[e];
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let mut parent = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        let mut root = vec![usize::MAX; n];
        let mut stack = Vec::new();
        for s in 0..n {
            if root[s] != usize::MAX {
                continue;
            }
            root[s] = s;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &(v, e) in &adj[u] {
                    if root[v] == usize::MAX {
                        root[v] = s;
                        parent[v] = u;
                        parent_edge[v] = e;
                        depth[v] = depth[u] + 1;
                        stack.push(v);
                    }
                }
            }
        }
        Forest { parent, parent_edge, depth, root, ends: g.ends.clone() }
    }

    pub(crate) fn closes_cycle(&self, e: usize) -> bool {
        let (u, v) = self.ends[e];
        self.root[u] == self.root[v]
    }

    /// Forest edges on the cycle closed by edge `e`, or `None` if `e` joins two trees.
    pub(crate) fn cycle(&self, e: usize) -> Option<Vec<usize>> {
        let (mut u, mut v) = self.ends[e];
        if self.root[u] != self.root[v] {
            return None;
        }
        let mut out = Vec::new();
        while self.depth[u] > self.depth[v] {
            out.push(self.parent_edge[u]);
            u = self.parent[u];
        }
        while self.depth[v] > self.depth[u] {
            out.push(self.parent_edge[v]);
            v = self.parent[v];
        }
        while u != v {
            out.push(self.parent_edge[u]);
            out.push(self.parent_edge[v]);
            u = self.parent[u];
            v = self.parent[v];
        }
        Some(out)
    }
}
