//! Undirected multigraphs and the `u v [weight]` edge-list format.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matroid::{GroundSet, MatroidHandle};
use crate::rational::{self, Rational};
use crate::weights::WeightVector;

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    vertex_labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<Rational>>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::with_labels((0..vertices).map(|v| v.to_string()).collect(), edges)
    }

    pub fn with_labels(vertex_labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertex_labels.len();
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge e{} has an endpoint outside {n} vertices", i + 1)));
            }
        }
        Ok(Graph { vertex_labels, edges, weights: None })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_labels(&self) -> Vec<String> {
        (1..=self.edges.len()).map(|i| format!("e{i}")).collect()
    }

    pub fn weights(&self) -> Option<WeightVector> {
        self.weights.as_ref().map(|w| WeightVector::new(w.clone()).expect("weights validated at parse time"))
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.edges.push((u, v));
        if let Some(w) = &mut g.weights {
            w.push(rational::int(1));
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn matroid(&self) -> Result<MatroidHandle> {
        MatroidHandle::graphic_labeled(self.vertex_count(), &self.edges, GroundSet::new(self.edge_labels())?)
    }

    /// Parse one `u v [weight]` edge per line; `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        let mut weighted: Option<bool> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let toks: Vec<(usize, &str)> = tokens(line);
            let perr = |col: usize, msg: String| Error::Parse { line: ln + 1, column: col + 1, message: msg };
            if toks.len() < 2 || toks.len() > 3 {
                let col = toks.get(3).map_or(0, |t| t.0);
                return Err(perr(col, format!("expected `u v [weight]`, found {} fields", toks.len())));
            }
            let has_w = toks.len() == 3;
            match weighted {
                None => weighted = Some(has_w),
                Some(w) if w != has_w => {
                    return Err(perr(toks[0].0, "either every edge or no edge carries a weight".into()));
                }
                _ => {}
            }
            let mut ids = [0usize; 2];
            for (k, &(_, name)) in toks[..2].iter().enumerate() {
                let next = labels.len();
                ids[k] = *index.entry(name.to_string()).or_insert_with(|| {
                    labels.push(name.to_string());
                    next
                });
            }
            if ids[0] == ids[1] {
                return Err(perr(toks[1].0, format!("self-loop at vertex {:?} (loops are not allowed)", toks[0].1)));
            }
            if has_w {
                let (col, w) = toks[2];
                let val = rational::parse(w).map_err(|e| perr(col, e.to_string()))?;
                if val <= Rational::from_integer(0.into()) {
                    return Err(perr(col, format!("weight {w} is not positive")));
                }
                weights.push(val);
            }
            edges.push((ids[0], ids[1]));
        }
        if edges.is_empty() {
            return Err(Error::Parse { line: 1, column: 1, message: "edge list contains no edges".into() });
        }
        Ok(Graph { vertex_labels: labels, edges, weights: if weighted == Some(true) { Some(weights) } else { None } })
    }
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out
}
