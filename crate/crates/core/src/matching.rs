//! Bipartite perfect matching with Hall-violator extraction.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Matching {
    /// `mate[i]` is the right vertex matched to left vertex `i`.
    Perfect(Vec<usize>),
    /// Left set `S` with `|N(S)| < |S|`.
    HallViolator(Vec<usize>),
}

const FREE: usize = usize::MAX;

/// Hopcroft–Karp on a bipartite multigraph given as `(left, right)` pairs.
/// Adjacency is scanned in increasing order, so results are deterministic.
pub fn bipartite_perfect_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Matching> {
    if left != right {
        return Err(Error::input(format!("sides differ: {left} vs {right}")));
    }
    let mut adj = vec![Vec::new(); left];
    for &(a, b) in edges {
        if a >= left || b >= right {
            return Err(Error::input(format!("edge ({a}, {b}) out of range")));
        }
        adj[a].push(b);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let mut mate_l = vec![FREE; left];
    let mut mate_r = vec![FREE; right];
    let mut dist = vec![0usize; left];

    loop {
        let mut queue = VecDeque::new();
        for i in 0..left {
            if mate_l[i] == FREE {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let k = mate_r[j];
                if k == FREE {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            break;
        }
        for i in 0..left {
            if mate_l[i] == FREE {
                augment(i, &adj, &mut mate_l, &mut mate_r, &mut dist);
            }
        }
    }

    let unmatched: Vec<usize> = (0..left).filter(|&i| mate_l[i] == FREE).collect();
    if unmatched.is_empty() {
        return Ok(Matching::Perfect(mate_l));
    }
    let mut seen = vec![false; left];
    for &i in &unmatched {
        seen[i] = true;
    }
    let mut stack = unmatched;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            let k = mate_r[j];
            if k != FREE && !seen[k] {
                seen[k] = true;
                stack.push(k);
            }
        }
    }
    Ok(Matching::HallViolator((0..left).filter(|&i| seen[i]).collect()))
}

fn augment(i: usize, adj: &[Vec<usize>], mate_l: &mut [usize], mate_r: &mut [usize], dist: &mut [usize]) -> bool {
    for idx in 0..adj[i].len() {
        let j = adj[i][idx];
        let k = mate_r[j];
        if k == FREE || (dist[k] == dist[i] + 1 && augment(k, adj, mate_l, mate_r, dist)) {
            mate_l[i] = j;
            mate_r[j] = i;
            return true;
        }
    }
    dist[i] = usize::MAX;
    false
}
