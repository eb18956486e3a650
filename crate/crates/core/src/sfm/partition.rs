//! Matroid partition with multiplicities.
//!
//! Element `e` asks for `copies[e]` places among `sets` independent sets,
//! at most one per set. Greedy insertion along shortest augmenting paths
//! yields a maximum placement, whose size equals
//! `min_X  sets·r(X) + copies(E − X)`, and the reachability structure of the
//! final exchange graph gives the minimal and maximal minimizers.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matroid::{Exchange, MatroidHandle};
use crate::subset::SubsetMask;

#[derive(Clone, Debug)]
pub struct PartitionOutcome {
    /// Total number of placed copies.
    pub placed: u64,
    pub sets: Vec<SubsetMask>,
    /// Least minimizer of `sets·r(X) + copies(E − X)`.
    pub minimal: SubsetMask,
    /// Greatest minimizer.
    pub maximal: SubsetMask,
}

struct State<'a> {
    m: &'a MatroidHandle,
    sets: Vec<SubsetMask>,
    member: Vec<Vec<bool>>,
    ex: Vec<Exchange<'a>>,
}

impl<'a> State<'a> {
    fn refresh(&mut self, j: usize) {
        self.ex[j] = self.m.exchange(&self.sets[j]);
    }

    fn put(&mut self, e: usize, j: usize) {
        self.sets[j].insert(e);
        self.member[e][j] = true;
    }

    fn take(&mut self, e: usize, j: usize) {
        self.sets[j].remove(e);
        self.member[e][j] = false;
    }

    /// Place one more copy of `s`; false if no augmenting path exists.
    fn augment(&mut self, s: usize) -> bool {
        let n = self.m.len();
        let p = self.sets.len();
        for j in 0..p {
            if !self.member[s][j] && self.ex[j].can_add(s) {
                self.put(s, j);
                self.refresh(j);
                return true;
            }
        }
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for j in 0..p {
                if self.member[x][j] {
                    continue;
                }
                match self.ex[j].circuit(x) {
                    None => {
                        let mut touched = vec![j];
                        self.put(x, j);
                        let mut cur = x;
                        while let Some((prev, jj)) = pred[cur] {
                            self.take(cur, jj);
                            self.put(prev, jj);
                            touched.push(jj);
                            cur = prev;
                        }
                        touched.sort_unstable();
                        touched.dedup();
                        for j in touched {
                            self.refresh(j);
                        }
                        return true;
                    }
                    Some(c) => {
                        for y in c {
                            if !seen[y] {
                                seen[y] = true;
                                pred[y] = Some((x, j));
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        false
    }
}

pub fn partition(m: &MatroidHandle, sets: usize, copies: &[u64], max_copies: u64) -> Result<PartitionOutcome> {
    let n = m.len();
    if copies.len() != n {
        return Err(Error::input("copy vector length differs from ground size"));
    }
    let total: u64 = copies.iter().sum();
    if total > max_copies || (sets as u64) > max_copies {
        return Err(Error::capacity("matroid partition copies", max_copies as usize, total.max(sets as u64) as usize));
    }
    let empty = m.empty_set();
    let mut st = State {
        m,
        sets: vec![empty.clone(); sets],
        member: vec![vec![false; sets]; n],
        ex: (0..sets).map(|_| m.exchange(&empty)).collect(),
    };
    let mut placed = vec![0u64; n];
    let mut deficient = SubsetMask::empty(n);
    for e in 0..n {
        while placed[e] < copies[e] {
            if placed[e] as usize == sets || !st.augment(e) {
                deficient.insert(e);
                break;
            }
            placed[e] += 1;
        }
    }

    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sink = vec![false; n];
    for x in 0..n {
        for j in 0..sets {
            if st.member[x][j] {
                continue;
            }
            match st.ex[j].circuit(x) {
                None => sink[x] = true,
                Some(c) => out[x].extend(c),
            }
        }
        out[x].sort_unstable();
        out[x].dedup();
    }
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        for &y in &out[x] {
            rev[y].push(x);
        }
    }
    let reach = |starts: Vec<usize>, adj: &Vec<Vec<usize>>| {
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        for s in starts {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let to_sink = reach((0..n).filter(|&x| sink[x]).collect(), &rev);
    let from_deficient = reach(deficient.to_vec(), &out);
    Ok(PartitionOutcome {
        placed: placed.iter().sum(),
        sets: st.sets,
        minimal: SubsetMask::from_indices(n, (0..n).filter(|&x| from_deficient[x])),
        maximal: SubsetMask::from_indices(n, (0..n).filter(|&x| !to_sink[x])),
    })
}
