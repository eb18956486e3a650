//! Exact two-phase simplex over rationals for small dense programs
//! `min cᵀx  s.t.  Ax = b, x ≥ 0`.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// rows × (cols + 1); last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v /= &p;
        }
        let row = self.t[r].clone();
        for (i, other) in self.t.iter_mut().enumerate() {
            if i == r || other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for (v, w) in other.iter_mut().zip(&row) {
                if !w.is_zero() {
                    *v -= &f * w;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimize `cost` over the current basis using Bland's rule on columns `< allowed`.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let reduced = |j: usize, tab: &Tableau| -> Rational {
                let mut d = cost[j].clone();
                for (i, &b) in tab.basis.iter().enumerate() {
                    if !tab.t[i][j].is_zero() {
                        d -= &cost[b] * &tab.t[i][j];
                    }
                }
                d
            };
            let Some(enter) = (0..allowed).find(|&j| !self.basis.contains(&j) && reduced(j, self).is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][enter];
                if a.is_positive() {
                    let ratio = &self.t[i][self.cols] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Solve `min cᵀx  s.t.  Ax = b, x ≥ 0` exactly.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let cols = n + m;
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<Rational> = a[i].iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        row.resize(cols + 1, Rational::zero());
        row[n + i] = Rational::from_integer(1.into());
        row[cols] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut tab = Tableau { t, basis: (n..n + m).collect(), cols };

    let mut phase1 = vec![Rational::zero(); cols];
    for v in phase1.iter_mut().skip(n) {
        *v = Rational::from_integer(1.into());
    }
    tab.optimize(&phase1, cols);
    let infeas: Rational =
        tab.basis.iter().enumerate().filter(|(_, &bv)| bv >= n).map(|(i, _)| tab.t[i][cols].clone()).sum();
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis where possible
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, j);
            }
        }
    }
    let keep: Vec<usize> = (0..m).filter(|&i| tab.basis[i] < n).collect();
    tab.t = keep.iter().map(|&i| tab.t[i].clone()).collect();
    tab.basis = keep.iter().map(|&i| tab.basis[i]).collect();

    let mut cost = c.to_vec();
    cost.resize(cols, Rational::zero());
    if !tab.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        x[bv] = tab.t[i][cols].clone();
    }
    let value = x.iter().zip(c).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { x, value }
}

/// A nonnegative solution of `Ax = b`, if any.
pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, |r| r.len());
    match solve(a, b, &vec![Rational::zero(); n]) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn small_program() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![int(1), int(2), int(1), int(0)], vec![int(3), int(1), int(0), int(1)]];
        let out = solve(&a, &[int(4), int(6)], &[int(-1), int(-1), int(0), int(0)]);
        match out {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, frac(-14, 5));
                assert_eq!((x[0].clone(), x[1].clone()), (frac(8, 5), frac(6, 5)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![int(1), int(1)]];
        assert_eq!(solve(&a, &[int(-1)], &[int(0), int(0)]), LpOutcome::Infeasible);
        let a = vec![vec![int(1), int(-1)]];
        assert_eq!(solve(&a, &[int(1)], &[int(0), int(-1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        let x = feasible(&a, &[int(1), int(2)]).unwrap();
        assert_eq!(&x[0] + &x[1], int(1));
    }
}
