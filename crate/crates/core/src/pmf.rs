//! Base pmfs: λ-weighted and maximum-entropy pmfs, the product minimization
//! over `∏ λ^σ = 1`, strict homogeneity, λ-recovery, and decomposition of
//! doubly-uniform pair pmfs into matching pmfs.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matching::{bipartite_perfect_matching, Matching};
use crate::matroid::{components, enumerate_bases, MatroidHandle};
use crate::rational::{self, Rational};
use crate::sfm::fractional_arboricity;
use crate::subset::SubsetMask;
use crate::universal::{dep_set, polytope_violation, BasePmf};
use crate::weights::WeightVector;

pub const DEFAULT_BASE_LIMIT: usize = 100_000;

/// `μ_λ(B) ∝ ∏_{e∈B} λ(e)` and its usage vector.
pub fn lambda_pmf(m: &MatroidHandle, lambda: &[Rational], limit: usize) -> Result<(BasePmf<Rational>, Vec<Rational>)> {
    if lambda.len() != m.len() || lambda.iter().any(|l| !l.is_positive()) {
        return Err(Error::input("λ must be positive on every element"));
    }
    let bases = enumerate_bases(m, limit)?;
    let weights: Vec<Rational> = bases.iter().map(|b| b.iter().map(|e| lambda[e].clone()).product()).collect();
    let z: Rational = weights.iter().sum();
    let pmf = BasePmf { bases, mass: weights.into_iter().map(|w| w / &z).collect() };
    let eta = pmf.usage(m.len());
    Ok((pmf, eta))
}

#[derive(Clone, Debug)]
pub struct EntropyResult {
    pub pmf: BasePmf<f64>,
    pub entropy: f64,
    /// Bases that some pmf inducing `β` can charge.
    pub support: Vec<SubsetMask>,
    pub residual: f64,
}

/// Bases on the smallest face of the base polytope containing `β`.
pub fn supported_bases(m: &MatroidHandle, beta: &[Rational], limit: usize) -> Result<Vec<SubsetMask>> {
    if beta.len() != m.len() {
        return Err(Error::input("density length differs from ground set"));
    }
    if let Some(x) = polytope_violation(m, beta)? {
        return Err(Error::domain(format!(
            "point lies outside the base polytope; separating set {{{}}}",
            m.ground().names(&x).join(", ")
        )));
    }
    let tight: Vec<(SubsetMask, usize)> = (0..m.len())
        .map(|e| {
            dep_set(m, beta, e).map(|d| {
                let r = m.rank(&d);
                (d, r)
            })
        })
        .collect::<Result<_>>()?;
    Ok(enumerate_bases(m, limit)?
        .into_iter()
        .filter(|b| tight.iter().all(|(d, r)| b.intersection_count(d) == *r))
        .collect())
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let mx = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    mx + v.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
}

fn softmax(v: &[f64]) -> Vec<f64> {
    let l = log_sum_exp(v);
    v.iter().map(|x| (x - l).exp()).collect()
}

fn incidence(bases: &[SubsetMask], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(bases.len(), n, |i, e| if bases[i].contains(e) { 1.0 } else { 0.0 })
}

/// Damped Newton for `min_y log Σ_B exp(⟨a_B, y⟩) − ⟨c, y⟩` within the span of `proj`.
fn newton_logsumexp(
    a: &DMatrix<f64>,
    c: &DVector<f64>,
    proj: &DMatrix<f64>,
    max_iter: usize,
    grad_tol: f64,
    stop: impl Fn(&DVector<f64>) -> bool,
) -> (DVector<f64>, usize, f64) {
    let n = a.ncols();
    let f = |y: &DVector<f64>| log_sum_exp((a * y).as_slice()) - c.dot(y);
    let mut y = DVector::zeros(n);
    let mut gnorm = f64::INFINITY;
    for it in 0..max_iter {
        let p = DVector::from_vec(softmax((a * &y).as_slice()));
        let mean = a.transpose() * &p;
        let g = proj * (&mean - c);
        gnorm = g.amax();
        if gnorm <= grad_tol || stop(&y) {
            return (y, it, gnorm);
        }
        let centered = DMatrix::from_fn(a.nrows(), n, |i, e| a[(i, e)] - mean[e]);
        let weighted = DMatrix::from_fn(a.nrows(), n, |i, e| centered[(i, e)] * p[i]);
        let h = proj * (centered.transpose() * weighted) * proj;
        let pinv = h.clone().svd(true, true).pseudo_inverse(1e-12).expect("svd");
        let mut d = -&pinv * &g;
        let flat = &g - &h * (&pinv * &g);
        if flat.norm() > 1e-9 {
            d -= &flat * (10.0 / flat.norm());
        }
        let f0 = f(&y);
        let slope = g.dot(&d);
        let mut step = 1.0;
        loop {
            let next = &y + &d * step;
            if f(&next) <= f0 + 1e-4 * step * slope || step < 1e-12 {
                y = next;
                break;
            }
            step *= 0.5;
        }
    }
    (y, max_iter, gnorm)
}

/// The entropy-maximizing pmf among those with usage `β`.
pub fn max_entropy_pmf(m: &MatroidHandle, beta: &[Rational], limit: usize) -> Result<EntropyResult> {
    let support = supported_bases(m, beta, limit)?;
    let n = m.len();
    let b: Vec<f64> = beta.iter().map(rational::to_f64).collect();
    let a = incidence(&support, n);
    let c = DVector::from_vec(b.clone());
    let (y, _, _) = newton_logsumexp(&a, &c, &DMatrix::identity(n, n), 200, 1e-13, |_| false);
    let mass = softmax((&a * &y).as_slice());
    let pmf = BasePmf { bases: support.clone(), mass };
    let residual = pmf.usage(n).iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(EntropyResult { entropy: pmf.entropy(), pmf, support, residual })
}

#[derive(Clone, Debug)]
pub enum MinDetOutcome {
    /// Optimal `λ` with `∏ λ^σ = 1` and `Σ_B λ[B]`.
    Attained { lambda: Vec<f64>, value: f64, entropy_value: f64 },
    /// Infimum not attained; `vanishing` collects elements whose weight tends to zero.
    Boundary { vanishing: SubsetMask, infimum: f64, beta_feasible: bool },
}

#[derive(Clone, Debug)]
pub struct MinDetResult {
    pub outcome: MinDetOutcome,
    pub iterations: usize,
    pub gradient_norm: f64,
}

const DIVERGENCE: f64 = -40.0;

/// `inf Σ_B λ[B]` subject to `∏ λ(e)^{σ(e)} = 1`, attained exactly when
/// `β_σ = r(M)·σ/σ(E)` lies in the base polytope with every base supported.
pub fn min_det_solve(m: &MatroidHandle, sigma: &WeightVector, limit: usize) -> Result<MinDetResult> {
    sigma.check_len(m.len())?;
    m.ensure_loopless()?;
    let n = m.len();
    let scale = rational::int(m.full_rank() as i64) / sigma.total();
    let beta: Vec<Rational> = sigma.values().iter().map(|s| s * &scale).collect();
    let all = enumerate_bases(m, limit)?;
    let entropy = match max_entropy_pmf(m, &beta, limit) {
        Ok(r) => Some(r),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    let attained = entropy.as_ref().is_some_and(|r| r.support.len() == all.len());

    let s = DVector::from_vec(sigma.to_f64());
    let proj = DMatrix::identity(n, n) - &s * s.transpose() / s.norm_squared();
    let a = incidence(&all, n);
    let (x, iterations, gradient_norm) =
        newton_logsumexp(&a, &DVector::zeros(n), &proj, 500, if attained { 1e-13 } else { 0.0 }, |y| {
            !attained && y.min() < DIVERGENCE
        });
    let value = log_sum_exp((&a * &x).as_slice()).exp();
    let outcome = if attained {
        MinDetOutcome::Attained {
            lambda: x.iter().map(|v| v.exp()).collect(),
            value,
            entropy_value: entropy.as_ref().map_or(f64::NAN, |r| r.entropy.exp()),
        }
    } else {
        MinDetOutcome::Boundary {
            vanishing: SubsetMask::from_indices(n, (0..n).filter(|&e| x[e] < DIVERGENCE)),
            infimum: entropy.as_ref().map_or(0.0, |r| r.entropy.exp()),
            beta_feasible: entropy.is_some(),
        }
    };
    Ok(MinDetResult { outcome, iterations, gradient_norm })
}

#[derive(Clone, Debug)]
pub struct ComponentStrictness {
    pub set: SubsetMask,
    pub strict: bool,
    /// A proper subset reaching the component's density, when one exists.
    pub witness: Option<SubsetMask>,
}

#[derive(Clone, Debug)]
pub struct StrictReport {
    /// Strict σ-homogeneity: every component passes and all components share one density.
    pub strict: bool,
    /// The connected-case criterion applied to the whole matroid.
    pub whole_criterion: bool,
    pub components: Vec<ComponentStrictness>,
    pub ratios_equal: bool,
    /// `Some(attained)` from the product minimization when the bases fit the limit.
    pub min_det_attained: Option<bool>,
}

fn strict_connected(m: &MatroidHandle, sigma: &WeightVector) -> Result<(bool, Option<SubsetMask>)> {
    let (d, core) = fractional_arboricity(m, sigma)?;
    if !core.is_full() {
        return Ok((false, Some(core)));
    }
    if m.len() == 1 {
        return Ok((true, None));
    }
    for e in 0..m.len() {
        let keep: Vec<usize> = (0..m.len()).filter(|&x| x != e).collect();
        let sub = m.delete(&SubsetMask::from_indices(m.len(), [e]))?;
        let (de, ce) = fractional_arboricity(&sub, &sigma.restrict(&keep))?;
        if de == d {
            return Ok((false, Some(ce.lift(&keep, m.len()))));
        }
    }
    Ok((true, None))
}

pub fn is_strictly_homogeneous(m: &MatroidHandle, sigma: &WeightVector, limit: usize) -> Result<StrictReport> {
    sigma.check_len(m.len())?;
    m.ensure_loopless()?;
    let n = m.len();
    let whole_criterion = strict_connected(m, sigma)?.0;
    let mut comps = Vec::new();
    let mut ratios = Vec::new();
    for set in components(m) {
        let keep = set.to_vec();
        let sub = m.restrict(&set)?;
        let s = sigma.restrict(&keep);
        let (strict, witness) = strict_connected(&sub, &s)?;
        ratios.push(s.total() / rational::int(sub.full_rank() as i64));
        comps.push(ComponentStrictness { set, strict, witness: witness.map(|w| w.lift(&keep, n)) });
    }
    let ratios_equal = ratios.windows(2).all(|w| w[0] == w[1]);
    let min_det_attained = match min_det_solve(m, sigma, limit) {
        Ok(r) => Some(matches!(r.outcome, MinDetOutcome::Attained { .. })),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(StrictReport {
        strict: ratios_equal && comps.iter().all(|c| c.strict),
        whole_criterion,
        components: comps,
        ratios_equal,
        min_det_attained,
    })
}

/// `λ` with `μ_λ` equal to the maximum-entropy pmf of `β`, one element per component fixed to 1.
pub fn lambda_recover(m: &MatroidHandle, beta: &[Rational], limit: usize) -> Result<Vec<f64>> {
    if let Some(e) = beta.iter().position(|b| !b.is_positive()) {
        return Err(Error::domain(format!("density vanishes on {}; bases through it are unsupported", m.label(e))));
    }
    let all = enumerate_bases(m, limit)?;
    let ent = max_entropy_pmf(m, beta, limit)?;
    if ent.support.len() < all.len() {
        let missing = all.iter().find(|b| !ent.support.contains(b)).expect("missing base");
        return Err(Error::domain(format!("base {{{}}} carries no mass", m.ground().names(missing).join(", "))));
    }
    let a = incidence(&ent.pmf.bases, m.len());
    let rhs = DVector::from_iterator(ent.pmf.mass.len(), ent.pmf.mass.iter().map(|p| p.ln()));
    let x = a.clone().svd(true, true).solve(&rhs, 1e-12).map_err(|e| Error::domain(e.to_string()))?;
    let residual = (&a * &x - &rhs).amax();
    if residual > 1e-7 {
        return Err(Error::domain(format!("log-linear system inconsistent (residual {residual:e})")));
    }
    let mut lambda: Vec<f64> = x.iter().map(|v| v.exp()).collect();
    for c in components(m) {
        let first = c.iter().next().expect("nonempty component");
        let f = lambda[first];
        for e in c.iter() {
            lambda[e] /= f;
        }
    }
    Ok(lambda)
}

/// Spread each base's mass evenly over its `t`-subsets.
pub fn truncated_pmf(pmf: &BasePmf<Rational>, t: usize) -> Result<BasePmf<Rational>> {
    let mut acc: HashMap<SubsetMask, Rational> = HashMap::new();
    let mut order = Vec::new();
    for (b, p) in pmf.bases.iter().zip(&pmf.mass) {
        let elems = b.to_vec();
        if t > elems.len() {
            return Err(Error::input(format!("t = {t} exceeds base size {}", elems.len())));
        }
        let subsets = k_subsets(&elems, t);
        let share = p / rational::int(subsets.len() as i64);
        for s in subsets {
            let mask = SubsetMask::from_indices(b.len(), s);
            if !acc.contains_key(&mask) {
                order.push(mask.clone());
            }
            *acc.entry(mask).or_insert_with(Rational::zero) += &share;
        }
    }
    let mass = order.iter().map(|b| acc[b].clone()).collect();
    Ok(BasePmf { bases: order, mass })
}

fn k_subsets(elems: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if elems.len() < k {
        return Vec::new();
    }
    let mut out = k_subsets(&elems[1..], k - 1);
    for s in &mut out {
        s.insert(0, elems[0]);
    }
    out.extend(k_subsets(&elems[1..], k));
    out
}

/// `μ_f` puts `1/n` on each pair `(a_i, b_{f(i)})`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchingTerm {
    pub matching: Vec<usize>,
    pub coefficient: Rational,
}

/// Write a pmf on `[n] × [n]` with all marginals `1/n` as a convex combination of matching pmfs.
pub fn rank1_union_decompose(n: usize, u: &[Vec<Rational>]) -> Result<Vec<MatchingTerm>> {
    if n == 0 || u.len() != n || u.iter().any(|r| r.len() != n) {
        return Err(Error::input(format!("expected an {n}×{n} table")));
    }
    let marginal = rational::frac(1, n as i64);
    if u.iter().flatten().any(|x| x.is_negative()) {
        return Err(Error::input("negative mass"));
    }
    for i in 0..n {
        let row: Rational = u[i].iter().sum();
        let col: Rational = u.iter().map(|r| &r[i]).sum();
        if row != marginal || col != marginal {
            return Err(Error::input(format!("row or column {i} does not sum to 1/{n}")));
        }
    }
    let mut rest: Vec<Vec<Rational>> = u.to_vec();
    let mut out = Vec::new();
    for _ in 0..n * n {
        let Some((i0, j0)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| rest[i][j].is_positive())
            .min_by(|a, b| rest[a.0][a.1].cmp(&rest[b.0][b.1]))
        else {
            return Ok(out);
        };
        let support: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| rest[i][j].is_positive()).collect();
        let forced: Vec<(usize, usize)> = support.iter().cloned().filter(|&(i, j)| (i == i0) == (j == j0)).collect();
        let f = match bipartite_perfect_matching(n, n, &forced)? {
            Matching::Perfect(f) => f,
            Matching::HallViolator(_) => match bipartite_perfect_matching(n, n, &support)? {
                Matching::Perfect(f) => f,
                Matching::HallViolator(s) => {
                    return Err(Error::domain(format!("residual support has no perfect matching (left set {s:?})")))
                }
            },
        };
        let step = (0..n).map(|i| rest[i][f[i]].clone()).min().expect("n > 0");
        for i in 0..n {
            rest[i][f[i]] -= &step;
        }
        out.push(MatchingTerm { matching: f, coefficient: step * rational::int(n as i64) });
    }
    if rest.iter().flatten().all(|x| x.is_zero()) {
        Ok(out)
    } else {
        Err(Error::domain("decomposition did not terminate within n² rounds"))
    }
}

/// `Σ c_f μ_f` as an `n × n` table.
pub fn recompose(n: usize, terms: &[MatchingTerm]) -> Vec<Vec<Rational>> {
    let mut t = vec![vec![Rational::zero(); n]; n];
    let share = rational::frac(1, n as i64);
    for term in terms {
        for (i, &j) in term.matching.iter().enumerate() {
            t[i][j] += &term.coefficient * &share;
        }
    }
    t
}
