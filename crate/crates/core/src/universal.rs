//! Universal density and principal partition.

use std::ops::Deref;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lp;
use crate::matroid::{enumerate_bases, MatroidHandle};
use crate::minnorm::{min_norm_point, PointSet};
use crate::rational::{self, Rational};
use crate::sfm::{
    fractional_arboricity_with, parametric, sfm_minimize_with, strength_with, FnSet, OracleConfig, SfmConfig,
    SfmStrategy,
};
use crate::subset::SubsetMask;
use crate::weights::WeightVector;

/// Exact per-element density in ground-set order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityVector {
    values: Vec<Rational>,
}

impl DensityVector {
    pub fn new(values: Vec<Rational>) -> Self {
        DensityVector { values }
    }

    pub fn constant(n: usize, v: Rational) -> Self {
        DensityVector { values: vec![v; n] }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn sum(&self, x: &SubsetMask) -> Rational {
        x.iter().fold(Rational::zero(), |acc, i| acc + &self.values[i])
    }

    pub fn total(&self) -> Rational {
        self.values.iter().sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(rational::to_f64).collect()
    }

    /// `x(e) / σ(e)`.
    pub fn ratios(&self, sigma: &WeightVector) -> Vec<Rational> {
        self.values.iter().zip(sigma.values()).map(|(x, s)| x / s).collect()
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.values.iter().zip(other).map(|(a, b)| (rational::to_f64(a) - b).abs()).fold(0.0, f64::max)
    }
}

impl Deref for DensityVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.values
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalPartition {
    /// Ascending values of `σ⁻¹η*`.
    pub levels: Vec<Rational>,
    /// `A_i`, the elements at level `i`.
    pub blocks: Vec<SubsetMask>,
    /// `E_i = E − (A_1 ∪ … ∪ A_{i−1})`.
    pub nested_sets: Vec<SubsetMask>,
    pub strength: Rational,
    pub arboricity: Rational,
    pub tau: BigInt,
    pub cover_number: BigInt,
}

impl PrincipalPartition {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Level index of element `e`.
    pub fn level_of(&self, e: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(e)).expect("blocks cover E")
    }
}

pub fn universal_density(m: &MatroidHandle, sigma: &WeightVector) -> Result<(DensityVector, PrincipalPartition)> {
    universal_density_with(m, sigma, &OracleConfig::default())
}

/// Repeatedly take the core of the current minor, fix `η* = σ/D_σ` there and contract it.
pub fn universal_density_with(
    m: &MatroidHandle,
    sigma: &WeightVector,
    cfg: &OracleConfig,
) -> Result<(DensityVector, PrincipalPartition)> {
    sigma.check_len(m.len())?;
    m.ensure_loopless()?;
    let n = m.len();
    let mut eta = vec![Rational::zero(); n];
    let mut alive: Vec<usize> = (0..n).collect();
    let mut cur = m.clone();
    let mut levels = Vec::new();
    let mut blocks = Vec::new();
    let mut nested_sets = Vec::new();
    loop {
        let w = sigma.restrict(&alive);
        let (d, core) = fractional_arboricity_with(&cur, &w, cfg)?;
        nested_sets.push(SubsetMask::from_indices(n, alive.iter().copied()));
        blocks.push(core.lift(&alive, n));
        for i in core.iter() {
            eta[alive[i]] = sigma.get(alive[i]) / &d;
        }
        levels.push(d.recip());
        if core.is_full() {
            break;
        }
        cur = cur.contract(&core)?;
        alive = alive.iter().enumerate().filter(|(i, _)| !core.contains(*i)).map(|(_, &e)| e).collect();
    }
    let arboricity = levels[0].recip();
    let strength = levels[levels.len() - 1].recip();
    let pp = PrincipalPartition {
        tau: rational::floor_int(&strength),
        cover_number: rational::ceil_int(&arboricity),
        levels,
        blocks,
        nested_sets,
        strength,
        arboricity,
    };
    Ok((DensityVector::new(eta), pp))
}

/// `S_σ(M) == σ(E)/r(E)`.
pub fn is_homogeneous(m: &MatroidHandle, sigma: &WeightVector) -> Result<bool> {
    let (s, _) = strength_with(m, sigma, &OracleConfig::default())?;
    Ok(s == sigma.total() / rational::int(m.full_rank() as i64))
}

fn indicator(b: &SubsetMask) -> Vec<f64> {
    (0..b.len()).map(|i| if b.contains(i) { 1.0 } else { 0.0 }).collect()
}

/// Minimum of `Σ w(e) y(e)²` over the convex hull of `points`.
pub fn family_min_2norm(points: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let start = points[0].clone();
    let max_iter = 50 * points.len() + 1000;
    min_norm_point(&PointSet { points }, w, start, 1e-15, max_iter).x
}

/// Brute-force `argmin Σ σ⁻¹η²` over `conv(𝓑)` from enumerated bases.
pub fn oracle_min_2norm(m: &MatroidHandle, sigma: &WeightVector, limit: usize) -> Result<Vec<f64>> {
    sigma.check_len(m.len())?;
    let bases = enumerate_bases(m, limit)?;
    let points: Vec<Vec<f64>> = bases.iter().map(indicator).collect();
    let w: Vec<f64> = sigma.to_f64().iter().map(|s| 1.0 / s).collect();
    Ok(family_min_2norm(&points, &w))
}

/// Round each value to the nearest rational with denominator at most `max_den`,
/// failing when the rounding error exceeds half the guaranteed gap.
pub fn certified_round(values: &[f64], max_den: u64) -> Option<Vec<Rational>> {
    let slack = 0.5 / (max_den as f64 * max_den as f64);
    values
        .iter()
        .map(|&v| {
            let q = rational::approximate(v, max_den);
            ((rational::to_f64(&q) - v).abs() < slack).then_some(q)
        })
        .collect()
}

/// Denominator bound for universal densities under `σ`: the integer total of the scaled weights.
pub fn density_denominator_bound(sigma: &WeightVector) -> u64 {
    let (w, _) = sigma.scaled();
    w.iter().sum::<BigInt>().to_u64().unwrap_or(u64::MAX)
}

/// Denominator bound for `σ − η*`.
fn complement_denominator_bound(sigma: &WeightVector) -> u64 {
    let (w, d) = sigma.scaled();
    (w.iter().sum::<BigInt>() * d).to_u64().unwrap_or(u64::MAX)
}

/// A set certifying `x ∉ conv(𝓑)`: `X` with `x(X) > r(X)`, a negative coordinate, or `E` when `x(E) ≠ r(E)`.
pub fn polytope_violation(m: &MatroidHandle, x: &[Rational]) -> Result<Option<SubsetMask>> {
    let n = m.len();
    if x.len() != n {
        return Err(Error::input("density length differs from ground size"));
    }
    if let Some(e) = x.iter().position(|v| v.is_negative()) {
        return Ok(Some(SubsetMask::from_indices(n, [e])));
    }
    let total: Rational = x.iter().sum();
    if total != rational::int(m.full_rank() as i64) {
        return Ok(Some(m.full()));
    }
    let keep: Vec<usize> = (0..n).filter(|&e| x[e].is_positive()).collect();
    let support = SubsetMask::from_indices(n, keep.iter().copied());
    let sub = m.restrict(&support)?;
    let w = WeightVector::new(keep.iter().map(|&e| x[e].clone()).collect())?;
    let p = parametric(&sub, &Rational::one(), &w, &OracleConfig::default())?;
    Ok(p.value.is_negative().then(|| p.maximal.lift(&keep, n)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexLevel {
    pub ratio: Rational,
    pub set: SubsetMask,
    pub mass: Rational,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexReport {
    pub in_polytope: bool,
    pub levels: Vec<LexLevel>,
    pub holds: bool,
}

/// Check `x(S_i) = r(S_i)` on every level set of `x/σ`.
pub fn verify_lexicographic(m: &MatroidHandle, sigma: &WeightVector, x: &[Rational]) -> Result<LexReport> {
    sigma.check_len(m.len())?;
    let in_polytope = polytope_violation(m, x)?.is_none();
    let c: Vec<Rational> = x.iter().zip(sigma.values()).map(|(a, s)| a / s).collect();
    let mut distinct = c.clone();
    distinct.sort();
    distinct.dedup();
    let n = m.len();
    let levels: Vec<LexLevel> = distinct
        .into_iter()
        .map(|ci| {
            let set = SubsetMask::from_indices(n, (0..n).filter(|&e| c[e] <= ci));
            let mass = set.iter().map(|e| &x[e]).sum();
            let rank = m.rank(&set);
            LexLevel { ratio: ci, set, mass, rank }
        })
        .collect();
    let holds = in_polytope && levels.iter().all(|l| l.mass == rational::int(l.rank as i64));
    Ok(LexReport { in_polytope, levels, holds })
}

/// `{v : x + ε(1_u − 1_v) ∈ conv(𝓑) for some ε > 0}`, the least tight set containing `u`.
pub fn dep_set(m: &MatroidHandle, x: &[Rational], u: usize) -> Result<SubsetMask> {
    let n = m.len();
    if u >= n {
        return Err(Error::input(format!("element index {u} out of range")));
    }
    if let Some(v) = polytope_violation(m, x)? {
        return Err(Error::domain(format!("point outside the base polytope; violated on {:?}", m.ground().names(&v))));
    }
    let f = FnSet {
        n,
        f: |s: &SubsetMask| {
            let mut v = rational::int(m.rank(s) as i64) - s.iter().map(|e| &x[e]).sum::<Rational>();
            if s.contains(u) {
                v -= Rational::one();
            }
            v
        },
    };
    let cfg = SfmConfig { exhaustive_limit: 22, strategy: SfmStrategy::ExhaustiveOnly };
    Ok(sfm_minimize_with(&f, &cfg)?.minimizer)
}

#[derive(Clone, Debug)]
pub struct DualReport {
    pub eta: DensityVector,
    /// `σ − η*`, the expected optimum over the complementary family.
    pub expected: Vec<Rational>,
    /// Floating optimum over `{σ − 1_B}` and its certified rounding.
    pub oracle: Vec<f64>,
    pub oracle_rounded: Option<Vec<Rational>>,
    /// Exact universal density of the dual matroid (zero on its loops), for unit weights.
    pub dual_exact: Option<Vec<Rational>>,
    pub holds: bool,
}

/// Verify `η* + η∘* = σ` against the complementary family `{σ − 1_B}`.
pub fn dual_density_check(m: &MatroidHandle, sigma: &WeightVector, limit: usize) -> Result<DualReport> {
    if sigma.values().iter().any(|s| *s < Rational::one()) {
        return Err(Error::input("complementary family needs σ ≥ 1 everywhere"));
    }
    let (eta, _) = universal_density(m, sigma)?;
    let n = m.len();
    let expected: Vec<Rational> = (0..n).map(|e| sigma.get(e) - &eta[e]).collect();
    let sf = sigma.to_f64();
    let points: Vec<Vec<f64>> = enumerate_bases(m, limit)?
        .iter()
        .map(|b| (0..n).map(|e| sf[e] - if b.contains(e) { 1.0 } else { 0.0 }).collect())
        .collect();
    let w: Vec<f64> = sf.iter().map(|s| 1.0 / s).collect();
    let oracle = family_min_2norm(&points, &w);
    let oracle_rounded = certified_round(&oracle, complement_denominator_bound(sigma));
    let dual_exact = if sigma.is_unit() { Some(dual_unit_density(m)?) } else { None };
    let holds = oracle_rounded.as_deref() == Some(&expected[..]) && dual_exact.as_ref().is_none_or(|d| d == &expected);
    Ok(DualReport { eta, expected, oracle, oracle_rounded, dual_exact, holds })
}

/// Unweighted universal density of `M*`, computed on its non-loops and zero on its loops.
pub fn dual_unit_density(m: &MatroidHandle) -> Result<Vec<Rational>> {
    let d = m.dual();
    let n = m.len();
    let loops = d.loops().clone();
    let mut out = vec![Rational::zero(); n];
    if loops.is_full() {
        return Ok(out);
    }
    let keep: Vec<usize> = loops.complement().to_vec();
    let inner = d.delete(&loops)?;
    let (eta, _) = universal_density(&inner, &WeightVector::ones(keep.len()))?;
    for (i, &e) in keep.iter().enumerate() {
        out[e] = eta[i].clone();
    }
    Ok(out)
}

/// A probability mass function over bases.
#[derive(Clone, Debug, PartialEq)]
pub struct BasePmf<T = f64> {
    pub bases: Vec<SubsetMask>,
    pub mass: Vec<T>,
}

impl BasePmf<Rational> {
    /// `Nᵀμ`.
    pub fn usage(&self, n: usize) -> Vec<Rational> {
        let mut u = vec![Rational::zero(); n];
        for (b, p) in self.bases.iter().zip(&self.mass) {
            for e in b.iter() {
                u[e] += p;
            }
        }
        u
    }

    pub fn total(&self) -> Rational {
        self.mass.iter().sum()
    }
}

impl BasePmf<f64> {
    pub fn usage(&self, n: usize) -> Vec<f64> {
        let mut u = vec![0.0; n];
        for (b, p) in self.bases.iter().zip(&self.mass) {
            for e in b.iter() {
                u[e] += p;
            }
        }
        u
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// `−Σ μ log μ` with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        -self.mass.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
    }
}

/// Exact pmf with `Nᵀμ = x` by linear programming over enumerated bases.
pub fn witness_pmf(m: &MatroidHandle, x: &[Rational], limit: usize) -> Result<BasePmf<Rational>> {
    let n = m.len();
    let bases = enumerate_bases(m, limit)?;
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|e| bases.iter().map(|b| if b.contains(e) { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    a.push(vec![Rational::one(); bases.len()]);
    let mut rhs = x.to_vec();
    rhs.push(Rational::one());
    let mu = lp::feasible(&a, &rhs).ok_or_else(|| Error::domain("point is not a convex combination of bases"))?;
    let (bases, mass): (Vec<_>, Vec<_>) = bases.into_iter().zip(mu).filter(|(_, p)| p.is_positive()).unzip();
    Ok(BasePmf { bases, mass })
}

/// `min_{η ∈ conv(𝓑)} max_e η(e)/σ(e)` by exact LP.
pub fn min_max_ratio(m: &MatroidHandle, sigma: &WeightVector, limit: usize) -> Result<Rational> {
    let n = m.len();
    let bases = enumerate_bases(m, limit)?;
    let k = bases.len();
    // columns: μ_B (k), t, slack_e (n)
    let cols = k + 1 + n;
    let mut a = Vec::with_capacity(n + 1);
    for e in 0..n {
        let inv = sigma.get(e).recip();
        let mut row = vec![Rational::zero(); cols];
        for (j, b) in bases.iter().enumerate() {
            if b.contains(e) {
                row[j] = inv.clone();
            }
        }
        row[k] = -Rational::one();
        row[k + 1 + e] = Rational::one();
        a.push(row);
    }
    let mut sum = vec![Rational::zero(); cols];
    for v in sum.iter_mut().take(k) {
        *v = Rational::one();
    }
    a.push(sum);
    let mut b = vec![Rational::zero(); n];
    b.push(Rational::one());
    let mut c = vec![Rational::zero(); cols];
    c[k] = Rational::one();
    match lp::solve(&a, &b, &c) {
        lp::LpOutcome::Optimal { value, .. } => Ok(value),
        other => Err(Error::domain(format!("min-max program not optimal: {other:?}"))),
    }
}
