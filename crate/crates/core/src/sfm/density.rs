use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::partition::partition;
use crate::error::{Error, Result};
use crate::matroid::{greedy_base, MatroidHandle};
use crate::rational::{self, Rational};
use crate::subset::SubsetMask;
use crate::weights::WeightVector;

/// Strategy knobs for the parametric minimizations behind `S_σ` and `D_σ`.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Ground sets up to this size are minimized by enumeration.
    pub exhaustive_limit: usize,
    /// Upper bound on the number of element copies in a matroid partition.
    pub max_copies: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { exhaustive_limit: 12, max_copies: 5_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub strength: Rational,
    pub strength_set: SubsetMask,
    pub arboricity: Rational,
    pub core: SubsetMask,
    pub tau: BigInt,
    pub cover_number: BigInt,
}

pub(crate) struct Param {
    pub value: Rational,
    pub minimal: SubsetMask,
    pub maximal: SubsetMask,
}

fn to_u64(x: &BigInt, what: &str, limit: u64) -> Result<u64> {
    x.to_u64()
        .filter(|&v| v <= limit)
        .ok_or_else(|| Error::capacity(what, limit as usize, x.to_usize().unwrap_or(usize::MAX)))
}

/// Minimize `λ·r(X) − σ(X)` exactly; returns the value with the least and
/// greatest minimizers.
pub(crate) fn parametric(
    m: &MatroidHandle,
    lambda: &Rational,
    sigma: &WeightVector,
    cfg: &OracleConfig,
) -> Result<Param> {
    let n = m.len();
    let (w, d) = sigma.scaled();
    let p = lambda.numer() * &d;
    let q = lambda.denom().clone();
    let mut c: Vec<BigInt> = w.iter().map(|x| x * &q).collect();
    let g = c.iter().fold(p.clone(), |acc, x| acc.gcd(x));
    let p = &p / &g;
    for x in c.iter_mut() {
        *x = &*x / &g;
    }
    let scale = Rational::new(g, &q * &d);
    if n <= cfg.exhaustive_limit.min(30) {
        let p = p.to_i128().ok_or_else(|| Error::capacity("parametric scale", usize::MAX, usize::MAX))?;
        let c = c
            .iter()
            .map(|x| x.to_i128().ok_or_else(|| Error::capacity("parametric scale", usize::MAX, usize::MAX)))
            .collect::<Result<Vec<_>>>()?;
        let mut best = 0i128;
        let mut lo = 0u64;
        let mut hi = 0u64;
        for bits in 1..1u64 << n {
            let x = SubsetMask::from_bits(n, bits);
            let v = p * m.rank(&x) as i128 - x.iter().map(|e| c[e]).sum::<i128>();
            if v < best {
                best = v;
                lo = bits;
                hi = bits;
            } else if v == best {
                lo &= bits;
                hi |= bits;
            }
        }
        return Ok(Param {
            value: Rational::from_integer(BigInt::from(best)) * scale,
            minimal: SubsetMask::from_bits(n, lo),
            maximal: SubsetMask::from_bits(n, hi),
        });
    }
    let sets = to_u64(&p, "parametric set count", cfg.max_copies)? as usize;
    let copies = c.iter().map(|x| to_u64(x, "parametric copies", cfg.max_copies)).collect::<Result<Vec<_>>>()?;
    let out = partition(m, sets, &copies, cfg.max_copies)?;
    let total: u64 = copies.iter().sum();
    let value = BigInt::from(out.placed) - BigInt::from(total);
    Ok(Param { value: Rational::from_integer(value) * scale, minimal: out.minimal, maximal: out.maximal })
}

fn check(m: &MatroidHandle, sigma: &WeightVector) -> Result<()> {
    sigma.check_len(m.len())?;
    m.ensure_loopless()
}

/// `D_σ(M) = max σ(X)/r(X)` and its greatest optimal set (the core).
pub fn fractional_arboricity(m: &MatroidHandle, sigma: &WeightVector) -> Result<(Rational, SubsetMask)> {
    fractional_arboricity_with(m, sigma, &OracleConfig::default())
}

pub fn fractional_arboricity_with(
    m: &MatroidHandle,
    sigma: &WeightVector,
    cfg: &OracleConfig,
) -> Result<(Rational, SubsetMask)> {
    check(m, sigma)?;
    let mut lambda = sigma.total() / rational::int(m.full_rank() as i64);
    loop {
        let r = parametric(m, &lambda, sigma, cfg)?;
        if !r.value.is_negative() {
            return Ok((lambda, r.maximal));
        }
        let x = r.maximal;
        lambda = sigma.sum(&x) / rational::int(m.rank(&x) as i64);
    }
}

/// `S_σ(M) = min σ(X)/(r(E) − r(E−X))` and its greatest optimal set.
pub fn strength(m: &MatroidHandle, sigma: &WeightVector) -> Result<(Rational, SubsetMask)> {
    strength_with(m, sigma, &OracleConfig::default())
}

pub fn strength_with(m: &MatroidHandle, sigma: &WeightVector, cfg: &OracleConfig) -> Result<(Rational, SubsetMask)> {
    check(m, sigma)?;
    let r_e = m.full_rank();
    let total = sigma.total();
    let mut lambda = &total / rational::int(r_e as i64);
    loop {
        let r = parametric(m, &lambda, sigma, cfg)?;
        let at_e = &lambda * rational::int(r_e as i64) - &total;
        let x = r.minimal.complement();
        if r.value >= at_e {
            return Ok((lambda, x));
        }
        lambda = sigma.sum(&x) / rational::int((r_e - m.rank(&r.minimal)) as i64);
    }
}

pub fn density_report(m: &MatroidHandle, sigma: &WeightVector) -> Result<DensityReport> {
    let (strength, strength_set) = strength(m, sigma)?;
    let (arboricity, core) = fractional_arboricity(m, sigma)?;
    Ok(DensityReport {
        tau: rational::floor_int(&strength),
        cover_number: rational::ceil_int(&arboricity),
        strength,
        strength_set,
        arboricity,
        core,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Packing {
    /// `k` pairwise disjoint bases.
    Bases(Vec<SubsetMask>),
    /// `X` with `|E − X| < k·(r(E) − r(X))`.
    Deficient(SubsetMask),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Covering {
    /// `k` bases whose union is `E`.
    Bases(Vec<SubsetMask>),
    /// `X` with `|X| > k·r(X)`.
    Violating(SubsetMask),
}

pub fn base_packing(m: &MatroidHandle, k: usize) -> Result<Packing> {
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    let cfg = OracleConfig::default();
    let out = partition(m, k, &vec![1; m.len()], cfg.max_copies)?;
    if out.placed == (k * m.full_rank()) as u64 {
        Ok(Packing::Bases(out.sets))
    } else {
        Ok(Packing::Deficient(out.maximal))
    }
}

pub fn base_covering(m: &MatroidHandle, k: usize) -> Result<Covering> {
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    let cfg = OracleConfig::default();
    let n = m.len();
    let out = partition(m, k, &vec![1; n], cfg.max_copies)?;
    if out.placed == n as u64 {
        let bases = out
            .sets
            .iter()
            .map(|i| {
                let order: Vec<usize> = i.iter().chain((0..n).filter(|&e| !i.contains(e))).collect();
                greedy_base(m, &order)
            })
            .collect();
        Ok(Covering::Bases(bases))
    } else {
        Ok(Covering::Violating(out.minimal))
    }
}
