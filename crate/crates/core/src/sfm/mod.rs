//! Submodular function minimization and the matroid densities built on it.

mod density;
mod partition;

pub(crate) use density::parametric;
pub use density::{
    base_covering, base_packing, density_report, fractional_arboricity, fractional_arboricity_with, strength,
    strength_with, Covering, DensityReport, OracleConfig, Packing,
};
pub use partition::{partition, PartitionOutcome};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::minnorm::{min_norm_point, LinearOracle};
use crate::rational::{self, Rational};
use crate::subset::SubsetMask;

/// Exact set-function oracle on `{0, .., len-1}`.
pub trait SetFunction {
    fn len(&self) -> usize;
    fn eval(&self, x: &SubsetMask) -> Rational;
}

/// Adapter turning a closure into a [`SetFunction`].
pub struct FnSet<F> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(&SubsetMask) -> Rational> SetFunction for FnSet<F> {
    fn len(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &SubsetMask) -> Rational {
        (self.f)(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SfmResult {
    /// The inclusion-minimal minimizer.
    pub minimizer: SubsetMask,
    pub value: Rational,
    /// The inclusion-maximal minimizer.
    pub maximal_minimizer: SubsetMask,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfmStrategy {
    /// Exhaustive up to `exhaustive_limit`, minimum-norm point beyond.
    Ladder,
    /// Exhaustive only; larger ground sets are a capacity error.
    ExhaustiveOnly,
}

#[derive(Clone, Copy, Debug)]
pub struct SfmConfig {
    pub exhaustive_limit: usize,
    pub strategy: SfmStrategy,
}

impl Default for SfmConfig {
    fn default() -> Self {
        SfmConfig { exhaustive_limit: 22, strategy: SfmStrategy::Ladder }
    }
}

pub fn sfm_minimize(f: &dyn SetFunction) -> Result<SfmResult> {
    sfm_minimize_with(f, &SfmConfig::default())
}

pub fn sfm_minimize_with(f: &dyn SetFunction, cfg: &SfmConfig) -> Result<SfmResult> {
    let n = f.len();
    if n <= cfg.exhaustive_limit.min(63) {
        return Ok(exhaustive(f));
    }
    match cfg.strategy {
        SfmStrategy::ExhaustiveOnly => {
            Err(Error::capacity("exhaustive minimization ground set", cfg.exhaustive_limit, n))
        }
        SfmStrategy::Ladder => Ok(min_norm(f)),
    }
}

fn exhaustive(f: &dyn SetFunction) -> SfmResult {
    let n = f.len();
    let base = f.eval(&SubsetMask::empty(n));
    let mut best = Rational::zero();
    let mut lo = 0u64;
    let mut hi = 0u64;
    for bits in 1..1u64 << n {
        let v = f.eval(&SubsetMask::from_bits(n, bits)) - &base;
        if v < best {
            best = v;
            lo = bits;
            hi = bits;
        } else if v == best {
            lo &= bits;
            hi |= bits;
        }
    }
    SfmResult {
        minimizer: SubsetMask::from_bits(n, lo),
        value: best + base,
        maximal_minimizer: SubsetMask::from_bits(n, hi),
    }
}

/// Greedy vertices of the base polytope of `f - f(∅)`.
struct BaseGreedy<'a> {
    f: &'a dyn SetFunction,
    offset: f64,
}

impl LinearOracle for BaseGreedy<'_> {
    fn dim(&self) -> usize {
        self.f.len()
    }

    fn argmin(&self, g: &[f64]) -> Vec<f64> {
        let n = self.f.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| g[a].total_cmp(&g[b]).then(a.cmp(&b)));
        let mut x = vec![0.0; n];
        let mut s = SubsetMask::empty(n);
        let mut prev = 0.0;
        for e in order {
            s.insert(e);
            let v = rational::to_f64(&self.f.eval(&s)) - self.offset;
            x[e] = v - prev;
            prev = v;
        }
        x
    }
}

/// Fujishige–Wolfe: the minimum-norm base `x*` orders the elements; the best
/// prefix under exact evaluation is returned.
fn min_norm(f: &dyn SetFunction) -> SfmResult {
    let n = f.len();
    let empty = SubsetMask::empty(n);
    let f0 = f.eval(&empty);
    let oracle = BaseGreedy { f, offset: rational::to_f64(&f0) };
    let start = oracle.argmin(&vec![0.0; n]);
    let mn = min_norm_point(&oracle, &vec![1.0; n], start, 1e-12, 20 * n + 1000);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| mn.x[a].total_cmp(&mn.x[b]).then(a.cmp(&b)));
    let mut best = f0.clone();
    let mut lo = 0usize;
    let mut hi = 0usize;
    let mut s = empty.clone();
    for (k, &e) in order.iter().enumerate() {
        s.insert(e);
        let v = f.eval(&s);
        if v < best {
            best = v;
            lo = k + 1;
            hi = k + 1;
        } else if v == best {
            hi = k + 1;
        }
    }
    SfmResult {
        minimizer: SubsetMask::from_indices(n, order[..lo].iter().copied()),
        value: best,
        maximal_minimizer: SubsetMask::from_indices(n, order[..hi].iter().copied()),
    }
}

#[cfg(test)]
mod tests;
