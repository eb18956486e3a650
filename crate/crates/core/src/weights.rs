use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::subset::SubsetMask;

/// Strictly positive rational weight per element, in ground-set order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    values: Vec<Rational>,
}

impl WeightVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_positive()) {
            return Err(Error::input(format!("weight at position {} is not positive", i + 1)));
        }
        Ok(WeightVector { values })
    }

    pub fn ones(n: usize) -> Self {
        WeightVector { values: vec![Rational::one(); n] }
    }

    pub fn from_ints(xs: &[i64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn sum(&self, x: &SubsetMask) -> Rational {
        x.iter().fold(Rational::zero(), |acc, i| acc + &self.values[i])
    }

    pub fn total(&self) -> Rational {
        self.values.iter().fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn is_unit(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    pub fn restrict(&self, keep: &[usize]) -> Self {
        WeightVector { values: keep.iter().map(|&i| self.values[i].clone()).collect() }
    }

    pub fn concat(parts: &[&WeightVector]) -> Self {
        WeightVector { values: parts.iter().flat_map(|p| p.values.iter().cloned()).collect() }
    }

    /// Integers `w` and a common denominator `d` with `σ = w / d`.
    pub fn scaled(&self) -> (Vec<BigInt>, BigInt) {
        let d = rational::common_denominator(&self.values);
        let w = self.values.iter().map(|v| (v * Rational::from_integer(d.clone())).to_integer()).collect();
        (w, d)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(rational::to_f64).collect()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::input(format!("weight vector has {} entries for a ground set of size {n}", self.len())));
        }
        Ok(())
    }
}
