//! Weighted matroid densities: universal density and principal partition,
//! strength and fractional arboricity, truncation spectra, the minimum
//! Kullback–Leibler divergence problem over the base polytope, base pmfs,
//! and the removal-number and addable-edge applications.

pub mod applications;
pub mod demo;
pub mod descriptor;
pub mod error;
pub mod gen;
pub mod graph;
pub mod kl;
pub mod lp;
pub mod matching;
pub mod matroid;
pub mod minnorm;
pub mod pmf;
pub mod rational;
pub mod sfm;
pub mod spectrum;
pub mod subset;
pub mod universal;
pub mod weights;

pub use error::{Error, Result};
pub use graph::Graph;
pub use matroid::{GroundSet, MatroidHandle};
pub use rational::Rational;
pub use subset::SubsetMask;
pub use weights::WeightVector;
