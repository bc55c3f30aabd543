use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::{ratio_u, Rational};

/// A probability distribution on macro labels with exact weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MacroDistribution(Vec<Rational>);

impl MacroDistribution {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::BadDistribution("no labels".into()));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::BadDistribution("negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::BadDistribution(format!("weights sum to {total}")));
        }
        Ok(MacroDistribution(weights))
    }

    /// Normalises non-negative weights with a positive total.
    pub fn normalized(weights: Vec<Rational>) -> Result<Self> {
        let total: Rational = weights.iter().sum();
        if total.is_zero() || weights.iter().any(|w| w.is_negative()) {
            return Err(Error::BadDistribution("weights cannot be normalised".into()));
        }
        Self::new(weights.into_iter().map(|w| w / &total).collect())
    }

    pub fn uniform(k: usize) -> Self {
        MacroDistribution(vec![ratio_u(1, k); k])
    }

    pub fn point_mass(k: usize, a: usize) -> Self {
        let mut w = vec![Rational::zero(); k];
        w[a] = Rational::one();
        MacroDistribution(w)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn weight(&self, a: usize) -> &Rational {
        &self.0[a]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Labels carrying positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&a| self.0[a].is_positive()).collect()
    }

    pub(crate) fn from_vec_unchecked(w: Vec<Rational>) -> Self {
        MacroDistribution(w)
    }
}
