//! Graded polynomial rings over the rationals.
//!
//! A [`WeightedRing`] is `Q[x_0, ..., x_m]` with `deg(x_i) = e_i > 0`.
//! Polynomials are sparse maps from exponent vectors to nonzero reduced
//! rationals, iterated in graded reverse-lexicographic order.

mod monomial;
mod poly;
pub mod json;

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};

pub use monomial::Monomial;
pub(crate) use monomial::Exps;
pub(crate) use poly::common_map_degree;
pub use poly::{random_homogeneous, random_homogeneous_with, Poly};

pub type Rational = BigRational;

/// Polynomial ring with a positive weight attached to every variable.
#[derive(Clone)]
pub struct WeightedRing {
    weights: Arc<[u32]>,
}

impl WeightedRing {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Input("a ring needs at least one variable".into()));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::Input(format!("weights must be positive, got {weights:?}")));
        }
        if weights.len() > 63 {
            return Err(Error::Input("at most 63 variables are supported".into()));
        }
        Ok(WeightedRing { weights: weights.into() })
    }

    /// The standard-graded ring in `nvars` variables (all weights 1).
    pub fn standard(nvars: usize) -> Self {
        Self::new(vec![1; nvars]).expect("standard ring")
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn is_standard(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn weight_sum(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).sum()
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.nvars() {
            Ok(())
        } else {
            Err(Error::Index { index: i, nvars: self.nvars() })
        }
    }

    pub fn monomial(&self, exps: &[u16]) -> Monomial {
        assert_eq!(exps.len(), self.nvars(), "exponent vector length");
        let deg = exps.iter().zip(self.weights.iter()).map(|(&e, &w)| e as u32 * w).sum();
        Monomial::from_parts(deg, exps.iter().copied().collect())
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial::from_parts(0, std::iter::repeat(0).take(self.nvars()).collect())
    }

    pub fn var_monomial(&self, i: usize) -> Monomial {
        let mut exps: Exps = std::iter::repeat(0).take(self.nvars()).collect();
        exps[i] = 1;
        Monomial::from_parts(self.weights[i], exps)
    }

    /// All monomials of weighted degree `delta`, largest first in the term order.
    pub fn monomials_of_degree(&self, delta: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if delta < 0 {
            return out;
        }
        let mut exps: Exps = std::iter::repeat(0).take(self.nvars()).collect();
        self.enumerate(0, delta as u32, &mut exps, &mut out);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    fn enumerate(&self, var: usize, remaining: u32, exps: &mut Exps, out: &mut Vec<Monomial>) {
        let w = self.weights[var];
        if var + 1 == self.nvars() {
            if remaining % w == 0 {
                exps[var] = (remaining / w) as u16;
                let deg = exps.iter().zip(self.weights.iter()).map(|(&e, &w)| e as u32 * w).sum();
                out.push(Monomial::from_parts(deg, exps.clone()));
                exps[var] = 0;
            }
            return;
        }
        let mut e = 0;
        while e * w <= remaining {
            exps[var] = e as u16;
            self.enumerate(var + 1, remaining - e * w, exps, out);
            e += 1;
        }
        exps[var] = 0;
    }

    /// `dim (S_e)_delta`; zero for negative degrees.
    pub fn graded_dimension(&self, delta: i64) -> usize {
        if delta < 0 {
            return 0;
        }
        // Coefficient of t^delta in prod 1/(1 - t^{e_i}).
        let d = delta as usize;
        let mut counts = vec![0usize; d + 1];
        counts[0] = 1;
        for &w in self.weights.iter() {
            let w = w as usize;
            for k in w..=d {
                counts[k] += counts[k - w];
            }
        }
        counts[d]
    }
}

impl PartialEq for WeightedRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.weights, &other.weights) || self.weights == other.weights
    }
}

impl Eq for WeightedRing {}

impl std::hash::Hash for WeightedRing {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.weights.hash(state)
    }
}

impl fmt::Debug for WeightedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedRing{:?}", &*self.weights)
    }
}
