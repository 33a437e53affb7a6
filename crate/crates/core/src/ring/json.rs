//! Serialized forms of polynomials. Coefficients are written as `"p/q"`
//! strings so that no precision is lost.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Poly, Rational, WeightedRing};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub exps: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub weights: Vec<u32>,
    pub terms: Vec<TermJson>,
}

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Terms without the ring, for embedding in larger documents.
pub fn terms_to_json(p: &Poly) -> Vec<TermJson> {
    p.terms()
        .map(|(m, c)| TermJson { coef: format_rational(c), exps: m.exps().to_vec() })
        .collect()
}

pub fn terms_from_json(ring: &WeightedRing, terms: &[TermJson]) -> Result<Poly> {
    let mut p = Poly::zero(ring);
    for t in terms {
        if t.exps.len() != ring.nvars() {
            return Err(Error::Arity { expected: ring.nvars(), got: t.exps.len() });
        }
        p.add_term(ring.monomial(&t.exps), parse_rational(&t.coef)?);
    }
    Ok(p)
}

impl PolyJson {
    pub fn from_poly(p: &Poly) -> Self {
        PolyJson { weights: p.ring().weights().to_vec(), terms: terms_to_json(p) }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        let ring = WeightedRing::new(self.weights.clone())?;
        terms_from_json(&ring, &self.terms)
    }
}
