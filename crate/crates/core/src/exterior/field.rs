use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Poly, Rational, WeightedRing};

/// Polynomial vector field `sum_i v_i d/dx_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    ring: WeightedRing,
    coeffs: Vec<Poly>,
}

impl VectorField {
    pub fn new(ring: &WeightedRing, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() != ring.nvars() {
            return Err(Error::Arity { expected: ring.nvars(), got: coeffs.len() });
        }
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(VectorField { ring: ring.clone(), coeffs })
    }

    pub fn zero(ring: &WeightedRing) -> Self {
        VectorField { ring: ring.clone(), coeffs: vec![Poly::zero(ring); ring.nvars()] }
    }

    /// `d/dx_i`.
    pub fn coordinate(ring: &WeightedRing, i: usize) -> Self {
        let mut v = Self::zero(ring);
        v.coeffs[i] = Poly::one(ring);
        v
    }

    /// The radial (Euler) field `sum_i e_i x_i d/dx_i`.
    pub fn radial(ring: &WeightedRing) -> Self {
        let coeffs = (0..ring.nvars())
            .map(|i| Poly::var(ring, i).scale_int(ring.weight(i) as i64))
            .collect();
        VectorField { ring: ring.clone(), coeffs }
    }

    /// The linear field `z -> A z`, i.e. `v_i = sum_k a_ik x_k`.
    pub fn linear(ring: &WeightedRing, a: &[Vec<Rational>]) -> Result<Self> {
        let n = ring.nvars();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::Arity { expected: n, got: a.len() });
        }
        let coeffs = a
            .iter()
            .map(|row| {
                let mut p = Poly::zero(ring);
                for (k, c) in row.iter().enumerate() {
                    p.add_scaled(&Poly::var(ring, k), c);
                }
                p
            })
            .collect();
        Ok(VectorField { ring: ring.clone(), coeffs })
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn coefficient(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn coefficients(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// The derivation `f -> sum_i v_i df/dx_i`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (i, v) in self.coeffs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let df = f.partial(i).expect("index in range");
            out = &out + &(v * &df);
        }
        out
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        assert!(self.ring == other.ring, "fields from different rings");
        let coeffs = (0..self.ring.nvars())
            .map(|i| &self.apply(&other.coeffs[i]) - &other.apply(&self.coeffs[i]))
            .collect();
        VectorField { ring: self.ring.clone(), coeffs }
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c}) d{i}"))
            .collect();
        write!(f, "VectorField[{}]", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

/// Random field whose `i`-th coefficient has degree `e_i + d`, so that the
/// field is homogeneous of degree `d`.
pub fn random_field<R: rand::Rng + ?Sized>(ring: &WeightedRing, d: i64, rng: &mut R, bound: u32) -> VectorField {
    let coeffs = (0..ring.nvars())
        .map(|i| crate::ring::random_homogeneous_with(ring, ring.weight(i) as i64 + d, rng, bound))
        .collect();
    VectorField { ring: ring.clone(), coeffs }
}
