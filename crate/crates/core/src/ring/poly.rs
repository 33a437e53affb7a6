use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::{Monomial, Rational, WeightedRing};
use crate::error::{Error, Result};
use crate::rng;

/// Sparse polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: WeightedRing,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(ring: &WeightedRing) -> Self {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &WeightedRing) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &WeightedRing, c: Rational) -> Self {
        Self::term(ring, ring.one_monomial(), c)
    }

    pub fn from_int(ring: &WeightedRing, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(ring: &WeightedRing, i: usize) -> Self {
        Self::term(ring, ring.var_monomial(i), Rational::one())
    }

    pub fn term(ring: &WeightedRing, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, combining
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(ring: &WeightedRing, iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Poly::zero(ring);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms, largest monomial first.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.keys().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        self.check_ring(other);
        if c.is_zero() {
            return;
        }
        for (m, a) in other.terms.iter() {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Poly {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// The common weighted degree of all terms.
    pub fn weighted_degree(&self) -> Result<i64> {
        let mut iter = self.terms.keys();
        let first = iter.next().ok_or(Error::ZeroPolynomial)?.degree() as i64;
        // terms are sorted by degree, so comparing the extremes suffices
        let last = self.terms.keys().next_back().unwrap().degree() as i64;
        if first != last {
            return Err(Error::Inhomogeneous(last, first));
        }
        Ok(first)
    }

    /// Zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.weighted_degree().is_ok()
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Result<Poly> {
        self.ring.check_index(i)?;
        let w = self.ring.weight(i);
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            let mono = Monomial::from_parts(m.deg - w, exps);
            terms.insert(mono, c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The composite `self(f_0, ..., f_m)` where `self` lives in the target
    /// ring and the `f_i` in a common source ring with `deg f_i = k * e_i`.
    pub fn substitute(&self, f: &[Poly]) -> Result<Poly> {
        let nvars = self.ring.nvars();
        if f.len() != nvars {
            return Err(Error::Arity { expected: nvars, got: f.len() });
        }
        let source = f[0].ring().clone();
        if f.iter().any(|p| p.ring() != &source) {
            return Err(Error::RingMismatch);
        }
        common_map_degree(&self.ring, f)?;
        let mut powers: HashMap<(usize, u16), Poly> = HashMap::new();
        let mut out = Poly::zero(&source);
        for (m, c) in self.terms.iter() {
            let mut prod = Poly::constant(&source, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers.entry((i, e)).or_insert_with(|| f[i].pow(e as u32));
                prod = &prod * &*pw;
                if prod.is_zero() {
                    break;
                }
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    fn check_ring(&self, other: &Poly) {
        assert!(self.ring == other.ring, "polynomials from different rings");
    }

    /// Largest absolute value among numerators and denominators (diagnostic).
    pub fn height(&self) -> BigInt {
        self.terms
            .values()
            .flat_map(|c| [c.numer().abs(), c.denom().clone()])
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

/// Checks that nonzero `f_i` have degrees `k * e_i` for one common `k` and
/// returns it (`None` when every `f_i` vanishes).
pub(crate) fn common_map_degree(target: &WeightedRing, f: &[Poly]) -> Result<Option<i64>> {
    let mut k: Option<i64> = None;
    for (i, p) in f.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let d = p.weighted_degree()?;
        let e = target.weight(i) as i64;
        if d % e != 0 {
            return Err(Error::DegreeMismatch(format!(
                "component {i} has degree {d}, not a multiple of its weight {e}"
            )));
        }
        match k {
            None => k = Some(d / e),
            Some(k0) if k0 != d / e => {
                return Err(Error::DegreeMismatch(format!(
                    "component {i} has degree {d}, expected {}",
                    k0 * e
                )))
            }
            _ => {}
        }
    }
    Ok(k)
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ring);
        }
        let (small, large) = if self.num_terms() <= rhs.num_terms() { (self, rhs) } else { (rhs, self) };
        if small.num_terms() == 1 {
            let (m, c) = small.leading_term().unwrap();
            return large.mul_term(m, c);
        }
        let (d1, a) = small.integer_parts();
        let (d2, b) = large.integer_parts();
        let denom = d1 * d2;
        let bits = |v: &[(&Monomial, BigInt)]| v.iter().map(|(_, c)| c.bits()).max().unwrap_or(0);
        // products of at most `bits(a) + bits(b)` bits, summed at most `small.num_terms()` times
        let headroom = 64 - (small.num_terms() as u64).leading_zeros() as u64;
        let terms: BTreeMap<Monomial, Rational> = if bits(&a) + bits(&b) + headroom < 126 {
            let a: Vec<(&Monomial, i128)> = a.iter().map(|(m, c)| (*m, i128::try_from(c).unwrap())).collect();
            let b: Vec<(&Monomial, i128)> = b.iter().map(|(m, c)| (*m, i128::try_from(c).unwrap())).collect();
            let mut acc: HashMap<Monomial, i128> = HashMap::with_capacity(a.len() * b.len());
            for (m1, c1) in &a {
                for (m2, c2) in &b {
                    *acc.entry(m1.mul(m2)).or_insert(0) += c1 * c2;
                }
            }
            acc.into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(m, c)| (m, Rational::new(BigInt::from(c), denom.clone())))
                .collect()
        } else {
            let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(a.len() * b.len());
            for (m1, c1) in &a {
                for (m2, c2) in &b {
                    *acc.entry(m1.mul(m2)).or_insert_with(BigInt::zero) += c1 * c2;
                }
            }
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Rational::new(c, denom.clone())))
                .collect()
        };
        Poly { ring: self.ring.clone(), terms }
    }
}

impl Poly {
    /// `(d, [(m, d * c_m)])` with `d` the least common denominator.
    fn integer_parts(&self) -> (BigInt, Vec<(&Monomial, BigInt)>) {
        let d = self.terms.values().fold(BigInt::one(), |d, c| num_integer::Integer::lcm(&d, c.denom()));
        let v = self.terms.iter().map(|(m, c)| (m, c.numer() * (&d / c.denom()))).collect();
        (d, v)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Homogeneous polynomial of weighted degree `delta` in which every monomial
/// carries a nonzero integer coefficient from `[-bound, bound]`.
pub fn random_homogeneous(ring: &WeightedRing, delta: i64, seed: u64, bound: u32) -> Poly {
    let mut gen = rng::generator(seed);
    random_homogeneous_with(ring, delta, &mut gen, bound)
}

pub fn random_homogeneous_with<R: Rng + ?Sized>(
    ring: &WeightedRing,
    delta: i64,
    gen: &mut R,
    bound: u32,
) -> Poly {
    let mut p = Poly::zero(ring);
    for m in ring.monomials_of_degree(delta) {
        let c = rng::nonzero_int(gen, bound);
        p.terms.insert(m, Rational::from_integer(BigInt::from(c)));
    }
    p
}
