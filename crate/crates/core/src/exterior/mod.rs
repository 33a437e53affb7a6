//! Differential forms and vector fields with polynomial coefficients on the
//! affine cone over a weighted projective space.

mod field;
pub mod json;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ring::{random_homogeneous_with, Poly, Rational, WeightedRing};

pub use field::{random_field, VectorField};

/// Increasing index tuple `i_1 < ... < i_p` naming `dx_{i_1} ^ ... ^ dx_{i_p}`.
pub type FormIndex = Vec<usize>;

/// A homogeneous-or-not polynomial p-form `sum_I A_I dx_I`.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffForm {
    ring: WeightedRing,
    p: usize,
    comps: BTreeMap<FormIndex, Poly>,
}

/// All increasing `p`-tuples from `0..n`, in lexicographic order.
pub fn index_tuples(n: usize, p: usize) -> Vec<FormIndex> {
    fn rec(n: usize, p: usize, start: usize, cur: &mut FormIndex, out: &mut Vec<FormIndex>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, p, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(n, p, 0, &mut Vec::with_capacity(p), &mut out);
    }
    out
}

/// Sorts `idx` in place and returns the permutation sign, or `None` on a
/// repeated index.
fn normalize(idx: &mut FormIndex) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl DiffForm {
    pub fn zero(ring: &WeightedRing, p: usize) -> Self {
        DiffForm { ring: ring.clone(), p, comps: BTreeMap::new() }
    }

    /// The function `f` as a 0-form.
    pub fn function(f: &Poly) -> Self {
        let mut w = Self::zero(f.ring(), 0);
        w.add_component(Vec::new(), f);
        w
    }

    /// `sum_i a_i dx_i`.
    pub fn one_form(ring: &WeightedRing, coeffs: &[Poly]) -> Result<Self> {
        if coeffs.len() != ring.nvars() {
            return Err(Error::Arity { expected: ring.nvars(), got: coeffs.len() });
        }
        let mut w = Self::zero(ring, 1);
        for (i, a) in coeffs.iter().enumerate() {
            w.add_component(vec![i], a);
        }
        Ok(w)
    }

    /// `dx_i` as a 1-form.
    pub fn dx(ring: &WeightedRing, i: usize) -> Self {
        let mut w = Self::zero(ring, 1);
        w.add_component(vec![i], &Poly::one(ring));
        w
    }

    /// `dx_0 ^ ... ^ dx_n`.
    pub fn volume(ring: &WeightedRing) -> Self {
        let n = ring.nvars();
        let mut w = Self::zero(ring, n);
        w.add_component((0..n).collect(), &Poly::one(ring));
        w
    }

    /// Adds `a dx_idx`; `idx` need not be sorted.
    pub fn add_component(&mut self, mut idx: FormIndex, a: &Poly) {
        assert_eq!(idx.len(), self.p, "index length must equal the form degree");
        assert!(a.ring() == &self.ring, "coefficient from a different ring");
        assert!(idx.iter().all(|&i| i < self.ring.nvars()), "index out of range");
        let negative = match normalize(&mut idx) {
            None => return,
            Some(s) => s,
        };
        if a.is_zero() {
            return;
        }
        let sign = if negative { -Rational::one() } else { Rational::one() };
        let entry = self.comps.entry(idx).or_insert_with(|| Poly::zero(&self.ring));
        entry.add_scaled(a, &sign);
        self.comps.retain(|_, c| !c.is_zero());
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn degree_p(&self) -> usize {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn component(&self, idx: &[usize]) -> Poly {
        self.comps.get(idx).cloned().unwrap_or_else(|| Poly::zero(&self.ring))
    }

    /// Nonzero components in lexicographic index order.
    pub fn components(&self) -> impl Iterator<Item = (&FormIndex, &Poly)> + '_ {
        self.comps.iter()
    }

    /// Coefficients `a_i` of a 1-form.
    pub fn coefficients(&self) -> Vec<Poly> {
        assert_eq!(self.p, 1);
        (0..self.ring.nvars()).map(|i| self.component(&[i])).collect()
    }

    /// Weighted degree, where `dx_i` has weight `e_i`.
    pub fn weighted_degree(&self) -> Result<i64> {
        let mut deg: Option<i64> = None;
        for (idx, a) in self.comps.iter() {
            let d = a.weighted_degree()? + idx.iter().map(|&i| self.ring.weight(i) as i64).sum::<i64>();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Err(Error::Inhomogeneous(d0, d)),
                _ => {}
            }
        }
        deg.ok_or(Error::ZeroForm)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.weighted_degree().is_ok()
    }

    fn check(&self, other: &DiffForm) {
        assert!(self.ring == other.ring, "forms from different rings");
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        self.combine(other, &-Rational::one())
    }

    /// `self + c * other`.
    pub fn combine(&self, other: &DiffForm, c: &Rational) -> DiffForm {
        self.check(other);
        assert_eq!(self.p, other.p, "adding forms of different degree");
        let mut out = self.clone();
        for (idx, a) in other.comps.iter() {
            let e = out.comps.entry(idx.clone()).or_insert_with(|| Poly::zero(&self.ring));
            e.add_scaled(a, c);
        }
        out.comps.retain(|_, a| !a.is_zero());
        out
    }

    pub fn scale(&self, c: &Rational) -> DiffForm {
        self.map_coeffs(|a| a.scale(c))
    }

    pub fn neg(&self) -> DiffForm {
        self.scale(&-Rational::one())
    }

    /// `f * self`.
    pub fn mul_poly(&self, f: &Poly) -> DiffForm {
        self.map_coeffs(|a| a * f)
    }

    fn map_coeffs(&self, mut g: impl FnMut(&Poly) -> Poly) -> DiffForm {
        let comps = self
            .comps
            .iter()
            .map(|(i, a)| (i.clone(), g(a)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        DiffForm { ring: self.ring.clone(), p: self.p, comps }
    }

    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        self.check(other);
        let mut out: BTreeMap<FormIndex, Poly> = BTreeMap::new();
        for (i, a) in self.comps.iter() {
            for (j, b) in other.comps.iter() {
                if i.iter().any(|x| j.contains(x)) {
                    continue;
                }
                let inversions: usize = i.iter().map(|&x| j.iter().filter(|&&y| y < x).count()).sum();
                let mut idx: FormIndex = i.iter().chain(j.iter()).copied().collect();
                idx.sort_unstable();
                let prod = a * b;
                let c = if inversions % 2 == 0 { Rational::one() } else { -Rational::one() };
                out.entry(idx).or_insert_with(|| Poly::zero(&self.ring)).add_scaled(&prod, &c);
            }
        }
        out.retain(|_, a| !a.is_zero());
        DiffForm { ring: self.ring.clone(), p: self.p + other.p, comps: out }
    }

    /// Exterior derivative.
    pub fn d(&self) -> DiffForm {
        let n = self.ring.nvars();
        let mut out: BTreeMap<FormIndex, Poly> = BTreeMap::new();
        for (idx, a) in self.comps.iter() {
            for j in 0..n {
                if idx.contains(&j) {
                    continue;
                }
                let da = a.partial(j).expect("index in range");
                if da.is_zero() {
                    continue;
                }
                let pos = idx.iter().filter(|&&i| i < j).count();
                let mut new = idx.clone();
                new.insert(pos, j);
                let c = if pos % 2 == 0 { Rational::one() } else { -Rational::one() };
                out.entry(new).or_insert_with(|| Poly::zero(&self.ring)).add_scaled(&da, &c);
            }
        }
        out.retain(|_, a| !a.is_zero());
        DiffForm { ring: self.ring.clone(), p: self.p + 1, comps: out }
    }

    /// Interior product `i_V self`.
    pub fn contract(&self, v: &VectorField) -> DiffForm {
        assert!(v.ring() == &self.ring, "field from a different ring");
        if self.p == 0 {
            return DiffForm::zero(&self.ring, 0);
        }
        let mut out: BTreeMap<FormIndex, Poly> = BTreeMap::new();
        for (idx, a) in self.comps.iter() {
            for (k, &i) in idx.iter().enumerate() {
                let vi = v.coefficient(i);
                if vi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(k);
                let c = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                let prod = a * vi;
                out.entry(rest).or_insert_with(|| Poly::zero(&self.ring)).add_scaled(&prod, &c);
            }
        }
        out.retain(|_, a| !a.is_zero());
        DiffForm { ring: self.ring.clone(), p: self.p - 1, comps: out }
    }

    pub fn contract_radial(&self) -> DiffForm {
        self.contract(&VectorField::radial(&self.ring))
    }

    /// True when `i_R self = 0`, i.e. the form descends to the quotient.
    pub fn is_descending(&self) -> bool {
        self.contract_radial().is_zero()
    }

    /// `F^* self`, where `f` lists the components of a lift into the source
    /// ring of the map and `self` lives in the target ring.
    pub fn pullback(&self, f: &[Poly]) -> Result<DiffForm> {
        let n = self.ring.nvars();
        if f.len() != n {
            return Err(Error::Arity { expected: n, got: f.len() });
        }
        let source = f[0].ring().clone();
        let df: Vec<DiffForm> = f.iter().map(|fi| DiffForm::function(fi).d()).collect();
        let mut out = DiffForm::zero(&source, self.p);
        let mut wedges: BTreeMap<FormIndex, DiffForm> = BTreeMap::new();
        for (idx, a) in self.comps.iter() {
            let coef = a.substitute(f)?;
            if coef.is_zero() {
                continue;
            }
            let w = wedges.entry(idx.clone()).or_insert_with(|| {
                let mut acc = DiffForm::function(&Poly::one(&source));
                for &i in idx {
                    acc = acc.wedge(&df[i]);
                }
                acc
            });
            out = out.add(&w.mul_poly(&coef));
        }
        Ok(out)
    }

    /// `self ^ d self`.
    pub fn integrability(&self) -> DiffForm {
        self.wedge(&self.d())
    }

    pub fn is_integrable(&self) -> bool {
        self.integrability().is_zero()
    }

    /// All nonzero coefficients.
    pub fn coefficient_polys(&self) -> Vec<Poly> {
        self.comps.values().cloned().collect()
    }

}

/// Random homogeneous `p`-form of weighted degree `delta`: every admissible
/// monomial in every component gets a nonzero coefficient in
/// `[-bound, bound]`.
pub fn random_form<R: Rng + ?Sized>(ring: &WeightedRing, p: usize, delta: i64, rng: &mut R, bound: u32) -> DiffForm {
    let mut w = DiffForm::zero(ring, p);
    for idx in index_tuples(ring.nvars(), p) {
        let d = delta - idx.iter().map(|&i| ring.weight(i) as i64).sum::<i64>();
        let a = random_homogeneous_with(ring, d, rng, bound);
        w.add_component(idx, &a);
    }
    w
}

/// Random descending `p`-form of degree `delta`, drawn as the contraction of
/// a random `(p+1)`-form with the radial field. Every descending form of
/// positive degree is such a contraction, so the draw is generic.
pub fn random_descending_form<R: Rng + ?Sized>(
    ring: &WeightedRing,
    p: usize,
    delta: i64,
    rng: &mut R,
    bound: u32,
) -> DiffForm {
    random_form(ring, p + 1, delta, rng, bound).contract_radial()
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        for (k, (idx, a)) in self.comps.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let d: Vec<String> = idx.iter().map(|i| format!("dx{i}")).collect();
            if d.is_empty() {
                write!(f, "({a})")?;
            } else {
                write!(f, "({a}) {}", d.join("^"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffForm[p={}]({self})", self.p)
    }
}
