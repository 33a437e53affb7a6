//! Buchberger's algorithm in weighted grevlex, ideal membership and the
//! dimension of affine cones.
//!
//! Internally polynomials are kept with primitive integer coefficients and
//! reduced fraction-free; the final reduced basis is made monic over the
//! rationals.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::DiffForm;
use crate::ring::{Monomial, Poly, Rational, WeightedRing};

/// Limits on a single Gröbner basis computation.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_degree: u32,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 50_000, max_degree: 60, deadline: None }
    }
}

#[derive(Debug, Clone)]
pub struct Ideal {
    ring: WeightedRing,
    gens: Vec<Poly>,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ring: &WeightedRing, gens: Vec<Poly>) -> Result<Self> {
        if gens.iter().any(|g| g.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: ring.clone(), gens })
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        Ideal::new(&self.ring, self.gens.iter().chain(other.gens.iter()).cloned().collect())
    }

    /// Generated by all pairwise products of generators.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        Ideal::new(&self.ring, gens)
    }
}

type Terms = Vec<(Monomial, BigInt)>;

fn to_integer(p: &Poly) -> Terms {
    let lcm = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut t: Terms = p.terms().map(|(m, c)| (m.clone(), c.numer() * (&lcm / c.denom()))).collect();
    primitive(&mut t);
    t
}

fn primitive(t: &mut Terms) {
    if t.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, c) in t.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if t[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in t.iter_mut() {
            *c /= &g;
        }
    }
}

/// `a * f - b * mono * g`, both inputs sorted descending.
fn combine(f: &[(Monomial, BigInt)], a: &BigInt, g: &[(Monomial, BigInt)], mono: &Monomial, b: &BigInt) -> Terms {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut gi = g.iter().map(|(m, c)| (m.mul(mono), c)).peekable();
    let mut fi = f.iter().peekable();
    loop {
        match (fi.peek(), gi.peek()) {
            (None, None) => break,
            (Some(_), None) => {
                let (m, c) = fi.next().unwrap();
                out.push((m.clone(), a * c));
            }
            (None, Some(_)) => {
                let (m, c) = gi.next().unwrap();
                out.push((m, -(b * c)));
            }
            (Some((mf, _)), Some((mg, _))) => match mf.cmp(mg) {
                std::cmp::Ordering::Greater => {
                    let (m, c) = fi.next().unwrap();
                    out.push((m.clone(), a * c));
                }
                std::cmp::Ordering::Less => {
                    let (m, c) = gi.next().unwrap();
                    out.push((m, -(b * c)));
                }
                std::cmp::Ordering::Equal => {
                    let (m, cf) = fi.next().unwrap();
                    let (_, cg) = gi.next().unwrap();
                    let v = a * cf - b * cg;
                    if !v.is_zero() {
                        out.push((m.clone(), v));
                    }
                }
            },
        }
    }
    out
}

/// Reduces `f` by `basis`: only the leading term when `full` is false,
/// otherwise every term.
fn reduce(mut f: Terms, basis: &[&Terms], full: bool) -> Terms {
    let mut done: Terms = Vec::new();
    loop {
        if f.is_empty() {
            break;
        }
        let (m, c) = f[0].clone();
        let divisor = basis.iter().find(|g| g[0].0.divides(&m));
        match divisor {
            Some(g) => {
                let (lm, lc) = (&g[0].0, &g[0].1);
                let q = lm.quotient_of(&m);
                let gcd = c.gcd(lc);
                let a = lc / &gcd;
                let b = &c / &gcd;
                if !a.is_one() {
                    for (_, d) in done.iter_mut() {
                        *d *= &a;
                    }
                }
                f = combine(&f, &a, g, &q, &b);
                // keep numbers small; `done` must be scaled consistently
                if !done.is_empty() {
                    let mut all: Terms = std::mem::take(&mut done);
                    let split = all.len();
                    all.extend(f);
                    primitive_keep_sign(&mut all);
                    f = all.split_off(split);
                    done = all;
                } else {
                    primitive(&mut f);
                }
            }
            None => {
                if !full {
                    break;
                }
                done.push(f.remove(0));
            }
        }
    }
    done.extend(f);
    primitive(&mut done);
    done
}

fn primitive_keep_sign(t: &mut Terms) {
    let mut g = BigInt::zero();
    for (_, c) in t.iter() {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() {
        for (_, c) in t.iter_mut() {
            *c /= &g;
        }
    }
}

struct Pair {
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Reduced Gröbner basis in weighted grevlex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: WeightedRing,
    basis: Vec<Poly>,
}

/// Pair counts and similar diagnostics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerStats {
    pub pairs_reduced: usize,
    pub pairs_skipped: usize,
    pub basis_size: usize,
}

pub fn buchberger(ideal: &Ideal, budget: &Budget) -> Result<GroebnerBasis> {
    buchberger_with_stats(ideal, budget).map(|(g, _)| g)
}

pub fn buchberger_with_stats(ideal: &Ideal, budget: &Budget) -> Result<(GroebnerBasis, GroebnerStats)> {
    let ring = ideal.ring().clone();
    let weights = ring.weights().to_vec();
    let mut polys: Vec<Terms> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut stats = GroebnerStats::default();

    let mut gens: Vec<Terms> = ideal.generators().iter().map(to_integer).collect();
    gens.sort_by(|a, b| a[0].0.cmp(&b[0].0).then(a.len().cmp(&b.len())));
    for g in gens {
        let basis: Vec<&Terms> = active.iter().map(|&k| &polys[k]).collect();
        let h = reduce(g, &basis, false);
        if h.is_empty() {
            continue;
        }
        insert(&mut polys, &mut active, &mut pairs, h, &weights);
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm, ties by index
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (p, q) = (&pairs[a], &pairs[b]);
                p.lcm.cmp(&q.lcm).then(p.i.cmp(&q.i)).then(p.j.cmp(&q.j))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        stats.pairs_reduced += 1;
        if stats.pairs_reduced > budget.max_pairs {
            return Err(Error::ResourceLimit(format!("more than {} pair reductions", budget.max_pairs)));
        }
        if pair.lcm.degree() > budget.max_degree {
            return Err(Error::ResourceLimit(format!(
                "S-pair of degree {} exceeds the degree cap {}",
                pair.lcm.degree(),
                budget.max_degree
            )));
        }
        if let Some(t) = budget.deadline {
            if Instant::now() > t {
                return Err(Error::ResourceLimit("wall-clock budget exhausted".into()));
            }
        }
        let (f, g) = (&polys[pair.i], &polys[pair.j]);
        let mf = f[0].0.quotient_of(&pair.lcm);
        let mg = g[0].0.quotient_of(&pair.lcm);
        let gcd = f[0].1.gcd(&g[0].1);
        let a = &g[0].1 / &gcd;
        let b = &f[0].1 / &gcd;
        let fm: Terms = f.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
        let mut s = combine(&fm, &a, g, &mg, &b);
        primitive(&mut s);
        let basis: Vec<&Terms> = active.iter().map(|&k| &polys[k]).collect();
        let h = reduce(s, &basis, false);
        if h.is_empty() {
            continue;
        }
        insert(&mut polys, &mut active, &mut pairs, h, &weights);
    }

    // minimal basis, then tail-reduce each element by the others
    let mut minimal: Vec<Terms> = Vec::new();
    let mut cand: Vec<&Terms> = active.iter().map(|&k| &polys[k]).collect();
    cand.sort_by(|a, b| a[0].0.cmp(&b[0].0));
    for (idx, p) in cand.iter().enumerate() {
        let lm = &p[0].0;
        let redundant = cand.iter().enumerate().any(|(o, q)| {
            o != idx && q[0].0.divides(lm) && (q[0].0 != *lm || o < idx)
        });
        if !redundant {
            minimal.push((*p).clone());
        }
    }
    let mut reduced: Vec<Terms> = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&Terms> = minimal.iter().enumerate().filter(|(o, _)| *o != k).map(|(_, t)| t).collect();
        let head = minimal[k][0].clone();
        let tail: Terms = minimal[k][1..].to_vec();
        let mut r = vec![head];
        // the leading term is irreducible by the others, so reducing the
        // whole polynomial only touches the tail
        let tail_red = reduce_tail(r.clone(), tail, &others);
        r = tail_red;
        reduced.push(r);
    }
    let mut basis: Vec<Poly> = reduced
        .into_iter()
        .map(|t| {
            let lc = t[0].1.clone();
            Poly::from_terms(&ring, t.into_iter().map(|(m, c)| (m, Rational::new(c, lc.clone()))))
        })
        .collect();
    basis.sort_by(|a, b| b.leading_term().unwrap().0.cmp(a.leading_term().unwrap().0));
    stats.basis_size = basis.len();
    Ok((GroebnerBasis { ring, basis }, stats))
}

fn reduce_tail(head: Terms, tail: Terms, others: &[&Terms]) -> Terms {
    let mut all = head;
    all.extend(tail);
    // full reduction never touches the first term here
    let first = all.remove(0);
    let mut f = all;
    let mut done: Terms = vec![first];
    loop {
        if f.is_empty() {
            break;
        }
        let (m, c) = f[0].clone();
        match others.iter().find(|g| g[0].0.divides(&m)) {
            Some(g) => {
                let q = g[0].0.quotient_of(&m);
                let gcd = c.gcd(&g[0].1);
                let a = &g[0].1 / &gcd;
                let b = &c / &gcd;
                if !a.is_one() {
                    for (_, d) in done.iter_mut() {
                        *d *= &a;
                    }
                }
                f = combine(&f, &a, g, &q, &b);
            }
            None => done.push(f.remove(0)),
        }
    }
    primitive(&mut done);
    done
}

/// Gebauer–Möller update.
fn insert(polys: &mut Vec<Terms>, active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: Terms, weights: &[u32]) {
    let hi = polys.len();
    let hm = h[0].0.clone();
    polys.push(h);

    let cands: Vec<(usize, Monomial, bool)> = active
        .iter()
        .map(|&g| {
            let gm = &polys[g][0].0;
            (g, hm.lcm(gm, weights), hm.coprime(gm))
        })
        .collect();
    // drop (h,g1) when some other (h,g2) has a strictly dividing lcm, or an
    // equal lcm with a smaller index
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    for (k, (g1, l1, cop)) in cands.iter().enumerate() {
        let dominated = cands.iter().enumerate().any(|(o, (_, l2, _))| {
            o != k && l2.divides(l1) && (l2 != l1 || o < k)
        });
        if *cop || !dominated {
            kept.push((*g1, l1.clone(), *cop));
        }
    }
    // among equal lcms keep one, and discard those whose lcm is coprime
    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    let mut new_pairs: Vec<Pair> = Vec::new();
    let mut coprime_lcms: BTreeSet<Vec<u16>> = BTreeSet::new();
    for (_, l, cop) in kept.iter() {
        if *cop {
            coprime_lcms.insert(l.exps().to_vec());
        }
    }
    for (g, l, cop) in kept {
        if cop {
            continue;
        }
        if coprime_lcms.contains(l.exps()) {
            continue;
        }
        if seen.insert(l.exps().to_vec()) {
            new_pairs.push(Pair { lcm: l, i: g, j: hi });
        }
    }

    pairs.retain(|p| {
        if !hm.divides(&p.lcm) {
            return true;
        }
        let li = hm.lcm(&polys[p.i][0].0, weights);
        let lj = hm.lcm(&polys[p.j][0].0, weights);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(new_pairs);
    active.retain(|&g| !hm.divides(&polys[g][0].0));
    active.push(hi);
}

impl GroebnerBasis {
    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    /// Monic elements, largest leading monomial first.
    pub fn elements(&self) -> &[Poly] {
        &self.basis
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|p| p.leading_term().unwrap().0.clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.iter().any(|p| p.leading_term().unwrap().0.is_one())
    }

    /// Remainder of `p` under multivariate division by the basis.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        assert!(p.ring() == &self.ring, "polynomial from a different ring");
        let mut f = p.clone();
        let mut rem = Poly::zero(&self.ring);
        while let Some((m, c)) = f.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            match self.basis.iter().find(|g| g.leading_term().unwrap().0.divides(&m)) {
                Some(g) => {
                    let q = g.leading_term().unwrap().0.quotient_of(&m);
                    f.add_scaled(&g.mul_term(&q, &Rational::one()), &-c);
                }
                None => {
                    rem.add_term(m.clone(), c.clone());
                    f.add_term(m, -c);
                }
            }
        }
        rem
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Krull dimension of the zero set in affine space; `-1` when empty.
    pub fn cone_dimension(&self) -> i64 {
        let n = self.ring.nvars();
        if self.is_unit_ideal() {
            return -1;
        }
        let supports: Vec<u64> = self.leading_monomials().iter().map(|m| m.support()).collect();
        let mut best = 0;
        for mask in 0u64..(1u64 << n) {
            let size = mask.count_ones() as i64;
            if size <= best {
                continue;
            }
            // independent: no leading monomial lives entirely on the mask
            if supports.iter().all(|&s| s & !mask != 0) {
                best = size;
            }
        }
        best
    }

    pub fn codimension(&self) -> i64 {
        self.ring.nvars() as i64 - self.cone_dimension()
    }
}

pub fn membership(p: &Poly, ideal: &Ideal, budget: &Budget) -> Result<bool> {
    Ok(buchberger(ideal, budget)?.contains(p))
}

pub fn cone_dimension(ideal: &Ideal, budget: &Budget) -> Result<i64> {
    Ok(buchberger(ideal, budget)?.cone_dimension())
}

pub fn codimension(ideal: &Ideal, budget: &Budget) -> Result<i64> {
    Ok(buchberger(ideal, budget)?.codimension())
}

/// Comparison of the singular ideal of a 1-form with the same ideal
/// enlarged by the coefficients of its derivative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KupkaReport {
    pub codim_sing: i64,
    pub codim_sing_plus_domega: i64,
    pub generically_kupka: bool,
    /// The dimension drop only speaks for the top-dimensional components of
    /// the singular set; lower-dimensional components are not examined.
    pub top_dimensional_only: bool,
}

/// Ideal generated by all coefficients of a form.
pub fn coefficient_ideal(w: &DiffForm) -> Result<Ideal> {
    Ideal::new(w.ring(), w.coefficient_polys())
}

pub fn kupka_report(omega: &DiffForm, budget: &Budget) -> Result<KupkaReport> {
    let j = coefficient_ideal(omega)?;
    kupka_report_for(&j, omega, budget)
}

/// Kupka comparison for an arbitrary ideal `j` describing the singular set.
pub fn kupka_report_for(j: &Ideal, omega: &DiffForm, budget: &Budget) -> Result<KupkaReport> {
    let jp = j.sum(&coefficient_ideal(&omega.d())?)?;
    let codim_sing = codimension(j, budget)?;
    let codim_plus = codimension(&jp, budget)?;
    Ok(KupkaReport {
        codim_sing,
        codim_sing_plus_domega: codim_plus,
        generically_kupka: codim_plus > codim_sing,
        top_dimensional_only: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(r: &WeightedRing, i: usize) -> Poly {
        Poly::var(r, i)
    }

    #[test]
    fn spec_examples() {
        let r = WeightedRing::standard(3);
        let b = Budget::default();
        let i = Ideal::new(&r, vec![x(&r, 0), x(&r, 1)]).unwrap();
        let g = buchberger(&i, &b).unwrap();
        assert_eq!(g.elements().len(), 2);
        assert_eq!(g.cone_dimension(), 1);
        assert_eq!(g.codimension(), 2);

        let f = &(&x(&r, 0) * &x(&r, 1)) - &x(&r, 2).pow(2);
        let i = Ideal::new(&r, vec![f, x(&r, 0)]).unwrap();
        let g = buchberger(&i, &b).unwrap();
        let expected = vec![x(&r, 2).pow(2), x(&r, 0)];
        assert_eq!(g.elements(), expected.as_slice());
    }

    #[test]
    fn dimension_edge_cases() {
        let r = WeightedRing::standard(3);
        let b = Budget::default();
        assert_eq!(cone_dimension(&Ideal::new(&r, vec![]).unwrap(), &b), Ok(3));
        assert_eq!(cone_dimension(&Ideal::new(&r, vec![Poly::one(&r)]).unwrap(), &b), Ok(-1));
        let xy = &x(&r, 0) * &x(&r, 1);
        assert_eq!(cone_dimension(&Ideal::new(&r, vec![xy]).unwrap(), &b), Ok(2));
    }

    #[test]
    fn principal_ideal_is_normalized() {
        let r = WeightedRing::standard(2);
        let f = &x(&r, 0).scale_int(3) + &x(&r, 1).scale_int(6);
        let g = buchberger(&Ideal::new(&r, vec![f.clone()]).unwrap(), &Budget::default()).unwrap();
        assert_eq!(g.elements(), &[f.monic()]);
    }

    #[test]
    fn budget_is_enforced() {
        let r = WeightedRing::standard(3);
        let gens = vec![
            &x(&r, 0).pow(3) - &(&x(&r, 1) * &x(&r, 2).pow(2)),
            &x(&r, 1).pow(3) - &(&x(&r, 0) * &x(&r, 2).pow(2)),
            &(&x(&r, 0) * &x(&r, 1)) * &x(&r, 2) - &x(&r, 2).pow(3),
        ];
        let tight = Budget { max_pairs: 1, ..Budget::default() };
        assert!(matches!(buchberger(&Ideal::new(&r, gens).unwrap(), &tight), Err(Error::ResourceLimit(_))));
    }
}
