//! Seeded generators and independent oracles shared by the integration
//! tests.

#![allow(dead_code)]

use folia::exterior::{random_descending_form, random_field, random_form};
use folia::foliation::RationalMapLift;
use folia::rng::{generator, Generator};
use folia::{DiffForm, Poly, Rational, VectorField, WeightedRing};
use rand::Rng;

pub fn rng(seed: u64) -> Generator {
    generator(seed)
}

/// Three or four variables with weights in 1..=3.
pub fn small_ring(rng: &mut Generator) -> WeightedRing {
    let n = rng.gen_range(3..=4);
    WeightedRing::new((0..n).map(|_| rng.gen_range(1..=3)).collect()).unwrap()
}

/// A random homogeneous p-form whose polynomial part has degree in 0..=2
/// above the largest possible weight of the dx part.
pub fn form(rng: &mut Generator, ring: &WeightedRing, p: usize) -> DiffForm {
    let top: i64 = {
        let mut w: Vec<i64> = ring.weights().iter().map(|&e| e as i64).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w.iter().take(p).sum()
    };
    let delta = top + rng.gen_range(0..=2);
    random_form(ring, p, delta, rng, 3)
}

pub fn field(rng: &mut Generator, ring: &WeightedRing) -> VectorField {
    let d = rng.gen_range(0..=1);
    random_field(ring, d, rng, 3)
}

/// Random map from a standard source of `n + 1` variables to `target`.
pub fn map(rng: &mut Generator, n: usize, target: &WeightedRing, k: i64) -> RationalMapLift {
    let source = WeightedRing::standard(n + 1);
    RationalMapLift::random(&source, target, k, rng, 3).unwrap()
}

/// Descending 1-form of the smallest degree admitting one, plus `extra`.
pub fn descending_one_form(rng: &mut Generator, ring: &WeightedRing, delta: i64) -> DiffForm {
    random_descending_form(ring, 1, delta, rng, 4)
}

/// `a + eps b` with `eps^2 = 0`.
#[derive(Clone, Debug)]
pub struct Dual {
    pub re: Poly,
    pub eps: Poly,
}

impl Dual {
    pub fn constant(p: Poly) -> Self {
        let z = Poly::zero(p.ring());
        Dual { re: p, eps: z }
    }

    pub fn add(&self, o: &Dual) -> Dual {
        Dual { re: &self.re + &o.re, eps: &self.eps + &o.eps }
    }

    pub fn mul(&self, o: &Dual) -> Dual {
        Dual { re: &self.re * &o.re, eps: &(&self.re * &o.eps) + &(&self.eps * &o.re) }
    }
}

/// Evaluates `p` at dual arguments term by term, using only ring
/// operations (no derivatives).
pub fn eval_dual(p: &Poly, args: &[Dual]) -> Dual {
    let ring = args[0].re.ring().clone();
    let mut acc = Dual::constant(Poly::zero(&ring));
    for (m, c) in p.terms() {
        let mut t = Dual::constant(Poly::constant(&ring, c.clone()));
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&args[i]);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// Gradient of a polynomial as the coefficient vector of its differential.
pub fn gradient(p: &Poly) -> Vec<Poly> {
    (0..p.ring().nvars()).map(|k| p.partial(k).unwrap()).collect()
}

/// Coefficients of `(F + eps G)^* (alpha + eps beta)` for 1-forms given by
/// their coefficient vectors; returns the constant and the `eps` parts.
pub fn dual_pullback(alpha: &[Poly], beta: &[Poly], f: &[Poly], g: &[Poly]) -> (Vec<Poly>, Vec<Poly>) {
    let source = f[0].ring().clone();
    let args: Vec<Dual> = f.iter().zip(g).map(|(a, b)| Dual { re: a.clone(), eps: b.clone() }).collect();
    let n = source.nvars();
    let mut re = vec![Poly::zero(&source); n];
    let mut eps = vec![Poly::zero(&source); n];
    for i in 0..f.len() {
        let a = eval_dual(&alpha[i], &args);
        let b = eval_dual(&beta[i], &args);
        // alpha_i(F + eps G) + eps beta_i(F)
        let coef = Dual { re: a.re, eps: &a.eps + &b.re };
        let df = gradient(&f[i]);
        let dg = gradient(&g[i]);
        for k in 0..n {
            let term = coef.mul(&Dual { re: df[k].clone(), eps: dg[k].clone() });
            re[k] = &re[k] + &term.re;
            eps[k] = &eps[k] + &term.eps;
        }
    }
    (re, eps)
}

/// `P A P^-1` with `P = 1 + N`, `N` strictly upper triangular.
pub fn conjugate(g: &mut Generator, fields: &[VectorField]) -> Vec<VectorField> {
    let ring = fields[0].ring().clone();
    let n = ring.nvars();
    let q = |v: i64| Rational::from_integer(v.into());
    let mut p = vec![vec![q(0); n]; n];
    for (i, row) in p.iter_mut().enumerate() {
        row[i] = q(1);
        for x in row.iter_mut().skip(i + 1) {
            *x = q(folia::rng::int(g, 2));
        }
    }
    let mul = |a: &Vec<Vec<Rational>>, b: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).fold(q(0), |s, t| s + t)).collect()).collect()
    };
    // inverse of a unipotent matrix: sum of (-N)^k
    let mut minus_n = p.clone();
    for (i, row) in minus_n.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = if i == j { q(0) } else { -x.clone() };
        }
    }
    let mut inv: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| q((i == j) as i64)).collect()).collect();
    let mut power = inv.clone();
    for _ in 1..n {
        power = mul(&power, &minus_n);
        for i in 0..n {
            for j in 0..n {
                inv[i][j] = &inv[i][j] + &power[i][j];
            }
        }
    }
    fields
        .iter()
        .map(|x| {
            let a: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|k| x.coefficient(i).coefficient(&ring.var_monomial(k))).collect())
                .collect();
            VectorField::linear(&ring, &mul(&mul(&p, &a), &inv)).unwrap()
        })
        .collect()
}
