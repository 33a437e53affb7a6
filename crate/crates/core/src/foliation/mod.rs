//! Foliations, rational maps between weighted projective spaces, pullback
//! presentations and the special unfoldings they induce.

pub mod json;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{DiffForm, VectorField};
use crate::groebner::Ideal;
use crate::ring::json::format_rational;
use crate::ring::common_map_degree;
use crate::ring::{random_homogeneous_with, Poly, Rational, WeightedRing};

/// Homogeneous lift `(F_0, ..., F_m)` of a rational map into a weighted
/// projective space, with `deg F_i = k * e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMapLift {
    source: WeightedRing,
    target: WeightedRing,
    polys: Vec<Poly>,
    k: i64,
}

impl RationalMapLift {
    pub fn new(target: &WeightedRing, polys: Vec<Poly>) -> Result<Self> {
        if polys.len() != target.nvars() {
            return Err(Error::Arity { expected: target.nvars(), got: polys.len() });
        }
        let source = polys[0].ring().clone();
        if polys.iter().any(|p| p.ring() != &source) {
            return Err(Error::RingMismatch);
        }
        if polys.iter().any(Poly::is_zero) {
            return Err(Error::DegreeMismatch("map components must be nonzero".into()));
        }
        let k = common_map_degree(target, &polys)?.expect("components are nonzero");
        if k < 1 {
            return Err(Error::DegreeMismatch(format!("map degree must be positive, got {k}")));
        }
        Ok(RationalMapLift { source, target: target.clone(), polys, k })
    }

    /// Random lift of degree `k`; every admissible monomial gets a nonzero
    /// coefficient.
    pub fn random<R: Rng + ?Sized>(
        source: &WeightedRing,
        target: &WeightedRing,
        k: i64,
        rng: &mut R,
        bound: u32,
    ) -> Result<Self> {
        let polys = (0..target.nvars())
            .map(|i| random_homogeneous_with(source, k * target.weight(i) as i64, rng, bound))
            .collect();
        Self::new(target, polys)
    }

    pub fn source(&self) -> &WeightedRing {
        &self.source
    }

    pub fn target(&self) -> &WeightedRing {
        &self.target
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// Degrees `k * e_i`, the admissible degrees of a deformation `G`.
    pub fn component_degrees(&self) -> Vec<i64> {
        self.target.weights().iter().map(|&e| self.k * e as i64).collect()
    }

    pub fn pullback(&self, w: &DiffForm) -> Result<DiffForm> {
        if w.ring() != &self.target {
            return Err(Error::RingMismatch);
        }
        w.pullback(&self.polys)
    }

    /// Checks a candidate deformation direction `G`.
    pub fn check_deformation(&self, g: &[Poly]) -> Result<()> {
        if g.len() != self.polys.len() {
            return Err(Error::Arity { expected: self.polys.len(), got: g.len() });
        }
        for (i, gi) in g.iter().enumerate() {
            if gi.ring() != &self.source {
                return Err(Error::RingMismatch);
            }
            if gi.is_zero() {
                continue;
            }
            let d = gi.weighted_degree()?;
            let want = self.k * self.target.weight(i) as i64;
            if d != want {
                return Err(Error::DegreeMismatch(format!(
                    "deformation component {i} has degree {d}, expected {want}"
                )));
            }
        }
        Ok(())
    }
}

/// A descending, integrable, nonzero homogeneous 1-form together with its
/// degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Foliation {
    omega: DiffForm,
    delta: i64,
}

/// Validates `u` as a foliation.
pub fn make_foliation(u: &DiffForm) -> Result<Foliation> {
    let delta = check_descending_one_form(u)?;
    if !u.is_integrable() {
        return Err(Error::NotIntegrable);
    }
    Ok(Foliation { omega: u.clone(), delta })
}

/// Degree of a descending homogeneous 1-form; integrability is not checked.
pub fn check_descending_one_form(u: &DiffForm) -> Result<i64> {
    if u.degree_p() != 1 {
        return Err(Error::Input(format!("expected a 1-form, got a {}-form", u.degree_p())));
    }
    if u.is_zero() {
        return Err(Error::ZeroForm);
    }
    let delta = u.weighted_degree()?;
    if !u.is_descending() {
        return Err(Error::NotDescending);
    }
    Ok(delta)
}

impl Foliation {
    pub fn omega(&self) -> &DiffForm {
        &self.omega
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn ring(&self) -> &WeightedRing {
        self.omega.ring()
    }

    /// Ideal of all coefficients of the form.
    pub fn singular_ideal(&self) -> Ideal {
        Ideal::new(self.ring(), self.omega.coefficient_polys()).expect("same ring")
    }
}

/// `omega = F^* alpha = sum_i A_i(F) dF_i`, with the pieces cached.
#[derive(Debug, Clone)]
pub struct PullbackPresentation {
    map: RationalMapLift,
    alpha: DiffForm,
    delta: i64,
    a: Vec<Poly>,
    a_of_f: Vec<Poly>,
    /// `da[i][j] = (d A_i / d x_j)(F)`
    da_of_f: Vec<Vec<Poly>>,
    df: Vec<DiffForm>,
    omega: DiffForm,
}

impl PullbackPresentation {
    /// `alpha` must be a descending homogeneous 1-form on the target;
    /// integrability is not required.
    pub fn new(map: &RationalMapLift, alpha: &DiffForm) -> Result<Self> {
        if alpha.ring() != map.target() {
            return Err(Error::RingMismatch);
        }
        let delta = check_descending_one_form(alpha)?;
        let f = map.polys();
        let a = alpha.coefficients();
        let a_of_f: Vec<Poly> = a.iter().map(|ai| ai.substitute(f)).collect::<Result<_>>()?;
        let m1 = a.len();
        let da_of_f = a
            .iter()
            .map(|ai| (0..m1).map(|j| ai.partial(j)?.substitute(f)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let df: Vec<DiffForm> = f.iter().map(|fi| DiffForm::function(fi).d()).collect();
        let mut omega = DiffForm::zero(map.source(), 1);
        for (ai, dfi) in a_of_f.iter().zip(&df) {
            omega = omega.add(&dfi.mul_poly(ai));
        }
        Ok(PullbackPresentation { map: map.clone(), alpha: alpha.clone(), delta, a, a_of_f, da_of_f, df, omega })
    }

    pub fn from_foliation(map: &RationalMapLift, alpha: &Foliation) -> Result<Self> {
        Self::new(map, alpha.omega())
    }

    pub fn map(&self) -> &RationalMapLift {
        &self.map
    }

    pub fn alpha(&self) -> &DiffForm {
        &self.alpha
    }

    /// Degree of `alpha`.
    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Coefficients `A_i` of `alpha`.
    pub fn a(&self) -> &[Poly] {
        &self.a
    }

    pub fn a_of_f(&self) -> &[Poly] {
        &self.a_of_f
    }

    pub fn df(&self) -> &[DiffForm] {
        &self.df
    }

    /// The presented form `sum_i A_i(F) dF_i`.
    pub fn omega(&self) -> &DiffForm {
        &self.omega
    }

    /// `eta_2 = sum_i A_i(F) dG_i + sum_i (sum_j dA_i/dx_j(F) G_j) dF_i`.
    pub fn special_unfolding(&self, g: &[Poly]) -> Result<DiffForm> {
        self.map.check_deformation(g)?;
        let source = self.map.source();
        let mut eta = DiffForm::zero(source, 1);
        for (i, ai) in self.a_of_f.iter().enumerate() {
            if !g[i].is_zero() {
                eta = eta.add(&DiffForm::function(&g[i]).d().mul_poly(ai));
            }
            let mut c = Poly::zero(source);
            for (j, gj) in g.iter().enumerate() {
                if !gj.is_zero() {
                    c = &c + &(&self.da_of_f[i][j] * gj);
                }
            }
            if !c.is_zero() {
                eta = eta.add(&self.df[i].mul_poly(&c));
            }
        }
        Ok(eta)
    }

    /// `B(F) = <F_0, ..., F_m>`.
    pub fn b_ideal(&self) -> Ideal {
        Ideal::new(self.map.source(), self.map.polys().to_vec()).expect("same ring")
    }

    /// `K_0 = <A_0(F), ..., A_m(F)>`.
    pub fn k0_ideal(&self) -> Ideal {
        Ideal::new(self.map.source(), self.a_of_f.clone()).expect("same ring")
    }

    /// `K_r = K_0 * B(F)^r`, generated by products of generators.
    pub fn kr_ideal(&self, r: u32) -> Ideal {
        let b = self.b_ideal();
        let mut k = self.k0_ideal();
        for _ in 0..r {
            k = k.product(&b).expect("same ring");
        }
        k
    }
}

/// `(F^* alpha, F^* beta + eta_2(G))`, the two coefficients of
/// `(F + eps G)^* (alpha + eps beta)` modulo `eps^2`.
pub fn first_order_pullback(
    map: &RationalMapLift,
    g: &[Poly],
    alpha: &DiffForm,
    beta: &DiffForm,
) -> Result<(DiffForm, DiffForm)> {
    let pres = PullbackPresentation::new(map, alpha)?;
    let mut eta = pres.special_unfolding(g)?;
    if !beta.is_zero() {
        let db = beta.weighted_degree()?;
        if db != pres.delta() {
            return Err(Error::DegreeMismatch(format!("beta has degree {db}, alpha has degree {}", pres.delta())));
        }
        eta = eta.add(&map.pullback(beta)?);
    }
    Ok((pres.omega().clone(), eta))
}

/// `omega = sum_i lambda_i (prod_{j != i} f_j) df_i`.
pub fn logarithmic_form(f: &[Poly], lambda: &[Rational]) -> Result<Foliation> {
    if f.is_empty() {
        return Err(Error::Input("no polynomials given".into()));
    }
    if f.len() != lambda.len() {
        return Err(Error::Arity { expected: f.len(), got: lambda.len() });
    }
    let ring = f[0].ring().clone();
    if f.iter().any(|p| p.ring() != &ring) {
        return Err(Error::RingMismatch);
    }
    if lambda.iter().any(Zero::is_zero) {
        return Err(Error::Input("residues must be nonzero".into()));
    }
    let degs: Vec<i64> = f.iter().map(Poly::weighted_degree).collect::<Result<_>>()?;
    let total: Rational = lambda
        .iter()
        .zip(&degs)
        .map(|(l, &d)| l * Rational::from_integer(d.into()))
        .fold(Rational::zero(), |a, b| a + b);
    if !total.is_zero() {
        return Err(Error::Resonance(format_rational(&total)));
    }
    let mut omega = DiffForm::zero(&ring, 1);
    for i in 0..f.len() {
        let mut hat = Poly::one(&ring);
        for (j, fj) in f.iter().enumerate() {
            if j != i {
                hat = &hat * fj;
            }
        }
        let dfi = DiffForm::function(&f[i]).d();
        omega = omega.add(&dfi.mul_poly(&hat.scale(&lambda[i])));
    }
    make_foliation(&omega)
}

/// `alpha = i_{X_1} ... i_{X_{m-1}} i_R (dx_0 ^ ... ^ dx_m)` and its
/// coefficients.
#[derive(Debug, Clone)]
pub struct SplitForm {
    pub alpha: DiffForm,
    pub fields: Vec<VectorField>,
}

pub fn split_form_from_fields(ring: &WeightedRing, fields: &[VectorField]) -> Result<SplitForm> {
    if fields.len() + 2 != ring.nvars() {
        return Err(Error::Arity { expected: ring.nvars() - 2, got: fields.len() });
    }
    if fields.iter().any(|x| x.ring() != ring) {
        return Err(Error::RingMismatch);
    }
    let mut w = DiffForm::volume(ring).contract_radial();
    for x in fields.iter().rev() {
        w = w.contract(x);
    }
    if w.is_zero() {
        return Err(Error::DegenerateFamily("the contraction vanishes identically".into()));
    }
    Ok(SplitForm { alpha: w, fields: fields.to_vec() })
}

impl SplitForm {
    pub fn coefficients(&self) -> Vec<Poly> {
        self.alpha.coefficients()
    }

    pub fn foliation(&self) -> Result<Foliation> {
        make_foliation(&self.alpha)
    }
}

/// Outcome of the relation and minor checks on the matrix whose first row
/// is `(e_i F_i)` and whose remaining rows are the field coefficients
/// `(B^j_i(F))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcmReport {
    /// `sum_i e_i F_i A_i(F) = 0`
    pub euler_relation: bool,
    /// `sum_i B^j_i(F) A_i(F) = 0`, one entry per field
    pub field_relations: Vec<bool>,
    /// per column `i`: whether `A_i(F) = c (-1)^i Delta_i` for the common `c`
    pub minors_reproduce: Vec<bool>,
    /// the common scalar `c`, as `"p/q"`, when one exists
    pub scalar: Option<String>,
    pub all_passed: bool,
}

pub fn jacobian_relations_check(pres: &PullbackPresentation, fields: &[VectorField]) -> Result<AcmReport> {
    let map = pres.map();
    let f = map.polys();
    let target = map.target();
    let source = map.source();
    let m1 = target.nvars();
    let afp = pres.a_of_f();

    let mut euler = Poly::zero(source);
    for i in 0..m1 {
        euler = &euler + &(&f[i].scale_int(target.weight(i) as i64) * &afp[i]);
    }
    let mut rows: Vec<Vec<Poly>> = vec![(0..m1).map(|i| f[i].scale_int(target.weight(i) as i64)).collect()];
    let mut field_relations = Vec::with_capacity(fields.len());
    for x in fields {
        if x.ring() != target {
            return Err(Error::RingMismatch);
        }
        let b: Vec<Poly> = x.coefficients().iter().map(|c| c.substitute(f)).collect::<Result<_>>()?;
        let mut s = Poly::zero(source);
        for i in 0..m1 {
            s = &s + &(&b[i] * &afp[i]);
        }
        field_relations.push(s.is_zero());
        rows.push(b);
    }

    let mut minors_reproduce = vec![false; m1];
    let mut scalar: Option<Rational> = None;
    if rows.len() + 1 == m1 {
        let signed: Vec<Poly> = (0..m1)
            .map(|i| {
                let cols: Vec<usize> = (0..m1).filter(|&c| c != i).collect();
                let d = determinant(&rows, &cols);
                if i % 2 == 0 {
                    d
                } else {
                    -&d
                }
            })
            .collect();
        for i in 0..m1 {
            if let (Some((_, a)), Some((_, s))) = (afp[i].leading_term(), signed[i].leading_term()) {
                scalar = Some(a / s);
                break;
            }
        }
        let c = scalar.clone().unwrap_or_else(Rational::zero);
        for i in 0..m1 {
            minors_reproduce[i] = afp[i] == signed[i].scale(&c);
        }
        if scalar.is_none() {
            // every A_i(F) and every minor vanish; the identity holds with c = 0
            minors_reproduce = (0..m1).map(|i| afp[i].is_zero() && signed[i].is_zero()).collect();
        }
    }
    let euler_relation = euler.is_zero();
    let all_passed =
        euler_relation && field_relations.iter().all(|&b| b) && minors_reproduce.iter().all(|&b| b);
    Ok(AcmReport {
        euler_relation,
        field_relations,
        minors_reproduce,
        scalar: scalar.as_ref().map(format_rational),
        all_passed,
    })
}

/// Laplace expansion along the first row of the square submatrix on the
/// given columns.
fn determinant(rows: &[Vec<Poly>], cols: &[usize]) -> Poly {
    let ring = rows[0][0].ring().clone();
    fn rec(rows: &[Vec<Poly>], r: usize, cols: &[usize], ring: &WeightedRing) -> Poly {
        if r == rows.len() {
            return Poly::one(ring);
        }
        let mut acc = Poly::zero(ring);
        for (k, &c) in cols.iter().enumerate() {
            let entry = &rows[r][c];
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = rec(rows, r + 1, &rest, ring);
            let term = entry * &minor;
            if k % 2 == 0 {
                acc = &acc + &term;
            } else {
                acc = &acc - &term;
            }
        }
        acc
    }
    rec(rows, 0, cols, &ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(r: &WeightedRing, i: usize) -> Poly {
        Poly::var(r, i)
    }

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    #[test]
    fn rejects_bad_forms() {
        let r = WeightedRing::standard(3);
        assert_eq!(make_foliation(&DiffForm::dx(&r, 0)), Err(Error::NotDescending));
        assert_eq!(make_foliation(&DiffForm::zero(&r, 1)), Err(Error::ZeroForm));
    }

    #[test]
    fn log_form_on_the_plane() {
        let r = WeightedRing::standard(3);
        let f: Vec<Poly> = (0..3).map(|i| x(&r, i)).collect();
        let fol = logarithmic_form(&f, &[q(1), q(1), q(-2)]).unwrap();
        let expected = DiffForm::one_form(
            &r,
            &[&x(&r, 1) * &x(&r, 2), &x(&r, 0) * &x(&r, 2), (&x(&r, 0) * &x(&r, 1)).scale_int(-2)],
        )
        .unwrap();
        assert_eq!(fol.omega(), &expected);
        assert_eq!(fol.delta(), 3);
        assert!(matches!(logarithmic_form(&f, &[q(1), q(1), q(1)]), Err(Error::Resonance(_))));
    }

    #[test]
    fn split_form_on_the_plane() {
        let r = WeightedRing::standard(3);
        let s = split_form_from_fields(&r, &[VectorField::coordinate(&r, 2)]).unwrap();
        let expected = DiffForm::one_form(&r, &[x(&r, 1), -&x(&r, 0), Poly::zero(&r)]).unwrap();
        assert_eq!(s.alpha, expected);
    }

    #[test]
    fn zero_deformation_gives_zero_unfolding() {
        let t = WeightedRing::standard(3);
        let s = WeightedRing::standard(4);
        let map = RationalMapLift::new(&t, (0..3).map(|i| x(&s, i)).collect()).unwrap();
        let f: Vec<Poly> = (0..3).map(|i| x(&t, i)).collect();
        let fol = logarithmic_form(&f, &[q(1), q(2), q(-3)]).unwrap();
        let pres = PullbackPresentation::from_foliation(&map, &fol).unwrap();
        assert!(pres.special_unfolding(&vec![Poly::zero(&s); 3]).unwrap().is_zero());
        assert_eq!(pres.omega(), &map.pullback(fol.omega()).unwrap());
    }

    #[test]
    fn acm_minors_for_the_plane_example() {
        let t = WeightedRing::standard(3);
        let split = split_form_from_fields(&t, &[VectorField::coordinate(&t, 2)]).unwrap();
        let s = WeightedRing::standard(3);
        let map = RationalMapLift::new(&t, (0..3).map(|i| x(&s, i)).collect()).unwrap();
        let pres = PullbackPresentation::new(&map, &split.alpha).unwrap();
        let rep = jacobian_relations_check(&pres, &split.fields).unwrap();
        assert!(rep.all_passed, "{rep:?}");
    }
}
