//! Zariski tangent spaces of foliations and the comparison of the tangent
//! space of a pullback with the deformations coming from the map and from
//! the target.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{index_tuples, DiffForm, FormIndex};
use crate::foliation::{Foliation, PullbackPresentation, RationalMapLift};
use crate::groebner::{coefficient_ideal, codimension, kupka_report_for, Budget, KupkaReport};
use crate::linalg::{RatMatrix, Subspace};
use crate::ring::{Monomial, Poly, Rational, WeightedRing};

/// Coordinates on the space of homogeneous `p`-forms of a fixed degree:
/// one coordinate per pair (index tuple, monomial).
#[derive(Debug)]
pub struct FormCoordinates {
    ring: WeightedRing,
    p: usize,
    delta: i64,
    manifest: Vec<(FormIndex, Monomial)>,
    lookup: HashMap<(FormIndex, Monomial), usize>,
    euler_kernel: OnceLock<Subspace>,
}

impl FormCoordinates {
    pub fn new(ring: &WeightedRing, p: usize, delta: i64) -> Self {
        let mut manifest = Vec::new();
        for idx in index_tuples(ring.nvars(), p) {
            let d = delta - idx.iter().map(|&i| ring.weight(i) as i64).sum::<i64>();
            for m in ring.monomials_of_degree(d) {
                manifest.push((idx.clone(), m));
            }
        }
        let lookup = manifest.iter().cloned().enumerate().map(|(k, key)| (key, k)).collect();
        FormCoordinates { ring: ring.clone(), p, delta, manifest, lookup, euler_kernel: OnceLock::new() }
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Number of coordinates of the ambient space of all forms.
    pub fn ambient_dim(&self) -> usize {
        self.manifest.len()
    }

    pub fn manifest(&self) -> &[(FormIndex, Monomial)] {
        &self.manifest
    }

    /// The form with a single coefficient 1 at coordinate `k`.
    pub fn basis_form(&self, k: usize) -> DiffForm {
        let (idx, m) = &self.manifest[k];
        let mut w = DiffForm::zero(&self.ring, self.p);
        w.add_component(idx.clone(), &Poly::term(&self.ring, m.clone(), Rational::from_integer(1.into())));
        w
    }

    pub fn sparse_coords(&self, w: &DiffForm) -> Result<Vec<(usize, Rational)>> {
        if w.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if w.degree_p() != self.p {
            return Err(Error::Input(format!("expected a {}-form, got a {}-form", self.p, w.degree_p())));
        }
        let mut out = Vec::new();
        for (idx, a) in w.components() {
            for (m, c) in a.terms() {
                let k = self.lookup.get(&(idx.clone(), m.clone())).ok_or_else(|| {
                    Error::DegreeMismatch(format!("form has a term outside degree {}", self.delta))
                })?;
                out.push((*k, c.clone()));
            }
        }
        out.sort_by_key(|(k, _)| *k);
        Ok(out)
    }

    pub fn coords(&self, w: &DiffForm) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.ambient_dim()];
        for (k, c) in self.sparse_coords(w)? {
            v[k] = c;
        }
        Ok(v)
    }

    pub fn form(&self, v: &[Rational]) -> DiffForm {
        assert_eq!(v.len(), self.ambient_dim());
        let mut comps: BTreeMap<FormIndex, Poly> = BTreeMap::new();
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (idx, m) = &self.manifest[k];
            comps.entry(idx.clone()).or_insert_with(|| Poly::zero(&self.ring)).add_term(m.clone(), c.clone());
        }
        let mut w = DiffForm::zero(&self.ring, self.p);
        for (idx, a) in comps {
            w.add_component(idx, &a);
        }
        w
    }

    /// Matrix of a linear map on forms, one column per coordinate.
    pub fn matrix_of<F>(&self, target: &FormCoordinates, f: F) -> Result<RatMatrix>
    where
        F: Fn(&DiffForm) -> DiffForm + Sync,
    {
        let cols = (0..self.ambient_dim())
            .into_par_iter()
            .map(|k| target.sparse_coords(&f(&self.basis_form(k))))
            .collect::<Result<Vec<_>>>()?;
        Ok(RatMatrix::from_columns(target.ambient_dim(), cols))
    }

    /// Matrix of the contraction with the radial field.
    pub fn euler_matrix(&self) -> RatMatrix {
        assert!(self.p >= 1);
        let target = FormCoordinates::new(&self.ring, self.p - 1, self.delta);
        self.matrix_of(&target, DiffForm::contract_radial).expect("contraction preserves degree")
    }

    /// Descending forms: the kernel of the contraction with the radial field.
    pub fn euler_kernel(&self) -> &Subspace {
        self.euler_kernel.get_or_init(|| self.euler_matrix().kernel())
    }

    /// Dimension of the space of descending forms.
    pub fn dim(&self) -> usize {
        self.euler_kernel().dim()
    }
}

/// Coordinates on descending 1-forms of degree `delta`.
pub fn form_space(ring: &WeightedRing, delta: i64) -> FormCoordinates {
    FormCoordinates::new(ring, 1, delta)
}

/// `omega ^ d beta + d omega ^ beta`.
pub fn deformation_image(omega: &DiffForm, beta: &DiffForm) -> DiffForm {
    omega.wedge(&beta.d()).add(&omega.d().wedge(beta))
}

/// Matrix of `beta -> omega ^ d beta + d omega ^ beta` on all 1-forms of
/// degree `delta` (ambient coordinates), into 3-forms of degree `2 delta`.
pub fn ambient_deformation_matrix(fol: &Foliation, space: &FormCoordinates) -> Result<RatMatrix> {
    let omega = fol.omega();
    let domega = omega.d();
    let target = FormCoordinates::new(fol.ring(), 3, 2 * fol.delta());
    space.matrix_of(&target, |b| omega.wedge(&b.d()).add(&domega.wedge(b)))
}

/// The deformation map with columns indexed by the canonical basis of
/// descending forms.
pub fn deformation_matrix(fol: &Foliation) -> Result<RatMatrix> {
    let space = form_space(fol.ring(), fol.delta());
    let amb = ambient_deformation_matrix(fol, &space)?;
    let cols = space
        .euler_kernel()
        .basis()
        .iter()
        .map(|b| amb.apply(b).into_iter().enumerate().filter(|(_, a)| !a.is_zero()).collect())
        .collect();
    Ok(RatMatrix::from_columns(amb.nrows(), cols))
}

/// First-order deformations of `fol`, in the ambient coordinates of
/// `form_space(ring, delta)`: descending forms killed by the deformation map.
pub fn tangent_space(fol: &Foliation) -> Result<Subspace> {
    let space = form_space(fol.ring(), fol.delta());
    tangent_space_in(fol, &space)
}

pub fn tangent_space_in(fol: &Foliation, space: &FormCoordinates) -> Result<Subspace> {
    let amb = ambient_deformation_matrix(fol, space)?;
    let euler = space.euler_matrix();
    // stack the two conditions: i_R beta = 0 and the deformation equation
    let rows: Vec<Vec<(usize, Rational)>> = (0..space.ambient_dim())
        .map(|c| {
            let mut col: Vec<(usize, Rational)> = euler.column(c).to_vec();
            col.extend(amb.column(c).iter().map(|(r, a)| (r + euler.nrows(), a.clone())));
            col
        })
        .collect();
    let stacked = RatMatrix::from_columns(euler.nrows() + amb.nrows(), rows);
    Ok(stacked.kernel())
}

/// Span of `F^* beta` over a basis of the tangent space of `alpha`, in the
/// coordinates `space` of forms on the source.
pub fn pullback_subspace(map: &RationalMapLift, alpha: &Foliation, space: &FormCoordinates) -> Result<Subspace> {
    let t_alpha = tangent_space(alpha)?;
    let alpha_space = form_space(alpha.ring(), alpha.delta());
    let images = t_alpha
        .basis()
        .par_iter()
        .map(|b| space.coords(&map.pullback(&alpha_space.form(b))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::span(space.ambient_dim(), images.iter()))
}

/// Basis of the deformation directions `G`: one monomial in one slot.
pub fn deformation_directions(map: &RationalMapLift) -> Vec<Vec<Poly>> {
    let source = map.source();
    let m1 = map.target().nvars();
    let mut out = Vec::new();
    for (i, d) in map.component_degrees().into_iter().enumerate() {
        for mono in source.monomials_of_degree(d) {
            let mut g = vec![Poly::zero(source); m1];
            g[i] = Poly::term(source, mono, Rational::from_integer(1.into()));
            out.push(g);
        }
    }
    out
}

/// Span of the special unfoldings over all deformation directions.
pub fn unfolding_subspace(pres: &PullbackPresentation, space: &FormCoordinates) -> Result<Subspace> {
    let images = deformation_directions(pres.map())
        .par_iter()
        .map(|g| space.coords(&pres.special_unfolding(g)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::span(space.ambient_dim(), images.iter()))
}

/// Hypotheses of the decomposition statement, as far as they can be
/// decided by exact computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub ambient_ok: bool,
    /// codimension of the singular set of alpha (cone level), needs >= 2
    pub codim_sing_alpha: i64,
    /// codimension of the zero set of d(alpha), needs >= 3
    pub codim_dalpha: i64,
    /// singular set of the pullback cut out by `K_0`, compared with `d omega`
    pub kupka: KupkaReport,
    /// `Some(true)` when the tangent sheaf of alpha splits with
    /// non-positive summands, `None` when this was not decided
    pub nonpositive_splitting: Option<bool>,
    /// depth condition on `K_r`; never computed, always assumed
    pub depth: String,
    pub all_certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentDims {
    /// all 1-forms of the pullback's degree on the source
    pub ambient: usize,
    /// descending 1-forms of that degree
    pub descending: usize,
    #[serde(rename = "T_omega")]
    pub t_omega: usize,
    pub pullback: usize,
    pub unfolding: usize,
    pub sum: usize,
    /// the same four spaces modulo scaling (cone dimension minus one)
    #[serde(rename = "T_omega_projective")]
    pub t_omega_projective: i64,
    pub sum_projective: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub n: usize,
    pub m: usize,
    pub k: i64,
    pub delta: i64,
    pub pullback_degree: i64,
    pub target_weights: Vec<u32>,
    pub dims: TangentDims,
    pub pullback_in_tangent: bool,
    pub unfolding_in_tangent: bool,
    pub decomposes: bool,
    pub certificates: Certificates,
    pub hypotheses_met: bool,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub budget: Budget,
    /// degrees of the fields spanning the tangent sheaf of alpha, if known
    pub split_field_degrees: Option<Vec<i64>>,
}

/// Wall-clock time of each phase, in milliseconds.
pub type Timings = BTreeMap<String, u64>;

pub fn verify_main_theorem(
    map: &RationalMapLift,
    alpha: &Foliation,
    opts: &VerifyOptions,
) -> Result<(MainTheoremReport, Timings)> {
    let n = map.source().nvars() - 1;
    let m = map.target().nvars() - 1;
    if n < m + 2 {
        return Err(Error::Ambient(format!("source dimension {n} is below m + 2 = {}", m + 2)));
    }
    if alpha.ring() != map.target() {
        return Err(Error::RingMismatch);
    }
    let mut timings = Timings::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut Timings| {
        timings.insert(name.to_string(), clock.elapsed().as_millis() as u64);
        clock = Instant::now();
    };

    let pres = PullbackPresentation::from_foliation(map, alpha)?;
    let omega = crate::foliation::make_foliation(pres.omega())?;
    let space = form_space(map.source(), omega.delta());
    lap("presentation", &mut timings);

    let certificates = certify(&pres, alpha, opts)?;
    lap("certificates", &mut timings);

    let t_omega = tangent_space_in(&omega, &space)?;
    lap("tangent_space", &mut timings);
    let pb = pullback_subspace(map, alpha, &space)?;
    lap("pullback_subspace", &mut timings);
    let unf = unfolding_subspace(&pres, &space)?;
    lap("unfolding_subspace", &mut timings);
    let sum = pb.sum(&unf)?;
    let pullback_in_tangent = pb.is_subspace_of(&t_omega)?;
    let unfolding_in_tangent = unf.is_subspace_of(&t_omega)?;
    let decomposes = sum == t_omega;
    lap("comparison", &mut timings);

    let dims = TangentDims {
        ambient: space.ambient_dim(),
        descending: space.dim(),
        t_omega: t_omega.dim(),
        pullback: pb.dim(),
        unfolding: unf.dim(),
        sum: sum.dim(),
        t_omega_projective: t_omega.dim() as i64 - 1,
        sum_projective: sum.dim() as i64 - 1,
    };
    let hypotheses_met = certificates.all_certified;
    Ok((
        MainTheoremReport {
            n,
            m,
            k: map.k(),
            delta: alpha.delta(),
            pullback_degree: omega.delta(),
            target_weights: map.target().weights().to_vec(),
            dims,
            pullback_in_tangent,
            unfolding_in_tangent,
            decomposes,
            certificates,
            hypotheses_met,
        },
        timings,
    ))
}

pub fn certify(pres: &PullbackPresentation, alpha: &Foliation, opts: &VerifyOptions) -> Result<Certificates> {
    let target = alpha.ring();
    let codim_sing_alpha = codimension(&alpha.singular_ideal(), &opts.budget)?;
    let codim_dalpha = codimension(&coefficient_ideal(&alpha.omega().d())?, &opts.budget)?;
    let kupka = kupka_report_for(&pres.k0_ideal(), pres.omega(), &opts.budget)?;
    let m = target.nvars() - 1;
    let nonpositive_splitting = match &opts.split_field_degrees {
        Some(d) => Some(d.iter().all(|&x| x >= 0)),
        // on a surface the tangent sheaf is a line bundle of degree sum(e) - delta
        None if m == 2 => Some(alpha.delta() >= target.weight_sum()),
        None => None,
    };
    let all_certified = codim_sing_alpha >= 2
        && codim_dalpha >= 3
        && kupka.generically_kupka
        && nonpositive_splitting == Some(true);
    Ok(Certificates {
        ambient_ok: true,
        codim_sing_alpha,
        codim_dalpha,
        kupka,
        nonpositive_splitting,
        depth: "assumed".into(),
        all_certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_space_dimensions() {
        assert_eq!(form_space(&WeightedRing::standard(3), 3).dim(), 8);
        assert_eq!(form_space(&WeightedRing::standard(3), 1).dim(), 0);
        let s = form_space(&WeightedRing::standard(5), 3);
        assert_eq!(s.ambient_dim(), 75);
        assert_eq!(s.dim(), 40);
    }

    #[test]
    fn coordinates_roundtrip() {
        let r = WeightedRing::new(vec![1, 1, 2]).unwrap();
        let s = form_space(&r, 4);
        let mut rng = crate::rng::generator(3);
        let w = crate::exterior::random_descending_form(&r, 1, 4, &mut rng, 5);
        let v = s.coords(&w).unwrap();
        assert_eq!(s.form(&v), w);
        assert!(s.euler_kernel().contains(&v).unwrap());
    }
}
