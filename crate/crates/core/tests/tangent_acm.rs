mod common;

use common::{descending_one_form, map, rng};
use folia::catalog::{lie_family, LieFamily};
use folia::exterior::random_field;
use folia::foliation::{jacobian_relations_check, make_foliation, split_form_from_fields, PullbackPresentation};
use folia::tangent::{deformation_matrix, form_space, pullback_subspace, tangent_space, tangent_space_in};
use folia::WeightedRing;
use rand::Rng;

#[test]
fn every_plane_form_is_tangent() {
    // on a plane integrability is automatic, so the tangent space is
    // every descending form of the same degree
    for (w, delta) in [(vec![1, 1, 1], 3), (vec![1, 1, 1], 4), (vec![1, 1, 2], 4), (vec![1, 2, 3], 7)] {
        let r = WeightedRing::new(w.clone()).unwrap();
        let mut g = rng(delta as u64);
        let omega = make_foliation(&descending_one_form(&mut g, &r, delta)).unwrap();
        let t = tangent_space(&omega).unwrap();
        assert_eq!(t.dim(), form_space(&r, delta).dim(), "{w:?} {delta}");
    }
}

#[test]
fn two_kernel_computations_agree() {
    let mut g = rng(3);
    let target = WeightedRing::standard(3);
    let alpha = make_foliation(&descending_one_form(&mut g, &target, 3)).unwrap();
    let f = map(&mut g, 3, &target, 1);
    let omega = make_foliation(&f.pullback(alpha.omega()).unwrap()).unwrap();
    let space = form_space(f.source(), omega.delta());
    let stacked = tangent_space_in(&omega, &space).unwrap();
    let on_basis = deformation_matrix(&omega).unwrap().kernel();
    assert_eq!(stacked.dim(), on_basis.dim());
    assert!(stacked.contains(&space.coords(omega.omega()).unwrap()).unwrap());
    let pb = pullback_subspace(&f, &alpha, &space).unwrap();
    assert!(pb.is_subspace_of(&stacked).unwrap());
}

#[test]
fn split_presentations_satisfy_the_relations() {
    for seed in 0..10u64 {
        let mut g = rng(300 + seed);
        let (fields, target) = if seed % 2 == 0 {
            let r = WeightedRing::standard(3);
            let d = g.gen_range(0..=1);
            (vec![random_field(&r, d, &mut g, 3)], r)
        } else {
            let spec = lie_family(LieFamily::Aff).unwrap();
            let r = spec.ring.clone();
            (common::conjugate(&mut g, &spec.generators), r)
        };
        let split = split_form_from_fields(&target, &fields).unwrap();
        let alpha = split.foliation().unwrap();
        let f = map(&mut g, target.nvars() + 1, &target, 1);
        let pres = PullbackPresentation::from_foliation(&f, &alpha).unwrap();
        let report = jacobian_relations_check(&pres, &fields).unwrap();
        assert!(report.euler_relation, "seed {seed}");
        assert!(report.field_relations.iter().all(|&b| b), "seed {seed}");
        assert!(report.all_passed, "seed {seed}: {report:?}");
        let c = report.scalar.unwrap();
        assert!(c == "1/1" || c == "-1/1", "seed {seed}: {c}");
    }
}
