mod common;

use common::{descending_one_form, dual_pullback, map, rng};
use folia::foliation::{first_order_pullback, make_foliation, PullbackPresentation};
use folia::tangent::{form_space, tangent_space_in};
use folia::{DiffForm, Poly, Rational, WeightedRing};
use rand::Rng;

fn targets() -> Vec<(WeightedRing, i64)> {
    vec![
        (WeightedRing::standard(3), 3),
        (WeightedRing::standard(3), 4),
        (WeightedRing::new(vec![1, 1, 2]).unwrap(), 4),
        (WeightedRing::new(vec![1, 2, 3]).unwrap(), 6),
        (WeightedRing::standard(4), 3),
    ]
}

#[test]
fn dual_number_expansion_matches() {
    for seed in 0..25u64 {
        let mut g = rng(seed);
        let (target, delta) = targets()[seed as usize % 5].clone();
        let k = g.gen_range(1..=2);
        let f = map(&mut g, 3, &target, k);
        let gs: Vec<Poly> = f
            .component_degrees()
            .iter()
            .map(|&d| folia::ring::random_homogeneous_with(f.source(), d, &mut g, 3))
            .collect();
        let alpha = descending_one_form(&mut g, &target, delta);
        let beta = descending_one_form(&mut g, &target, delta);
        let (omega, eta) = first_order_pullback(&f, &gs, &alpha, &beta).unwrap();
        let (re, eps) = dual_pullback(&alpha.coefficients(), &beta.coefficients(), f.polys(), &gs);
        assert_eq!(omega.coefficients(), re, "seed {seed}");
        assert_eq!(eta.coefficients(), eps, "seed {seed}");
    }
}

#[test]
fn euler_direction_unfolds_to_a_multiple() {
    for seed in 0..10u64 {
        let mut g = rng(100 + seed);
        let (target, delta) = targets()[seed as usize % 5].clone();
        let f = map(&mut g, 3, &target, 1);
        let alpha = descending_one_form(&mut g, &target, delta);
        let pres = PullbackPresentation::new(&f, &alpha).unwrap();
        let euler: Vec<Poly> =
            f.polys().iter().enumerate().map(|(i, p)| p.scale_int(target.weight(i) as i64)).collect();
        let eta = pres.special_unfolding(&euler).unwrap();
        assert_eq!(eta, pres.omega().scale(&Rational::from_integer(delta.into())), "seed {seed}");
    }
}

#[test]
fn special_unfoldings_are_tangent() {
    for seed in 0..6u64 {
        let mut g = rng(200 + seed);
        let target = WeightedRing::standard(3);
        let f = map(&mut g, 4, &target, 1);
        let alpha = descending_one_form(&mut g, &target, 3);
        let pres = PullbackPresentation::new(&f, &alpha).unwrap();
        let omega = make_foliation(pres.omega()).unwrap();
        let space = form_space(f.source(), omega.delta());
        let t = tangent_space_in(&omega, &space).unwrap();
        for _ in 0..3 {
            let gs: Vec<Poly> =
                (0..3).map(|_| folia::ring::random_homogeneous_with(f.source(), 1, &mut g, 3)).collect();
            let eta = pres.special_unfolding(&gs).unwrap();
            // directly: omega ^ d eta + d omega ^ eta = 0
            let w = omega.omega();
            assert!(w.wedge(&eta.d()).add(&w.d().wedge(&eta)).is_zero());
            assert!(t.contains(&space.coords(&eta).unwrap()).unwrap(), "seed {seed}");
        }
    }
}

#[test]
fn pullback_of_zero_direction_is_unfolding_only() {
    let mut g = rng(7);
    let target = WeightedRing::standard(3);
    let f = map(&mut g, 3, &target, 1);
    let alpha = descending_one_form(&mut g, &target, 3);
    let zero: Vec<Poly> = (0..3).map(|_| Poly::zero(f.source())).collect();
    let (_, eta) = first_order_pullback(&f, &zero, &alpha, &DiffForm::zero(&target, 1)).unwrap();
    assert!(eta.is_zero());
}
