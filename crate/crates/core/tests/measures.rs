mod common;

use std::f64::consts::E;

use bregman_core::{
    bregman_angle, bregman_angle_entropy, bregman_angle_with, bregman_divergence,
    cosine_similarity, euclidean_distance, surface_normal, tangent_similarity, ConvexCost, Measure,
    SubgradientRule, TvOptions,
};
use common::*;
use rand::Rng;

fn all_costs() -> [ConvexCost; 4] {
    [
        ConvexCost::NegativeEntropy,
        ConvexCost::ModifiedEntropy,
        ConvexCost::total_variation(),
        ConvexCost::SquaredL2,
    ]
}

/// Random pair that is valid (positive, no ties) for every cost.
fn valid_pair(r: &mut impl Rng) -> (Vec<f64>, Vec<f64>) {
    let n = r.gen_range(2..10);
    (uniform_vec(r, n, 0.01, 30.0), uniform_vec(r, n, 0.01, 30.0))
}

#[test]
fn generic_path_matches_entropy_closed_form() {
    let mut r = rng(11);
    for _ in 0..1000 {
        let (a, b) = valid_pair(&mut r);
        let generic = bregman_angle(&ConvexCost::NegativeEntropy, &a, &b)
            .unwrap()
            .value;
        let closed = bregman_angle_entropy(&a, &b).unwrap().value;
        assert!((generic - closed).abs() <= 1e-12);
    }
}

#[test]
fn bregman_angle_equals_dot_of_unit_normals() {
    let mut r = rng(12);
    for cost in all_costs() {
        for _ in 0..250 {
            let (a, b) = valid_pair(&mut r);
            let value = bregman_angle(&cost, &a, &b).unwrap().value;
            let e1 = surface_normal(&cost.gradient(&a).unwrap());
            let e2 = surface_normal(&cost.gradient(&b).unwrap());
            assert!((value - e1.dot(&e2)).abs() <= 1e-12, "{}", cost.name());
        }
    }
}

#[test]
fn tangent_under_sq_l2_is_ordinary_cosine() {
    let mut r = rng(13);
    for _ in 0..1000 {
        let n = r.gen_range(1..10);
        let a = uniform_vec(&mut r, n, -10.0, 10.0);
        let b = uniform_vec(&mut r, n, -10.0, 10.0);
        let t = tangent_similarity(&ConvexCost::SquaredL2, &a, &b)
            .unwrap()
            .value;
        let c = cosine_similarity(&a, &b).unwrap().value;
        assert!((t - c).abs() <= 1e-12);
    }
}

#[test]
fn divergence_under_sq_l2_is_squared_distance() {
    let mut r = rng(14);
    for _ in 0..1000 {
        let n = r.gen_range(1..10);
        let a = uniform_vec(&mut r, n, -10.0, 10.0);
        let b = uniform_vec(&mut r, n, -10.0, 10.0);
        let d = bregman_divergence(&ConvexCost::SquaredL2, &a, &b)
            .unwrap()
            .value;
        let e = euclidean_distance(&a, &b).unwrap().value;
        let sq = e * e;
        assert!((d - sq).abs() <= 1e-9 * sq.max(f64::MIN_POSITIVE));
    }
}

#[test]
fn truncated_sq_l2_normals_give_ordinary_cosine() {
    let mut r = rng(15);
    for _ in 0..1000 {
        let n = r.gen_range(1..10);
        let a = uniform_vec(&mut r, n, -10.0, 10.0);
        let b = uniform_vec(&mut r, n, -10.0, 10.0);
        let trunc = |x: &[f64]| {
            let e = surface_normal(&ConvexCost::SquaredL2.gradient(x).unwrap());
            let head = &e.components()[..n];
            let norm = dot(head, head).sqrt();
            head.iter().map(|v| v / norm).collect::<Vec<_>>()
        };
        let via_normals = dot(&trunc(&a), &trunc(&b));
        let c = cosine_similarity(&a, &b).unwrap().value;
        assert!((via_normals - c).abs() <= 1e-12);
    }
}

#[test]
fn measure_axioms_on_random_pairs() {
    let mut r = rng(16);
    let mut measures = vec![Measure::Cosine, Measure::Euclidean];
    for cost in all_costs() {
        measures.push(Measure::bregman_angle(cost));
        measures.push(Measure::Tangent { cost });
    }
    measures.push(Measure::BregmanAngle {
        cost: ConvexCost::total_variation(),
        rule: SubgradientRule::MaxCosine,
    });
    for m in &measures {
        for _ in 0..1000 {
            let (a, b) = valid_pair(&mut r);
            let ab = m.compare(&a, &b).unwrap().value;
            let ba = m.compare(&b, &a).unwrap().value;
            assert_eq!(ab.to_bits(), ba.to_bits(), "{} not symmetric", m.name());
            if m.is_cosine_type() {
                assert!(
                    (-1.0 - 1e-12..=1.0 + 1e-12).contains(&ab),
                    "{}: {ab}",
                    m.name()
                );
                let aa = m.compare(&a, &a).unwrap().value;
                assert!((aa - 1.0).abs() <= 1e-12, "{}: self = {aa}", m.name());
            } else {
                assert!(ab >= 0.0);
                assert_eq!(m.compare(&a, &a).unwrap().value, 0.0);
            }
        }
    }
}

#[test]
fn tv_measures_on_tied_vectors() {
    let mut r = rng(17);
    let cost = ConvexCost::total_variation();
    for _ in 0..1000 {
        let n = r.gen_range(2..8);
        let a: Vec<f64> = (0..n).map(|_| r.gen_range(0..3) as f64).collect();
        let b: Vec<f64> = (0..n).map(|_| r.gen_range(0..3) as f64).collect();
        for rule in [SubgradientRule::Canonical, SubgradientRule::MaxCosine] {
            let ab = bregman_angle_with(&cost, &a, &b, rule).unwrap().value;
            let ba = bregman_angle_with(&cost, &b, &a, rule).unwrap().value;
            assert_eq!(ab.to_bits(), ba.to_bits());
            assert!(ab.abs() <= 1.0 + 1e-12);
            let aa = bregman_angle_with(&cost, &a, &a, rule).unwrap().value;
            assert!((aa - 1.0).abs() <= 1e-12);
        }
        let canonical = bregman_angle(&cost, &a, &b).unwrap().value;
        let best = bregman_angle_with(&cost, &a, &b, SubgradientRule::MaxCosine)
            .unwrap()
            .value;
        assert!(best >= canonical);
    }
}

#[test]
fn divergence_is_nonnegative_and_asymmetric() {
    let mut r = rng(18);
    for cost in all_costs() {
        for _ in 0..250 {
            let (a, b) = valid_pair(&mut r);
            let d = bregman_divergence(&cost, &a, &b).unwrap().value;
            assert!(
                d >= -1e-12 * (1.0 + cost.value(&a).unwrap().abs()),
                "{}",
                cost.name()
            );
        }
    }
    let forward = bregman_divergence(&ConvexCost::NegativeEntropy, &[1.0], &[E])
        .unwrap()
        .value;
    let backward = bregman_divergence(&ConvexCost::NegativeEntropy, &[E], &[1.0])
        .unwrap()
        .value;
    assert!((forward - (E - 2.0)).abs() < 1e-12);
    // e·log e − 0 − 1·(e − 1) = 1.
    assert!((backward - 1.0).abs() < 1e-12);
    assert!((forward - backward).abs() > 0.1);
}

#[test]
fn divergence_matches_direct_evaluation() {
    let mut r = rng(19);
    for _ in 0..200 {
        let (a, b) = valid_pair(&mut r);
        let g: Vec<f64> = b.iter().map(|v| v.ln() + 1.0).collect();
        let step: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let direct = neg_entropy(&a) - neg_entropy(&b) - dot(&g, &step);
        let lib = bregman_divergence(&ConvexCost::NegativeEntropy, &a, &b)
            .unwrap()
            .value;
        assert!((direct - lib).abs() <= 1e-9 * (1.0 + direct.abs()));
    }
}

#[test]
fn entropy_angle_is_not_scale_invariant() {
    // Found by search; ≈ 0.90128 before scaling and ≈ 0.98276 after.
    let (a, b, s) = ([1.0, 2.0], [2.0, 1.0], 10.0);
    let before = bregman_angle(&ConvexCost::NegativeEntropy, &a, &b)
        .unwrap()
        .value;
    let after = bregman_angle(
        &ConvexCost::NegativeEntropy,
        &[a[0] * s, a[1] * s],
        &[b[0] * s, b[1] * s],
    )
    .unwrap()
    .value;
    assert!((before - 0.9012784151520827).abs() < 1e-12);
    assert!((after - 0.9827627464870622).abs() < 1e-12);
    assert!((after - before).abs() > 1e-3);
}

#[test]
fn cosine_is_scale_invariant() {
    let mut r = rng(20);
    for _ in 0..200 {
        let (a, b) = valid_pair(&mut r);
        let (s, t) = (r.gen_range(0.01..100.0), r.gen_range(0.01..100.0));
        let sa: Vec<f64> = a.iter().map(|v| v * s).collect();
        let tb: Vec<f64> = b.iter().map(|v| v * t).collect();
        let c = cosine_similarity(&a, &b).unwrap().value;
        let cs = cosine_similarity(&sa, &tb).unwrap().value;
        assert!((c - cs).abs() <= 1e-12);
    }
}

#[test]
fn literal_tv_still_produces_cosines() {
    let cost = ConvexCost::TotalVariation(TvOptions {
        sign_zero: 0.0,
        paper_literal: true,
    });
    let v = bregman_angle(&cost, &[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0])
        .unwrap()
        .value;
    // Literal gradients are (1, 0, 1) and (−1, 0, −1): (−2 + 1) / 3.
    assert!((v + 1.0 / 3.0).abs() < 1e-15);
}
