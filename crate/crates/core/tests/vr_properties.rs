mod common;

use std::collections::BTreeSet;

use common::*;
use lochom::{build_vr, geodesic_distance, neighborhood_graph, Epsilon, MetricCloud};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cloud(seed: u64, n: usize) -> MetricCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MetricCloud::geodesic((0..n).map(|_| sphere_point(&mut rng)).collect()).unwrap()
}

fn as_faces(k: &lochom::SimplicialComplex) -> BTreeSet<Face> {
    faces_of(k).into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_exhaustive_enumeration(seed in any::<u64>(), n in 0usize..=10, eps in 0.0f64..180.0, max_dim in 0usize..5) {
        let c = cloud(seed, n);
        let k = build_vr(&c, Epsilon::degrees(eps).unwrap(), max_dim);
        let expected = brute_force_vr(&|a, b| c.distance(a, b), n, eps, max_dim + 1);
        prop_assert_eq!(as_faces(&k), expected);
    }

    #[test]
    fn monotone_in_epsilon(seed in any::<u64>(), n in 1usize..=10, a in 0.0f64..180.0, b in 0.0f64..180.0) {
        let c = cloud(seed, n);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let small = build_vr(&c, Epsilon::degrees(lo).unwrap(), 3);
        let large = build_vr(&c, Epsilon::degrees(hi).unwrap(), 3);
        prop_assert!(small.is_subcomplex_of(&large));
    }

    #[test]
    fn clique_property(seed in any::<u64>(), n in 1usize..=12, eps in 20.0f64..100.0) {
        let c = cloud(seed, n);
        let eps = Epsilon::degrees(eps).unwrap();
        let g = neighborhood_graph(&c, eps);
        let k = build_vr(&c, eps, 3);
        for s in k.iter() {
            let v = s.vertices();
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    prop_assert!(g.has_edge(v[i], v[j]));
                }
            }
        }
        let edges: Vec<_> = k.simplices_of_dim(1).iter().map(|e| (e.vertices()[0], e.vertices()[1])).collect();
        prop_assert_eq!(edges, g.edges());
    }

    #[test]
    fn metric_symmetry_and_identity(seed in any::<u64>()) {
        let c = cloud(seed, 2);
        let (x, y) = (c.point(0), c.point(1));
        let dxy = geodesic_distance(x, y).unwrap();
        prop_assert!((dxy - geodesic_distance(y, x).unwrap()).abs() <= 1e-12);
        prop_assert!(geodesic_distance(x, x).unwrap().abs() <= 1e-12);
        prop_assert!((0.0..=180.0).contains(&dxy));
        let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        prop_assert!((dxy - dot.clamp(-1.0, 1.0).acos().to_degrees()).abs() < 1e-6);
    }
}

#[test]
fn construction_is_deterministic() {
    let c = cloud(3, 30);
    let eps = Epsilon::degrees(45.0).unwrap();
    assert_eq!(
        build_vr(&c, eps, 4).simplices(),
        build_vr(&c, eps, 4).simplices()
    );
}

#[test]
fn duplicate_points_always_connect() {
    let p = vec![0.0, 0.6, 0.8];
    let c = MetricCloud::geodesic(vec![p.clone(), p.clone(), p]).unwrap();
    let k = build_vr(&c, Epsilon::degrees(0.0).unwrap(), 2);
    assert_eq!(k.f_vector(), vec![3, 3, 1]);
}
