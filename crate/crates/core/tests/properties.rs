use std::f64::consts::PI;

use coneoff_core::cone::{angle, cone_formula, default_radii, distance_bounds, mu};
use coneoff_core::coneoff::{chain_reduce, ConeOffSpace};
use coneoff_core::generate;
use coneoff_core::group::{quotient_metric, rescale, translation_length, GroupAction, Word};
use coneoff_core::metric::{four_point_delta, gromov_product, quasi_isometry_defect, thin_triangle_constant};
use coneoff_core::rips::{connectedness_certificate, RipsComplex};
use coneoff_core::subspace::{largest_piece, overlap_diameter, Overlap};
use coneoff_core::{Chain, ConePoint, ConeSpace, Edge, FiniteMetricSpace, FourPointMode, PointId, Subspace, WeightedGraph, SLACK};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn graph(seed: u64, n: usize, extra: usize) -> WeightedGraph {
    generate::random_connected_graph(n, extra, 0.5, 2.0, seed).unwrap()
}

fn random_subspace(rng: &mut ChaCha8Rng, n: usize) -> Subspace {
    let k = rng.gen_range(1..=n);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    Subspace::new(n, all[..k].to_vec()).unwrap()
}

/// Circulant graph on `Z_n` with a symmetric connection set, so rotations
/// and the reflection `i ↦ −i` are isometries.
fn circulant(n: usize, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for s in 1..=n / 2 {
        if s == 1 || rng.gen_bool(0.3) {
            let w = rng.gen_range(0.5..2.0);
            for i in 0..n {
                let j = (i + s) % n;
                if s * 2 == n && j < i {
                    continue;
                }
                edges.push(Edge { u: i, v: j, w });
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

fn dihedral(g: &WeightedGraph) -> GroupAction {
    let n = g.len();
    GroupAction::new(
        g.metric().clone(),
        vec![("r".into(), (0..n).map(|i| (i + 1) % n).collect()), ("s".into(), (0..n).map(|i| (n - i) % n).collect())],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn gromov_product_symmetric_and_bounded(seed in any::<u64>(), n in 2usize..12, extra in 0usize..8) {
        let g = graph(seed, n, extra);
        let m = g.metric();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let a = gromov_product(m, PointId(y), PointId(z), PointId(x)).unwrap();
                    let b = gromov_product(m, PointId(z), PointId(y), PointId(x)).unwrap();
                    prop_assert_eq!(a, b);
                    prop_assert!(a <= m.d(x, y).min(m.d(x, z)) + SLACK);
                    prop_assert!(a >= -SLACK);
                }
            }
        }
    }

    #[test]
    // unit weights only: with uneven weights both constants are measured on
    // vertices alone and the exact bounds can fail (see the acceptance run)
    fn delta_and_thinness_cross_bounds(seed in any::<u64>(), n in 1usize..20, extra in 0usize..15) {
        let g = generate::random_connected_graph(n, extra, 1.0, 1.0, seed).unwrap();
        let delta = four_point_delta(g.metric(), FourPointMode::Exact);
        let tau = thin_triangle_constant(&g);
        prop_assert!(delta <= 8.0 * tau + SLACK);
        prop_assert!(tau <= 4.0 * delta + SLACK);
    }

    #[test]
    // unit weights for the same reason as the cross bounds
    fn thin_quadrilaterals(seed in any::<u64>(), n in 4usize..9, extra in 0usize..8) {
        let g = generate::random_connected_graph(n, extra, 1.0, 1.0, seed).unwrap();
        let m = g.metric();
        let delta = four_point_delta(m, FourPointMode::Exact);
        let table = g.geodesic_table();
        let geo = |a: usize, b: usize| &table[a * n + b].vertices;
        for x in 0..n {
            for x2 in 0..n {
                for y in 0..n {
                    for y2 in 0..n {
                        for &u in geo(x, x2) {
                            if m.d(x, u) > m.d(x, y) + 8.0 * delta + SLACK && m.d(x2, u) > m.d(x2, y2) + 8.0 * delta + SLACK {
                                let near = geo(y, y2).iter().map(|&v| m.d(u, v)).fold(f64::INFINITY, f64::min);
                                prop_assert!(near <= 8.0 * delta + SLACK);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quasi_isometric_spaces_stay_hyperbolic(seed in any::<u64>(), n in 4usize..14) {
        let x = graph(seed, n, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = WeightedGraph::new(
            n,
            x.edges().iter().map(|e| Edge { w: e.w * rng.gen_range(0.8..1.25), ..*e }).collect(),
        )
        .unwrap();
        let map: Vec<usize> = (0..n).collect();
        let eta = quasi_isometry_defect(&map, x.metric(), y.metric()).unwrap();
        let dy = four_point_delta(y.metric(), FourPointMode::Exact);
        let dx = four_point_delta(x.metric(), FourPointMode::Exact);
        prop_assert!(dx <= dy + 3.0 * eta + SLACK);
    }

    #[test]
    fn sampled_delta_never_exceeds_exact(seed in any::<u64>(), n in 4usize..25) {
        let g = graph(seed, n, 10);
        let exact = four_point_delta(g.metric(), FourPointMode::Exact);
        let sampled = four_point_delta(g.metric(), FourPointMode::Sampled { samples: 2000, seed });
        prop_assert!(sampled <= exact);
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn neighbourhoods_grow(seed in any::<u64>(), n in 2usize..20, a in 0.0f64..3.0, b in 0.0f64..3.0) {
        let g = graph(seed, n, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = random_subspace(&mut rng, n);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let small = y.neighborhood(g.metric(), lo);
        let big = y.neighborhood(g.metric(), hi);
        prop_assert!(small.members().iter().all(|&p| big.contains(p)));
        prop_assert_eq!(y.neighborhood(g.metric(), 0.0), y.clone());
    }

    #[test]
    fn overlap_estimate(seed in any::<u64>(), n in 2usize..20, extra in 0usize..10, big_a in 0.0f64..4.0) {
        let g = graph(seed, n, extra);
        let m = g.metric();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let (y, z) = (random_subspace(&mut rng, n), random_subspace(&mut rng, n));
        let delta = four_point_delta(m, FourPointMode::Exact);
        let alpha = y.quasi_convexity_constant(&g).max(z.quasi_convexity_constant(&g));
        if let Overlap::Diameter(lhs) = overlap_diameter(m, &y, &z, big_a) {
            let rhs = overlap_diameter(m, &y, &z, alpha + 10.0 * delta).value() + 2.0 * big_a + 20.0 * delta;
            prop_assert!(lhs <= rhs + SLACK, "lhs {} rhs {}", lhs, rhs);
        }
    }

    #[test]
    fn cylinders_are_strongly_quasiconvex(seed in any::<u64>(), n in 2usize..16, extra in 0usize..8) {
        let g = graph(seed, n, extra);
        let m = g.metric();
        let delta = four_point_delta(m, FourPointMode::Exact);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let y = random_subspace(&mut rng, n);
        if y.quasi_convexity_constant(&g) <= 10.0 * delta + SLACK {
            let cyl = y.cylinder(&g, delta);
            let hood = y.neighborhood(m, 20.0 * delta);
            prop_assert!(cyl.members().iter().all(|&p| hood.contains(p)));
            prop_assert!(cyl.strong_quasiconvexity(&g, delta).holds);
        }
    }

    #[test]
    fn largest_piece_ignores_order(seed in any::<u64>(), n in 3usize..16, k in 2usize..6) {
        let g = graph(seed, n, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let mut family: Vec<Subspace> = Vec::new();
        while family.len() < k {
            let y = random_subspace(&mut rng, n);
            if !family.contains(&y) {
                family.push(y);
            }
            if family.len() as u64 >= (1u64 << n) - 1 {
                break;
            }
        }
        let delta = four_point_delta(g.metric(), FourPointMode::Exact);
        let a = largest_piece(g.metric(), &family, delta).unwrap();
        family.shuffle(&mut rng);
        prop_assert_eq!(a, largest_piece(g.metric(), &family, delta).unwrap());
    }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn mu_is_monotone_subadditive_and_bounded(r0 in 0.1f64..4.0, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let top = 2.0 * PI * r0.sinh();
        let (a, b) = (s * top, t * top);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(mu(lo, r0) <= mu(hi, r0) + SLACK);
        prop_assert!(mu(a + b, r0) <= mu(a, r0) + mu(b, r0) + SLACK);
        prop_assert!(mu(0.5 * (a + b), r0) + SLACK >= 0.5 * (mu(a, r0) + mu(b, r0)));
        let plateau = PI * r0.sinh();
        prop_assert!(mu(a, r0) <= a + SLACK);
        prop_assert!(mu(a, r0) + SLACK >= 2.0 * r0 / plateau * plateau.min(a));
    }

    #[test]
    fn cone_distance_bounds(r0 in 0.1f64..3.0, u in 0.0f64..1.0, v in 0.0f64..1.0, d in 0.0f64..30.0) {
        let (r, r2) = (u * r0, v * r0);
        let theta = angle(d, r0);
        let dist = cone_formula(r, r2, d, r0);
        let (lo, hi) = distance_bounds(r, r2, theta);
        prop_assert!(lo <= dist + SLACK && dist <= hi + SLACK);
        prop_assert!((lo - 2.0 * r.min(r2) * theta / PI).abs() <= SLACK);
        prop_assert!((hi - ((r - r2).abs() + (r.sinh() * r2.sinh()).sqrt() * theta)).abs() <= SLACK);
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn cones_are_metric_and_project_lipschitz(seed in any::<u64>(), n in 1usize..9, r0 in 0.3f64..2.5, m in 1usize..5) {
        let g = graph(seed, n, 3);
        let cone = ConeSpace::with_default_radii(g.metric().clone(), r0, m).unwrap();
        let metric = cone.materialize(true).unwrap();
        let pts = cone.points();
        let lipschitz = 3.0 * PI * r0.sinh() / r0;
        for (i, &x) in pts.iter().enumerate() {
            for (j, &y) in pts.iter().enumerate() {
                let d = metric.d(i, j);
                if x.radius() >= 0.5 * r0 && d < r0 / 3.0 {
                    let (px, py) = (cone.proj(x).unwrap(), cone.proj(y).unwrap());
                    prop_assert!(g.metric().d(px.0, py.0) <= lipschitz * d + SLACK);
                }
            }
        }
        prop_assert_eq!(cone.distance(ConePoint::Apex, cone.iota(PointId(0)).unwrap()).unwrap(), r0);
    }

    #[test]
    fn cones_over_trees_are_ln3_hyperbolic(seed in any::<u64>(), n in 2usize..12, r0 in 0.3f64..3.0) {
        let t = generate::random_tree(n, 0.2, 3.0, seed).unwrap();
        let cone = ConeSpace::with_default_radii(t.metric().clone(), r0, 4).unwrap();
        let delta = four_point_delta(&cone.materialize(false).unwrap(), FourPointMode::Exact);
        prop_assert!(delta <= 3f64.ln() + SLACK);
    }

    #[test]
    fn coneoff_chain_metric(seed in any::<u64>(), n in 2usize..12, r0 in 0.5f64..2.5) {
        let g = graph(seed, n, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        let mut family: Vec<Subspace> = Vec::new();
        for _ in 0..rng.gen_range(1..4) {
            let y = random_subspace(&mut rng, n);
            if !family.contains(&y) {
                family.push(y);
            }
        }
        let space = ConeOffSpace::with_default_radii(g.clone(), family, r0, 3).unwrap();
        let chain = space.chain_matrix();
        chain.validate().unwrap();
        for p in 0..space.len() {
            for q in 0..space.len() {
                prop_assert!(chain.d(p, q) <= space.sc_distance(p, q).unwrap() + SLACK);
                if p < n && q < n {
                    prop_assert!(chain.d(p, q) + SLACK >= mu(g.metric().d(p, q), r0));
                }
            }
        }
    }

    #[test]
    fn chain_reduction_bounds(seed in any::<u64>(), n in 3usize..30, len in 3usize..40, eta_k in 0usize..3) {
        let eta = [0.05, 0.1, 0.25][eta_k];
        let t = generate::random_tree(n, 0.01, 0.3, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        let y = random_subspace(&mut rng, n);
        let space = ConeOffSpace::with_default_radii(t.clone(), vec![y], 1.0, 4).unwrap();
        let mut walk = vec![rng.gen_range(0..n)];
        while walk.len() < len {
            let last = *walk.last().unwrap();
            let next = t.neighbours(last).choose(&mut rng).unwrap().0;
            walk.push(next);
        }
        let chain = Chain::new(walk).unwrap();
        let reduced = chain_reduce(&space, &chain, eta).unwrap();
        let m = reduced.len() as f64;
        prop_assert!(reduced.length(&space) <= chain.length(&space) + m * eta.powi(3) + SLACK);
        let a = chain.length(&space).max(1.0);
        prop_assert!(m < 100.0 * a / eta);
    }
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn rips_monotone_and_consistent(seed in any::<u64>(), n in 1usize..10, d1 in 0.1f64..4.0, d2 in 0.1f64..4.0) {
        let g = graph(seed, n, 3);
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let small = RipsComplex::build(g.metric(), lo, 3).unwrap();
        let big = RipsComplex::build(g.metric(), hi, 3).unwrap();
        for k in 0..=3 {
            prop_assert!(small.simplices(k).iter().all(|s| big.simplices(k).binary_search(s).is_ok()));
        }
        prop_assert!(big.boundary_squares_to_zero());
        let b = big.skeleton_betti_numbers();
        let alt: i64 = b.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        prop_assert_eq!(alt, big.euler_characteristic());
    }

    #[test]
    fn tree_certificates_pass(seed in any::<u64>(), n in 1usize..12, margin in 0.001f64..3.0) {
        let t = generate::random_tree(n, 0.3, 2.0, seed).unwrap();
        let longest = t.edges().iter().map(|e| e.w).fold(0.0, f64::max);
        for k in 0..=2 {
            prop_assert!(connectedness_certificate(t.metric(), longest + margin, k).unwrap().passes);
        }
    }
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn translation_length_is_a_conjugacy_invariant(n in 3usize..14, seed in any::<u64>()) {
        let g = circulant(n, seed);
        let action = dihedral(&g);
        let gens = [Word::generator(0), Word::generator(1)];
        let en = action.enumerate(&gens, 6);
        for a in 0..en.len() {
            let w = en.word(a);
            let base = translation_length(&action, &w).value;
            for b in 0..en.len() {
                let h = en.word(b);
                let conj = h.then(&w).then(&h.inverse());
                prop_assert_eq!(translation_length(&action, &conj).value, base);
            }
        }
    }

    #[test]
    fn injectivity_radius_scales(n in 3usize..14, seed in any::<u64>(), lambda in 0.1f64..5.0) {
        let g = circulant(n, seed);
        let action = dihedral(&g);
        let scaled = GroupAction::new(
            rescale(g.metric(), lambda).unwrap(),
            vec![("r".into(), (0..n).map(|i| (i + 1) % n).collect()), ("s".into(), (0..n).map(|i| (n - i) % n).collect())],
        )
        .unwrap();
        let words = [action.parse_word("r^2").unwrap()];
        let a = action.injectivity_radius(&words, 8).unwrap().value;
        let b = scaled.injectivity_radius(&words, 8).unwrap().value;
        prop_assert!((b - lambda * a).abs() <= SLACK * b.max(1.0));
    }

    #[test]
    fn quotients_are_metrics(k in 3usize..8, m in 1usize..5, seed in any::<u64>()) {
        let (g, shift) = generate::cyclic_cover(k, 2, m, seed).unwrap();
        let action = GroupAction::new(g.metric().clone(), vec![("t".into(), shift)]).unwrap();
        let q = quotient_metric(&action, 12).unwrap();
        prop_assert_eq!(q.orbits.len(), k);
        q.metric.validate().unwrap();
        let n = q.metric.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    prop_assert!(q.metric.d(a, c) <= q.metric.d(a, b) + q.metric.d(b, c) + SLACK);
                }
            }
        }
    }
}

#[test]
fn trivial_quotient_is_an_isometric_copy() {
    let g = graph(7, 6, 3);
    let action = GroupAction::new(g.metric().clone(), vec![("e".into(), (0..6).collect())]).unwrap();
    let q = quotient_metric(&action, 4).unwrap();
    assert_eq!(&q.metric, g.metric());
    let cone = ConeSpace::with_default_radii(g.metric().clone(), 1.0, 3).unwrap();
    assert_eq!(cone.quotient(&action, 4).unwrap().base(), g.metric());
}

#[test]
fn radii_default_layout() {
    assert_eq!(default_radii(2.0, 4), vec![0.5, 1.0, 1.5, 2.0]);
    let f = FiniteMetricSpace::from_fn(2, true, |i, j| if i == j { 0.0 } else { 1.0 }).unwrap();
    assert_eq!(ConeSpace::with_default_radii(f, 1.0, 8).unwrap().point_count(), 17);
}
