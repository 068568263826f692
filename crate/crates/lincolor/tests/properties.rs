//! Property suites: algebraic invariants under randomized inputs, with
//! independent re-derivation wherever a cheap oracle exists.

use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lincolor::coloring::{amalgamate, pair_color, Color};
use lincolor::field::{NumberField, Scalar};
use lincolor::hj::{all_words, hj_threshold, phi};
use lincolor::hypergraph::{
    find_hyperedges, gamma_closure, third_points, LinearHypergraph,
};
use lincolor::instances::{
    random_coherent_sequence, random_merge_scene, random_point, random_remainder_instance,
};
use lincolor::linear::{solve, Basis, ExactMatrix, GroupPoint};
use lincolor::poset::{extend, leq, merge, Condition};
use lincolor::ramsey::{
    check_ramsey_centered, enumerate_conditions, lower_bound, Universe,
};
use lincolor::remainder::{quotient, remainder_graph};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rational_strategy() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn scalar_strategy(quadratic: bool) -> impl Strategy<Value = Scalar> {
    (rational_strategy(), rational_strategy()).prop_map(move |(a, b)| {
        if quadratic {
            Scalar::new(a, b, NumberField::eisenstein())
        } else {
            Scalar::from_rational(a, NumberField::rational())
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    // associativity and distributivity hold exactly in both fields
    #[test]
    fn field_axioms_hold_exactly(quadratic in any::<bool>(), seed in any::<u64>()) {
        let mut runner = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let field = if quadratic { NumberField::eisenstein() } else { NumberField::rational() };
        let s = |rng: &mut ChaCha8Rng| {
            let a = rat(rng.random_range(-6..=6), rng.random_range(1..=4));
            let b = if quadratic { rat(rng.random_range(-6..=6), rng.random_range(1..=4)) } else { rat(0, 1) };
            Scalar::new(a, b, field.clone())
        };
        let (x, y, z) = (s(&mut runner), s(&mut runner), s(&mut runner));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            let inv = x.inverse().unwrap();
            prop_assert!((&x * &inv).is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // for full-rank m and any v, applying m to solve(m, v) returns v
    #[test]
    fn solve_round_trips_on_full_rank_matrices(
        entries in proptest::collection::vec(rational_strategy(), 4),
        target in proptest::collection::vec(rational_strategy(), 2),
    ) {
        let q = NumberField::rational();
        let rows = vec![
            vec![Scalar::from_rational(entries[0].clone(), q.clone()),
                 Scalar::from_rational(entries[1].clone(), q.clone())],
            vec![Scalar::from_rational(entries[2].clone(), q.clone()),
                 Scalar::from_rational(entries[3].clone(), q.clone())],
        ];
        let m = ExactMatrix::from_rows(rows).unwrap();
        let v = GroupPoint::new(vec![
            Scalar::from_rational(target[0].clone(), q.clone()),
            Scalar::from_rational(target[1].clone(), q),
        ]);
        prop_assume!(m.is_injective());
        let u = solve(&m, &v).expect("full-rank systems are solvable");
        prop_assert_eq!(m.apply(&u), v);
    }

    // quadratic scalars solve and multiply back exactly
    #[test]
    fn quadratic_scalar_solve_round_trips(s in scalar_strategy(true)) {
        prop_assume!(!s.is_zero());
        let m = ExactMatrix::scalar(&s, 1);
        let k = NumberField::eisenstein();
        let v = GroupPoint::new(vec![k.one()]);
        let u = solve(&m, &v).unwrap();
        prop_assert_eq!(m.apply(&u), v);
    }

    // echelon bases are canonical under generator permutation and scaling
    #[test]
    fn echelon_canonical_under_permutation(
        coords in proptest::collection::vec(rational_strategy(), 6),
        scale in 1i64..=5,
    ) {
        let q = NumberField::rational();
        let pts: Vec<GroupPoint> = coords
            .chunks(2)
            .map(|c| GroupPoint::new(vec![
                Scalar::from_rational(c[0].clone(), q.clone()),
                Scalar::from_rational(c[1].clone(), q.clone()),
            ]))
            .collect();
        let b1 = Basis::new(&q, 2, &pts);
        let mut permuted: Vec<GroupPoint> = pts.iter().rev().cloned().collect();
        permuted[0] = permuted[0].scale_rational(&rat(scale, 1));
        let b2 = Basis::new(&q, 2, &permuted);
        prop_assert_eq!(b1, b2);
    }

    // injective pairing of colors
    #[test]
    fn pair_color_is_injective(
        t1 in 0u32..4, g1 in proptest::collection::vec(0u32..8, 0..3),
        t2 in 0u32..4, g2 in proptest::collection::vec(0u32..8, 0..3),
        t3 in 0u32..4, g3 in proptest::collection::vec(0u32..8, 0..3),
        t4 in 0u32..4, g4 in proptest::collection::vec(0u32..8, 0..3),
    ) {
        let (a, b) = (Color::at_tier(t1, g1), Color::at_tier(t2, g2));
        let (c, d) = (Color::at_tier(t3, g3), Color::at_tier(t4, g4));
        if pair_color(&a, &b) == pair_color(&c, &d) {
            prop_assert_eq!((a, b), (c, d));
        }
    }
}

#[test]
fn hyperedges_reverify_and_degree_bound_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let presets = [
        LinearHypergraph::preset_ap(1),
        LinearHypergraph::preset_ap(2),
        LinearHypergraph::preset_equilateral(1),
    ];
    for trial in 0..500 {
        let h = &presets[trial % presets.len()];
        let sample: Vec<GroupPoint> = (0..6).map(|_| random_point(h, &mut rng)).collect();
        for edge in find_hyperedges(h, &sample) {
            assert!(edge.verify(h), "stored witness must re-derive");
        }
        let x = random_point(h, &mut rng);
        let y = random_point(h, &mut rng);
        if x != y {
            let zs = third_points(h, &x, &y).unwrap();
            assert!(zs.len() <= 6 * h.components().len());
            for z in &zs {
                assert!(h.is_hyperedge(&[x.clone(), y.clone(), z.clone()]));
            }
        }
    }
}

#[test]
fn closure_is_idempotent_monotone_and_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let presets = [
        LinearHypergraph::preset_ap(2),
        LinearHypergraph::preset_equilateral(1),
        LinearHypergraph::preset_equilateral(2),
    ];
    for trial in 0..60 {
        let h = &presets[trial % presets.len()];
        let seed: Vec<GroupPoint> = (0..2).map(|_| random_point(h, &mut rng)).collect();
        let closure = gamma_closure(h, &seed);
        // soundness is checked inside is_closed_under: basis images stay in span
        assert!(closure.is_closed_under(h));
        // idempotence: closing the basis changes nothing
        let again = gamma_closure(h, closure.basis().vectors());
        assert_eq!(closure.basis(), again.basis());
        // monotonicity: growing the seed grows the span
        let mut bigger = seed.clone();
        bigger.push(random_point(h, &mut rng));
        let larger = gamma_closure(h, &bigger);
        assert!(larger.basis().contains_basis(closure.basis()));
    }
}

#[test]
fn quotient_homomorphism_and_neighbor_uniqueness_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let presets = [
        LinearHypergraph::preset_ap(2),
        LinearHypergraph::preset_equilateral(2),
    ];
    for trial in 0..12 {
        let h = &presets[trial % presets.len()];
        let (a, sample) = random_remainder_instance(h, &mut rng, 12);
        let g = remainder_graph(h, &a, &sample).unwrap();
        assert!(g.verify(h));
        let (theta, f) = quotient(h, &a, &sample).unwrap();
        for e in g.edges() {
            assert_ne!(
                f[&g.vertices()[e.x]],
                f[&g.vertices()[e.y]],
                "edge endpoints must land in distinct classes"
            );
        }
        assert!(lincolor::remainder::check_local_finiteness(&theta, h).is_empty());
    }
}

#[test]
fn amalgamation_extends_the_first_stage() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let h = LinearHypergraph::preset_ap(2);
    for _ in 0..20 {
        let seq = random_coherent_sequence(&h, &mut rng, 5);
        let e = amalgamate(&seq).unwrap();
        let first = &seq.stages[0];
        for (p, c) in &first.stage_coloring {
            if first.subspace.contains(p) {
                assert_eq!(&e[p], c, "first-stage colors survive amalgamation");
            }
        }
    }
}

#[test]
fn order_is_transitive_along_generated_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let h = LinearHypergraph::preset_ap(2);
    for i in 0..20 {
        let p = Condition::empty(&h);
        let q1 = extend(&h, &p, &random_point(&h, &mut rng));
        let q2 = extend(&h, &q1, &random_point(&h, &mut rng));
        let q3 = extend(&h, &q2, &random_point(&h, &mut rng));
        assert!(leq(&q1, &p).holds);
        assert!(leq(&q2, &q1).holds);
        assert!(leq(&q3, &q2).holds);
        assert!(leq(&q3, &p).holds, "two-step descent composes");
        assert!(leq(&q3, &q1).holds);

        // merge output sits below both inputs and extends transitively
        let (scene, extra) = random_merge_scene(&h, &mut rng, i % 2 == 0);
        let out = merge(&h, &scene, &extra).unwrap();
        let (p0, p1) = scene.conditions();
        let deeper = extend(&h, &out.condition, &random_point(&h, &mut rng));
        if leq(&deeper, &out.condition).holds {
            assert!(leq(&deeper, p0).holds);
            assert!(leq(&deeper, p1).holds);
        }
    }
}

#[test]
fn pair_classifier_soundness_on_remainder_graph_instances() {
    use lincolor::ramsey::{classify_pair, ok_homogeneous_implies_bound, EnumeratedCondition, Label};
    // finite-neighborhood graphs straight from remainder-graph windows
    let h = LinearHypergraph::preset_ap(2);
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut ok_pairs = 0usize;
    for _ in 0..5 {
        let (a, sample) = random_remainder_instance(&h, &mut rng, 8);
        let g = remainder_graph(&h, &a, &sample).unwrap();
        let pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.x, e.y)).collect();
        let universe = Universe::graph(g.vertices().len(), &pairs);
        for k in 1..=2usize {
            let conds: Vec<EnumeratedCondition> = enumerate_conditions(&universe, k, 2)
                .into_iter()
                .map(EnumeratedCondition::canonical)
                .collect();
            for i in 0..conds.len() {
                for j in (i + 1)..conds.len() {
                    let family = [conds[i].clone(), conds[j].clone()];
                    if classify_pair(&universe, &family, [0, 1]).unwrap() == Label::Ok {
                        ok_pairs += 1;
                        ok_homogeneous_implies_bound(&universe, &family, &[0, 1])
                            .expect("OK pairs bound");
                    }
                }
            }
        }
    }
    assert!(ok_pairs > 0);
}

#[test]
fn lower_bound_depends_only_on_the_set() {
    let h = LinearHypergraph::preset_ap(1);
    let q = NumberField::rational();
    let pts: Vec<GroupPoint> = (0..4).map(|i| GroupPoint::new(vec![q.integer(i)])).collect();
    let universe = Universe::from_hypergraph(&h, &pts);
    let conds = enumerate_conditions(&universe, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    use rand::Rng;
    for _ in 0..200 {
        let i = rng.random_range(0..conds.len());
        let j = rng.random_range(0..conds.len());
        let k = rng.random_range(0..conds.len());
        let forward = lower_bound(&universe, &[&conds[i], &conds[j], &conds[k]]);
        let backward = lower_bound(&universe, &[&conds[k], &conds[i], &conds[j], &conds[i]]);
        assert_eq!(forward, backward, "order and repetition are immaterial");
    }
}

#[test]
fn centeredness_is_monotone_in_the_tuple_length() {
    let u = Universe::graph(2, &[]);
    let mut last = false;
    for m in 2..=6 {
        let now = check_ramsey_centered(&u, 1, 2, 2, m, 1 << 24)
            .unwrap()
            .holds();
        assert!(!(last && !now), "centeredness lost when lengthening tuples at m={m}");
        last = now;
    }
    assert!(last, "pigeonhole makes long tuples centered");
}

#[test]
fn cover_number_is_at_least_the_color_count_past_the_threshold() {
    // hj_threshold(2, 2) = 2, so the full square at length 2 needs at
    // least two line-free pieces; the exact value is three.
    let threshold = hj_threshold(2, 2, 3, 1 << 24).unwrap().unwrap();
    assert_eq!(threshold, 2);
    let value = phi(&all_words(threshold, 2), threshold, 2, 1 << 24).unwrap();
    assert!(value >= 2);
    assert_eq!(value, 3);
}
