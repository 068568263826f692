//! Seeded random instance generators for the property suites and the
//! randomized CLI subcommands. All randomness flows through the caller's
//! generator, so a fixed seed reproduces every instance byte for byte.

use num_rational::BigRational;
use rand::Rng;

use crate::coloring::{
    greedy_quotient_coloring, CoherentSequence, CoherentStage, Color, TotalSampleColoring,
};
use crate::field::Scalar;
use crate::hypergraph::{gamma_closure, third_points, ClosedSubspace, LinearHypergraph};
use crate::linear::GroupPoint;
use crate::poset::{Condition, MergeScene};
use crate::remainder::quotient;

fn small_rational(rng: &mut impl Rng) -> BigRational {
    let numer: i64 = rng.random_range(-4..=4);
    let denom: i64 = rng.random_range(1..=3);
    BigRational::new(numer.into(), denom.into())
}

fn random_scalar(field: &crate::field::NumberField, rng: &mut impl Rng) -> Scalar {
    if field.is_rational() {
        Scalar::from_rational(small_rational(rng), field.clone())
    } else {
        Scalar::new(small_rational(rng), small_rational(rng), field.clone())
    }
}

/// A random point with small coordinates.
pub fn random_point(h: &LinearHypergraph, rng: &mut impl Rng) -> GroupPoint {
    GroupPoint::new((0..h.dim()).map(|_| random_scalar(h.field(), rng)).collect())
}

/// A random nonzero point outside the subspace; the subspace must be
/// proper.
pub fn random_point_outside(
    h: &LinearHypergraph,
    a: &ClosedSubspace,
    rng: &mut impl Rng,
) -> GroupPoint {
    assert!(!a.basis().is_full_space(), "no points outside the full space");
    loop {
        let p = random_point(h, rng);
        if !p.is_zero() && !a.contains(&p) {
            return p;
        }
    }
}

/// A random point in the span of `a`, as a small rational combination of
/// its basis.
pub fn random_point_inside(a: &ClosedSubspace, rng: &mut impl Rng) -> GroupPoint {
    let field = a.field();
    let dim = a.ambient_dim();
    let mut acc = GroupPoint::zero(field, dim);
    for v in a.basis().vectors() {
        acc = acc.add(&v.scale_rational(&small_rational(rng)));
    }
    acc
}

/// The closure of a few random points; retried until the rank lands in
/// `min_rank..=max_rank` (rational dimensions).
pub fn random_closed_subspace(
    h: &LinearHypergraph,
    rng: &mut impl Rng,
    min_rank: usize,
    max_rank: usize,
) -> ClosedSubspace {
    loop {
        let seeds: Vec<GroupPoint> = (0..rng.random_range(0..=2))
            .map(|_| random_point(h, rng))
            .collect();
        let c = gamma_closure(h, &seeds);
        if (min_rank..=max_rank).contains(&c.basis().rank()) {
            return c;
        }
    }
}

/// A proper closed subspace together with a sample of distinct points
/// outside it.
pub fn random_remainder_instance(
    h: &LinearHypergraph,
    rng: &mut impl Rng,
    max_sample: usize,
) -> (ClosedSubspace, Vec<GroupPoint>) {
    let full = h.dim() * h.field().degree();
    let a = random_closed_subspace(h, rng, 0, full - 1);
    let count = rng.random_range(2..=max_sample);
    let mut sample = Vec::new();
    while sample.len() < count {
        let p = random_point_outside(h, &a, rng);
        if !sample.contains(&p) {
            sample.push(p);
        }
    }
    (a, sample)
}

/// A coherent sequence over a random increasing filtration, with injective
/// tier-zero stage colorings and greedy-quotient remainder colorings.
pub fn random_coherent_sequence(
    h: &LinearHypergraph,
    rng: &mut impl Rng,
    max_stage_sample: usize,
) -> CoherentSequence {
    let full_rank = h.dim() * h.field().degree();
    // ascending chain of closures, strictly growing until it happens to fill
    let mut subspaces: Vec<ClosedSubspace> = Vec::new();
    let first = random_closed_subspace(h, rng, 0, full_rank - 1);
    subspaces.push(first);
    let stages = rng.random_range(2..=3);
    for _ in 1..stages {
        let prev = subspaces.last().expect("nonempty");
        if prev.basis().is_full_space() {
            break;
        }
        let mut seeds: Vec<GroupPoint> = prev.basis().vectors().to_vec();
        seeds.push(random_point_outside(h, prev, rng));
        subspaces.push(gamma_closure(h, &seeds));
    }

    // sample points with a definite least stage
    let mut per_stage_samples: Vec<Vec<GroupPoint>> = Vec::new();
    let mut all: Vec<GroupPoint> = Vec::new();
    for (i, a) in subspaces.iter().enumerate() {
        let mut pts = Vec::new();
        let want = rng.random_range(1..=max_stage_sample);
        let mut attempts = 0;
        while pts.len() < want && attempts < 200 {
            attempts += 1;
            let p = random_point_inside(a, rng);
            let new_here = i == 0 || !subspaces[i - 1].contains(&p);
            if new_here && !all.contains(&p) && !pts.contains(&p) {
                pts.push(p);
            }
        }
        all.extend(pts.iter().cloned());
        per_stage_samples.push(pts);
    }

    let mut stages_out = Vec::new();
    let mut tag = 0u32;
    for (i, a) in subspaces.iter().enumerate() {
        let mut stage_coloring = TotalSampleColoring::new();
        for p in &all {
            if a.contains(p) {
                stage_coloring.insert(p.clone(), Color::simple(tag));
                tag += 1;
            }
        }
        let remainder_coloring = if i == 0 {
            None
        } else {
            let prev = &subspaces[i - 1];
            let (theta, _) = quotient(h, prev, &per_stage_samples[i])
                .expect("stage samples lie outside the previous subspace");
            Some(greedy_quotient_coloring(&theta).as_sample_coloring())
        };
        stages_out.push(CoherentStage {
            subspace: a.clone(),
            stage_coloring,
            remainder_coloring,
        });
    }
    let seq = CoherentSequence { stages: stages_out };
    debug_assert!(seq.validate(h).is_ok());
    seq
}

fn grow_subspace(
    h: &LinearHypergraph,
    core: &ClosedSubspace,
    rng: &mut impl Rng,
) -> ClosedSubspace {
    let mut seeds: Vec<GroupPoint> = core.basis().vectors().to_vec();
    seeds.push(random_point_outside(h, core, rng));
    gamma_closure(h, &seeds)
}

fn sample_off_core(
    core: &ClosedSubspace,
    a: &ClosedSubspace,
    rng: &mut impl Rng,
) -> Vec<GroupPoint> {
    let mut pts: Vec<GroupPoint> = Vec::new();
    let want = rng.random_range(1..=3);
    let mut attempts = 0;
    while pts.len() < want && attempts < 200 {
        attempts += 1;
        let p = random_point_inside(a, rng);
        if !core.contains(&p) && !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// A valid merge scene plus extra points for the merge, optionally with a
/// planted cross pair so the computed tier is forced upward.
pub fn random_merge_scene(
    h: &LinearHypergraph,
    rng: &mut impl Rng,
    plant_cross: bool,
) -> (MergeScene, Vec<GroupPoint>) {
    let full_rank = h.dim() * h.field().degree();
    loop {
        // core: zero subspace or, occasionally, a proper closure
        let core = if rng.random_bool(0.25) {
            random_closed_subspace(h, rng, 0, full_rank.saturating_sub(2))
        } else {
            gamma_closure(h, &[])
        };
        let a0 = grow_subspace(h, &core, rng);
        let a1 = grow_subspace(h, &core, rng);
        if a0.basis().intersect(a1.basis()) != *core.basis() {
            continue;
        }

        // shared core sample and background coloring
        let mut tag = 0u32;
        let mut background = TotalSampleColoring::new();
        if !core.basis().is_zero_space() {
            for _ in 0..rng.random_range(1..=2) {
                let p = random_point_inside(&core, rng);
                background.entry(p).or_insert_with(|| {
                    tag += 1;
                    Color::simple(1000 + tag)
                });
            }
        }

        let off0 = sample_off_core(&core, &a0, rng);
        let off1 = sample_off_core(&core, &a1, rng);
        if off0.is_empty() && off1.is_empty() {
            continue;
        }

        let mut colorings: [TotalSampleColoring; 2] =
            [background.clone(), background.clone()];
        for (side, pts) in [(0usize, &off0), (1usize, &off1)] {
            for p in pts {
                tag += 1;
                let tier = rng.random_range(0..=2);
                colorings[side].insert(p.clone(), Color::at_tier(tier, vec![tag]));
            }
        }

        // extra points for the merge, all outside both domains
        let both_full = a0.basis().is_full_space() || a1.basis().is_full_space();
        let mut extra: Vec<GroupPoint> = Vec::new();
        if !both_full {
            let want = rng.random_range(0..=2);
            let mut attempts = 0;
            while extra.len() < want && attempts < 200 {
                attempts += 1;
                let p = random_point(h, rng);
                if !a0.contains(&p) && !a1.contains(&p) && !extra.contains(&p) {
                    extra.push(p);
                }
            }
            if plant_cross && !off0.is_empty() && !off1.is_empty() {
                let x0 = &off0[rng.random_range(0..off0.len())];
                let x1 = &off1[rng.random_range(0..off1.len())];
                if x0 != x1 {
                    let tier = rng.random_range(0..=1);
                    colorings[0].insert(x0.clone(), Color::at_tier(tier, vec![tag + 1]));
                    colorings[1].insert(x1.clone(), Color::at_tier(tier, vec![tag + 2]));
                    for z in third_points(h, x0, x1).expect("distinct points") {
                        if !a0.contains(&z) && !a1.contains(&z) && !extra.contains(&z) {
                            extra.push(z);
                            break;
                        }
                    }
                }
            }
        }

        let p0 = match Condition::new(h, a0, colorings[0].clone()) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let p1 = match Condition::new(h, a1, colorings[1].clone()) {
            Ok(c) => c,
            Err(_) => continue,
        };
        match MergeScene::new(core, p0, p1, background) {
            Ok(scene) => return (scene, extra),
            Err(_) => continue,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic_under_a_seed() {
        let h = LinearHypergraph::preset_ap(2);
        let mut r1 = ChaCha8Rng::seed_from_u64(42);
        let mut r2 = ChaCha8Rng::seed_from_u64(42);
        let (a1, s1) = random_remainder_instance(&h, &mut r1, 10);
        let (a2, s2) = random_remainder_instance(&h, &mut r2, 10);
        assert_eq!(a1.basis(), a2.basis());
        assert_eq!(s1, s2);
    }

    #[test]
    fn coherent_sequences_validate() {
        let h = LinearHypergraph::preset_ap(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let seq = random_coherent_sequence(&h, &mut rng, 6);
            assert!(seq.validate(&h).is_ok());
        }
    }

    #[test]
    fn equilateral_sequences_validate() {
        let h = LinearHypergraph::preset_equilateral(1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let seq = random_coherent_sequence(&h, &mut rng, 5);
            assert!(seq.validate(&h).is_ok());
        }
    }

    #[test]
    fn merge_scenes_are_valid_and_mergeable() {
        let h = LinearHypergraph::preset_ap(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..5 {
            let (scene, extra) = random_merge_scene(&h, &mut rng, i % 2 == 0);
            let out = crate::poset::merge(&h, &scene, &extra).unwrap();
            let (p0, p1) = scene.conditions();
            assert!(crate::poset::leq(&out.condition, p0).holds);
            assert!(crate::poset::leq(&out.condition, p1).holds);
        }
    }
}
