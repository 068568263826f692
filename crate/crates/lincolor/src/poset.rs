//! The balanced coloring poset at sample scale: conditions, the
//! coset-tier order, the density extension, and the constructive merge of
//! two conditions over a common core.
//!
//! A condition is a proper coloring of a finite sample inside a closed
//! domain subspace. Extension keeps all old colors, and on each coset of
//! the weaker condition's domain the extension's tiers stay within a
//! recorded finite bound. Orbits of the domain under addition are exactly
//! its cosets, so the order reports a per-coset tier bound instead of the
//! vacuous "bounded" on finite data.
//!
//! The merge of two conditions whose domains intersect precisely in the
//! core colors each genuinely new point at the least tier admitting no
//! cross pair: no pair of off-core points, one sampled by each condition
//! at that tier, completes a hyperedge with it. Fresh tags keep the new
//! colors injective. The merged condition is verified proper and below
//! both inputs; any failure is returned as a bug certificate.


use crate::coloring::{verify_coloring, Color, TotalSampleColoring};
use crate::error::PosetError;
use crate::hypergraph::{canonical_points, gamma_closure, ClosedSubspace, LinearHypergraph};
use crate::linear::GroupPoint;

/// A proper partial coloring with a closed domain subspace.
#[derive(Clone, Debug)]
pub struct Condition {
    domain: ClosedSubspace,
    coloring: TotalSampleColoring,
}

impl Condition {
    /// Builds and validates a condition: the sample lies inside the domain
    /// subspace and the coloring is proper on sampled hyperedges.
    pub fn new(
        h: &LinearHypergraph,
        domain: ClosedSubspace,
        coloring: TotalSampleColoring,
    ) -> Result<Self, PosetError> {
        for p in coloring.keys() {
            if !domain.contains(p) {
                return Err(PosetError::SampleOutsideDomain { point: p.to_string() });
            }
        }
        if verify_coloring(h, &coloring).is_some() {
            return Err(PosetError::ImproperColoring);
        }
        Ok(Condition { domain, coloring })
    }

    /// The empty condition over the zero subspace.
    pub fn empty(h: &LinearHypergraph) -> Self {
        Condition {
            domain: gamma_closure(h, &[]),
            coloring: TotalSampleColoring::new(),
        }
    }

    pub fn domain(&self) -> &ClosedSubspace {
        &self.domain
    }

    pub fn coloring(&self) -> &TotalSampleColoring {
        &self.coloring
    }

    pub fn sample(&self) -> Vec<GroupPoint> {
        self.coloring.keys().cloned().collect()
    }

    pub fn color_of(&self, p: &GroupPoint) -> Option<&Color> {
        self.coloring.get(p)
    }
}

/// Per-coset tier bound exposed by the order check: all new points in the
/// coset of `representative` carry tiers strictly below `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetBound {
    pub representative: GroupPoint,
    pub bound: u32,
}

/// Outcome of the order comparison `q <= p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeqReport {
    pub holds: bool,
    pub failure: Option<String>,
    pub coset_bounds: Vec<CosetBound>,
}

/// Checks `q <= p`: `p`'s colors persist in `q`, `p`'s domain subspace is
/// contained in `q`'s, and each coset of `p`'s domain meeting `q`'s new
/// sample gets its maximum-tier bound recorded.
pub fn leq(q: &Condition, p: &Condition) -> LeqReport {
    for (point, color) in p.coloring() {
        match q.color_of(point) {
            Some(c) if c == color => {}
            Some(_) => {
                return LeqReport {
                    holds: false,
                    failure: Some(format!("colors disagree at {point}")),
                    coset_bounds: Vec::new(),
                }
            }
            None => {
                return LeqReport {
                    holds: false,
                    failure: Some(format!("point {point} lost its color")),
                    coset_bounds: Vec::new(),
                }
            }
        }
    }
    if !q.domain().basis().contains_basis(p.domain().basis()) {
        return LeqReport {
            holds: false,
            failure: Some("domain subspace does not grow".to_string()),
            coset_bounds: Vec::new(),
        };
    }
    let new_points: Vec<GroupPoint> = q
        .coloring()
        .keys()
        .filter(|p_| !p.coloring().contains_key(*p_))
        .cloned()
        .collect();
    let classes = crate::hypergraph::coset_partition(p.domain(), &new_points);
    let coset_bounds = classes
        .into_iter()
        .map(|class| {
            let max_tier = class
                .iter()
                .map(|pt| q.coloring()[pt].tier)
                .max()
                .expect("classes are nonempty");
            CosetBound { representative: class[0].clone(), bound: max_tier + 1 }
        })
        .collect();
    LeqReport { holds: true, failure: None, coset_bounds }
}

/// Tags not yet used by any single-entry tag in the given colorings; fresh
/// colors drawn from here cannot collide with existing stage colors.
fn fresh_tag_base(colorings: &[&TotalSampleColoring]) -> u32 {
    colorings
        .iter()
        .flat_map(|c| c.values())
        .filter_map(|c| if c.tag.len() == 1 { Some(c.tag[0] + 1) } else { None })
        .max()
        .unwrap_or(0)
}

/// Extends `p` by one point: the domain closes over the new point, which is
/// colored injectively fresh at tier zero. Old colors are untouched; a
/// point already sampled returns `p` unchanged.
pub fn extend(h: &LinearHypergraph, p: &Condition, x: &GroupPoint) -> Condition {
    if p.coloring().contains_key(x) {
        return p.clone();
    }
    let mut seed: Vec<GroupPoint> = p.domain().basis().vectors().to_vec();
    seed.push(x.clone());
    let domain = gamma_closure(h, &seed);
    let mut coloring = p.coloring().clone();
    let tag = fresh_tag_base(&[p.coloring()]);
    coloring.insert(x.clone(), Color::simple(tag));
    // a fresh color cannot complete a monochromatic hyperedge
    debug_assert!(verify_coloring(h, &coloring).is_none());
    Condition { domain, coloring }
}

/// Folds a descending chain into its union, the chain's lower bound.
pub fn chain_union(h: &LinearHypergraph, chain: &[Condition]) -> Result<Condition, PosetError> {
    let mut coloring = TotalSampleColoring::new();
    let mut gens: Vec<GroupPoint> = Vec::new();
    for cond in chain {
        for (p, c) in cond.coloring() {
            match coloring.get(p) {
                Some(existing) if existing != c => {
                    return Err(PosetError::NotAFunction { point: p.to_string() })
                }
                _ => {
                    coloring.insert(p.clone(), c.clone());
                }
            }
        }
        gens.extend(cond.domain().basis().vectors().iter().cloned());
    }
    let domain = gamma_closure(h, &gens);
    Condition::new(h, domain, coloring)
}

/// Two conditions over a common core, with the background coloring they
/// both restrict to on the sampled core points.
#[derive(Clone, Debug)]
pub struct MergeScene {
    core: ClosedSubspace,
    p0: Condition,
    p1: Condition,
    background: TotalSampleColoring,
}

impl MergeScene {
    /// Validates the scene: the domain subspaces intersect exactly in the
    /// core, both conditions sample the same core points, and both agree
    /// with the background coloring there.
    pub fn new(
        core: ClosedSubspace,
        p0: Condition,
        p1: Condition,
        background: TotalSampleColoring,
    ) -> Result<Self, PosetError> {
        let meet = p0.domain().basis().intersect(p1.domain().basis());
        if meet != *core.basis() {
            return Err(PosetError::CoreMismatch);
        }
        let core_sample = |cond: &Condition| -> Vec<GroupPoint> {
            cond.coloring()
                .keys()
                .filter(|p| core.contains(p))
                .cloned()
                .collect()
        };
        let s0 = core_sample(&p0);
        let s1 = core_sample(&p1);
        if s0 != s1 {
            let diff = s0
                .iter()
                .find(|p| !s1.contains(p))
                .or_else(|| s1.iter().find(|p| !s0.contains(p)))
                .expect("sets differ");
            return Err(PosetError::CoreSampleMismatch { point: diff.to_string() });
        }
        for p in &s0 {
            let Some(bg) = background.get(p) else {
                return Err(PosetError::BackgroundIncomplete { point: p.to_string() });
            };
            for (side, cond) in [(0usize, &p0), (1usize, &p1)] {
                if cond.color_of(p) != Some(bg) {
                    return Err(PosetError::BackgroundDisagreement {
                        side,
                        point: p.to_string(),
                    });
                }
            }
        }
        Ok(MergeScene { core, p0, p1, background })
    }

    pub fn core(&self) -> &ClosedSubspace {
        &self.core
    }

    pub fn conditions(&self) -> (&Condition, &Condition) {
        (&self.p0, &self.p1)
    }

    pub fn background(&self) -> &TotalSampleColoring {
        &self.background
    }

    /// Sampled points of `p0` (side 0) or `p1` (side 1) off the core.
    pub fn off_core_sample(&self, side: usize) -> Vec<GroupPoint> {
        let cond = if side == 0 { &self.p0 } else { &self.p1 };
        cond.coloring()
            .keys()
            .filter(|p| !self.core.contains(p))
            .cloned()
            .collect()
    }
}

/// The least tier `n` such that no pair of off-core points, one sampled by
/// each condition with both colors at tier `n`, completes a hyperedge with
/// `x`. Exhaustive over sampled pairs.
pub fn compute_nx(
    h: &LinearHypergraph,
    scene: &MergeScene,
    x: &GroupPoint,
) -> Result<u32, PosetError> {
    let (p0, p1) = scene.conditions();
    if p0.domain().contains(x) || p1.domain().contains(x) {
        return Err(PosetError::PointInsideDomain { point: x.to_string() });
    }
    let off0 = scene.off_core_sample(0);
    let off1 = scene.off_core_sample(1);
    let mut blocked = std::collections::BTreeSet::new();
    for x0 in &off0 {
        for x1 in &off1 {
            let t0 = p0.coloring()[x0].tier;
            let t1 = p1.coloring()[x1].tier;
            if t0 == t1 && h.is_hyperedge(&[x0.clone(), x1.clone(), x.clone()]) {
                blocked.insert(t0);
            }
        }
    }
    let mut n = 0u32;
    while blocked.contains(&n) {
        n += 1;
    }
    Ok(n)
}

/// The merged condition together with the tier certificates of its new
/// points.
#[derive(Clone, Debug)]
pub struct MergeOutcome {
    pub condition: Condition,
    /// Each genuinely new point with the tier it was forced to.
    pub new_tiers: Vec<(GroupPoint, u32)>,
}

/// Merges the scene's conditions and the extra points into a single
/// condition below both, coloring each extra point at its computed tier
/// with a fresh tag. Properness and both order relations are verified; a
/// failure certifies a bug in the scene or the implementation.
pub fn merge(
    h: &LinearHypergraph,
    scene: &MergeScene,
    extra: &[GroupPoint],
) -> Result<MergeOutcome, PosetError> {
    let (p0, p1) = scene.conditions();
    // the union must be a function
    let mut coloring = p0.coloring().clone();
    for (p, c) in p1.coloring() {
        match coloring.get(p) {
            Some(existing) if existing != c => {
                return Err(PosetError::NotAFunction { point: p.to_string() })
            }
            _ => {
                coloring.insert(p.clone(), c.clone());
            }
        }
    }
    let extra = canonical_points(extra);
    let tag_base = fresh_tag_base(&[p0.coloring(), p1.coloring()]);
    let mut new_tiers = Vec::new();
    for (k, x) in extra.iter().enumerate() {
        let n = compute_nx(h, scene, x)?;
        coloring.insert(x.clone(), Color::at_tier(n, vec![tag_base + k as u32]));
        new_tiers.push((x.clone(), n));
    }
    let mut gens: Vec<GroupPoint> = p0.domain().basis().vectors().to_vec();
    gens.extend(p1.domain().basis().vectors().iter().cloned());
    gens.extend(extra.iter().cloned());
    let domain = gamma_closure(h, &gens);
    if let Some(edge) = verify_coloring(h, &coloring) {
        return Err(PosetError::MergeImproper { edge: edge.to_string() });
    }
    let condition = Condition { domain, coloring };
    debug_assert!(leq(&condition, p0).holds);
    debug_assert!(leq(&condition, p1).holds);
    Ok(MergeOutcome { condition, new_tiers })
}

/// Hyperedge census for a merge: `cases[0]` counts hyperedges inside the
/// old samples, `cases[1]` those with exactly one new point, `cases[2]`
/// those with two or more. Each is re-verified by its own mechanism:
/// old hyperedges lie inside a single condition's domain, one-new
/// hyperedges respect the tier rule, many-new hyperedges get distinct
/// fresh colors.
pub fn classify_merge_cases(
    h: &LinearHypergraph,
    scene: &MergeScene,
    outcome: &MergeOutcome,
) -> Result<[usize; 3], String> {
    let (p0, p1) = scene.conditions();
    let new_points: Vec<GroupPoint> = outcome.new_tiers.iter().map(|(p, _)| p.clone()).collect();
    let sample = outcome.condition.sample();
    let mut cases = [0usize; 3];
    for edge in crate::hypergraph::find_hyperedges(h, &sample) {
        let news = edge
            .points()
            .iter()
            .filter(|p| new_points.contains(p))
            .count();
        match news {
            0 => {
                let inside_one = [p0, p1].iter().any(|cond| {
                    edge.points().iter().all(|p| cond.domain().contains(p))
                });
                if !inside_one {
                    return Err(format!(
                        "old hyperedge {edge} lies in neither condition domain"
                    ));
                }
                cases[0] += 1;
            }
            1 => {
                let x = edge
                    .points()
                    .iter()
                    .find(|p| new_points.contains(p))
                    .expect("exactly one new point");
                let n = outcome
                    .new_tiers
                    .iter()
                    .find(|(p, _)| p == x)
                    .map(|(_, n)| *n)
                    .expect("new point has a tier");
                let olds: Vec<&GroupPoint> =
                    edge.points().iter().filter(|p| *p != x).collect();
                let both_at_n = olds.iter().all(|p| {
                    outcome.condition.coloring()[*p].tier == n
                });
                let one_from_each = olds.iter().any(|p| p0.coloring().contains_key(*p))
                    && olds.iter().any(|p| p1.coloring().contains_key(*p));
                if both_at_n && one_from_each {
                    // the two old endpoints would block tier n, so one of
                    // them must not be an off-core cross pair
                    let cross = olds.iter().all(|p| !scene.core().contains(p));
                    if cross {
                        return Err(format!(
                            "hyperedge {edge} contradicts the tier rule at {n}"
                        ));
                    }
                }
                cases[1] += 1;
            }
            _ => {
                let new_colors: Vec<&Color> = edge
                    .points()
                    .iter()
                    .filter(|p| new_points.contains(p))
                    .map(|p| &outcome.condition.coloring()[p])
                    .collect();
                for i in 0..new_colors.len() {
                    for j in (i + 1)..new_colors.len() {
                        if new_colors[i] == new_colors[j] {
                            return Err(format!(
                                "hyperedge {edge} repeats a fresh color"
                            ));
                        }
                    }
                }
                cases[2] += 1;
            }
        }
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;
    use crate::linear::Basis;

    fn q() -> NumberField {
        NumberField::rational()
    }

    fn qp(coords: &[i64]) -> GroupPoint {
        GroupPoint::new(coords.iter().map(|&c| q().integer(c)).collect())
    }

    fn color_points(points: &[GroupPoint], base: u32) -> TotalSampleColoring {
        points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), Color::simple(base + i as u32)))
            .collect()
    }

    #[test]
    fn leq_is_reflexive_with_empty_coset_table() {
        let h = LinearHypergraph::preset_ap(2);
        let a = gamma_closure(&h, &[qp(&[1, 0])]);
        let p = Condition::new(&h, a, color_points(&[qp(&[0, 0]), qp(&[1, 0])], 0)).unwrap();
        let report = leq(&p, &p);
        assert!(report.holds);
        assert!(report.coset_bounds.is_empty());
    }

    #[test]
    fn extension_by_one_tier_zero_point_has_coset_bound_one() {
        let h = LinearHypergraph::preset_ap(2);
        let p = Condition::new(
            &h,
            gamma_closure(&h, &[qp(&[1, 0])]),
            color_points(&[qp(&[0, 0])], 0),
        )
        .unwrap();
        let extended = extend(&h, &p, &qp(&[0, 1]));
        let report = leq(&extended, &p);
        assert!(report.holds);
        assert_eq!(report.coset_bounds.len(), 1);
        assert_eq!(report.coset_bounds[0].bound, 1);
    }

    #[test]
    fn disagreement_breaks_the_order() {
        let h = LinearHypergraph::preset_ap(2);
        let a = gamma_closure(&h, &[qp(&[1, 0])]);
        let p = Condition::new(&h, a.clone(), color_points(&[qp(&[0, 0])], 0)).unwrap();
        let mut other = TotalSampleColoring::new();
        other.insert(qp(&[0, 0]), Color::simple(99));
        let q_ = Condition::new(&h, a, other).unwrap();
        assert!(!leq(&q_, &p).holds);
    }

    #[test]
    fn extend_from_empty_and_idempotence_on_sampled_points() {
        let h = LinearHypergraph::preset_ap(2);
        let p = Condition::empty(&h);
        let q_ = extend(&h, &p, &qp(&[0, 1]));
        assert_eq!(q_.coloring().len(), 1);
        assert_eq!(q_.coloring()[&qp(&[0, 1])].tier, 0);
        let again = extend(&h, &q_, &qp(&[0, 1]));
        assert_eq!(again.coloring(), q_.coloring());
    }

    #[test]
    fn extension_over_a_line_keeps_old_colors_and_properness() {
        let h = LinearHypergraph::preset_ap(2);
        let a = gamma_closure(&h, &[qp(&[1, 0])]);
        let old = color_points(&[qp(&[0, 0]), qp(&[1, 0]), qp(&[2, 0])], 0);
        let p = Condition::new(&h, a, old.clone()).unwrap();
        let q_ = extend(&h, &p, &qp(&[0, 1]));
        for (pt, c) in &old {
            assert_eq!(q_.color_of(pt), Some(c));
        }
        assert!(verify_coloring(&h, q_.coloring()).is_none());
        assert!(q_.domain().contains(&qp(&[0, 1])));
    }

    fn ap_scene(h: &LinearHypergraph) -> MergeScene {
        // core: the x-axis line; domains: two distinct planes... in Q^2 the
        // only proper extension is the full plane, so use Q^2 with
        // one-dimensional core {0} instead: A0 = x-axis, A1 = y-axis.
        let core = gamma_closure(h, &[]);
        let a0 = gamma_closure(h, &[qp(&[1, 0])]);
        let a1 = gamma_closure(h, &[qp(&[0, 1])]);
        let p0 = Condition::new(h, a0, color_points(&[qp(&[1, 0]), qp(&[2, 0])], 0)).unwrap();
        let p1 = Condition::new(h, a1, color_points(&[qp(&[0, 1]), qp(&[0, 2])], 10)).unwrap();
        MergeScene::new(core, p0, p1, TotalSampleColoring::new()).unwrap()
    }

    #[test]
    fn nx_vacuous_without_cross_pairs() {
        let h = LinearHypergraph::preset_ap(2);
        let scene = ap_scene(&h);
        // {(1,0),(0,1),x} is a hyperedge only for specific x; pick one far away
        assert_eq!(compute_nx(&h, &scene, &qp(&[5, 7])).unwrap(), 0);
    }

    #[test]
    fn nx_skips_blocked_tiers() {
        let h = LinearHypergraph::preset_ap(2);
        let core = gamma_closure(&h, &[]);
        let a0 = gamma_closure(&h, &[qp(&[1, 0])]);
        let a1 = gamma_closure(&h, &[qp(&[0, 1])]);
        // x0 = (1,0) at tier 0 and x1 = (0,1) at tier 0; the middle point
        // (1/2, 1/2) completes {x0, x1, .} so tier 0 is blocked.
        let mut c0 = TotalSampleColoring::new();
        c0.insert(qp(&[1, 0]), Color::at_tier(0, vec![0]));
        let mut c1 = TotalSampleColoring::new();
        c1.insert(qp(&[0, 1]), Color::at_tier(0, vec![1]));
        let p0 = Condition::new(&h, a0, c0).unwrap();
        let p1 = Condition::new(&h, a1, c1).unwrap();
        let scene = MergeScene::new(core, p0, p1, TotalSampleColoring::new()).unwrap();
        let mid = GroupPoint::new(vec![
            crate::field::Scalar::from_rational(
                num_rational::BigRational::new(1.into(), 2.into()),
                q(),
            ),
            crate::field::Scalar::from_rational(
                num_rational::BigRational::new(1.into(), 2.into()),
                q(),
            ),
        ]);
        assert_eq!(compute_nx(&h, &scene, &mid).unwrap(), 1);
        // x = -(1,0)-... the third role: (1,0) - 2z + (0,1) = 0 gives the
        // same blocked point; an unrelated point stays at tier 0
        assert_eq!(compute_nx(&h, &scene, &qp(&[7, 3])).unwrap(), 0);
    }

    #[test]
    fn nx_climbs_past_two_blocked_tiers() {
        let h = LinearHypergraph::preset_ap(2);
        let core = gamma_closure(&h, &[]);
        let a0 = gamma_closure(&h, &[qp(&[1, 0])]);
        let a1 = gamma_closure(&h, &[qp(&[0, 1])]);
        // (1,1) is the midpoint of (2,0)/(0,2) and the endpoint of the
        // progression through (-1,0)/(0,1/2), so pairs at tiers 0 and 1
        // both block it
        let half = crate::field::Scalar::from_rational(
            num_rational::BigRational::new(1.into(), 2.into()),
            q(),
        );
        let half_up = GroupPoint::new(vec![q().zero(), half]);
        let mut c0 = TotalSampleColoring::new();
        c0.insert(qp(&[2, 0]), Color::at_tier(0, vec![0]));
        c0.insert(qp(&[-1, 0]), Color::at_tier(1, vec![1]));
        let mut c1 = TotalSampleColoring::new();
        c1.insert(qp(&[0, 2]), Color::at_tier(0, vec![2]));
        c1.insert(half_up.clone(), Color::at_tier(1, vec![3]));
        let p0 = Condition::new(&h, a0, c0).unwrap();
        let p1 = Condition::new(&h, a1, c1).unwrap();
        let scene = MergeScene::new(core, p0, p1, TotalSampleColoring::new()).unwrap();
        assert!(h.is_hyperedge(&[qp(&[2, 0]), qp(&[0, 2]), qp(&[1, 1])]));
        assert!(h.is_hyperedge(&[qp(&[-1, 0]), half_up, qp(&[1, 1])]));
        assert_eq!(compute_nx(&h, &scene, &qp(&[1, 1])).unwrap(), 2);
    }

    #[test]
    fn nx_rejects_points_inside_a_domain() {
        let h = LinearHypergraph::preset_ap(2);
        let scene = ap_scene(&h);
        assert!(matches!(
            compute_nx(&h, &scene, &qp(&[3, 0])),
            Err(PosetError::PointInsideDomain { .. })
        ));
    }

    #[test]
    fn merge_without_cross_edges_unions_and_extends() {
        let h = LinearHypergraph::preset_ap(2);
        let scene = ap_scene(&h);
        let extra = [qp(&[5, 7])];
        let out = merge(&h, &scene, &extra).unwrap();
        let (p0, p1) = scene.conditions();
        assert!(leq(&out.condition, p0).holds);
        assert!(leq(&out.condition, p1).holds);
        assert_eq!(out.new_tiers, vec![(qp(&[5, 7]), 0)]);
        assert!(verify_coloring(&h, out.condition.coloring()).is_none());
        let cases = classify_merge_cases(&h, &scene, &out).unwrap();
        assert_eq!(cases[0], 0);
    }

    #[test]
    fn merge_with_empty_extra_and_empty_side_returns_p0() {
        let h = LinearHypergraph::preset_ap(2);
        let core = gamma_closure(&h, &[]);
        let a0 = gamma_closure(&h, &[qp(&[1, 0])]);
        let p0 =
            Condition::new(&h, a0, color_points(&[qp(&[1, 0]), qp(&[3, 0])], 0)).unwrap();
        let p1 = Condition::empty(&h);
        let scene = MergeScene::new(core, p0.clone(), p1, TotalSampleColoring::new()).unwrap();
        let out = merge(&h, &scene, &[]).unwrap();
        assert_eq!(out.condition.coloring(), p0.coloring());
        assert!(out.new_tiers.is_empty());
    }

    #[test]
    fn merged_tier_respects_blocking_pair() {
        let h = LinearHypergraph::preset_ap(2);
        let core = gamma_closure(&h, &[]);
        let a0 = gamma_closure(&h, &[qp(&[1, 0])]);
        let a1 = gamma_closure(&h, &[qp(&[0, 1])]);
        let mut c0 = TotalSampleColoring::new();
        c0.insert(qp(&[2, 0]), Color::at_tier(0, vec![0]));
        let mut c1 = TotalSampleColoring::new();
        c1.insert(qp(&[0, 2]), Color::at_tier(0, vec![1]));
        let p0 = Condition::new(&h, a0, c0).unwrap();
        let p1 = Condition::new(&h, a1, c1).unwrap();
        let scene = MergeScene::new(core, p0, p1, TotalSampleColoring::new()).unwrap();
        // (1,1) is the midpoint of (2,0) and (0,2)
        let out = merge(&h, &scene, &[qp(&[1, 1])]).unwrap();
        assert_eq!(out.new_tiers, vec![(qp(&[1, 1]), 1)]);
        let n = compute_nx(&h, &scene, &qp(&[1, 1])).unwrap();
        assert_eq!(out.condition.coloring()[&qp(&[1, 1])].tier, n);
        let cases = classify_merge_cases(&h, &scene, &out).unwrap();
        assert!(cases[1] > 0);
    }

    #[test]
    fn scene_rejects_wrong_core() {
        let h = LinearHypergraph::preset_ap(2);
        let a0 = gamma_closure(&h, &[qp(&[1, 0])]);
        let a1 = gamma_closure(&h, &[qp(&[0, 1])]);
        let p0 = Condition::new(&h, a0.clone(), TotalSampleColoring::new()).unwrap();
        let p1 = Condition::new(&h, a1, TotalSampleColoring::new()).unwrap();
        // the true intersection is the zero subspace, not the x-axis
        let err = MergeScene::new(a0, p0, p1, TotalSampleColoring::new());
        assert!(matches!(err, Err(PosetError::CoreMismatch)));
    }

    #[test]
    fn scene_rejects_background_disagreement() {
        let h = LinearHypergraph::preset_ap(2);
        let full = ClosedSubspace::from_closed_basis(&h, Basis::full(&q(), 2));
        let line = gamma_closure(&h, &[qp(&[1, 0])]);
        let core_pt = qp(&[1, 0]);
        let mut c0 = TotalSampleColoring::new();
        c0.insert(core_pt.clone(), Color::simple(0));
        let mut c1 = TotalSampleColoring::new();
        c1.insert(core_pt.clone(), Color::simple(0));
        let p0 = Condition::new(&h, full, c0).unwrap();
        let p1 = Condition::new(&h, line.clone(), c1).unwrap();
        let mut bg = TotalSampleColoring::new();
        bg.insert(core_pt, Color::simple(5));
        let err = MergeScene::new(line, p0, p1, bg);
        assert!(matches!(err, Err(PosetError::BackgroundDisagreement { .. })));
    }

    #[test]
    fn chain_union_of_extensions_is_transitive_lower_bound() {
        let h = LinearHypergraph::preset_ap(2);
        let p = Condition::empty(&h);
        let q1 = extend(&h, &p, &qp(&[0, 1]));
        let q2 = extend(&h, &q1, &qp(&[1, 1]));
        let q3 = extend(&h, &q2, &qp(&[2, 1]));
        assert!(leq(&q3, &p).holds);
        assert!(leq(&q3, &q1).holds);
        let union = chain_union(&h, &[p, q1, q2, q3.clone()]).unwrap();
        assert_eq!(union.coloring(), q3.coloring());
    }
}
