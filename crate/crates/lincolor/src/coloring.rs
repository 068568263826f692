//! Tiered colors, coherent sequences of colorings over a filtration of
//! closed subspaces, their amalgamation, and greedy quotient colorings.
//!
//! Colors carry a tier and a tag. Tier zero holds the plain stage colors;
//! the injective pairing of two colors sits at tier zero when they are
//! equal and tier one otherwise, mirroring the cardinality of the
//! unordered pair. Every tier has unboundedly many tags.
//!
//! A coherent sequence stacks an inclusion-increasing chain of closed
//! subspaces, a proper coloring of the sampled points of each stage, and a
//! proper coloring of each stage's sampled remainder graph over the union
//! of the earlier stages. The amalgamation tags each sampled point at its
//! least stage: the stage color alone at the first stage, the pairing of
//! stage and remainder color later. The amalgamation of a coherent
//! sequence is again a proper coloring, and hyperedges with exactly one
//! point at their top stage cannot occur when the filtration is closed;
//! both facts are checked, never assumed.

use std::collections::BTreeMap;

use crate::error::ColoringError;
use crate::hypergraph::{
    find_hyperedges, ClosedSubspace, Hyperedge, LinearHypergraph,
};
use crate::linear::GroupPoint;
use crate::remainder::{remainder_graph, QuotientGraph};

/// A structural color: a tier and a finite tag sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Color {
    pub tier: u32,
    pub tag: Vec<u32>,
}

impl Color {
    pub fn at_tier(tier: u32, tag: Vec<u32>) -> Self {
        Color { tier, tag }
    }

    /// A plain tier-zero color with a single tag entry.
    pub fn simple(tag: u32) -> Self {
        Color { tier: 0, tag: vec![tag] }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {:?})", self.tier, self.tag)
    }
}

/// Injective pairing of two colors. The tier is zero when the colors are
/// equal and one otherwise — the cardinality of the unordered pair, off by
/// one. Length-prefixed concatenation keeps the encoding injective.
pub fn pair_color(c: &Color, d: &Color) -> Color {
    let tier = if c == d { 0 } else { 1 };
    let mut tag = Vec::with_capacity(c.tag.len() + d.tag.len() + 4);
    for part in [c, d] {
        tag.push(part.tier);
        tag.push(part.tag.len() as u32);
        tag.extend_from_slice(&part.tag);
    }
    Color { tier, tag }
}

/// A finite map from sampled points to colors.
pub type TotalSampleColoring = BTreeMap<GroupPoint, Color>;

/// One stage of a coherent sequence: the stage subspace, the stage
/// coloring of all sampled points inside it, and (past the first stage)
/// the remainder coloring of the points sampled new at this stage.
#[derive(Clone, Debug)]
pub struct CoherentStage {
    pub subspace: ClosedSubspace,
    pub stage_coloring: TotalSampleColoring,
    /// `None` only at the least stage — the designated null marker.
    pub remainder_coloring: Option<TotalSampleColoring>,
}

/// A finite coherent sequence of colorings over an increasing filtration.
#[derive(Clone, Debug)]
pub struct CoherentSequence {
    pub stages: Vec<CoherentStage>,
}

impl CoherentSequence {
    /// All sampled points, in canonical order.
    pub fn sample(&self) -> Vec<GroupPoint> {
        let mut pts: Vec<GroupPoint> = self
            .stages
            .iter()
            .flat_map(|s| s.stage_coloring.keys().cloned())
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Least stage index whose subspace contains `x`.
    pub fn least_stage(&self, x: &GroupPoint) -> Option<usize> {
        self.stages.iter().position(|s| s.subspace.contains(x))
    }

    /// Checks the coherence conditions on the sampled windows.
    pub fn validate(&self, h: &LinearHypergraph) -> Result<(), ColoringError> {
        if self.stages.is_empty() {
            return Err(ColoringError::EmptySequence);
        }
        for i in 1..self.stages.len() {
            if !self.stages[i]
                .subspace
                .basis()
                .contains_basis(self.stages[i - 1].subspace.basis())
            {
                return Err(ColoringError::ChainNotIncreasing { prev: i - 1, stage: i });
            }
        }
        for (i, stage) in self.stages.iter().enumerate() {
            if (i == 0) != stage.remainder_coloring.is_none() {
                return Err(ColoringError::RemainderMarkerMisplaced { stage: i });
            }
            for p in stage.stage_coloring.keys() {
                if !stage.subspace.contains(p) {
                    return Err(ColoringError::PointOutsideStage {
                        stage: i,
                        point: p.to_string(),
                    });
                }
            }
            // the stage coloring must reach every sampled point of the stage
            for p in self.sample() {
                if stage.subspace.contains(&p) && !stage.stage_coloring.contains_key(&p) {
                    return Err(ColoringError::StageColoringIncomplete {
                        stage: i,
                        point: p.to_string(),
                    });
                }
            }
            let dom: Vec<GroupPoint> = stage.stage_coloring.keys().cloned().collect();
            if first_monochromatic(h, &dom, &stage.stage_coloring).is_some() {
                return Err(ColoringError::StageColoringImproper { stage: i });
            }
            if let Some(d) = &stage.remainder_coloring {
                let prev = &self.stages[i - 1].subspace;
                for p in d.keys() {
                    let is_new = stage.subspace.contains(p) && !prev.contains(p);
                    if !is_new {
                        return Err(ColoringError::RemainderDomainMismatch {
                            stage: i,
                            point: p.to_string(),
                        });
                    }
                }
                for p in self.sample() {
                    if stage.subspace.contains(&p)
                        && !prev.contains(&p)
                        && !d.contains_key(&p)
                    {
                        return Err(ColoringError::RemainderDomainMismatch {
                            stage: i,
                            point: p.to_string(),
                        });
                    }
                }
                let dom: Vec<GroupPoint> = d.keys().cloned().collect();
                let rg = remainder_graph(h, prev, &dom)
                    .expect("remainder domain lies outside the previous stage");
                for e in rg.edges() {
                    let cx = &d[&rg.vertices()[e.x]];
                    let cy = &d[&rg.vertices()[e.y]];
                    if cx == cy {
                        return Err(ColoringError::RemainderColoringImproper { stage: i });
                    }
                }
            }
        }
        Ok(())
    }
}

/// First monochromatic hyperedge of `e` within `dom`, if any.
fn first_monochromatic(
    h: &LinearHypergraph,
    dom: &[GroupPoint],
    colors: &TotalSampleColoring,
) -> Option<Hyperedge> {
    find_hyperedges(h, dom).into_iter().find(|edge| {
        let [a, b, c] = edge.points();
        match (colors.get(a), colors.get(b), colors.get(c)) {
            (Some(x), Some(y), Some(z)) => x == y && y == z,
            _ => false,
        }
    })
}

/// Enumerates hyperedges within the coloring's domain and returns the first
/// monochromatic one, or `None` for a proper coloring.
pub fn verify_coloring(
    h: &LinearHypergraph,
    coloring: &TotalSampleColoring,
) -> Option<Hyperedge> {
    let dom: Vec<GroupPoint> = coloring.keys().cloned().collect();
    first_monochromatic(h, &dom, coloring)
}

/// The amalgamation: each sampled point takes its least-stage color at the
/// first stage, and the pairing of stage and remainder colors later.
pub fn amalgamate(seq: &CoherentSequence) -> Result<TotalSampleColoring, ColoringError> {
    let mut out = TotalSampleColoring::new();
    for x in seq.sample() {
        let Some(i) = seq.least_stage(&x) else {
            return Err(ColoringError::PointOutsideFiltration { point: x.to_string() });
        };
        let stage = &seq.stages[i];
        let c = stage
            .stage_coloring
            .get(&x)
            .ok_or_else(|| ColoringError::StageColoringIncomplete {
                stage: i,
                point: x.to_string(),
            })?;
        let color = match &stage.remainder_coloring {
            None => c.clone(),
            Some(d) => {
                let dx = d.get(&x).ok_or_else(|| ColoringError::RemainderDomainMismatch {
                    stage: i,
                    point: x.to_string(),
                })?;
                pair_color(c, dx)
            }
        };
        out.insert(x, color);
    }
    Ok(out)
}

/// Hyperedge census by the count of points at the top least-stage:
/// `cases[k]` counts hyperedges with exactly `k + 1` points there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamationReport {
    pub coloring: TotalSampleColoring,
    pub violation: Option<Hyperedge>,
    pub cases: [usize; 3],
}

/// Amalgamates, verifies properness, and classifies every sampled
/// hyperedge. A single point at the top stage (`cases[0]`) is impossible
/// over a closed filtration, so any count there is a bug certificate.
pub fn amalgamate_checked(
    h: &LinearHypergraph,
    seq: &CoherentSequence,
) -> Result<AmalgamationReport, ColoringError> {
    seq.validate(h)?;
    let coloring = amalgamate(seq)?;
    let violation = verify_coloring(h, &coloring);
    let mut cases = [0usize; 3];
    let dom: Vec<GroupPoint> = coloring.keys().cloned().collect();
    for edge in find_hyperedges(h, &dom) {
        let stages: Vec<usize> = edge
            .points()
            .iter()
            .map(|p| seq.least_stage(p).expect("sampled points lie in the filtration"))
            .collect();
        let top = *stages.iter().max().expect("three points");
        let at_top = stages.iter().filter(|&&s| s == top).count();
        cases[at_top - 1] += 1;
    }
    Ok(AmalgamationReport { coloring, violation, cases })
}

/// A greedy first-fit coloring of a quotient graph, pulled back to points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientColoring {
    pub class_colors: Vec<u32>,
    pub point_colors: BTreeMap<GroupPoint, u32>,
}

impl QuotientColoring {
    /// The pullback as structural colors at tier zero.
    pub fn as_sample_coloring(&self) -> TotalSampleColoring {
        self.point_colors
            .iter()
            .map(|(p, &c)| (p.clone(), Color::simple(c)))
            .collect()
    }
}

/// First-fit greedy coloring in class order; uses at most max degree + 1
/// colors and never repeats a color across an edge.
pub fn greedy_quotient_coloring(q: &QuotientGraph) -> QuotientColoring {
    let n = q.classes().len();
    let mut class_colors = vec![0u32; n];
    for c in 0..n {
        let taken: Vec<u32> = q
            .neighbors(c)
            .into_iter()
            .filter(|&d| d < c)
            .map(|d| class_colors[d])
            .collect();
        let mut color = 0u32;
        while taken.contains(&color) {
            color += 1;
        }
        class_colors[c] = color;
    }
    let mut point_colors = BTreeMap::new();
    for (ci, class) in q.classes().iter().enumerate() {
        for p in class {
            point_colors.insert(p.clone(), class_colors[ci]);
        }
    }
    QuotientColoring { class_colors, point_colors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;
    use crate::hypergraph::gamma_closure;
    use crate::linear::Basis;
    use crate::remainder::quotient;

    fn q() -> NumberField {
        NumberField::rational()
    }

    fn qp(coords: &[i64]) -> GroupPoint {
        GroupPoint::new(coords.iter().map(|&c| q().integer(c)).collect())
    }

    #[test]
    fn pair_color_tier_tracks_pair_cardinality() {
        let x = Color::simple(7);
        let y = Color::simple(9);
        assert_eq!(pair_color(&x, &x).tier, 0);
        assert_eq!(pair_color(&x, &y).tier, 1);
    }

    #[test]
    fn pair_color_injective_against_hash_oracle() {
        use std::collections::BTreeMap;
        let mut seen: BTreeMap<Color, (Color, Color)> = BTreeMap::new();
        // a mixed population of simple and nested colors
        let mut pool = Vec::new();
        for t in 0..4u32 {
            for a in 0..6u32 {
                pool.push(Color::at_tier(t, vec![a]));
                pool.push(Color::at_tier(t, vec![a, a + 1]));
            }
        }
        for c in &pool {
            for d in &pool {
                let p = pair_color(c, d);
                if let Some((c0, d0)) = seen.insert(p, (c.clone(), d.clone())) {
                    assert_eq!((&c0, &d0), (c, d), "pairing collided");
                }
            }
        }
    }

    fn two_stage_ap() -> (LinearHypergraph, CoherentSequence) {
        let h = LinearHypergraph::preset_ap(2);
        let a0 = gamma_closure(&h, &[qp(&[1, 0])]);
        let a1 = ClosedSubspace::from_closed_basis(&h, Basis::full(&q(), 2));
        // stage-0 sample inside the line, stage-1 sample off it
        let s0 = [qp(&[0, 0]), qp(&[1, 0]), qp(&[2, 0]), qp(&[5, 0])];
        let s1 = [qp(&[0, 1]), qp(&[2, -1]), qp(&[1, 1]), qp(&[4, 1])];

        let mut c0 = TotalSampleColoring::new();
        for (i, p) in s0.iter().enumerate() {
            c0.insert(p.clone(), Color::simple(i as u32));
        }
        let mut c1 = c0.clone();
        for (i, p) in s1.iter().enumerate() {
            c1.insert(p.clone(), Color::simple(100 + i as u32));
        }
        let (theta, _) = quotient(&h, &a0, &s1).unwrap();
        let d1 = greedy_quotient_coloring(&theta).as_sample_coloring();

        let seq = CoherentSequence {
            stages: vec![
                CoherentStage {
                    subspace: a0,
                    stage_coloring: c0,
                    remainder_coloring: None,
                },
                CoherentStage {
                    subspace: a1,
                    stage_coloring: c1,
                    remainder_coloring: Some(d1),
                },
            ],
        };
        (h, seq)
    }

    #[test]
    fn single_stage_amalgamation_is_the_stage_coloring() {
        let h = LinearHypergraph::preset_ap(2);
        let a0 = gamma_closure(&h, &[qp(&[1, 0])]);
        let mut c0 = TotalSampleColoring::new();
        for (i, p) in [qp(&[0, 0]), qp(&[3, 0])].iter().enumerate() {
            c0.insert(p.clone(), Color::simple(i as u32));
        }
        let seq = CoherentSequence {
            stages: vec![CoherentStage {
                subspace: a0,
                stage_coloring: c0.clone(),
                remainder_coloring: None,
            }],
        };
        assert_eq!(amalgamate(&seq).unwrap(), c0);
    }

    #[test]
    fn two_stage_amalgamation_pairs_new_points() {
        let (h, seq) = two_stage_ap();
        seq.validate(&h).unwrap();
        let e = amalgamate(&seq).unwrap();
        let p = qp(&[0, 1]);
        let c1 = &seq.stages[1].stage_coloring[&p];
        let d1 = &seq.stages[1].remainder_coloring.as_ref().unwrap()[&p];
        assert_eq!(e[&p], pair_color(c1, d1));
        // points at the least stage keep their stage color untouched
        assert_eq!(e[&qp(&[1, 0])], seq.stages[0].stage_coloring[&qp(&[1, 0])]);
    }

    #[test]
    fn amalgamation_is_proper_with_no_single_top_point() {
        let (h, seq) = two_stage_ap();
        let report = amalgamate_checked(&h, &seq).unwrap();
        assert!(report.violation.is_none());
        assert_eq!(report.cases[0], 0);
        // the stage-0 sample contains the progression {0,1,2}*e0
        assert!(report.cases[2] > 0);
    }

    #[test]
    fn constant_coloring_reports_its_hyperedge() {
        let h = LinearHypergraph::preset_ap(1);
        let mut e = TotalSampleColoring::new();
        for p in [qp(&[0]), qp(&[1]), qp(&[2])] {
            e.insert(p, Color::simple(0));
        }
        let bad = verify_coloring(&h, &e).expect("constant progression is monochromatic");
        assert_eq!(bad.points(), &[qp(&[0]), qp(&[1]), qp(&[2])]);
    }

    #[test]
    fn empty_coloring_is_proper() {
        let h = LinearHypergraph::preset_ap(1);
        assert!(verify_coloring(&h, &TotalSampleColoring::new()).is_none());
    }

    #[test]
    fn point_outside_filtration_rejected() {
        let h = LinearHypergraph::preset_ap(2);
        let a0 = gamma_closure(&h, &[qp(&[1, 0])]);
        let mut c0 = TotalSampleColoring::new();
        c0.insert(qp(&[0, 1]), Color::simple(0));
        let seq = CoherentSequence {
            stages: vec![CoherentStage {
                subspace: a0,
                stage_coloring: c0,
                remainder_coloring: None,
            }],
        };
        assert!(matches!(
            amalgamate(&seq),
            Err(ColoringError::PointOutsideFiltration { .. })
        ));
    }

    #[test]
    fn greedy_coloring_traces() {
        let h = LinearHypergraph::preset_ap(2);
        let a = gamma_closure(&h, &[qp(&[1, 0])]);

        // edgeless quotient: two parallel points
        let (edgeless, _) = quotient(&h, &a, &[qp(&[0, 1]), qp(&[2, 1])]).unwrap();
        let col = greedy_quotient_coloring(&edgeless);
        assert!(col.class_colors.iter().all(|&c| c == 0));

        // single edge
        let (one_edge, _) = quotient(&h, &a, &[qp(&[0, 1]), qp(&[2, -1])]).unwrap();
        let col = greedy_quotient_coloring(&one_edge);
        assert_eq!(col.class_colors, vec![0, 1]);
    }

    #[test]
    fn greedy_path_of_three_classes() {
        // A hand-built path 0 - 1 - 2 colors 0, 1, 0 under first fit.
        let h = LinearHypergraph::preset_ap(2);
        let a = gamma_closure(&h, &[qp(&[1, 0])]);
        let classes = vec![vec![qp(&[0, 1])], vec![qp(&[0, 2])], vec![qp(&[0, 4])]];
        let edges = vec![
            crate::remainder::QuotientEdge { a: 0, b: 1, witnesses: vec![] },
            crate::remainder::QuotientEdge { a: 1, b: 2, witnesses: vec![] },
        ];
        let path = QuotientGraph::from_parts(a, classes, edges);
        let col = greedy_quotient_coloring(&path);
        assert_eq!(col.class_colors, vec![0, 1, 0]);
    }

    #[test]
    fn greedy_pullback_never_collides_across_remainder_edges() {
        let h = LinearHypergraph::preset_ap(2);
        let a = gamma_closure(&h, &[qp(&[1, 0])]);
        let sample = vec![
            qp(&[0, 1]),
            qp(&[2, -1]),
            qp(&[4, -3]),
            qp(&[1, 1]),
            qp(&[3, -1]),
            qp(&[5, 1]),
        ];
        let (theta, _) = quotient(&h, &a, &sample).unwrap();
        let col = greedy_quotient_coloring(&theta);
        let rg = remainder_graph(&h, &a, &sample).unwrap();
        for e in rg.edges() {
            let cx = col.point_colors[&rg.vertices()[e.x]];
            let cy = col.point_colors[&rg.vertices()[e.y]];
            assert_ne!(cx, cy);
        }
        // first fit never needs more colors than the maximum degree plus one
        let max_degree = (0..theta.classes().len())
            .map(|c| theta.neighbors(c).len())
            .max()
            .unwrap_or(0);
        let used = col.class_colors.iter().max().map_or(0, |&m| m as usize + 1);
        assert!(used <= max_degree + 1);
    }
}
