//! Slim linear ternary hypergraphs: slimness verification, hyperedge
//! detection on finite point sets, closure of finite seeds under the
//! generating maps, and coset bookkeeping.
//!
//! A component is a triple of matrices `(g0, g1, g2)`; it cuts out the
//! hyperedges `{x0, x1, x2}` of pairwise distinct points with
//! `g0(x0) + g1(x1) + g2(x2) = 0` under some assignment of points to roles.
//! Slimness asks that the three maps and their three pairwise sums are all
//! injective. A hypergraph is a finite union of slim components over one
//! ambient group.
//!
//! Closed subspaces are rational subspaces closed under every generating
//! map, its inverse, and the inverses of the pairwise sums. An injective
//! endomorphism of a finite-dimensional rational space is bijective, so
//! closure under a map and its exact matrix inverse captures closure under
//! the partial inverse. Representing closed sets as rational subspaces
//! rather than subgroups keeps saturation finite: the dimension can only
//! grow, so it terminates, and membership is an exact solve.

use std::fmt;

use crate::error::HypergraphError;
use crate::exec;
use crate::field::NumberField;
use crate::linear::{Basis, ExactMatrix, GroupPoint};

/// All six assignments of three points to three roles, in a fixed order.
pub(crate) const ROLE_ASSIGNMENTS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// One slim linear component: the triple of generating matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlimComponent {
    maps: [ExactMatrix; 3],
    sum_zero: bool,
}

impl SlimComponent {
    /// Builds a component from three matrices over one field and dimension.
    /// Slimness is not required here; [`verify_slim`] reports on it, and
    /// [`LinearHypergraph::new`] enforces it.
    pub fn new(
        g0: ExactMatrix,
        g1: ExactMatrix,
        g2: ExactMatrix,
    ) -> Result<Self, HypergraphError> {
        if g0.dim() != g1.dim() || g0.dim() != g2.dim() {
            return Err(crate::error::AlgebraError::DimensionMismatch {
                expected: g0.dim(),
                got: if g1.dim() != g0.dim() { g1.dim() } else { g2.dim() },
            }
            .into());
        }
        if g0.field() != g1.field() || g0.field() != g2.field() {
            return Err(crate::error::AlgebraError::FieldMismatch.into());
        }
        let sum = g0.add(&g1).add(&g2);
        let zero = ExactMatrix::scalar(&g0.field().zero(), g0.dim());
        let sum_zero = sum == zero;
        Ok(SlimComponent { maps: [g0, g1, g2], sum_zero })
    }

    /// Convenience constructor from three scalars acting as multiples of
    /// the identity.
    pub fn from_scalars(
        s0: &crate::field::Scalar,
        s1: &crate::field::Scalar,
        s2: &crate::field::Scalar,
        dim: usize,
    ) -> Result<Self, HypergraphError> {
        SlimComponent::new(
            ExactMatrix::scalar(s0, dim),
            ExactMatrix::scalar(s1, dim),
            ExactMatrix::scalar(s2, dim),
        )
    }

    pub fn maps(&self) -> &[ExactMatrix; 3] {
        &self.maps
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn field(&self) -> &NumberField {
        self.maps[0].field()
    }

    /// Whether `g0 + g1 + g2 = 0`, i.e. the hyperedge set is invariant
    /// under translations.
    pub fn sum_zero(&self) -> bool {
        self.sum_zero
    }
}

/// Per-condition verdicts for the six injectivity requirements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlimReport {
    /// `g0, g1, g2, g0+g1, g0+g2, g1+g2` in that order.
    pub injective: [bool; 6],
    pub sum_zero: bool,
}

pub const SLIM_CONDITION_NAMES: [&str; 6] = ["g0", "g1", "g2", "g0+g1", "g0+g2", "g1+g2"];

impl SlimReport {
    pub fn accepted(&self) -> bool {
        self.injective.iter().all(|&b| b)
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.injective
            .iter()
            .position(|&b| !b)
            .map(|i| SLIM_CONDITION_NAMES[i])
    }
}

/// Checks the six injectivity conditions and the translation-invariance
/// flag for one component.
pub fn verify_slim(component: &SlimComponent) -> SlimReport {
    let [g0, g1, g2] = component.maps();
    let injective = [
        g0.is_injective(),
        g1.is_injective(),
        g2.is_injective(),
        g0.add(g1).is_injective(),
        g0.add(g2).is_injective(),
        g1.add(g2).is_injective(),
    ];
    SlimReport { injective, sum_zero: component.sum_zero() }
}

/// A finite union of slim components over a common ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearHypergraph {
    components: Vec<SlimComponent>,
}

impl LinearHypergraph {
    pub fn new(components: Vec<SlimComponent>) -> Result<Self, HypergraphError> {
        if components.is_empty() {
            return Err(HypergraphError::NoComponents);
        }
        let dim = components[0].dim();
        let field = components[0].field().clone();
        for (index, c) in components.iter().enumerate() {
            if c.dim() != dim {
                return Err(crate::error::AlgebraError::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                }
                .into());
            }
            if *c.field() != field {
                return Err(crate::error::AlgebraError::FieldMismatch.into());
            }
            let report = verify_slim(c);
            if !report.accepted() {
                return Err(HypergraphError::NotSlim {
                    index,
                    reason: format!(
                        "{} is not injective",
                        report.first_failure().unwrap_or("a required map")
                    ),
                });
            }
        }
        Ok(LinearHypergraph { components })
    }

    /// The arithmetic-progression hypergraph `x0 - 2*x1 + x2 = 0` over the
    /// rationals.
    pub fn preset_ap(dim: usize) -> Self {
        let q = NumberField::rational();
        let c = SlimComponent::from_scalars(&q.integer(1), &q.integer(-2), &q.integer(1), dim)
            .expect("preset scalars are well-formed");
        LinearHypergraph::new(vec![c]).expect("the progression component is slim")
    }

    /// The equilateral-triangle hypergraph over the Eisenstein field:
    /// both orientations `(1-w, w, -1)` and `(w, 1-w, -1)`.
    pub fn preset_equilateral(dim: usize) -> Self {
        let k = NumberField::eisenstein();
        let w = k.generator().expect("degree-two field");
        let one_minus_w = &k.one() - &w;
        let minus_one = k.integer(-1);
        let c0 = SlimComponent::from_scalars(&one_minus_w, &w, &minus_one, dim)
            .expect("preset scalars are well-formed");
        let c1 = SlimComponent::from_scalars(&w, &one_minus_w, &minus_one, dim)
            .expect("preset scalars are well-formed");
        LinearHypergraph::new(vec![c0, c1]).expect("the triangle components are slim")
    }

    pub fn components(&self) -> &[SlimComponent] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn field(&self) -> &NumberField {
        self.components[0].field()
    }

    /// First `(component, assignment)` witnessing that the three pairwise
    /// distinct points form a hyperedge, in the fixed enumeration order.
    pub fn witness(&self, points: &[GroupPoint; 3]) -> Option<(usize, [usize; 3])> {
        if points[0] == points[1] || points[0] == points[2] || points[1] == points[2] {
            return None;
        }
        for (ci, comp) in self.components.iter().enumerate() {
            let [g0, g1, g2] = comp.maps();
            for assignment in ROLE_ASSIGNMENTS {
                let sum = g0
                    .apply(&points[assignment[0]])
                    .add(&g1.apply(&points[assignment[1]]))
                    .add(&g2.apply(&points[assignment[2]]));
                if sum.is_zero() {
                    return Some((ci, assignment));
                }
            }
        }
        None
    }

    pub fn is_hyperedge(&self, points: &[GroupPoint; 3]) -> bool {
        self.witness(points).is_some()
    }
}

/// An unordered hyperedge with one verification witness.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Hyperedge {
    /// The three points in ascending canonical order.
    points: [GroupPoint; 3],
    component: usize,
    /// `assignment[j]` is the index into `points` of the point in role `j`.
    assignment: [usize; 3],
}

impl Hyperedge {
    pub fn points(&self) -> &[GroupPoint; 3] {
        &self.points
    }

    pub fn component(&self) -> usize {
        self.component
    }

    pub fn assignment(&self) -> [usize; 3] {
        self.assignment
    }

    /// Re-derives the witness equation; never trusts stored data.
    pub fn verify(&self, h: &LinearHypergraph) -> bool {
        if self.component >= h.components().len() {
            return false;
        }
        let p = &self.points;
        if p[0] == p[1] || p[0] == p[2] || p[1] == p[2] {
            return false;
        }
        let [g0, g1, g2] = h.components()[self.component].maps();
        g0.apply(&p[self.assignment[0]])
            .add(&g1.apply(&p[self.assignment[1]]))
            .add(&g2.apply(&p[self.assignment[2]]))
            .is_zero()
    }
}

impl fmt::Display for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}, {}, {}}} (component {}, roles {:?})",
            self.points[0], self.points[1], self.points[2], self.component, self.assignment
        )
    }
}

/// Sorts and deduplicates a sample set into the canonical order.
pub fn canonical_points(s: &[GroupPoint]) -> Vec<GroupPoint> {
    let mut v = s.to_vec();
    v.sort();
    v.dedup();
    v
}

/// All hyperedges with vertices inside the finite set `s`, each carrying
/// its first witness, in lexicographic order of the canonical point triple.
pub fn find_hyperedges(h: &LinearHypergraph, s: &[GroupPoint]) -> Vec<Hyperedge> {
    let pts = canonical_points(s);
    let n = pts.len();
    if n < 3 {
        return Vec::new();
    }
    let mut triples = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                triples.push([a, b, c]);
            }
        }
    }
    let hits = exec::map_indices(triples.len(), |t| {
        let [a, b, c] = triples[t];
        let candidate = [pts[a].clone(), pts[b].clone(), pts[c].clone()];
        h.witness(&candidate).map(|(component, assignment)| Hyperedge {
            points: candidate,
            component,
            assignment,
        })
    });
    hits.into_iter().flatten().collect()
}

/// All points `z` completing `{x, y, z}` to a hyperedge. The list length is
/// at most six per component: each role assignment pins `z` by an exact
/// solve against an injective map.
pub fn third_points(
    h: &LinearHypergraph,
    x: &GroupPoint,
    y: &GroupPoint,
) -> Result<Vec<GroupPoint>, HypergraphError> {
    if x == y {
        return Err(HypergraphError::EqualPoints);
    }
    let mut out = Vec::new();
    for comp in h.components() {
        let g = comp.maps();
        for assignment in ROLE_ASSIGNMENTS {
            // assignment[j] names the point in role j: 0 -> x, 1 -> y, 2 -> z.
            let role_of = |point: usize| {
                assignment
                    .iter()
                    .position(|&p| p == point)
                    .expect("assignment is a permutation")
            };
            let (jx, jy, jz) = (role_of(0), role_of(1), role_of(2));
            let rhs = g[jx].apply(x).add(&g[jy].apply(y)).neg();
            let z = g[jz]
                .solve(&rhs)
                .expect("slim components have invertible maps");
            if z != *x && z != *y {
                out.push(z);
            }
        }
    }
    let mut out = canonical_points(&out);
    out.sort();
    assert!(
        out.len() <= 6 * h.components().len(),
        "third-point degree bound exceeded"
    );
    Ok(out)
}

/// A rational subspace closed under every generating map, every inverse,
/// and every inverse of a pairwise sum, together with the seed it was
/// saturated from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSubspace {
    basis: Basis,
    seed: Vec<GroupPoint>,
}

impl ClosedSubspace {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn seed(&self) -> &[GroupPoint] {
        &self.seed
    }

    pub fn contains(&self, x: &GroupPoint) -> bool {
        self.basis.contains(x)
    }

    pub fn field(&self) -> &NumberField {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ambient_dim()
    }

    /// Wraps a basis that is already closed; panics in debug builds if not.
    pub fn from_closed_basis(h: &LinearHypergraph, basis: Basis) -> Self {
        let seed = basis.vectors().to_vec();
        let c = ClosedSubspace { basis, seed };
        debug_assert!(c.is_closed_under(h));
        c
    }

    /// Checks closure directly: every basis vector's image under every
    /// saturation map lies back in the span.
    pub fn is_closed_under(&self, h: &LinearHypergraph) -> bool {
        saturation_maps(h).iter().all(|m| {
            self.basis
                .vectors()
                .iter()
                .all(|v| self.basis.contains(&m.apply(v)))
        })
    }
}

fn saturation_maps(h: &LinearHypergraph) -> Vec<ExactMatrix> {
    let mut maps = Vec::new();
    for comp in h.components() {
        let g = comp.maps();
        for m in g {
            maps.push(m.clone());
            maps.push(m.inverse().expect("slim maps are invertible"));
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            maps.push(
                g[a].add(&g[b])
                    .inverse()
                    .expect("slim pairwise sums are invertible"),
            );
        }
    }
    maps
}

/// The smallest closed subspace containing the seed. Each round applies all
/// saturation maps to the current basis; the rational dimension grows or
/// the loop stops, so at most `dim * deg(F)` rounds run.
pub fn gamma_closure(h: &LinearHypergraph, seed: &[GroupPoint]) -> ClosedSubspace {
    let field = h.field();
    let dim = h.dim();
    let maps = saturation_maps(h);
    let mut basis = Basis::new(field, dim, seed);
    loop {
        let images: Vec<GroupPoint> = maps
            .iter()
            .flat_map(|m| basis.vectors().iter().map(|v| m.apply(v)))
            .collect();
        let extended = basis.extended(&images);
        if extended.rank() == basis.rank() {
            break;
        }
        basis = extended;
    }
    let closure = ClosedSubspace { basis, seed: canonical_points(seed) };
    debug_assert!(closure.is_closed_under(h));
    closure
}

/// Partition of `s` by the relation `x ~ y` iff `x - y` lies in the span of
/// `a`. Classes are listed by ascending canonical representative, each class
/// sorted, with the representative first.
pub fn coset_partition(a: &ClosedSubspace, s: &[GroupPoint]) -> Vec<Vec<GroupPoint>> {
    let pts = canonical_points(s);
    let mut classes: Vec<Vec<GroupPoint>> = Vec::new();
    for p in pts {
        match classes
            .iter_mut()
            .find(|class| a.contains(&p.sub(&class[0])))
        {
            Some(class) => class.push(p),
            None => classes.push(vec![p]),
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;
    use num_rational::BigRational;

    fn q() -> NumberField {
        NumberField::rational()
    }

    fn qp(coords: &[i64]) -> GroupPoint {
        GroupPoint::new(coords.iter().map(|&c| q().integer(c)).collect())
    }

    fn qp1(c: i64) -> GroupPoint {
        qp(&[c])
    }

    #[test]
    fn ap_component_is_slim_and_translation_invariant() {
        let h = LinearHypergraph::preset_ap(1);
        let report = verify_slim(&h.components()[0]);
        assert!(report.accepted());
        assert!(report.sum_zero);
    }

    #[test]
    fn equilateral_components_are_slim_and_translation_invariant() {
        let h = LinearHypergraph::preset_equilateral(1);
        assert_eq!(h.components().len(), 2);
        for c in h.components() {
            let report = verify_slim(c);
            assert!(report.accepted());
            assert!(report.sum_zero);
        }
    }

    #[test]
    fn degenerate_component_rejected_on_third_map() {
        let c = SlimComponent::from_scalars(&q().integer(1), &q().integer(-1), &q().integer(0), 1)
            .unwrap();
        let report = verify_slim(&c);
        assert!(!report.accepted());
        assert_eq!(report.first_failure(), Some("g2"));
        assert!(LinearHypergraph::new(vec![c]).is_err());
    }

    #[test]
    fn arithmetic_progression_hyperedge_found() {
        let h = LinearHypergraph::preset_ap(1);
        let edges = find_hyperedges(&h, &[qp1(0), qp1(1), qp1(2)]);
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].points(), &[qp1(0), qp1(1), qp1(2)]);
        assert!(edges[0].verify(&h));
    }

    #[test]
    fn equilateral_triangle_on_zero_one_w() {
        let k = NumberField::eisenstein();
        let h = LinearHypergraph::preset_equilateral(1);
        let zero = GroupPoint::new(vec![k.zero()]);
        let one = GroupPoint::new(vec![k.one()]);
        let w = GroupPoint::new(vec![k.generator().unwrap()]);
        let edges = find_hyperedges(&h, &[zero, one, w]);
        assert_eq!(edges.len(), 1);
        assert!(edges[0].verify(&h));
    }

    #[test]
    fn too_small_samples_have_no_hyperedges() {
        let h = LinearHypergraph::preset_ap(1);
        assert!(find_hyperedges(&h, &[qp1(0), qp1(1)]).is_empty());
        assert!(find_hyperedges(&h, &[]).is_empty());
    }

    #[test]
    fn third_points_for_progressions() {
        let h = LinearHypergraph::preset_ap(1);
        let zs = third_points(&h, &qp1(0), &qp1(2)).unwrap();
        assert_eq!(zs, vec![qp1(-2), qp1(1), qp1(4)]);
        for z in &zs {
            assert!(h.is_hyperedge(&[qp1(0), qp1(2), z.clone()]));
        }
    }

    #[test]
    fn third_points_rejects_equal_arguments() {
        let h = LinearHypergraph::preset_ap(1);
        assert_eq!(
            third_points(&h, &qp1(0), &qp1(0)),
            Err(HypergraphError::EqualPoints)
        );
    }

    #[test]
    fn third_points_for_equilateral_contains_the_apex() {
        let k = NumberField::eisenstein();
        let h = LinearHypergraph::preset_equilateral(1);
        let zero = GroupPoint::new(vec![k.zero()]);
        let one = GroupPoint::new(vec![k.one()]);
        let w = GroupPoint::new(vec![k.generator().unwrap()]);
        let zs = third_points(&h, &zero, &one).unwrap();
        assert!(zs.contains(&w));
        // every returned point completes a verified hyperedge
        for z in &zs {
            assert!(h.is_hyperedge(&[zero.clone(), one.clone(), z.clone()]));
        }
        assert!(zs.len() <= 12);
    }

    #[test]
    fn closure_of_a_line_under_scalar_maps_is_the_line() {
        let h = LinearHypergraph::preset_ap(2);
        let c = gamma_closure(&h, &[qp(&[1, 0])]);
        assert_eq!(c.basis().rank(), 1);
        assert!(c.contains(&qp(&[5, 0])));
        assert!(!c.contains(&qp(&[0, 1])));
    }

    #[test]
    fn closure_of_empty_seed_is_zero() {
        let h = LinearHypergraph::preset_ap(2);
        let c = gamma_closure(&h, &[]);
        assert!(c.basis().is_zero_space());
    }

    #[test]
    fn closure_grows_under_a_coordinate_swap() {
        let q = q();
        let swap = ExactMatrix::from_rows(vec![
            vec![q.zero(), q.one()],
            vec![q.one(), q.zero()],
        ])
        .unwrap();
        let g1 = ExactMatrix::scalar(&q.integer(2), 2);
        let g2 = ExactMatrix::scalar(&q.integer(3), 2);
        let comp = SlimComponent::new(swap, g1, g2).unwrap();
        let h = LinearHypergraph::new(vec![comp]).unwrap();
        let c = gamma_closure(&h, &[qp(&[1, 0])]);
        assert!(c.basis().is_full_space());
    }

    #[test]
    fn closure_over_the_eisenstein_field_adds_the_generator_direction() {
        let h = LinearHypergraph::preset_equilateral(1);
        let k = h.field().clone();
        let one = GroupPoint::new(vec![k.one()]);
        let c = gamma_closure(&h, &[one]);
        // multiplication by 1 - w forces the rational plane spanned by 1, w
        assert_eq!(c.basis().rank(), 2);
        assert!(c.contains(&GroupPoint::new(vec![k.generator().unwrap()])));
    }

    #[test]
    fn coset_partition_examples() {
        let h = LinearHypergraph::preset_ap(2);
        let a = gamma_closure(&h, &[qp(&[1, 0])]);
        let classes = coset_partition(&a, &[qp(&[0, 1]), qp(&[5, 1]), qp(&[0, 2])]);
        assert_eq!(
            classes,
            vec![vec![qp(&[0, 1]), qp(&[5, 1])], vec![qp(&[0, 2])]]
        );

        let full = gamma_closure(&h, &[qp(&[1, 0]), qp(&[0, 1])]);
        let one_class = coset_partition(&full, &[qp(&[3, 4]), qp(&[-1, 7]), qp(&[0, 0])]);
        assert_eq!(one_class.len(), 1);

        let zero = gamma_closure(&h, &[]);
        let singletons = coset_partition(&zero, &[qp(&[1, 1]), qp(&[2, 2]), qp(&[3, 3])]);
        assert_eq!(singletons.len(), 3);
    }

    #[test]
    fn closure_is_idempotent_and_monotone() {
        let h = LinearHypergraph::preset_ap(2);
        let c1 = gamma_closure(&h, &[qp(&[1, 2])]);
        let again = gamma_closure(&h, c1.basis().vectors());
        assert_eq!(c1.basis(), again.basis());

        let small = gamma_closure(&h, &[qp(&[1, 0])]);
        let large = gamma_closure(&h, &[qp(&[1, 0]), qp(&[1, 1])]);
        assert!(large.basis().contains_basis(small.basis()));
    }

    #[test]
    fn scalar_component_over_half_integers() {
        // exercises non-integer scalars end to end
        let q = q();
        let half = Scalar::from_rational(BigRational::new(1.into(), 2.into()), q.clone());
        let comp = SlimComponent::from_scalars(&half, &q.integer(-1), &half, 1).unwrap();
        let h = LinearHypergraph::new(vec![comp]).unwrap();
        // x/2 - y + z/2 = 0 is again the progression relation
        assert!(h.is_hyperedge(&[qp1(0), qp1(1), qp1(2)]));
    }
}
