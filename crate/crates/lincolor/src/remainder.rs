//! Remainder graphs on finite sample windows, quotients by coset
//! equivalence, odd-cycle-freeness certificates, and the biclique
//! construction for the arithmetic-progression hypergraph.
//!
//! The remainder graph of a hypergraph over a closed subspace `A` joins two
//! points outside `A` when some `z` in `A` completes them to a hyperedge.
//! The sample set is the finite observable window of the infinite graph;
//! every claim is relative to it. Witnesses are stored on every edge and
//! verification re-derives them.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::RemainderError;
use crate::exec;
use crate::hypergraph::{canonical_points, ClosedSubspace, LinearHypergraph, ROLE_ASSIGNMENTS};
use crate::linear::GroupPoint;

/// One remainder edge: endpoints by vertex index, the completing point, and
/// the role layout under which the equation holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemainderEdge {
    pub x: usize,
    pub y: usize,
    pub witness: GroupPoint,
    pub component: usize,
    /// Roles of `x`, `y`, and the witness in the component equation.
    pub roles: (usize, usize, usize),
}

/// All `(component, role_x, role_y, role_z, z)` configurations making
/// `{x, y, z}` a hyperedge with `z` inside the subspace.
pub(crate) fn edge_configurations(
    h: &LinearHypergraph,
    a: &ClosedSubspace,
    x: &GroupPoint,
    y: &GroupPoint,
) -> Vec<(usize, usize, usize, usize, GroupPoint)> {
    let mut out = Vec::new();
    if x == y {
        return out;
    }
    for (ci, comp) in h.components().iter().enumerate() {
        let g = comp.maps();
        for assignment in ROLE_ASSIGNMENTS {
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
            if z != *x && z != *y && a.contains(&z) {
                out.push((ci, jx, jy, jz, z));
            }
        }
    }
    out
}

/// The remainder graph of `h` over `a`, restricted to the sample `s`.
#[derive(Clone, Debug)]
pub struct RemainderGraph {
    subspace: ClosedSubspace,
    vertices: Vec<GroupPoint>,
    edges: Vec<RemainderEdge>,
}

impl RemainderGraph {
    pub fn subspace(&self) -> &ClosedSubspace {
        &self.subspace
    }

    pub fn vertices(&self) -> &[GroupPoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[RemainderEdge] {
        &self.edges
    }

    pub fn has_edge(&self, x: &GroupPoint, y: &GroupPoint) -> bool {
        let (Some(i), Some(j)) = (
            self.vertices.iter().position(|v| v == x),
            self.vertices.iter().position(|v| v == y),
        ) else {
            return false;
        };
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.edges.iter().any(|e| e.x == i && e.y == j)
    }

    /// Re-verifies every stored witness: the completing point lies in the
    /// subspace, the endpoints do not, and the role equation holds exactly.
    pub fn verify(&self, h: &LinearHypergraph) -> bool {
        if self.vertices.iter().any(|v| self.subspace.contains(v)) {
            return false;
        }
        self.edges.iter().all(|e| {
            let x = &self.vertices[e.x];
            let y = &self.vertices[e.y];
            let z = &e.witness;
            if !self.subspace.contains(z) || x == y || z == x || z == y {
                return false;
            }
            let g = h.components()[e.component].maps();
            let (jx, jy, jz) = e.roles;
            g[jx].apply(x).add(&g[jy].apply(y)).add(&g[jz].apply(z)).is_zero()
        })
    }
}

/// Builds the remainder graph over the sample window. Every sample point
/// must lie outside the subspace; the offending index is reported otherwise.
pub fn remainder_graph(
    h: &LinearHypergraph,
    a: &ClosedSubspace,
    s: &[GroupPoint],
) -> Result<RemainderGraph, RemainderError> {
    let vertices = canonical_points(s);
    if let Some(index) = vertices.iter().position(|v| a.contains(v)) {
        return Err(RemainderError::PointInsideSubspace { index });
    }
    let n = vertices.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    let found = exec::map_indices(pairs.len(), |p| {
        let (i, j) = pairs[p];
        edge_configurations(h, a, &vertices[i], &vertices[j])
            .into_iter()
            .next()
            .map(|(component, jx, jy, jz, z)| RemainderEdge {
                x: i,
                y: j,
                witness: z,
                component,
                roles: (jx, jy, jz),
            })
    });
    let edges = found.into_iter().flatten().collect();
    Ok(RemainderGraph { subspace: a.clone(), vertices, edges })
}

/// The quotient graph on coset classes, with the witnessing remainder edges
/// attached to each class edge.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    subspace: ClosedSubspace,
    classes: Vec<Vec<GroupPoint>>,
    edges: Vec<QuotientEdge>,
}

#[derive(Clone, Debug)]
pub struct QuotientEdge {
    pub a: usize,
    pub b: usize,
    pub witnesses: Vec<RemainderEdge>,
}

impl QuotientGraph {
    /// Raw constructor for hand-built instances; nothing is validated.
    pub fn from_parts(
        subspace: ClosedSubspace,
        classes: Vec<Vec<GroupPoint>>,
        edges: Vec<QuotientEdge>,
    ) -> Self {
        QuotientGraph { subspace, classes, edges }
    }

    pub fn subspace(&self) -> &ClosedSubspace {
        &self.subspace
    }

    pub fn classes(&self) -> &[Vec<GroupPoint>] {
        &self.classes
    }

    /// Canonical representative: the least point of the class.
    pub fn representative(&self, class: usize) -> &GroupPoint {
        &self.classes[class][0]
    }

    pub fn edges(&self) -> &[QuotientEdge] {
        &self.edges
    }

    pub fn class_of(&self, x: &GroupPoint) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(x))
    }

    pub fn neighbors(&self, class: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.a == class {
                    Some(e.b)
                } else if e.b == class {
                    Some(e.a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The quotient of the remainder graph by coset equivalence, together with
/// the class map. The homomorphism property (edge endpoints land in
/// distinct classes) is checked, not assumed; a violation is returned as a
/// bug certificate.
pub fn quotient(
    h: &LinearHypergraph,
    a: &ClosedSubspace,
    s: &[GroupPoint],
) -> Result<(QuotientGraph, BTreeMap<GroupPoint, usize>), QuotientError> {
    let rg = remainder_graph(h, a, s).map_err(QuotientError::Remainder)?;
    let classes = crate::hypergraph::coset_partition(a, rg.vertices());
    let mut class_map = BTreeMap::new();
    for (ci, class) in classes.iter().enumerate() {
        for p in class {
            class_map.insert(p.clone(), ci);
        }
    }
    let mut edges: Vec<QuotientEdge> = Vec::new();
    for e in rg.edges() {
        let cx = class_map[&rg.vertices()[e.x]];
        let cy = class_map[&rg.vertices()[e.y]];
        if cx == cy {
            return Err(QuotientError::NotHomomorphic {
                x: rg.vertices()[e.x].to_string(),
                y: rg.vertices()[e.y].to_string(),
            });
        }
        let (lo, hi) = if cx < cy { (cx, cy) } else { (cy, cx) };
        match edges.iter_mut().find(|qe| qe.a == lo && qe.b == hi) {
            Some(qe) => qe.witnesses.push(e.clone()),
            None => edges.push(QuotientEdge { a: lo, b: hi, witnesses: vec![e.clone()] }),
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));
    Ok((QuotientGraph { subspace: a.clone(), classes, edges }, class_map))
}

#[derive(Debug, PartialEq, Eq)]
pub enum QuotientError {
    Remainder(RemainderError),
    /// A remainder edge with coset-equivalent endpoints: impossible over a
    /// closed subspace, so this certifies an implementation bug.
    NotHomomorphic { x: String, y: String },
}

impl fmt::Display for QuotientError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientError::Remainder(e) => write!(f, "{e}"),
            QuotientError::NotHomomorphic { x, y } => {
                write!(f, "remainder edge {x} -- {y} has coset-equivalent endpoints")
            }
        }
    }
}

impl std::error::Error for QuotientError {}

/// A local-finiteness violation: one class reaches two distinct neighbor
/// classes through the same component and ordered role pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborViolation {
    pub class: usize,
    pub component: usize,
    pub role_x: usize,
    pub role_y: usize,
    pub neighbor_a: usize,
    pub neighbor_b: usize,
    pub witness_a: (GroupPoint, GroupPoint, GroupPoint),
    pub witness_b: (GroupPoint, GroupPoint, GroupPoint),
}

/// Checks that per class, component, and ordered role pair, at most one
/// neighbor class is reachable. Violations falsify the construction, not
/// the underlying claim.
pub fn check_local_finiteness(
    q: &QuotientGraph,
    h: &LinearHypergraph,
) -> Vec<NeighborViolation> {
    type Key = (usize, usize, usize, usize);
    let mut seen: BTreeMap<Key, (usize, (GroupPoint, GroupPoint, GroupPoint))> = BTreeMap::new();
    let mut violations = Vec::new();
    let classes = q.classes();
    for (ci, class) in classes.iter().enumerate() {
        for (di, other) in classes.iter().enumerate() {
            if ci == di {
                continue;
            }
            for x in class {
                for y in other {
                    for (comp, jx, jy, _jz, z) in
                        edge_configurations(h, q.subspace(), x, y)
                    {
                        let key = (ci, comp, jx, jy);
                        match seen.get(&key) {
                            None => {
                                seen.insert(key, (di, (x.clone(), y.clone(), z.clone())));
                            }
                            Some((prev, w)) if *prev != di => {
                                violations.push(NeighborViolation {
                                    class: ci,
                                    component: comp,
                                    role_x: jx,
                                    role_y: jy,
                                    neighbor_a: *prev,
                                    neighbor_b: di,
                                    witness_a: w.clone(),
                                    witness_b: (x.clone(), y.clone(), z),
                                });
                            }
                            Some(_) => {}
                        }
                    }
                }
            }
        }
    }
    violations
}

/// The two translated parts of a biclique in the progression remainder
/// graph: `C0 = B0 + eps` and `C1 = (B1 + eps) / 2`.
pub fn ap_biclique(
    a: &ClosedSubspace,
    b0: &[GroupPoint],
    b1: &[GroupPoint],
    eps: &GroupPoint,
) -> Result<(Vec<GroupPoint>, Vec<GroupPoint>), RemainderError> {
    let b0 = canonical_points(b0);
    let b1 = canonical_points(b1);
    for (part, set) in [(0usize, &b0), (1usize, &b1)] {
        if let Some(index) = set.iter().position(|p| !a.contains(p)) {
            return Err(RemainderError::PartOutsideSubspace { part, index });
        }
    }
    if b0.iter().any(|p| b1.contains(p)) {
        return Err(RemainderError::PartsNotDisjoint);
    }
    if a.contains(eps) {
        return Err(RemainderError::ShiftInsideSubspace);
    }
    let half = num_rational::BigRational::new(1.into(), 2.into());
    let c0: Vec<GroupPoint> = b0.iter().map(|p| p.add(eps)).collect();
    let c1: Vec<GroupPoint> = b1.iter().map(|p| p.add(eps).scale_rational(&half)).collect();
    Ok((canonical_points(&c0), canonical_points(&c1)))
}

/// Outcome of the breadth-first two-coloring: either a certificate coloring
/// or an explicit odd cycle (as vertex indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BipartiteOutcome {
    TwoColoring(Vec<u8>),
    OddCycle(Vec<usize>),
}

impl BipartiteOutcome {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, BipartiteOutcome::TwoColoring(_))
    }
}

/// Breadth-first two-coloring of an abstract graph given by index pairs.
pub fn check_bipartite_indices(n: usize, edges: &[(usize, usize)]) -> BipartiteOutcome {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color: Vec<Option<u8>> = vec![None; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(0);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match color[v] {
                    None => {
                        color[v] = Some(1 - color[u].unwrap());
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                    Some(c) if c == color[u].unwrap() => {
                        return BipartiteOutcome::OddCycle(odd_cycle(u, v, &parent, &depth));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    BipartiteOutcome::TwoColoring(color.into_iter().map(|c| c.unwrap_or(0)).collect())
}

fn odd_cycle(u: usize, v: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    // left ends at the meet point; splice the right half back in reverse.
    right.pop();
    left.extend(right.into_iter().rev());
    left
}

/// Two-colors the remainder graph or exhibits an odd cycle.
pub fn check_bipartite(g: &RemainderGraph) -> BipartiteOutcome {
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.x, e.y)).collect();
    check_bipartite_indices(g.vertices().len(), &edges)
}
