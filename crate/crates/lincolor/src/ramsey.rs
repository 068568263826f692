//! The finite approximation coloring poset: proper partial colorings of a
//! finite vertex universe ordered by reverse inclusion, the triple and pair
//! classifiers behind its centering properties, delta-system extraction,
//! and brute-force certification of Ramsey-centeredness on tiny instances.
//!
//! The triple classifier labels an index triple from an enumerated family
//! of equal-domain-size conditions by the first failing clause: a domain
//! point of one condition strays into another's domain under a different
//! slot value (label 0), matching slots disagree in color (label 1), a
//! hyperedge in the union of the domains has a unique point outside the
//! other conditions' domains (label 2), or none of these (OK). Ties pick
//! the least `(b, j)`. Families whose triples all classify OK form a
//! delta-system whose union is a common lower bound; that implication is
//! checked exhaustively, never assumed.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::RamseyError;
use crate::exec;
use crate::hypergraph::{find_hyperedges, LinearHypergraph};
use crate::linear::GroupPoint;

/// A finite vertex universe with its hyperedges (arity two or three) given
/// by sorted index sets.
#[derive(Clone, Debug)]
pub struct Universe {
    labels: Vec<String>,
    edges: Vec<Vec<usize>>,
}

impl Universe {
    /// The universe of a point sample under a linear hypergraph.
    pub fn from_hypergraph(h: &LinearHypergraph, points: &[GroupPoint]) -> Self {
        let pts = crate::hypergraph::canonical_points(points);
        let labels = pts.iter().map(|p| p.to_string()).collect();
        let edges = find_hyperedges(h, &pts)
            .into_iter()
            .map(|e| {
                e.points()
                    .iter()
                    .map(|p| pts.iter().position(|q| q == p).expect("edge point sampled"))
                    .collect()
            })
            .collect();
        Universe { labels, edges }
    }

    /// A plain graph universe on `n` vertices.
    pub fn graph(n: usize, pairs: &[(usize, usize)]) -> Self {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges: Vec<Vec<usize>> = pairs
            .iter()
            .map(|&(a, b)| {
                let mut e = vec![a, b];
                e.sort_unstable();
                e
            })
            .collect();
        edges.sort();
        edges.dedup();
        Universe { labels, edges }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }
}

/// A partial finite coloring with no monochromatic hyperedge inside its
/// domain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiniteCondition {
    assignments: BTreeMap<usize, u32>,
}

impl FiniteCondition {
    pub fn new(
        universe: &Universe,
        assignments: BTreeMap<usize, u32>,
    ) -> Result<Self, RamseyError> {
        let c = FiniteCondition { assignments };
        if !c.is_proper(universe) {
            return Err(RamseyError::ImproperCondition { index: 0 });
        }
        Ok(c)
    }

    pub fn assignments(&self) -> &BTreeMap<usize, u32> {
        &self.assignments
    }

    pub fn domain(&self) -> Vec<usize> {
        self.assignments.keys().copied().collect()
    }

    pub fn is_proper(&self, universe: &Universe) -> bool {
        universe.edges().iter().all(|e| {
            let colors: Option<Vec<u32>> =
                e.iter().map(|v| self.assignments.get(v).copied()).collect();
            match colors {
                Some(cs) => cs.windows(2).any(|w| w[0] != w[1]),
                None => true,
            }
        })
    }
}

/// All proper conditions with domain size `k` and colors below `l`, in
/// lexicographic order of (domain, color vector).
pub fn enumerate_conditions(universe: &Universe, k: usize, l: u32) -> Vec<FiniteCondition> {
    let mut out = Vec::new();
    let n = universe.len();
    let mut domain = Vec::new();
    fn domains(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            domains(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut all_domains = Vec::new();
    domains(n, k, 0, &mut domain, &mut all_domains);
    for dom in all_domains {
        let total = (l as u64).pow(k as u32);
        for code in 0..total {
            let mut rem = code;
            let mut assignments = BTreeMap::new();
            // leftmost slot most significant
            for (slot, &v) in dom.iter().enumerate() {
                let place = (l as u64).pow((k - 1 - slot) as u32);
                assignments.insert(v, (rem / place) as u32);
                rem %= place;
            }
            let c = FiniteCondition { assignments };
            if c.is_proper(universe) {
                out.push(c);
            }
        }
    }
    out
}

/// Union of the conditions when it is a function and proper; the common
/// lower bound under reverse inclusion. Depends only on the set.
pub fn lower_bound(
    universe: &Universe,
    conds: &[&FiniteCondition],
) -> Option<FiniteCondition> {
    let mut union: BTreeMap<usize, u32> = BTreeMap::new();
    for c in conds {
        for (&v, &color) in c.assignments() {
            match union.get(&v) {
                Some(&existing) if existing != color => return None,
                _ => {
                    union.insert(v, color);
                }
            }
        }
    }
    let candidate = FiniteCondition { assignments: union };
    candidate.is_proper(universe).then_some(candidate)
}

/// A condition with a fixed enumeration of its domain.
#[derive(Clone, Debug)]
pub struct EnumeratedCondition {
    pub condition: FiniteCondition,
    pub order: Vec<usize>,
}

impl EnumeratedCondition {
    /// The canonical enumeration: the sorted domain.
    pub fn canonical(condition: FiniteCondition) -> Self {
        let order = condition.domain();
        EnumeratedCondition { condition, order }
    }

    fn contains(&self, v: usize) -> bool {
        self.condition.assignments().contains_key(&v)
    }

    fn color(&self, v: usize) -> u32 {
        self.condition.assignments()[&v]
    }
}

/// Classifier labels; the numeric component names the clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    /// A slot value of one condition meets another's domain off-slot.
    Collision { b: usize, j: usize },
    /// Matching slot values, disagreeing colors.
    Disagreement { b: usize, j: usize },
    /// A hyperedge in the union of the domains with a unique stray point.
    Stray { b: usize, j: usize },
    Ok,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Collision { b, j } => write!(f, "<0,{b},{j}>"),
            Label::Disagreement { b, j } => write!(f, "<1,{b},{j}>"),
            Label::Stray { b, j } => write!(f, "<2,{b},{j}>"),
            Label::Ok => write!(f, "OK"),
        }
    }
}

fn check_domain_sizes(family: &[EnumeratedCondition]) -> Result<usize, RamseyError> {
    let k = family.first().map(|c| c.order.len()).unwrap_or(0);
    for (index, c) in family.iter().enumerate() {
        if c.order.len() != k {
            return Err(RamseyError::DomainSizeMismatch { expected: k, index, got: c.order.len() });
        }
    }
    Ok(k)
}

/// The four-clause triple classifier over an enumerated family; `u` holds
/// three family indices in increasing order.
pub fn classify_triple(
    universe: &Universe,
    family: &[EnumeratedCondition],
    u: [usize; 3],
) -> Result<Label, RamseyError> {
    let k = check_domain_sizes(family)?;
    let cond = |b: usize| &family[u[b]];

    for b in 0..3 {
        for j in 0..k {
            let x = cond(b).order[j];
            // the two existentials are independent: x lands in some other
            // domain while some other condition disagrees at slot j; this
            // is what forces sharing onto globally constant slots
            let in_other = (0..3).any(|c| c != b && cond(c).contains(x));
            let differs = (0..3).any(|c| c != b && cond(c).order[j] != x);
            if in_other && differs {
                return Ok(Label::Collision { b, j });
            }
        }
    }
    for b in 0..3 {
        for j in 0..k {
            let x = cond(b).order[j];
            let disagrees = (0..3).any(|c| {
                c != b && cond(c).order[j] == x && cond(c).color(x) != cond(b).color(x)
            });
            if disagrees {
                return Ok(Label::Disagreement { b, j });
            }
        }
    }
    let union_domain: BTreeSet<usize> = (0..3)
        .flat_map(|b| cond(b).condition.domain())
        .collect();
    let inside_edges: Vec<&Vec<usize>> = universe
        .edges()
        .iter()
        .filter(|e| e.iter().all(|v| union_domain.contains(v)))
        .collect();
    for b in 0..3 {
        for j in 0..k {
            let x = cond(b).order[j];
            for e in &inside_edges {
                if !e.contains(&x) {
                    continue;
                }
                let strays: Vec<usize> = e
                    .iter()
                    .copied()
                    .filter(|&v| (0..3).all(|c| c == b || !cond(c).contains(v)))
                    .collect();
                if strays == [x] {
                    return Ok(Label::Stray { b, j });
                }
            }
        }
    }
    Ok(Label::Ok)
}

/// The pair classifier for graph universes; `u` holds two family indices in
/// increasing order.
pub fn classify_pair(
    universe: &Universe,
    family: &[EnumeratedCondition],
    u: [usize; 2],
) -> Result<Label, RamseyError> {
    let k = check_domain_sizes(family)?;
    let cond = |b: usize| &family[u[b]];

    for b in 0..2 {
        for j in 0..k {
            let x = cond(b).order[j];
            if cond(1 - b).order[j] != x && cond(1 - b).contains(x) {
                return Ok(Label::Collision { b, j });
            }
        }
    }
    for j in 0..k {
        let x = cond(0).order[j];
        if cond(1).order[j] == x && cond(0).color(x) != cond(1).color(x) {
            return Ok(Label::Disagreement { b: 0, j });
        }
    }
    for b in 0..2 {
        for j in 0..k {
            let x = cond(b).order[j];
            if cond(1 - b).contains(x) {
                continue;
            }
            let connected = universe.edges().iter().any(|e| {
                e.len() == 2 && e.contains(&x) && {
                    let other = if e[0] == x { e[1] } else { e[0] };
                    cond(1 - b).contains(other) && !cond(b).contains(other)
                }
            });
            if connected {
                return Ok(Label::Stray { b, j });
            }
        }
    }
    Ok(Label::Ok)
}

/// What an OK-homogeneous family must satisfy; `heart` is the common
/// pairwise intersection of the domains.
#[derive(Clone, Debug)]
pub struct DeltaSystemReport {
    pub heart: Vec<usize>,
    pub bound: FiniteCondition,
}

/// Checks the consequences of OK-homogeneity on the subfamily indexed by
/// `a`: the domains form a delta-system, the union is a function, every
/// hyperedge of the union domain lies inside a single condition's domain,
/// and the union is a common lower bound. Any failure is returned as a
/// counterexample description — a bug certificate, not an expected outcome.
pub fn ok_homogeneous_implies_bound(
    universe: &Universe,
    family: &[EnumeratedCondition],
    a: &[usize],
) -> Result<DeltaSystemReport, String> {
    let doms: Vec<BTreeSet<usize>> = a
        .iter()
        .map(|&i| family[i].condition.domain().into_iter().collect())
        .collect();
    let heart: BTreeSet<usize> = if doms.len() >= 2 {
        let first: BTreeSet<usize> = doms[0].intersection(&doms[1]).copied().collect();
        for i in 0..doms.len() {
            for j in (i + 1)..doms.len() {
                let meet: BTreeSet<usize> = doms[i].intersection(&doms[j]).copied().collect();
                if meet != first {
                    return Err(format!(
                        "domains {i} and {j} meet in {meet:?}, expected heart {first:?}"
                    ));
                }
            }
        }
        first
    } else {
        doms.first().cloned().unwrap_or_default()
    };

    let members: Vec<&FiniteCondition> = a.iter().map(|&i| &family[i].condition).collect();
    let Some(bound) = lower_bound(universe, &members) else {
        // distinguish functionhood from properness for the certificate
        let mut union: BTreeMap<usize, u32> = BTreeMap::new();
        for c in &members {
            for (&v, &color) in c.assignments() {
                if let Some(&e) = union.get(&v) {
                    if e != color {
                        return Err(format!("union disagrees at vertex {v}"));
                    }
                }
                union.insert(v, color);
            }
        }
        return Err("union is a function but not a proper coloring".to_string());
    };

    let union_domain: BTreeSet<usize> = bound.domain().into_iter().collect();
    for e in universe.edges() {
        if e.iter().all(|v| union_domain.contains(v))
            && !doms.iter().any(|d| e.iter().all(|v| d.contains(v)))
        {
            return Err(format!("hyperedge {e:?} straddles the delta-system"));
        }
    }
    Ok(DeltaSystemReport { heart: heart.into_iter().collect(), bound })
}

/// Result of the exhaustive Ramsey-centered check.
#[derive(Clone, Debug)]
pub enum CenteredOutcome {
    /// Every tuple contains a compatible subfamily; one witness per tuple.
    Centered { witnesses: Vec<(Vec<usize>, Vec<usize>)> },
    /// The least tuple (in lexicographic order) without one.
    Violated { tuple: Vec<usize> },
}

impl CenteredOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, CenteredOutcome::Centered { .. })
    }
}

fn tuple_of_index(mut t: u128, len: usize, base: usize) -> Vec<usize> {
    let mut out = vec![0usize; len];
    for slot in (0..len).rev() {
        out[slot] = (t % base as u128) as usize;
        t /= base as u128;
    }
    out
}

fn subsets_of_size(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(m: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in start..m {
            cur.push(v);
            rec(m, n, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(m, n, 0, &mut cur, &mut out);
    out
}

/// Exhaustively checks whether the conditions with domain size `k` and
/// colors below `l` are `(n, m)`-centered over the universe: every
/// `m`-tuple (with repetition) contains `n` members with a common lower
/// bound. Refuses instances whose tuple space exceeds `budget`.
pub fn check_ramsey_centered(
    universe: &Universe,
    k: usize,
    l: u32,
    n: usize,
    m: usize,
    budget: u128,
) -> Result<CenteredOutcome, RamseyError> {
    let conds = enumerate_conditions(universe, k, l);
    let count = conds.len() as u128;
    let needed = count
        .checked_pow(m as u32)
        .ok_or(RamseyError::BudgetExceeded { needed: u128::MAX, budget })?;
    if needed > budget || needed > u64::MAX as u128 {
        return Err(RamseyError::BudgetExceeded { needed, budget });
    }
    let total = needed as u64;
    let position_subsets = subsets_of_size(m, n);
    let compatible = |tuple: &[usize]| -> Option<Vec<usize>> {
        position_subsets.iter().find_map(|b| {
            let members: Vec<&FiniteCondition> = b.iter().map(|&pos| &conds[tuple[pos]]).collect();
            lower_bound(universe, &members).map(|_| b.clone())
        })
    };
    let violating = exec::find_first_index(total, |t| {
        let tuple = tuple_of_index(t as u128, m, conds.len());
        compatible(&tuple).is_none()
    });
    match violating {
        Some(t) => Ok(CenteredOutcome::Violated {
            tuple: tuple_of_index(t as u128, m, conds.len()),
        }),
        None => {
            let witnesses = exec::map_indices(total as usize, |t| {
                let tuple = tuple_of_index(t as u128, m, conds.len());
                let b = compatible(&tuple).expect("verified above");
                (tuple, b)
            });
            Ok(CenteredOutcome::Centered { witnesses })
        }
    }
}

/// The tuple length certifying `(n, m)`-centeredness of the conditions
/// with domain size `k` and colors below `l`, against a hypergraph whose
/// third-point degree is bounded by `d`: the homogeneous-set size is
/// lifted to exceed `d*(2k)^2` and `3*l`, and the arrow bound for triples
/// in `9k+1` colors supplies `m`. The numbers explode immediately, so the
/// overflow failure of the arrow bound is the usual outcome; the
/// exhaustive checker works at its own desk-scale budgets instead.
pub fn centering_tuple_length(
    k: usize,
    l: u32,
    n: u64,
    degree_bound: u64,
) -> Result<u64, RamseyError> {
    let lifted = n
        .max(degree_bound.saturating_mul(4 * (k as u64) * (k as u64)) + 1)
        .max(3 * l as u64 + 1);
    ramsey_upper_bound(lifted, 3, 9 * k as u64 + 1)
}

/// A finite `m` guaranteed to satisfy the arrow relation `m -> (n)^e_c` by
/// the standard stepping-up recursion; an upper bound, not an exact value.
///
/// Exponent two uses the greedy pivot argument: `c*(n-1)+1` pivots each
/// shrink the pool by a factor of `c`, so `c^(c*(n-1)+2)` vertices suffice.
/// Exponent three builds a prehomogeneous sequence of the exponent-two
/// length `t`, shrinking the pool by `c` per sequence pair, so `c^(t^2)`
/// suffices.
pub fn ramsey_upper_bound(n: u64, exponent: u32, colors: u64) -> Result<u64, RamseyError> {
    let overflow = || RamseyError::BoundOverflow { n, exponent, colors };
    let checked_power = |base: u64, exp: u128| -> Result<u64, RamseyError> {
        let mut acc: u128 = 1;
        for _ in 0..exp {
            acc = acc.checked_mul(base as u128).ok_or_else(overflow)?;
            if acc > u64::MAX as u128 {
                return Err(overflow());
            }
        }
        Ok(acc as u64)
    };
    match exponent {
        2 => {
            if n <= 2 || colors <= 1 {
                return Ok(n);
            }
            let pivots = colors
                .checked_mul(n - 1)
                .and_then(|v| v.checked_add(2))
                .ok_or_else(overflow)?;
            checked_power(colors, pivots as u128)
        }
        3 => {
            if n <= 1 {
                return Ok(n);
            }
            if n <= 3 || colors <= 1 {
                return Ok(n.max(3));
            }
            let t = ramsey_upper_bound(n, 2, colors)?;
            let e = (t as u128).checked_mul(t as u128).ok_or_else(overflow)?;
            checked_power(colors, e)
        }
        other => Err(RamseyError::UnsupportedExponent(other)),
    }
}
