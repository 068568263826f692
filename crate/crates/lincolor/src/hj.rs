//! Combinatorial lines over a finite alphabet, line-free covers and their
//! exact minimum size, exhaustive threshold search at tiny parameters, the
//! line hypergraph on truncated words, and a geometric-decay embedding of
//! that hypergraph into a translation-invariant linear hypergraph.
//!
//! Words live in `n^N` for a fixed length `N`. A combinatorial line fixes
//! the letters outside a nonempty active set and runs the active positions
//! through each alphabet letter in lockstep, giving `n` distinct words.
//! The embedding sends a word to the sum of per-level points chosen so
//! that each level's triple solves the component equation and shrinks
//! fast enough — exact rational comparisons of squared norms, factor
//! `4^-m` per level — that line images stay pairwise distinct.

use num_rational::BigRational;
use num_traits::One;

use crate::error::HjError;
use crate::exec;
use crate::field::Scalar;
use crate::hypergraph::LinearHypergraph;
use crate::linear::GroupPoint;

/// A word over the alphabet `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HJWord {
    letters: Vec<u8>,
}

impl HJWord {
    pub fn new(letters: Vec<u8>) -> Self {
        HJWord { letters }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl std::fmt::Display for HJWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// All words of length `len` over `n` letters, lexicographically.
pub fn all_words(len: usize, n: usize) -> Vec<HJWord> {
    let total = (n as u64).pow(len as u32);
    (0..total)
        .map(|code| HJWord::new(word_digits(code, len, n)))
        .collect()
}

fn word_digits(mut code: u64, len: usize, n: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for slot in (0..len).rev() {
        out[slot] = (code % n as u64) as u8;
        code /= n as u64;
    }
    out
}

/// A combinatorial line: a nonempty active set and the fixed letters
/// elsewhere. Its points run the active positions through each letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialLine {
    active: Vec<usize>,
    base: Vec<Option<u8>>,
}

impl CombinatorialLine {
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn base(&self) -> &[Option<u8>] {
        &self.base
    }

    /// The `n` points of the line, in letter order.
    pub fn points(&self, n: usize) -> Vec<HJWord> {
        (0..n)
            .map(|letter| {
                HJWord::new(
                    self.base
                        .iter()
                        .map(|slot| slot.unwrap_or(letter as u8))
                        .collect(),
                )
            })
            .collect()
    }
}

/// Every combinatorial line of `n^len`, enumerated by ascending active-set
/// bitmask and base code. The count is `(n+1)^len - n^len`.
pub fn lines(len: usize, n: usize, budget: u128) -> Result<Vec<CombinatorialLine>, HjError> {
    if n < 2 {
        return Err(HjError::AlphabetTooSmall(n));
    }
    if len == 0 {
        return Err(HjError::EmptyLength);
    }
    let needed = (n as u128 + 1)
        .checked_pow(len as u32)
        .ok_or(HjError::BudgetExceeded { needed: u128::MAX, budget })?;
    if needed > budget {
        return Err(HjError::BudgetExceeded { needed, budget });
    }
    let mut out = Vec::new();
    for mask in 1u64..(1 << len) {
        let active: Vec<usize> = (0..len).filter(|&i| mask >> i & 1 == 1).collect();
        let free: Vec<usize> = (0..len).filter(|&i| mask >> i & 1 == 0).collect();
        let combos = (n as u64).pow(free.len() as u32);
        for code in 0..combos {
            let digits = word_digits(code, free.len(), n);
            let mut base = vec![None; len];
            for (slot, &pos) in free.iter().enumerate() {
                base[pos] = Some(digits[slot]);
            }
            out.push(CombinatorialLine { active: active.clone(), base });
        }
    }
    Ok(out)
}

/// Reconstructs the line through a set of words, if they form one.
pub fn line_through(points: &[HJWord], n: usize) -> Option<CombinatorialLine> {
    if points.len() != n || n < 2 {
        return None;
    }
    let len = points[0].len();
    if points.iter().any(|p| p.len() != len) {
        return None;
    }
    let mut sorted: Vec<&HJWord> = points.iter().collect();
    sorted.sort();
    // there must be a non-constant position; order points by its letter
    let active_pos = (0..len).find(|&p| {
        sorted.iter().any(|w| w.letters()[p] != sorted[0].letters()[p])
    })?;
    let mut by_letter = sorted.clone();
    by_letter.sort_by_key(|w| w.letters()[active_pos]);
    let mut active = Vec::new();
    let mut base = vec![None; len];
    for (p, slot) in base.iter_mut().enumerate() {
        let first = by_letter[0].letters()[p];
        if by_letter.iter().all(|w| w.letters()[p] == first) {
            *slot = Some(first);
        } else {
            // active positions must run through 0..n in point order
            for (i, w) in by_letter.iter().enumerate() {
                if w.letters()[p] != i as u8 {
                    return None;
                }
            }
            active.push(p);
        }
    }
    if active.is_empty() {
        return None;
    }
    Some(CombinatorialLine { active, base })
}

/// Exact minimum number of line-free sets covering `b` inside `n^len`,
/// by exhaustive search: a cover of size `t` shrinks to a partition into
/// `t` line-free pieces, so backtracking over piece assignments is exact.
pub fn phi(b: &[HJWord], len: usize, n: usize, budget: u128) -> Result<usize, HjError> {
    let mut words: Vec<HJWord> = b.to_vec();
    words.sort();
    words.dedup();
    if words.is_empty() {
        return Err(HjError::EmptySet);
    }
    let all = lines(len, n, budget)?;
    // lines fully inside b, as index sets into `words`
    let inside: Vec<Vec<usize>> = all
        .iter()
        .filter_map(|line| {
            line.points(n)
                .iter()
                .map(|p| words.binary_search(p).ok())
                .collect::<Option<Vec<usize>>>()
        })
        .collect();
    let mut lines_at = vec![Vec::new(); words.len()];
    for (li, line) in inside.iter().enumerate() {
        for &w in line {
            lines_at[w].push(li);
        }
    }
    fn assignable(
        word: usize,
        piece: u32,
        pieces: &[Option<u32>],
        inside: &[Vec<usize>],
        lines_at: &[Vec<usize>],
    ) -> bool {
        lines_at[word].iter().all(|&li| {
            !inside[li]
                .iter()
                .all(|&w| w == word || pieces[w] == Some(piece))
        })
    }
    fn backtrack(
        word: usize,
        t: u32,
        pieces: &mut Vec<Option<u32>>,
        inside: &[Vec<usize>],
        lines_at: &[Vec<usize>],
    ) -> bool {
        if word == pieces.len() {
            return true;
        }
        for piece in 0..t {
            if assignable(word, piece, pieces, inside, lines_at) {
                pieces[word] = Some(piece);
                if backtrack(word + 1, t, pieces, inside, lines_at) {
                    return true;
                }
                pieces[word] = None;
            }
        }
        false
    }
    for t in 1..=words.len() as u32 {
        let mut pieces = vec![None; words.len()];
        if backtrack(0, t, &mut pieces, &inside, &lines_at) {
            return Ok(t as usize);
        }
    }
    unreachable!("singleton pieces always cover");
}

/// Least length `N <= max_len` such that every coloring of `n^N` with the
/// given number of colors contains a monochromatic line, by exhaustive
/// search over all colorings; `None` when no length up to `max_len` works.
pub fn hj_threshold(
    n: usize,
    colors: u32,
    max_len: usize,
    budget: u128,
) -> Result<Option<usize>, HjError> {
    if n < 2 {
        return Err(HjError::AlphabetTooSmall(n));
    }
    for len in 1..=max_len {
        let cells = (n as u128).pow(len as u32);
        let needed = (colors as u128)
            .checked_pow(cells as u32)
            .ok_or(HjError::BudgetExceeded { needed: u128::MAX, budget })?;
        if needed > budget || needed > u64::MAX as u128 {
            return Err(HjError::BudgetExceeded { needed, budget });
        }
        let all_lines = lines(len, n, budget)?;
        let line_indices: Vec<Vec<usize>> = all_lines
            .iter()
            .map(|line| {
                line.points(n)
                    .iter()
                    .map(|w| {
                        w.letters()
                            .iter()
                            .fold(0usize, |acc, &l| acc * n + l as usize)
                    })
                    .collect()
            })
            .collect();
        let cells = cells as usize;
        let some_coloring_avoids = exec::any_index(needed as u64, |code| {
            let mut c = code;
            let mut coloring = vec![0u32; cells];
            for slot in (0..cells).rev() {
                coloring[slot] = (c % colors as u64) as u32;
                c /= colors as u64;
            }
            line_indices.iter().all(|line| {
                let first = coloring[line[0]];
                line.iter().any(|&w| coloring[w] != first)
            })
        });
        if !some_coloring_avoids {
            return Ok(Some(len));
        }
    }
    Ok(None)
}

/// All line hyperedges whose points all lie in `sample`, each as its point
/// list in letter order.
pub fn delta_hyperedges(
    len: usize,
    n: usize,
    sample: &[HJWord],
    budget: u128,
) -> Result<Vec<Vec<HJWord>>, HjError> {
    let mut set: Vec<HJWord> = sample.to_vec();
    set.sort();
    set.dedup();
    let out = lines(len, n, budget)?
        .into_iter()
        .filter_map(|line| {
            let pts = line.points(n);
            pts.iter()
                .all(|p| set.binary_search(p).is_ok())
                .then_some(pts)
        })
        .collect();
    Ok(out)
}

/// Per-level point triples whose sums vanish under the leading component's
/// maps and whose norms shrink geometrically, so that summing one point per
/// level embeds the line hypergraph on words into the linear hypergraph.
#[derive(Clone, Debug)]
pub struct EmbeddingScheme {
    hypergraph: LinearHypergraph,
    levels: Vec<[GroupPoint; 3]>,
}

impl EmbeddingScheme {
    pub fn hypergraph(&self) -> &LinearHypergraph {
        &self.hypergraph
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[[GroupPoint; 3]] {
        &self.levels
    }

    /// Re-checks every invariant: per level, the points are nonzero and
    /// pairwise distinct, the component equation holds exactly, and the
    /// squared norm sits below `4^-m` times the least squared distance
    /// between distinct earlier points.
    pub fn validate(&self) -> Result<(), String> {
        let comp = &self.hypergraph.components()[0];
        let g = comp.maps();
        let quarter = BigRational::new(1.into(), 4.into());
        let mut earlier: Vec<GroupPoint> = Vec::new();
        let mut factor = BigRational::one();
        for (m, triple) in self.levels.iter().enumerate() {
            for p in triple {
                if p.is_zero() {
                    return Err(format!("level {m} has a zero point"));
                }
            }
            if triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2] {
                return Err(format!("level {m} repeats a point"));
            }
            let sum = g[0]
                .apply(&triple[0])
                .add(&g[1].apply(&triple[1]))
                .add(&g[2].apply(&triple[2]));
            if !sum.is_zero() {
                return Err(format!("level {m} breaks the component equation"));
            }
            if m > 0 {
                let min_sq = min_squared_distance(&earlier)
                    .expect("levels before {m} hold distinct points");
                let cap = &factor * &min_sq;
                for p in triple {
                    if p.norm_sq() >= cap {
                        return Err(format!("level {m} misses the decay bound"));
                    }
                }
            }
            earlier.extend(triple.iter().cloned());
            factor *= &quarter;
        }
        Ok(())
    }
}

fn min_squared_distance(points: &[GroupPoint]) -> Option<BigRational> {
    let mut best: Option<BigRational> = None;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i] == points[j] {
                continue;
            }
            let d = points[i].sub(&points[j]).norm_sq();
            best = match best {
                Some(b) if b <= d => Some(b),
                _ => Some(d),
            };
        }
    }
    best
}

/// Small scalars `a + b*w` with integer coefficients bounded by `radius`,
/// in ascending coefficient order; the deterministic base-solution search
/// window.
fn scalar_window(field: &crate::field::NumberField, radius: i64) -> Vec<Scalar> {
    let mut out = Vec::new();
    for a in -radius..=radius {
        if field.is_rational() {
            out.push(field.integer(a));
        } else {
            for b in -radius..=radius {
                out.push(Scalar::new(
                    BigRational::from_integer(a.into()),
                    BigRational::from_integer(b.into()),
                    field.clone(),
                ));
            }
        }
    }
    out
}

fn point_window(h: &LinearHypergraph, radius: i64) -> Vec<GroupPoint> {
    let scalars = scalar_window(h.field(), radius);
    let mut points = vec![Vec::new()];
    for _ in 0..h.dim() {
        let mut next = Vec::new();
        for partial in &points {
            for s in &scalars {
                let mut v: Vec<Scalar> = partial.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        points = next;
    }
    points.into_iter().map(GroupPoint::new).collect()
}

/// Builds a scheme of the given depth against the leading component of
/// `h`, which must be translation invariant. The base triple is the first
/// nonzero pairwise-distinct solution in the deterministic search window;
/// each level rescales it by a rational shrinking until the exact decay
/// inequality holds.
pub fn build_embedding(h: &LinearHypergraph, depth: usize) -> Result<EmbeddingScheme, HjError> {
    let comp = &h.components()[0];
    if !comp.sum_zero() {
        return Err(HjError::NotSumZero);
    }
    if depth == 0 {
        return Ok(EmbeddingScheme { hypergraph: h.clone(), levels: Vec::new() });
    }
    let g = comp.maps();
    let base = 'search: {
        for radius in 1..=4 {
            let window = point_window(h, radius);
            for x0 in &window {
                for x1 in &window {
                    let rhs = g[0].apply(x0).add(&g[1].apply(x1)).neg();
                    let x2 = g[2].solve(&rhs).expect("slim maps are invertible");
                    let triple = [x0.clone(), x1.clone(), x2];
                    if triple.iter().all(|p| !p.is_zero())
                        && triple[0] != triple[1]
                        && triple[0] != triple[2]
                        && triple[1] != triple[2]
                    {
                        break 'search Some(triple);
                    }
                }
            }
        }
        None
    }
    .ok_or(HjError::NoBaseSolution)?;

    let quarter = BigRational::new(1.into(), 4.into());
    let mut levels: Vec<[GroupPoint; 3]> = vec![base.clone()];
    let mut scale = BigRational::one();
    let mut factor = BigRational::one();
    for _m in 1..depth {
        factor *= &quarter;
        let earlier: Vec<GroupPoint> = levels.iter().flatten().cloned().collect();
        let min_sq = min_squared_distance(&earlier).expect("base points are distinct");
        let cap = &factor * &min_sq;
        let mut shrink = BigRational::new(1.into(), 2.into());
        loop {
            let candidate = &scale * &shrink;
            let triple = [
                base[0].scale_rational(&candidate),
                base[1].scale_rational(&candidate),
                base[2].scale_rational(&candidate),
            ];
            if triple.iter().all(|p| p.norm_sq() < cap) {
                levels.push(triple);
                scale = candidate;
                break;
            }
            shrink = &shrink * &BigRational::new(1.into(), 2.into());
        }
    }
    let scheme = EmbeddingScheme { hypergraph: h.clone(), levels };
    debug_assert_eq!(scheme.validate(), Ok(()));
    Ok(scheme)
}

/// The embedding: a word maps to the sum over positions `m` of the level-`m`
/// point indexed by its letter.
pub fn pi(scheme: &EmbeddingScheme, word: &HJWord) -> Result<GroupPoint, HjError> {
    if word.len() > scheme.depth() {
        return Err(HjError::WordTooLong { got: word.len(), depth: scheme.depth() });
    }
    let field = scheme.hypergraph.field();
    let mut acc = GroupPoint::zero(field, scheme.hypergraph.dim());
    for (m, &letter) in word.letters().iter().enumerate() {
        if letter as usize >= 3 {
            return Err(HjError::LetterOutOfRange { letter, alphabet: 3 });
        }
        acc = acc.add(&scheme.levels[m][letter as usize]);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u128 = 1 << 24;

    fn w(s: &str) -> HJWord {
        HJWord::new(s.bytes().map(|b| b - b'0').collect())
    }

    #[test]
    fn single_position_has_one_line() {
        let ls = lines(1, 2, BUDGET).unwrap();
        assert_eq!(ls.len(), 1);
        assert_eq!(ls[0].points(2), vec![w("0"), w("1")]);
    }

    #[test]
    fn two_positions_two_letters_have_five_lines() {
        let ls = lines(2, 2, BUDGET).unwrap();
        assert_eq!(ls.len(), 5);
    }

    #[test]
    fn line_count_matches_formula_and_brute_enumeration() {
        for n in 2..=3usize {
            for len in 1..=4usize {
                let ls = lines(len, n, BUDGET).unwrap();
                let formula = (n as u64 + 1).pow(len as u32) - (n as u64).pow(len as u32);
                assert_eq!(ls.len() as u64, formula, "len={len} n={n}");
                // no duplicates: point sets are pairwise distinct
                let mut keys: Vec<Vec<HJWord>> = ls
                    .iter()
                    .map(|l| {
                        let mut pts = l.points(n);
                        pts.sort();
                        pts
                    })
                    .collect();
                keys.sort();
                keys.dedup();
                assert_eq!(keys.len(), ls.len());
            }
        }
    }

    #[test]
    fn brute_subset_scan_matches_lines_for_tiny_spaces() {
        // every n-subset of n^len forming a line is enumerated, and nothing else
        for (len, n) in [(2usize, 2usize), (1, 3), (2, 3)] {
            let words = all_words(len, n);
            let mut from_scan = Vec::new();
            let idx: Vec<usize> = (0..words.len()).collect();
            let mut choose = vec![0usize; n];
            fn rec(
                idx: &[usize],
                n: usize,
                start: usize,
                depth: usize,
                choose: &mut Vec<usize>,
                words: &[HJWord],
                out: &mut Vec<Vec<HJWord>>,
            ) {
                if depth == n {
                    let pts: Vec<HJWord> = choose.iter().map(|&i| words[i].clone()).collect();
                    if line_through(&pts, n).is_some() {
                        let mut sorted = pts;
                        sorted.sort();
                        out.push(sorted);
                    }
                    return;
                }
                for v in start..idx.len() {
                    choose[depth] = v;
                    rec(idx, n, v + 1, depth + 1, choose, words, out);
                }
            }
            rec(&idx, n, 0, 0, &mut choose, &words, &mut from_scan);
            from_scan.sort();
            let mut from_lines: Vec<Vec<HJWord>> = lines(len, n, BUDGET)
                .unwrap()
                .into_iter()
                .map(|l| {
                    let mut pts = l.points(n);
                    pts.sort();
                    pts
                })
                .collect();
            from_lines.sort();
            assert_eq!(from_scan, from_lines, "len={len} n={n}");
        }
    }

    #[test]
    fn phi_of_a_singleton_is_one() {
        assert_eq!(phi(&[w("00")], 2, 2, BUDGET).unwrap(), 1);
    }

    #[test]
    fn phi_of_the_full_two_square_is_three() {
        let words = all_words(2, 2);
        assert_eq!(phi(&words, 2, 2, BUDGET).unwrap(), 3);
    }

    #[test]
    fn phi_of_one_line_is_two() {
        assert_eq!(phi(&[w("00"), w("11")], 2, 2, BUDGET).unwrap(), 2);
    }

    #[test]
    fn phi_rejects_the_empty_set() {
        assert_eq!(phi(&[], 2, 2, BUDGET), Err(HjError::EmptySet));
    }

    #[test]
    fn threshold_for_two_letters_two_colors_is_two() {
        assert_eq!(hj_threshold(2, 2, 3, BUDGET).unwrap(), Some(2));
    }

    #[test]
    fn threshold_with_one_color_is_one() {
        assert_eq!(hj_threshold(2, 1, 2, BUDGET).unwrap(), Some(1));
    }

    #[test]
    fn three_letters_two_colors_need_length_beyond_one() {
        assert_eq!(hj_threshold(3, 2, 1, BUDGET).unwrap(), None);
    }

    #[test]
    fn delta_hyperedges_on_a_full_line_and_a_punctured_sample() {
        let sample = vec![w("00"), w("11")];
        let edges = delta_hyperedges(2, 2, &sample, BUDGET).unwrap();
        assert_eq!(edges, vec![vec![w("00"), w("11")]]);

        // remove one point of every line of 2^2
        let punctured = vec![w("01"), w("10")];
        assert!(delta_hyperedges(2, 2, &punctured, BUDGET).unwrap().is_empty());
    }

    #[test]
    fn quoted_equilateral_base_triple_satisfies_the_equation() {
        let h = LinearHypergraph::preset_equilateral(1);
        let k = h.field().clone();
        let wgen = k.generator().unwrap();
        let triple = [
            GroupPoint::new(vec![k.one()]),
            GroupPoint::new(vec![k.integer(2)]),
            GroupPoint::new(vec![&k.one() + &wgen]),
        ];
        let g = h.components()[0].maps();
        assert!(g[0]
            .apply(&triple[0])
            .add(&g[1].apply(&triple[1]))
            .add(&g[2].apply(&triple[2]))
            .is_zero());
    }

    #[test]
    fn embedding_scheme_validates_at_depth_five() {
        let h = LinearHypergraph::preset_equilateral(1);
        let scheme = build_embedding(&h, 5).unwrap();
        assert_eq!(scheme.depth(), 5);
        assert_eq!(scheme.validate(), Ok(()));
    }

    #[test]
    fn empty_scheme_is_trivially_valid() {
        let h = LinearHypergraph::preset_equilateral(1);
        let scheme = build_embedding(&h, 0).unwrap();
        assert_eq!(scheme.depth(), 0);
        assert_eq!(scheme.validate(), Ok(()));
    }

    #[test]
    fn progression_preset_is_translation_invariant_and_embeddable() {
        let h = LinearHypergraph::preset_ap(1);
        let scheme = build_embedding(&h, 3).unwrap();
        assert_eq!(scheme.validate(), Ok(()));
    }

    #[test]
    fn pi_unfolds_constant_words() {
        let h = LinearHypergraph::preset_equilateral(1);
        let scheme = build_embedding(&h, 2).unwrap();
        let img = pi(&scheme, &w("00")).unwrap();
        let expected = scheme.levels()[0][0].add(&scheme.levels()[1][0]);
        assert_eq!(img, expected);
    }

    #[test]
    fn pi_maps_lines_to_verified_hyperedges() {
        let h = LinearHypergraph::preset_equilateral(1);
        let scheme = build_embedding(&h, 2).unwrap();
        // the diagonal line {00, 11, 22}
        let images: Vec<GroupPoint> = [w("00"), w("11"), w("22")]
            .iter()
            .map(|word| pi(&scheme, word).unwrap())
            .collect();
        assert_ne!(images[0], images[1]);
        assert_ne!(images[0], images[2]);
        assert_ne!(images[1], images[2]);
        let triple = [images[0].clone(), images[1].clone(), images[2].clone()];
        assert!(scheme.hypergraph().is_hyperedge(&triple));
    }

    #[test]
    fn pi_rejects_long_words_and_big_letters() {
        let h = LinearHypergraph::preset_equilateral(1);
        let scheme = build_embedding(&h, 1).unwrap();
        assert!(matches!(
            pi(&scheme, &w("00")),
            Err(HjError::WordTooLong { .. })
        ));
        assert!(matches!(
            pi(&scheme, &HJWord::new(vec![7])),
            Err(HjError::LetterOutOfRange { .. })
        ));
    }
}
