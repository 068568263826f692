//! Self-contained certificates: every claim a run emits can be parsed back
//! and re-verified from scratch, with the hypergraph declaration inlined.
//!
//! A certificate is a versioned line-oriented file. Verification never
//! trusts the stored data: it recomputes the claimed object and compares,
//! or re-derives the claimed witness exactly.

use std::collections::BTreeMap;

use crate::coloring::{
    amalgamate_checked, CoherentSequence, CoherentStage, TotalSampleColoring,
};
use crate::error::FormatError;
use crate::field::NumberField;
use crate::format::{
    closed_subspace_from_basis, emit_basis, emit_color, emit_grid, emit_hypergraph_body,
    numbered_lines, parse_basis_line, parse_coloring_record, parse_grid,
    parse_hypergraph_body, parse_point,
};
use crate::grid::{
    find_mono_corner, find_mono_rectangle, CornerWitness, GridColoring, RectangleWitness,
};
use crate::hj::{build_embedding, hj_threshold, phi, EmbeddingScheme, HJWord};
use crate::hypergraph::{gamma_closure, verify_slim, LinearHypergraph};
use crate::linear::{Basis, GroupPoint};
use crate::poset::{leq, merge, Condition, MergeScene};
use crate::ramsey::{check_ramsey_centered, CenteredOutcome, Universe};
use crate::remainder::{quotient, remainder_graph, RemainderEdge};

pub const CERT_MAGIC: &str = "lincolor-cert-v1";

/// Every certificate kind the toolchain emits.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Certificate {
    Slim {
        hypergraph: LinearHypergraph,
        verdicts: Vec<([bool; 6], bool)>,
    },
    Closure {
        hypergraph: LinearHypergraph,
        seed: Vec<GroupPoint>,
        basis: Basis,
    },
    Remainder {
        hypergraph: LinearHypergraph,
        subspace: Basis,
        sample: Vec<GroupPoint>,
        edges: Vec<RemainderEdge>,
    },
    Quotient {
        hypergraph: LinearHypergraph,
        subspace: Basis,
        sample: Vec<GroupPoint>,
        classes: Vec<Vec<GroupPoint>>,
        edges: Vec<(usize, usize)>,
    },
    Coloring {
        hypergraph: LinearHypergraph,
        stages: Vec<(Basis, TotalSampleColoring, Option<TotalSampleColoring>)>,
        result: TotalSampleColoring,
        cases: [usize; 3],
    },
    Merge {
        hypergraph: LinearHypergraph,
        p0: (Basis, TotalSampleColoring),
        p1: (Basis, TotalSampleColoring),
        background: TotalSampleColoring,
        extra: Vec<GroupPoint>,
        merged: (Basis, TotalSampleColoring),
        tiers: Vec<(GroupPoint, u32)>,
    },
    Ramsey {
        hypergraph: LinearHypergraph,
        points: Vec<GroupPoint>,
        k: usize,
        l: u32,
        n: usize,
        m: usize,
        budget: u128,
        outcome: CenteredOutcome,
    },
    HjThreshold {
        n: usize,
        colors: u32,
        max_len: usize,
        budget: u128,
        result: Option<usize>,
    },
    HjPhi {
        len: usize,
        n: usize,
        budget: u128,
        words: Vec<HJWord>,
        value: usize,
    },
    HjEmbed {
        hypergraph: LinearHypergraph,
        levels: Vec<[GroupPoint; 3]>,
    },
    GridRectangle {
        grid: GridColoring,
        witness: Option<RectangleWitness>,
    },
    GridCorner {
        grid: GridColoring,
        witness: Option<CornerWitness>,
    },
}

fn points_line(keyword: &str, pts: &[GroupPoint]) -> String {
    if pts.is_empty() {
        keyword.to_string()
    } else {
        let parts: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        format!("{keyword} {}", parts.join(" ; "))
    }
}

fn parse_points(
    rest: &str,
    field: &NumberField,
    dim: usize,
    line: usize,
) -> Result<Vec<GroupPoint>, FormatError> {
    let rest = rest.trim();
    if rest.is_empty() {
        return Ok(Vec::new());
    }
    rest.split(';')
        .map(|p| parse_point(p, field, dim, line))
        .collect()
}

fn push_coloring(lines: &mut Vec<String>, keyword: &str, c: &TotalSampleColoring) {
    for (p, color) in c {
        lines.push(format!("{keyword} {p} -> {}", emit_color(color)));
    }
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Slim { .. } => "slim",
            Certificate::Closure { .. } => "closure",
            Certificate::Remainder { .. } => "remainder",
            Certificate::Quotient { .. } => "quotient",
            Certificate::Coloring { .. } => "coloring",
            Certificate::Merge { .. } => "merge",
            Certificate::Ramsey { .. } => "ramsey",
            Certificate::HjThreshold { .. } => "hj-threshold",
            Certificate::HjPhi { .. } => "hj-phi",
            Certificate::HjEmbed { .. } => "hj-embed",
            Certificate::GridRectangle { .. } => "grid-rectangle",
            Certificate::GridCorner { .. } => "grid-corner",
        }
    }

    pub fn emit(&self) -> String {
        let mut lines = vec![CERT_MAGIC.to_string(), format!("kind {}", self.kind())];
        match self {
            Certificate::Slim { hypergraph, verdicts } => {
                embed_hypergraph(&mut lines, hypergraph);
                for (i, (inj, sum_zero)) in verdicts.iter().enumerate() {
                    let flags: Vec<String> = inj.iter().map(|b| b.to_string()).collect();
                    lines.push(format!("verdict {i} {} {sum_zero}", flags.join(" ")));
                }
            }
            Certificate::Closure { hypergraph, seed, basis } => {
                embed_hypergraph(&mut lines, hypergraph);
                lines.push(points_line("seed", seed));
                lines.push(emit_basis(basis));
            }
            Certificate::Remainder { hypergraph, subspace, sample, edges } => {
                embed_hypergraph(&mut lines, hypergraph);
                lines.push(emit_basis(subspace));
                lines.push(points_line("sample", sample));
                for e in edges {
                    lines.push(format!(
                        "edge {} {} {} {} {} {} {}",
                        e.x, e.y, e.witness, e.component, e.roles.0, e.roles.1, e.roles.2
                    ));
                }
            }
            Certificate::Quotient { hypergraph, subspace, sample, classes, edges } => {
                embed_hypergraph(&mut lines, hypergraph);
                lines.push(emit_basis(subspace));
                lines.push(points_line("sample", sample));
                for class in classes {
                    lines.push(points_line("class", class));
                }
                for (a, b) in edges {
                    lines.push(format!("qedge {a} {b}"));
                }
            }
            Certificate::Coloring { hypergraph, stages, result, cases } => {
                embed_hypergraph(&mut lines, hypergraph);
                for (basis, stage, remainder) in stages {
                    lines.push("stage".to_string());
                    lines.push(emit_basis(basis));
                    push_coloring(&mut lines, "stagecolor", stage);
                    if let Some(d) = remainder {
                        push_coloring(&mut lines, "remcolor", d);
                    }
                }
                push_coloring(&mut lines, "result", result);
                lines.push(format!("cases {} {} {}", cases[0], cases[1], cases[2]));
            }
            Certificate::Merge { hypergraph, p0, p1, background, extra, merged, tiers } => {
                embed_hypergraph(&mut lines, hypergraph);
                for (label, (basis, coloring)) in
                    [("p0", p0), ("p1", p1), ("merged", merged)]
                {
                    lines.push(format!("condition {label}"));
                    lines.push(emit_basis(basis));
                    push_coloring(&mut lines, "point", coloring);
                    lines.push("end".to_string());
                }
                push_coloring(&mut lines, "background", background);
                lines.push(points_line("extra", extra));
                for (p, n) in tiers {
                    lines.push(format!("tier {p} {n}"));
                }
            }
            Certificate::Ramsey { hypergraph, points, k, l, n, m, budget, outcome } => {
                embed_hypergraph(&mut lines, hypergraph);
                lines.push(points_line("points", points));
                lines.push(format!("params {k} {l} {n} {m} {budget}"));
                match outcome {
                    CenteredOutcome::Centered { witnesses } => {
                        lines.push("outcome centered".to_string());
                        for (tuple, b) in witnesses {
                            let t: Vec<String> = tuple.iter().map(|i| i.to_string()).collect();
                            let s: Vec<String> = b.iter().map(|i| i.to_string()).collect();
                            lines.push(format!("witness {} | {}", t.join(" "), s.join(" ")));
                        }
                    }
                    CenteredOutcome::Violated { tuple } => {
                        lines.push("outcome violated".to_string());
                        let t: Vec<String> = tuple.iter().map(|i| i.to_string()).collect();
                        lines.push(format!("tuple {}", t.join(" ")));
                    }
                }
            }
            Certificate::HjThreshold { n, colors, max_len, budget, result } => {
                lines.push(format!("params {n} {colors} {max_len} {budget}"));
                match result {
                    Some(v) => lines.push(format!("result {v}")),
                    None => lines.push("result none".to_string()),
                }
            }
            Certificate::HjPhi { len, n, budget, words, value } => {
                lines.push(format!("params {len} {n} {budget}"));
                let ws: Vec<String> = words.iter().map(|w| w.to_string()).collect();
                lines.push(format!("words {}", ws.join(" ")));
                lines.push(format!("value {value}"));
            }
            Certificate::HjEmbed { hypergraph, levels } => {
                embed_hypergraph(&mut lines, hypergraph);
                for triple in levels {
                    lines.push(points_line("level", triple.as_slice()));
                }
            }
            Certificate::GridRectangle { grid, witness } => {
                embed_grid(&mut lines, grid);
                match witness {
                    Some(w) => lines.push(format!(
                        "witness {} {} {} {} {}",
                        w.rows.0, w.rows.1, w.cols.0, w.cols.1, w.color
                    )),
                    None => lines.push("witness absent".to_string()),
                }
            }
            Certificate::GridCorner { grid, witness } => {
                embed_grid(&mut lines, grid);
                match witness {
                    Some(w) => lines.push(format!(
                        "witness {} {} {} {} {} {} {}",
                        w.pivot.0, w.pivot.1, w.row_mate.0, w.row_mate.1, w.col_mate.0,
                        w.col_mate.1, w.color
                    )),
                    None => lines.push("witness absent".to_string()),
                }
            }
        }
        lines.join("\n") + "\n"
    }

    /// Re-derives the certified claim from scratch and compares.
    pub fn verify(&self) -> Result<(), FormatError> {
        let fail = |msg: &str| Err(FormatError::CertificateInvalid(msg.to_string()));
        match self {
            Certificate::Slim { hypergraph, verdicts } => {
                if verdicts.len() != hypergraph.components().len() {
                    return fail("verdict count differs from component count");
                }
                for (comp, (inj, sum_zero)) in
                    hypergraph.components().iter().zip(verdicts)
                {
                    let report = verify_slim(comp);
                    if report.injective != *inj || report.sum_zero != *sum_zero {
                        return fail("slim verdicts do not recompute");
                    }
                }
                Ok(())
            }
            Certificate::Closure { hypergraph, seed, basis } => {
                let recomputed = gamma_closure(hypergraph, seed);
                if recomputed.basis() != basis {
                    return fail("closure basis does not recompute");
                }
                Ok(())
            }
            Certificate::Remainder { hypergraph, subspace, sample, edges } => {
                let a = closed_subspace_from_basis(hypergraph, subspace.clone(), 0)?;
                let g = remainder_graph(hypergraph, &a, sample)
                    .map_err(|e| FormatError::CertificateInvalid(e.to_string()))?;
                if g.edges() != edges.as_slice() {
                    return fail("remainder edges do not recompute");
                }
                if !g.verify(hypergraph) {
                    return fail("remainder witnesses fail re-verification");
                }
                Ok(())
            }
            Certificate::Quotient { hypergraph, subspace, sample, classes, edges } => {
                let a = closed_subspace_from_basis(hypergraph, subspace.clone(), 0)?;
                let (theta, _) = quotient(hypergraph, &a, sample)
                    .map_err(|e| FormatError::CertificateInvalid(e.to_string()))?;
                if theta.classes() != classes.as_slice() {
                    return fail("quotient classes do not recompute");
                }
                let recomputed: Vec<(usize, usize)> =
                    theta.edges().iter().map(|e| (e.a, e.b)).collect();
                if recomputed != *edges {
                    return fail("quotient edges do not recompute");
                }
                if !crate::remainder::check_local_finiteness(&theta, hypergraph).is_empty() {
                    return fail("local finiteness violated");
                }
                Ok(())
            }
            Certificate::Coloring { hypergraph, stages, result, cases } => {
                let mut seq_stages = Vec::new();
                for (basis, stage, remainder) in stages {
                    let subspace =
                        closed_subspace_from_basis(hypergraph, basis.clone(), 0)?;
                    seq_stages.push(CoherentStage {
                        subspace,
                        stage_coloring: stage.clone(),
                        remainder_coloring: remainder.clone(),
                    });
                }
                let seq = CoherentSequence { stages: seq_stages };
                let report = amalgamate_checked(hypergraph, &seq)
                    .map_err(|e| FormatError::CertificateInvalid(e.to_string()))?;
                if report.violation.is_some() {
                    return fail("amalgamation has a monochromatic hyperedge");
                }
                if report.coloring != *result {
                    return fail("amalgamation does not recompute");
                }
                if report.cases != *cases {
                    return fail("case census does not recompute");
                }
                if report.cases[0] != 0 {
                    return fail("a hyperedge has a single top-stage point");
                }
                Ok(())
            }
            Certificate::Merge { hypergraph, p0, p1, background, extra, merged, tiers } => {
                let build = |(basis, coloring): &(Basis, TotalSampleColoring)| {
                    let domain = closed_subspace_from_basis(hypergraph, basis.clone(), 0)?;
                    Condition::new(hypergraph, domain, coloring.clone())
                        .map_err(|e| FormatError::CertificateInvalid(e.to_string()))
                };
                let c0 = build(p0)?;
                let c1 = build(p1)?;
                let core_basis = c0.domain().basis().intersect(c1.domain().basis());
                let core = closed_subspace_from_basis(hypergraph, core_basis, 0)?;
                let scene = MergeScene::new(core, c0.clone(), c1.clone(), background.clone())
                    .map_err(|e| FormatError::CertificateInvalid(e.to_string()))?;
                let out = merge(hypergraph, &scene, extra)
                    .map_err(|e| FormatError::CertificateInvalid(e.to_string()))?;
                if out.condition.domain().basis() != &merged.0
                    || out.condition.coloring() != &merged.1
                {
                    return fail("merged condition does not recompute");
                }
                if out.new_tiers != *tiers {
                    return fail("new-point tiers do not recompute");
                }
                if !leq(&out.condition, &c0).holds || !leq(&out.condition, &c1).holds {
                    return fail("merged condition is not below both inputs");
                }
                Ok(())
            }
            Certificate::Ramsey { hypergraph, points, k, l, n, m, budget, outcome } => {
                let universe = Universe::from_hypergraph(hypergraph, points);
                let recomputed = check_ramsey_centered(&universe, *k, *l, *n, *m, *budget)
                    .map_err(|e| FormatError::CertificateInvalid(e.to_string()))?;
                let matches = match (outcome, &recomputed) {
                    (
                        CenteredOutcome::Centered { witnesses },
                        CenteredOutcome::Centered { witnesses: w2 },
                    ) => witnesses == w2,
                    (
                        CenteredOutcome::Violated { tuple },
                        CenteredOutcome::Violated { tuple: t2 },
                    ) => tuple == t2,
                    _ => false,
                };
                if !matches {
                    return fail("centered outcome does not recompute");
                }
                Ok(())
            }
            Certificate::HjThreshold { n, colors, max_len, budget, result } => {
                let recomputed = hj_threshold(*n, *colors, *max_len, *budget)
                    .map_err(|e| FormatError::CertificateInvalid(e.to_string()))?;
                if recomputed != *result {
                    return fail("threshold does not recompute");
                }
                Ok(())
            }
            Certificate::HjPhi { len, n, budget, words, value } => {
                let recomputed = phi(words, *len, *n, *budget)
                    .map_err(|e| FormatError::CertificateInvalid(e.to_string()))?;
                if recomputed != *value {
                    return fail("cover number does not recompute");
                }
                Ok(())
            }
            Certificate::HjEmbed { hypergraph, levels } => {
                let scheme = build_embedding(hypergraph, levels.len())
                    .map_err(|e| FormatError::CertificateInvalid(e.to_string()))?;
                if scheme.levels() != levels.as_slice() {
                    return fail("embedding scheme does not recompute");
                }
                scheme
                    .validate()
                    .map_err(FormatError::CertificateInvalid)
            }
            Certificate::GridRectangle { grid, witness } => {
                match witness {
                    Some(w) => {
                        if !w.verify(grid) {
                            return fail("rectangle witness fails cell check");
                        }
                    }
                    None => {
                        if find_mono_rectangle(grid).is_some() {
                            return fail("a rectangle exists but the certificate claims none");
                        }
                    }
                }
                Ok(())
            }
            Certificate::GridCorner { grid, witness } => {
                match witness {
                    Some(w) => {
                        if !w.verify(grid) {
                            return fail("corner witness fails cell check");
                        }
                    }
                    None => {
                        if find_mono_corner(grid).is_some() {
                            return fail("a corner exists but the certificate claims none");
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn from_embedding(scheme: &EmbeddingScheme) -> Self {
        Certificate::HjEmbed {
            hypergraph: scheme.hypergraph().clone(),
            levels: scheme.levels().to_vec(),
        }
    }

    /// Parses any certificate kind back from its textual form.
    pub fn parse(text: &str) -> Result<Certificate, FormatError> {
        let lines = numbered_lines(text);
        let mut cursor = Cursor { lines: &lines, at: 0 };
        cursor.expect_exact(CERT_MAGIC)?;
        let kind_line = cursor.next_line()?;
        let kind = kind_line
            .1
            .strip_prefix("kind ")
            .ok_or_else(|| FormatError::parse(kind_line.0, "expected `kind ...`"))?
            .trim()
            .to_string();
        match kind.as_str() {
            "slim" => parse_slim(&mut cursor),
            "closure" => parse_closure(&mut cursor),
            "remainder" => parse_remainder(&mut cursor),
            "quotient" => parse_quotient(&mut cursor),
            "coloring" => parse_coloring_cert(&mut cursor),
            "merge" => parse_merge(&mut cursor),
            "ramsey" => parse_ramsey(&mut cursor),
            "hj-threshold" => parse_hj_threshold(&mut cursor),
            "hj-phi" => parse_hj_phi(&mut cursor),
            "hj-embed" => parse_hj_embed(&mut cursor),
            "grid-rectangle" => parse_grid_rect(&mut cursor),
            "grid-corner" => parse_grid_corner(&mut cursor),
            other => Err(FormatError::parse(
                kind_line.0,
                format!("unknown certificate kind `{other}`"),
            )),
        }
    }
}

fn embed_hypergraph(lines: &mut Vec<String>, h: &LinearHypergraph) {
    lines.push("begin hypergraph".to_string());
    lines.extend(emit_hypergraph_body(h));
    lines.push("end hypergraph".to_string());
}

fn embed_grid(lines: &mut Vec<String>, g: &GridColoring) {
    lines.push("begin grid".to_string());
    for row in emit_grid(g).lines() {
        lines.push(row.to_string());
    }
    lines.push("end grid".to_string());
}

struct Cursor<'a> {
    lines: &'a [(usize, &'a str)],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn next_line(&mut self) -> Result<(usize, &'a str), FormatError> {
        let Some(&(n, s)) = self.lines.get(self.at) else {
            return Err(FormatError::parse(0, "unexpected end of certificate"));
        };
        self.at += 1;
        Ok((n, s))
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.at).copied()
    }

    fn expect_exact(&mut self, what: &str) -> Result<(), FormatError> {
        let (n, s) = self.next_line()?;
        if s != what {
            return Err(FormatError::parse(n, format!("expected `{what}`")));
        }
        Ok(())
    }

    fn take_block(&mut self, name: &str) -> Result<Vec<(usize, &'a str)>, FormatError> {
        self.expect_exact(&format!("begin {name}"))?;
        let mut block = Vec::new();
        loop {
            let (n, s) = self.next_line()?;
            if s == format!("end {name}") {
                return Ok(block);
            }
            block.push((n, s));
        }
    }

    fn take_prefixed(&mut self, prefix: &str) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        while let Some((n, s)) = self.peek() {
            match s.strip_prefix(prefix) {
                Some(rest) if s.starts_with(prefix) => {
                    out.push((n, rest));
                    self.at += 1;
                }
                _ => break,
            }
        }
        out
    }
}

fn take_hypergraph(cursor: &mut Cursor) -> Result<LinearHypergraph, FormatError> {
    let block = cursor.take_block("hypergraph")?;
    parse_hypergraph_body(&block)
}

fn take_coloring(
    cursor: &mut Cursor,
    keyword: &str,
    field: &NumberField,
    dim: usize,
) -> Result<TotalSampleColoring, FormatError> {
    let mut out = BTreeMap::new();
    for (n, rest) in cursor.take_prefixed(&format!("{keyword} ")) {
        let (p, c) = parse_coloring_record(rest, field, dim, n)?;
        out.insert(p, c);
    }
    Ok(out)
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| FormatError::parse(line, format!("bad number `{tok}`")))
}

fn parse_slim(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let hypergraph = take_hypergraph(cursor)?;
    let mut verdicts = Vec::new();
    for (n, rest) in cursor.take_prefixed("verdict ") {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != 8 {
            return Err(FormatError::parse(n, "verdict needs 8 fields"));
        }
        let mut inj = [false; 6];
        for (i, flag) in inj.iter_mut().enumerate() {
            *flag = toks[i + 1] == "true";
        }
        verdicts.push((inj, toks[7] == "true"));
    }
    Ok(Certificate::Slim { hypergraph, verdicts })
}

fn parse_closure(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let hypergraph = take_hypergraph(cursor)?;
    let field = hypergraph.field().clone();
    let dim = hypergraph.dim();
    let (n, s) = cursor.next_line()?;
    let seed = s
        .strip_prefix("seed")
        .map(|rest| parse_points(rest, &field, dim, n))
        .transpose()?
        .ok_or_else(|| FormatError::parse(n, "expected `seed ...`"))?;
    let (n, s) = cursor.next_line()?;
    let basis = s
        .strip_prefix("basis")
        .map(|rest| parse_basis_line(rest, &field, dim, n))
        .transpose()?
        .ok_or_else(|| FormatError::parse(n, "expected `basis ...`"))?;
    Ok(Certificate::Closure { hypergraph, seed, basis })
}

fn take_basis_line(
    cursor: &mut Cursor,
    field: &NumberField,
    dim: usize,
) -> Result<Basis, FormatError> {
    let (n, s) = cursor.next_line()?;
    s.strip_prefix("basis")
        .map(|rest| parse_basis_line(rest, field, dim, n))
        .transpose()?
        .ok_or_else(|| FormatError::parse(n, "expected `basis ...`"))
}

fn take_points_line(
    cursor: &mut Cursor,
    keyword: &str,
    field: &NumberField,
    dim: usize,
) -> Result<Vec<GroupPoint>, FormatError> {
    let (n, s) = cursor.next_line()?;
    s.strip_prefix(keyword)
        .map(|rest| parse_points(rest, field, dim, n))
        .transpose()?
        .ok_or_else(|| FormatError::parse(n, format!("expected `{keyword} ...`")))
}

fn parse_remainder(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let hypergraph = take_hypergraph(cursor)?;
    let field = hypergraph.field().clone();
    let dim = hypergraph.dim();
    let subspace = take_basis_line(cursor, &field, dim)?;
    let sample = take_points_line(cursor, "sample", &field, dim)?;
    let mut edges = Vec::new();
    for (n, rest) in cursor.take_prefixed("edge ") {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        // x y [point] comp jx jy jz — the point itself contains no spaces
        // only after rejoining; points are bracketed so split on brackets
        let open = rest
            .find('[')
            .ok_or_else(|| FormatError::parse(n, "edge needs a witness point"))?;
        let close = rest
            .rfind(']')
            .ok_or_else(|| FormatError::parse(n, "edge needs a witness point"))?;
        let head: Vec<&str> = rest[..open].split_whitespace().collect();
        let tail: Vec<&str> = rest[close + 1..].split_whitespace().collect();
        if head.len() != 2 || tail.len() != 4 {
            return Err(FormatError::parse(n, format!("malformed edge `{}`", toks.join(" "))));
        }
        let witness = parse_point(&rest[open..=close], &field, dim, n)?;
        edges.push(RemainderEdge {
            x: parse_usize(head[0], n)?,
            y: parse_usize(head[1], n)?,
            witness,
            component: parse_usize(tail[0], n)?,
            roles: (
                parse_usize(tail[1], n)?,
                parse_usize(tail[2], n)?,
                parse_usize(tail[3], n)?,
            ),
        });
    }
    Ok(Certificate::Remainder { hypergraph, subspace, sample, edges })
}

fn parse_quotient(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let hypergraph = take_hypergraph(cursor)?;
    let field = hypergraph.field().clone();
    let dim = hypergraph.dim();
    let subspace = take_basis_line(cursor, &field, dim)?;
    let sample = take_points_line(cursor, "sample", &field, dim)?;
    let mut classes = Vec::new();
    for (n, rest) in cursor.take_prefixed("class") {
        classes.push(parse_points(rest, &field, dim, n)?);
    }
    let mut edges = Vec::new();
    for (n, rest) in cursor.take_prefixed("qedge ") {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(FormatError::parse(n, "qedge needs two classes"));
        }
        edges.push((parse_usize(toks[0], n)?, parse_usize(toks[1], n)?));
    }
    Ok(Certificate::Quotient { hypergraph, subspace, sample, classes, edges })
}

fn parse_coloring_cert(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let hypergraph = take_hypergraph(cursor)?;
    let field = hypergraph.field().clone();
    let dim = hypergraph.dim();
    let mut stages = Vec::new();
    while matches!(cursor.peek(), Some((_, "stage"))) {
        cursor.next_line()?;
        let basis = take_basis_line(cursor, &field, dim)?;
        let stage_coloring = take_coloring(cursor, "stagecolor", &field, dim)?;
        let remainder = take_coloring(cursor, "remcolor", &field, dim)?;
        let remainder = if stages.is_empty() { None } else { Some(remainder) };
        stages.push((basis, stage_coloring, remainder));
    }
    let result = take_coloring(cursor, "result", &field, dim)?;
    let (n, s) = cursor.next_line()?;
    let toks: Vec<&str> = s
        .strip_prefix("cases ")
        .ok_or_else(|| FormatError::parse(n, "expected `cases ...`"))?
        .split_whitespace()
        .collect();
    if toks.len() != 3 {
        return Err(FormatError::parse(n, "cases needs three counts"));
    }
    let cases = [
        parse_usize(toks[0], n)?,
        parse_usize(toks[1], n)?,
        parse_usize(toks[2], n)?,
    ];
    Ok(Certificate::Coloring { hypergraph, stages, result, cases })
}

fn parse_merge(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let hypergraph = take_hypergraph(cursor)?;
    let field = hypergraph.field().clone();
    let dim = hypergraph.dim();
    let mut take_condition = |label: &str| -> Result<(Basis, TotalSampleColoring), FormatError> {
        let (n, s) = cursor.next_line()?;
        if s != format!("condition {label}") {
            return Err(FormatError::parse(n, format!("expected `condition {label}`")));
        }
        let basis = take_basis_line(cursor, &field, dim)?;
        let coloring = take_coloring(cursor, "point", &field, dim)?;
        cursor.expect_exact("end")?;
        Ok((basis, coloring))
    };
    let p0 = take_condition("p0")?;
    let p1 = take_condition("p1")?;
    let merged = take_condition("merged")?;
    let background = take_coloring(cursor, "background", &field, dim)?;
    let extra = take_points_line(cursor, "extra", &field, dim)?;
    let mut tiers = Vec::new();
    for (n, rest) in cursor.take_prefixed("tier ") {
        let close = rest
            .rfind(']')
            .ok_or_else(|| FormatError::parse(n, "tier needs a point"))?;
        let p = parse_point(&rest[..=close], &field, dim, n)?;
        let t: u32 = rest[close + 1..]
            .trim()
            .parse()
            .map_err(|_| FormatError::parse(n, "bad tier"))?;
        tiers.push((p, t));
    }
    Ok(Certificate::Merge { hypergraph, p0, p1, background, extra, merged, tiers })
}

fn parse_ramsey(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let hypergraph = take_hypergraph(cursor)?;
    let field = hypergraph.field().clone();
    let dim = hypergraph.dim();
    let points = take_points_line(cursor, "points", &field, dim)?;
    let (n, s) = cursor.next_line()?;
    let toks: Vec<&str> = s
        .strip_prefix("params ")
        .ok_or_else(|| FormatError::parse(n, "expected `params ...`"))?
        .split_whitespace()
        .collect();
    if toks.len() != 5 {
        return Err(FormatError::parse(n, "params needs k l n m budget"));
    }
    let k = parse_usize(toks[0], n)?;
    let l: u32 = toks[1]
        .parse()
        .map_err(|_| FormatError::parse(n, "bad color count"))?;
    let nn = parse_usize(toks[2], n)?;
    let m = parse_usize(toks[3], n)?;
    let budget: u128 = toks[4]
        .parse()
        .map_err(|_| FormatError::parse(n, "bad budget"))?;
    let (on, os) = cursor.next_line()?;
    let outcome = match os {
        "outcome centered" => {
            let mut witnesses = Vec::new();
            for (wn, rest) in cursor.take_prefixed("witness ") {
                let (t, b) = rest
                    .split_once('|')
                    .ok_or_else(|| FormatError::parse(wn, "witness needs `tuple | subset`"))?;
                let tuple: Vec<usize> = t
                    .split_whitespace()
                    .map(|tok| parse_usize(tok, wn))
                    .collect::<Result<_, _>>()?;
                let subset: Vec<usize> = b
                    .split_whitespace()
                    .map(|tok| parse_usize(tok, wn))
                    .collect::<Result<_, _>>()?;
                witnesses.push((tuple, subset));
            }
            CenteredOutcome::Centered { witnesses }
        }
        "outcome violated" => {
            let (tn, ts) = cursor.next_line()?;
            let tuple: Vec<usize> = ts
                .strip_prefix("tuple ")
                .ok_or_else(|| FormatError::parse(tn, "expected `tuple ...`"))?
                .split_whitespace()
                .map(|tok| parse_usize(tok, tn))
                .collect::<Result<_, _>>()?;
            CenteredOutcome::Violated { tuple }
        }
        _ => return Err(FormatError::parse(on, "expected `outcome ...`")),
    };
    Ok(Certificate::Ramsey { hypergraph, points, k, l, n: nn, m, budget, outcome })
}

fn parse_hj_threshold(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let (n, s) = cursor.next_line()?;
    let toks: Vec<&str> = s
        .strip_prefix("params ")
        .ok_or_else(|| FormatError::parse(n, "expected `params ...`"))?
        .split_whitespace()
        .collect();
    if toks.len() != 4 {
        return Err(FormatError::parse(n, "params needs n colors max_len budget"));
    }
    let alphabet = parse_usize(toks[0], n)?;
    let colors: u32 = toks[1]
        .parse()
        .map_err(|_| FormatError::parse(n, "bad color count"))?;
    let max_len = parse_usize(toks[2], n)?;
    let budget: u128 = toks[3]
        .parse()
        .map_err(|_| FormatError::parse(n, "bad budget"))?;
    let (rn, rs) = cursor.next_line()?;
    let rest = rs
        .strip_prefix("result ")
        .ok_or_else(|| FormatError::parse(rn, "expected `result ...`"))?;
    let result = match rest.trim() {
        "none" => None,
        v => Some(parse_usize(v, rn)?),
    };
    Ok(Certificate::HjThreshold { n: alphabet, colors, max_len, budget, result })
}

fn parse_hj_phi(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let (n, s) = cursor.next_line()?;
    let toks: Vec<&str> = s
        .strip_prefix("params ")
        .ok_or_else(|| FormatError::parse(n, "expected `params ...`"))?
        .split_whitespace()
        .collect();
    if toks.len() != 3 {
        return Err(FormatError::parse(n, "params needs len n budget"));
    }
    let len = parse_usize(toks[0], n)?;
    let alphabet = parse_usize(toks[1], n)?;
    let budget: u128 = toks[2]
        .parse()
        .map_err(|_| FormatError::parse(n, "bad budget"))?;
    let (wn, ws) = cursor.next_line()?;
    let words: Vec<HJWord> = ws
        .strip_prefix("words ")
        .ok_or_else(|| FormatError::parse(wn, "expected `words ...`"))?
        .split_whitespace()
        .map(|tok| {
            tok.bytes()
                .map(|b| {
                    if b.is_ascii_digit() {
                        Ok(b - b'0')
                    } else {
                        Err(FormatError::parse(wn, format!("bad word `{tok}`")))
                    }
                })
                .collect::<Result<Vec<u8>, _>>()
                .map(HJWord::new)
        })
        .collect::<Result<_, _>>()?;
    let (vn, vs) = cursor.next_line()?;
    let value = vs
        .strip_prefix("value ")
        .map(|rest| parse_usize(rest.trim(), vn))
        .transpose()?
        .ok_or_else(|| FormatError::parse(vn, "expected `value ...`"))?;
    Ok(Certificate::HjPhi { len, n: alphabet, budget, words, value })
}

fn parse_hj_embed(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let hypergraph = take_hypergraph(cursor)?;
    let field = hypergraph.field().clone();
    let dim = hypergraph.dim();
    let mut levels = Vec::new();
    for (n, rest) in cursor.take_prefixed("level ") {
        let pts = parse_points(rest, &field, dim, n)?;
        if pts.len() != 3 {
            return Err(FormatError::parse(n, "level needs three points"));
        }
        levels.push([pts[0].clone(), pts[1].clone(), pts[2].clone()]);
    }
    Ok(Certificate::HjEmbed { hypergraph, levels })
}

fn take_grid(cursor: &mut Cursor) -> Result<GridColoring, FormatError> {
    let block = cursor.take_block("grid")?;
    let text: String = block
        .iter()
        .map(|(_, s)| format!("{s}\n"))
        .collect();
    parse_grid(&text)
}

fn parse_grid_rect(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let grid = take_grid(cursor)?;
    let (n, s) = cursor.next_line()?;
    let rest = s
        .strip_prefix("witness ")
        .ok_or_else(|| FormatError::parse(n, "expected `witness ...`"))?;
    let witness = if rest.trim() == "absent" {
        None
    } else {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(FormatError::parse(n, "rectangle witness needs 5 fields"));
        }
        Some(RectangleWitness {
            rows: (parse_usize(toks[0], n)?, parse_usize(toks[1], n)?),
            cols: (parse_usize(toks[2], n)?, parse_usize(toks[3], n)?),
            color: toks[4]
                .parse()
                .map_err(|_| FormatError::parse(n, "bad color"))?,
        })
    };
    Ok(Certificate::GridRectangle { grid, witness })
}

fn parse_grid_corner(cursor: &mut Cursor) -> Result<Certificate, FormatError> {
    let grid = take_grid(cursor)?;
    let (n, s) = cursor.next_line()?;
    let rest = s
        .strip_prefix("witness ")
        .ok_or_else(|| FormatError::parse(n, "expected `witness ...`"))?;
    let witness = if rest.trim() == "absent" {
        None
    } else {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != 7 {
            return Err(FormatError::parse(n, "corner witness needs 7 fields"));
        }
        Some(CornerWitness {
            pivot: (parse_usize(toks[0], n)?, parse_usize(toks[1], n)?),
            row_mate: (parse_usize(toks[2], n)?, parse_usize(toks[3], n)?),
            col_mate: (parse_usize(toks[4], n)?, parse_usize(toks[5], n)?),
            color: toks[6]
                .parse()
                .map_err(|_| FormatError::parse(n, "bad color"))?,
        })
    };
    Ok(Certificate::GridCorner { grid, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;

    fn qp(coords: &[i64]) -> GroupPoint {
        let q = NumberField::rational();
        GroupPoint::new(coords.iter().map(|&c| q.integer(c)).collect())
    }

    fn round_trip(cert: &Certificate) {
        let text = cert.emit();
        let parsed = Certificate::parse(&text).expect("parses back");
        assert_eq!(parsed.emit(), text, "canonical emission");
        parsed.verify().expect("verifies after round trip");
    }

    #[test]
    fn slim_certificate_round_trips() {
        let h = LinearHypergraph::preset_equilateral(1);
        let verdicts = h
            .components()
            .iter()
            .map(|c| {
                let r = verify_slim(c);
                (r.injective, r.sum_zero)
            })
            .collect();
        round_trip(&Certificate::Slim { hypergraph: h, verdicts });
    }

    #[test]
    fn closure_certificate_round_trips() {
        let h = LinearHypergraph::preset_ap(2);
        let seed = vec![qp(&[1, 2])];
        let basis = gamma_closure(&h, &seed).basis().clone();
        round_trip(&Certificate::Closure { hypergraph: h, seed, basis });
    }

    #[test]
    fn remainder_and_quotient_certificates_round_trip() {
        let h = LinearHypergraph::preset_ap(2);
        let a = gamma_closure(&h, &[qp(&[1, 0])]);
        let sample = vec![qp(&[0, 1]), qp(&[5, 1]), qp(&[2, -1])];
        let g = remainder_graph(&h, &a, &sample).unwrap();
        round_trip(&Certificate::Remainder {
            hypergraph: h.clone(),
            subspace: a.basis().clone(),
            sample: g.vertices().to_vec(),
            edges: g.edges().to_vec(),
        });
        let (theta, _) = quotient(&h, &a, &sample).unwrap();
        round_trip(&Certificate::Quotient {
            hypergraph: h,
            subspace: a.basis().clone(),
            sample,
            classes: theta.classes().to_vec(),
            edges: theta.edges().iter().map(|e| (e.a, e.b)).collect(),
        });
    }

    #[test]
    fn coloring_certificate_round_trips() {
        use rand::SeedableRng;
        let h = LinearHypergraph::preset_ap(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let seq = crate::instances::random_coherent_sequence(&h, &mut rng, 5);
        let report = amalgamate_checked(&h, &seq).unwrap();
        let stages = seq
            .stages
            .iter()
            .map(|s| {
                (
                    s.subspace.basis().clone(),
                    s.stage_coloring.clone(),
                    s.remainder_coloring.clone(),
                )
            })
            .collect();
        round_trip(&Certificate::Coloring {
            hypergraph: h,
            stages,
            result: report.coloring,
            cases: report.cases,
        });
    }

    #[test]
    fn merge_certificate_round_trips() {
        use rand::SeedableRng;
        let h = LinearHypergraph::preset_ap(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let (scene, extra) = crate::instances::random_merge_scene(&h, &mut rng, true);
        let out = merge(&h, &scene, &extra).unwrap();
        let (p0, p1) = scene.conditions();
        round_trip(&Certificate::Merge {
            hypergraph: h,
            p0: (p0.domain().basis().clone(), p0.coloring().clone()),
            p1: (p1.domain().basis().clone(), p1.coloring().clone()),
            background: scene.background().clone(),
            extra,
            merged: (
                out.condition.domain().basis().clone(),
                out.condition.coloring().clone(),
            ),
            tiers: out.new_tiers,
        });
    }

    #[test]
    fn ramsey_certificates_round_trip() {
        let h = LinearHypergraph::preset_ap(1);
        let q = NumberField::rational();
        let points: Vec<GroupPoint> =
            (0..2).map(|i| GroupPoint::new(vec![q.integer(i)])).collect();
        let universe = Universe::from_hypergraph(&h, &points);
        for m in [2usize, 5] {
            let outcome = check_ramsey_centered(&universe, 1, 2, 2, m, 1 << 20).unwrap();
            round_trip(&Certificate::Ramsey {
                hypergraph: h.clone(),
                points: points.clone(),
                k: 1,
                l: 2,
                n: 2,
                m,
                budget: 1 << 20,
                outcome,
            });
        }
    }

    #[test]
    fn hj_certificates_round_trip() {
        round_trip(&Certificate::HjThreshold {
            n: 2,
            colors: 2,
            max_len: 3,
            budget: 1 << 24,
            result: Some(2),
        });
        round_trip(&Certificate::HjPhi {
            len: 2,
            n: 2,
            budget: 1 << 24,
            words: crate::hj::all_words(2, 2),
            value: 3,
        });
        let h = LinearHypergraph::preset_equilateral(1);
        let scheme = build_embedding(&h, 3).unwrap();
        round_trip(&Certificate::from_embedding(&scheme));
    }

    #[test]
    fn grid_certificates_round_trip() {
        let g = GridColoring::from_rows(vec![vec![0, 0], vec![0, 0]]);
        round_trip(&Certificate::GridRectangle {
            grid: g.clone(),
            witness: find_mono_rectangle(&g),
        });
        round_trip(&Certificate::GridCorner { witness: find_mono_corner(&g), grid: g });
        let diag = GridColoring::from_rows(vec![vec![0, 1], vec![1, 0]]);
        round_trip(&Certificate::GridCorner { witness: None, grid: diag });
    }

    #[test]
    fn tampered_certificates_fail_verification() {
        let h = LinearHypergraph::preset_ap(2);
        let seed = vec![qp(&[1, 2])];
        let wrong = Basis::new(&NumberField::rational(), 2, &[qp(&[1, 0])]);
        let cert = Certificate::Closure { hypergraph: h.clone(), seed, basis: wrong };
        assert!(cert.verify().is_err());

        let g = GridColoring::from_rows(vec![vec![0, 1], vec![1, 0]]);
        let fake = Certificate::GridRectangle {
            grid: g,
            witness: Some(RectangleWitness { rows: (0, 1), cols: (0, 1), color: 0 }),
        };
        assert!(fake.verify().is_err());
    }
}
