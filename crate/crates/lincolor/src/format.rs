//! Line-oriented textual encodings: scalars, points, hypergraph spec
//! files, grid files, coloring records, and condition files.
//!
//! Scalars read and write as `p/q` or `p/q+r/s*w` with `/1` suppressed;
//! points as bracketed tuples. Hypergraph spec files are versioned with
//! the magic line `lincolor-v1`, then a field declaration, a dimension,
//! and one `component` block of three `matrix` lines per component
//! (matrix rows separated by `;`). Every emitter is deterministic, and
//! every parse error carries its line number.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coloring::{Color, TotalSampleColoring};
use crate::error::FormatError;
use crate::field::{NumberField, Scalar};
use crate::grid::GridColoring;
use crate::hypergraph::{
    gamma_closure, ClosedSubspace, LinearHypergraph, SlimComponent,
};
use crate::linear::{Basis, ExactMatrix, GroupPoint};
use crate::poset::Condition;
use std::collections::BTreeMap;

pub const SPEC_MAGIC: &str = "lincolor-v1";
pub const CONDITION_MAGIC: &str = "lincolor-cond-v1";

fn parse_big_rational(s: &str, line: usize) -> Result<BigRational, FormatError> {
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = numer
        .trim()
        .parse()
        .map_err(|_| FormatError::parse(line, format!("bad integer `{numer}`")))?;
    let d: BigInt = denom
        .trim()
        .parse()
        .map_err(|_| FormatError::parse(line, format!("bad integer `{denom}`")))?;
    if d.is_zero() {
        return Err(FormatError::parse(line, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

/// Parses `p/q`, `p/q+r/s*w`, and the abbreviations `w`, `-w`, `3*w`.
pub fn parse_scalar(s: &str, field: &NumberField, line: usize) -> Result<Scalar, FormatError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(FormatError::parse(line, "empty scalar"));
    }
    // split into signed terms at '+'/'-' not in leading position
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = s.starts_with('-');
    for (i, ch) in s.char_indices() {
        match ch {
            '-' | '+' if i > 0 => {
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            }
            '-' if i == 0 => {}
            _ => current.push(ch),
        }
    }
    terms.push((negative, current));
    if terms.len() > 2 {
        return Err(FormatError::parse(line, format!("too many terms in `{s}`")));
    }
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    let mut seen_rational = false;
    let mut seen_generator = false;
    for (neg, term) in terms {
        let term = term.trim().to_string();
        let value_of = |body: &str| -> Result<BigRational, FormatError> {
            if body.is_empty() {
                Ok(BigRational::one())
            } else {
                parse_big_rational(body, line)
            }
        };
        if let Some(body) = term.strip_suffix('w') {
            if seen_generator {
                return Err(FormatError::parse(line, "repeated generator term"));
            }
            seen_generator = true;
            if field.is_rational() {
                return Err(FormatError::parse(line, "generator term over the rationals"));
            }
            let body = body.strip_suffix('*').unwrap_or(body);
            let mut v = value_of(body)?;
            if neg {
                v = -v;
            }
            b = v;
        } else {
            if seen_rational {
                return Err(FormatError::parse(line, "repeated rational term"));
            }
            seen_rational = true;
            let mut v = parse_big_rational(&term, line)?;
            if neg {
                v = -v;
            }
            a = v;
        }
    }
    Ok(Scalar::new(a, b, field.clone()))
}

/// Parses a bracketed point tuple like `[1/2, -3+w]`.
pub fn parse_point(
    s: &str,
    field: &NumberField,
    dim: usize,
    line: usize,
) -> Result<GroupPoint, FormatError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| FormatError::parse(line, format!("point `{s}` is not bracketed")))?;
    let entries: Vec<Scalar> = inner
        .split(',')
        .map(|piece| parse_scalar(piece, field, line))
        .collect::<Result<_, _>>()?;
    if entries.len() != dim {
        return Err(FormatError::parse(
            line,
            format!("point has {} coordinates, expected {dim}", entries.len()),
        ));
    }
    Ok(GroupPoint::new(entries))
}

pub fn emit_field(field: &NumberField) -> String {
    match field.quad_coeffs() {
        None => "field rational".to_string(),
        Some((c1, c0)) => format!("field quadratic {c1} {c0}"),
    }
}

fn parse_field_line(rest: &str, line: usize) -> Result<NumberField, FormatError> {
    let mut parts = rest.split_whitespace();
    match parts.next() {
        Some("rational") => Ok(NumberField::rational()),
        Some("quadratic") => {
            let c1 = parts
                .next()
                .ok_or_else(|| FormatError::parse(line, "missing linear coefficient"))?;
            let c0 = parts
                .next()
                .ok_or_else(|| FormatError::parse(line, "missing constant coefficient"))?;
            let c1 = parse_big_rational(c1, line)?;
            let c0 = parse_big_rational(c0, line)?;
            NumberField::quadratic(c1, c0)
                .map_err(|e| FormatError::parse(line, e.to_string()))
        }
        other => Err(FormatError::parse(
            line,
            format!("unknown field kind `{}`", other.unwrap_or("")),
        )),
    }
}

fn emit_matrix(m: &ExactMatrix) -> String {
    let rows: Vec<String> = m
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("matrix {}", rows.join(" ; "))
}

fn parse_matrix_line(
    rest: &str,
    field: &NumberField,
    dim: usize,
    line: usize,
) -> Result<ExactMatrix, FormatError> {
    let rows: Vec<Vec<Scalar>> = rest
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| parse_scalar(tok, field, line))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(FormatError::parse(line, format!("matrix is not {dim}x{dim}")));
    }
    ExactMatrix::from_rows(rows).map_err(|e| FormatError::parse(line, e.to_string()))
}

/// The body of a hypergraph declaration: field, dimension, components.
pub fn emit_hypergraph_body(h: &LinearHypergraph) -> Vec<String> {
    let mut out = vec![emit_field(h.field()), format!("dim {}", h.dim())];
    for comp in h.components() {
        out.push("component".to_string());
        for m in comp.maps() {
            out.push(emit_matrix(m));
        }
    }
    out
}

/// A full spec file with the version magic.
pub fn emit_hypergraph_spec(h: &LinearHypergraph) -> String {
    let mut lines = vec![SPEC_MAGIC.to_string()];
    lines.extend(emit_hypergraph_body(h));
    lines.join("\n") + "\n"
}

/// Parses the declaration body from numbered lines (1-based numbers are
/// kept from the enclosing file for error reporting).
pub fn parse_hypergraph_body(
    lines: &[(usize, &str)],
) -> Result<LinearHypergraph, FormatError> {
    let mut iter = lines.iter().peekable();
    let Some(&(line, first)) = iter.next() else {
        return Err(FormatError::parse(0, "empty declaration"));
    };
    let field = match first.strip_prefix("field ") {
        Some(rest) => parse_field_line(rest, line)?,
        None => return Err(FormatError::parse(line, "expected `field ...`")),
    };
    let Some(&(line, second)) = iter.next() else {
        return Err(FormatError::parse(line, "missing `dim` line"));
    };
    let dim: usize = match second.strip_prefix("dim ") {
        Some(rest) => rest
            .trim()
            .parse()
            .map_err(|_| FormatError::parse(line, "bad dimension"))?,
        None => return Err(FormatError::parse(line, "expected `dim ...`")),
    };
    if dim == 0 {
        return Err(FormatError::parse(line, "dimension must be positive"));
    }
    let mut components = Vec::new();
    while let Some(&(line, text)) = iter.next() {
        if text.trim() != "component" {
            return Err(FormatError::parse(line, "expected `component`"));
        }
        let mut maps = Vec::new();
        for _ in 0..3 {
            let Some(&(mline, mtext)) = iter.next() else {
                return Err(FormatError::parse(line, "component needs three matrices"));
            };
            let rest = mtext
                .strip_prefix("matrix ")
                .ok_or_else(|| FormatError::parse(mline, "expected `matrix ...`"))?;
            maps.push(parse_matrix_line(rest, &field, dim, mline)?);
        }
        let [g0, g1, g2]: [ExactMatrix; 3] =
            maps.try_into().expect("exactly three matrices read");
        let comp = SlimComponent::new(g0, g1, g2)
            .map_err(|e| FormatError::parse(line, e.to_string()))?;
        components.push(comp);
    }
    LinearHypergraph::new(components).map_err(|e| FormatError::parse(0, e.to_string()))
}

/// Parses a full spec file, magic line included.
pub fn parse_hypergraph_spec(text: &str) -> Result<LinearHypergraph, FormatError> {
    let lines = numbered_lines(text);
    let Some(&(line, first)) = lines.first() else {
        return Err(FormatError::parse(0, "empty file"));
    };
    if first != SPEC_MAGIC {
        return Err(FormatError::parse(line, format!("expected magic `{SPEC_MAGIC}`")));
    }
    parse_hypergraph_body(&lines[1..])
}

/// Nonempty, non-comment lines with their 1-based numbers.
pub fn numbered_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Resolves a preset name, `ap` or `equilateral`, at an ambient dimension.
pub fn preset(name: &str, dim: usize) -> Result<LinearHypergraph, FormatError> {
    match name {
        "ap" => Ok(LinearHypergraph::preset_ap(dim)),
        "equilateral" => Ok(LinearHypergraph::preset_equilateral(dim)),
        other => Err(FormatError::UnknownPreset(other.to_string())),
    }
}

pub fn emit_color(c: &Color) -> String {
    let tags: Vec<String> = c.tag.iter().map(|t| t.to_string()).collect();
    format!("({}, [{}])", c.tier, tags.join(", "))
}

pub fn parse_color(s: &str, line: usize) -> Result<Color, FormatError> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| FormatError::parse(line, format!("color `{s}` is not parenthesized")))?;
    let (tier_part, tag_part) = inner
        .split_once(',')
        .ok_or_else(|| FormatError::parse(line, "color needs a tier and a tag"))?;
    let tier: u32 = tier_part
        .trim()
        .parse()
        .map_err(|_| FormatError::parse(line, "bad tier"))?;
    let tag_inner = tag_part
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| FormatError::parse(line, "tag list is not bracketed"))?;
    let tag: Vec<u32> = if tag_inner.trim().is_empty() {
        Vec::new()
    } else {
        tag_inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| FormatError::parse(line, "bad tag entry"))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(Color { tier, tag })
}

/// One `point -> color` record per line, in canonical point order.
pub fn emit_coloring(c: &TotalSampleColoring) -> Vec<String> {
    c.iter()
        .map(|(p, color)| format!("{p} -> {}", emit_color(color)))
        .collect()
}

pub fn parse_coloring_record(
    s: &str,
    field: &NumberField,
    dim: usize,
    line: usize,
) -> Result<(GroupPoint, Color), FormatError> {
    let (point_part, color_part) = s
        .split_once("->")
        .ok_or_else(|| FormatError::parse(line, "expected `point -> color`"))?;
    Ok((
        parse_point(point_part, field, dim, line)?,
        parse_color(color_part, line)?,
    ))
}

pub fn emit_basis(b: &Basis) -> String {
    let parts: Vec<String> = b.vectors().iter().map(|v| v.to_string()).collect();
    if parts.is_empty() {
        "basis".to_string()
    } else {
        format!("basis {}", parts.join(" ; "))
    }
}

pub fn parse_basis_line(
    rest: &str,
    field: &NumberField,
    dim: usize,
    line: usize,
) -> Result<Basis, FormatError> {
    let rest = rest.trim();
    let vectors: Vec<GroupPoint> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(';')
            .map(|p| parse_point(p, field, dim, line))
            .collect::<Result<_, _>>()?
    };
    Ok(Basis::new(field, dim, &vectors))
}

/// Serializes a condition: versioned header, field, dimension, domain
/// basis, and the point-color records.
pub fn emit_condition(c: &Condition) -> String {
    let field = c.domain().field();
    let mut lines = vec![
        CONDITION_MAGIC.to_string(),
        emit_field(field),
        format!("dim {}", c.domain().ambient_dim()),
        emit_basis(c.domain().basis()),
    ];
    for record in emit_coloring(c.coloring()) {
        lines.push(format!("point {record}"));
    }
    lines.join("\n") + "\n"
}

/// Parses and validates a condition file against a hypergraph. The stored
/// basis must already be closed under the hypergraph's maps.
pub fn parse_condition(text: &str, h: &LinearHypergraph) -> Result<Condition, FormatError> {
    let lines = numbered_lines(text);
    let mut iter = lines.iter();
    match iter.next() {
        Some(&(_, first)) if first == CONDITION_MAGIC => {}
        Some(&(line, _)) => {
            return Err(FormatError::parse(line, format!("expected magic `{CONDITION_MAGIC}`")))
        }
        None => return Err(FormatError::parse(0, "empty file")),
    }
    let Some(&(fline, ftext)) = iter.next() else {
        return Err(FormatError::parse(0, "missing field line"));
    };
    let field = ftext
        .strip_prefix("field ")
        .map(|rest| parse_field_line(rest, fline))
        .transpose()?
        .ok_or_else(|| FormatError::parse(fline, "expected `field ...`"))?;
    if field != *h.field() {
        return Err(FormatError::parse(fline, "condition field differs from the hypergraph"));
    }
    let Some(&(dline, dtext)) = iter.next() else {
        return Err(FormatError::parse(fline, "missing dim line"));
    };
    let dim: usize = dtext
        .strip_prefix("dim ")
        .and_then(|rest| rest.trim().parse().ok())
        .ok_or_else(|| FormatError::parse(dline, "expected `dim ...`"))?;
    if dim != h.dim() {
        return Err(FormatError::parse(dline, "condition dimension differs from the hypergraph"));
    }
    let Some(&(bline, btext)) = iter.next() else {
        return Err(FormatError::parse(dline, "missing basis line"));
    };
    let basis = match btext.strip_prefix("basis") {
        Some(rest) => parse_basis_line(rest, &field, dim, bline)?,
        None => return Err(FormatError::parse(bline, "expected `basis ...`")),
    };
    let domain = gamma_closure(h, basis.vectors());
    if domain.basis() != &basis {
        return Err(FormatError::parse(bline, "stored basis is not closed under the maps"));
    }
    let mut coloring: BTreeMap<GroupPoint, Color> = BTreeMap::new();
    for &(pline, ptext) in iter {
        let rest = ptext
            .strip_prefix("point ")
            .ok_or_else(|| FormatError::parse(pline, "expected `point ...`"))?;
        let (p, c) = parse_coloring_record(rest, &field, dim, pline)?;
        coloring.insert(p, c);
    }
    Condition::new(h, domain, coloring)
        .map_err(|e| FormatError::parse(0, e.to_string()))
}

/// Parses a grid file: one row of space-separated color indices per line.
pub fn parse_grid(text: &str) -> Result<GridColoring, FormatError> {
    let lines = numbered_lines(text);
    if lines.is_empty() {
        return Err(FormatError::parse(0, "empty grid"));
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let width = lines[0].1.split_whitespace().count();
    for &(line, text) in &lines {
        let row: Vec<u32> = text
            .split_whitespace()
            .map(|tok| {
                tok.parse()
                    .map_err(|_| FormatError::parse(line, format!("bad color `{tok}`")))
            })
            .collect::<Result<_, _>>()?;
        if row.len() != width {
            return Err(FormatError::parse(line, "ragged grid row"));
        }
        rows.push(row);
    }
    Ok(GridColoring::from_rows(rows))
}

pub fn emit_grid(g: &GridColoring) -> String {
    let mut out = String::new();
    for r in 0..g.rows() {
        let row: Vec<String> = (0..g.cols()).map(|c| g.cell(r, c).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Wraps a closed-subspace basis back into a subspace, revalidating
/// closure.
pub fn closed_subspace_from_basis(
    h: &LinearHypergraph,
    basis: Basis,
    line: usize,
) -> Result<ClosedSubspace, FormatError> {
    let domain = gamma_closure(h, basis.vectors());
    if domain.basis() != &basis {
        return Err(FormatError::parse(line, "basis is not closed under the maps"));
    }
    Ok(domain)
}
