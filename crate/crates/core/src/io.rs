//! Text formats: one segment per line as `x1 y1 x2 y2`, tokens integers or
//! `p/q`, `#` starts a comment. Sequence files separate matchings with
//! `== step k ==` lines.
//!
//! Segment `i` of a file owns points `2i` and `2i+1`. Writing lists segments
//! in point-id order, so write → parse → write is the identity.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::algorithms::transform::TransformationSequence;
use crate::error::Error;
use crate::geom::{Coord, Matching, PointSet, Scalar, Segment};

/// Syntax error with 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Invalid(#[from] Error),
}

pub type RawSegment = (Coord, Coord);

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_segment_line(text: &str, line: usize) -> Result<RawSegment, ParseError> {
    let mut tokens = Vec::with_capacity(4);
    let mut rest = text;
    let mut offset = 0;
    while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        tokens.push((offset + start + 1, &tail[..len]));
        offset += start + len;
        rest = &tail[len..];
    }
    if tokens.len() != 4 {
        let column = tokens.get(4).map_or(text.trim_end().len() + 1, |t| t.0);
        return Err(ParseError { line, column, message: format!("expected 4 coordinates, found {}", tokens.len()) });
    }
    let mut v = Vec::with_capacity(4);
    for (column, tok) in tokens {
        let s: Scalar = tok
            .parse()
            .map_err(|e| ParseError { line, column, message: format!("bad number `{tok}`: {e}") })?;
        v.push(s);
    }
    let mut it = v.into_iter();
    let mut next = || it.next().expect("four tokens");
    let p = Coord { x: next(), y: next() };
    let q = Coord { x: next(), y: next() };
    Ok((p, q))
}

/// Segments of an instance file, in file order.
pub fn parse_segments(text: &str) -> Result<Vec<RawSegment>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        if body.trim_start().starts_with("==") {
            return Err(ParseError { line: i + 1, column: 1, message: "step header in an instance file".into() });
        }
        out.push(parse_segment_line(body, i + 1)?);
    }
    Ok(out)
}

/// Builds and validates the matching: general position, perfect, non-crossing.
pub fn matching_from_segments(segs: &[RawSegment]) -> Result<Matching, Error> {
    let base = PointSet::from_coords(segs.iter().flat_map(|(p, q)| [p.clone(), q.clone()]));
    base.validate_general_position()?;
    Matching::new(Arc::new(base), (0..segs.len()).map(|i| (2 * i, 2 * i + 1)))
}

pub fn parse_instance(text: &str) -> Result<Matching, LoadError> {
    Ok(matching_from_segments(&parse_segments(text)?)?)
}

/// Same segments over `base`, matching points by coordinates.
pub fn onto_base(m: &Matching, base: &Arc<PointSet>) -> Result<Matching, Error> {
    let index: HashMap<Coord, usize> = base.points().iter().map(|p| (p.coord(), p.id)).collect();
    let mut segs = Vec::with_capacity(m.len());
    for s in m.segments() {
        let (a, b) = m.endpoints(&s);
        match (index.get(&a), index.get(&b)) {
            (Some(&i), Some(&j)) => segs.push(Segment::new(i, j)),
            _ => return Err(Error::MismatchedVertexSet),
        }
    }
    Matching::from_segments(base.clone(), segs)
}

fn write_segments(out: &mut String, m: &Matching) {
    for s in m.segments() {
        let (a, b) = m.endpoints(&s);
        let _ = writeln!(out, "{} {} {} {}", a.x, a.y, b.x, b.y);
    }
}

pub fn write_instance(m: &Matching) -> String {
    let mut out = String::new();
    write_segments(&mut out, m);
    out
}

pub fn write_sequence(seq: &TransformationSequence) -> String {
    let mut out = String::new();
    for (k, m) in seq.matchings.iter().enumerate() {
        let _ = writeln!(out, "== step {k} ==");
        write_segments(&mut out, m);
    }
    out
}

/// Matchings of a sequence file, all over the point set of the first step.
pub fn parse_sequence(text: &str) -> Result<TransformationSequence, LoadError> {
    let mut steps: Vec<Vec<RawSegment>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix("==") {
            let k = header
                .trim()
                .strip_suffix("==")
                .and_then(|h| h.trim().strip_prefix("step"))
                .and_then(|h| h.trim().parse::<usize>().ok());
            match k {
                Some(k) if k == steps.len() => steps.push(Vec::new()),
                Some(k) => {
                    return Err(ParseError { line: i + 1, column: 1, message: format!("expected step {}, found {k}", steps.len()) }.into())
                }
                None => return Err(ParseError { line: i + 1, column: 1, message: "malformed step header".into() }.into()),
            }
            continue;
        }
        let Some(current) = steps.last_mut() else {
            return Err(ParseError { line: i + 1, column: 1, message: "segment before the first step header".into() }.into());
        };
        current.push(parse_segment_line(body, i + 1)?);
    }
    if steps.is_empty() {
        return Err(ParseError { line: 1, column: 1, message: "no steps".into() }.into());
    }
    let first = matching_from_segments(&steps[0])?;
    let mut matchings = vec![first.clone()];
    for segs in &steps[1..] {
        matchings.push(onto_base(&matching_from_segments(segs)?, first.base())?);
    }
    Ok(TransformationSequence { matchings })
}
