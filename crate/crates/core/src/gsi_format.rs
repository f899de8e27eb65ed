//! The GSI text format.
//!
//! ```text
//! gsi 1
//! r 2
//! min 0 0
//! conductor 5 5
//! elem 0 0
//! elem 3 3
//! ...
//! ```
//!
//! UTF-8, line based, `#` starts a comment, fields separated by whitespace.
//! The four header lines come in this order; then one `elem` line per small
//! element, in any order, including the minimum and the conductor.
//! [`emit_gsi`] writes the normalized form: no comments, elements sorted.

use std::fmt::Write as _;

use crate::error::{GsiError, Result};
use crate::good_ideal::{validate, SmallRep};
use crate::lattice::{check_dim_supported, Point};

struct Line<'a> {
    number: usize,
    /// Tokens with their 1-based columns.
    tokens: Vec<(usize, &'a str)>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain([(content.len(), ' ')]) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push((content[..s].chars().count() + 1, &content[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some(Line {
            number: i + 1,
            tokens,
        })
    })
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> GsiError {
    GsiError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn expect_keyword<'a>(
    line: Option<Line<'a>>,
    keyword: &str,
    after: usize,
) -> Result<Line<'a>> {
    match line {
        None => Err(syntax(after + 1, 1, format!("missing `{keyword}` line"))),
        Some(l) if l.tokens[0].1 == keyword => Ok(l),
        Some(l) => Err(syntax(
            l.number,
            l.tokens[0].0,
            format!("expected `{keyword}` line, found `{}`", l.tokens[0].1),
        )),
    }
}

fn ints(line: &Line<'_>, expected: usize) -> Result<Vec<i64>> {
    let fields = &line.tokens[1..];
    if fields.len() != expected {
        let column = fields.get(expected).map_or_else(
            || line.tokens.last().map_or(1, |(c, t)| c + t.chars().count()),
            |(c, _)| *c,
        );
        return Err(syntax(
            line.number,
            column,
            format!("expected {expected} integers, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|(col, tok)| {
            tok.parse::<i64>()
                .map_err(|_| syntax(line.number, *col, format!("invalid integer `{tok}`")))
        })
        .collect()
}

/// Parse and check shape only (no axioms). Also returns the line number of
/// each listed element, keyed by its normalized point.
pub fn parse_gsi_structural(text: &str) -> Result<(SmallRep, Vec<(Point, usize)>)> {
    let mut it = lines(text);
    let header = expect_keyword(it.next(), "gsi", 0)?;
    if ints(&header, 1)? != [1] {
        return Err(syntax(header.number, header.tokens[1].0, "unsupported format version"));
    }
    let rl = expect_keyword(it.next(), "r", header.number)?;
    let r = ints(&rl, 1)?[0];
    if r < 1 || check_dim_supported(r as usize).is_err() {
        return Err(syntax(rl.number, rl.tokens[1].0, format!("unsupported dimension {r}")));
    }
    let r = r as usize;
    let ml = expect_keyword(it.next(), "min", rl.number)?;
    let min = Point::new(ints(&ml, r)?);
    let cl = expect_keyword(it.next(), "conductor", ml.number)?;
    let conductor = Point::new(ints(&cl, r)?);
    let mut elems = Vec::new();
    for l in it {
        if l.tokens[0].1 != "elem" {
            return Err(syntax(
                l.number,
                l.tokens[0].0,
                format!("expected `elem` line, found `{}`", l.tokens[0].1),
            ));
        }
        elems.push((Point::new(ints(&l, r)?), l.number));
    }
    let rep = SmallRep::structural(min, conductor.clone(), elems.iter().map(|(p, _)| p.clone()))
        .map_err(|e| GsiError::AtLine {
            line: cl.number,
            source: Box::new(e),
        })?;
    let located = elems
        .into_iter()
        .map(|(p, n)| (p.meet(&conductor).expect("dimension checked"), n))
        .collect();
    Ok((rep, located))
}

/// Parse and validate. Axiom failures carry the line of the first listed
/// element involved in the counterexample.
pub fn parse_gsi(text: &str) -> Result<SmallRep> {
    let (rep, located) = parse_gsi_structural(text)?;
    let report = validate(&rep, None);
    if report.passed {
        return Ok(rep);
    }
    let line = report
        .counterexamples
        .first()
        .and_then(|ev| {
            ev.points
                .iter()
                .find_map(|p| located.iter().find(|(q, _)| q == p).map(|(_, n)| *n))
        })
        .unwrap_or(0);
    let err = GsiError::Axiom(Box::new(report));
    Err(if line > 0 {
        GsiError::AtLine {
            line,
            source: Box::new(err),
        }
    } else {
        err
    })
}

fn push_point(out: &mut String, keyword: &str, p: &Point) {
    out.push_str(keyword);
    for v in p.coords() {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
}

pub fn emit_gsi(e: &SmallRep) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "gsi 1");
    let _ = writeln!(out, "r {}", e.dim());
    push_point(&mut out, "min", e.min_elem());
    push_point(&mut out, "conductor", e.conductor());
    for p in e.small_elements() {
        push_point(&mut out, "elem", p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::fixtures;

    #[test]
    fn fixture_files_parse() {
        let ex2 = parse_gsi(fixtures::EX2_GSI).unwrap();
        assert_eq!(ex2.conductor(), &Point::from([5, 5]));
        assert_eq!(ex2.small_elements().len(), 5);
    }

    #[test]
    fn roundtrip_is_byte_identical_after_normalization() {
        for text in [fixtures::N1_GSI, fixtures::N2_GSI, fixtures::NODE2_GSI, fixtures::EX2_GSI] {
            let once = emit_gsi(&parse_gsi(text).unwrap());
            assert_eq!(emit_gsi(&parse_gsi(&once).unwrap()), once);
        }
        assert_eq!(emit_gsi(&fixtures::ex2()), fixtures::EX2_GSI);
    }

    #[test]
    fn unsorted_input_with_comments_normalizes() {
        let text = "# c\ngsi 1   # magic\nr 1\nmin 0\nconductor 2\nelem 2\n\nelem 0\nelem 7\n";
        assert_eq!(
            emit_gsi(&parse_gsi(text).unwrap()),
            "gsi 1\nr 1\nmin 0\nconductor 2\nelem 0\nelem 2\n"
        );
    }

    #[test]
    fn missing_conductor_names_the_line() {
        let text = "gsi 1\nr 1\nmin 0\nelem 0\n";
        match parse_gsi(text).unwrap_err() {
            GsiError::Syntax { line, message, .. } => {
                assert_eq!(line, 4);
                assert!(message.contains("conductor"));
            }
            other => panic!("unexpected {other}"),
        }
        match parse_gsi("gsi 1\nr 1\nmin 0\n").unwrap_err() {
            GsiError::Syntax { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn bad_tokens_have_columns() {
        match parse_gsi("gsi 1\nr 2\nmin 0 x\n").unwrap_err() {
            GsiError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 7)),
            other => panic!("unexpected {other}"),
        }
        assert!(matches!(
            parse_gsi("gsi 1\nr 2\nmin 0\n").unwrap_err(),
            GsiError::Syntax { line: 3, .. }
        ));
        assert!(matches!(
            parse_gsi("gsi 2\n").unwrap_err(),
            GsiError::Syntax { line: 1, .. }
        ));
    }

    #[test]
    fn axiom_failures_carry_the_element_line() {
        match parse_gsi(fixtures::EX2_BROKEN_GSI).unwrap_err() {
            GsiError::AtLine { line, source } => {
                assert_eq!(line, 7);
                assert!(matches!(*source, GsiError::Axiom(_)));
            }
            other => panic!("unexpected {other}"),
        }
    }
}
