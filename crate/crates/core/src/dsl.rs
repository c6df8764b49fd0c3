//! Text and JSON formats for diagrams.
//!
//! ```text
//! # right-handed trefoil
//! m=2
//! closure=annular
//! slice: x+@1
//! slice: x+@1
//! slice: x+@1
//! ```
//!
//! Statements are separated by newlines or `;`. Besides `slice:` lines the
//! compact form `slices=[[x+@1],[x+@1]]` is accepted. Optional headers are
//! `marked=<arc-id>` and `orient <component-id> forward|backward`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{Closure, Direction, ItemKind, Slice, SliceItem, TangleDiagram};
use crate::error::{DiagramError, ParseError};

/// Where an item was written, for error reporting.
#[derive(Clone, Copy, Debug)]
struct Span {
    line: usize,
    column: usize,
}

#[derive(Default)]
struct Draft {
    m: Option<(usize, Span)>,
    closure: Option<(Closure, Span)>,
    marked: Option<(usize, Span)>,
    orient: Vec<(usize, Direction, Span)>,
    slices: Vec<(Vec<(SliceItem, Span)>, Span)>,
}

/// Parses either format; input whose first non-blank character is `{` is JSON.
pub fn parse_diagram(text: &str) -> Result<TangleDiagram, ParseError> {
    if text.trim_start().starts_with('{') {
        return parse_json(text);
    }
    let mut draft = Draft::default();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let mut offset = 0;
        for stmt in split_statements(content) {
            let lead = stmt.len() - stmt.trim_start().len();
            let span = Span {
                line: line_no,
                column: offset + lead + 1,
            };
            offset += stmt.len() + 1;
            let s = stmt.trim();
            if s.is_empty() {
                continue;
            }
            parse_statement(s, span, &mut draft)?;
        }
    }
    finish(draft)
}

/// Splits on `;` outside brackets.
fn split_statements(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in line.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ';' if depth == 0 => {
                out.push(&line[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&line[start..]);
    out
}

fn parse_statement(s: &str, span: Span, draft: &mut Draft) -> Result<(), ParseError> {
    let err = |msg: String| ParseError::new(span.line, span.column, msg);
    if let Some(rest) = s.strip_prefix("slice:") {
        let items_col = span.column + "slice:".len();
        let items = parse_items(rest, span.line, items_col)?;
        draft.slices.push((items, span));
        return Ok(());
    }
    if let Some(rest) = s.strip_prefix("orient") {
        if rest.starts_with(char::is_whitespace) {
            let words: Vec<&str> = rest.split_whitespace().collect();
            if words.len() != 2 {
                return Err(err("expected `orient <component-id> forward|backward`".into()));
            }
            let id = words[0]
                .parse::<usize>()
                .map_err(|_| err(format!("bad component id `{}`", words[0])))?;
            let dir = match words[1] {
                "forward" => Direction::Forward,
                "backward" => Direction::Backward,
                w => return Err(err(format!("unknown direction `{w}`"))),
            };
            draft.orient.push((id, dir, span));
            return Ok(());
        }
    }
    let Some((key, value)) = s.split_once('=') else {
        return Err(err(format!("unrecognised statement `{s}`")));
    };
    let (key, value) = (key.trim(), value.trim());
    let eq = s.find('=').unwrap_or(0);
    let after = &s[eq + 1..];
    let value_col = span.column + eq + 1 + (after.len() - after.trim_start().len());
    let dup = |name: &str| err(format!("duplicate `{name}` header"));
    match key {
        "m" => {
            if draft.m.is_some() {
                return Err(dup("m"));
            }
            let m = value
                .parse::<usize>()
                .map_err(|_| ParseError::new(span.line, value_col, format!("bad strand count `{value}`")))?;
            draft.m = Some((m, span));
        }
        "closure" => {
            if draft.closure.is_some() {
                return Err(dup("closure"));
            }
            let c = match value {
                "annular" => Closure::Annular,
                "none" => Closure::None,
                v => {
                    return Err(ParseError::new(
                        span.line,
                        value_col,
                        format!("closure must be `annular` or `none`, got `{v}`"),
                    ))
                }
            };
            draft.closure = Some((c, span));
        }
        "marked" => {
            if draft.marked.is_some() {
                return Err(dup("marked"));
            }
            let a = value
                .parse::<usize>()
                .map_err(|_| ParseError::new(span.line, value_col, format!("bad arc id `{value}`")))?;
            draft.marked = Some((a, span));
        }
        "slices" => {
            let inner = value
                .strip_prefix('[')
                .and_then(|v| v.strip_suffix(']'))
                .ok_or_else(|| ParseError::new(span.line, value_col, "expected `[[...],...]`"))?;
            let base = value_col + 1;
            let mut depth = 0;
            let mut open = None;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '[' => {
                        if depth == 0 {
                            open = Some(i);
                        }
                        depth += 1;
                    }
                    ']' => {
                        depth -= 1;
                        if depth < 0 {
                            return Err(ParseError::new(span.line, base + i, "unbalanced `]`"));
                        }
                        if depth == 0 {
                            let o = open.take().unwrap_or(0);
                            let items = parse_items(&inner[o + 1..i], span.line, base + o + 1)?;
                            draft.slices.push((
                                items,
                                Span {
                                    line: span.line,
                                    column: base + o,
                                },
                            ));
                        }
                    }
                    ',' | ' ' | '\t' if depth == 0 => {}
                    _ if depth == 0 => {
                        return Err(ParseError::new(span.line, base + i, format!("unexpected `{ch}`")));
                    }
                    _ => {}
                }
            }
            if depth != 0 {
                return Err(ParseError::new(span.line, value_col, "unbalanced `[`"));
            }
        }
        k => return Err(err(format!("unknown header `{k}`"))),
    }
    Ok(())
}

fn parse_items(text: &str, line: usize, column: usize) -> Result<Vec<(SliceItem, Span)>, ParseError> {
    let mut items = Vec::new();
    let mut offset = 0;
    for raw in text.split(',') {
        let lead = raw.len() - raw.trim_start().len();
        let col = column + offset + lead;
        offset += raw.len() + 1;
        let tok = raw.trim();
        if tok.is_empty() {
            if text.trim().is_empty() {
                break;
            }
            return Err(ParseError::new(line, col, "empty item"));
        }
        let (kind, pos) = tok
            .split_once('@')
            .ok_or_else(|| ParseError::new(line, col, format!("expected `<kind>@<pos>`, got `{tok}`")))?;
        let kind = ItemKind::from_token(kind.trim())
            .ok_or_else(|| ParseError::new(line, col, format!("unknown item kind `{}`", kind.trim())))?;
        let position = pos
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&p| p >= 1)
            .ok_or_else(|| ParseError::new(line, col, format!("bad position `{}`", pos.trim())))?;
        items.push((SliceItem::new(kind, position), Span { line, column: col }));
    }
    Ok(items)
}

fn finish(draft: Draft) -> Result<TangleDiagram, ParseError> {
    let (m, _) = draft
        .m
        .ok_or_else(|| ParseError::new(1, 1, "missing `m=<int>` header"))?;
    let (closure, closure_span) = draft
        .closure
        .ok_or_else(|| ParseError::new(1, 1, "missing `closure=annular|none` header"))?;
    let spans: Vec<(Vec<Span>, Span)> = draft
        .slices
        .iter()
        .map(|(items, s)| (items.iter().map(|(_, sp)| *sp).collect(), *s))
        .collect();
    let slices: Vec<Slice> = draft
        .slices
        .into_iter()
        .map(|(items, _)| items.into_iter().map(|(it, _)| it).collect())
        .collect();
    let locate = |e: DiagramError| -> ParseError {
        let span = match &e {
            DiagramError::Position { slice, item, .. } | DiagramError::Overrun { slice, item, .. } => {
                spans[*slice].0[*item]
            }
            DiagramError::Width { slice, .. } => spans[*slice].1,
            DiagramError::ClosureWidth { .. } => closure_span,
            _ => Span { line: 1, column: 1 },
        };
        ParseError::new(span.line, span.column, e.to_string())
    };
    let mut d = TangleDiagram::new(m, slices, closure).map_err(locate)?;
    if let Some((a, span)) = draft.marked {
        d = d
            .with_marked_arc(Some(a))
            .map_err(|e| ParseError::new(span.line, span.column, e.to_string()))?;
    }
    for (id, dir, span) in draft.orient {
        d = d
            .with_orientation(id, dir)
            .map_err(|e| ParseError::new(span.line, span.column, e.to_string()))?;
    }
    Ok(d)
}

/// Canonical text form; `parse_diagram(&serialize(d)) == d`.
pub fn serialize(d: &TangleDiagram) -> String {
    let mut out = format!("m={}\nclosure={}\n", d.m(), closure_name(d.closure()));
    if let Some(a) = d.marked_arc() {
        out.push_str(&format!("marked={a}\n"));
    }
    for (id, dir) in d.orientation_overrides() {
        out.push_str(&format!("orient {id} {}\n", direction_name(*dir)));
    }
    for slice in d.slices() {
        let items: Vec<String> = slice.iter().map(|it| it.to_string()).collect();
        if items.is_empty() {
            out.push_str("slice:\n");
        } else {
            out.push_str(&format!("slice: {}\n", items.join(", ")));
        }
    }
    out
}

fn closure_name(c: Closure) -> &'static str {
    match c {
        Closure::Annular => "annular",
        Closure::None => "none",
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Forward => "forward",
        Direction::Backward => "backward",
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    m: usize,
    closure: String,
    slices: Vec<Vec<ItemJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    marked: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    orient: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct ItemJson {
    kind: String,
    at: usize,
}

pub fn parse_json(text: &str) -> Result<TangleDiagram, ParseError> {
    let raw: DiagramJson =
        serde_json::from_str(text).map_err(|e| ParseError::new(e.line(), e.column(), e.to_string()))?;
    let at = |msg: String| ParseError::new(1, 1, msg);
    let closure = match raw.closure.as_str() {
        "annular" => Closure::Annular,
        "none" => Closure::None,
        c => return Err(at(format!("closure must be `annular` or `none`, got `{c}`"))),
    };
    let mut slices = Vec::with_capacity(raw.slices.len());
    for (s, slice) in raw.slices.iter().enumerate() {
        let mut items = Vec::with_capacity(slice.len());
        for (k, it) in slice.iter().enumerate() {
            let kind = ItemKind::from_token(&it.kind)
                .ok_or_else(|| at(format!("slice {s}, item {k}: unknown item kind `{}`", it.kind)))?;
            items.push(SliceItem::new(kind, it.at));
        }
        slices.push(items);
    }
    let mut d = TangleDiagram::new(raw.m, slices, closure).map_err(|e| at(e.to_string()))?;
    d = d.with_marked_arc(raw.marked).map_err(|e| at(e.to_string()))?;
    for (id, dir) in &raw.orient {
        let id = id
            .parse::<usize>()
            .map_err(|_| at(format!("bad component id `{id}`")))?;
        let dir = match dir.as_str() {
            "forward" => Direction::Forward,
            "backward" => Direction::Backward,
            other => return Err(at(format!("unknown direction `{other}`"))),
        };
        d = d.with_orientation(id, dir).map_err(|e| at(e.to_string()))?;
    }
    Ok(d)
}

pub fn to_json(d: &TangleDiagram) -> String {
    let raw = DiagramJson {
        m: d.m(),
        closure: closure_name(d.closure()).to_string(),
        slices: d
            .slices()
            .iter()
            .map(|s| {
                s.iter()
                    .map(|it| ItemJson {
                        kind: it.kind.token().to_string(),
                        at: it.position,
                    })
                    .collect()
            })
            .collect(),
        marked: d.marked_arc(),
        orient: d
            .orientation_overrides()
            .iter()
            .map(|(k, v)| (k.to_string(), direction_name(*v).to_string()))
            .collect(),
    };
    serde_json::to_string(&raw).expect("diagram json")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::braid_closure;

    #[test]
    fn compact_identity() {
        let d = parse_diagram("m=1; slices=[]; closure=annular").unwrap();
        assert_eq!(d.m(), 1);
        assert!(d.slices().is_empty());
        assert_eq!(d.closure(), Closure::Annular);
    }

    #[test]
    fn compact_closed_circle() {
        let d = parse_diagram("m=0; slices=[[cup@1],[cap@1]]; closure=annular").unwrap();
        assert_eq!(d.slices().len(), 2);
        assert_eq!(d.components().len(), 1);
        assert!(d.is_closed());
    }

    #[test]
    fn compact_trefoil() {
        let d = parse_diagram("m=2; slices=[[x+@1],[x+@1],[x+@1]]; closure=annular").unwrap();
        assert_eq!(d, braid_closure(2, &[1, 1, 1]).unwrap());
        assert_eq!(d.components().len(), 1);
    }

    #[test]
    fn line_form_with_headers() {
        let text = "# hopf\nm=2\nclosure=annular\nmarked=2\norient 1 backward\nslice: x+@1\nslice: x+@1\n";
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.marked_arc(), Some(2));
        assert_eq!(d.orientation_overrides().get(&1), Some(&Direction::Backward));
        assert_eq!(parse_diagram(&serialize(&d)).unwrap(), d);
    }

    #[test]
    fn json_round_trip() {
        let j = r#"{"m":2,"closure":"annular","slices":[[{"kind":"x+","at":1}]]}"#;
        let d = parse_diagram(j).unwrap();
        assert_eq!(to_json(&d), j);
        assert_eq!(parse_json(&to_json(&d)).unwrap(), d);
    }

    #[test]
    fn syntax_error_location() {
        let e = parse_diagram("m=2\nclosure=annular\nslice: x+@1, zz@3\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 14));
        assert!(e.message.contains("zz"));
    }

    #[test]
    fn width_mismatch_location() {
        let e = parse_diagram("m=2\nclosure=none\nslice: id@1\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("cover 1"));
        let e = parse_diagram("m=2\nclosure=none\nslice: id@1, id@3\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 14));
    }

    #[test]
    fn closure_conflict_and_dangling_mark() {
        let e = parse_diagram("m=1\nclosure=annular\nslice: cup@1, id@1\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_diagram("m=1\nclosure=annular\nmarked=7\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("marked arc 7"));
    }

    #[test]
    fn missing_headers() {
        assert!(parse_diagram("closure=annular").is_err());
        assert!(parse_diagram("m=1").is_err());
        assert!(parse_diagram("m=1; m=1; closure=none").is_err());
    }

    #[test]
    fn empty_slice_line() {
        let d = parse_diagram("m=0\nclosure=none\nslice:\nslice: cup@1\nslice: cap@1\n").unwrap();
        assert_eq!(d.slices().len(), 3);
        assert_eq!(parse_diagram(&serialize(&d)).unwrap(), d);
    }
}
