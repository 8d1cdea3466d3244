//! Parser for the line-oriented presentation format:
//!
//! ```text
//! host family X index nat          # or: size <n>
//! host edge X[i] -- X[i+1]
//! component Y indexed              # or: replicated <n|aleph0|aleph1>
//!   inner y
//!   inner edge y -- w
//!   attach y -- X[i]
//! ```

use crate::address::{check_name, parse_index, Name};
use crate::cardinal::Cardinal;
use crate::presentation::{ComponentPattern, GraphPresentation, HostFamily, HostTerm, PatternKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: unknown family `{name}`")]
    UnknownFamily { line: usize, name: Name },
    #[error("line {line}: duplicate name `{name}`")]
    DuplicateName { line: usize, name: Name },
}

/// Strips a `#` comment. A `#` only opens a comment at the start of a line or
/// after whitespace, so replicate addresses such as `Z#0.z` survive.
pub(crate) fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'#' && (i == 0 || bytes[i - 1].is_ascii_whitespace()) {
            return &line[..i];
        }
    }
    line
}

/// Column (1-based) of `token` inside `line`.
pub(crate) fn col_of(line: &str, token: &str) -> usize {
    line.find(token).map_or(1, |i| i + 1)
}

pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, col, msg: msg.into() }
}

/// Incremental parser so that scenario files can embed presentation blocks.
#[derive(Debug, Default)]
pub(crate) struct PresentationParser {
    pres: GraphPresentation,
    refs: Vec<(usize, Name)>,
    names: Vec<(usize, Name)>,
    current: Option<usize>,
}

impl PresentationParser {
    /// Consumes `line` if it belongs to the presentation grammar.
    pub(crate) fn feed(&mut self, lineno: usize, raw: &str) -> Result<bool, ParseError> {
        let line = strip_comment(raw);
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => Ok(true),
            ["host", "family", name, rest @ ..] => {
                self.name(lineno, raw, name)?;
                let size = match rest {
                    ["index", "nat"] => Cardinal::Aleph0,
                    ["size", n] => n
                        .parse::<Cardinal>()
                        .map_err(|e| syntax(lineno, col_of(raw, n), e.to_string()))?,
                    _ => return Err(syntax(lineno, col_of(raw, name) + name.len() + 1, "expected `size <n>` or `index nat`")),
                };
                self.pres.families.push(HostFamily { name: name.to_string(), size });
                self.current = None;
                Ok(true)
            }
            ["host", "edge", ..] => {
                let rest = after_keywords(line, 2);
                let (a, b) = split_edge(rest).ok_or_else(|| syntax(lineno, col_of(raw, "edge") + 5, "expected `<term> -- <term>`"))?;
                let a = self.term(lineno, raw, a)?;
                let b = self.term(lineno, raw, b)?;
                self.pres.host_edges.push((a, b));
                self.current = None;
                Ok(true)
            }
            ["component", name, rest @ ..] => {
                self.name(lineno, raw, name)?;
                let kind = match rest {
                    ["indexed"] => PatternKind::Indexed,
                    ["replicated", m] => PatternKind::Replicated(
                        m.parse::<Cardinal>().map_err(|e| syntax(lineno, col_of(raw, m), e.to_string()))?,
                    ),
                    _ => {
                        return Err(syntax(
                            lineno,
                            col_of(raw, name) + name.len() + 1,
                            "expected `indexed` or `replicated <cardinal>`",
                        ))
                    }
                };
                self.pres.patterns.push(ComponentPattern {
                    name: name.to_string(),
                    kind,
                    inner: Vec::new(),
                    inner_edges: Vec::new(),
                    attach: Vec::new(),
                });
                self.current = Some(self.pres.patterns.len() - 1);
                Ok(true)
            }
            ["inner", "edge", ..] => {
                let rest = after_keywords(line, 2);
                let (a, b) = split_edge(rest).ok_or_else(|| syntax(lineno, col_of(raw, "edge") + 5, "expected `<v> -- <w>`"))?;
                let (a, b) = (self.local(lineno, raw, a)?, self.local(lineno, raw, b)?);
                self.pattern_mut(lineno, raw)?.inner_edges.push((a, b));
                Ok(true)
            }
            ["inner", v] => {
                let v = self.local(lineno, raw, v)?;
                self.pattern_mut(lineno, raw)?.inner.push(v);
                Ok(true)
            }
            ["attach", ..] => {
                let rest = after_keywords(line, 1);
                let (a, t) = split_edge(rest).ok_or_else(|| syntax(lineno, col_of(raw, "attach") + 7, "expected `<v> -- <term>`"))?;
                let a = self.local(lineno, raw, a)?;
                let t = self.term(lineno, raw, t)?;
                self.pattern_mut(lineno, raw)?.attach.push((a, t));
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    fn name(&mut self, lineno: usize, raw: &str, name: &str) -> Result<(), ParseError> {
        check_name(name).map_err(|m| syntax(lineno, col_of(raw, name), m))?;
        if self.names.iter().any(|(_, n)| n == name) {
            return Err(ParseError::DuplicateName { line: lineno, name: name.to_owned() });
        }
        self.names.push((lineno, name.to_owned()));
        Ok(())
    }

    fn local(&self, lineno: usize, raw: &str, v: &str) -> Result<Name, ParseError> {
        check_name(v).map_err(|m| syntax(lineno, col_of(raw, v), m))?;
        Ok(v.to_owned())
    }

    fn term(&mut self, lineno: usize, raw: &str, s: &str) -> Result<HostTerm, ParseError> {
        let col = col_of(raw, s);
        let open = s.find('[').ok_or_else(|| syntax(lineno, col, format!("expected `Name[...]`, found `{s}`")))?;
        let body = s[open + 1..].strip_suffix(']').ok_or_else(|| syntax(lineno, col + s.len(), "missing `]`"))?;
        let family = &s[..open];
        check_name(family).map_err(|m| syntax(lineno, col, m))?;
        let index = parse_index(body, Some("i")).map_err(|m| syntax(lineno, col + open + 1, m))?;
        self.refs.push((lineno, family.to_owned()));
        Ok(HostTerm { family: family.to_owned(), index })
    }

    fn pattern_mut(&mut self, lineno: usize, raw: &str) -> Result<&mut ComponentPattern, ParseError> {
        match self.current {
            Some(i) => Ok(&mut self.pres.patterns[i]),
            None => Err(syntax(lineno, raw.len() - raw.trim_start().len() + 1, "pattern line outside a `component` block")),
        }
    }

    pub(crate) fn finish(self) -> Result<GraphPresentation, ParseError> {
        for (line, name) in &self.refs {
            if self.pres.family(name).is_none() {
                return Err(ParseError::UnknownFamily { line: *line, name: name.clone() });
            }
        }
        Ok(self.pres)
    }
}

fn after_keywords(line: &str, n: usize) -> &str {
    let mut rest = line.trim_start();
    for _ in 0..n {
        rest = rest.split_once(char::is_whitespace).map_or("", |(_, r)| r).trim_start();
    }
    rest
}

fn split_edge(s: &str) -> Option<(&str, &str)> {
    let (a, b) = s.split_once("--")?;
    let (a, b) = (a.trim(), b.trim());
    (!a.is_empty() && !b.is_empty() && !a.contains(char::is_whitespace) && !b.contains(char::is_whitespace))
        .then_some((a, b))
}

/// Parses a presentation file.
pub fn parse_presentation(text: &str) -> Result<GraphPresentation, ParseError> {
    let mut parser = PresentationParser::default();
    for (i, line) in text.lines().enumerate() {
        if !parser.feed(i + 1, line)? {
            let trimmed = line.trim_start();
            let col = line.len() - trimmed.len() + 1;
            let word = trimmed.split_whitespace().next().unwrap_or("");
            return Err(syntax(i + 1, col, format!("unexpected `{word}`")));
        }
    }
    parser.finish()
}
