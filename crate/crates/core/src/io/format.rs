//! The line-oriented instance format.
//!
//! ```text
//! # comment
//! polygon = (x1,y1) (x2,y2) ...
//! basis   = (u1x,u1y) (u2x,u2y)
//! offsets = (t1x,t1y) ...        # optional, default (0,0)
//! k       = 5                    # optional
//! ```
//!
//! Coordinates are integers or fractions `p/q`. Decimals are rejected so
//! that every instance is exact.

use std::fmt;

use crate::geometry::{CsPolygon, Point};
use crate::lattice::{Lattice, TranslateMultiset};
use crate::rational::{self, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// The text does not follow the format.
    Syntax,
    /// Well-formed, but the polygon or lattice is not valid.
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into(), kind: ParseErrorKind::Syntax }
    }

    fn invalid(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into(), kind: ParseErrorKind::Invalid }
    }
}

/// The contents of an instance file, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceConfig {
    pub polygon: Vec<Point>,
    pub basis: (Point, Point),
    pub offsets: Vec<Point>,
    pub k: Option<u32>,
}

/// A validated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub config: InstanceConfig,
    pub polygon: CsPolygon,
    pub multiset: TranslateMultiset,
}

impl InstanceConfig {
    /// Serializes in the instance format; [`parse_instance`] reads it back
    /// to an equal config.
    pub fn to_text(&self) -> String {
        let pts = |v: &[Point]| v.iter().map(Point::to_string).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        out.push_str(&format!("polygon = {}\n", pts(&self.polygon)));
        out.push_str(&format!("basis = {} {}\n", self.basis.0, self.basis.1));
        out.push_str(&format!("offsets = {}\n", pts(&self.offsets)));
        if let Some(k) = self.k {
            out.push_str(&format!("k = {k}\n"));
        }
        out
    }

    pub fn build(&self) -> Result<Instance, String> {
        let polygon = CsPolygon::new(self.polygon.clone()).map_err(|e| e.to_string())?;
        let lattice = Lattice::new(self.basis.0.clone(), self.basis.1.clone()).map_err(|e| e.to_string())?;
        let multiset = TranslateMultiset::new(lattice, self.offsets.clone()).map_err(|e| e.to_string())?;
        Ok(Instance { config: self.clone(), polygon, multiset })
    }
}

impl fmt::Display for InstanceConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Cursor over one value, tracking 1-based columns.
struct Cursor {
    line: usize,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Cursor {
    fn new(line: usize, text: &str, start_column: usize) -> Self {
        let chars = text.chars().enumerate().map(|(i, c)| (start_column + i, c)).collect();
        Cursor { line, chars, pos: 0 }
    }

    fn column(&self) -> usize {
        match self.chars.get(self.pos) {
            Some((c, _)) => *c,
            None => self.chars.last().map(|(c, _)| c + 1).unwrap_or(1),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some((_, c)) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some((_, c)) if *c == want => {
                self.pos += 1;
                Ok(())
            }
            Some((col, c)) => Err(ParseError::syntax(self.line, *col, format!("expected '{want}', found '{c}'"))),
            None => Err(ParseError::syntax(self.line, self.column(), format!("expected '{want}', found end of line"))),
        }
    }

    /// Reads a rational up to (not including) one of `stops`.
    fn rational(&mut self, stops: &[char]) -> Result<Rat, ParseError> {
        self.skip_ws();
        let col = self.column();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some((_, c)) if !stops.contains(c)) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        rational::parse(text.trim()).map_err(|e| ParseError::syntax(self.line, col, format!("{e}: {:?}", text.trim())))
    }

    fn point(&mut self) -> Result<Point, ParseError> {
        self.expect('(')?;
        let x = self.rational(&[',', ')'])?;
        self.expect(',')?;
        let y = self.rational(&[')', ','])?;
        self.expect(')')?;
        Ok(Point::new(x, y))
    }

    fn points(&mut self) -> Result<Vec<Point>, ParseError> {
        let mut out = Vec::new();
        while !self.at_end() {
            out.push(self.point()?);
        }
        Ok(out)
    }
}

struct Entry {
    line: usize,
    value_column: usize,
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut polygon: Option<(Entry, Vec<Point>)> = None;
    let mut basis: Option<(Entry, Vec<Point>)> = None;
    let mut offsets: Option<(Entry, Vec<Point>)> = None;
    let mut k: Option<u32> = None;
    let mut k_seen = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(ParseError::syntax(line, col, "expected 'key = value'"));
        };
        let key = content[..eq].trim();
        let key_column = content.len() - content.trim_start().len() + 1;
        let value = &content[eq + 1..];
        let after_eq = content[..eq + 1].chars().count() + 1;
        let value_column = after_eq + (value.len() - value.trim_start().len());
        let entry = Entry { line, value_column };
        let mut cur = Cursor::new(line, value, after_eq);
        let duplicate = || ParseError::syntax(line, key_column, format!("duplicate key '{key}'"));
        match key {
            "polygon" | "basis" | "offsets" => {
                let slot = match key {
                    "polygon" => &mut polygon,
                    "basis" => &mut basis,
                    _ => &mut offsets,
                };
                if slot.is_some() {
                    return Err(duplicate());
                }
                *slot = Some((entry, cur.points()?));
            }
            "k" => {
                if k_seen {
                    return Err(duplicate());
                }
                k_seen = true;
                let v = value.trim();
                let n: u32 = v
                    .parse()
                    .map_err(|_| ParseError::syntax(line, value_column, format!("k must be a positive integer, got {v:?}")))?;
                if n == 0 {
                    return Err(ParseError::invalid(line, value_column, "k must be at least 1"));
                }
                k = Some(n);
            }
            _ => return Err(ParseError::syntax(line, key_column, format!("unknown key '{key}'"))),
        }
    }

    let end_line = text.lines().count().max(1);
    let (poly_entry, poly) = polygon.ok_or_else(|| ParseError::syntax(end_line, 1, "missing key 'polygon'"))?;
    let (basis_entry, basis_pts) = basis.ok_or_else(|| ParseError::syntax(end_line, 1, "missing key 'basis'"))?;
    if basis_pts.len() != 2 {
        return Err(ParseError::syntax(
            basis_entry.line,
            basis_entry.value_column,
            format!("basis needs exactly 2 vectors, got {}", basis_pts.len()),
        ));
    }
    let (offsets_entry, offs) = match offsets {
        Some((e, o)) => {
            if o.is_empty() {
                return Err(ParseError::syntax(e.line, e.value_column, "offsets must list at least one vector"));
            }
            (Some(e), o)
        }
        None => (None, vec![Point::origin()]),
    };

    let polygon = CsPolygon::new(poly.clone())
        .map_err(|e| ParseError::invalid(poly_entry.line, poly_entry.value_column, e.to_string()))?;
    let mut b = basis_pts.into_iter();
    let (u1, u2) = (b.next().expect("2 vectors"), b.next().expect("2 vectors"));
    let lattice = Lattice::new(u1.clone(), u2.clone())
        .map_err(|e| ParseError::invalid(basis_entry.line, basis_entry.value_column, e.to_string()))?;
    let multiset = TranslateMultiset::new(lattice, offs.clone()).map_err(|e| {
        let (l, c) = offsets_entry.as_ref().map(|e| (e.line, e.value_column)).unwrap_or((end_line, 1));
        ParseError::invalid(l, c, e.to_string())
    })?;
    let config = InstanceConfig { polygon: poly, basis: (u1, u2), offsets: offs, k };
    Ok(Instance { config, polygon, multiset })
}
