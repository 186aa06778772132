//! Canonical text format for complexes:
//!
//! ```text
//! complex <name>
//! cells 0: v0 v1
//! cells 1: e0
//! boundary 1: e0 = 1*v1 - 1*v0
//! ```
//!
//! One `cells` line per degree starting at 0, then one `boundary` line
//! per cell of each positive degree (`0` for an empty boundary). The
//! serializer reproduces parsed complexes byte for byte.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::chain::{Basis, Chain, ChainComplex, ModuleMap};
use crate::error::{Error, Result};

pub fn serialize_complex(x: &ChainComplex) -> String {
    let mut out = String::new();
    out.push_str(&format!("complex {}\n", x.name()));
    for d in 0..=x.top_degree() {
        let labels = x.basis(d).expect("degree exists").labels().join(" ");
        if labels.is_empty() {
            out.push_str(&format!("cells {d}:\n"));
        } else {
            out.push_str(&format!("cells {d}: {labels}\n"));
        }
    }
    for d in 1..=x.top_degree() {
        let map = x.boundary(d).expect("boundary exists");
        for s in map.source().ids() {
            let label = map.source().label(s);
            let col = map.column(s).expect("column");
            out.push_str(&format!("boundary {d}: {label} = {}\n", col.term_string()));
        }
    }
    out
}

struct Cursor<'a> {
    line: &'a str,
    lineno: usize,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a str, lineno: usize) -> Self {
        Cursor { line, lineno, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.lineno,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_space(&mut self) {
        while self.line[self.pos..].starts_with(' ') || self.line[self.pos..].starts_with('\t') {
            self.pos += 1;
        }
    }

    fn next_token(&mut self) -> Option<&'a str> {
        self.skip_space();
        if self.pos >= self.line.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < self.line.len()
            && !self.line[self.pos..].starts_with(' ')
            && !self.line[self.pos..].starts_with('\t')
        {
            self.pos += 1;
        }
        Some(&self.line[start..self.pos])
    }

    fn expect_token(&mut self, what: &str) -> Result<&'a str> {
        self.next_token()
            .ok_or_else(|| self.error(format!("expected {what}")))
    }
}

/// One `coeff*label` or `0` term.
fn parse_term(cur: &Cursor, token: &str) -> Result<Option<(BigInt, String)>> {
    if token == "0" {
        return Ok(None);
    }
    let (coeff, label) = token
        .split_once('*')
        .ok_or_else(|| cur.error(format!("expected coeff*label, found `{token}`")))?;
    let coeff: BigInt = coeff
        .parse()
        .map_err(|_| cur.error(format!("malformed coefficient `{coeff}`")))?;
    if label.is_empty() {
        return Err(cur.error("empty label in term"));
    }
    Ok(Some((coeff, label.to_string())))
}

pub fn parse_complex(text: &str) -> Result<ChainComplex> {
    let mut name: Option<String> = None;
    let mut cells: Vec<Vec<String>> = Vec::new();
    // boundary terms per degree per cell label
    let mut boundaries: Vec<Vec<(usize, String, Vec<(BigInt, String)>)>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let mut cur = Cursor::new(line, lineno);
        let keyword = cur.expect_token("a directive")?;
        match keyword {
            "complex" => {
                if name.is_some() {
                    return Err(cur.error("duplicate complex header"));
                }
                name = Some(cur.expect_token("a complex name")?.to_string());
                if cur.next_token().is_some() {
                    return Err(cur.error("trailing tokens after complex name"));
                }
            }
            "cells" => {
                let d = cur.expect_token("a degree")?;
                let d = d
                    .strip_suffix(':')
                    .ok_or_else(|| cur.error("expected `cells <d>:`"))?;
                let d: usize = d
                    .parse()
                    .map_err(|_| cur.error(format!("malformed degree `{d}`")))?;
                if d != cells.len() {
                    return Err(cur.error(format!(
                        "cells lines must come in degree order; expected degree {}",
                        cells.len()
                    )));
                }
                let mut labels = Vec::new();
                while let Some(tok) = cur.next_token() {
                    labels.push(tok.to_string());
                }
                cells.push(labels);
            }
            "boundary" => {
                let d = cur.expect_token("a degree")?;
                let d = d
                    .strip_suffix(':')
                    .ok_or_else(|| cur.error("expected `boundary <d>:`"))?;
                let d: usize = d
                    .parse()
                    .map_err(|_| cur.error(format!("malformed degree `{d}`")))?;
                if d == 0 || d >= cells.len() {
                    return Err(cur.error(format!("boundary degree {d} out of range")));
                }
                let cell = cur.expect_token("a cell label")?.to_string();
                let eq = cur.expect_token("`=`")?;
                if eq != "=" {
                    return Err(cur.error(format!("expected `=`, found `{eq}`")));
                }
                let mut terms = Vec::new();
                let first = cur.expect_token("a term")?;
                if let Some(term) = parse_term(&cur, first)? {
                    terms.push(term);
                }
                loop {
                    let op = match cur.next_token() {
                        None => break,
                        Some(op) => op,
                    };
                    let sign = match op {
                        "+" => BigInt::from(1),
                        "-" => BigInt::from(-1),
                        other => {
                            return Err(cur.error(format!("expected `+` or `-`, found `{other}`")))
                        }
                    };
                    let tok = cur.expect_token("a term")?;
                    match parse_term(&cur, tok)? {
                        Some((c, l)) => terms.push((sign * c, l)),
                        None => return Err(cur.error("`0` cannot follow an operator")),
                    }
                }
                while boundaries.len() < cells.len() {
                    boundaries.push(Vec::new());
                }
                boundaries[d - 1].push((lineno, cell, terms));
            }
            other => {
                return Err(cur.error(format!("unknown directive `{other}`")));
            }
        }
    }

    let name = name.ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing `complex <name>` header".to_string(),
    })?;
    if cells.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "complex needs at least degree 0".to_string(),
        });
    }

    let mut bases: Vec<Arc<Basis>> = Vec::new();
    for (d, labels) in cells.iter().enumerate() {
        let b = Basis::new(format!("{name}#{d}"), labels.clone()).map_err(|e| Error::Parse {
            line: 1,
            column: 1,
            message: e.to_string(),
        })?;
        bases.push(b);
    }

    while boundaries.len() + 1 < bases.len() {
        boundaries.push(Vec::new());
    }

    let mut maps = Vec::new();
    for d in 1..bases.len() {
        let source = &bases[d];
        let target = &bases[d - 1];
        let mut columns: Vec<Option<Chain>> = vec![None; source.size()];
        for (lineno, cell, terms) in &boundaries[d - 1] {
            let err = |message: String| Error::Parse {
                line: *lineno,
                column: 1,
                message,
            };
            let id = source
                .id_of(cell)
                .ok_or_else(|| err(format!("unknown degree-{d} cell `{cell}`")))?;
            if columns[id.0].is_some() {
                return Err(err(format!("duplicate boundary for cell `{cell}`")));
            }
            let mut entries = Vec::new();
            for (coeff, label) in terms {
                let tid = target.id_of(label).ok_or_else(|| {
                    err(format!("unknown degree-{} cell `{label}`", d - 1))
                })?;
                entries.push((tid, coeff.clone()));
            }
            columns[id.0] = Some(Chain::from_entries(target, entries).map_err(|e| {
                err(e.to_string())
            })?);
        }
        for (i, col) in columns.iter().enumerate() {
            if col.is_none() {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!(
                        "missing boundary for degree-{d} cell `{}`",
                        source.label(crate::chain::BasisId(i))
                    ),
                });
            }
        }
        let columns = columns.into_iter().map(Option::unwrap).collect();
        maps.push(ModuleMap::new(source, target, columns).map_err(|e| Error::Parse {
            line: 1,
            column: 1,
            message: e.to_string(),
        })?);
    }

    let complex = ChainComplex::new(name, bases, maps).map_err(|e| Error::Parse {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    complex.validate()?;
    Ok(complex)
}
