//! Line-oriented complex files:
//!
//! ```text
//! # comment
//! gen x0 0 -2
//! gen x1 -1 -1
//! d x1 = U^1 x0 + V^1 x2
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{validate, AlgebraError, Bigrading, Complex, Monomial, RawComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: AlgebraError,
    },
}

/// Split a line into whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        let splits = ch.is_whitespace() || ch == '+' || ch == '=';
        match (start, splits) {
            (None, false) => start = Some(i),
            (Some(s), true) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
        if ch == '+' || ch == '=' {
            out.push((i + 1, &line[i..i + 1]));
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || "_.*'|".contains(c))
}

pub fn parse_complex_file(text: &str) -> Result<Complex, FileError> {
    let mut raw = RawComplex::default();
    let mut gen_line: HashMap<String, usize> = HashMap::new();
    let mut d_line: HashMap<String, usize> = HashMap::new();
    let mut refs: Vec<(usize, usize, String)> = Vec::new();
    let mut d_index: HashMap<String, usize> = HashMap::new();

    for (k, full) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = full.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let err = |column: usize, message: String| FileError::Syntax {
            line: line_no,
            column,
            message,
        };
        let end_col = line.trim_end().len() + 1;
        let Some(&(col0, head)) = toks.first() else {
            continue;
        };
        match head {
            "gen" => {
                let [_, (cn, name), (cu, u), (cv, v)] = toks[..] else {
                    return Err(err(
                        toks.get(4).map_or(end_col, |t| t.0),
                        "expected `gen NAME GRU GRV`".into(),
                    ));
                };
                if !is_ident(name) {
                    return Err(err(cn, format!("invalid generator name `{name}`")));
                }
                let gu: i64 = u
                    .parse()
                    .map_err(|_| err(cu, format!("invalid grading `{u}`")))?;
                let gv: i64 = v
                    .parse()
                    .map_err(|_| err(cv, format!("invalid grading `{v}`")))?;
                if gen_line.insert(name.to_string(), line_no).is_some() {
                    return Err(FileError::Invalid {
                        line: line_no,
                        source: AlgebraError::DuplicateGenerator(name.to_string()),
                    });
                }
                raw.generators.push((name.to_string(), Bigrading::new(gu, gv)));
            }
            "d" => {
                let Some(&(cn, name)) = toks.get(1) else {
                    return Err(err(end_col, "expected a generator name".into()));
                };
                if !is_ident(name) {
                    return Err(err(cn, format!("invalid generator name `{name}`")));
                }
                if toks.get(2).map(|t| t.1) != Some("=") {
                    return Err(err(toks.get(2).map_or(end_col, |t| t.0), "expected `=`".into()));
                }
                refs.push((line_no, cn, name.to_string()));
                d_line.entry(name.to_string()).or_insert(line_no);
                let slot = *d_index.entry(name.to_string()).or_insert_with(|| {
                    raw.differential.push((name.to_string(), Vec::new()));
                    raw.differential.len() - 1
                });
                let rest = &toks[3..];
                if let [(_, "0")] = rest {
                    continue;
                }
                let mut i = 0;
                loop {
                    let Some(&(cm, mono)) = rest.get(i) else {
                        return Err(err(end_col, "expected a term".into()));
                    };
                    let coeff = parse_monomial(mono).ok_or_else(|| {
                        err(cm, format!("expected `1`, `U^K` or `V^K`, found `{mono}`"))
                    })?;
                    let Some(&(ct, target)) = rest.get(i + 1) else {
                        return Err(err(end_col, "expected a generator name".into()));
                    };
                    if !is_ident(target) {
                        return Err(err(ct, format!("invalid generator name `{target}`")));
                    }
                    refs.push((line_no, ct, target.to_string()));
                    raw.differential[slot].1.push((coeff, target.to_string()));
                    match rest.get(i + 2) {
                        None => break,
                        Some((_, "+")) => i += 3,
                        Some(&(c, other)) => {
                            return Err(err(c, format!("expected `+`, found `{other}`")));
                        }
                    }
                }
            }
            other => {
                return Err(err(col0, format!("unknown directive `{other}`")));
            }
        }
    }
    for (line, _, name) in &refs {
        if !gen_line.contains_key(name) {
            return Err(FileError::Invalid {
                line: *line,
                source: AlgebraError::UnknownGenerator(name.clone()),
            });
        }
    }
    validate(&raw).map_err(|e| {
        let line = match &e {
            AlgebraError::DuplicateArrow { from, .. }
            | AlgebraError::DegreeViolation { from, .. }
            | AlgebraError::DSquaredNonzero(from) => {
                d_line.get(from).or_else(|| gen_line.get(from)).copied()
            }
            AlgebraError::DuplicateGenerator(n) | AlgebraError::UnknownGenerator(n) => {
                gen_line.get(n).copied()
            }
        };
        FileError::Invalid {
            line: line.unwrap_or(0),
            source: e,
        }
    })
}

fn parse_monomial(s: &str) -> Option<Monomial> {
    if s == "1" {
        return Some(Monomial::Unit);
    }
    let (var, exp) = s.split_once('^')?;
    let k: u32 = exp.parse().ok()?;
    match var {
        "U" => Some(Monomial::u(k)),
        "V" => Some(Monomial::v(k)),
        _ => None,
    }
}

/// Generators in declaration order, then one `d` line per nonzero differential.
pub fn serialize_complex(c: &Complex) -> String {
    let mut out = String::new();
    for g in c.generators() {
        writeln!(out, "gen {} {} {}", g.name, g.gr.gr_u, g.gr.gr_v).unwrap();
    }
    for s in 0..c.len() {
        let arrows = c.arrows(s);
        if arrows.is_empty() {
            continue;
        }
        let terms: Vec<String> = arrows
            .iter()
            .map(|a| format!("{} {}", a.coeff, c.name(a.target)))
            .collect();
        writeln!(out, "d {} = {}", c.name(s), terms.join(" + ")).unwrap();
    }
    out
}
