//! Knot recipe expressions such as `Cable(D;3,4) - T(3,4)`.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Torus(i64, i64),
    Cable(Box<Atom>, i64, i64),
    Thin(i64),
    Std(Vec<i64>),
    /// Stands for the local class of T(2,3).
    D,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub negated: bool,
    pub multiplier: u32,
    pub atom: Atom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotExpr {
    pub terms: Vec<Term>,
}

impl KnotExpr {
    /// The summands with multipliers unrolled, as (negated, atom) pairs.
    pub fn summands(&self) -> Vec<(bool, &Atom)> {
        self.terms
            .iter()
            .flat_map(|t| std::iter::repeat_n((t.negated, &t.atom), t.multiplier as usize))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at column {column}: {message}")]
pub struct ExprError {
    /// 1-based character column; one past the end for truncated input.
    pub column: usize,
    pub message: String,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        let message = if self.pos >= self.chars.len() {
            format!("{} at end of input", message.into())
        } else {
            message.into()
        };
        Err(ExprError {
            column: self.pos + 1,
            message,
        })
    }

    fn expect(&mut self, want: char) -> Result<(), ExprError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            _ => self.error(format!("expected `{want}`")),
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w: Vec<char> = word.chars().collect();
        let end = self.pos + w.len();
        if end <= self.chars.len() && self.chars[self.pos..end] == w[..] {
            let next = self.chars.get(end);
            if next.is_none_or(|c| !c.is_alphanumeric()) {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn uint(&mut self) -> Result<u64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a number");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| {
            self.pos = start;
            self.error("number out of range")
        })
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        let negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        let v = i64::try_from(self.uint()?).or_else(|_| {
            self.pos = start;
            self.error("number out of range")
        })?;
        Ok(if negative { -v } else { v })
    }

    fn pair(&mut self) -> Result<(i64, i64), ExprError> {
        let p = self.int()?;
        self.expect(',')?;
        let q = self.int()?;
        Ok((p, q))
    }

    fn atom(&mut self) -> Result<Atom, ExprError> {
        if self.keyword("Cable") {
            self.expect('(')?;
            let inner = self.atom()?;
            self.expect(';')?;
            let (p, q) = self.pair()?;
            self.expect(')')?;
            Ok(Atom::Cable(Box::new(inner), p, q))
        } else if self.keyword("Thin") {
            self.expect('(')?;
            let t = self.int()?;
            self.expect(')')?;
            Ok(Atom::Thin(t))
        } else if self.keyword("Std") {
            self.expect('(')?;
            let mut xs = Vec::new();
            if self.peek() != Some(')') {
                xs.push(self.int()?);
                while self.peek() == Some(',') {
                    self.pos += 1;
                    xs.push(self.int()?);
                }
            }
            self.expect(')')?;
            Ok(Atom::Std(xs))
        } else if self.keyword("T") {
            self.expect('(')?;
            let (p, q) = self.pair()?;
            self.expect(')')?;
            Ok(Atom::Torus(p, q))
        } else if self.keyword("D") {
            Ok(Atom::D)
        } else {
            self.error("expected T(p,q), Cable(..), Thin(t), Std(..) or D")
        }
    }

    fn term(&mut self, negated: bool) -> Result<Term, ExprError> {
        let multiplier = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let start = self.pos;
            let k = self.uint()?;
            self.expect('*')?;
            u32::try_from(k).ok().filter(|&k| k >= 1).map_or_else(
                || {
                    self.pos = start;
                    self.error("multiplier must be at least 1")
                },
                Ok,
            )?
        } else {
            1
        };
        Ok(Term {
            negated,
            multiplier,
            atom: self.atom()?,
        })
    }

    fn expr(&mut self) -> Result<KnotExpr, ExprError> {
        let mut negated = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            negated = true;
        }
        let mut terms = vec![self.term(negated)?];
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    terms.push(self.term(false)?);
                }
                Some('-') => {
                    self.pos += 1;
                    terms.push(self.term(true)?);
                }
                None => break,
                Some(_) => return self.error("expected `+`, `-` or end of input"),
            }
        }
        Ok(KnotExpr { terms })
    }
}

pub fn parse_knot_expr(text: &str) -> Result<KnotExpr, ExprError> {
    Parser {
        chars: text.chars().collect(),
        pos: 0,
    }
    .expr()
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Torus(p, q) => write!(f, "T({p},{q})"),
            Atom::Cable(inner, p, q) => write!(f, "Cable({inner};{p},{q})"),
            Atom::Thin(t) => write!(f, "Thin({t})"),
            Atom::Std(xs) => {
                let body: Vec<String> = xs.iter().map(i64::to_string).collect();
                write!(f, "Std({})", body.join(","))
            }
            Atom::D => write!(f, "D"),
        }
    }
}

impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.negated) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if t.multiplier != 1 {
                write!(f, "{}*", t.multiplier)?;
            }
            write!(f, "{}", t.atom)?;
        }
        Ok(())
    }
}
