//! Alexander polynomials of torus knots and cables, staircase parameters of
//! L-space knots, and evaluation of knot recipes.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::tensor;
use crate::cli::{Atom, KnotExpr};
use crate::localequiv::{standard_rep, LocalEquivError, RepResult};
use crate::standard::{build_standard, phi, ParamsError, Phi, StandardParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlexanderError {
    #[error("({0},{1}) are not coprime")]
    NotCoprime(i64, i64),
    #[error("torus knot parameters must be at least 2, got ({0},{1})")]
    TorusRange(i64, i64),
    #[error("not an L-space staircase: {0}")]
    NotStaircase(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecipeError {
    #[error(transparent)]
    Alexander(#[from] AlexanderError),
    #[error("cable companion `{0}` has no Alexander polynomial here")]
    NoPolynomial(String),
    #[error("Std literal: {0}")]
    Params(#[from] ParamsError),
    #[error(transparent)]
    LocalEquiv(#[from] LocalEquivError),
}

/// Integer Laurent polynomial in `t`, stored sparsely.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, coeff: i64) {
        let c = self.terms.entry(exp).or_default();
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Terms `(exponent, coefficient)` by decreasing exponent.
    pub fn terms_desc(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().rev().map(|(&e, &c)| (e, c))
    }

    /// `p(t^k)`.
    pub fn substitute_power(&self, k: i64) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(&e, &c)| (e * k, c)))
    }

    pub fn eval_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Exact quotient by a divisor with leading coefficient ±1.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (dd, lc) = divisor.terms.iter().next_back().map(|(&e, &c)| (e, c))?;
        if lc.abs() != 1 {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        let floor = self.min_degree().unwrap_or(0) - divisor.min_degree().unwrap_or(0);
        while let Some(rd) = rem.degree() {
            let e = rd - dd;
            if e < floor {
                return None;
            }
            let c = rem.coeff(rd) * lc;
            quot.add_term(e, c);
            rem = rem - divisor.clone() * LaurentPoly::monomial(e, c);
        }
        Some(quot)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, o: LaurentPoly) -> LaurentPoly {
        for (e, c) in o.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.into_iter().map(|(e, c)| (e, -c)))
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        self + (-o)
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &o.terms {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms_desc().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            f.write_str(sign)?;
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    if e == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = AlexanderError;

    /// Parse sums such as `t^8-t^7+t^4-t+1`, `2t^3 - 3*t`, `-1`.
    fn from_str(s: &str) -> Result<Self, AlexanderError> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(AlexanderError::Parse("empty input".into()));
        }
        let bad = |what: &str| AlexanderError::Parse(format!("`{what}` in `{s}`"));
        let mut p = LaurentPoly::zero();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if p.is_zero() && rest.len() == text.len() => (1, rest),
                _ => return Err(bad(rest)),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(bad(rest));
            }
            let (coeff, var) = match term.find('t') {
                None => (term, None),
                Some(i) => (&term[..i], Some(&term[i + 1..])),
            };
            let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
            let c: i64 = if coeff.is_empty() && var.is_some() {
                1
            } else {
                coeff.parse().map_err(|_| bad(term))?
            };
            let e: i64 = match var {
                None => 0,
                Some("") => 1,
                Some(v) => v
                    .strip_prefix('^')
                    .and_then(|k| k.parse::<u32>().ok())
                    .map(i64::from)
                    .ok_or_else(|| bad(term))?,
            };
            p.add_term(e, sign * c);
        }
        Ok(p)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn t_power_minus_one(k: i64) -> LaurentPoly {
    LaurentPoly::from_terms([(k, 1), (0, -1)])
}

/// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`.
pub fn torus_delta(p: i64, q: i64) -> Result<LaurentPoly, AlexanderError> {
    if p < 2 || q < 2 {
        return Err(AlexanderError::TorusRange(p, q));
    }
    if gcd(p, q) != 1 {
        return Err(AlexanderError::NotCoprime(p, q));
    }
    let num = t_power_minus_one(p * q) * t_power_minus_one(1);
    let den = t_power_minus_one(p) * t_power_minus_one(q);
    Ok(num.div_exact(&den).expect("cyclotomic quotient is exact"))
}

/// Alexander polynomial of the (p,q) cable of a knot with polynomial `inner`.
pub fn cable_delta(p: i64, q: i64, inner: &LaurentPoly) -> Result<LaurentPoly, AlexanderError> {
    Ok(inner.substitute_power(p) * torus_delta(p, q)?)
}

/// Exponents `b_0 > b_1 > ...` and gaps `c_i = b_{2i-2} - b_{2i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Staircase {
    pub b: Vec<i64>,
    pub c: Vec<i64>,
}

pub fn staircase(delta: &LaurentPoly) -> Result<Staircase, AlexanderError> {
    let not = |why: &str| Err(AlexanderError::NotStaircase(why.to_string()));
    let terms: Vec<(i64, i64)> = delta.terms_desc().collect();
    if terms.len().is_multiple_of(2) {
        return not("even number of terms");
    }
    for (i, &(_, c)) in terms.iter().enumerate() {
        let want = if i % 2 == 0 { 1 } else { -1 };
        if c != want {
            return not("coefficients do not alternate +1, -1, ..., +1");
        }
    }
    if delta.min_degree() != Some(0) {
        return not("constant term is not +1");
    }
    let b: Vec<i64> = terms.iter().map(|&(e, _)| e).collect();
    let top = b[0];
    if b.iter().zip(b.iter().rev()).any(|(&x, &y)| x != top - y) {
        return not("polynomial is not palindromic");
    }
    let c = (1..=b.len() / 2).map(|i| b[2 * i - 2] - b[2 * i - 1]).collect();
    Ok(Staircase { b, c })
}

/// Parameters `(c_1, -c_m, c_2, -c_{m-1}, ..., c_m, -c_1)`.
pub fn staircase_params(delta: &LaurentPoly) -> Result<StandardParams, AlexanderError> {
    let c = staircase(delta)?.c;
    let m = c.len();
    let mut out = Vec::with_capacity(2 * m);
    for i in 0..m {
        out.push(c[i]);
        out.push(-c[m - 1 - i]);
    }
    Ok(StandardParams::new(out).expect("gaps are positive"))
}

/// `phi_j = #{i : c_i = j}`.
pub fn lspace_phi(delta: &LaurentPoly) -> Result<Phi, AlexanderError> {
    let mut out = Phi::new();
    for c in staircase(delta)?.c {
        *out.entry(c as u32).or_default() += 1;
    }
    debug_assert_eq!(out, phi(staircase_params(delta)?.as_slice()));
    Ok(out)
}

fn trefoil() -> LaurentPoly {
    torus_delta(2, 3).expect("T(2,3)")
}

fn atom_delta(a: &Atom) -> Result<LaurentPoly, RecipeError> {
    match a {
        Atom::Torus(p, q) => Ok(torus_delta(*p, *q)?),
        Atom::Cable(inner, p, q) => Ok(cable_delta(*p, *q, &atom_delta(inner)?)?),
        Atom::D => Ok(trefoil()),
        Atom::Thin(_) | Atom::Std(_) => Err(RecipeError::NoPolynomial(a.to_string())),
    }
}

/// Standard parameters of one summand.
pub fn atom_params(a: &Atom) -> Result<StandardParams, RecipeError> {
    match a {
        Atom::Thin(tau) => {
            let s = tau.signum();
            let xs = (0..2 * tau.unsigned_abs())
                .map(|i| if i % 2 == 0 { s } else { -s })
                .collect();
            Ok(StandardParams::new(xs)?)
        }
        Atom::Std(xs) => Ok(StandardParams::new(xs.clone())?),
        _ => Ok(staircase_params(&atom_delta(a)?)?),
    }
}

/// Representative of the connected sum described by `e`, folding the
/// summands left to right and replacing the running product by its
/// standard representative after each step.
pub fn eval_recipe(e: &KnotExpr) -> Result<RepResult, RecipeError> {
    let mut parts = Vec::new();
    for (negated, atom) in e.summands() {
        let p = atom_params(atom)?;
        parts.push(if negated { p.negated() } else { p });
    }
    let mut result = standard_rep(&build_standard(&parts.first().cloned().unwrap_or_default()))?;
    for p in parts.iter().skip(1) {
        let c = tensor(&build_standard(&result.params), &build_standard(p));
        result = standard_rep(&c)?;
    }
    Ok(result)
}
