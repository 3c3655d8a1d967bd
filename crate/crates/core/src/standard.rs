//! Standard and truncated complexes, the `!`-order, and the invariants read
//! off a parameter sequence.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{Arrow, Bigrading, Complex, Generator, Monomial};

/// Signed counts `j -> phi_j`, zero entries omitted.
pub type Phi = BTreeMap<u32, i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("parameter {index} is zero")]
    Zero { index: usize },
    #[error("standard parameters need even length, got {0}")]
    OddLength(usize),
    #[error("cannot parse `{0}` as an integer")]
    Syntax(String),
}

/// Parameters of a closed standard complex: even length, nonzero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StandardParams(Vec<i64>);

impl StandardParams {
    pub fn new(params: Vec<i64>) -> Result<Self, ParamsError> {
        check_nonzero(&params)?;
        if !params.len().is_multiple_of(2) {
            return Err(ParamsError::OddLength(params.len()));
        }
        Ok(StandardParams(params))
    }

    pub fn trivial() -> Self {
        StandardParams(Vec::new())
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entrywise negation: the parameters of the dual complex.
    pub fn negated(&self) -> Self {
        StandardParams(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for StandardParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

impl FromStr for StandardParams {
    type Err = ParamsError;
    fn from_str(s: &str) -> Result<Self, ParamsError> {
        StandardParams::new(parse_list(s)?)
    }
}

/// A prefix of a standard sequence, of any length, with the V-grading of
/// its first generator fixed by the caller.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TruncatedParams {
    params: Vec<i64>,
    pub anchor_v: i64,
}

impl TruncatedParams {
    pub fn new(params: Vec<i64>, anchor_v: i64) -> Result<Self, ParamsError> {
        check_nonzero(&params)?;
        Ok(TruncatedParams { params, anchor_v })
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }
}

fn check_nonzero(params: &[i64]) -> Result<(), ParamsError> {
    match params.iter().position(|&a| a == 0) {
        Some(index) => Err(ParamsError::Zero { index }),
        None => Ok(()),
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[i64]) -> fmt::Result {
    for (i, a) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

/// Parse `1,-2,2,-1`; blank input is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<i64>, ParamsError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|_| ParamsError::Syntax(tok.trim().to_string()))
        })
        .collect()
}

/// Gradings of x_0..x_n relative to x_0 = (0,0).
fn relative_gradings(params: &[i64]) -> Vec<Bigrading> {
    let mut g = Bigrading::ZERO;
    let mut out = vec![g];
    for (k, &b) in params.iter().enumerate() {
        let along = b.signum() - 2 * b;
        let across = b.signum();
        g = if k % 2 == 0 {
            g + Bigrading::new(along, across)
        } else {
            g + Bigrading::new(across, along)
        };
        out.push(g);
    }
    out
}

fn build(params: &[i64], gradings: Vec<Bigrading>) -> Complex {
    let n = params.len();
    let gens = gradings
        .into_iter()
        .enumerate()
        .map(|(i, gr)| Generator {
            name: format!("x{i}"),
            gr,
        })
        .collect();
    let mut diff = vec![Vec::new(); n + 1];
    for (k, &b) in params.iter().enumerate() {
        let len = b.unsigned_abs() as u32;
        let coeff = if k % 2 == 0 {
            Monomial::U(len)
        } else {
            Monomial::V(len)
        };
        if b > 0 {
            diff[k + 1].push(Arrow { coeff, target: k });
        } else {
            diff[k].push(Arrow {
                coeff,
                target: k + 1,
            });
        }
    }
    Complex::from_parts(gens, diff).expect("standard complexes have consistent gradings")
}

/// C(a_1..a_n) with gr_U(x_0) = 0 and gr_V(x_n) = 0.
pub fn build_standard(p: &StandardParams) -> Complex {
    let rel = relative_gradings(&p.0);
    let last_v = rel.last().map_or(0, |g| g.gr_v);
    let shift = Bigrading::new(0, -last_v);
    build(&p.0, rel.into_iter().map(|g| g + shift).collect())
}

/// The truncated complex on x_0..x_n with gr(x_0) = (0, anchor_v).
pub fn build_truncated(p: &TruncatedParams) -> Complex {
    let shift = Bigrading::new(0, p.anchor_v);
    build(
        &p.params,
        relative_gradings(&p.params)
            .into_iter()
            .map(|g| g + shift)
            .collect(),
    )
}

/// Compare under -1 < -2 < -3 < ... < 0 < ... < 3 < 2 < 1, i.e. by 1/a with 1/0 = 0.
pub fn bang_cmp(a: i64, b: i64) -> Ordering {
    a.signum().cmp(&b.signum()).then_with(|| b.cmp(&a))
}

/// Lexicographic comparison under [`bang_cmp`] with trailing zeros.
pub fn lex_cmp(p: &[i64], q: &[i64]) -> Ordering {
    let n = p.len().max(q.len());
    (0..n)
        .map(|i| {
            bang_cmp(
                p.get(i).copied().unwrap_or(0),
                q.get(i).copied().unwrap_or(0),
            )
        })
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

pub fn phi(p: &[i64]) -> Phi {
    let mut out = Phi::new();
    for &a in p.iter().step_by(2) {
        *out.entry(a.unsigned_abs() as u32).or_default() += a.signum();
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Pointwise sum of two phi maps.
pub fn phi_add(a: &Phi, b: &Phi) -> Phi {
    let mut out = a.clone();
    for (&j, &v) in b {
        *out.entry(j).or_default() += v;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn p_formula(p: &[i64]) -> i64 {
    let weighted: i64 = phi(p).iter().map(|(&j, &v)| j as i64 * v).sum();
    let signs: i64 = p.iter().map(|a| a.signum()).sum();
    -2 * weighted + signs
}

/// U-grading of the U-tower generator x_n of C(p).
pub fn p_of(p: &StandardParams) -> i64 {
    let closed = p_formula(&p.0);
    let c = build_standard(p);
    let from_grading = c.gr(c.len() - 1).gr_u;
    assert_eq!(closed, from_grading, "P of {p}");
    closed
}

pub fn tau_of(p: &StandardParams) -> i64 {
    -p_of(p) / 2
}

pub fn n_of(p: &[i64]) -> u32 {
    phi(p).keys().next_back().copied().unwrap_or(0)
}

/// Lower bound N/2 on the concordance genus; always a half-integer.
pub fn gc_lower(p: &[i64]) -> f64 {
    f64::from(n_of(p)) / 2.0
}

/// Lower bound N on the concordance unknotting number.
pub fn uc_lower(p: &[i64]) -> u32 {
    n_of(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftMode {
    Both,
    UOnly,
    VOnly,
}

/// Lengthen every arrow of length at least `m` by one.
pub fn shift(p: &StandardParams, m: u32, mode: ShiftMode) -> StandardParams {
    assert!(m >= 1);
    let m = i64::from(m);
    let out = p
        .0
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let horizontal = k % 2 == 0;
            let touched = match mode {
                ShiftMode::Both => true,
                ShiftMode::UOnly => horizontal,
                ShiftMode::VOnly => !horizontal,
            };
            if !touched {
                a
            } else if a >= m {
                a + 1
            } else if a <= -m {
                a - 1
            } else {
                a
            }
        })
        .collect();
    StandardParams(out)
}

pub fn is_symmetric(p: &[i64]) -> bool {
    let n = p.len();
    (0..n).all(|i| p[i] == -p[n - 1 - i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{check_knot_like, simplify, torsion_bounds, Side};

    fn sp(xs: &[i64]) -> StandardParams {
        StandardParams::new(xs.to_vec()).unwrap()
    }

    fn grades(c: &Complex) -> Vec<(i64, i64)> {
        c.generators().iter().map(|g| (g.gr.gr_u, g.gr.gr_v)).collect()
    }

    #[test]
    fn t34_gradings() {
        let c = build_standard(&sp(&[1, -2, 2, -1]));
        assert_eq!(grades(&c), vec![(0, -6), (-1, -5), (-2, -2), (-5, -1), (-6, 0)]);
        assert!(c.is_reduced());
        assert!(check_knot_like(&c, false).is_knot_like);
    }

    #[test]
    fn six_term_gradings() {
        let c = build_standard(&sp(&[1, -2, -1, 1, 2, -1]));
        assert_eq!(
            grades(&c),
            vec![(0, -4), (-1, -3), (-2, 0), (-1, -1), (0, -2), (-3, -1), (-4, 0)]
        );
    }

    #[test]
    fn six_term_gradings_shifted_in_the_middle_break_the_differential() {
        // Moving x2, x3, x4 by (-2,-2) to (-4,-2), (-3,-3), (-2,-4) keeps
        // the arrows among them but breaks d x1 = U x0 + V^2 x2.
        use crate::algebra::{validate, AlgebraError, RawComplex};
        let shifted = [(0, -4), (-1, -3), (-4, -2), (-3, -3), (-2, -4), (-3, -1), (-4, 0)];
        let mut raw: RawComplex = build_standard(&sp(&[1, -2, -1, 1, 2, -1])).to_raw();
        for (g, &(u, v)) in raw.generators.iter_mut().zip(&shifted) {
            g.1 = Bigrading::new(u, v);
        }
        assert!(matches!(validate(&raw), Err(AlgebraError::DegreeViolation { .. })));
    }

    #[test]
    fn trivial_and_negative_examples() {
        assert_eq!(build_standard(&StandardParams::trivial()), Complex::unit());
        let c = build_standard(&sp(&[-1, 1]));
        assert_eq!(grades(&c), vec![(0, 2), (1, 1), (2, 0)]);
    }

    #[test]
    fn truncated_anchor() {
        let c = build_truncated(&TruncatedParams::new(vec![1], -2).unwrap());
        assert_eq!(grades(&c), vec![(0, -2), (-1, -1)]);
        assert_eq!(c.arrows(1), &[Arrow { coeff: Monomial::U(1), target: 0 }]);
    }

    #[test]
    fn bang_order_examples() {
        assert_eq!(bang_cmp(-1, -2), Ordering::Less);
        assert_eq!(bang_cmp(3, 2), Ordering::Less);
        assert_eq!(bang_cmp(0, 0), Ordering::Equal);
        let chain = [-1, -2, -3, -7, 0, 7, 3, 2, 1];
        for w in chain.windows(2) {
            assert_eq!(bang_cmp(w[0], w[1]), Ordering::Less, "{w:?}");
        }
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_cmp(&[], &[1, -1]), Ordering::Less);
        assert_eq!(lex_cmp(&[1, -1], &[1, -2]), Ordering::Less);
        assert_eq!(lex_cmp(&[1, -2, 2, -1], &[1, -2, -1, 1, 2, -1]), Ordering::Greater);
        assert_eq!(lex_cmp(&[1, -1], &[1, -1, -3, 3]), Ordering::Greater);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&[1, -2, 2, -1]), Phi::from([(1, 1), (2, 1)]));
        assert_eq!(phi(&[-1, 1]), Phi::from([(1, -1)]));
        assert_eq!(phi(&[1, -2, -1, 1, 2, -1]), Phi::from([(2, 1)]));
    }

    #[test]
    fn p_tau_n_examples() {
        assert_eq!(p_of(&sp(&[1, -1])), -2);
        assert_eq!(p_of(&StandardParams::trivial()), 0);
        assert_eq!(p_of(&sp(&[1, -2, 2, -1])), -6);
        assert_eq!(tau_of(&sp(&[1, -2, 2, -1])), 3);
        assert_eq!(tau_of(&StandardParams::trivial()), 0);
        assert_eq!(tau_of(&sp(&[1, -1, 1, -1])), 2);
        assert_eq!(n_of(&[1, -2, 2, -1]), 2);
        assert_eq!(n_of(&[]), 0);
        assert_eq!(gc_lower(&[1, -3, 3, -1]), 1.5);
        assert_eq!(uc_lower(&[1, -3, 3, -1]), 3);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&sp(&[1, -1]), 1, ShiftMode::Both), sp(&[2, -2]));
        assert_eq!(shift(&sp(&[1, -3, 3, -1]), 2, ShiftMode::Both), sp(&[1, -4, 4, -1]));
        assert_eq!(shift(&sp(&[1, -2, 2, -1]), 3, ShiftMode::Both), sp(&[1, -2, 2, -1]));
        assert_eq!(shift(&sp(&[1, -1]), 1, ShiftMode::UOnly), sp(&[2, -1]));
        assert_eq!(shift(&sp(&[1, -1]), 1, ShiftMode::VOnly), sp(&[1, -2]));
        let p = sp(&[2, -3, -1, 2]);
        assert_eq!(
            shift(&shift(&p, 2, ShiftMode::UOnly), 2, ShiftMode::VOnly),
            shift(&p, 2, ShiftMode::Both)
        );
    }

    #[test]
    fn symmetry_examples() {
        assert!(is_symmetric(&[1, -2, 2, -1]));
        assert!(!is_symmetric(&[1, 1]));
        assert!(is_symmetric(&[1, -1, 2, 1, -1, -2, 1, -1]));
        assert!(is_symmetric(&[]));
    }

    #[test]
    fn parsing_round_trip() {
        let p: StandardParams = "1,-2, 2,-1".parse().unwrap();
        assert_eq!(p.to_string(), "1,-2,2,-1");
        assert_eq!("".parse::<StandardParams>().unwrap(), StandardParams::trivial());
        assert_eq!("1".parse::<StandardParams>(), Err(ParamsError::OddLength(1)));
        assert_eq!("1,0".parse::<StandardParams>(), Err(ParamsError::Zero { index: 1 }));
        assert!(matches!("1,x".parse::<StandardParams>(), Err(ParamsError::Syntax(_))));
    }

    #[test]
    fn simplification_recovers_arrow_lengths() {
        let p = sp(&[2, -3, -1, 1, 3, -2]);
        let c = build_standard(&p);
        let etas = |side| {
            let mut e: Vec<u32> = simplify(&c, side)
                .unwrap()
                .torsion_pairs
                .iter()
                .map(|t| t.eta)
                .collect();
            e.sort();
            e
        };
        assert_eq!(etas(Side::ModV), vec![1, 2, 3]);
        assert_eq!(etas(Side::ModU), vec![1, 2, 3]);
        assert_eq!(torsion_bounds(&c).unwrap(), (3, 3));
        assert_eq!(simplify(&c, Side::ModV).unwrap().tower_top.gr_u, p_of(&p));
    }
}
