//! Simplified bases for C/U and C/V, towers and torsion, knot-like checks.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Bigrading, Complex, Monomial};
use crate::f2::BitVec;

/// Which variable is set to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// C/U with the vertical differential; homology is an F[V]-module.
    ModU,
    /// C/V with the horizontal differential; homology is an F[U]-module.
    ModV,
}

impl Side {
    /// Whether an arrow survives on this side.
    fn keeps(self, m: Monomial) -> bool {
        matches!(
            (self, m),
            (Side::ModU, Monomial::V(_)) | (Side::ModV, Monomial::U(_))
        )
    }

    /// The grading component the surviving variable lowers.
    fn component(self, g: Bigrading) -> i64 {
        match self {
            Side::ModU => g.gr_v,
            Side::ModV => g.gr_u,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::ModU => "mod U",
            Side::ModV => "mod V",
        })
    }
}

/// `d source = X^eta target` in the simplified basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionPair {
    pub source: usize,
    pub target: usize,
    pub eta: u32,
}

/// Simplified basis of C/U or C/V. Basis element `i` has the grading of
/// declared generator `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub side: Side,
    pub tower: usize,
    pub tower_generator: Vec<(Monomial, usize)>,
    pub tower_top: Bigrading,
    pub torsion_pairs: Vec<TorsionPair>,
    /// Row `i` lists the declared generators in basis element `i`; the
    /// coefficients are the monomials forced by the gradings.
    pub basis_change: Vec<BitVec>,
}

impl TowerReport {
    pub fn max_eta(&self) -> u32 {
        self.torsion_pairs.iter().map(|p| p.eta).max().unwrap_or(0)
    }

    /// Basis element `i` as monomial multiples of declared generators.
    pub fn element(&self, c: &Complex, i: usize) -> Vec<(Monomial, usize)> {
        self.basis_change[i]
            .ones()
            .map(|g| {
                let m = Monomial::from_grading(c.gr(i) - c.gr(g))
                    .expect("basis changes are homogeneous");
                (m, g)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("complex is not reduced")]
    NotReduced,
    #[error("{side} homology has {count} nontorsion towers, expected 1")]
    MultipleTowers { side: Side, count: usize },
}

struct Decomposition {
    pairs: Vec<TorsionPair>,
    unpaired: Vec<usize>,
    basis: Vec<BitVec>,
}

/// Smith-style reduction of the one-variable differential: repeatedly take
/// the live entry of least exponent and clear its row and column.
fn decompose(c: &Complex, side: Side) -> Decomposition {
    let n = c.len();
    let mut d: Vec<BitVec> = vec![BitVec::zeros(n); n];
    for s in 0..n {
        for a in c.arrows(s) {
            if side.keeps(a.coeff) {
                d[a.target].set(s, true);
            }
        }
    }
    let eta = |t: usize, s: usize| -> u32 {
        let e = side.component(c.gr(t)) - side.component(c.gr(s)) + 1;
        debug_assert!(e > 0 && e % 2 == 0);
        (e / 2) as u32
    };
    let mut basis: Vec<BitVec> = (0..n).map(|i| BitVec::from_indices(n, [i])).collect();
    let mut live = vec![true; n];
    let mut pairs = Vec::new();
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for t in (0..n).filter(|&t| live[t]) {
            for s in d[t].ones() {
                if !live[s] {
                    continue;
                }
                let k = (eta(t, s), s, t);
                if best.is_none_or(|b| k < b) {
                    best = Some(k);
                }
            }
        }
        let Some((k, s, t)) = best else { break };
        // Clear column s: t' <- t' + X^j t changes basis element t.
        for r in 0..n {
            if r != t && live[r] && d[r].get(s) {
                let pivot = d[t].clone();
                d[r].xor_assign(&pivot);
                let extra = basis[r].clone();
                basis[t].xor_assign(&extra);
            }
        }
        // Clear row t: s'' <- s'' + X^j s.
        let others: Vec<usize> = d[t].ones().filter(|&q| q != s).collect();
        for q in others {
            d[t].flip(q);
            let extra = basis[s].clone();
            basis[q].xor_assign(&extra);
        }
        live[s] = false;
        live[t] = false;
        pairs.push(TorsionPair {
            source: s,
            target: t,
            eta: k,
        });
    }
    let unpaired = (0..n).filter(|&i| live[i]).collect();
    Decomposition {
        pairs,
        unpaired,
        basis,
    }
}

pub fn simplify(c: &Complex, side: Side) -> Result<TowerReport, HomologyError> {
    if !c.is_reduced() {
        return Err(HomologyError::NotReduced);
    }
    let dec = decompose(c, side);
    if dec.unpaired.len() != 1 {
        return Err(HomologyError::MultipleTowers {
            side,
            count: dec.unpaired.len(),
        });
    }
    let tower = dec.unpaired[0];
    let mut report = TowerReport {
        side,
        tower,
        tower_generator: Vec::new(),
        tower_top: c.gr(tower),
        torsion_pairs: dec.pairs,
        basis_change: dec.basis,
    };
    report.tower_generator = report.element(c, tower);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotReduced,
    TowerCount { side: Side, count: usize },
    /// The tower exists but sits off the normalized grading.
    TowerOffset { side: Side, top: Bigrading },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReduced => write!(f, "complex is not reduced"),
            Violation::TowerCount { side, count } => {
                write!(f, "{side} homology has {count} nontorsion towers")
            }
            Violation::TowerOffset { side, top } => {
                write!(f, "{side} tower top sits at {top}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotLikeReport {
    pub is_knot_like: bool,
    pub applied_shift: Bigrading,
    pub reasons: Vec<Violation>,
}

pub fn check_knot_like(c: &Complex, allow_shift: bool) -> KnotLikeReport {
    let mut reasons = Vec::new();
    if !c.is_reduced() {
        reasons.push(Violation::NotReduced);
        return KnotLikeReport {
            is_knot_like: false,
            applied_shift: Bigrading::ZERO,
            reasons,
        };
    }
    let mut tops = [None, None];
    for (k, side) in [Side::ModU, Side::ModV].into_iter().enumerate() {
        let dec = decompose(c, side);
        if dec.unpaired.len() == 1 {
            tops[k] = Some(c.gr(dec.unpaired[0]));
        } else {
            reasons.push(Violation::TowerCount {
                side,
                count: dec.unpaired.len(),
            });
        }
    }
    let [Some(top_u), Some(top_v)] = tops else {
        return KnotLikeReport {
            is_knot_like: false,
            applied_shift: Bigrading::ZERO,
            reasons,
        };
    };
    let shift = Bigrading::new(-top_u.gr_u, -top_v.gr_v);
    if allow_shift || shift == Bigrading::ZERO {
        return KnotLikeReport {
            is_knot_like: true,
            applied_shift: if allow_shift { shift } else { Bigrading::ZERO },
            reasons,
        };
    }
    if top_u.gr_u != 0 {
        reasons.push(Violation::TowerOffset {
            side: Side::ModU,
            top: top_u,
        });
    }
    if top_v.gr_v != 0 {
        reasons.push(Violation::TowerOffset {
            side: Side::ModV,
            top: top_v,
        });
    }
    KnotLikeReport {
        is_knot_like: false,
        applied_shift: Bigrading::ZERO,
        reasons,
    }
}

pub fn apply_shift(c: &Complex, shift: Bigrading) -> Complex {
    c.shifted(shift)
}

/// `(M_U, M_V)`: the largest U-torsion order of H(C/V) and the largest
/// V-torsion order of H(C/U).
pub fn torsion_bounds(c: &Complex) -> Result<(u32, u32), HomologyError> {
    let m_u = simplify(c, Side::ModV)?.max_eta();
    let m_v = simplify(c, Side::ModU)?.max_eta();
    Ok((m_u, m_v))
}
