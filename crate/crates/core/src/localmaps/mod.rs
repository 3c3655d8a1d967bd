//! Existence of local maps and short local maps as affine systems over F2.
//!
//! A homogeneous map between free bigraded complexes is determined by a 0/1
//! matrix: for a source `s` and target `t` the coefficient can only be the
//! monomial whose grading is `gr(s) + shift - gr(t)`, and a product of two
//! such monomials vanishes exactly when the total grading is not that of a
//! monomial. Chain conditions therefore become linear equations indexed by
//! (source, target) slots.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::algebra::{Bigrading, Complex, Monomial};
use crate::f2::{solve_affine, BitVec};
use crate::homology::{check_knot_like, simplify, Side, Violation};
use crate::standard::{build_truncated, TruncatedParams};

mod oracle;
pub use oracle::brute_force_local_map;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Source,
    Target,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalMapError {
    #[error("{role:?} complex is not knot-like: {}", reasons.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; "))]
    NotKnotLike { role: Role, reasons: Vec<Violation> },
    #[error("{bits} unknown bits exceed the brute-force budget of {budget}")]
    BudgetExceeded { bits: usize, budget: usize },
}

/// A local map: `assignment[s]` is the image of source generator `s` as a
/// sum of monomial multiples of target generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMapWitness {
    pub assignment: Vec<Vec<(Monomial, usize)>>,
    pub v_shift: i64,
}

/// Which chain condition is imposed at one source generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Condition {
    Full,
    UPart,
    VPart,
}

impl Condition {
    fn admits(self, slot: Monomial) -> bool {
        match (self, slot) {
            (_, Monomial::Unit) => false,
            (Condition::Full, _) => true,
            (Condition::UPart, Monomial::U(_)) => true,
            (Condition::VPart, Monomial::V(_)) => true,
            _ => false,
        }
    }
}

/// The map's domain together with the class that must hit the tower.
struct Domain<'a> {
    complex: &'a Complex,
    tower: Vec<(Monomial, usize)>,
    v_shift: i64,
    /// Relaxed condition at the last generator, for short maps.
    last: Condition,
}

impl Domain<'_> {
    fn condition(&self, s: usize) -> Condition {
        if s + 1 == self.complex.len() {
            self.last
        } else {
            Condition::Full
        }
    }
}

fn require_knot_like(c: &Complex, role: Role) -> Result<(), LocalMapError> {
    let report = check_knot_like(c, false);
    if report.is_knot_like {
        Ok(())
    } else {
        Err(LocalMapError::NotKnotLike {
            role,
            reasons: report.reasons,
        })
    }
}

/// A knot-like complex prepared to receive local maps.
#[derive(Clone, Debug)]
pub struct Target {
    complex: Complex,
    top: Bigrading,
    /// Reads off the tower coordinate of a mod-U element at grading `top`.
    functional: BitVec,
    order: Vec<usize>,
    tower: Vec<(Monomial, usize)>,
}

impl Target {
    pub fn new(c: &Complex) -> Result<Target, LocalMapError> {
        require_knot_like(c, Role::Target)?;
        let report = simplify(c, Side::ModU).expect("knot-like complexes simplify");
        let top = report.tower_top;
        let slots: Vec<usize> = (0..c.len())
            .filter(|&t| {
                let g = c.gr(t);
                g.gr_u == top.gr_u && g.gr_v >= top.gr_v && (g.gr_v - top.gr_v) % 2 == 0
            })
            .collect();
        // Basis elements at this grading are indexed by the same generators;
        // solve lambda^T M = e_tower where M[t][i] = basis_change[i][t].
        let k = slots.len();
        let rows = slots
            .iter()
            .map(|&i| {
                let mut row = BitVec::zeros(k + 1);
                for (col, &t) in slots.iter().enumerate() {
                    if report.basis_change[i].get(t) {
                        row.set(col, true);
                    }
                }
                row.set(k, i == report.tower);
                row
            })
            .collect();
        let lambda = solve_affine(rows, k).expect("basis change is invertible");
        let functional = BitVec::from_indices(c.len(), lambda.ones().map(|col| slots[col]));
        let mut order: Vec<usize> = (0..c.len()).collect();
        order.sort_by_key(|&t| (c.gr(t), t));
        Ok(Target {
            complex: c.clone(),
            top,
            functional,
            order,
            tower: report.tower_generator,
        })
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// Grading of the top of the V-tower in H(C/U).
    pub fn tower_top(&self) -> Bigrading {
        self.top
    }

    /// Generator of the V-tower of H(C/U).
    pub fn tower_generator(&self) -> &[(Monomial, usize)] {
        &self.tower
    }

    /// Search for a local map from the prepared complex `s` into this one.
    pub fn local_map_from(&self, s: &Target) -> Option<LocalMapWitness> {
        let domain = Domain {
            complex: &s.complex,
            tower: s.tower.clone(),
            v_shift: self.top.gr_v - s.top.gr_v,
            last: Condition::Full,
        };
        self.solve(&domain)
    }

    /// Search for a short local map from the truncated complex on `params`,
    /// anchored at this complex's tower top.
    pub fn short_local_map_from(&self, params: &[i64]) -> Option<LocalMapWitness> {
        let p = TruncatedParams::new(params.to_vec(), self.top.gr_v).expect("nonzero parameters");
        self.short_from(&p)
    }

    /// Search for a local map from the standard complex on `params`
    /// (V-gradings shifted so x_0 sits at this complex's tower top).
    pub fn standard_map_from(&self, params: &[i64]) -> Option<LocalMapWitness> {
        let p = TruncatedParams::new(params.to_vec(), self.top.gr_v).expect("nonzero parameters");
        let s = build_truncated(&p);
        let domain = Domain {
            complex: &s,
            tower: vec![(Monomial::Unit, 0)],
            v_shift: 0,
            last: Condition::Full,
        };
        self.solve(&domain)
    }

    fn short_from(&self, p: &TruncatedParams) -> Option<LocalMapWitness> {
        let s = build_truncated(p);
        let domain = Domain {
            complex: &s,
            tower: vec![(Monomial::Unit, 0)],
            v_shift: self.top.gr_v - p.anchor_v,
            last: if p.len().is_multiple_of(2) {
                Condition::VPart
            } else {
                Condition::UPart
            },
        };
        self.solve(&domain)
    }

    fn solve(&self, d: &Domain<'_>) -> Option<LocalMapWitness> {
        let src = d.complex;
        let tgt = &self.complex;
        let shift = Bigrading::new(0, d.v_shift);

        let mut unknowns: Vec<(usize, usize, Monomial)> = Vec::new();
        let mut id_of: HashMap<(usize, usize), usize> = HashMap::new();
        for s in 0..src.len() {
            let h = src.gr(s) + shift;
            for &t in &self.order {
                if let Some(m) = Monomial::from_grading(h - tgt.gr(t)) {
                    id_of.insert((s, t), unknowns.len());
                    unknowns.push((s, t, m));
                }
            }
        }
        let width = unknowns.len() + 1;

        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); src.len()];
        for s in 0..src.len() {
            for a in src.arrows(s) {
                incoming[a.target].push(s);
            }
        }

        let mut rows: Vec<BitVec> = Vec::new();
        let mut row_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut toggle = |rows: &mut Vec<BitVec>, slot: (usize, usize), id: usize| {
            let r = *row_of.entry(slot).or_insert_with(|| {
                rows.push(BitVec::zeros(width));
                rows.len() - 1
            });
            rows[r].flip(id);
        };
        let slot_ok = |s: usize, t: usize| -> bool {
            let g = src.gr(s) + shift + Bigrading::DIFF - tgt.gr(t);
            Monomial::from_grading(g).is_some_and(|m| d.condition(s).admits(m))
        };
        for (id, &(s, t, _)) in unknowns.iter().enumerate() {
            // d(f(s)) picks up the arrows out of t.
            for a in tgt.arrows(t) {
                if slot_ok(s, a.target) {
                    toggle(&mut rows, (s, a.target), id);
                }
            }
            // f(d(s'')) picks up f(s) for every arrow s'' -> s.
            for &s2 in &incoming[s] {
                if slot_ok(s2, t) {
                    toggle(&mut rows, (s2, t), id);
                }
            }
        }

        let mut tower_row = BitVec::zeros(width);
        for &(_, s) in &d.tower {
            for t in self.functional.ones() {
                if let Some(&id) = id_of.get(&(s, t)) {
                    tower_row.flip(id);
                }
            }
        }
        tower_row.set(width - 1, true);
        rows.push(tower_row);

        let x = solve_affine(rows, unknowns.len())?;
        let mut assignment = vec![Vec::new(); src.len()];
        for id in x.ones() {
            let (s, t, m) = unknowns[id];
            assignment[s].push((m, t));
        }
        Some(LocalMapWitness {
            assignment,
            v_shift: d.v_shift,
        })
    }

    /// Check a witness by direct expansion of both sides of the chain
    /// condition and of the tower coordinate.
    fn check(&self, d: &Domain<'_>, w: &LocalMapWitness) -> bool {
        let src = d.complex;
        let tgt = &self.complex;
        if w.assignment.len() != src.len() || w.v_shift != d.v_shift {
            return false;
        }
        let shift = Bigrading::new(0, w.v_shift);
        for (s, image) in w.assignment.iter().enumerate() {
            if image
                .iter()
                .any(|&(m, t)| t >= tgt.len() || m.grading() + tgt.gr(t) != src.gr(s) + shift)
            {
                return false;
            }
        }
        for s in 0..src.len() {
            let mut acc: BTreeMap<(usize, Monomial), bool> = BTreeMap::new();
            for &(m, t) in &w.assignment[s] {
                for a in tgt.arrows(t) {
                    if let Some(p) = m.times(a.coeff) {
                        *acc.entry((a.target, p)).or_default() ^= true;
                    }
                }
            }
            for a in src.arrows(s) {
                for &(m, t) in &w.assignment[a.target] {
                    if let Some(p) = a.coeff.times(m) {
                        *acc.entry((t, p)).or_default() ^= true;
                    }
                }
            }
            let cond = d.condition(s);
            if acc.iter().any(|(&(_, p), &odd)| odd && cond.admits(p)) {
                return false;
            }
        }
        let mut image = BitVec::zeros(tgt.len());
        for &(mk, s) in &d.tower {
            for &(m, t) in &w.assignment[s] {
                if let Some(p) = mk.times(m) {
                    if !matches!(p, Monomial::U(_)) {
                        image.flip(t);
                    }
                }
            }
        }
        image.dot(&self.functional)
    }
}

pub fn exists_local_map(s: &Complex, c: &Complex) -> Result<Option<LocalMapWitness>, LocalMapError> {
    require_knot_like(s, Role::Source)?;
    let target = Target::new(c)?;
    let source = Target::new(s)?;
    Ok(target.local_map_from(&source))
}

pub fn exists_short_local_map(
    p: &TruncatedParams,
    c: &Complex,
) -> Result<Option<LocalMapWitness>, LocalMapError> {
    Ok(Target::new(c)?.short_from(p))
}

/// Verify that `w` is a local map from `s` to `c`.
pub fn verify_local_map(s: &Complex, c: &Complex, w: &LocalMapWitness) -> Result<bool, LocalMapError> {
    let target = Target::new(c)?;
    let source = Target::new(s)?;
    let domain = Domain {
        complex: s,
        tower: source.tower.clone(),
        v_shift: target.top.gr_v - source.top.gr_v,
        last: Condition::Full,
    };
    Ok(target.check(&domain, w))
}

/// Verify that `w` is a short local map from the truncated complex `p`.
pub fn verify_short_local_map(
    p: &TruncatedParams,
    c: &Complex,
    w: &LocalMapWitness,
) -> Result<bool, LocalMapError> {
    let target = Target::new(c)?;
    let s = build_truncated(p);
    let domain = Domain {
        complex: &s,
        tower: vec![(Monomial::Unit, 0)],
        v_shift: target.top.gr_v - p.anchor_v,
        last: if p.len().is_multiple_of(2) {
            Condition::VPart
        } else {
            Condition::UPart
        },
    };
    Ok(target.check(&domain, w))
}
