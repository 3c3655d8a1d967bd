//! Exhaustive search for local maps on tiny instances.
//!
//! Shares nothing with the linear solver beyond the complex type: towers
//! are located from the definition (a cycle of C/U whose high V-powers are
//! never boundaries), every map is expanded with explicit monomial
//! products, and all assignments are visited in Gray-code order.

use std::collections::HashMap;

use crate::algebra::{Bigrading, Complex, Monomial};

use super::{LocalMapError, LocalMapWitness, Role};

/// Dense GF(2) rows in echelon form with recorded pivot columns.
struct Echelon {
    rows: Vec<(usize, Vec<bool>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, v: &mut [bool]) {
        for (pivot, row) in &self.rows {
            if v[*pivot] {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= *b;
                }
            }
        }
    }

    /// Insert `v`; returns false when it was already in the span.
    fn insert(&mut self, mut v: Vec<bool>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&b| b) else {
            return false;
        };
        for (_, row) in self.rows.iter_mut() {
            if row[p] {
                for (a, b) in row.iter_mut().zip(&v) {
                    *a ^= *b;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    fn contains(&self, v: &[bool]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&b| !b)
    }
}

/// The quotient C/U, graded piece by graded piece.
struct ModU<'a> {
    c: &'a Complex,
}

impl ModU<'_> {
    /// Generators t such that some V^k t has grading g.
    fn slots(&self, g: Bigrading) -> Vec<usize> {
        (0..self.c.len())
            .filter(|&t| {
                let h = self.c.gr(t);
                h.gr_u == g.gr_u && h.gr_v >= g.gr_v && (h.gr_v - g.gr_v) % 2 == 0
            })
            .collect()
    }

    /// The vertical differential of the slot element at grading `g` for
    /// generator `t`, as a vector over `slots(g - (1,1))`.
    fn boundary(&self, g: Bigrading, t: usize, below: &[usize]) -> Vec<bool> {
        let k = Monomial::from_grading(g - self.c.gr(t)).expect("slot");
        let mut out = vec![false; below.len()];
        for a in self.c.arrows(t) {
            let Some(p) = k.times(a.coeff) else { continue };
            if matches!(p, Monomial::U(_)) {
                continue;
            }
            if let Some(pos) = below.iter().position(|&x| x == a.target) {
                out[pos] ^= true;
            }
        }
        out
    }

    fn boundaries(&self, g: Bigrading) -> (Vec<usize>, Echelon) {
        let here = self.slots(g);
        let above = self.slots(g - Bigrading::DIFF);
        let mut ech = Echelon::new();
        for &t in &above {
            ech.insert(self.boundary(g - Bigrading::DIFF, t, &here));
        }
        (here, ech)
    }

    /// Kernel basis of the differential out of grading g.
    fn cycles(&self, g: Bigrading) -> Vec<Vec<bool>> {
        let here = self.slots(g);
        let below = self.slots(g + Bigrading::DIFF);
        let images: Vec<Vec<bool>> = here.iter().map(|&t| self.boundary(g, t, &below)).collect();
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << here.len().min(20)) {
            let mut sum = vec![false; below.len()];
            for (i, img) in images.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (a, b) in sum.iter_mut().zip(img) {
                        *a ^= *b;
                    }
                }
            }
            if sum.iter().all(|&b| !b) {
                out.push((0..here.len()).map(|i| mask >> i & 1 == 1).collect());
            }
        }
        out
    }

    fn power_bound(&self) -> i64 {
        let total: u32 = (0..self.c.len())
            .flat_map(|s| self.c.arrows(s))
            .filter(|a| matches!(a.coeff, Monomial::V(_)))
            .map(|a| a.coeff.exponent())
            .sum();
        i64::from(total) + 1
    }

    /// Carry a vector over slots(g) to slots(g - 2N (0,1)) by multiplying by V^N.
    fn push_down(&self, v: &[bool], from: &[usize], to: &[usize]) -> Vec<bool> {
        let mut out = vec![false; to.len()];
        for (i, &t) in from.iter().enumerate() {
            if v[i] {
                let pos = to.iter().position(|&x| x == t).expect("slots grow downward");
                out[pos] ^= true;
            }
        }
        out
    }

    /// Top of the nontorsion tower and a cycle generating it there.
    fn tower(&self) -> Option<(Bigrading, Vec<(Monomial, usize)>)> {
        let depth = Bigrading::new(0, -2 * self.power_bound());
        let mut best: Option<(Bigrading, Vec<(Monomial, usize)>)> = None;
        let mut gradings: Vec<Bigrading> = self.c.generators().iter().map(|g| g.gr).collect();
        gradings.sort();
        gradings.dedup();
        for g in gradings {
            if best.as_ref().is_some_and(|(b, _)| b.gr_v >= g.gr_v) {
                continue;
            }
            let here = self.slots(g);
            let (deep, bounds) = self.boundaries(g + depth);
            for z in self.cycles(g) {
                if !bounds.contains(&self.push_down(&z, &here, &deep)) {
                    let elem = here
                        .iter()
                        .zip(&z)
                        .filter(|(_, &bit)| bit)
                        .map(|(&t, _)| (Monomial::from_grading(g - self.c.gr(t)).unwrap(), t))
                        .collect();
                    best = Some((g, elem));
                    break;
                }
            }
        }
        best
    }
}

/// Enumerate every graded module map and return the first local map found.
pub fn brute_force_local_map(
    s: &Complex,
    c: &Complex,
    budget: usize,
) -> Result<Option<LocalMapWitness>, LocalMapError> {
    let not_knot_like = |role| LocalMapError::NotKnotLike {
        role,
        reasons: Vec::new(),
    };
    let (top_s, z) = ModU { c: s }.tower().ok_or(not_knot_like(Role::Source))?;
    let target = ModU { c };
    let (top_c, _) = target.tower().ok_or(not_knot_like(Role::Target))?;
    let v_shift = top_c.gr_v - top_s.gr_v;
    let shift = Bigrading::new(0, v_shift);

    let mut unknowns: Vec<(usize, Monomial, usize)> = Vec::new();
    for src in 0..s.len() {
        for t in 0..c.len() {
            if let Some(m) = Monomial::from_grading(s.gr(src) + shift - c.gr(t)) {
                unknowns.push((src, m, t));
            }
        }
    }
    if unknowns.len() > budget {
        return Err(LocalMapError::BudgetExceeded {
            bits: unknowns.len(),
            budget,
        });
    }

    // Residual d f + f d, keyed by (source, target, monomial).
    let mut keys: HashMap<(usize, usize, Monomial), usize> = HashMap::new();
    let mut raw: Vec<Vec<usize>> = Vec::new();
    for &(src, m, t) in &unknowns {
        let mut hits = Vec::new();
        for a in c.arrows(t) {
            if let Some(p) = m.times(a.coeff) {
                hits.push((src, a.target, p));
            }
        }
        for s2 in 0..s.len() {
            for a in s.arrows(s2).iter().filter(|a| a.target == src) {
                if let Some(p) = a.coeff.times(m) {
                    hits.push((s2, t, p));
                }
            }
        }
        let mut ids = Vec::new();
        for h in hits {
            let next = keys.len();
            ids.push(*keys.entry(h).or_insert(next));
        }
        raw.push(ids);
    }
    let words = keys.len().div_ceil(64).max(1);
    let residual: Vec<Vec<u64>> = raw
        .iter()
        .map(|ids| {
            let mut w = vec![0u64; words];
            for &i in ids {
                w[i / 64] ^= 1 << (i % 64);
            }
            w
        })
        .collect();

    // V^N f(z), as a vector over the slots deep in the target tower.
    let depth = Bigrading::new(0, -2 * target.power_bound());
    let (deep, bounds) = target.boundaries(top_c + depth);
    let tower_part: Vec<Vec<bool>> = unknowns
        .iter()
        .map(|&(src, m, t)| {
            let mut v = vec![false; deep.len()];
            for &(mz, sz) in &z {
                if sz != src {
                    continue;
                }
                if let Some(p) = mz.times(m) {
                    if !matches!(p, Monomial::U(_)) {
                        let pos = deep.iter().position(|&x| x == t).expect("deep slot");
                        v[pos] ^= true;
                    }
                }
            }
            v
        })
        .collect();

    let mut state = vec![0u64; words];
    let mut tower = vec![false; deep.len()];
    let mut chosen = vec![false; unknowns.len()];
    let total: u64 = 1 << unknowns.len();
    for step in 0..total {
        if step > 0 {
            let bit = step.trailing_zeros() as usize;
            chosen[bit] = !chosen[bit];
            for (a, b) in state.iter_mut().zip(&residual[bit]) {
                *a ^= *b;
            }
            for (a, b) in tower.iter_mut().zip(&tower_part[bit]) {
                *a ^= *b;
            }
        }
        if state.iter().all(|&w| w == 0) && !bounds.contains(&tower) {
            let mut assignment = vec![Vec::new(); s.len()];
            for (i, &(src, m, t)) in unknowns.iter().enumerate() {
                if chosen[i] {
                    assignment[src].push((m, t));
                }
            }
            return Ok(Some(LocalMapWitness {
                assignment,
                v_shift,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{build_standard, StandardParams};

    fn std_c(xs: &[i64]) -> Complex {
        build_standard(&StandardParams::new(xs.to_vec()).unwrap())
    }

    #[test]
    fn identity_on_unit() {
        let w = brute_force_local_map(&Complex::unit(), &Complex::unit(), 24)
            .unwrap()
            .unwrap();
        assert_eq!(w.assignment, vec![vec![(Monomial::Unit, 0)]]);
        assert_eq!(w.v_shift, 0);
    }

    #[test]
    fn nothing_from_trefoil_complex_to_unit() {
        assert!(brute_force_local_map(&std_c(&[1, -1]), &Complex::unit(), 24)
            .unwrap()
            .is_none());
        assert!(brute_force_local_map(&Complex::unit(), &std_c(&[1, -1]), 24)
            .unwrap()
            .is_some());
    }

    #[test]
    fn tower_tops_match_definition() {
        let c = std_c(&[1, -2, 2, -1]);
        let (top, z) = ModU { c: &c }.tower().unwrap();
        assert_eq!(top, Bigrading::new(0, -6));
        assert_eq!(z, vec![(Monomial::Unit, 0)]);
    }

    #[test]
    fn refuses_large_instances() {
        let c = std_c(&[1, -2, 2, -1]);
        let err = brute_force_local_map(&c, &c, 3).unwrap_err();
        assert!(matches!(err, LocalMapError::BudgetExceeded { budget: 3, .. }));
    }
}
