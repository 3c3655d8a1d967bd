//! Standard representatives by greedy extraction of the `a_i`, and the
//! total order on local equivalence classes.

use std::cmp::Ordering;

use thiserror::Error;

use crate::algebra::{reduce, Complex};
use crate::exec::Exec;
use crate::homology::{apply_shift, check_knot_like, torsion_bounds, Violation};
use crate::localmaps::{verify_local_map, LocalMapError, LocalMapWitness, Target};
use crate::standard::{build_standard, lex_cmp, StandardParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalEquivError {
    #[error("complex is not knot-like: {}", .0.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; "))]
    NotKnotLike(Vec<Violation>),
    #[error("representative exceeded {cap} parameters")]
    LengthCapExceeded { cap: usize },
    #[error("no candidate succeeded at position {position}")]
    NoCandidate { position: usize },
    #[error("local maps to and from the representative could not be verified")]
    VerificationFailed,
    #[error(transparent)]
    LocalMap(#[from] LocalMapError),
}

/// Candidates tried at one position, in order, with their outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub tested: Vec<(i64, bool)>,
}

impl Step {
    /// The accepted candidate; 0 means the sequence stopped here.
    pub fn chosen(&self) -> Option<i64> {
        self.tested.iter().find(|(_, ok)| *ok).map(|(b, _)| *b)
    }
}

#[derive(Clone, Debug)]
pub struct RepResult {
    pub params: StandardParams,
    /// Local map from the standard complex into the input.
    pub into: LocalMapWitness,
    /// Local map from the input onto the standard complex.
    pub from: LocalMapWitness,
    pub trace: Vec<Step>,
}

/// Reduce and shift gradings so that both towers sit at grading zero.
pub fn normalize(c: &Complex) -> Result<Complex, LocalEquivError> {
    let r = reduce(c);
    let report = check_knot_like(&r, true);
    if !report.is_knot_like {
        return Err(LocalEquivError::NotKnotLike(report.reasons));
    }
    Ok(apply_shift(&r, report.applied_shift))
}

pub fn standard_rep(c: &Complex) -> Result<RepResult, LocalEquivError> {
    standard_rep_with(c, Exec::default())
}

pub fn standard_rep_with(c: &Complex, exec: Exec) -> Result<RepResult, LocalEquivError> {
    let c = normalize(c)?;
    let target = Target::new(&c)?;
    let (m_u, m_v) = torsion_bounds(&c).expect("knot-like complexes have bounds");
    let cap = 4 * c.len() + 4;
    let mut prefix: Vec<i64> = Vec::new();
    let mut trace = Vec::new();
    loop {
        let k = prefix.len();
        if k > cap {
            return Err(LocalEquivError::LengthCapExceeded { cap });
        }
        let m = i64::from(if k.is_multiple_of(2) { m_u } else { m_v });
        let mut candidates: Vec<i64> = (1..=m).collect();
        if k.is_multiple_of(2) {
            candidates.push(0);
        }
        candidates.extend(-m..=-1);
        let hit = exec.position_first(&candidates, |&b| {
            let mut p = prefix.clone();
            if b == 0 {
                target.standard_map_from(&p).is_some()
            } else {
                p.push(b);
                target.short_local_map_from(&p).is_some()
            }
        });
        let tested = match hit {
            Some(i) => candidates[..=i]
                .iter()
                .enumerate()
                .map(|(j, &b)| (b, j == i))
                .collect(),
            None => candidates.iter().map(|&b| (b, false)).collect(),
        };
        trace.push(Step { tested });
        match hit.map(|i| candidates[i]) {
            None => return Err(LocalEquivError::NoCandidate { position: k + 1 }),
            Some(0) => break,
            Some(b) => prefix.push(b),
        }
    }
    let params = StandardParams::new(prefix).expect("stops at even length");
    let s = build_standard(&params);
    let source = Target::new(&s)?;
    let (Some(into), Some(from)) = (target.local_map_from(&source), source.local_map_from(&target)) else {
        return Err(LocalEquivError::VerificationFailed);
    };
    if !verify_local_map(&s, &c, &into)? || !verify_local_map(&c, &s, &from)? {
        return Err(LocalEquivError::VerificationFailed);
    }
    Ok(RepResult {
        params,
        into,
        from,
        trace,
    })
}

/// Order of local equivalence classes, read off the representatives.
pub fn compare(c1: &Complex, c2: &Complex) -> Result<Ordering, LocalEquivError> {
    let a = standard_rep(c1)?;
    let b = standard_rep(c2)?;
    Ok(lex_cmp(a.params.as_slice(), b.params.as_slice()))
}

/// Order from local maps in both directions. `None` would mean the two
/// classes are incomparable, which a total order rules out.
pub fn compare_direct(c1: &Complex, c2: &Complex) -> Result<Option<Ordering>, LocalEquivError> {
    let a = Target::new(&normalize(c1)?)?;
    let b = Target::new(&normalize(c2)?)?;
    let up = b.local_map_from(&a).is_some();
    let down = a.local_map_from(&b).is_some();
    Ok(match (up, down) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    })
}
