//! The ring F2[U,V]/(UV), bigraded free complexes over it, and the
//! structural operations reduce, tensor and dual.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bigrading {
    pub gr_u: i64,
    pub gr_v: i64,
}

impl Bigrading {
    pub const ZERO: Bigrading = Bigrading { gr_u: 0, gr_v: 0 };
    /// Degree of the differential.
    pub const DIFF: Bigrading = Bigrading { gr_u: -1, gr_v: -1 };

    pub const fn new(gr_u: i64, gr_v: i64) -> Self {
        Bigrading { gr_u, gr_v }
    }

    /// Alexander grading `(gr_u - gr_v) / 2`, when it is an integer.
    pub fn alexander(self) -> Option<i64> {
        let d = self.gr_u - self.gr_v;
        (d % 2 == 0).then_some(d / 2)
    }
}

impl Add for Bigrading {
    type Output = Bigrading;
    fn add(self, o: Bigrading) -> Bigrading {
        Bigrading::new(self.gr_u + o.gr_u, self.gr_v + o.gr_v)
    }
}

impl Sub for Bigrading {
    type Output = Bigrading;
    fn sub(self, o: Bigrading) -> Bigrading {
        Bigrading::new(self.gr_u - o.gr_u, self.gr_v - o.gr_v)
    }
}

impl Neg for Bigrading {
    type Output = Bigrading;
    fn neg(self) -> Bigrading {
        Bigrading::new(-self.gr_u, -self.gr_v)
    }
}

impl fmt::Display for Bigrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.gr_u, self.gr_v)
    }
}

/// A monomial of R. Zero exponents are always normalized to `Unit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    Unit,
    U(u32),
    V(u32),
}

impl Monomial {
    pub fn u(a: u32) -> Self {
        if a == 0 {
            Monomial::Unit
        } else {
            Monomial::U(a)
        }
    }

    pub fn v(b: u32) -> Self {
        if b == 0 {
            Monomial::Unit
        } else {
            Monomial::V(b)
        }
    }

    pub fn grading(self) -> Bigrading {
        match self {
            Monomial::Unit => Bigrading::ZERO,
            Monomial::U(a) => Bigrading::new(-2 * a as i64, 0),
            Monomial::V(b) => Bigrading::new(0, -2 * b as i64),
        }
    }

    /// The monomial of grading `g`, if there is one.
    pub fn from_grading(g: Bigrading) -> Option<Monomial> {
        match (g.gr_u, g.gr_v) {
            (0, 0) => Some(Monomial::Unit),
            (u, 0) if u < 0 && u % 2 == 0 => Some(Monomial::U((-u / 2) as u32)),
            (0, v) if v < 0 && v % 2 == 0 => Some(Monomial::V((-v / 2) as u32)),
            _ => None,
        }
    }

    /// Product in R; `None` is zero.
    pub fn times(self, other: Monomial) -> Option<Monomial> {
        match (self, other) {
            (Monomial::Unit, m) | (m, Monomial::Unit) => Some(m),
            (Monomial::U(a), Monomial::U(b)) => Some(Monomial::U(a + b)),
            (Monomial::V(a), Monomial::V(b)) => Some(Monomial::V(a + b)),
            _ => None,
        }
    }

    pub fn is_unit(self) -> bool {
        self == Monomial::Unit
    }

    pub fn exponent(self) -> u32 {
        match self {
            Monomial::Unit => 0,
            Monomial::U(a) | Monomial::V(a) => a,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Unit => write!(f, "1"),
            Monomial::U(a) => write!(f, "U^{a}"),
            Monomial::V(b) => write!(f, "V^{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub gr: Bigrading,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub coeff: Monomial,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("more than one differential entry from `{from}` to `{target}`")]
    DuplicateArrow { from: String, target: String },
    #[error("entry {coeff} from `{from}` to `{target}` does not have degree (-1,-1)")]
    DegreeViolation {
        from: String,
        target: String,
        coeff: Monomial,
    },
    #[error("d^2 is nonzero on `{0}`")]
    DSquaredNonzero(String),
}

/// Names-based description of a complex, checked by [`validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawComplex {
    pub generators: Vec<(String, Bigrading)>,
    /// Source name and its differential terms `(coefficient, target name)`.
    pub differential: Vec<(String, Vec<(Monomial, String)>)>,
}

/// A finitely generated free bigraded complex over F2[U,V]/(UV).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    gens: Vec<Generator>,
    diff: Vec<Vec<Arrow>>,
}

pub fn validate(raw: &RawComplex) -> Result<Complex, AlgebraError> {
    let mut index = HashMap::new();
    let mut gens = Vec::with_capacity(raw.generators.len());
    for (name, gr) in &raw.generators {
        if index.insert(name.as_str(), gens.len()).is_some() {
            return Err(AlgebraError::DuplicateGenerator(name.clone()));
        }
        gens.push(Generator {
            name: name.clone(),
            gr: *gr,
        });
    }
    let mut diff = vec![Vec::new(); gens.len()];
    for (source, terms) in &raw.differential {
        let &s = index
            .get(source.as_str())
            .ok_or_else(|| AlgebraError::UnknownGenerator(source.clone()))?;
        for (coeff, target) in terms {
            let &t = index
                .get(target.as_str())
                .ok_or_else(|| AlgebraError::UnknownGenerator(target.clone()))?;
            diff[s].push(Arrow { coeff: *coeff, target: t });
        }
    }
    Complex::from_parts(gens, diff)
}

impl Complex {
    /// Build and check a complex from generators and per-source arrows.
    pub fn from_parts(gens: Vec<Generator>, mut diff: Vec<Vec<Arrow>>) -> Result<Complex, AlgebraError> {
        assert_eq!(gens.len(), diff.len());
        let mut seen = HashSet::new();
        for g in &gens {
            if !seen.insert(g.name.as_str()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        for (s, arrows) in diff.iter_mut().enumerate() {
            arrows.sort_by_key(|a| a.target);
            for w in arrows.windows(2) {
                if w[0].target == w[1].target {
                    return Err(AlgebraError::DuplicateArrow {
                        from: gens[s].name.clone(),
                        target: gens[w[0].target].name.clone(),
                    });
                }
            }
            for a in arrows.iter() {
                if a.target >= gens.len() {
                    return Err(AlgebraError::UnknownGenerator(format!("#{}", a.target)));
                }
                if a.coeff.grading() + gens[a.target].gr != gens[s].gr + Bigrading::DIFF {
                    return Err(AlgebraError::DegreeViolation {
                        from: gens[s].name.clone(),
                        target: gens[a.target].name.clone(),
                        coeff: a.coeff,
                    });
                }
            }
        }
        let c = Complex { gens, diff };
        if let Some(bad) = c.d_squared_witness() {
            return Err(AlgebraError::DSquaredNonzero(c.gens[bad].name.clone()));
        }
        Ok(c)
    }

    fn d_squared_witness(&self) -> Option<usize> {
        for s in 0..self.len() {
            let mut acc: BTreeMap<usize, bool> = BTreeMap::new();
            for a in &self.diff[s] {
                for b in &self.diff[a.target] {
                    if a.coeff.times(b.coeff).is_some() {
                        *acc.entry(b.target).or_default() ^= true;
                    }
                }
            }
            if acc.values().any(|&odd| odd) {
                return Some(s);
            }
        }
        None
    }

    /// The complex R: one generator in grading (0,0).
    pub fn unit() -> Complex {
        Complex {
            gens: vec![Generator {
                name: "x0".into(),
                gr: Bigrading::ZERO,
            }],
            diff: vec![Vec::new()],
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn gr(&self, i: usize) -> Bigrading {
        self.gens[i].gr
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Arrows out of generator `i`, sorted by target.
    pub fn arrows(&self, i: usize) -> &[Arrow] {
        &self.diff[i]
    }

    pub fn arrow_count(&self) -> usize {
        self.diff.iter().map(Vec::len).sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.diff.iter().flatten().all(|a| !a.coeff.is_unit())
    }

    /// The same complex with every grading moved by `by`.
    pub fn shifted(&self, by: Bigrading) -> Complex {
        let mut c = self.clone();
        for g in &mut c.gens {
            g.gr = g.gr + by;
        }
        c
    }

    /// The same complex with generators renamed `prefix0, prefix1, ...`.
    pub fn renamed(&self, prefix: &str) -> Complex {
        let mut c = self.clone();
        for (i, g) in c.gens.iter_mut().enumerate() {
            g.name = format!("{prefix}{i}");
        }
        c
    }

    pub fn to_raw(&self) -> RawComplex {
        RawComplex {
            generators: self.gens.iter().map(|g| (g.name.clone(), g.gr)).collect(),
            differential: (0..self.len())
                .filter(|&s| !self.diff[s].is_empty())
                .map(|s| {
                    let terms = self.diff[s]
                        .iter()
                        .map(|a| (a.coeff, self.gens[a.target].name.clone()))
                        .collect();
                    (self.gens[s].name.clone(), terms)
                })
                .collect(),
        }
    }
}

/// Cancel Unit arrows until none remain, scanning sources in declaration order.
pub fn reduce(c: &Complex) -> Complex {
    let n = c.len();
    let mut alive = vec![true; n];
    let mut diff: Vec<BTreeMap<usize, Monomial>> = c
        .diff
        .iter()
        .map(|arrows| arrows.iter().map(|a| (a.target, a.coeff)).collect())
        .collect();
    loop {
        let found = (0..n).filter(|&s| alive[s]).find_map(|s| {
            diff[s]
                .iter()
                .find(|(_, m)| m.is_unit())
                .map(|(&t, _)| (s, t))
        });
        let Some((x, y)) = found else { break };
        let dx: Vec<(usize, Monomial)> = diff[x]
            .iter()
            .filter(|(&t, _)| t != y)
            .map(|(&t, &m)| (t, m))
            .collect();
        for w in 0..n {
            if !alive[w] || w == x {
                continue;
            }
            diff[w].remove(&x);
            let Some(c_wy) = diff[w].remove(&y) else {
                continue;
            };
            for &(t, m) in &dx {
                let Some(prod) = c_wy.times(m) else { continue };
                match diff[w].get(&t) {
                    Some(&old) => {
                        debug_assert_eq!(old, prod);
                        diff[w].remove(&t);
                    }
                    None => {
                        diff[w].insert(t, prod);
                    }
                }
            }
        }
        alive[x] = false;
        alive[y] = false;
        diff[x].clear();
        diff[y].clear();
    }
    let mut new_index = vec![usize::MAX; n];
    let mut gens = Vec::new();
    for i in 0..n {
        if alive[i] {
            new_index[i] = gens.len();
            gens.push(c.gens[i].clone());
        }
    }
    let new_diff = (0..n)
        .filter(|&i| alive[i])
        .map(|i| {
            diff[i]
                .iter()
                .map(|(&t, &coeff)| Arrow {
                    coeff,
                    target: new_index[t],
                })
                .collect()
        })
        .collect();
    Complex::from_parts(gens, new_diff).expect("cancellation preserves validity")
}

/// Tensor product over R. Generator `(i, j)` sits at index `i * c2.len() + j`.
pub fn tensor(c1: &Complex, c2: &Complex) -> Complex {
    let n2 = c2.len();
    let mut names: Vec<String> = Vec::with_capacity(c1.len() * n2);
    let mut gens = Vec::with_capacity(c1.len() * n2);
    for a in &c1.gens {
        for b in &c2.gens {
            names.push(format!("{}.{}", a.name, b.name));
            gens.push(Generator {
                name: String::new(),
                gr: a.gr + b.gr,
            });
        }
    }
    let unique = names.iter().collect::<HashSet<_>>().len() == names.len();
    for (k, g) in gens.iter_mut().enumerate() {
        g.name = if unique {
            std::mem::take(&mut names[k])
        } else {
            format!("p{}_{}", k / n2.max(1), k % n2.max(1))
        };
    }
    let mut diff = vec![Vec::new(); gens.len()];
    for i in 0..c1.len() {
        for j in 0..n2 {
            let arrows = &mut diff[i * n2 + j];
            for a in &c1.diff[i] {
                arrows.push(Arrow {
                    coeff: a.coeff,
                    target: a.target * n2 + j,
                });
            }
            for b in &c2.diff[j] {
                arrows.push(Arrow {
                    coeff: b.coeff,
                    target: i * n2 + b.target,
                });
            }
        }
    }
    Complex::from_parts(gens, diff).expect("tensor of valid complexes is valid")
}

fn dual_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

/// Dual complex `Hom(C, R)`. Names toggle a trailing `*`, so dualizing twice
/// gives back the original names.
pub fn dual(c: &Complex) -> Complex {
    let gens = c
        .gens
        .iter()
        .map(|g| Generator {
            name: dual_name(&g.name),
            gr: -g.gr,
        })
        .collect();
    let mut diff = vec![Vec::new(); c.len()];
    for (y, arrows) in c.diff.iter().enumerate() {
        for a in arrows {
            diff[a.target].push(Arrow {
                coeff: a.coeff,
                target: y,
            });
        }
    }
    Complex::from_parts(gens, diff).expect("dual of a valid complex is valid")
}
