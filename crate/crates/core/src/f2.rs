//! Packed vectors over GF(2) and an affine system solver.

const WORD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        self.xor_from(other, 0);
    }

    /// XOR `other` into `self`, skipping words before the one holding bit `start`.
    #[inline]
    fn xor_from(&mut self, other: &BitVec, start: usize) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words[start / WORD..]
            .iter_mut()
            .zip(&other.words[start / WORD..])
        {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + bit)
            })
        })
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }
}

/// Solve the affine system whose rows are `[coefficients | rhs]`, each of
/// length `unknowns + 1`. Returns one solution with every free variable set
/// to zero, or `None` when the system is inconsistent.
pub fn solve_affine(mut rows: Vec<BitVec>, unknowns: usize) -> Option<BitVec> {
    let rhs = unknowns;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(found) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(r, found);
        let (head, rest) = rows.split_at_mut(r);
        let (pivot, tail) = rest.split_first_mut().expect("row r exists");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row.get(col) {
                row.xor_from(pivot, col);
            }
        }
        pivots.push((r, col));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| row.get(rhs)) {
        return None;
    }
    let mut x = BitVec::zeros(unknowns);
    for &(row, col) in &pivots {
        if rows[row].get(rhs) {
            x.set(col, true);
        }
    }
    Some(x)
}

/// Rank of a set of vectors.
pub fn rank(mut rows: Vec<BitVec>) -> usize {
    let Some(width) = rows.first().map(BitVec::len) else {
        return 0;
    };
    let mut r = 0;
    for col in 0..width {
        let Some(found) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(r, found);
        let (head, tail) = rows.split_at_mut(r + 1);
        for row in tail.iter_mut() {
            if row.get(col) {
                row.xor_from(&head[r], col);
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &[u8]) -> BitVec {
        BitVec::from_indices(
            bits.len(),
            bits.iter()
                .enumerate()
                .filter(|(_, &b)| b == 1)
                .map(|(i, _)| i),
        )
    }

    #[test]
    fn bit_ops() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.flip(129);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.count_ones(), 3);
        let w = BitVec::from_indices(130, [64, 100]);
        assert!(v.dot(&w));
        v.xor_assign(&w);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 100, 129]);
    }

    #[test]
    fn solves_consistent_system() {
        // x0 + x1 = 1, x1 + x2 = 0, x2 = 1
        let rows = vec![row(&[1, 1, 0, 1]), row(&[0, 1, 1, 0]), row(&[0, 0, 1, 1])];
        let x = solve_affine(rows, 3).unwrap();
        assert_eq!(x.ones().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn detects_inconsistency() {
        let rows = vec![row(&[1, 1, 1]), row(&[1, 1, 0])];
        assert!(solve_affine(rows, 2).is_none());
    }

    #[test]
    fn free_variables_are_zero() {
        let rows = vec![row(&[1, 1, 0, 0])];
        let x = solve_affine(rows, 3).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let rows = vec![row(&[1, 1, 0]), row(&[0, 1, 1]), row(&[1, 0, 1])];
        assert_eq!(rank(rows), 2);
    }
}
