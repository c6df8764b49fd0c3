//! Linear algebra over F₂.
//!
//! Vectors are packed bitsets. Elimination always pivots on the lowest set
//! index, so every basis and kernel produced here is deterministic.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        Self::from_indices(len, [i])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set index at or after `from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut w = from / 64;
        let mut word = self.words[w] & (!0u64 << (from % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.next_one(0);
        std::iter::from_fn(move || {
            let cur = next?;
            next = self.next_one(cur + 1);
            Some(cur)
        })
    }
}

/// Row-reduced basis of a subspace, keyed by pivot (lowest set index).
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    basis: BTreeMap<usize, BitVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Clears every pivot position of `v`.
    pub fn reduce(&self, v: &mut BitVec) {
        let mut from = 0;
        while let Some(p) = v.next_one(from) {
            if let Some(b) = self.basis.get(&p) {
                v.xor_assign(b);
            }
            from = p + 1;
        }
    }

    /// Adds `v` to the span; returns false if it was already inside.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        self.reduce(&mut v);
        match v.next_one(0) {
            Some(p) => {
                self.basis.insert(p, v);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }
}

/// Dimension of the span of `vectors`.
pub fn span_dim<'a>(vectors: impl IntoIterator<Item = &'a BitVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v.clone());
    }
    e.dim()
}

/// Basis of `{x : Σ xᵢ images[i] = 0}`, as vectors of length `images.len()`.
pub fn kernel_basis(images: &[BitVec]) -> Vec<BitVec> {
    let n = images.len();
    // pivot -> (reduced image, combination producing it)
    let mut basis: BTreeMap<usize, (BitVec, BitVec)> = BTreeMap::new();
    let mut kernel = Vec::new();
    for (c, img) in images.iter().enumerate() {
        let mut v = img.clone();
        let mut combo = BitVec::unit(n, c);
        let mut from = 0;
        while let Some(p) = v.next_one(from) {
            if let Some((b, bc)) = basis.get(&p) {
                v.xor_assign(b);
                combo.xor_assign(bc);
            }
            from = p + 1;
        }
        match v.next_one(0) {
            Some(p) => {
                basis.insert(p, (v, combo));
            }
            None => kernel.push(combo),
        }
    }
    kernel
}

/// Sparse matrix over F₂ stored by columns; each column is a sorted set of
/// row indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrixF2 {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<usize>>,
}

impl SparseMatrixF2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_entries(n, n, (0..n).map(|i| (i, i)))
    }

    /// Set semantics: repeated positions are stored once.
    ///
    /// # Panics
    /// If an entry lies outside `rows × cols`.
    pub fn from_entries(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            m.columns[c].push(r);
        }
        for col in &mut m.columns {
            col.sort_unstable();
            col.dedup();
        }
        m
    }

    /// Entries with odd multiplicity, i.e. the F₂ sum of unit matrices.
    pub fn from_entries_mod2(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            m.columns[c].push(r);
        }
        for col in &mut m.columns {
            col.sort_unstable();
            let mut kept: Vec<usize> = Vec::with_capacity(col.len());
            for &r in col.iter() {
                if kept.last() == Some(&r) {
                    kept.pop();
                } else {
                    kept.push(r);
                }
            }
            *col = kept;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.columns[c].binary_search(&r).is_ok()
    }

    pub fn column(&self, c: usize) -> &[usize] {
        &self.columns[c]
    }

    pub fn column_vec(&self, c: usize) -> BitVec {
        BitVec::from_indices(self.rows, self.columns[c].iter().copied())
    }

    /// `(row, col)` pairs, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, rs)| rs.iter().map(move |&r| (r, c)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.cols, self.rows, self.entries().map(|(r, c)| (c, r)))
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &SparseMatrixF2) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let entries = rhs
            .entries()
            .flat_map(|(k, c)| self.columns[k].iter().map(move |&r| (r, c)));
        Self::from_entries_mod2(self.rows, rhs.cols, entries)
    }

    /// Columns restricted to the given row and column subsets (in the
    /// given orders), as dense vectors.
    pub fn submatrix_columns(&self, rows: &[usize], cols: &[usize]) -> Vec<BitVec> {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k;
        }
        cols.iter()
            .map(|&c| {
                BitVec::from_indices(
                    rows.len(),
                    self.columns[c].iter().map(|&r| pos[r]).filter(|&p| p != usize::MAX),
                )
            })
            .collect()
    }
}

pub fn rank_f2(m: &SparseMatrixF2) -> usize {
    let mut e = Echelon::new();
    for c in 0..m.cols() {
        e.insert(m.column_vec(c));
    }
    e.dim()
}

pub fn kernel_dim(m: &SparseMatrixF2) -> usize {
    m.cols() - rank_f2(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_f2(&SparseMatrixF2::zeros(3, 4)), 0);
        assert_eq!(rank_f2(&SparseMatrixF2::identity(3)), 3);
        // two merge columns hitting the same target twice cancel
        let m = SparseMatrixF2::from_entries_mod2(2, 2, [(0, 0), (0, 0), (1, 1)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(rank_f2(&m), 1);
    }

    #[test]
    fn bitvec_ops() {
        let mut v = BitVec::from_indices(130, [3, 64, 129]);
        assert_eq!(v.ones().collect::<Vec<_>>(), [3, 64, 129]);
        assert_eq!(v.next_one(4), Some(64));
        assert_eq!(v.next_one(130), None);
        v.set(64, false);
        assert_eq!(v.count_ones(), 2);
        v.xor_assign(&BitVec::from_indices(130, [3, 129]));
        assert!(v.is_zero());
    }

    #[test]
    fn kernel_of_repeated_column() {
        let a = BitVec::from_indices(3, [0, 1]);
        let b = BitVec::from_indices(3, [2]);
        let k = kernel_basis(&[a.clone(), b.clone(), a]);
        assert_eq!(k, vec![BitVec::from_indices(3, [0, 2])]);
    }

    fn arb_matrix() -> impl Strategy<Value = SparseMatrixF2> {
        (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
            prop::collection::vec((0..r, 0..c), 0..30).prop_map(move |e| SparseMatrixF2::from_entries(r, c, e))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let images: Vec<BitVec> = (0..m.cols()).map(|c| m.column_vec(c)).collect();
            let kernel = kernel_basis(&images);
            prop_assert_eq!(rank_f2(&m) + kernel.len(), m.cols());
            prop_assert_eq!(rank_f2(&m), rank_f2(&m.transpose()));
            for x in &kernel {
                let mut acc = BitVec::zeros(m.rows());
                for c in x.ones() {
                    acc.xor_assign(&images[c]);
                }
                prop_assert!(acc.is_zero());
            }
            prop_assert_eq!(span_dim(&kernel), kernel.len());
        }

        #[test]
        fn compose_matches_dense(a in arb_matrix(), b in arb_matrix()) {
            let b = SparseMatrixF2::from_entries(a.cols(), b.cols(),
                b.entries().filter(|&(r, _)| r < a.cols()));
            let p = a.compose(&b);
            for r in 0..a.rows() {
                for c in 0..b.cols() {
                    let dense = (0..a.cols()).filter(|&k| a.get(r, k) && b.get(k, c)).count() % 2 == 1;
                    prop_assert_eq!(p.get(r, c), dense);
                }
            }
        }
    }
}
