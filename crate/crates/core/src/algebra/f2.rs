//! Dense, bit-packed linear algebra over F2.

use std::fmt;

/// A vector over F2 of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
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

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A linear map `F2^cols -> F2^rows`, stored by the images of the basis vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Matrix {
    rows: usize,
    cols: Vec<BitVec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, ncols: usize) -> Self {
        F2Matrix { rows, cols: vec![BitVec::zeros(rows); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { rows: n, cols: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<BitVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.len() == rows));
        F2Matrix { rows, cols }
    }

    /// Builds from row-major 0/1 entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                if x % 2 == 1 {
                    m.cols[j].set(i, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &BitVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j].get(i)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.cols[j].set(i, b);
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| (0..self.ncols()).map(|j| self.get(i, j) as u8).collect()).collect()
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows);
        for j in v.ones() {
            out.xor_assign(&self.cols[j]);
        }
        out
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &F2Matrix) -> F2Matrix {
        debug_assert_eq!(self.ncols(), other.rows);
        F2Matrix { rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        let mut out = self.clone();
        for (a, b) in out.cols.iter_mut().zip(&other.cols) {
            a.xor_assign(b);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BitVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        f2_reduce(self).rank
    }

    pub fn inverse(&self) -> Option<F2Matrix> {
        let n = self.rows;
        if self.ncols() != n {
            return None;
        }
        let mut ech = Echelon::new(n, n);
        for (j, c) in self.cols.iter().enumerate() {
            if !ech.insert(c.clone(), BitVec::unit(n, j)).is_independent() {
                return None;
            }
        }
        let cols = (0..n).map(|i| ech.express(&BitVec::unit(n, i)).unwrap()).collect();
        Some(F2Matrix { rows: n, cols })
    }
}

/// Result of [`f2_reduce`].
#[derive(Clone, Debug)]
pub struct F2Reduction {
    pub rank: usize,
    /// Pivot positions `(row, col)` of the reduced row echelon form.
    pub pivots: Vec<(usize, usize)>,
    /// A basis of the null space, one vector per non-pivot column.
    pub kernel: Vec<BitVec>,
}

/// Row-reduces a matrix, scanning columns left to right and choosing the
/// lowest-index available row as pivot.
pub fn f2_reduce(m: &F2Matrix) -> F2Reduction {
    let nrows = m.rows;
    let ncols = m.ncols();
    let mut rows: Vec<BitVec> = (0..nrows)
        .map(|i| BitVec::from_indices(ncols, (0..ncols).filter(|&j| m.get(i, j))))
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        let Some(p) = (next..nrows).find(|&r| rows[r].get(col)) else { continue };
        rows.swap(next, p);
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push((next, col));
        next += 1;
        if next == nrows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = BitVec::unit(ncols, free);
        for &(r, c) in &pivots {
            if rows[r].get(free) {
                v.set(c, true);
            }
        }
        kernel.push(v);
    }
    F2Reduction { rank: pivots.len(), pivots, kernel }
}

/// Outcome of inserting a vector into an [`Echelon`].
pub enum Insert {
    /// The vector was independent and is now a row.
    Independent,
    /// The vector was dependent; carries the combination of tags that vanishes.
    Dependent(BitVec),
}

impl Insert {
    pub fn is_independent(&self) -> bool {
        matches!(self, Insert::Independent)
    }
}

/// Echelon basis of a subspace, each row tagged with the combination of
/// inserted vectors it came from. Rows are kept sorted by pivot, the pivot
/// being the lowest set bit of the row.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    tag_len: usize,
    rows: Vec<(usize, BitVec, BitVec)>,
}

impl Echelon {
    pub fn new(dim: usize, tag_len: usize) -> Self {
        Echelon { dim, tag_len, rows: Vec::new() }
    }

    /// Spans the given vectors, tagging vector `i` with the unit vector `e_i`.
    pub fn spanning(dim: usize, vecs: &[BitVec]) -> Self {
        let mut e = Echelon::new(dim, vecs.len());
        for (i, v) in vecs.iter().enumerate() {
            e.insert(v.clone(), BitVec::unit(vecs.len(), i));
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn tag_len(&self) -> usize {
        self.tag_len
    }

    pub fn basis(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter().map(|(_, v, _)| v)
    }

    /// Reduces `v` (and its tag) against the rows.
    fn reduce_tagged(&self, v: &mut BitVec, tag: &mut BitVec) {
        for (p, row, t) in &self.rows {
            if v.get(*p) {
                v.xor_assign(row);
                tag.xor_assign(t);
            }
        }
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (p, row, _) in &self.rows {
            if v.get(*p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn insert(&mut self, v: BitVec, tag: BitVec) -> Insert {
        let mut v = v;
        let mut tag = tag;
        self.reduce_tagged(&mut v, &mut tag);
        match v.first_one() {
            None => Insert::Dependent(tag),
            Some(p) => {
                let at = self.rows.partition_point(|(q, _, _)| *q < p);
                self.rows.insert(at, (p, v, tag));
                Insert::Independent
            }
        }
    }

    /// The tag combination producing `v`, if `v` lies in the span.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let mut v = v.clone();
        let mut tag = BitVec::zeros(self.tag_len);
        self.reduce_tagged(&mut v, &mut tag);
        v.is_zero().then_some(tag)
    }
}

/// Null space of the linear map whose basis images are `images`.
pub fn kernel_of_images(images: &[BitVec], target_dim: usize) -> Vec<BitVec> {
    let n = images.len();
    let mut ech = Echelon::new(target_dim, n);
    let mut ker = Vec::new();
    for (j, img) in images.iter().enumerate() {
        if let Insert::Dependent(t) = ech.insert(img.clone(), BitVec::unit(n, j)) {
            ker.push(t);
        }
    }
    ker
}

/// The quotient `N / D` of two subspaces `D <= N` of `F2^dim`, with a chosen
/// basis of representatives.
#[derive(Clone, Debug)]
pub struct Subquotient {
    dim: usize,
    reps: Vec<BitVec>,
    den_rank: usize,
    full: Echelon,
}

impl Subquotient {
    /// `num` spans the numerator and `den` the denominator; `den` must lie in
    /// the span of `num`. Representatives are the numerator vectors that are
    /// independent modulo the denominator, scanned in the given order.
    pub fn new(dim: usize, num: &[BitVec], den: &[BitVec]) -> Self {
        let mut den_ech = Echelon::new(dim, 0);
        for v in den {
            den_ech.insert(v.clone(), BitVec::zeros(0));
        }
        let den_rank = den_ech.rank();
        let mut probe = den_ech.clone();
        let mut reps = Vec::new();
        for v in num {
            if probe.insert(v.clone(), BitVec::zeros(0)).is_independent() {
                reps.push(v.clone());
            }
        }
        let k = reps.len();
        let mut full = Echelon::new(dim, k);
        for v in den_ech.basis() {
            full.insert(v.clone(), BitVec::zeros(k));
        }
        for (i, r) in reps.iter().enumerate() {
            full.insert(r.clone(), BitVec::unit(k, i));
        }
        Subquotient { dim, reps, den_rank, full }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn denominator_rank(&self) -> usize {
        self.den_rank
    }

    pub fn reps(&self) -> &[BitVec] {
        &self.reps
    }

    /// Coordinates of the class of `v`, or `None` if `v` is not in the numerator.
    pub fn coords(&self, v: &BitVec) -> Option<BitVec> {
        self.full.express(v)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.full.contains(v)
    }

    /// Whether `v` lies in the denominator.
    pub fn is_trivial(&self, v: &BitVec) -> bool {
        self.coords(v).is_some_and(|c| c.is_zero())
    }

    /// Matrix of the map induced by `f` (given on ambient vectors) into `target`.
    pub fn induced<F>(&self, target: &Subquotient, f: F) -> Option<F2Matrix>
    where
        F: Fn(&BitVec) -> BitVec,
    {
        let cols = self
            .reps
            .iter()
            .map(|r| target.coords(&f(r)))
            .collect::<Option<Vec<_>>>()?;
        Some(F2Matrix::from_columns(target.dim(), cols))
    }

    /// Lift of a class given in coordinates.
    pub fn lift(&self, coords: &BitVec) -> BitVec {
        let mut v = BitVec::zeros(self.dim);
        for i in coords.ones() {
            v.xor_assign(&self.reps[i]);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_operations() {
        let mut v = BitVec::zeros(130);
        v.set(3, true);
        v.set(129, true);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(v.first_one(), Some(3));
        v.flip(3);
        assert_eq!(v.count_ones(), 1);
    }

    #[test]
    fn reduce_small_matrix() {
        let m = F2Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let r = f2_reduce(&m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![(0, 0), (1, 1)]);
        assert_eq!(r.kernel.len(), 1);
        assert!(m.apply(&r.kernel[0]).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let m = F2Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 0], vec![1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.compose(&inv), F2Matrix::identity(3));
        let sing = F2Matrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn subquotient_coordinates() {
        let e = |i| BitVec::unit(3, i);
        let sq = Subquotient::new(3, &[e(0), e(1), e(2)], &[BitVec::from_indices(3, [0, 1])]);
        assert_eq!(sq.dim(), 2);
        assert!(sq.is_trivial(&BitVec::from_indices(3, [0, 1])));
        assert_eq!(sq.coords(&e(0)), sq.coords(&e(1)));
        assert!(!sq.coords(&e(2)).unwrap().is_zero());
    }

    #[test]
    fn kernel_matches_reduce() {
        let m = F2Matrix::from_rows(&[vec![1, 0, 1, 1], vec![0, 1, 1, 0]]);
        let k = kernel_of_images(m.columns(), 2);
        assert_eq!(k.len(), f2_reduce(&m).kernel.len());
        for v in &k {
            assert!(m.apply(v).is_zero());
        }
    }
}
