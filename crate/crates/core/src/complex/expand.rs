//! Finite-dimensional graded pieces of a complex over a polynomial ring.
//!
//! A degree piece is spanned by the products `m * g` of a monomial and a
//! generator whose combined key equals the requested key. Pieces are finite
//! once some grading component is strictly negative on every variable.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::{ChainComplex, ChainMap, Grading, Key, SparsePolyMatrix};
use crate::algebra::{kernel_of_images, BitVec, F2Matrix, Monomial, ModuleDecomposition, Subquotient};
use crate::error::{Error, Result};

/// Basis of one degree piece.
#[derive(Debug)]
pub struct Piece {
    pub key: Key,
    pub basis: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl Piece {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn position(&self, g: usize, m: &Monomial) -> Option<usize> {
        self.index.get(&(g, m.clone())).copied()
    }
}

/// Homology of one degree piece.
#[derive(Debug, Clone)]
pub struct Homology {
    pub key: Key,
    pub piece: Arc<Piece>,
    pub group: Subquotient,
}

impl Homology {
    pub fn dim(&self) -> usize {
        self.group.dim()
    }
}

/// Enumerates degree pieces of a complex and their homology, with caching.
pub struct Expander<'a> {
    complex: &'a ChainComplex,
    grading: Grading,
    pieces: HashMap<Key, Arc<Piece>>,
}

fn monomials_of_weight(weights: &[i64], budget: i64) -> Vec<Vec<u32>> {
    fn rec(weights: &[i64], i: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        let mut e = 0;
        while e as i64 * w <= left {
            cur.push(e);
            rec(weights, i + 1, left - e as i64 * w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    if budget >= 0 {
        rec(weights, 0, budget, &mut Vec::new(), &mut out);
    }
    out
}

/// Matrix of a sparse polynomial map between two pieces.
pub fn map_matrix(entries: &SparsePolyMatrix, src: &Piece, dst: &Piece) -> Result<F2Matrix> {
    let mut cols = Vec::with_capacity(src.len());
    for (g, m) in &src.basis {
        let mut v = BitVec::zeros(dst.len());
        for (t, p) in &entries[*g] {
            for n in p.terms() {
                let mono = m.mul(n);
                let i = dst.position(*t, &mono).ok_or_else(|| {
                    Error::Grading(format!("image of a degree {:?} element leaves degree {:?}", src.key, dst.key))
                })?;
                v.flip(i);
            }
        }
        cols.push(v);
    }
    Ok(F2Matrix::from_columns(dst.len(), cols))
}

impl<'a> Expander<'a> {
    pub fn new(complex: &'a ChainComplex) -> Result<Self> {
        let grading = complex.grading()?;
        if complex.nvars() > 0 && grading.bound.is_none() {
            return Err(Error::Grading("no grading component is negative on every variable".into()));
        }
        Ok(Expander { complex, grading, pieces: HashMap::new() })
    }

    pub fn complex(&self) -> &'a ChainComplex {
        self.complex
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn piece(&mut self, key: &[i64]) -> Arc<Piece> {
        if let Some(p) = self.pieces.get(key) {
            return p.clone();
        }
        let key = self.grading.normalize(key.to_vec());
        let g = &self.grading;
        let nv = self.complex.nvars();
        let mut basis = Vec::new();
        for (i, gk) in g.gen_keys.iter().enumerate() {
            if nv == 0 {
                if *gk == key {
                    basis.push((i, Monomial::one(0)));
                }
                continue;
            }
            let b = g.bound.unwrap();
            let weights: Vec<i64> = g.var_degrees.iter().map(|d| -d[b]).collect();
            for e in monomials_of_weight(&weights, gk[b] - key[b]) {
                let m = Monomial(e);
                if g.add(gk, &g.monomial_degree(&m)) == key {
                    basis.push((i, m));
                }
            }
        }
        basis.sort();
        let index = basis.iter().enumerate().map(|(k, b)| (b.clone(), k)).collect();
        let p = Arc::new(Piece { key: key.clone(), basis, index });
        self.pieces.insert(key, p.clone());
        p
    }

    pub fn shift(&self, key: &[i64], by: &[i64]) -> Key {
        self.grading.add(key, by)
    }

    /// Matrix of the differential out of the piece at `key`.
    pub fn diff_matrix(&mut self, key: &[i64]) -> Result<F2Matrix> {
        let src = self.piece(key);
        let dst = self.piece(&self.shift(key, &self.grading.diff_degree.clone()));
        map_matrix(self.complex.diff(), &src, &dst)
    }

    /// Matrix of multiplication by variable `var` from the piece at `key`.
    pub fn multiplication_matrix(&mut self, var: usize, key: &[i64]) -> Result<F2Matrix> {
        let src = self.piece(key);
        let dst = self.piece(&self.shift(key, &self.grading.var_degrees[var].clone()));
        let m = Monomial::var(self.complex.nvars(), var, 1);
        let mut cols = Vec::with_capacity(src.len());
        for (g, mono) in &src.basis {
            let i = dst.position(*g, &mono.mul(&m)).expect("multiplication stays in the expansion");
            cols.push(BitVec::unit(dst.len(), i));
        }
        Ok(F2Matrix::from_columns(dst.len(), cols))
    }

    pub fn homology(&mut self, key: &[i64]) -> Result<Homology> {
        let dd = self.grading.diff_degree.clone();
        let piece = self.piece(key);
        let out = self.diff_matrix(key)?;
        let prev_key = self.grading.sub(key, &dd);
        let into = self.diff_matrix(&prev_key)?;
        let cycles = kernel_of_images(out.columns(), out.rows());
        let boundaries: Vec<BitVec> = into.columns().iter().filter(|c| !c.is_zero()).cloned().collect();
        for b in &boundaries {
            if !out.apply(b).is_zero() {
                return Err(Error::Invariant(format!("d^2 != 0 in degree {key:?}")));
            }
        }
        let group = Subquotient::new(piece.len(), &cycles, &boundaries);
        Ok(Homology { key: piece.key.clone(), piece, group })
    }

    /// Keys of all nonzero pieces down to `depth` steps of the smallest
    /// variable weight below the lowest generator, along the bounding component.
    pub fn window_keys(&self, depth: i64) -> Vec<Key> {
        let g = &self.grading;
        let mut keys: BTreeSet<Key> = g.gen_keys.iter().cloned().collect();
        if let Some(b) = g.bound {
            let weights: Vec<i64> = g.var_degrees.iter().map(|d| -d[b]).collect();
            let wmin = *weights.iter().min().unwrap();
            let floor = g.gen_keys.iter().map(|k| k[b]).min().unwrap_or(0) - depth * wmin;
            for gk in &g.gen_keys {
                for budget in 0..=(gk[b] - floor) {
                    for e in monomials_of_weight(&weights, budget) {
                        keys.insert(g.add(gk, &g.monomial_degree(&Monomial(e))));
                    }
                }
            }
        }
        keys.into_iter().collect()
    }

    /// Number of variable steps needed to see every torsion summand die.
    pub fn default_depth(&self) -> i64 {
        let g = &self.grading;
        let Some(b) = g.bound else { return 0 };
        let w = g.var_degrees.iter().map(|d| -d[b]).min().unwrap();
        let hi = g.gen_keys.iter().map(|k| k[b]).max().unwrap_or(0);
        let lo = g.gen_keys.iter().map(|k| k[b]).min().unwrap_or(0);
        let span = hi - lo + g.diff_degree[b].abs();
        (span + w - 1) / w + 2
    }

    /// Homology dimensions of every piece in the window.
    pub fn homology_dims(&mut self, depth: i64) -> Result<BTreeMap<Key, usize>> {
        let mut out = BTreeMap::new();
        for k in self.window_keys(depth) {
            let d = self.homology(&k)?.dim();
            if d > 0 {
                out.insert(k, d);
            }
        }
        Ok(out)
    }

    /// Map induced on homology by `f`, from degree `key` of this complex to
    /// the matching degree of `target`'s complex.
    pub fn induced(&mut self, target: &mut Expander<'_>, f: &ChainMap, key: &[i64]) -> Result<(Homology, Homology, F2Matrix)> {
        let shift = self.complex.map_key(&self.grading, f.degree);
        let src = self.homology(key)?;
        let dst_key = self.shift(key, &shift);
        let dst = target.homology(&dst_key)?;
        let m = map_matrix(&f.entries, &src.piece, &dst.piece)?;
        let ind = src
            .group
            .induced(&dst.group, |v| m.apply(v))
            .ok_or_else(|| Error::Invariant(format!("{} does not send cycles to cycles", f.name)))?;
        Ok((src, dst, ind))
    }

    /// Decomposes the homology of a complex in one variable by the ranks of
    /// iterated multiplication maps along each orbit of degrees.
    pub fn decompose(&mut self, depth: Option<i64>) -> Result<ModuleDecomposition<Key>> {
        if self.complex.nvars() != 1 {
            return Err(Error::Input("module decomposition needs exactly one variable".into()));
        }
        let mut depth = depth.unwrap_or_else(|| self.default_depth());
        for _ in 0..8 {
            if let Some(d) = self.decompose_window(depth)? {
                return Ok(d);
            }
            depth += 2;
        }
        Err(Error::Invariant("homology did not stabilize along the variable".into()))
    }

    /// Splits keys into chains `k, k + e, k + 2e, ...` along the variable
    /// degree `e`, each starting at a key with no predecessor in the set.
    pub fn orbit_chains(&self, keys: &BTreeSet<Key>) -> Vec<Vec<Key>> {
        let e = self.grading.var_degrees[0].clone();
        let mut out = Vec::new();
        for top in keys {
            if keys.contains(&self.grading.sub(top, &e)) {
                continue;
            }
            let mut chain = vec![top.clone()];
            loop {
                let next = self.shift(chain.last().unwrap(), &e);
                if !keys.contains(&next) {
                    break;
                }
                chain.push(next);
            }
            out.push(chain);
        }
        out
    }

    fn decompose_window(&mut self, depth: i64) -> Result<Option<ModuleDecomposition<Key>>> {
        let keys: BTreeSet<Key> = self.window_keys(depth).into_iter().collect();
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for chain in self.orbit_chains(&keys) {
            let hs: Vec<Homology> = chain.iter().map(|k| self.homology(k)).collect::<Result<_>>()?;
            let mut steps = Vec::new();
            for t in 0..chain.len().saturating_sub(1) {
                let mult = self.multiplication_matrix(0, &chain[t])?;
                let ind = hs[t]
                    .group
                    .induced(&hs[t + 1].group, |v| mult.apply(v))
                    .ok_or_else(|| Error::Invariant("multiplication does not preserve cycles".into()))?;
                steps.push(ind);
            }
            let n = chain.len();
            if n >= 3 {
                let iso = |m: &F2Matrix| m.rows() == m.ncols() && m.rank() == m.rows();
                if !iso(&steps[n - 2]) || !iso(&steps[n - 3]) {
                    return Ok(None);
                }
            }
            let dims: Vec<usize> = hs.iter().map(Homology::dim).collect();
            for (s, t) in persistence_bars(&dims, &steps)? {
                if t == n - 1 {
                    if s + 2 >= n && n >= 3 {
                        return Ok(None);
                    }
                    free.push(chain[s].clone());
                } else {
                    torsion.push((chain[s].clone(), (t - s + 1) as u32));
                }
            }
        }
        Ok(Some(ModuleDecomposition::new(free, torsion)))
    }
}

/// Intervals `[s, t]` of a sequence of vector spaces `V_0 -> V_1 -> ...`
/// (dimensions `dims`, maps `steps`), from the ranks of all composites.
pub fn persistence_bars(dims: &[usize], steps: &[F2Matrix]) -> Result<Vec<(usize, usize)>> {
    let n = dims.len();
    let mut rk = vec![vec![0usize; n]; n];
    for s in 0..n {
        let mut comp = F2Matrix::identity(dims[s]);
        rk[s][s] = dims[s];
        for t in s + 1..n {
            comp = steps[t - 1].compose(&comp);
            rk[s][t] = comp.rank();
        }
    }
    let r = |s: isize, t: usize| -> i64 {
        if s < 0 || t >= n {
            0
        } else {
            rk[s as usize][t] as i64
        }
    };
    let mut out = Vec::new();
    for s in 0..n {
        for t in s..n {
            let si = s as isize;
            let m = r(si, t) - r(si - 1, t) - r(si, t + 1) + r(si - 1, t + 1);
            if m < 0 {
                return Err(Error::Invariant("negative bar multiplicity".into()));
            }
            out.extend(std::iter::repeat_n((s, t), m as usize));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{Generator, GradingMode, Unit, Variable};
    use super::*;

    fn two_term(k: u32) -> ChainComplex {
        let vars = vec![Variable::new("u", Unit::Half)];
        let gens = vec![Generator::new("a", k as i64 - 1).alex2(k as i64), Generator::new("c", 0).alex2(0), Generator::new("b", 0).alex2(0)];
        let p = if k == 1 { "u".to_string() } else { format!("u^{k}") };
        ChainComplex::from_text(vars, gens, &[("c", "a", &p)], GradingMode::Bigraded, -1).unwrap()
    }

    #[test]
    fn piece_enumeration_counts_monomials() {
        let c = two_term(1);
        let mut ex = Expander::new(&c).unwrap();
        let p = ex.piece(&[-2, 0]);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn decomposition_of_trefoil_like_complex() {
        for k in 1..4 {
            let c = two_term(k);
            let mut ex = Expander::new(&c).unwrap();
            let d = ex.decompose(None).unwrap();
            assert_eq!(d.free_rank(), 1);
            assert_eq!(d.torsion_orders(), vec![k]);
        }
    }
}
