//! Graded Smith normal form over `F2[u]` for matrices with monomial entries.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};

/// A sparse matrix over `F2[u]` whose nonzero entries are single powers `u^k`.
#[derive(Clone, Debug, Default)]
pub struct MonomialMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, k)` for the entry `u^k`; duplicates cancel in pairs.
    pub entries: Vec<(usize, usize, u32)>,
}

/// Pivots `(row, col, k)` of a Smith normal form.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub pivots: Vec<(usize, usize, u32)>,
}

/// Reduces to Smith form, always pivoting on the smallest exponent (ties go to
/// the lowest row, then the lowest column). Entries must be homogeneous, so
/// that every row operation produces monomials again.
pub fn smith_normal_form(m: &MonomialMatrix) -> Result<SmithForm> {
    let mut rows: Vec<BTreeMap<usize, u32>> = vec![BTreeMap::new(); m.rows];
    let mut cols: Vec<BTreeMap<usize, u32>> = vec![BTreeMap::new(); m.cols];
    for &(r, c, k) in &m.entries {
        if r >= m.rows || c >= m.cols {
            return Err(Error::Input(format!("entry ({r},{c}) outside {}x{} matrix", m.rows, m.cols)));
        }
        match rows[r].get(&c) {
            Some(&k0) if k0 == k => {
                rows[r].remove(&c);
                cols[c].remove(&r);
            }
            Some(_) => return Err(Error::Grading(format!("entry ({r},{c}) is not a monomial"))),
            None => {
                rows[r].insert(c, k);
                cols[c].insert(r, k);
            }
        }
    }
    let mut queue: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    for (r, row) in rows.iter().enumerate() {
        for (&c, &k) in row {
            queue.insert((k, r, c));
        }
    }
    let mut pivots = Vec::new();
    while let Some((k, r, c)) = queue.pop_first() {
        let others: Vec<(usize, u32)> = cols[c].iter().filter(|(&d, _)| d != r).map(|(&d, &e)| (d, e)).collect();
        let pivot_row: Vec<(usize, u32)> = rows[r].iter().map(|(&a, &e)| (a, e)).collect();
        for (d, kd) in others {
            let shift = kd - k;
            for &(a, e) in &pivot_row {
                let new = e + shift;
                match rows[d].get(&a).copied() {
                    Some(old) if old == new => {
                        rows[d].remove(&a);
                        cols[a].remove(&d);
                        queue.remove(&(old, d, a));
                    }
                    Some(_) => {
                        return Err(Error::Grading("non-homogeneous matrix in Smith reduction".into()));
                    }
                    None => {
                        rows[d].insert(a, new);
                        cols[a].insert(d, new);
                        queue.insert((new, d, a));
                    }
                }
            }
        }
        for (a, e) in pivot_row {
            cols[a].remove(&r);
            queue.remove(&(e, r, a));
        }
        rows[r].clear();
        cols[c].clear();
        pivots.push((r, c, k));
    }
    Ok(SmithForm { pivots })
}

/// A finitely generated graded `F2[u]`-module as free and cyclic torsion summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleDecomposition<G: Ord> {
    /// Gradings of the free generators, sorted.
    pub free: Vec<G>,
    /// `(grading, k)` for each summand `F2[u]/(u^k)`, sorted.
    pub torsion: Vec<(G, u32)>,
}

impl<G: Ord + Clone> ModuleDecomposition<G> {
    pub fn new(mut free: Vec<G>, mut torsion: Vec<(G, u32)>) -> Self {
        free.sort();
        torsion.sort();
        ModuleDecomposition { free, torsion }
    }

    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    /// Torsion orders `k`, sorted.
    pub fn torsion_orders(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.torsion.iter().map(|t| t.1).collect();
        v.sort();
        v
    }

    pub fn map_grades<H: Ord + Clone, F: Fn(&G) -> H>(&self, f: F) -> ModuleDecomposition<H> {
        ModuleDecomposition::new(
            self.free.iter().map(&f).collect(),
            self.torsion.iter().map(|(g, k)| (f(g), *k)).collect(),
        )
    }
}

/// Removes `sub` from `all` as multisets; `None` if `sub` is not contained.
fn multiset_difference<G: Ord + Clone>(all: Vec<G>, sub: Vec<G>) -> Option<Vec<G>> {
    let mut counts: BTreeMap<G, i64> = BTreeMap::new();
    for g in all {
        *counts.entry(g).or_default() += 1;
    }
    for g in sub {
        let c = counts.entry(g).or_default();
        *c -= 1;
        if *c < 0 {
            return None;
        }
    }
    Some(counts.into_iter().flat_map(|(g, c)| std::iter::repeat_n(g, c as usize)).collect())
}

/// Homology of a differential `d` on a free module with generator gradings
/// `grades` (rows and columns index the same generators).
pub fn homology_from_differential<G: Ord + Clone>(
    d: &MonomialMatrix,
    grades: &[G],
) -> Result<ModuleDecomposition<G>> {
    let snf = smith_normal_form(d)?;
    let pivot_cols: BTreeSet<usize> = snf.pivots.iter().map(|p| p.1).collect();
    let kernel_grades: Vec<G> = (0..d.cols).filter(|c| !pivot_cols.contains(c)).map(|c| grades[c].clone()).collect();
    let image_grades: Vec<G> = snf.pivots.iter().map(|p| grades[p.0].clone()).collect();
    let free = multiset_difference(kernel_grades, image_grades)
        .ok_or_else(|| Error::Invariant("homology Poincaré series has negative coefficients".into()))?;
    let torsion = snf.pivots.iter().filter(|p| p.2 > 0).map(|p| (grades[p.0].clone(), p.2)).collect();
    Ok(ModuleDecomposition::new(free, torsion))
}

/// Decomposes the cokernel of a presentation matrix. Generators have
/// gradings `gen_grades`; `u` raises grading by `u_degree`. Each relation
/// column must be homogeneous.
pub fn module_decompose(
    presentation: &MonomialMatrix,
    gen_grades: &[i64],
    u_degree: i64,
) -> Result<ModuleDecomposition<i64>> {
    if gen_grades.len() != presentation.rows {
        return Err(Error::Input("one grading per generator is required".into()));
    }
    let mut rel_grade: Vec<Option<i64>> = vec![None; presentation.cols];
    for &(r, c, k) in &presentation.entries {
        let g = gen_grades[r] + k as i64 * u_degree;
        match rel_grade[c] {
            Some(g0) if g0 != g => {
                return Err(Error::Grading(format!("relation {c} is not homogeneous")));
            }
            _ => rel_grade[c] = Some(g),
        }
    }
    let snf = smith_normal_form(presentation)?;
    let pivot_rows: BTreeSet<usize> = snf.pivots.iter().map(|p| p.0).collect();
    let free = (0..presentation.rows).filter(|r| !pivot_rows.contains(r)).map(|r| gen_grades[r]).collect();
    let torsion = snf.pivots.iter().filter(|p| p.2 > 0).map(|p| (gen_grades[p.0], p.2)).collect();
    Ok(ModuleDecomposition::new(free, torsion))
}
