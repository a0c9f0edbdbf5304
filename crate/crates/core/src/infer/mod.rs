//! Searches for spectral sequence patterns that carry a given `E_2` page of
//! free `F2[X]`-modules to a given target module.
//!
//! A pattern is a sum `D = sum_k D_k` over odd `k >= 3` of maps of `(q, h)`
//! bidegree `(2k - 2, k)` between free generators, multiplied by the power of
//! `X` that the quantum grading forces. Patterns with `D^2 = 0` whose
//! homology matches the target are kept, up to graded automorphisms.

mod filtration;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use filtration::{resolve_filtration, FiltrationReport};

use crate::algebra::{F2Matrix, ModuleDecomposition, Monomial, Polynomial};
use crate::complex::{ChainComplex, Generator, GradingMode, Unit, Variable};
use crate::error::{Error, Result};
use crate::khovanov::{ckh, Convention, Flavor, LinkDiagram};
use crate::spectral::{check_constraints, compute_pages, FilteredComplex, PageOptions, Violation};

fn default_x_q() -> i64 {
    -2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageGenerator {
    pub name: String,
    pub h: i64,
    pub q: i64,
}

/// Free generators of an `E_2` page over `F2[X]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageSpec {
    pub generators: Vec<PageGenerator>,
    /// Quantum degree of `X`.
    #[serde(default = "default_x_q")]
    pub x_q: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetAction {
    pub name: String,
    /// The action is `X` times this matrix; column `j` is the image of basis vector `j`.
    pub matrix: Vec<Vec<u8>>,
}

/// The expected total homology over `F2[X]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<u32>,
    /// Names of the free basis vectors used by `actions`.
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub actions: Vec<TargetAction>,
}

impl PageSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: PageSpec = serde_json::from_str(text)?;
        let names: BTreeSet<&str> = s.generators.iter().map(|g| g.name.as_str()).collect();
        if names.len() != s.generators.len() {
            return Err(Error::Input("duplicate generator names in page".into()));
        }
        if s.x_q >= 0 {
            return Err(Error::Input("X must lower the quantum grading".into()));
        }
        Ok(s)
    }
}

impl TargetSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let t: TargetSpec = serde_json::from_str(text)?;
        for a in &t.actions {
            if a.matrix.len() != t.free_rank || a.matrix.iter().any(|r| r.len() != t.free_rank) {
                return Err(Error::Input(format!("action {} must be {}x{}", a.name, t.free_rank, t.free_rank)));
            }
        }
        if !t.basis.is_empty() && t.basis.len() != t.free_rank {
            return Err(Error::Input("basis names must match the free rank".into()));
        }
        Ok(t)
    }
}

/// One component `from -> X^x_power to` of `d_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub k: i64,
    pub from: String,
    pub to: String,
    pub x_power: u32,
}

impl std::fmt::Display for Arrow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.x_power {
            0 => write!(f, "d{}: {} -> {}", self.k, self.from, self.to),
            1 => write!(f, "d{}: {} -> X {}", self.k, self.from, self.to),
            p => write!(f, "d{}: {} -> X^{p} {}", self.k, self.from, self.to),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Pattern {
    pub arrows: Vec<Arrow>,
    /// Homology of the total complex, graded by `q - 2h`.
    pub homology: ModuleDecomposition<i64>,
    /// Filtration levels of the free towers that survive to `E_infinity`.
    pub survivors: Vec<i64>,
    /// Total rank of `d_r` on each page.
    pub page_ranks: Vec<(usize, usize)>,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InferenceReport {
    pub slots: usize,
    pub examined: usize,
    /// Candidates with `D^2 = 0`.
    pub closed: usize,
    pub patterns: Vec<Pattern>,
    /// Whether equivalence was decided by explicit conjugation (otherwise by invariants).
    pub exact_canonical: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct InferOptions {
    /// Largest page index considered (default: the level span).
    pub max_k: Option<i64>,
    /// Refuse searches with more candidate components than this.
    pub max_slots: usize,
    /// Largest orbit explored when computing canonical forms.
    pub max_orbit: usize,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions { max_k: None, max_slots: 22, max_orbit: 1 << 16 }
    }
}

/// A candidate map component `from -> X^power to`.
#[derive(Clone, Copy, Debug)]
struct Slot {
    k: i64,
    from: usize,
    to: usize,
    power: u32,
}

fn slots(e2: &PageSpec, max_k: i64) -> Vec<Slot> {
    let g = &e2.generators;
    let mut out = Vec::new();
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            let k = b.h - a.h;
            if k < 3 || k % 2 == 0 || k > max_k {
                continue;
            }
            let diff = b.q - a.q - (2 * k - 2);
            if diff >= 0 && diff % (-e2.x_q) == 0 {
                out.push(Slot { k, from: i, to: j, power: (diff / -e2.x_q) as u32 });
            }
        }
    }
    out.sort_by_key(|s| (s.k, s.from, s.to));
    out
}

fn matrix_of(n: usize, chosen: &[Slot]) -> F2Matrix {
    let mut m = F2Matrix::zeros(n, n);
    for s in chosen {
        m.set(s.to, s.from, true);
    }
    m
}

/// The filtered complex over `F2[X]` realizing a set of components, graded by `q - 2h`.
fn realize(e2: &PageSpec, chosen: &[Slot]) -> Result<FilteredComplex> {
    let x = Variable::with_degrees("X", Unit::Half, 0, e2.x_q);
    let gens = e2.generators.iter().map(|g| Generator::new(g.name.clone(), g.h).q(g.q).level(g.h)).collect();
    let entries = chosen
        .iter()
        .map(|s| (s.from, s.to, Polynomial::from_monomial(Monomial(vec![s.power]))))
        .collect();
    FilteredComplex::new(ChainComplex::new(vec![x], gens, entries, GradingMode::Delta, 1)?)
}

fn key_of(e2: &PageSpec, m: &F2Matrix) -> Vec<(usize, usize)> {
    let n = e2.generators.len();
    let mut v = Vec::new();
    for j in 0..n {
        for i in m.column(j).ones() {
            v.push((j, i));
        }
    }
    v
}

/// Graded automorphism slots: `g_i -> g_i + X^e g_j` with equal `h`.
fn automorphism_slots(e2: &PageSpec) -> Vec<(usize, usize)> {
    let g = &e2.generators;
    let mut out = Vec::new();
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            if i != j && a.h == b.h && b.q >= a.q && (b.q - a.q) % (-e2.x_q) == 0 {
                out.push((i, j));
            }
        }
    }
    out
}

/// The smallest key in the orbit of `d` under conjugation by elementary
/// graded automorphisms, or `None` when the orbit exceeds `limit`.
fn canonical_key(e2: &PageSpec, d: &F2Matrix, auts: &[(usize, usize)], limit: usize) -> Option<Vec<(usize, usize)>> {
    let n = e2.generators.len();
    let moves: Vec<F2Matrix> = auts
        .iter()
        .map(|&(i, j)| {
            let mut p = F2Matrix::identity(n);
            p.set(j, i, true);
            p
        })
        .collect();
    let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::from([key_of(e2, d)]);
    let mut queue = vec![d.clone()];
    while let Some(m) = queue.pop() {
        for p in &moves {
            // Elementary matrices are involutions over F2.
            let next = p.compose(&m.compose(p));
            if seen.insert(key_of(e2, &next)) {
                if seen.len() > limit {
                    return None;
                }
                queue.push(next);
            }
        }
    }
    seen.into_iter().next()
}

/// Enumerates all patterns compatible with the page and the target.
pub fn enumerate_patterns(e2: &PageSpec, target: &TargetSpec, opts: InferOptions) -> Result<InferenceReport> {
    let n = e2.generators.len();
    if n == 0 {
        return Err(Error::Input("the page has no generators".into()));
    }
    let span = e2.generators.iter().map(|g| g.h).max().unwrap() - e2.generators.iter().map(|g| g.h).min().unwrap();
    let max_k = opts.max_k.unwrap_or(span);
    let cand = slots(e2, max_k);
    if cand.len() > opts.max_slots {
        return Err(Error::Input(format!(
            "{} candidate components exceed the search limit of {}",
            cand.len(),
            opts.max_slots
        )));
    }
    let mut want_torsion = target.torsion.clone();
    want_torsion.sort();
    let mut matches = Vec::new();
    let mut closed = 0;
    let total = 1u64 << cand.len();
    for mask in 0..total {
        let chosen: Vec<Slot> = cand.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, s)| *s).collect();
        let d = matrix_of(n, &chosen);
        if !d.compose(&d).is_zero() {
            continue;
        }
        closed += 1;
        let fc = realize(e2, &chosen)?;
        let hom = fc.complex().homology_module()?.map_grades(|k| k[0]);
        if hom.free_rank() == target.free_rank && hom.torsion_orders() == want_torsion {
            let ss = compute_pages(&fc, PageOptions::default())?;
            matches.push((chosen, d, hom, ss));
        }
    }
    let auts = automorphism_slots(e2);
    let keys: Option<Vec<Vec<(usize, usize)>>> =
        matches.iter().map(|(_, d, _, _)| canonical_key(e2, d, &auts, opts.max_orbit)).collect();
    let exact = keys.is_some();
    let keys: Vec<String> = match keys {
        Some(k) => k.iter().map(|k| format!("{k:?}")).collect(),
        None => matches.iter().map(|(_, _, hom, ss)| format!("{:?}{hom:?}", ss.rank_profile())).collect(),
    };
    let mut seen = BTreeSet::new();
    let mut patterns = Vec::new();
    for ((chosen, _, hom, ss), key) in matches.into_iter().zip(keys) {
        if !seen.insert(key) {
            continue;
        }
        let mut survivors: Vec<i64> = ss
            .infinity()
            .cells
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.level, c.profile.as_ref().map_or(0, |p| p.free)))
            .collect();
        survivors.sort();
        let filtration = match target.actions.first() {
            Some(a) => Some(resolve_filtration(&survivors, &F2Matrix::from_rows(&a.matrix), &target.basis)?),
            None => None,
        };
        let arrows = chosen
            .iter()
            .map(|s| Arrow {
                k: s.k,
                from: e2.generators[s.from].name.clone(),
                to: e2.generators[s.to].name.clone(),
                x_power: s.power,
            })
            .collect();
        let page_ranks = ss.rank_profile();
        patterns.push(Pattern { arrows, homology: hom, survivors, page_ranks, violations: check_constraints(&ss), filtration });
    }
    Ok(InferenceReport { slots: cand.len(), examined: total as usize, closed, patterns, exact_canonical: exact })
}

/// The free generators of the pointed minus Khovanov homology of a
/// diagram, named by decreasing homological grading.
pub fn page_from_khovanov(d: &LinkDiagram, basepoint: Option<u32>, conv: Convention) -> Result<PageSpec> {
    let point = basepoint.unwrap_or_else(|| d.arcs()[0]);
    let c = ckh(d, Flavor::Minus, Some(point), conv)?;
    let h = c.homology_module()?;
    if !h.torsion.is_empty() {
        return Err(Error::Input("the page has X-torsion; only free pages are supported".into()));
    }
    let mut gens: Vec<(i64, i64)> = h.free.iter().map(|k| (k[0], k[1])).collect();
    gens.sort_by(|a, b| b.cmp(a));
    let names = ["x", "y", "z", "w", "v"];
    let generators = gens
        .iter()
        .enumerate()
        .map(|(i, &(h, q))| PageGenerator {
            name: if gens.len() <= names.len() { names[i].to_string() } else { format!("g{i}") },
            h,
            q,
        })
        .collect();
    Ok(PageSpec { generators, x_q: -2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil_page() -> PageSpec {
        PageSpec {
            generators: vec![
                PageGenerator { name: "x".into(), h: 0, q: -1 },
                PageGenerator { name: "y".into(), h: -2, q: -5 },
                PageGenerator { name: "z".into(), h: -3, q: -7 },
            ],
            x_q: -2,
        }
    }

    #[test]
    fn trefoil_has_a_single_slot() {
        let s = slots(&trefoil_page(), 10);
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].k, s[0].from, s[0].to, s[0].power), (3, 2, 0, 1));
    }

    #[test]
    fn trefoil_pattern_is_unique() {
        let target = TargetSpec { free_rank: 1, torsion: vec![1], basis: vec![], actions: vec![] };
        let r = enumerate_patterns(&trefoil_page(), &target, InferOptions::default()).unwrap();
        assert_eq!(r.patterns.len(), 1);
        assert_eq!(r.patterns[0].arrows[0].to_string(), "d3: z -> X x");
        assert_eq!(r.patterns[0].survivors, vec![-2]);
        assert!(r.patterns[0].violations.is_empty());
    }

    #[test]
    fn impossible_target_has_no_pattern() {
        let target = TargetSpec { free_rank: 2, torsion: vec![], basis: vec![], actions: vec![] };
        let r = enumerate_patterns(&trefoil_page(), &target, InferOptions::default()).unwrap();
        assert!(r.patterns.is_empty());
    }
}
