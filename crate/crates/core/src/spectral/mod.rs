//! Spectral sequences of filtered complexes.
//!
//! Filtrations are increasing in the differential's direction: the
//! differential never lowers the level, and `F^p` is spanned by generators
//! of level at least `p`. With `Z_r^p = {x in F^p : dx in F^(p+r)}`,
//! `E_r^p = Z_r^p / (Z_(r-1)^(p+1) + d Z_(r-1)^(p-r+1))` and `d_r` maps
//! level `p` to level `p + r`. Everything is computed one degree piece at a
//! time, truncating complexes with a variable below their lowest generator.

mod report;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

pub use report::{check_constraints, converge, ConvergenceReport, Violation};

use crate::algebra::{kernel_of_images, BitVec, F2Matrix, Subquotient};
use crate::complex::{persistence_bars, ChainComplex, Expander, GradingMode, Key, Piece};
use crate::error::{Error, Result};

/// A complex whose generators all carry a filtration level.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: ChainComplex,
    reindexed: bool,
}

impl FilteredComplex {
    /// Validates levels. A complex whose differential never raises the level
    /// is re-indexed by negating levels.
    pub fn new(complex: ChainComplex) -> Result<Self> {
        let levels: Vec<i64> = complex
            .generators()
            .iter()
            .map(|g| g.filtration.ok_or_else(|| Error::Filtration(format!("generator {:?} has no level", g.id))))
            .collect::<Result<_>>()?;
        let (mut up, mut down) = (false, false);
        for (s, row) in complex.diff().iter().enumerate() {
            for (t, _) in row {
                up |= levels[*t] > levels[s];
                down |= levels[*t] < levels[s];
            }
        }
        if up && down {
            return Err(Error::Filtration("the differential both raises and lowers levels".into()));
        }
        if down {
            let neg: Vec<i64> = levels.iter().map(|p| -p).collect();
            return Ok(FilteredComplex { complex: complex.with_levels(&neg)?, reindexed: true });
        }
        Ok(FilteredComplex { complex, reindexed: false })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Whether levels were negated on input.
    pub fn reindexed(&self) -> bool {
        self.reindexed
    }

    pub fn level(&self, g: usize) -> i64 {
        self.complex.generators()[g].filtration.unwrap()
    }

    pub fn level_span(&self) -> i64 {
        let ls: Vec<i64> = (0..self.complex.len()).map(|g| self.level(g)).collect();
        match (ls.iter().min(), ls.iter().max()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }
}

/// Free and torsion summands starting in one page cell, over the variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub free: usize,
    pub torsion: Vec<u32>,
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free > 0 {
            parts.push(format!("F{}", self.free));
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &k in &self.torsion {
            *counts.entry(k).or_default() += 1;
        }
        for (k, m) in counts {
            parts.push(if m == 1 { format!("T{k}") } else { format!("T{k}x{m}") });
        }
        if parts.is_empty() {
            write!(f, "-")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// One nonzero group `E_r^p` in degree `key`.
#[derive(Clone, Debug, Serialize)]
pub struct PageCell {
    pub key: Key,
    pub level: i64,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Profile>,
}

/// A nonzero component of `d_r`.
#[derive(Clone, Debug, Serialize)]
pub struct PageArrow {
    pub from_key: Key,
    pub from_level: i64,
    pub to_key: Key,
    pub to_level: i64,
    pub rank: usize,
    #[serde(skip)]
    pub matrix: F2Matrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct Page {
    pub r: usize,
    pub cells: Vec<PageCell>,
    /// Nonzero components of the differential `d_r` on this page.
    pub arrows: Vec<PageArrow>,
}

impl Page {
    pub fn total_dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).sum()
    }

    pub fn dim(&self, key: &[i64], level: i64) -> usize {
        self.cells.iter().find(|c| c.key == key && c.level == level).map_or(0, |c| c.dim)
    }

    pub fn rank(&self) -> usize {
        self.arrows.iter().map(|a| a.rank).sum()
    }
}

/// All pages `E_1, ..., E_R` with `R` one more than the level span, so the
/// last page is `E_infinity`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralSequence {
    pub labels: Vec<&'static str>,
    pub mode: GradingMode,
    pub depth: i64,
    pub pages: Vec<Page>,
}

impl SpectralSequence {
    pub fn infinity(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.get(r.checked_sub(1)?)
    }

    /// `(q, h)` of a cell, when a quantum grading is available.
    pub fn bigrading(&self, key: &[i64], level: i64) -> (Option<i64>, i64) {
        match self.mode {
            GradingMode::Bigraded => {
                let h = key[0];
                let q = self.labels.iter().position(|l| *l == "q").map(|i| key[i]);
                (q, h)
            }
            GradingMode::Delta => (Some(key[0] + 2 * level), level),
        }
    }

    /// The page after which nothing changes.
    pub fn collapse_page(&self) -> usize {
        let mut r = self.pages.len();
        while r > 1 && self.pages[r - 2].rank() == 0 {
            r -= 1;
        }
        r
    }

    /// Total rank of `d_r` for each `r`.
    pub fn rank_profile(&self) -> Vec<(usize, usize)> {
        self.pages.iter().map(|p| (p.r, p.rank())).collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PageOptions {
    /// Truncation depth in variable steps; defaults to the torsion bound plus 2.
    pub depth: Option<i64>,
    /// Stop after this page even if the sequence has not converged.
    pub max_page: Option<usize>,
}

/// Per-degree data shared by all page computations.
struct Engine<'a> {
    fc: &'a FilteredComplex,
    ex: Expander<'a>,
    pieces: HashMap<Key, (Arc<Piece>, Vec<i64>)>,
    douts: HashMap<Key, F2Matrix>,
    cycles: HashMap<(Key, i64, i64), Vec<BitVec>>,
}

const INF: i64 = i64::MAX / 4;

impl<'a> Engine<'a> {
    fn new(fc: &'a FilteredComplex) -> Result<Self> {
        Ok(Engine {
            fc,
            ex: Expander::new(fc.complex())?,
            pieces: HashMap::new(),
            douts: HashMap::new(),
            cycles: HashMap::new(),
        })
    }

    fn piece(&mut self, key: &[i64]) -> (Arc<Piece>, Vec<i64>) {
        if let Some(p) = self.pieces.get(key) {
            return p.clone();
        }
        let p = self.ex.piece(key);
        let levels = p.basis.iter().map(|(g, _)| self.fc.level(*g)).collect();
        self.pieces.insert(key.to_vec(), (p.clone(), levels));
        self.pieces[key].clone()
    }

    fn next_key(&self, key: &[i64]) -> Key {
        self.ex.shift(key, &self.ex.grading().diff_degree)
    }

    fn prev_key(&self, key: &[i64]) -> Key {
        self.ex.grading().sub(key, &self.ex.grading().diff_degree)
    }

    fn dout(&mut self, key: &[i64]) -> Result<F2Matrix> {
        if let Some(m) = self.douts.get(key) {
            return Ok(m.clone());
        }
        let m = self.ex.diff_matrix(key)?;
        self.douts.insert(key.to_vec(), m.clone());
        Ok(m)
    }

    /// Basis of `Z_r^p` in degree `key`.
    fn z(&mut self, key: &[i64], p: i64, r: i64) -> Result<Vec<BitVec>> {
        let ck = (key.to_vec(), p, r);
        if let Some(z) = self.cycles.get(&ck) {
            return Ok(z.clone());
        }
        let (piece, levels) = self.piece(key);
        let (_, next_levels) = self.piece(&self.next_key(key));
        let d = self.dout(key)?;
        let cols: Vec<usize> = (0..piece.len()).filter(|&j| levels[j] >= p).collect();
        let bound = p.saturating_add(r);
        let low: Vec<usize> = (0..next_levels.len()).filter(|&t| next_levels[t] < bound).collect();
        let images: Vec<BitVec> = cols
            .iter()
            .map(|&j| {
                let c = d.column(j);
                BitVec::from_indices(low.len(), low.iter().enumerate().filter(|(_, &t)| c.get(t)).map(|(k, _)| k))
            })
            .collect();
        let ker = kernel_of_images(&images, low.len());
        let z: Vec<BitVec> = ker
            .iter()
            .map(|k| BitVec::from_indices(piece.len(), k.ones().map(|i| cols[i])))
            .collect();
        self.cycles.insert(ck, z.clone());
        Ok(z)
    }

    fn page_group(&mut self, key: &[i64], p: i64, r: i64) -> Result<Subquotient> {
        let (piece, _) = self.piece(key);
        let num = self.z(key, p, r)?;
        let mut den = self.z(key, p + 1, r - 1)?;
        let prev = self.prev_key(key);
        let dprev = self.dout(&prev)?;
        for v in self.z(&prev, p - r + 1, r - 1)? {
            let b = dprev.apply(&v);
            if !b.is_zero() {
                den.push(b);
            }
        }
        Ok(Subquotient::new(piece.len(), &num, &den))
    }

    fn levels_at(&mut self, key: &[i64]) -> BTreeSet<i64> {
        self.piece(key).1.into_iter().collect()
    }
}

/// Computes the pages of a filtered complex.
pub fn compute_pages(fc: &FilteredComplex, opts: PageOptions) -> Result<SpectralSequence> {
    let mut eng = Engine::new(fc)?;
    let depth = opts.depth.unwrap_or_else(|| eng.ex.default_depth());
    let keys = eng.ex.window_keys(depth);
    let key_set: BTreeSet<Key> = keys.iter().cloned().collect();
    let last = (fc.level_span() + 1).max(1) as usize;
    let last = opts.max_page.map_or(last, |m| m.min(last).max(1));
    let labels = eng.ex.grading().labels.clone();
    let one_var = fc.complex().nvars() == 1;
    let chains = if one_var { eng.ex.orbit_chains(&key_set) } else { Vec::new() };
    let mut pages = Vec::new();
    for r in 1..=last {
        let ri = r as i64;
        let mut groups: BTreeMap<(Key, i64), Subquotient> = BTreeMap::new();
        for key in &keys {
            for p in eng.levels_at(key) {
                let g = eng.page_group(key, p, ri)?;
                if g.dim() > 0 {
                    groups.insert((key.clone(), p), g);
                }
            }
        }
        let mut arrows = Vec::new();
        for ((key, p), g) in &groups {
            let tk = eng.next_key(key);
            let Some(tg) = groups.get(&(tk.clone(), p + ri)) else { continue };
            let d = eng.dout(key)?;
            let m = g
                .induced(tg, |v| d.apply(v))
                .ok_or_else(|| Error::Invariant(format!("d_{r} leaves the page in degree {key:?}")))?;
            let rank = m.rank();
            if rank > 0 {
                arrows.push(PageArrow { from_key: key.clone(), from_level: *p, to_key: tk, to_level: p + ri, rank, matrix: m });
            }
        }
        let mut profiles: BTreeMap<(Key, i64), Profile> = BTreeMap::new();
        if one_var {
            for chain in &chains {
                let levels: BTreeSet<i64> = groups.keys().filter(|(k, _)| chain.contains(k)).map(|(_, p)| *p).collect();
                for p in levels {
                    let mut owned = Vec::with_capacity(chain.len());
                    for k in chain {
                        owned.push(match groups.get(&(k.clone(), p)) {
                            Some(g) => g.clone(),
                            None => eng.page_group(k, p, ri)?,
                        });
                    }
                    let gs: Vec<&Subquotient> = owned.iter().collect();
                    let mut steps = Vec::new();
                    for t in 0..chain.len() - 1 {
                        let mult = eng.ex.multiplication_matrix(0, &chain[t])?;
                        let m = gs[t]
                            .induced(gs[t + 1], |v| mult.apply(v))
                            .ok_or_else(|| Error::Invariant("the variable does not act on the page".into()))?;
                        steps.push(m);
                    }
                    let dims: Vec<usize> = gs.iter().map(|g| g.dim()).collect();
                    for (s, t) in persistence_bars(&dims, &steps)? {
                        let prof = profiles.entry((chain[s].clone(), p)).or_default();
                        if t == chain.len() - 1 {
                            prof.free += 1;
                        } else {
                            prof.torsion.push((t - s + 1) as u32);
                        }
                    }
                }
            }
        }
        let cells = groups
            .iter()
            .map(|((key, p), g)| PageCell {
                key: key.clone(),
                level: *p,
                dim: g.dim(),
                profile: one_var.then(|| profiles.get(&(key.clone(), *p)).cloned().unwrap_or_default()),
            })
            .collect();
        pages.push(Page { r, cells, arrows });
    }
    Ok(SpectralSequence { labels, mode: fc.complex().mode(), depth, pages })
}
