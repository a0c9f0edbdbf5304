//! Convergence and grading checks for computed spectral sequences.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Engine, FilteredComplex, SpectralSequence, INF};
use crate::algebra::{BitVec, Echelon};
use crate::complex::Key;
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub ok: bool,
    /// `(key, level, dim E_infinity, dim of the associated graded of H)` where they differ.
    pub mismatches: Vec<(Key, i64, usize, usize)>,
    pub e_infinity_free_rank: Option<usize>,
    pub homology_free_rank: Option<usize>,
}

/// Compares the last page with the associated graded of the homology of the
/// total complex, degree by degree, and compares free ranks over the variable.
pub fn converge(fc: &FilteredComplex, ss: &SpectralSequence) -> Result<ConvergenceReport> {
    let mut eng = Engine::new(fc)?;
    let keys = eng.ex.window_keys(ss.depth);
    let mut graded: BTreeMap<(Key, i64), usize> = BTreeMap::new();
    for key in &keys {
        let (piece, _) = eng.piece(key);
        let prev = eng.prev_key(key);
        let dprev = eng.dout(&prev)?;
        let (prev_piece, _) = eng.piece(&prev);
        let boundaries: Vec<BitVec> = (0..prev_piece.len()).map(|j| dprev.column(j).clone()).collect();
        let mut b = Echelon::new(piece.len(), 0);
        for v in &boundaries {
            b.insert(v.clone(), BitVec::zeros(0));
        }
        let base = b.rank();
        let levels: Vec<i64> = eng.levels_at(key).into_iter().collect();
        let filtered_dim = |eng: &mut Engine, p: i64| -> Result<usize> {
            let mut e = b.clone();
            for z in eng.z(key, p, INF)? {
                e.insert(z, BitVec::zeros(0));
            }
            Ok(e.rank() - base)
        };
        for (i, &p) in levels.iter().enumerate() {
            let here = filtered_dim(&mut eng, p)?;
            let above = match levels.get(i + 1) {
                Some(&q) => filtered_dim(&mut eng, q)?,
                None => 0,
            };
            if here > above {
                graded.insert((key.clone(), p), here - above);
            }
        }
    }
    let inf = ss.infinity();
    let mut mismatches = Vec::new();
    let mut seen = BTreeMap::new();
    for c in &inf.cells {
        seen.insert((c.key.clone(), c.level), c.dim);
    }
    let all: std::collections::BTreeSet<(Key, i64)> = seen.keys().chain(graded.keys()).cloned().collect();
    for k in all {
        let e = seen.get(&k).copied().unwrap_or(0);
        let g = graded.get(&k).copied().unwrap_or(0);
        if e != g {
            mismatches.push((k.0, k.1, e, g));
        }
    }
    let (e_free, h_free) = if fc.complex().nvars() == 1 {
        let e: usize = inf.cells.iter().filter_map(|c| c.profile.as_ref()).map(|p| p.free).sum();
        (Some(e), Some(fc.complex().homology_module()?.free_rank()))
    } else {
        (None, None)
    };
    let ok = mismatches.is_empty() && e_free == h_free;
    Ok(ConvergenceReport { ok, mismatches, e_infinity_free_rank: e_free, homology_free_rank: h_free })
}

/// A page differential whose bigrading breaks the expected pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub r: usize,
    pub from: (Option<i64>, i64),
    pub to: (Option<i64>, i64),
    pub reason: String,
}

/// Checks every nonzero `d_r`: it must have `(q, h)` bidegree
/// `(2r - 2, r)`, vanish for even `r`, and preserve `q/2` mod 2.
pub fn check_constraints(ss: &SpectralSequence) -> Vec<Violation> {
    let mut out = Vec::new();
    for page in &ss.pages {
        let r = page.r as i64;
        for a in &page.arrows {
            let from = ss.bigrading(&a.from_key, a.from_level);
            let to = ss.bigrading(&a.to_key, a.to_level);
            let mut reasons = Vec::new();
            if r >= 2 && r % 2 == 0 {
                reasons.push(format!("nonzero differential on even page {r}"));
            }
            if to.1 - from.1 != r {
                reasons.push(format!("homological degree {} instead of {r}", to.1 - from.1));
            }
            if let (Some(q0), Some(q1)) = (from.0, to.0) {
                if q1 - q0 != 2 * r - 2 {
                    reasons.push(format!("quantum degree {} instead of {}", q1 - q0, 2 * r - 2));
                }
                if (q1 - q0).rem_euclid(4) != 0 {
                    reasons.push("q/2 mod 2 not preserved".into());
                }
            }
            for reason in reasons {
                out.push(Violation { r: page.r, from, to, reason });
            }
        }
    }
    out
}
