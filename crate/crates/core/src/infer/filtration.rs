//! Filtrations on a free module that are compatible with a target action.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{BitVec, Echelon, F2Matrix};
use crate::error::{Error, Result};

/// Outcome of [`resolve_filtration`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FiltrationReport {
    /// The flag is forced: for each level, a basis of `F_level`.
    Unique { levels: Vec<(i64, Vec<String>)> },
    /// Several flags are compatible.
    Underdetermined { flags: usize },
    /// No flag is compatible.
    NoAssignment,
}

fn canonical_span(vs: &[BitVec], n: usize) -> Vec<BitVec> {
    let mut e = Echelon::new(n, 0);
    for v in vs {
        e.insert(v.clone(), BitVec::zeros(0));
    }
    // Reduced echelon form makes the basis unique.
    let mut rows: Vec<BitVec> = e.basis().cloned().collect();
    rows.sort_by_key(|r| r.first_one());
    for i in 0..rows.len() {
        let p = rows[i].first_one().unwrap();
        for j in 0..rows.len() {
            if j != i && rows[j].get(p) {
                let r = rows[i].clone();
                rows[j].xor_assign(&r);
            }
        }
    }
    rows.sort();
    rows
}

fn render(v: &BitVec, names: &[String]) -> String {
    let parts: Vec<String> = v
        .ones()
        .map(|i| names.get(i).cloned().unwrap_or_else(|| format!("e{}", i + 1)))
        .collect();
    parts.join("+")
}

/// Finds the filtrations `F_p` of `F2[X]^n` with one free generator at each
/// level of `levels` such that `action / X - Id` strictly raises the level,
/// i.e. the action is `X` on the associated graded.
pub fn resolve_filtration(levels: &[i64], action: &F2Matrix, basis_names: &[String]) -> Result<FiltrationReport> {
    let n = levels.len();
    if action.rows() != n || action.ncols() != n {
        return Err(Error::Input(format!("action is {}x{} but {n} towers survive", action.rows(), action.ncols())));
    }
    if n > 4 {
        return Err(Error::Input("filtration search supports at most 4 towers".into()));
    }
    let mut levels = levels.to_vec();
    levels.sort();
    let nil = action.add(&F2Matrix::identity(n));
    let distinct: Vec<i64> = levels.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut flags: BTreeSet<Vec<Vec<BitVec>>> = BTreeSet::new();
    let vectors: Vec<BitVec> =
        (1u32..1 << n).map(|m| BitVec::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1))).collect();
    let mut idx = vec![0usize; n];
    let total = vectors.len().pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for slot in idx.iter_mut() {
            *slot = c % vectors.len();
            c /= vectors.len();
        }
        let cols: Vec<BitVec> = idx.iter().map(|&i| vectors[i].clone()).collect();
        if F2Matrix::from_columns(n, cols.clone()).inverse().is_none() {
            continue;
        }
        let ok = (0..n).all(|i| {
            let above: Vec<BitVec> = (0..n).filter(|&j| levels[j] > levels[i]).map(|j| cols[j].clone()).collect();
            let span = Echelon::spanning(n, &above);
            span.contains(&nil.apply(&cols[i]))
        });
        if !ok {
            continue;
        }
        let flag = distinct
            .iter()
            .map(|&p| {
                let sub: Vec<BitVec> = (0..n).filter(|&j| levels[j] >= p).map(|j| cols[j].clone()).collect();
                canonical_span(&sub, n)
            })
            .collect();
        flags.insert(flag);
    }
    Ok(match flags.len() {
        0 => FiltrationReport::NoAssignment,
        1 => {
            let flag = flags.into_iter().next().unwrap();
            let levels = distinct
                .iter()
                .zip(flag)
                .map(|(&p, span)| (p, span.iter().map(|v| render(v, basis_names)).collect()))
                .collect();
            FiltrationReport::Unique { levels }
        }
        k => FiltrationReport::Underdetermined { flags: k },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["b".into(), "b+d".into()]
    }

    #[test]
    fn hopf_flag_is_forced() {
        let m = F2Matrix::from_rows(&[vec![1, 0], vec![1, 1]]);
        let r = resolve_filtration(&[-2, 0], &m, &names()).unwrap();
        let FiltrationReport::Unique { levels } = r else { panic!("{r:?}") };
        assert_eq!(levels[1], (0, vec!["b+d".to_string()]));
        assert_eq!(levels[0].1.len(), 2);
    }

    #[test]
    fn identity_action_is_underdetermined() {
        let r = resolve_filtration(&[-2, 0], &F2Matrix::identity(2), &names()).unwrap();
        assert_eq!(r, FiltrationReport::Underdetermined { flags: 3 });
    }

    #[test]
    fn nilpotent_part_too_large_for_levels() {
        let m = F2Matrix::from_rows(&[vec![1, 0], vec![1, 1]]);
        assert_eq!(resolve_filtration(&[0, 0], &m, &names()).unwrap(), FiltrationReport::NoAssignment);
    }
}
