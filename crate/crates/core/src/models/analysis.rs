//! Top-degree homology of the models and the actions on it.

use serde::Serialize;

use super::{Model, ModelName};
use crate::algebra::{BitVec, F2Matrix, Polynomial};
use crate::complex::json::collapse;
use crate::complex::{ChainComplex, ChainMap, D2Violation, Expander, Homology, Key, Target};
use crate::error::{Error, Result};

/// Homology in the top homological degree, split by Alexander parity.
#[derive(Clone, Debug, Serialize)]
pub struct TopHomology {
    pub model: ModelName,
    pub top_h: i64,
    /// Basis classes as sums of generator ids, with their parity.
    pub basis: Vec<(String, i64)>,
    /// Matrix of each `Phi` in `basis` (column `j` is the image of class `j`).
    #[serde(serialize_with = "serialize_matrices")]
    pub phis: Vec<(String, F2Matrix)>,
    /// Whether `Phi` computed from `z_i` agrees with the one from `w_i`.
    pub z_w_agree: bool,
    #[serde(skip)]
    lifts: Vec<BitVec>,
    #[serde(skip)]
    ids: Vec<String>,
}

fn serialize_matrices<S: serde::Serializer>(v: &[(String, F2Matrix)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(v.len()))?;
    for (name, mat) in v {
        m.serialize_entry(name, &mat.to_rows())?;
    }
    m.end()
}

impl TopHomology {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn parity(&self, i: usize) -> i64 {
        self.basis[i].1
    }

    /// A class in basis coordinates, as a sum of generator ids.
    pub fn render(&self, coords: &BitVec) -> String {
        let mut v = BitVec::zeros(self.ids.len());
        for i in coords.ones() {
            v.xor_assign(&self.lifts[i]);
        }
        render_support(&v, &self.ids)
    }

    pub fn phi(&self, name: &str) -> Option<&F2Matrix> {
        self.phis.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Whether `coords` lies in a single parity summand.
    pub fn is_homogeneous(&self, coords: &BitVec) -> bool {
        let mut ps = coords.ones().map(|i| self.basis[i].1);
        match ps.next() {
            None => true,
            Some(p) => ps.all(|q| q == p),
        }
    }
}

fn render_support(v: &BitVec, ids: &[String]) -> String {
    let mut parts: Vec<&str> = v.ones().map(|i| ids[i].as_str()).collect();
    parts.sort();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn top_key(c: &ChainComplex, top_h: i64, parity: i64) -> Result<Key> {
    let g = c.grading()?;
    Ok(g.labels.iter().map(|l| if *l == "alex2" { parity } else { top_h }).collect())
}

/// Homology in the top degree after identifying `z_i, w_i` with `u_i`,
/// together with the `Phi` actions.
pub fn top_homology(model: &Model) -> Result<TopHomology> {
    let collapsed = model.collapsed()?;
    let top_h = collapsed.generators().iter().map(|g| g.h).max().unwrap_or(0);
    let parities: Vec<i64> = if collapsed.has_alex2() { vec![0, 1] } else { vec![0] };
    let mut ex = Expander::new(&collapsed)?;
    let mut groups: Vec<Homology> = Vec::new();
    for &p in &parities {
        groups.push(ex.homology(&top_key(&collapsed, top_h, p)?)?);
    }
    let mut basis = Vec::new();
    let mut lifts = Vec::new();
    let mut offsets = Vec::new();
    let ids: Vec<String> = collapsed.generators().iter().map(|g| g.id.clone()).collect();
    for (gi, h) in groups.iter().enumerate() {
        offsets.push(basis.len());
        for rep in h.group.reps() {
            let mut v = BitVec::zeros(ids.len());
            for i in rep.ones() {
                let (g, m) = &h.piece.basis[i];
                debug_assert!(m.is_one());
                v.flip(*g);
            }
            basis.push((render_support(&v, &ids), parities[gi]));
            lifts.push(v);
        }
    }
    let n = basis.len();
    let mut phis = Vec::new();
    let mut z_w_agree = true;
    for (label, z, w) in &model.phi_pairs {
        let mut mats = Vec::new();
        for var in [z, w] {
            let phi = model.complex.phi_action(var)?;
            let phi = model.complex.substitute_map(&phi, &model.collapse)?;
            let mut m = F2Matrix::zeros(n, n);
            for (gi, &p) in parities.iter().enumerate() {
                let mut tgt = Expander::new(&collapsed)?;
                let (_, dst, ind) = ex.induced(&mut tgt, &phi, &top_key(&collapsed, top_h, p)?)?;
                let ti = parities.iter().position(|&q| top_key(&collapsed, top_h, q).ok() == Some(dst.key.clone()));
                let ti = ti.ok_or_else(|| Error::Invariant("Phi leaves the top degree".into()))?;
                for j in 0..ind.ncols() {
                    for i in ind.column(j).ones() {
                        m.set(offsets[ti] + i, offsets[gi] + j, true);
                    }
                }
            }
            mats.push(m);
        }
        z_w_agree &= mats[0] == mats[1];
        phis.push((label.clone(), mats.swap_remove(0)));
    }
    Ok(TopHomology { model: model.name, top_h, basis, phis, z_w_agree, lifts, ids })
}

fn nonzero_vectors(n: usize) -> impl Iterator<Item = BitVec> {
    (1u32..1 << n).map(move |m| BitVec::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)))
}

/// The distinguished classes of a two-dimensional top homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalPair {
    /// The homogeneous class moved by some `Phi`.
    pub f: String,
    /// The homogeneous class killed by every `Phi`.
    pub g: String,
    /// The canonical element: `g` for the non-orientable model, `f` for the orientable one.
    pub theta: String,
}

/// Finds the unique classes `f` and `g` for the knot models.
pub fn canonical_fg(model: &Model) -> Result<CanonicalPair> {
    let top = top_homology(model)?;
    let (mut fs, mut gs) = (Vec::new(), Vec::new());
    for v in nonzero_vectors(top.dim()) {
        if !top.is_homogeneous(&v) {
            continue;
        }
        if top.phis.iter().all(|(_, m)| m.apply(&v).is_zero()) {
            gs.push(v);
        } else {
            fs.push(v);
        }
    }
    if fs.len() != 1 || gs.len() != 1 {
        return Err(Error::Invariant(format!(
            "expected unique f and g, found {} and {} candidates",
            fs.len(),
            gs.len()
        )));
    }
    let (f, g) = (top.render(&fs[0]), top.render(&gs[0]));
    let theta = match model.name {
        ModelName::KNonori => g.clone(),
        ModelName::KOri => f.clone(),
        other => return Err(Error::Input(format!("{} has no canonical pair", other.as_str()))),
    };
    Ok(CanonicalPair { f, g, theta })
}

/// Expected `Phi` actions on an ordered basis `(a, b, c, d)`: for each
/// action, the images of basis elements as index sets.
#[derive(Clone, Debug)]
pub struct GoldenPattern {
    pub phis: Vec<(&'static str, Vec<(usize, Vec<usize>)>)>,
    /// Basis positions forming one Alexander parity class; the rest form the other.
    pub parity_class: Vec<usize>,
}

impl GoldenPattern {
    /// `Phi1(a) = c`, `Phi2(a) = b + c`, `Phi1(b) = Phi2(b) = d`, `Phi2(c) = d`.
    pub fn l_nonori() -> Self {
        GoldenPattern {
            phis: vec![
                ("Phi1", vec![(0, vec![2]), (1, vec![3])]),
                ("Phi2", vec![(0, vec![1, 2]), (1, vec![3]), (2, vec![3])]),
            ],
            parity_class: vec![0, 3],
        }
    }

    /// `Phi1(a) = c`, `Phi2(a) = b + c`, `Phi3(a) = b`, `Phi1(b) = Phi2(b) = d`,
    /// `Phi2(c) = Phi3(c) = d`.
    pub fn l_ori() -> Self {
        GoldenPattern {
            phis: vec![
                ("Phi1", vec![(0, vec![2]), (1, vec![3])]),
                ("Phi2", vec![(0, vec![1, 2]), (1, vec![3]), (2, vec![3])]),
                ("Phi3", vec![(0, vec![1]), (2, vec![3])]),
            ],
            parity_class: vec![0, 3],
        }
    }

    pub fn matrix(&self, name: &str) -> Option<F2Matrix> {
        let (_, images) = self.phis.iter().find(|(n, _)| *n == name)?;
        let mut m = F2Matrix::zeros(4, 4);
        for (j, tgts) in images {
            for &i in tgts {
                m.set(i, *j, true);
            }
        }
        Some(m)
    }
}

/// Searches for homogeneous bases realizing a golden pattern. Returns the
/// first basis found (as class strings) and the number of such bases.
pub fn match_pattern(top: &TopHomology, golden: &GoldenPattern) -> Option<(Vec<String>, usize)> {
    let n = top.dim();
    if n != 4 {
        return None;
    }
    let homog: Vec<BitVec> = nonzero_vectors(n).filter(|v| top.is_homogeneous(v)).collect();
    let parity = |v: &BitVec| top.parity(v.first_one().unwrap());
    let targets: Vec<(F2Matrix, &F2Matrix)> = golden
        .phis
        .iter()
        .map(|(name, _)| Some((golden.matrix(name)?, top.phi(name)?)))
        .collect::<Option<_>>()?;
    let mut first = None;
    let mut count = 0;
    let mut idx = [0usize; 4];
    let total = homog.len().pow(4);
    for code in 0..total {
        let mut c = code;
        for slot in idx.iter_mut() {
            *slot = c % homog.len();
            c /= homog.len();
        }
        let vs: Vec<&BitVec> = idx.iter().map(|&i| &homog[i]).collect();
        let ps: Vec<i64> = vs.iter().map(|v| parity(v)).collect();
        let same = |i: usize, j: usize| ps[i] == ps[j];
        let in_class = |i: usize| golden.parity_class.contains(&i);
        if !(0..4).all(|i| (0..4).all(|j| same(i, j) == (in_class(i) == in_class(j)))) {
            continue;
        }
        let p = F2Matrix::from_columns(4, vs.iter().map(|v| (*v).clone()).collect());
        let Some(pinv) = p.inverse() else { continue };
        if targets.iter().all(|(want, got)| pinv.compose(&got.compose(&p)) == *want) {
            count += 1;
            if first.is_none() {
                first = Some(vs.iter().map(|v| top.render(v)).collect());
            }
        }
    }
    first.map(|f| (f, count))
}

/// Checks of an action against the differential.
#[derive(Clone, Debug, Serialize)]
pub struct ActionReport {
    pub name: String,
    /// `A d + d A = 0` over the full ring.
    pub loop_identity: bool,
    /// `A d + d A = U_1 + U_2` after identifying variables, when endpoints are given.
    pub path_identity: Option<bool>,
    /// Entries where the declared identity fails (the path identity when endpoints are given).
    pub defects: Vec<D2Violation>,
    /// Kernel of the induced map on each parity summand of top homology,
    /// empty when the action is not a chain map after identification.
    pub kernels: Vec<(i64, Vec<String>)>,
}

/// Verifies the anticommutation identities of `map` on `model` and computes
/// the kernel of the induced map on top homology after identification.
pub fn verify_action(model: &Model, map: &ChainMap, endpoints: Option<(&str, &str)>) -> Result<ActionReport> {
    let zero = Polynomial::zero(model.complex.nvars());
    let loop_defects = model.complex.homotopy_defect(map, &zero);
    let loop_identity = loop_defects.is_empty();
    let collapsed = model.collapsed()?;
    let cmap = model.complex.substitute_map(map, &model.collapse)?;
    let (path_identity, defects) = match endpoints {
        Some((v1, v2)) => {
            let rename = |v: &str| match model.collapse.get(v) {
                Some(Target::Var(t)) => t.clone(),
                _ => v.to_string(),
            };
            let rhs = Polynomial::parse(&format!("{}^2+{}^2", rename(v1), rename(v2)), &collapsed.variable_names())?;
            let d = collapsed.homotopy_defect(&cmap, &rhs);
            (Some(d.is_empty()), d)
        }
        None => (None, loop_defects),
    };
    let mut kernels = Vec::new();
    if !collapsed.homotopy_defect(&cmap, &Polynomial::zero(collapsed.nvars())).is_empty() {
        // Not a chain map after identification, so there is no induced map on homology.
        return Ok(ActionReport { name: map.name.clone(), loop_identity, path_identity, defects, kernels });
    }
    let top_h = collapsed.generators().iter().map(|g| g.h).max().unwrap_or(0);
    let parities: Vec<i64> = if collapsed.has_alex2() { vec![0, 1] } else { vec![0] };
    let ids: Vec<String> = collapsed.generators().iter().map(|g| g.id.clone()).collect();
    for p in parities {
        let mut ex = Expander::new(&collapsed)?;
        let mut tgt = Expander::new(&collapsed)?;
        let (src, _, ind) = ex.induced(&mut tgt, &cmap, &top_key(&collapsed, top_h, p)?)?;
        let ker = crate::algebra::kernel_of_images(ind.columns(), ind.rows());
        let classes = ker
            .iter()
            .map(|k| {
                let lift = src.group.lift(k);
                let mut v = BitVec::zeros(ids.len());
                for i in lift.ones() {
                    v.flip(src.piece.basis[i].0);
                }
                render_support(&v, &ids)
            })
            .collect();
        kernels.push((p, classes));
    }
    Ok(ActionReport { name: map.name.clone(), loop_identity, path_identity, defects, kernels })
}

/// Runs [`verify_action`] on every declared action, using its declared endpoints.
pub fn verify_declared(model: &Model) -> Result<Vec<ActionReport>> {
    model
        .actions
        .iter()
        .map(|a| {
            let ends = a.endpoints.as_ref().map(|[x, y]| (x.as_str(), y.as_str()));
            verify_action(model, &a.map, ends)
        })
        .collect()
}

/// Sum of two actions of the same degree.
pub fn sum_maps(c: &ChainComplex, a: &ChainMap, b: &ChainMap, name: &str) -> ChainMap {
    ChainMap { name: name.to_string(), degree: a.degree, entries: c.add_matrices(&a.entries, &b.entries) }
}

/// The identification used for `z11_2`-style loops: every variable to `u`.
pub fn single_u(names: &[&str]) -> std::collections::BTreeMap<String, Target> {
    collapse(&[("u", names)])
}
