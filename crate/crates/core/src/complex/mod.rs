//! Free chain complexes over polynomial rings in F2.

mod expand;
mod grading;
pub mod json;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

pub use expand::{map_matrix, persistence_bars, Expander, Homology, Piece};
pub use grading::{Grading, GradingMode, Key};

use crate::algebra::{homology_from_differential, Monomial, ModuleDecomposition, MonomialMatrix, Polynomial};
use crate::error::{Error, Result};

/// Whether a variable stands for a half power `U^(1/2)` or a whole `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    Half,
    Whole,
}

impl Unit {
    pub fn alex2(self) -> i64 {
        match self {
            Unit::Half => 1,
            Unit::Whole => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub unit: Unit,
    pub h: i64,
    pub q: i64,
}

impl Variable {
    /// Default degrees: a half power has `h = -1, q = -2`, a whole power twice that.
    pub fn new(name: impl Into<String>, unit: Unit) -> Self {
        let (h, q) = match unit {
            Unit::Half => (-1, -2),
            Unit::Whole => (-2, -4),
        };
        Variable { name: name.into(), unit, h, q }
    }

    pub fn with_degrees(name: impl Into<String>, unit: Unit, h: i64, q: i64) -> Self {
        Variable { name: name.into(), unit, h, q }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub h: i64,
    pub q: Option<i64>,
    pub alex2: Option<i64>,
    pub filtration: Option<i64>,
}

impl Generator {
    pub fn new(id: impl Into<String>, h: i64) -> Self {
        Generator { id: id.into(), h, q: None, alex2: None, filtration: None }
    }

    pub fn q(mut self, q: i64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn alex2(mut self, a: i64) -> Self {
        self.alex2 = Some(a.rem_euclid(2));
        self
    }

    pub fn level(mut self, p: i64) -> Self {
        self.filtration = Some(p);
        self
    }
}

/// Sparse matrix over the polynomial ring: for each source generator, the
/// sorted list of `(target, coefficient)` with nonzero coefficients.
pub type SparsePolyMatrix = Vec<Vec<(usize, Polynomial)>>;

/// Degree shift of a map between complexes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDegree {
    pub h: i64,
    #[serde(default)]
    pub q: i64,
    #[serde(default)]
    pub alex2: i64,
}

/// A module map given by a sparse polynomial matrix.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub name: String,
    pub degree: MapDegree,
    pub entries: SparsePolyMatrix,
}

impl ChainMap {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }
}

/// A free chain complex. The differential need not square to zero, so that
/// curved factors can be represented; see [`ChainComplex::verify_d2`].
#[derive(Clone, Debug)]
pub struct ChainComplex {
    variables: Vec<Variable>,
    generators: Vec<Generator>,
    diff: SparsePolyMatrix,
    index: HashMap<String, usize>,
    mode: GradingMode,
    diff_h: i64,
}

/// A composite `d o d` entry that failed to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D2Violation {
    pub from: String,
    pub to: String,
    pub coefficient: String,
}

/// Where a variable goes under [`ChainComplex::substitute`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Var(String),
    Zero,
}

fn accumulate(row: &mut BTreeMap<usize, Polynomial>, t: usize, p: Polynomial) {
    use std::collections::btree_map::Entry;
    match row.entry(t) {
        Entry::Vacant(e) => {
            if !p.is_zero() {
                e.insert(p);
            }
        }
        Entry::Occupied(mut e) => {
            e.get_mut().add_assign(&p);
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn finish_rows(rows: Vec<BTreeMap<usize, Polynomial>>) -> SparsePolyMatrix {
    rows.into_iter().map(|r| r.into_iter().collect()).collect()
}

impl ChainComplex {
    /// Builds a complex from `(from, to, coefficient)` triples; coefficients
    /// of repeated pairs are added.
    pub fn new(
        variables: Vec<Variable>,
        generators: Vec<Generator>,
        entries: Vec<(usize, usize, Polynomial)>,
        mode: GradingMode,
        diff_h: i64,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.id.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate generator id {:?}", g.id)));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for v in &variables {
            if !seen.insert(v.name.as_str()) {
                return Err(Error::Input(format!("duplicate variable {:?}", v.name)));
            }
        }
        let n = generators.len();
        let mut rows: Vec<BTreeMap<usize, Polynomial>> = vec![BTreeMap::new(); n];
        for (s, t, p) in entries {
            if s >= n || t >= n {
                return Err(Error::Input(format!("differential entry ({s},{t}) out of range")));
            }
            if p.nvars() != variables.len() {
                return Err(Error::Input("coefficient ring mismatch".into()));
            }
            accumulate(&mut rows[s], t, p);
        }
        let c = ChainComplex { variables, generators, diff: finish_rows(rows), index, mode, diff_h };
        c.check_homogeneous()?;
        Ok(c)
    }

    /// Builds a complex from `(from id, to id, text)` triples.
    pub fn from_text(
        variables: Vec<Variable>,
        generators: Vec<Generator>,
        entries: &[(&str, &str, &str)],
        mode: GradingMode,
        diff_h: i64,
    ) -> Result<Self> {
        let names: Vec<&str> = variables.iter().map(|v| v.name.as_str()).collect();
        let pos: HashMap<&str, usize> = generators.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
        let mut triples = Vec::new();
        for (s, t, p) in entries {
            let si = *pos.get(s).ok_or_else(|| Error::Input(format!("unknown generator {s:?}")))?;
            let ti = *pos.get(t).ok_or_else(|| Error::Input(format!("unknown generator {t:?}")))?;
            triples.push((si, ti, Polynomial::parse(p, &names)?));
        }
        Self::new(variables, generators, triples, mode, diff_h)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable_names(&self) -> Vec<&str> {
        self.variables.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn diff(&self) -> &SparsePolyMatrix {
        &self.diff
    }

    pub fn mode(&self) -> GradingMode {
        self.mode
    }

    pub fn diff_h(&self) -> i64 {
        self.diff_h
    }

    pub fn with_mode(mut self, mode: GradingMode) -> Result<Self> {
        self.mode = mode;
        self.check_homogeneous()?;
        Ok(self)
    }

    /// Replaces generator filtration levels.
    pub fn with_levels(mut self, levels: &[i64]) -> Result<Self> {
        if levels.len() != self.len() {
            return Err(Error::Filtration("one level per generator is required".into()));
        }
        for (g, &p) in self.generators.iter_mut().zip(levels) {
            g.filtration = Some(p);
        }
        Ok(self)
    }

    pub fn entry_count(&self) -> usize {
        self.diff.iter().map(Vec::len).sum()
    }

    pub fn has_q(&self) -> bool {
        !self.generators.is_empty() && self.generators.iter().all(|g| g.q.is_some())
    }

    pub fn has_alex2(&self) -> bool {
        !self.generators.is_empty() && self.generators.iter().all(|g| g.alex2.is_some())
    }

    /// Degree data in the complex's grading mode.
    pub fn grading(&self) -> Result<Grading> {
        let has_q = self.has_q();
        let has_a = self.has_alex2();
        let mut labels = Vec::new();
        let mut parity = Vec::new();
        let mut gen_keys: Vec<Key> = vec![Vec::new(); self.len()];
        let mut var_degrees: Vec<Key> = vec![Vec::new(); self.nvars()];
        let mut diff_degree = Vec::new();
        match self.mode {
            GradingMode::Bigraded => {
                labels.push("h");
                parity.push(false);
                for (k, g) in gen_keys.iter_mut().zip(&self.generators) {
                    k.push(g.h);
                }
                for (k, v) in var_degrees.iter_mut().zip(&self.variables) {
                    k.push(v.h);
                }
                diff_degree.push(self.diff_h);
                if has_q {
                    labels.push("q");
                    parity.push(false);
                    for (k, g) in gen_keys.iter_mut().zip(&self.generators) {
                        k.push(g.q.unwrap());
                    }
                    for (k, v) in var_degrees.iter_mut().zip(&self.variables) {
                        k.push(v.q);
                    }
                    diff_degree.push(0);
                }
            }
            GradingMode::Delta => {
                if !has_q {
                    return Err(Error::Grading("delta grading needs a quantum grading on every generator".into()));
                }
                labels.push("2delta");
                parity.push(false);
                for (k, g) in gen_keys.iter_mut().zip(&self.generators) {
                    k.push(g.q.unwrap() - 2 * g.h);
                }
                for (k, v) in var_degrees.iter_mut().zip(&self.variables) {
                    k.push(v.q - 2 * v.h);
                }
                diff_degree.push(-2 * self.diff_h);
            }
        }
        if has_a {
            labels.push("alex2");
            parity.push(true);
            for (k, g) in gen_keys.iter_mut().zip(&self.generators) {
                k.push(g.alex2.unwrap());
            }
            for (k, v) in var_degrees.iter_mut().zip(&self.variables) {
                k.push(v.unit.alex2());
            }
            diff_degree.push(0);
        }
        let bound = if var_degrees.is_empty() {
            None
        } else {
            (0..labels.len()).find(|&c| !parity[c] && var_degrees.iter().all(|d| d[c] < 0))
        };
        let g = Grading { labels, parity, gen_keys, var_degrees, diff_degree, bound };
        let gen_keys = g.gen_keys.iter().map(|k| g.normalize(k.clone())).collect();
        Ok(Grading { gen_keys, ..g })
    }

    /// Key shift of a map of the given degree.
    pub fn map_key(&self, grading: &Grading, d: MapDegree) -> Key {
        let mut k = Vec::new();
        for label in &grading.labels {
            k.push(match *label {
                "h" => d.h,
                "q" => d.q,
                "2delta" => d.q - 2 * d.h,
                _ => d.alex2,
            });
        }
        grading.normalize(k)
    }

    fn check_homogeneous(&self) -> Result<()> {
        let g = self.grading()?;
        for (s, row) in self.diff.iter().enumerate() {
            let want = g.add(&g.gen_keys[s], &g.diff_degree);
            for (t, p) in row {
                for m in p.terms() {
                    let got = g.add(&g.gen_keys[*t], &g.monomial_degree(m));
                    if got != want {
                        let names = self.variable_names();
                        return Err(Error::Grading(format!(
                            "differential entry {} -> {} with coefficient {} is not homogeneous",
                            self.generators[s].id,
                            self.generators[*t].id,
                            p.display(&names)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that a map is homogeneous of its declared degree.
    pub fn check_map(&self, target: &ChainComplex, f: &ChainMap) -> Result<()> {
        let g1 = self.grading()?;
        let g2 = target.grading()?;
        let shift = self.map_key(&g1, f.degree);
        for (s, row) in f.entries.iter().enumerate() {
            let want = g1.add(&g1.gen_keys[s], &shift);
            for (t, p) in row {
                for m in p.terms() {
                    if g2.add(&g2.gen_keys[*t], &g2.monomial_degree(m)) != want {
                        return Err(Error::Grading(format!(
                            "map {} entry {} -> {} is not of degree {:?}",
                            f.name, self.generators[s].id, target.generators[*t].id, f.degree
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses a map given by `(from id, to id, text)` triples.
    pub fn map_from_text(&self, name: &str, degree: MapDegree, entries: &[(&str, &str, &str)]) -> Result<ChainMap> {
        let names = self.variable_names();
        let mut rows: Vec<BTreeMap<usize, Polynomial>> = vec![BTreeMap::new(); self.len()];
        for (s, t, p) in entries {
            let si = self.index_of(s).ok_or_else(|| Error::Input(format!("unknown generator {s:?}")))?;
            let ti = self.index_of(t).ok_or_else(|| Error::Input(format!("unknown generator {t:?}")))?;
            accumulate(&mut rows[si], ti, Polynomial::parse(p, &names)?);
        }
        let f = ChainMap { name: name.to_string(), degree, entries: finish_rows(rows) };
        self.check_map(self, &f)?;
        Ok(f)
    }

    /// `a o b` for sparse matrices (apply `b` first).
    pub fn compose(&self, a: &SparsePolyMatrix, b: &SparsePolyMatrix) -> SparsePolyMatrix {
        let mut rows: Vec<BTreeMap<usize, Polynomial>> = vec![BTreeMap::new(); b.len()];
        for (s, row) in b.iter().enumerate() {
            for (m, p) in row {
                for (t, p2) in &a[*m] {
                    accumulate(&mut rows[s], *t, p.mul(p2));
                }
            }
        }
        finish_rows(rows)
    }

    pub fn add_matrices(&self, a: &SparsePolyMatrix, b: &SparsePolyMatrix) -> SparsePolyMatrix {
        let mut rows: Vec<BTreeMap<usize, Polynomial>> = a.iter().map(|r| r.iter().cloned().collect()).collect();
        for (s, row) in b.iter().enumerate() {
            for (t, p) in row {
                accumulate(&mut rows[s], *t, p.clone());
            }
        }
        finish_rows(rows)
    }

    pub fn identity_scaled(&self, p: &Polynomial) -> SparsePolyMatrix {
        (0..self.len()).map(|i| if p.is_zero() { vec![] } else { vec![(i, p.clone())] }).collect()
    }

    fn describe(&self, m: &SparsePolyMatrix) -> Vec<D2Violation> {
        let names = self.variable_names();
        let mut out = Vec::new();
        for (s, row) in m.iter().enumerate() {
            for (t, p) in row {
                out.push(D2Violation {
                    from: self.generators[s].id.clone(),
                    to: self.generators[*t].id.clone(),
                    coefficient: p.display(&names).to_string(),
                });
            }
        }
        out
    }

    /// Entries of `d o d` that do not vanish.
    pub fn verify_d2(&self) -> Vec<D2Violation> {
        self.describe(&self.compose(&self.diff, &self.diff))
    }

    pub fn is_complex(&self) -> bool {
        self.verify_d2().is_empty()
    }

    /// Nonvanishing entries of `f d + d f` (for maps from the complex to itself).
    pub fn anticommutator(&self, f: &ChainMap) -> SparsePolyMatrix {
        let a = self.compose(&f.entries, &self.diff);
        let b = self.compose(&self.diff, &f.entries);
        self.add_matrices(&a, &b)
    }

    /// Entries where `f d + d f` differs from `rhs * Id`.
    pub fn homotopy_defect(&self, f: &ChainMap, rhs: &Polynomial) -> Vec<D2Violation> {
        let anti = self.anticommutator(f);
        self.describe(&self.add_matrices(&anti, &self.identity_scaled(rhs)))
    }

    /// The map `d(d)/dv`: formal derivative of the differential in one variable.
    pub fn phi_action(&self, var: &str) -> Result<ChainMap> {
        let i = self
            .variable_index(var)
            .ok_or_else(|| Error::Input(format!("unknown variable {var:?}")))?;
        let v = &self.variables[i];
        let entries = self
            .diff
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(t, p)| {
                        let d = p.derivative(i);
                        (!d.is_zero()).then_some((*t, d))
                    })
                    .collect()
            })
            .collect();
        Ok(ChainMap {
            name: format!("Phi_{var}"),
            degree: MapDegree { h: self.diff_h - v.h, q: -v.q, alex2: v.unit.alex2() },
            entries,
        })
    }

    fn substitution_plan(&self, assignment: &BTreeMap<String, Target>) -> Result<(Vec<Variable>, Vec<Option<usize>>)> {
        for name in assignment.keys() {
            if self.variable_index(name).is_none() {
                return Err(Error::Input(format!("cannot substitute unknown variable {name:?}")));
            }
        }
        let mut new_vars: Vec<Variable> = Vec::new();
        let mut target = Vec::new();
        for v in &self.variables {
            let dest = match assignment.get(&v.name) {
                Some(Target::Zero) => {
                    target.push(None);
                    continue;
                }
                Some(Target::Var(n)) => n.clone(),
                None => v.name.clone(),
            };
            match new_vars.iter().position(|w| w.name == dest) {
                Some(j) => {
                    let w = &new_vars[j];
                    if (w.unit, w.h, w.q) != (v.unit, v.h, v.q) {
                        return Err(Error::Grading(format!(
                            "variables sent to {dest:?} have different units or degrees"
                        )));
                    }
                    target.push(Some(j));
                }
                None => {
                    new_vars.push(Variable { name: dest, ..v.clone() });
                    target.push(Some(new_vars.len() - 1));
                }
            }
        }
        Ok((new_vars, target))
    }

    fn substitute_matrix(m: &SparsePolyMatrix, target: &[Option<usize>], nvars: usize) -> SparsePolyMatrix {
        m.iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(t, p)| {
                        let q = p.substitute(target, nvars);
                        (!q.is_zero()).then_some((*t, q))
                    })
                    .collect()
            })
            .collect()
    }

    /// Renames or kills variables. Variables sent to the same name must share
    /// unit and degrees; unmentioned variables are kept.
    pub fn substitute(&self, assignment: &BTreeMap<String, Target>) -> Result<ChainComplex> {
        let (vars, target) = self.substitution_plan(assignment)?;
        let diff = Self::substitute_matrix(&self.diff, &target, vars.len());
        Ok(ChainComplex { variables: vars, diff, ..self.clone() })
    }

    pub fn substitute_map(&self, f: &ChainMap, assignment: &BTreeMap<String, Target>) -> Result<ChainMap> {
        let (vars, target) = self.substitution_plan(assignment)?;
        Ok(ChainMap {
            name: f.name.clone(),
            degree: f.degree,
            entries: Self::substitute_matrix(&f.entries, &target, vars.len()),
        })
    }

    /// Sends every listed variable to `Zero`.
    pub fn kill(&self, vars: &[&str]) -> Result<ChainComplex> {
        let a = vars.iter().map(|v| (v.to_string(), Target::Zero)).collect();
        self.substitute(&a)
    }

    /// Tensor product over the ring generated by the union of the variables.
    /// Generator ids are concatenated.
    pub fn tensor(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.mode != other.mode || self.diff_h != other.diff_h {
            return Err(Error::Input("tensor factors must share grading conventions".into()));
        }
        let mut vars = self.variables.clone();
        let mut remap = Vec::new();
        for v in &other.variables {
            match vars.iter().position(|w| w.name == v.name) {
                Some(j) => {
                    if vars[j] != *v {
                        return Err(Error::Grading(format!("variable {:?} differs between factors", v.name)));
                    }
                    remap.push(Some(j));
                }
                None => {
                    vars.push(v.clone());
                    remap.push(Some(vars.len() - 1));
                }
            }
        }
        let nv = vars.len();
        let left: Vec<Option<usize>> = (0..self.nvars()).map(Some).collect();
        let n2 = other.len();
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(Generator {
                    id: format!("{}{}", a.id, b.id),
                    h: a.h + b.h,
                    q: a.q.zip(b.q).map(|(x, y)| x + y),
                    alex2: a.alex2.zip(b.alex2).map(|(x, y)| (x + y).rem_euclid(2)),
                    filtration: a.filtration.zip(b.filtration).map(|(x, y)| x + y),
                });
            }
        }
        let mut entries = Vec::new();
        for (i, row) in self.diff.iter().enumerate() {
            for (t, p) in row {
                let p = p.substitute(&left, nv);
                for j in 0..n2 {
                    entries.push((i * n2 + j, t * n2 + j, p.clone()));
                }
            }
        }
        for (j, row) in other.diff.iter().enumerate() {
            for (t, p) in row {
                let p = p.substitute(&remap, nv);
                for i in 0..self.len() {
                    entries.push((i * n2 + j, i * n2 + t, p.clone()));
                }
            }
        }
        ChainComplex::new(vars, gens, entries, self.mode, self.diff_h)
    }

    /// The coefficient of `to` in `d(from)`, as text.
    pub fn coefficient(&self, from: &str, to: &str) -> Option<String> {
        let s = self.index_of(from)?;
        let t = self.index_of(to)?;
        let names = self.variable_names();
        self.diff[s].iter().find(|(x, _)| *x == t).map(|(_, p)| p.display(&names).to_string())
    }

    /// Homology as a graded module over the single variable, by graded Smith
    /// normal form of the differential.
    pub fn homology_module(&self) -> Result<ModuleDecomposition<Key>> {
        if self.nvars() != 1 {
            return Err(Error::Input("module homology needs exactly one variable".into()));
        }
        let g = self.grading()?;
        let m = MonomialMatrix { rows: self.len(), cols: self.len(), entries: self.monomial_entries()? };
        homology_from_differential(&m, &g.gen_keys)
    }

    /// Homology dimensions over F2 in each degree; complexes with variables
    /// are truncated `depth` variable steps below the lowest generator.
    pub fn homology_dims(&self, depth: Option<i64>) -> Result<BTreeMap<Key, usize>> {
        let mut ex = Expander::new(self)?;
        let depth = depth.unwrap_or_else(|| ex.default_depth());
        ex.homology_dims(depth)
    }

    /// Monomial entries `(to, from, exponent)` for a complex in one variable.
    pub fn monomial_entries(&self) -> Result<Vec<(usize, usize, u32)>> {
        if self.nvars() > 1 {
            return Err(Error::Input("expected at most one variable".into()));
        }
        let mut out = Vec::new();
        for (s, row) in self.diff.iter().enumerate() {
            for (t, p) in row {
                let m: &Monomial = p
                    .as_monomial()
                    .ok_or_else(|| Error::Grading("coefficient is not a monomial".into()))?;
                out.push((*t, s, m.0.first().copied().unwrap_or(0)));
            }
        }
        Ok(out)
    }
}
