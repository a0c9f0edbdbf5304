//! Explicit model complexes over `F2[z_i, w_i]` and their actions on the
//! top-degree homology after identifying each pair `z_i, w_i` with `u_i`.

mod analysis;
mod relative;

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

pub use analysis::{
    canonical_fg, match_pattern, verify_declared, single_u, sum_maps, top_homology, verify_action, ActionReport, CanonicalPair,
    GoldenPattern, TopHomology,
};
pub use relative::{relative_identities, relative_tables};

use crate::complex::json::{collapse, Action, ActionKind};
use crate::complex::{ChainComplex, Generator, GradingMode, MapDegree, Target, Unit, Variable};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    KNonori,
    KOri,
    LNonori,
    LOri,
    Z11_2,
    TrefoilCfl,
}

impl ModelName {
    pub const ALL: [ModelName; 6] =
        [ModelName::KNonori, ModelName::KOri, ModelName::LNonori, ModelName::LOri, ModelName::Z11_2, ModelName::TrefoilCfl];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::KNonori => "k_nonori",
            ModelName::KOri => "k_ori",
            ModelName::LNonori => "l_nonori",
            ModelName::LOri => "l_ori",
            ModelName::Z11_2 => "z11_2",
            ModelName::TrefoilCfl => "trefoil_cfl",
        }
    }
}

impl FromStr for ModelName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown model {s:?}")))
    }
}

/// A model complex with its curved factors, declared actions and the
/// variable identification used for top homology.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: ModelName,
    pub complex: ChainComplex,
    pub factors: Vec<ChainComplex>,
    pub actions: Vec<Action>,
    /// Substitution identifying variables, e.g. `z1, w1 -> u1`.
    pub collapse: BTreeMap<String, Target>,
    /// `(label, z variable, w variable)` for each `Phi` action.
    pub phi_pairs: Vec<(String, String, String)>,
}

fn half_vars(names: &[&str]) -> Vec<Variable> {
    names.iter().map(|n| Variable::new(*n, Unit::Half)).collect()
}

/// Two generators `p, q` with `d p = fwd q` and `d q = back p`.
fn factor(vars: &[Variable], p: &str, q: &str, fwd: &str, back: Option<&str>) -> Result<ChainComplex> {
    let gens = vec![Generator::new(p, 0).alex2(0), Generator::new(q, 0).alex2(1)];
    let mut entries = vec![(p, q, fwd)];
    if let Some(b) = back {
        entries.push((q, p, b));
    }
    ChainComplex::from_text(vars.to_vec(), gens, &entries, GradingMode::Bigraded, -1)
}

fn tensor_all(factors: &[ChainComplex]) -> Result<ChainComplex> {
    let mut t = factors[0].clone();
    for f in &factors[1..] {
        t = t.tensor(f)?;
    }
    Ok(t)
}

fn pairs(n: usize) -> (BTreeMap<String, Target>, Vec<(String, String, String)>) {
    let mut a = BTreeMap::new();
    let mut phis = Vec::new();
    for i in 1..=n {
        a.insert(format!("z{i}"), Target::Var(format!("u{i}")));
        a.insert(format!("w{i}"), Target::Var(format!("u{i}")));
        phis.push((format!("Phi{i}"), format!("z{i}"), format!("w{i}")));
    }
    (a, phis)
}

fn k_nonori() -> Result<Model> {
    let vars = half_vars(&["z", "w"]);
    let c = factor(&vars, "f", "g", "z+w", None)?;
    Ok(Model {
        name: ModelName::KNonori,
        complex: c.clone(),
        factors: vec![c],
        actions: vec![],
        collapse: collapse(&[("u", &["z", "w"])]),
        phi_pairs: vec![("Phi".into(), "z".into(), "w".into())],
    })
}

fn k_ori() -> Result<Model> {
    let vars = half_vars(&["z1", "z2", "w1", "w2"]);
    let gens = vec![
        Generator::new("ax", 0).alex2(1),
        Generator::new("ay", 0).alex2(0),
        Generator::new("bx", 0).alex2(0),
        Generator::new("by", 0).alex2(1),
    ];
    let c = ChainComplex::from_text(
        vars.clone(),
        gens,
        &[
            ("ax", "ay", "w1+w2"),
            ("ay", "ax", "z1+z2"),
            ("ax", "bx", "z1+z2"),
            ("bx", "ax", "w1+w2"),
            ("bx", "by", "w1+w2"),
            ("by", "bx", "z1+z2"),
            ("ay", "by", "z1+z2"),
            ("by", "ay", "w1+w2"),
        ],
        GradingMode::Bigraded,
        -1,
    )?;
    let factors = vec![
        factor(&vars, "a", "b", "z1+z2", Some("w1+w2"))?,
        factor(&vars, "x", "y", "w1+w2", Some("z1+z2"))?,
    ];
    let (collapse, phi_pairs) = pairs(2);
    Ok(Model { name: ModelName::KOri, complex: c, factors, actions: vec![], collapse, phi_pairs })
}

fn l_nonori() -> Result<Model> {
    let vars = half_vars(&["z1", "z2", "w1", "w2"]);
    let factors = vec![
        factor(&vars, "a", "b", "w1+w2", Some("z1+z2"))?,
        factor(&vars, "z", "w", "z1+w2", None)?,
        factor(&vars, "x", "y", "z1+z2", Some("w1+w2"))?,
    ];
    let (collapse, phi_pairs) = pairs(2);
    Ok(Model { name: ModelName::LNonori, complex: tensor_all(&factors)?, factors, actions: vec![], collapse, phi_pairs })
}

fn l_ori() -> Result<Model> {
    let vars = half_vars(&["z1", "z2", "z3", "w1", "w2", "w3"]);
    let factors = vec![
        factor(&vars, "c", "d", "w1+w3", Some("z1+z2"))?,
        factor(&vars, "z", "w", "z1+z2", Some("w1+w3"))?,
        factor(&vars, "a", "b", "w2+w3", Some("z2+z3"))?,
        factor(&vars, "x", "y", "z2+z3", Some("w2+w3"))?,
    ];
    let (collapse, phi_pairs) = pairs(3);
    Ok(Model { name: ModelName::LOri, complex: tensor_all(&factors)?, factors, actions: vec![], collapse, phi_pairs })
}

fn z11_2() -> Result<Model> {
    let vars = half_vars(&["Z", "W"]);
    let gens = vec![
        Generator::new("ax", 0).alex2(1),
        Generator::new("ay", 0).alex2(0),
        Generator::new("bx", 0).alex2(0),
        Generator::new("by", 0).alex2(1),
    ];
    let c = ChainComplex::new(vars, gens, vec![], GradingMode::Bigraded, -1)?;
    let deg = MapDegree { h: -1, q: 0, alex2: 0 };
    let kappa = c.map_from_text(
        "A_kappa",
        deg,
        &[
            ("ax", "ay", "Z"),
            ("ax", "bx", "W"),
            ("ay", "ax", "W"),
            ("ay", "by", "W"),
            ("bx", "ax", "Z"),
            ("bx", "by", "Z"),
            ("by", "ay", "Z"),
            ("by", "bx", "W"),
        ],
    )?;
    let lambda = c.map_from_text(
        "A_lambda",
        deg,
        &[("ay", "ax", "W"), ("bx", "ax", "Z"), ("by", "ay", "Z"), ("by", "bx", "W")],
    )?;
    let actions = vec![
        Action { kind: ActionKind::Path, endpoints: Some(["Z".into(), "W".into()]), map: kappa },
        Action { kind: ActionKind::Path, endpoints: Some(["Z".into(), "W".into()]), map: lambda },
    ];
    Ok(Model {
        name: ModelName::Z11_2,
        complex: c.clone(),
        factors: vec![c],
        actions,
        collapse: collapse(&[("u", &["Z", "W"])]),
        phi_pairs: vec![],
    })
}

fn trefoil_cfl() -> Result<Model> {
    // Alexander parities of the reduced staircase: a and b odd, c even.
    let vars = half_vars(&["u"]);
    let gens = vec![Generator::new("a", 0).alex2(1), Generator::new("b", 0).alex2(1), Generator::new("c", 0).alex2(0)];
    let c = ChainComplex::from_text(vars, gens, &[("c", "a", "u")], GradingMode::Bigraded, -1)?;
    Ok(Model {
        name: ModelName::TrefoilCfl,
        complex: c.clone(),
        factors: vec![c],
        actions: vec![],
        collapse: BTreeMap::new(),
        phi_pairs: vec![],
    })
}

/// Builds a named model.
pub fn model(name: ModelName) -> Result<Model> {
    match name {
        ModelName::KNonori => k_nonori(),
        ModelName::KOri => k_ori(),
        ModelName::LNonori => l_nonori(),
        ModelName::LOri => l_ori(),
        ModelName::Z11_2 => z11_2(),
        ModelName::TrefoilCfl => trefoil_cfl(),
    }
}

impl Model {
    /// The complex after identifying variables.
    pub fn collapsed(&self) -> Result<ChainComplex> {
        self.complex.substitute(&self.collapse)
    }

    /// Every variable sent to a single `u`.
    pub fn fully_collapsed(&self) -> Result<ChainComplex> {
        let a = self.complex.variables().iter().map(|v| (v.name.clone(), Target::Var("u".into()))).collect();
        self.complex.substitute(&a)
    }

    pub fn action(&self, name: &str) -> Option<&Action> {
        self.actions.iter().find(|a| a.map.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_model_is_a_complex() {
        for name in ModelName::ALL {
            let m = model(name).unwrap();
            assert!(m.complex.is_complex(), "{name:?}");
            assert_eq!(name.as_str().parse::<ModelName>().unwrap(), name);
        }
    }

    #[test]
    fn generator_counts() {
        let counts: Vec<usize> = ModelName::ALL.iter().map(|&n| model(n).unwrap().complex.len()).collect();
        assert_eq!(counts, vec![2, 4, 8, 16, 4, 3]);
    }

    #[test]
    fn k_ori_is_a_tensor_of_curved_factors() {
        let m = model(ModelName::KOri).unwrap();
        let t = m.factors[0].tensor(&m.factors[1]).unwrap();
        for f in &m.factors {
            assert!(!f.is_complex());
        }
        for s in ["ax", "ay", "bx", "by"] {
            for t2 in ["ax", "ay", "bx", "by"] {
                assert_eq!(t.coefficient(s, t2), m.complex.coefficient(s, t2), "{s}->{t2}");
            }
        }
    }
}
