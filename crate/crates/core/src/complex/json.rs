//! JSON format for complexes and their actions.
//!
//! ```json
//! {
//!   "variables": [{"name": "z", "unit": "1/2"}, {"name": "w", "unit": "1/2"}],
//!   "generators": [{"id": "f", "h": 0, "alex2": 0}, {"id": "g", "h": 0, "alex2": 1}],
//!   "diff": [{"from": "f", "to": "g", "poly": "z+w"}],
//!   "actions": []
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ChainComplex, ChainMap, Generator, GradingMode, MapDegree, Unit, Variable};
use crate::algebra::Polynomial;
use crate::error::{Error, Result};

fn default_diff_h() -> i64 {
    -1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub unit: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub id: String,
    pub h: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alex2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntrySpec {
    pub from: String,
    pub to: String,
    pub poly: String,
}

/// How an action relates to the differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    /// Commutes with the differential.
    Chain,
    /// Anticommutes with the differential: `A d + d A = 0`.
    Loop,
    /// `A d + d A` equals the sum of the squares of the two endpoint variables.
    Path,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionSpec {
    pub name: String,
    pub kind: ActionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<MapDegree>,
    #[serde(default)]
    pub entries: Vec<EntrySpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub mode: GradingMode,
    #[serde(default = "default_diff_h")]
    pub diff_h: i64,
    #[serde(default)]
    pub variables: Vec<VariableSpec>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub diff: Vec<EntrySpec>,
    #[serde(default)]
    pub actions: Vec<ActionSpec>,
}

/// A declared action on a complex.
#[derive(Clone, Debug)]
pub struct Action {
    pub kind: ActionKind,
    pub endpoints: Option<[String; 2]>,
    pub map: ChainMap,
}

fn parse_unit(v: &Value) -> Result<Unit> {
    match v {
        Value::String(s) => match s.as_str() {
            "1/2" | "half" => Ok(Unit::Half),
            "1" | "whole" => Ok(Unit::Whole),
            _ => Err(Error::Parse(format!("unknown unit {s:?}"))),
        },
        Value::Number(n) => match n.as_f64() {
            Some(0.5) => Ok(Unit::Half),
            Some(1.0) => Ok(Unit::Whole),
            _ => Err(Error::Parse(format!("unknown unit {n}"))),
        },
        _ => Err(Error::Parse("variable unit must be \"1/2\" or \"1\"".into())),
    }
}

fn unit_value(u: Unit) -> Value {
    Value::String(match u {
        Unit::Half => "1/2".into(),
        Unit::Whole => "1".into(),
    })
}

fn infer_degree(c: &ChainComplex, entries: &[EntrySpec]) -> Result<MapDegree> {
    let Some(e) = entries.first() else { return Ok(MapDegree::default()) };
    let s = c.index_of(&e.from).ok_or_else(|| Error::Input(format!("unknown generator {:?}", e.from)))?;
    let t = c.index_of(&e.to).ok_or_else(|| Error::Input(format!("unknown generator {:?}", e.to)))?;
    let p = Polynomial::parse(&e.poly, &c.variable_names())?;
    let m = p.terms().next().ok_or_else(|| Error::Input("zero action entry".into()))?;
    let (gs, gt) = (&c.generators()[s], &c.generators()[t]);
    let mut d = MapDegree { h: gt.h - gs.h, q: 0, alex2: 0 };
    for (i, &e) in m.0.iter().enumerate() {
        let v = &c.variables()[i];
        d.h += e as i64 * v.h;
        d.q += e as i64 * v.q;
        d.alex2 += e as i64 * v.unit.alex2();
    }
    if let (Some(a), Some(b)) = (gs.q, gt.q) {
        d.q += b - a;
    }
    if let (Some(a), Some(b)) = (gs.alex2, gt.alex2) {
        d.alex2 += b - a;
    }
    d.alex2 = d.alex2.rem_euclid(2);
    Ok(d)
}

impl ComplexFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<(ChainComplex, Vec<Action>)> {
        let mut vars = Vec::new();
        for v in &self.variables {
            let unit = parse_unit(&v.unit)?;
            let d = Variable::new(v.name.clone(), unit);
            vars.push(Variable::with_degrees(v.name.clone(), unit, v.h.unwrap_or(d.h), v.q.unwrap_or(d.q)));
        }
        let gens: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator {
                id: g.id.clone(),
                h: g.h,
                q: g.q,
                alex2: g.alex2.map(|a| a.rem_euclid(2)),
                filtration: g.filtration,
            })
            .collect();
        let entries: Vec<(&str, &str, &str)> =
            self.diff.iter().map(|e| (e.from.as_str(), e.to.as_str(), e.poly.as_str())).collect();
        let c = ChainComplex::from_text(vars, gens, &entries, self.mode, self.diff_h)?;
        let mut actions = Vec::new();
        for a in &self.actions {
            let degree = match a.degree {
                Some(d) => d,
                None => infer_degree(&c, &a.entries)?,
            };
            let e: Vec<(&str, &str, &str)> =
                a.entries.iter().map(|e| (e.from.as_str(), e.to.as_str(), e.poly.as_str())).collect();
            let map = c.map_from_text(&a.name, degree, &e)?;
            if a.kind == ActionKind::Path && a.endpoints.is_none() {
                return Err(Error::Input(format!("path action {:?} needs endpoints", a.name)));
            }
            actions.push(Action { kind: a.kind, endpoints: a.endpoints.clone(), map });
        }
        Ok((c, actions))
    }

    pub fn from_complex(c: &ChainComplex, actions: &[Action]) -> Self {
        let names = c.variable_names();
        let ids: Vec<&str> = c.generators().iter().map(|g| g.id.as_str()).collect();
        let entries_of = |m: &super::SparsePolyMatrix| -> Vec<EntrySpec> {
            let mut out = Vec::new();
            for (s, row) in m.iter().enumerate() {
                for (t, p) in row {
                    out.push(EntrySpec {
                        from: ids[s].to_string(),
                        to: ids[*t].to_string(),
                        poly: p.display(&names).to_string(),
                    });
                }
            }
            out
        };
        ComplexFile {
            name: None,
            mode: c.mode(),
            diff_h: c.diff_h(),
            variables: c
                .variables()
                .iter()
                .map(|v| VariableSpec { name: v.name.clone(), unit: unit_value(v.unit), h: Some(v.h), q: Some(v.q) })
                .collect(),
            generators: c
                .generators()
                .iter()
                .map(|g| GeneratorSpec { id: g.id.clone(), h: g.h, q: g.q, alex2: g.alex2, filtration: g.filtration })
                .collect(),
            diff: entries_of(c.diff()),
            actions: actions
                .iter()
                .map(|a| ActionSpec {
                    name: a.map.name.clone(),
                    kind: a.kind,
                    endpoints: a.endpoints.clone(),
                    degree: Some(a.map.degree),
                    entries: entries_of(&a.map.entries),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Parses a complex with its actions from JSON text.
pub fn load_complex(text: &str) -> Result<(ChainComplex, Vec<Action>)> {
    ComplexFile::from_json(text)?.build()
}

/// Serializes a complex and its actions.
pub fn save_complex(c: &ChainComplex, actions: &[Action]) -> Result<String> {
    ComplexFile::from_complex(c, actions).to_json()
}

/// Collapses variable pairs, e.g. `{z1, w1} -> u1`.
pub fn collapse(pairs: &[(&str, &[&str])]) -> BTreeMap<String, super::Target> {
    let mut a = BTreeMap::new();
    for (target, sources) in pairs {
        for s in *sources {
            a.insert(s.to_string(), super::Target::Var(target.to_string()));
        }
    }
    a
}
