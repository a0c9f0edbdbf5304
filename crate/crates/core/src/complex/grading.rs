//! Multi-gradings used to split a complex into finite-dimensional pieces.

use serde::{Deserialize, Serialize};

use crate::algebra::Monomial;

/// A multi-degree. Components flagged as parity live in Z/2.
pub type Key = Vec<i64>;

/// How generator gradings combine into degree keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GradingMode {
    /// Homological grading, plus quantum grading when every generator has one.
    #[default]
    Bigraded,
    /// The single grading `q - 2h`, i.e. twice the delta grading.
    Delta,
}

/// Degree data of a complex in a chosen mode.
#[derive(Clone, Debug)]
pub struct Grading {
    pub labels: Vec<&'static str>,
    pub parity: Vec<bool>,
    pub gen_keys: Vec<Key>,
    pub var_degrees: Vec<Key>,
    pub diff_degree: Key,
    /// A component in which every variable has negative degree.
    pub bound: Option<usize>,
}

impl Grading {
    pub fn normalize(&self, mut k: Key) -> Key {
        for (x, &p) in k.iter_mut().zip(&self.parity) {
            if p {
                *x = x.rem_euclid(2);
            }
        }
        k
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Key {
        self.normalize(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Key {
        self.normalize(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }

    pub fn zero(&self) -> Key {
        vec![0; self.labels.len()]
    }

    pub fn monomial_degree(&self, m: &Monomial) -> Key {
        let mut k = self.zero();
        for (i, &e) in m.0.iter().enumerate() {
            for (c, d) in k.iter_mut().zip(&self.var_degrees[i]) {
                *c += e as i64 * d;
            }
        }
        self.normalize(k)
    }

    pub fn component(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }
}
