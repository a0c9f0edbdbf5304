//! Polynomials over F2 in a fixed, ordered list of variables.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector, one entry per variable of the ambient ring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    /// Weighted degree `sum e_i * w_i`.
    pub fn weighted(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }
}

/// A polynomial with F2 coefficients, stored as its set of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeSet::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_monomial(Monomial::one(nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_monomial(Monomial::var(nvars, i, 1))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Polynomial { nvars, terms }
    }

    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for m in it {
            p.toggle(m);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().unwrap().is_one()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single monomial of a monomial polynomial.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Adds `m` with coefficient 1 (so an existing copy cancels).
    pub fn toggle(&mut self, m: Monomial) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for a in &self.terms {
            for b in &other.terms {
                p.toggle(a.mul(b));
            }
        }
        p
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|a| a.mul(m)).collect() }
    }

    /// Formal partial derivative in variable `i`, reduced mod 2.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for m in &self.terms {
            let e = m.0[i];
            if e % 2 == 1 {
                let mut d = m.clone();
                d.0[i] -= 1;
                p.toggle(d);
            }
        }
        p
    }

    /// Rewrites each variable `i` as `target[i]` (an index into a ring with
    /// `new_nvars` variables) or sends it to zero when `target[i]` is `None`.
    pub fn substitute(&self, target: &[Option<usize>], new_nvars: usize) -> Polynomial {
        let mut p = Polynomial::zero(new_nvars);
        'terms: for m in &self.terms {
            let mut out = vec![0u32; new_nvars];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match target[i] {
                    Some(j) => out[j] += e,
                    None => continue 'terms,
                }
            }
            p.toggle(Monomial(out));
        }
        p
    }

    /// Parses text such as `z1+w2`, `U^2*x`, `1` or `0` against variable names.
    pub fn parse(text: &str, names: &[&str]) -> Result<Polynomial> {
        let nvars = names.len();
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse(format!("empty polynomial {text:?}")));
        }
        let mut p = Polynomial::zero(nvars);
        for term in cleaned.split('+') {
            if term.is_empty() {
                return Err(Error::Parse(format!("malformed polynomial {text:?}")));
            }
            if term == "0" {
                continue;
            }
            let mut m = Monomial::one(nvars);
            for factor in term.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e: u32 = e
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                        (b, e)
                    }
                    None => (factor, 1),
                };
                if base == "1" {
                    continue;
                }
                let i = names
                    .iter()
                    .position(|n| *n == base)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {base:?} in {text:?}")))?;
                m.0[i] += exp;
            }
            p.toggle(m);
        }
        Ok(p)
    }

    pub fn display<'a>(&'a self, names: &'a [&'a str]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [&'a str],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, m) in self.poly.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            if m.is_one() {
                write!(f, "1")?;
                continue;
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                let name = self.names.get(i).copied().unwrap_or("?");
                if e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
