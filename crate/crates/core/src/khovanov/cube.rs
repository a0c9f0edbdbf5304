//! The cube of resolutions and the Khovanov complexes built from it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::diagram::LinkDiagram;
use crate::algebra::frobenius::{comultiply, multiply, Label};
use crate::algebra::{Monomial, Polynomial};
use crate::complex::{ChainComplex, ChainMap, Expander, Generator, GradingMode, MapDegree, Unit, Variable};
use crate::error::{Error, Result};

/// Smoothing convention: the 0-smoothing of `X[a,b,c,d]` joins `a` with `b`
/// and `c` with `d`; the 1-smoothing joins `a` with `d` and `b` with `c`.
/// `swapped` exchanges the two.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Convention {
    pub swapped: bool,
}

/// Circles of one complete resolution.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// Circle index of each arc (arcs in sorted order).
    pub circle_of_arc: Vec<usize>,
    /// Smallest arc label on each circle; circles are sorted by it.
    pub names: Vec<u32>,
}

impl Resolution {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Which flavor of the complex to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Over `F2[U]`, or over `F2[X]` for the basepoint action when a basepoint is given.
    #[default]
    Minus,
    /// Quotient by `U`.
    Hat,
    /// Quotient by the basepoint action `X`.
    Reduced,
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" => Ok(Flavor::Minus),
            "hat" => Ok(Flavor::Hat),
            "reduced" => Ok(Flavor::Reduced),
            _ => Err(Error::Input(format!("unknown flavor {s:?}"))),
        }
    }
}

/// The cube of resolutions of a diagram.
pub struct Cube<'a> {
    diagram: &'a LinkDiagram,
    arcs: Vec<u32>,
    convention: Convention,
    resolutions: Vec<Resolution>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The Khovanov generator `(vertex, labels)` in text form, e.g. `010|1x`.
pub fn generator_id(n: usize, v: usize, labels: &[char]) -> String {
    let mut s: String = (0..n).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect();
    s.push('|');
    s.extend(labels);
    s
}

impl<'a> Cube<'a> {
    pub fn new(diagram: &'a LinkDiagram, convention: Convention) -> Self {
        let arcs = diagram.arcs();
        let n = diagram.crossings().len();
        let resolutions = (0..1usize << n).into_par_iter().map(|v| Self::resolve_with(diagram, &arcs, convention, v)).collect();
        Cube { diagram, arcs, convention, resolutions }
    }

    fn resolve_with(d: &LinkDiagram, arcs: &[u32], conv: Convention, v: usize) -> Resolution {
        let idx = |a: u32| arcs.binary_search(&a).unwrap();
        let mut parent: Vec<usize> = (0..arcs.len()).collect();
        for (i, x) in d.crossings().iter().enumerate() {
            let bit = (v >> i & 1 == 1) != conv.swapped;
            let pairs = if bit { [(x[0], x[3]), (x[1], x[2])] } else { [(x[0], x[1]), (x[2], x[3])] };
            for (a, b) in pairs {
                let (ra, rb) = (find(&mut parent, idx(a)), find(&mut parent, idx(b)));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut root_to_circle = BTreeMap::new();
        let mut circle_of_arc = vec![0; arcs.len()];
        let mut names = Vec::new();
        for (i, slot) in circle_of_arc.iter_mut().enumerate() {
            let r = find(&mut parent, i);
            let next = root_to_circle.len();
            let c = *root_to_circle.entry(r).or_insert_with(|| {
                names.push(arcs[i]);
                next
            });
            *slot = c;
        }
        Resolution { circle_of_arc, names }
    }

    pub fn crossings(&self) -> usize {
        self.diagram.crossings().len()
    }

    pub fn resolution(&self, v: usize) -> &Resolution {
        &self.resolutions[v]
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    fn arc_index(&self, a: u32) -> Result<usize> {
        self.arcs.binary_search(&a).map_err(|_| Error::Input(format!("arc {a} is not in the diagram")))
    }

    /// Circle containing arc `a` in resolution `v`.
    pub fn circle_of(&self, v: usize, a: u32) -> Result<usize> {
        Ok(self.resolutions[v].circle_of_arc[self.arc_index(a)?])
    }

    /// Image of a labeling under the edge map flipping crossing `i` (from 0
    /// to 1) at vertex `v`. Labels are bitmasks over circles (bit set = `x`);
    /// each term carries a power of `U`.
    pub fn edge_map(&self, v: usize, i: usize, labels: u32) -> Result<Vec<(u32, u32)>> {
        let w = v | 1 << i;
        let (r0, r1) = (&self.resolutions[v], &self.resolutions[w]);
        let x = self.diagram.crossings()[i];
        // One arc from each of the two smoothing arcs at the crossing.
        let reps = |bit: bool| -> Result<(usize, usize)> {
            let other = if bit != self.convention.swapped { x[1] } else { x[2] };
            Ok((self.arc_index(x[0])?, self.arc_index(other)?))
        };
        let (p0, p1) = reps(false)?;
        let (q0, q1) = reps(true)?;
        let label = |m: u32, c: usize| if m >> c & 1 == 1 { Label::X } else { Label::One };
        let set = |m: &mut u32, c: usize, l: Label| {
            if l == Label::X {
                *m |= 1 << c
            } else {
                *m &= !(1 << c)
            }
        };
        // Carry over the labels of circles away from the crossing.
        let mut base = 0u32;
        let touched0 = [r0.circle_of_arc[p0], r0.circle_of_arc[p1]];
        let touched1 = [r1.circle_of_arc[q0], r1.circle_of_arc[q1]];
        for (c1, &name) in r1.names.iter().enumerate() {
            if touched1.contains(&c1) {
                continue;
            }
            let c0 = r0.circle_of_arc[self.arc_index(name)?];
            set(&mut base, c1, label(labels, c0));
        }
        match (r0.len(), r1.len()) {
            (n0, n1) if n1 + 1 == n0 => {
                let (l1, l2) = (label(labels, touched0[0]), label(labels, touched0[1]));
                let (l, k) = multiply(l1, l2);
                let mut m = base;
                set(&mut m, touched1[0], l);
                Ok(vec![(m, k)])
            }
            (n0, n1) if n1 == n0 + 1 => {
                let l = label(labels, touched0[0]);
                let (d1, d2) = (touched1[0], touched1[1]);
                Ok(comultiply(l)
                    .into_iter()
                    .map(|(x1, x2, k)| {
                        let mut m = base;
                        set(&mut m, d1, x1);
                        set(&mut m, d2, x2);
                        (m, k)
                    })
                    .collect())
            }
            (n0, n1) => Err(Error::Invariant(format!("edge changes circle count from {n0} to {n1}"))),
        }
    }
}

/// Basis of the minus complex: all labelings over `F2[U]`, or labelings of
/// the circles away from a basepoint over `F2[X]` with `X^2 = U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Basis {
    Full,
    Pointed(u32),
}

struct Layout {
    offsets: Vec<usize>,
    total: usize,
}

fn remove_bit(m: u32, b: usize) -> u32 {
    let low = m & ((1 << b) - 1);
    let high = (m >> (b + 1)) << b;
    low | high
}

fn insert_zero_bit(m: u32, b: usize) -> u32 {
    let low = m & ((1 << b) - 1);
    let high = (m >> b) << (b + 1);
    low | high
}

fn build(d: &LinkDiagram, conv: Convention, basis: Basis) -> Result<ChainComplex> {
    let cube = Cube::new(d, conv);
    let n = cube.crossings();
    let nv = 1usize << n;
    let pointed = match basis {
        Basis::Full => None,
        Basis::Pointed(a) => Some(a),
    };
    let point_circle: Vec<Option<usize>> = (0..nv)
        .map(|v| pointed.map(|a| cube.circle_of(v, a)).transpose())
        .collect::<Result<_>>()?;
    let free_circles = |v: usize| cube.resolution(v).len() - point_circle[v].is_some() as usize;
    let mut offsets = Vec::with_capacity(nv);
    let mut total = 0;
    for v in 0..nv {
        offsets.push(total);
        total += 1usize << free_circles(v);
    }
    let layout = Layout { offsets, total };
    let (mut n_plus, mut n_minus) = (d.n_plus() as i64, d.n_minus() as i64);
    if conv.swapped {
        // Exchanging the smoothings computes the mirror, whose crossing signs are opposite.
        std::mem::swap(&mut n_plus, &mut n_minus);
    }
    let gens: Vec<Generator> = (0..nv)
        .into_par_iter()
        .flat_map_iter(|v| {
            let res = cube.resolution(v);
            let weight = v.count_ones() as i64;
            let pc = point_circle[v];
            (0..1u32 << free_circles(v)).map(move |m| {
                let full = match pc {
                    Some(b) => insert_zero_bit(m, b),
                    None => m,
                };
                let labels: Vec<char> = (0..res.len())
                    .map(|c| {
                        if Some(c) == pc {
                            '*'
                        } else if full >> c & 1 == 1 {
                            'x'
                        } else {
                            '1'
                        }
                    })
                    .collect();
                let deg: i64 = res.len() as i64 - 2 * full.count_ones() as i64;
                let h = weight - n_minus;
                Generator::new(generator_id(n, v, &labels), h).q(deg + weight + n_plus - 2 * n_minus).level(h)
            })
        })
        .collect();
    debug_assert_eq!(gens.len(), layout.total);
    let entries: Vec<(usize, usize, u32)> = (0..nv)
        .into_par_iter()
        .map(|v| -> Result<Vec<(usize, usize, u32)>> {
            let mut out = Vec::new();
            let pc = point_circle[v];
            for i in (0..n).filter(|i| v >> i & 1 == 0) {
                let w = v | 1 << i;
                let pw = point_circle[w];
                for m in 0..1u32 << free_circles(v) {
                    let full = match pc {
                        Some(b) => insert_zero_bit(m, b),
                        None => m,
                    };
                    for (img, k) in cube.edge_map(v, i, full)? {
                        let (target, power) = match pw {
                            Some(b) => (remove_bit(img, b), 2 * k + (img >> b & 1)),
                            None => (img, k),
                        };
                        out.push((layout.offsets[v] + m as usize, layout.offsets[w] + target as usize, power));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let var = match basis {
        Basis::Full => Variable::with_degrees("U", Unit::Whole, 0, -4),
        Basis::Pointed(_) => Variable::with_degrees("X", Unit::Half, 0, -2),
    };
    let triples = entries
        .into_iter()
        .map(|(s, t, k)| (s, t, Polynomial::from_monomial(Monomial(vec![k]))))
        .collect();
    ChainComplex::new(vec![var], gens, triples, GradingMode::Bigraded, 1)
}

/// The Khovanov complex of a diagram in the given flavor. Reduced and
/// pointed minus complexes use `basepoint` (default: the smallest arc).
pub fn ckh(d: &LinkDiagram, flavor: Flavor, basepoint: Option<u32>, conv: Convention) -> Result<ChainComplex> {
    let point = basepoint.unwrap_or_else(|| d.arcs()[0]);
    if let Some(b) = basepoint {
        if !d.arcs().contains(&b) {
            return Err(Error::Input(format!("basepoint arc {b} is not in the diagram")));
        }
    }
    match flavor {
        Flavor::Minus => build(d, conv, if basepoint.is_some() { Basis::Pointed(point) } else { Basis::Full }),
        Flavor::Hat => build(d, conv, Basis::Full)?.kill(&["U"]),
        Flavor::Reduced => build(d, conv, Basis::Pointed(point))?.kill(&["X"]),
    }
}

/// Multiplication by `x` on the circle through arc `a`, as a map on the
/// minus complex over `F2[U]`.
pub fn basepoint_action(d: &LinkDiagram, c: &ChainComplex, a: u32, conv: Convention) -> Result<ChainMap> {
    let cube = Cube::new(d, conv);
    let n = cube.crossings();
    let mut entries = vec![Vec::new(); c.len()];
    for v in 0..1usize << n {
        let res = cube.resolution(v);
        let circle = cube.circle_of(v, a)?;
        for m in 0..1u32 << res.len() {
            let labels = |mm: u32| -> Vec<char> {
                (0..res.len()).map(|k| if mm >> k & 1 == 1 { 'x' } else { '1' }).collect()
            };
            let src = c
                .index_of(&generator_id(n, v, &labels(m)))
                .ok_or_else(|| Error::Input("basepoint action needs the unpointed minus or hat complex".into()))?;
            let flipped = m ^ (1 << circle);
            let tgt = c.index_of(&generator_id(n, v, &labels(flipped))).unwrap();
            let power = m >> circle & 1;
            if c.nvars() == 0 && power > 0 {
                continue;
            }
            let coef = Polynomial::from_monomial(Monomial(vec![power; c.nvars()]));
            entries[src].push((tgt, coef));
        }
    }
    let f = ChainMap { name: format!("X_{a}"), degree: MapDegree { h: 0, q: -2, alex2: 0 }, entries };
    c.check_map(c, &f)?;
    Ok(f)
}

/// Whether multiplication by `x` on the circles through arcs `a` and `b`
/// induce the same map on the homology of the unpointed minus complex.
pub fn actions_agree_on_homology(d: &LinkDiagram, a: u32, b: u32, conv: Convention) -> Result<bool> {
    let c = ckh(d, Flavor::Minus, None, conv)?;
    let fa = basepoint_action(d, &c, a, conv)?;
    let fb = basepoint_action(d, &c, b, conv)?;
    let sum = ChainMap { name: format!("X_{a}+X_{b}"), degree: fa.degree, entries: c.add_matrices(&fa.entries, &fb.entries) };
    let mut src = Expander::new(&c)?;
    let mut dst = Expander::new(&c)?;
    let depth = src.default_depth();
    for key in src.window_keys(depth) {
        let (_, _, m) = src.induced(&mut dst, &sum, &key)?;
        if !m.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
