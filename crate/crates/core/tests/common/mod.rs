#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;

use skeinseq::khovanov::{ckh, Convention, Flavor, LinkDiagram};

/// Braid closures: name, strands, word, determinant, alternating.
pub const KNOTS: &[(&str, usize, &[i32], usize, bool)] = &[
    ("3_1", 2, &[1, 1, 1], 3, true),
    ("4_1", 3, &[1, -2, 1, -2], 5, true),
    ("5_1", 2, &[1, 1, 1, 1, 1], 5, true),
    ("5_2", 3, &[1, 1, 1, 2, -1, 2], 7, true),
    ("6_1", 4, &[1, 1, 2, -1, -3, 2, -3], 9, true),
    ("6_2", 3, &[1, 1, 1, -2, 1, -2], 11, true),
    ("6_3", 3, &[1, 1, -2, 1, -2, -2], 13, true),
    ("8_19", 3, &[1, 2, 1, 2, 1, 2, 1, 2], 3, false),
];

/// Multi-component braid closures: name, strands, word.
pub const LINKS: &[(&str, usize, &[i32])] = &[
    ("hopf", 2, &[1, 1]),
    ("mirror hopf", 2, &[-1, -1]),
    ("T(2,4)", 2, &[1, 1, 1, 1]),
    ("split unlink", 2, &[]),
    ("borromean", 3, &[1, -2, 1, -2, 1, -2]),
];

pub const MIRROR_TREFOIL_PD: &str = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";

pub fn knot(i: usize) -> LinkDiagram {
    let (_, s, w, _, _) = KNOTS[i];
    LinkDiagram::braid_closure(s, w).unwrap()
}

pub fn all_diagrams() -> Vec<(String, LinkDiagram)> {
    let mut out: Vec<(String, LinkDiagram)> =
        KNOTS.iter().map(|(n, s, w, _, _)| (n.to_string(), LinkDiagram::braid_closure(*s, w).unwrap())).collect();
    for (n, s, w) in LINKS {
        out.push((n.to_string(), LinkDiagram::braid_closure(*s, w).unwrap()));
    }
    out
}

/// `(h, q) -> dim` over F2.
pub fn dims(d: &LinkDiagram, flavor: Flavor, basepoint: Option<u32>) -> BTreeMap<(i64, i64), usize> {
    ckh(d, flavor, basepoint, Convention::default())
        .unwrap()
        .homology_dims(None)
        .unwrap()
        .into_iter()
        .filter(|(_, n)| *n > 0)
        .map(|(k, n)| ((k[0], k[1]), n))
        .collect()
}

pub fn total(m: &BTreeMap<(i64, i64), usize>) -> usize {
    m.values().sum()
}

/// Laurent polynomial in q as exponent -> coefficient.
pub type Laurent = BTreeMap<i64, i64>;

fn add(p: &mut Laurent, e: i64, c: i64) {
    *p.entry(e).or_default() += c;
    if p[&e] == 0 {
        p.remove(&e);
    }
}

/// The unnormalized Jones polynomial from the state sum
/// `(-1)^n- q^(n+ - 2n-) sum_s (-1)^|s| q^|s| (q + 1/q)^(circles)`,
/// counting circles with a union-find over arcs, independent of the cube code.
pub fn jones_state_sum(d: &LinkDiagram) -> Laurent {
    let xs = d.crossings();
    let arcs = d.arcs();
    let pos = |a: u32| arcs.binary_search(&a).unwrap();
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    let mut out = Laurent::new();
    for v in 0..1usize << xs.len() {
        let mut parent: Vec<usize> = (0..arcs.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut join = |a: u32, b: u32| {
            let (ra, rb) = (find(&mut parent, pos(a)), find(&mut parent, pos(b)));
            parent[ra] = rb;
        };
        for (i, x) in xs.iter().enumerate() {
            if v >> i & 1 == 0 {
                join(x[0], x[1]);
                join(x[2], x[3]);
            } else {
                join(x[0], x[3]);
                join(x[1], x[2]);
            }
        }
        let circles = (0..arcs.len()).filter(|&i| find(&mut parent, i) == i).count();
        let r = v.count_ones() as i64;
        let sign = if (r + nm) % 2 == 0 { 1 } else { -1 };
        // (q + 1/q)^circles
        for k in 0..=circles {
            let binom = (0..k).fold(1i64, |acc, i| acc * (circles - i) as i64 / (i as i64 + 1));
            let e = circles as i64 - 2 * k as i64 + r + np - 2 * nm;
            add(&mut out, e, sign * binom);
        }
    }
    out
}

/// Graded Euler characteristic `sum (-1)^h q^j dim`.
pub fn euler(m: &BTreeMap<(i64, i64), usize>) -> Laurent {
    let mut out = Laurent::new();
    for (&(h, q), &n) in m {
        add(&mut out, q, if h % 2 == 0 { n as i64 } else { -(n as i64) });
    }
    out
}
