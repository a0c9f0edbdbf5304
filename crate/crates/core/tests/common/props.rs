//! Seeded property checks shared by the property tests and the acceptance report.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use skeinseq::algebra::frobenius::{comultiply, multiply};
use skeinseq::algebra::Label;
use skeinseq::complex::{ChainComplex, Generator};
use skeinseq::khovanov::{ckh, Convention, Flavor, LinkDiagram};
use skeinseq::models::{model, top_homology, ModelName};
use skeinseq::spectral::{compute_pages, FilteredComplex, PageOptions};

pub const SEED: [u8; 32] = *b"skein-sequence-property-seed-01!";

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// `(strands, word)` with letters `±1..±(strands - 1)`.
pub fn braid(max_strands: usize, max_len: usize) -> impl Strategy<Value = (usize, Vec<i32>)> {
    (2..=max_strands).prop_flat_map(move |s| {
        let letter = (1..s as i32, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g });
        (Just(s), prop::collection::vec(letter, 0..=max_len))
    })
}

fn closure(s: usize, w: &[i32]) -> Result<LinkDiagram, TestCaseError> {
    LinkDiagram::braid_closure(s, w).map_err(|e| fail(format!("{s} {w:?}: {e}")))
}

fn hat_dims(d: &LinkDiagram) -> Result<BTreeMap<Vec<i64>, usize>, TestCaseError> {
    let dims = ckh(d, Flavor::Hat, None, Convention::default())
        .and_then(|c| c.homology_dims(None))
        .map_err(|e| fail(e.to_string()))?;
    Ok(dims.into_iter().filter(|(_, n)| *n > 0).collect())
}

fn total(m: &BTreeMap<Vec<i64>, usize>) -> usize {
    m.values().sum()
}

fn report(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Elements of tensor powers of the algebra over `F2[U]`: a set of `(labels, U power)` terms.
type Elt = BTreeSet<(Vec<Label>, u32)>;

fn add(e: &mut Elt, t: (Vec<Label>, u32)) {
    if !e.remove(&t) {
        e.insert(t);
    }
}

fn m_at(e: &Elt, i: usize) -> Elt {
    let mut out = Elt::new();
    for (ls, p) in e {
        let (c, k) = multiply(ls[i], ls[i + 1]);
        let mut v = ls.clone();
        v.splice(i..i + 2, [c]);
        add(&mut out, (v, p + k));
    }
    out
}

fn delta_at(e: &Elt, i: usize) -> Elt {
    let mut out = Elt::new();
    for (ls, p) in e {
        for (l, r, k) in comultiply(ls[i]) {
            let mut v = ls.clone();
            v.splice(i..i + 1, [l, r]);
            add(&mut out, (v, p + k));
        }
    }
    out
}

fn pure(ls: &[Label]) -> Elt {
    Elt::from([(ls.to_vec(), 0)])
}

/// Associativity, coassociativity, commutativity and the Frobenius relations on all label tuples.
pub fn frobenius_axioms() -> Result<usize, String> {
    let all = [Label::One, Label::X];
    let mut checked = 0;
    for a in all {
        let d = delta_at(&pure(&[a]), 0);
        if delta_at(&d, 0) != delta_at(&d, 1) {
            return Err(format!("coassociativity fails on {a:?}"));
        }
        let flipped: Elt = d.iter().map(|(v, p)| (vec![v[1], v[0]], *p)).collect();
        if flipped != d {
            return Err(format!("cocommutativity fails on {a:?}"));
        }
        for b in all {
            let ab = pure(&[a, b]);
            if m_at(&ab, 0) != m_at(&pure(&[b, a]), 0) {
                return Err(format!("commutativity fails on {a:?} {b:?}"));
            }
            let dm = delta_at(&m_at(&ab, 0), 0);
            if dm != m_at(&delta_at(&ab, 1), 0) || dm != m_at(&delta_at(&ab, 0), 1) {
                return Err(format!("Frobenius relation fails on {a:?} {b:?}"));
            }
            for c in all {
                let abc = pure(&[a, b, c]);
                if m_at(&m_at(&abc, 0), 0) != m_at(&m_at(&abc, 1), 0) {
                    return Err(format!("associativity fails on {a:?} {b:?} {c:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// `d^2 = 0` for minus, hat and pointed minus cubes of random braid closures.
pub fn d_squared(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&braid(4, 7), |(s, w)| {
        let d = closure(s, &w)?;
        for (flavor, bp) in [(Flavor::Minus, None), (Flavor::Hat, None), (Flavor::Minus, d.arcs().first().copied())] {
            let c = ckh(&d, flavor, bp, Convention::default()).map_err(|e| fail(e.to_string()))?;
            prop_assert!(c.is_complex(), "{s} {w:?} {flavor:?}");
        }
        Ok(())
    }))
}

/// For random knots: hat = 2 * minus free rank and hat <= 2 * reduced at every basepoint.
pub fn rank_relations(cases: u32) -> Result<(), String> {
    let knots = braid(4, 7).prop_filter("knot", |(s, w)| LinkDiagram::braid_closure(*s, w).is_ok_and(|d| d.is_knot()));
    report(runner(cases).run(&knots, |(s, w)| {
        let d = closure(s, &w)?;
        let hat = total(&hat_dims(&d)?);
        let err = |e: skeinseq::error::Error| fail(e.to_string());
        let minus = ckh(&d, Flavor::Minus, None, Convention::default()).and_then(|c| c.homology_module()).map_err(err)?;
        prop_assert_eq!(hat % 2, 0);
        let arcs = d.arcs();
        if let Some(&a) = arcs.first() {
            let pointed = ckh(&d, Flavor::Minus, Some(a), Convention::default()).and_then(|c| c.homology_module()).map_err(err)?;
            prop_assert_eq!(hat, 2 * pointed.free_rank(), "{} {:?}", s, w);
        } else {
            prop_assert_eq!(hat, minus.free_rank());
        }
        for a in arcs {
            let red: usize = ckh(&d, Flavor::Reduced, Some(a), Convention::default())
                .and_then(|c| c.homology_dims(None))
                .map_err(err)?
                .values()
                .sum();
            prop_assert!(hat <= 2 * red, "{} {:?} arc {}", s, w, a);
        }
        Ok(())
    }))
}

/// Hat homology is unchanged by Markov stabilization and conjugation.
pub fn markov_invariance(cases: u32) -> Result<(), String> {
    let strat = (braid(3, 5), any::<bool>(), any::<prop::sample::Index>());
    report(runner(cases).run(&strat, |((s, w), neg, rot)| {
        let base = hat_dims(&closure(s, &w)?)?;
        let mut stab = w.clone();
        stab.push(if neg { -(s as i32) } else { s as i32 });
        prop_assert_eq!(&hat_dims(&closure(s + 1, &stab)?)?, &base, "stabilize {} {:?}", s, w);
        if !w.is_empty() {
            let mut conj = w.clone();
            conj.rotate_left(rot.index(w.len()));
            prop_assert_eq!(&hat_dims(&closure(s, &conj)?)?, &base, "conjugate {} {:?}", s, w);
        }
        Ok(())
    }))
}

/// Route A (per-degree expansion) agrees with route B (graded Smith form) for pointed minus complexes.
pub fn routes_agree(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&braid(4, 6), |(s, w)| {
        let d = closure(s, &w)?;
        let Some(&bp) = d.arcs().first() else { return Ok(()) };
        let err = |e: skeinseq::error::Error| fail(e.to_string());
        let c = ckh(&d, Flavor::Minus, Some(bp), Convention::default()).map_err(err)?;
        let module = c.homology_module().map_err(err)?;
        let dims = c.homology_dims(None).map_err(err)?;
        for (key, n) in &dims {
            let steps = |g: &Vec<i64>| (g[0] == key[0] && (g[1] - key[1]) % 2 == 0 && g[1] >= key[1]).then(|| (g[1] - key[1]) / 2);
            let free = module.free.iter().filter(|g| steps(g).is_some()).count();
            let tors = module.torsion.iter().filter(|(g, k)| steps(g).is_some_and(|m| m < *k as i64)).count();
            prop_assert_eq!(*n, free + tors, "{} {:?} at {:?}", s, w, key);
        }
        Ok(())
    }))
}

/// Tensor products of cube complexes are complexes and satisfy the Kunneth count.
pub fn tensor_products(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&(braid(3, 4), braid(3, 4)), |((s1, w1), (s2, w2))| {
        let err = |e: skeinseq::error::Error| fail(e.to_string());
        let a = ckh(&closure(s1, &w1)?, Flavor::Hat, None, Convention::default()).map_err(err)?;
        let b = ckh(&closure(s2, &w2)?, Flavor::Hat, None, Convention::default()).map_err(err)?;
        let t = a.tensor(&b).map_err(err)?;
        prop_assert!(t.is_complex());
        let dim = |c: &ChainComplex| -> Result<usize, TestCaseError> { Ok(c.homology_dims(None).map_err(err)?.values().sum()) };
        prop_assert_eq!(dim(&t)?, dim(&a)? * dim(&b)?);
        Ok(())
    }))
}

fn permuted(c: &ChainComplex, perm: &[usize]) -> ChainComplex {
    let gens: Vec<Generator> = perm.iter().map(|&i| c.generators()[i].clone()).collect();
    let mut inv = vec![0; c.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let entries = c
        .diff()
        .iter()
        .enumerate()
        .flat_map(|(s, row)| row.iter().map(move |(t, p)| (s, *t, p.clone())))
        .map(|(s, t, p)| (inv[s], inv[t], p))
        .collect();
    ChainComplex::new(c.variables().to_vec(), gens, entries, c.mode(), c.diff_h()).unwrap()
}

/// Homology modules, hat dimensions and spectral pages do not depend on generator order.
pub fn permutation_invariance(cases: u32) -> Result<(), String> {
    let strat = (braid(3, 5), any::<u64>());
    report(runner(cases).run(&strat, |((s, w), shuffle_seed)| {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let d = closure(s, &w)?;
        let Some(&bp) = d.arcs().first() else { return Ok(()) };
        let err = |e: skeinseq::error::Error| fail(e.to_string());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(shuffle_seed);
        for c in [
            ckh(&d, Flavor::Minus, Some(bp), Convention::default()).map_err(err)?,
            ckh(&d, Flavor::Hat, None, Convention::default()).map_err(err)?,
        ] {
            let mut perm: Vec<usize> = (0..c.len()).collect();
            perm.shuffle(&mut rng);
            let p = permuted(&c, &perm);
            if c.nvars() == 1 {
                prop_assert_eq!(c.homology_module().map_err(err)?, p.homology_module().map_err(err)?);
            }
            prop_assert_eq!(c.homology_dims(None).map_err(err)?, p.homology_dims(None).map_err(err)?);
            let pages = |c: ChainComplex| -> Result<_, TestCaseError> {
                let ss = compute_pages(&FilteredComplex::new(c).map_err(err)?, PageOptions::default()).map_err(err)?;
                let cells: Vec<Vec<(Vec<i64>, i64, usize, String)>> = ss
                    .pages
                    .iter()
                    .map(|pg| pg.cells.iter().map(|x| (x.key.clone(), x.level, x.dim, format!("{:?}", x.profile))).collect())
                    .collect();
                Ok((ss.rank_profile(), cells))
            };
            prop_assert_eq!(pages(c)?, pages(p)?);
        }
        Ok(())
    }))
}

/// `Phi^2 = 0` and pairwise commutation on the top homology of every model.
pub fn phi_relations() -> Result<usize, String> {
    let mut checked = 0;
    for name in ModelName::ALL {
        let top = model(name).and_then(|m| top_homology(&m)).map_err(|e| e.to_string())?;
        for (na, a) in &top.phis {
            if !a.compose(a).is_zero() {
                return Err(format!("{na}^2 != 0 on {}", name.as_str()));
            }
            for (nb, b) in &top.phis {
                if a.compose(b) != b.compose(a) {
                    return Err(format!("{na}, {nb} do not commute on {}", name.as_str()));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}
