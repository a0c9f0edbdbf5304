mod common;

use std::collections::BTreeMap;

use common::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skeinseq::complex::{ChainComplex, Generator, GradingMode, Unit, Variable};
use skeinseq::khovanov::{ckh, Convention, Flavor};
use skeinseq::spectral::{check_constraints, compute_pages, converge, FilteredComplex, PageOptions};

fn page_dims(ss: &skeinseq::spectral::SpectralSequence, r: usize) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    for c in &ss.page(r).unwrap().cells {
        *out.entry((c.key[0], c.key[1])).or_default() += c.dim;
    }
    out
}

#[test]
fn cube_filtration_degenerates_at_e2_on_the_corpus() {
    for (name, d) in all_diagrams() {
        let fc = FilteredComplex::new(ckh(&d, Flavor::Hat, None, Convention::default()).unwrap()).unwrap();
        let ss = compute_pages(&fc, PageOptions::default()).unwrap();
        let kh = dims(&d, Flavor::Hat, None);
        assert_eq!(page_dims(&ss, ss.pages.len().min(2)), kh, "{name}: E2");
        assert_eq!(page_dims(&ss, ss.pages.len()), kh, "{name}: E_infinity");
        assert!(ss.collapse_page() <= 2, "{name}");
        assert!(converge(&fc, &ss).unwrap().ok, "{name}");
        assert!(check_constraints(&ss).is_empty(), "{name}");
    }
}

#[test]
fn pointed_minus_pages_converge_to_free_towers() {
    for (i, (name, ..)) in KNOTS.iter().enumerate().take(5) {
        let d = knot(i);
        let c = ckh(&d, Flavor::Minus, Some(d.arcs()[0]), Convention::default()).unwrap();
        let free = c.homology_module().unwrap().free_rank();
        let fc = FilteredComplex::new(c).unwrap();
        let ss = compute_pages(&fc, PageOptions::default()).unwrap();
        let rep = converge(&fc, &ss).unwrap();
        assert!(rep.ok, "{name}");
        assert_eq!(rep.e_infinity_free_rank, Some(free), "{name}");
    }
}

#[test]
fn planted_jumps_give_the_planted_profile() {
    let mut gens = Vec::new();
    let mut entries = Vec::new();
    for r in 1..=5i64 {
        gens.push(Generator::new(format!("a{r}"), 0).level(10 * r));
        gens.push(Generator::new(format!("b{r}"), 1).level(10 * r + r));
        let n = gens.len();
        entries.push((n - 2, n - 1, skeinseq::algebra::Polynomial::one(0)));
    }
    let c = ChainComplex::new(vec![], gens, entries, GradingMode::Bigraded, 1).unwrap();
    let fc = FilteredComplex::new(c).unwrap();
    let ss = compute_pages(&fc, PageOptions::default()).unwrap();
    let ranks: Vec<usize> = ss.rank_profile().into_iter().map(|(_, k)| k).take(6).collect();
    assert_eq!(ranks, vec![1, 1, 1, 1, 1, 0]);
    let dims: Vec<usize> = ss.pages.iter().take(6).map(|p| p.total_dim()).collect();
    assert_eq!(dims, vec![10, 8, 6, 4, 2, 0]);
}

#[test]
fn u_torsion_appears_in_the_limit_profile() {
    for k in 1..=3u32 {
        let vars = vec![Variable::new("u", Unit::Half)];
        let gens = vec![
            Generator::new("a", 0).level(0),
            Generator::new("b", 0).level(0),
            Generator::new("c", 1 - k as i64).level(3),
        ];
        let c = ChainComplex::from_text(vars, gens, &[("c", "a", &format!("u^{k}"))], GradingMode::Bigraded, -1).unwrap();
        let fc = FilteredComplex::new(c).unwrap();
        let ss = compute_pages(&fc, PageOptions::default()).unwrap();
        let profiles: Vec<String> =
            ss.infinity().cells.iter().filter_map(|c| c.profile.as_ref()).map(|p| p.to_string()).filter(|p| p != "-").collect();
        assert!(profiles.iter().any(|p| p.contains(&format!("T{k}"))), "{profiles:?}");
        assert!(converge(&fc, &ss).unwrap().ok);
    }
}

#[test]
fn pages_are_invariant_under_generator_permutation() {
    let d = knot(1);
    let c = ckh(&d, Flavor::Minus, Some(d.arcs()[0]), Convention::default()).unwrap();
    let base = compute_pages(&FilteredComplex::new(c.clone()).unwrap(), PageOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let mut perm: Vec<usize> = (0..c.len()).collect();
        perm.shuffle(&mut rng);
        let gens: Vec<Generator> = perm.iter().map(|&i| c.generators()[i].clone()).collect();
        let mut inv = vec![0; c.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let entries =
            c.diff().iter().enumerate().flat_map(|(s, row)| row.iter().map(move |(t, p)| (s, *t, p.clone()))).map(|(s, t, p)| (inv[s], inv[t], p)).collect();
        let pc = ChainComplex::new(c.variables().to_vec(), gens, entries, c.mode(), c.diff_h()).unwrap();
        let ss = compute_pages(&FilteredComplex::new(pc).unwrap(), PageOptions::default()).unwrap();
        assert_eq!(ss.rank_profile(), base.rank_profile());
        for (a, b) in ss.pages.iter().zip(&base.pages) {
            let cells = |p: &skeinseq::spectral::Page| -> Vec<(Vec<i64>, i64, usize, String)> {
                p.cells.iter().map(|c| (c.key.clone(), c.level, c.dim, format!("{:?}", c.profile))).collect()
            };
            assert_eq!(cells(a), cells(b));
        }
    }
}

#[test]
fn even_page_differentials_are_flagged() {
    let gens = vec![Generator::new("a", 0).q(0).level(0), Generator::new("b", 2).q(2).level(2)];
    let c = ChainComplex::from_text(vec![], gens, &[("a", "b", "1")], GradingMode::Delta, 1).unwrap();
    let ss = compute_pages(&FilteredComplex::new(c).unwrap(), PageOptions::default()).unwrap();
    let v = check_constraints(&ss);
    assert!(v.iter().any(|x| x.r == 2 && x.reason.contains("even page")), "{v:?}");
    assert!(v.iter().any(|x| x.reason.contains("q/2 mod 2")), "{v:?}");
}

#[test]
fn a_well_placed_d3_passes_the_constraints() {
    let gens = vec![Generator::new("z", 0).q(0).level(0), Generator::new("x", 3).q(4).level(3)];
    let c = ChainComplex::from_text(vec![], gens, &[("z", "x", "1")], GradingMode::Delta, 1).unwrap();
    let ss = compute_pages(&FilteredComplex::new(c).unwrap(), PageOptions::default()).unwrap();
    assert_eq!(ss.page(3).unwrap().rank(), 1);
    assert!(check_constraints(&ss).is_empty());
}

#[test]
fn max_page_truncates_the_sequence() {
    let d = knot(1);
    let fc = FilteredComplex::new(ckh(&d, Flavor::Hat, None, Convention::default()).unwrap()).unwrap();
    let ss = compute_pages(&fc, PageOptions { depth: None, max_page: Some(2) }).unwrap();
    assert_eq!(ss.pages.len(), 2);
}
