use std::collections::BTreeMap;

use skeinseq::algebra::Polynomial;
use skeinseq::complex::json::{load_complex, save_complex, Action, ActionKind};
use skeinseq::complex::{ChainComplex, ChainMap, Expander, Generator, GradingMode, MapDegree, Unit, Variable};
use skeinseq::models::{
    canonical_fg, match_pattern, model, top_homology, verify_action, GoldenPattern, Model, ModelName,
};

#[test]
fn knot_models_have_the_stated_arrows() {
    let k = model(ModelName::KNonori).unwrap();
    assert_eq!(k.complex.coefficient("f", "g").as_deref(), Some("z+w"));
    let t = model(ModelName::TrefoilCfl).unwrap();
    assert_eq!(t.complex.len(), 3);
    assert_eq!(t.complex.coefficient("c", "a").as_deref(), Some("u"));
    assert_eq!(model(ModelName::LOri).unwrap().complex.len(), 16);
}

#[test]
fn k_ori_top_homology_and_u_injectivity() {
    let m = model(ModelName::KOri).unwrap();
    let top = top_homology(&m).unwrap();
    let mut basis: Vec<&str> = top.basis.iter().map(|(s, _)| s.as_str()).collect();
    basis.sort();
    assert_eq!(basis, vec!["ax+by", "ay+bx"]);
    let c = m.collapsed().unwrap();
    let top_h = c.generators().iter().map(|g| g.h).max().unwrap();
    for (i, v) in c.variables().iter().enumerate() {
        let mult = ChainMap {
            name: v.name.clone(),
            degree: MapDegree { h: v.h, q: v.q, alex2: v.unit.alex2() },
            entries: c.identity_scaled(&Polynomial::var(c.nvars(), i)),
        };
        for p in 0..2 {
            let mut src = Expander::new(&c).unwrap();
            let mut dst = Expander::new(&c).unwrap();
            let (h, _, ind) = src.induced(&mut dst, &mult, &[top_h, p]).unwrap();
            assert_eq!(ind.rank(), h.group.dim(), "{} on parity {p}", v.name);
        }
    }
}

#[test]
fn two_component_models_match_their_patterns() {
    for (name, golden) in [(ModelName::LNonori, GoldenPattern::l_nonori()), (ModelName::LOri, GoldenPattern::l_ori())] {
        let top = top_homology(&model(name).unwrap()).unwrap();
        assert_eq!(top.dim(), 4);
        assert!(top.z_w_agree);
        let (_, count) = match_pattern(&top, &golden).unwrap();
        assert!(count >= 1);
    }
}

#[test]
fn a_wrong_pattern_is_not_matched() {
    let top = top_homology(&model(ModelName::LNonori).unwrap()).unwrap();
    let mut wrong = GoldenPattern::l_nonori();
    wrong.phis[0].1 = vec![(0, vec![1])];
    assert!(match_pattern(&top, &wrong).is_none());
}

#[test]
fn l_nonori_homology_is_stable_under_deeper_truncation() {
    let c = model(ModelName::LNonori).unwrap().collapsed().unwrap();
    let mut ex = Expander::new(&c).unwrap();
    let d = ex.default_depth();
    let a = ex.homology_dims(d).unwrap();
    let b = ex.homology_dims(d + 2).unwrap();
    for (k, n) in &a {
        if let Some(m) = b.get(k) {
            assert_eq!(n, m, "{k:?}");
        }
    }
}

#[test]
fn canonical_pair_needs_a_nonzero_phi() {
    let vars = vec![Variable::new("z", Unit::Half), Variable::new("w", Unit::Half)];
    let gens = vec![Generator::new("f", 0).alex2(0), Generator::new("g", 0).alex2(1)];
    let c = ChainComplex::new(vars, gens, vec![], GradingMode::Bigraded, -1).unwrap();
    let m = Model {
        name: ModelName::KNonori,
        complex: c.clone(),
        factors: vec![c],
        actions: vec![],
        collapse: skeinseq::complex::json::collapse(&[("u", &["z", "w"])]),
        phi_pairs: vec![("Phi".into(), "z".into(), "w".into())],
    };
    let e = canonical_fg(&m).unwrap_err();
    assert!(!e.is_input_error(), "{e}");
}

fn without_entry(c: &ChainComplex, map: &ChainMap, src: usize, k: usize) -> ChainMap {
    let mut entries = map.entries.clone();
    entries[src].remove(k);
    let _ = c;
    ChainMap { name: format!("{} minus one entry", map.name), degree: map.degree, entries }
}

#[test]
fn deleting_an_a_kappa_entry_on_c0_breaks_the_shared_kernel() {
    let m = model(ModelName::Z11_2).unwrap();
    let kappa = &m.actions[0].map;
    let c0: Vec<usize> = ["ay", "bx"].iter().map(|g| m.complex.index_of(g).unwrap()).collect();
    let mut perturbed = 0;
    for &s in &c0 {
        for k in 0..kappa.entries[s].len() {
            let p = without_entry(&m.complex, kappa, s, k);
            let r = verify_action(&m, &p, Some(("Z", "W"))).unwrap();
            let ker = &r.kernels.iter().find(|(q, _)| *q == 0).unwrap().1;
            assert!(ker.len() != 1 || ker[0] != "ay+bx", "{ker:?}");
            perturbed += 1;
        }
    }
    assert_eq!(perturbed, 4);
}

/// `d theta- = (U1 + U2) theta+`, with `A theta+ = theta-`.
fn stabilization() -> Model {
    let vars = vec![Variable::new("u1", Unit::Half), Variable::new("u2", Unit::Half)];
    let gens = vec![Generator::new("theta+", 0), Generator::new("theta-", -1)];
    let c = ChainComplex::from_text(vars, gens, &[("theta-", "theta+", "u1^2+u2^2")], GradingMode::Bigraded, -1).unwrap();
    let a = c.map_from_text("A", MapDegree { h: -1, q: 0, alex2: 0 }, &[("theta+", "theta-", "1")]).unwrap();
    Model {
        name: ModelName::Z11_2,
        complex: c.clone(),
        factors: vec![c],
        actions: vec![Action { kind: ActionKind::Path, endpoints: Some(["u1".into(), "u2".into()]), map: a }],
        collapse: BTreeMap::new(),
        phi_pairs: vec![],
    }
}

#[test]
fn path_identity_holds_on_the_stabilization_complex() {
    let m = stabilization();
    let r = verify_action(&m, &m.actions[0].map, Some(("u1", "u2"))).unwrap();
    assert_eq!(r.path_identity, Some(true));
    assert!(!r.loop_identity);
}

#[test]
fn deleting_the_action_entry_breaks_the_path_identity() {
    let m = stabilization();
    let p = without_entry(&m.complex, &m.actions[0].map, 0, 0);
    let r = verify_action(&m, &p, Some(("u1", "u2"))).unwrap();
    assert_eq!(r.path_identity, Some(false));
    assert!(!r.defects.is_empty());
}

#[test]
fn model_complexes_survive_a_json_round_trip() {
    for name in ModelName::ALL {
        let m = model(name).unwrap();
        let actions: Vec<Action> = m.actions.clone();
        let text = save_complex(&m.complex, &actions).unwrap();
        let (back, acts) = load_complex(&text).unwrap();
        assert_eq!(back.len(), m.complex.len());
        assert_eq!(acts.len(), actions.len());
        for g in m.complex.generators() {
            for h in m.complex.generators() {
                assert_eq!(back.coefficient(&g.id, &h.id), m.complex.coefficient(&g.id, &h.id), "{name:?}");
            }
        }
        assert_eq!(save_complex(&back, &acts).unwrap(), text);
    }
}
