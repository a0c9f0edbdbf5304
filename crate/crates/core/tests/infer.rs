use std::collections::BTreeSet;

use skeinseq::algebra::F2Matrix;
use skeinseq::cli::suite::{HOPF_E2, HOPF_TARGET, MIRROR_TREFOIL_PD, TREFOIL_E2, TREFOIL_TARGET};
use skeinseq::infer::{
    enumerate_patterns, page_from_khovanov, resolve_filtration, FiltrationReport, InferOptions, PageGenerator, PageSpec,
    TargetSpec,
};
use skeinseq::khovanov::{Convention, LinkDiagram};

fn arrow_sets(e2: &PageSpec, target: &TargetSpec) -> BTreeSet<Vec<String>> {
    enumerate_patterns(e2, target, InferOptions::default())
        .unwrap()
        .patterns
        .iter()
        .map(|p| p.arrows.iter().map(|a| a.to_string()).collect())
        .collect()
}

fn gen(name: &str, h: i64, q: i64) -> PageGenerator {
    PageGenerator { name: name.into(), h, q }
}

#[test]
fn golden_pages_come_from_the_khovanov_computation() {
    let d = LinkDiagram::parse_pd(MIRROR_TREFOIL_PD).unwrap();
    assert_eq!(page_from_khovanov(&d, None, Convention::default()).unwrap(), PageSpec::from_json(TREFOIL_E2).unwrap());
    let hopf = LinkDiagram::braid_closure(2, &[-1, -1]).unwrap();
    assert_eq!(page_from_khovanov(&hopf, None, Convention::default()).unwrap(), PageSpec::from_json(HOPF_E2).unwrap());
}

#[test]
fn trefoil_has_exactly_one_pattern() {
    let e2 = PageSpec::from_json(TREFOIL_E2).unwrap();
    let target = TargetSpec::from_json(TREFOIL_TARGET).unwrap();
    let r = enumerate_patterns(&e2, &target, InferOptions::default()).unwrap();
    assert_eq!(r.patterns.len(), 1);
    let p = &r.patterns[0];
    assert_eq!(p.arrows.iter().map(|a| a.to_string()).collect::<Vec<_>>(), vec!["d3: z -> X x"]);
    assert_eq!(p.survivors, vec![-2]);
    assert!(p.violations.is_empty());
    assert!(p.page_ranks.iter().all(|&(r, k)| (r == 3) == (k > 0)));
}

#[test]
fn permuting_the_page_gives_the_same_patterns() {
    let e2 = PageSpec::from_json(TREFOIL_E2).unwrap();
    let target = TargetSpec::from_json(TREFOIL_TARGET).unwrap();
    let mut rev = e2.clone();
    rev.generators.reverse();
    assert_eq!(arrow_sets(&e2, &target), arrow_sets(&rev, &target));
}

#[test]
fn equivalent_patterns_are_identified() {
    let e2 = PageSpec { generators: vec![gen("x1", 0, -1), gen("x2", 0, -1), gen("z", -3, -7)], x_q: -2 };
    let target = TargetSpec { free_rank: 1, torsion: vec![1], basis: vec![], actions: vec![] };
    let r = enumerate_patterns(&e2, &target, InferOptions::default()).unwrap();
    assert_eq!(r.closed, 4);
    assert!(r.exact_canonical);
    assert_eq!(r.patterns.len(), 1);
}

#[test]
fn the_zero_pattern_is_found_when_the_target_is_the_page() {
    let e2 = PageSpec::from_json(TREFOIL_E2).unwrap();
    let target = TargetSpec { free_rank: 3, torsion: vec![], basis: vec![], actions: vec![] };
    assert!(arrow_sets(&e2, &target).contains(&Vec::new()));
    let fig8 = LinkDiagram::braid_closure(3, &[1, -2, 1, -2]).unwrap();
    let page = page_from_khovanov(&fig8, None, Convention::default()).unwrap();
    let target = TargetSpec { free_rank: page.generators.len(), torsion: vec![], basis: vec![], actions: vec![] };
    assert_eq!(arrow_sets(&page, &target), BTreeSet::from([Vec::new()]));
}

#[test]
fn hopf_collapses_and_the_filtration_is_forced() {
    let e2 = PageSpec::from_json(HOPF_E2).unwrap();
    let target = TargetSpec::from_json(HOPF_TARGET).unwrap();
    let r = enumerate_patterns(&e2, &target, InferOptions::default()).unwrap();
    assert_eq!(r.slots, 0);
    assert_eq!(r.patterns.len(), 1);
    assert!(r.patterns[0].arrows.is_empty());
    assert_eq!(r.patterns[0].survivors, vec![-2, 0]);
    let Some(FiltrationReport::Unique { levels }) = &r.patterns[0].filtration else { panic!() };
    assert_eq!(levels, &vec![(-2, vec!["b".to_string(), "b+d".to_string()]), (0, vec!["b+d".to_string()])]);
}

#[test]
fn identity_actions_leave_the_filtration_open() {
    let names = vec!["b".to_string(), "b+d".to_string()];
    let r = resolve_filtration(&[-2, 0], &F2Matrix::identity(2), &names).unwrap();
    assert!(matches!(r, FiltrationReport::Underdetermined { .. }));
}

#[test]
fn malformed_inputs_are_input_errors() {
    assert!(PageSpec::from_json("{").unwrap_err().is_input_error());
    let dup = r#"{"generators": [{"name": "x", "h": 0, "q": 0}, {"name": "x", "h": 1, "q": 0}]}"#;
    assert!(PageSpec::from_json(dup).unwrap_err().is_input_error());
    let bad = r#"{"free_rank": 2, "actions": [{"name": "A", "matrix": [[1]]}]}"#;
    assert!(TargetSpec::from_json(bad).unwrap_err().is_input_error());
}

#[test]
fn search_limits_are_enforced() {
    let generators = (0..12).map(|i| gen(&format!("g{i}"), if i % 2 == 0 { 0 } else { 3 }, if i % 2 == 0 { 0 } else { 4 })).collect();
    let e2 = PageSpec { generators, x_q: -2 };
    let target = TargetSpec { free_rank: 0, torsion: vec![], basis: vec![], actions: vec![] };
    let opts = InferOptions { max_slots: 10, ..InferOptions::default() };
    assert!(enumerate_patterns(&e2, &target, opts).unwrap_err().is_input_error());
}
