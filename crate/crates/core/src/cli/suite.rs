//! The built-in suite run by `skeinseq examples`.

use std::fmt::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::infer::{enumerate_patterns, page_from_khovanov, FiltrationReport, InferOptions, PageSpec, TargetSpec};
use crate::khovanov::{actions_agree_on_homology, ckh, Convention, Flavor, LinkDiagram};
use crate::models::{
    canonical_fg, match_pattern, model, relative_identities, sum_maps, top_homology, verify_action, verify_declared,
    GoldenPattern, ModelName,
};
use crate::spectral::{check_constraints, compute_pages, converge, FilteredComplex, PageOptions};

pub const TREFOIL_E2: &str = include_str!("../../golden/trefoil_e2.json");
pub const TREFOIL_TARGET: &str = include_str!("../../golden/trefoil_target.json");
pub const HOPF_E2: &str = include_str!("../../golden/hopf_e2.json");
pub const HOPF_TARGET: &str = include_str!("../../golden/hopf_target.json");

/// The left-handed trefoil as listed in the knot tables.
pub const MIRROR_TREFOIL_PD: &str = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

type CheckFn = fn() -> Result<(bool, String)>;

fn mirror_trefoil() -> Result<LinkDiagram> {
    LinkDiagram::parse_pd(MIRROR_TREFOIL_PD)
}

fn mirror_hopf() -> Result<LinkDiagram> {
    LinkDiagram::braid_closure(2, &[-1, -1])
}

fn free_rank(d: &LinkDiagram, basepoint: Option<u32>) -> Result<(usize, usize)> {
    let m = ckh(d, Flavor::Minus, basepoint, Convention::default())?.homology_module()?;
    Ok((m.free_rank(), m.torsion.len()))
}

fn total_dim(d: &LinkDiagram, flavor: Flavor, basepoint: Option<u32>) -> Result<usize> {
    Ok(ckh(d, flavor, basepoint, Convention::default())?.homology_dims(None)?.values().sum())
}

fn unknot_hat() -> Result<(bool, String)> {
    let n = total_dim(&LinkDiagram::parse_pd("U")?, Flavor::Hat, None)?;
    Ok((n == 2, format!("dim {n}")))
}

fn trefoil_minus() -> Result<(bool, String)> {
    let d = mirror_trefoil()?;
    let (free, tors) = free_rank(&d, Some(d.arcs()[0]))?;
    Ok((free == 3 && tors == 0, format!("free rank {free} over F2[X], {tors} torsion summands")))
}

fn trefoil_hat() -> Result<(bool, String)> {
    let n = total_dim(&mirror_trefoil()?, Flavor::Hat, None)?;
    Ok((n == 6, format!("dim {n}")))
}

fn trefoil_reduced() -> Result<(bool, String)> {
    let d = mirror_trefoil()?;
    let dims = ckh(&d, Flavor::Reduced, Some(d.arcs()[0]), Convention::default())?.homology_dims(None)?;
    let deltas: std::collections::BTreeSet<i64> = dims.iter().filter(|(_, &n)| n > 0).map(|(k, _)| k[1] - 2 * k[0]).collect();
    let n: usize = dims.values().sum();
    Ok((n == 3 && deltas.len() == 1, format!("dim {n} in {} delta gradings", deltas.len())))
}

fn hopf_minus() -> Result<(bool, String)> {
    let d = mirror_hopf()?;
    let (free, tors) = free_rank(&d, Some(d.arcs()[0]))?;
    let comp = d.arc_components();
    let arc_of = |c: usize| comp.iter().find(|(_, &k)| k == c).map(|(a, _)| *a).unwrap_or(0);
    let agree = actions_agree_on_homology(&d, arc_of(0), arc_of(1), Convention::default())?;
    Ok((free == 2 && tors == 0 && agree, format!("free rank {free} over F2[X], component actions agree: {agree}")))
}

fn unlinks() -> Result<(bool, String)> {
    let mut ranks = Vec::new();
    for n in 1..=4 {
        ranks.push(free_rank(&LinkDiagram::unlink(n)?, None)?.0);
    }
    Ok((ranks == [2, 4, 8, 16], format!("F2[U]-ranks {ranks:?}")))
}

fn trefoil_pages() -> Result<(bool, String)> {
    let d = mirror_trefoil()?;
    let fc = FilteredComplex::new(ckh(&d, Flavor::Hat, None, Convention::default())?)?;
    let ss = compute_pages(&fc, PageOptions::default())?;
    let conv = converge(&fc, &ss)?;
    let e2 = ss.page(2).map_or(0, |p| p.total_dim());
    let einf = ss.infinity().total_dim();
    let v = check_constraints(&ss).len();
    Ok((conv.ok && e2 == 6 && einf == 6 && v == 0, format!("E2 {e2}, E_inf {einf}, converge {}, {v} violations", conv.ok)))
}

fn models_are_complexes() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for name in ModelName::ALL {
        let m = model(name)?;
        if !m.complex.is_complex() || !m.collapsed()?.is_complex() {
            bad.push(name.as_str());
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "d^2 = 0 before and after identification".into() } else { bad.join(",") }))
}

fn phi_relations() -> Result<(bool, String)> {
    let mut checked = 0;
    for name in ModelName::ALL {
        let top = top_homology(&model(name)?)?;
        for (na, a) in &top.phis {
            if !a.compose(a).is_zero() {
                return Ok((false, format!("{na} squares to a nonzero map on {}", name.as_str())));
            }
            for (nb, b) in &top.phis {
                if a.compose(b) != b.compose(a) {
                    return Ok((false, format!("{na} and {nb} do not commute on {}", name.as_str())));
                }
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} actions square to zero and commute on top homology")))
}

fn k_nonori() -> Result<(bool, String)> {
    let p = canonical_fg(&model(ModelName::KNonori)?)?;
    Ok((p.f == "f" && p.g == "g" && p.theta == "g", format!("f={} g={} theta={}", p.f, p.g, p.theta)))
}

fn k_ori() -> Result<(bool, String)> {
    let m = model(ModelName::KOri)?;
    let top = top_homology(&m)?;
    let p = canonical_fg(&m)?;
    let ok = top.dim() == 2 && p.f == "ay+bx" && p.g == "ax+by" && p.theta == p.f;
    Ok((ok, format!("rank {} f={} g={} theta={}", top.dim(), p.f, p.g, p.theta)))
}

fn l_pattern(name: ModelName, golden: GoldenPattern) -> Result<(bool, String)> {
    let top = top_homology(&model(name)?)?;
    let found = match_pattern(&top, &golden);
    let detail = match &found {
        Some((basis, n)) => format!("rank {}, basis {} ({n} matching bases)", top.dim(), basis.join(" | ")),
        None => format!("rank {}, no basis realizes the pattern", top.dim()),
    };
    Ok((top.dim() == 4 && top.z_w_agree && found.is_some(), detail))
}

fn l_nonori() -> Result<(bool, String)> {
    l_pattern(ModelName::LNonori, GoldenPattern::l_nonori())
}

fn l_ori() -> Result<(bool, String)> {
    l_pattern(ModelName::LOri, GoldenPattern::l_ori())
}

fn l_ori_free() -> Result<(bool, String)> {
    let h = model(ModelName::LOri)?.fully_collapsed()?.homology_module()?;
    Ok((h.torsion.is_empty(), format!("free rank {}, {} torsion summands", h.free_rank(), h.torsion.len())))
}

fn relative_actions() -> Result<(bool, String)> {
    let ids = relative_identities();
    let failed: Vec<&str> = ids.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Ok((failed.is_empty(), if failed.is_empty() { format!("{} identities", ids.len()) } else { failed.join(", ") }))
}

fn trefoil_cfl() -> Result<(bool, String)> {
    let h = model(ModelName::TrefoilCfl)?.complex.homology_module()?;
    let ok = h.free_rank() == 1 && h.torsion_orders() == [1];
    Ok((ok, format!("free rank {}, torsion {:?}", h.free_rank(), h.torsion_orders())))
}

fn z11_identities() -> Result<(bool, String)> {
    let m = model(ModelName::Z11_2)?;
    let reports = verify_declared(&m)?;
    let ok = reports.iter().all(|r| r.path_identity == Some(true));
    Ok((ok, format!("{} path identities checked", reports.len())))
}

fn z11_kernel() -> Result<(bool, String)> {
    let m = model(ModelName::Z11_2)?;
    let (k, l) = (&m.actions[0].map, &m.actions[1].map);
    let kl = sum_maps(&m.complex, k, l, "A_kappa+A_lambda");
    let mut kernels = Vec::new();
    for map in [k, l, &kl] {
        let r = verify_action(&m, map, None)?;
        let c0 = r.kernels.iter().find(|(p, _)| *p == 0).map(|(_, v)| v.clone()).unwrap_or_default();
        kernels.push(c0);
    }
    let ok = kernels.iter().all(|v| v.len() == 1) && kernels.windows(2).all(|w| w[0] == w[1]);
    Ok((ok, format!("kernels on C0: {}", kernels.iter().map(|v| v.join("+")).collect::<Vec<_>>().join(" | "))))
}

fn golden_page() -> Result<(bool, String)> {
    let page = page_from_khovanov(&mirror_trefoil()?, None, Convention::default())?;
    let golden = PageSpec::from_json(TREFOIL_E2)?;
    let ok = page == golden;
    let hopf = page_from_khovanov(&mirror_hopf()?, None, Convention::default())?;
    let hopf_ok = hopf == PageSpec::from_json(HOPF_E2)?;
    Ok((ok && hopf_ok, format!("trefoil page matches: {ok}, Hopf page matches: {hopf_ok}")))
}

fn infer_trefoil() -> Result<(bool, String)> {
    let r = enumerate_patterns(&PageSpec::from_json(TREFOIL_E2)?, &TargetSpec::from_json(TREFOIL_TARGET)?, InferOptions::default())?;
    let ok = r.patterns.len() == 1
        && r.patterns[0].arrows.len() == 1
        && r.patterns[0].arrows[0].to_string() == "d3: z -> X x"
        && r.patterns[0].violations.is_empty();
    let arrows: Vec<String> = r.patterns.iter().flat_map(|p| p.arrows.iter().map(|a| a.to_string())).collect();
    let surv = r.patterns.first().map(|p| p.survivors.clone()).unwrap_or_default();
    Ok((ok && surv == [-2], format!("{} pattern(s): {}; surviving tower at {surv:?}", r.patterns.len(), arrows.join("; "))))
}

fn infer_hopf() -> Result<(bool, String)> {
    let r = enumerate_patterns(&PageSpec::from_json(HOPF_E2)?, &TargetSpec::from_json(HOPF_TARGET)?, InferOptions::default())?;
    let Some(p) = r.patterns.first() else { return Ok((false, "no pattern".into())) };
    let split = match &p.filtration {
        Some(FiltrationReport::Unique { levels }) => levels.last().map(|(l, s)| (*l, s.clone())),
        _ => None,
    };
    let ok = r.patterns.len() == 1 && p.arrows.is_empty() && split == Some((0, vec!["b+d".to_string()]));
    Ok((ok, format!("{} pattern(s), top filtration level {split:?}", r.patterns.len())))
}

pub const CHECKS: &[(&str, CheckFn)] = &[
    ("kh unknot hat", unknot_hat),
    ("kh mirror trefoil minus", trefoil_minus),
    ("kh mirror trefoil hat", trefoil_hat),
    ("kh mirror trefoil reduced", trefoil_reduced),
    ("kh mirror Hopf minus", hopf_minus),
    ("kh planar unlinks", unlinks),
    ("ss mirror trefoil cube filtration", trefoil_pages),
    ("models square to zero", models_are_complexes),
    ("models Phi relations", phi_relations),
    ("k_nonori canonical pair", k_nonori),
    ("k_ori canonical pair", k_ori),
    ("l_nonori Phi pattern", l_nonori),
    ("l_ori Phi pattern", l_ori),
    ("l_ori collapsed homology free", l_ori_free),
    ("l_ori relative actions", relative_actions),
    ("trefoil_cfl homology", trefoil_cfl),
    ("z11_2 path identities", z11_identities),
    ("z11_2 kernel on C0", z11_kernel),
    ("golden pages", golden_page),
    ("infer trefoil", infer_trefoil),
    ("infer Hopf", infer_hopf),
];

pub fn run_suite() -> Vec<Check> {
    CHECKS
        .iter()
        .map(|(name, f)| {
            let (pass, detail) = match f() {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            Check { name: name.to_string(), pass, detail }
        })
        .collect()
}

pub fn tsv(checks: &[Check]) -> String {
    let mut s = String::from("check\tstatus\tdetail\n");
    for c in checks {
        let _ = writeln!(s, "{}\t{}\t{}", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail);
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(s, "# passed\t{passed}/{}", checks.len());
    s
}

/// Fails with the names of failed checks.
pub fn require_all(checks: &[Check]) -> Result<()> {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Invariant(format!("failed checks: {}", failed.join(", "))))
    }
}
