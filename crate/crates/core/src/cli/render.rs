//! Tables and JSON documents for the command-line reports.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::complex::ChainComplex;
use crate::error::Result;
use crate::infer::{FiltrationReport, InferenceReport};
use crate::khovanov::{Flavor, LinkDiagram};
use crate::spectral::{ConvergenceReport, SpectralSequence, Violation};

fn torsion_text(t: &[u32]) -> String {
    if t.is_empty() {
        "-".into()
    } else {
        t.iter().map(|k| format!("T{k}")).collect::<Vec<_>>().join(",")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KhGroup {
    pub h: i64,
    pub q: i64,
    /// `q - 2h`, twice the relative delta grading.
    pub delta2: i64,
    /// Free rank over the ground ring (dimension when the ring is F2).
    pub rank: usize,
    pub torsion: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KhReport {
    pub flavor: Flavor,
    pub ring: &'static str,
    pub basepoint: Option<u32>,
    pub crossings: usize,
    pub components: usize,
    pub groups: Vec<KhGroup>,
    pub total_rank: usize,
    pub torsion: Vec<u32>,
}

impl KhReport {
    pub fn new(d: &LinkDiagram, c: &ChainComplex, flavor: Flavor, basepoint: Option<u32>) -> Result<Self> {
        let g = c.grading()?;
        let hi = g.labels.iter().position(|l| *l == "h").unwrap_or(0);
        let qi = g.labels.iter().position(|l| *l == "q");
        let hq = |k: &[i64]| (k[hi], qi.map_or(0, |i| k[i]));
        let mut cells: BTreeMap<(i64, i64), (usize, Vec<u32>)> = BTreeMap::new();
        let names = c.variable_names();
        let ring = match names.first().map(|s| &**s) {
            None => {
                for (k, n) in c.homology_dims(None)? {
                    if n > 0 {
                        cells.entry(hq(&k)).or_default().0 += n;
                    }
                }
                "F2"
            }
            Some(v) => {
                let m = c.homology_module()?;
                for k in &m.free {
                    cells.entry(hq(k)).or_default().0 += 1;
                }
                for (k, o) in &m.torsion {
                    cells.entry(hq(k)).or_default().1.push(*o);
                }
                if v == "X" {
                    "F2[X]"
                } else {
                    "F2[U]"
                }
            }
        };
        let hmin = cells.keys().map(|k| k.0).min().unwrap_or(0);
        let qmin = cells.keys().map(|k| k.1).min().unwrap_or(0);
        let dmin = cells.keys().map(|k| k.1 - 2 * k.0).min().unwrap_or(0);
        let mut groups: Vec<KhGroup> = cells
            .into_iter()
            .map(|((h, q), (rank, mut torsion))| {
                torsion.sort();
                KhGroup { h: h - hmin, q: q - qmin, delta2: q - 2 * h - dmin, rank, torsion }
            })
            .collect();
        groups.sort_by_key(|g| (g.h, g.q));
        let mut torsion: Vec<u32> = groups.iter().flat_map(|g| g.torsion.iter().copied()).collect();
        torsion.sort();
        Ok(KhReport {
            flavor,
            ring,
            basepoint,
            crossings: d.crossings().len(),
            components: d.components(),
            total_rank: groups.iter().map(|g| g.rank).sum(),
            groups,
            torsion,
        })
    }

    pub fn tsv(&self) -> String {
        let mut s = String::new();
        let flavor = serde_json::to_value(self.flavor).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        let _ = writeln!(s, "# flavor\t{flavor}");
        let _ = writeln!(s, "# ring\t{}", self.ring);
        let _ = writeln!(s, "# basepoint\t{}", self.basepoint.map_or("-".to_string(), |b| b.to_string()));
        let _ = writeln!(s, "# crossings\t{}", self.crossings);
        let _ = writeln!(s, "# components\t{}", self.components);
        let _ = writeln!(s, "h\tq\tq-2h\trank\ttorsion");
        for g in &self.groups {
            let _ = writeln!(s, "{}\t{}\t{}\t{}\t{}", g.h, g.q, g.delta2, g.rank, torsion_text(&g.torsion));
        }
        let _ = writeln!(s, "# total_rank\t{}", self.total_rank);
        let _ = writeln!(s, "# torsion\t{}", torsion_text(&self.torsion));
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SsCell {
    pub r: usize,
    pub q: Option<i64>,
    pub h: i64,
    pub level: i64,
    /// The Alexander parity, when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alex2: Option<i64>,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SsReport {
    pub cells: Vec<SsCell>,
    /// Total rank of `d_r` for each page `r`.
    pub ranks: Vec<(usize, usize)>,
    pub collapse_page: usize,
    pub convergence: Option<ConvergenceReport>,
    pub violations: Vec<Violation>,
}

impl SsReport {
    pub fn new(ss: &SpectralSequence, convergence: Option<ConvergenceReport>, violations: Vec<Violation>) -> Self {
        let ai = ss.labels.iter().position(|l| *l == "alex2");
        let mut raw = Vec::new();
        for page in &ss.pages {
            for c in &page.cells {
                let (q, h) = ss.bigrading(&c.key, c.level);
                raw.push(SsCell {
                    r: page.r,
                    q,
                    h,
                    level: c.level,
                    alex2: ai.map(|i| c.key[i]),
                    dim: c.dim,
                    profile: c.profile.as_ref().map(|p| p.to_string()),
                });
            }
        }
        let hmin = raw.iter().map(|c| c.h).min().unwrap_or(0);
        let qmin = raw.iter().filter_map(|c| c.q).min().unwrap_or(0);
        let lmin = raw.iter().map(|c| c.level).min().unwrap_or(0);
        for c in &mut raw {
            c.h -= hmin;
            c.level -= lmin;
            c.q = c.q.map(|q| q - qmin);
        }
        raw.sort_by_key(|c| (c.r, c.q, c.h, c.level, c.alex2));
        SsReport { cells: raw, ranks: ss.rank_profile(), collapse_page: ss.collapse_page(), convergence, violations }
    }

    pub fn tsv(&self) -> String {
        let mut s = String::new();
        let with_a = self.cells.iter().any(|c| c.alex2.is_some());
        let _ = writeln!(s, "r\tq_rel\th_rel\tlevel\tdim\tprofile{}", if with_a { "\talex2" } else { "" });
        for c in &self.cells {
            let q = c.q.map_or("-".to_string(), |q| q.to_string());
            let prof = c.profile.clone().unwrap_or_else(|| "-".into());
            let _ = write!(s, "{}\t{}\t{}\t{}\t{}\t{}", c.r, q, c.h, c.level, c.dim, prof);
            if let Some(a) = c.alex2 {
                let _ = write!(s, "\t{a}");
            }
            s.push('\n');
        }
        let ranks: Vec<String> = self.ranks.iter().map(|(r, k)| format!("d{r}={k}")).collect();
        let _ = writeln!(s, "# ranks\t{}", ranks.join("\t"));
        let _ = writeln!(s, "# collapse_page\t{}", self.collapse_page);
        match &self.convergence {
            Some(c) if c.ok => {
                let _ = writeln!(s, "# converge\tok");
            }
            Some(c) => {
                let _ = writeln!(s, "# converge\tFAILED\t{} mismatched degrees", c.mismatches.len());
            }
            None => {
                let _ = writeln!(s, "# converge\tnot checked");
            }
        }
        let _ = writeln!(s, "# violations\t{}", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(s, "# violation\td{}\t{}", v.r, v.reason);
        }
        s
    }
}

pub fn infer_tsv(r: &InferenceReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# slots\t{}", r.slots);
    let _ = writeln!(s, "# examined\t{}", r.examined);
    let _ = writeln!(s, "# closed\t{}", r.closed);
    let _ = writeln!(s, "# canonical\t{}", if r.exact_canonical { "exact" } else { "invariants" });
    let _ = writeln!(s, "patterns\t{}", r.patterns.len());
    for (i, p) in r.patterns.iter().enumerate() {
        let _ = writeln!(s, "pattern\t{}", i + 1);
        if p.arrows.is_empty() {
            let _ = writeln!(s, "arrow\tnone");
        }
        for a in &p.arrows {
            let _ = writeln!(s, "arrow\t{a}");
        }
        let surv: Vec<String> = p.survivors.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(s, "survivors\t{}", if surv.is_empty() { "-".into() } else { surv.join(",") });
        let _ = writeln!(s, "violations\t{}", p.violations.len());
        match &p.filtration {
            None => {}
            Some(FiltrationReport::Unique { levels }) => {
                for (lvl, span) in levels {
                    let _ = writeln!(s, "filtration\tF_{lvl}\t{{{}}}", span.join(", "));
                }
            }
            Some(FiltrationReport::Underdetermined { flags }) => {
                let _ = writeln!(s, "filtration\tunderdetermined\t{flags} flags");
            }
            Some(FiltrationReport::NoAssignment) => {
                let _ = writeln!(s, "filtration\tnone");
            }
        }
    }
    s
}
