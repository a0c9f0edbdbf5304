//! Planar diagram codes.
//!
//! A crossing `X[i,j,k,l]` lists its four arcs counterclockwise, starting
//! from the incoming under-strand; the under-strand runs from `i` to `k`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};

/// Diagrams larger than this are rejected.
pub const MAX_CROSSINGS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkDiagram {
    crossings: Vec<[u32; 4]>,
    /// Arcs of crossingless circles.
    loops: Vec<u32>,
    /// Crossing signs under the orientation carried by the code.
    signs: Vec<i8>,
    components: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Crossing([u32; 4]),
    Loop(u32),
}

fn parse_numbers(body: &str) -> Result<Vec<u32>> {
    body.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad arc label {s:?}"))))
        .collect()
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.eq_ignore_ascii_case("U") || s.eq_ignore_ascii_case("unknot") {
        return Ok(vec![Token::Loop(1)]);
    }
    if let Some(rest) = s.strip_prefix("PD") {
        let inner = rest
            .strip_prefix(['[', '('])
            .and_then(|r| r.strip_suffix([']', ')']))
            .ok_or_else(|| Error::Parse("unbalanced PD brackets".into()))?;
        s = inner.to_string();
    }
    let mut out = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(',');
        if rest.is_empty() {
            break;
        }
        let (kind, after) = if let Some(r) = rest.strip_prefix("Loop") {
            ("loop", r)
        } else if let Some(r) = rest.strip_prefix('X') {
            ("x", r)
        } else {
            return Err(Error::Parse(format!("unexpected input at {rest:?}")));
        };
        let open = after.chars().next().ok_or_else(|| Error::Parse("truncated PD code".into()))?;
        let close = match open {
            '[' => ']',
            '(' => ')',
            _ => return Err(Error::Parse(format!("expected bracket at {after:?}"))),
        };
        let end = after.find(close).ok_or_else(|| Error::Parse("unbalanced brackets".into()))?;
        let nums = parse_numbers(&after[1..end])?;
        match (kind, nums.len()) {
            ("x", 4) => out.push(Token::Crossing([nums[0], nums[1], nums[2], nums[3]])),
            ("loop", 1) => out.push(Token::Loop(nums[0])),
            ("x", n) => return Err(Error::Parse(format!("crossing with {n} arcs"))),
            (_, n) => return Err(Error::Parse(format!("loop with {n} arcs"))),
        }
        rest = &after[end + 1..];
    }
    Ok(out)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

impl LinkDiagram {
    /// Parses `PD[X[1,4,2,5], ...]` (round brackets also accepted), with
    /// `Loop[k]` for a crossingless circle and `U` for the unknot.
    pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
        let tokens = tokenize(text)?;
        let mut crossings = Vec::new();
        let mut loops = Vec::new();
        for t in tokens {
            match t {
                Token::Crossing(x) => crossings.push(x),
                Token::Loop(a) => loops.push(a),
            }
        }
        Self::from_parts(crossings, loops)
    }

    pub fn from_parts(crossings: Vec<[u32; 4]>, loops: Vec<u32>) -> Result<LinkDiagram> {
        if crossings.is_empty() && loops.is_empty() {
            return Err(Error::Diagram("empty diagram".into()));
        }
        if crossings.len() > MAX_CROSSINGS {
            return Err(Error::Diagram(format!(
                "{} crossings exceeds the limit of {MAX_CROSSINGS}",
                crossings.len()
            )));
        }
        let mut slots: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for (p, &a) in x.iter().enumerate() {
                slots.entry(a).or_default().push((c, p));
            }
        }
        for (a, s) in &slots {
            if s.len() != 2 {
                return Err(Error::Diagram(format!("arc {a} appears {} times (expected 2)", s.len())));
            }
        }
        let mut seen = BTreeSet::new();
        for &l in &loops {
            if slots.contains_key(&l) || !seen.insert(l) {
                return Err(Error::Diagram(format!("loop arc {l} is reused")));
            }
        }
        let mut d = LinkDiagram { crossings, loops, signs: Vec::new(), components: 0 };
        d.check_planar(&slots)?;
        d.orient(&slots)?;
        Ok(d)
    }

    fn check_planar(&self, slots: &BTreeMap<u32, Vec<(usize, usize)>>) -> Result<()> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(());
        }
        let half = |c: usize, p: usize| c * 4 + p;
        let mut other = vec![0usize; 4 * n];
        let mut uf = UnionFind::new(n);
        for s in slots.values() {
            let (a, b) = (s[0], s[1]);
            other[half(a.0, a.1)] = half(b.0, b.1);
            other[half(b.0, b.1)] = half(a.0, a.1);
            uf.union(a.0, b.0);
        }
        let mut visited = vec![false; 4 * n];
        let mut faces = 0i64;
        for start in 0..4 * n {
            if visited[start] {
                continue;
            }
            faces += 1;
            let mut h = start;
            while !visited[h] {
                visited[h] = true;
                let o = other[h];
                h = (o / 4) * 4 + (o % 4 + 1) % 4;
            }
        }
        let graph_components = (0..n).filter(|&c| uf.find(c) == c).count() as i64;
        let euler = n as i64 - 2 * n as i64 + faces;
        if euler != 2 * graph_components {
            return Err(Error::Diagram(format!(
                "code is not planar (V - E + F = {euler}, expected {})",
                2 * graph_components
            )));
        }
        Ok(())
    }

    /// Orients every arc from the under-strand convention and records signs.
    fn orient(&mut self, slots: &BTreeMap<u32, Vec<(usize, usize)>>) -> Result<()> {
        // head[a] = the slot where arc `a` ends.
        let mut head: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        let arcs: Vec<u32> = slots.keys().copied().collect();
        let mut done: BTreeSet<u32> = BTreeSet::new();
        let mut components = 0;
        let other_end = |a: u32, s: (usize, usize)| -> (usize, usize) {
            let v = &slots[&a];
            if v[0] == s {
                v[1]
            } else {
                v[0]
            }
        };
        let mut seeds: Vec<(u32, (usize, usize))> = Vec::new();
        for (c, x) in self.crossings.iter().enumerate() {
            seeds.push((x[0], (c, 0)));
        }
        for &a in &arcs {
            seeds.push((a, slots[&a][1]));
        }
        for (a0, h0) in seeds {
            if done.contains(&a0) {
                continue;
            }
            components += 1;
            let (mut a, mut h) = (a0, h0);
            loop {
                if let Some(&prev) = head.get(&a) {
                    if prev != h {
                        return Err(Error::Diagram(format!("arc {a} cannot be oriented consistently")));
                    }
                    break;
                }
                head.insert(a, h);
                done.insert(a);
                let (c, p) = h;
                let next_tail = (c, (p + 2) % 4);
                let b = self.crossings[c][next_tail.1];
                h = other_end(b, next_tail);
                a = b;
            }
        }
        for (c, x) in self.crossings.iter().enumerate() {
            if head[&x[2]] == (c, 2) {
                return Err(Error::Diagram(format!("crossing {c}: under-strand does not run from slot 0 to slot 2")));
            }
        }
        self.signs = self
            .crossings
            .iter()
            .enumerate()
            .map(|(c, x)| {
                let over_in_at_3 = head[&x[3]] == (c, 3);
                let over_in_at_1 = head[&x[1]] == (c, 1);
                if over_in_at_3 && !over_in_at_1 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        self.components = components + self.loops.len();
        Ok(())
    }

    /// Closure of a braid word on `strands` strands; `k` stands for
    /// `sigma_k` and `-k` for its inverse (1-based). Positive generators give
    /// positive crossings.
    pub fn braid_closure(strands: usize, word: &[i32]) -> Result<LinkDiagram> {
        if strands == 0 {
            return Err(Error::Diagram("a braid needs at least one strand".into()));
        }
        let mut next = strands as u32 + 1;
        let mut pos: Vec<u32> = (1..=strands as u32).collect();
        let mut crossings = Vec::new();
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= strands {
                return Err(Error::Diagram(format!("braid generator {g} out of range")));
            }
            let (a, b) = (pos[i - 1], pos[i]);
            let (c, d) = (next, next + 1);
            next += 2;
            crossings.push(if g > 0 { [b, d, c, a] } else { [a, b, d, c] });
            pos[i - 1] = c;
            pos[i] = d;
        }
        let mut rename: BTreeMap<u32, u32> = BTreeMap::new();
        for (k, &p) in pos.iter().enumerate() {
            rename.insert(p, k as u32 + 1);
        }
        let mut loops = Vec::new();
        for (k, &p) in pos.iter().enumerate() {
            if p == k as u32 + 1 {
                loops.push(p);
            }
        }
        for x in &mut crossings {
            for a in x.iter_mut() {
                if let Some(&r) = rename.get(a) {
                    *a = r;
                }
            }
        }
        Self::from_parts(crossings, loops)
    }

    /// A diagram of `n` disjoint crossingless circles.
    pub fn unlink(n: usize) -> Result<LinkDiagram> {
        Self::from_parts(Vec::new(), (1..=n as u32).collect())
    }

    /// Mirror image: every crossing changes over and under.
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(x, &s)| if s > 0 { [x[3], x[0], x[1], x[2]] } else { [x[1], x[2], x[3], x[0]] })
            .collect();
        LinkDiagram {
            crossings,
            loops: self.loops.clone(),
            signs: self.signs.iter().map(|s| -s).collect(),
            components: self.components,
        }
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn loops(&self) -> &[u32] {
        &self.loops
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn n_plus(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_knot(&self) -> bool {
        self.components == 1
    }

    /// All arc labels, sorted.
    pub fn arcs(&self) -> Vec<u32> {
        let mut v: BTreeSet<u32> = self.loops.iter().copied().collect();
        for x in &self.crossings {
            v.extend(x.iter().copied());
        }
        v.into_iter().collect()
    }

    /// Link component of each arc, numbered in order of smallest arc.
    pub fn arc_components(&self) -> BTreeMap<u32, usize> {
        let arcs = self.arcs();
        let pos = |a: u32| arcs.binary_search(&a).expect("arc of the diagram");
        let mut uf = UnionFind::new(arcs.len());
        for x in &self.crossings {
            uf.union(pos(x[0]), pos(x[2]));
            uf.union(pos(x[1]), pos(x[3]));
        }
        let mut label: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = BTreeMap::new();
        for (i, &a) in arcs.iter().enumerate() {
            let root = uf.find(i);
            let next = label.len();
            out.insert(a, *label.entry(root).or_insert(next));
        }
        out
    }

    pub fn to_pd(&self) -> String {
        let mut parts: Vec<String> =
            self.crossings.iter().map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3])).collect();
        parts.extend(self.loops.iter().map(|l| format!("Loop[{l}]")));
        format!("PD[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knot_atlas_trefoil_is_a_left_handed_knot() {
        let d = LinkDiagram::parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        assert!(d.is_knot());
        assert_eq!(d.signs(), &[-1, -1, -1]);
        assert_eq!(d.mirror().signs(), &[1, 1, 1]);
    }

    #[test]
    fn rejects_non_planar_code() {
        let r = LinkDiagram::parse_pd("X(1,4,2,3),X(3,6,4,5),X(5,2,6,1)");
        assert!(matches!(r, Err(Error::Diagram(_))), "{r:?}");
    }

    #[test]
    fn rejects_malformed_codes() {
        assert!(LinkDiagram::parse_pd("PD[X[1,2,3]]").is_err());
        assert!(LinkDiagram::parse_pd("PD[X[1,2,3,4]]").is_err());
        assert!(LinkDiagram::parse_pd("PD[]").is_err());
        assert!(LinkDiagram::parse_pd("PD[X[1,4,2,5], Y[3,6,4,1]]").is_err());
    }

    #[test]
    fn hopf_link_and_unknots() {
        let h = LinkDiagram::parse_pd("PD[X[4,1,3,2], X[2,3,1,4]]").unwrap();
        assert_eq!(h.components(), 2);
        assert_eq!(LinkDiagram::parse_pd("U").unwrap().components(), 1);
        let kink = LinkDiagram::parse_pd("PD[X[1,1,2,2]]").unwrap();
        assert!(kink.is_knot());
        assert_eq!(LinkDiagram::unlink(3).unwrap().components(), 3);
    }

    #[test]
    fn braid_closures() {
        let t = LinkDiagram::braid_closure(2, &[1, 1, 1]).unwrap();
        assert!(t.is_knot());
        assert_eq!(t.n_plus(), 3);
        let h = LinkDiagram::braid_closure(2, &[-1, -1]).unwrap();
        assert_eq!(h.components(), 2);
        assert_eq!(h.n_minus(), 2);
        let u = LinkDiagram::braid_closure(3, &[1]).unwrap();
        assert_eq!(u.components(), 2);
        let reparsed = LinkDiagram::parse_pd(&t.to_pd()).unwrap();
        assert_eq!(reparsed, t);
    }
}
