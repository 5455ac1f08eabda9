//! Coxeter diagrams: parsing, validation, and graph queries.
//!
//! Vertices are stored sorted by name, so a [`Gen`] index order is the
//! lexicographic order on identifiers. An absent edge means `m = ∞`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A generator of the Coxeter group, i.e. a vertex of the diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Gen(pub u16);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// User assertions about a free factor (`factor <index> <flag>` directives).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FactorFlags {
    pub strongly_rigid: bool,
    pub finite: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterDiagram {
    names: Vec<String>,
    labels: Vec<Vec<Option<u32>>>,
    factor_flags: BTreeMap<usize, FactorFlags>,
}

impl CoxeterDiagram {
    /// Builds a diagram from vertex names and labeled edges. Labels are not
    /// checked for evenness here; see [`CoxeterDiagram::validate`].
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, u32)]) -> Result<Self> {
        let mut set: BTreeSet<String> = vertices.iter().map(|v| v.as_ref().to_owned()).collect();
        for (u, v, _) in edges {
            set.insert(u.as_ref().to_owned());
            set.insert(v.as_ref().to_owned());
        }
        let names: Vec<String> = set.into_iter().collect();
        if names.len() > u16::MAX as usize {
            return Err(Error::Unsupported("too many vertices".into()));
        }
        let n = names.len();
        let mut d = CoxeterDiagram {
            names,
            labels: vec![vec![None; n]; n],
            factor_flags: BTreeMap::new(),
        };
        for (i, (u, v, m)) in edges.iter().enumerate() {
            let (u, v) = (u.as_ref(), v.as_ref());
            d.insert_edge(i + 1, u, v, *m)?;
        }
        Ok(d)
    }

    fn insert_edge(&mut self, line: usize, u: &str, v: &str, m: u32) -> Result<()> {
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at {u}"),
            });
        }
        if m < 2 {
            return Err(Error::Parse {
                line,
                message: format!("label {m} is not a Coxeter exponent"),
            });
        }
        let a = self.gen(u).ok_or_else(|| Error::UnknownGenerator(u.into()))?;
        let b = self.gen(v).ok_or_else(|| Error::UnknownGenerator(v.into()))?;
        if self.labels[a.index()][b.index()].is_some() {
            return Err(Error::DuplicateEdge {
                line,
                u: u.into(),
                v: v.into(),
            });
        }
        self.labels[a.index()][b.index()] = Some(m);
        self.labels[b.index()][a.index()] = Some(m);
        Ok(())
    }

    /// Parses the diagram file format, rejecting odd labels.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, true)
    }

    /// Like [`CoxeterDiagram::parse`] but keeps odd labels so that
    /// validation can report them.
    pub fn parse_lenient(text: &str) -> Result<Self> {
        Self::parse_with(text, false)
    }

    fn parse_with(text: &str, reject_odd: bool) -> Result<Self> {
        let mut vertices = BTreeSet::new();
        let mut edges: Vec<(usize, String, String, u32)> = Vec::new();
        let mut flags: BTreeMap<usize, FactorFlags> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let malformed = |message: String| Error::Parse { line, message };
            match tokens.as_slice() {
                ["edge", u, v, label] => {
                    let m: u32 = label
                        .parse()
                        .map_err(|_| malformed(format!("bad label `{label}`")))?;
                    if reject_odd && m % 2 == 1 {
                        return Err(Error::OddLabel {
                            line,
                            u: u.to_string(),
                            v: v.to_string(),
                            label: m,
                        });
                    }
                    vertices.insert(u.to_string());
                    vertices.insert(v.to_string());
                    edges.push((line, u.to_string(), v.to_string(), m));
                }
                ["vertex", v] => {
                    vertices.insert(v.to_string());
                }
                ["factor", index, flag] => {
                    let index: usize = index
                        .parse()
                        .map_err(|_| malformed(format!("bad factor index `{index}`")))?;
                    let entry = flags.entry(index).or_default();
                    match *flag {
                        "strongly_rigid" => entry.strongly_rigid = true,
                        "finite" => entry.finite = Some(true),
                        "infinite" => entry.finite = Some(false),
                        other => return Err(malformed(format!("unknown factor flag `{other}`"))),
                    }
                }
                _ => return Err(malformed(format!("cannot parse `{content}`"))),
            }
        }
        let names: Vec<String> = vertices.into_iter().collect();
        let n = names.len();
        let mut d = CoxeterDiagram {
            names,
            labels: vec![vec![None; n]; n],
            factor_flags: flags,
        };
        for (line, u, v, m) in edges {
            d.insert_edge(line, &u, &v, m)?;
        }
        Ok(d)
    }

    /// Serializes to the diagram file format: all vertices, then all edges,
    /// then factor directives, each in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            out.push_str(&format!("vertex {name}\n"));
        }
        for (a, b, m) in self.edges() {
            out.push_str(&format!("edge {} {} {}\n", self.name(a), self.name(b), m));
        }
        for (index, f) in &self.factor_flags {
            if f.strongly_rigid {
                out.push_str(&format!("factor {index} strongly_rigid\n"));
            }
            match f.finite {
                Some(true) => out.push_str(&format!("factor {index} finite\n")),
                Some(false) => out.push_str(&format!("factor {index} infinite\n")),
                None => {}
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + Clone {
        (0..self.names.len() as u16).map(Gen)
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gen(&self, name: &str) -> Option<Gen> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| Gen(i as u16))
    }

    pub fn gens_of(&self, names: &[&str]) -> Result<Vec<Gen>> {
        names
            .iter()
            .map(|n| self.gen(n).ok_or_else(|| Error::UnknownGenerator((*n).into())))
            .collect()
    }

    /// The label `m_st`, or `None` when `m_st = ∞` (or `s = t`).
    pub fn label(&self, a: Gen, b: Gen) -> Option<u32> {
        self.labels[a.index()][b.index()]
    }

    pub fn adjacent(&self, a: Gen, b: Gen) -> bool {
        self.label(a, b).is_some()
    }

    pub fn neighbors(&self, g: Gen) -> Vec<Gen> {
        self.gens().filter(|&h| self.adjacent(g, h)).collect()
    }

    pub fn degree(&self, g: Gen) -> usize {
        self.labels[g.index()].iter().filter(|l| l.is_some()).count()
    }

    /// Edges `(a, b, m)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(Gen, Gen, u32)> {
        let mut out = Vec::new();
        for a in self.gens() {
            for b in self.gens().filter(|&b| b > a) {
                if let Some(m) = self.label(a, b) {
                    out.push((a, b, m));
                }
            }
        }
        out
    }

    pub fn factor_flags(&self) -> &BTreeMap<usize, FactorFlags> {
        &self.factor_flags
    }

    pub fn set_factor_flags(&mut self, index: usize, flags: FactorFlags) {
        self.factor_flags.insert(index, flags);
    }

    /// The full subdiagram on `vertices` (which must be sorted).
    pub fn induced(&self, vertices: &[Gen]) -> CoxeterDiagram {
        let names: Vec<String> = vertices.iter().map(|&g| self.name(g).to_owned()).collect();
        let labels = vertices
            .iter()
            .map(|&a| vertices.iter().map(|&b| self.label(a, b)).collect())
            .collect();
        CoxeterDiagram {
            names,
            labels,
            factor_flags: BTreeMap::new(),
        }
    }

    pub fn names_of(&self, gens: &[Gen]) -> Vec<String> {
        gens.iter().map(|&g| self.name(g).to_owned()).collect()
    }

    /// Connected components of the full subgraph on `V \ removed`, each
    /// sorted, ordered by least vertex.
    pub fn components(&self, removed: &[Gen]) -> Vec<Vec<Gen>> {
        let n = self.len();
        let mut seen = vec![false; n];
        for g in removed {
            seen[g.index()] = true;
        }
        let mut out = Vec::new();
        for start in self.gens() {
            if seen[start.index()] {
                continue;
            }
            seen[start.index()] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(g) = queue.pop_front() {
                for h in self.gens() {
                    if !seen[h.index()] && self.adjacent(g, h) {
                        seen[h.index()] = true;
                        comp.push(h);
                        queue.push_back(h);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(&[]).len() <= 1
    }

    /// Vertices whose removal increases the number of components.
    pub fn cut_vertices(&self) -> Vec<Gen> {
        let base = self.components(&[]).len();
        self.gens()
            .filter(|&g| {
                let rest = self.components(&[g]).len();
                // An isolated vertex disappears entirely when removed.
                let lost = usize::from(self.degree(g) == 0);
                rest + lost > base
            })
            .collect()
    }

    /// Edges whose removal disconnects their endpoints.
    pub fn bridges(&self) -> Vec<(Gen, Gen)> {
        self.edges()
            .into_iter()
            .filter(|&(a, b, _)| !self.connected_avoiding_edge(a, b))
            .map(|(a, b, _)| (a, b))
            .collect()
    }

    fn connected_avoiding_edge(&self, a: Gen, b: Gen) -> bool {
        let mut seen = vec![false; self.len()];
        seen[a.index()] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(g) = queue.pop_front() {
            for h in self.neighbors(g) {
                if (g == a && h == b) || (g == b && h == a) || seen[h.index()] {
                    continue;
                }
                if h == b {
                    return true;
                }
                seen[h.index()] = true;
                queue.push_back(h);
            }
        }
        false
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport {
            even: true,
            large_type: true,
            connected: true,
            nvb: true,
            odd_edges: Vec::new(),
            small_edges: Vec::new(),
            components: Vec::new(),
            branching_vertices: Vec::new(),
        };
        for (a, b, m) in self.edges() {
            let pair = [self.name(a).to_owned(), self.name(b).to_owned()];
            if m % 2 == 1 {
                report.even = false;
                report.odd_edges.push(pair.clone());
            }
            if m < 4 {
                report.large_type = false;
                report.small_edges.push(pair);
            }
        }
        let comps = self.components(&[]);
        if comps.len() > 1 {
            report.connected = false;
            report.components = comps.iter().map(|c| self.names_of(c)).collect();
        }
        for g in self.gens() {
            if self.components(&[g]).len() >= 3 {
                report.nvb = false;
                report.branching_vertices.push(self.name(g).to_owned());
            }
        }
        report
    }

    /// Fails unless the diagram is even, large-type, connected and NVB.
    pub fn require_admissible(&self) -> Result<()> {
        let r = self.validate();
        if r.is_admissible() {
            Ok(())
        } else {
            Err(Error::InvalidDiagram(r.summary()))
        }
    }

    /// All label-preserving vertex permutations, in lexicographic order of
    /// the image sequence (identity first).
    pub fn automorphisms(&self) -> Vec<DiagramAutomorphism> {
        let n = self.len();
        let mut out = Vec::new();
        let mut image: Vec<Gen> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.extend_automorphism(&mut image, &mut used, &mut out);
        out
    }

    fn extend_automorphism(
        &self,
        image: &mut Vec<Gen>,
        used: &mut [bool],
        out: &mut Vec<DiagramAutomorphism>,
    ) {
        let v = image.len();
        if v == self.len() {
            out.push(DiagramAutomorphism(image.clone()));
            return;
        }
        let v = Gen(v as u16);
        for c in self.gens() {
            if used[c.index()] || self.degree(c) != self.degree(v) {
                continue;
            }
            let consistent = (0..v.0).all(|u| {
                let u = Gen(u);
                self.label(v, u) == self.label(c, image[u.index()])
            });
            if !consistent {
                continue;
            }
            used[c.index()] = true;
            image.push(c);
            self.extend_automorphism(image, used, out);
            image.pop();
            used[c.index()] = false;
        }
    }

    /// Returns `true` when the diagram is a simple path with at least one edge.
    pub fn is_path(&self) -> bool {
        let n = self.len();
        n >= 2
            && self.is_connected()
            && self.edges().len() == n - 1
            && self.gens().all(|g| self.degree(g) <= 2)
    }

    /// Edge labels of a path, read from the lexicographically least endpoint.
    pub fn path_labels(&self) -> Option<Vec<u32>> {
        if !self.is_path() {
            return None;
        }
        let start = self.gens().find(|&g| self.degree(g) == 1)?;
        let mut labels = Vec::new();
        let (mut prev, mut cur) = (None, start);
        loop {
            let next = self.neighbors(cur).into_iter().find(|&h| Some(h) != prev);
            match next {
                Some(h) => {
                    labels.push(self.label(cur, h)?);
                    prev = Some(cur);
                    cur = h;
                }
                None => break,
            }
        }
        Some(labels)
    }
}

impl fmt::Display for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub even: bool,
    pub large_type: bool,
    pub connected: bool,
    pub nvb: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub odd_edges: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub small_edges: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branching_vertices: Vec<String>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.even && self.large_type && self.connected && self.nvb
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.even {
            parts.push(format!("odd labels on {:?}", self.odd_edges));
        }
        if !self.large_type {
            parts.push(format!("labels below 4 on {:?}", self.small_edges));
        }
        if !self.connected {
            parts.push(format!("{} components", self.components.len()));
        }
        if !self.nvb {
            parts.push(format!("vertex branching at {:?}", self.branching_vertices));
        }
        if parts.is_empty() {
            "ok".into()
        } else {
            parts.join("; ")
        }
    }
}

/// A label-preserving permutation of the diagram's vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramAutomorphism(pub Vec<Gen>);

impl DiagramAutomorphism {
    pub fn identity(n: usize) -> Self {
        DiagramAutomorphism((0..n as u16).map(Gen).collect())
    }

    pub fn apply(&self, g: Gen) -> Gen {
        self.0[g.index()]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, g)| g.index() == i)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &DiagramAutomorphism) -> DiagramAutomorphism {
        DiagramAutomorphism(other.0.iter().map(|&g| self.apply(g)).collect())
    }

    pub fn inverse(&self) -> DiagramAutomorphism {
        let mut inv = vec![Gen(0); self.0.len()];
        for (i, &g) in self.0.iter().enumerate() {
            inv[g.index()] = Gen(i as u16);
        }
        DiagramAutomorphism(inv)
    }

    /// Reads a name map; unlisted vertices are fixed. Fails unless the result
    /// is a label-preserving bijection.
    pub fn from_names(d: &CoxeterDiagram, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut image: Vec<Gen> = d.gens().collect();
        for (k, v) in map {
            let a = d.gen(k).ok_or_else(|| Error::UnknownGenerator(k.clone()))?;
            let b = d.gen(v).ok_or_else(|| Error::UnknownGenerator(v.clone()))?;
            image[a.index()] = b;
        }
        let p = DiagramAutomorphism(image);
        let bijective = p.0.iter().collect::<BTreeSet<_>>().len() == p.0.len();
        let preserves = d
            .gens()
            .all(|a| d.gens().all(|b| d.label(a, b) == d.label(p.apply(a), p.apply(b))));
        if !bijective || !preserves {
            return Err(Error::InvalidLabel("vertex map is not a diagram automorphism".into()));
        }
        Ok(p)
    }

    pub fn to_names(&self, d: &CoxeterDiagram) -> BTreeMap<String, String> {
        d.gens()
            .map(|g| (d.name(g).to_owned(), d.name(self.apply(g)).to_owned()))
            .collect()
    }
}
