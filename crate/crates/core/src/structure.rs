//! Combinatorial skeleton of a diagram: junctions, regular circuits, units,
//! the unit graph, and the oriented spanning tree that carries labels.

use std::collections::{BTreeSet, VecDeque};

use crate::diagram::{CoxeterDiagram, Gen};
use crate::error::{Error, Result};
use crate::word::Word;

pub type Unit = Vec<Gen>;

/// Generators of the centralizer `C(J)` for `|J| ≤ 2`; empty otherwise.
pub fn centralizer_generators(d: &CoxeterDiagram, j: &[Gen]) -> Result<Vec<Word>> {
    if let Some(g) = j.iter().find(|g| g.index() >= d.len()) {
        return Err(Error::UnknownGenerator(format!("#{}", g.0)));
    }
    let mut j = j.to_vec();
    j.sort();
    j.dedup();
    match j[..] {
        [s] => {
            let mut out = vec![Word::letter(s)];
            out.extend(d.neighbors(s).into_iter().map(|t| side_factor(d, s, t)));
            Ok(out)
        }
        [a, b] => Ok(d
            .label(a, b)
            .map(|m| vec![Word::alternating(a, b, m as usize / 2)])
            .unwrap_or_default()),
        _ => Ok(Vec::new()),
    }
}

/// `(t s)^{m/2 - 1} t`, an involution commuting with `s`.
pub fn side_factor(d: &CoxeterDiagram, s: Gen, t: Gen) -> Word {
    let m = d.label(s, t).expect("side factor needs an edge") as usize;
    Word::alternating(t, s, m / 2 - 1).concat(&Word::letter(t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum JunctionKind {
    Vertex,
    Edge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Junction {
    pub kind: JunctionKind,
    pub vertices: Vec<Gen>,
    /// Components of `V \ J`, ordered by least vertex.
    pub sides: Vec<Vec<Gen>>,
}

impl Junction {
    pub fn side_of(&self, g: Gen) -> Option<usize> {
        self.sides.iter().position(|c| c.contains(&g))
    }
}

/// An edge `{s, t}` separates properly when at least two components of
/// `V \ {s, t}` attach to both endpoints; otherwise the separation is
/// inherited from a cut vertex.
fn is_edge_junction(d: &CoxeterDiagram, s: Gen, t: Gen) -> bool {
    let comps = d.components(&[s, t]);
    let attached = comps
        .iter()
        .filter(|c| {
            c.iter().any(|&g| d.adjacent(g, s)) && c.iter().any(|&g| d.adjacent(g, t))
        })
        .count();
    attached >= 2
}

/// Cut vertices first, then edge junctions, each in lexicographic order.
pub fn junctions(d: &CoxeterDiagram) -> Vec<Junction> {
    let mut out: Vec<Junction> = d
        .cut_vertices()
        .into_iter()
        .map(|s| Junction {
            kind: JunctionKind::Vertex,
            vertices: vec![s],
            sides: d.components(&[s]),
        })
        .collect();
    for (s, t, _) in d.edges() {
        if is_edge_junction(d, s, t) {
            out.push(Junction {
                kind: JunctionKind::Edge,
                vertices: vec![s, t],
                sides: d.components(&[s, t]),
            });
        }
    }
    out
}

fn is_junction_set(js: &[Junction], set: &[Gen]) -> bool {
    js.iter().any(|j| j.vertices == set)
}

/// Chordless cycles of length at least 3, each rotated to start at its least
/// vertex and oriented so the second vertex is smaller than the last.
pub fn regular_circuits(d: &CoxeterDiagram) -> Vec<Vec<Gen>> {
    let mut out = BTreeSet::new();
    for start in d.gens() {
        let mut path = vec![start];
        extend_induced(d, &mut path, &mut out);
    }
    out.into_iter().collect()
}

fn extend_induced(d: &CoxeterDiagram, path: &mut Vec<Gen>, out: &mut BTreeSet<Vec<Gen>>) {
    let start = path[0];
    let last = *path.last().unwrap();
    let k = path.len();
    for w in d.neighbors(last) {
        if w <= start || path.contains(&w) {
            continue;
        }
        let interior = if k >= 2 { &path[1..k - 1] } else { &[][..] };
        if interior.iter().any(|&p| d.adjacent(p, w)) {
            continue;
        }
        if k >= 2 && d.adjacent(start, w) {
            if path[1] < w {
                let mut c = path.clone();
                c.push(w);
                out.insert(c);
            }
            continue;
        }
        path.push(w);
        extend_induced(d, path, out);
        path.pop();
    }
}

/// Units from circuits already enumerated, in any order. Circuits are merged
/// whenever their intersection is non-empty and not a junction.
pub fn close_circuits(d: &CoxeterDiagram, circuits: &[Vec<Gen>]) -> Vec<Unit> {
    let js = junctions(d);
    let n = circuits.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for a in 0..n {
        for b in a + 1..n {
            let mut common: Vec<Gen> = circuits[a]
                .iter()
                .filter(|g| circuits[b].contains(g))
                .copied()
                .collect();
            common.sort();
            if !common.is_empty() && !is_junction_set(&js, &common) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut classes: Vec<BTreeSet<Gen>> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_of[r] == usize::MAX {
            root_of[r] = classes.len();
            classes.push(BTreeSet::new());
        }
        classes[root_of[r]].extend(circuits[i].iter().copied());
    }
    let mut units: BTreeSet<Unit> = classes.into_iter().map(|c| c.into_iter().collect()).collect();
    let snapshot: Vec<Unit> = units.iter().cloned().collect();
    units.retain(|u| {
        !snapshot
            .iter()
            .any(|v| v.len() > u.len() && u.iter().all(|g| v.contains(g)))
    });
    let covered: BTreeSet<Gen> = circuits.iter().flatten().copied().collect();
    for g in d.gens() {
        if !covered.contains(&g) {
            units.insert(vec![g]);
        }
    }
    units.into_iter().collect()
}

/// All units, sorted lexicographically as vertex lists.
pub fn units(d: &CoxeterDiagram) -> Vec<Unit> {
    close_circuits(d, &regular_circuits(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Adjacency {
    /// The units meet in this junction and lie on different sides of it.
    Junction(Vec<Gen>),
    /// The units are disjoint and joined by the single bridge `(s_a, s_b)`,
    /// with `s_a` in the first unit.
    Bridge(Gen, Gen),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitEdge {
    pub a: usize,
    pub b: usize,
    pub witness: Adjacency,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGraph {
    pub units: Vec<Unit>,
    pub edges: Vec<UnitEdge>,
}

impl UnitGraph {
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |e| {
            if e.a == u {
                Some(e.b)
            } else if e.b == u {
                Some(e.a)
            } else {
                None
            }
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.units.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.units.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Case type of an edge oriented `from -> to`.
    pub fn case_type(&self, e: &UnitEdge, from: usize) -> CaseType {
        let to = if e.a == from { e.b } else { e.a };
        let big_from = self.units[from].len() > 1;
        let big_to = self.units[to].len() > 1;
        match (&e.witness, big_from, big_to) {
            (Adjacency::Junction(j), _, _) if j.len() == 2 => CaseType::EdgeJunction,
            (Adjacency::Junction(_), _, _) => CaseType::VertexJunction,
            (Adjacency::Bridge(..), true, true) => CaseType::Bridge,
            (Adjacency::Bridge(..), true, false) => CaseType::IntoSingleton,
            (Adjacency::Bridge(..), false, true) => CaseType::FromSingleton,
            (Adjacency::Bridge(..), false, false) => CaseType::Singletons,
        }
    }
}

pub fn unit_graph(d: &CoxeterDiagram, units: &[Unit]) -> UnitGraph {
    let js = junctions(d);
    let bridges = d.bridges();
    let mut edges = Vec::new();
    for a in 0..units.len() {
        for b in a + 1..units.len() {
            let (ua, ub) = (&units[a], &units[b]);
            let common: Vec<Gen> = ua.iter().filter(|g| ub.contains(g)).copied().collect();
            if !common.is_empty() {
                let Some(j) = js.iter().find(|j| j.vertices == common) else {
                    continue;
                };
                let side = |u: &Unit| {
                    u.iter()
                        .find(|g| !common.contains(g))
                        .and_then(|&g| j.side_of(g))
                };
                if let (Some(x), Some(y)) = (side(ua), side(ub)) {
                    if x != y {
                        edges.push(UnitEdge {
                            a,
                            b,
                            witness: Adjacency::Junction(common),
                        });
                    }
                }
                continue;
            }
            let links: Vec<(Gen, Gen)> = ua
                .iter()
                .flat_map(|&s| ub.iter().map(move |&t| (s, t)))
                .filter(|&(s, t)| d.adjacent(s, t))
                .collect();
            if let [(s, t)] = links[..] {
                let key = if s < t { (s, t) } else { (t, s) };
                if bridges.contains(&key) {
                    edges.push(UnitEdge {
                        a,
                        b,
                        witness: Adjacency::Bridge(s, t),
                    });
                }
            }
        }
    }
    UnitGraph {
        units: units.to_vec(),
        edges,
    }
}

/// The six kinds of tree edge, numbered 1 through 6 in [`CaseType::number`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseType {
    EdgeJunction,
    VertexJunction,
    Bridge,
    IntoSingleton,
    FromSingleton,
    Singletons,
}

impl CaseType {
    pub fn number(self) -> u8 {
        match self {
            CaseType::EdgeJunction => 1,
            CaseType::VertexJunction => 2,
            CaseType::Bridge => 3,
            CaseType::IntoSingleton => 4,
            CaseType::FromSingleton => 5,
            CaseType::Singletons => 6,
        }
    }

    pub fn from_number(n: u8) -> Option<CaseType> {
        Some(match n {
            1 => CaseType::EdgeJunction,
            2 => CaseType::VertexJunction,
            3 => CaseType::Bridge,
            4 => CaseType::IntoSingleton,
            5 => CaseType::FromSingleton,
            6 => CaseType::Singletons,
            _ => return None,
        })
    }

    pub fn has_bridge(self) -> bool {
        self.number() >= 3
    }
}

/// A tree edge oriented away from the basepoint, with everything needed to
/// interpret its label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub from: usize,
    pub to: usize,
    pub case: CaseType,
    /// The shared junction for types 1 and 2.
    pub junction: Vec<Gen>,
    /// `(s_i, s_j, n)` for bridge types 3 to 6, `s_i` in the initial unit.
    pub bridge: Option<(Gen, Gen, u32)>,
    /// Vertex whose centralizer the `u` factors lie in, with admissible ids.
    pub u_pivot: Option<Gen>,
    pub u_ids: Vec<Gen>,
    pub v_pivot: Option<Gen>,
    pub v_ids: Vec<Gen>,
    /// Degree of `s_j` when the terminal unit is a singleton.
    pub terminal_degree: Option<usize>,
    /// The terminal singleton's only child edge ends at a leaf. A right
    /// factor `s_j` then commutes past the terminal unit into that leaf.
    pub leaf_child: bool,
    /// The exponent is restricted to `k < n/2`. Set on the first edge out of
    /// a singleton basepoint whose edges all end at leaves, where the base
    /// word is only defined up to a right factor of that generator.
    pub half_k: bool,
}

impl TreeEdge {
    /// Admissible `l` values for the bridge word.
    pub fn allowed_l(&self) -> &'static [u8] {
        match self.case {
            CaseType::Bridge => &[1, 2, 3, 4],
            CaseType::IntoSingleton if self.terminal_degree == Some(1) => &[1],
            CaseType::IntoSingleton if self.leaf_child => &[1, 4],
            CaseType::IntoSingleton => &[1, 2, 3, 4],
            CaseType::FromSingleton => &[1, 2],
            CaseType::Singletons if self.terminal_degree == Some(1) || self.leaf_child => &[1],
            CaseType::Singletons => &[1, 2],
            _ => &[],
        }
    }

    /// Admissible exponents `k` for a bridge of label `n`.
    pub fn allowed_k(&self, n: u32) -> Vec<u32> {
        let mut ks = crate::dihedral::coprime_residues(n);
        if self.half_k {
            ks.retain(|&k| 2 * k < n);
        }
        ks
    }

    /// `4a`/`6a` edges end at a leaf, where every `l` acts identically.
    pub fn ends_at_leaf(&self) -> bool {
        self.terminal_degree == Some(1)
    }

    pub fn subtype(&self) -> String {
        let n = self.case.number();
        match (self.case, self.terminal_degree) {
            (CaseType::IntoSingleton | CaseType::Singletons, Some(1)) => format!("{n}a"),
            (CaseType::IntoSingleton | CaseType::Singletons, _) => format!("{n}b"),
            _ => n.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedTree {
    pub units: Vec<Unit>,
    pub basepoint: usize,
    /// Breadth-first from the basepoint, so parents precede children.
    pub edges: Vec<TreeEdge>,
    /// Index into `edges` of the edge entering each unit.
    pub parent_edge: Vec<Option<usize>>,
}

impl OrientedTree {
    /// Tree edges from the basepoint down to `u`, in order.
    pub fn path_from_root(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = u;
        while let Some(e) = self.parent_edge[cur] {
            out.push(e);
            cur = self.edges[e].from;
        }
        out.reverse();
        out
    }

    /// The tree path from `a` to `b` as `(edge, forward)` steps.
    pub fn path(&self, a: usize, b: usize) -> Vec<(usize, bool)> {
        let pa = self.path_from_root(a);
        let pb = self.path_from_root(b);
        let common = pa.iter().zip(&pb).take_while(|(x, y)| x == y).count();
        let mut out: Vec<(usize, bool)> = pa[common..].iter().rev().map(|&e| (e, false)).collect();
        out.extend(pb[common..].iter().map(|&e| (e, true)));
        out
    }

    pub fn unit_containing(&self, vertices: &[Gen]) -> Option<usize> {
        self.units
            .iter()
            .position(|u| vertices.iter().all(|g| u.contains(g)))
    }

    /// Indices of the edges leaving `u`.
    pub fn children(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.from == u)
            .map(|(i, _)| i)
    }
}

/// `true` when the unit-graph edge joins units lying in different
/// components of `V \ {s}`, both non-empty after removing `s`.
fn crosses(comps_without_s: &[Vec<Gen>], s: Gen, a: &Unit, b: &Unit) -> bool {
    let side = |u: &Unit| {
        u.iter()
            .find(|&&g| g != s)
            .and_then(|g| comps_without_s.iter().position(|c| c.contains(g)))
    };
    match (side(a), side(b)) {
        (Some(x), Some(y)) => x != y,
        _ => false,
    }
}

/// Spanning tree in which each cut vertex is crossed by exactly one edge,
/// oriented away from the basepoint.
pub fn modified_spanning_tree(d: &CoxeterDiagram, g: &UnitGraph) -> Result<OrientedTree> {
    let n = g.units.len();
    if n == 0 {
        return Err(Error::InvalidDiagram("empty diagram".into()));
    }
    let cuts: Vec<(Gen, Vec<Vec<Gen>>)> = d
        .cut_vertices()
        .into_iter()
        .map(|s| (s, d.components(&[s])))
        .collect();
    let crossing = |e: &UnitEdge| -> Vec<Gen> {
        cuts.iter()
            .filter(|(s, comps)| crosses(comps, *s, &g.units[e.a], &g.units[e.b]))
            .map(|(s, _)| *s)
            .collect()
    };

    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.sort_by_key(|&i| (g.edges[i].a, g.edges[i].b));
    let mut comp: Vec<usize> = (0..n).collect();
    let mut crossed: BTreeSet<Gen> = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        let e = &g.edges[i];
        let (ca, cb) = (comp[e.a], comp[e.b]);
        if ca == cb {
            continue;
        }
        let cs = crossing(e);
        if cs.iter().any(|s| crossed.contains(s)) {
            continue;
        }
        crossed.extend(cs);
        for c in comp.iter_mut() {
            if *c == cb {
                *c = ca;
            }
        }
        chosen.push(i);
    }
    if chosen.len() + 1 != n {
        return Err(Error::InvalidDiagram(
            "unit graph has no spanning tree with one crossing per cut vertex".into(),
        ));
    }
    for (s, _) in &cuts {
        let count = chosen
            .iter()
            .filter(|&&i| crossing(&g.edges[i]).contains(s))
            .count();
        let any = g.edges.iter().any(|e| crossing(e).contains(s));
        if any && count != 1 {
            return Err(Error::InvalidDiagram(format!(
                "cut vertex {} crossed {count} times",
                d.name(*s)
            )));
        }
    }

    let basepoint = choose_basepoint(d, &g.units);
    let mut parent_edge = vec![None; n];
    let mut seen = vec![false; n];
    seen[basepoint] = true;
    let mut queue = VecDeque::from([basepoint]);
    let mut edges = Vec::new();
    while let Some(u) = queue.pop_front() {
        let mut next: Vec<(usize, usize)> = chosen
            .iter()
            .filter_map(|&i| {
                let e = &g.edges[i];
                let v = if e.a == u {
                    e.b
                } else if e.b == u {
                    e.a
                } else {
                    return None;
                };
                (!seen[v]).then_some((v, i))
            })
            .collect();
        next.sort();
        for (v, i) in next {
            seen[v] = true;
            parent_edge[v] = Some(edges.len());
            edges.push(tree_edge(d, g, &g.edges[i], u));
            queue.push_back(v);
        }
    }
    for i in 0..edges.len() {
        if edges[i].terminal_degree != Some(2) {
            continue;
        }
        let to = edges[i].to;
        let mut kids = edges.iter().filter(|c| c.from == to);
        if let (Some(c), None) = (kids.next(), kids.next()) {
            edges[i].leaf_child = c.ends_at_leaf();
        }
    }
    if g.units[basepoint].len() == 1 && edges.iter().filter(|e| e.from == basepoint).all(TreeEdge::ends_at_leaf) {
        if let Some(e) = edges.iter_mut().find(|e| e.from == basepoint) {
            e.half_k = true;
        }
    }
    Ok(OrientedTree {
        units: g.units.clone(),
        basepoint,
        edges,
        parent_edge,
    })
}

/// The least unit that is neither a leaf singleton nor a singleton between
/// two non-leaves. The second exclusion keeps every singleton's label
/// carries flowing into a single parent. A lone edge has no such unit and
/// falls back to the least unit.
pub fn choose_basepoint(d: &CoxeterDiagram, units: &[Unit]) -> usize {
    let admissible = |u: &Unit| match u[..] {
        [s] => {
            let deg = d.degree(s);
            deg >= 2 && d.neighbors(s).iter().any(|&t| d.degree(t) == 1)
                || deg == 0
        }
        _ => true,
    };
    units.iter().position(admissible).unwrap_or(0)
}

fn tree_edge(d: &CoxeterDiagram, g: &UnitGraph, e: &UnitEdge, from: usize) -> TreeEdge {
    let to = if e.a == from { e.b } else { e.a };
    let case = g.case_type(e, from);
    let (ui, uj) = (&g.units[from], &g.units[to]);
    let mut t = TreeEdge {
        from,
        to,
        case,
        junction: Vec::new(),
        bridge: None,
        u_pivot: None,
        u_ids: Vec::new(),
        v_pivot: None,
        v_ids: Vec::new(),
        terminal_degree: None,
        leaf_child: false,
        half_k: false,
    };
    match &e.witness {
        Adjacency::Junction(j) => {
            t.junction = j.clone();
            if let [s] = j[..] {
                let comps = d.components(&[s]);
                let side_of = |u: &Unit| {
                    u.iter()
                        .find(|&&x| x != s)
                        .and_then(|x| comps.iter().position(|c| c.contains(x)))
                };
                let (si, sj) = (side_of(ui), side_of(uj));
                let nb = d.neighbors(s);
                t.u_pivot = Some(s);
                t.v_pivot = Some(s);
                t.u_ids = nb.iter().copied().filter(|x| si.is_some_and(|c| comps[c].contains(x))).collect();
                t.v_ids = nb.iter().copied().filter(|x| sj.is_some_and(|c| comps[c].contains(x))).collect();
            }
        }
        Adjacency::Bridge(x, y) => {
            let (si, sj) = if ui.contains(x) { (*x, *y) } else { (*y, *x) };
            let n = d.label(si, sj).expect("bridge is an edge");
            t.bridge = Some((si, sj, n));
            if ui.len() > 1 {
                t.u_pivot = Some(si);
                t.u_ids = d.neighbors(si).into_iter().filter(|&x| x != sj).collect();
            }
            if uj.len() > 1 {
                t.v_pivot = Some(sj);
                t.v_ids = d.neighbors(sj).into_iter().filter(|&x| x != si).collect();
            } else {
                t.terminal_degree = Some(d.degree(sj));
            }
        }
    }
    t
}

/// Everything derived from the diagram alone.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub junctions: Vec<Junction>,
    pub circuits: Vec<Vec<Gen>>,
    pub graph: UnitGraph,
    pub tree: OrientedTree,
}

impl Skeleton {
    pub fn new(d: &CoxeterDiagram) -> Result<Skeleton> {
        d.require_admissible()?;
        let circuits = regular_circuits(d);
        let us = close_circuits(d, &circuits);
        let graph = unit_graph(d, &us);
        if !graph.is_connected() {
            return Err(Error::InvalidDiagram("unit graph is disconnected".into()));
        }
        let tree = modified_spanning_tree(d, &graph)?;
        Ok(Skeleton {
            junctions: junctions(d),
            circuits,
            graph,
            tree,
        })
    }

    pub fn units(&self) -> &[Unit] {
        &self.graph.units
    }

    pub fn to_json(&self, d: &CoxeterDiagram) -> serde_json::Value {
        use serde_json::json;
        let names = |v: &[Gen]| d.names_of(v);
        let units = &self.graph.units;
        json!({
            "units": units.iter().map(|u| names(u)).collect::<Vec<_>>(),
            "junctions": self.junctions.iter().map(|j| json!({
                "kind": match j.kind { JunctionKind::Vertex => "vertex", JunctionKind::Edge => "edge" },
                "vertices": names(&j.vertices),
                "sides": j.sides.iter().map(|s| names(s)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "circuits": self.circuits.iter().map(|c| names(c)).collect::<Vec<_>>(),
            "unit_graph": self.graph.edges.iter().map(|e| {
                let from = if units[e.a].len() >= units[e.b].len() { e.a } else { e.b };
                let witness = match &e.witness {
                    Adjacency::Junction(j) => json!({"junction": names(j)}),
                    Adjacency::Bridge(s, t) => json!({"bridge": [d.name(*s), d.name(*t)]}),
                };
                json!({
                    "units": [names(&units[e.a]), names(&units[e.b])],
                    "witness": witness,
                    "type": self.graph.case_type(e, from).number(),
                })
            }).collect::<Vec<_>>(),
            "tree": {
                "basepoint": names(&units[self.tree.basepoint]),
                "edges": self.tree.edges.iter().map(|e| json!({
                    "from": names(&units[e.from]),
                    "to": names(&units[e.to]),
                    "type": e.subtype(),
                    "bridge": e.bridge.map(|(s, t, n)| json!([d.name(s), d.name(t), n])),
                    "junction": names(&e.junction),
                    "u_ids": names(&e.u_ids),
                    "v_ids": names(&e.v_ids),
                })).collect::<Vec<_>>(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;

    fn parse(t: &str) -> CoxeterDiagram {
        CoxeterDiagram::parse(t).unwrap()
    }

    fn triangle_pendant() -> CoxeterDiagram {
        parse("edge a b 4\nedge b c 4\nedge a c 4\nedge a d 4")
    }

    fn two_triangles() -> CoxeterDiagram {
        parse("edge a b 4\nedge a c 4\nedge b c 4\nedge b d 4\nedge c d 4")
    }

    fn names(d: &CoxeterDiagram, v: &[Gen]) -> Vec<String> {
        d.names_of(v)
    }

    #[test]
    fn centralizers() {
        let d = parse("edge a b 4\nedge b c 4\nedge a c 4");
        let a = d.gen("a").unwrap();
        let gens = centralizer_generators(&d, &[a]).unwrap();
        let rendered: Vec<String> = gens.iter().map(|w| w.render(&d)).collect();
        assert_eq!(rendered, ["a", "b a b", "c a c"]);
        let b = d.gen("b").unwrap();
        let pair = centralizer_generators(&d, &[a, b]).unwrap();
        assert_eq!(pair.len(), 1);
        assert_eq!(pair[0].render(&d), "a b a b");

        let sq = parse("edge a b 4\nedge b c 4\nedge c d 4\nedge d a 4");
        let three = sq.gens_of(&["a", "b", "c"]).unwrap();
        assert!(centralizer_generators(&sq, &three).unwrap().is_empty());
        assert!(centralizer_generators(&sq, &[Gen(9)]).is_err());
    }

    #[test]
    fn centralizer_generators_commute() {
        for d in [triangle_pendant(), two_triangles(), parse("edge a b 6\nedge b c 8")] {
            let o = Oracle::new(&d);
            let mut sets: Vec<Vec<Gen>> = d.gens().map(|g| vec![g]).collect();
            sets.extend(d.edges().into_iter().map(|(a, b, _)| vec![a, b]));
            for j in sets {
                for w in centralizer_generators(&d, &j).unwrap() {
                    for &s in &j {
                        assert!(o.commute(&w, &Word::letter(s)).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn junction_examples() {
        let d = triangle_pendant();
        let js = junctions(&d);
        assert_eq!(js.len(), 1);
        assert_eq!(js[0].kind, JunctionKind::Vertex);
        assert_eq!(names(&d, &js[0].vertices), ["a"]);
        let sides: Vec<_> = js[0].sides.iter().map(|s| names(&d, s)).collect();
        assert_eq!(sides, vec![vec!["b", "c"], vec!["d"]]);

        let d = two_triangles();
        let js = junctions(&d);
        assert_eq!(js.len(), 1);
        assert_eq!(js[0].kind, JunctionKind::Edge);
        assert_eq!(names(&d, &js[0].vertices), ["b", "c"]);
        let sides: Vec<_> = js[0].sides.iter().map(|s| names(&d, s)).collect();
        assert_eq!(sides, vec![vec!["a"], vec!["d"]]);

        assert!(junctions(&parse("edge a b 4\nedge b c 4\nedge a c 4")).is_empty());
    }

    #[test]
    fn junctions_disconnect() {
        for d in [triangle_pendant(), two_triangles(), parse("edge a b 4\nedge b c 4")] {
            for j in junctions(&d) {
                assert!(d.components(&j.vertices).len() >= 2);
                if j.kind == JunctionKind::Edge {
                    assert!(d.adjacent(j.vertices[0], j.vertices[1]));
                } else {
                    assert_eq!(j.sides.len(), 2);
                }
            }
        }
    }

    #[test]
    fn circuit_examples() {
        let tri = parse("edge a b 4\nedge b c 4\nedge a c 4");
        assert_eq!(regular_circuits(&tri).len(), 1);
        let d = two_triangles();
        let cs: Vec<_> = regular_circuits(&d).iter().map(|c| names(&d, c)).collect();
        assert_eq!(cs, vec![vec!["a", "b", "c"], vec!["b", "c", "d"]]);
        assert!(regular_circuits(&parse("edge a b 4\nedge b c 6")).is_empty());
        let sq = parse("edge a b 4\nedge b c 4\nedge c d 4\nedge d a 4");
        let cs: Vec<_> = regular_circuits(&sq).iter().map(|c| names(&sq, c)).collect();
        assert_eq!(cs, vec![vec!["a", "b", "c", "d"]]);
    }

    /// Every chordless cycle, found by checking all vertex subsets.
    fn brute_circuits(d: &CoxeterDiagram) -> BTreeSet<Vec<Gen>> {
        let n = d.len();
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << n) {
            let vs: Vec<Gen> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| Gen(i as u16)).collect();
            if vs.len() < 3 {
                continue;
            }
            let cycle_like = vs
                .iter()
                .all(|&v| vs.iter().filter(|&&w| d.adjacent(v, w)).count() == 2);
            if cycle_like && d.induced(&vs).is_connected() {
                let mut s = vs.clone();
                s.sort();
                out.insert(s);
            }
        }
        out
    }

    #[test]
    fn circuits_match_subset_search() {
        let cases = [
            two_triangles(),
            triangle_pendant(),
            parse("edge a b 4\nedge b c 4\nedge c d 4\nedge d a 4\nedge a c 4"),
            parse("edge a b 4\nedge b c 4\nedge c d 4\nedge d e 4\nedge e a 4\nedge b e 6"),
            parse("edge a b 4\nedge b c 4\nedge c a 4\nedge c d 4\nedge d e 4\nedge e c 4"),
        ];
        for d in cases {
            let found: BTreeSet<Vec<Gen>> = regular_circuits(&d)
                .into_iter()
                .map(|mut c| {
                    c.sort();
                    c
                })
                .collect();
            assert_eq!(found, brute_circuits(&d));
        }
    }

    #[test]
    fn unit_examples() {
        let d = two_triangles();
        let us: Vec<_> = units(&d).iter().map(|u| names(&d, u)).collect();
        assert_eq!(us, vec![vec!["a", "b", "c"], vec!["b", "c", "d"]]);
        let d = triangle_pendant();
        let us: Vec<_> = units(&d).iter().map(|u| names(&d, u)).collect();
        assert_eq!(us, vec![vec!["a", "b", "c"], vec!["d"]]);
        let d = parse("edge a b 4\nedge b c 4");
        let us: Vec<_> = units(&d).iter().map(|u| names(&d, u)).collect();
        assert_eq!(us, vec![vec!["a"], vec!["b"], vec!["c"]]);
    }

    #[test]
    fn unit_graph_examples() {
        let d = two_triangles();
        let g = unit_graph(&d, &units(&d));
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.case_type(&g.edges[0], 0).number(), 1);

        let d = triangle_pendant();
        let g = unit_graph(&d, &units(&d));
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.case_type(&g.edges[0], 0).number(), 4);

        let d = parse("edge a b 4\nedge b c 4");
        let g = unit_graph(&d, &units(&d));
        let pairs: Vec<_> = g.edges.iter().map(|e| (e.a, e.b)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
        for e in &g.edges {
            assert_eq!(g.case_type(e, e.a).number(), 6);
        }
    }

    #[test]
    fn tree_examples() {
        let d = parse("edge a b 4\nedge b c 4");
        let s = Skeleton::new(&d).unwrap();
        assert_eq!(names(&d, &s.units()[s.tree.basepoint]), ["b"]);
        assert_eq!(s.tree.edges.len(), 2);
        for e in &s.tree.edges {
            assert_eq!(e.from, s.tree.basepoint);
            assert_eq!(e.subtype(), "6a");
        }

        let d = two_triangles();
        let s = Skeleton::new(&d).unwrap();
        assert_eq!(names(&d, &s.units()[s.tree.basepoint]), ["a", "b", "c"]);
        assert_eq!(s.tree.edges.len(), 1);

        let d = triangle_pendant();
        let s = Skeleton::new(&d).unwrap();
        assert_eq!(names(&d, &s.units()[s.tree.basepoint]), ["a", "b", "c"]);
        let e = &s.tree.edges[0];
        assert_eq!(names(&d, &s.units()[e.to]), ["d"]);
        assert_eq!(e.subtype(), "4a");
        assert_eq!(names(&d, &e.u_ids), ["b", "c"]);
    }

    #[test]
    fn basepoint_skips_inner_singletons() {
        // x - y - a - z - w: `a` sits between two non-leaves.
        let d = parse("edge x y 4\nedge y a 4\nedge a z 4\nedge z w 4");
        let s = Skeleton::new(&d).unwrap();
        let base = &s.units()[s.tree.basepoint];
        assert_eq!(names(&d, base), ["y"]);
    }

    #[test]
    fn edge_data_for_cut_and_bridge() {
        // Two triangles joined at `c`, and a bridge to a third triangle.
        let d = parse(
            "edge a b 4\nedge b c 4\nedge a c 4\nedge c d 4\nedge d e 4\nedge c e 4\n\
             edge e f 6\nedge f g 4\nedge g h 4\nedge f h 4",
        );
        let s = Skeleton::new(&d).unwrap();
        let kinds: Vec<String> = s.tree.edges.iter().map(|e| e.subtype()).collect();
        assert_eq!(kinds, ["2", "3"]);
        let cut = &s.tree.edges[0];
        assert_eq!(names(&d, &cut.junction), ["c"]);
        assert_eq!(names(&d, &cut.u_ids), ["a", "b"]);
        assert_eq!(names(&d, &cut.v_ids), ["d", "e"]);
        let br = &s.tree.edges[1];
        let (si, sj, n) = br.bridge.unwrap();
        assert_eq!((d.name(si), d.name(sj), n), ("e", "f", 6));
        assert_eq!(names(&d, &br.u_ids), ["c", "d"]);
        assert_eq!(names(&d, &br.v_ids), ["g", "h"]);
    }

    /// The closure as a sequential process: grow from each circuit, always
    /// adding a circuit whose intersection with the current set is non-empty
    /// and not a junction.
    fn sequential_closure(d: &CoxeterDiagram, circuits: &[Vec<Gen>]) -> Vec<Unit> {
        let js = junctions(d);
        let mut found: BTreeSet<Unit> = BTreeSet::new();
        for c in circuits {
            let mut cur: BTreeSet<Gen> = c.iter().copied().collect();
            loop {
                let next = circuits.iter().find(|k| {
                    if k.iter().all(|g| cur.contains(g)) {
                        return false;
                    }
                    let common: Vec<Gen> = k.iter().filter(|g| cur.contains(g)).copied().collect();
                    let mut common = common;
                    common.sort();
                    !common.is_empty() && !is_junction_set(&js, &common)
                });
                match next {
                    Some(k) => cur.extend(k.iter().copied()),
                    None => break,
                }
            }
            found.insert(cur.into_iter().collect());
        }
        let all: Vec<Unit> = found.iter().cloned().collect();
        found.retain(|u| !all.iter().any(|v| v.len() > u.len() && u.iter().all(|g| v.contains(g))));
        let covered: BTreeSet<Gen> = circuits.iter().flatten().copied().collect();
        for g in d.gens() {
            if !covered.contains(&g) {
                found.insert(vec![g]);
            }
        }
        found.into_iter().collect()
    }

    #[test]
    fn closure_is_confluent() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let cases = [
            two_triangles(),
            triangle_pendant(),
            parse("edge a b 4\nedge b c 4\nedge c a 4\nedge c d 4\nedge d e 4\nedge e c 4"),
            parse("edge a b 4\nedge b c 4\nedge c d 4\nedge d a 4\nedge a c 4\nedge c e 4\nedge e f 4\nedge f c 4"),
            parse("edge a b 4\nedge b c 4\nedge c d 4\nedge d e 4\nedge e a 4\nedge b e 6\nedge c e 4"),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in cases {
            let mut cs = regular_circuits(&d);
            let reference = units(&d);
            let covered: BTreeSet<Gen> = reference.iter().flatten().copied().collect();
            assert_eq!(covered.len(), d.len());
            for _ in 0..10 {
                cs.shuffle(&mut rng);
                assert_eq!(close_circuits(&d, &cs), reference);
                assert_eq!(sequential_closure(&d, &cs), reference);
            }
        }
    }

    #[test]
    fn tree_has_one_crossing_per_cut_vertex() {
        let cases = [
            triangle_pendant(),
            parse("edge a b 4\nedge b c 4\nedge c a 4\nedge c d 4\nedge d e 4\nedge e c 4"),
            parse("edge a b 4\nedge b c 4\nedge c d 4\nedge d e 6"),
            parse(
                "edge a b 4\nedge b c 4\nedge a c 4\nedge c d 4\nedge d e 4\nedge c e 4\n\
                 edge e f 6\nedge f g 4\nedge g h 4\nedge f h 4",
            ),
        ];
        for d in cases {
            let s = Skeleton::new(&d).unwrap();
            assert!(s.graph.is_connected());
            assert_eq!(s.tree.edges.len() + 1, s.units().len());
            let reached = s.tree.parent_edge.iter().filter(|p| p.is_some()).count();
            assert_eq!(reached + 1, s.units().len());
            for c in d.cut_vertices() {
                let comps = d.components(&[c]);
                let count = s
                    .tree
                    .edges
                    .iter()
                    .filter(|e| crosses(&comps, c, &s.units()[e.from], &s.units()[e.to]))
                    .count();
                let any = s
                    .graph
                    .edges
                    .iter()
                    .any(|e| crosses(&comps, c, &s.units()[e.a], &s.units()[e.b]));
                assert_eq!(count, usize::from(any));
            }
        }
    }
}
