//! Automorphisms in two forms: labelings of the oriented unit tree, and
//! conjugator families (a diagram permutation plus one conjugating word per
//! unit). The family form evaluated through the word oracle is the ground
//! truth; labeling algebra is checked against it.

use serde_json::{json, Value};

use crate::diagram::{CoxeterDiagram, DiagramAutomorphism, Gen};
use crate::dihedral::{Dihedral, XWord};
use crate::error::{Error, Result};
use crate::oracle::{relators, Oracle, DEFAULT_BUDGET};
use crate::structure::{side_factor, CaseType, Skeleton, TreeEdge};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    /// Type 1: `1` or the central element of the junction's dihedral group.
    Junction { twist: bool },
    /// Type 2: `ε u v` around a shared cut vertex.
    Cut {
        epsilon: bool,
        u: Vec<Gen>,
        v: Vec<Gen>,
    },
    /// Types 3 to 6: `u x v` across a bridge. `u`, `v` are empty where the
    /// edge type has no such factor.
    Bridge { u: Vec<Gen>, x: XWord, v: Vec<Gen> },
}

/// Base word plus one label per tree edge, indexed like the tree's edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutLabeling {
    pub base: Word,
    pub labels: Vec<EdgeLabel>,
}

/// `s ↦ w_{U(π s)} π(s) w_{U(π s)}⁻¹`, with `U(g)` the least unit holding `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatorFamily {
    pub pi: DiagramAutomorphism,
    pub words: Vec<Word>,
}

fn reduce_ids(ids: &[Gen]) -> Vec<Gen> {
    Word(ids.to_vec()).free_reduce().0
}

fn reversed(ids: &[Gen]) -> Vec<Gen> {
    ids.iter().rev().copied().collect()
}

/// Sequences over `ids` with no two equal neighbours, shortest first. With at
/// most one id the set is finite and `bound` is ignored.
pub fn reduced_sequences(ids: &[Gen], bound: usize) -> Vec<Vec<Gen>> {
    let bound = if ids.len() <= 1 { ids.len() } else { bound };
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for seq in &layer {
            for &t in ids {
                if seq.last() != Some(&t) {
                    let mut s: Vec<Gen> = seq.clone();
                    s.push(t);
                    next.push(s);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub struct AutGroup<'d> {
    d: &'d CoxeterDiagram,
    skeleton: Skeleton,
    oracle: Oracle<'d>,
    unit_of: Vec<usize>,
}

impl<'d> AutGroup<'d> {
    pub fn new(d: &'d CoxeterDiagram) -> Result<Self> {
        Self::with_budget(d, DEFAULT_BUDGET)
    }

    pub fn with_budget(d: &'d CoxeterDiagram, budget: usize) -> Result<Self> {
        let skeleton = Skeleton::new(d)?;
        let unit_of = d
            .gens()
            .map(|g| {
                skeleton
                    .units()
                    .iter()
                    .position(|u| u.contains(&g))
                    .expect("units cover the diagram")
            })
            .collect();
        Ok(AutGroup {
            d,
            skeleton,
            oracle: Oracle::with_budget(d, budget),
            unit_of,
        })
    }

    pub fn diagram(&self) -> &'d CoxeterDiagram {
        self.d
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn oracle(&self) -> &Oracle<'d> {
        &self.oracle
    }

    pub fn tree_edges(&self) -> &[TreeEdge] {
        &self.skeleton.tree.edges
    }

    pub fn unit_of(&self, g: Gen) -> usize {
        self.unit_of[g.index()]
    }

    pub fn identity_label(&self, e: &TreeEdge) -> EdgeLabel {
        match e.case {
            CaseType::EdgeJunction => EdgeLabel::Junction { twist: false },
            CaseType::VertexJunction => EdgeLabel::Cut {
                epsilon: false,
                u: Vec::new(),
                v: Vec::new(),
            },
            _ => {
                let (si, sj, n) = e.bridge.expect("bridge edge");
                EdgeLabel::Bridge {
                    u: Vec::new(),
                    x: XWord::identity(si, sj, n),
                    v: Vec::new(),
                }
            }
        }
    }

    pub fn identity(&self) -> AutLabeling {
        self.inner(Word::empty())
    }

    /// Conjugation by `w`.
    pub fn inner(&self, w: Word) -> AutLabeling {
        AutLabeling {
            base: w,
            labels: self.tree_edges().iter().map(|e| self.identity_label(e)).collect(),
        }
    }

    /// Checks the shape and ranges of every label against its edge.
    pub fn validate(&self, a: &AutLabeling) -> Result<()> {
        let edges = self.tree_edges();
        if a.labels.len() != edges.len() {
            return Err(Error::InvalidLabel(format!(
                "expected {} edge labels, found {}",
                edges.len(),
                a.labels.len()
            )));
        }
        if !a.base.uses_only(&self.d.gens().collect::<Vec<_>>()) {
            return Err(Error::InvalidLabel("base word uses unknown generators".into()));
        }
        for (i, (e, l)) in edges.iter().zip(&a.labels).enumerate() {
            let bad = |m: &str| Err(Error::InvalidLabel(format!("edge {i}: {m}")));
            let ids_ok = |ids: &[Gen], allowed: &[Gen]| {
                ids.iter().all(|t| allowed.contains(t)) && ids.windows(2).all(|p| p[0] != p[1])
            };
            match (e.case, l) {
                (CaseType::EdgeJunction, EdgeLabel::Junction { .. }) => {}
                (CaseType::VertexJunction, EdgeLabel::Cut { u, v, .. }) => {
                    if !ids_ok(u, &e.u_ids) || !ids_ok(v, &e.v_ids) {
                        return bad("factor ids outside the admissible sides");
                    }
                }
                (c, EdgeLabel::Bridge { u, x, v }) if c.has_bridge() => {
                    let (si, sj, n) = e.bridge.expect("bridge edge");
                    if (x.si, x.sj, x.n) != (si, sj, n) {
                        return bad("bridge word belongs to another edge");
                    }
                    if !x.is_valid() {
                        return bad("exponent must be a unit modulo the label");
                    }
                    if !e.allowed_l().contains(&x.l) {
                        return bad("index l not allowed for this edge type");
                    }
                    if e.half_k && 2 * x.k > n {
                        return bad("exponent must lie below n/2 on this edge");
                    }
                    if !ids_ok(u, &e.u_ids) || !ids_ok(v, &e.v_ids) {
                        return bad("factor ids outside the admissible sides");
                    }
                }
                _ => return bad("label kind does not match the edge type"),
            }
        }
        Ok(())
    }

    fn factors(&self, pivot: Option<Gen>, ids: &[Gen]) -> Word {
        match pivot {
            Some(s) => Word::product(ids.iter().map(|&t| side_factor(self.d, s, t)).collect::<Vec<_>>().iter()),
            None => Word::empty(),
        }
    }

    /// The word `w_i⁻¹ w_j` encoded by a label on the given edge.
    pub fn expand_label(&self, edge: usize, label: &EdgeLabel) -> Word {
        let e = &self.tree_edges()[edge];
        match label {
            EdgeLabel::Junction { twist } => {
                if *twist {
                    let (a, b) = (e.junction[0], e.junction[1]);
                    let m = self.d.label(a, b).expect("junction is an edge") as usize;
                    Word::alternating(a, b, m / 2)
                } else {
                    Word::empty()
                }
            }
            EdgeLabel::Cut { epsilon, u, v } => {
                let s = e.junction[0];
                let mut w = if *epsilon { Word::letter(s) } else { Word::empty() };
                w = w.concat(&self.factors(Some(s), u));
                w.concat(&self.factors(Some(s), v))
            }
            EdgeLabel::Bridge { u, x, v } => self
                .factors(e.u_pivot, u)
                .concat(&x.word())
                .concat(&self.factors(e.v_pivot, v)),
        }
    }

    /// Unreduced conjugating word for every unit.
    pub fn conjugators(&self, a: &AutLabeling) -> Vec<Word> {
        let tree = &self.skeleton.tree;
        let mut out = vec![Word::empty(); tree.units.len()];
        out[tree.basepoint] = a.base.clone();
        for (i, e) in tree.edges.iter().enumerate() {
            out[e.to] = out[e.from].concat(&self.expand_label(i, &a.labels[i]));
        }
        out
    }

    pub fn conjugator_for_unit(&self, a: &AutLabeling, unit: usize) -> Word {
        let tree = &self.skeleton.tree;
        let mut w = a.base.clone();
        for e in tree.path_from_root(unit) {
            w = w.concat(&self.expand_label(e, &a.labels[e]));
        }
        w
    }

    fn image_with(&self, conj: &[Word], w: &Word) -> Word {
        let mut out = Vec::new();
        for &g in w.letters() {
            let c = &conj[self.unit_of(g)];
            out.extend_from_slice(c.letters());
            out.push(g);
            out.extend(c.letters().iter().rev());
        }
        Word(out)
    }

    pub fn apply_unreduced(&self, a: &AutLabeling, w: &Word) -> Word {
        self.image_with(&self.conjugators(a), w)
    }

    pub fn apply(&self, a: &AutLabeling, w: &Word) -> Result<Word> {
        self.oracle.reduce(&self.apply_unreduced(a, w))
    }

    /// Reduced images of all generators.
    pub fn images(&self, a: &AutLabeling) -> Result<Vec<Word>> {
        let conj = self.conjugators(a);
        self.d
            .gens()
            .map(|g| self.oracle.reduce(&self.image_with(&conj, &Word::letter(g))))
            .collect()
    }

    /// Every unit holding a generator conjugates it to the same element.
    pub fn is_well_defined(&self, a: &AutLabeling) -> Result<bool> {
        let conj = self.conjugators(a);
        for g in self.d.gens() {
            let first = conj[self.unit_of(g)].conjugate(&Word::letter(g));
            for (i, u) in self.skeleton.units().iter().enumerate() {
                if u.contains(&g) && !self.oracle.equal(&conj[i].conjugate(&Word::letter(g)), &first)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_homomorphism(&self, a: &AutLabeling) -> Result<bool> {
        let conj = self.conjugators(a);
        for r in relators(self.d).all() {
            if !self.oracle.is_identity(&self.image_with(&conj, r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equal_pointwise(&self, a: &AutLabeling, b: &AutLabeling) -> Result<bool> {
        let (ca, cb) = (self.conjugators(a), self.conjugators(b));
        for g in self.d.gens() {
            let w = Word::letter(g);
            if !self.oracle.equal(&self.image_with(&ca, &w), &self.image_with(&cb, &w))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Ids `t''` of twisted junctions `{s, t''}` met on the tree path from
    /// `from` to a unit holding both `s` and `t`, nearest first.
    fn twist_ids(&self, outer: &AutLabeling, from: usize, s: Gen, t: Gen) -> Result<Vec<Gen>> {
        let tree = &self.skeleton.tree;
        let path = (0..tree.units.len())
            .filter(|&i| tree.units[i].contains(&s) && tree.units[i].contains(&t))
            .map(|i| tree.path(from, i))
            .min_by_key(|p| p.len())
            .ok_or_else(|| {
                Error::Canonicalization(format!(
                    "no unit holds the edge {}-{}",
                    self.d.name(s),
                    self.d.name(t)
                ))
            })?;
        let mut out = Vec::new();
        for (e, _) in path {
            let te = &tree.edges[e];
            match (&outer.labels[e], te.case) {
                (EdgeLabel::Junction { twist }, CaseType::EdgeJunction) => {
                    if !*twist {
                        continue;
                    }
                    if !te.junction.contains(&s) {
                        return Err(Error::Canonicalization(format!(
                            "twisted junction off the pivot {}",
                            self.d.name(s)
                        )));
                    }
                    out.extend(te.junction.iter().copied().filter(|&g| g != s));
                }
                _ => {
                    return Err(Error::Canonicalization(format!(
                        "factor {} is reached through a non-junction edge",
                        self.d.name(t)
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Image of a factor sequence under the outer automorphism, conjugated
    /// back into the frame of unit `from`.
    fn twisted(&self, outer: &AutLabeling, from: usize, pivot: Option<Gen>, ids: &[Gen]) -> Result<Vec<Gen>> {
        let Some(s) = pivot else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for &t in ids {
            let f = self.twist_ids(outer, from, s, t)?;
            out.extend_from_slice(&f);
            out.push(t);
            out.extend(f.iter().rev());
        }
        Ok(reduce_ids(&out))
    }

    /// `outer ∘ inner`, edgewise, then canonicalized.
    pub fn compose(&self, outer: &AutLabeling, inner: &AutLabeling) -> Result<AutLabeling> {
        let edges = self.tree_edges();
        let mut labels = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            let l = match (&inner.labels[i], &outer.labels[i]) {
                (EdgeLabel::Junction { twist: a }, EdgeLabel::Junction { twist: b }) => {
                    EdgeLabel::Junction { twist: a ^ b }
                }
                (
                    EdgeLabel::Cut { epsilon, u, v },
                    EdgeLabel::Cut {
                        epsilon: eps2,
                        u: u2,
                        v: v2,
                    },
                ) => {
                    let s = Some(e.junction[0]);
                    let ut = self.twisted(outer, e.from, s, u)?;
                    let vt = self.twisted(outer, e.to, s, v)?;
                    EdgeLabel::Cut {
                        epsilon: epsilon ^ eps2,
                        u: reduce_ids(&[ut, u2.clone()].concat()),
                        v: reduce_ids(&[v2.clone(), vt].concat()),
                    }
                }
                (EdgeLabel::Bridge { u, x, v }, EdgeLabel::Bridge { u: u2, x: x2, v: v2 }) => {
                    let ut = self.twisted(outer, e.from, e.u_pivot, u)?;
                    let vt = self.twisted(outer, e.to, e.v_pivot, v)?;
                    EdgeLabel::Bridge {
                        u: reduce_ids(&[ut, u2.clone()].concat()),
                        x: x.compose(x2),
                        v: reduce_ids(&[v2.clone(), vt].concat()),
                    }
                }
                _ => return Err(Error::InvalidLabel(format!("edge {i}: mismatched label kinds"))),
            };
            labels.push(l);
        }
        let base = self
            .oracle
            .reduce(&self.apply_unreduced(outer, &inner.base).concat(&outer.base))?;
        self.canonicalize(&AutLabeling { base, labels })
    }

    pub fn invert(&self, a: &AutLabeling) -> Result<AutLabeling> {
        let edges = self.tree_edges();
        let mut labels = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            let l = match &a.labels[i] {
                EdgeLabel::Junction { twist } => EdgeLabel::Junction { twist: *twist },
                EdgeLabel::Cut { epsilon, u, v } => {
                    let s = Some(e.junction[0]);
                    EdgeLabel::Cut {
                        epsilon: *epsilon,
                        u: reversed(&self.twisted(a, e.from, s, u)?),
                        v: reversed(&self.twisted(a, e.to, s, v)?),
                    }
                }
                EdgeLabel::Bridge { u, x, v } => EdgeLabel::Bridge {
                    u: reversed(&self.twisted(a, e.from, e.u_pivot, u)?),
                    x: x.inverse(),
                    v: reversed(&self.twisted(a, e.to, e.v_pivot, v)?),
                },
            };
            labels.push(l);
        }
        let raw = AutLabeling {
            base: Word::empty(),
            labels,
        };
        let base = self.apply(&raw, &a.base.inverse())?;
        self.canonicalize(&AutLabeling { base, ..raw })
    }

    /// Restores the per-type restrictions on `l` without changing the action:
    /// leaf edges take `l = 1`, and a leading `s_i` is split off `x_3`/`x_4`
    /// on edges leaving a singleton and carried into the parent edge or base.
    pub fn canonicalize(&self, a: &AutLabeling) -> Result<AutLabeling> {
        let tree = &self.skeleton.tree;
        let mut out = a.clone();
        let limit = tree.edges.len() + 2;
        for _ in 0..limit {
            let mut changed = false;
            for (i, e) in tree.edges.iter().enumerate() {
                let EdgeLabel::Bridge { x, .. } = &mut out.labels[i] else {
                    continue;
                };
                if e.half_k && 2 * x.k > x.n {
                    let b = e.bridge.expect("bridge edge").0;
                    out.base = out.base.concat(&Word::letter(b));
                    for j in tree.children(e.from) {
                        if let EdgeLabel::Bridge { x: sx, .. } = &mut out.labels[j] {
                            *sx = sx.prepend_leading();
                        }
                    }
                    changed = true;
                    continue;
                }
                if e.ends_at_leaf() {
                    if x.l != 1 {
                        x.l = 1;
                        changed = true;
                    }
                    continue;
                }
                if e.leaf_child && matches!(x.l, 2 | 3) {
                    *x = x.absorb_right(Dihedral::s_j(x.n)).expect("s_j is absorbed");
                    changed = true;
                    let Some(c) = tree.children(e.to).next() else {
                        return Err(Error::Canonicalization("leaf child is missing".into()));
                    };
                    match &mut out.labels[c] {
                        EdgeLabel::Bridge { x: cx, .. } => *cx = cx.prepend_leading(),
                        _ => {
                            return Err(Error::Canonicalization("leaf child is not a bridge".into()))
                        }
                    }
                    continue;
                }
                let from_singleton = matches!(e.case, CaseType::FromSingleton | CaseType::Singletons);
                if !from_singleton || x.l <= 2 {
                    continue;
                }
                *x = x.strip_leading().expect("l is 3 or 4");
                changed = true;
                let (si, _, _) = e.bridge.expect("bridge edge");
                match tree.parent_edge[e.from] {
                    Some(p) => match &mut out.labels[p] {
                        EdgeLabel::Bridge { x: px, .. } if tree.edges[p].bridge.map(|b| b.1) == Some(si) => {
                            *px = px
                                .absorb_right(Dihedral::s_j(px.n))
                                .expect("s_j is absorbed");
                        }
                        _ => {
                            return Err(Error::Canonicalization(format!(
                                "no edge absorbs the carried {}",
                                self.d.name(si)
                            )))
                        }
                    },
                    None => {
                        out.base = out.base.concat(&Word::letter(si));
                        for j in tree.children(e.from) {
                            if j == i {
                                continue;
                            }
                            if let EdgeLabel::Bridge { x: sx, .. } = &mut out.labels[j] {
                                *sx = sx.prepend_leading();
                            } else {
                                return Err(Error::Canonicalization(
                                    "singleton basepoint with a non-bridge edge".into(),
                                ));
                            }
                        }
                    }
                }
            }
            if !changed {
                for l in &mut out.labels {
                    match l {
                        EdgeLabel::Cut { u, v, .. } | EdgeLabel::Bridge { u, v, .. } => {
                            *u = reduce_ids(u);
                            *v = reduce_ids(v);
                        }
                        EdgeLabel::Junction { .. } => {}
                    }
                }
                out.base = self.oracle.reduce(&out.base)?;
                return Ok(out);
            }
        }
        Err(Error::Canonicalization("carrying did not terminate".into()))
    }

    pub fn is_canonical(&self, a: &AutLabeling) -> bool {
        self.validate(a).is_ok()
            && a.labels.iter().all(|l| match l {
                EdgeLabel::Cut { u, v, .. } | EdgeLabel::Bridge { u, v, .. } => {
                    *u == reduce_ids(u) && *v == reduce_ids(v)
                }
                EdgeLabel::Junction { .. } => true,
            })
    }

    // Families.

    pub fn to_family(&self, a: &AutLabeling, pi: DiagramAutomorphism) -> ConjugatorFamily {
        ConjugatorFamily {
            pi,
            words: self.conjugators(a),
        }
    }

    pub fn identity_family(&self) -> ConjugatorFamily {
        self.to_family(&self.identity(), DiagramAutomorphism::identity(self.d.len()))
    }

    /// The unit `π(U)`, as an index.
    pub fn map_unit(&self, pi: &DiagramAutomorphism, unit: usize) -> Result<usize> {
        let mut image: Vec<Gen> = self.skeleton.units()[unit].iter().map(|&g| pi.apply(g)).collect();
        image.sort();
        self.skeleton
            .units()
            .iter()
            .position(|u| *u == image)
            .ok_or_else(|| Error::InvalidLabel("permutation does not preserve units".into()))
    }

    pub fn family_apply_unreduced(&self, f: &ConjugatorFamily, w: &Word) -> Word {
        let mut out = Vec::new();
        for &g in w.letters() {
            let h = f.pi.apply(g);
            let c = &f.words[self.unit_of(h)];
            out.extend_from_slice(c.letters());
            out.push(h);
            out.extend(c.letters().iter().rev());
        }
        Word(out)
    }

    pub fn family_apply(&self, f: &ConjugatorFamily, w: &Word) -> Result<Word> {
        self.oracle.reduce(&self.family_apply_unreduced(f, w))
    }

    /// `outer ∘ inner` in family form.
    pub fn compose_general(&self, outer: &ConjugatorFamily, inner: &ConjugatorFamily) -> Result<ConjugatorFamily> {
        let pi = outer.pi.compose(&inner.pi);
        let back = outer.pi.inverse();
        let mut words = Vec::with_capacity(outer.words.len());
        for u in 0..outer.words.len() {
            let v = self.map_unit(&back, u)?;
            let w = self
                .family_apply_unreduced(outer, &inner.words[v])
                .concat(&outer.words[u]);
            words.push(self.oracle.reduce(&w)?);
        }
        Ok(ConjugatorFamily { pi, words })
    }

    /// Generator images agree under the oracle.
    pub fn equal_general(&self, a: &ConjugatorFamily, b: &ConjugatorFamily) -> Result<bool> {
        for g in self.d.gens() {
            let w = Word::letter(g);
            if !self
                .oracle
                .equal(&self.family_apply_unreduced(a, &w), &self.family_apply_unreduced(b, &w))?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Inverse of the family `to_family(a, π)`, i.e. of `a ∘ π`.
    pub fn invert_family(&self, a: &AutLabeling, pi: &DiagramAutomorphism) -> Result<ConjugatorFamily> {
        let inv = self.invert(a)?;
        let conj = self.conjugators(&inv);
        let back = pi.inverse();
        let words = (0..conj.len())
            .map(|v| {
                let u = self.map_unit(pi, v)?;
                Ok(Word(conj[u].letters().iter().map(|&g| back.apply(g)).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConjugatorFamily { pi: back, words })
    }

    /// The family of `δ⁻¹ ∘ f ∘ δ`: `w'_U = δ⁻¹(w_{δ(U)})`.
    pub fn conjugate_by_diagram(&self, f: &ConjugatorFamily, delta: &DiagramAutomorphism) -> Result<ConjugatorFamily> {
        let back = delta.inverse();
        let pi = back.compose(&f.pi).compose(delta);
        let words = (0..f.words.len())
            .map(|u| {
                let du = self.map_unit(delta, u)?;
                Ok(Word(f.words[du].letters().iter().map(|&g| back.apply(g)).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConjugatorFamily { pi, words })
    }

    pub fn is_homomorphism_family(&self, f: &ConjugatorFamily) -> Result<bool> {
        for r in relators(self.d).all() {
            if !self.oracle.is_identity(&self.family_apply_unreduced(f, r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // Enumeration.

    /// Every canonical label of an edge, with factor sequences of length at
    /// most `bound` where they range over an infinite set.
    pub fn label_options(&self, edge: usize, bound: usize) -> Vec<EdgeLabel> {
        let e = &self.tree_edges()[edge];
        match e.case {
            CaseType::EdgeJunction => vec![
                EdgeLabel::Junction { twist: false },
                EdgeLabel::Junction { twist: true },
            ],
            CaseType::VertexJunction => {
                let us = reduced_sequences(&e.u_ids, bound);
                let vs = reduced_sequences(&e.v_ids, bound);
                let mut out = Vec::new();
                for epsilon in [false, true] {
                    for u in &us {
                        for v in &vs {
                            out.push(EdgeLabel::Cut {
                                epsilon,
                                u: u.clone(),
                                v: v.clone(),
                            });
                        }
                    }
                }
                out
            }
            _ => {
                let (si, sj, n) = e.bridge.expect("bridge edge");
                let us = reduced_sequences(&e.u_ids, bound);
                let vs = reduced_sequences(&e.v_ids, bound);
                let mut out = Vec::new();
                for u in &us {
                    for k in e.allowed_k(n) {
                        for &l in e.allowed_l() {
                            for v in &vs {
                                out.push(EdgeLabel::Bridge {
                                    u: u.clone(),
                                    x: XWord::new(si, sj, n, l, k),
                                    v: v.clone(),
                                });
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// Size of an edge's label space; `None` when infinite.
    pub fn label_space_size(&self, edge: usize) -> Option<u64> {
        let e = &self.tree_edges()[edge];
        let seqs = |ids: &[Gen]| match ids.len() {
            0 => Some(1u64),
            1 => Some(2),
            _ => None,
        };
        match e.case {
            CaseType::EdgeJunction => Some(2),
            CaseType::VertexJunction => Some(2 * seqs(&e.u_ids)? * seqs(&e.v_ids)?),
            _ => {
                let (_, _, n) = e.bridge.expect("bridge edge");
                let xs = e.allowed_k(n).len() as u64 * e.allowed_l().len() as u64;
                Some(seqs(&e.u_ids)? * xs * seqs(&e.v_ids)?)
            }
        }
    }

    /// All canonical labelings with empty base, in odometer order over the
    /// per-edge option lists (last edge fastest).
    pub fn enumerate(&self, bound: usize) -> Labelings<'_, 'd> {
        let options: Vec<Vec<EdgeLabel>> = (0..self.tree_edges().len())
            .map(|i| self.label_options(i, bound))
            .collect();
        Labelings {
            group: self,
            idx: vec![0; options.len()],
            options,
            done: false,
        }
    }

    /// A canonical labeling drawn with `pick(n)` returning an index below `n`.
    pub fn random_labeling(
        &self,
        max_len: usize,
        base_len: usize,
        pick: &mut dyn FnMut(usize) -> usize,
    ) -> AutLabeling {
        let mut labels = Vec::new();
        for e in self.tree_edges() {
            let l = match e.case {
                CaseType::EdgeJunction => EdgeLabel::Junction { twist: pick(2) == 1 },
                CaseType::VertexJunction => {
                    let epsilon = pick(2) == 1;
                    let u = random_sequence(&e.u_ids, max_len, pick);
                    let v = random_sequence(&e.v_ids, max_len, pick);
                    EdgeLabel::Cut { epsilon, u, v }
                }
                _ => {
                    let (si, sj, n) = e.bridge.expect("bridge edge");
                    let ks = e.allowed_k(n);
                    let ls = e.allowed_l();
                    let u = random_sequence(&e.u_ids, max_len, pick);
                    let x = XWord::new(si, sj, n, ls[pick(ls.len())], ks[pick(ks.len())]);
                    let v = random_sequence(&e.v_ids, max_len, pick);
                    EdgeLabel::Bridge { u, x, v }
                }
            };
            labels.push(l);
        }
        let gens: Vec<Gen> = self.d.gens().collect();
        let len = pick(base_len + 1);
        let base = Word((0..len).map(|_| gens[pick(gens.len())]).collect());
        AutLabeling { base, labels }
    }

    // Serialization.

    pub fn labeling_to_json(&self, a: &AutLabeling) -> Value {
        let d = self.d;
        let units = self.skeleton.units();
        let names = |ids: &[Gen]| d.names_of(ids);
        let edges: Vec<Value> = self
            .tree_edges()
            .iter()
            .zip(&a.labels)
            .map(|(e, l)| {
                let mut obj = json!({
                    "edge": [names(&units[e.from]), names(&units[e.to])],
                    "type": e.subtype(),
                });
                let m = obj.as_object_mut().expect("object");
                match l {
                    EdgeLabel::Junction { twist } => {
                        m.insert("twist".into(), json!(twist));
                    }
                    EdgeLabel::Cut { epsilon, u, v } => {
                        m.insert("epsilon".into(), json!(epsilon));
                        m.insert("u".into(), json!(names(u)));
                        m.insert("v".into(), json!(names(v)));
                    }
                    EdgeLabel::Bridge { u, x, v } => {
                        if e.u_pivot.is_some() {
                            m.insert("u".into(), json!(names(u)));
                        }
                        m.insert("x".into(), json!({"l": x.l, "k": x.k}));
                        if e.v_pivot.is_some() {
                            m.insert("v".into(), json!(names(v)));
                        }
                    }
                }
                obj
            })
            .collect();
        json!({"base": a.base.render(d), "edges": edges})
    }

    /// Reads a labeling; edges not listed and absent fields are identity.
    pub fn labeling_from_json(&self, v: &Value) -> Result<AutLabeling> {
        let d = self.d;
        let bad = |m: String| Error::InvalidLabel(m);
        let base = match v.get("base") {
            None | Some(Value::Null) => Word::empty(),
            Some(Value::String(s)) => Word::parse(s, d)?,
            Some(_) => return Err(bad("base must be a string".into())),
        };
        let mut a = self.inner(base);
        let edges = match v.get("edges") {
            None | Some(Value::Null) => return Ok(a),
            Some(Value::Array(es)) => es,
            Some(_) => return Err(bad("edges must be an array".into())),
        };
        let units = self.skeleton.units();
        let unit_index = |x: &Value| -> Result<usize> {
            let arr = x.as_array().ok_or_else(|| bad("unit must be a list of names".into()))?;
            let mut gens = arr
                .iter()
                .map(|n| {
                    let n = n.as_str().ok_or_else(|| bad("unit member must be a name".into()))?;
                    d.gen(n).ok_or_else(|| Error::UnknownGenerator(n.into()))
                })
                .collect::<Result<Vec<_>>>()?;
            gens.sort();
            units
                .iter()
                .position(|u| *u == gens)
                .ok_or_else(|| bad(format!("{:?} is not a unit", d.names_of(&gens))))
        };
        let ids = |x: Option<&Value>| -> Result<Vec<Gen>> {
            match x {
                None | Some(Value::Null) => Ok(Vec::new()),
                Some(Value::Array(arr)) => arr
                    .iter()
                    .map(|n| {
                        let n = n.as_str().ok_or_else(|| bad("factor id must be a name".into()))?;
                        d.gen(n).ok_or_else(|| Error::UnknownGenerator(n.into()))
                    })
                    .collect(),
                Some(_) => Err(bad("factor ids must be a list".into())),
            }
        };
        for rec in edges {
            let pair = rec
                .get("edge")
                .and_then(Value::as_array)
                .filter(|p| p.len() == 2)
                .ok_or_else(|| bad("edge must be [from, to]".into()))?;
            let (from, to) = (unit_index(&pair[0])?, unit_index(&pair[1])?);
            let i = self
                .tree_edges()
                .iter()
                .position(|e| e.from == from && e.to == to)
                .ok_or_else(|| bad("edge is not an oriented tree edge".into()))?;
            let flag = |k: &str| rec.get(k).and_then(Value::as_bool).unwrap_or(false);
            let label = match &a.labels[i] {
                EdgeLabel::Junction { .. } => EdgeLabel::Junction { twist: flag("twist") },
                EdgeLabel::Cut { .. } => EdgeLabel::Cut {
                    epsilon: flag("epsilon"),
                    u: ids(rec.get("u"))?,
                    v: ids(rec.get("v"))?,
                },
                EdgeLabel::Bridge { x, .. } => {
                    let mut x = *x;
                    if let Some(xv) = rec.get("x") {
                        let num = |k: &str, default: u64| {
                            xv.get(k).map_or(Some(default), Value::as_u64).ok_or_else(|| bad(format!("x.{k} must be a number")))
                        };
                        x.l = u8::try_from(num("l", 1)?).map_err(|_| bad("x.l out of range".into()))?;
                        x.k = u32::try_from(num("k", 1)?).map_err(|_| bad("x.k out of range".into()))?;
                    }
                    EdgeLabel::Bridge {
                        u: ids(rec.get("u"))?,
                        x,
                        v: ids(rec.get("v"))?,
                    }
                }
            };
            a.labels[i] = label;
        }
        self.validate(&a)?;
        Ok(a)
    }
}

fn random_sequence(ids: &[Gen], max_len: usize, pick: &mut dyn FnMut(usize) -> usize) -> Vec<Gen> {
    if ids.is_empty() {
        return Vec::new();
    }
    let len = pick(max_len + 1);
    let mut s: Vec<Gen> = Vec::new();
    for _ in 0..len {
        let choices: Vec<Gen> = ids.iter().copied().filter(|&t| s.last() != Some(&t)).collect();
        if choices.is_empty() {
            break;
        }
        s.push(choices[pick(choices.len())]);
    }
    s
}

/// Odometer over per-edge label options.
pub struct Labelings<'g, 'd> {
    group: &'g AutGroup<'d>,
    options: Vec<Vec<EdgeLabel>>,
    idx: Vec<usize>,
    done: bool,
}

impl Labelings<'_, '_> {
    /// Total number of labelings the stream yields.
    pub fn count_total(&self) -> u128 {
        self.options.iter().map(|o| o.len() as u128).product()
    }
}

impl Iterator for Labelings<'_, '_> {
    type Item = AutLabeling;

    fn next(&mut self) -> Option<AutLabeling> {
        if self.done || self.options.iter().any(|o| o.is_empty()) {
            return None;
        }
        let labels = self
            .idx
            .iter()
            .zip(&self.options)
            .map(|(&i, o)| o[i].clone())
            .collect();
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.options[pos].len() {
                break;
            }
            self.idx[pos] = 0;
        }
        let _ = self.group;
        Some(AutLabeling {
            base: Word::empty(),
            labels,
        })
    }
}
