//! The oracle-backed self-check run by `coxaut verify`.

use serde::Serialize;

use crate::automorphism::AutGroup;
use crate::diagram::CoxeterDiagram;
use crate::error::Result;
use crate::free_products::{decompose, FreeProduct, TripleAut};
use crate::oracle::{relators, Oracle};
use crate::outgroup::structure_report;
use crate::structure::centralizer_generators;
use crate::word::Word;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Random pairs for the composition cross-check.
    pub samples: usize,
    /// Length bound for infinite factor sequences in enumeration.
    pub bound: usize,
    /// Cap on enumerated labelings per check.
    pub max_labelings: usize,
    pub budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 50,
            bound: 2,
            max_labelings: 200,
            budget: crate::oracle::DEFAULT_BUDGET,
        }
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn run(&mut self, name: &'static str, f: impl FnOnce(&mut usize) -> Result<Option<String>>) -> Result<()> {
        let mut cases = 0;
        let failure = f(&mut cases)?;
        self.checks.push(Check {
            name,
            passed: failure.is_none(),
            cases,
            failure,
        });
        Ok(())
    }
}

fn random_word(d: &CoxeterDiagram, max_len: usize, pick: &mut dyn FnMut(usize) -> usize) -> Word {
    let gens: Vec<_> = d.gens().collect();
    let len = pick(max_len + 1);
    Word((0..len).map(|_| gens[pick(gens.len())]).collect())
}

/// Runs every check that applies to the diagram. Errors are reserved for
/// budget exhaustion and invalid input; failed checks are reported.
pub fn verify(d: &CoxeterDiagram, opts: VerifyOptions, pick: &mut dyn FnMut(usize) -> usize) -> Result<VerifyReport> {
    let mut rec = Recorder { checks: Vec::new() };
    let oracle = Oracle::with_budget(d, opts.budget);

    rec.run("relators", |n| {
        for r in relators(d).all() {
            *n += 1;
            if !oracle.is_identity(r)? {
                return Ok(Some(format!("relator {} does not reduce", r.render(d))));
            }
        }
        Ok(None)
    })?;
    rec.run("word_inverse", |n| {
        for _ in 0..opts.samples {
            let w = random_word(d, 12, pick);
            *n += 1;
            if !oracle.is_identity(&w.concat(&w.inverse()))? {
                return Ok(Some(format!("w w⁻¹ ≠ 1 for w = {}", w.render(d))));
            }
        }
        Ok(None)
    })?;

    match d.components(&[]).len() {
        1 => verify_connected(d, opts, pick, &mut rec)?,
        2 => verify_triples(d, opts, pick, &mut rec)?,
        _ => {}
    }
    Ok(VerifyReport { checks: rec.checks })
}

fn verify_connected(
    d: &CoxeterDiagram,
    opts: VerifyOptions,
    pick: &mut dyn FnMut(usize) -> usize,
    rec: &mut Recorder,
) -> Result<()> {
    let g = AutGroup::with_budget(d, opts.budget)?;
    let oracle = g.oracle();

    rec.run("centralizers", |n| {
        let mut sets: Vec<Vec<_>> = d.gens().map(|s| vec![s]).collect();
        sets.extend(d.edges().into_iter().map(|(a, b, _)| vec![a, b]));
        for j in sets {
            for c in centralizer_generators(d, &j)? {
                for &s in &j {
                    *n += 1;
                    if !oracle.commute(&c, &Word::letter(s))? {
                        return Ok(Some(format!("{} does not commute with {}", c.render(d), d.name(s))));
                    }
                }
            }
        }
        Ok(None)
    })?;

    rec.run("finiteness_agreement", |n| {
        *n += 1;
        Ok(match structure_report(d) {
            Ok(_) => None,
            Err(crate::Error::CrossCheck(m)) => Some(m),
            Err(e) => return Err(e),
        })
    })?;

    let labelings: Vec<_> = g.enumerate(opts.bound).take(opts.max_labelings).collect();
    rec.run("homomorphism_and_inverse", |n| {
        let id = g.identity();
        for a in &labelings {
            *n += 1;
            if !g.is_homomorphism(a)? {
                return Ok(Some(format!("not a homomorphism: {}", g.labeling_to_json(a))));
            }
            let inv = g.invert(a)?;
            if !g.equal_pointwise(&g.compose(&inv, a)?, &id)? || !g.equal_pointwise(&g.compose(a, &inv)?, &id)? {
                return Ok(Some(format!("inverse fails for {}", g.labeling_to_json(a))));
            }
        }
        Ok(None)
    })?;

    let finite = (0..g.tree_edges().len()).all(|i| g.label_space_size(i).is_some());
    rec.run("distinctness", |n| {
        let mut seen = std::collections::BTreeMap::new();
        for a in &labelings {
            *n += 1;
            if let Some(prev) = seen.insert(g.images(a)?, a.clone()) {
                return Ok(Some(format!(
                    "{} and {} have the same images",
                    g.labeling_to_json(&prev),
                    g.labeling_to_json(a)
                )));
            }
        }
        Ok(None)
    })?;
    if finite {
        rec.run("enumeration_matches_label_spaces", |n| {
            *n += 1;
            let expected: u64 = (0..g.tree_edges().len()).map(|i| g.label_space_size(i).expect("finite")).product();
            let counted = g.enumerate(0).count_total();
            Ok((counted != expected as u128).then(|| format!("enumerated {counted}, label spaces give {expected}")))
        })?;
    }

    let diag = d.automorphisms();
    rec.run("composition_cross_check", |n| {
        for _ in 0..opts.samples {
            let a = g.random_labeling(2, 3, pick);
            let b = g.random_labeling(2, 3, pick);
            let pa = diag[pick(diag.len())].clone();
            let pb = diag[pick(diag.len())].clone();
            *n += 1;
            let c = g.compose(&b, &a)?;
            if !g.is_canonical(&c) {
                return Ok(Some(format!("composite is not canonical: {}", g.labeling_to_json(&c))));
            }
            let id = crate::DiagramAutomorphism::identity(d.len());
            let general = g.compose_general(&g.to_family(&b, id.clone()), &g.to_family(&a, id.clone()))?;
            if !g.equal_general(&g.to_family(&c, id), &general)? {
                return Ok(Some(format!(
                    "edge formulas disagree with family composition for {} ∘ {}",
                    g.labeling_to_json(&b),
                    g.labeling_to_json(&a)
                )));
            }
            let twisted = g.compose_general(&g.to_family(&b, pb), &g.to_family(&a, pa))?;
            if !g.is_homomorphism_family(&twisted)? {
                return Ok(Some("composite with diagram parts is not a homomorphism".into()));
            }
        }
        Ok(None)
    })?;

    rec.run("diagram_conjugation", |n| {
        for delta in &diag {
            let a = g.random_labeling(2, 2, pick);
            let f = g.to_family(&a, crate::DiagramAutomorphism::identity(d.len()));
            let c = g.conjugate_by_diagram(&f, delta)?;
            *n += 1;
            for s in d.gens() {
                let ds = Word::letter(delta.apply(s));
                let image = g.family_apply_unreduced(&f, &ds);
                let back: Word = Word(image.letters().iter().map(|&x| delta.inverse().apply(x)).collect());
                if !oracle.equal(&g.family_apply_unreduced(&c, &Word::letter(s)), &back)? {
                    return Ok(Some(format!("δ⁻¹∘φ∘δ disagrees at {}", d.name(s))));
                }
            }
        }
        Ok(None)
    })?;
    Ok(())
}

fn random_triple(fp: &FreeProduct<'_>, d: &CoxeterDiagram, pick: &mut dyn FnMut(usize) -> usize) -> TripleAut {
    let mut side = |i: usize| {
        let gens: Vec<_> = d.gens().filter(|&g| fp.factor_of(g) == i).collect();
        let len = pick(4);
        Word((0..len).map(|_| gens[pick(gens.len())]).collect())
    };
    let u1 = side(0);
    let u2 = side(1);
    TripleAut {
        w: random_word(d, 4, pick),
        u1,
        u2,
    }
}

fn verify_triples(
    d: &CoxeterDiagram,
    opts: VerifyOptions,
    pick: &mut dyn FnMut(usize) -> usize,
    rec: &mut Recorder,
) -> Result<()> {
    let fp = FreeProduct::with_budget(d, opts.budget)?;
    rec.run("triple_associativity", |n| {
        for _ in 0..opts.samples {
            let (a, b, c) = (random_triple(&fp, d, pick), random_triple(&fp, d, pick), random_triple(&fp, d, pick));
            *n += 1;
            let left = fp.compose(&fp.compose(&c, &b)?, &a)?;
            let right = fp.compose(&c, &fp.compose(&b, &a)?)?;
            if !fp.equal_pointwise(&left, &right)? {
                return Ok(Some("triple composition is not associative".into()));
            }
            let ab = fp.compose(&b, &a)?;
            for s in d.gens() {
                let direct = fp.apply_unreduced(&b, &fp.apply_unreduced(&a, &Word::letter(s)));
                if !fp.oracle().equal(&direct, &fp.apply_unreduced(&ab, &Word::letter(s)))? {
                    return Ok(Some(format!("composition law disagrees with substitution at {}", d.name(s))));
                }
            }
            let inv = fp.invert(&a)?;
            if !fp.equal_pointwise(&fp.compose(&inv, &a)?, &TripleAut::identity())? {
                return Ok(Some("triple inverse fails".into()));
            }
        }
        Ok(None)
    })?;
    rec.run("free_decomposition", |n| {
        *n += 1;
        let dec = decompose(d);
        let covered: usize = dec.factors.iter().map(|f| f.vertices.len()).sum();
        Ok((covered != d.len()).then(|| "factors do not partition the vertices".into()))
    })?;
    Ok(())
}
