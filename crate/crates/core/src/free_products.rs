//! Free-product decompositions and the triple description of automorphisms
//! of a free product of two factors.

use serde::Serialize;

use crate::diagram::{CoxeterDiagram, FactorFlags, Gen};
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::outgroup::is_out_finite;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    /// Generators of the factor, as indices into the whole diagram.
    pub vertices: Vec<Gen>,
    pub names: Vec<String>,
    pub strongly_rigid: bool,
    /// Whether the factor group is finite; `None` when neither asserted
    /// nor derivable.
    pub finite: Option<bool>,
}

/// Connected components ordered by least vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeDecomposition {
    pub factors: Vec<Factor>,
}

/// Finiteness of a connected factor when it follows from the labels alone:
/// a vertex or an edge is finite, and three or more vertices with every
/// label at least 4 span an infinite group.
fn derived_finiteness(f: &CoxeterDiagram) -> Option<bool> {
    match f.len() {
        0..=2 => Some(true),
        _ if f.edges().iter().all(|&(_, _, m)| m >= 4) => Some(false),
        _ => None,
    }
}

pub fn decompose(d: &CoxeterDiagram) -> FreeDecomposition {
    let factors = d
        .components(&[])
        .into_iter()
        .enumerate()
        .map(|(i, vertices)| {
            let sub = d.induced(&vertices);
            let flags: FactorFlags = d.factor_flags().get(&i).cloned().unwrap_or_default();
            Factor {
                names: d.names_of(&vertices),
                vertices,
                strongly_rigid: flags.strongly_rigid,
                finite: flags.finite.or_else(|| derived_finiteness(&sub)),
            }
        })
        .collect();
    FreeDecomposition { factors }
}

/// Finiteness of `Out(W)`: two factors need both finite, three or more never
/// are, and a single factor is decided by its diagram.
pub fn out_finite_freeprod(d: &CoxeterDiagram, dec: &FreeDecomposition) -> Result<bool> {
    match dec.factors.len() {
        0 => Ok(true),
        1 => Ok(is_out_finite(d)?.finite),
        2 => {
            let mut all = true;
            for (i, f) in dec.factors.iter().enumerate() {
                match f.finite {
                    Some(b) => all &= b,
                    None => {
                        return Err(Error::FreeProduct(format!(
                            "factor {i} ({}) needs a `factor {i} finite|infinite` directive",
                            f.names.join(" ")
                        )))
                    }
                }
            }
            Ok(all)
        }
        _ => Ok(false),
    }
}

/// `(w, u₁, u₂)`: generators of factor 1 are conjugated by `w u₁⁻¹` and
/// those of factor 2 by `w u₂`, so that `w₁⁻¹ w₂ = u₁ u₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TripleAut {
    pub w: Word,
    pub u1: Word,
    pub u2: Word,
}

impl TripleAut {
    pub fn identity() -> Self {
        TripleAut {
            w: Word::empty(),
            u1: Word::empty(),
            u2: Word::empty(),
        }
    }
}

/// Triple arithmetic over a diagram with exactly two components.
pub struct FreeProduct<'d> {
    d: &'d CoxeterDiagram,
    oracle: Oracle<'d>,
    side: Vec<u8>,
}

impl<'d> FreeProduct<'d> {
    pub fn new(d: &'d CoxeterDiagram) -> Result<Self> {
        Self::with_budget(d, crate::oracle::DEFAULT_BUDGET)
    }

    pub fn with_budget(d: &'d CoxeterDiagram, budget: usize) -> Result<Self> {
        let comps = d.components(&[]);
        if comps.len() != 2 {
            return Err(Error::FreeProduct(format!(
                "triples need exactly 2 factors, found {}",
                comps.len()
            )));
        }
        let mut side = vec![0u8; d.len()];
        for &g in &comps[1] {
            side[g.index()] = 1;
        }
        Ok(FreeProduct {
            d,
            oracle: Oracle::with_budget(d, budget),
            side,
        })
    }

    pub fn oracle(&self) -> &Oracle<'d> {
        &self.oracle
    }

    pub fn factor_of(&self, g: Gen) -> usize {
        self.side[g.index()] as usize
    }

    pub fn validate(&self, t: &TripleAut) -> Result<()> {
        for (i, u) in [(0, &t.u1), (1, &t.u2)] {
            if let Some(&g) = u.letters().iter().find(|&&g| self.factor_of(g) != i) {
                return Err(Error::FreeProduct(format!(
                    "u{} uses {} from the other factor",
                    i + 1,
                    self.d.name(g)
                )));
            }
        }
        Ok(())
    }

    fn conjugator(&self, t: &TripleAut, g: Gen) -> Word {
        match self.factor_of(g) {
            0 => t.w.concat(&t.u1.inverse()),
            _ => t.w.concat(&t.u2),
        }
    }

    pub fn apply_unreduced(&self, t: &TripleAut, w: &Word) -> Word {
        let mut out = Vec::new();
        for &g in w.letters() {
            out.extend(self.conjugator(t, g).conjugate(&Word::letter(g)).0);
        }
        Word(out)
    }

    pub fn apply(&self, t: &TripleAut, w: &Word) -> Result<Word> {
        self.oracle.reduce(&self.apply_unreduced(t, w))
    }

    pub fn images(&self, t: &TripleAut) -> Result<Vec<Word>> {
        self.d.gens().map(|g| self.apply(t, &Word::letter(g))).collect()
    }

    pub fn equal_pointwise(&self, a: &TripleAut, b: &TripleAut) -> Result<bool> {
        for g in self.d.gens() {
            let x = self.apply_unreduced(a, &Word::letter(g));
            let y = self.apply_unreduced(b, &Word::letter(g));
            if !self.oracle.equal(&x, &y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn canonicalize(&self, t: &TripleAut) -> Result<TripleAut> {
        Ok(TripleAut {
            w: self.oracle.reduce(&t.w)?,
            u1: self.oracle.reduce(&t.u1)?,
            u2: self.oracle.reduce(&t.u2)?,
        })
    }

    /// `outer ∘ inner = (outer(w) w′, u₁ u′₁, u′₂ u₂)` where the primed
    /// coordinates belong to `outer`.
    pub fn compose(&self, outer: &TripleAut, inner: &TripleAut) -> Result<TripleAut> {
        self.validate(outer)?;
        self.validate(inner)?;
        self.canonicalize(&TripleAut {
            w: self.apply_unreduced(outer, &inner.w).concat(&outer.w),
            u1: inner.u1.concat(&outer.u1),
            u2: outer.u2.concat(&inner.u2),
        })
    }

    /// The inverse is `(1, u₁⁻¹, u₂⁻¹) ∘ (w⁻¹, 1, 1)`.
    pub fn invert(&self, t: &TripleAut) -> Result<TripleAut> {
        self.validate(t)?;
        let untwist = TripleAut {
            w: Word::empty(),
            u1: t.u1.inverse(),
            u2: t.u2.inverse(),
        };
        let inner = TripleAut {
            w: t.w.inverse(),
            u1: Word::empty(),
            u2: Word::empty(),
        };
        self.compose(&untwist, &inner)
    }

    pub fn is_homomorphism(&self, t: &TripleAut) -> Result<bool> {
        for r in crate::oracle::relators(self.d).all() {
            if !self.oracle.is_identity(&self.apply_unreduced(t, r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self, t: &TripleAut) -> serde_json::Value {
        serde_json::json!({
            "w": t.w.render(self.d),
            "u1": t.u1.render(self.d),
            "u2": t.u2.render(self.d),
        })
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<TripleAut> {
        let field = |k: &str| -> Result<Word> {
            match v.get(k) {
                None => Ok(Word::empty()),
                Some(serde_json::Value::String(s)) => Word::parse(s, self.d),
                Some(_) => Err(Error::FreeProduct(format!("`{k}` must be a string"))),
            }
        };
        let t = TripleAut {
            w: field("w")?,
            u1: field("u1")?,
            u2: field("u2")?,
        };
        self.validate(&t)?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(t: &str) -> CoxeterDiagram {
        CoxeterDiagram::parse(t).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let d = parse("edge a b 4\nedge b c 4\nedge c a 4\nvertex z");
        let dec = decompose(&d);
        assert_eq!(dec.factors.len(), 2);
        assert_eq!(dec.factors[0].names, ["a", "b", "c"]);
        assert_eq!(dec.factors[0].finite, Some(false));
        assert_eq!(dec.factors[1].finite, Some(true));
        assert!(!out_finite_freeprod(&d, &dec).unwrap());
        assert_eq!(decompose(&parse("edge a b 4")).factors.len(), 1);
        let three = parse("vertex x\nvertex y\nvertex z");
        assert_eq!(decompose(&three).factors.len(), 3);
        assert!(!out_finite_freeprod(&three, &decompose(&three)).unwrap());
        let two = parse("vertex x\nvertex y");
        assert!(out_finite_freeprod(&two, &decompose(&two)).unwrap());
    }

    #[test]
    fn missing_flag_is_an_error() {
        let d = parse("edge a b 2\nedge b c 2\nvertex z");
        let dec = decompose(&d);
        assert_eq!(dec.factors[0].finite, None);
        assert!(out_finite_freeprod(&d, &dec).is_err());
        let flagged = parse("edge a b 2\nedge b c 2\nvertex z\nfactor 0 finite");
        assert!(out_finite_freeprod(&flagged, &decompose(&flagged)).unwrap());
    }

    #[test]
    fn triple_arithmetic() {
        let d = parse("edge a b 4\nvertex z");
        let fp = FreeProduct::new(&d).unwrap();
        let w = |s: &str| Word::parse(s, &d).unwrap();
        let t = TripleAut { w: w("z a"), u1: w("a b"), u2: w("z") };
        assert!(fp.is_homomorphism(&t).unwrap());
        assert_eq!(fp.compose(&TripleAut::identity(), &t).unwrap(), fp.canonicalize(&t).unwrap());
        let inv = fp.invert(&t).unwrap();
        assert!(fp.equal_pointwise(&fp.compose(&inv, &t).unwrap(), &TripleAut::identity()).unwrap());
        assert!(fp.equal_pointwise(&fp.compose(&t, &inv).unwrap(), &TripleAut::identity()).unwrap());
        // u₁ coordinates multiply as u₁ u′₁.
        let p = TripleAut { w: Word::empty(), u1: w("a"), u2: Word::empty() };
        let q = TripleAut { w: Word::empty(), u1: w("b"), u2: Word::empty() };
        assert_eq!(fp.compose(&q, &p).unwrap().u1, w("a b"));
        let bad = TripleAut { w: Word::empty(), u1: w("z"), u2: Word::empty() };
        assert!(fp.validate(&bad).is_err());
        assert!(FreeProduct::new(&parse("edge a b 4")).is_err());
    }

    #[test]
    fn w_only_is_inner() {
        let d = parse("edge a b 4\nvertex z");
        let fp = FreeProduct::new(&d).unwrap();
        let t = TripleAut { w: Word::parse("a z b", &d).unwrap(), u1: Word::empty(), u2: Word::empty() };
        for g in d.gens() {
            let img = fp.apply(&t, &Word::letter(g)).unwrap();
            assert!(fp.oracle().equal(&img, &t.w.conjugate(&Word::letter(g))).unwrap());
        }
    }
}
