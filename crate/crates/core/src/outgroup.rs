//! Finiteness, order and structure of `Out(W)`.

use serde::Serialize;

use crate::automorphism::AutGroup;
use crate::diagram::{CoxeterDiagram, Gen};
use crate::dihedral::totient;
use crate::error::{Error, Result};
use crate::structure::CaseType;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finiteness {
    pub finite: bool,
    /// A cut vertex adjacent to more than two vertices.
    pub witness: Option<String>,
}

/// `Out(W)` is infinite iff some cut vertex has degree above 2.
pub fn is_out_finite(d: &CoxeterDiagram) -> Result<Finiteness> {
    d.require_admissible()?;
    let witness = d.cut_vertices().into_iter().find(|&s| d.degree(s) > 2);
    Ok(Finiteness {
        finite: witness.is_none(),
        witness: witness.map(|s| d.name(s).to_owned()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCount {
    pub from: Vec<String>,
    pub to: Vec<String>,
    #[serde(rename = "type")]
    pub kind: String,
    /// `None` when the label space is infinite.
    pub count: Option<u64>,
}

/// Involutions generating one free factor `Z₂ * … * Z₂`, indexed by the
/// neighbors of a cut vertex on one side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeFactor {
    pub cut_vertex: String,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutReport {
    pub finite: bool,
    pub witness: Option<String>,
    pub order: Option<u64>,
    pub factorization: Vec<EdgeCount>,
    pub diag_order: u64,
    pub units: usize,
    /// Number of tree edges across an edge junction.
    pub twist_edges: usize,
    pub structure: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub free_factors: Vec<FreeFactor>,
    /// `2^k |Diag|` with `k` the number of units, for diagrams without cut
    /// vertices. Recorded, never enforced.
    pub paper_2k_value: Option<u64>,
    /// `δ · 2^{r-2} ∏ φ(n_i)` for paths with `r ≥ 2` edges.
    pub path_formula: Option<u64>,
    pub notes: Vec<String>,
}

impl OutReport {
    /// Closed forms that disagree with the enumeration-based order, except
    /// the `2^k |Diag|` value which is only recorded.
    pub fn formula_mismatches(&self) -> Vec<String> {
        match (self.path_formula, self.order) {
            (Some(p), Some(o)) if p != o => {
                vec![format!("path formula gives {p}, label enumeration gives {o}")]
            }
            _ => Vec::new(),
        }
    }
}

/// `δ · 2^{r-2} ∏ φ(n_i)` for a path with labels `n_1, …, n_r`, `r ≥ 2`.
pub fn path_formula(labels: &[u32], delta: u64) -> Option<u64> {
    let r = labels.len();
    if r < 2 {
        return None;
    }
    let phi: u64 = labels.iter().map(|&n| totient(n) as u64).product();
    Some(delta * (1u64 << (r - 2)) * phi)
}

/// Full report; `order` is `None` when `Out(W)` is infinite.
pub fn structure_report(d: &CoxeterDiagram) -> Result<OutReport> {
    let fin = is_out_finite(d)?;
    let g = AutGroup::new(d)?;
    let sk = g.skeleton();
    let units = sk.units();
    let names = |v: &[Gen]| d.names_of(v);
    let factorization: Vec<EdgeCount> = g
        .tree_edges()
        .iter()
        .enumerate()
        .map(|(i, e)| EdgeCount {
            from: names(&units[e.from]),
            to: names(&units[e.to]),
            kind: e.subtype(),
            count: g.label_space_size(i),
        })
        .collect();
    let edges_finite = factorization.iter().all(|c| c.count.is_some());
    if edges_finite != fin.finite {
        return Err(Error::CrossCheck(format!(
            "cut-vertex criterion says finite={} but label spaces say finite={}",
            fin.finite, edges_finite
        )));
    }
    let diag_order = d.automorphisms().len() as u64;
    let order = edges_finite.then(|| {
        diag_order * factorization.iter().map(|c| c.count.expect("finite")).product::<u64>()
    });
    let twist_edges = g
        .tree_edges()
        .iter()
        .filter(|e| e.case == CaseType::EdgeJunction)
        .count();

    let mut free_factors = Vec::new();
    for e in g.tree_edges() {
        for (pivot, ids) in [(e.u_pivot, &e.u_ids), (e.v_pivot, &e.v_ids)] {
            if let (Some(s), true) = (pivot, ids.len() >= 2) {
                let f = FreeFactor {
                    cut_vertex: d.name(s).to_owned(),
                    generators: names(ids),
                };
                if !free_factors.contains(&f) {
                    free_factors.push(f);
                }
            }
        }
    }

    let cut_free = d.cut_vertices().is_empty();
    let structure = if !fin.finite {
        let parts: Vec<String> = free_factors
            .iter()
            .map(|f| {
                let z: Vec<String> = f.generators.iter().map(|t| format!("Z₂⟨{t}⟩")).collect();
                z.join(" * ")
            })
            .collect();
        format!("Out ⊇ F = {} (finite index)", parts.join(" × "))
    } else if cut_free {
        match twist_edges {
            0 => "Inn ⋊ Diag".to_owned(),
            1 => "(Inn × Z₂) ⋊ Diag".to_owned(),
            j => format!("(Inn × Z₂^{j}) ⋊ Diag"),
        }
    } else {
        format!("finite Out of order {}", order.expect("finite"))
    };

    let paper_2k_value = cut_free.then(|| (1u64 << units.len()) * diag_order);
    let path_formula = d.path_labels().and_then(|l| path_formula(&l, diag_order));
    let mut notes = Vec::new();
    if let (Some(p), Some(o)) = (paper_2k_value, order) {
        if p != o {
            notes.push(format!(
                "2^k|Diag| with k = {} units gives {p}; edge-by-edge count gives {o}",
                units.len()
            ));
        }
    }
    if diag_order > 1 {
        notes.push("the diagram part acts on conjugators, so Aut = G ⋊ Diag rather than a direct product".into());
    }
    let report = OutReport {
        finite: fin.finite,
        witness: fin.witness,
        order,
        factorization,
        diag_order,
        units: units.len(),
        twist_edges,
        structure,
        free_factors,
        paper_2k_value,
        path_formula,
        notes,
    };
    Ok(report)
}

/// Like [`structure_report`] but fails when `Out(W)` is infinite.
pub fn out_order(d: &CoxeterDiagram) -> Result<OutReport> {
    let r = structure_report(d)?;
    if !r.finite {
        return Err(Error::Unsupported(format!(
            "Out(W) is infinite: cut vertex {} has degree above 2",
            r.witness.as_deref().unwrap_or("?")
        )));
    }
    Ok(r)
}
