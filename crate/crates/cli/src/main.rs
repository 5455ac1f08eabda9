use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use coxaut::automorphism::{AutGroup, AutLabeling, ConjugatorFamily};
use coxaut::free_products::{decompose, out_finite_freeprod, FreeProduct};
use coxaut::oracle::DEFAULT_BUDGET;
use coxaut::outgroup::structure_report;
use coxaut::verify::{verify, VerifyOptions};
use coxaut::structure::Skeleton;
use coxaut::{CoxeterDiagram, DiagramAutomorphism, Error, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "coxaut", version, about = "Automorphism groups of even, large-type, NVB Coxeter groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Maximum number of braid-orbit words the word oracle may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check evenness, large type, connectedness and NVB.
    Validate { diagram: PathBuf },
    /// Junctions, circuits, units, unit graph and oriented spanning tree.
    Analyze { diagram: PathBuf },
    /// Per-edge label space sizes and the bounded enumeration count.
    AutCount {
        diagram: PathBuf,
        /// Length bound for infinite factor sequences.
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Finiteness, order and structure of Out(W).
    Out {
        diagram: PathBuf,
        /// Exit 3 when a closed form disagrees with the label enumeration.
        #[arg(long)]
        assert_paper_formulas: bool,
    },
    /// Image of a word under an automorphism.
    Apply {
        diagram: PathBuf,
        automorphism: PathBuf,
        /// Space-separated generator names; `1` is the empty word.
        word: String,
    },
    /// `outer ∘ inner`.
    Compose {
        diagram: PathBuf,
        outer: PathBuf,
        inner: PathBuf,
    },
    Invert {
        diagram: PathBuf,
        automorphism: PathBuf,
    },
    /// Run the oracle-backed self-checks on a diagram.
    Verify {
        diagram: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Free-product decomposition into connected factors.
    Decompose { diagram: PathBuf },
}

/// Exit status plus the report to print.
struct Outcome {
    code: u8,
    report: Value,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { code: 0, report }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<CoxeterDiagram> {
    Ok(CoxeterDiagram::parse(&read(path)?)?)
}

fn load_json(path: &Path) -> anyhow::Result<Value> {
    serde_json::from_str(&read(path)?).with_context(|| format!("{} is not valid JSON", path.display()))
}

/// A labeling together with an optional diagram part (`"diagram"` map).
fn load_aut(g: &AutGroup<'_>, path: &Path) -> anyhow::Result<(AutLabeling, DiagramAutomorphism)> {
    let v = load_json(path)?;
    let d = g.diagram();
    let pi = match v.get("diagram") {
        None | Some(Value::Null) => DiagramAutomorphism::identity(d.len()),
        Some(m) => {
            let map: BTreeMap<String, String> =
                serde_json::from_value(m.clone()).context("`diagram` must map names to names")?;
            DiagramAutomorphism::from_names(d, &map)?
        }
    };
    Ok((g.labeling_from_json(&v)?, pi))
}

fn family_json(g: &AutGroup<'_>, f: &ConjugatorFamily) -> Value {
    let d = g.diagram();
    let units = g.skeleton().units();
    json!({
        "diagram": f.pi.to_names(d),
        "conjugators": units.iter().zip(&f.words).map(|(u, w)| json!({
            "unit": d.names_of(u),
            "word": w.render(d),
        })).collect::<Vec<_>>(),
    })
}

fn images_json(d: &CoxeterDiagram, images: &[Word]) -> Value {
    let m: BTreeMap<&str, String> = d.gens().zip(images).map(|(s, w)| (d.name(s), w.render(d))).collect();
    json!(m)
}

fn is_free_product(d: &CoxeterDiagram) -> bool {
    d.components(&[]).len() == 2
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let budget = cli.budget;
    match &cli.command {
        Command::Validate { diagram } => {
            let d = CoxeterDiagram::parse_lenient(&read(diagram)?)?;
            let r = d.validate();
            Ok(Outcome {
                code: if r.is_admissible() { 0 } else { 1 },
                report: serde_json::to_value(&r)?,
            })
        }
        Command::Analyze { diagram } => {
            let d = load(diagram)?;
            Ok(Outcome::ok(Skeleton::new(&d)?.to_json(&d)))
        }
        Command::AutCount { diagram, bound } => {
            let d = load(diagram)?;
            let g = AutGroup::with_budget(&d, budget)?;
            let sizes: Vec<Value> = (0..g.tree_edges().len())
                .map(|i| {
                    let e = &g.tree_edges()[i];
                    let units = g.skeleton().units();
                    json!({
                        "edge": [d.names_of(&units[e.from]), d.names_of(&units[e.to])],
                        "type": e.subtype(),
                        "label_space": g.label_space_size(i),
                        "enumerated": g.label_options(i, *bound).len(),
                    })
                })
                .collect();
            let finite = (0..g.tree_edges().len()).all(|i| g.label_space_size(i).is_some());
            Ok(Outcome::ok(json!({
                "bound": bound,
                "edges": sizes,
                "labelings": g.enumerate(*bound).count_total().to_string(),
                "exhaustive": finite,
                "diag_order": d.automorphisms().len(),
            })))
        }
        Command::Out { diagram, assert_paper_formulas } => {
            let d = load(diagram)?;
            let r = structure_report(&d)?;
            let mismatches = r.formula_mismatches();
            let mut report = serde_json::to_value(&r)?;
            report["formula_mismatches"] = json!(mismatches);
            let code = if *assert_paper_formulas && !mismatches.is_empty() { 3 } else { 0 };
            Ok(Outcome { code, report })
        }
        Command::Apply { diagram, automorphism, word } => {
            let d = load(diagram)?;
            let w = Word::parse(word, &d)?;
            let image = if is_free_product(&d) {
                let fp = FreeProduct::with_budget(&d, budget)?;
                let t = fp.from_json(&load_json(automorphism)?)?;
                fp.apply(&t, &w)?
            } else {
                let g = AutGroup::with_budget(&d, budget)?;
                let (a, pi) = load_aut(&g, automorphism)?;
                g.family_apply(&g.to_family(&a, pi), &w)?
            };
            Ok(Outcome::ok(json!({"word": w.render(&d), "image": image.render(&d)})))
        }
        Command::Compose { diagram, outer, inner } => {
            let d = load(diagram)?;
            if is_free_product(&d) {
                let fp = FreeProduct::with_budget(&d, budget)?;
                let o = fp.from_json(&load_json(outer)?)?;
                let i = fp.from_json(&load_json(inner)?)?;
                let c = fp.compose(&o, &i)?;
                return Ok(Outcome::ok(json!({"triple": fp.to_json(&c), "images": images_json(&d, &fp.images(&c)?)})));
            }
            let g = AutGroup::with_budget(&d, budget)?;
            let (o, po) = load_aut(&g, outer)?;
            let (i, pi) = load_aut(&g, inner)?;
            if po.is_identity() && pi.is_identity() {
                let c = g.compose(&o, &i)?;
                let family = g.compose_general(&g.to_family(&o, po), &g.to_family(&i, pi))?;
                if !g.equal_general(&g.to_family(&c, DiagramAutomorphism::identity(d.len())), &family)? {
                    return Err(Error::CrossCheck("edge formulas disagree with family composition".into()).into());
                }
                Ok(Outcome::ok(json!({"labeling": g.labeling_to_json(&c), "images": images_json(&d, &g.images(&c)?)})))
            } else {
                let f = g.compose_general(&g.to_family(&o, po), &g.to_family(&i, pi))?;
                let images: Vec<Word> = d.gens().map(|s| g.family_apply(&f, &Word::letter(s))).collect::<Result<_, _>>()?;
                Ok(Outcome::ok(json!({"family": family_json(&g, &f), "images": images_json(&d, &images)})))
            }
        }
        Command::Invert { diagram, automorphism } => {
            let d = load(diagram)?;
            if is_free_product(&d) {
                let fp = FreeProduct::with_budget(&d, budget)?;
                let t = fp.from_json(&load_json(automorphism)?)?;
                let inv = fp.invert(&t)?;
                return Ok(Outcome::ok(json!({"triple": fp.to_json(&inv), "images": images_json(&d, &fp.images(&inv)?)})));
            }
            let g = AutGroup::with_budget(&d, budget)?;
            let (a, pi) = load_aut(&g, automorphism)?;
            if pi.is_identity() {
                let inv = g.invert(&a)?;
                Ok(Outcome::ok(json!({"labeling": g.labeling_to_json(&inv), "images": images_json(&d, &g.images(&inv)?)})))
            } else {
                let f = g.invert_family(&a, &pi)?;
                let images: Vec<Word> = d.gens().map(|s| g.family_apply(&f, &Word::letter(s))).collect::<Result<_, _>>()?;
                Ok(Outcome::ok(json!({"family": family_json(&g, &f), "images": images_json(&d, &images)})))
            }
        }
        Command::Verify { diagram, samples, bound, seed } => {
            let d = load(diagram)?;
            if d.components(&[]).len() == 1 {
                d.require_admissible()?;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut pick = |n: usize| rng.gen_range(0..n);
            let opts = VerifyOptions {
                samples: *samples,
                bound: *bound,
                budget,
                ..VerifyOptions::default()
            };
            let r = verify(&d, opts, &mut pick)?;
            Ok(Outcome {
                code: if r.passed() { 0 } else { 3 },
                report: json!({"passed": r.passed(), "checks": r.checks}),
            })
        }
        Command::Decompose { diagram } => {
            let d = load(diagram)?;
            let dec = decompose(&d);
            let finite = out_finite_freeprod(&d, &dec);
            let mut report = json!({"factors": dec.factors});
            match finite {
                Ok(b) => report["out_finite"] = json!(b),
                Err(e) => {
                    report["out_finite"] = Value::Null;
                    report["note"] = json!(e.to_string());
                }
            }
            if dec.factors.len() == 2 {
                report["caveat"] = json!("when a factor is finite, triples are further identified modulo its centralizer");
            }
            Ok(Outcome::ok(report))
        }
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(x, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_object() && !x.is_array() || is_flat_list(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn is_flat_list(v: &Value) -> bool {
    v.as_array().is_some_and(|xs| xs.iter().all(|x| !x.is_object() && !x.is_array()))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => 2,
        Some(Error::CrossCheck(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&o.report).expect("serializable") + "\n",
                Format::Text => {
                    let mut s = String::new();
                    render_text(&o.report, 0, &mut s);
                    s
                }
            };
            print!("{text}");
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
