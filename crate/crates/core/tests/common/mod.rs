#![allow(dead_code)]

use coxaut::{CoxeterDiagram, Gen, Word};

pub fn parse(text: &str) -> CoxeterDiagram {
    CoxeterDiagram::parse(text).unwrap()
}

pub fn path(labels: &[u32]) -> CoxeterDiagram {
    let names: Vec<String> = (0..=labels.len()).map(|i| format!("p{i}")).collect();
    let edges: Vec<(String, String, u32)> = labels
        .iter()
        .enumerate()
        .map(|(i, &m)| (names[i].clone(), names[i + 1].clone(), m))
        .collect();
    CoxeterDiagram::new(&names, &edges).unwrap()
}

/// Square matrices of the geometric representation, `B(e_s, e_t) = -cos(π/m)`
/// with `-1` for `m = ∞`.
pub struct Geometric {
    n: usize,
    gens: Vec<Vec<f64>>,
}

impl Geometric {
    pub fn new(d: &CoxeterDiagram) -> Self {
        let n = d.len();
        let b = |s: Gen, t: Gen| -> f64 {
            if s == t {
                1.0
            } else {
                match d.label(s, t) {
                    Some(m) => -(std::f64::consts::PI / m as f64).cos(),
                    None => -1.0,
                }
            }
        };
        let gens = d
            .gens()
            .map(|s| {
                let mut m = identity(n);
                for t in d.gens() {
                    // σ_s(e_t) = e_t - 2 B(e_s, e_t) e_s, stored column-wise.
                    m[s.index() * n + t.index()] -= 2.0 * b(s, t);
                }
                m
            })
            .collect();
        Geometric { n, gens }
    }

    pub fn matrix(&self, w: &Word) -> Vec<f64> {
        w.letters()
            .iter()
            .fold(identity(self.n), |acc, g| mul(self.n, &acc, &self.gens[g.index()]))
    }

    /// Traces of `θ(w)` for every word `w` of length 2 to `max_len`, where
    /// `θ` sends each generator to the given image.
    pub fn trace_profile(&self, images: &[Word], max_len: usize) -> Vec<f64> {
        let mats: Vec<Vec<f64>> = images.iter().map(|w| self.matrix(w)).collect();
        let mut out = Vec::new();
        let mut frontier: Vec<(Vec<usize>, Vec<f64>)> =
            (0..self.n).map(|i| (vec![i], mats[i].clone())).collect();
        for _ in 2..=max_len {
            let mut next = Vec::new();
            for (w, m) in &frontier {
                for (i, g) in mats.iter().enumerate() {
                    if w.last() == Some(&i) {
                        continue;
                    }
                    let p = mul(self.n, m, g);
                    out.push((0..self.n).map(|k| p[k * self.n + k]).sum());
                    let mut w2 = w.clone();
                    w2.push(i);
                    next.push((w2, p));
                }
            }
            frontier = next;
        }
        out
    }
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn mul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0.0 {
                for j in 0..n {
                    c[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    c
}

/// Profiles differ somewhere beyond rounding.
pub fn profiles_differ(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .any(|(x, y)| (x - y).abs() > 1e-6 * (1.0 + x.abs().max(y.abs())))
}
