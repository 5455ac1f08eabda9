//! Words over the generators. Every generator is an involution, so the
//! inverse of a word is its reversal and there are no signed letters.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::diagram::{CoxeterDiagram, Gen};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: Gen) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn product<'a>(words: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut v = Vec::new();
        for w in words {
            v.extend_from_slice(&w.0);
        }
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// `w x w⁻¹`.
    pub fn conjugate(&self, x: &Word) -> Word {
        Word::product([self, x, &self.inverse()])
    }

    /// `(ab)^k`.
    pub fn alternating(a: Gen, b: Gen, k: usize) -> Word {
        Word([a, b].repeat(k))
    }

    /// Cancels adjacent equal letters until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Gen> = Vec::with_capacity(self.len());
        for &g in &self.0 {
            if out.last() == Some(&g) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        Word(out)
    }

    pub fn uses_only(&self, allowed: &[Gen]) -> bool {
        self.0.iter().all(|g| allowed.contains(g))
    }

    /// Parses whitespace-separated generator names; `1` (or nothing) is the
    /// empty word.
    pub fn parse(text: &str, d: &CoxeterDiagram) -> Result<Word> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(Word::empty());
        }
        text.split_whitespace()
            .map(|t| d.gen(t).ok_or_else(|| Error::UnknownGenerator(t.into())))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render(&self, d: &CoxeterDiagram) -> String {
        if self.is_empty() {
            return "1".into();
        }
        let mut s = String::new();
        for (i, &g) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{}", d.name(g));
        }
        s
    }
}

impl From<Vec<Gen>> for Word {
    fn from(v: Vec<Gen>) -> Self {
        Word(v)
    }
}

/// Shortlex order: shorter first, then lexicographic on generator index.
pub fn shortlex(a: &[Gen], b: &[Gen]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}
