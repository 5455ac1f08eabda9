//! The word problem, solved by braid moves and cancellation.
//!
//! A word is reduced iff no word in its braid-move orbit contains two equal
//! adjacent letters. Reduction is incremental: a reduced prefix `r` extended
//! by `s` stays reduced unless some reduced expression of `r` ends in `s`,
//! in which case that letter cancels. The normal form is the shortlex-least
//! member of the final orbit.

use std::collections::{HashSet, VecDeque};

use crate::diagram::{CoxeterDiagram, Gen};
use crate::error::{Error, Result};
use crate::word::{shortlex, Word};

/// Default cap on the number of words in a single braid orbit.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct Oracle<'d> {
    diagram: &'d CoxeterDiagram,
    budget: usize,
}

impl<'d> Oracle<'d> {
    pub fn new(diagram: &'d CoxeterDiagram) -> Self {
        Oracle {
            diagram,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(diagram: &'d CoxeterDiagram, budget: usize) -> Self {
        Oracle { diagram, budget }
    }

    pub fn diagram(&self) -> &'d CoxeterDiagram {
        self.diagram
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Braid moves available at position `p`: an alternating subword of
    /// length `m_st` starting at `p`.
    fn braid_at(&self, w: &[Gen], p: usize) -> Option<usize> {
        let s = *w.get(p)?;
        let t = *w.get(p + 1)?;
        if s == t {
            return None;
        }
        let m = self.diagram.label(s, t)? as usize;
        if p + m > w.len() {
            return None;
        }
        let alternating = (0..m).all(|i| w[p + i] == if i % 2 == 0 { s } else { t });
        alternating.then_some(m)
    }

    fn has_braid_move(&self, w: &[Gen]) -> bool {
        (0..w.len().saturating_sub(1)).any(|p| self.braid_at(w, p).is_some())
    }

    /// Breadth-first search of the braid orbit of `start`. Stops early and
    /// returns the member when `found` accepts one.
    fn explore(
        &self,
        start: &[Gen],
        mut found: impl FnMut(&[Gen]) -> bool,
        mut visit: impl FnMut(&[Gen]),
    ) -> Result<Option<Vec<Gen>>> {
        if found(start) {
            return Ok(Some(start.to_vec()));
        }
        visit(start);
        if !self.has_braid_move(start) {
            return Ok(None);
        }
        let mut seen: HashSet<Vec<Gen>> = HashSet::new();
        seen.insert(start.to_vec());
        let mut queue = VecDeque::from([start.to_vec()]);
        while let Some(w) = queue.pop_front() {
            for p in 0..w.len().saturating_sub(1) {
                let Some(m) = self.braid_at(&w, p) else {
                    continue;
                };
                let mut next = w.clone();
                for i in 0..m {
                    next[p + i] = if i % 2 == 0 { w[p + 1] } else { w[p] };
                }
                if seen.contains(&next) {
                    continue;
                }
                if found(&next) {
                    return Ok(Some(next));
                }
                visit(&next);
                seen.insert(next.clone());
                if seen.len() > self.budget {
                    return Err(Error::BudgetExceeded {
                        budget: self.budget,
                    });
                }
                queue.push_back(next);
            }
        }
        Ok(None)
    }

    /// Minimal-length, shortlex-least representative of `w`.
    pub fn reduce(&self, w: &Word) -> Result<Word> {
        let mut current: Vec<Gen> = Vec::with_capacity(w.len());
        for &s in w.letters() {
            if current.last() == Some(&s) {
                current.pop();
                continue;
            }
            let ending = self.explore(&current, |x| x.last() == Some(&s), |_| {})?;
            match ending {
                Some(mut expr) => {
                    expr.pop();
                    current = expr;
                }
                None => current.push(s),
            }
        }
        let mut best = current.clone();
        self.explore(
            &current,
            |_| false,
            |x| {
                if shortlex(x, &best).is_lt() {
                    best = x.to_vec();
                }
            },
        )?;
        Ok(Word(best))
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.reduce(w)?.is_empty())
    }

    /// `true` iff `a` and `b` represent the same group element.
    pub fn equal(&self, a: &Word, b: &Word) -> Result<bool> {
        self.is_identity(&a.concat(&b.inverse()))
    }

    pub fn commute(&self, a: &Word, b: &Word) -> Result<bool> {
        self.equal(&a.concat(b), &b.concat(a))
    }

    /// Reduced product of the given words.
    pub fn mul(&self, words: &[&Word]) -> Result<Word> {
        self.reduce(&Word::product(words.iter().copied()))
    }
}

pub fn tits_reduce(w: &Word, d: &CoxeterDiagram) -> Result<Word> {
    Oracle::new(d).reduce(w)
}

pub fn equal(a: &Word, b: &Word, d: &CoxeterDiagram) -> Result<bool> {
    Oracle::new(d).equal(a, b)
}

/// The defining relators: `ss` per vertex and `(st)^m` per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorSet {
    pub squares: Vec<Word>,
    pub braids: Vec<Word>,
}

impl RelatorSet {
    pub fn all(&self) -> impl Iterator<Item = &Word> {
        self.squares.iter().chain(&self.braids)
    }

    pub fn len(&self) -> usize {
        self.squares.len() + self.braids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn relators(d: &CoxeterDiagram) -> RelatorSet {
    RelatorSet {
        squares: d.gens().map(|g| Word(vec![g, g])).collect(),
        braids: d
            .edges()
            .into_iter()
            .map(|(a, b, m)| Word::alternating(a, b, m as usize))
            .collect(),
    }
}
