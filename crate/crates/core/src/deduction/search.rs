use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{is_canonical, CanonicalWord, DerivationStep, Direction};
use crate::equations::{bases, satisfies};
use crate::error::{Error, Result};
use crate::monoids::catalog;
use crate::words::{match_occurrences, Identity, MatchOptions, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeriveCaps {
    pub max_len: usize,
    pub max_vars: usize,
    /// Total number of words the search may visit.
    pub max_visited: usize,
    /// Forbid empty images when instantiating rules.
    pub nonempty_images: bool,
}

impl Default for DeriveCaps {
    fn default() -> Self {
        DeriveCaps {
            max_len: 64,
            max_vars: 12,
            max_visited: 200_000,
            nonempty_images: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DeriveOutcome {
    Found(Vec<DerivationStep>),
    /// Every word within the length cap was explored: no derivation of
    /// bounded length exists.
    Exhausted { visited: usize },
    /// Stopped by `max_visited`; says nothing about existence.
    CapHit { visited: usize },
}

/// All words one direct step away from `w`, each with the first step (in
/// rule, orientation, position order) producing it. Orientations whose
/// target side has variables absent from the source side are skipped.
pub fn neighbours(w: &Word, sigma: &[Identity], caps: &DeriveCaps) -> Vec<(Word, DerivationStep)> {
    let opts = MatchOptions {
        nonempty: caps.nonempty_images,
    };
    let mut out: BTreeMap<Word, DerivationStep> = BTreeMap::new();
    for rule in sigma {
        for direction in [Direction::Forward, Direction::Backward] {
            let (u, v) = match direction {
                Direction::Forward => (&rule.lhs, &rule.rhs),
                Direction::Backward => (&rule.rhs, &rule.lhs),
            };
            if !v.content().is_subset(&u.content()) {
                continue;
            }
            for occ in match_occurrences(u, w, opts) {
                let left = w.slice(0, occ.start);
                let right = w.slice(occ.end, w.len());
                let to = left.concat(&v.substitute(&occ.theta)).concat(&right);
                if to == *w || to.len() > caps.max_len {
                    continue;
                }
                out.entry(to.clone()).or_insert_with(|| DerivationStep {
                    from: w.clone(),
                    to,
                    rule: rule.clone(),
                    direction,
                    theta: occ.theta,
                    left,
                    right,
                });
            }
        }
    }
    out.into_iter().collect()
}

/// Parent links: word → (predecessor, step predecessor→word).
type Tree = HashMap<Word, Option<(Word, DerivationStep)>>;

fn path_to(tree: &Tree, end: &Word) -> Vec<DerivationStep> {
    let mut steps = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, step))) = tree.get(&cur) {
        steps.push(step.clone());
        cur = prev.clone();
    }
    steps.reverse();
    steps
}

/// Bidirectional breadth-first search for a derivation of `target` from
/// `sigma`, expanding the smaller frontier one level at a time.
pub fn derive_bounded(sigma: &[Identity], target: &Identity, caps: &DeriveCaps) -> Result<DeriveOutcome> {
    if caps.max_len == 0 || caps.max_visited == 0 {
        return Err(Error::invalid("derivation caps must be positive"));
    }
    let nvars = target.content().len();
    if nvars > caps.max_vars || target.lhs.len().max(target.rhs.len()) > caps.max_len {
        return Err(Error::CapExceeded(format!("{target} exceeds the word caps")));
    }
    if target.is_trivial() {
        return Ok(DeriveOutcome::Found(Vec::new()));
    }
    let mut fwd: Tree = HashMap::from([(target.lhs.clone(), None)]);
    let mut bwd: Tree = HashMap::from([(target.rhs.clone(), None)]);
    let mut f_front = vec![target.lhs.clone()];
    let mut b_front = vec![target.rhs.clone()];
    loop {
        if f_front.is_empty() || b_front.is_empty() {
            return Ok(DeriveOutcome::Exhausted {
                visited: fwd.len() + bwd.len(),
            });
        }
        let forward = f_front.len() <= b_front.len();
        let (tree, other, front) = if forward {
            (&mut fwd, &bwd, &mut f_front)
        } else {
            (&mut bwd, &fwd, &mut b_front)
        };
        let mut next = Vec::new();
        for w in std::mem::take(front) {
            for (to, step) in neighbours(&w, sigma, caps) {
                if tree.contains_key(&to) {
                    continue;
                }
                let meet = other.contains_key(&to);
                tree.insert(to.clone(), Some((w.clone(), step)));
                if meet {
                    let (f, b) = if forward { (&*tree, other) } else { (other, &*tree) };
                    let mut steps = path_to(f, &to);
                    let back: Vec<DerivationStep> = path_to(b, &to).iter().rev().map(|s| s.reversed()).collect();
                    steps.extend(back);
                    return Ok(DeriveOutcome::Found(steps));
                }
                next.push(to);
            }
            if total(tree, other) > caps.max_visited {
                return Ok(DeriveOutcome::CapHit {
                    visited: total(tree, other),
                });
            }
        }
        next.sort();
        *front = next;
    }
}

fn total(a: &Tree, b: &Tree) -> usize {
    a.len() + b.len()
}

/// Breadth-first search under the `E¹` basis until a canonical word appears.
/// The result is checked against `E¹` by exhaustive evaluation when `w` has
/// at most six variables.
pub fn to_canonical(w: &Word, caps: &DeriveCaps) -> Result<(CanonicalWord, Vec<DerivationStep>)> {
    if let Some(c) = is_canonical(w) {
        return Ok((c, Vec::new()));
    }
    let sigma = bases::e_basis();
    let mut tree: Tree = HashMap::from([(w.clone(), None)]);
    let mut front = vec![w.clone()];
    while !front.is_empty() {
        let mut next = Vec::new();
        for u in std::mem::take(&mut front) {
            for (to, step) in neighbours(&u, &sigma, caps) {
                if tree.contains_key(&to) {
                    continue;
                }
                tree.insert(to.clone(), Some((u.clone(), step)));
                if let Some(c) = is_canonical(&to) {
                    let steps = path_to(&tree, &to);
                    if w.content().len() <= 6 {
                        let e1 = catalog("E^1")?;
                        if !satisfies(&e1, &Identity::new(w.clone(), to.clone()))?.holds {
                            return Err(Error::invalid(format!("{w} and {to} differ in E^1")));
                        }
                    }
                    return Ok((c, steps));
                }
                next.push(to);
            }
            if tree.len() > caps.max_visited {
                return Err(Error::CapExceeded(format!(
                    "no canonical form of {w} within {} visited words",
                    caps.max_visited
                )));
            }
        }
        next.sort();
        front = next;
    }
    Err(Error::CapExceeded(format!(
        "no canonical form of {w} within length {}",
        caps.max_len
    )))
}
