//! Finite monoids and semigroups given by Cayley tables.

mod catalog;
mod format;
mod iso;
mod presentation;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::Word;

pub use catalog::{catalog, catalog_names, cyclic_group, symmetric_group_s3};
pub use format::{parse_monoid_file, write_monoid_file, MonoidJson};
pub use iso::{find_isomorphism, Isomorphism};
pub use presentation::{from_presentation, Presentation, Side};

/// A finite semigroup table, optionally with an identity element.
///
/// Semigroups such as `E` or `B2` have no identity; [`adjoin_identity`]
/// turns them into monoids.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    pub name: String,
    pub elements: Vec<String>,
    pub identity: Option<usize>,
    pub table: Vec<Vec<usize>>,
}

/// The first failure found by [`FiniteMonoid::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Associativity { a: String, b: String, c: String },
    Identity { x: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { a, b, c } => {
                write!(f, "({a}·{b})·{c} != {a}·({b}·{c})")
            }
            Violation::Identity { x } => write!(f, "identity law fails at {x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub order: usize,
    pub violation: Option<Violation>,
}

impl FiniteMonoid {
    /// Builds a table and checks its shape (not its axioms).
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        identity: Option<usize>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::invalid("a monoid needs at least one element"));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!(
                "table dimensions do not match {n} elements"
            )));
        }
        if table.iter().flatten().any(|&v| v >= n) || identity.is_some_and(|e| e >= n) {
            return Err(Error::invalid("table entry out of range"));
        }
        let distinct: BTreeSet<&String> = elements.iter().collect();
        if distinct.len() != n {
            return Err(Error::invalid("duplicate element labels"));
        }
        Ok(FiniteMonoid {
            name: name.into(),
            elements,
            identity,
            table,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    /// Product of a sequence of element labels.
    pub fn product_of(&self, labels: &[&str]) -> Result<usize> {
        let mut acc: Option<usize> = None;
        for l in labels {
            let i = self
                .index_of(l)
                .ok_or_else(|| Error::UnknownName(format!("element {l} of {}", self.name)))?;
            acc = Some(match acc {
                None => i,
                Some(a) => self.mul(a, i),
            });
        }
        acc.or(self.identity)
            .ok_or_else(|| Error::invalid("empty product in a semigroup without identity"))
    }

    /// Index of a two-sided zero, if there is one.
    pub fn zero(&self) -> Option<usize> {
        (0..self.order()).find(|&z| (0..self.order()).all(|x| self.mul(z, x) == z && self.mul(x, z) == z))
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    /// Checks associativity and, when an identity is declared, the identity law.
    pub fn validate(&self) -> ValidationReport {
        let n = self.order();
        let violation = (|| {
            if let Some(e) = self.identity {
                for x in 0..n {
                    if self.mul(e, x) != x || self.mul(x, e) != x {
                        return Some(Violation::Identity {
                            x: self.elements[x].clone(),
                        });
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Some(Violation::Associativity {
                                a: self.elements[a].clone(),
                                b: self.elements[b].clone(),
                                c: self.elements[c].clone(),
                            });
                        }
                    }
                }
            }
            None
        })();
        ValidationReport {
            ok: violation.is_none(),
            order: n,
            violation,
        }
    }

    /// Reverses the multiplication: `a ∘ b = b·a`.
    pub fn transpose(&self) -> FiniteMonoid {
        let n = self.order();
        let table = (0..n)
            .map(|a| (0..n).map(|b| self.mul(b, a)).collect())
            .collect();
        FiniteMonoid {
            name: format!("{}^op", self.name),
            elements: self.elements.clone(),
            identity: self.identity,
            table,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The subsemigroup generated by `gens`, as sorted element indices.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &g in gens {
            if !seen[g] {
                seen[g] = true;
                queue.push_back(g);
            }
        }
        let mut members: Vec<usize> = queue.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            let current = members.clone();
            for &y in &current {
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if !seen[p] {
                        seen[p] = true;
                        members.push(p);
                        queue.push_back(p);
                    }
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    /// Restriction of the table to `subset` (which must be closed).
    fn restrict(&self, name: String, subset: &[usize]) -> FiniteMonoid {
        let pos: HashMap<usize, usize> = subset.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = subset
            .iter()
            .map(|&a| subset.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        FiniteMonoid {
            name,
            elements: subset.iter().map(|&i| self.elements[i].clone()).collect(),
            identity: self.identity.and_then(|e| pos.get(&e).copied()),
            table,
        }
    }

    /// Evaluates a word given generator images; the empty word maps to the identity.
    pub fn eval_indices(&self, seq: &[usize]) -> Option<usize> {
        let mut it = seq.iter();
        let first = match it.next() {
            Some(&f) => f,
            None => return self.identity,
        };
        Some(it.fold(first, |acc, &x| self.mul(acc, x)))
    }
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_monoid_file(self))
    }
}

/// `S¹`: adjoins a fresh identity element labelled `1`, even if `S` already
/// has one.
pub fn adjoin_identity(s: &FiniteMonoid) -> FiniteMonoid {
    let n = s.order();
    let mut label = "1".to_string();
    while s.elements.contains(&label) {
        label.push('\'');
    }
    let mut elements = s.elements.clone();
    elements.push(label);
    let mut table: Vec<Vec<usize>> = s
        .table
        .iter()
        .enumerate()
        .map(|(a, row)| {
            let mut r = row.clone();
            r.push(a);
            r
        })
        .collect();
    table.push((0..=n).collect());
    FiniteMonoid {
        name: format!("{}^1", s.name),
        elements,
        identity: Some(n),
        table,
    }
}

/// Componentwise product; element `(i, j)` sits at index `i·|B| + j`.
pub fn direct_product(a: &FiniteMonoid, b: &FiniteMonoid) -> FiniteMonoid {
    let (na, nb) = (a.order(), b.order());
    let mut elements = Vec::with_capacity(na * nb);
    for x in &a.elements {
        for y in &b.elements {
            elements.push(format!("({x},{y})"));
        }
    }
    let mut table = vec![vec![0; na * nb]; na * nb];
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    table[i1 * nb + j1][i2 * nb + j2] = a.mul(i1, i2) * nb + b.mul(j1, j2);
                }
            }
        }
    }
    let identity = match (a.identity, b.identity) {
        (Some(e), Some(f)) => Some(e * nb + f),
        _ => None,
    };
    FiniteMonoid {
        name: format!("{} x {}", a.name, b.name),
        elements,
        identity,
        table,
    }
}

/// Product of a nonempty list of monoids.
pub fn direct_product_all(ms: &[FiniteMonoid]) -> Result<FiniteMonoid> {
    let (first, rest) = ms
        .split_first()
        .ok_or_else(|| Error::invalid("empty product"))?;
    Ok(rest.iter().fold(first.clone(), |acc, m| direct_product(&acc, m)))
}

/// The closure of `gens ∪ {1}` under the table.
pub fn submonoid(m: &FiniteMonoid, gens: &[usize]) -> Result<FiniteMonoid> {
    if gens.is_empty() {
        return Err(Error::invalid("submonoid needs at least one generator"));
    }
    if let Some(&g) = gens.iter().find(|&&g| g >= m.order()) {
        return Err(Error::invalid(format!("element index {g} out of range")));
    }
    let mut all = gens.to_vec();
    all.extend(m.identity);
    let subset = m.closure(&all);
    let names: Vec<&str> = gens.iter().map(|&g| m.label(g)).collect();
    Ok(m.restrict(format!("<{}> in {}", names.join(","), m.name), &subset))
}

/// Same as [`submonoid`] but taking element labels.
pub fn submonoid_by_labels(m: &FiniteMonoid, labels: &[&str]) -> Result<FiniteMonoid> {
    let idx = labels
        .iter()
        .map(|l| {
            m.index_of(l)
                .ok_or_else(|| Error::UnknownName(format!("element {l} of {}", m.name)))
        })
        .collect::<Result<Vec<_>>>()?;
    submonoid(m, &idx)
}

fn word_label(w: &Word) -> String {
    w.to_string().replace(' ', ".")
}

/// The Rees quotient `M(W)`: all factors of words in `W` plus a zero.
///
/// Elements are listed as `1`, the remaining factors in shortlex order, then `0`.
pub fn rees_quotient(words: &[Word]) -> FiniteMonoid {
    let mut factors: BTreeSet<Word> = BTreeSet::new();
    factors.insert(Word::empty());
    for w in words {
        factors.extend(w.factors());
    }
    let list: Vec<Word> = factors.into_iter().collect();
    let index: HashMap<&Word, usize> = list.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let zero = list.len();
    let n = zero + 1;
    let mut table = vec![vec![zero; n]; n];
    for (i, u) in list.iter().enumerate() {
        for (j, v) in list.iter().enumerate() {
            if let Some(&k) = index.get(&u.concat(v)) {
                table[i][j] = k;
            }
        }
    }
    let mut elements: Vec<String> = list.iter().map(word_label).collect();
    elements.push("0".into());
    let name = format!(
        "M({})",
        words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
    );
    FiniteMonoid {
        name,
        elements,
        identity: Some(0),
        table,
    }
}
