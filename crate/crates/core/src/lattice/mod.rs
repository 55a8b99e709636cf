//! Variety lattices as hand-encoded poset data.

mod format;
mod semantic;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

pub use format::parse_poset;
pub use semantic::{semantic_check_all, semantic_check_edge, EdgeCheck, EdgeVerdict, SemanticCaps};

use crate::error::{Error, Result};
use crate::words::Identity;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VarietyNode {
    pub id: String,
    pub label: String,
    /// Catalog names whose join generates the variety.
    pub generators: Vec<String>,
    pub identities: Vec<Identity>,
}

impl VarietyNode {
    pub fn is_checkable(&self) -> bool {
        !self.generators.is_empty() || !self.identities.is_empty()
    }
}

/// Nodes plus cover pairs `(lower, upper)` as node indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Poset {
    pub name: String,
    pub nodes: Vec<VarietyNode>,
    pub covers: Vec<(usize, usize)>,
}

const FIGURES: &[(&str, &str)] = &[
    ("Fig1", include_str!("../../data/figures/Fig1.poset")),
    ("Fig2", include_str!("../../data/figures/Fig2.poset")),
    ("Fig3", include_str!("../../data/figures/Fig3.poset")),
    ("Fig4", include_str!("../../data/figures/Fig4.poset")),
];

pub const DEFAULT_DEPTH: usize = 3;

pub fn figure_names() -> Vec<&'static str> {
    FIGURES.iter().map(|(n, _)| *n).collect()
}

/// Loads a shipped figure; `depth` is the last `σ_n` kept in the chain of
/// Fig4 and is ignored by the others.
pub fn load_figure(name: &str, depth: usize) -> Result<Poset> {
    if depth == 0 {
        return Err(Error::invalid("truncation depth must be at least 1"));
    }
    let (_, text) = FIGURES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownName(format!("figure {name}")))?;
    parse_poset(text, depth)
}

impl Poset {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// `leq[a][b]` iff `a ≤ b` in the reflexive-transitive closure.
    pub fn order_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &self.covers {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        leq
    }

    /// The sub-poset on the nodes `≤ top`, with covers restricted.
    pub fn down_set(&self, top: usize) -> Poset {
        let leq = self.order_matrix();
        let keep: Vec<usize> = (0..self.len()).filter(|&i| leq[i][top]).collect();
        let new_index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        Poset {
            name: format!("{} below {}", self.name, self.nodes[top].id),
            nodes: keep.iter().map(|&i| self.nodes[i].clone()).collect(),
            covers: self
                .covers
                .iter()
                .filter_map(|(a, b)| Some((*new_index.get(a)?, *new_index.get(b)?)))
                .collect(),
        }
    }

    /// Length of the longest chain from a minimal node.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.len();
        let mut h = vec![0; n];
        // covers are few; relax until stable (at most n rounds on an acyclic poset)
        for _ in 0..n {
            let mut changed = false;
            for &(a, b) in &self.covers {
                if h[b] < h[a] + 1 {
                    h[b] = h[a] + 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LatticeProblem {
    Cycle { a: String, b: String },
    SelfCover { node: String },
    RedundantCover { lower: String, upper: String },
    NoJoin { a: String, b: String },
    NoMeet { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub name: String,
    pub nodes: usize,
    pub covers: usize,
    pub is_lattice: bool,
    pub problems: Vec<LatticeProblem>,
}

/// Index of the least element of `set` under `leq`, if there is one.
fn least(set: &[usize], leq: &[Vec<bool>]) -> Option<usize> {
    set.iter().copied().find(|&c| set.iter().all(|&d| leq[c][d]))
}

/// Checks the order axioms, that every cover is a genuine cover, and that
/// every pair has a join and a meet. Problems name the offending nodes.
pub fn validate_lattice(p: &Poset) -> LatticeReport {
    let n = p.len();
    let leq = p.order_matrix();
    let id = |i: usize| p.nodes[i].id.clone();
    let mut problems = Vec::new();
    for &(a, b) in &p.covers {
        if a == b {
            problems.push(LatticeProblem::SelfCover { node: id(a) });
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if leq[a][b] && leq[b][a] {
                problems.push(LatticeProblem::Cycle { a: id(a), b: id(b) });
            }
        }
    }
    let covers: BTreeSet<(usize, usize)> = p.covers.iter().copied().collect();
    for &(a, b) in &covers {
        if a != b && (0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b] && !leq[c][a] && !leq[b][c]) {
            problems.push(LatticeProblem::RedundantCover { lower: id(a), upper: id(b) });
        }
    }
    if problems.is_empty() {
        for a in 0..n {
            for b in a + 1..n {
                let ups: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
                if least(&ups, &leq).is_none() {
                    problems.push(LatticeProblem::NoJoin { a: id(a), b: id(b) });
                }
                let downs: Vec<usize> = (0..n).filter(|&c| leq[c][a] && leq[c][b]).collect();
                let flipped: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| leq[j][i]).collect()).collect();
                if least(&downs, &flipped).is_none() {
                    problems.push(LatticeProblem::NoMeet { a: id(a), b: id(b) });
                }
            }
        }
    }
    LatticeReport {
        name: p.name.clone(),
        nodes: n,
        covers: p.covers.len(),
        is_lattice: problems.is_empty(),
        problems,
    }
}

/// Number of subvarieties of `V ∨ 𝕍{Z₂}` when the lattice of `V` is `fig1`
/// and the group part contributes the four-element lattice.
pub fn m3_subvariety_count(fig1: &Poset) -> (usize, usize, usize) {
    const GROUP_PART: usize = 4;
    (fig1.len(), GROUP_PART, fig1.len() * GROUP_PART)
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT text, bottom to top, one `rank=same` group per height.
pub fn dot_export(p: &Poset) -> String {
    let mut out = format!("digraph {} {{\n", dot_quote(&p.name));
    if p.is_empty() {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  rankdir=BT;\n  node [shape=plaintext];\n  edge [arrowhead=none];\n");
    for nd in &p.nodes {
        writeln!(out, "  {} [label={}];", dot_quote(&nd.id), dot_quote(&nd.label)).unwrap();
    }
    let heights = p.heights();
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, h) in heights.iter().enumerate() {
        ranks.entry(*h).or_default().push(i);
    }
    for members in ranks.values() {
        let names: Vec<String> = members.iter().map(|&i| dot_quote(&p.nodes[i].id)).collect();
        writeln!(out, "  {{ rank=same; {}; }}", names.join("; ")).unwrap();
    }
    let mut covers = p.covers.clone();
    covers.sort_by_key(|&(a, b)| (heights[a], a, b));
    for (a, b) in covers {
        writeln!(out, "  {} -> {};", dot_quote(&p.nodes[a].id), dot_quote(&p.nodes[b].id)).unwrap();
    }
    out.push_str("}\n");
    out
}
