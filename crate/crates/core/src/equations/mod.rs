//! Identities evaluated in finite monoids.

pub mod bases;
mod isoterm;
mod member;
mod relfree;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::deduction::is_canonical;
use crate::error::{Error, Result};
use crate::monoids::FiniteMonoid;
use crate::words::{Identity, Variable, Word};

pub use isoterm::{isoterm, isoterm_class, isoterm_falsify, FalsifierReport, IsotermBudget, IsotermVerdict};
pub use member::{member, member_class, stock_identities, MemberCaps, MemberVerdict};
pub use relfree::{rel_free, rel_free_class, RelFree, RelFreeCaps};

/// Default number of substitutions `satisfies` may enumerate.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Value of `w` under an assignment of elements to variables.
pub fn evaluate(m: &FiniteMonoid, w: &Word, theta: &BTreeMap<Variable, usize>) -> Result<usize> {
    let seq = w
        .letters()
        .iter()
        .map(|v| theta.get(v).copied().ok_or_else(|| Error::Unmapped(v.to_string())))
        .collect::<Result<Vec<_>>>()?;
    m.eval_indices(&seq)
        .ok_or_else(|| Error::invalid(format!("{} has no identity for the empty word", m.name)))
}

/// A failing substitution, with variables listed in order of first
/// occurrence in the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub monoid: String,
    pub assignment: Vec<(Variable, String)>,
    pub lhs_value: String,
    pub rhs_value: String,
}

impl Witness {
    pub fn value_of(&self, v: Variable) -> Option<&str> {
        self.assignment
            .iter()
            .find(|(u, _)| *u == v)
            .map(|(_, l)| l.as_str())
    }

    /// Re-evaluates the identity under this assignment; true if the two
    /// sides really differ.
    pub fn recheck(&self, m: &FiniteMonoid, id: &Identity) -> bool {
        let theta: Option<BTreeMap<Variable, usize>> = self
            .assignment
            .iter()
            .map(|(v, l)| m.index_of(l).map(|i| (*v, i)))
            .collect();
        let Some(theta) = theta else { return false };
        match (evaluate(m, &id.lhs, &theta), evaluate(m, &id.rhs, &theta)) {
            (Ok(a), Ok(b)) => a != b && m.label(a) == self.lhs_value && m.label(b) == self.rhs_value,
            _ => false,
        }
    }
}

impl fmt::Display for Witness {
    /// `x=b y=c h=a` followed by the two values.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.assignment.iter().map(|(v, l)| format!("{v}={l}")).collect();
        write!(f, "{} gives {} != {}", parts.join(" "), self.lhs_value, self.rhs_value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatisfactionResult {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Both sides of an identity compiled to variable indices.
struct Compiled {
    vars: Vec<Variable>,
    lhs: Vec<usize>,
    rhs: Vec<usize>,
}

fn compile(id: &Identity) -> Compiled {
    let vars: Vec<Variable> = id.content().into_iter().collect();
    let idx = |w: &Word| -> Vec<usize> {
        w.letters()
            .iter()
            .map(|v| vars.binary_search(v).expect("variable in content"))
            .collect()
    };
    Compiled {
        lhs: idx(&id.lhs),
        rhs: idx(&id.rhs),
        vars,
    }
}

#[inline]
fn eval_seq(m: &FiniteMonoid, seq: &[usize], assign: &[usize], identity: usize) -> usize {
    seq.iter().fold(identity, |acc, &i| {
        if acc == usize::MAX {
            assign[i]
        } else {
            m.mul(acc, assign[i])
        }
    })
}

/// Scans the block of assignments whose first digit is `first`, in
/// mixed-radix order with the last variable fastest.
fn first_failure_in_block(m: &FiniteMonoid, c: &Compiled, first: usize) -> Option<Vec<usize>> {
    let n = m.order();
    let k = c.vars.len();
    // usize::MAX stands for "no element yet"; the empty side falls back to the identity.
    let start = usize::MAX;
    let finish = |v: usize| if v == usize::MAX { m.identity.unwrap_or(usize::MAX) } else { v };
    let mut assign = vec![0usize; k];
    if k > 0 {
        assign[0] = first;
    }
    loop {
        let l = finish(eval_seq(m, &c.lhs, &assign, start));
        let r = finish(eval_seq(m, &c.rhs, &assign, start));
        if l != r {
            return Some(assign);
        }
        let mut pos = k;
        loop {
            if pos <= 1 {
                return None;
            }
            pos -= 1;
            assign[pos] += 1;
            if assign[pos] < n {
                break;
            }
            assign[pos] = 0;
        }
    }
}

/// Exhaustive check of `m ⊨ id` over all substitutions, within `budget`
/// evaluations. The first failing substitution in canonical order (variables
/// by name, first variable most significant) is reported.
pub fn satisfies_with_budget(m: &FiniteMonoid, id: &Identity, budget: u128) -> Result<SatisfactionResult> {
    if (id.lhs.is_empty() || id.rhs.is_empty()) && m.identity.is_none() {
        return Err(Error::invalid(format!(
            "{} has no identity element to interpret the empty word",
            m.name
        )));
    }
    let c = compile(id);
    let n = m.order() as u128;
    let needed = n.checked_pow(c.vars.len() as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let found = if c.vars.is_empty() {
        first_failure_in_block(m, &c, 0)
    } else if needed < 20_000 {
        (0..m.order()).find_map(|f| first_failure_in_block(m, &c, f))
    } else {
        let per_block: Vec<Option<Vec<usize>>> = (0..m.order())
            .into_par_iter()
            .map(|f| first_failure_in_block(m, &c, f))
            .collect();
        per_block.into_iter().flatten().next()
    };
    Ok(match found {
        None => SatisfactionResult {
            holds: true,
            witness: None,
        },
        Some(assign) => {
            let theta: BTreeMap<Variable, usize> =
                c.vars.iter().copied().zip(assign.iter().copied()).collect();
            let l = evaluate(m, &id.lhs, &theta)?;
            let r = evaluate(m, &id.rhs, &theta)?;
            let mut order: Vec<Variable> = Vec::new();
            for v in id.lhs.letters().iter().chain(id.rhs.letters()) {
                if !order.contains(v) {
                    order.push(*v);
                }
            }
            SatisfactionResult {
                holds: false,
                witness: Some(Witness {
                    monoid: m.name.clone(),
                    assignment: order.iter().map(|v| (*v, m.label(theta[v]).to_owned())).collect(),
                    lhs_value: m.label(l).to_owned(),
                    rhs_value: m.label(r).to_owned(),
                }),
            }
        }
    })
}

/// [`satisfies_with_budget`] with the default budget.
pub fn satisfies(m: &FiniteMonoid, id: &Identity) -> Result<SatisfactionResult> {
    satisfies_with_budget(m, id, DEFAULT_BUDGET)
}

/// True iff every monoid of the class satisfies `id`.
pub fn satisfies_class(ms: &[FiniteMonoid], id: &Identity, budget: u128) -> Result<SatisfactionResult> {
    for m in ms {
        let r = satisfies_with_budget(m, id, budget)?;
        if !r.holds {
            return Ok(r);
        }
    }
    Ok(SatisfactionResult {
        holds: true,
        witness: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisReport {
    pub monoid: String,
    pub results: Vec<(Identity, SatisfactionResult)>,
}

impl BasisReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|(_, r)| r.holds)
    }
}

pub fn satisfies_all(m: &FiniteMonoid, sigma: &[Identity]) -> Result<BasisReport> {
    let results = sigma
        .iter()
        .map(|id| Ok((id.clone(), satisfies(m, id)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BasisReport {
        monoid: m.name.clone(),
        results,
    })
}

/// Adds every nontrivial identity obtained by deleting a set of variables
/// (assigning them 1), without duplicates. Original order is kept, with new
/// identities following in shortlex order of their variable subsets.
pub fn close_under_deletion(sigma: &[Identity]) -> Vec<Identity> {
    let mut seen: BTreeSet<Identity> = BTreeSet::new();
    let mut out = Vec::new();
    for id in sigma {
        if seen.insert(id.clone()) {
            out.push(id.clone());
        }
    }
    for id in sigma {
        let vars: Vec<Variable> = id.content().into_iter().collect();
        let k = vars.len();
        let mut subsets: Vec<BTreeSet<Variable>> = (0u64..(1u64 << k))
            .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).map(|i| vars[i]).collect())
            .collect();
        subsets.sort_by(|a: &BTreeSet<Variable>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        for keep in subsets.iter().rev() {
            let p = id.project(keep);
            if !p.is_trivial() && seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    out
}

/// The syntactic criteria for `Q¹` (on canonical words) and `L₂¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LqVerdict {
    pub q_holds: bool,
    pub l_holds: bool,
}

/// `q_holds`: same separators in the same order and blockwise equal contents.
/// `l_holds`: `ini(u) = ini(v)`. Both words must be canonical.
pub fn lq_equiv_syntactic(u: &Word, v: &Word) -> Result<LqVerdict> {
    let cu = is_canonical(u).ok_or_else(|| Error::Precondition(format!("{u} is not canonical")))?;
    let cv = is_canonical(v).ok_or_else(|| Error::Precondition(format!("{v} is not canonical")))?;
    let q_holds = cu.separators == cv.separators
        && cu
            .blocks
            .iter()
            .zip(&cv.blocks)
            .all(|(a, b)| a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>());
    Ok(LqVerdict {
        q_holds,
        l_holds: u.ini() == v.ini(),
    })
}
