//! Syntactic reasoning: direct deducibility, derivation scripts, bounded
//! proof search, canonical forms for `E¹` and the reduction to `σ_n`.

mod canonical;
pub mod golden;
mod lambda;
mod script;
mod search;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::words::{match_exact, Identity, MatchOptions, Substitution, Word};

pub use canonical::{is_canonical, CanonicalWord};
pub use lambda::{lambda_reduce, sigma_classify, Block, LambdaIdentity, Orientation, SigmaClass};
pub use script::{DerivationScript, NamedRule, ScriptStep};
pub use search::{derive_bounded, neighbours, to_canonical, DeriveCaps, DeriveOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `from = a·(lhs θ)·b`, `to = a·(rhs θ)·b`.
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// One application of a rule inside a context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub from: Word,
    pub to: Word,
    pub rule: Identity,
    pub direction: Direction,
    pub theta: Substitution,
    pub left: Word,
    pub right: Word,
}

impl DerivationStep {
    fn sides(&self) -> (&Word, &Word) {
        match self.direction {
            Direction::Forward => (&self.rule.lhs, &self.rule.rhs),
            Direction::Backward => (&self.rule.rhs, &self.rule.lhs),
        }
    }

    /// True iff `from` and `to` are exactly `a(uθ)b` and `a(vθ)b`.
    pub fn reconstructs(&self) -> bool {
        let (u, v) = self.sides();
        let build = |w: &Word| self.left.concat(&w.substitute(&self.theta)).concat(&self.right);
        build(u) == self.from && build(v) == self.to
    }

    pub fn reversed(&self) -> DerivationStep {
        DerivationStep {
            from: self.to.clone(),
            to: self.from.clone(),
            direction: self.direction.flip(),
            ..self.clone()
        }
    }
}

impl fmt::Display for DerivationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.direction {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        };
        write!(
            f,
            "{} ~ {}   by {} {arrow} [{}] a={} b={}",
            self.from, self.to, self.rule, self.theta, self.left, self.right
        )
    }
}

/// Finds `θ, a, b` with `{target.lhs, target.rhs} = {a(uθ)b, a(vθ)b}` for the
/// rule `u ≈ v`. The step leads from `target.lhs` to `target.rhs`.
pub fn directly_deducible(target: &Identity, rule: &Identity) -> Option<DerivationStep> {
    let (s, t) = (target.lhs.letters(), target.rhs.letters());
    if s == t {
        return None;
    }
    let lcp = s.iter().zip(t).take_while(|(a, b)| a == b).count();
    let lcs = s.iter().rev().zip(t.iter().rev()).take_while(|(a, b)| a == b).count();
    let opts = MatchOptions::default();
    for direction in [Direction::Forward, Direction::Backward] {
        let (u, v) = match direction {
            Direction::Forward => (&rule.lhs, &rule.rhs),
            Direction::Backward => (&rule.rhs, &rule.lhs),
        };
        for a in 0..=lcp {
            let max_b = lcs.min(s.len() - a).min(t.len() - a);
            for b in 0..=max_b {
                let mid_s = Word::from_vars(s[a..s.len() - b].to_vec());
                let mid_t = Word::from_vars(t[a..t.len() - b].to_vec());
                for theta in match_exact(u, &mid_s, &Substitution::new(), opts) {
                    if let Some(theta) = match_exact(v, &mid_t, &theta, opts).into_iter().next() {
                        return Some(DerivationStep {
                            from: target.lhs.clone(),
                            to: target.rhs.clone(),
                            rule: rule.clone(),
                            direction,
                            theta,
                            left: Word::from_vars(s[..a].to_vec()),
                            right: Word::from_vars(s[s.len() - b..].to_vec()),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Why a derivation was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepFailure {
    pub index: usize,
    pub reason: String,
}

impl fmt::Display for StepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.index, self.reason)
    }
}

/// Checks that every step reconstructs, uses a rule of `sigma`, chains onto
/// the previous one, and that the words along the derivation are distinct.
pub fn check_derivation(steps: &[DerivationStep], sigma: &[Identity]) -> Result<(), StepFailure> {
    let fail = |index: usize, reason: String| Err(StepFailure { index, reason });
    let mut seen = std::collections::HashSet::new();
    for (i, st) in steps.iter().enumerate() {
        if !sigma.contains(&st.rule) {
            return fail(i, format!("rule {} is not among the allowed identities", st.rule));
        }
        if st.from == st.to {
            return fail(i, format!("{} is rewritten to itself", st.from));
        }
        if !st.reconstructs() {
            return fail(i, "context and substitution do not reproduce the words".into());
        }
        if i > 0 && steps[i - 1].to != st.from {
            return fail(i, format!("{} does not continue from {}", st.from, steps[i - 1].to));
        }
        if i == 0 {
            seen.insert(st.from.clone());
        }
        if !seen.insert(st.to.clone()) {
            return fail(i, format!("{} occurs twice in the derivation", st.to));
        }
    }
    Ok(())
}

/// The identity proved by a nonempty chain of steps.
pub fn conclusion(steps: &[DerivationStep]) -> Option<Identity> {
    Some(Identity::new(steps.first()?.from.clone(), steps.last()?.to.clone()))
}
