use rayon::prelude::*;
use serde::Serialize;

use super::{Poset, VarietyNode};
use crate::deduction::{derive_bounded, directly_deducible, DeriveCaps, DeriveOutcome};
use crate::equations::{member_class, satisfies_class, MemberCaps, MemberVerdict};
use crate::error::{Error, Result};
use crate::monoids::{catalog, FiniteMonoid};
use crate::words::Identity;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemanticCaps {
    pub member: MemberCaps,
    pub derive: DeriveCaps,
}

impl Default for SemanticCaps {
    fn default() -> Self {
        SemanticCaps {
            member: MemberCaps::default(),
            derive: DeriveCaps {
                max_visited: 20_000,
                ..DeriveCaps::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum EdgeVerdict {
    /// Inclusion confirmed and `witness` holds below but fails above.
    ConfirmedStrict { witness: Identity },
    ConfirmedInclusion,
    Unknown { reason: String },
    /// `witness` holds above but fails below, contradicting the figure.
    Refuted { witness: Identity },
}

impl EdgeVerdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, EdgeVerdict::ConfirmedStrict { .. } | EdgeVerdict::ConfirmedInclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeCheck {
    pub lower: String,
    pub upper: String,
    pub verdict: EdgeVerdict,
}

fn generators(n: &VarietyNode) -> Result<Vec<FiniteMonoid>> {
    n.generators.iter().map(|g| catalog(g)).collect()
}

enum Evidence {
    Yes,
    No(Identity),
    Unknown(String),
}

/// Is every identity of `ids` a consequence of `sigma`?
fn derivable(sigma: &[Identity], ids: &[Identity], caps: &DeriveCaps) -> Result<Evidence> {
    for id in ids {
        if sigma.contains(id) || sigma.iter().any(|r| directly_deducible(id, r).is_some()) {
            continue;
        }
        match derive_bounded(sigma, id, caps)? {
            DeriveOutcome::Found(_) => {}
            _ => return Ok(Evidence::Unknown(format!("no bounded derivation of {id}"))),
        }
    }
    Ok(Evidence::Yes)
}

/// Evidence that the variety of `lo` is contained in that of `hi`. A `No`
/// carries an identity holding in `hi` and failing in `lo`. Derivations are
/// only attempted when `derive` is set since they can never produce a `No`.
fn included(lo: &VarietyNode, hi: &VarietyNode, caps: &SemanticCaps, derive: bool) -> Result<Evidence> {
    let lo_gens = generators(lo)?;
    if !lo_gens.is_empty() && !hi.identities.is_empty() {
        for id in &hi.identities {
            if !satisfies_class(&lo_gens, id, caps.member.satisfy_budget)?.holds {
                return Ok(Evidence::No(id.clone()));
            }
        }
        return Ok(Evidence::Yes);
    }
    let hi_gens = generators(hi)?;
    if !lo_gens.is_empty() && !hi_gens.is_empty() {
        for g in &lo_gens {
            match member_class(g, &hi_gens, &caps.member)? {
                MemberVerdict::Member { .. } => {}
                MemberVerdict::NotMember { witness } => return Ok(Evidence::No(witness)),
                MemberVerdict::Unknown { reason } => return Ok(Evidence::Unknown(reason)),
            }
        }
        return Ok(Evidence::Yes);
    }
    if derive && !lo.identities.is_empty() && !hi.identities.is_empty() {
        return derivable(&lo.identities, &hi.identities, &caps.derive);
    }
    Ok(Evidence::Unknown(format!("nothing to compare between {} and {}", lo.id, hi.id)))
}

/// Checks one cover `(lower, upper)` of `p` against the generators and
/// defining identities of its endpoints. The figure itself is never changed.
pub fn semantic_check_edge(p: &Poset, edge: (usize, usize), caps: &SemanticCaps) -> Result<EdgeCheck> {
    let (lo, hi) = (&p.nodes[edge.0], &p.nodes[edge.1]);
    let done = |verdict| {
        Ok(EdgeCheck {
            lower: lo.id.clone(),
            upper: hi.id.clone(),
            verdict,
        })
    };
    if !lo.is_checkable() || !hi.is_checkable() {
        return done(EdgeVerdict::Unknown {
            reason: "an endpoint has neither generators nor identities".into(),
        });
    }
    match included(lo, hi, caps, true)? {
        Evidence::Yes => {}
        Evidence::No(witness) => return done(EdgeVerdict::Refuted { witness }),
        Evidence::Unknown(reason) => return done(EdgeVerdict::Unknown { reason }),
    }
    match included(hi, lo, caps, false) {
        Ok(Evidence::No(witness)) => done(EdgeVerdict::ConfirmedStrict { witness }),
        Ok(_) | Err(Error::BudgetExceeded { .. }) | Err(Error::CapExceeded(_)) => done(EdgeVerdict::ConfirmedInclusion),
        Err(e) => Err(e),
    }
}

/// All covers, checked in parallel, reported in cover order.
pub fn semantic_check_all(p: &Poset, caps: &SemanticCaps) -> Result<Vec<EdgeCheck>> {
    p.covers.par_iter().map(|&e| semantic_check_edge(p, e, caps)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::satisfies;
    use crate::lattice::{load_figure, parse_poset};

    fn check(fig: &str, lo: &str, hi: &str) -> EdgeVerdict {
        let p = load_figure(fig, 2).unwrap();
        let e = (p.index_of(lo).unwrap(), p.index_of(hi).unwrap());
        semantic_check_edge(&p, e, &SemanticCaps::default()).unwrap().verdict
    }

    #[test]
    fn mx_below_mxy() {
        assert!(check("Fig2", "Mx", "Mxy").is_confirmed());
    }

    #[test]
    fn q_below_lq_is_strict() {
        let v = check("Fig3", "Q", "LQ");
        let EdgeVerdict::ConfirmedStrict { witness } = v else {
            panic!("{v:?}")
        };
        assert!(satisfies(&catalog("Q^1").unwrap(), &witness).unwrap().holds);
        assert!(!satisfies(&catalog("L2^1").unwrap(), &witness).unwrap().holds);
    }

    #[test]
    fn identity_only_endpoints() {
        assert!(matches!(check("Fig4", "Sinf", "E1"), EdgeVerdict::ConfirmedStrict { .. }));
        assert!(check("Fig4", "LQ", "S2").is_confirmed());
    }

    #[test]
    fn unlabelled_nodes_are_unknown() {
        let p = parse_poset("poset p\nnodes\na \"a\"\nb \"b\"\ncovers\na b\n", 1).unwrap();
        let r = semantic_check_edge(&p, (0, 1), &SemanticCaps::default()).unwrap();
        assert!(matches!(r.verdict, EdgeVerdict::Unknown { .. }));
    }

    #[test]
    fn wrong_edge_is_refuted() {
        let p = parse_poset("poset p\nnodes\na \"a\" gen=Q^1\nb \"b\" gen=L2^1\ncovers\na b\n", 1).unwrap();
        let r = semantic_check_edge(&p, (0, 1), &SemanticCaps::default()).unwrap();
        assert!(matches!(r.verdict, EdgeVerdict::Refuted { .. }), "{r:?}");
    }

    #[test]
    fn small_figures_fully_confirmed() {
        for fig in ["Fig2", "Fig3"] {
            let p = load_figure(fig, 1).unwrap();
            for c in semantic_check_all(&p, &SemanticCaps::default()).unwrap() {
                assert!(c.verdict.is_confirmed(), "{fig} {} {}: {:?}", c.lower, c.upper, c.verdict);
            }
        }
    }
}
