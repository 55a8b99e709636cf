use std::ops::ControlFlow;

use serde::Serialize;

use super::relfree::{build_with, RelFreeCaps};
use super::{bases, satisfies_class, satisfies_with_budget, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::monoids::FiniteMonoid;
use crate::words::{Identity, Variable, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MemberCaps {
    pub relfree: RelFreeCaps,
    pub satisfy_budget: u128,
}

impl Default for MemberCaps {
    fn default() -> Self {
        MemberCaps {
            relfree: RelFreeCaps::default(),
            satisfy_budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MemberVerdict {
    Member { free_elements: usize },
    /// Holds in the generating class, fails in the candidate.
    NotMember { witness: Identity },
    Unknown { reason: String },
}

/// Small identities tried before the free-monoid construction.
pub fn stock_identities() -> Vec<Identity> {
    let mut out: Vec<Identity> = [
        "xy = yx",
        "x = x^2",
        "x^2 = x^3",
        "x^2y^2 = y^2x^2",
        "xyx = x^2y",
        "xyx = yx^2",
        "x^2 = x^4",
        "x = x^3",
        "xyx = xyxyx",
        "x^2y = yx^2",
        "xyxy = yxyx",
        "xyxy = xxyy",
    ]
    .iter()
    .map(|s| Identity::parse(s))
    .collect();
    out.extend(bases::e_basis());
    out.push(bases::lookup("lb").expect("known name"));
    out.push(bases::lookup("no-l2").expect("known name"));
    out
}

/// Name of the `i`-th generator variable.
fn generator_name(i: usize) -> Variable {
    const NAMES: [&str; 8] = ["x", "y", "z", "t", "u", "v", "w", "s"];
    NAMES
        .get(i)
        .map(|n| Variable::new(n))
        .unwrap_or_else(|| Variable::indexed('x', i + 1))
}

/// Indecomposable elements (not a product of two elements other than 1 and
/// themselves), then greedy completion to a generating set.
fn generating_set(a: &FiniteMonoid) -> Vec<usize> {
    let one = a.identity.expect("monoid");
    let n = a.order();
    let mut gens: Vec<usize> = (0..n)
        .filter(|&x| x != one)
        .filter(|&x| {
            !(0..n).any(|y| {
                y != one && y != x && (0..n).any(|z| z != one && z != x && a.mul(y, z) == x)
            })
        })
        .collect();
    loop {
        let reach = a.closure(&gens);
        match (0..n).find(|&x| x != one && reach.binary_search(&x).is_err()) {
            Some(x) => gens.push(x),
            None => return gens,
        }
    }
}

/// Decides `A ∈ V(B)` for a class `B`.
pub fn member_class(a: &FiniteMonoid, bs: &[FiniteMonoid], caps: &MemberCaps) -> Result<MemberVerdict> {
    let Some(one) = a.identity else {
        return Err(Error::Precondition(format!("{} has no identity element", a.name)));
    };
    for id in stock_identities() {
        let in_b = match satisfies_class(bs, &id, caps.satisfy_budget) {
            Ok(r) => r.holds,
            Err(Error::BudgetExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        if in_b && !satisfies_with_budget(a, &id, caps.satisfy_budget)?.holds {
            return Ok(MemberVerdict::NotMember { witness: id });
        }
    }
    let gens = generating_set(a);
    let k = gens.len();
    let vars: Vec<Variable> = (0..k).map(generator_name).collect();
    let mut values: Vec<usize> = vec![one];
    let mut conflict: Option<(usize, usize, usize)> = None;
    let built = build_with(bs, k, &caps.relfree, |from, j, to, is_new| {
        let v = a.mul(values[from], gens[j]);
        if is_new {
            values.push(v);
        } else if values[to] != v {
            conflict = Some((from, j, to));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    let rf = match built {
        Ok(rf) => rf,
        Err(Error::CapExceeded(m)) => return Ok(MemberVerdict::Unknown { reason: m }),
        Err(e) => return Err(e),
    };
    if let Some((from, j, to)) = conflict {
        let mut lhs = rf.rep_word(from, &vars);
        lhs.push(vars[j]);
        let rhs: Word = rf.rep_word(to, &vars);
        return Ok(MemberVerdict::NotMember {
            witness: Identity::new(lhs, rhs),
        });
    }
    if !rf.complete {
        return Ok(MemberVerdict::Unknown {
            reason: format!(
                "relatively free monoid on {k} generators exceeds {} elements",
                caps.relfree.max_elements
            ),
        });
    }
    Ok(MemberVerdict::Member { free_elements: rf.len() })
}

pub fn member(a: &FiniteMonoid, b: &FiniteMonoid, caps: &MemberCaps) -> Result<MemberVerdict> {
    member_class(a, std::slice::from_ref(b), caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::satisfies;
    use crate::monoids::{catalog, direct_product};

    fn verdict(a: &str, b: &str) -> MemberVerdict {
        member(&catalog(a).unwrap(), &catalog(b).unwrap(), &MemberCaps::default()).unwrap()
    }

    fn check_witness(a: &str, b: &str) {
        let (ma, mb) = (catalog(a).unwrap(), catalog(b).unwrap());
        match member(&ma, &mb, &MemberCaps::default()).unwrap() {
            MemberVerdict::NotMember { witness } => {
                assert!(satisfies(&mb, &witness).unwrap().holds, "{witness}");
                assert!(!satisfies(&ma, &witness).unwrap().holds, "{witness}");
            }
            other => panic!("{a} in {b}: {other:?}"),
        }
    }

    #[test]
    fn chain_members() {
        assert!(matches!(verdict("M(x)", "M(xy)"), MemberVerdict::Member { .. }));
        assert!(matches!(verdict("M(1)", "M(x)"), MemberVerdict::Member { .. }));
        assert!(matches!(verdict("E^1", "E^1"), MemberVerdict::Member { .. }));
    }

    #[test]
    fn l2_not_in_q() {
        assert_eq!(
            verdict("L2^1", "Q^1"),
            MemberVerdict::NotMember {
                witness: Identity::parse("x^2y^2 = y^2x^2")
            }
        );
        check_witness("L2^1", "Q^1");
    }

    #[test]
    fn witnesses_reverify() {
        check_witness("M(xy)", "M(x)");
        check_witness("Z2", "M(1)");
        check_witness("Z3", "Z2");
        check_witness("R2^1", "L2^1");
    }

    #[test]
    fn conflict_witness_from_free_monoid() {
        // Z2 and Z3 agree on every stock identity only through the free part
        let z6 = direct_product(&catalog("Z2").unwrap(), &catalog("Z3").unwrap());
        let r = member(&z6, &catalog("Z3").unwrap(), &MemberCaps::default()).unwrap();
        match r {
            MemberVerdict::NotMember { witness } => {
                assert!(satisfies(&catalog("Z3").unwrap(), &witness).unwrap().holds);
                assert!(!satisfies(&z6, &witness).unwrap().holds);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn products_are_members() {
        let p = direct_product(&catalog("L2^1").unwrap(), &catalog("M(x)").unwrap());
        let class = [catalog("L2^1").unwrap(), catalog("M(x)").unwrap()];
        let r = member_class(&p, &class, &MemberCaps::default()).unwrap();
        assert!(matches!(r, MemberVerdict::Member { .. }), "{r:?}");
    }

    #[test]
    fn generating_sets() {
        let b2 = catalog("B2^1").unwrap();
        let g = generating_set(&b2);
        let labels: Vec<&str> = g.iter().map(|&i| b2.label(i)).collect();
        assert_eq!(labels, ["a", "b"]);
        let z3 = catalog("Z3").unwrap();
        assert_eq!(z3.closure(&generating_set(&z3)).len(), 3);
    }
}
