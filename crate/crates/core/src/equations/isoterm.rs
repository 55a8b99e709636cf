use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::relfree::{rel_free_class, RelFree, RelFreeCaps};
use super::satisfies_class;
use crate::error::{Error, Result};
use crate::monoids::FiniteMonoid;
use crate::words::{Identity, Variable, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsotermBudget {
    /// Substitutions allowed per full satisfaction check.
    pub satisfy_budget: u128,
    /// Words over `con(w)` are enumerated up to `min(|w| + 1, small)`.
    pub small: usize,
    pub max_enumeration: usize,
    pub max_rearrangements: usize,
    pub relfree: RelFreeCaps,
}

impl Default for IsotermBudget {
    fn default() -> Self {
        IsotermBudget {
            satisfy_budget: super::DEFAULT_BUDGET,
            small: 6,
            max_enumeration: 200_000,
            max_rearrangements: 200_000,
            relfree: RelFreeCaps::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IsotermVerdict {
    /// `w ≈ witness` holds in the class and `witness ≠ w`.
    NotIsoterm { witness: Word },
    /// The class of `w` in the relatively free monoid is `{w}`.
    Certified { free_elements: usize },
    /// Every word over `con(w)` of length at most `length_bound` was ruled out.
    BoundedOnly { length_bound: usize, reason: String },
}

impl IsotermVerdict {
    pub fn is_not_isoterm(&self) -> bool {
        matches!(self, IsotermVerdict::NotIsoterm { .. })
    }
}

/// Outcome of the perturbation search alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FalsifierReport {
    pub witness: Option<Word>,
    /// All words over `con(w)` up to this length were decided.
    pub decided_length: usize,
    pub candidates: usize,
    /// Candidates that survived the projection filter but were too large to
    /// check in full.
    pub undecided: Vec<Word>,
    pub rearrangements_complete: bool,
}

/// Deduplicating candidate tester with a cache of projected identities.
struct Tester<'a> {
    ms: &'a [FiniteMonoid],
    w: &'a Word,
    budget: &'a IsotermBudget,
    seen: HashSet<Word>,
    projections: BTreeMap<Identity, bool>,
    undecided: Vec<Word>,
    candidates: usize,
}

impl<'a> Tester<'a> {
    fn new(ms: &'a [FiniteMonoid], w: &'a Word, budget: &'a IsotermBudget) -> Self {
        let mut seen = HashSet::new();
        seen.insert(w.clone());
        Tester {
            ms,
            w,
            budget,
            seen,
            projections: BTreeMap::new(),
            undecided: Vec::new(),
            candidates: 0,
        }
    }

    fn class_holds(&mut self, id: Identity) -> Result<bool> {
        if id.is_trivial() {
            return Ok(true);
        }
        if let Some(&h) = self.projections.get(&id) {
            return Ok(h);
        }
        let h = satisfies_class(self.ms, &id, self.budget.satisfy_budget)?.holds;
        self.projections.insert(id, h);
        Ok(h)
    }

    /// False if some projection onto at most three variables already fails.
    fn survives_projections(&mut self, cand: &Word) -> Result<bool> {
        let vars: Vec<Variable> = self.w.content().union(&cand.content()).copied().collect();
        let n = vars.len();
        let mut subsets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for i in 0..n {
            for j in i + 1..n {
                subsets.push(vec![i, j]);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    subsets.push(vec![i, j, k]);
                }
            }
        }
        for sub in subsets {
            let keep: BTreeSet<Variable> = sub.iter().map(|&i| vars[i]).collect();
            let id = Identity::new(self.w.project(&keep), cand.project(&keep));
            if !self.class_holds(id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Some(true) if `cand` is a witness, Some(false) if refuted, None if undecided.
    fn test(&mut self, cand: &Word) -> Result<Option<bool>> {
        if !self.seen.insert(cand.clone()) {
            return Ok(Some(false));
        }
        self.candidates += 1;
        if !self.survives_projections(cand)? {
            return Ok(Some(false));
        }
        match satisfies_class(self.ms, &Identity::new(self.w.clone(), cand.clone()), self.budget.satisfy_budget) {
            Ok(r) => Ok(Some(r.holds)),
            Err(Error::BudgetExceeded { .. }) => {
                self.undecided.push(cand.clone());
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

fn deletions(w: &Word) -> Vec<Word> {
    (0..w.len())
        .map(|i| w.slice(0, i).concat(&w.slice(i + 1, w.len())))
        .collect()
}

fn transpositions(w: &Word) -> Vec<Word> {
    (0..w.len().saturating_sub(1))
        .filter(|&i| w.letters()[i] != w.letters()[i + 1])
        .map(|i| {
            let mut l = w.letters().to_vec();
            l.swap(i, i + 1);
            Word::from_vars(l)
        })
        .collect()
}

fn duplications(w: &Word) -> Vec<Word> {
    (0..w.len())
        .map(|i| {
            let mut l = w.letters().to_vec();
            l.insert(i, l[i]);
            Word::from_vars(l)
        })
        .collect()
}

/// Calls `f` on every word of length `len` over `alphabet` in lexicographic
/// order, stopping when it returns `Some`.
fn for_each_word<T>(alphabet: &[Variable], len: usize, f: &mut impl FnMut(Word) -> Result<Option<T>>) -> Result<Option<T>> {
    let k = alphabet.len();
    if k == 0 {
        return if len == 0 { f(Word::empty()) } else { Ok(None) };
    }
    let mut digits = vec![0usize; len];
    loop {
        let w: Word = digits.iter().map(|&d| alphabet[d]).collect();
        if let Some(t) = f(w)? {
            return Ok(Some(t));
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Rearrangements of `w` whose two-variable projections are all allowed by
/// the class.
struct Rearranger<'a, 'b> {
    tester: &'b mut Tester<'a>,
    vars: Vec<Variable>,
    remaining: Vec<usize>,
    /// For each pair `(i, j)` with `i < j`: allowed projection prefixes, or
    /// `None` if the pair was too large to tabulate.
    allowed: BTreeMap<(usize, usize), Option<HashSet<Vec<usize>>>>,
    current: Vec<usize>,
    leaves: usize,
    cap: usize,
    complete: bool,
}

impl Rearranger<'_, '_> {
    fn pair_ok(&self) -> bool {
        let Some(&last) = self.current.last() else { return true };
        for j in 0..self.vars.len() {
            if j == last {
                continue;
            }
            let key = (last.min(j), last.max(j));
            if let Some(Some(set)) = self.allowed.get(&key) {
                let proj: Vec<usize> = self.current.iter().copied().filter(|&c| c == last || c == j).collect();
                if !set.contains(&proj) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self) -> Result<Option<Word>> {
        if self.leaves >= self.cap {
            self.complete = false;
            return Ok(None);
        }
        if self.remaining.iter().all(|&r| r == 0) {
            self.leaves += 1;
            let cand: Word = self.current.iter().map(|&i| self.vars[i]).collect();
            return Ok(match self.tester.test(&cand)? {
                Some(true) => Some(cand),
                _ => None,
            });
        }
        for i in 0..self.vars.len() {
            if self.remaining[i] == 0 {
                continue;
            }
            self.remaining[i] -= 1;
            self.current.push(i);
            if self.pair_ok() {
                if let Some(found) = self.run()? {
                    return Ok(Some(found));
                }
            }
            self.current.pop();
            self.remaining[i] += 1;
        }
        Ok(None)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn rearrangements(tester: &mut Tester<'_>, w: &Word, cap: usize) -> Result<(Option<Word>, bool)> {
    let vars: Vec<Variable> = w.content().into_iter().collect();
    let seq: Vec<usize> = w
        .letters()
        .iter()
        .map(|v| vars.binary_search(v).expect("in content"))
        .collect();
    let mut allowed = BTreeMap::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            let proj: Vec<usize> = seq.iter().copied().filter(|&c| c == i || c == j).collect();
            let (oi, oj) = (w.occ(vars[i]), w.occ(vars[j]));
            if binomial(oi + oj, oi) > 5_000 {
                allowed.insert((i, j), None);
                continue;
            }
            let base = Word::from_vars(proj.iter().map(|&c| vars[c]).collect());
            let mut set: HashSet<Vec<usize>> = HashSet::new();
            let mut arrangement = Vec::new();
            let mut ok = Vec::new();
            arrange(i, j, oi, oj, &mut arrangement, &mut ok);
            for a in ok {
                let cand = Word::from_vars(a.iter().map(|&c| vars[c]).collect());
                if tester.class_holds(Identity::new(base.clone(), cand))? {
                    for p in 0..=a.len() {
                        set.insert(a[..p].to_vec());
                    }
                }
            }
            allowed.insert((i, j), Some(set));
        }
    }
    let mut r = Rearranger {
        tester,
        remaining: vars.iter().map(|&v| w.occ(v)).collect(),
        vars,
        allowed,
        current: Vec::new(),
        leaves: 0,
        cap,
        complete: true,
    };
    let found = r.run()?;
    Ok((found, r.complete))
}

fn arrange(i: usize, j: usize, oi: usize, oj: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if oi == 0 && oj == 0 {
        out.push(cur.clone());
        return;
    }
    if oi > 0 {
        cur.push(i);
        arrange(i, j, oi - 1, oj, cur, out);
        cur.pop();
    }
    if oj > 0 {
        cur.push(j);
        arrange(i, j, oi, oj - 1, cur, out);
        cur.pop();
    }
}

fn require_monoids(ms: &[FiniteMonoid]) -> Result<()> {
    if ms.is_empty() {
        return Err(Error::invalid("empty class of monoids"));
    }
    if let Some(m) = ms.iter().find(|m| m.identity.is_none()) {
        return Err(Error::Precondition(format!("{} has no identity element", m.name)));
    }
    Ok(())
}

/// Perturbation search: deletions, adjacent transpositions, duplications,
/// all short words over `con(w)`, then rearrangements whose two-variable
/// projections are compatible with the class.
pub fn isoterm_falsify(ms: &[FiniteMonoid], w: &Word, budget: &IsotermBudget) -> Result<FalsifierReport> {
    require_monoids(ms)?;
    let mut t = Tester::new(ms, w, budget);
    let report = |t: &Tester<'_>, witness: Option<Word>, decided: usize, complete: bool| FalsifierReport {
        witness,
        decided_length: decided,
        candidates: t.candidates,
        undecided: t.undecided.clone(),
        rearrangements_complete: complete,
    };
    let local: Vec<Word> = deletions(w)
        .into_iter()
        .chain(transpositions(w))
        .chain(duplications(w))
        .collect();
    for c in &local {
        if t.test(c)? == Some(true) {
            return Ok(report(&t, Some(c.clone()), 0, false));
        }
    }

    let alphabet: Vec<Variable> = w.content().into_iter().collect();
    let top = (w.len() + 1).min(budget.small);
    let mut decided = 0;
    let mut spent: u128 = 0;
    for len in 0..=top {
        let count = (alphabet.len() as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
        spent = spent.saturating_add(count);
        if spent > budget.max_enumeration as u128 {
            break;
        }
        let found = for_each_word(&alphabet, len, &mut |c: Word| {
            Ok(if t.test(&c)? == Some(true) { Some(c) } else { None })
        })?;
        if let Some(c) = found {
            return Ok(report(&t, Some(c), decided, false));
        }
        decided = len;
    }
    // enumerating length |w| already covered the rearrangements
    let mut complete = true;
    if decided < w.len() {
        let (found, done) = rearrangements(&mut t, w, budget.max_rearrangements)?;
        if let Some(c) = found {
            return Ok(report(&t, Some(c), decided, done));
        }
        complete = done;
    }
    if let Some(shortest) = t.undecided.iter().map(Word::len).min() {
        decided = decided.min(shortest.saturating_sub(1));
    }
    Ok(report(&t, None, decided, complete))
}

/// Another word in the class of `target`, shortest first.
fn other_word(rf: &RelFree, target: usize, w: &[usize]) -> Option<Vec<usize>> {
    let n = rf.len();
    let max_len = w.len() + n + 1;
    let mut path = Vec::new();
    for len in 0..=max_len {
        if dfs_exact(rf, 0, target, len, &mut path, w) {
            return Some(path);
        }
    }
    None
}

fn dfs_exact(rf: &RelFree, at: usize, target: usize, left: usize, path: &mut Vec<usize>, avoid: &[usize]) -> bool {
    if left == 0 {
        return at == target && path.as_slice() != avoid;
    }
    for j in 0..rf.k {
        if let Some(next) = rf.step(at, j) {
            path.push(j);
            if dfs_exact(rf, next, target, left - 1, path, avoid) {
                return true;
            }
            path.pop();
        }
    }
    false
}

/// Isoterm decision for a class: perturbation search, then certification by
/// counting the words in the class of `w` in the relatively free monoid on
/// `con(w)`.
pub fn isoterm_class(ms: &[FiniteMonoid], w: &Word, budget: &IsotermBudget) -> Result<IsotermVerdict> {
    let report = isoterm_falsify(ms, w, budget)?;
    if let Some(witness) = report.witness {
        return Ok(IsotermVerdict::NotIsoterm { witness });
    }
    let vars: Vec<Variable> = if w.is_empty() {
        vec![Variable::new("x")]
    } else {
        w.content().into_iter().collect()
    };
    let bounded = |reason: String| IsotermVerdict::BoundedOnly {
        length_bound: report.decided_length,
        reason,
    };
    let rf = match rel_free_class(ms, vars.len(), &budget.relfree) {
        Ok(rf) => rf,
        Err(Error::CapExceeded(m)) => return Ok(bounded(m)),
        Err(e) => return Err(e),
    };
    if !rf.complete {
        return Ok(bounded(format!(
            "relatively free monoid on {} generators exceeds {} elements",
            vars.len(),
            budget.relfree.max_elements
        )));
    }
    let seq: Vec<usize> = w
        .letters()
        .iter()
        .map(|v| vars.binary_search(v).expect("in content"))
        .collect();
    let e = rf.element_of(&seq).expect("complete structure");
    match rf.count_class_words(e) {
        Some(1) => Ok(IsotermVerdict::Certified { free_elements: rf.len() }),
        _ => {
            let other = other_word(&rf, e, &seq).expect("class has another word");
            Ok(IsotermVerdict::NotIsoterm {
                witness: other.into_iter().map(|j| vars[j]).collect(),
            })
        }
    }
}

pub fn isoterm(m: &FiniteMonoid, w: &Word, budget: &IsotermBudget) -> Result<IsotermVerdict> {
    isoterm_class(std::slice::from_ref(m), w, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::satisfies;
    use crate::monoids::catalog;
    use crate::words::{parse_word, wn_xyxy};

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn mx_square_is_not_an_isoterm() {
        let m = catalog("M(x)").unwrap();
        let v = isoterm(&m, &w("x^2"), &IsotermBudget::default()).unwrap();
        assert_eq!(v, IsotermVerdict::NotIsoterm { witness: w("x^3") });
    }

    #[test]
    fn xyxy_certified() {
        let m = catalog("M(xyxy)").unwrap();
        let v = isoterm(&m, &w("xyxy"), &IsotermBudget::default()).unwrap();
        assert!(matches!(v, IsotermVerdict::Certified { .. }), "{v:?}");
    }

    #[test]
    fn w2_is_not_an_isoterm() {
        let m = catalog("M(xyxy)").unwrap();
        let w2 = wn_xyxy(2, false).unwrap();
        match isoterm(&m, &w2, &IsotermBudget::default()).unwrap() {
            IsotermVerdict::NotIsoterm { witness } => {
                assert_ne!(witness, w2);
                assert!(satisfies(&m, &Identity::new(w2, witness)).unwrap().holds);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn factors_of_the_word_are_isoterms() {
        let m = catalog("M(xyxy)").unwrap();
        for s in ["x", "xy", "xyx", "yxy"] {
            let v = isoterm(&m, &w(s), &IsotermBudget::default()).unwrap();
            assert!(matches!(v, IsotermVerdict::Certified { .. }), "{s}: {v:?}");
        }
    }

    #[test]
    fn group_words_are_not_isoterms() {
        let z2 = catalog("Z2").unwrap();
        let v = isoterm(&z2, &w("x"), &IsotermBudget::default()).unwrap();
        assert!(v.is_not_isoterm());
    }

    #[test]
    fn certification_finds_what_the_falsifier_misses() {
        // with no perturbations allowed the free-monoid count still decides
        let m = catalog("M(x)").unwrap();
        let budget = IsotermBudget {
            small: 0,
            max_rearrangements: 0,
            ..IsotermBudget::default()
        };
        let v = isoterm(&m, &w("x"), &budget).unwrap();
        assert!(matches!(v, IsotermVerdict::Certified { .. }));
    }

    #[test]
    fn semigroups_are_rejected() {
        let e = catalog("E").unwrap();
        assert!(isoterm(&e, &w("x"), &IsotermBudget::default()).is_err());
    }

    #[test]
    fn combination_enumeration() {
        let m = catalog("M(xyxy)").unwrap();
        let budget = IsotermBudget::default();
        let word = w("xyzt");
        let mut t = Tester::new(std::slice::from_ref(&m), &word, &budget);
        // a permutation is refuted by some pair projection
        assert!(!t.survives_projections(&w("yxzt")).unwrap());
        assert!(t.survives_projections(&w("xyzt")).unwrap());
        // trivial projections are never cached
        assert!(!t.projections.is_empty());
        assert!(t.projections.keys().all(|id| !id.is_trivial()));
    }
}
