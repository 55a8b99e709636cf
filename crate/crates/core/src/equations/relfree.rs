use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoids::FiniteMonoid;
use crate::words::{Variable, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelFreeCaps {
    pub max_elements: usize,
    /// Largest admissible number of substitutions (tuple length).
    pub max_tuple_dim: usize,
    /// Upper bound on the bytes spent storing tuples.
    pub max_bytes: usize,
}

impl Default for RelFreeCaps {
    fn default() -> Self {
        RelFreeCaps {
            max_elements: 500_000,
            max_tuple_dim: 1 << 20,
            max_bytes: 1 << 29,
        }
    }
}

/// The relatively free monoid on `k` generators of the variety generated by
/// a finite class, realised as evaluation tuples over all substitutions.
///
/// Elements are numbered in BFS order from the identity, so the stored
/// representative of each element is its shortlex-least word.
#[derive(Debug, Clone)]
pub struct RelFree {
    pub k: usize,
    pub dim: usize,
    arena: Vec<u8>,
    index: HashMap<u64, Vec<u32>>,
    /// `trans[e * k + j]`: the element `e · x_j`, or `u32::MAX` if unexplored.
    trans: Vec<u32>,
    parent: Vec<(u32, u8)>,
    pub complete: bool,
}

/// Tuple layout: positions grouped per monoid; inside a group, the
/// substitution number in mixed radix (generator 0 most significant).
struct Layout<'a> {
    ms: &'a [FiniteMonoid],
    owner: Vec<u8>,
    gens: Vec<Vec<u8>>,
    identity: Vec<u8>,
}

fn layout<'a>(ms: &'a [FiniteMonoid], k: usize, caps: &RelFreeCaps) -> Result<Layout<'a>> {
    if ms.is_empty() {
        return Err(Error::invalid("relatively free monoid of an empty class"));
    }
    let mut dim: usize = 0;
    for m in ms {
        if m.order() > 256 {
            return Err(Error::invalid(format!("{} has more than 256 elements", m.name)));
        }
        if m.identity.is_none() {
            return Err(Error::invalid(format!("{} has no identity element", m.name)));
        }
        let d = m
            .order()
            .checked_pow(k as u32)
            .filter(|d| *d <= caps.max_tuple_dim)
            .ok_or_else(|| {
                Error::CapExceeded(format!("{}^{k} substitutions exceed the tuple cap", m.order()))
            })?;
        dim += d;
    }
    if dim > caps.max_tuple_dim {
        return Err(Error::CapExceeded(format!("tuple dimension {dim} exceeds the cap")));
    }
    let mut owner = Vec::with_capacity(dim);
    let mut gens = vec![Vec::with_capacity(dim); k];
    let mut identity = Vec::with_capacity(dim);
    for (mi, m) in ms.iter().enumerate() {
        let n = m.order();
        let count = n.pow(k as u32);
        for s in 0..count {
            owner.push(mi as u8);
            identity.push(m.identity.unwrap() as u8);
            let mut rest = s;
            for j in (0..k).rev() {
                gens[j].push((rest % n) as u8);
                rest /= n;
            }
        }
    }
    Ok(Layout {
        ms,
        owner,
        gens,
        identity,
    })
}

fn fingerprint(t: &[u8]) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

impl RelFree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn tuple(&self, e: usize) -> &[u8] {
        &self.arena[e * self.dim..(e + 1) * self.dim]
    }

    /// `e · x_j`, if explored.
    pub fn step(&self, e: usize, j: usize) -> Option<usize> {
        let t = self.trans[e * self.k + j];
        (t != u32::MAX).then_some(t as usize)
    }

    /// Element reached by reading `gens` from the identity.
    pub fn element_of(&self, gens: &[usize]) -> Option<usize> {
        gens.iter().try_fold(0usize, |e, &j| self.step(e, j))
    }

    /// Shortlex-least generator sequence of `e`.
    pub fn rep_indices(&self, e: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = e;
        while cur != 0 {
            let (p, g) = self.parent[cur];
            out.push(g as usize);
            cur = p as usize;
        }
        out.reverse();
        out
    }

    /// Representative word of `e`, naming generator `j` by `vars[j]`.
    pub fn rep_word(&self, e: usize, vars: &[Variable]) -> Word {
        self.rep_indices(e).into_iter().map(|j| vars[j]).collect()
    }

    fn lookup(&self, t: &[u8], h: u64) -> Option<usize> {
        self.index
            .get(&h)?
            .iter()
            .map(|&e| e as usize)
            .find(|&e| self.tuple(e) == t)
    }

    /// Number of words over the generators whose class is `target`: `None`
    /// if infinite. Requires a complete structure.
    pub fn count_class_words(&self, target: usize) -> Option<u128> {
        let n = self.len();
        let k = self.k;
        // co-reachability to target
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in 0..n {
            for j in 0..k {
                if let Some(f) = self.step(e, j) {
                    preds[f].push(e);
                }
            }
        }
        let mut live = vec![false; n];
        let mut stack = vec![target];
        live[target] = true;
        while let Some(x) = stack.pop() {
            for &p in &preds[x] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        // every element is reachable from the identity by construction;
        // a cycle among live states makes the language infinite
        let mut state = vec![0u8; n]; // 0 new, 1 on stack, 2 done
        let mut count = vec![0u128; n];
        let mut order: Vec<usize> = Vec::new();
        for root in 0..n {
            if !live[root] || state[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            state[root] = 1;
            while let Some(&mut (x, ref mut j)) = stack.last_mut() {
                if *j < k {
                    let jj = *j;
                    *j += 1;
                    if let Some(y) = self.step(x, jj) {
                        if !live[y] {
                            continue;
                        }
                        match state[y] {
                            0 => {
                                state[y] = 1;
                                stack.push((y, 0));
                            }
                            1 => return None,
                            _ => {}
                        }
                    }
                } else {
                    state[x] = 2;
                    order.push(x);
                    stack.pop();
                }
            }
        }
        // `order` is a post-order: successors come first
        for &x in &order {
            let mut c: u128 = u128::from(x == target);
            for j in 0..k {
                if let Some(y) = self.step(x, j) {
                    if live[y] {
                        c = c.saturating_add(count[y]);
                    }
                }
            }
            count[x] = c;
        }
        if live[0] {
            Some(count[0])
        } else {
            Some(0)
        }
    }
}

/// Builds the relatively free monoid for a class, calling `on_edge(from,
/// generator, to, is_new)` on every transition in BFS order. Breaking out of
/// the callback stops the construction, leaving it incomplete.
pub(crate) fn build_with<F>(ms: &[FiniteMonoid], k: usize, caps: &RelFreeCaps, mut on_edge: F) -> Result<RelFree>
where
    F: FnMut(usize, usize, usize, bool) -> ControlFlow<()>,
{
    let lay = layout(ms, k, caps)?;
    let dim = lay.owner.len();
    let mut rf = RelFree {
        k,
        dim,
        arena: Vec::new(),
        index: HashMap::new(),
        trans: Vec::new(),
        parent: Vec::new(),
        complete: false,
    };
    let id = lay.identity.clone();
    rf.index.entry(fingerprint(&id)).or_default().push(0);
    rf.arena.extend_from_slice(&id);
    rf.parent.push((0, 0));
    rf.trans.extend(std::iter::repeat_n(u32::MAX, k));

    let mut next = vec![0u8; dim];
    let mut e = 0;
    while e < rf.len() {
        for j in 0..k {
            {
                let t = rf.tuple(e);
                let g = &lay.gens[j];
                for p in 0..dim {
                    let m = &lay.ms[lay.owner[p] as usize];
                    next[p] = m.mul(t[p] as usize, g[p] as usize) as u8;
                }
            }
            let h = fingerprint(&next);
            let (target, is_new) = match rf.lookup(&next, h) {
                Some(f) => (f, false),
                None => {
                    if rf.len() >= caps.max_elements || (rf.len() + 1) * dim > caps.max_bytes {
                        return Ok(rf);
                    }
                    let f = rf.len();
                    rf.arena.extend_from_slice(&next);
                    rf.index.entry(h).or_default().push(f as u32);
                    rf.parent.push((e as u32, j as u8));
                    rf.trans.extend(std::iter::repeat_n(u32::MAX, k));
                    (f, true)
                }
            };
            rf.trans[e * k + j] = target as u32;
            if on_edge(e, j, target, is_new).is_break() {
                return Ok(rf);
            }
        }
        e += 1;
    }
    rf.complete = true;
    Ok(rf)
}

/// Relatively free monoid of `V(m)` on `k` generators.
pub fn rel_free(m: &FiniteMonoid, k: usize, caps: &RelFreeCaps) -> Result<RelFree> {
    rel_free_class(std::slice::from_ref(m), k, caps)
}

pub fn rel_free_class(ms: &[FiniteMonoid], k: usize, caps: &RelFreeCaps) -> Result<RelFree> {
    if k > 255 {
        return Err(Error::invalid("too many generators"));
    }
    build_with(ms, k, caps, |_, _, _, _| ControlFlow::Continue(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoids::catalog;

    fn size(name: &str, k: usize) -> usize {
        let rf = rel_free(&catalog(name).unwrap(), k, &RelFreeCaps::default()).unwrap();
        assert!(rf.complete);
        rf.len()
    }

    /// Distinct value tuples of x^0..x^j, computed directly.
    fn brute_one_generator(name: &str, max_pow: usize) -> usize {
        let m = catalog(name).unwrap();
        let mut tuples = std::collections::BTreeSet::new();
        for j in 0..=max_pow {
            let t: Vec<usize> = (0..m.order())
                .map(|a| m.eval_indices(&vec![a; j]).unwrap())
                .collect();
            tuples.insert(t);
        }
        tuples.len()
    }

    #[test]
    fn one_generator_sizes() {
        assert_eq!(size("M(1)", 1), 2);
        assert_eq!(brute_one_generator("M(1)", 4), 2);
        assert_eq!(size("Z2", 1), 2);
        assert_eq!(size("M(x)", 1), brute_one_generator("M(x)", 6));
        assert_eq!(size("Z3", 1), 3);
    }

    #[test]
    fn monotone_in_k() {
        let m = catalog("L2^1").unwrap();
        let mut last = 0;
        for k in 0..4 {
            let n = rel_free(&m, k, &RelFreeCaps::default()).unwrap().len();
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn mxyxy_two_generators() {
        let rf = rel_free(&catalog("M(xyxy)").unwrap(), 2, &RelFreeCaps::default()).unwrap();
        assert!(rf.complete);
        // words of length at most 6 reach every class
        let m = catalog("M(xyxy)").unwrap();
        let mut tuples = std::collections::BTreeSet::new();
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..=6 {
            let mut next = Vec::new();
            for w in &words {
                let t: Vec<usize> = (0..m.order())
                    .flat_map(|a| (0..m.order()).map(move |b| (a, b)))
                    .map(|(a, b)| {
                        let letters: Vec<usize> = w.iter().map(|&g| [a, b][g]).collect();
                        m.eval_indices(&letters).unwrap()
                    })
                    .collect();
                tuples.insert(t);
                for g in 0..2 {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            words = next;
        }
        assert_eq!(rf.len(), tuples.len());
    }

    #[test]
    fn representatives_are_shortlex_least() {
        let rf = rel_free(&catalog("B2^1").unwrap(), 2, &RelFreeCaps::default()).unwrap();
        let vars = [Variable::new("x"), Variable::new("y")];
        for e in 0..rf.len() {
            let rep = rf.rep_indices(e);
            assert_eq!(rf.element_of(&rep), Some(e));
            if e > 0 {
                let prev = rf.rep_word(e - 1, &vars);
                assert!(prev < rf.rep_word(e, &vars));
            }
        }
    }

    #[test]
    fn caps() {
        let m = catalog("M(xyxy)").unwrap();
        let tight = RelFreeCaps {
            max_elements: 5,
            ..RelFreeCaps::default()
        };
        let rf = rel_free(&m, 2, &tight).unwrap();
        assert!(!rf.complete);
        let tiny = RelFreeCaps {
            max_tuple_dim: 10,
            ..RelFreeCaps::default()
        };
        assert!(rel_free(&m, 2, &tiny).is_err());
    }

    #[test]
    fn class_counts() {
        let rf = rel_free(&catalog("M(x)").unwrap(), 1, &RelFreeCaps::default()).unwrap();
        // x^0, x^1 are singletons; x^2 = x^3 = ... is infinite
        assert_eq!(rf.count_class_words(0), Some(1));
        assert_eq!(rf.count_class_words(1), Some(1));
        assert_eq!(rf.count_class_words(2), None);
    }
}
