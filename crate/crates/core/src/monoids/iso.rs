use serde::Serialize;

use super::FiniteMonoid;

/// A bijection `A → B` given as `map[a] = b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Isomorphism {
    pub map: Vec<usize>,
    /// True when the map reverses products: `φ(xy) = φ(y)φ(x)`.
    pub anti: bool,
}

impl Isomorphism {
    pub fn verify(&self, a: &FiniteMonoid, b: &FiniteMonoid) -> bool {
        let n = a.order();
        if b.order() != n || self.map.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &y in &self.map {
            if y >= n || std::mem::replace(&mut hit[y], true) {
                return false;
            }
        }
        (0..n).all(|x| {
            (0..n).all(|y| {
                let lhs = self.map[a.mul(x, y)];
                let rhs = if self.anti {
                    b.mul(self.map[y], self.map[x])
                } else {
                    b.mul(self.map[x], self.map[y])
                };
                lhs == rhs
            })
        })
    }
}

/// Isomorphism-invariant data of an element: idempotency, the shape of its
/// cyclic subsemigroup, and the sizes of its row/column images.
fn signature(m: &FiniteMonoid, x: usize) -> (bool, usize, usize, usize, usize) {
    let mut powers = vec![x];
    let (index, period) = loop {
        let next = m.mul(*powers.last().unwrap(), x);
        if let Some(pos) = powers.iter().position(|&p| p == next) {
            break (pos, powers.len() - pos);
        }
        powers.push(next);
    };
    let mut row: Vec<usize> = (0..m.order()).map(|y| m.mul(x, y)).collect();
    row.sort_unstable();
    row.dedup();
    let mut col: Vec<usize> = (0..m.order()).map(|y| m.mul(y, x)).collect();
    col.sort_unstable();
    col.dedup();
    (m.is_idempotent(x), index, period, row.len(), col.len())
}

/// Greedy generating set: scan elements in order, keep those not yet generated.
fn generators(m: &FiniteMonoid) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut have = vec![false; m.order()];
    if let Some(e) = m.identity {
        have[e] = true;
    }
    for x in 0..m.order() {
        if !have[x] {
            gens.push(x);
            let mut seed = gens.clone();
            seed.extend(m.identity);
            for y in m.closure(&seed) {
                have[y] = true;
            }
        }
    }
    gens
}

/// Extends the partial map along products of already-mapped elements.
/// Returns false on a conflict or a non-injective assignment.
fn extend(a: &FiniteMonoid, b: &FiniteMonoid, map: &mut [Option<usize>], used: &mut [bool]) -> bool {
    let n = a.order();
    loop {
        let mut changed = false;
        for x in 0..n {
            let Some(fx) = map[x] else { continue };
            for y in 0..n {
                let Some(fy) = map[y] else { continue };
                let p = a.mul(x, y);
                let fp = b.mul(fx, fy);
                match map[p] {
                    Some(q) if q != fp => return false,
                    Some(_) => {}
                    None => {
                        if used[fp] {
                            return false;
                        }
                        map[p] = Some(fp);
                        used[fp] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(a: &FiniteMonoid, b: &FiniteMonoid) -> Option<Vec<usize>> {
    let n = a.order();
    if b.order() != n || a.identity.is_some() != b.identity.is_some() {
        return None;
    }
    let sig_a: Vec<_> = (0..n).map(|x| signature(a, x)).collect();
    let sig_b: Vec<_> = (0..n).map(|x| signature(b, x)).collect();
    let mut sa = sig_a.clone();
    let mut sb = sig_b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let gens = generators(a);
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    if let (Some(ea), Some(eb)) = (a.identity, b.identity) {
        map[ea] = Some(eb);
        used[eb] = true;
    }

    fn go(
        a: &FiniteMonoid,
        b: &FiniteMonoid,
        gens: &[usize],
        sig_a: &[(bool, usize, usize, usize, usize)],
        sig_b: &[(bool, usize, usize, usize, usize)],
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> Option<Vec<usize>> {
        let Some((&g, rest)) = gens.split_first() else {
            return map.iter().copied().collect();
        };
        if map[g].is_some() {
            // already forced by earlier generators
            return go(a, b, rest, sig_a, sig_b, map, used);
        }
        for cand in 0..b.order() {
            if used[cand] || sig_a[g] != sig_b[cand] {
                continue;
            }
            let (saved_map, saved_used) = (map.clone(), used.clone());
            map[g] = Some(cand);
            used[cand] = true;
            if extend(a, b, map, used) {
                if let Some(found) = go(a, b, rest, sig_a, sig_b, map, used) {
                    return Some(found);
                }
            }
            *map = saved_map;
            *used = saved_used;
        }
        None
    }

    let found = go(a, b, &gens, &sig_a, &sig_b, &mut map, &mut used)?;
    Some(found)
}

/// Searches for an isomorphism `A → B`; with `allow_anti`, falls back to an
/// anti-isomorphism when no isomorphism exists. The search order is fixed,
/// so the result is deterministic.
pub fn find_isomorphism(a: &FiniteMonoid, b: &FiniteMonoid, allow_anti: bool) -> Option<Isomorphism> {
    if let Some(map) = search(a, b) {
        return Some(Isomorphism { map, anti: false });
    }
    if allow_anti {
        let bt = b.transpose();
        if let Some(map) = search(a, &bt) {
            return Some(Isomorphism { map, anti: true });
        }
    }
    None
}
