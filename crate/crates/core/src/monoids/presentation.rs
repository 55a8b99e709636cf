use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use super::FiniteMonoid;
use crate::error::{Error, Result};
use crate::words::{parse_word, Variable};

/// One side of a defining relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Side {
    /// A nonempty word over the generators, as generator indices.
    Word(Vec<usize>),
    Zero,
    One,
}

/// `⟨generators | relations⟩` in the semigroup signature, with optional
/// `0` and `1` tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<String>,
    pub relations: Vec<(Side, Side)>,
}

impl Presentation {
    /// Parses `a,b | a^2=b^2=0, aba=a, bab=b`. Chains `u=v=w` expand to
    /// consecutive equalities. Angle brackets around the text are ignored.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('<').trim_end_matches('>');
        let text = text.trim().trim_start_matches('⟨').trim_end_matches('⟩');
        let (gens, rels) = text
            .split_once('|')
            .ok_or_else(|| Error::invalid("presentation needs 'generators | relations'"))?;
        let generators: Vec<String> = gens
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        if generators.is_empty() {
            return Err(Error::invalid("presentation without generators"));
        }
        for g in &generators {
            if !Variable::is_valid_name(g) {
                return Err(Error::invalid(format!("bad generator name {g:?}")));
            }
        }
        let side = |s: &str| -> Result<Side> {
            let s = s.trim();
            if s == "0" {
                return Ok(Side::Zero);
            }
            let w = parse_word(s)?;
            if w.is_empty() {
                return Ok(Side::One);
            }
            w.letters()
                .iter()
                .map(|v| {
                    generators
                        .iter()
                        .position(|g| g == v.name())
                        .ok_or_else(|| Error::invalid(format!("{v} is not a generator")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Side::Word)
        };
        let mut relations = Vec::new();
        for chain in rels.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let sides = chain.split('=').map(side).collect::<Result<Vec<_>>>()?;
            if sides.len() < 2 {
                return Err(Error::invalid(format!("relation {chain:?} has no '='")));
            }
            for pair in sides.windows(2) {
                relations.push((pair[0].clone(), pair[1].clone()));
            }
        }
        Ok(Presentation {
            name: name.to_owned(),
            generators,
            relations,
        })
    }

    fn uses(&self, s: &Side) -> bool {
        self.relations.iter().any(|(l, r)| l == s || r == s)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &Side| match s {
            Side::Zero => "0".to_string(),
            Side::One => "1".to_string(),
            Side::Word(w) => w.iter().map(|&g| self.generators[g].as_str()).collect(),
        };
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|(l, r)| format!("{}={}", side(l), side(r)))
            .collect();
        write!(f, "<{} | {}>", self.generators.join(","), rels.join(", "))
    }
}

/// All words of length `≤ max_len` over `k` letters, indexed in shortlex order.
struct WordSpace {
    k: usize,
    max_len: usize,
    offsets: Vec<usize>,
    total: usize,
}

impl WordSpace {
    fn new(k: usize, max_len: usize) -> Option<Self> {
        let mut offsets = Vec::with_capacity(max_len + 2);
        let mut total: usize = 0;
        let mut block: usize = 1;
        for _ in 0..=max_len {
            offsets.push(total);
            total = total.checked_add(block)?;
            block = block.checked_mul(k)?;
        }
        offsets.push(total);
        Some(WordSpace {
            k,
            max_len,
            offsets,
            total,
        })
    }

    fn zero(&self) -> usize {
        self.total
    }

    fn len_of(&self, idx: usize) -> usize {
        self.offsets.partition_point(|&o| o <= idx) - 1
    }

    fn encode(&self, w: &[usize]) -> usize {
        self.offsets[w.len()] + w.iter().fold(0, |acc, &g| acc * self.k + g)
    }

    fn decode(&self, idx: usize) -> Vec<usize> {
        let len = self.len_of(idx);
        let mut v = idx - self.offsets[len];
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = v % self.k;
            v /= self.k;
        }
        out
    }

    fn right(&self, idx: usize, g: usize) -> Option<usize> {
        if idx == self.zero() {
            return Some(idx);
        }
        let len = self.len_of(idx);
        (len < self.max_len).then(|| self.offsets[len + 1] + (idx - self.offsets[len]) * self.k + g)
    }

    fn left(&self, idx: usize, g: usize) -> Option<usize> {
        if idx == self.zero() {
            return Some(idx);
        }
        let len = self.len_of(idx);
        (len < self.max_len)
            .then(|| self.offsets[len + 1] + g * self.k.pow(len as u32) + (idx - self.offsets[len]))
    }
}

/// Union-find over a word space, closed under two-sided multiplication by
/// generators as far as the length bound allows.
struct Congruence<'a> {
    space: &'a WordSpace,
    parent: Vec<usize>,
    /// Per root: least member in index order (`usize::MAX` for the zero
    /// class, whose extensions are always zero).
    rep: Vec<usize>,
    queue: VecDeque<(usize, usize)>,
}

impl<'a> Congruence<'a> {
    fn new(space: &'a WordSpace) -> Self {
        let n = space.total + 1;
        let mut rep: Vec<usize> = (0..n).collect();
        rep[space.zero()] = usize::MAX;
        Congruence {
            space,
            parent: (0..n).collect(),
            rep,
            queue: VecDeque::new(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// A member whose extensions stand for the whole class.
    fn extendable(&self, root: usize) -> Option<usize> {
        let r = self.rep[root];
        if r == usize::MAX {
            return Some(self.space.zero());
        }
        (self.space.len_of(r) < self.space.max_len).then_some(r)
    }

    fn union(&mut self, a: usize, b: usize) {
        self.queue.push_back((a, b));
        while let Some((a, b)) = self.queue.pop_front() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            if let (Some(xa), Some(xb)) = (self.extendable(ra), self.extendable(rb)) {
                for g in 0..self.space.k {
                    let r = (self.space.right(xa, g), self.space.right(xb, g));
                    if let (Some(p), Some(q)) = r {
                        self.queue.push_back((p, q));
                    }
                    let l = (self.space.left(xa, g), self.space.left(xb, g));
                    if let (Some(p), Some(q)) = l {
                        self.queue.push_back((p, q));
                    }
                }
            }
            let rep = self.rep[ra].min(self.rep[rb]);
            let rep = if self.rep[ra] == usize::MAX || self.rep[rb] == usize::MAX {
                usize::MAX
            } else {
                rep
            };
            self.parent[rb] = ra;
            self.rep[ra] = rep;
        }
    }
}

fn side_node(space: &WordSpace, s: &Side) -> usize {
    match s {
        Side::Zero => space.zero(),
        Side::One => space.encode(&[]),
        Side::Word(w) => space.encode(w),
    }
}

/// Largest number of words the closure is allowed to track.
const MAX_NODES: usize = 4_000_000;

/// Builds the finite semigroup (or monoid, if `1` occurs in a relation)
/// defined by `p`, failing if it has more than `cap` elements.
///
/// The construction identifies words of bounded length by the relations and
/// their two-sided consequences, reads off a table on short representatives
/// and accepts it only once it is associative, satisfies every relation and
/// agrees with the identification on all words in range. The bound grows
/// until that happens.
pub fn from_presentation(p: &Presentation, cap: usize) -> Result<FiniteMonoid> {
    if cap == 0 {
        return Err(Error::invalid("cap must be at least 1"));
    }
    let k = p.generators.len();
    let uses_zero = p.uses(&Side::Zero);
    let uses_one = p.uses(&Side::One);
    let longest = p
        .relations
        .iter()
        .flat_map(|(l, r)| [l, r])
        .map(|s| match s {
            Side::Word(w) => w.len(),
            _ => 0,
        })
        .max()
        .unwrap_or(1);
    let mut max_len = (2 * longest).max(4);
    loop {
        let space = WordSpace::new(k, max_len)
            .filter(|s| s.total <= MAX_NODES)
            .ok_or_else(|| {
                Error::CapExceeded(format!(
                    "presentation {} did not close within word length {}",
                    p.name,
                    max_len - 1
                ))
            })?;
        match attempt(p, &space, uses_zero, uses_one, cap)? {
            Some(m) => return Ok(m),
            None => max_len += 2,
        }
    }
}

fn attempt(
    p: &Presentation,
    space: &WordSpace,
    uses_zero: bool,
    uses_one: bool,
    cap: usize,
) -> Result<Option<FiniteMonoid>> {
    let mut cong = Congruence::new(space);
    for (l, r) in &p.relations {
        let (a, b) = (side_node(space, l), side_node(space, r));
        cong.union(a, b);
    }
    let short = space.max_len / 2;

    // Element classes, keyed by root, with their least member.
    let mut classes: BTreeMap<usize, usize> = BTreeMap::new();
    let first = if uses_one { 0 } else { 1 };
    for idx in space.offsets[first]..space.offsets[short + 1] {
        let root = cong.find(idx);
        classes.entry(root).or_insert(cong.rep[root]);
    }
    if uses_zero {
        let root = cong.find(space.zero());
        classes.insert(root, usize::MAX);
    }
    if classes.len() > cap {
        return Err(Error::CapExceeded(format!(
            "presentation {} has more than {cap} elements",
            p.name
        )));
    }

    let label = |rep: usize| -> String {
        if rep == usize::MAX {
            return "0".into();
        }
        let w = space.decode(rep);
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&g| p.generators[g].as_str()).collect()
    };
    let mut order: Vec<(usize, usize, String)> = classes
        .iter()
        .map(|(&root, &rep)| (root, rep, label(rep)))
        .collect();
    order.sort_by(|a, b| {
        let key = |l: &str| (l != "0", l != "1", l.to_owned());
        key(&a.2).cmp(&key(&b.2))
    });
    let position: BTreeMap<usize, usize> = order
        .iter()
        .enumerate()
        .map(|(i, (root, _, _))| (*root, i))
        .collect();
    let n = order.len();

    let mut table = vec![vec![0; n]; n];
    for (i, (_, ra, _)) in order.iter().enumerate() {
        for (j, (_, rb, _)) in order.iter().enumerate() {
            let node = if *ra == usize::MAX || *rb == usize::MAX {
                space.zero()
            } else {
                let mut w = space.decode(*ra);
                w.extend(space.decode(*rb));
                space.encode(&w)
            };
            match position.get(&cong.find(node)) {
                Some(&pos) => table[i][j] = pos,
                None => return Ok(None),
            }
        }
    }
    let identity = if uses_one {
        Some(position[&cong.find(space.encode(&[]))])
    } else {
        None
    };
    let elements = order.iter().map(|(_, _, l)| l.clone()).collect();
    let m = FiniteMonoid::new(p.name.clone(), elements, identity, table)?;
    if !m.validate().ok {
        return Ok(None);
    }

    let gen_elems: Vec<usize> = match (0..p.generators.len())
        .map(|g| position.get(&cong.find(space.encode(&[g]))).copied())
        .collect::<Option<Vec<_>>>()
    {
        Some(v) => v,
        None => return Ok(None),
    };
    let zero_root = cong.find(space.zero());
    let zero_pos = position.get(&zero_root).copied();
    let eval = |s: &Side| -> Option<usize> {
        match s {
            Side::Zero => zero_pos,
            Side::One => identity,
            Side::Word(w) => {
                let seq: Vec<usize> = w.iter().map(|&g| gen_elems[g]).collect();
                m.eval_indices(&seq)
            }
        }
    };
    for (l, r) in &p.relations {
        if eval(l).is_none() || eval(l) != eval(r) {
            return Ok(None);
        }
    }
    if let (true, Some(z)) = (uses_zero, zero_pos) {
        if (0..n).any(|x| m.mul(z, x) != z || m.mul(x, z) != z) {
            return Ok(None);
        }
    }
    for idx in space.offsets[1]..space.total {
        let root = cong.find(idx);
        if let Some(&pos) = position.get(&root) {
            let seq: Vec<usize> = space.decode(idx).iter().map(|&g| gen_elems[g]).collect();
            if m.eval_indices(&seq) != Some(pos) {
                return Ok(None);
            }
        }
    }
    Ok(Some(m))
}
