use std::fmt;

use serde::Serialize;

use super::is_canonical;
use crate::equations::lq_equiv_syntactic;
use crate::error::{Error, Result};
use crate::words::{sigma, sigma_infinity, Identity, Variable, Word};

/// A block `p_i` written in terms of the two role variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Block {
    One,
    X2,
    Y2,
    X2Y2,
    Y2X2,
}

impl Block {
    fn swapped(self) -> Block {
        match self {
            Block::One => Block::One,
            Block::X2 => Block::Y2,
            Block::Y2 => Block::X2,
            Block::X2Y2 => Block::Y2X2,
            Block::Y2X2 => Block::X2Y2,
        }
    }

    fn starts_with_x(self) -> bool {
        matches!(self, Block::X2 | Block::X2Y2)
    }

    fn word(self, x: Variable, y: Variable) -> Word {
        let v = match self {
            Block::One => vec![],
            Block::X2 => vec![x, x],
            Block::Y2 => vec![y, y],
            Block::X2Y2 => vec![x, x, y, y],
            Block::Y2X2 => vec![y, y, x, x],
        };
        Word::from_vars(v)
    }

    /// Reads `w` as one of the five shapes over `x`, `y`.
    fn read(w: &Word, x: Variable, y: Variable) -> Option<Block> {
        [Block::One, Block::X2, Block::Y2, Block::X2Y2, Block::Y2X2]
            .into_iter()
            .find(|b| b.word(x, y) == *w)
    }
}

/// Which of `x²y²` / `y²x²` ends the left side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    XY,
    YX,
}

/// `(∏ p_i h_i) x²y² ≈ (∏ p_i h_i) y²x²` with `p_i ∈ {1, x², y², x²y², y²x²}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LambdaIdentity {
    pub x: Variable,
    pub y: Variable,
    pub prefix: Vec<(Block, Variable)>,
    pub orientation: Orientation,
}

impl LambdaIdentity {
    pub fn new(x: Variable, y: Variable, prefix: Vec<(Block, Variable)>, orientation: Orientation) -> Result<Self> {
        if prefix.is_empty() || prefix.iter().all(|(p, _)| *p == Block::One) {
            return Err(Error::invalid("a lambda identity needs some p_i different from 1"));
        }
        Ok(LambdaIdentity {
            x,
            y,
            prefix,
            orientation,
        })
    }

    pub fn blocks(&self) -> Vec<Block> {
        self.prefix.iter().map(|(p, _)| *p).collect()
    }

    pub fn to_identity(&self) -> Identity {
        let mut pre = Word::empty();
        for (p, h) in &self.prefix {
            pre.extend(&p.word(self.x, self.y));
            pre.push(*h);
        }
        let xy = Block::X2Y2.word(self.x, self.y);
        let yx = Block::Y2X2.word(self.x, self.y);
        match self.orientation {
            Orientation::XY => Identity::new(pre.concat(&xy), pre.concat(&yx)),
            Orientation::YX => Identity::new(pre.concat(&yx), pre.concat(&xy)),
        }
    }

    /// Same identity up to symmetry, with the roles arranged so the first
    /// block different from 1 starts with `x²` and the left side ends in
    /// `x²y²`.
    pub fn normalized(&self) -> LambdaIdentity {
        let first = self.prefix.iter().map(|(p, _)| *p).find(|p| *p != Block::One);
        let mut out = self.clone();
        if first.is_some_and(|p| !p.starts_with_x()) {
            out.x = self.y;
            out.y = self.x;
            out.prefix = self.prefix.iter().map(|(p, h)| (p.swapped(), *h)).collect();
        }
        // both sides are symmetric under the swap, so only the reading order changes
        out.orientation = Orientation::XY;
        out
    }
}

impl fmt::Display for LambdaIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_identity())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SigmaClass {
    Index(usize),
    Infinity,
}

impl SigmaClass {
    /// The representative identity `σ_n` or `σ_∞`.
    pub fn identity(self) -> Identity {
        match self {
            SigmaClass::Index(n) => sigma(n).expect("n >= 1"),
            SigmaClass::Infinity => sigma_infinity(),
        }
    }
}

impl fmt::Display for SigmaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaClass::Index(n) => write!(f, "sigma_{n}"),
            SigmaClass::Infinity => write!(f, "sigma_inf"),
        }
    }
}

/// Drops the `p_i = 1` pairs; a mixed block gives `σ_∞`, otherwise equal
/// neighbours are merged and the remaining length is the index.
pub fn sigma_classify(lambda: &LambdaIdentity) -> SigmaClass {
    let ps: Vec<Block> = lambda.blocks().into_iter().filter(|p| *p != Block::One).collect();
    if ps.iter().any(|p| matches!(p, Block::X2Y2 | Block::Y2X2)) {
        return SigmaClass::Infinity;
    }
    let mut collapsed = ps.clone();
    collapsed.dedup();
    SigmaClass::Index(collapsed.len().max(1))
}

fn block_word(blocks: &[Vec<Variable>], i: usize) -> Word {
    blocks[i].iter().flat_map(|&x| [x, x]).collect()
}

/// Rewrites `u ≈ v` into identities of the shape `(∏ p_i h_i) x²y² ≈ (∏ p_i
/// h_i) y²x²` that define the same subvariety of `E¹`, following the square
/// interchanges of the constructive argument. Every emitted identity has the
/// side coming from `v` on the left.
pub fn lambda_reduce(u: &Word, v: &Word) -> Result<Vec<LambdaIdentity>> {
    let pre = |m: &str| Err(Error::Precondition(m.to_owned()));
    if u == v {
        return pre("the two words coincide");
    }
    let lq = lq_equiv_syntactic(u, v)?;
    if !(lq.q_holds && lq.l_holds) {
        return pre("the identity fails in L2^1 or Q^1");
    }
    let cu = is_canonical(u).expect("checked above");
    let mut cv = is_canonical(v).expect("checked above");
    let mut out = Vec::new();
    for l in 1..cu.blocks.len() {
        loop {
            let (ub, vb) = (&cu.blocks[l], &cv.blocks[l]);
            if ub == vb {
                break;
            }
            let q = ub.iter().rev().zip(vb.iter().rev()).take_while(|(a, b)| a == b).count();
            let x = ub[ub.len() - q - 1];
            let xpos = vb.iter().position(|&z| z == x).expect("equal block contents");
            let ys: Vec<Variable> = vb[xpos + 1..vb.len() - q].to_vec();
            for &y in &ys {
                let prefix = (0..l)
                    .map(|i| {
                        let p = block_word(&cv.blocks, i).project_onto(&[x, y]);
                        (Block::read(&p, x, y).expect("projection of distinct squares"), cv.separators[i])
                    })
                    .collect();
                out.push(LambdaIdentity::new(x, y, prefix, Orientation::XY)?);
                let blk = &mut cv.blocks[l];
                let i = blk.iter().position(|&z| z == x).expect("present");
                blk.swap(i, i + 1);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn v(s: &str) -> Variable {
        Variable::new(s)
    }

    fn lam(ps: &[Block]) -> LambdaIdentity {
        let prefix = ps
            .iter()
            .enumerate()
            .map(|(i, p)| (*p, Variable::indexed('h', i + 1)))
            .collect();
        LambdaIdentity::new(v("x"), v("y"), prefix, Orientation::XY).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(sigma_classify(&lam(&[Block::X2, Block::Y2, Block::X2])), SigmaClass::Index(3));
        assert_eq!(sigma_classify(&lam(&[Block::X2, Block::X2])), SigmaClass::Index(1));
        assert_eq!(sigma_classify(&lam(&[Block::Y2X2])), SigmaClass::Infinity);
        assert_eq!(sigma_classify(&lam(&[Block::One, Block::Y2, Block::One])), SigmaClass::Index(1));
    }

    #[test]
    fn reduce_sigma_one() {
        let s1 = sigma(1).unwrap();
        let out = lambda_reduce(&s1.lhs, &s1.rhs).unwrap();
        assert_eq!(out.len(), 1);
        let n = out[0].normalized();
        assert_eq!(n.blocks(), vec![Block::X2]);
        assert!(n.to_identity().same_up_to_orientation(&s1));
        assert_eq!(sigma_classify(&out[0]), SigmaClass::Index(1));
    }

    #[test]
    fn reduce_sigma_infinity_shape() {
        let out = lambda_reduce(&w("x^2y^2 h x^2y^2"), &w("x^2y^2 h y^2x^2")).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].normalized().blocks(), vec![Block::X2Y2]);
        assert_eq!(sigma_classify(&out[0]), SigmaClass::Infinity);
    }

    #[test]
    fn preconditions() {
        let u = w("x^2 h x^2 y^2");
        assert!(lambda_reduce(&u, &u).is_err());
        assert!(lambda_reduce(&w("x^2 h y^2"), &w("y^2 h x^2")).is_err());
        assert!(lambda_reduce(&w("xyx"), &u).is_err());
    }

    #[test]
    fn several_peels() {
        let u = w("x^2 y^2 z^2 h z^2 y^2 x^2");
        let v = w("x^2 y^2 z^2 h x^2 y^2 z^2");
        let out = lambda_reduce(&u, &v).unwrap();
        assert_eq!(out.len(), 3);
        for l in &out {
            assert!(is_canonical(&l.to_identity().lhs).is_some());
        }
    }

    #[test]
    fn normalized_is_idempotent() {
        let l = LambdaIdentity::new(v("x"), v("y"), vec![(Block::Y2, v("h1")), (Block::X2, v("h2"))], Orientation::XY)
            .unwrap();
        let n = l.normalized();
        assert_eq!(n.blocks(), vec![Block::X2, Block::Y2]);
        assert_eq!(n.normalized(), n);
        assert!(n.to_identity().same_up_to_orientation(&l.to_identity()));
    }
}
