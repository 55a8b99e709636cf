use super::{Identity, Variable, Word};
use crate::error::{Error, Result};

fn x(i: usize) -> Variable {
    Variable::indexed('x', i)
}

fn v(name: &str) -> Variable {
    Variable::new(name)
}

/// The Zimin word `z_n` over `x1..xn`: `z_1 = x1`, `z_{k+1} = z_k x_{k+1} z_k`.
pub fn zimin(n: usize) -> Result<Word> {
    if n == 0 {
        return Err(Error::invalid("zimin: n must be at least 1"));
    }
    let mut z = Word::letter(x(1));
    for k in 2..=n {
        let mut next = z.clone();
        next.push(x(k));
        next.extend(&z);
        z = next;
    }
    Ok(z)
}

/// `z_n = p_1 · (p_2 p_1)(p_3 p_2) ⋯ (p_n p_{n-1}) · q_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZiminDecomposition {
    pub parts: Vec<Word>,
    pub tail: Word,
}

impl ZiminDecomposition {
    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn reassemble(&self) -> Word {
        let p = &self.parts;
        let mut out = p[0].clone();
        for i in 0..p.len() - 1 {
            out.extend(&p[i + 1]);
            out.extend(&p[i]);
        }
        out.extend(&self.tail);
        out
    }

    /// Checks the structural properties of the parts:
    /// `con(p_i) ⊆ {x1..xi}`, `occ(x_i, p_i) = 1` and
    /// `con(q_n) ⊆ {x1..x_{n-2}}`.
    pub fn check_properties(&self) -> std::result::Result<(), String> {
        let n = self.n();
        for (k, p) in self.parts.iter().enumerate() {
            let i = k + 1;
            let allowed: Vec<Variable> = (1..=i).map(x).collect();
            if p.letters().iter().any(|v| !allowed.contains(v)) {
                return Err(format!("con(p{i}) not within x1..x{i}"));
            }
            if p.occ(x(i)) != 1 {
                return Err(format!("occ(x{i}, p{i}) != 1"));
            }
        }
        let allowed: Vec<Variable> = (1..n.saturating_sub(1)).map(x).collect();
        if self.tail.letters().iter().any(|v| !allowed.contains(v)) {
            return Err(format!("con(q{n}) not within x1..x{}", n - 2));
        }
        Ok(())
    }
}

/// Splits `z_n` (n ≥ 3) into parts by the recursion
/// `p_n = q_{n-1} x_n p_1 (p_2 p_1) ⋯ (p_{n-2} p_{n-3})`, `q_n = p_{n-2} q_{n-1}`.
pub fn zimin_decompose(n: usize) -> Result<ZiminDecomposition> {
    if n < 3 {
        return Err(Error::invalid("zimin_decompose: n must be at least 3"));
    }
    let mut parts = vec![
        Word::letter(x(1)),
        Word::letter(x(2)),
        Word::from_vars(vec![x(3), x(1)]),
    ];
    let mut tail = Word::letter(x(1));
    for m in 4..=n {
        let mut p = tail.clone();
        p.push(x(m));
        p.extend(&parts[0]);
        for i in 1..=m - 3 {
            p.extend(&parts[i]);
            p.extend(&parts[i - 1]);
        }
        tail = parts[m - 3].concat(&tail);
        parts.push(p);
    }
    Ok(ZiminDecomposition { parts, tail })
}

/// `w_n = x0 · yz · x1x0 · x2x1 ⋯ xn x_{n-1} · yz · xn`; the primed word has `zy`
/// in both places.
pub fn wn_xyxy(n: usize, primed: bool) -> Result<Word> {
    if n < 2 {
        return Err(Error::invalid("wn_xyxy: n must be at least 2"));
    }
    let (a, b) = if primed { (v("z"), v("y")) } else { (v("y"), v("z")) };
    let mut w = vec![x(0), a, b];
    for i in 1..=n {
        w.push(x(i));
        w.push(x(i - 1));
    }
    w.extend([a, b, x(n)]);
    Ok(Word::from_vars(w))
}

/// `w_n = x0 h x1 yz x0 · x2x1 ⋯ x_{n-1}x_{n-2} · xn yz x_{n-1} t xn`; primed swaps y and z.
pub fn wn_zimin(n: usize, primed: bool) -> Result<Word> {
    if n < 3 {
        return Err(Error::invalid("wn_zimin: n must be at least 3"));
    }
    let (a, b) = if primed { (v("z"), v("y")) } else { (v("y"), v("z")) };
    let mut w = vec![x(0), v("h"), x(1), a, b, x(0)];
    for i in 2..n {
        w.push(x(i));
        w.push(x(i - 1));
    }
    w.extend([x(n), a, b, x(n - 1), v("t"), x(n)]);
    Ok(Word::from_vars(w))
}

/// `σ_n : (∏ e_i h_i) x²y² ≈ (∏ e_i h_i) y²x²` with `e_i = x²` for odd `i`
/// and `y²` for even `i`.
pub fn sigma(n: usize) -> Result<Identity> {
    if n == 0 {
        return Err(Error::invalid("sigma: n must be at least 1"));
    }
    let (xv, yv) = (v("x"), v("y"));
    let mut prefix = Word::empty();
    for i in 1..=n {
        let e = if i % 2 == 1 { xv } else { yv };
        prefix.push(e);
        prefix.push(e);
        prefix.push(Variable::indexed('h', i));
    }
    let xx_yy = Word::from_vars(vec![xv, xv, yv, yv]);
    let yy_xx = Word::from_vars(vec![yv, yv, xv, xv]);
    Ok(Identity::new(prefix.concat(&xx_yy), prefix.concat(&yy_xx)))
}

/// `σ_∞ : x²y²hx²y² ≈ x²y²hy²x²`.
pub fn sigma_infinity() -> Identity {
    Identity::parse("x^2y^2hx^2y^2 = x^2y^2hy^2x^2")
}
