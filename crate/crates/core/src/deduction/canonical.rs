use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::words::{Variable, Word};

/// `u₀ h₁ u₁ ⋯ h_n u_n` with simple separators `h_i` and blocks that are
/// products of distinct squares. A block lists the squared variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalWord {
    pub blocks: Vec<Vec<Variable>>,
    pub separators: Vec<Variable>,
}

impl CanonicalWord {
    pub fn to_word(&self) -> Word {
        let mut w = Word::empty();
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                w.push(self.separators[i - 1]);
            }
            for &x in block {
                w.push(x);
                w.push(x);
            }
        }
        w
    }

    pub fn block_word(&self, i: usize) -> Word {
        self.blocks[i].iter().flat_map(|&x| [x, x]).collect()
    }

    pub fn block_content(&self, i: usize) -> BTreeSet<Variable> {
        self.blocks[i].iter().copied().collect()
    }
}

impl fmt::Display for CanonicalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.blocks.len())
            .map(|i| self.block_word(i).to_string())
            .collect();
        write!(f, "{}", parts[0])?;
        for (h, p) in self.separators.iter().zip(&parts[1..]) {
            write!(f, " | {h} | {p}")?;
        }
        Ok(())
    }
}

/// Splits `w` into blocks and separators if it is in canonical form.
pub fn is_canonical(w: &Word) -> Option<CanonicalWord> {
    let letters = w.letters();
    let mut blocks = vec![Vec::new()];
    let mut separators = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let x = letters[i];
        if w.occ(x) == 1 {
            separators.push(x);
            blocks.push(Vec::new());
            i += 1;
            continue;
        }
        if letters.get(i + 1) != Some(&x) {
            return None;
        }
        let block = blocks.last_mut().expect("at least one block");
        if block.contains(&x) {
            return None;
        }
        block.push(x);
        i += 2;
    }
    Some(CanonicalWord { blocks, separators })
}
