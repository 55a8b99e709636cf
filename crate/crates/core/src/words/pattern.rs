use std::collections::BTreeSet;

use super::{Substitution, Variable, Word};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatchOptions {
    /// Forbid empty images (semigroup-style matching).
    pub nonempty: bool,
}

/// One occurrence of `pattern·θ` as the factor `text[start..end]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    pub start: usize,
    pub end: usize,
    pub theta: Substitution,
}

/// Pattern variables renumbered locally, with an optional partial assignment
/// fixed in advance as concrete words.
struct Compiled {
    vars: Vec<Variable>,
    seq: Vec<usize>,
}

fn compile(pattern: &Word) -> Compiled {
    let mut vars: Vec<Variable> = Vec::new();
    let seq = pattern
        .letters()
        .iter()
        .map(|v| match vars.iter().position(|u| u == v) {
            Some(i) => i,
            None => {
                vars.push(*v);
                vars.len() - 1
            }
        })
        .collect();
    Compiled { vars, seq }
}

/// An image is either a slice of the text or a fixed word.
#[derive(Clone)]
enum Image {
    Slice(usize, usize),
    Fixed(Vec<Variable>),
}

struct Search<'a, F: FnMut(usize, &[Option<Image>])> {
    seq: &'a [usize],
    text: &'a [Variable],
    nonempty: bool,
    end: Option<usize>,
    assign: Vec<Option<Image>>,
    emit: F,
}

impl<F: FnMut(usize, &[Option<Image>])> Search<'_, F> {
    fn min_remaining(&self, i: usize) -> usize {
        self.seq[i..]
            .iter()
            .map(|&k| match &self.assign[k] {
                Some(Image::Slice(s, e)) => e - s,
                Some(Image::Fixed(w)) => w.len(),
                None => usize::from(self.nonempty),
            })
            .sum()
    }

    fn run(&mut self, i: usize, p: usize) {
        let limit = self.end.unwrap_or(self.text.len());
        if i == self.seq.len() {
            if self.end.is_none_or(|e| e == p) {
                (self.emit)(p, &self.assign);
            }
            return;
        }
        if p + self.min_remaining(i) > limit {
            return;
        }
        let k = self.seq[i];
        match self.assign[k].clone() {
            Some(img) => {
                let letters: &[Variable] = match &img {
                    Image::Slice(s, e) => &self.text[*s..*e],
                    Image::Fixed(w) => w,
                };
                let len = letters.len();
                if p + len <= limit && &self.text[p..p + len] == letters {
                    self.run(i + 1, p + len);
                }
            }
            None => {
                let lo = usize::from(self.nonempty);
                for len in lo..=limit - p {
                    self.assign[k] = Some(Image::Slice(p, p + len));
                    self.run(i + 1, p + len);
                }
                self.assign[k] = None;
            }
        }
    }
}

fn to_substitution(vars: &[Variable], text: &[Variable], assign: &[Option<Image>]) -> Substitution {
    vars.iter()
        .zip(assign)
        .map(|(&v, img)| {
            let w = match img {
                Some(Image::Slice(s, e)) => Word::from_vars(text[*s..*e].to_vec()),
                Some(Image::Fixed(w)) => Word::from_vars(w.clone()),
                None => Word::empty(),
            };
            (v, w)
        })
        .collect()
}

/// Every occurrence of an instance of `pattern` inside `text`.
pub fn match_occurrences(pattern: &Word, text: &Word, opts: MatchOptions) -> Vec<Occurrence> {
    let c = compile(pattern);
    let t = text.letters();
    let mut out = BTreeSet::new();
    for start in 0..=t.len() {
        let mut search = Search {
            seq: &c.seq,
            text: t,
            nonempty: opts.nonempty,
            end: None,
            assign: vec![None; c.vars.len()],
            emit: |end: usize, a: &[Option<Image>]| {
                out.insert(Occurrence {
                    start,
                    end,
                    theta: to_substitution(&c.vars, t, a),
                });
            },
        };
        search.run(0, start);
    }
    out.into_iter().collect()
}

/// All substitutions θ on `con(pattern)` such that `pattern·θ` is a factor of
/// `text`. Empty images are allowed unless `opts.nonempty` is set.
pub fn match_pattern(pattern: &Word, text: &Word, opts: MatchOptions) -> BTreeSet<Substitution> {
    match_occurrences(pattern, text, opts)
        .into_iter()
        .map(|o| o.theta)
        .collect()
}

/// All θ with `pattern·θ = text` exactly, extending the fixed partial map
/// `given`. Variables of `given` outside `con(pattern)` are kept in the result.
pub fn match_exact(
    pattern: &Word,
    text: &Word,
    given: &Substitution,
    opts: MatchOptions,
) -> Vec<Substitution> {
    let c = compile(pattern);
    let t = text.letters();
    let assign: Vec<Option<Image>> = c
        .vars
        .iter()
        .map(|&v| given.get(v).map(|w| Image::Fixed(w.letters().to_vec())))
        .collect();
    if opts.nonempty && assign.iter().any(|a| matches!(a, Some(Image::Fixed(w)) if w.is_empty())) {
        return Vec::new();
    }
    let mut out = BTreeSet::new();
    let mut search = Search {
        seq: &c.seq,
        text: t,
        nonempty: opts.nonempty,
        end: Some(t.len()),
        assign,
        emit: |_end: usize, a: &[Option<Image>]| {
            let mut theta = given.clone();
            for (v, w) in to_substitution(&c.vars, t, a).iter() {
                theta.insert(*v, w.clone());
            }
            out.insert(theta);
        },
    };
    search.run(0, 0);
    out.into_iter().collect()
}
