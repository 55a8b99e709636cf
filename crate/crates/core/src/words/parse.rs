use std::fmt;

use super::{Identity, Variable, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at byte {} in {:?}",
            self.message, self.position, self.input
        )
    }
}

impl std::error::Error for ParseError {}

fn is_separator(c: char) -> bool {
    c.is_whitespace() || c == '.' || c == '·' || c == '*'
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

/// A parsed token before power expansion, remembering whether it was a
/// multi-character name and whether it touched the previous token.
struct Token {
    word: Word,
    multi_char: bool,
    glued: bool,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            input,
            chars: input.char_indices().collect(),
            pos: 0,
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let position = self
            .chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(self.input.len());
        ParseError {
            input: self.input.to_owned(),
            position,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_separators(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if is_separator(c)) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn exponent(&mut self) -> Result<usize, ParseError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected exponent after '^'"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        let k: usize = digits
            .parse()
            .map_err(|_| self.err("exponent too large"))?;
        if k == 0 {
            self.pos = start;
            return Err(self.err("zero exponent"));
        }
        Ok(k)
    }

    /// Parses a sequence of tokens until end of input or a closing paren.
    fn sequence(&mut self, nested: bool) -> Result<Word, ParseError> {
        let mut out = Word::empty();
        let mut prev_multi = false;
        let mut have_prev = false;
        loop {
            let separated = self.skip_separators();
            match self.peek() {
                None => {
                    if nested {
                        return Err(self.err("unclosed '('"));
                    }
                    return Ok(out);
                }
                Some(')') => {
                    if nested {
                        return Ok(out);
                    }
                    return Err(self.err("unmatched ')'"));
                }
                _ => {}
            }
            let tok = self.token(have_prev && !separated)?;
            if tok.glued && (tok.multi_char || prev_multi) {
                return Err(self.err(
                    "multi-character variables must be separated by whitespace or '.'",
                ));
            }
            prev_multi = tok.multi_char;
            have_prev = true;
            out.extend(&tok.word);
        }
    }

    fn token(&mut self, glued: bool) -> Result<Token, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sequence(true)?;
                self.pos += 1; // ')'
                let k = self.exponent()?;
                // A group behaves like a multi-character token for gluing.
                Ok(Token {
                    word: inner.pow(k),
                    multi_char: false,
                    glued: false,
                })
            }
            Some('1') => {
                self.pos += 1;
                if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    return Err(self.err("malformed token"));
                }
                let _ = self.exponent()?;
                Ok(Token {
                    word: Word::empty(),
                    multi_char: false,
                    glued: false,
                })
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                self.pos += 1;
                while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                let multi_char = name.len() > 1;
                let v = Variable::new(&name);
                let k = self.exponent()?;
                Ok(Token {
                    word: Word::letter(v).pow(k),
                    multi_char,
                    glued,
                })
            }
            Some(_) => Err(self.err("malformed token")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses the textual word syntax.
///
/// `1` is the empty word. Single-letter variables may be juxtaposed
/// (`xyxy`); names with digits need a separator (`x0 y z x1`). Whitespace,
/// `.` and `·` separate tokens; `^k` repeats the preceding token or
/// parenthesised group.
pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let mut p = Parser::new(text);
    if text.trim().is_empty() {
        return Err(p.err("empty input; use \"1\" for the empty word"));
    }
    p.sequence(false)
}

/// Parses `u = v`; `≈` and `~` are accepted in place of `=`.
pub fn parse_identity(text: &str) -> Result<Identity, ParseError> {
    let normalized = text.replace(['≈', '~'], "=");
    let parts: Vec<&str> = normalized.split('=').collect();
    if parts.len() != 2 {
        return Err(ParseError {
            input: text.to_owned(),
            position: 0,
            message: "an identity needs exactly one '='".into(),
        });
    }
    let lhs = parse_word(parts[0]).map_err(|mut e| {
        e.input = text.to_owned();
        e
    })?;
    let rhs = parse_word(parts[1]).map_err(|mut e| {
        e.input = text.to_owned();
        e.position += parts[0].len() + 1;
        e
    })?;
    Ok(Identity::new(lhs, rhs))
}
