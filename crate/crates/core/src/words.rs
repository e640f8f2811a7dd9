//! Freely reduced words over named generators, cyclic reduction, conjugacy
//! keys, and shortlex enumeration.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

/// One syllable: a generator name with a nonzero exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: String,
    pub exp: i64,
}

impl Letter {
    pub fn new(gen: &str, exp: i64) -> Self {
        Letter {
            gen: gen.to_string(),
            exp,
        }
    }
}

/// A freely reduced word; adjacent letters have distinct generator names and
/// all exponents are nonzero. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(name: &str) -> Self {
        Word {
            letters: alloc::vec![Letter::new(name, 1)],
        }
    }

    /// Builds a word, freely reducing as needed.
    pub fn new(letters: Vec<Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if l.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.gen == l.gen => {
                    last.exp += l.exp;
                    if last.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total symbol length: the sum of absolute exponents.
    pub fn symbol_len(&self) -> usize {
        self.letters.iter().map(|l| l.exp.unsigned_abs() as usize).sum()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen.clone(),
                    exp: -l.exp,
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word::new(letters)
    }

    /// `u * self * u^-1`.
    pub fn conjugated_by(&self, u: &Word) -> Word {
        u.concat(self).concat(&u.inverse())
    }

    pub fn pow(&self, k: i64) -> Word {
        if k == 0 {
            return Word::identity();
        }
        let base = if k > 0 { self.clone() } else { self.inverse() };
        let mut out = base.clone();
        for _ in 1..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Single symbols `(name, sign)` in order.
    pub fn symbols(&self) -> Vec<(&str, i8)> {
        let mut out = Vec::with_capacity(self.symbol_len());
        for l in &self.letters {
            let sign: i8 = if l.exp > 0 { 1 } else { -1 };
            for _ in 0..l.exp.unsigned_abs() {
                out.push((l.gen.as_str(), sign));
            }
        }
        out
    }

    fn from_symbols(symbols: &[(&str, i8)]) -> Word {
        Word::new(
            symbols
                .iter()
                .map(|(g, s)| Letter::new(g, *s as i64))
                .collect(),
        )
    }

    /// Removes conjugating prefix/suffix pairs until the word is cyclically
    /// reduced.
    pub fn cyclic_reduce(&self) -> Word {
        let mut syms = self.symbols();
        loop {
            let n = syms.len();
            if n < 2 {
                break;
            }
            let first = syms[0];
            let last = syms[n - 1];
            if first.0 == last.0 && first.1 == -last.1 {
                syms.remove(n - 1);
                syms.remove(0);
            } else {
                break;
            }
        }
        Word::from_symbols(&syms)
    }

    /// Canonical conjugacy-class representative: the shortlex-least cyclic
    /// rotation of the cyclic reduction, also identifying a class with its
    /// inverse unless `oriented`.
    pub fn conjugacy_key(&self, oriented: bool) -> Word {
        let reduced = self.cyclic_reduce();
        if reduced.is_identity() {
            return Word::identity();
        }
        let forward = min_rotation(&reduced);
        if oriented {
            return forward;
        }
        let backward = min_rotation(&reduced.inverse());
        core::cmp::min(forward, backward)
    }

    pub fn is_conjugacy_canonical(&self, oriented: bool) -> bool {
        &self.conjugacy_key(oriented) == self
    }
}

fn min_rotation(w: &Word) -> Word {
    let syms = w.symbols();
    let n = syms.len();
    let mut best: Option<Vec<(&str, i8)>> = None;
    for r in 0..n {
        let rotated: Vec<(&str, i8)> = syms.iter().cycle().skip(r).take(n).copied().collect();
        if best
            .as_ref()
            .map_or(true, |b| symbol_lex(&rotated, b) == Ordering::Less)
        {
            best = Some(rotated);
        }
    }
    Word::from_symbols(&best.unwrap())
}

fn symbol_rank(s: (&str, i8)) -> (&str, u8) {
    (s.0, if s.1 > 0 { 0 } else { 1 })
}

fn symbol_lex(a: &[(&str, i8)], b: &[(&str, i8)]) -> Ordering {
    let mut ia = a.iter();
    let mut ib = b.iter();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(&x), Some(&y)) => match symbol_rank(x).cmp(&symbol_rank(y)) {
                Ordering::Equal => continue,
                ord => return ord,
            },
        }
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: length-major, then symbol-lexicographic with positive powers
/// before negative.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.symbol_len()
            .cmp(&other.symbol_len())
            .then_with(|| symbol_lex(&self.symbols(), &other.symbols()))
    }
}

impl core::fmt::Display for Word {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exp == 1 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}^{}", l.gen, l.exp)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordParseError(pub String);

impl core::fmt::Display for WordParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "malformed word: {}", self.0)
    }
}

impl core::error::Error for WordParseError {}

/// Parses the `Display` format: whitespace-separated `name` or `name^exp`;
/// `1` (or the empty string) is the identity.
pub fn parse_word(s: &str) -> Result<Word, WordParseError> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(Word::identity());
    }
    let mut letters = Vec::new();
    for tok in s.split_whitespace() {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| WordParseError(tok.to_string()))?;
                (n, e)
            }
            None => (tok, 1),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(WordParseError(tok.to_string()));
        }
        letters.push(Letter::new(name, exp));
    }
    Ok(Word::new(letters))
}

/// Visits every freely reduced word of symbol length exactly `len` over the
/// alphabet, in lexicographic symbol order. Alphabet names must be distinct.
pub fn each_word_of_len<F: FnMut(&Word)>(alphabet: &[String], len: usize, f: &mut F) {
    if len == 0 {
        f(&Word::identity());
        return;
    }
    let mut stack: Vec<(usize, i8)> = Vec::with_capacity(len);
    descend(alphabet, len, &mut stack, f);
}

fn descend<F: FnMut(&Word)>(
    alphabet: &[String],
    len: usize,
    stack: &mut Vec<(usize, i8)>,
    f: &mut F,
) {
    if stack.len() == len {
        let word = Word::new(
            stack
                .iter()
                .map(|&(g, s)| Letter::new(&alphabet[g], s as i64))
                .collect(),
        );
        f(&word);
        return;
    }
    let last = stack.last().copied();
    for g in 0..alphabet.len() {
        for s in [1i8, -1i8] {
            if let Some((lg, ls)) = last {
                if lg == g && ls == -s {
                    continue; // immediate cancellation
                }
            }
            stack.push((g, s));
            descend(alphabet, len, stack, f);
            stack.pop();
        }
    }
}

/// Visits all freely reduced words of symbol length `1..=max_len` in
/// shortlex order.
pub fn each_word_up_to<F: FnMut(&Word)>(alphabet: &[String], max_len: usize, f: &mut F) {
    for len in 1..=max_len {
        each_word_of_len(alphabet, len, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let w = Word::new(alloc::vec![
            Letter::new("g", 1),
            Letter::new("g", -1),
        ]);
        assert!(w.is_identity());
        let w = Word::new(alloc::vec![
            Letter::new("a", 2),
            Letter::new("a", -1),
            Letter::new("b", 1),
        ]);
        assert_eq!(w.to_string(), "a b");
    }

    #[test]
    fn cyclic_reduction() {
        let w = parse_word("a b c b^-1 a^-1").unwrap();
        assert_eq!(w.cyclic_reduce().to_string(), "c");
    }

    #[test]
    fn conjugacy_key_merges_rotations_and_inverse() {
        let ab = parse_word("a b").unwrap();
        let ba = parse_word("b a").unwrap();
        assert_eq!(ab.conjugacy_key(false), ba.conjugacy_key(false));
        let inv = parse_word("b^-1 a^-1").unwrap();
        assert_eq!(ab.conjugacy_key(false), inv.conjugacy_key(false));
        assert_ne!(ab.conjugacy_key(true), inv.conjugacy_key(true));
    }

    #[test]
    fn key_splits_powers_across_rotations() {
        // a^2 b rotated by one symbol is a b a.
        let w = parse_word("b a^2").unwrap();
        assert_eq!(w.conjugacy_key(false).to_string(), "a^2 b");
    }

    #[test]
    fn shortlex_order() {
        let a = parse_word("a").unwrap();
        let a_inv = parse_word("a^-1").unwrap();
        let b = parse_word("b").unwrap();
        let aa = parse_word("a^2").unwrap();
        assert!(a < a_inv);
        assert!(a_inv < b);
        assert!(b < aa);
    }

    #[test]
    fn enumeration_counts() {
        // 2k(2k-1)^(l-1) freely reduced words of length l over k generators.
        let alphabet = alloc::vec!["a".to_string(), "b".to_string()];
        let mut count = 0usize;
        each_word_up_to(&alphabet, 3, &mut |_| count += 1);
        assert_eq!(count, 4 + 12 + 36);
    }

    #[test]
    fn parse_display_roundtrip() {
        let w = parse_word("a^3 b^-2 a").unwrap();
        assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        assert_eq!(parse_word("1").unwrap(), Word::identity());
    }

    #[test]
    fn powers() {
        let w = parse_word("a b").unwrap();
        assert_eq!(w.pow(2).to_string(), "a b a b");
        assert_eq!(w.pow(-1).to_string(), "b^-1 a^-1");
        assert!(w.pow(0).is_identity());
    }
}
