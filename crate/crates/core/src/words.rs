//! Finite binary words: order, rotations, Lyndon tests and Farey words.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use thiserror::Error;

/// Largest Farey level [`farey_level`] will build unless told otherwise.
pub const DEFAULT_MAX_FAREY_LEVEL: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("last digit of {word} is {found}, expected {expected}")]
    LastDigitMismatch {
        word: String,
        expected: u8,
        found: u8,
    },
    #[error("{0} is a power of a shorter word")]
    PeriodicWord(String),
    #[error("Farey level {level} exceeds the configured maximum {max}")]
    LevelTooLarge { level: u32, max: u32 },
    #[error("{0} is not a Farey word")]
    NotFarey(String),
    #[error("{0} is a degenerate Farey word")]
    DegenerateFarey(String),
    #[error("invalid word {0:?}: expected a nonempty string of 0s and 1s")]
    Parse(String),
}

/// A nonempty finite word over {0,1}, stored as packed bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    bits: BitVec<u64, Msb0>,
}

impl Word {
    /// Builds a word from a digit slice.
    ///
    /// Panics if `digits` is empty or contains anything other than 0 and 1;
    /// use [`Word::from_str`] for untrusted input.
    pub fn from_digits(digits: &[u8]) -> Word {
        assert!(!digits.is_empty(), "a word has at least one digit");
        let mut bits = BitVec::with_capacity(digits.len());
        for &d in digits {
            assert!(d <= 1, "digit {d} is not binary");
            bits.push(d == 1);
        }
        Word { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Always false; kept so clippy's `len_without_is_empty` is satisfied.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Digit at 0-based position `i`.
    pub fn digit(&self, i: usize) -> u8 {
        self.bits[i] as u8
    }

    pub fn first(&self) -> u8 {
        self.digit(0)
    }

    pub fn last(&self) -> u8 {
        self.digit(self.len() - 1)
    }

    pub fn digits(&self) -> Vec<u8> {
        self.bits.iter().map(|b| *b as u8).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().map(|b| *b as u8)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = self.bits.clone();
        bits.extend_from_bitslice(&other.bits);
        Word { bits }
    }

    /// The subword on the 0-based half-open range `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word {
            bits: self.bits[start..end].to_bitvec(),
        }
    }

    pub fn reversed(&self) -> Word {
        let mut bits = self.bits.clone();
        bits.reverse();
        Word { bits }
    }

    /// The cyclic rotation `w[j..] w[..j]`.
    pub fn rotate(&self, j: usize) -> Word {
        let mut bits = self.bits.clone();
        bits.rotate_left(j % self.len());
        Word { bits }
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.len();
        (0..n / 2).all(|i| self.bits[i] == self.bits[n - 1 - i])
    }

    /// True if no proper divisor `d` of the length has `w = (w[..d])^(n/d)`.
    pub fn is_primitive(&self) -> bool {
        let p = smallest_period(&self.digits());
        p == self.len() || !self.len().is_multiple_of(p)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits.iter() {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        if s.is_empty() || !s.bytes().all(|c| c == b'0' || c == b'1') {
            return Err(WordError::Parse(s.to_string()));
        }
        Ok(Word::from_digits(
            &s.bytes().map(|c| c - b'0').collect::<Vec<_>>(),
        ))
    }
}

/// Parses a word, panicking on bad input. Handy for literals in tests.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid binary word")
}

/// Smallest period of a digit string, via the KMP failure function.
pub(crate) fn smallest_period(d: &[u8]) -> usize {
    let n = d.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && d[i] != d[k] {
            k = fail[k - 1];
        }
        if d[i] == d[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

/// Compares `u0^∞` with `v0^∞`.
pub fn lex_compare(u: &Word, v: &Word) -> Ordering {
    let common = u.len().min(v.len());
    for i in 0..common {
        match u.digit(i).cmp(&v.digit(i)) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    if u.bits[common..].any() {
        Ordering::Greater
    } else if v.bits[common..].any() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// `w⁺`: turns a final 0 into 1.
pub fn plus(w: &Word) -> Result<Word, WordError> {
    flip_last(w, 0)
}

/// `w⁻`: turns a final 1 into 0.
pub fn minus(w: &Word) -> Result<Word, WordError> {
    flip_last(w, 1)
}

fn flip_last(w: &Word, expected: u8) -> Result<Word, WordError> {
    if w.last() != expected {
        return Err(WordError::LastDigitMismatch {
            word: w.to_string(),
            expected,
            found: w.last(),
        });
    }
    let mut bits = w.bits.clone();
    let n = bits.len();
    bits.set(n - 1, expected == 0);
    Ok(Word { bits })
}

/// Digitwise complement.
pub fn reflect(w: &Word) -> Word {
    Word {
        bits: !w.bits.clone(),
    }
}

/// Start index of the lexicographically least rotation (two-pointer
/// minimum-expression algorithm, linear time).
fn least_rotation_start(d: &[u8]) -> usize {
    let n = d.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = d[(i + k) % n];
        let b = d[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// True iff every proper suffix `s_{i+1}…s_m` is strictly greater than the
/// prefix `s_1…s_{m-i}` of the same length. Single letters qualify.
pub fn is_lyndon(w: &Word) -> bool {
    w.is_primitive() && least_rotation_start(&w.digits()) == 0
}

/// Smallest cyclic rotation of an aperiodic word, with its shift `j`
/// (the rotation is `w[j..] w[..j]`).
pub fn lyndon_rotation(w: &Word) -> Result<(Word, usize), WordError> {
    if !w.is_primitive() {
        return Err(WordError::PeriodicWord(w.to_string()));
    }
    let j = least_rotation_start(&w.digits());
    Ok((w.rotate(j), j))
}

/// Largest cyclic rotation of an aperiodic word.
pub fn max_rotation(w: &Word) -> Result<Word, WordError> {
    max_rotation_with_shift(w).map(|(r, _)| r)
}

pub(crate) fn max_rotation_with_shift(w: &Word) -> Result<(Word, usize), WordError> {
    let (r, j) = lyndon_rotation(&reflect(w))?;
    Ok((reflect(&r), j))
}

/// One level of the Farey recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyLevel {
    pub level: u32,
    pub entries: Vec<Word>,
}

/// Builds `F_n` with the default level cap.
pub fn farey_level(n: u32) -> Result<FareyLevel, WordError> {
    farey_level_capped(n, DEFAULT_MAX_FAREY_LEVEL)
}

/// Builds `F_n`, refusing levels above `max`. Level `n` holds `2^n + 1` words.
pub fn farey_level_capped(n: u32, max: u32) -> Result<FareyLevel, WordError> {
    if n > max {
        return Err(WordError::LevelTooLarge { level: n, max });
    }
    let mut entries = vec![w("0"), w("1")];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * entries.len() - 1);
        for pair in entries.windows(2) {
            next.push(pair[0].clone());
            next.push(pair[0].concat(&pair[1]));
        }
        next.push(entries.last().unwrap().clone());
        entries = next;
    }
    Ok(FareyLevel { level: n, entries })
}

/// Where a non-degenerate Farey word came from in the recursion.
#[derive(Debug, Clone)]
struct FareyOrigin {
    left: Word,
    right: Word,
}

/// Walks the tree of consecutive pairs `(u, v)` that the recursion visits,
/// producing every `uv` of length at most `max_len`. Word lengths strictly
/// grow down the tree, so pruning at `max_len` loses nothing shorter.
fn farey_origins(max_len: usize) -> HashMap<Word, FareyOrigin> {
    let mut out = HashMap::new();
    let mut stack = vec![(w("0"), w("1"))];
    while let Some((u, v)) = stack.pop() {
        if u.len() + v.len() > max_len {
            continue;
        }
        let uv = u.concat(&v);
        out.insert(
            uv.clone(),
            FareyOrigin {
                left: u.clone(),
                right: v.clone(),
            },
        );
        stack.push((u, uv.clone()));
        stack.push((uv, v));
    }
    out
}

/// All non-degenerate Farey words of length at most `max_len`, sorted by
/// length then lexicographically.
pub fn farey_words_up_to(max_len: usize) -> Vec<Word> {
    let mut words: Vec<Word> = farey_origins(max_len).into_keys().collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.digits().cmp(&b.digits())));
    words
}

/// True iff `w` appears in some level `F_n`. The degenerate words 0 and 1 count.
pub fn is_farey(w: &Word) -> bool {
    if w.len() == 1 {
        return true;
    }
    farey_origins(w.len()).contains_key(w)
}

/// The unique split `w = uv` into two Farey words.
pub fn standard_factorization(w: &Word) -> Result<(Word, Word), WordError> {
    if w.len() == 1 {
        return Err(WordError::DegenerateFarey(w.to_string()));
    }
    match farey_origins(w.len()).remove(w) {
        Some(o) => Ok((o.left, o.right)),
        None => Err(WordError::NotFarey(w.to_string())),
    }
}

/// Checks that the interior `w_2…w_{m-1}` of a Farey word reads the same
/// backwards.
pub fn check_palindrome_property(w: &Word) -> Result<bool, WordError> {
    if w.len() == 1 {
        return Err(WordError::DegenerateFarey(w.to_string()));
    }
    if !is_farey(w) {
        return Err(WordError::NotFarey(w.to_string()));
    }
    if w.len() == 2 {
        return Ok(true);
    }
    Ok(w.slice(1, w.len() - 1).is_palindrome())
}
