//! Quadratic words and the closed surfaces they glue.
//!
//! Positions in a word of length `2n` are numbered `1..=2n`. Letter `k`
//! occurs once as `a_k` (sign `+1`) and once as `a_k^-1` (sign `-1`).
//! The permutation `tau` lists positions by symbol: `tau(2k-1)` is the
//! position of `a_k` and `tau(2k)` the position of `a_k^-1`; `sigma` is its
//! inverse.

mod glue;
mod matrices;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use glue::{glue, normalize, GluedSurface};
pub use matrices::{int_rank, matrices, IntersectionData};

use crate::{Error, Result};

/// One occurrence of a letter: `a_index^sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// 1-based letter index.
    pub index: usize,
    /// `+1` for `a_k`, `-1` for `a_k^-1`.
    pub sign: i8,
}

/// A quadratic word `w_1 ... w_2n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticWord {
    letters: Vec<Letter>,
    sigma: Vec<usize>,
    tau: Vec<usize>,
}

impl QuadraticWord {
    /// Builds a word from its letter sequence, validating the quadratic
    /// condition. Letter indices must be exactly `1..=n`.
    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if !letters.len().is_multiple_of(2) {
            return Err(Error::InvalidWord(format!("odd length {}", letters.len())));
        }
        let n = letters.len() / 2;
        let mut tau = vec![0usize; 2 * n];
        for (pos, l) in letters.iter().enumerate() {
            if l.index == 0 || l.index > n {
                return Err(Error::InvalidWord(format!("letter index {} outside 1..={n}", l.index)));
            }
            let slot = if l.sign > 0 { 2 * l.index - 2 } else { 2 * l.index - 1 };
            if tau[slot] != 0 {
                return Err(Error::InvalidWord(format!(
                    "letter a{}{} occurs twice with the same sign",
                    l.index,
                    if l.sign > 0 { "" } else { "^-1" }
                )));
            }
            tau[slot] = pos + 1;
        }
        if let Some(slot) = tau.iter().position(|&p| p == 0) {
            return Err(Error::InvalidWord(format!("letter a{} does not occur exactly twice", slot / 2 + 1)));
        }
        let mut sigma = vec![0usize; 2 * n];
        for (j, &p) in tau.iter().enumerate() {
            sigma[p - 1] = j + 1;
        }
        Ok(Self { letters, sigma, tau })
    }

    /// Parses either the compact form (`abAB`: lowercase `a_k`, uppercase
    /// `a_k^-1`) or the explicit form (`a1 a2 a1^-1 a2^-1`).
    ///
    /// Letter indices are renumbered `1..=n` in increasing order of the
    /// original letter (alphabetical, or numeric in the explicit form).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        let raw =
            if text.bytes().all(|b| b.is_ascii_alphabetic()) { parse_compact(text)? } else { parse_explicit(text)? };
        let mut used: BTreeMap<usize, usize> = BTreeMap::new();
        for &(k, _) in &raw {
            *used.entry(k).or_default() += 1;
        }
        for (&k, &count) in &used {
            if count != 2 {
                return Err(Error::InvalidWord(format!("letter {} appears {count} times", letter_name(k, text))));
            }
        }
        let relabel: BTreeMap<usize, usize> = used.keys().enumerate().map(|(i, &k)| (k, i + 1)).collect();
        let letters = raw.into_iter().map(|(k, sign)| Letter { index: relabel[&k], sign }).collect();
        Self::from_letters(letters)
    }

    /// Number of letters `n`.
    pub fn n(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// `sigma(j)` for `j` in `1..=2n`.
    pub fn sigma(&self, j: usize) -> usize {
        self.sigma[j - 1]
    }

    /// `tau(j)` for `j` in `1..=2n`.
    pub fn tau(&self, j: usize) -> usize {
        self.tau[j - 1]
    }

    pub fn sigma_vec(&self) -> &[usize] {
        &self.sigma
    }

    pub fn tau_vec(&self) -> &[usize] {
        &self.tau
    }

    /// Position of `a_k` (start of the side `alpha_k`).
    pub fn pos_plus(&self, k: usize) -> usize {
        self.tau[2 * k - 2]
    }

    /// Position of `a_k^-1` (the side `alpha_hat_k`).
    pub fn pos_minus(&self, k: usize) -> usize {
        self.tau[2 * k - 1]
    }

    /// The letter at position `j` (1-based).
    pub fn letter_at(&self, j: usize) -> Letter {
        self.letters[j - 1]
    }

    /// Applies a relabeling: letter `k` becomes `relabel[k - 1]`.
    pub fn relabeled(&self, relabel: &[usize]) -> Result<Self> {
        Self::from_letters(self.letters.iter().map(|l| Letter { index: relabel[l.index - 1], sign: l.sign }).collect())
    }

    /// Compact rendering when `n <= 26`, explicit otherwise.
    pub fn to_text(&self) -> String {
        if self.n() <= 26 {
            self.letters
                .iter()
                .map(|l| {
                    let c = (b'a' + (l.index - 1) as u8) as char;
                    if l.sign > 0 {
                        c
                    } else {
                        c.to_ascii_uppercase()
                    }
                })
                .collect()
        } else {
            let parts: Vec<String> = self
                .letters
                .iter()
                .map(|l| if l.sign > 0 { format!("a{}", l.index) } else { format!("a{}^-1", l.index) })
                .collect();
            parts.join(" ")
        }
    }
}

fn letter_name(k: usize, text: &str) -> String {
    if text.bytes().all(|b| b.is_ascii_alphabetic()) {
        format!("'{}'", (b'a' + k as u8) as char)
    } else {
        format!("a{k}")
    }
}

fn parse_compact(text: &str) -> Result<Vec<(usize, i8)>> {
    Ok(text
        .bytes()
        .map(|b| if b.is_ascii_lowercase() { ((b - b'a') as usize, 1) } else { ((b - b'A') as usize, -1) })
        .collect())
}

fn parse_explicit(text: &str) -> Result<Vec<(usize, i8)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for tok in text.split(' ') {
        let pos = offset;
        offset += tok.len() + 1;
        if tok.is_empty() {
            return Err(Error::WordSyntax { pos, msg: "letters must be separated by single spaces".into() });
        }
        let body = tok
            .strip_prefix('a')
            .ok_or_else(|| Error::WordSyntax { pos, msg: format!("expected 'a<k>', found '{tok}'") })?;
        let (digits, sign) = match body.strip_suffix("^-1") {
            Some(d) => (d, -1),
            None => (body, 1),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::WordSyntax { pos, msg: format!("malformed letter '{tok}'") });
        }
        let k: usize = digits
            .parse()
            .map_err(|_| Error::WordSyntax { pos, msg: format!("letter index out of range in '{tok}'") })?;
        if k == 0 {
            return Err(Error::WordSyntax { pos, msg: "letter indices start at 1".into() });
        }
        out.push((k, sign));
    }
    Ok(out)
}
