//! Freely reduced words over `x_1, ..., x_r` and substitutions between free
//! groups.
//!
//! Letters are signed generator indices: `+i` is `x_i`, `-i` its inverse. The
//! text form uses `a..z` for `x_1..x_26` and upper case for inverses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = i32;

/// Position of a letter in the fixed order `x1, X1, x2, X2, ...`.
pub fn letter_index(l: Letter) -> usize {
    debug_assert!(l != 0);
    2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0)
}

pub fn letter_at(index: usize) -> Letter {
    let g = (index / 2 + 1) as Letter;
    if index.is_multiple_of(2) {
        g
    } else {
        -g
    }
}

/// All `2r` letters in index order.
pub fn alphabet(rank: usize) -> impl Iterator<Item = Letter> {
    (0..2 * rank).map(letter_at)
}

pub fn letter_char(l: Letter) -> char {
    let i = l.unsigned_abs() as u8 - 1;
    if l > 0 {
        (b'a' + i) as char
    } else {
        (b'A' + i) as char
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Freely reduces the given letters.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            assert!(l != 0, "0 is not a letter");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letter(l: Letter) -> Self {
        Word::new([l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::new(self.0.iter().chain(&other.0).copied())
    }

    /// `g * self * g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Self {
        g.concat(self).concat(&g.inverse())
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_word(&text, 26).map_err(serde::de::Error::custom)
    }
}

/// Parses `text` over the first `rank` letters; the result is freely reduced.
pub fn parse_word(text: &str, rank: usize) -> Result<Word> {
    if rank > 26 {
        return Err(Error::RankTooLarge(rank));
    }
    let mut letters = Vec::with_capacity(text.len());
    for c in text.trim().chars() {
        let (i, sign) = match c {
            'a'..='z' => (c as u8 - b'a', 1),
            'A'..='Z' => (c as u8 - b'A', -1),
            _ => return Err(Error::InvalidCharacter(c)),
        };
        if i as usize >= rank {
            return Err(Error::LetterOutOfRange { letter: c, rank });
        }
        letters.push(sign * (i as Letter + 1));
    }
    Ok(Word::new(letters))
}

/// Parses a comma-separated generator list; blank entries are skipped.
pub fn parse_words(text: &str, rank: usize) -> Result<Vec<Word>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_word(s, rank))
        .collect()
}

/// A homomorphism from the free group on `images.len()` generators, given by
/// the images of its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(images: Vec<Word>) -> Self {
        Substitution { images }
    }

    pub fn identity(rank: usize) -> Self {
        Substitution {
            images: (1..=rank as Letter).map(Word::letter).collect(),
        }
    }

    pub fn domain_rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::new(w.letters().iter().flat_map(|&l| {
            let image = &self.images[l.unsigned_abs() as usize - 1];
            let image = if l > 0 { image.clone() } else { image.inverse() };
            image.0
        }))
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Substitution) -> Substitution {
        Substitution {
            images: inner.images.iter().map(|w| self.apply(w)).collect(),
        }
    }
}

pub fn apply_substitution(gens: &[Word], s: &Substitution) -> Vec<Word> {
    gens.iter().map(|w| s.apply(w)).collect()
}

/// Every reduced word of length at most `max_len`, by length and then in
/// letter-index order.
pub fn all_reduced_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in alphabet(rank) {
                if w.last() != Some(-l) {
                    let mut letters = w.0.clone();
                    letters.push(l);
                    next.push(Word(letters));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
