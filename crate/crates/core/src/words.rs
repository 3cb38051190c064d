//! Letters, finite words, morphisms and lazily expanded fixed points.
//!
//! Letters are stored 0-based. Rendering picks the displayed base: Latin-square
//! mode shows the alphabet as `1..=n`, Cayley mode for `Z/nZ` as `0..n`.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest iterate length `iterate_morphism` will agree to build.
pub const MAX_ITERATE_LENGTH: u128 = 1 << 62;

/// A symbol of an `n`-letter alphabet, stored as its 0-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(u32);

impl Letter {
    pub const fn new(index: u32) -> Self {
        Letter(index)
    }

    pub fn from_index(index: usize) -> Self {
        Letter(u32::try_from(index).expect("letter index exceeds u32"))
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How letters are written out.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rendering {
    /// Show letter `i` as `i + 1`.
    pub one_based: bool,
    /// Joiner between letters. `None` means digits back to back when the
    /// alphabet fits in single digits, otherwise a single space.
    pub separator: Option<String>,
}

impl Rendering {
    pub fn latin() -> Self {
        Rendering {
            one_based: true,
            separator: None,
        }
    }

    pub fn cayley() -> Self {
        Rendering {
            one_based: false,
            separator: None,
        }
    }

    pub fn with_separator(mut self, separator: impl Into<String>) -> Self {
        self.separator = Some(separator.into());
        self
    }

    pub fn letter(&self, letter: Letter) -> usize {
        letter.index() + usize::from(self.one_based)
    }

    pub fn render(&self, letters: &[Letter], alphabet_size: usize) -> String {
        let shown = |l: &Letter| self.letter(*l).to_string();
        match &self.separator {
            None if alphabet_size <= 9 => letters.iter().map(shown).collect(),
            None => letters.iter().map(shown).collect::<Vec<_>>().join(" "),
            Some(sep) => letters.iter().map(shown).collect::<Vec<_>>().join(sep),
        }
    }

    /// Parses what [`Rendering::render`] writes: either one digit per letter,
    /// or integers separated by whitespace and/or commas.
    pub fn parse(&self, text: &str, alphabet_size: usize) -> Result<Word> {
        let text = text.trim();
        let offset = usize::from(self.one_based);
        let tokenized = text.contains(|c: char| c.is_whitespace() || c == ',');
        let mut letters = Vec::new();
        if tokenized {
            for (column, token) in tokens(text) {
                let value: usize = token.parse().map_err(|_| Error::Parse {
                    line: 1,
                    column,
                    message: format!("expected an integer, found {token:?}"),
                })?;
                letters.push(shift(value, offset, 1, column)?);
            }
        } else {
            for (i, c) in text.chars().enumerate() {
                let value = c.to_digit(10).ok_or_else(|| Error::Parse {
                    line: 1,
                    column: i + 1,
                    message: format!("expected a digit, found {c:?}"),
                })? as usize;
                letters.push(shift(value, offset, 1, i + 1)?);
            }
        }
        Word::from_indices(&letters, alphabet_size)
    }
}

fn shift(value: usize, offset: usize, line: usize, column: usize) -> Result<usize> {
    value.checked_sub(offset).ok_or_else(|| Error::Parse {
        line,
        column,
        message: format!("letter {value} is below the first letter {offset}"),
    })
}

/// Splits on whitespace and commas, yielding 1-based character columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        let sep = c.is_whitespace() || c == ',';
        match (start, sep) {
            (None, false) => start = Some(i),
            (Some(s), true) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out.into_iter()
}

/// Parses `n` lines of whitespace-separated integers, returning 0-based rows.
///
/// Blank lines and lines starting with `#` are skipped. Diagnostics carry
/// 1-based line and column numbers of the source text.
pub fn parse_table(text: &str, one_based: bool) -> Result<Vec<Vec<usize>>> {
    let offset = usize::from(one_based);
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for (column, token) in tokens(line) {
            let value: usize = token.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                column,
                message: format!("expected an integer, found {token:?}"),
            })?;
            row.push(shift(value, offset, lineno + 1, column)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// A finite word over an alphabet of `alphabet_size` letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    alphabet_size: usize,
}

impl Word {
    pub fn new(letters: Vec<Letter>, alphabet_size: usize) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|l| l.index() >= alphabet_size) {
            return Err(Error::LetterOutOfRange {
                letter: bad.index(),
                alphabet_size,
            });
        }
        Ok(Word {
            letters,
            alphabet_size,
        })
    }

    pub fn from_indices(indices: &[usize], alphabet_size: usize) -> Result<Self> {
        Word::new(
            indices.iter().map(|&i| Letter::from_index(i)).collect(),
            alphabet_size,
        )
    }

    pub fn empty(alphabet_size: usize) -> Self {
        Word {
            letters: Vec::new(),
            alphabet_size,
        }
    }

    pub(crate) fn from_raw(letters: Vec<Letter>, alphabet_size: usize) -> Self {
        debug_assert!(letters.iter().all(|l| l.index() < alphabet_size));
        Word {
            letters,
            alphabet_size,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn indices(&self) -> Vec<usize> {
        self.letters.iter().map(|l| l.index()).collect()
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word {
            letters,
            alphabet_size: self.alphabet_size.max(other.alphabet_size),
        }
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word {
            letters: self.letters[..len.min(self.len())].to_vec(),
            alphabet_size: self.alphabet_size,
        }
    }

    pub fn render(&self, rendering: &Rendering) -> String {
        rendering.render(&self.letters, self.alphabet_size)
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.letters
    }
}

/// A morphism on words, given by the image of every letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    alphabet_size: usize,
    images: Vec<Vec<Letter>>,
}

impl Morphism {
    pub fn new(alphabet_size: usize, images: Vec<Vec<Letter>>) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if images.len() != alphabet_size {
            return Err(Error::ImageCountMismatch {
                alphabet_size,
                images: images.len(),
            });
        }
        for (letter, image) in images.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::EmptyImage { letter });
            }
            if let Some(bad) = image.iter().find(|l| l.index() >= alphabet_size) {
                return Err(Error::LetterOutOfRange {
                    letter: bad.index(),
                    alphabet_size,
                });
            }
        }
        Ok(Morphism {
            alphabet_size,
            images,
        })
    }

    /// Builds a morphism from 0-based image rows; the alphabet size is the
    /// number of rows.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        Morphism::new(
            rows.len(),
            rows.iter()
                .map(|row| row.iter().map(|&i| Letter::from_index(i)).collect())
                .collect(),
        )
    }

    /// Parses the text format: line `t` holds the image of letter `t` as
    /// whitespace-separated 1-based integers.
    pub fn parse(text: &str) -> Result<Self> {
        Morphism::from_rows(&parse_table(text, true)?)
    }

    pub fn identity(alphabet_size: usize) -> Result<Self> {
        Morphism::new(
            alphabet_size,
            (0..alphabet_size)
                .map(|i| vec![Letter::from_index(i)])
                .collect(),
        )
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    #[inline]
    pub fn image(&self, letter: Letter) -> &[Letter] {
        &self.images[letter.index()]
    }

    pub fn images(&self) -> &[Vec<Letter>] {
        &self.images
    }

    /// Common image length, if every image has the same length.
    pub fn uniform_length(&self) -> Option<usize> {
        let first = self.images[0].len();
        self.images
            .iter()
            .all(|img| img.len() == first)
            .then_some(first)
    }

    /// Whether every image is a single letter and the letters form a bijection.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.alphabet_size];
        self.images
            .iter()
            .all(|img| img.len() == 1 && !std::mem::replace(&mut seen[img[0].index()], true))
    }

    /// The inverse of a letter permutation.
    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_permutation() {
            return None;
        }
        let mut images = vec![Vec::new(); self.alphabet_size];
        for (from, img) in self.images.iter().enumerate() {
            images[img[0].index()] = vec![Letter::from_index(from)];
        }
        Some(Morphism {
            alphabet_size: self.alphabet_size,
            images,
        })
    }

    fn check_letter(&self, letter: Letter) -> Result<()> {
        if letter.index() < self.alphabet_size {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                letter: letter.index(),
                alphabet_size: self.alphabet_size,
            })
        }
    }

    /// `h(w) = h(w[0]) h(w[1]) ...`.
    pub fn apply(&self, word: &[Letter]) -> Result<Word> {
        let mut out = Vec::new();
        for &letter in word {
            self.check_letter(letter)?;
            out.extend_from_slice(self.image(letter));
        }
        Ok(Word::from_raw(out, self.alphabet_size))
    }

    /// Length of `h^k(seed)`, computed from letter counts without building the word.
    pub fn iterate_length(&self, seed: Letter, k: u64) -> Result<u128> {
        self.check_letter(seed)?;
        let mut counts = vec![0u128; self.alphabet_size];
        counts[seed.index()] = 1;
        for _ in 0..k {
            let mut next = vec![0u128; self.alphabet_size];
            let mut total = 0u128;
            for (letter, &count) in counts.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                for l in &self.images[letter] {
                    next[l.index()] += count;
                }
                total += count * self.images[letter].len() as u128;
                if total > MAX_ITERATE_LENGTH {
                    return Err(Error::LengthOverflow);
                }
            }
            if next == counts {
                break;
            }
            counts = next;
        }
        Ok(counts.iter().sum())
    }

    /// `h^k(seed)`; `h^0(seed)` is the one-letter word `seed`.
    pub fn iterate(&self, seed: Letter, k: u64) -> Result<Word> {
        self.iterate_length(seed, k)?;
        let mut word = Word::new(vec![seed], self.alphabet_size)?;
        for _ in 0..k {
            let next = self.apply(&word)?;
            if next == word {
                break;
            }
            word = next;
        }
        Ok(word)
    }

    /// Whether `h(seed)` starts with `seed` and has length at least 2.
    pub fn prolongable_on(&self, seed: Letter) -> Result<()> {
        self.check_letter(seed)?;
        let image = self.image(seed);
        if image[0] != seed {
            return Err(Error::NotProlongable {
                letter: seed.index(),
                reason: "image does not start with the letter",
            });
        }
        if image.len() < 2 {
            return Err(Error::NotProlongable {
                letter: seed.index(),
                reason: "image has length 1",
            });
        }
        Ok(())
    }

    /// The fixed point `h^ω(seed)` as a lazy stream.
    pub fn fixed_point(&self, seed: Letter) -> Result<FixedPointStream> {
        FixedPointStream::new(self.clone(), seed)
    }
}

pub fn apply_morphism(morphism: &Morphism, word: &[Letter]) -> Result<Word> {
    morphism.apply(word)
}

pub fn iterate_morphism(morphism: &Morphism, seed: Letter, k: u64) -> Result<Word> {
    morphism.iterate(seed, k)
}

pub fn fixed_point_stream(morphism: &Morphism, seed: Letter) -> Result<FixedPointStream> {
    morphism.fixed_point(seed)
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    letter: Letter,
    pos: usize,
}

/// Pull-based producer of `h^ω(seed)`.
///
/// With `h(seed) = seed · u`, the fixed point is
/// `seed · u · h(u) · h²(u) · ...`, since `h^{d+1}(seed) = h^d(seed) · h^d(u)`.
/// Each block `h^d(c)` is expanded depth-first, so the only state besides
/// the morphism is a stack of `d` frames.
#[derive(Clone, Debug)]
pub struct FixedPointStream {
    morphism: Morphism,
    seed: Letter,
    started: bool,
    depth: usize,
    // next index into h(seed) at the current depth
    root_pos: usize,
    stack: Vec<Frame>,
    position: u64,
}

impl FixedPointStream {
    pub fn new(morphism: Morphism, seed: Letter) -> Result<Self> {
        morphism.prolongable_on(seed)?;
        Ok(FixedPointStream {
            morphism,
            seed,
            started: false,
            depth: 0,
            root_pos: 1,
            stack: Vec::new(),
            position: 0,
        })
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    /// Number of letters emitted so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    /// Current expansion depth, i.e. the auxiliary stack bound.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The next `len` letters as a word.
    pub fn take_word(&mut self, len: usize) -> Word {
        let mut letters = Vec::with_capacity(len);
        letters.extend(self.by_ref().take(len));
        Word::from_raw(letters, self.morphism.alphabet_size)
    }

    fn next_letter(&mut self) -> Letter {
        if !self.started {
            self.started = true;
            return self.seed;
        }
        loop {
            if self.stack.is_empty() {
                let root = self.morphism.image(self.seed);
                if self.root_pos == root.len() {
                    self.depth += 1;
                    self.root_pos = 1;
                }
                let c = root[self.root_pos];
                self.root_pos += 1;
                if self.depth == 0 {
                    return c;
                }
                self.stack.push(Frame { letter: c, pos: 0 });
            }
            let depth = self.depth;
            let level = self.stack.len();
            let frame = self.stack.last_mut().expect("stack is non-empty");
            let image = &self.morphism.images[frame.letter.index()];
            if frame.pos == image.len() {
                self.stack.pop();
                continue;
            }
            let c = image[frame.pos];
            frame.pos += 1;
            if level == depth {
                return c;
            }
            self.stack.push(Frame { letter: c, pos: 0 });
        }
    }
}

impl Iterator for FixedPointStream {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        let letter = self.next_letter();
        self.position += 1;
        Some(letter)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (usize::MAX, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu() -> Morphism {
        Morphism::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn paper3() -> Morphism {
        Morphism::from_rows(&[vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]]).unwrap()
    }

    fn w(s: &str, n: usize) -> Word {
        Rendering::cayley().parse(s, n).unwrap()
    }

    const TM32: &str = "01101001100101101001011001101001";

    #[test]
    fn apply_thue_morse() {
        let m = mu();
        assert_eq!(m.apply(&w("0", 2)).unwrap(), w("01", 2));
        assert_eq!(m.apply(&w("0110", 2)).unwrap(), w("01101001", 2));
    }

    #[test]
    fn apply_identity_and_range_error() {
        let id = Morphism::identity(3).unwrap();
        let word = w("0120", 3);
        assert_eq!(id.apply(&word).unwrap(), word);
        let err = mu().apply(&[Letter::new(2)]).unwrap_err();
        assert!(matches!(err, Error::LetterOutOfRange { letter: 2, .. }));
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(mu().iterate(Letter::new(0), 2).unwrap(), w("0110", 2));
        let one = paper3().iterate(Letter::new(0), 1).unwrap();
        assert_eq!(one.render(&Rendering::latin()), "132");
        assert_eq!(mu().iterate(Letter::new(1), 0).unwrap(), w("1", 2));
    }

    #[test]
    fn iterate_length_overflow_guard() {
        assert_eq!(mu().iterate_length(Letter::new(0), 10).unwrap(), 1024);
        assert_eq!(mu().iterate_length(Letter::new(0), 62).unwrap(), 1 << 62);
        assert_eq!(
            mu().iterate_length(Letter::new(0), 63).unwrap_err(),
            Error::LengthOverflow
        );
        assert_eq!(
            mu().iterate(Letter::new(0), 80).unwrap_err(),
            Error::LengthOverflow
        );
        // identity stabilises immediately
        let id = Morphism::identity(2).unwrap();
        assert_eq!(id.iterate(Letter::new(1), u64::MAX).unwrap(), w("1", 2));
    }

    #[test]
    fn stream_examples() {
        let mut s = paper3().fixed_point(Letter::new(0)).unwrap();
        assert_eq!(
            s.take_word(18).render(&Rendering::latin()),
            "132321213321213132"
        );
        let mut tm = mu().fixed_point(Letter::new(0)).unwrap();
        assert_eq!(tm.take_word(32).render(&Rendering::cayley()), TM32);
        assert_eq!(tm.position(), 32);
    }

    #[test]
    fn stream_rejects_non_prolongable() {
        let one = Morphism::from_rows(&[vec![0]]).unwrap();
        assert!(matches!(
            one.fixed_point(Letter::new(0)),
            Err(Error::NotProlongable { letter: 0, .. })
        ));
        let swap = Morphism::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(swap.fixed_point(Letter::new(0)).is_err());
        assert!(swap.fixed_point(Letter::new(1)).is_err());
    }

    #[test]
    fn stream_with_unary_images() {
        // 0 -> 01, 1 -> 1: fixed point 0111...
        let m = Morphism::from_rows(&[vec![0, 1], vec![1]]).unwrap();
        let mut s = m.fixed_point(Letter::new(0)).unwrap();
        assert_eq!(s.take_word(6), w("011111", 2));
    }

    #[test]
    fn stream_depth_stays_logarithmic() {
        let mut s = paper3().fixed_point(Letter::new(1)).unwrap();
        let _ = s.take_word(3usize.pow(10));
        assert!(s.depth() <= 10, "depth {}", s.depth());
    }

    #[test]
    fn morphism_validation() {
        assert_eq!(
            Morphism::from_rows(&[vec![0, 1]]).unwrap_err(),
            Error::LetterOutOfRange {
                letter: 1,
                alphabet_size: 1
            }
        );
        assert_eq!(
            Morphism::from_rows(&[vec![0], vec![]]).unwrap_err(),
            Error::EmptyImage { letter: 1 }
        );
        assert_eq!(
            Morphism::new(2, vec![vec![Letter::new(0)]]).unwrap_err(),
            Error::ImageCountMismatch {
                alphabet_size: 2,
                images: 1
            }
        );
    }

    #[test]
    fn parse_morphism_text() {
        let m = Morphism::parse("1 3 2\n2 1 3\n\n3 2 1\n").unwrap();
        assert_eq!(m, paper3());
        let err = Morphism::parse("1 2\n2 x\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 3,
                message: "expected an integer, found \"x\"".into()
            }
        );
        assert!(matches!(
            Morphism::parse("0 1\n1 2\n"),
            Err(Error::Parse {
                line: 1,
                column: 1,
                ..
            })
        ));
    }

    #[test]
    fn rendering_wide_alphabets() {
        let word = Word::from_indices(&[0, 9, 10], 11).unwrap();
        assert_eq!(word.render(&Rendering::latin()), "1 10 11");
        assert_eq!(
            word.render(&Rendering::cayley().with_separator(",")),
            "0,9,10"
        );
        assert_eq!(Rendering::latin().parse("1 10 11", 11).unwrap(), word);
    }

    #[test]
    fn permutation_inverse() {
        let p = Morphism::from_rows(&[vec![2], vec![0], vec![1]]).unwrap();
        let inv = p.inverse().unwrap();
        let word = w("0120", 3);
        assert_eq!(inv.apply(&p.apply(&word).unwrap()).unwrap(), word);
        assert!(mu().inverse().is_none());
    }
}
