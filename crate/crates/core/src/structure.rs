//! Structural identities of Latin-square fixed points: tiling by rows, tile
//! residues, decimation and the column permutations.
//!
//! Positions in this module are 1-based, as `t_1 t_2 t_3 ...`.

use crate::error::{Error, Result};
use crate::latin::NaturalLatinSquare;
use crate::repetition::OverlapWitness;
use crate::words::{FixedPointStream, Letter, Morphism, Rendering, Word};

/// Location of a 1-based position `j` as the `r`-th letter of tile `m`,
/// so that `j = (m - 1)·n + r` with `1 ≤ r ≤ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PositionResidue {
    pub m: u64,
    pub r: u64,
}

impl PositionResidue {
    pub fn position(&self, n: u64) -> u64 {
        (self.m - 1) * n + self.r
    }
}

pub fn position_residue(j: u64, n: u64) -> PositionResidue {
    assert!(j >= 1 && n >= 1, "positions and tile lengths are 1-based");
    PositionResidue {
        m: (j - 1) / n + 1,
        r: (j - 1) % n + 1,
    }
}

/// Consecutive length-`n` blocks of a fixed point of a uniform morphism.
#[derive(Clone, Debug)]
pub struct Tiling {
    stream: FixedPointStream,
    tile_length: usize,
}

impl Tiling {
    pub fn new(stream: FixedPointStream) -> Result<Self> {
        let tile_length = stream
            .morphism()
            .uniform_length()
            .ok_or(Error::UnsupportedTiling)?;
        if stream.position() != 0 {
            return Err(Error::MisalignedStream {
                position: stream.position(),
            });
        }
        Ok(Tiling {
            stream,
            tile_length,
        })
    }

    pub fn tile_length(&self) -> usize {
        self.tile_length
    }
}

impl Iterator for Tiling {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        Some(self.stream.take_word(self.tile_length))
    }
}

/// The first `count` tiles `T_1, ..., T_count`.
pub fn tiles(stream: FixedPointStream, count: usize) -> Result<Vec<Word>> {
    Ok(Tiling::new(stream)?.take(count).collect())
}

/// Bar notation `|132|321|213|`.
pub fn render_tiles(tiles: &[Word], rendering: &Rendering) -> String {
    let mut out = String::from("|");
    for tile in tiles {
        out.push_str(&tile.render(rendering));
        out.push('|');
    }
    out
}

/// Reads bar notation back into the concatenated word.
pub fn parse_tiles(text: &str, alphabet_size: usize, rendering: &Rendering) -> Result<Word> {
    let mut letters = Vec::new();
    for part in text.trim().split('|').filter(|p| !p.trim().is_empty()) {
        letters.extend(rendering.parse(part, alphabet_size)?.into_letters());
    }
    Word::new(letters, alphabet_size)
}

pub fn first_letter_subsequence(tiles: &[Word], alphabet_size: usize) -> Word {
    let letters = tiles.iter().filter_map(|t| t.first().copied()).collect();
    Word::new(letters, alphabet_size).expect("tile letters are in range")
}

/// Letters at 1-based positions `offset, offset + step, offset + 2·step, ...`.
pub fn decimate(word: &Word, offset: usize, step: usize) -> Result<Word> {
    if offset == 0 || offset > step {
        return Err(Error::OffsetOutOfRange { offset, step });
    }
    let letters = word
        .iter()
        .skip(offset - 1)
        .step_by(step)
        .copied()
        .collect();
    Ok(Word::new(letters, word.alphabet_size()).expect("letters come from a valid word"))
}

/// The letter map sending `t` to the `column`-th letter of row `t`
/// (`column` is 1-based). Column 1 is the identity.
pub fn column_permutation(square: &NaturalLatinSquare, column: usize) -> Result<Morphism> {
    let n = square.order();
    if column == 0 || column > n {
        return Err(Error::ColumnOutOfRange { column, order: n });
    }
    Morphism::new(
        n,
        square
            .rows()
            .iter()
            .map(|row| vec![row[column - 1]])
            .collect(),
    )
}

/// Checks `D_(i,n)` of the `(len·n)`-prefix against the column permutation
/// applied to the `len`-prefix.
pub fn check_decimation_identity(
    square: &NaturalLatinSquare,
    seed: Letter,
    column: usize,
    len: usize,
) -> Result<bool> {
    let n = square.order();
    let pi = column_permutation(square, column)?;
    let morphism = square.to_morphism();
    let long = morphism.fixed_point(seed)?.take_word(len * n);
    let short = long.prefix(len);
    Ok(decimate(&long, column, n)? == pi.apply(&short)?)
}

/// Tile offsets `(r1, r2, r3)` of the three copies of `c` in an overlap.
pub fn overlap_residues(witness: &OverlapWitness, n: u64) -> (u64, u64, u64) {
    let [j1, j2, j3] = witness.anchors().map(|j| j as u64 + 1);
    (
        position_residue(j1, n).r,
        position_residue(j2, n).r,
        position_residue(j3, n).r,
    )
}

/// `r3 ≡ 2·r2 − r1 (mod n)`.
pub fn residues_consistent((r1, r2, r3): (u64, u64, u64), n: u64) -> bool {
    (r3 + r1) % n == (2 * r2) % n
}
