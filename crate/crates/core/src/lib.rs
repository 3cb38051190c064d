//! Fixed points of Latin-square morphisms and overlap detection.
//!
//! A Latin square `L` with natural first column defines the morphism
//! `t ↦ L_t` (row `t`). Its fixed points generalize the Thue-Morse word and
//! contain no overlap `c x c x c`. This crate generates those fixed points
//! lazily, detects overlaps and squares in finite words, and certifies
//! overlap-freeness up to a chosen prefix length for every square of small
//! order.
//!
//! - [`words`]: letters, words, morphisms, fixed-point streams
//! - [`latin`]: Latin squares, enumeration, associativity probe
//! - [`repetition`]: overlap and square detectors with witnesses
//! - [`structure`]: tiling, tile residues, decimation, column permutations
//! - [`verify`]: certification harness, sweeps, negative controls
//! - [`cli`]: the `latinmorph` command line

pub mod cli;
pub mod error;
pub mod latin;
pub mod repetition;
pub mod structure;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use latin::{
    cayley_zn, enumerate_natural, validate, LatinError, LatinSquare, NaturalLatinSquare,
};
pub use repetition::{
    find_overlap_fast, find_overlap_naive, find_square, verify_witness, OverlapWitness,
    SquareWitness, Witness,
};
pub use words::{FixedPointStream, Letter, Morphism, Rendering, Word};
