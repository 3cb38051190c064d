//! Finite-depth certification of overlap-freeness for Latin-square fixed
//! points, order-wide sweeps, and negative controls.
//!
//! A prefix without overlaps only shows the fixed point is overlap-free up to
//! the checked length; reports say so explicitly.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::latin::{enumerate_natural, NaturalLatinSquare};
use crate::repetition::{find_overlap_fast, find_overlap_naive, OverlapWitness};
use crate::structure::{overlap_residues, residues_consistent};
use crate::words::{Letter, Morphism, Rendering};

/// Default prefix length for order sweeps.
pub const SWEEP_LENGTH: usize = 10_000;
/// Default prefix length for single featured squares.
pub const FEATURED_LENGTH: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Detector {
    Fast,
    Naive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// No overlap in the checked prefix.
    OverlapFree,
    WitnessFound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub square_id: String,
    pub seed: Letter,
    pub length: usize,
    pub verdict: Verdict,
    pub witness: Option<OverlapWitness>,
    /// Tile offsets of the witness anchors, when the morphism is uniform.
    pub residues: Option<(u64, u64, u64)>,
    pub elapsed: Duration,
    pub detector: Detector,
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    square_id: &'a str,
    seed: usize,
    length: usize,
    verdict: Verdict,
    witness: Option<WitnessRecord>,
    residues: Option<(u64, u64, u64)>,
    elapsed_ms: f64,
    detector: Detector,
}

#[derive(Serialize)]
struct WitnessRecord {
    start: usize,
    period: usize,
}

impl VerificationReport {
    pub fn is_overlap_free(&self) -> bool {
        self.verdict == Verdict::OverlapFree
    }

    /// One JSON object; seed and witness start are 1-based.
    pub fn to_json(&self) -> String {
        let record = ReportRecord {
            square_id: &self.square_id,
            seed: self.seed.index() + 1,
            length: self.length,
            verdict: self.verdict,
            witness: self.witness.map(|w| WitnessRecord {
                start: w.start + 1,
                period: w.period,
            }),
            residues: self.residues,
            elapsed_ms: self.elapsed.as_secs_f64() * 1e3,
            detector: self.detector,
        };
        serde_json::to_string(&record).expect("report serializes")
    }
}

/// Line format with 1-based seed and positions. The elapsed time comes last
/// so the rest of the line is reproducible.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let detector = match self.detector {
            Detector::Fast => "fast",
            Detector::Naive => "naive",
        };
        write!(
            f,
            "square={} seed={} length={} detector={} ",
            self.square_id,
            self.seed.index() + 1,
            self.length,
            detector
        )?;
        match (self.verdict, self.witness) {
            (Verdict::WitnessFound, Some(w)) => {
                write!(
                    f,
                    "verdict=witness start={} period={}",
                    w.start + 1,
                    w.period
                )?;
                if let Some((r1, r2, r3)) = self.residues {
                    write!(f, " residues={r1},{r2},{r3}")?;
                }
            }
            _ => write!(f, "verdict=overlap-free-up-to-{}", self.length)?,
        }
        write!(f, " elapsed={:.3}ms", self.elapsed.as_secs_f64() * 1e3)
    }
}

/// Generates the `length`-prefix of `morphism^ω(seed)` and searches it for an
/// overlap with the fast detector. A witness is re-checked letter by letter
/// and confirmed by the brute-force detector on the witnessed factor.
pub fn verify_morphism(
    morphism: &Morphism,
    square_id: &str,
    seed: Letter,
    length: usize,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let prefix = morphism.fixed_point(seed)?.take_word(length);
    let witness = find_overlap_fast(&prefix);
    if let Some(w) = witness {
        let factor = &prefix[w.start..w.start + w.len()];
        if !w.verify(&prefix) || find_overlap_naive(factor).is_none() {
            return Err(Error::UncertifiedWitness {
                start: w.start,
                period: w.period,
            });
        }
    }
    let residues = match (witness, morphism.uniform_length()) {
        (Some(w), Some(n)) => Some(overlap_residues(&w, n as u64)),
        _ => None,
    };
    Ok(VerificationReport {
        square_id: square_id.to_string(),
        seed,
        length,
        verdict: if witness.is_some() {
            Verdict::WitnessFound
        } else {
            Verdict::OverlapFree
        },
        witness,
        residues,
        elapsed: started.elapsed(),
        detector: Detector::Fast,
    })
}

/// Certifies one seed of a natural Latin square. Any witness returned here
/// contradicts overlap-freeness and is a failure for the caller to surface.
pub fn verify_fixed_point(
    square: &NaturalLatinSquare,
    square_id: &str,
    seed: Letter,
    length: usize,
) -> Result<VerificationReport> {
    let n = square.order();
    if n < 2 {
        return Err(Error::DegenerateOrder);
    }
    if length < n {
        return Err(Error::PrefixTooShort { length, order: n });
    }
    verify_morphism(&square.to_morphism(), square_id, seed, length)
}

/// All seeds of one square, in seed order.
pub fn verify_square(
    square: &NaturalLatinSquare,
    square_id: &str,
    length: usize,
) -> Result<Vec<VerificationReport>> {
    (0..square.order())
        .map(|t| verify_fixed_point(square, square_id, Letter::from_index(t), length))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub order: usize,
    pub squares: usize,
    pub pairs: usize,
    pub length: usize,
    pub failures: Vec<VerificationReport>,
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "order={} squares={} pairs={} length={} failures={}",
            self.order,
            self.squares,
            self.pairs,
            self.length,
            self.failures.len()
        )
    }
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub summary: SweepSummary,
    /// Sorted by square id, then seed.
    pub reports: Vec<VerificationReport>,
}

pub fn square_id(order: usize, index: usize) -> String {
    format!("n{order}-{:04}", index + 1)
}

/// Verifies every natural Latin square of order `n` at every seed.
///
/// `jobs` bounds the worker threads; `None` uses the global rayon pool.
pub fn sweep_order(n: usize, length: usize, jobs: Option<usize>) -> Result<Sweep> {
    if n < 2 {
        return Err(Error::DegenerateOrder);
    }
    let squares: Vec<NaturalLatinSquare> = enumerate_natural(n)?.collect();
    let run = || -> Result<Vec<VerificationReport>> {
        let per_square: Vec<Vec<VerificationReport>> = squares
            .par_iter()
            .enumerate()
            .map(|(i, square)| verify_square(square, &square_id(n, i), length))
            .collect::<Result<_>>()?;
        Ok(per_square.into_iter().flatten().collect())
    };
    let reports = match jobs {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .expect("thread pool")
            .install(run)?,
        None => run()?,
    };
    let failures = reports
        .iter()
        .filter(|r| !r.is_overlap_free())
        .cloned()
        .collect();
    Ok(Sweep {
        summary: SweepSummary {
            order: n,
            squares: squares.len(),
            pairs: reports.len(),
            length,
            failures,
        },
        reports,
    })
}

/// A row table that breaks the Latin property, with the outcome of running
/// the harness on it.
#[derive(Clone, Debug)]
pub struct ControlReport {
    pub name: &'static str,
    pub morphism: Morphism,
    pub report: VerificationReport,
}

impl ControlReport {
    /// The harness found a witness, and its anchors satisfy the residue identity.
    pub fn passed(&self) -> bool {
        let n = self.morphism.uniform_length().unwrap_or(1) as u64;
        self.report.verdict == Verdict::WitnessFound
            && self
                .report
                .residues
                .is_some_and(|r| residues_consistent(r, n))
    }
}

impl fmt::Display for ControlReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendering = Rendering::latin();
        let table: Vec<String> = self
            .morphism
            .images()
            .iter()
            .enumerate()
            .map(|(t, img)| {
                format!(
                    "{}->{}",
                    t + 1,
                    rendering.render(img, self.morphism.alphabet_size())
                )
            })
            .collect();
        write!(
            f,
            "control={} table={{{}}} {} {}",
            self.name,
            table.join(","),
            if self.passed() { "PASS" } else { "FAIL" },
            self.report
        )
    }
}

/// Prefix length used for the negative controls.
pub const CONTROL_LENGTH: usize = 200;

/// 0-based row tables for the controls.
pub fn control_tables() -> Vec<(&'static str, Vec<Vec<usize>>)> {
    vec![
        ("constant-rows", vec![vec![0, 0], vec![1, 1]]),
        ("repeated-column", vec![vec![0, 1], vec![1, 1]]),
        (
            "alternating-rows",
            vec![vec![0, 1, 0], vec![1, 0, 1], vec![2, 0, 2]],
        ),
    ]
}

pub fn negative_controls() -> Result<Vec<ControlReport>> {
    control_tables()
        .into_iter()
        .map(|(name, rows)| {
            let morphism = Morphism::from_rows(&rows)?;
            let report = verify_morphism(&morphism, name, Letter::new(0), CONTROL_LENGTH)?;
            Ok(ControlReport {
                name,
                morphism,
                report,
            })
        })
        .collect()
}
