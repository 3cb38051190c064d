//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use latinmorph::latin::{cayley_zn, enumerate_natural, non_group_6, swapped_z3, NON_GROUP_6};
use latinmorph::repetition::{find_overlap_fast, find_overlap_naive, find_square, OverlapWitness};
use latinmorph::structure::{
    check_decimation_identity, first_letter_subsequence, overlap_residues, residues_consistent,
    tiles,
};
use latinmorph::verify::{negative_controls, sweep_order, verify_square};
use latinmorph::{Letter, Morphism, NaturalLatinSquare};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TM32: &str = "01101001100101101001011001101001";
const PAPER18: &str = "132321213321213132";
const PAPER_TILES: &str = "|132|321|213|321|213|132|";

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn cli(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_latinmorph"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// Featured fixed points: (label, morphism, seed).
fn featured() -> Vec<(String, Morphism, Letter)> {
    let mut out = vec![(
        "Z/2Z seed 0".to_string(),
        cayley_zn(2).unwrap().to_morphism(),
        Letter::new(0),
    )];
    for (name, square) in [
        ("swapped Z/3Z", swapped_z3()),
        ("non-group order 6", non_group_6()),
    ] {
        for t in 0..square.order() {
            out.push((
                format!("{name} seed {}", t + 1),
                square.to_morphism(),
                Letter::from_index(t),
            ));
        }
    }
    out
}

fn thue_morse_reproduction() -> Outcome {
    let started = Instant::now();
    let (code, out) = cli(&["gen", "--cayley", "2", "--seed", "0", "--length", "32"]);
    let elapsed = started.elapsed();
    check(
        code == Some(0) && out == format!("{TM32}\n") && elapsed < Duration::from_secs(1),
        format!("output {:?}, exit {code:?}, {}", out.trim(), secs(elapsed)),
    )
}

fn latin_fixed_point_reproduction() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("paper3.txt");
    std::fs::write(&path, "1 3 2\n2 1 3\n3 2 1\n").unwrap();
    let path = path.to_str().unwrap();
    let (c1, word) = cli(&["gen", "--square", path, "--seed", "1", "--length", "18"]);
    let (c2, bars) = cli(&["tiles", "--square", path, "--seed", "1", "--count", "6"]);
    check(
        c1 == Some(0)
            && c2 == Some(0)
            && word.trim_end() == PAPER18
            && bars.trim_end() == PAPER_TILES,
        format!("prefix {} tiles {}", word.trim(), bars.trim()),
    )
}

fn enumeration_counts() -> Outcome {
    // oracle first: unconstrained count of all Latin squares, then the
    // natural-first-column subset, which must be total / n!
    let mut expected = Vec::new();
    for (n, factorial) in [(3usize, 6u64), (4, 24), (5, 120)] {
        let (total, natural) = common::count_latin_squares(n);
        if total != natural * factorial {
            return fail(format!(
                "oracle inconsistent at n={n}: {total} vs {natural}·{factorial}"
            ));
        }
        expected.push((n, natural));
    }
    if expected != [(3, 2), (4, 24), (5, 1344)] {
        return fail(format!("oracle counts {expected:?}"));
    }
    let started = Instant::now();
    let counts: Vec<(usize, u64)> = expected
        .iter()
        .map(|&(n, _)| (n, enumerate_natural(n).unwrap().count() as u64))
        .collect();
    let elapsed = started.elapsed();
    check(
        counts == expected && elapsed < Duration::from_secs(10),
        format!("counts {counts:?} in {}", secs(elapsed)),
    )
}

fn theorem_sweep() -> Outcome {
    let jobs = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let started = Instant::now();
    let mut squares = 0;
    let mut pairs = 0;
    let mut failures = Vec::new();
    for n in 2..=5 {
        let sweep = sweep_order(n, 10_000, Some(jobs)).unwrap();
        if sweep.summary.pairs != sweep.summary.squares * n {
            return fail(format!("order {n}: pair count {}", sweep.summary.pairs));
        }
        squares += sweep.summary.squares;
        pairs += sweep.summary.pairs;
        failures.extend(sweep.summary.failures);
    }
    let elapsed = started.elapsed();
    check(
        squares == 1 + 2 + 24 + 1344 && failures.is_empty() && elapsed <= Duration::from_secs(120),
        format!(
            "{squares} squares, {pairs} pairs, {} witnesses, {} with {jobs} jobs",
            failures.len(),
            secs(elapsed)
        ),
    )
}

fn featured_square() -> Outcome {
    let square =
        NaturalLatinSquare::new(latinmorph::LatinSquare::parse(NON_GROUP_6).unwrap()).unwrap();
    let started = Instant::now();
    let reports = verify_square(&square, "non-group-6", 100_000).unwrap();
    let elapsed = started.elapsed();
    let witnesses = reports.iter().filter(|r| !r.is_overlap_free()).count();
    check(
        reports.len() == 6 && witnesses == 0 && elapsed <= Duration::from_secs(30),
        format!(
            "6 seeds × 10^5 letters, {witnesses} witnesses, {}",
            secs(elapsed)
        ),
    )
}

/// Witnesses seen anywhere in the suite, for the residue check.
fn oracle_equivalence(witnesses: &mut Vec<OverlapWitness>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut disagreements = 0;
    let mut unsound = 0;
    let mut with_overlap = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=6u8);
        let len = rng.gen_range(0..=512);
        let w: Vec<u8> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        let naive = find_overlap_naive(&w);
        let fast = find_overlap_fast(&w);
        disagreements += usize::from(naive.is_some() != fast.is_some());
        for found in naive.into_iter().chain(fast) {
            unsound += usize::from(!found.verify(&w));
            witnesses.push(found);
        }
        with_overlap += usize::from(naive.is_some());
    }

    let mut sequences = featured();
    for control in negative_controls().unwrap() {
        sequences.push((control.name.to_string(), control.morphism, Letter::new(0)));
    }
    let mut prefixes = 0;
    for (label, morphism, seed) in &sequences {
        let word = morphism.fixed_point(*seed).unwrap().take_word(2000);
        let first_end = common::first_overlap_end(&word);
        if find_overlap_naive(&word).is_some() != first_end.is_some() {
            return fail(format!(
                "{label}: naive detector disagrees with per-prefix oracle"
            ));
        }
        for len in 1..=word.len() {
            let prefix = &word[..len];
            let fast = find_overlap_fast(prefix);
            let expected = first_end.is_some_and(|e| e <= len);
            if fast.is_some() != expected {
                disagreements += 1;
            }
            if let Some(found) = fast {
                unsound += usize::from(!found.verify(prefix));
                witnesses.push(found);
            }
            prefixes += 1;
        }
    }
    check(
        disagreements == 0 && unsound == 0,
        format!(
            "1000 random words ({with_overlap} with overlaps), {prefixes} prefixes of {} sequences: \
             {disagreements} disagreements, {unsound} unsound witnesses",
            sequences.len()
        ),
    )
}

fn decimation_identity() -> Outcome {
    let mut squares: Vec<NaturalLatinSquare> = (2..=4)
        .flat_map(|n| enumerate_natural(n).unwrap())
        .collect();
    let order5: Vec<_> = enumerate_natural(5).unwrap().collect();
    squares.extend((0..20).map(|i| order5[i * order5.len() / 20].clone()));
    let mut checks = 0;
    let mut failures = 0;
    for square in &squares {
        let n = square.order();
        for t in 0..n {
            for column in 1..=n {
                checks += 1;
                if !check_decimation_identity(square, Letter::from_index(t), column, 2000).unwrap()
                {
                    failures += 1;
                }
            }
        }
    }
    check(
        failures == 0,
        format!(
            "{} squares, {checks} (seed, column) checks at K=2000, {failures} mismatches",
            squares.len()
        ),
    )
}

fn tiling_self_similarity() -> Outcome {
    let mut checked = 0;
    for (label, morphism, seed) in featured() {
        let stream = morphism.fixed_point(seed).unwrap();
        let tiled = tiles(stream.clone(), 2000).unwrap();
        let firsts = first_letter_subsequence(&tiled, morphism.alphabet_size());
        if firsts != stream.clone().take_word(2000) {
            return fail(format!("{label}: first letters differ from the prefix"));
        }
        checked += 1;
    }
    pass(format!("{checked} featured sequences, 2000 tiles each"))
}

fn negative_controls_and_residues(witnesses: &[OverlapWitness]) -> Outcome {
    let controls = negative_controls().unwrap();
    let failed: Vec<_> = controls
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name)
        .collect();
    if !failed.is_empty() {
        return fail(format!("controls without certified witness: {failed:?}"));
    }
    // 1 -> 12, 2 -> 22: the first overlap is the first 222, found by the oracle
    let repeated = &controls[1];
    let prefix = repeated
        .morphism
        .fixed_point(Letter::new(0))
        .unwrap()
        .take_word(200);
    if find_overlap_naive(&prefix) != Some(OverlapWitness::new(1, 1))
        || repeated.report.witness.map(|w| w.period) != Some(1)
    {
        return fail("repeated-column control witness differs from the oracle");
    }

    let mut residue_checks = 0;
    let all = witnesses
        .iter()
        .copied()
        .chain(controls.iter().filter_map(|c| c.report.witness));
    for w in all {
        for n in 1..=8u64 {
            residue_checks += 1;
            if !residues_consistent(overlap_residues(&w, n), n) {
                return fail(format!("residue identity fails for {w:?} at n={n}"));
            }
        }
    }

    let mut binary = 0;
    for len in 4..=10u32 {
        for bits in 0u32..(1 << len) {
            let w: Vec<u32> = (0..len).map(|i| (bits >> i) & 1).collect();
            match find_square(&w) {
                Some(s) if s.verify(&w) => binary += 1,
                _ => return fail(format!("binary word {w:?} has no square")),
            }
        }
    }
    pass(format!(
        "{} controls certified, {residue_checks} residue checks, {binary} binary words with squares",
        controls.len()
    ))
}

type Criterion = Box<dyn FnOnce(&mut Vec<OverlapWitness>) -> Outcome>;

fn main() {
    let mut witnesses = Vec::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "1 Thue-Morse reproduction",
            Box::new(|_| thue_morse_reproduction()),
        ),
        (
            "2 Latin fixed-point reproduction",
            Box::new(|_| latin_fixed_point_reproduction()),
        ),
        ("3 Enumeration counts", Box::new(|_| enumeration_counts())),
        ("4 Theorem sweep, orders 2-5", Box::new(|_| theorem_sweep())),
        ("5 Featured order-6 square", Box::new(|_| featured_square())),
        ("6 Oracle equivalence", Box::new(oracle_equivalence)),
        ("7 Decimation identity", Box::new(|_| decimation_identity())),
        (
            "8 Tiling self-similarity",
            Box::new(|_| tiling_self_similarity()),
        ),
        (
            "9 Negative controls and residues",
            Box::new(|w| negative_controls_and_residues(w)),
        ),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let outcome = criterion(&mut witnesses);
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        println!("[{status}] {name}: {}", outcome.detail);
        failed += usize::from(!outcome.ok);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
