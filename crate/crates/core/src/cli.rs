//! Command-line front end.
//!
//! Exit codes: 0 when generation succeeds or the checked property holds,
//! 1 when a witness is found where none should be (or a control finds none),
//! 2 on invalid input.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::latin::{cayley_zn, enumerate_natural, LatinSquare, NaturalLatinSquare};
use crate::repetition::find_overlap_fast;
use crate::structure::{
    check_decimation_identity, column_permutation, decimate, render_tiles, tiles,
};
use crate::verify::{
    negative_controls, sweep_order, verify_morphism, FEATURED_LENGTH, SWEEP_LENGTH,
};
use crate::words::{Letter, Morphism, Rendering};

pub const EXIT_OK: i32 = 0;
pub const EXIT_WITNESS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "latinmorph",
    version,
    about = "Fixed points of Latin-square morphisms and overlap detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a prefix of a fixed point
    Gen {
        #[command(flatten)]
        source: Source,
        /// Seed letter: 1-based for squares and morphisms, 0-based with --cayley
        #[arg(long)]
        seed: Option<usize>,
        #[arg(long)]
        length: usize,
        /// Separator between letters (default: none for alphabets up to 9 letters)
        #[arg(long)]
        sep: Option<String>,
    },
    /// Search a word for an overlap c x c x c
    Check {
        #[command(flatten)]
        input: WordInput,
        #[arg(long)]
        json: bool,
    },
    /// List Latin squares with natural first column
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, conflicts_with = "emit")]
        count_only: bool,
        /// Write one file per square into this directory
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Print the first tiles of a fixed point in bar notation
    Tiles {
        #[command(flatten)]
        source: SquareSource,
        #[arg(long)]
        seed: Option<usize>,
        #[arg(long)]
        count: usize,
    },
    /// Print every n-th letter of a fixed point, starting at --offset
    Decimate {
        #[command(flatten)]
        source: SquareSource,
        #[arg(long)]
        seed: Option<usize>,
        /// 1-based offset within each tile
        #[arg(long)]
        offset: usize,
        /// Number of decimated letters
        #[arg(long)]
        length: usize,
        /// Also compare against the column permutation applied to the prefix
        #[arg(long)]
        check_pi: bool,
    },
    /// Certify overlap-freeness up to a prefix length
    Verify {
        #[command(flatten)]
        target: VerifyTarget,
        /// Prefix length (default 10000 for --order, 100000 otherwise)
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Print every report, not only failures
        #[arg(long)]
        reports: bool,
        #[arg(long)]
        json: bool,
        /// Permit exhaustive sweeps of order 6 and above
        #[arg(long)]
        allow_large: bool,
        /// Run squares without natural first column on their prolongable seeds
        #[arg(long)]
        explore: bool,
    },
    /// Run the harness on defective row tables that must contain overlaps
    Controls {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Latin square file (plain text or JSON, 1-based letters)
    #[arg(long)]
    square: Option<PathBuf>,
    /// Addition table of Z/nZ, letters shown 0-based
    #[arg(long)]
    cayley: Option<usize>,
    /// General morphism file: line t holds the image of letter t
    #[arg(long)]
    morphism: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SquareSource {
    #[arg(long)]
    square: Option<PathBuf>,
    #[arg(long)]
    cayley: Option<usize>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct WordInput {
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    stdin: bool,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct VerifyTarget {
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    square: Option<PathBuf>,
    #[arg(long)]
    cayley: Option<usize>,
}

#[derive(Debug)]
enum Failure {
    Domain(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CliResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(cli.command, stdin, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = match failure {
                Failure::Domain(e) => writeln!(err, "error: {e}"),
                Failure::Usage(msg) => writeln!(err, "error: {msg}"),
                Failure::Io(e) => writeln!(err, "error: {e}"),
            };
            EXIT_INVALID
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// A morphism together with how its letters are written.
struct Resolved {
    morphism: Morphism,
    square: Option<LatinSquare>,
    rendering: Rendering,
}

impl Resolved {
    fn seed(&self, seed: Option<usize>) -> Result<Letter, Failure> {
        let index = match (seed, self.rendering.one_based) {
            (None, _) => 0,
            (Some(0), true) => return Err(Failure::Usage("seeds are 1-based".into())),
            (Some(s), true) => s - 1,
            (Some(s), false) => s,
        };
        let n = self.morphism.alphabet_size();
        if index >= n {
            return Err(Failure::Usage(format!(
                "seed {} is outside the alphabet of {n} letters",
                seed.unwrap_or_default()
            )));
        }
        Ok(Letter::from_index(index))
    }

    fn natural(&self) -> Result<NaturalLatinSquare, Failure> {
        let square = self
            .square
            .clone()
            .ok_or_else(|| Failure::Usage("a Latin square is required".into()))?;
        Ok(square.into_natural().map_err(Error::from)?)
    }
}

fn from_square(square: LatinSquare) -> Resolved {
    Resolved {
        morphism: square.to_morphism(),
        square: Some(square),
        rendering: Rendering::latin(),
    }
}

fn from_cayley(n: usize) -> Result<Resolved, Failure> {
    let square = cayley_zn(n)?.into_square();
    Ok(Resolved {
        morphism: square.to_morphism(),
        square: Some(square),
        rendering: Rendering::cayley(),
    })
}

fn resolve(source: &Source) -> Result<Resolved, Failure> {
    if let Some(path) = &source.square {
        Ok(from_square(LatinSquare::parse(&read_file(path)?)?))
    } else if let Some(n) = source.cayley {
        from_cayley(n)
    } else if let Some(path) = &source.morphism {
        Ok(Resolved {
            morphism: Morphism::parse(&read_file(path)?)?,
            square: None,
            rendering: Rendering::latin(),
        })
    } else {
        Err(Failure::Usage("no source given".into()))
    }
}

fn resolve_square(source: &SquareSource) -> Result<Resolved, Failure> {
    resolve(&Source {
        square: source.square.clone(),
        cayley: source.cayley,
        morphism: None,
    })
}

/// Splits free-form input into symbols: whitespace- or comma-separated tokens
/// when any separator is present, otherwise single characters. Symbols are
/// numbered by first appearance.
fn symbolize(text: &str) -> (Vec<u32>, Vec<String>, bool) {
    let text = text.trim();
    let tokenized = text.contains(|c: char| c.is_whitespace() || c == ',');
    let raw: Vec<String> = if tokenized {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect()
    } else {
        text.chars().map(String::from).collect()
    };
    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut names = Vec::new();
    let symbols = raw
        .into_iter()
        .map(|s| {
            *ids.entry(s.clone()).or_insert_with(|| {
                names.push(s);
                names.len() as u32 - 1
            })
        })
        .collect();
    (symbols, names, tokenized)
}

fn execute(
    command: Command,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    match command {
        Command::Gen {
            source,
            seed,
            length,
            sep,
        } => {
            let mut resolved = resolve(&source)?;
            let seed = resolved.seed(seed)?;
            if let Some(sep) = sep {
                resolved.rendering = resolved.rendering.with_separator(sep);
            }
            let word = resolved.morphism.fixed_point(seed)?.take_word(length);
            writeln!(out, "{}", word.render(&resolved.rendering))?;
            Ok(EXIT_OK)
        }
        Command::Check { input, json } => {
            let text = if let Some(word) = input.word {
                word
            } else if let Some(path) = input.file {
                read_file(&path)?
            } else {
                let mut buf = String::new();
                stdin.read_to_string(&mut buf)?;
                buf
            };
            let (symbols, names, tokenized) = symbolize(&text);
            match find_overlap_fast(&symbols) {
                None => {
                    if json {
                        writeln!(
                            out,
                            "{}",
                            serde_json::json!({"overlap": null, "length": symbols.len()})
                        )?;
                    } else {
                        writeln!(out, "overlap-free length={}", symbols.len())?;
                    }
                    Ok(EXIT_OK)
                }
                Some(w) => {
                    let (c, x) = w.parts(&symbols);
                    let x: Vec<&str> = x.iter().map(|&s| names[s as usize].as_str()).collect();
                    let x = x.join(if tokenized { " " } else { "" });
                    let c = &names[*c as usize];
                    if json {
                        writeln!(
                            out,
                            "{}",
                            serde_json::json!({
                                "overlap": {"start": w.start + 1, "period": w.period, "c": c, "x": x}
                            })
                        )?;
                    } else {
                        writeln!(
                            out,
                            "overlap start={} period={} c={c} x={x}",
                            w.start + 1,
                            w.period
                        )?;
                    }
                    Ok(EXIT_WITNESS)
                }
            }
        }
        Command::Enumerate {
            order,
            count_only,
            emit,
        } => {
            let squares = enumerate_natural(order)?;
            if count_only {
                writeln!(out, "{}", squares.count())?;
            } else if let Some(dir) = emit {
                fs::create_dir_all(&dir)?;
                let mut count = 0;
                for (i, square) in squares.enumerate() {
                    fs::write(
                        dir.join(format!("square-{order}-{:05}.txt", i + 1)),
                        square.to_string(),
                    )?;
                    count += 1;
                }
                writeln!(out, "{count}")?;
            } else {
                for (i, square) in squares.enumerate() {
                    if i > 0 {
                        writeln!(out)?;
                    }
                    write!(out, "{square}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Tiles {
            source,
            seed,
            count,
        } => {
            let resolved = resolve_square(&source)?;
            let seed = resolved.seed(seed)?;
            let t = tiles(resolved.morphism.fixed_point(seed)?, count)?;
            writeln!(out, "{}", render_tiles(&t, &resolved.rendering))?;
            Ok(EXIT_OK)
        }
        Command::Decimate {
            source,
            seed,
            offset,
            length,
            check_pi,
        } => {
            let resolved = resolve_square(&source)?;
            let seed = resolved.seed(seed)?;
            let n = resolved.morphism.alphabet_size();
            let prefix = resolved.morphism.fixed_point(seed)?.take_word(length * n);
            let decimated = decimate(&prefix, offset, n)?;
            writeln!(out, "{}", decimated.render(&resolved.rendering))?;
            if check_pi {
                let square = resolved.natural()?;
                let permuted =
                    column_permutation(&square, offset)?.apply(&prefix.prefix(length))?;
                writeln!(out, "{}", permuted.render(&resolved.rendering))?;
                if check_decimation_identity(&square, seed, offset, length)? {
                    writeln!(out, "identity holds")?;
                } else {
                    writeln!(out, "identity FAILS")?;
                    return Ok(EXIT_WITNESS);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            target,
            length,
            jobs,
            reports,
            json,
            allow_large,
            explore,
        } => {
            if let Some(order) = target.order {
                if order >= 6 && !allow_large {
                    return Err(Failure::Usage(format!(
                        "order {order} sweeps are opt-in; pass --allow-large"
                    )));
                }
                let sweep = sweep_order(order, length.unwrap_or(SWEEP_LENGTH), jobs)?;
                let shown = if reports {
                    &sweep.reports
                } else {
                    &sweep.summary.failures
                };
                for report in shown {
                    if json {
                        writeln!(out, "{}", report.to_json())?;
                    } else {
                        writeln!(out, "{report}")?;
                    }
                }
                writeln!(out, "{}", sweep.summary)?;
                return Ok(if sweep.summary.failures.is_empty() {
                    EXIT_OK
                } else {
                    EXIT_WITNESS
                });
            }
            let resolved = resolve_square(&SquareSource {
                square: target.square,
                cayley: target.cayley,
            })?;
            let square = resolved.square.clone().expect("square source");
            let length = length.unwrap_or(FEATURED_LENGTH);
            let n = square.order();
            if n < 2 {
                return Err(Error::DegenerateOrder.into());
            }
            let natural = square.has_natural_first_column();
            if !natural && !explore {
                return Err(resolved.natural().unwrap_err());
            }
            let mut failed = false;
            for t in 0..n {
                let seed = Letter::from_index(t);
                if resolved.morphism.prolongable_on(seed).is_err() {
                    writeln!(err, "seed {} skipped: not prolongable", t + 1)?;
                    continue;
                }
                let report = verify_morphism(&resolved.morphism, "square", seed, length)?;
                failed |= !report.is_overlap_free();
                if json {
                    writeln!(out, "{}", report.to_json())?;
                } else {
                    writeln!(out, "{report}")?;
                }
            }
            Ok(if failed && natural {
                EXIT_WITNESS
            } else {
                EXIT_OK
            })
        }
        Command::Controls { json } => {
            let controls = negative_controls()?;
            let mut ok = true;
            for control in &controls {
                ok &= control.passed();
                if json {
                    writeln!(
                        out,
                        "{{\"control\":\"{}\",\"passed\":{},\"report\":{}}}",
                        control.name,
                        control.passed(),
                        control.report.to_json()
                    )?;
                } else {
                    writeln!(out, "{control}")?;
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_WITNESS })
        }
    }
}
