//! Latin squares: validation, constructors, enumeration of the squares with a
//! natural first column, and conversion to row morphisms.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::words::{parse_table, Letter, Morphism};

/// First violated constraint of a candidate table. Positions and letters are
/// displayed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatinError {
    #[error("table is empty")]
    Empty,
    #[error("row {} has {found} entries, expected {expected}", .row + 1)]
    ShapeMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("letter {} at row {}, column {} is outside 1..={order}", .letter + 1, .row + 1, .column + 1)]
    LetterOutOfRange {
        row: usize,
        column: usize,
        letter: usize,
        order: usize,
    },
    #[error("row {} repeats letter {}", .row + 1, .letter + 1)]
    RowDuplicate { row: usize, letter: usize },
    #[error("column {} repeats letter {}", .column + 1, .letter + 1)]
    ColumnDuplicate { column: usize, letter: usize },
    #[error("first column is not in natural order at row {}", .row + 1)]
    NotNatural { row: usize },
}

/// A validated `n × n` Latin square over letters `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    order: usize,
    rows: Vec<Vec<Letter>>,
}

/// A Latin square whose first column is `0, 1, ..., n-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NaturalLatinSquare(LatinSquare);

/// Checks an `n × n` table with 0-based entries, reporting the first violated
/// constraint in the order shape, range, rows, columns.
pub fn validate(rows: &[Vec<usize>]) -> Result<LatinSquare, LatinError> {
    let order = rows.len();
    if order == 0 {
        return Err(LatinError::Empty);
    }
    for (row, entries) in rows.iter().enumerate() {
        if entries.len() != order {
            return Err(LatinError::ShapeMismatch {
                row,
                expected: order,
                found: entries.len(),
            });
        }
        if let Some((column, &letter)) = entries.iter().enumerate().find(|(_, &l)| l >= order) {
            return Err(LatinError::LetterOutOfRange {
                row,
                column,
                letter,
                order,
            });
        }
    }
    for (row, entries) in rows.iter().enumerate() {
        let mut seen = vec![false; order];
        for &letter in entries {
            if std::mem::replace(&mut seen[letter], true) {
                return Err(LatinError::RowDuplicate { row, letter });
            }
        }
    }
    for column in 0..order {
        let mut seen = vec![false; order];
        for entries in rows {
            let letter = entries[column];
            if std::mem::replace(&mut seen[letter], true) {
                return Err(LatinError::ColumnDuplicate { column, letter });
            }
        }
    }
    Ok(LatinSquare {
        order,
        rows: rows
            .iter()
            .map(|r| r.iter().map(|&l| Letter::from_index(l)).collect())
            .collect(),
    })
}

impl LatinSquare {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[Vec<Letter>] {
        &self.rows
    }

    pub fn row(&self, t: Letter) -> &[Letter] {
        &self.rows[t.index()]
    }

    #[inline]
    pub fn get(&self, row: usize, column: usize) -> Letter {
        self.rows[row][column]
    }

    pub fn to_indices(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|l| l.index()).collect())
            .collect()
    }

    /// The row morphism `t ↦ row t`.
    pub fn to_morphism(&self) -> Morphism {
        Morphism::new(self.order, self.rows.clone()).expect("latin rows form a valid morphism")
    }

    pub fn has_natural_first_column(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(t, row)| row[0].index() == t)
    }

    pub fn into_natural(self) -> Result<NaturalLatinSquare, LatinError> {
        NaturalLatinSquare::new(self)
    }

    /// Reorders rows by their first letter, which always yields a natural
    /// first column.
    pub fn sort_rows(mut self) -> NaturalLatinSquare {
        self.rows.sort_by_key(|r| r[0]);
        NaturalLatinSquare(self)
    }

    /// Whether `x ∘ y = L[x][y]` is associative, checked over all `n³` triples.
    ///
    /// This only tests the table as given; it says nothing about whether
    /// some relabelling of the square is a group table.
    pub fn is_associative_quasigroup(&self) -> bool {
        let op = |x: usize, y: usize| self.rows[x][y].index();
        let n = self.order;
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| op(op(x, y), z) == op(x, op(y, z)))))
    }

    /// Parses the plain-text format (n lines of n 1-based integers) or the
    /// JSON form `{"order": n, "rows": [[...], ...]}`.
    pub fn parse(text: &str) -> Result<LatinSquare> {
        let rows = if text.trim_start().starts_with('{') {
            let file: SquareFile = serde_json::from_str(text).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            if file.rows.len() != file.order {
                return Err(LatinError::ShapeMismatch {
                    row: file.rows.len().min(file.order),
                    expected: file.order,
                    found: file.rows.len(),
                }
                .into());
            }
            let mut rows = Vec::with_capacity(file.order);
            for (r, row) in file.rows.iter().enumerate() {
                let mut out = Vec::with_capacity(row.len());
                for (c, &v) in row.iter().enumerate() {
                    out.push(v.checked_sub(1).ok_or_else(|| Error::Parse {
                        line: 1,
                        column: 0,
                        message: format!("rows[{r}][{c}] is 0; letters are 1-based"),
                    })?);
                }
                rows.push(out);
            }
            rows
        } else {
            parse_table(text, true)?
        };
        Ok(validate(&rows)?)
    }

    pub fn to_json(&self) -> String {
        let file = SquareFile {
            order: self.order,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|l| l.index() + 1).collect())
                .collect(),
        };
        serde_json::to_string(&file).expect("square serializes")
    }
}

/// Writes the plain-text format.
impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|l| (l.index() + 1).to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SquareFile {
    order: usize,
    rows: Vec<Vec<usize>>,
}

impl NaturalLatinSquare {
    pub fn new(square: LatinSquare) -> Result<Self, LatinError> {
        match square
            .rows
            .iter()
            .enumerate()
            .find(|(t, row)| row[0].index() != *t)
        {
            Some((row, _)) => Err(LatinError::NotNatural { row }),
            None => Ok(NaturalLatinSquare(square)),
        }
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        Ok(validate(rows)?.into_natural()?)
    }

    pub fn square(&self) -> &LatinSquare {
        &self.0
    }

    pub fn into_square(self) -> LatinSquare {
        self.0
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn to_morphism(&self) -> Morphism {
        self.0.to_morphism()
    }
}

impl std::ops::Deref for NaturalLatinSquare {
    type Target = LatinSquare;

    fn deref(&self) -> &LatinSquare {
        &self.0
    }
}

impl fmt::Display for NaturalLatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Addition table of `Z/nZ`: `rows[i][j] = (i + j) mod n`.
pub fn cayley_zn(n: usize) -> Result<NaturalLatinSquare> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    NaturalLatinSquare::from_rows(&rows)
}

/// The order-3 square `132 / 213 / 321`, i.e. `Z/3Z` with its last two
/// columns swapped.
pub fn swapped_z3() -> NaturalLatinSquare {
    NaturalLatinSquare::from_rows(&[vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]])
        .expect("valid square")
}

/// A standard order-6 Latin square that is not the Cayley table of any group
/// (rows listed 1-based in the plain-text format).
pub const NON_GROUP_6: &str = "\
1 2 3 4 5 6
2 1 6 3 4 5
3 4 5 2 6 1
4 5 1 6 2 3
5 6 4 1 3 2
6 3 2 5 1 4
";

pub fn non_group_6() -> NaturalLatinSquare {
    LatinSquare::parse(NON_GROUP_6)
        .and_then(|s| Ok(s.into_natural()?))
        .expect("embedded square is valid")
}

/// Largest order accepted by [`enumerate_natural`]; the masks are `u32`.
pub const MAX_ENUMERATION_ORDER: usize = 31;

/// Every Latin square of order `n` with natural first column, in
/// lexicographic row-major order.
pub fn enumerate_natural(n: usize) -> Result<NaturalSquares> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::InvalidOrder(n));
    }
    let mut grid = vec![0u8; n * n];
    let mut row_used = vec![0u32; n];
    let mut col_used = vec![0u32; n];
    for r in 0..n {
        grid[r * n] = r as u8;
        row_used[r] |= 1 << r;
        col_used[0] |= 1 << r;
    }
    let cells: Vec<usize> = (0..n * n).filter(|cell| cell % n != 0).collect();
    Ok(NaturalSquares {
        n,
        current: vec![None; cells.len()],
        cells,
        grid,
        row_used,
        col_used,
        k: 0,
        done: false,
    })
}

/// Backtracking state for [`enumerate_natural`]: cells are filled in
/// row-major order, smallest free letter first, with row and column bitmasks.
#[derive(Clone, Debug)]
pub struct NaturalSquares {
    n: usize,
    cells: Vec<usize>,
    current: Vec<Option<u8>>,
    grid: Vec<u8>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    k: usize,
    done: bool,
}

impl NaturalSquares {
    fn build(&self) -> NaturalLatinSquare {
        let rows = self
            .grid
            .chunks(self.n)
            .map(|r| r.iter().map(|&l| Letter::new(u32::from(l))).collect())
            .collect();
        NaturalLatinSquare(LatinSquare {
            order: self.n,
            rows,
        })
    }
}

impl Iterator for NaturalSquares {
    type Item = NaturalLatinSquare;

    fn next(&mut self) -> Option<NaturalLatinSquare> {
        if self.done {
            return None;
        }
        if self.cells.is_empty() {
            self.done = true;
            return Some(self.build());
        }
        if self.k == self.cells.len() {
            self.k -= 1;
        }
        let n = self.n;
        let full = (1u32 << n) - 1;
        loop {
            let cell = self.cells[self.k];
            let (r, c) = (cell / n, cell % n);
            let start = match self.current[self.k] {
                Some(v) => {
                    self.row_used[r] &= !(1 << v);
                    self.col_used[c] &= !(1 << v);
                    u32::from(v) + 1
                }
                None => 0,
            };
            let above = full & !((1u32 << start) - 1);
            let free = above & !(self.row_used[r] | self.col_used[c]);
            if free != 0 {
                let v = free.trailing_zeros() as u8;
                self.row_used[r] |= 1 << v;
                self.col_used[c] |= 1 << v;
                self.grid[cell] = v;
                self.current[self.k] = Some(v);
                self.k += 1;
                if self.k == self.cells.len() {
                    return Some(self.build());
                }
            } else {
                self.current[self.k] = None;
                if self.k == 0 {
                    self.done = true;
                    return None;
                }
                self.k -= 1;
            }
        }
    }
}
