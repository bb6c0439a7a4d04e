//! Two-region grid patterns, training masks and coordinate encoding.
//!
//! Grid cells are addressed 0-based as `(row, col)` in storage; the
//! coordinates fed to the codecs are 1-based (`row + 1`, `col + 1`).

mod experiment;

pub use experiment::{
    misclassification_spread, run_experiment, run_experiment_with, stability_metric, Engine,
    ExperimentConfig, ExperimentResult, RadiusRun, SampleSize, Sampling, Stability,
};

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::encoding::{BitVector, SpreadUnaryCodec, UnaryCodec};
use crate::error::{Error, Result};

/// The bundled 11×16 spiral pattern.
pub const SPIRAL_11X16: &str = include_str!("../../fixtures/spiral_11x16.txt");

/// 58-point training mask drawn from [`SPIRAL_11X16`] with seed 42.
pub const SPIRAL_MASK_SEED42_N58: &str = include_str!("../../fixtures/mask_seed42_n58.txt");

/// A rendered cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Positive,
    Negative,
    Unlearnt,
}

impl Cell {
    pub fn symbol(self) -> char {
        match self {
            Cell::Positive => '#',
            Cell::Negative => 'o',
            Cell::Unlearnt => '.',
        }
    }

    fn from_label(label: bool) -> Self {
        if label {
            Cell::Positive
        } else {
            Cell::Negative
        }
    }
}

/// One text line per row, each newline-terminated.
pub fn render_map(map: &[Vec<Cell>]) -> Result<String> {
    let width = map.first().map_or(0, Vec::len);
    let mut out = String::with_capacity(map.len() * (width + 1));
    for (i, row) in map.iter().enumerate() {
        if row.len() != width {
            return Err(Error::shape(
                format!("row {} with {width} cells", i + 1),
                format!("{} cells", row.len()),
            ));
        }
        out.extend(row.iter().map(|c| c.symbol()));
        out.push('\n');
    }
    Ok(out)
}

/// Splits `text` into rows of cells, checking that it is rectangular and
/// every character is accepted by `cell`.
fn parse_grid(text: &str, cell: impl Fn(char) -> Option<Cell>) -> Result<Vec<Vec<Cell>>> {
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut row = Vec::with_capacity(line.len());
        for (j, c) in line.chars().enumerate() {
            row.push(cell(c).ok_or_else(|| Error::Parse {
                line: i + 1,
                column: j + 1,
                message: format!("unexpected character {c:?}"),
            })?);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    line: i + 1,
                    column: row.len().min(first.len()) + 1,
                    message: format!("expected {} cells, found {}", first.len(), row.len()),
                });
            }
        } else if row.is_empty() {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "empty first row".into(),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty grid".into(),
        });
    }
    Ok(rows)
}

/// R×C binary label grid; 1 is the positive (spiral) region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPattern {
    rows: usize,
    cols: usize,
    labels: Vec<bool>,
}

impl GridPattern {
    pub fn new(rows: usize, cols: usize, labels: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Argument("grid dimensions must be positive".into()));
        }
        if labels.len() != rows * cols {
            return Err(Error::shape(
                format!("{} labels for {rows}×{cols}", rows * cols),
                labels.len(),
            ));
        }
        Ok(GridPattern { rows, cols, labels })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let labels = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        Self::new(rows, cols, labels)
    }

    /// Parses `#`/`o` (or `1`/`0`) rows.
    pub fn parse(text: &str) -> Result<Self> {
        let grid = parse_grid(text, |c| match c {
            '#' | '1' => Some(Cell::Positive),
            'o' | '0' => Some(Cell::Negative),
            _ => None,
        })?;
        let (rows, cols) = (grid.len(), grid[0].len());
        let labels = grid
            .into_iter()
            .flatten()
            .map(|c| c == Cell::Positive)
            .collect();
        Self::new(rows, cols, labels)
    }

    /// The bundled 11×16 spiral.
    pub fn spiral() -> Self {
        Self::parse(SPIRAL_11X16).expect("bundled spiral parses")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn label(&self, row: usize, col: usize) -> bool {
        assert!(
            row < self.rows && col < self.cols,
            "cell ({row}, {col}) outside grid"
        );
        self.labels[row * self.cols + col]
    }

    pub fn complement(&self) -> Self {
        GridPattern {
            labels: self.labels.iter().map(|l| !l).collect(),
            ..self.clone()
        }
    }

    pub fn cells(&self) -> Vec<Vec<Cell>> {
        self.labels
            .chunks(self.cols)
            .map(|row| row.iter().map(|&l| Cell::from_label(l)).collect())
            .collect()
    }

    pub fn render(&self) -> String {
        render_map(&self.cells()).expect("grid is rectangular")
    }
}

/// Learnt points of a pattern, keyed by 0-based `(row, col)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingMask {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), bool>,
}

impl TrainingMask {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Argument("grid dimensions must be positive".into()));
        }
        Ok(TrainingMask {
            rows,
            cols,
            entries: BTreeMap::new(),
        })
    }

    pub fn insert(&mut self, row: usize, col: usize, label: bool) -> Result<()> {
        let (value, bound) = if row >= self.rows {
            (row, self.rows)
        } else {
            (col, self.cols)
        };
        if value >= bound {
            return Err(Error::Range {
                value: value as i64,
                min: 0,
                max: bound as i64 - 1,
            });
        }
        self.entries.insert((row, col), label);
        Ok(())
    }

    /// Parses `#` (learnt positive), `o` (learnt negative), `.` (unlearnt).
    pub fn parse(text: &str) -> Result<Self> {
        let grid = parse_grid(text, |c| match c {
            '#' => Some(Cell::Positive),
            'o' => Some(Cell::Negative),
            '.' => Some(Cell::Unlearnt),
            _ => None,
        })?;
        let mut mask = Self::new(grid.len(), grid[0].len())?;
        for (r, row) in grid.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                match cell {
                    Cell::Positive => mask.insert(r, c, true)?,
                    Cell::Negative => mask.insert(r, c, false)?,
                    Cell::Unlearnt => {}
                }
            }
        }
        Ok(mask)
    }

    /// Every cell of `pattern`.
    pub fn full(pattern: &GridPattern) -> Self {
        let entries = (0..pattern.rows())
            .flat_map(|r| (0..pattern.cols()).map(move |c| (r, c)))
            .map(|(r, c)| ((r, c), pattern.label(r, c)))
            .collect();
        TrainingMask {
            rows: pattern.rows(),
            cols: pattern.cols(),
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(row, col, label)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
        self.entries.iter().map(|(&(r, c), &l)| (r, c, l))
    }

    pub fn get(&self, row: usize, col: usize) -> Option<bool> {
        self.entries.get(&(row, col)).copied()
    }

    pub fn cells(&self) -> Vec<Vec<Cell>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c).map_or(Cell::Unlearnt, Cell::from_label))
                    .collect()
            })
            .collect()
    }

    pub fn render(&self) -> String {
        render_map(&self.cells()).expect("mask is rectangular")
    }

    /// Checks the mask against `pattern`: same dimensions and matching labels.
    pub fn check_against(&self, pattern: &GridPattern) -> Result<()> {
        if (self.rows, self.cols) != (pattern.rows(), pattern.cols()) {
            return Err(Error::shape(
                format!("{}×{} mask", pattern.rows(), pattern.cols()),
                format!("{}×{}", self.rows, self.cols),
            ));
        }
        for (r, c, label) in self.entries() {
            if pattern.label(r, c) != label {
                return Err(Error::Argument(format!(
                    "mask label at row {}, column {} disagrees with the pattern",
                    r + 1,
                    c + 1
                )));
            }
        }
        Ok(())
    }
}

/// Per-coordinate input code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Unary {
        width: usize,
    },
    /// Spread-unary with canonical value range `1..=width - k + 1`.
    Spread {
        k: usize,
        width: usize,
    },
}

impl Scheme {
    /// Spread scheme at the canonical width for coordinates up to `max_value`.
    pub fn spread_for(k: usize, max_value: usize) -> Self {
        Scheme::Spread {
            k,
            width: max_value + k - 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Unary { .. } => "unary",
            Scheme::Spread { .. } => "spread",
        }
    }

    pub fn width(&self) -> usize {
        match *self {
            Scheme::Unary { width } | Scheme::Spread { width, .. } => width,
        }
    }

    pub fn spread(&self) -> Option<usize> {
        match *self {
            Scheme::Spread { k, .. } => Some(k),
            Scheme::Unary { .. } => None,
        }
    }

    /// Largest encodable coordinate.
    pub fn max_value(&self) -> usize {
        match *self {
            Scheme::Unary { width } => width,
            Scheme::Spread { k, width } => (width + 1).saturating_sub(k),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.encode(0).map(|_| ())
    }

    /// Encodes one coordinate; 0 is accepted and maps to all zeros.
    pub fn encode(&self, n: usize) -> Result<BitVector> {
        match *self {
            Scheme::Unary { width } => UnaryCodec::new(width)?.encode(n),
            Scheme::Spread { k, width } => {
                if width < k || k == 0 {
                    return Err(Error::Argument(format!(
                        "spread scheme needs 1 <= k <= width, got k={k}, width={width}"
                    )));
                }
                SpreadUnaryCodec::new(k, width + 1 - k)?.encode(n)
            }
        }
    }

    /// Hamming distance between the codes of two positive coordinates.
    pub fn coordinate_distance(&self, a: usize, b: usize) -> usize {
        let delta = a.abs_diff(b);
        match *self {
            Scheme::Unary { .. } => delta,
            Scheme::Spread { k, .. } => 2 * delta.min(k),
        }
    }
}

/// Concatenation of the row code and the column code, row leftmost.
/// Coordinates are 1-based. The bias input is not part of this vector.
pub fn encode_point(row: usize, col: usize, scheme: &Scheme) -> Result<BitVector> {
    for v in [row, col] {
        if v == 0 || v > scheme.max_value() {
            return Err(Error::Range {
                value: v as i64,
                min: 1,
                max: scheme.max_value() as i64,
            });
        }
    }
    let row_code = scheme.encode(row)?;
    let col_code = scheme.encode(col)?;
    Ok(BitVector::concat(&[&row_code, &col_code]))
}

/// Uniform sample without replacement of `count` cells, labels copied from
/// the pattern. The draw is a pure function of `(pattern size, count, seed)`.
pub fn sample_training_points(
    pattern: &GridPattern,
    count: usize,
    seed: u64,
) -> Result<TrainingMask> {
    let cells = pattern.cell_count();
    if count == 0 || count > cells {
        return Err(Error::Argument(format!(
            "sample size {count} outside 1..={cells}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = TrainingMask::new(pattern.rows(), pattern.cols())?;
    for index in rand::seq::index::sample(&mut rng, cells, count) {
        let (r, c) = (index / pattern.cols(), index % pattern.cols());
        mask.insert(r, c, pattern.label(r, c))?;
    }
    Ok(mask)
}

/// `(classified, misclassified)` of `predicted` against `pattern`.
pub fn score(predicted: &GridPattern, pattern: &GridPattern) -> Result<(usize, usize)> {
    if (predicted.rows, predicted.cols) != (pattern.rows, pattern.cols) {
        return Err(Error::shape(
            format!("{}×{}", pattern.rows, pattern.cols),
            format!("{}×{}", predicted.rows, predicted.cols),
        ));
    }
    let wrong = predicted
        .labels
        .iter()
        .zip(&pattern.labels)
        .filter(|(p, t)| p != t)
        .count();
    Ok((pattern.cell_count() - wrong, wrong))
}
