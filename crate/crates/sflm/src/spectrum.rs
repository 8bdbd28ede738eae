//! Coverage-spectrum data model: coverage bits, the ternary block-hit
//! function, block feature vectors, and the runs × blocks spectrum matrix.
//!
//! A spectrum records, for every sample run of a program, which basic blocks
//! the run entered (1) or missed (0), together with a per-run decision bit
//! that is 1 exactly when the observed output deviated from the expected
//! output. All types are immutable after construction and every operation is
//! a pure function.

use std::fmt;
use std::ops::Index;

use thiserror::Error;

/// Errors from constructing or combining spectrum values.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("binary vectors must contain at least one bit")]
    EmptyVector,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("bit values must be 0 or 1, got {0}")]
    InvalidBit(u8),
    #[error("block index {index} out of range for {count} blocks")]
    BlockIndexOutOfRange { index: usize, count: usize },
    #[error("spectrum matrix needs at least one run")]
    NoRuns,
    #[error("row {row} has {found} bits, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("decision vector has {decisions} bits for {runs} runs")]
    DecisionLengthMismatch { runs: usize, decisions: usize },
    #[error("{labels} block labels for {blocks} blocks")]
    LabelCountMismatch { labels: usize, blocks: usize },
    #[error("duplicate block label {0:?}")]
    DuplicateLabel(String),
}

/// A single coverage bit: 1 when a block was hit, 0 when it was missed.
///
/// Also used for the per-run decision bit (1 = failing run).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bit(bool);

impl Bit {
    pub const ZERO: Bit = Bit(false);
    pub const ONE: Bit = Bit(true);

    pub fn as_bool(self) -> bool {
        self.0
    }

    pub fn as_u8(self) -> u8 {
        u8::from(self.0)
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        Bit(b)
    }
}

impl TryFrom<u8> for Bit {
    type Error = SpectrumError;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            0 => Ok(Bit::ZERO),
            1 => Ok(Bit::ONE),
            other => Err(SpectrumError::InvalidBit(other)),
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Ternary agreement of one block's coverage bit across two runs: hit in
/// both (+1), missed in both (−1), or hit in exactly one (0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HitValue {
    BothMiss,
    Mixed,
    BothHit,
}

impl HitValue {
    /// Numeric value in {−1, 0, +1}. No other integer is representable.
    pub fn value(self) -> i8 {
        match self {
            HitValue::BothMiss => -1,
            HitValue::Mixed => 0,
            HitValue::BothHit => 1,
        }
    }
}

impl TryFrom<i8> for HitValue {
    type Error = i8;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            -1 => Ok(HitValue::BothMiss),
            0 => Ok(HitValue::Mixed),
            1 => Ok(HitValue::BothHit),
            other => Err(other),
        }
    }
}

/// Block hit function over a pair of coverage bits.
///
/// Returns −1 for (0,0), 0 for (0,1) and (1,0), and +1 for (1,1); the
/// domain is enforced by the [`Bit`] type, so there is no error case.
pub fn hit_function(a: Bit, b: Bit) -> HitValue {
    match (a.as_bool(), b.as_bool()) {
        (false, false) => HitValue::BothMiss,
        (true, true) => HitValue::BothHit,
        _ => HitValue::Mixed,
    }
}

/// Fixed-length, immutable sequence of coverage bits.
///
/// One type serves three roles: a per-run row (hits across blocks), a
/// per-block column (hits across runs), and the decision vector. A column
/// and its transposed row carry the same ordered bit sequence, so no
/// separate representation is kept for either orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryVector {
    bits: Vec<Bit>,
}

impl BinaryVector {
    /// Length must be at least one.
    pub fn new(bits: Vec<Bit>) -> Result<Self, SpectrumError> {
        if bits.is_empty() {
            return Err(SpectrumError::EmptyVector);
        }
        Ok(Self { bits })
    }

    /// Builds a vector from integer bits, rejecting anything but 0 and 1.
    pub fn from_bits(bits: &[u8]) -> Result<Self, SpectrumError> {
        let bits = bits
            .iter()
            .map(|&b| Bit::try_from(b))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(bits)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self, SpectrumError> {
        Self::new(bits.iter().map(|&b| Bit::from(b)).collect())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<Bit> {
        self.bits.get(k).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = Bit> + '_ {
        self.bits.iter().copied()
    }

    /// Number of 1 bits.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|b| b.as_bool()).count()
    }
}

impl Index<usize> for BinaryVector {
    type Output = Bit;

    fn index(&self, k: usize) -> &Bit {
        &self.bits[k]
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Elementwise hit-function values for two equal-length coverage vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockFeatureVector {
    values: Vec<HitValue>,
}

impl BlockFeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[HitValue] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = HitValue> + '_ {
        self.values.iter().copied()
    }
}

/// Compares two coverage vectors position by position through the block
/// hit function.
pub fn feature_vector(
    u: &BinaryVector,
    v: &BinaryVector,
) -> Result<BlockFeatureVector, SpectrumError> {
    if u.len() != v.len() {
        return Err(SpectrumError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let values = u
        .iter()
        .zip(v.iter())
        .map(|(a, b)| hit_function(a, b))
        .collect();
    Ok(BlockFeatureVector { values })
}

/// Runs × blocks hit matrix plus the per-run decision (error) vector.
///
/// Row `i` holds run `i`'s hit bits over all blocks; `decisions[i]` is that
/// run's error bit. Blocks are addressed by 0-based column index and carry a
/// human-readable label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumMatrix {
    rows: Vec<BinaryVector>,
    decisions: BinaryVector,
    block_labels: Vec<String>,
}

impl SpectrumMatrix {
    pub fn new(
        rows: Vec<BinaryVector>,
        decisions: BinaryVector,
        block_labels: Vec<String>,
    ) -> Result<Self, SpectrumError> {
        if rows.is_empty() {
            return Err(SpectrumError::NoRuns);
        }
        let blocks = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != blocks {
                return Err(SpectrumError::RaggedRow {
                    row: i,
                    expected: blocks,
                    found: row.len(),
                });
            }
        }
        if decisions.len() != rows.len() {
            return Err(SpectrumError::DecisionLengthMismatch {
                runs: rows.len(),
                decisions: decisions.len(),
            });
        }
        if block_labels.len() != blocks {
            return Err(SpectrumError::LabelCountMismatch {
                labels: block_labels.len(),
                blocks,
            });
        }
        for (i, label) in block_labels.iter().enumerate() {
            if block_labels[..i].contains(label) {
                return Err(SpectrumError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self {
            rows,
            decisions,
            block_labels,
        })
    }

    /// Number of runs S.
    pub fn run_count(&self) -> usize {
        self.rows.len()
    }

    /// Number of blocks m.
    pub fn block_count(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[BinaryVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> Option<&BinaryVector> {
        self.rows.get(i)
    }

    pub fn decisions(&self) -> &BinaryVector {
        &self.decisions
    }

    pub fn block_labels(&self) -> &[String] {
        &self.block_labels
    }

    /// Hit bits for block `k` across all runs, in run order.
    ///
    /// This is the block's column vector; its transpose (the row vector used
    /// for scoring) is the same ordered bit sequence.
    pub fn column(&self, k: usize) -> Result<BinaryVector, SpectrumError> {
        if k >= self.block_count() {
            return Err(SpectrumError::BlockIndexOutOfRange {
                index: k,
                count: self.block_count(),
            });
        }
        BinaryVector::new(self.rows.iter().map(|row| row[k]).collect())
    }
}

/// Errors from reading the spectrum CSV format.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CsvError {
    #[error("empty spectrum file")]
    Empty,
    #[error("header needs at least one block column and the error column (line 1)")]
    HeaderTooShort,
    #[error("header column {column} is {token:?} but must start with \"block_\" (line 1)")]
    BadHeaderColumn { column: usize, token: String },
    #[error("last header column must be \"error\", got {0:?} (line 1)")]
    BadErrorColumn(String),
    #[error("invalid bit {token:?} at line {line}, column {column}")]
    InvalidBit {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line} has {found} fields, expected {expected}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("no data rows after the header")]
    NoRows,
    #[error(transparent)]
    Matrix(#[from] SpectrumError),
}

impl SpectrumMatrix {
    /// Renders the spectrum in its CSV interchange format.
    ///
    /// First line is the header `block_<label>,...,block_<label>,error`;
    /// each following line is one run's hit bits and its decision bit,
    /// comma-separated with no spaces.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for label in &self.block_labels {
            out.push_str("block_");
            out.push_str(label);
            out.push(',');
        }
        out.push_str("error\n");
        for (row, decision) in self.rows.iter().zip(self.decisions.iter()) {
            for bit in row.iter() {
                out.push_str(&bit.to_string());
                out.push(',');
            }
            out.push_str(&decision.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the CSV interchange format. Bit-exact: any data token other
    /// than `0` or `1` is an error, reported with its line number.
    pub fn from_csv(text: &str) -> Result<Self, CsvError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(CsvError::Empty)?;
        let columns: Vec<&str> = header.split(',').collect();
        if columns.len() < 2 {
            return Err(CsvError::HeaderTooShort);
        }
        let last = columns[columns.len() - 1];
        if last != "error" {
            return Err(CsvError::BadErrorColumn(last.to_string()));
        }
        let mut labels = Vec::with_capacity(columns.len() - 1);
        for (i, col) in columns[..columns.len() - 1].iter().enumerate() {
            match col.strip_prefix("block_") {
                Some(label) => labels.push(label.to_string()),
                None => {
                    return Err(CsvError::BadHeaderColumn {
                        column: i + 1,
                        token: col.to_string(),
                    })
                }
            }
        }

        let mut rows = Vec::new();
        let mut decisions = Vec::new();
        for (index, line) in lines {
            let line_no = index + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns.len() {
                return Err(CsvError::RaggedRow {
                    line: line_no,
                    expected: columns.len(),
                    found: fields.len(),
                });
            }
            let mut bits = Vec::with_capacity(fields.len());
            for (i, field) in fields.iter().enumerate() {
                let bit = match *field {
                    "0" => Bit::ZERO,
                    "1" => Bit::ONE,
                    other => {
                        return Err(CsvError::InvalidBit {
                            line: line_no,
                            column: i + 1,
                            token: other.to_string(),
                        })
                    }
                };
                bits.push(bit);
            }
            let decision = bits.pop().expect("header has at least two columns");
            decisions.push(decision);
            rows.push(BinaryVector::new(bits)?);
        }
        if rows.is_empty() {
            return Err(CsvError::NoRows);
        }
        let decisions = BinaryVector::new(decisions)?;
        Ok(SpectrumMatrix::new(rows, decisions, labels)?)
    }
}
