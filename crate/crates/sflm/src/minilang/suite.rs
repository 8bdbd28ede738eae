//! Line-oriented test-suite files.
//!
//! One record per test case, records separated by blank lines:
//!
//! ```text
//! # already sorted
//! input n=4
//! input num=1 1 1 1
//! input den=6 5 4 2
//! expect 1 1 1 1
//! expect 6 5 4 2
//! ```
//!
//! `input <name>=<value>` binds an input variable: a single integer is a
//! scalar, several whitespace-separated integers form an array, and a
//! bracketed list (`[4]`, `[]`) forces an array of any length. `expect
//! <text>` lines accumulate, one per expected output line. Lines starting
//! with `#` are comments.

use thiserror::Error;

use super::interp::Value;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SuiteError {
    #[error("no test cases")]
    NoTestCases,
    #[error("expected output must not be empty")]
    EmptyExpectedOutput,
    #[error("record {record} (starting at line {line}): missing `expect` line")]
    MissingExpect { record: usize, line: usize },
    #[error("record {record} (starting at line {line}): empty expected output")]
    EmptyExpect { record: usize, line: usize },
    #[error("line {line}: expected `input <name>=<values>` or `expect <text>`, got {content:?}")]
    MalformedLine { line: usize, content: String },
    #[error("line {line}: {name:?} is not a valid input name")]
    BadInputName { line: usize, name: String },
    #[error("line {line}: bad integer {token:?}")]
    BadInteger { line: usize, token: String },
    #[error("line {line}: empty value for input {name:?}")]
    EmptyValue { line: usize, name: String },
    #[error("line {line}: missing `]` in array value")]
    UnterminatedArray { line: usize },
    #[error("line {line}: duplicate input {name:?} in record {record}")]
    DuplicateInput {
        line: usize,
        record: usize,
        name: String,
    },
}

/// Named inputs plus the expected printed output for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct TestCase {
    inputs: Vec<(String, Value)>,
    expected_output: String,
}

impl TestCase {
    /// The expected output must be non-empty: an oracle that expects
    /// nothing cannot classify a run.
    pub fn new(inputs: Vec<(String, Value)>, expected_output: String) -> Result<Self, SuiteError> {
        if expected_output.trim().is_empty() {
            return Err(SuiteError::EmptyExpectedOutput);
        }
        Ok(Self {
            inputs,
            expected_output,
        })
    }

    pub fn inputs(&self) -> &[(String, Value)] {
        &self.inputs
    }

    pub fn expected_output(&self) -> &str {
        &self.expected_output
    }
}

#[derive(Default)]
struct RecordBuilder {
    inputs: Vec<(String, Value)>,
    expect_lines: Vec<String>,
    start_line: Option<usize>,
}

impl RecordBuilder {
    fn is_empty(&self) -> bool {
        self.start_line.is_none()
    }
}

/// Parses a whole suite file. At least one record is required.
pub fn parse_suite(text: &str) -> Result<Vec<TestCase>, SuiteError> {
    let mut cases = Vec::new();
    let mut record = RecordBuilder::default();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            finalize(&mut record, &mut cases)?;
            continue;
        }
        record.start_line.get_or_insert(line_no);

        let body = raw.trim_start();
        if let Some(rest) = keyword(body, "input") {
            let (name, value) = parse_input(rest, line_no)?;
            if record.inputs.iter().any(|(n, _)| *n == name) {
                return Err(SuiteError::DuplicateInput {
                    line: line_no,
                    record: cases.len() + 1,
                    name,
                });
            }
            record.inputs.push((name, value));
        } else if let Some(rest) = keyword(body, "expect") {
            record.expect_lines.push(rest.to_string());
        } else {
            return Err(SuiteError::MalformedLine {
                line: line_no,
                content: trimmed.to_string(),
            });
        }
    }
    finalize(&mut record, &mut cases)?;

    if cases.is_empty() {
        return Err(SuiteError::NoTestCases);
    }
    Ok(cases)
}

/// Matches `keyword` followed by whitespace or end of line and returns the
/// remainder with one leading space removed, preserving interior spacing.
fn keyword<'a>(line: &'a str, kw: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(kw)?;
    if rest.is_empty() {
        Some(rest)
    } else if rest.starts_with(' ') || rest.starts_with('\t') {
        Some(&rest[1..])
    } else {
        None
    }
}

fn finalize(record: &mut RecordBuilder, cases: &mut Vec<TestCase>) -> Result<(), SuiteError> {
    if record.is_empty() {
        return Ok(());
    }
    let built = std::mem::take(record);
    let record_no = cases.len() + 1;
    let start = built.start_line.expect("non-empty record has a start line");
    if built.expect_lines.is_empty() {
        return Err(SuiteError::MissingExpect {
            record: record_no,
            line: start,
        });
    }
    let expected = built.expect_lines.join("\n");
    let case = TestCase::new(built.inputs, expected).map_err(|_| SuiteError::EmptyExpect {
        record: record_no,
        line: start,
    })?;
    cases.push(case);
    Ok(())
}

fn parse_input(rest: &str, line: usize) -> Result<(String, Value), SuiteError> {
    let Some((name, value_text)) = rest.split_once('=') else {
        return Err(SuiteError::MalformedLine {
            line,
            content: format!("input {rest}"),
        });
    };
    let name = name.trim();
    let valid = !name.is_empty()
        && name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err(SuiteError::BadInputName {
            line,
            name: name.to_string(),
        });
    }

    let value_text = value_text.trim();
    let value = if let Some(inner) = value_text.strip_prefix('[') {
        let Some(inner) = inner.strip_suffix(']') else {
            return Err(SuiteError::UnterminatedArray { line });
        };
        Value::Array(parse_ints(inner, line)?)
    } else {
        let items = parse_ints(value_text, line)?;
        match items.len() {
            0 => {
                return Err(SuiteError::EmptyValue {
                    line,
                    name: name.to_string(),
                })
            }
            1 => Value::Int(items[0]),
            _ => Value::Array(items),
        }
    };
    Ok((name.to_string(), value))
}

fn parse_ints(text: &str, line: usize) -> Result<Vec<i64>, SuiteError> {
    text.split_whitespace()
        .map(|token| {
            token.parse::<i64>().map_err(|_| SuiteError::BadInteger {
                line,
                token: token.to_string(),
            })
        })
        .collect()
}
