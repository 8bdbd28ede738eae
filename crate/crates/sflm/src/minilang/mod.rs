//! MiniLang front end: a small imperative language whose executions yield
//! coverage spectra.
//!
//! The pipeline: [`parse`] source into a checked [`Program`], [`build_cfg`]
//! to identify leader-delimited basic blocks, [`run_traced`] each test case
//! while recording block hits and classifying the output, then
//! [`build_spectrum`] to assemble the traces into a [`SpectrumMatrix`].
//!
//! MiniLang keeps to integers, integer arrays, assignment, arithmetic,
//! comparisons, `if`/`else`, `while`, `for`, and `print`; the grammar is
//! documented in `docs/minilang.md`. Rational numbers are conventionally
//! modeled as parallel numerator/denominator arrays compared by
//! cross-multiplication, which needs no floating point.

pub mod ast;
pub mod cfg;
pub mod interp;
pub mod lexer;
pub mod parser;
pub mod suite;

use std::fmt;
use std::num::NonZeroU64;

pub use ast::{Program, Span, StmtId};
pub use cfg::{build_cfg, BasicBlock, ProgramFlowGraph};
pub use interp::{
    normalize_output, run_traced, RunOutcome, RunTrace, RuntimeError, Value, DEFAULT_FUEL,
};
pub use parser::{parse, ParseError};
pub use suite::{parse_suite, SuiteError, TestCase};

use crate::spectrum::{BinaryVector, SpectrumError, SpectrumMatrix};

/// Assembles run traces into a spectrum matrix: one row of hit bits per
/// trace, in trace order, with the error bits as the decision vector.
pub fn build_spectrum(
    traces: &[RunTrace],
    labels: Vec<String>,
) -> Result<SpectrumMatrix, SpectrumError> {
    if traces.is_empty() {
        return Err(SpectrumError::NoRuns);
    }
    let rows = traces.iter().map(|t| t.hits.clone()).collect();
    let decisions = BinaryVector::new(traces.iter().map(|t| t.error).collect())?;
    SpectrumMatrix::new(rows, decisions, labels)
}

/// A run that did not complete normally; the spectrum still records it as
/// a failing row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunWarning {
    pub case_index: usize,
    pub outcome: RunOutcome,
}

impl fmt::Display for RunWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let case = self.case_index + 1;
        match &self.outcome {
            RunOutcome::OutOfFuel => {
                write!(
                    f,
                    "test case {case}: step budget exhausted (possible non-termination); counted as failing"
                )
            }
            RunOutcome::RuntimeError(e) => write!(f, "test case {case}: {e}; counted as failing"),
            RunOutcome::Completed => write!(f, "test case {case}: completed"),
        }
    }
}

/// Runs every test case and assembles the spectrum, collecting a warning
/// for each run that ended in a fault or an exhausted step budget.
pub fn run_suite(
    program: &Program,
    cfg: &ProgramFlowGraph,
    cases: &[TestCase],
    fuel: NonZeroU64,
) -> Result<(SpectrumMatrix, Vec<RunWarning>), SpectrumError> {
    let traces: Vec<RunTrace> = cases
        .iter()
        .map(|case| run_traced(program, cfg, case, fuel))
        .collect();
    let warnings = traces
        .iter()
        .enumerate()
        .filter(|(_, t)| t.outcome != RunOutcome::Completed)
        .map(|(i, t)| RunWarning {
            case_index: i,
            outcome: t.outcome.clone(),
        })
        .collect();
    let spectrum = build_spectrum(&traces, cfg.block_labels())?;
    Ok((spectrum, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::Bit;

    fn trace(bits: &[u8], error: u8) -> RunTrace {
        RunTrace {
            hits: BinaryVector::from_bits(bits).unwrap(),
            observed_output: String::new(),
            error: Bit::try_from(error).unwrap(),
            outcome: RunOutcome::Completed,
        }
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|k| k.to_string()).collect()
    }

    #[test]
    fn traces_become_rows_and_decisions() {
        let traces = [trace(&[1, 1, 1, 1, 0, 1], 0), trace(&[1, 1, 1, 1, 1, 1], 1)];
        let m = build_spectrum(&traces, labels(6)).unwrap();
        assert_eq!(m.run_count(), 2);
        assert_eq!(m.block_count(), 6);
        assert_eq!(m.decisions(), &BinaryVector::from_bits(&[0, 1]).unwrap());
        assert_eq!(
            m.column(4).unwrap(),
            BinaryVector::from_bits(&[0, 1]).unwrap()
        );
    }

    #[test]
    fn single_passing_trace() {
        let m = build_spectrum(&[trace(&[1, 0], 0)], labels(2)).unwrap();
        assert_eq!(m.run_count(), 1);
        assert_eq!(m.decisions(), &BinaryVector::from_bits(&[0]).unwrap());
    }

    #[test]
    fn empty_trace_list_is_rejected() {
        assert_eq!(
            build_spectrum(&[], labels(2)).unwrap_err(),
            SpectrumError::NoRuns
        );
    }

    #[test]
    fn inconsistent_block_counts_are_rejected() {
        let err = build_spectrum(&[trace(&[1, 0], 0), trace(&[1], 1)], labels(2)).unwrap_err();
        assert_eq!(
            err,
            SpectrumError::RaggedRow {
                row: 1,
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn run_suite_collects_warnings_for_abnormal_runs() {
        let program = parse("x = 1 / n; print(x);").unwrap();
        let cfg = build_cfg(&program);
        let cases = vec![
            TestCase::new(vec![("n".into(), Value::Int(1))], "1".into()).unwrap(),
            TestCase::new(vec![("n".into(), Value::Int(0))], "1".into()).unwrap(),
        ];
        let (spectrum, warnings) = run_suite(&program, &cfg, &cases, DEFAULT_FUEL).unwrap();
        assert_eq!(spectrum.run_count(), 2);
        assert_eq!(
            spectrum.decisions(),
            &BinaryVector::from_bits(&[0, 1]).unwrap()
        );
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].case_index, 1);
        assert!(warnings[0].to_string().contains("division by zero"));
    }
}
