//! Tracing interpreter: runs a program on one test case, recording the
//! first entry into every basic block, then classifies the run against the
//! expected output.
//!
//! Hits are binary first-entry flags, not counts. A runtime fault aborts
//! the run and yields a failing trace with the hits recorded so far; an
//! exhausted step budget is reported as its own outcome so callers can
//! distinguish likely non-termination from ordinary faults. Each run owns
//! its interpreter state, so distinct runs may execute concurrently.

use std::collections::HashMap;
use std::fmt;
use std::num::NonZeroU64;

use thiserror::Error;

use super::ast::{BinOp, Expr, LValue, Program, StmtId, StmtKind};
use super::cfg::ProgramFlowGraph;
use super::suite::TestCase;
use crate::spectrum::{BinaryVector, Bit};

/// Default per-run step budget.
pub const DEFAULT_FUEL: NonZeroU64 = NonZeroU64::new(1_000_000).unwrap();

/// A runtime value: integers and integer arrays, with copy semantics on
/// assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Array(Vec<i64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Array(items) => {
                let mut first = true;
                for item in items {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                    first = false;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuntimeError {
    #[error("division by zero at line {line}")]
    DivisionByZero { line: usize },
    #[error("index {index} out of range for array {array:?} of length {len} at line {line}")]
    IndexOutOfRange {
        array: String,
        index: i64,
        len: usize,
        line: usize,
    },
    #[error("undefined variable {name:?} at line {line} (missing test input?)")]
    UndefinedVariable { name: String, line: usize },
    #[error("type mismatch at line {line}: {message}")]
    TypeMismatch { line: usize, message: String },
    #[error("integer overflow at line {line}")]
    Overflow { line: usize },
}

/// How a traced run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    /// Ran to completion; the error bit reflects the output comparison.
    Completed,
    /// Aborted by a runtime fault; always a failing run.
    RuntimeError(RuntimeError),
    /// Exceeded the step budget; likely non-termination, counted as a
    /// failing run.
    OutOfFuel,
}

/// One run's block hits, printed output, and pass/fail classification.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub hits: BinaryVector,
    pub observed_output: String,
    pub error: Bit,
    pub outcome: RunOutcome,
}

impl RunTrace {
    pub fn passed(&self) -> bool {
        !self.error.as_bool()
    }
}

/// Strips trailing whitespace from every line and trailing blank lines from
/// the whole text. Output comparison is exact after this normalization.
pub fn normalize_output(s: &str) -> String {
    let mut lines: Vec<&str> = s.lines().map(str::trim_end).collect();
    while lines.last() == Some(&"") {
        lines.pop();
    }
    lines.join("\n")
}

/// Interprets `program` on the test case's inputs, marking each basic block
/// the first time control enters it. The trace's error bit is 1 unless the
/// run completed and its output matched the expected output.
pub fn run_traced(
    program: &Program,
    cfg: &ProgramFlowGraph,
    case: &TestCase,
    fuel: NonZeroU64,
) -> RunTrace {
    let mut interp = Interp {
        program,
        cfg,
        env: case
            .inputs()
            .iter()
            .map(|(name, value)| (name.clone(), value.clone()))
            .collect(),
        hits: vec![false; cfg.block_count()],
        out: String::new(),
        fuel: fuel.get(),
    };
    let result = interp.exec_body(program.top_level());
    let hits = BinaryVector::from_bools(&interp.hits).expect("a program has at least one block");
    let (error, outcome) = match result {
        Ok(()) => {
            let matches =
                normalize_output(&interp.out) == normalize_output(case.expected_output());
            (Bit::from(!matches), RunOutcome::Completed)
        }
        Err(Stop::Fault(e)) => (Bit::ONE, RunOutcome::RuntimeError(e)),
        Err(Stop::OutOfFuel) => (Bit::ONE, RunOutcome::OutOfFuel),
    };
    RunTrace {
        hits,
        observed_output: interp.out,
        error,
        outcome,
    }
}

enum Stop {
    Fault(RuntimeError),
    OutOfFuel,
}

struct Interp<'p> {
    program: &'p Program,
    cfg: &'p ProgramFlowGraph,
    env: HashMap<String, Value>,
    hits: Vec<bool>,
    out: String,
    fuel: u64,
}

impl Interp<'_> {
    fn burn(&mut self) -> Result<(), Stop> {
        if self.fuel == 0 {
            return Err(Stop::OutOfFuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn exec_body(&mut self, body: &[StmtId]) -> Result<(), Stop> {
        for &id in body {
            self.exec(id)?;
        }
        Ok(())
    }

    fn exec(&mut self, id: StmtId) -> Result<(), Stop> {
        self.burn()?;
        self.hits[self.cfg.block_of_stmt(id)] = true;
        let stmt = self.program.stmt(id);
        let line = stmt.span.line;
        match &stmt.kind {
            StmtKind::Assign { target, value } => self.assign(target, value, line),
            StmtKind::Print { args } => {
                let mut rendered = Vec::with_capacity(args.len());
                for arg in args {
                    rendered.push(self.eval(arg, line)?.to_string());
                }
                self.out.push_str(&rendered.join(" "));
                self.out.push('\n');
                Ok(())
            }
            StmtKind::If {
                cond,
                then_body,
                else_body,
            } => {
                if self.truthy(cond, line)? {
                    self.exec_body(then_body)
                } else {
                    self.exec_body(else_body)
                }
            }
            StmtKind::While { cond, body } => {
                while self.truthy(cond, line)? {
                    self.exec_body(body)?;
                    // One unit per loop turn, so empty bodies still spend.
                    self.burn()?;
                }
                Ok(())
            }
            StmtKind::For {
                init,
                cond,
                step,
                body,
            } => {
                self.assign(&init.target, &init.value, line)?;
                while self.truthy(cond, line)? {
                    self.exec_body(body)?;
                    self.assign(&step.target, &step.value, line)?;
                    self.burn()?;
                }
                Ok(())
            }
        }
    }

    fn assign(&mut self, target: &LValue, value: &Expr, line: usize) -> Result<(), Stop> {
        let v = self.eval(value, line)?;
        match target {
            LValue::Var(name) => {
                self.env.insert(name.clone(), v);
                Ok(())
            }
            LValue::Element { array, index } => {
                let idx = self.eval_int(index, line)?;
                let item = match v {
                    Value::Int(n) => n,
                    Value::Array(_) => {
                        return Err(self
                            .type_error(line, "cannot store an array into an array element"))
                    }
                };
                match self.env.get_mut(array) {
                    None => Err(Stop::Fault(RuntimeError::UndefinedVariable {
                        name: array.clone(),
                        line,
                    })),
                    Some(Value::Int(_)) => Err(Stop::Fault(RuntimeError::TypeMismatch {
                        line,
                        message: format!("{array:?} is an integer and cannot be indexed"),
                    })),
                    Some(Value::Array(items)) => {
                        let len = items.len();
                        match usize::try_from(idx).ok().filter(|&i| i < len) {
                            Some(i) => {
                                items[i] = item;
                                Ok(())
                            }
                            None => Err(Stop::Fault(RuntimeError::IndexOutOfRange {
                                array: array.clone(),
                                index: idx,
                                len,
                                line,
                            })),
                        }
                    }
                }
            }
        }
    }

    fn lookup(&self, name: &str, line: usize) -> Result<&Value, Stop> {
        self.env
            .get(name)
            .ok_or_else(|| {
                Stop::Fault(RuntimeError::UndefinedVariable {
                    name: name.to_string(),
                    line,
                })
            })
    }

    fn type_error(&self, line: usize, message: &str) -> Stop {
        Stop::Fault(RuntimeError::TypeMismatch {
            line,
            message: message.to_string(),
        })
    }

    fn eval(&self, expr: &Expr, line: usize) -> Result<Value, Stop> {
        match expr {
            Expr::Number(n) => Ok(Value::Int(*n)),
            Expr::Var(name) => Ok(self.lookup(name, line)?.clone()),
            Expr::Index { array, index } => {
                let idx = self.eval_int(index, line)?;
                match self.lookup(array, line)? {
                    Value::Int(_) => Err(Stop::Fault(RuntimeError::TypeMismatch {
                        line,
                        message: format!("{array:?} is an integer and cannot be indexed"),
                    })),
                    Value::Array(items) => {
                        match usize::try_from(idx).ok().and_then(|i| items.get(i)) {
                            Some(&item) => Ok(Value::Int(item)),
                            None => Err(Stop::Fault(RuntimeError::IndexOutOfRange {
                                array: array.clone(),
                                index: idx,
                                len: items.len(),
                                line,
                            })),
                        }
                    }
                }
            }
            Expr::Neg(inner) => {
                let n = self.eval_int(inner, line)?;
                n.checked_neg()
                    .map(Value::Int)
                    .ok_or(Stop::Fault(RuntimeError::Overflow { line }))
            }
            Expr::Binary { op, left, right } => {
                let l = self.eval_int(left, line)?;
                let r = self.eval_int(right, line)?;
                let int = |v: Option<i64>| {
                    v.map(Value::Int)
                        .ok_or(Stop::Fault(RuntimeError::Overflow { line }))
                };
                match op {
                    BinOp::Add => int(l.checked_add(r)),
                    BinOp::Sub => int(l.checked_sub(r)),
                    BinOp::Mul => int(l.checked_mul(r)),
                    BinOp::Div => {
                        if r == 0 {
                            Err(Stop::Fault(RuntimeError::DivisionByZero { line }))
                        } else {
                            int(l.checked_div(r))
                        }
                    }
                    BinOp::Eq => Ok(Value::Int(i64::from(l == r))),
                    BinOp::Ne => Ok(Value::Int(i64::from(l != r))),
                    BinOp::Lt => Ok(Value::Int(i64::from(l < r))),
                    BinOp::Le => Ok(Value::Int(i64::from(l <= r))),
                    BinOp::Gt => Ok(Value::Int(i64::from(l > r))),
                    BinOp::Ge => Ok(Value::Int(i64::from(l >= r))),
                }
            }
        }
    }

    fn eval_int(&self, expr: &Expr, line: usize) -> Result<i64, Stop> {
        match self.eval(expr, line)? {
            Value::Int(n) => Ok(n),
            Value::Array(_) => Err(Stop::Fault(RuntimeError::TypeMismatch {
                line,
                message: "arrays cannot be used in arithmetic, comparisons, or indexing"
                    .to_string(),
            })),
        }
    }

    fn truthy(&self, cond: &Expr, line: usize) -> Result<bool, Stop> {
        match self.eval(cond, line)? {
            Value::Int(n) => Ok(n != 0),
            Value::Array(_) => Err(Stop::Fault(RuntimeError::TypeMismatch {
                line,
                message: "an array is not a condition".to_string(),
            })),
        }
    }
}
