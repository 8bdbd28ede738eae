//! Abstract syntax for MiniLang programs.
//!
//! Statements live in a flat arena indexed by [`StmtId`]; ids follow
//! flattened source (pre-)order, so a construct's id always precedes the
//! ids of the statements in its body. Block identification and tracing
//! both rely on that ordering.

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

/// Index of a statement in flattened source order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StmtId(pub(crate) usize);

impl StmtId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(i64),
    Var(String),
    Index { array: String, index: Box<Expr> },
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        left: Box<Expr>,
        right: Box<Expr>,
    },
}

/// Assignment target: a whole variable or one array element.
#[derive(Debug, Clone, PartialEq)]
pub enum LValue {
    Var(String),
    Element { array: String, index: Expr },
}

/// The init/step clause of a `for` header.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleAssign {
    pub target: LValue,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Assign {
        target: LValue,
        value: Expr,
    },
    Print {
        args: Vec<Expr>,
    },
    If {
        cond: Expr,
        then_body: Vec<StmtId>,
        else_body: Vec<StmtId>,
    },
    While {
        cond: Expr,
        body: Vec<StmtId>,
    },
    /// The whole `for (init; cond; step)` header is one statement; its
    /// init and step clauses execute as part of the header, not as
    /// separate statements.
    For {
        init: SimpleAssign,
        cond: Expr,
        step: SimpleAssign,
        body: Vec<StmtId>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

impl Stmt {
    /// True for statements that choose between two successors.
    pub fn is_branch(&self) -> bool {
        matches!(
            self.kind,
            StmtKind::If { .. } | StmtKind::While { .. } | StmtKind::For { .. }
        )
    }
}

/// A parsed, statically checked program.
///
/// Free variables (read somewhere but never whole-assigned anywhere) are
/// the program's inputs and must be bound by each test case.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    stmts: Vec<Stmt>,
    top: Vec<StmtId>,
    inputs: Vec<String>,
}

impl Program {
    pub(crate) fn new(stmts: Vec<Stmt>, top: Vec<StmtId>, inputs: Vec<String>) -> Self {
        Self { stmts, top, inputs }
    }

    pub fn statement_count(&self) -> usize {
        self.stmts.len()
    }

    pub fn stmt(&self, id: StmtId) -> &Stmt {
        &self.stmts[id.0]
    }

    pub fn statements(&self) -> &[Stmt] {
        &self.stmts
    }

    /// Top-level statement sequence in source order.
    pub fn top_level(&self) -> &[StmtId] {
        &self.top
    }

    /// Sorted names of the program's input variables.
    pub fn input_variables(&self) -> &[String] {
        &self.inputs
    }
}
