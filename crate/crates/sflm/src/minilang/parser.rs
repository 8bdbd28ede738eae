//! Recursive-descent parser and static checks for MiniLang.
//!
//! Parsing assigns statement ids in flattened source order. After parsing,
//! a definite-assignment pass classifies every variable: names that are
//! whole-assigned somewhere must be assigned on every path before use;
//! names never whole-assigned are the program's inputs.

use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::{
    BinOp, Expr, LValue, Program, SimpleAssign, Span, Stmt, StmtId, StmtKind,
};
use super::lexer::{lex, SpannedToken, Token};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: unexpected {found}, expected {}", expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("invalid character {c:?} at {line}:{col}")]
    InvalidCharacter { c: char, line: usize, col: usize },
    #[error("integer literal out of range at {line}:{col}")]
    NumberOutOfRange { line: usize, col: usize },
    #[error("use of {name:?} before assignment at line {line}")]
    UseBeforeAssign { name: String, line: usize },
    #[error("empty program")]
    EmptyProgram,
}

/// Parses MiniLang source into a checked [`Program`].
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let (tokens, end) = lex(source)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        stmts: Vec::new(),
        end,
    };
    let top = parser.parse_body_until(None)?;
    if top.is_empty() {
        return Err(ParseError::EmptyProgram);
    }
    let inputs = check_assignments(&parser.stmts, &top)?;
    Ok(Program::new(parser.stmts, top, inputs))
}

struct Parser {
    tokens: Vec<SpannedToken>,
    pos: usize,
    stmts: Vec<Stmt>,
    end: Span,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.token)
    }

    fn here(&self) -> Span {
        self.tokens.get(self.pos).map_or(self.end, |t| t.span)
    }

    fn describe_current(&self) -> String {
        self.tokens
            .get(self.pos)
            .map_or_else(|| "end of input".to_string(), |t| t.token.to_string())
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let span = self.here();
        ParseError::Syntax {
            line: span.line,
            col: span.col,
            found: self.describe_current(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn bump(&mut self) -> Option<SpannedToken> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<Span, ParseError> {
        if self.peek() == Some(&token) {
            let span = self.here();
            self.pos += 1;
            Ok(span)
        } else {
            Err(self.error(&[what]))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Span), ParseError> {
        match self.peek() {
            Some(Token::Ident(_)) => {
                let t = self.bump().expect("peeked");
                match t.token {
                    Token::Ident(name) => Ok((name, t.span)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.error(&[what])),
        }
    }

    /// Reserves the next statement id before its body is parsed, keeping
    /// ids in flattened source order. The placeholder is always replaced.
    fn alloc(&mut self, span: Span) -> StmtId {
        let id = StmtId(self.stmts.len());
        self.stmts.push(Stmt {
            kind: StmtKind::Print { args: Vec::new() },
            span,
        });
        id
    }

    fn set(&mut self, id: StmtId, kind: StmtKind) {
        self.stmts[id.0].kind = kind;
    }

    /// Parses statements until `stop` (a closing brace) or end of input.
    fn parse_body_until(&mut self, stop: Option<&Token>) -> Result<Vec<StmtId>, ParseError> {
        let mut body = Vec::new();
        loop {
            match self.peek() {
                None if stop.is_none() => return Ok(body),
                None => return Err(self.error(&["'}'", "a statement"])),
                Some(t) if Some(t) == stop => return Ok(body),
                Some(_) => body.push(self.parse_statement()?),
            }
        }
    }

    fn parse_block(&mut self) -> Result<Vec<StmtId>, ParseError> {
        self.expect(Token::LBrace, "'{'")?;
        let body = self.parse_body_until(Some(&Token::RBrace))?;
        self.expect(Token::RBrace, "'}'")?;
        Ok(body)
    }

    fn parse_statement(&mut self) -> Result<StmtId, ParseError> {
        let span = self.here();
        match self.peek() {
            Some(Token::Ident(_)) => {
                let assign = self.parse_simple_assign()?;
                self.expect(Token::Semi, "';'")?;
                let id = self.alloc(span);
                self.set(
                    id,
                    StmtKind::Assign {
                        target: assign.target,
                        value: assign.value,
                    },
                );
                Ok(id)
            }
            Some(Token::KwPrint) => {
                self.bump();
                self.expect(Token::LParen, "'('")?;
                let mut args = vec![self.parse_expr()?];
                while self.eat(&Token::Comma) {
                    args.push(self.parse_expr()?);
                }
                self.expect(Token::RParen, "')'")?;
                self.expect(Token::Semi, "';'")?;
                let id = self.alloc(span);
                self.set(id, StmtKind::Print { args });
                Ok(id)
            }
            Some(Token::KwIf) => self.parse_if(span),
            Some(Token::KwWhile) => {
                self.bump();
                self.expect(Token::LParen, "'('")?;
                let cond = self.parse_expr()?;
                self.expect(Token::RParen, "')'")?;
                let id = self.alloc(span);
                let body = self.parse_block()?;
                self.set(id, StmtKind::While { cond, body });
                Ok(id)
            }
            Some(Token::KwFor) => {
                self.bump();
                self.expect(Token::LParen, "'('")?;
                let init = self.parse_simple_assign()?;
                self.expect(Token::Semi, "';'")?;
                let cond = self.parse_expr()?;
                self.expect(Token::Semi, "';'")?;
                let step = self.parse_simple_assign()?;
                self.expect(Token::RParen, "')'")?;
                let id = self.alloc(span);
                let body = self.parse_block()?;
                self.set(
                    id,
                    StmtKind::For {
                        init,
                        cond,
                        step,
                        body,
                    },
                );
                Ok(id)
            }
            _ => Err(self.error(&["a statement"])),
        }
    }

    fn parse_if(&mut self, span: Span) -> Result<StmtId, ParseError> {
        self.expect(Token::KwIf, "'if'")?;
        self.expect(Token::LParen, "'('")?;
        let cond = self.parse_expr()?;
        self.expect(Token::RParen, "')'")?;
        let id = self.alloc(span);
        let then_body = self.parse_block()?;
        let else_body = if self.eat(&Token::KwElse) {
            if self.peek() == Some(&Token::KwIf) {
                let nested_span = self.here();
                vec![self.parse_if(nested_span)?]
            } else {
                self.parse_block()?
            }
        } else {
            Vec::new()
        };
        self.set(
            id,
            StmtKind::If {
                cond,
                then_body,
                else_body,
            },
        );
        Ok(id)
    }

    /// `name = expr` or `name[expr] = expr`, without the trailing `;`.
    fn parse_simple_assign(&mut self) -> Result<SimpleAssign, ParseError> {
        let (name, _) = self.expect_ident("an identifier")?;
        let target = if self.eat(&Token::LBracket) {
            let index = self.parse_expr()?;
            self.expect(Token::RBracket, "']'")?;
            LValue::Element { array: name, index }
        } else {
            LValue::Var(name)
        };
        self.expect(Token::Assign, "'='")?;
        let value = self.parse_expr()?;
        Ok(SimpleAssign { target, value })
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let left = self.parse_additive()?;
        let op = match self.peek() {
            Some(Token::EqEq) => Some(BinOp::Eq),
            Some(Token::Ne) => Some(BinOp::Ne),
            Some(Token::Lt) => Some(BinOp::Lt),
            Some(Token::Le) => Some(BinOp::Le),
            Some(Token::Gt) => Some(BinOp::Gt),
            Some(Token::Ge) => Some(BinOp::Ge),
            _ => None,
        };
        match op {
            Some(op) => {
                self.bump();
                let right = self.parse_additive()?;
                Ok(Expr::Binary {
                    op,
                    left: Box::new(left),
                    right: Box::new(right),
                })
            }
            None => Ok(left),
        }
    }

    fn parse_additive(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.parse_multiplicative()?;
        loop {
            let op = match self.peek() {
                Some(Token::Plus) => BinOp::Add,
                Some(Token::Minus) => BinOp::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.parse_multiplicative()?;
            left = Expr::Binary {
                op,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
    }

    fn parse_multiplicative(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.parse_unary()?;
        loop {
            let op = match self.peek() {
                Some(Token::Star) => BinOp::Mul,
                Some(Token::Slash) => BinOp::Div,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.parse_unary()?;
            left = Expr::Binary {
                op,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Token::Minus) {
            Ok(Expr::Neg(Box::new(self.parse_unary()?)))
        } else {
            self.parse_primary()
        }
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Token::Number(_)) => {
                let t = self.bump().expect("peeked");
                match t.token {
                    Token::Number(n) => Ok(Expr::Number(n)),
                    _ => unreachable!(),
                }
            }
            Some(Token::Ident(_)) => {
                let (name, _) = self.expect_ident("an identifier")?;
                if self.eat(&Token::LBracket) {
                    let index = self.parse_expr()?;
                    self.expect(Token::RBracket, "']'")?;
                    Ok(Expr::Index {
                        array: name,
                        index: Box::new(index),
                    })
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Token::LParen) => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(self.error(&["a number", "an identifier", "'('", "'-'"])),
        }
    }
}

/// Definite-assignment analysis.
///
/// Names whole-assigned anywhere in the program are bound; reading a bound
/// name is only legal once it is assigned on every path. Names that are
/// only read (or element-assigned) are free and become the program's input
/// variables. Loop bodies are checked against the pre-loop state because
/// they may run zero times; the two arms of an `if` contribute only their
/// intersection.
fn check_assignments(stmts: &[Stmt], top: &[StmtId]) -> Result<Vec<String>, ParseError> {
    let mut bound = BTreeSet::new();
    for stmt in stmts {
        collect_bound(&stmt.kind, &mut bound);
    }

    let mut checker = Checker {
        stmts,
        bound,
        inputs: BTreeSet::new(),
    };
    let mut assigned = BTreeSet::new();
    checker.check_body(top, &mut assigned)?;
    Ok(checker.inputs.into_iter().collect())
}

fn collect_bound(kind: &StmtKind, bound: &mut BTreeSet<String>) {
    let mut record = |target: &LValue| {
        if let LValue::Var(name) = target {
            bound.insert(name.clone());
        }
    };
    match kind {
        StmtKind::Assign { target, .. } => record(target),
        StmtKind::For { init, step, .. } => {
            record(&init.target);
            record(&step.target);
        }
        _ => {}
    }
}

struct Checker<'p> {
    stmts: &'p [Stmt],
    bound: BTreeSet<String>,
    inputs: BTreeSet<String>,
}

impl Checker<'_> {
    fn check_body(
        &mut self,
        body: &[StmtId],
        assigned: &mut BTreeSet<String>,
    ) -> Result<(), ParseError> {
        for &id in body {
            let stmt = &self.stmts[id.0];
            let line = stmt.span.line;
            match &stmt.kind {
                StmtKind::Assign { target, value } => {
                    self.check_assign(target, value, assigned, line)?;
                }
                StmtKind::Print { args } => {
                    for arg in args {
                        self.check_expr(arg, assigned, line)?;
                    }
                }
                StmtKind::If {
                    cond,
                    then_body,
                    else_body,
                } => {
                    self.check_expr(cond, assigned, line)?;
                    let mut then_assigned = assigned.clone();
                    self.check_body(then_body, &mut then_assigned)?;
                    let mut else_assigned = assigned.clone();
                    self.check_body(else_body, &mut else_assigned)?;
                    *assigned = then_assigned
                        .intersection(&else_assigned)
                        .cloned()
                        .collect();
                }
                StmtKind::While { cond, body } => {
                    self.check_expr(cond, assigned, line)?;
                    // Body may run zero times: its assignments don't
                    // survive, and it must be safe with the pre-loop state.
                    let mut body_assigned = assigned.clone();
                    self.check_body(body, &mut body_assigned)?;
                }
                StmtKind::For {
                    init,
                    cond,
                    step,
                    body,
                } => {
                    // The init clause always runs before the condition.
                    self.check_assign(&init.target, &init.value, assigned, line)?;
                    self.check_expr(cond, assigned, line)?;
                    let mut body_assigned = assigned.clone();
                    self.check_body(body, &mut body_assigned)?;
                    self.check_assign(&step.target, &step.value, &mut body_assigned, line)?;
                }
            }
        }
        Ok(())
    }

    fn check_assign(
        &mut self,
        target: &LValue,
        value: &Expr,
        assigned: &mut BTreeSet<String>,
        line: usize,
    ) -> Result<(), ParseError> {
        self.check_expr(value, assigned, line)?;
        match target {
            LValue::Var(name) => {
                assigned.insert(name.clone());
            }
            LValue::Element { array, index } => {
                // Updating one element requires the array to exist already.
                self.check_read(array, assigned, line)?;
                self.check_expr(index, assigned, line)?;
            }
        }
        Ok(())
    }

    fn check_expr(
        &mut self,
        expr: &Expr,
        assigned: &BTreeSet<String>,
        line: usize,
    ) -> Result<(), ParseError> {
        match expr {
            Expr::Number(_) => Ok(()),
            Expr::Var(name) => self.check_read(name, assigned, line),
            Expr::Index { array, index } => {
                self.check_read(array, assigned, line)?;
                self.check_expr(index, assigned, line)
            }
            Expr::Neg(inner) => self.check_expr(inner, assigned, line),
            Expr::Binary { left, right, .. } => {
                self.check_expr(left, assigned, line)?;
                self.check_expr(right, assigned, line)
            }
        }
    }

    fn check_read(
        &mut self,
        name: &str,
        assigned: &BTreeSet<String>,
        line: usize,
    ) -> Result<(), ParseError> {
        if assigned.contains(name) {
            return Ok(());
        }
        if self.bound.contains(name) {
            return Err(ParseError::UseBeforeAssign {
                name: name.to_string(),
                line,
            });
        }
        self.inputs.insert(name.to_string());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_two_statement_program() {
        let p = parse("x = 1; print(x);").unwrap();
        assert_eq!(p.statement_count(), 2);
        assert_eq!(p.top_level().len(), 2);
        assert!(p.input_variables().is_empty());
    }

    #[test]
    fn truncated_if_is_a_syntax_error_at_end_of_input() {
        let err = parse("if (x >").unwrap_err();
        match err {
            ParseError::Syntax { found, .. } => assert_eq!(found, "end of input"),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_position_and_expected_set() {
        let err = parse("x = ;").unwrap_err();
        match err {
            ParseError::Syntax {
                line,
                col,
                expected,
                ..
            } => {
                assert_eq!(line, 1);
                assert_eq!(col, 5);
                assert!(!expected.is_empty());
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn empty_source_is_rejected() {
        assert_eq!(parse("").unwrap_err(), ParseError::EmptyProgram);
        assert_eq!(parse("# only a comment\n").unwrap_err(), ParseError::EmptyProgram);
    }

    #[test]
    fn free_variables_become_inputs() {
        let p = parse("y = n + 1; print(y, a[0]);").unwrap();
        assert_eq!(p.input_variables(), &["a".to_string(), "n".to_string()]);
    }

    #[test]
    fn use_before_later_assignment_is_rejected() {
        let err = parse("print(x); x = 1;").unwrap_err();
        assert_eq!(
            err,
            ParseError::UseBeforeAssign {
                name: "x".into(),
                line: 1
            }
        );
    }

    #[test]
    fn conditionally_assigned_variable_cannot_be_read_afterwards() {
        let err = parse("if (c > 0) { x = 1; } print(x);").unwrap_err();
        assert!(matches!(err, ParseError::UseBeforeAssign { ref name, .. } if name == "x"));
    }

    #[test]
    fn both_branches_assigning_makes_the_read_legal() {
        let p = parse("if (c > 0) { x = 1; } else { x = 2; } print(x);").unwrap();
        assert_eq!(p.input_variables(), &["c".to_string()]);
    }

    #[test]
    fn while_body_assignments_do_not_escape_the_loop() {
        let err = parse("while (c > 0) { x = 1; } print(x);").unwrap_err();
        assert!(matches!(err, ParseError::UseBeforeAssign { ref name, .. } if name == "x"));
    }

    #[test]
    fn for_init_variable_survives_the_loop() {
        let p = parse("for (i = 0; i < n; i = i + 1) { print(i); } print(i);").unwrap();
        assert_eq!(p.input_variables(), &["n".to_string()]);
    }

    #[test]
    fn element_assignment_requires_an_existing_array() {
        // `a` is never whole-assigned, so it is an input.
        let p = parse("a[0] = 1; print(a);").unwrap();
        assert_eq!(p.input_variables(), &["a".to_string()]);
        // `b` is whole-assigned later, so the element write comes too early.
        let err = parse("b[0] = 1; b = 2; print(b);").unwrap_err();
        assert!(matches!(err, ParseError::UseBeforeAssign { ref name, .. } if name == "b"));
    }

    #[test]
    fn else_if_chains_parse() {
        let p = parse("if (x > 0) { y = 1; } else if (x < 0) { y = 2; } else { y = 3; } print(y);")
            .unwrap();
        assert_eq!(p.input_variables(), &["x".to_string()]);
    }

    #[test]
    fn statement_ids_follow_flattened_source_order() {
        let p = parse("a = 1; while (a < 3) { a = a + 1; } print(a);").unwrap();
        // s0 = assign, s1 = while header, s2 = body assign, s3 = print.
        assert_eq!(p.top_level(), &[StmtId(0), StmtId(1), StmtId(3)]);
        match &p.stmt(StmtId(1)).kind {
            StmtKind::While { body, .. } => assert_eq!(body, &[StmtId(2)]),
            other => panic!("expected while, got {other:?}"),
        }
    }

    #[test]
    fn invalid_character_is_reported_with_position() {
        let err = parse("x = 1 @ 2;").unwrap_err();
        assert_eq!(
            err,
            ParseError::InvalidCharacter {
                c: '@',
                line: 1,
                col: 7
            }
        );
        // A lone '!' is only valid as part of '!='.
        let err = parse("x = 1 ! 2;").unwrap_err();
        assert_eq!(
            err,
            ParseError::InvalidCharacter {
                c: '!',
                line: 1,
                col: 7
            }
        );
    }

    #[test]
    fn oversized_literal_is_rejected() {
        let err = parse("x = 99999999999999999999;").unwrap_err();
        assert!(matches!(err, ParseError::NumberOutOfRange { .. }));
    }
}
