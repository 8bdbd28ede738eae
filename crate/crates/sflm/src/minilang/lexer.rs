//! Tokenizer for MiniLang source text.
//!
//! `#` starts a comment running to the end of the line.

use std::fmt;

use super::ast::Span;
use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    Number(i64),
    KwIf,
    KwElse,
    KwWhile,
    KwFor,
    KwPrint,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Assign,
    EqEq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(name) => write!(f, "identifier {name:?}"),
            Token::Number(n) => write!(f, "number {n}"),
            Token::KwIf => write!(f, "'if'"),
            Token::KwElse => write!(f, "'else'"),
            Token::KwWhile => write!(f, "'while'"),
            Token::KwFor => write!(f, "'for'"),
            Token::KwPrint => write!(f, "'print'"),
            Token::LParen => write!(f, "'('"),
            Token::RParen => write!(f, "')'"),
            Token::LBrace => write!(f, "'{{'"),
            Token::RBrace => write!(f, "'}}'"),
            Token::LBracket => write!(f, "'['"),
            Token::RBracket => write!(f, "']'"),
            Token::Semi => write!(f, "';'"),
            Token::Comma => write!(f, "','"),
            Token::Assign => write!(f, "'='"),
            Token::EqEq => write!(f, "'=='"),
            Token::Ne => write!(f, "'!='"),
            Token::Lt => write!(f, "'<'"),
            Token::Le => write!(f, "'<='"),
            Token::Gt => write!(f, "'>'"),
            Token::Ge => write!(f, "'>='"),
            Token::Plus => write!(f, "'+'"),
            Token::Minus => write!(f, "'-'"),
            Token::Star => write!(f, "'*'"),
            Token::Slash => write!(f, "'/'"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpannedToken {
    pub token: Token,
    pub span: Span,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(source: &'a str) -> Self {
        Self {
            chars: source.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span {
            line: self.line,
            col: self.col,
        }
    }
}

/// Tokenizes `source`, returning tokens with their positions plus the
/// position just past the end of input (for end-of-input diagnostics).
pub fn lex(source: &str) -> Result<(Vec<SpannedToken>, Span), ParseError> {
    let mut lx = Lexer::new(source);
    let mut tokens = Vec::new();

    while let Some(&c) = lx.chars.peek() {
        let span = lx.span();
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                lx.bump();
            }
            '#' => {
                while let Some(&c) = lx.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    lx.bump();
                }
            }
            '0'..='9' => {
                let mut text = String::new();
                while let Some(&c) = lx.chars.peek() {
                    if c.is_ascii_digit() {
                        text.push(c);
                        lx.bump();
                    } else {
                        break;
                    }
                }
                let value = text.parse::<i64>().map_err(|_| ParseError::NumberOutOfRange {
                    line: span.line,
                    col: span.col,
                })?;
                tokens.push(SpannedToken {
                    token: Token::Number(value),
                    span,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&c) = lx.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        text.push(c);
                        lx.bump();
                    } else {
                        break;
                    }
                }
                let token = match text.as_str() {
                    "if" => Token::KwIf,
                    "else" => Token::KwElse,
                    "while" => Token::KwWhile,
                    "for" => Token::KwFor,
                    "print" => Token::KwPrint,
                    _ => Token::Ident(text),
                };
                tokens.push(SpannedToken { token, span });
            }
            _ => {
                lx.bump();
                let two = |lx: &mut Lexer, second: char, yes: Token, no: Token| {
                    if lx.chars.peek() == Some(&second) {
                        lx.bump();
                        yes
                    } else {
                        no
                    }
                };
                let token = match c {
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    '{' => Token::LBrace,
                    '}' => Token::RBrace,
                    '[' => Token::LBracket,
                    ']' => Token::RBracket,
                    ';' => Token::Semi,
                    ',' => Token::Comma,
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '*' => Token::Star,
                    '/' => Token::Slash,
                    '=' => two(&mut lx, '=', Token::EqEq, Token::Assign),
                    '<' => two(&mut lx, '=', Token::Le, Token::Lt),
                    '>' => two(&mut lx, '=', Token::Ge, Token::Gt),
                    '!' => {
                        if lx.chars.peek() == Some(&'=') {
                            lx.bump();
                            Token::Ne
                        } else {
                            return Err(ParseError::InvalidCharacter {
                                c: '!',
                                line: span.line,
                                col: span.col,
                            });
                        }
                    }
                    other => {
                        return Err(ParseError::InvalidCharacter {
                            c: other,
                            line: span.line,
                            col: span.col,
                        })
                    }
                };
                tokens.push(SpannedToken { token, span });
            }
        }
    }

    Ok((tokens, lx.span()))
}
