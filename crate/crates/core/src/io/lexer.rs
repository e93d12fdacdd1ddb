//! Tokenizer for the textual system and pattern formats.
//!
//! Tokens carry byte offsets plus 1-based line and column so parse
//! diagnostics can point into the input. Comments run from `#` to the end
//! of the line. Identifiers admit primes (`ya'`), matching the names the
//! printer generates.

use std::fmt;

/// A half-open byte range in the source text, with the 1-based line and
/// column of its first byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// `[A-Za-z_][A-Za-z0-9_']*` — includes keywords and word operators,
    /// which the parser recognizes by spelling.
    Ident(String),
    /// An unsigned integer literal; the parser folds a preceding minus.
    Int(i128),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Star,
    Plus,
    Minus,
    Arrow,    // ->
    FatArrow, // =>, both the declaration result arrow and implication
    Iff,      // <=>
    And,      // /\
    Or,       // \/
    Eq,       // =
    Neq,      // !=
    Le,       // <=
    Lt,       // <
    Ge,       // >=
    Gt,       // >
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "`{}`", s),
            TokenKind::Int(n) => write!(f, "`{}`", n),
            TokenKind::LParen => write!(f, "`(`"),
            TokenKind::RParen => write!(f, "`)`"),
            TokenKind::LBracket => write!(f, "`[`"),
            TokenKind::RBracket => write!(f, "`]`"),
            TokenKind::Comma => write!(f, "`,`"),
            TokenKind::Semi => write!(f, "`;`"),
            TokenKind::Colon => write!(f, "`:`"),
            TokenKind::Star => write!(f, "`*`"),
            TokenKind::Plus => write!(f, "`+`"),
            TokenKind::Minus => write!(f, "`-`"),
            TokenKind::Arrow => write!(f, "`->`"),
            TokenKind::FatArrow => write!(f, "`=>`"),
            TokenKind::Iff => write!(f, "`<=>`"),
            TokenKind::And => write!(f, "`/\\`"),
            TokenKind::Or => write!(f, "`\\/`"),
            TokenKind::Eq => write!(f, "`=`"),
            TokenKind::Neq => write!(f, "`!=`"),
            TokenKind::Le => write!(f, "`<=`"),
            TokenKind::Lt => write!(f, "`<`"),
            TokenKind::Ge => write!(f, "`>=`"),
            TokenKind::Gt => write!(f, "`>`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

/// A lexical error: an unexpected character or an out-of-range literal.
#[derive(Debug, Clone)]
pub struct LexError {
    pub message: String,
    pub span: SourceSpan,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, column: 1 }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn here(&self) -> (usize, usize, usize) {
        (self.pos, self.line, self.column)
    }

    fn span_from(&self, start: (usize, usize, usize)) -> SourceSpan {
        SourceSpan { line: start.1, column: start.2, start: start.0, end: self.pos }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.bump();
            } else if c == b'#' {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Option<Result<Token, LexError>> {
        self.skip_trivia();
        let start = self.here();
        let c = self.peek()?;
        let kind = match c {
            b'(' => {
                self.bump();
                TokenKind::LParen
            }
            b')' => {
                self.bump();
                TokenKind::RParen
            }
            b'[' => {
                self.bump();
                TokenKind::LBracket
            }
            b']' => {
                self.bump();
                TokenKind::RBracket
            }
            b',' => {
                self.bump();
                TokenKind::Comma
            }
            b';' => {
                self.bump();
                TokenKind::Semi
            }
            b':' => {
                self.bump();
                TokenKind::Colon
            }
            b'*' => {
                self.bump();
                TokenKind::Star
            }
            b'+' => {
                self.bump();
                TokenKind::Plus
            }
            b'-' => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    TokenKind::Arrow
                } else {
                    TokenKind::Minus
                }
            }
            b'=' => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    TokenKind::FatArrow
                } else {
                    TokenKind::Eq
                }
            }
            b'!' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    TokenKind::Neq
                } else {
                    return Some(Err(LexError {
                        message: "unexpected character `!`; disequality is spelled `!=`".into(),
                        span: self.span_from(start),
                    }));
                }
            }
            b'<' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        TokenKind::Iff
                    } else {
                        TokenKind::Le
                    }
                } else {
                    TokenKind::Lt
                }
            }
            b'>' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    TokenKind::Ge
                } else {
                    TokenKind::Gt
                }
            }
            b'/' => {
                if self.peek2() == Some(b'\\') {
                    self.bump();
                    self.bump();
                    TokenKind::And
                } else {
                    self.bump();
                    return Some(Err(LexError {
                        message: "unexpected character `/`; conjunction is spelled `/\\`".into(),
                        span: self.span_from(start),
                    }));
                }
            }
            b'\\' => {
                if self.peek2() == Some(b'/') {
                    self.bump();
                    self.bump();
                    TokenKind::Or
                } else {
                    self.bump();
                    return Some(Err(LexError {
                        message: "unexpected character `\\`; disjunction is spelled `\\/`".into(),
                        span: self.span_from(start),
                    }));
                }
            }
            b'0'..=b'9' => {
                let mut digits = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() {
                        digits.push(c as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                match digits.parse::<i128>() {
                    Ok(n) => TokenKind::Int(n),
                    Err(_) => {
                        return Some(Err(LexError {
                            message: format!("integer literal `{}` is out of range", digits),
                            span: self.span_from(start),
                        }));
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut name = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                        name.push(c as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                TokenKind::Ident(name)
            }
            other => {
                self.bump();
                return Some(Err(LexError {
                    message: format!("unexpected character `{}`", other as char),
                    span: self.span_from(start),
                }));
            }
        };
        Some(Ok(Token { kind, span: self.span_from(start) }))
    }
}

/// Tokenize the whole input. Stops at the first lexical error.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut lexer = Lexer::new(src);
    let mut out = Vec::new();
    while let Some(tok) = lexer.next_token() {
        out.push(tok?);
    }
    Ok(out)
}
