//! Tokenizer for the ASCII concrete syntax.

use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    // punctuation and operators
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    ColonEq, // := in substitution text
    Tilde,
    Arrow,    // ->
    DArrow,   // <->
    Amp,
    Pipe,
    EqEq,
    Lt,
    Le,
    Star,
    Plus,
    Quote(String), // "..." quoted payload in substitution text
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

pub fn lex(input: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let pos = i;
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '[' => {
                i += 1;
                Tok::LBracket
            }
            ']' => {
                i += 1;
                Tok::RBracket
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            '~' => {
                i += 1;
                Tok::Tilde
            }
            '&' => {
                i += 1;
                Tok::Amp
            }
            '|' => {
                i += 1;
                Tok::Pipe
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            ':' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 2;
                    Tok::ColonEq
                } else {
                    i += 1;
                    Tok::Colon
                }
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Arrow
                } else {
                    return Err(SyntaxError::Syntax {
                        pos,
                        msg: "expected `->`".into(),
                    });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    i += 3;
                    Tok::DArrow
                } else if bytes.get(i + 1) == Some(&b'=') {
                    i += 2;
                    Tok::Le
                } else {
                    i += 1;
                    Tok::Lt
                }
            }
            '=' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 2;
                    Tok::EqEq
                } else {
                    return Err(SyntaxError::Syntax {
                        pos,
                        msg: "expected `==`".into(),
                    });
                }
            }
            '"' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j] != b'"' {
                    j += 1;
                }
                if j >= bytes.len() {
                    return Err(SyntaxError::Syntax {
                        pos,
                        msg: "unterminated quote".into(),
                    });
                }
                i = j + 1;
                Tok::Quote(input[start..j].to_string())
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                Tok::Ident(input[start..i].to_string())
            }
            other => {
                return Err(SyntaxError::Syntax {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Spanned { tok, pos });
    }
    Ok(out)
}
