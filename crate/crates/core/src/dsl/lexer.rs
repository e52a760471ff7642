use super::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Colon,
    Semi,
    Newline,
    Eq,
    Arrow,
    FatArrow,
    Plus,
    Minus,
    Star,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

/// Newlines inside `[...]` and `(...)` are dropped, so matrices and argument
/// lists may span lines.
pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let span = |len: usize| SourceSpan {
                line: lineno + 1,
                column: i + 1,
                length: len,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if ident_start(c) {
                let s: String = chars[i..]
                    .iter()
                    .take_while(|c| ident_continue(**c))
                    .collect();
                let n = s.chars().count();
                out.push(Token {
                    tok: Tok::Ident(s),
                    span: span(n),
                });
                i += n;
                continue;
            }
            if c.is_ascii_digit() {
                let mut s: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_digit())
                    .collect();
                let mut j = i + s.len();
                if j + 1 < chars.len() && chars[j] == '/' && chars[j + 1].is_ascii_digit() {
                    let den: String = chars[j + 1..]
                        .iter()
                        .take_while(|c| c.is_ascii_digit())
                        .collect();
                    s.push('/');
                    s.push_str(&den);
                    j += 1 + den.len();
                }
                out.push(Token {
                    tok: Tok::Number(s),
                    span: span(j - i),
                });
                i = j;
                continue;
            }
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('=', Some('>')) => (Tok::FatArrow, 2),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                (':', _) => (Tok::Colon, 1),
                (';', _) => (Tok::Semi, 1),
                ('=', _) => (Tok::Eq, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                _ => {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        span(1),
                        format!("unexpected character `{c}`"),
                    ))
                }
            };
            match tok {
                Tok::LBracket | Tok::LParen => depth += 1,
                Tok::RBracket | Tok::RParen => depth = depth.saturating_sub(1),
                _ => {}
            }
            out.push(Token {
                tok,
                span: span(len),
            });
            i += len;
        }
        if depth == 0 {
            out.push(Token {
                tok: Tok::Newline,
                span: SourceSpan {
                    line: lineno + 1,
                    column: chars.len() + 1,
                    length: 0,
                },
            });
        }
    }
    let line = text.lines().count().max(1);
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan {
            line,
            column: 1,
            length: 0,
        },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_arrows() {
        assert_eq!(
            toks("x -> -3/4 y' # note"),
            vec![
                Tok::Ident("x".into()),
                Tok::Arrow,
                Tok::Minus,
                Tok::Number("3/4".into()),
                Tok::Ident("y'".into()),
                Tok::Newline,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn newlines_inside_brackets_are_dropped() {
        let t = toks("[[1,\n0]]\n");
        assert_eq!(t.iter().filter(|t| **t == Tok::Newline).count(), 1);
    }

    #[test]
    fn bad_character_has_span() {
        let e = lex("algebra a {\n  basis x @\n}").unwrap_err();
        assert_eq!(
            e.span,
            SourceSpan {
                line: 2,
                column: 11,
                length: 1
            }
        );
    }
}
