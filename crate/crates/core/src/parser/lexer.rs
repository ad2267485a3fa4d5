//! Tokenizer shared by the Turtle, rule and command-line triple grammars.

use super::{Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// `<...>`, unresolved.
    Iri(String),
    /// `prefix:local`; `prefix` may be empty.
    PName(String, String),
    /// `_:label`
    Blank(String),
    Str(String),
    Integer(String),
    Decimal(String),
    /// Bare word without a colon: `a`, `rule`, `PREFIX`, `true`, ...
    Word(String),
    /// `@prefix`, `@base`, or a language tag.
    At(String),
    /// `?name`
    Var(String),
    Dot,
    Semi,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Arrow,
    Carets,
    /// `:` directly after a string, as in `rule "name":`.
    Colon,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Iri(i) => format!("<{i}>"),
            Tok::PName(p, l) => format!("{p}:{l}"),
            Tok::Blank(b) => format!("_:{b}"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::Integer(n) | Tok::Decimal(n) => n.clone(),
            Tok::Word(w) => format!("'{w}'"),
            Tok::At(w) => format!("'@{w}'"),
            Tok::Var(v) => format!("?{v}"),
            Tok::Dot => "'.'".into(),
            Tok::Semi => "';'".into(),
            Tok::Comma => "','".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Carets => "'^^'".into(),
            Tok::Colon => "':'".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn is_name_start(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Consumes a run of name characters, never ending on a `.`.
    fn name(&mut self) -> String {
        let mut end = self.pos;
        let mut last_ok = self.pos;
        while end < self.chars.len() && is_name_char(self.chars[end]) {
            end += 1;
            if self.chars[end - 1] != '.' {
                last_ok = end;
            }
        }
        let s: String = self.chars[self.pos..last_ok].iter().collect();
        while self.pos < last_ok {
            self.bump();
        }
        s
    }
}

/// Splits `text` into tokens. Lexical errors are reported and the offending
/// character skipped, so one bad character does not hide later problems.
pub(crate) fn tokenize(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        let (line, column, start) = (cur.line, cur.col, cur.pos);
        let span_to = |cur: &Cursor| SourceSpan::new(line, column, (cur.pos - start).max(1));
        let tok = match c {
            '.' => single(&mut cur, Tok::Dot),
            ';' => single(&mut cur, Tok::Semi),
            ',' => single(&mut cur, Tok::Comma),
            '[' => single(&mut cur, Tok::LBracket),
            ']' => single(&mut cur, Tok::RBracket),
            '(' => single(&mut cur, Tok::LParen),
            ':' if matches!(tokens.last(), Some(Token { tok: Tok::Str(_), .. })) => {
                single(&mut cur, Tok::Colon)
            }
            ')' => single(&mut cur, Tok::RParen),
            '^' if cur.peek_at(1) == Some('^') => {
                cur.bump();
                cur.bump();
                Some(Tok::Carets)
            }
            '-' if cur.peek_at(1) == Some('>') => {
                cur.bump();
                cur.bump();
                Some(Tok::Arrow)
            }
            '<' => {
                cur.bump();
                let mut iri = String::new();
                let mut closed = false;
                while let Some(c) = cur.peek() {
                    if c == '>' {
                        cur.bump();
                        closed = true;
                        break;
                    }
                    if c == '\n' || c.is_whitespace() || c == '<' || c == '"' {
                        break;
                    }
                    iri.push(c);
                    cur.bump();
                }
                if closed {
                    Some(Tok::Iri(iri))
                } else {
                    diags.push(Diagnostic::error("unterminated IRI reference", span_to(&cur)));
                    None
                }
            }
            '"' => match string(&mut cur) {
                Ok(s) => Some(Tok::Str(s)),
                Err(msg) => {
                    diags.push(Diagnostic::error(msg, span_to(&cur)));
                    None
                }
            },
            '@' => {
                cur.bump();
                let w = cur.name();
                if w.is_empty() {
                    diags.push(Diagnostic::error("stray '@'", span_to(&cur)));
                    None
                } else {
                    Some(Tok::At(w))
                }
            }
            '?' => {
                cur.bump();
                let w = cur.name();
                if w.is_empty() {
                    diags.push(Diagnostic::error("expected variable name after '?'", span_to(&cur)));
                    None
                } else {
                    Some(Tok::Var(w))
                }
            }
            '_' if cur.peek_at(1) == Some(':') => {
                cur.bump();
                cur.bump();
                let label = cur.name();
                if label.is_empty() {
                    diags.push(Diagnostic::error("empty blank node label", span_to(&cur)));
                    None
                } else {
                    Some(Tok::Blank(label))
                }
            }
            c if c.is_ascii_digit()
                || ((c == '-' || c == '+') && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit())) =>
            {
                Some(number(&mut cur))
            }
            c if is_name_start(c) || c == ':' => {
                let prefix = if c == ':' { String::new() } else { cur.name() };
                if cur.peek() == Some(':') {
                    cur.bump();
                    let local = if cur.peek().is_some_and(is_name_start) {
                        local_name(&mut cur)
                    } else {
                        String::new()
                    };
                    Some(Tok::PName(prefix, local))
                } else {
                    Some(Tok::Word(prefix))
                }
            }
            other => {
                cur.bump();
                diags.push(Diagnostic::error(
                    format!("unexpected character {other:?}"),
                    span_to(&cur),
                ));
                None
            }
        };
        if let Some(tok) = tok {
            tokens.push(Token {
                tok,
                span: span_to(&cur),
            });
        }
    }
    (tokens, diags)
}

fn single(cur: &mut Cursor, tok: Tok) -> Option<Tok> {
    cur.bump();
    Some(tok)
}

/// Local part of a prefixed name; may itself contain colons.
fn local_name(cur: &mut Cursor) -> String {
    let mut out = cur.name();
    while cur.peek() == Some(':') && cur.peek_at(1).is_some_and(is_name_char) {
        cur.bump();
        out.push(':');
        out.push_str(&cur.name());
    }
    out
}

fn number(cur: &mut Cursor) -> Tok {
    let mut s = String::new();
    if let Some(c @ ('-' | '+')) = cur.peek() {
        s.push(c);
        cur.bump();
    }
    while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
        s.push(c);
        cur.bump();
    }
    if cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
        s.push('.');
        cur.bump();
        while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
            s.push(c);
            cur.bump();
        }
        Tok::Decimal(s)
    } else {
        Tok::Integer(s)
    }
}

fn string(cur: &mut Cursor) -> Result<String, String> {
    cur.bump();
    let mut out = String::new();
    loop {
        match cur.bump() {
            None | Some('\n') => return Err("unterminated string literal".into()),
            Some('"') => return Ok(out),
            Some('\\') => match cur.bump() {
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                Some('t') => out.push('\t'),
                Some('"') => out.push('"'),
                Some('\'') => out.push('\''),
                Some('\\') => out.push('\\'),
                Some('u') => {
                    let hex: String = (0..4).filter_map(|_| cur.bump()).collect();
                    let ch = u32::from_str_radix(&hex, 16)
                        .ok()
                        .and_then(char::from_u32)
                        .ok_or_else(|| format!("invalid \\u escape {hex:?}"))?;
                    out.push(ch);
                }
                other => return Err(format!("invalid escape sequence \\{}", other.unwrap_or(' '))),
            },
            Some(c) => out.push(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(text: &str) -> Vec<Tok> {
        let (t, d) = tokenize(text);
        assert!(d.is_empty(), "{d:?}");
        t.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn prefixed_names_do_not_swallow_the_final_dot() {
        assert_eq!(
            toks("ex:a ex:b ex:c."),
            vec![
                Tok::PName("ex".into(), "a".into()),
                Tok::PName("ex".into(), "b".into()),
                Tok::PName("ex".into(), "c".into()),
                Tok::Dot
            ]
        );
    }

    #[test]
    fn numbers_strings_and_rule_tokens() {
        assert_eq!(
            toks(r#"-3 2.5 7. "a\"b":ex:c ?x -> :"#),
            vec![
                Tok::Integer("-3".into()),
                Tok::Decimal("2.5".into()),
                Tok::Integer("7".into()),
                Tok::Dot,
                Tok::Str("a\"b".into()),
                Tok::Colon,
                Tok::PName("ex".into(), "c".into()),
                Tok::Var("x".into()),
                Tok::Arrow,
                Tok::PName(String::new(), String::new()),
            ]
        );
    }

    #[test]
    fn spans_are_one_based() {
        let (t, _) = tokenize("\n  ex:a");
        assert_eq!(t[0].span, SourceSpan::new(2, 3, 4));
    }

    #[test]
    fn bad_character_is_reported_and_skipped() {
        let (t, d) = tokenize("ex:a $ ex:b");
        assert_eq!(t.len(), 2);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].span.column, 6);
    }
}
