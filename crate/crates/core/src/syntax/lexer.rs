//! Tokens with source positions. Unicode and ASCII spellings are both accepted.

use super::SyntaxError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Pattern variable `?x`.
    PVar(String),
    Str(String),
    Int(u64),
    /// Symbolic infix operator such as `+` or `*`.
    Op(String),
    Kw(&'static str),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Semi,
    Bar,
    Equals,
    Arrow,
    DArrow,
    Equiv,
    Turnstile,
    Cons,
    Assign,
    Bang,
    Question,
    Lambda,
    Pi,
    Underscore,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier {s}"),
            Tok::PVar(s) => return write!(f, "?{s}"),
            Tok::Str(s) => return write!(f, "{s:?}"),
            Tok::Int(n) => return write!(f, "{n}"),
            Tok::Op(s) => return write!(f, "{s}"),
            Tok::Kw(k) => k,
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Bar => "|",
            Tok::Equals => "=",
            Tok::Arrow => "→",
            Tok::DArrow => "⇒",
            Tok::Equiv => "≡",
            Tok::Turnstile => "⊢",
            Tok::Cons => "::",
            Tok::Assign => ":=",
            Tok::Bang => "!",
            Tok::Question => "?",
            Tok::Lambda => "λ",
            Tok::Pi => "Π",
            Tok::Underscore => "_",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

pub const KEYWORDS: &[&str] = &[
    "let", "rec", "and", "in", "match", "with", "end", "fun", "handle", "handler", "yield", "constant",
    "operation", "do", "dynamic", "now", "assume", "where", "Type", "refl", "val", "mltype", "of",
    "verbosity", "judgment", "include",
];

fn keyword(s: &str) -> Option<&'static str> {
    KEYWORDS.iter().copied().find(|k| *k == s)
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn op_char(c: char) -> bool {
    matches!(c, '+' | '-' | '*' | '/' | '^' | '&' | '%' | '~' | '<' | '>' | '×' | '·' | '∘' | '⊕' | '⊗' | '∧' | '∨')
}

pub fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, SyntaxError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut col) = (1u32, 1u32);
    let advance = |i: &mut usize, line: &mut u32, col: &mut u32| {
        if chars[*i].1 == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    let at = |i: usize| chars.get(i).map(|p| p.1);
    let offset = |i: usize| chars.get(i).map(|p| p.0).unwrap_or(src.len());
    while i < chars.len() {
        let c = chars[i].1;
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '(' && at(i + 1) == Some('*') {
            let (sl, sc) = (line, col);
            let mut depth = 0;
            loop {
                match (at(i), at(i + 1)) {
                    (Some('('), Some('*')) => {
                        depth += 1;
                        advance(&mut i, &mut line, &mut col);
                        advance(&mut i, &mut line, &mut col);
                    }
                    (Some('*'), Some(')')) => {
                        depth -= 1;
                        advance(&mut i, &mut line, &mut col);
                        advance(&mut i, &mut line, &mut col);
                        if depth == 0 {
                            break;
                        }
                    }
                    (Some(_), _) => advance(&mut i, &mut line, &mut col),
                    (None, _) => {
                        return Err(SyntaxError::Lex { line: sl, col: sc, msg: "unterminated comment".into() })
                    }
                }
            }
            continue;
        }
        if c == '-' && at(i + 1) == Some('-') {
            while at(i).is_some_and(|c| c != '\n') {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        let start = i;
        let (sl, sc) = (line, col);
        let lex_err = |msg: String| SyntaxError::Lex { line: sl, col: sc, msg };
        let two = |a: char, b: char| c == a && at(i + 1) == Some(b);
        let tok = if ident_start(c) {
            while at(i).is_some_and(ident_char) {
                advance(&mut i, &mut line, &mut col);
            }
            let s: String = chars[start..i].iter().map(|p| p.1).collect();
            match s.as_str() {
                "_" => Tok::Underscore,
                "λ" | "lambda" => Tok::Lambda,
                "Π" | "forall" => Tok::Pi,
                _ => match keyword(&s) {
                    Some(k) => Tok::Kw(k),
                    None => Tok::Ident(s),
                },
            }
        } else if c.is_ascii_digit() {
            while at(i).is_some_and(|c| c.is_ascii_digit()) {
                advance(&mut i, &mut line, &mut col);
            }
            let s: String = chars[start..i].iter().map(|p| p.1).collect();
            Tok::Int(s.parse().map_err(|_| lex_err("number too large".into()))?)
        } else if c == '?' {
            advance(&mut i, &mut line, &mut col);
            if at(i).is_some_and(ident_start) {
                let s0 = i;
                while at(i).is_some_and(ident_char) {
                    advance(&mut i, &mut line, &mut col);
                }
                Tok::PVar(chars[s0..i].iter().map(|p| p.1).collect())
            } else {
                Tok::Question
            }
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col);
            let mut s = String::new();
            loop {
                match at(i) {
                    None => return Err(lex_err("unterminated string".into())),
                    Some('"') => {
                        advance(&mut i, &mut line, &mut col);
                        break;
                    }
                    Some('\\') => {
                        advance(&mut i, &mut line, &mut col);
                        match at(i) {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(lex_err("bad escape in string".into())),
                        }
                        advance(&mut i, &mut line, &mut col);
                    }
                    Some(ch) => {
                        s.push(ch);
                        advance(&mut i, &mut line, &mut col);
                    }
                }
            }
            Tok::Str(s)
        } else if c == '#' {
            advance(&mut i, &mut line, &mut col);
            let s0 = i;
            while at(i).is_some_and(ident_char) {
                advance(&mut i, &mut line, &mut col);
            }
            let w: String = chars[s0..i].iter().map(|p| p.1).collect();
            if w == "include" {
                Tok::Kw("include")
            } else {
                return Err(lex_err(format!("unknown directive #{w}")));
            }
        } else {
            let (tok, len) = if two('-', '>') {
                (Tok::Arrow, 2)
            } else if two('=', '>') {
                (Tok::DArrow, 2)
            } else if two('=', '=') {
                (Tok::Equiv, 2)
            } else if two('|', '-') {
                (Tok::Turnstile, 2)
            } else if two(':', ':') {
                (Tok::Cons, 2)
            } else if two(':', '=') {
                (Tok::Assign, 2)
            } else {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    '|' => Tok::Bar,
                    '=' => Tok::Equals,
                    '→' => Tok::Arrow,
                    '⇒' => Tok::DArrow,
                    '≡' => Tok::Equiv,
                    '⊢' => Tok::Turnstile,
                    '!' => Tok::Bang,
                    '∏' => Tok::Pi,
                    _ if op_char(c) => {
                        let s0 = i;
                        let mut j = i;
                        while at(j).is_some_and(op_char) && !(at(j) == Some('-') && at(j + 1) == Some('>')) {
                            j += 1;
                        }
                        let s: String = chars[s0..j].iter().map(|p| p.1).collect();
                        let n = j - s0;
                        for _ in 0..n {
                            advance(&mut i, &mut line, &mut col);
                        }
                        out.push((Tok::Op(s), Span { start: offset(start), end: offset(i), line: sl, col: sc }));
                        continue;
                    }
                    other => return Err(lex_err(format!("unexpected character {other:?}"))),
                };
                (t, 1)
            };
            for _ in 0..len {
                advance(&mut i, &mut line, &mut col);
            }
            tok
        };
        out.push((tok, Span { start: offset(start), end: offset(i), line: sl, col: sc }));
    }
    out.push((Tok::Eof, Span { start: src.len(), end: src.len(), line, col }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|p| p.0).filter(|t| *t != Tok::Eof).collect()
    }

    #[test]
    fn lambda_binder() {
        assert_eq!(
            toks("λ (x : A), x"),
            vec![
                Tok::Lambda,
                Tok::LParen,
                Tok::Ident("x".into()),
                Tok::Colon,
                Tok::Ident("A".into()),
                Tok::RParen,
                Tok::Comma,
                Tok::Ident("x".into())
            ]
        );
    }

    #[test]
    fn pattern_variables() {
        assert_eq!(toks("⊢ ?g ?y"), vec![Tok::Turnstile, Tok::PVar("g".into()), Tok::PVar("y".into())]);
        assert_eq!(toks("?"), vec![Tok::Question]);
    }

    #[test]
    fn ascii_spellings() {
        assert_eq!(toks("lambda forall -> => == |-"), toks("λ Π → ⇒ ≡ ⊢"));
    }

    #[test]
    fn operator_section_and_comment() {
        assert_eq!(toks("( * ) (* note *) ( + )"), vec![
            Tok::LParen,
            Tok::Op("*".into()),
            Tok::RParen,
            Tok::LParen,
            Tok::Op("+".into()),
            Tok::RParen
        ]);
    }

    #[test]
    fn rejects_at_signs() {
        assert!(tokenize("@@").is_err());
    }

    #[test]
    fn unicode_identifiers() {
        assert_eq!(toks("π₁_β Σ_η ζ x'"), vec![
            Tok::Ident("π₁_β".into()),
            Tok::Ident("Σ_η".into()),
            Tok::Ident("ζ".into()),
            Tok::Ident("x'".into())
        ]);
    }
}
