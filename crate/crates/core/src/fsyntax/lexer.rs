use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Lambda,
    BigLambda,
    Forall,
    Colon,
    Dot,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Arrow,
    Lolli,
    FatArrow,
    Bang,
    Dollar,
    Tilde,
    Caret,
    Turnstile,
    LBrace,
    RBrace,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Geq,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Lambda => "`\\`".into(),
            Tok::BigLambda => "`/\\`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Lolli => "`-o`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Dollar => "`$`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Geq => "`>=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokenizer shared by the F-term, pseudo-term and DLAL-type parsers.
/// `--` and `#` start line comments. A few Unicode spellings are accepted
/// (`λ`, `Λ`, `∀`, `→`, `⊸`, `⇒`, `§`).
pub fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let next = chars.get(i + 1).copied();
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned { tok, line: start.0, col: start.1 });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '-' if next == Some('-') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '-' if next == Some('>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '-' if next == Some('o') && !chars.get(i + 2).copied().is_some_and(is_ident_char) => {
                push(Tok::Lolli, 2, &mut i, &mut col)
            }
            '-' if next.is_some_and(|d| d.is_ascii_digit()) => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let n =
                    text.parse().map_err(|_| ParseError::new(line, col, format!("integer out of range `{text}`")))?;
                push(Tok::Int(n), j - i, &mut i, &mut col);
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '=' if next == Some('>') => push(Tok::FatArrow, 2, &mut i, &mut col),
            '>' if next == Some('=') => push(Tok::Geq, 2, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            '|' if next == Some('-') => push(Tok::Turnstile, 2, &mut i, &mut col),
            '/' if next == Some('\\') => push(Tok::BigLambda, 2, &mut i, &mut col),
            '/' => push(Tok::Slash, 1, &mut i, &mut col),
            '\\' | 'λ' => push(Tok::Lambda, 1, &mut i, &mut col),
            'Λ' => push(Tok::BigLambda, 1, &mut i, &mut col),
            '∀' => push(Tok::Forall, 1, &mut i, &mut col),
            '→' => push(Tok::Arrow, 1, &mut i, &mut col),
            '⊸' => push(Tok::Lolli, 1, &mut i, &mut col),
            '⇒' => push(Tok::FatArrow, 1, &mut i, &mut col),
            '§' | '$' => push(Tok::Dollar, 1, &mut i, &mut col),
            ':' => push(Tok::Colon, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '[' => push(Tok::LBracket, 1, &mut i, &mut col),
            ']' => push(Tok::RBracket, 1, &mut i, &mut col),
            '!' => push(Tok::Bang, 1, &mut i, &mut col),
            '~' => push(Tok::Tilde, 1, &mut i, &mut col),
            '^' => push(Tok::Caret, 1, &mut i, &mut col),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let n =
                    text.parse().map_err(|_| ParseError::new(line, col, format!("integer out of range `{text}`")))?;
                push(Tok::Int(n), j - i, &mut i, &mut col);
            }
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let tok = if text == "forall" { Tok::Forall } else { Tok::Ident(text) };
                push(tok, j - i, &mut i, &mut col);
            }
            other => {
                return Err(ParseError::new(line, col, format!("unexpected character `{other}`")));
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Cursor over a token stream.
pub struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Spanned>) -> Self {
        Self { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    pub fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub fn unexpected(&self, expected: &str) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, format!("expected {expected}, found {}", self.peek().describe()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_arrows() {
        let toks: Vec<Tok> = tokenize("a -> b -- trailing\n-o => $ ~ -3").unwrap().into_iter().map(|s| s.tok).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("a".into()),
                Tok::Arrow,
                Tok::Ident("b".into()),
                Tok::Lolli,
                Tok::FatArrow,
                Tok::Dollar,
                Tok::Tilde,
                Tok::Int(-3),
                Tok::Eof
            ]
        );
    }
}
