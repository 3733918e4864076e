use super::SyntaxError;

pub(crate) const SYMBOL_CHARS: &str = "+-*/\\^<>=~:.?@#&$";

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    /// A name, symbolic or quoted atom. `quoted` atoms are never operators.
    Name { text: String, quoted: bool },
    Var(String),
    Int(i64),
    Float(f64),
    Str(String),
    Open,
    Close,
    OpenList,
    CloseList,
    OpenCurly,
    CloseCurly,
    Comma,
    Bar,
    End,
    /// `% name: <id>` comment line.
    NameDirective(String),
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    /// Whitespace or a comment separates this token from the previous one.
    pub layout_before: bool,
}

pub(crate) fn is_symbol_char(c: char) -> bool {
    SYMBOL_CHARS.contains(c)
}

pub(crate) struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    file: &'a str,
}

impl<'a> Lexer<'a> {
    pub fn new(text: &str, file: &'a str) -> Self {
        Lexer { chars: text.chars().collect(), pos: 0, line: 1, column: 1, file }
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.file, line, column, message)
    }

    pub fn tokenize(mut self) -> Result<Vec<Token>, SyntaxError> {
        let mut out = Vec::new();
        let mut layout = true;
        loop {
            match self.peek_at(0) {
                None => break,
                Some(c) if c.is_whitespace() => {
                    self.bump();
                    layout = true;
                }
                Some('%') => {
                    let (line, column) = (self.line, self.column);
                    let mut comment = String::new();
                    while let Some(c) = self.peek_at(0) {
                        if c == '\n' {
                            break;
                        }
                        comment.push(c);
                        self.bump();
                    }
                    if let Some(name) = name_directive(&comment) {
                        out.push(Token {
                            tok: Tok::NameDirective(name),
                            line,
                            column,
                            layout_before: true,
                        });
                    }
                    layout = true;
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let (line, column) = (self.line, self.column);
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            None => return Err(self.error(line, column, "unterminated block comment")),
                            Some('*') if self.peek_at(0) == Some('/') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                        }
                    }
                    layout = true;
                }
                Some(_) => {
                    let (line, column) = (self.line, self.column);
                    let tok = self.token(line, column)?;
                    out.push(Token { tok, line, column, layout_before: layout });
                    layout = false;
                }
            }
        }
        Ok(out)
    }

    fn token(&mut self, line: usize, column: usize) -> Result<Tok, SyntaxError> {
        let c = self.peek_at(0).expect("token called at end of input");
        let tok = match c {
            '(' => {
                self.bump();
                Tok::Open
            }
            ')' => {
                self.bump();
                Tok::Close
            }
            '[' => {
                self.bump();
                Tok::OpenList
            }
            ']' => {
                self.bump();
                Tok::CloseList
            }
            '{' => {
                self.bump();
                Tok::OpenCurly
            }
            '}' => {
                self.bump();
                Tok::CloseCurly
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '|' => {
                self.bump();
                Tok::Bar
            }
            '!' | ';' => {
                self.bump();
                Tok::Name { text: c.to_string(), quoted: false }
            }
            '\'' => Tok::Name { text: self.quoted('\'', line, column)?, quoted: true },
            '"' => Tok::Str(self.quoted('"', line, column)?),
            '0'..='9' => self.number(line, column)?,
            '_' | 'A'..='Z' => Tok::Var(self.word()),
            c if c.is_alphabetic() && c.is_lowercase() => {
                Tok::Name { text: self.word(), quoted: false }
            }
            c if c.is_alphabetic() => Tok::Var(self.word()),
            '.' if self.peek_at(1).is_none_or(|n| n.is_whitespace() || n == '%') => {
                self.bump();
                Tok::End
            }
            c if is_symbol_char(c) => {
                let mut s = String::new();
                while let Some(c) = self.peek_at(0) {
                    if !is_symbol_char(c) {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Tok::Name { text: s, quoted: false }
            }
            other => return Err(self.error(line, column, format!("unexpected character {other:?}"))),
        };
        Ok(tok)
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek_at(0) {
            if c.is_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn quoted(&mut self, quote: char, line: usize, column: usize) -> Result<String, SyntaxError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error(line, column, "unterminated quoted text")),
                Some(c) if c == quote => {
                    if self.peek_at(0) == Some(quote) {
                        self.bump();
                        s.push(quote);
                    } else {
                        return Ok(s);
                    }
                }
                Some('\\') => match self.bump() {
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some('r') => s.push('\r'),
                    Some('\\') => s.push('\\'),
                    Some('\'') => s.push('\''),
                    Some('"') => s.push('"'),
                    Some('\n') => {}
                    Some(other) => {
                        return Err(self.error(self.line, self.column, format!("unknown escape \\{other}")))
                    }
                    None => return Err(self.error(line, column, "unterminated quoted text")),
                },
                Some(c) => s.push(c),
            }
        }
    }

    fn number(&mut self, line: usize, column: usize) -> Result<Tok, SyntaxError> {
        let mut s = String::new();
        while let Some(c) = self.peek_at(0).filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        let mut float = false;
        if self.peek_at(0) == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            float = true;
            s.push('.');
            self.bump();
            while let Some(c) = self.peek_at(0).filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
            }
        }
        if matches!(self.peek_at(0), Some('e' | 'E')) {
            let signed = matches!(self.peek_at(1), Some('+' | '-'));
            let digit_at = if signed { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                float = true;
                for _ in 0..digit_at {
                    s.push(self.bump().unwrap());
                }
                while let Some(c) = self.peek_at(0).filter(char::is_ascii_digit) {
                    s.push(c);
                    self.bump();
                }
            }
        }
        if float {
            s.parse()
                .map(Tok::Float)
                .map_err(|_| self.error(line, column, format!("bad number {s}")))
        } else {
            s.parse()
                .map(Tok::Int)
                .map_err(|_| self.error(line, column, format!("integer out of range: {s}")))
        }
    }
}

fn name_directive(comment: &str) -> Option<String> {
    let rest = comment.trim_start_matches('%').trim_start();
    let id = rest.strip_prefix("name:")?.trim();
    (!id.is_empty() && !id.contains(char::is_whitespace)).then(|| id.to_string())
}
