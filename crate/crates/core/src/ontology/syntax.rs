//! Tokenizer and form reader shared by the ontology and UI-config formats.
//!
//! Both formats are sequences of `Head(arg arg ...)` forms where an argument
//! is an identifier, a number, a quoted string or a nested form. `#` starts a
//! comment that runs to the end of the line.

use crate::error::{Location, ParseError};
use crate::ontology::model::Number;

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Ident(String),
    Number(Number),
    Str(String),
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub token: Token,
    pub location: Location,
}

pub struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(text: &'a str) -> Lexer<'a> {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn location(&self) -> Location {
        Location {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    pub fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let location = self.location();
            let Some(&c) = self.chars.peek() else { break };
            let token = match c {
                '(' => {
                    self.bump();
                    Token::LParen
                }
                ')' => {
                    self.bump();
                    Token::RParen
                }
                '"' => self.string(location)?,
                '+' | '-' | '0'..='9' => self.number(location)?,
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut ident = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            ident.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Token::Ident(ident)
                }
                other => return Err(ParseError::syntax(location, format!("unexpected character `{other}`"))),
            };
            out.push(Spanned { token, location });
        }
        Ok(out)
    }

    fn string(&mut self, start: Location) -> Result<Token, ParseError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(ParseError::syntax(start, "unterminated string")),
                Some('"') => return Ok(Token::Str(s)),
                Some('\\') => {
                    let esc = match self.bump() {
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        _ => return Err(ParseError::syntax(self.location(), "invalid escape sequence")),
                    };
                    s.push(esc);
                }
                Some(c) => s.push(c),
            }
        }
    }

    fn number(&mut self, start: Location) -> Result<Token, ParseError> {
        let mut text = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.' | '_') {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        parse_number(&text)
            .map(Token::Number)
            .ok_or_else(|| ParseError::syntax(start, format!("malformed number `{text}`")))
    }
}

/// Parses `-?[0-9]+(\.[0-9]+)?`, `-inf` or `+inf`.
pub fn parse_number(text: &str) -> Option<Number> {
    match text {
        "+inf" => return Some(Number::POS_INF),
        "-inf" => return Some(Number::NEG_INF),
        _ => {}
    }
    let digits = text.strip_prefix('-').unwrap_or(text);
    let (int, frac) = match digits.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (digits, None),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int) || frac.is_some_and(|f| !all_digits(f)) {
        return None;
    }
    text.parse::<f64>().ok().and_then(Number::new)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Atom(Spanned),
    Form(Form),
}

impl Node {
    pub fn location(&self) -> Location {
        match self {
            Node::Atom(s) => s.location,
            Node::Form(f) => f.location,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    pub head: String,
    pub args: Vec<Node>,
    pub location: Location,
}

impl Form {
    pub fn expect_arity(&self, n: usize) -> Result<(), ParseError> {
        if self.args.len() != n {
            return Err(ParseError::syntax(
                self.location,
                format!("{} takes {} argument(s), found {}", self.head, n, self.args.len()),
            ));
        }
        Ok(())
    }
}

/// Reads a document into its top-level forms.
pub fn read_forms(text: &str) -> Result<Vec<Form>, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut pos = 0;
    let mut forms = Vec::new();
    while pos < tokens.len() {
        match read_node(&tokens, &mut pos)? {
            Node::Form(f) => forms.push(f),
            Node::Atom(a) => {
                return Err(ParseError::syntax(a.location, "expected a parenthesized form"));
            }
        }
    }
    Ok(forms)
}

fn read_node(tokens: &[Spanned], pos: &mut usize) -> Result<Node, ParseError> {
    let tok = &tokens[*pos];
    *pos += 1;
    match &tok.token {
        Token::Ident(head) if matches!(tokens.get(*pos), Some(Spanned { token: Token::LParen, .. })) => {
            *pos += 1;
            let mut args = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => {
                        return Err(ParseError::syntax(tok.location, format!("unclosed `{head}(`")));
                    }
                    Some(Spanned { token: Token::RParen, .. }) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => args.push(read_node(tokens, pos)?),
                }
            }
            Ok(Node::Form(Form {
                head: head.clone(),
                args,
                location: tok.location,
            }))
        }
        Token::LParen => Err(ParseError::syntax(tok.location, "`(` must follow a construct name")),
        Token::RParen => Err(ParseError::syntax(tok.location, "unbalanced `)`")),
        _ => Ok(Node::Atom(tok.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("75").unwrap().value(), 75.0);
        assert_eq!(parse_number("-2.5").unwrap().value(), -2.5);
        assert_eq!(parse_number("+inf"), Some(Number::POS_INF));
        assert!(parse_number("1.").is_none());
        assert!(parse_number(".5").is_none());
        assert!(parse_number("1e5").is_none());
        assert!(parse_number("+5").is_none());
    }

    #[test]
    fn tokens_with_comments_and_locations() {
        let toks = Lexer::new("Class(A) # hi\n  \"a\\\"b\" -inf").tokenize().unwrap();
        assert_eq!(toks.len(), 6);
        assert_eq!(toks[4].token, Token::Str("a\"b".into()));
        assert_eq!(toks[4].location, Location { line: 2, column: 3 });
        assert_eq!(toks[5].token, Token::Number(Number::NEG_INF));
    }

    #[test]
    fn reader_errors() {
        assert!(read_forms("Class(A").is_err());
        assert!(read_forms("Class(A))").is_err());
        assert!(read_forms("A").is_err());
        assert!(read_forms("\"abc").is_err());
        let err = read_forms("Class(A)\n  $").unwrap_err();
        assert_eq!(err.location, Location { line: 2, column: 3 });
    }

    #[test]
    fn nested_forms() {
        let forms = read_forms("SubClassOf(A ObjectSomeValuesFrom(r B))").unwrap();
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].args.len(), 2);
        assert!(matches!(&forms[0].args[1], Node::Form(f) if f.head == "ObjectSomeValuesFrom"));
    }
}
