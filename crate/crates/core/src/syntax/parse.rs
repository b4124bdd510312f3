//! Recursive-descent parser for the pattern language.
//!
//! ```text
//! alt    := concat ('|' concat)*
//! concat := repeat+
//! repeat := atom ('*' | '+' | '?')*
//! atom   := '(' alt ')' | '[' '^'? item+ ']' | '.' | '\' escape | literal
//! item   := cp ('-' cp)?
//! ```
//!
//! Escapes: `\n`, `\t`, `\r`, `\uXXXX`, `\u{H..}`, `\e` (the empty string,
//! outside classes only) and `\` before any ASCII punctuation.

use std::fmt;

use super::ast::{Ast, CharSet, CodeRange, MAX_CODE_POINT};

const NEST_LIMIT: usize = 250;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyPattern,
    EmptyAlternative,
    UnclosedGroup,
    UnopenedGroup,
    UnclosedClass,
    EmptyClass,
    InvalidRange,
    MissingRepeatOperand,
    UnknownEscape(char),
    InvalidCodePoint,
    TrailingBackslash,
    UnexpectedCharacter(char),
    NestTooDeep,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::EmptyPattern => {
                f.write_str("empty pattern (use \\e for the empty string)")
            }
            ParseErrorKind::EmptyAlternative => f.write_str("empty alternative"),
            ParseErrorKind::UnclosedGroup => f.write_str("unclosed group"),
            ParseErrorKind::UnopenedGroup => f.write_str("unopened group"),
            ParseErrorKind::UnclosedClass => f.write_str("unclosed character class"),
            ParseErrorKind::EmptyClass => f.write_str("character class matches nothing"),
            ParseErrorKind::InvalidRange => f.write_str("invalid class range"),
            ParseErrorKind::MissingRepeatOperand => {
                f.write_str("repetition operator missing operand")
            }
            ParseErrorKind::UnknownEscape(c) => write!(f, "unknown escape \\{c}"),
            ParseErrorKind::InvalidCodePoint => f.write_str("invalid \\u escape"),
            ParseErrorKind::TrailingBackslash => f.write_str("trailing backslash"),
            ParseErrorKind::UnexpectedCharacter(c) => write!(f, "unexpected {c:?}"),
            ParseErrorKind::NestTooDeep => f.write_str("groups nested too deeply"),
        }
    }
}

/// Syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

/// Parses pattern text into an [`Ast`].
pub fn parse_pattern(text: &str) -> Result<Ast, ParseError> {
    if text.is_empty() {
        return Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::EmptyPattern,
        });
    }
    let mut p = Parser {
        text,
        pos: 0,
        depth: 0,
    };
    let ast = p.alternation()?;
    match p.peek() {
        None => Ok(ast),
        Some(')') => Err(p.error(ParseErrorKind::UnopenedGroup)),
        Some(c) => Err(p.error(ParseErrorKind::UnexpectedCharacter(c))),
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn error_at(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn alternation(&mut self) -> Result<Ast, ParseError> {
        let mut branches = vec![self.concatenation()?];
        while self.peek() == Some('|') {
            self.bump();
            branches.push(self.concatenation()?);
        }
        Ok(Ast::alt(branches))
    }

    fn concatenation(&mut self) -> Result<Ast, ParseError> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.repetition()?);
        }
        if items.is_empty() {
            return Err(self.error(ParseErrorKind::EmptyAlternative));
        }
        Ok(Ast::concat(items))
    }

    fn repetition(&mut self) -> Result<Ast, ParseError> {
        let mut ast = self.atom()?;
        while let Some(op) = self.peek() {
            ast = match op {
                '*' => Ast::star(ast),
                '+' => Ast::plus(ast),
                '?' => Ast::Alt(vec![ast, Ast::Epsilon]),
                _ => break,
            };
            self.bump();
        }
        Ok(ast)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let start = self.pos;
        let c = self.bump().expect("atom called at end of input");
        match c {
            '(' => {
                self.depth += 1;
                if self.depth > NEST_LIMIT {
                    return Err(self.error_at(start, ParseErrorKind::NestTooDeep));
                }
                let inner = self.alternation()?;
                if self.bump() != Some(')') {
                    return Err(self.error_at(start, ParseErrorKind::UnclosedGroup));
                }
                self.depth -= 1;
                Ok(inner)
            }
            '[' => self.class(start).map(Ast::Set),
            '.' => Ok(Ast::Set(CharSet::any_but_newline())),
            '*' | '+' | '?' => Err(self.error_at(start, ParseErrorKind::MissingRepeatOperand)),
            ']' => Err(self.error_at(start, ParseErrorKind::UnexpectedCharacter(']'))),
            '\\' => {
                if self.peek() == Some('e') {
                    self.bump();
                    return Ok(Ast::Epsilon);
                }
                let cp = self.escape(start)?;
                Ok(Ast::Set(CharSet::from_ranges([CodeRange::single(cp)])))
            }
            c => Ok(Ast::literal(c)),
        }
    }

    /// Parses the escape after a consumed backslash, returning a code point.
    fn escape(&mut self, start: usize) -> Result<u32, ParseError> {
        let Some(c) = self.bump() else {
            return Err(self.error_at(start, ParseErrorKind::TrailingBackslash));
        };
        match c {
            'n' => Ok('\n' as u32),
            't' => Ok('\t' as u32),
            'r' => Ok('\r' as u32),
            'u' => self.unicode_escape(start),
            c if c.is_ascii_punctuation() || c == ' ' => Ok(c as u32),
            c => Err(self.error_at(start, ParseErrorKind::UnknownEscape(c))),
        }
    }

    fn unicode_escape(&mut self, start: usize) -> Result<u32, ParseError> {
        let invalid = || ParseError {
            offset: start,
            kind: ParseErrorKind::InvalidCodePoint,
        };
        let digits = if self.peek() == Some('{') {
            self.bump();
            let rest = &self.text[self.pos..];
            let end = rest.find('}').ok_or_else(invalid)?;
            let digits = &rest[..end];
            if digits.is_empty() || digits.len() > 6 {
                return Err(invalid());
            }
            self.pos += end + 1;
            digits
        } else {
            let rest = &self.text[self.pos..];
            let digits = rest.get(..4).ok_or_else(invalid)?;
            self.pos += 4;
            digits
        };
        if !digits.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(invalid());
        }
        let cp = u32::from_str_radix(digits, 16).map_err(|_| invalid())?;
        if cp > MAX_CODE_POINT {
            return Err(invalid());
        }
        Ok(cp)
    }

    fn class(&mut self, start: usize) -> Result<CharSet, ParseError> {
        let negated = if self.peek() == Some('^') {
            self.bump();
            true
        } else {
            false
        };
        let mut ranges = Vec::new();
        loop {
            let item_start = self.pos;
            let lo = match self.bump() {
                None => return Err(self.error_at(start, ParseErrorKind::UnclosedClass)),
                Some(']') if !ranges.is_empty() => break,
                Some(']') => return Err(self.error_at(start, ParseErrorKind::EmptyClass)),
                Some('\\') => self.escape(item_start)?,
                Some(c) => c as u32,
            };
            // `-` followed by `]` is a literal dash
            let is_range = self.peek() == Some('-') && !self.text[self.pos + 1..].starts_with(']');
            let hi = if is_range {
                self.bump();
                match self.bump() {
                    None => return Err(self.error_at(start, ParseErrorKind::UnclosedClass)),
                    Some('\\') => self.escape(self.pos - 1)?,
                    Some(c) => c as u32,
                }
            } else {
                lo
            };
            if hi < lo {
                return Err(self.error_at(item_start, ParseErrorKind::InvalidRange));
            }
            ranges.push(CodeRange::new(lo, hi));
        }
        let mut set = CharSet::from_ranges(ranges);
        if negated {
            set = set.complement();
        }
        if set.is_empty() {
            return Err(self.error_at(start, ParseErrorKind::EmptyClass));
        }
        Ok(set)
    }
}
