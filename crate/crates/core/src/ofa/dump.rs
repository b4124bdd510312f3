//! Versioned line-oriented text format for compiled OFAs.
//!
//! ```text
//! OFA 1
//! classes 2
//! range 61 61 0
//! range 62 62 1
//! states 9 start 0
//! finals 5
//! phi 0 2
//! phi 5 2
//! look 0 3
//! t 0 0 1 2
//! ...
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Ofa, Transition};
use crate::dfa::StateId;
use crate::syntax::{ClassMap, ClassRange};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("unsupported header {found:?}, expected \"OFA {FORMAT_VERSION}\"")]
    VersionMismatch { found: String },
    #[error("input ends before the {expected} section")]
    Truncated { expected: &'static str },
    #[error("inconsistent tables: {0}")]
    Inconsistent(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: unknown directive {directive:?}")]
    UnknownDirective { line: usize, directive: String },
}

impl Ofa {
    /// Renders the OFA in the text format. Equal OFAs render to equal bytes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "OFA {FORMAT_VERSION}");
        let _ = writeln!(out, "classes {}", self.class_count());
        for r in self.class_map.ranges() {
            let _ = writeln!(out, "range {:x} {:x} {}", r.lo, r.hi, r.class);
        }
        let _ = writeln!(out, "states {} start {}", self.state_count(), self.start);
        out.push_str("finals");
        for f in &self.finals {
            let _ = write!(out, " {f}");
        }
        out.push('\n');
        for (q, v) in &self.phi {
            let _ = writeln!(out, "phi {q} {v}");
        }
        for (q, v) in self.look.iter().enumerate() {
            let _ = writeln!(out, "look {q} {v}");
        }
        let k = self.class_count();
        for (i, t) in self.transitions.iter().enumerate() {
            let _ = writeln!(out, "t {} {} {} {}", i / k, i % k, t.next, t.theta);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Ofa, FormatError> {
        Parser::new(text).parse()
    }
}

pub fn serialize_ofa(ofa: &Ofa) -> Vec<u8> {
    ofa.to_text().into_bytes()
}

pub fn deserialize_ofa(bytes: &[u8]) -> Result<Ofa, FormatError> {
    let text = std::str::from_utf8(bytes).map_err(|e| FormatError::Malformed {
        line: 1 + bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count(),
        reason: "invalid UTF-8".into(),
    })?;
    Ofa::from_text(text)
}

const DIRECTIVES: [&str; 8] = [
    "OFA", "classes", "range", "states", "finals", "phi", "look", "t",
];

struct Parser<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lines: text.lines().enumerate().peekable(),
        }
    }

    /// Next line as (1-based line number, fields), checking the directive.
    fn next_line(&mut self) -> Option<Result<(usize, Vec<&'a str>), FormatError>> {
        let (i, line) = self.lines.next()?;
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        let line_no = i + 1;
        match fields.first() {
            None => Some(Err(malformed(line_no, "blank line"))),
            Some(d) if !DIRECTIVES.contains(d) => Some(Err(FormatError::UnknownDirective {
                line: line_no,
                directive: d.to_string(),
            })),
            Some(_) => Some(Ok((line_no, fields))),
        }
    }

    fn peek_directive(&mut self) -> Option<&'a str> {
        self.lines
            .peek()
            .and_then(|(_, l)| l.split_ascii_whitespace().next())
    }

    fn expect(
        &mut self,
        directive: &'static str,
        section: &'static str,
    ) -> Result<(usize, Vec<&'a str>), FormatError> {
        let (line, fields) = self
            .next_line()
            .ok_or(FormatError::Truncated { expected: section })??;
        if fields[0] != directive {
            return Err(malformed(
                line,
                &format!("expected {directive:?}, found {:?}", fields[0]),
            ));
        }
        Ok((line, fields))
    }

    /// All consecutive lines starting with `directive`.
    fn repeated(&mut self, directive: &str) -> Result<Vec<(usize, Vec<&'a str>)>, FormatError> {
        let mut out = Vec::new();
        while self.peek_directive() == Some(directive) {
            out.push(self.next_line().expect("peeked")?);
        }
        Ok(out)
    }

    fn parse(mut self) -> Result<Ofa, FormatError> {
        let header = self
            .lines
            .next()
            .map(|(_, l)| l)
            .ok_or(FormatError::Truncated { expected: "header" })?;
        if header.trim_end() != format!("OFA {FORMAT_VERSION}") {
            return Err(FormatError::VersionMismatch {
                found: header.to_string(),
            });
        }

        let (line, f) = self.expect("classes", "classes")?;
        let [count] = numbers::<u32, 1>(line, &f[1..])?;
        let mut ranges = Vec::new();
        for (line, f) in self.repeated("range")? {
            let [lo, hi] = hex_pair(line, &f[1..f.len().min(3)])?;
            let class = f
                .get(3)
                .ok_or_else(|| malformed(line, "missing class id"))?;
            if f.len() != 4 {
                return Err(malformed(line, "range takes three fields"));
            }
            let class = class.parse().map_err(|_| malformed(line, "bad class id"))?;
            ranges.push(ClassRange { lo, hi, class });
        }
        let class_map = ClassMap::from_ranges(count, ranges)
            .map_err(|e| FormatError::Inconsistent(e.to_string()))?;
        let k = count as usize;

        let (line, f) = self.expect("states", "states")?;
        if f.len() != 4 || f[2] != "start" {
            return Err(malformed(line, "expected \"states <n> start <id>\""));
        }
        let [n] = numbers::<usize, 1>(line, &f[1..2])?;
        let [start] = numbers::<StateId, 1>(line, &f[3..4])?;

        let (line, f) = self.expect("finals", "finals")?;
        let finals = f[1..]
            .iter()
            .map(|s| {
                s.parse::<StateId>()
                    .map_err(|_| malformed(line, "bad state id"))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut phi = BTreeMap::new();
        for (line, f) in self.repeated("phi")? {
            let [q, v] = numbers::<i64, 2>(line, &f[1..])?;
            let q = StateId::try_from(q).map_err(|_| malformed(line, "bad state id"))?;
            let v = i32::try_from(v).map_err(|_| malformed(line, "phi out of range"))?;
            if phi.insert(q, v).is_some() {
                return Err(FormatError::Inconsistent(format!("phi {q} given twice")));
            }
        }

        let mut look = Vec::new();
        for (line, f) in self.repeated("look")? {
            let [q, v] = numbers::<u32, 2>(line, &f[1..])?;
            if q as usize != look.len() {
                return Err(FormatError::Inconsistent(format!("look {q} out of order")));
            }
            look.push(v);
        }

        let total = n
            .checked_mul(k)
            .ok_or_else(|| FormatError::Inconsistent("table too large".into()))?;
        let mut transitions = Vec::with_capacity(total.min(1 << 24));
        for i in 0..total {
            let (line, f) = self.expect("t", "transitions")?;
            if f.len() != 5 {
                return Err(malformed(line, "t takes four fields"));
            }
            let [from, class, to] = numbers::<usize, 3>(line, &f[1..4])?;
            let [theta] = numbers::<i32, 1>(line, &f[4..5])?;
            if (from, class) != (i / k, i % k) {
                return Err(FormatError::Inconsistent(format!(
                    "transition ({from}, {class}) where ({}, {}) was expected",
                    i / k,
                    i % k
                )));
            }
            if to >= n {
                return Err(FormatError::Inconsistent(format!(
                    "transition to state {to} of {n}"
                )));
            }
            transitions.push(Transition {
                next: to as StateId,
                theta,
            });
        }
        if let Some(extra) = self.next_line() {
            let (line, _) = extra?;
            return Err(FormatError::Inconsistent(format!(
                "line {line}: more than {n} states of transitions"
            )));
        }
        Ofa::from_parts(class_map, start, finals, transitions, phi, look)
            .map_err(|e| FormatError::Inconsistent(e.to_string()))
    }
}

fn malformed(line: usize, reason: &str) -> FormatError {
    FormatError::Malformed {
        line,
        reason: reason.to_string(),
    }
}

fn numbers<T: std::str::FromStr, const N: usize>(
    line: usize,
    fields: &[&str],
) -> Result<[T; N], FormatError> {
    if fields.len() != N {
        return Err(malformed(
            line,
            &format!("expected {N} numbers, found {}", fields.len()),
        ));
    }
    let parsed: Vec<T> = fields
        .iter()
        .map(|s| {
            s.parse()
                .map_err(|_| malformed(line, &format!("bad number {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    parsed.try_into().map_err(|_| unreachable!())
}

fn hex_pair(line: usize, fields: &[&str]) -> Result<[u32; 2], FormatError> {
    if fields.len() != 2 {
        return Err(malformed(line, "range needs two code points"));
    }
    let hex = |s: &str| {
        if s.bytes()
            .all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
        {
            u32::from_str_radix(s, 16)
                .map_err(|_| malformed(line, &format!("bad code point {s:?}")))
        } else {
            Err(malformed(
                line,
                &format!("code points are lowercase hex, found {s:?}"),
            ))
        }
    };
    Ok([hex(fields[0])?, hex(fields[1])?])
}
