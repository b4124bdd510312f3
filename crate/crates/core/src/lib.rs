//! Regular-expression matching with offsetting finite automata.
//!
//! A pattern is compiled to a minimal DFA, every DFA state gets a trie that
//! reads a few characters ahead right to left, and the linked tries form an
//! [`Ofa`]. Scanning with the OFA reports the same end positions as a plain
//! forward DFA scan while skipping characters the tries never need.
//!
//! ```
//! use ofa_core::{compile, CompileOptions};
//!
//! let compiled = compile("benjamin franklin", &CompileOptions::default()).unwrap();
//! let text: Vec<char> = "letters of benjamin franklin".chars().collect();
//! let report = compiled.ofa.match_using_ofa(&text);
//! assert_eq!(report.positions, vec![28]);
//! assert!(report.chars_read < text.len());
//! ```

pub mod bench;
pub mod budget;
pub mod compile;
pub mod corpus;
pub mod dfa;
pub mod nfa;
pub mod ofa;
pub mod report;
pub mod syntax;
pub mod trie;

use thiserror::Error;

pub use budget::BudgetConfig;
pub use compile::{compile, compile_ast, Alphabet, CompileOptions, Compiled, Mode};
pub use dfa::{Dfa, StateId};
pub use ofa::{build_ofa, deserialize_ofa, serialize_ofa, FormatError, Ofa, TraceStep};
pub use report::MatchReport;
pub use syntax::{parse_pattern, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("subset construction exceeded {cap} states")]
    StateCapExceeded { cap: usize },
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("no lookahead recorded for DFA state {0}")]
    MissingLookahead(StateId),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid alphabet: {0}")]
    ClassMap(#[from] syntax::ClassMapError),
    #[error("malformed OFA: {0}")]
    Format(#[from] FormatError),
    #[error("character {ch:?} at index {index} is outside the alphabet")]
    ForeignChar { index: usize, ch: char },
    #[error("input is not valid UTF-8 (byte {offset})")]
    Decode { offset: usize },
    #[error("pattern list line {line}: {reason}")]
    PatternList { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Decodes UTF-8 into code points.
pub fn decode_utf8(bytes: &[u8]) -> Result<Vec<char>, Error> {
    std::str::from_utf8(bytes)
        .map(|s| s.chars().collect())
        .map_err(|e| Error::Decode {
            offset: e.valid_up_to(),
        })
}
