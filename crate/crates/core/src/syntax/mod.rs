//! Pattern syntax: parsing, the tree representation and alphabet reduction.

mod ast;
mod classes;
mod parse;

pub use ast::{wrap_for_end_positions, Ast, CharSet, CodeRange, MAX_CODE_POINT};
pub use classes::{ClassId, ClassMap, ClassMapError, ClassRange, NO_CLASS};
pub use parse::{parse_pattern, ParseError, ParseErrorKind};
