//! The end-to-end pipeline from pattern text to OFA.

use crate::budget::BudgetConfig;
use crate::dfa::Dfa;
use crate::nfa::Nfa;
use crate::ofa::{build_ofa_detailed, NodeOrigin, Ofa};
use crate::syntax::{parse_pattern, wrap_for_end_positions, Ast, CharSet, ClassMap, ClassMapError};
use crate::trie::TrieBuildResult;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Match `Σ*e`, reporting every position that ends a match of `e`.
    #[default]
    EndPositions,
    /// Match `e` against prefixes of the input only.
    Anchored,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Alphabet {
    #[default]
    Unicode,
    /// Only these code points may occur in the input.
    Restricted(CharSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompileOptions {
    pub mode: Mode,
    pub alphabet: Alphabet,
    pub budget: BudgetConfig,
}

impl CompileOptions {
    pub fn anchored() -> Self {
        CompileOptions {
            mode: Mode::Anchored,
            ..Default::default()
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_budget(mut self, budget: BudgetConfig) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_alphabet(mut self, alphabet: Alphabet) -> Self {
        self.alphabet = alphabet;
        self
    }
}

/// Every stage of one compilation.
#[derive(Debug, Clone)]
pub struct Compiled {
    /// The expression actually compiled (wrapped in end-positions mode).
    pub ast: Ast,
    pub nfa_states: usize,
    /// Minimized DFA.
    pub dfa: Dfa,
    pub ofa: Ofa,
    /// Linked trie per DFA state.
    pub tries: Vec<TrieBuildResult>,
    pub origins: Vec<NodeOrigin>,
}

impl Compiled {
    pub fn class_count(&self) -> usize {
        self.dfa.class_count()
    }

    pub fn lookaheads(&self) -> Vec<u32> {
        self.tries.iter().map(|t| t.lookahead).collect()
    }
}

pub fn compile(pattern: &str, options: &CompileOptions) -> Result<Compiled, Error> {
    let ast = parse_pattern(pattern)?;
    compile_ast(ast, options)
}

pub fn compile_ast(ast: Ast, options: &CompileOptions) -> Result<Compiled, Error> {
    options.budget.validate()?;
    let ast = match options.mode {
        Mode::EndPositions => wrap_for_end_positions(ast),
        Mode::Anchored => ast,
    };
    let class_map = match &options.alphabet {
        Alphabet::Unicode => ClassMap::compute(&ast),
        Alphabet::Restricted(set) if set.is_empty() => return Err(ClassMapError::NoClasses.into()),
        Alphabet::Restricted(set) => ClassMap::compute_within(&ast, set),
    };
    let nfa = Nfa::build(&ast, &class_map);
    let dfa = Dfa::determinize(&nfa, class_map, options.budget.dfa_state_cap)?.minimize();
    let build = build_ofa_detailed(&dfa, &options.budget)?;
    Ok(Compiled {
        ast,
        nfa_states: nfa.state_count(),
        dfa,
        ofa: build.ofa,
        tries: build.tries,
        origins: build.origins,
    })
}
