use crate::Error;

/// Largest lookahead accepted; keeps every offset well inside `i32`.
pub const LOOKAHEAD_LIMIT: u32 = 1 << 15;

/// Limits on automaton construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetConfig {
    /// Tries stop growing once their lookahead reaches this value.
    pub max_lookahead: u32,
    /// A trie may grow only while `nodes * class_count` stays within this.
    pub max_nodes_per_trie: usize,
    /// Cap on subset-construction states.
    pub dfa_state_cap: usize,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig {
            max_lookahead: 12,
            max_nodes_per_trie: 1 << 20,
            dfa_state_cap: 1 << 20,
        }
    }
}

impl BudgetConfig {
    pub fn with_max_lookahead(mut self, max_lookahead: u32) -> Self {
        self.max_lookahead = max_lookahead;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.max_lookahead == 0 || self.max_lookahead > LOOKAHEAD_LIMIT {
            return Err(Error::InvalidBudget(format!(
                "max_lookahead must be in 1..={LOOKAHEAD_LIMIT}, got {}",
                self.max_lookahead
            )));
        }
        if self.max_nodes_per_trie == 0 {
            return Err(Error::InvalidBudget(
                "max_nodes_per_trie must be positive".into(),
            ));
        }
        if self.dfa_state_cap == 0 {
            return Err(Error::InvalidBudget(
                "dfa_state_cap must be positive".into(),
            ));
        }
        Ok(())
    }
}
