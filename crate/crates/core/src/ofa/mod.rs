//! Offsetting finite automata.
//!
//! An OFA is a DFA whose transitions also move the input index by an offset
//! θ. It is built by linking the per-state tries: every leaf becomes an edge
//! to the root of its state's trie, and the interior trie nodes become the
//! automaton's states. Matching walks the input in the order the tries read
//! it, skipping characters the tries never inspect.

mod dump;
mod matcher;

use std::collections::{BTreeMap, VecDeque};

use crate::budget::BudgetConfig;
use crate::dfa::{Dfa, StateId};
use crate::syntax::{ClassId, ClassMap};
use crate::trie::{build_trie_with, NodeId, Slot, Trie, TrieBuildResult};
use crate::Error;

pub use dump::{deserialize_ofa, serialize_ofa, FormatError, FORMAT_VERSION};
pub use matcher::TraceStep;

/// `final_phi` entry for states that are not final.
const NOT_FINAL: i32 = i32::MIN;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub next: StateId,
    pub theta: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ofa {
    class_map: ClassMap,
    start: StateId,
    finals: Vec<StateId>,
    /// Row-major `state * class_count + class`.
    transitions: Vec<Transition>,
    /// Position offset Φ, defined on the start state and the final states.
    phi: BTreeMap<StateId, i32>,
    /// Lookahead per source-DFA state.
    look: Vec<u32>,
    /// Φ for final states, [`NOT_FINAL`] elsewhere.
    final_phi: Vec<i32>,
}

/// Where an OFA state came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeOrigin {
    pub dfa_state: StateId,
    pub level: u32,
}

/// An OFA together with the intermediate products of its construction.
#[derive(Debug, Clone)]
pub struct OfaBuild {
    pub ofa: Ofa,
    /// One entry per DFA state, after offsets and linking.
    pub tries: Vec<TrieBuildResult>,
    /// One entry per OFA state.
    pub origins: Vec<NodeOrigin>,
}

/// Builds a trie for every DFA state, assigns offsets, links the tries and
/// numbers the reachable trie nodes as OFA states.
pub fn build_ofa(dfa: &Dfa, budget: &BudgetConfig) -> Result<Ofa, Error> {
    build_ofa_detailed(dfa, budget).map(|b| b.ofa)
}

pub fn build_ofa_detailed(dfa: &Dfa, budget: &BudgetConfig) -> Result<OfaBuild, Error> {
    budget.validate()?;
    let distances = dfa.final_distances();
    let mut tries: Vec<TrieBuildResult> = (0..dfa.state_count() as StateId)
        .map(|q| build_trie_with(q, dfa, budget, distances[q as usize].is_some()))
        .collect();
    let look: Vec<u32> = tries.iter().map(|t| t.lookahead).collect();
    for t in &mut tries {
        t.trie.assign_offsets(&look)?;
    }
    let mut linked: Vec<Trie> = tries.iter().map(|t| t.trie.clone()).collect();
    link_tries(&mut linked);
    for (t, l) in tries.iter_mut().zip(linked) {
        t.trie = l;
    }
    let (ofa, origins) = number_states(dfa, &tries, look)?;
    Ok(OfaBuild {
        ofa,
        tries,
        origins,
    })
}

/// Replaces every leaf of every trie by a reference to its state's root.
pub fn link_tries(tries: &mut [Trie]) {
    for t in tries.iter_mut() {
        t.link();
    }
}

fn root_node(t: &Trie) -> NodeId {
    match t.root() {
        Slot::Node(n) => n,
        _ => unreachable!("grown tries always have a node at the root"),
    }
}

/// Breadth-first numbering from the start root in class-id order.
fn number_states(
    dfa: &Dfa,
    tries: &[TrieBuildResult],
    look: Vec<u32>,
) -> Result<(Ofa, Vec<NodeOrigin>), Error> {
    let k = dfa.class_count();
    let mut ids: Vec<Vec<StateId>> = tries
        .iter()
        .map(|t| vec![StateId::MAX; t.trie.node_count()])
        .collect();
    let mut order: Vec<(StateId, NodeId)> = Vec::new();
    let mut queue = VecDeque::new();

    let start_key = (dfa.start(), root_node(&tries[dfa.start() as usize].trie));
    ids[start_key.0 as usize][start_key.1 as usize] = 0;
    order.push(start_key);
    queue.push_back(start_key);

    let mut transitions = Vec::new();
    while let Some((q, n)) = queue.pop_front() {
        let node = tries[q as usize].trie.node_at(n);
        for c in 0..k as ClassId {
            let target = match node.child(c) {
                Slot::Node(m) => (q, m),
                Slot::Root(r) | Slot::Leaf(r) => (r, root_node(&tries[r as usize].trie)),
            };
            let slot = &mut ids[target.0 as usize][target.1 as usize];
            if *slot == StateId::MAX {
                *slot = order.len() as StateId;
                order.push(target);
                queue.push_back(target);
            }
            transitions.push(Transition {
                next: *slot,
                theta: node.offset(c),
            });
        }
    }

    let root_id = |q: StateId| -> Option<StateId> {
        let id = ids[q as usize][root_node(&tries[q as usize].trie) as usize];
        (id != StateId::MAX).then_some(id)
    };
    let mut phi = BTreeMap::new();
    let mut finals = Vec::new();
    for q in dfa.finals() {
        if let Some(id) = root_id(q) {
            finals.push(id);
            phi.insert(id, look[q as usize] as i32 - 1);
        }
    }
    finals.sort_unstable();
    phi.insert(0, look[dfa.start() as usize] as i32 - 1);

    let origins = order
        .iter()
        .map(|&(q, n)| NodeOrigin {
            dfa_state: q,
            level: tries[q as usize].trie.node_at(n).level(),
        })
        .collect();
    let ofa = Ofa::from_parts(dfa.class_map().clone(), 0, finals, transitions, phi, look)?;
    Ok((ofa, origins))
}

impl Ofa {
    /// Assembles an OFA from its tables, checking every structural invariant.
    pub fn from_parts(
        class_map: ClassMap,
        start: StateId,
        finals: Vec<StateId>,
        transitions: Vec<Transition>,
        phi: BTreeMap<StateId, i32>,
        look: Vec<u32>,
    ) -> Result<Ofa, Error> {
        let k = class_map.class_count() as usize;
        let invalid = |msg: String| Err(Error::InvalidAutomaton(msg));
        if transitions.is_empty() || !transitions.len().is_multiple_of(k) {
            return invalid(format!(
                "{} transitions is not a multiple of {k} classes",
                transitions.len()
            ));
        }
        let n = transitions.len() / k;
        if start as usize >= n {
            return invalid(format!("start {start} out of range"));
        }
        for t in &transitions {
            if t.next as usize >= n {
                return invalid(format!("transition to unknown state {}", t.next));
            }
            if t.theta == 0 || t.theta < -1 {
                return invalid(format!("offset {} is neither -1 nor positive", t.theta));
            }
        }
        if finals.windows(2).any(|w| w[0] >= w[1]) || finals.iter().any(|&f| f as usize >= n) {
            return invalid("finals must be sorted, distinct and in range".into());
        }
        let mut expected: Vec<StateId> = finals.clone();
        expected.push(start);
        expected.sort_unstable();
        expected.dedup();
        if !phi.keys().copied().eq(expected.iter().copied()) {
            return invalid("phi must be defined exactly on the start and final states".into());
        }
        if let Some((q, v)) = phi.iter().find(|(_, v)| **v < 0) {
            return invalid(format!("phi({q}) = {v} is negative"));
        }
        let mut final_phi = vec![NOT_FINAL; n];
        for &f in &finals {
            final_phi[f as usize] = phi[&f];
        }
        let ofa = Ofa {
            class_map,
            start,
            finals,
            transitions,
            phi,
            look,
            final_phi,
        };
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start as usize] = true;
        while let Some(q) = stack.pop() {
            for t in ofa.row(q) {
                if !seen[t.next as usize] {
                    seen[t.next as usize] = true;
                    stack.push(t.next);
                }
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return invalid(format!("state {q} is unreachable"));
        }
        Ok(ofa)
    }

    pub fn class_map(&self) -> &ClassMap {
        &self.class_map
    }

    pub fn class_count(&self) -> usize {
        self.class_map.class_count() as usize
    }

    pub fn state_count(&self) -> usize {
        self.final_phi.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn finals(&self) -> &[StateId] {
        &self.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.final_phi[q as usize] != NOT_FINAL
    }

    pub fn phi(&self, q: StateId) -> Option<i32> {
        self.phi.get(&q).copied()
    }

    pub fn phi_entries(&self) -> &BTreeMap<StateId, i32> {
        &self.phi
    }

    /// Lookahead of each source-DFA state.
    pub fn lookaheads(&self) -> &[u32] {
        &self.look
    }

    pub fn transition(&self, q: StateId, class: ClassId) -> Transition {
        self.transitions[q as usize * self.class_count() + class as usize]
    }

    pub fn row(&self, q: StateId) -> &[Transition] {
        let k = self.class_count();
        &self.transitions[q as usize * k..(q as usize + 1) * k]
    }

    /// Largest lookahead of any source-DFA state.
    pub fn max_lookahead(&self) -> u32 {
        self.look.iter().copied().max().unwrap_or(0)
    }
}
