//! Reverse-scanning tries.
//!
//! The trie for DFA state `q` with lookahead `n` maps every string `s` of
//! length `n` to `δ(q, s)` while reading `s` from its last character
//! backwards. Nodes whose children are all leaves with the same state are
//! collapsed into that leaf, so many lookups finish before reading all `n`
//! characters. The root is never collapsed.
//!
//! Nodes live in an arena in pre-order (class-id order), which makes two
//! structurally equal tries compare equal.

use crate::budget::BudgetConfig;
use crate::dfa::{Dfa, StateId};
use crate::syntax::ClassId;
use crate::Error;

pub type NodeId = u32;

/// A child reference inside a trie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Leaf(StateId),
    Node(NodeId),
    /// A leaf after linking: continue at the root of this state's trie.
    Root(StateId),
}

impl Slot {
    fn leaf_state(self) -> Option<StateId> {
        match self {
            Slot::Leaf(q) | Slot::Root(q) => Some(q),
            Slot::Node(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrieNode {
    level: u32,
    children: Vec<Slot>,
    offsets: Vec<i32>,
}

impl TrieNode {
    fn new(level: u32, class_count: usize) -> Self {
        TrieNode {
            level,
            children: vec![Slot::Leaf(0); class_count],
            offsets: vec![0; class_count],
        }
    }

    /// Distance from the root.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn children(&self) -> &[Slot] {
        &self.children
    }

    pub fn child(&self, class: ClassId) -> Slot {
        self.children[class as usize]
    }

    pub fn offsets(&self) -> &[i32] {
        &self.offsets
    }

    pub fn offset(&self, class: ClassId) -> i32 {
        self.offsets[class as usize]
    }

    /// All children are leaves carrying the same state.
    fn collapsed_state(&self) -> Option<StateId> {
        let mut states = self.children.iter().map(|s| match s {
            Slot::Leaf(q) => Some(*q),
            _ => None,
        });
        let first = states.next()??;
        states.all(|q| q == Some(first)).then_some(first)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trie {
    root: Slot,
    nodes: Vec<TrieNode>,
}

/// Output of [`build_trie`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrieBuildResult {
    pub trie: Trie,
    pub lookahead: u32,
    /// Growth stopped because a leaf reached a final state.
    pub reached_final: bool,
}

impl Trie {
    pub fn leaf(q: StateId) -> Trie {
        Trie {
            root: Slot::Leaf(q),
            nodes: Vec::new(),
        }
    }

    /// A node whose child for class `i` is `children[i]`.
    pub fn node(children: Vec<Trie>) -> Trie {
        let k = children.len();
        assert!(k > 0, "a node needs at least one child");
        let mut nodes = vec![TrieNode::new(0, k)];
        for (c, child) in children.into_iter().enumerate() {
            let slot = match child.root {
                Slot::Node(_) => {
                    let base = nodes.len() as NodeId;
                    for mut n in child.nodes {
                        n.level += 1;
                        for s in n.children.iter_mut() {
                            if let Slot::Node(id) = s {
                                *id += base;
                            }
                        }
                        nodes.push(n);
                    }
                    Slot::Node(base)
                }
                leaf => leaf,
            };
            nodes[0].children[c] = slot;
        }
        Trie {
            root: Slot::Node(0),
            nodes,
        }
        .canonical()
    }

    pub fn root(&self) -> Slot {
        self.root
    }

    pub fn nodes(&self) -> &[TrieNode] {
        &self.nodes
    }

    pub fn node_at(&self, id: NodeId) -> &TrieNode {
        &self.nodes[id as usize]
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self.root, Slot::Node(_))
    }

    /// Number of interior nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Longest root-to-leaf path.
    pub fn depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.level + 1).max().unwrap_or(0)
    }

    /// Follows `s` from its last character backwards until a leaf.
    ///
    /// Panics if `s` is shorter than the path it needs.
    pub fn select_state(&self, s: &[ClassId]) -> StateId {
        let mut slot = self.root;
        let mut remaining = s.len();
        loop {
            match slot {
                Slot::Leaf(q) | Slot::Root(q) => return q,
                Slot::Node(n) => {
                    remaining = remaining
                        .checked_sub(1)
                        .expect("string shorter than the trie depth");
                    slot = self.nodes[n as usize].children[s[remaining] as usize];
                }
            }
        }
    }

    /// True iff the root is a node whose children are all leaves with one
    /// common state.
    pub fn is_compressible(&self) -> bool {
        match self.root {
            Slot::Node(n) => self.nodes[n as usize].collapsed_state().is_some(),
            _ => false,
        }
    }

    /// No node below the root is compressible.
    pub fn is_sub_root_compressed(&self) -> bool {
        let root = match self.root {
            Slot::Node(n) => n,
            _ => return false,
        };
        self.nodes
            .iter()
            .enumerate()
            .all(|(i, n)| i as NodeId == root || n.collapsed_state().is_none())
    }

    /// Some leaf carries a state accepted by `is_final`.
    pub fn reached_final(&self, is_final: impl Fn(StateId) -> bool) -> bool {
        if let Some(q) = self.root.leaf_state() {
            return is_final(q);
        }
        self.nodes
            .iter()
            .flat_map(|n| n.children.iter())
            .filter_map(|s| s.leaf_state())
            .any(is_final)
    }

    /// Leaves in pre-order as (reversed key, state); the key lists classes in
    /// the order they are read.
    pub fn leaf_paths(&self) -> Vec<(Vec<ClassId>, StateId)> {
        let mut out = Vec::new();
        let mut stack = vec![(self.root, Vec::new())];
        while let Some((slot, key)) = stack.pop() {
            match slot {
                Slot::Node(n) => {
                    for (c, &child) in self.nodes[n as usize].children.iter().enumerate().rev() {
                        let mut k = key.clone();
                        k.push(c as ClassId);
                        stack.push((child, k));
                    }
                }
                leaf => out.push((key, leaf.leaf_state().unwrap())),
            }
        }
        out
    }

    /// Copy of the trie with every leaf state `q` replaced by `δ(q, c)`, then
    /// fully compressed (the root included).
    pub fn evolve_and_compress(&self, class: ClassId, dfa: &Dfa) -> Trie {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let root = self.copy_evolved(class, dfa, 0, &mut nodes);
        compress(nodes, root, false)
    }

    /// A trie one lookahead longer: a fresh root whose child for class `c`
    /// is `evolve_and_compress(self, c)`. Below the root the result is
    /// compressed; the root itself is kept.
    pub fn grow(&self, dfa: &Dfa) -> Trie {
        let k = dfa.class_count();
        let mut nodes = Vec::with_capacity(1 + k * self.nodes.len());
        nodes.push(TrieNode::new(0, k));
        for c in 0..k {
            let slot = self.copy_evolved(c as ClassId, dfa, 1, &mut nodes);
            nodes[0].children[c] = slot;
        }
        compress(nodes, Slot::Node(0), true)
    }

    /// Appends an uncompressed, evolved copy to `dst`, shifting levels by
    /// `base_level`. Parents always precede their children in `dst`.
    fn copy_evolved(
        &self,
        class: ClassId,
        dfa: &Dfa,
        base_level: u32,
        dst: &mut Vec<TrieNode>,
    ) -> Slot {
        let src_root = match self.root {
            Slot::Node(n) => n,
            leaf => return Slot::Leaf(dfa.next(leaf.leaf_state().unwrap(), class)),
        };
        let k = dfa.class_count();
        let copy_root = dst.len() as NodeId;
        dst.push(TrieNode::new(
            self.nodes[src_root as usize].level + base_level,
            k,
        ));
        let mut stack = vec![(src_root, copy_root)];
        while let Some((s, d)) = stack.pop() {
            for c in 0..k {
                let slot = match self.nodes[s as usize].children[c] {
                    Slot::Node(m) => {
                        let id = dst.len() as NodeId;
                        dst.push(TrieNode::new(self.nodes[m as usize].level + base_level, k));
                        stack.push((m, id));
                        Slot::Node(id)
                    }
                    leaf => Slot::Leaf(dfa.next(leaf.leaf_state().unwrap(), class)),
                };
                dst[d as usize].children[c] = slot;
            }
        }
        Slot::Node(copy_root)
    }

    /// Sets every transition offset: `-1` towards a node, otherwise
    /// `level + look(target state)`.
    pub fn assign_offsets(&mut self, look: &[u32]) -> Result<(), Error> {
        for node in &mut self.nodes {
            for (c, slot) in node.children.iter().enumerate() {
                node.offsets[c] = match slot.leaf_state() {
                    None => -1,
                    Some(q) => {
                        let l = *look.get(q as usize).ok_or(Error::MissingLookahead(q))?;
                        i32::try_from(node.level + l).expect("offset exceeds i32")
                    }
                };
            }
        }
        Ok(())
    }

    /// Replaces every leaf by a reference to the root of its state's trie.
    pub fn link(&mut self) {
        for node in &mut self.nodes {
            for slot in node.children.iter_mut() {
                if let Slot::Leaf(q) = *slot {
                    *slot = Slot::Root(q);
                }
            }
        }
    }

    /// Renumbers nodes in pre-order, dropping unreachable ones.
    fn canonical(self) -> Trie {
        let root = match self.root {
            Slot::Node(n) => n,
            _ => return self,
        };
        let mut new_id = vec![NodeId::MAX; self.nodes.len()];
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            new_id[n as usize] = order.len() as NodeId;
            order.push(n);
            for slot in self.nodes[n as usize].children.iter().rev() {
                if let Slot::Node(m) = slot {
                    stack.push(*m);
                }
            }
        }
        let mut old: Vec<Option<TrieNode>> = self.nodes.into_iter().map(Some).collect();
        let nodes = order
            .iter()
            .map(|&n| {
                let mut node = old[n as usize].take().unwrap();
                for slot in node.children.iter_mut() {
                    if let Slot::Node(m) = slot {
                        *m = new_id[*m as usize];
                    }
                }
                node
            })
            .collect();
        Trie {
            root: Slot::Node(0),
            nodes,
        }
    }
}

/// Collapses compressible nodes bottom-up. Children always have larger
/// indices than their parents, so a reverse sweep sees children first.
fn compress(mut nodes: Vec<TrieNode>, root: Slot, keep_root: bool) -> Trie {
    let root_id = match root {
        Slot::Node(n) => n,
        leaf => return Trie::leaf(leaf.leaf_state().unwrap()),
    };
    let mut collapsed: Vec<Option<StateId>> = vec![None; nodes.len()];
    for i in (0..nodes.len()).rev() {
        for slot in nodes[i].children.iter_mut() {
            if let Slot::Node(m) = *slot {
                if let Some(q) = collapsed[m as usize] {
                    *slot = Slot::Leaf(q);
                }
            }
        }
        if keep_root && i as NodeId == root_id {
            continue;
        }
        collapsed[i] = nodes[i].collapsed_state();
    }
    if let Some(q) = collapsed[root_id as usize] {
        return Trie::leaf(q);
    }
    Trie {
        root: Slot::Node(root_id),
        nodes,
    }
    .canonical()
}

/// True iff the trie may grow by one more level: the lookahead is below the
/// cap and `nodes * class_count` stays within the node budget.
pub fn budget_allows_bigger_trie(trie: &Trie, lookahead: u32, budget: &BudgetConfig) -> bool {
    let class_count = trie.nodes.first().map_or(0, |n| n.children.len());
    lookahead < budget.max_lookahead
        && trie.node_count().saturating_mul(class_count) <= budget.max_nodes_per_trie
}

/// Grows the trie for `q` until a leaf reaches a final state or the budget
/// says stop. The first growth happens unconditionally, so the lookahead is
/// at least 1.
pub fn build_trie(q: StateId, dfa: &Dfa, budget: &BudgetConfig) -> TrieBuildResult {
    let live = dfa.final_distances()[q as usize].is_some();
    build_trie_with(q, dfa, budget, live)
}

pub(crate) fn build_trie_with(
    q: StateId,
    dfa: &Dfa,
    budget: &BudgetConfig,
    live: bool,
) -> TrieBuildResult {
    let is_final = |s| dfa.is_final(s);
    let mut trie = Trie::leaf(q).grow(dfa);
    let mut lookahead = 1;
    if !live {
        // no final state can ever follow, so a bigger trie buys nothing
        return TrieBuildResult {
            trie,
            lookahead,
            reached_final: false,
        };
    }
    let mut reached = trie.reached_final(is_final);
    while !reached && budget_allows_bigger_trie(&trie, lookahead, budget) {
        trie = trie.grow(dfa);
        lookahead += 1;
        reached = trie.reached_final(is_final);
    }
    TrieBuildResult {
        trie,
        lookahead,
        reached_final: reached,
    }
}
