//! Table-driven DFA over class ids: subset construction, minimization and the
//! forward-only scanner that serves as baseline and oracle.

use std::collections::{HashMap, VecDeque};

use crate::nfa::{Nfa, NfaStateId};
use crate::report::MatchReport;
use crate::syntax::{ClassId, ClassMap};
use crate::Error;

pub type StateId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    class_map: ClassMap,
    start: StateId,
    finals: Vec<bool>,
    /// Row-major `state * class_count + class`.
    table: Vec<StateId>,
}

impl Dfa {
    /// Assembles a DFA from raw parts. The table must be total, every target in
    /// range and every state reachable from `start`.
    pub fn from_parts(
        class_map: ClassMap,
        start: StateId,
        finals: Vec<bool>,
        table: Vec<StateId>,
    ) -> Result<Dfa, Error> {
        let n = finals.len();
        let k = class_map.class_count() as usize;
        if n == 0 || table.len() != n * k || start as usize >= n {
            return Err(Error::InvalidAutomaton(format!(
                "{n} states, {k} classes, table of {} entries, start {start}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&t| t as usize >= n) {
            return Err(Error::InvalidAutomaton(format!(
                "transition to unknown state {bad}"
            )));
        }
        let dfa = Dfa {
            class_map,
            start,
            finals,
            table,
        };
        if let Some(q) = dfa.reachable().iter().position(|r| !r) {
            return Err(Error::InvalidAutomaton(format!("state {q} is unreachable")));
        }
        Ok(dfa)
    }

    /// Subset construction. Only reachable subsets are materialized; the empty
    /// subset becomes an ordinary (dead) state so the table stays total.
    pub fn determinize(nfa: &Nfa, class_map: ClassMap, state_cap: usize) -> Result<Dfa, Error> {
        let k = class_map.class_count() as usize;
        let mut scratch = Vec::new();
        let mut ids: HashMap<Vec<NfaStateId>, StateId> = HashMap::new();
        let mut sets: Vec<Vec<NfaStateId>> = Vec::new();
        let mut table: Vec<StateId> = Vec::new();

        let mut start = vec![nfa.start()];
        nfa.close(&mut start, &mut scratch);
        ids.insert(start.clone(), 0);
        sets.push(start);

        let mut buckets: Vec<Vec<NfaStateId>> = vec![Vec::new(); k];
        let mut current = 0;
        while current < sets.len() {
            for b in buckets.iter_mut() {
                b.clear();
            }
            for &s in &sets[current] {
                if let Some((classes, target)) = &nfa.states()[s].on {
                    for &c in classes {
                        buckets[c as usize].push(*target);
                    }
                }
            }
            for bucket in buckets.iter_mut() {
                bucket.sort_unstable();
                bucket.dedup();
                let mut next = std::mem::take(bucket);
                nfa.close(&mut next, &mut scratch);
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        if sets.len() >= state_cap {
                            return Err(Error::StateCapExceeded { cap: state_cap });
                        }
                        let id = sets.len() as StateId;
                        ids.insert(next.clone(), id);
                        sets.push(next);
                        id
                    }
                };
                table.push(id);
            }
            current += 1;
        }

        let finals = sets
            .iter()
            .map(|set| set.binary_search(&nfa.accept()).is_ok())
            .collect();
        Ok(Dfa {
            class_map,
            start: 0,
            finals,
            table,
        })
    }

    /// Minimal equivalent DFA by Moore-style partition refinement, renumbered
    /// breadth-first from the start state in class-id order.
    pub fn minimize(&self) -> Dfa {
        let k = self.class_count();
        let reachable = self.reachable();
        let live: Vec<StateId> = (0..self.state_count() as StateId)
            .filter(|&q| reachable[q as usize])
            .collect();

        let mut block = vec![0u32; self.state_count()];
        for &q in &live {
            block[q as usize] = u32::from(self.finals[q as usize]);
        }
        let mut block_count = {
            let mut kinds: Vec<u32> = live.iter().map(|&q| block[q as usize]).collect();
            kinds.sort_unstable();
            kinds.dedup();
            kinds.len()
        };
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next_block = vec![0u32; self.state_count()];
            for &q in &live {
                let mut signature = Vec::with_capacity(k + 1);
                signature.push(block[q as usize]);
                signature.extend(self.row(q).iter().map(|&t| block[t as usize]));
                let fresh = ids.len() as u32;
                next_block[q as usize] = *ids.entry(signature).or_insert(fresh);
            }
            block = next_block;
            if ids.len() == block_count {
                break;
            }
            block_count = ids.len();
        }

        // Quotient automaton, then breadth-first renumbering.
        let mut repr = vec![None; block_count];
        for &q in &live {
            repr[block[q as usize] as usize].get_or_insert(q);
        }
        let mut order: Vec<Option<StateId>> = vec![None; block_count];
        let mut queue = VecDeque::new();
        let start_block = block[self.start as usize];
        order[start_block as usize] = Some(0);
        queue.push_back(start_block);
        let mut by_new_id = vec![start_block];
        while let Some(b) = queue.pop_front() {
            let q = repr[b as usize].unwrap();
            for &t in self.row(q) {
                let tb = block[t as usize];
                if order[tb as usize].is_none() {
                    order[tb as usize] = Some(by_new_id.len() as StateId);
                    by_new_id.push(tb);
                    queue.push_back(tb);
                }
            }
        }
        let mut table = Vec::with_capacity(by_new_id.len() * k);
        let mut finals = Vec::with_capacity(by_new_id.len());
        for &b in &by_new_id {
            let q = repr[b as usize].unwrap();
            finals.push(self.finals[q as usize]);
            table.extend(
                self.row(q)
                    .iter()
                    .map(|&t| order[block[t as usize] as usize].unwrap()),
            );
        }
        Dfa {
            class_map: self.class_map.clone(),
            start: 0,
            finals,
            table,
        }
    }

    pub fn class_map(&self) -> &ClassMap {
        &self.class_map
    }

    pub fn class_count(&self) -> usize {
        self.class_map.class_count() as usize
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(q, _)| q as StateId)
    }

    #[inline]
    pub fn next(&self, q: StateId, class: ClassId) -> StateId {
        self.table[q as usize * self.class_count() + class as usize]
    }

    pub fn row(&self, q: StateId) -> &[StateId] {
        let k = self.class_count();
        &self.table[q as usize * k..(q as usize + 1) * k]
    }

    /// Extended transition function over a class-id string.
    pub fn delta_classes(&self, q: StateId, s: &[ClassId]) -> StateId {
        s.iter().fold(q, |q, &c| self.next(q, c))
    }

    /// Extended transition function over characters.
    ///
    /// Panics if a character is outside the alphabet of a restricted map.
    pub fn delta_string(&self, q: StateId, s: &[char]) -> StateId {
        s.iter().fold(q, |q, &ch| {
            let class = self
                .class_map
                .class_of(ch)
                .unwrap_or_else(|| panic!("{ch:?} is outside the alphabet"));
            self.next(q, class)
        })
    }

    /// Left-to-right scan reporting every prefix length that ends in a final
    /// state. Reads every character exactly once.
    pub fn forward_scan(&self, input: &[char]) -> MatchReport {
        let k = self.class_count();
        let mut positions = Vec::new();
        let mut q = self.start as usize;
        if self.finals[q] {
            positions.push(0);
        }
        for (i, &ch) in input.iter().enumerate() {
            let class = self.class_map.lookup(ch as u32) as usize;
            q = self.table[q * k + class] as usize;
            if self.finals[q] {
                positions.push(i + 1);
            }
        }
        MatchReport {
            positions,
            chars_read: input.len(),
            iterations: input.len(),
            read_indices: None,
        }
    }

    /// For each state, the length of the shortest nonempty string leading to
    /// a final state; `None` for dead states.
    pub fn final_distances(&self) -> Vec<Option<u32>> {
        let n = self.state_count();
        let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n as StateId {
            for &t in self.row(q) {
                reverse[t as usize].push(q);
            }
        }
        // Possibly-empty distance to F.
        let mut to_final: Vec<Option<u32>> = vec![None; n];
        let mut queue = VecDeque::new();
        for q in self.finals() {
            to_final[q as usize] = Some(0);
            queue.push_back(q);
        }
        while let Some(q) = queue.pop_front() {
            let d = to_final[q as usize].unwrap();
            for &p in &reverse[q as usize] {
                if to_final[p as usize].is_none() {
                    to_final[p as usize] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        (0..n as StateId)
            .map(|q| {
                self.row(q)
                    .iter()
                    .filter_map(|&t| to_final[t as usize])
                    .min()
                    .map(|d| d + 1)
            })
            .collect()
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.start];
        seen[self.start as usize] = true;
        while let Some(q) = stack.pop() {
            for &t in self.row(q) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_pattern, CharSet, CodeRange};

    const A: ClassId = 0;
    const B: ClassId = 1;

    fn ab() -> CharSet {
        CharSet::from_ranges([CodeRange::new('a' as u32, 'b' as u32)])
    }

    fn build(pattern: &str, alphabet: Option<CharSet>) -> Dfa {
        let ast = parse_pattern(pattern).unwrap();
        let map = match alphabet {
            Some(a) => ClassMap::compute_within(&ast, &a),
            None => ClassMap::compute(&ast),
        };
        let nfa = Nfa::build(&ast, &map);
        Dfa::determinize(&nfa, map, 1 << 20).unwrap()
    }

    fn abb_example() -> Dfa {
        build("(a|b)*(abb)+", Some(ab())).minimize()
    }

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn single_literal_has_three_subset_states() {
        let dfa = build("a", None);
        assert_eq!(dfa.state_count(), 3);
        assert_eq!(dfa.class_count(), 2);
        assert_eq!(dfa.finals().count(), 1);
    }

    #[test]
    fn sigma_star_is_one_final_state() {
        let dfa = build("[\\u0000-\\u{10ffff}]*", None).minimize();
        assert_eq!(dfa.state_count(), 1);
        assert!(dfa.is_final(0));
    }

    #[test]
    fn abb_example_minimal_table() {
        let dfa = abb_example();
        assert_eq!(dfa.state_count(), 4);
        // q1..q4 are 0..3 after breadth-first renumbering
        let expected = [[1, 0], [1, 2], [1, 3], [1, 0]];
        for (q, row) in expected.iter().enumerate() {
            assert_eq!(dfa.row(q as StateId), row, "row of q{}", q + 1);
        }
        assert_eq!(dfa.finals().collect::<Vec<_>>(), vec![3]);
        assert_eq!(dfa.forward_scan(&chars("abbabaabb")).positions, vec![3, 9]);
    }

    #[test]
    fn delta_string_examples() {
        let dfa = abb_example();
        assert_eq!(dfa.delta_string(2, &[]), 2);
        assert_eq!(dfa.delta_string(0, &chars("abb")), 3);
        assert_eq!(dfa.delta_string(0, &chars("aab")), 2);
        assert_eq!(dfa.delta_classes(0, &[A, B, B]), 3);
    }

    #[test]
    fn minimize_is_idempotent() {
        let once = abb_example();
        assert_eq!(once.minimize(), once);
    }

    #[test]
    fn duplicate_accept_states_merge() {
        // classes: 0 = other, 1 = a, 2 = {b,c}; state 4 is dead
        let map = ClassMap::compute(&parse_pattern("a[bc]").unwrap());
        #[rustfmt::skip]
        let table = vec![
            4, 1, 4,
            3, 4, 2,
            4, 4, 4,
            4, 4, 4,
            4, 4, 4,
        ];
        // states 2 and 3 both accept and behave identically
        let finals = vec![false, false, true, true, false];
        let dfa = Dfa::from_parts(map, 0, finals, table).unwrap();
        let min = dfa.minimize();
        assert_eq!(min.state_count(), dfa.state_count() - 1);
        for s in ["ab", "ac", "ax", "a", "", "abb"] {
            let c = chars(s);
            assert_eq!(
                dfa.is_final(dfa.delta_string(0, &c)),
                min.is_final(min.delta_string(0, &c)),
                "{s}"
            );
        }
    }

    #[test]
    fn from_parts_rejects_bad_tables() {
        let map = ClassMap::compute(&parse_pattern("a").unwrap());
        assert!(Dfa::from_parts(map.clone(), 0, vec![false, true], vec![1, 0, 1]).is_err());
        assert!(Dfa::from_parts(map.clone(), 0, vec![false, true], vec![1, 0, 5, 1]).is_err());
        // state 1 unreachable
        assert!(Dfa::from_parts(map, 0, vec![false, true], vec![0, 0, 1, 1]).is_err());
    }

    #[test]
    fn empty_input_reports_start_only_if_final() {
        let dfa = abb_example();
        assert_eq!(dfa.forward_scan(&[]).positions, Vec::<usize>::new());
        let star = build("a*", None).minimize();
        assert_eq!(star.forward_scan(&[]).positions, vec![0]);
    }

    #[test]
    fn final_distances_of_abb_example() {
        let dfa = abb_example();
        assert_eq!(
            dfa.final_distances(),
            vec![Some(3), Some(2), Some(1), Some(3)]
        );
        let with_dead = build("(a|b)*(abb)+", None).minimize();
        assert_eq!(with_dead.state_count(), 5);
        assert_eq!(
            with_dead
                .final_distances()
                .iter()
                .filter(|d| d.is_none())
                .count(),
            1
        );
    }

    #[test]
    fn state_cap_is_enforced() {
        let ast = parse_pattern("[\\u0000-\\u{10ffff}]*a[ab][ab][ab][ab][ab]").unwrap();
        let map = ClassMap::compute(&ast);
        let nfa = Nfa::build(&ast, &map);
        assert!(matches!(
            Dfa::determinize(&nfa, map, 16),
            Err(Error::StateCapExceeded { cap: 16 })
        ));
    }
}
