//! The "(a|b)*(abb)+" example over the alphabet {a, b}, end to end.

mod common;

use common::{chars, shortest_nonempty_to_final};
use ofa_core::syntax::{CharSet, CodeRange};
use ofa_core::trie::Slot;
use ofa_core::{compile, Alphabet, CompileOptions, Compiled};

const A: u32 = 0;
const B: u32 = 1;

fn example() -> Compiled {
    let ab = CharSet::from_ranges([CodeRange::new('a' as u32, 'b' as u32)]);
    compile(
        "(a|b)*(abb)+",
        &CompileOptions::anchored().with_alphabet(Alphabet::Restricted(ab)),
    )
    .unwrap()
}

#[test]
fn dfa_matches_abb_example() {
    let c = example();
    let rows: Vec<&[u32]> = (0..4).map(|q| c.dfa.row(q)).collect();
    assert_eq!(rows, vec![&[1, 0][..], &[1, 2], &[1, 3], &[1, 0]]);
    assert_eq!(c.dfa.finals().collect::<Vec<_>>(), vec![3]);
}

#[test]
fn lookaheads_equal_final_distances() {
    let c = example();
    assert_eq!(c.lookaheads(), vec![3, 2, 1, 3]);
    let bfs: Vec<u32> = shortest_nonempty_to_final(&c.dfa)
        .into_iter()
        .map(Option::unwrap)
        .collect();
    assert_eq!(bfs, vec![3, 2, 1, 3]);
    assert!(c.tries.iter().all(|t| t.reached_final));
}

#[test]
fn offsets_per_trie_node() {
    let c = example();
    let offsets = |q: usize| -> Vec<Vec<i32>> {
        c.tries[q]
            .trie
            .nodes()
            .iter()
            .map(|n| n.offsets().to_vec())
            .collect()
    };
    // nodes in pre-order: q1 = t1, t3, t7; q2 = v1, v3; q3 = u1; q4 = r1, r3, r7
    assert_eq!(offsets(0), vec![vec![2, -1], vec![2, -1], vec![5, 5]]);
    assert_eq!(offsets(1), vec![vec![2, -1], vec![2, 4]]);
    assert_eq!(offsets(2), vec![vec![2, 3]]);
    assert_eq!(offsets(3), vec![vec![2, -1], vec![2, -1], vec![5, 5]]);
}

#[test]
fn linked_tries_form_nine_states() {
    let c = example();
    assert_eq!(c.ofa.state_count(), 9);
    assert_eq!(c.ofa.phi(c.ofa.start()), Some(2));
    // the leaf for q3 in q1's trie now points at u1
    assert_eq!(c.tries[0].trie.node_at(1).child(A), Slot::Root(2));
    assert_eq!(c.tries[0].trie.node_at(0).child(A), Slot::Root(1));
    let origin_states: Vec<u32> = c.origins.iter().map(|o| o.dfa_state).collect();
    for q in 0..4 {
        let count = origin_states.iter().filter(|&&s| s == q).count();
        assert_eq!(count, c.tries[q as usize].trie.node_count());
    }
    let fin = c.ofa.finals();
    assert_eq!(fin.len(), 1);
    assert_eq!(c.origins[fin[0] as usize].dfa_state, 3);
    assert_eq!(c.origins[fin[0] as usize].level, 0);
}

#[test]
fn matching_reads_seven_of_nine() {
    let c = example();
    let s = chars("abbabaabb");
    let r = c.ofa.match_tracked(&s);
    assert_eq!(r.positions, vec![3, 9]);
    assert_eq!(r.chars_read, 7);
    assert_eq!(r.iterations, 7);
    assert_eq!(r.read_indices.as_deref(), Some(&[2, 1, 0, 5, 7, 6, 8][..]));
    assert_eq!(c.dfa.forward_scan(&s).positions, vec![3, 9]);
    assert!((r.skip_fraction(9) - 2.0 / 9.0).abs() < 1e-12);
}

#[test]
fn trace_replays_the_index_sequence() {
    let c = example();
    let steps = c.ofa.trace_match(&chars("abbabaabb"));
    let classes: Vec<u32> = steps.iter().map(|s| s.class).collect();
    assert_eq!(classes, vec![B, B, A, A, B, A, B]);
    let mut index = 2i64;
    for s in &steps {
        assert_eq!(s.index as i64, index);
        index += s.theta as i64;
    }
    for w in steps.windows(2) {
        assert_eq!(w[0].to, w[1].from);
    }
}

#[test]
fn round_trips_through_text() {
    let c = example();
    let text = c.ofa.to_text();
    let back = ofa_core::Ofa::from_text(&text).unwrap();
    assert_eq!(back, c.ofa);
    assert_eq!(
        back.match_using_ofa(&chars("abbabaabb")).positions,
        vec![3, 9]
    );
}
