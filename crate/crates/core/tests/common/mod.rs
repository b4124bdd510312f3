//! Test support: a reference matcher that shares no code with the crate's
//! automata, random pattern generators and small helpers.
#![allow(dead_code)]

use std::collections::VecDeque;

use ofa_core::{Dfa, StateId};
use rand::Rng;

/// Test-side regular expression, printed to pattern syntax for the crate.
#[derive(Debug, Clone)]
pub enum Re {
    Eps,
    Lit(char),
    /// `[...]`, optionally negated.
    Class(Vec<char>, bool),
    /// `.`: anything except newline.
    Dot,
    Cat(Box<Re>, Box<Re>),
    Alt(Box<Re>, Box<Re>),
    Star(Box<Re>),
    Plus(Box<Re>),
    Opt(Box<Re>),
}

fn escape(c: char) -> String {
    match c {
        '\n' => "\\n".into(),
        c if "()[]|*+?.\\^-".contains(c) => format!("\\{c}"),
        c => c.to_string(),
    }
}

impl Re {
    pub fn to_pattern(&self) -> String {
        match self {
            Re::Eps => "\\e".into(),
            Re::Lit(c) => escape(*c),
            Re::Class(cs, neg) => {
                let body: String = cs.iter().map(|&c| escape(c)).collect();
                format!("[{}{body}]", if *neg { "^" } else { "" })
            }
            Re::Dot => ".".into(),
            Re::Cat(a, b) => format!("({}{})", a.to_pattern(), b.to_pattern()),
            Re::Alt(a, b) => format!("({}|{})", a.to_pattern(), b.to_pattern()),
            Re::Star(a) => format!("({})*", a.to_pattern()),
            Re::Plus(a) => format!("({})+", a.to_pattern()),
            Re::Opt(a) => format!("({})?", a.to_pattern()),
        }
    }

    fn accepts_char(&self, c: char) -> bool {
        match self {
            Re::Lit(l) => *l == c,
            Re::Class(cs, neg) => cs.contains(&c) != *neg,
            Re::Dot => c != '\n',
            _ => unreachable!(),
        }
    }

    /// End positions reachable from any position marked in `starts`.
    pub fn step(&self, s: &[char], starts: &[bool]) -> Vec<bool> {
        let n = s.len();
        match self {
            Re::Eps => starts.to_vec(),
            Re::Lit(_) | Re::Class(..) | Re::Dot => {
                let mut out = vec![false; n + 1];
                for i in 0..n {
                    if starts[i] && self.accepts_char(s[i]) {
                        out[i + 1] = true;
                    }
                }
                out
            }
            Re::Cat(a, b) => b.step(s, &a.step(s, starts)),
            Re::Alt(a, b) => or(&a.step(s, starts), &b.step(s, starts)),
            Re::Star(a) => {
                let mut acc = starts.to_vec();
                loop {
                    let next = or(&acc, &a.step(s, &acc));
                    if next == acc {
                        return acc;
                    }
                    acc = next;
                }
            }
            Re::Plus(a) => {
                let once = a.step(s, starts);
                Re::Star(a.clone()).step(s, &once)
            }
            Re::Opt(a) => or(starts, &a.step(s, starts)),
        }
    }

    /// Reference answer: every `p` such that some match ends at `p`. In
    /// anchored mode matches must start at 0.
    pub fn end_positions(&self, s: &[char], anchored: bool) -> Vec<usize> {
        let starts: Vec<bool> = (0..=s.len()).map(|i| !anchored || i == 0).collect();
        self.step(s, &starts)
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }
}

fn or(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| *x || *y).collect()
}

/// Random expression of bounded depth whose atoms use only `letters`.
pub fn random_re(rng: &mut impl Rng, depth: u32, letters: &[char], allow_dot: bool) -> Re {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => Re::Eps,
            1 | 2 => {
                let mut cs: Vec<char> = letters
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                if cs.is_empty() {
                    cs.push(letters[0]);
                }
                Re::Class(cs, rng.gen_bool(0.3))
            }
            3 if allow_dot => Re::Dot,
            _ => Re::Lit(letters[rng.gen_range(0..letters.len())]),
        };
    }
    let sub = |rng: &mut _| Box::new(random_re(rng, depth - 1, letters, allow_dot));
    match rng.gen_range(0..10) {
        0..=3 => Re::Cat(sub(rng), sub(rng)),
        4 | 5 => Re::Alt(sub(rng), sub(rng)),
        6 | 7 => Re::Star(sub(rng)),
        8 => Re::Plus(sub(rng)),
        _ => Re::Opt(sub(rng)),
    }
}

/// Random input drawn mostly from `letters`, with occasional newlines and
/// non-ASCII characters.
pub fn random_input(rng: &mut impl Rng, max_len: usize, letters: &[char]) -> Vec<char> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| match rng.gen_range(0..20) {
            0 => '\n',
            1 => 'é',
            2 => 'z',
            _ => letters[rng.gen_range(0..letters.len())],
        })
        .collect()
}

/// Shortest nonempty path length from each state to a final state, by
/// breadth-first search from that state.
pub fn shortest_nonempty_to_final(dfa: &Dfa) -> Vec<Option<u32>> {
    let n = dfa.state_count();
    (0..n as StateId)
        .map(|q| {
            let mut dist = vec![None; n];
            let mut queue = VecDeque::new();
            for &t in dfa.row(q) {
                if dist[t as usize].is_none() {
                    dist[t as usize] = Some(1u32);
                    queue.push_back(t);
                }
            }
            while let Some(p) = queue.pop_front() {
                let d = dist[p as usize].unwrap();
                if dfa.is_final(p) {
                    return Some(d);
                }
                for &t in dfa.row(p) {
                    if dist[t as usize].is_none() {
                        dist[t as usize] = Some(d + 1);
                        queue.push_back(t);
                    }
                }
            }
            None
        })
        .collect()
}

/// All strings of `len` symbols over `0..k`, in lexicographic order.
pub fn all_strings(k: u32, len: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (k as u64).pow(len);
    (0..total).map(move |mut x| {
        let mut s = vec![0; len as usize];
        for slot in s.iter_mut().rev() {
            *slot = (x % k as u64) as u32;
            x /= k as u64;
        }
        s
    })
}

pub fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}
