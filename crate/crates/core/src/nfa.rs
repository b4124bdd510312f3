//! Thompson construction over class ids.

use crate::syntax::{Ast, ClassId, ClassMap};

pub type NfaStateId = usize;

#[derive(Debug, Clone, Default)]
pub struct NfaState {
    pub epsilon: Vec<NfaStateId>,
    /// Sorted class ids and the target reached on any of them.
    pub on: Option<(Vec<ClassId>, NfaStateId)>,
}

/// An epsilon-NFA with a single start and a single accepting state.
#[derive(Debug, Clone)]
pub struct Nfa {
    states: Vec<NfaState>,
    start: NfaStateId,
    accept: NfaStateId,
    class_count: u32,
}

impl Nfa {
    pub fn build(ast: &Ast, classes: &ClassMap) -> Nfa {
        let mut b = Builder {
            states: Vec::new(),
            classes,
        };
        let (start, accept) = b.fragment(ast);
        Nfa {
            states: b.states,
            start,
            accept,
            class_count: classes.class_count(),
        }
    }

    pub fn states(&self) -> &[NfaState] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn start(&self) -> NfaStateId {
        self.start
    }

    pub fn accept(&self) -> NfaStateId {
        self.accept
    }

    pub fn class_count(&self) -> u32 {
        self.class_count
    }

    /// Adds the epsilon closure of `set` to `set`, keeping it sorted.
    pub fn close(&self, set: &mut Vec<NfaStateId>, scratch: &mut Vec<bool>) {
        scratch.clear();
        scratch.resize(self.states.len(), false);
        let mut stack: Vec<NfaStateId> = set.clone();
        for &s in set.iter() {
            scratch[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &t in &self.states[s].epsilon {
                if !scratch[t] {
                    scratch[t] = true;
                    set.push(t);
                    stack.push(t);
                }
            }
        }
        set.sort_unstable();
    }

    /// Simulates the automaton on a class-id string.
    pub fn accepts(&self, input: &[ClassId]) -> bool {
        let mut scratch = Vec::new();
        let mut current = vec![self.start];
        self.close(&mut current, &mut scratch);
        for &c in input {
            let mut next: Vec<NfaStateId> = current
                .iter()
                .filter_map(|&s| match &self.states[s].on {
                    Some((classes, t)) if classes.binary_search(&c).is_ok() => Some(*t),
                    _ => None,
                })
                .collect();
            next.sort_unstable();
            next.dedup();
            self.close(&mut next, &mut scratch);
            current = next;
        }
        current.binary_search(&self.accept).is_ok()
    }
}

struct Builder<'a> {
    states: Vec<NfaState>,
    classes: &'a ClassMap,
}

impl Builder<'_> {
    fn add(&mut self) -> NfaStateId {
        self.states.push(NfaState::default());
        self.states.len() - 1
    }

    fn eps(&mut self, from: NfaStateId, to: NfaStateId) {
        self.states[from].epsilon.push(to);
    }

    fn fragment(&mut self, ast: &Ast) -> (NfaStateId, NfaStateId) {
        match ast {
            Ast::Epsilon => {
                let (s, a) = (self.add(), self.add());
                self.eps(s, a);
                (s, a)
            }
            Ast::Set(set) => {
                let (s, a) = (self.add(), self.add());
                self.states[s].on = Some((self.classes.classes_in(set), a));
                (s, a)
            }
            Ast::Concat(items) => {
                let mut frags = items
                    .iter()
                    .map(|item| self.fragment(item))
                    .collect::<Vec<_>>();
                for w in frags.windows(2) {
                    let (prev, next) = (w[0], w[1]);
                    self.states[prev.1].epsilon.push(next.0);
                }
                let first = frags.first().map(|f| f.0).expect("empty concatenation");
                let last = frags.pop().map(|f| f.1).unwrap();
                (first, last)
            }
            Ast::Alt(items) => {
                let (s, a) = (self.add(), self.add());
                for item in items {
                    let (fs, fa) = self.fragment(item);
                    self.eps(s, fs);
                    self.eps(fa, a);
                }
                (s, a)
            }
            Ast::Star(inner) => {
                let (s, a) = (self.add(), self.add());
                let (fs, fa) = self.fragment(inner);
                self.eps(s, fs);
                self.eps(s, a);
                self.eps(fa, fs);
                self.eps(fa, a);
                (s, a)
            }
            Ast::Plus(inner) => {
                let (s, a) = (self.add(), self.add());
                let (fs, fa) = self.fragment(inner);
                self.eps(s, fs);
                self.eps(fa, fs);
                self.eps(fa, a);
                (s, a)
            }
        }
    }
}
