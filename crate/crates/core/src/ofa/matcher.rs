use super::{Ofa, NOT_FINAL};
use crate::dfa::StateId;
use crate::report::MatchReport;
use crate::syntax::{ClassId, NO_CLASS};
use crate::Error;

/// One iteration of the matching loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub index: usize,
    pub class: ClassId,
    pub from: StateId,
    pub to: StateId,
    pub theta: i32,
    /// End position recorded after this step, if the new state is final.
    pub emitted: Option<usize>,
}

impl Ofa {
    /// Reports every end-of-match position of `input`, reading characters in
    /// the order the tries inspect them.
    ///
    /// Panics if the input holds a character outside a restricted alphabet;
    /// see [`Ofa::try_match`].
    pub fn match_using_ofa(&self, input: &[char]) -> MatchReport {
        self.run(input, |_| {})
    }

    /// Like [`Ofa::match_using_ofa`] but also records every index read.
    pub fn match_tracked(&self, input: &[char]) -> MatchReport {
        let mut reads = Vec::new();
        let mut report = self.run(input, |step| reads.push(step.index));
        report.read_indices = Some(reads);
        report
    }

    /// Checks the input against the alphabet before matching.
    pub fn try_match(&self, input: &[char]) -> Result<MatchReport, Error> {
        self.check_alphabet(input)?;
        Ok(self.match_using_ofa(input))
    }

    /// One [`TraceStep`] per loop iteration of the matcher.
    pub fn trace_match(&self, input: &[char]) -> Vec<TraceStep> {
        let mut steps = Vec::new();
        self.run(input, |step| steps.push(*step));
        steps
    }

    pub fn check_alphabet(&self, input: &[char]) -> Result<(), Error> {
        if self.class_map().covers_all_code_points() {
            return Ok(());
        }
        match input
            .iter()
            .position(|&ch| self.class_map().class_of(ch).is_none())
        {
            Some(index) => Err(Error::ForeignChar {
                index,
                ch: input[index],
            }),
            None => Ok(()),
        }
    }

    fn run(&self, input: &[char], mut observe: impl FnMut(&TraceStep)) -> MatchReport {
        let k = self.class_count();
        let len = input.len();
        let mut positions = Vec::new();
        let mut state = self.start;
        if self.is_final(state) {
            positions.push(0);
        }
        let mut index = self.phi[&self.start] as usize;
        let mut reads = 0;
        while index < len {
            let class = self.class_map.lookup(input[index] as u32);
            assert!(
                class != NO_CLASS,
                "{:?} is outside the alphabet",
                input[index]
            );
            let t = self.transitions[state as usize * k + class as usize];
            let read_at = index;
            // θ is -1 or positive and index >= 1 whenever θ = -1
            index = (index as isize + t.theta as isize) as usize;
            let phi = self.final_phi[t.next as usize];
            let emitted = (phi != NOT_FINAL).then(|| index - phi as usize);
            if let Some(p) = emitted {
                positions.push(p);
            }
            observe(&TraceStep {
                index: read_at,
                class,
                from: state,
                to: t.next,
                theta: t.theta,
                emitted,
            });
            state = t.next;
            reads += 1;
        }
        MatchReport {
            positions,
            chars_read: reads,
            iterations: reads,
            read_indices: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_ofa;
    use super::super::tests::abb_dfa;
    use crate::budget::BudgetConfig;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn abb_trace() {
        let ofa = build_ofa(&abb_dfa(), &BudgetConfig::default()).unwrap();
        let report = ofa.match_tracked(&chars("abbabaabb"));
        assert_eq!(report.positions, vec![3, 9]);
        assert_eq!(report.chars_read, 7);
        assert_eq!(report.read_indices, Some(vec![2, 1, 0, 5, 7, 6, 8]));
        let trace = ofa.trace_match(&chars("abbabaabb"));
        assert_eq!(trace.len(), 7);
        let mut index = ofa.phi(ofa.start()).unwrap() as isize;
        for step in &trace {
            assert_eq!(step.index as isize, index);
            index += step.theta as isize;
        }
        let emitted: Vec<usize> = trace.iter().filter_map(|s| s.emitted).collect();
        assert_eq!(emitted, vec![3, 9]);
    }

    #[test]
    fn empty_and_short_inputs() {
        let ofa = build_ofa(&abb_dfa(), &BudgetConfig::default()).unwrap();
        assert_eq!(ofa.match_using_ofa(&[]).positions, Vec::<usize>::new());
        assert!(ofa.trace_match(&[]).is_empty());
        // shorter than Φ(start) + 1: the loop never runs
        let r = ofa.match_using_ofa(&chars("ab"));
        assert_eq!((r.positions.len(), r.chars_read), (0, 0));
    }

    #[test]
    fn foreign_characters_are_rejected() {
        let ofa = build_ofa(&abb_dfa(), &BudgetConfig::default()).unwrap();
        assert!(matches!(
            ofa.try_match(&chars("abcabb")),
            Err(crate::Error::ForeignChar { index: 2, ch: 'c' })
        ));
        assert_eq!(ofa.try_match(&chars("abb")).unwrap().positions, vec![3]);
    }
}
