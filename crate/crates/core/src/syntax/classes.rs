//! Alphabet reduction.
//!
//! Every table downstream is indexed by class id rather than code point. A
//! class is a maximal set of code points that no character set in the pattern
//! can tell apart, so the partition is the coarsest one compatible with the
//! pattern.

use std::collections::HashMap;

use super::ast::{Ast, CharSet, CodeRange, MAX_CODE_POINT};

pub type ClassId = u32;

/// Returned by [`ClassMap::lookup`] for code points outside the alphabet.
pub const NO_CLASS: ClassId = ClassId::MAX;

const TABLE_SIZE: usize = 256;

/// A contiguous run of code points sharing one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassRange {
    pub lo: u32,
    pub hi: u32,
    pub class: ClassId,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ClassMapError {
    #[error("class count must be positive")]
    NoClasses,
    #[error(
        "range {lo:x}-{hi:x} is empty, overlaps its predecessor or exceeds the code-point space"
    )]
    BadRange { lo: u32, hi: u32 },
    #[error("class id {0} out of range")]
    ClassOutOfRange(ClassId),
    #[error("class id {0} has no code points")]
    UnusedClass(ClassId),
}

/// Partition of the alphabet into equivalence classes.
///
/// With the default Unicode alphabet the ranges cover `[0, 0x10FFFF]`
/// exactly. A map built with [`ClassMap::compute_within`] covers only the
/// requested alphabet and leaves gaps elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMap {
    class_count: u32,
    ranges: Vec<ClassRange>,
    low: Box<[ClassId; TABLE_SIZE]>,
}

impl ClassMap {
    /// Coarsest partition of the full code-point space for `ast`.
    pub fn compute(ast: &Ast) -> ClassMap {
        Self::compute_within(ast, &CharSet::full())
    }

    /// Coarsest partition of `alphabet` for `ast`; code points outside the
    /// alphabet get no class.
    pub fn compute_within(ast: &Ast, alphabet: &CharSet) -> ClassMap {
        let mut sets: Vec<&CharSet> = Vec::new();
        ast.for_each_set(&mut |s| sets.push(s));

        // Elementary intervals: split points at every range boundary.
        let mut cuts: Vec<u32> = vec![0, MAX_CODE_POINT + 1];
        for set in sets.iter().copied().chain(std::iter::once(alphabet)) {
            for r in set.ranges() {
                cuts.push(r.lo);
                cuts.push(r.hi + 1);
            }
        }
        cuts.sort_unstable();
        cuts.dedup();
        let intervals: Vec<CodeRange> = cuts
            .windows(2)
            .map(|w| CodeRange::new(w[0], w[1] - 1))
            .filter(|r| alphabet.contains(r.lo))
            .collect();

        // Membership signature per interval, one bit per set.
        let words = sets.len().div_ceil(64).max(1);
        let mut signatures = vec![0u64; intervals.len() * words];
        for (bit, set) in sets.iter().enumerate() {
            for r in set.ranges() {
                let first = intervals.partition_point(|iv| iv.hi < r.lo);
                for (i, iv) in intervals.iter().enumerate().skip(first) {
                    if iv.lo > r.hi {
                        break;
                    }
                    signatures[i * words + bit / 64] |= 1 << (bit % 64);
                }
            }
        }

        let mut ids: HashMap<&[u64], ClassId> = HashMap::new();
        let mut ranges: Vec<ClassRange> = Vec::new();
        for (i, iv) in intervals.iter().enumerate() {
            let sig = &signatures[i * words..(i + 1) * words];
            let next = ids.len() as ClassId;
            let class = *ids.entry(sig).or_insert(next);
            match ranges.last_mut() {
                Some(last) if last.class == class && last.hi + 1 == iv.lo => last.hi = iv.hi,
                _ => ranges.push(ClassRange {
                    lo: iv.lo,
                    hi: iv.hi,
                    class,
                }),
            }
        }
        let class_count = ids.len() as u32;
        Self::build(class_count, ranges)
    }

    /// Rebuilds a map from explicit ranges, validating the partition.
    pub fn from_ranges(
        class_count: u32,
        ranges: Vec<ClassRange>,
    ) -> Result<ClassMap, ClassMapError> {
        if class_count == 0 {
            return Err(ClassMapError::NoClasses);
        }
        let mut seen = vec![false; class_count as usize];
        let mut prev_hi: Option<u32> = None;
        for r in &ranges {
            let bad = r.lo > r.hi || r.hi > MAX_CODE_POINT || prev_hi.is_some_and(|p| r.lo <= p);
            if bad {
                return Err(ClassMapError::BadRange { lo: r.lo, hi: r.hi });
            }
            let slot = seen
                .get_mut(r.class as usize)
                .ok_or(ClassMapError::ClassOutOfRange(r.class))?;
            *slot = true;
            prev_hi = Some(r.hi);
        }
        if let Some(unused) = seen.iter().position(|s| !s) {
            return Err(ClassMapError::UnusedClass(unused as ClassId));
        }
        Ok(Self::build(class_count, ranges))
    }

    fn build(class_count: u32, ranges: Vec<ClassRange>) -> ClassMap {
        let mut low = Box::new([NO_CLASS; TABLE_SIZE]);
        for r in &ranges {
            if r.lo as usize >= TABLE_SIZE {
                break;
            }
            let hi = (r.hi as usize).min(TABLE_SIZE - 1);
            low[r.lo as usize..=hi].fill(r.class);
        }
        ClassMap {
            class_count,
            ranges,
            low,
        }
    }

    pub fn class_count(&self) -> u32 {
        self.class_count
    }

    pub fn ranges(&self) -> &[ClassRange] {
        &self.ranges
    }

    /// True when every code point has a class.
    pub fn covers_all_code_points(&self) -> bool {
        let mut next = 0u32;
        for r in &self.ranges {
            if r.lo != next {
                return false;
            }
            next = r.hi + 1;
        }
        next == MAX_CODE_POINT + 1
    }

    /// Class of `cp`, or [`NO_CLASS`] when it lies outside the alphabet.
    #[inline]
    pub fn lookup(&self, cp: u32) -> ClassId {
        if (cp as usize) < TABLE_SIZE {
            return self.low[cp as usize];
        }
        let idx = self.ranges.partition_point(|r| r.hi < cp);
        match self.ranges.get(idx) {
            Some(r) if r.lo <= cp => r.class,
            _ => NO_CLASS,
        }
    }

    pub fn class_of(&self, c: char) -> Option<ClassId> {
        match self.lookup(c as u32) {
            NO_CLASS => None,
            class => Some(class),
        }
    }

    /// Lowest code point of a class.
    pub fn representative(&self, class: ClassId) -> u32 {
        self.ranges
            .iter()
            .find(|r| r.class == class)
            .map(|r| r.lo)
            .expect("class id out of range")
    }

    /// A character of the class, if the class holds any valid `char`.
    pub fn representative_char(&self, class: ClassId) -> Option<char> {
        self.ranges
            .iter()
            .filter(|r| r.class == class)
            .flat_map(|r| [r.lo, r.hi.min(0xD7FF), 0xE000.max(r.lo)])
            .filter(|&cp| self.lookup(cp) == class)
            .find_map(char::from_u32)
    }

    /// Sorted class ids whose code points fall inside `set`.
    ///
    /// Every class is either contained in or disjoint from each set of the
    /// source pattern, so testing one code point per range suffices.
    pub fn classes_in(&self, set: &CharSet) -> Vec<ClassId> {
        let mut hit = vec![false; self.class_count as usize];
        for r in &self.ranges {
            if set.contains(r.lo) {
                hit[r.class as usize] = true;
            }
        }
        hit.iter()
            .enumerate()
            .filter(|(_, h)| **h)
            .map(|(i, _)| i as ClassId)
            .collect()
    }

    /// Maps a string to class ids; `None` if a character is outside the alphabet.
    pub fn classify(&self, s: &[char]) -> Option<Vec<ClassId>> {
        s.iter().map(|&c| self.class_of(c)).collect()
    }
}
