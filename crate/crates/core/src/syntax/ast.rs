use std::fmt;

/// Largest Unicode code point.
pub const MAX_CODE_POINT: u32 = 0x10FFFF;

/// An inclusive range of code points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodeRange {
    pub lo: u32,
    pub hi: u32,
}

impl CodeRange {
    pub fn new(lo: u32, hi: u32) -> Self {
        debug_assert!(lo <= hi && hi <= MAX_CODE_POINT);
        CodeRange { lo, hi }
    }

    pub fn single(cp: u32) -> Self {
        CodeRange::new(cp, cp)
    }

    pub fn contains(&self, cp: u32) -> bool {
        self.lo <= cp && cp <= self.hi
    }
}

/// A set of code points stored as sorted, disjoint, non-adjacent ranges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharSet {
    ranges: Vec<CodeRange>,
}

impl CharSet {
    /// Builds a set from arbitrary (possibly overlapping) ranges.
    pub fn from_ranges<I: IntoIterator<Item = CodeRange>>(ranges: I) -> Self {
        let mut ranges: Vec<CodeRange> = ranges.into_iter().collect();
        ranges.sort_unstable();
        let mut merged: Vec<CodeRange> = Vec::with_capacity(ranges.len());
        for r in ranges {
            match merged.last_mut() {
                Some(last) if r.lo <= last.hi.saturating_add(1) => {
                    last.hi = last.hi.max(r.hi);
                }
                _ => merged.push(r),
            }
        }
        CharSet { ranges: merged }
    }

    pub fn single(c: char) -> Self {
        CharSet {
            ranges: vec![CodeRange::single(c as u32)],
        }
    }

    /// Every code point, `[0, 0x10FFFF]`.
    pub fn full() -> Self {
        CharSet {
            ranges: vec![CodeRange::new(0, MAX_CODE_POINT)],
        }
    }

    /// Every code point except `\n`; the meaning of `.`.
    pub fn any_but_newline() -> Self {
        CharSet::single('\n').complement()
    }

    pub fn ranges(&self) -> &[CodeRange] {
        &self.ranges
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn contains(&self, cp: u32) -> bool {
        let idx = self.ranges.partition_point(|r| r.hi < cp);
        self.ranges.get(idx).is_some_and(|r| r.contains(cp))
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.ranges.len() + 1);
        let mut next = 0u32;
        for r in &self.ranges {
            if r.lo > next {
                out.push(CodeRange::new(next, r.lo - 1));
            }
            next = r.hi + 1;
        }
        if next <= MAX_CODE_POINT {
            out.push(CodeRange::new(next, MAX_CODE_POINT));
        }
        CharSet { ranges: out }
    }

    pub fn union(&self, other: &CharSet) -> Self {
        CharSet::from_ranges(self.ranges.iter().chain(other.ranges.iter()).copied())
    }

    pub fn intersect(&self, other: &CharSet) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a, b) = (self.ranges[i], other.ranges[j]);
            let lo = a.lo.max(b.lo);
            let hi = a.hi.min(b.hi);
            if lo <= hi {
                out.push(CodeRange::new(lo, hi));
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        CharSet { ranges: out }
    }

    /// Number of code points in the set.
    pub fn len(&self) -> u64 {
        self.ranges.iter().map(|r| u64::from(r.hi - r.lo) + 1).sum()
    }
}

/// Parsed pattern tree.
///
/// `Concat` and `Alt` always hold at least two children and every `Set` is
/// nonempty when the tree comes out of the parser.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ast {
    Epsilon,
    Set(CharSet),
    Concat(Vec<Ast>),
    Alt(Vec<Ast>),
    Star(Box<Ast>),
    Plus(Box<Ast>),
}

impl Ast {
    pub fn literal(c: char) -> Ast {
        Ast::Set(CharSet::single(c))
    }

    /// Builds a concatenation, collapsing the zero- and one-child cases.
    pub fn concat(mut items: Vec<Ast>) -> Ast {
        match items.len() {
            0 => Ast::Epsilon,
            1 => items.pop().unwrap(),
            _ => Ast::Concat(items),
        }
    }

    /// Builds an alternation, collapsing the one-child case.
    pub fn alt(mut items: Vec<Ast>) -> Ast {
        assert!(!items.is_empty(), "alternation needs at least one branch");
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Ast::Alt(items)
        }
    }

    pub fn star(inner: Ast) -> Ast {
        Ast::Star(Box::new(inner))
    }

    pub fn plus(inner: Ast) -> Ast {
        Ast::Plus(Box::new(inner))
    }

    /// Visits every character set in the tree, left to right.
    pub fn for_each_set<'a>(&'a self, f: &mut impl FnMut(&'a CharSet)) {
        match self {
            Ast::Epsilon => {}
            Ast::Set(s) => f(s),
            Ast::Concat(items) | Ast::Alt(items) => {
                for item in items {
                    item.for_each_set(f);
                }
            }
            Ast::Star(inner) | Ast::Plus(inner) => inner.for_each_set(f),
        }
    }

    /// Checks the structural invariants the parser guarantees.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Ast::Epsilon => true,
            Ast::Set(s) => !s.is_empty(),
            Ast::Concat(items) | Ast::Alt(items) => {
                items.len() >= 2 && items.iter().all(Ast::is_well_formed)
            }
            Ast::Star(inner) | Ast::Plus(inner) => inner.is_well_formed(),
        }
    }
}

/// Wraps `ast` as `Σ* ast`, so that a DFA for the result enters a final
/// state at every position where a match of `ast` ends.
pub fn wrap_for_end_positions(ast: Ast) -> Ast {
    Ast::Concat(vec![Ast::star(Ast::Set(CharSet::full())), ast])
}

// Canonical printer. The output parses back to the identical tree.

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Epsilon => f.write_str("\\e"),
            Ast::Set(set) => write_set(f, set),
            Ast::Concat(items) => {
                for item in items {
                    if matches!(item, Ast::Concat(_) | Ast::Alt(_)) {
                        write!(f, "({item})")?;
                    } else {
                        write!(f, "{item}")?;
                    }
                }
                Ok(())
            }
            Ast::Alt(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    if matches!(item, Ast::Alt(_)) {
                        write!(f, "({item})")?;
                    } else {
                        write!(f, "{item}")?;
                    }
                }
                Ok(())
            }
            Ast::Star(inner) => write_repeat(f, inner, '*'),
            Ast::Plus(inner) => write_repeat(f, inner, '+'),
        }
    }
}

fn write_repeat(f: &mut fmt::Formatter<'_>, inner: &Ast, op: char) -> fmt::Result {
    if matches!(inner, Ast::Concat(_) | Ast::Alt(_)) {
        write!(f, "({inner}){op}")
    } else {
        write!(f, "{inner}{op}")
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, set: &CharSet) -> fmt::Result {
    if let [r] = set.ranges() {
        if r.lo == r.hi {
            return write_code_point(f, r.lo, false);
        }
    }
    f.write_str("[")?;
    for r in set.ranges() {
        write_code_point(f, r.lo, true)?;
        if r.hi != r.lo {
            f.write_str("-")?;
            write_code_point(f, r.hi, true)?;
        }
    }
    f.write_str("]")
}

fn write_code_point(f: &mut fmt::Formatter<'_>, cp: u32, in_class: bool) -> fmt::Result {
    let special: &[char] = if in_class {
        &['\\', ']', '[', '-', '^']
    } else {
        &['\\', '.', '*', '+', '?', '|', '(', ')', '[', ']']
    };
    match char::from_u32(cp) {
        Some('\n') => f.write_str("\\n"),
        Some(c) if special.contains(&c) => write!(f, "\\{c}"),
        Some(c) if c.is_ascii_graphic() || c == ' ' => write!(f, "{c}"),
        _ if cp <= 0xFFFF => write!(f, "\\u{cp:04x}"),
        _ => write!(f, "\\u{{{cp:x}}}"),
    }
}
