//! Benchmark harness comparing the OFA matcher against the forward scan.

use std::io;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::compile::{compile, CompileOptions, Compiled};
use crate::Error;

/// One CSV row. Numeric fields are empty when the pattern failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub pattern_id: String,
    pub class_count: Option<usize>,
    pub max_lookahead: Option<u32>,
    /// End positions over `len + 1` candidate positions.
    pub pct_positions_matched: Option<f64>,
    /// `chars_read / len` of the OFA matcher.
    pub ofa_pct_chars_processed: Option<f64>,
    pub forward_elapsed_ns: Option<u64>,
    pub ofa_elapsed_ns: Option<u64>,
    /// 32-bit words in the OFA's δ and θ tables.
    pub ofa_space_words: Option<u64>,
    /// 32-bit words in the DFA's transition table.
    pub forward_space_words: Option<u64>,
    pub error: Option<String>,
}

impl BenchRecord {
    fn failed(pattern_id: &str, error: String) -> Self {
        BenchRecord {
            pattern_id: pattern_id.to_string(),
            class_count: None,
            max_lookahead: None,
            pct_positions_matched: None,
            ofa_pct_chars_processed: None,
            forward_elapsed_ns: None,
            ofa_elapsed_ns: None,
            ofa_space_words: None,
            forward_space_words: None,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternEntry {
    pub id: String,
    pub pattern: String,
}

/// Parses `id<TAB>pattern` lines. Blank lines and lines starting with `#`
/// are skipped; the pattern is everything after the first tab.
pub fn parse_pattern_list(text: &str) -> Result<Vec<PatternEntry>, Error> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, pattern) = line.split_once('\t').ok_or(Error::PatternList {
            line: i + 1,
            reason: "expected id<TAB>pattern".into(),
        })?;
        if id.is_empty() {
            return Err(Error::PatternList {
                line: i + 1,
                reason: "empty pattern id".into(),
            });
        }
        out.push(PatternEntry {
            id: id.to_string(),
            pattern: pattern.to_string(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct BenchConfig {
    pub options: CompileOptions,
    /// Timed runs per engine; the fastest is kept.
    pub repetitions: usize,
    /// Compile all patterns on worker threads before timing.
    pub parallel_compile: bool,
}

/// Smallest of `runs` timings of `f`, after one untimed warm-up call.
pub fn best_of<T>(runs: usize, mut f: impl FnMut() -> T) -> Duration {
    std::hint::black_box(f());
    (0..runs.max(1))
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(f());
            t.elapsed()
        })
        .min()
        .unwrap_or_default()
}

pub fn run_bench(
    patterns: &[PatternEntry],
    corpus: &[char],
    config: &BenchConfig,
) -> Vec<BenchRecord> {
    let compiled: Vec<Result<Compiled, Error>> = if config.parallel_compile {
        std::thread::scope(|s| {
            let handles: Vec<_> = patterns
                .iter()
                .map(|p| s.spawn(|| compile(&p.pattern, &config.options)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("compile thread panicked"))
                .collect()
        })
    } else {
        patterns
            .iter()
            .map(|p| compile(&p.pattern, &config.options))
            .collect()
    };
    patterns
        .iter()
        .zip(compiled)
        .map(|(p, c)| match c {
            Ok(c) => measure(&p.id, &c, corpus, config.repetitions),
            Err(e) => BenchRecord::failed(&p.id, e.to_string()),
        })
        .collect()
}

fn measure(id: &str, c: &Compiled, corpus: &[char], repetitions: usize) -> BenchRecord {
    if let Err(e) = c.ofa.check_alphabet(corpus) {
        return BenchRecord::failed(id, e.to_string());
    }
    let forward = c.dfa.forward_scan(corpus);
    let ofa = c.ofa.match_using_ofa(corpus);
    if forward.positions != ofa.positions {
        return BenchRecord::failed(id, "oracle mismatch".into());
    }
    let forward_time = best_of(repetitions, || c.dfa.forward_scan(corpus));
    let ofa_time = best_of(repetitions, || c.ofa.match_using_ofa(corpus));
    let k = c.class_count() as u64;
    BenchRecord {
        pattern_id: id.to_string(),
        class_count: Some(c.class_count()),
        max_lookahead: Some(c.ofa.max_lookahead()),
        pct_positions_matched: Some(ofa.positions.len() as f64 / (corpus.len() + 1) as f64),
        ofa_pct_chars_processed: Some(if corpus.is_empty() {
            0.0
        } else {
            ofa.chars_read as f64 / corpus.len() as f64
        }),
        forward_elapsed_ns: Some(forward_time.as_nanos() as u64),
        ofa_elapsed_ns: Some(ofa_time.as_nanos() as u64),
        ofa_space_words: Some(c.ofa.state_count() as u64 * k * 2),
        forward_space_words: Some(c.dfa.state_count() as u64 * k),
        error: None,
    }
}

pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<BenchRecord>, Error> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(csv_error)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(io::Error::new(io::ErrorKind::InvalidData, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_list() {
        let list = parse_pattern_list("# comment\n\ndna6\tTTTTTTTTTT[AG]\nsp\ta\tb\n").unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list[1].pattern, "a\tb");
        assert!(matches!(
            parse_pattern_list("x\n"),
            Err(Error::PatternList { line: 1, .. })
        ));
    }

    #[test]
    fn failures_are_recorded() {
        let patterns = parse_pattern_list("bad\t(\nok\tab\n").unwrap();
        let corpus: Vec<char> = "xxabxxab".chars().collect();
        let config = BenchConfig {
            repetitions: 2,
            ..Default::default()
        };
        let records = run_bench(&patterns, &corpus, &config);
        assert!(records[0].error.is_some());
        assert_eq!(records[1].error, None);
        assert_eq!(records[1].pct_positions_matched, Some(2.0 / 9.0));
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        assert_eq!(read_csv(&buf[..]).unwrap(), records);
    }
}
