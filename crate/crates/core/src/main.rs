use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ofa_core::bench::{parse_pattern_list, run_bench, write_csv, BenchConfig};
use ofa_core::corpus::{make_corpus, Transform};
use ofa_core::deserialize_ofa;
use ofa_core::syntax::{parse_pattern, Ast};
use ofa_core::{
    compile, decode_utf8, Alphabet, BudgetConfig, CompileOptions, Error, Mode, TraceStep,
};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_MISMATCH: u8 = 5;

#[derive(Parser)]
#[command(
    name = "ofa",
    version,
    about = "Regex end-position search with offsetting finite automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a pattern, print statistics and optionally save the OFA.
    Compile {
        pattern: String,
        #[command(flatten)]
        build: BuildArgs,
        /// Write the OFA text format here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print every end-of-match position in a file, one per line.
    Find {
        #[command(flatten)]
        source: SourceArgs,
        /// Input file, or "-" for stdin.
        input: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        /// Append characters read, input length and skip fraction.
        #[arg(long)]
        stats: bool,
        /// Print one line per matcher step before the positions.
        #[arg(long)]
        trace: bool,
        /// Also run the forward DFA scan and fail on any difference.
        #[arg(long, conflicts_with = "automaton")]
        oracle_check: bool,
    },
    /// Time both matchers on a corpus and write CSV.
    Bench {
        /// One "id<TAB>pattern" per line.
        patterns: PathBuf,
        corpus: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        #[arg(short, long, default_value_t = 3)]
        repetitions: usize,
        /// Compile patterns on worker threads (compilation is not timed).
        #[arg(long)]
        parallel_compile: bool,
        /// CSV destination; stdout by default.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the OFA text format for a pattern.
    Dump {
        pattern: String,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Print the matcher steps for a short input string.
    Trace {
        pattern: String,
        input: String,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Repeat a transformed source text to an exact byte size.
    Corpus {
        source: PathBuf,
        dest: PathBuf,
        /// Target size in bytes.
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value_t = TransformArg::None)]
        transform: TransformArg,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    #[arg(short, long)]
    pattern: Option<String>,
    /// A saved OFA (see `compile --out`).
    #[arg(short, long)]
    automaton: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::EndPositions)]
    mode: ModeArg,
    /// Restrict the input alphabet to a bracket class such as "[ab]".
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long, default_value_t = BudgetConfig::default().max_lookahead)]
    max_lookahead: u32,
    #[arg(long, default_value_t = BudgetConfig::default().max_nodes_per_trie)]
    max_nodes_per_trie: usize,
    #[arg(long, default_value_t = BudgetConfig::default().dfa_state_cap)]
    dfa_state_cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    EndPositions,
    Anchored,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformArg {
    Lowercase,
    StripNewlines,
    None,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Mismatch(String),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Lib(e.into())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Format(_)
        | Error::ClassMap(_)
        | Error::PatternList { .. }
        | Error::InvalidAutomaton(_)
        | Error::MissingLookahead(_) => EXIT_PARSE,
        Error::StateCapExceeded { .. } | Error::InvalidBudget(_) => EXIT_BUDGET,
        Error::Io(_) | Error::Decode { .. } | Error::ForeignChar { .. } => EXIT_IO,
    }
}

impl BuildArgs {
    fn options(&self) -> Result<CompileOptions, Failure> {
        let alphabet = match &self.alphabet {
            None => Alphabet::Unicode,
            Some(text) => match parse_pattern(text)? {
                Ast::Set(set) => Alphabet::Restricted(set),
                _ => {
                    return Err(Failure::Usage(format!(
                        "--alphabet expects a single character class, got {text:?}"
                    )))
                }
            },
        };
        Ok(CompileOptions {
            mode: match self.mode {
                ModeArg::EndPositions => Mode::EndPositions,
                ModeArg::Anchored => Mode::Anchored,
            },
            alphabet,
            budget: BudgetConfig {
                max_lookahead: self.max_lookahead,
                max_nodes_per_trie: self.max_nodes_per_trie,
                dfa_state_cap: self.dfa_state_cap,
            },
        })
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Error> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read(path)?)
    }
}

fn format_step(s: &TraceStep) -> String {
    let mut line = format!(
        "step read {} class {} state {} -> {} theta {}",
        s.index, s.class, s.from, s.to, s.theta
    );
    if let Some(p) = s.emitted {
        line.push_str(&format!(" emit {p}"));
    }
    line
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Compile {
            pattern,
            build,
            out: path,
        } => {
            let c = compile(&pattern, &build.options()?)?;
            writeln!(out, "classes {}", c.class_count())?;
            writeln!(out, "dfa_states {}", c.dfa.state_count())?;
            let looks: Vec<String> = c.lookaheads().iter().map(u32::to_string).collect();
            writeln!(out, "lookaheads {}", looks.join(" "))?;
            writeln!(out, "ofa_states {}", c.ofa.state_count())?;
            if let Some(path) = path {
                fs::write(path, c.ofa.to_text())?;
            }
        }
        Command::Find {
            source,
            input,
            build,
            stats,
            trace,
            oracle_check,
        } => {
            let (ofa, dfa) = match (&source.pattern, &source.automaton) {
                (Some(p), _) => {
                    let c = compile(p, &build.options()?)?;
                    (c.ofa, Some(c.dfa))
                }
                (None, Some(path)) => (deserialize_ofa(&fs::read(path)?)?, None),
                (None, None) => unreachable!("clap requires one source"),
            };
            let text = decode_utf8(&read_input(&input)?)?;
            ofa.check_alphabet(&text)?;
            if trace {
                for step in ofa.trace_match(&text) {
                    writeln!(out, "{}", format_step(&step))?;
                }
            }
            let report = ofa.match_using_ofa(&text);
            for p in &report.positions {
                writeln!(out, "{p}")?;
            }
            if stats {
                writeln!(out, "chars_read {}", report.chars_read)?;
                writeln!(out, "len {}", text.len())?;
                writeln!(
                    out,
                    "skip {}/{} {:.6}",
                    text.len() - report.chars_read,
                    text.len(),
                    report.skip_fraction(text.len())
                )?;
            }
            if oracle_check {
                let forward = dfa
                    .expect("oracle check requires a pattern")
                    .forward_scan(&text);
                if forward.positions != report.positions {
                    out.flush()?;
                    return Err(Failure::Mismatch(format!(
                        "forward scan found {} positions, OFA found {}",
                        forward.positions.len(),
                        report.positions.len()
                    )));
                }
            }
        }
        Command::Bench {
            patterns,
            corpus,
            build,
            repetitions,
            parallel_compile,
            out: path,
        } => {
            let list = parse_pattern_list(&String::from_utf8_lossy(&fs::read(patterns)?))?;
            let text = decode_utf8(&fs::read(corpus)?)?;
            let config = BenchConfig {
                options: build.options()?,
                repetitions,
                parallel_compile,
            };
            let records = run_bench(&list, &text, &config);
            match path {
                Some(p) => write_csv(&records, fs::File::create(p)?)?,
                None => write_csv(&records, &mut out)?,
            }
        }
        Command::Dump { pattern, build } => {
            let c = compile(&pattern, &build.options()?)?;
            out.write_all(c.ofa.to_text().as_bytes())?;
        }
        Command::Trace {
            pattern,
            input,
            build,
        } => {
            let c = compile(&pattern, &build.options()?)?;
            let text: Vec<char> = input.chars().collect();
            c.ofa.check_alphabet(&text)?;
            writeln!(
                out,
                "start state {} index {}",
                c.ofa.start(),
                c.ofa.phi(c.ofa.start()).unwrap_or(0)
            )?;
            for step in c.ofa.trace_match(&text) {
                writeln!(out, "{}", format_step(&step))?;
            }
        }
        Command::Corpus {
            source,
            dest,
            size,
            transform,
        } => {
            let transform = match transform {
                TransformArg::Lowercase => Transform::Lowercase,
                TransformArg::StripNewlines => Transform::StripNewlines,
                TransformArg::None => Transform::None,
            };
            let written = make_corpus(&source, &dest, size, transform)?;
            writeln!(out, "wrote {written} bytes to {}", dest.display())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("ofa: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("ofa: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("ofa: oracle mismatch: {msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
    }
}
