use std::fs;
use std::process::{Command, Output};

fn ofa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ofa"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const ABB: [&str; 5] = ["(a|b)*(abb)+", "--mode", "anchored", "--alphabet", "[ab]"];

#[test]
fn compile_reports_lookaheads() {
    let o = ofa(&[&["compile"][..], &ABB].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "classes 2\ndfa_states 4\nlookaheads 3 2 1 3\nofa_states 9\n"
    );
}

#[test]
fn compile_counts_classes() {
    let o = ofa(&["compile", "benjamin franklin"]);
    assert!(stdout(&o).starts_with("classes 13\n"));
    let o = ofa(&["compile", "benjamin|franklin"]);
    assert!(stdout(&o).starts_with("classes 12\n"));
}

#[test]
fn find_prints_positions_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, "abbabaabb").unwrap();
    let path = input.to_str().unwrap();
    let o = ofa(&[&["find", "-p"][..], &ABB, &[path]].concat());
    assert_eq!(stdout(&o), "3\n9\n");
    let o = ofa(&[
        &["find", "--stats", "--oracle-check", "-p"][..],
        &ABB,
        &[path],
    ]
    .concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n9\nchars_read 7\nlen 9\nskip 2/9 0.222222\n");
}

#[test]
fn find_with_a_saved_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("abb.ofa");
    let input = dir.path().join("in.txt");
    fs::write(&input, "abbabaabb").unwrap();
    let o = ofa(&[&["compile"][..], &ABB, &["-o", saved.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let o = ofa(&[
        "find",
        "-a",
        saved.to_str().unwrap(),
        input.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o), "3\n9\n");
    let dumped = ofa(&[&["dump"][..], &ABB].concat());
    assert_eq!(stdout(&dumped), fs::read_to_string(&saved).unwrap());

    fs::write(&saved, "OFA 7\n").unwrap();
    let o = ofa(&[
        "find",
        "-a",
        saved.to_str().unwrap(),
        input.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trace_lists_every_read() {
    let o = ofa(&[&["trace"][..], &ABB[..1], &["abbabaabb"], &ABB[1..]].concat());
    let text = stdout(&o);
    let reads: Vec<&str> = text
        .lines()
        .filter_map(|l| l.strip_prefix("step read "))
        .map(|l| l.split(' ').next().unwrap())
        .collect();
    assert_eq!(reads, ["2", "1", "0", "5", "7", "6", "8"]);
    assert!(text.starts_with("start state 0 index 2\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(ofa(&[]).status.code(), Some(1));
    assert_eq!(
        ofa(&["compile", "a", "--mode", "sideways"]).status.code(),
        Some(1)
    );
    assert_eq!(ofa(&["compile", ""]).status.code(), Some(2));
    assert_eq!(ofa(&["compile", "a("]).status.code(), Some(2));
    assert_eq!(
        ofa(&["compile", "a", "--max-lookahead", "0"]).status.code(),
        Some(3)
    );
    assert_eq!(
        ofa(&[
            "compile",
            "[ab]*a[ab][ab][ab][ab][ab][ab]",
            "--dfa-state-cap",
            "8"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        ofa(&["find", "-p", "a", "/nonexistent/input"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(ofa(&["--help"]).status.code(), Some(0));
    // --oracle-check needs a pattern to build the forward scanner
    assert_eq!(
        ofa(&["find", "-a", "x.ofa", "--oracle-check", "in"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn undecodable_and_foreign_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, b"ab\xffb").unwrap();
    assert_eq!(
        ofa(&["find", "-p", "b", bad.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
    let foreign = dir.path().join("foreign.txt");
    fs::write(&foreign, "abcabb").unwrap();
    let o = ofa(&[&["find", "-p"][..], &ABB, &[foreign.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn oracle_check_over_many_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let text: String = (0..2000)
        .map(|i| ['a', 'b', 'c', '\n'][(i * 7 + i / 3) % 4])
        .collect();
    fs::write(&input, &text).unwrap();
    for p in ["a(b|c)*a", "(ab|ba)+c", "[^a].b", "ccc|abab"] {
        for mode in ["end-positions", "anchored"] {
            let o = ofa(&[
                "find",
                "--oracle-check",
                "--mode",
                mode,
                "-p",
                p,
                input.to_str().unwrap(),
            ]);
            assert_eq!(o.status.code(), Some(0), "{p} {mode}");
        }
    }
}

#[test]
fn corpus_and_bench() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.txt");
    let corpus = dir.path().join("corpus.txt");
    fs::write(&src, "AC\nGT\nTTTTTTTTTTTA\n").unwrap();
    let o = ofa(&[
        "corpus",
        src.to_str().unwrap(),
        corpus.to_str().unwrap(),
        "--size",
        "100000",
        "--transform",
        "strip-newlines",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::metadata(&corpus).unwrap().len(), 100_000);

    let patterns = dir.path().join("patterns.tsv");
    fs::write(
        &patterns,
        "# id\tpattern\ndna6\tTTTTTTTTTT[AG]\nbroken\t(\n",
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let o = ofa(&[
        "bench",
        patterns.to_str().unwrap(),
        corpus.to_str().unwrap(),
        "-r",
        "2",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let records = ofa_core::bench::read_csv(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].max_lookahead, Some(11));
    assert_eq!(records[0].class_count, Some(3));
    assert!(records[1].error.is_some());
}
