use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn overfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_overfree")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_exit_codes_follow_the_verdict() {
    assert_eq!(code(&overfree(&["run", &data("block.tm"), "--input", "001100"])), 0);
    assert_eq!(code(&overfree(&["run", &data("block.tm"), "--input", "0110"])), 1);
    assert_eq!(code(&overfree(&["run", &data("block.tm"), "--input", "001100", "--max-steps", "3"])), 2);
    assert_eq!(code(&overfree(&["run", &data("block.tm")])), 3);
    assert_eq!(code(&overfree(&["run", &data("block.tm"), "--input", "2"])), 3);
}

#[test]
fn traces_have_one_line_per_step() {
    let o = overfree(&["run", &data("block.tm"), "--input", "010", "--trace"]);
    let out = stdout(&o);
    let steps: usize = out.lines().find_map(|l| l.strip_prefix("steps: ")).unwrap().parse().unwrap();
    let trace_lines = out.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count();
    assert_eq!(trace_lines, steps + 1);
    let o = overfree(&["run", &data("palindrome.ed"), "--input", "abba", "--trace"]);
    assert!(stdout(&o).lines().next().unwrap().contains("weight=4.0000"));
}

#[test]
fn witness_file_replays() {
    let dir = tempfile::tempdir().unwrap();
    let o = overfree(&["cfl", "--grammar", &data("parens.cfg"), "--word", "(())", "--via", "editing"]);
    assert_eq!(code(&o), 0);
    let witness = stdout(&o).lines().find_map(|l| l.strip_prefix("witness: ")).unwrap().to_string();
    // The grammar machine itself, as a file, replays the same choices.
    let m = overfree::cfl::grammar_to_editing_tm(&overfree::cfl::CnfGrammar::parse(&std::fs::read_to_string(data("parens.cfg")).unwrap()).unwrap()).unwrap();
    let mpath = dir.path().join("parens.ed");
    std::fs::write(&mpath, overfree::format::print_machine(&overfree::format::AnyMachine::Editing(m))).unwrap();
    let wpath = dir.path().join("w.txt");
    std::fs::write(&wpath, witness).unwrap();
    let o = overfree(&["run", mpath.to_str().unwrap(), "--input", "(())", "--witness", wpath.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn equiv_reports() {
    let o = overfree(&["equiv", &data("palindrome.ts"), &data("anbn.rrw"), "--max-len", "4"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("counterexample \"\""));
    let o = overfree(&["equiv", &data("block.tm"), &data("block.tm"), "--max-len", "5"]);
    assert_eq!(code(&o), 0);
    let o = overfree(&["equiv", &data("block.tm"), &data("block.tm"), "--max-len", "5", "--max-steps", "2"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&overfree(&["equiv", &data("block.tm"), &data("anbn.rrw"), "--max-len", "2"])), 3);
}

#[test]
fn compile_tables_and_handles() {
    let dir = tempfile::tempdir().unwrap();
    let out = |n: &str| dir.path().join(n).display().to_string();
    for (from, to, name, extra) in [
        ("block.tm", "two-stack", "block.ts", None),
        ("anbn.rrw", "two-stack", "anbn.ts", None),
        ("palindrome.ts", "of-tm", "pal.handle", None),
        ("palindrome.ts", "of-tm", "pal.tm", Some("--enumerate")),
        ("palindrome.ed", "of-tm", "ped.handle", None),
    ] {
        let src = data(from);
        let mut args = vec!["compile", "--from", &src, "--to", to, "--out"];
        let o = out(name);
        args.push(&o);
        args.extend(extra);
        assert_eq!(code(&overfree(&args)), 0, "{from} -> {to}");
    }
    let pairs = [("block.tm", "block.ts", 6), ("anbn.rrw", "anbn.ts", 8), ("palindrome.ts", "pal.handle", 5), ("palindrome.ts", "pal.tm", 5), ("palindrome.ed", "ped.handle", 5)];
    for (src, tgt, n) in pairs {
        let o = overfree(&["equiv", &data(src), &out(tgt), "--max-len", &n.to_string()]);
        assert_eq!(code(&o), 0, "{src} vs {tgt}: {}", stdout(&o));
    }
    assert_eq!(code(&overfree(&["compile", "--from", &data("anbn.rrw"), "--to", "of-tm", "--out", &out("x")])), 3);
}

#[test]
fn cfl_routes_agree() {
    for via in ["cyk", "editing", "of"] {
        assert_eq!(code(&overfree(&["cfl", "--grammar", &data("ab.cfg"), "--word", "ab", "--via", via])), 0);
        assert_eq!(code(&overfree(&["cfl", "--grammar", &data("ab.cfg"), "--word", "aa", "--via", via])), 1);
    }
    let o = overfree(&["cfl", "--grammar", &data("parens.cfg"), "--word", "(()())", "--via", "editing", "--audit-weight"]);
    assert!(stdout(&o).contains("slack: "));
}

#[test]
fn enum_lists_in_shortlex_order() {
    let o = overfree(&["enum", &data("power2.ts"), "--max-len", "9"]);
    assert_eq!(stdout(&o), "a\naa\naaaa\naaaaaaaa\n");
}

#[test]
fn bad_files_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.tm");
    std::fs::write(&p, "model: queue\n").unwrap();
    let o = overfree(&["run", p.to_str().unwrap(), "--input", ""]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}
