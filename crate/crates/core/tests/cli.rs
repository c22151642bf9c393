use std::path::PathBuf;

use dgms::cli::run_cli;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    let argv: Vec<String> = std::iter::once("dgms").chain(args.iter().copied()).map(String::from).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(&argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

/// The part between the result markers.
fn block(stdout: &str) -> &str {
    let start = stdout.find("--- result ---\n").expect("result block") + "--- result ---\n".len();
    let end = stdout.find("--- end ---").expect("end marker");
    &stdout[start..end]
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dgms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const HOUSEHOLD_UTILS: &str = "\
utility player=1 outcome=c:v1 value=0
utility player=1 outcome=t1 value=-1
utility player=1 outcome=t2 value=2
utility player=2 outcome=c:v1 value=0
utility player=2 outcome=t1 value=2
utility player=2 outcome=t2 value=-1
";

fn household() -> String {
    let r = run(&["gen", "household", "--n", "2"], "");
    assert_eq!(r.code, 0);
    r.stdout
}

#[test]
fn gen_household_document() {
    assert_eq!(
        household(),
        "players 2\nnode v1 player=1\nnode v2 player=2\nnode t1 terminal\nnode t2 terminal\n\
         edge v1 v2\nedge v2 v1\nedge v1 t1\nedge v2 t2\nedge t1 t1\nedge t2 t2\n"
    );
}

#[test]
fn solve_winlose_from_stdin() {
    let r = run(&["solve-winlose", "--win", "t1", "--from", "v1"], &household());
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        block(&r.stdout),
        "winner(v1)=1\nwinner(v2)=2\nwinner(t1)=1\nwinner(t2)=2\nv1 -> t1\nv2 -> t2\noutcome=t1\nsteps=3\n"
    );
}

#[test]
fn nash_on_household() {
    let game = temp_file("h2.game", &household());
    let utils = temp_file("h2.utils", HOUSEHOLD_UTILS);
    let r = run(&["nash", "--game", game.to_str().unwrap(), "--utils", utils.to_str().unwrap(), "--from", "v1"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(block(&r.stdout), "v1 -> v2\nv2 -> v1\noutcome=c:v1\nsolve_count=3\nsimple=true\n");
}

#[test]
fn zerosum_and_oracle_agree() {
    let game = temp_file("z.game", &household());
    let utils = temp_file(
        "z.utils",
        "utility player=1 outcome=c:v1 value=1/2\nutility player=1 outcome=t1 value=0\nutility player=1 outcome=t2 value=1\n\
         utility player=2 outcome=c:v1 value=1/2\nutility player=2 outcome=t1 value=1\nutility player=2 outcome=t2 value=0\n",
    );
    let (g, u) = (game.to_str().unwrap(), utils.to_str().unwrap());
    let r = run(&["solve-zerosum", "--game", g, "--utils", u, "--from", "v1"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        block(&r.stdout),
        "value(v1)=1/2\nvalue(v2)=1/2\nvalue(t1)=0\nvalue(t2)=1\nv1 -> v2\nv2 -> v1\noutcome=c:v1\n"
    );
    let r = run(&["oracle", "--game", g, "--utils", u, "--check", "value"], "");
    assert_eq!(block(&r.stdout), "value(v1)=1/2\nvalue(v2)=1/2\nvalue(t1)=0\nvalue(t2)=1\n");

    let profile = temp_file("z.profile", "v1 -> v2\nv2 -> v1\n");
    let p = profile.to_str().unwrap();
    let r = run(&["oracle", "--game", g, "--utils", u, "--profile", p, "--check", "spne"], "");
    assert_eq!(block(&r.stdout), "result=true\n");
    let r = run(&["oracle", "--game", g, "--utils", u, "--profile", p, "--check", "ne", "--from", "v1"], "");
    assert_eq!(block(&r.stdout), "nash(v1)=true\nresult=true\n");
    let r = run(&["oracle", "--game", g, "--utils", u, "--profile", p, "--check", "ne", "--max-profiles", "3"], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("cap is 3"), "{}", r.stderr);
}

#[test]
fn unknown_outcome_is_an_input_error() {
    let r = run(&["solve-winlose", "--win", "nonexistent_outcome"], &household());
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("nonexistent_outcome"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"], "").code, 1);
    assert_eq!(run(&["solve-winlose", "--bogus"], "").code, 1);
    assert_eq!(run(&["solve-winlose", "--game", "/nonexistent/file"], "").code, 1);
    let r = run(&["solve-winlose", "--win", "t1"], "players 2\nnode v1 player=3\n");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    assert_eq!(run(&["--help"], "").code, 0);
}

#[test]
fn gen_random_is_reproducible() {
    let args = ["gen", "random", "--vertices", "6", "--density", "0.3", "--terminal-fraction", "0.3", "--seed", "42"];
    let a = run(&args, "");
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, run(&args, "").stdout);
    assert_eq!(run(&["gen", "random", "--vertices", "5", "--terminal-fraction", "1.0"], "").code, 1);
}

#[test]
fn bench_prints_sizes() {
    let r = run(&["bench", "--min", "1000", "--max", "4000", "--repeat", "1"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let sizes: Vec<&str> = r.stdout.lines().skip(1).map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(sizes, ["1000", "2000", "4000"]);
}
