use std::path::PathBuf;
use std::process::{Command, Output};

fn hf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hf"))
        .args(args)
        .output()
        .expect("run hf")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn corpus(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn encode_and_decode() {
    let o = hf(&["encode", "{{}, {{}}}"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "3"));
    let o = hf(&["decode", "11"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "{{}, {{}}, {{}, {{}}}}"));
}

#[test]
fn eval_exit_codes() {
    assert_eq!(
        code(&hf(&[
            "eval",
            "--arith",
            "x + 1 = y",
            "-b",
            "x=2",
            "-b",
            "y=3"
        ])),
        0
    );
    assert_eq!(
        code(&hf(&["eval", "--arith", "x < y", "-b", "x=3", "-b", "y=2"])),
        1
    );
    assert_eq!(
        code(&hf(&[
            "eval", "--set", "x in y", "-b", "x={}", "-b", "y=#1"
        ])),
        0
    );
    let o = hf(&["eval", "--arith", "exp(2, exp(2, x)) = 0", "-b", "x=40"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn unbounded_verdicts_name_the_cutoff() {
    let o = hf(&[
        "eval",
        "--arith",
        "exists z. z = z + 1",
        "--nat-cutoff",
        "16",
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "false at cutoff 16");
    let o = hf(&["eval", "--arith", "exists z < 4. z = 3"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn bad_input_is_64() {
    for args in [
        &["eval", "--arith", "forall"][..],
        &["decode", "abc"],
        &["verify", "nope"],
        &["frobnicate"],
        &["eval", "--arith", "x = y", "-b", "x=1"],
    ] {
        let o = hf(args);
        assert_eq!(code(&o), 64, "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn wrong_language_is_65() {
    let o = hf(&["eval", "--set", "x < y"]);
    assert_eq!(code(&o), 65);
    assert!(stderr(&o).contains("language mismatch"));
    assert_eq!(code(&hf(&["translate", "--map", "a", "x < y"])), 65);
}

#[test]
fn translations_chain() {
    let o = hf(&["translate", "--map", "d", "x < y"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "x <_a y"));
    let o = hf(&["translate", "--map", "d", "--map", "a", "x < y"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(!stdout(&o).contains("_a"));
}

#[test]
fn verify_exit_codes() {
    let small = ["--max-code", "32", "--literal-max", "8"];
    let ok = hf(&[&["verify", "theorem6"][..], &small].concat());
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    let bad = hf(&[
        &["verify", "theorem6", "--fault-successor", "1"][..],
        &small,
    ]
    .concat());
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("counterexample"));

    let big = corpus("big.txt", "exp(2, exp(2, exp(2, x))) = y\n");
    let budget = hf(&[
        "verify",
        "roundtrip-da",
        "--corpus",
        big.to_str().unwrap(),
        "--assignment-max",
        "16",
        "--budget-bits",
        "64",
    ]);
    assert_eq!(code(&budget), 2, "{}", stdout(&budget));
    assert_eq!(
        code(&hf(&[
            "verify",
            "roundtrip-da",
            "--corpus",
            "/nonexistent/corpus"
        ])),
        64
    );
}

#[test]
fn json_reports_are_reproducible() {
    let args = [
        "verify",
        "opei",
        "--set-cutoff",
        "32",
        "--format",
        "json",
        "--no-timestamp",
    ];
    let (a, b) = (hf(&args), hf(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["suite"], "opei");
    assert!(v.get("timestamp").is_none());
    let stamped: serde_json::Value = serde_json::from_slice(&hf(&args[..6]).stdout).unwrap();
    assert!(stamped["timestamp"].is_u64());
}
