use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_planefield");

fn problem(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}.pf"));
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str], file: &PathBuf, stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .arg(file)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const LINEAR: &str = "vars x y\ncodim 1\nomega x*dy - 2*y*dx\nhyp x\nhyp y\n";

#[test]
fn integrate_linear_machine() {
    let f = problem("linear", LINEAR);
    let o = run(&["integrate", "--machine"], &f, None);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("kernel.0 = [-2, 1]\n"), "{out}");
    assert!(out.contains("component.0 = y * x^-2\n"), "{out}");
    assert!(out.contains("verified = true\n"), "{out}");
}

#[test]
fn machine_output_is_deterministic() {
    let f = problem(
        "det",
        "vars x y z\ncodim 2\nomega x*dy^dz - y*dx^dz + z*dx^dy\nhyp x\nhyp y\nhyp z\n",
    );
    let a = run(&["integrate", "--machine"], &f, None);
    let b = run(&["integrate", "--machine"], &f, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_accepts_genuine_and_rejects_forged_reports() {
    let f = problem("verify", LINEAR);
    let genuine = run(&["integrate", "--machine"], &f, None).stdout;
    let o = run(&["verify", "--machine"], &f, Some(&genuine));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let forged = String::from_utf8(genuine)
        .unwrap()
        .replace("kernel.0 = [-2, 1]", "kernel.0 = [-1, 1]")
        .replace("component.0 = y * x^-2", "component.0 = y * x^-1")
        .replace("exponents.0 = [-2, 1]", "exponents.0 = [-1, 1]");
    let o = run(&["verify", "--machine"], &f, Some(forged.as_bytes()));
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("verified = false"));
}

#[test]
fn exit_codes() {
    let not_lds = problem("notlds", "vars x y z w\ncodim 2\nomega dx^dy + dz^dw\n");
    assert_eq!(run(&["check"], &not_lds, None).status.code(), Some(1));

    let not_inv = problem("notinv", "vars x y\ncodim 1\nomega x*dy - y*dx\nhyp x + 1\n");
    let o = run(&["invariant", "--machine"], &not_inv, None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status = not_invariant"));

    let insufficient = problem(
        "insuff",
        "vars x y z\ncodim 2\nomega x*dy^dz - y*dx^dz + z*dx^dy\nhyp x\nhyp y\n",
    );
    let o = run(&["integrate", "--machine"], &insufficient, None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status = insufficient"));

    let bad = problem("bad", "vars x y\nomega (x+y\n");
    let o = run(&["check"], &bad, None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));

    let missing = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("does-not-exist.pf");
    assert_eq!(run(&["check"], &missing, None).status.code(), Some(2));
}

#[test]
fn quiet_prints_nothing() {
    let f = problem("quiet", LINEAR);
    let o = run(&["integrate", "--quiet"], &f, None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

mod common;

#[test]
fn problem_file_roundtrip() {
    use planefield::cli::{parse_problem, ProblemFile};
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(2..=4);
        let codim = rng.gen_range(1..n);
        let p = ProblemFile {
            vars: common::names(n),
            codim,
            omega: common::form(&mut rng, n, codim, 2),
            hyps: (0..rng.gen_range(0..=3)).map(|_| common::nonzero_poly(&mut rng, n, 2, 3)).collect(),
            options: Default::default(),
        };
        let text = p.serialize();
        assert_eq!(parse_problem(&text).unwrap(), p, "{text}");
    }
}
