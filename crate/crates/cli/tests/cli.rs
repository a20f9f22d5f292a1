use std::path::PathBuf;
use std::process::{Command, Output};

fn dlal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlal")).args(args).output().expect("binary runs")
}

fn sample(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("samples").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("dlal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).display().to_string()
}

#[test]
fn identity_is_typable_at_depth_zero() {
    let o = dlal(&["infer", &sample("id.f")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: typable"));
    assert!(out.contains("type: forall a. a -o a"));
    assert!(out.contains("depth: 0"));
    assert!(out.contains("verified: true"));
}

#[test]
fn exit_codes() {
    assert_eq!(dlal(&["infer", &sample("exp.f"), "--domain", "n:N"]).status.code(), Some(1));
    let bad = dlal(&["infer", &sample("ill_typed.f")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("type error"));
    assert_eq!(dlal(&["infer", &sample("missing.f")]).status.code(), Some(2));
    assert_eq!(dlal(&["infer", &sample("id.f"), "--domain", "q:N"]).status.code(), Some(2));
}

#[test]
fn untypable_reports_a_kernel() {
    let out = stdout(&dlal(&["infer", &sample("exp.f"), "--domain", "n:N"]));
    assert!(out.contains("verdict: untypable"));
    assert!(out.contains("kernel.0:"));
    assert!(out.contains("domain/nat at n"));
}

#[test]
fn reports_are_reproducible() {
    let a = dlal(&["infer", &sample("rev1010.f"), &sample("church2.f")]);
    let b = dlal(&["infer", &sample("rev1010.f"), &sample("church2.f"), "--sequential"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("== "));
}

#[test]
fn rev_subterm_type() {
    let out = stdout(&dlal(&["infer", &sample("rev1010.f"), "--at", "0"]));
    assert!(out.contains(
        "at.0: (forall a. (a -o a) => (a -o a) => $(a -o a)) -o forall b. (b -o b) => (b -o b) => $(b -o b)"
    ));
}

#[test]
fn json_record_has_every_stats_field() {
    let o = dlal(&["infer", &sample("church2.f"), "--json", "--stats"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    for key in [
        "verdict",
        "type",
        "depth",
        "bound",
        "params.door",
        "params.exponent",
        "params.bool",
        "constraints.total",
        "constraints.ltype",
        "constraints.bracket",
        "constraints.bang",
        "constraints.scope",
        "solver.linear_rows",
        "solver.pivots",
        "time.solve_ms",
        "term",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn constraint_dump() {
    let id = stdout(&dlal(&["constraints", &sample("id.f")]));
    assert!(id.lines().count() <= 12, "{id}");
    assert!(id.lines().all(|l| l.contains("# origin:")));
    let two = stdout(&dlal(&["constraints", &sample("church2.f"), "--split"]));
    assert!(two.contains("# boolean"));
    assert!(two.contains("# linear"));
    assert!(two.contains("# mixed"));
    assert!(two.contains("= 1  # origin: ltype/multiplicity"));
}

#[test]
fn dot_export() {
    let o = dlal(&["dot", &sample("id.f")]);
    assert_eq!(o.status.code(), Some(0));
    let g = stdout(&o);
    assert!(g.starts_with("digraph"));
    assert!(!g.contains("triangle"));
    assert_eq!(dlal(&["dot", &sample("x2_plain.f")]).status.code(), Some(1));
}

#[test]
fn corpus_terms_print_and_parse_back() {
    for args in [vec!["nat", "3"], vec!["word", "1010"], vec!["rev"], vec!["pred", "2"], vec!["poly", "3X^2+1"]] {
        let mut full = vec!["corpus"];
        full.extend(args.iter().copied());
        let o = dlal(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let f = tmp(&format!("{}.f", args.join("_")));
        std::fs::write(&f, &o.stdout).unwrap();
        let c = dlal(&["infer", &f]);
        assert_ne!(c.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&c.stderr));
    }
}

#[test]
fn check_round_trip() {
    let pterm = tmp("church2.pterm");
    let witness = tmp("church2.inst");
    let o = dlal(&["infer", &sample("church2.f"), "--pterm-out", &pterm, "--witness-out", &witness]);
    assert_eq!(o.status.code(), Some(0));
    let c = dlal(&["check", &pterm, &witness]);
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
    assert!(stdout(&c).starts_with("pass"));
}

#[test]
fn check_pseudo_term_file() {
    let f = tmp("dereliction.p");
    std::fs::write(&f, "\\x:$a. ~x").unwrap();
    let c = dlal(&["check", &f]);
    assert_eq!(c.status.code(), Some(1));
    assert!(stdout(&c).contains("ii.b"));
}

#[test]
fn external_solver_handshake() {
    let lp = tmp("rev.lp");
    let o = dlal(&["infer", &sample("church2.f"), "--lp-out", &lp]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&lp).unwrap();
    assert!(text.starts_with("min "));
    // Feed back the all-zero assignment: it violates the multiplicity rows.
    let sol = tmp("zero.sol");
    std::fs::write(&sol, "").unwrap();
    let back = dlal(&["infer", &sample("church2.f"), "--lp-in", &sol]);
    assert_eq!(back.status.code(), Some(2));
    // The simplex witness, written back as a solution file, is accepted.
    let witness = tmp("church2.w");
    dlal(&["infer", &sample("church2.f"), "--witness-out", &witness]);
    let ints: String = std::fs::read_to_string(&witness)
        .unwrap()
        .lines()
        .filter(|l| l.starts_with('m') || l.starts_with('n'))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&sol, ints).unwrap();
    assert_eq!(dlal(&["infer", &sample("church2.f"), "--lp-in", &sol]).status.code(), Some(0));
}
