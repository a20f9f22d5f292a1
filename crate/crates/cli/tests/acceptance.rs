//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use dlal_core::constraints::{Constraint, ConstraintSet, Family, Origin};
use dlal_core::corpus::{
    church_nat, exp_term, monomial_term, monomial_term_plain, parse_bits, pred_applied, rev_applied,
};
use dlal_core::datatypes::{nat_step_bang, Sort};
use dlal_core::dlal_types::DlalType;
use dlal_core::fsyntax::{parse_term, FTerm, IdGen};
use dlal_core::param::{BoolParam, IntParam, LinComb};
use dlal_core::pipeline::{build, infer, InferOptions, InferenceReport, Verdict};
use dlal_core::pseudo::parse_pseudo;
use dlal_core::solver::{
    scale_to_integers, solve_bool, solve_detailed, solve_linear, RationalSource, Row, RowKind, SolverStats,
};
use dlal_core::verify::{check_bang, check_bracketing, check_scope, check_well_structured};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const ID_LIMIT: Duration = Duration::from_secs(1);
const NAT_LIMIT: Duration = Duration::from_secs(2);
const REV_PRED_LIMIT: Duration = Duration::from_secs(10);
const EXP_LIMIT: Duration = Duration::from_secs(5);
const CHECK_LIMIT: Duration = Duration::from_millis(100);
const POLY_LIMIT: Duration = Duration::from_secs(60);
const REV_ROWS: (usize, usize) = (100, 300);
const REV_INT_PARAMS: (usize, usize) = (40, 150);
const PRED_ROWS: (usize, usize) = (110, 330);
const GROWTH_FACTOR: f64 = 3.0;
const BOOL_SYSTEMS: usize = 200;
const BOOL_MAX_PARAMS: u32 = 12;
const RATIONAL_SOLUTIONS: usize = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Every typable report produced while checking criteria 1 to 7.
#[derive(Default)]
struct Gate {
    typable: usize,
    verified: usize,
}

impl Gate {
    fn see(&mut self, r: &InferenceReport) {
        if r.verdict == Verdict::Typable {
            self.typable += 1;
            if r.verified && r.check.as_ref().is_some_and(|c| c.passed()) {
                self.verified += 1;
            }
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn run(term: &FTerm, opts: &InferOptions, gate: &mut Gate) -> (InferenceReport, Duration) {
    let (r, d) = timed(|| infer(term, opts));
    gate.see(&r);
    (r, d)
}

fn nat() -> DlalType {
    DlalType::nat(&mut IdGen::new())
}

fn word() -> DlalType {
    DlalType::word(&mut IdGen::new())
}

fn criterion_1(gate: &mut Gate) -> Outcome {
    let t = parse_term("/\\a. \\x:a. x").unwrap();
    let (r, d) = run(&t, &InferOptions::default(), gate);
    let mut g = IdGen::new();
    let a = g.tyvar("a");
    let expected = DlalType::forall(a.clone(), DlalType::lolli(DlalType::var(&a), DlalType::var(&a)));
    let ok_type = r.dlal_type.as_ref().is_some_and(|ty| ty.alpha_eq(&expected));
    outcome(
        r.verdict == Verdict::Typable && ok_type && r.depth == Some(0) && d < ID_LIMIT,
        format!("{} at {} depth {:?} in {d:.2?}", r.verdict, show(&r.dlal_type), r.depth),
    )
}

fn show(t: &Option<DlalType>) -> String {
    t.as_ref().map_or("-".to_string(), |t| t.to_string())
}

fn criterion_2(gate: &mut Gate) -> Outcome {
    let opts = InferOptions { result: Some(Sort::Nat), ..Default::default() };
    let mut pass = true;
    let mut notes = Vec::new();
    for k in 0..=5 {
        let (r, d) = run(&church_nat(k), &opts, gate);
        let root = r.generated.as_ref().map(|g| g.typing.root_type().clone());
        let b3 = root.as_ref().and_then(nat_step_bang);
        let ones: Vec<BoolParam> = r
            .witness
            .as_ref()
            .map(|w| w.bools.iter().filter(|(_, v)| **v).map(|(b, _)| *b).collect())
            .unwrap_or_default();
        let only_b3 = b3.is_some_and(|b| ones == vec![b]);
        let ok = r.verdict == Verdict::Typable && r.verified && (k < 2 || only_b3) && d < NAT_LIMIT;
        pass &= ok;
        notes.push(format!("k={k}:{}{}", if ok { "ok" } else { "FAIL" }, if only_b3 { "[b3]" } else { "" }));
    }
    outcome(pass, notes.join(" "))
}

fn criterion_3(gate: &mut Gate) -> Outcome {
    let (r, d) = run(&rev_applied(&parse_bits("1010").unwrap()), &InferOptions::default(), gate);
    let sub = r.type_at(&[0]);
    let expected = DlalType::lolli(word(), word());
    let ok_sub = sub.as_ref().is_some_and(|t| t.alpha_eq(&expected));
    let rows = r.stats.solver.linear_rows;
    let ints = r.stats.int_params();
    let quadratic = r.depth == Some(1) && r.bound.as_deref().is_some_and(|b| b.ends_with("^(2^1)"));
    let pass = r.verdict == Verdict::Typable
        && ok_sub
        && quadratic
        && (REV_ROWS.0..=REV_ROWS.1).contains(&rows)
        && (REV_INT_PARAMS.0..=REV_INT_PARAMS.1).contains(&ints)
        && d < REV_PRED_LIMIT;
    outcome(
        pass,
        format!(
            "rev : {}; bound {}; {rows} constraints (of {} before the boolean phase), {ints} integer parameters; {d:.2?}",
            show(&sub),
            r.bound.clone().unwrap_or_default(),
            r.stats.constraints
        ),
    )
}

fn criterion_4(gate: &mut Gate) -> Outcome {
    let (r, d) = run(&pred_applied(2), &InferOptions::default(), gate);
    let sub = r.type_at(&[0]);
    let expected = DlalType::lolli(nat(), nat());
    let ok_sub = sub.as_ref().is_some_and(|t| t.alpha_eq(&expected));
    let rows = r.stats.solver.linear_rows;
    let pass =
        r.verdict == Verdict::Typable && ok_sub && (PRED_ROWS.0..=PRED_ROWS.1).contains(&rows) && d < REV_PRED_LIMIT;
    outcome(
        pass,
        format!(
            "pred : {}; {rows} constraints, {} parameters; {d:.2?}",
            show(&sub),
            r.stats.int_params() + r.stats.bool_params
        ),
    )
}

fn samples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("samples")
}

fn criterion_5(gate: &mut Gate) -> Outcome {
    let (free, d1) = run(&exp_term(), &InferOptions::default(), gate);
    let opts = InferOptions { domain: "n:N".parse().unwrap(), ..Default::default() };
    let (dom, d2) = run(&exp_term(), &opts, gate);
    let exit = Command::new(env!("CARGO_BIN_EXE_dlal"))
        .arg("infer")
        .arg(samples().join("exp.f"))
        .args(["--domain", "n:N"])
        .output()
        .map(|o| o.status.code())
        .unwrap_or(None);
    let pass = free.verdict == Verdict::Typable
        && dom.verdict == Verdict::Untypable
        && exit == Some(1)
        && d1 < EXP_LIMIT
        && d2 < EXP_LIMIT;
    outcome(
        pass,
        format!(
            "no domain: {} ({d1:.2?}); n:N: {} with {} kernel rows ({d2:.2?}); cli exit {exit:?}",
            free.verdict,
            dom.verdict,
            dom.kernel.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let term = |s: &str| parse_pseudo(s).unwrap().term;
    let mut pass = true;
    let mut slowest = Duration::ZERO;
    let mut note = |ok: bool, d: Duration| {
        pass &= ok && d < CHECK_LIMIT;
        slowest = slowest.max(d);
    };
    for src in ["\\x:$a. ~x", "\\x:$a. $x"] {
        let t = term(src);
        let (f, d) = timed(|| check_bracketing(&t));
        note(f.iter().any(|f| f.clause == "ii.b"), d);
    }
    let t1 = term("\\x:$forall a. a. /\\a. $((~x) [a])");
    let t2 = term("\\x:forall a. $a. $/\\a. ~(x [a])");
    let (r1, d1) = timed(|| check_well_structured(&t1));
    note(r1.passed(), d1);
    let (s2, d2) = timed(|| check_scope(&t2));
    note(!s2.is_empty(), d2);
    for src in ["\\x:!(a -o b). \\y:!b -o c. \\z:!a. y $((~x) ~z)", "\\x:$a. \\y:!a -o b. y $(~x)"] {
        let t = term(src);
        let (f, d) = timed(|| check_bang(&t));
        note(f.iter().any(|f| f.clause == "i"), d);
    }
    outcome(pass, format!("7 checks, slowest {slowest:.2?}"))
}

/// `A -o $^k B`, returning `(A, k, B)`.
fn split_result(t: &DlalType) -> Option<(&DlalType, usize, &DlalType)> {
    let DlalType::Lolli(a, b) = t else { return None };
    let mut k = 0;
    let mut cur = &**b;
    while let DlalType::Para(inner) = cur {
        k += 1;
        cur = inner;
    }
    Some((a, k, cur))
}

fn criterion_7(gate: &mut Gate) -> Outcome {
    let opts = InferOptions { domain: "x:N".parse().unwrap(), ..Default::default() };
    let nat_prime = DlalType::nat_prime(&mut IdGen::new());
    let mut pass = true;
    let mut notes = Vec::new();
    for n in [2u32, 3] {
        let (r, d) = run(&monomial_term(n), &opts, gate);
        let shape = r.dlal_type.as_ref().and_then(split_result);
        let k = shape.map(|(_, k, _)| k);
        let ok_shape =
            shape.is_some_and(|(a, _, b)| a.alpha_eq(&nat()) && (b.alpha_eq(&nat()) || b.alpha_eq(&nat_prime)));
        let ok = r.verdict == Verdict::Typable && ok_shape && k.is_some_and(|k| k <= 4 * n as usize) && d < POLY_LIMIT;
        pass &= ok;
        notes.push(format!("X^{n}: k={k:?} (4n-3={}) {d:.2?}", 4 * n - 3));
    }
    let (plain, _) = run(&monomial_term_plain(2), &InferOptions::default(), gate);
    pass &= plain.verdict == Verdict::Untypable;
    notes.push(format!("X^2 without coercions: {}", plain.verdict));
    outcome(pass, notes.join("; "))
}

/// Fit `count ~ c * x^2` in log space and report the worst ratio to the fit.
fn quadratic_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let logc = points.iter().map(|(x, y)| (y / (x * x)).ln()).sum::<f64>() / points.len() as f64;
    let c = logc.exp();
    let worst = points.iter().map(|(x, y)| (y / (c * x * x)).max(c * x * x / y)).fold(1.0, f64::max);
    (c, worst)
}

fn criterion_8() -> Outcome {
    let mut total = Vec::new();
    let mut linear = Vec::new();
    let mut by_k = Vec::new();
    for k in 1..=10 {
        let t = church_nat(k);
        let b = build(&t, &InferOptions::default()).unwrap();
        let size = t.size().0 as f64;
        let rows =
            solve_detailed(&b.constraints, Some(&b.decorated.params), &RationalSource::Supplied(BTreeMap::new()))
                .stats
                .linear_rows;
        total.push((size, b.constraints.len() as f64));
        linear.push((size, rows as f64));
        by_k.push((k as f64, b.constraints.len() as f64));
    }
    let (c1, w1) = quadratic_fit(&total);
    let (c2, w2) = quadratic_fit(&linear);
    let (c3, w3) = quadratic_fit(&by_k);
    outcome(
        w1 <= GROWTH_FACTOR && w2 <= GROWTH_FACTOR,
        format!(
            "vs size^2: total c={c1:.3} worst x{w1:.2}, linear rows c={c2:.3} worst x{w2:.2}; vs k^2 (logged): c={c3:.2} worst x{w3:.2}"
        ),
    )
}

fn criterion_9(gate: &Gate) -> Outcome {
    outcome(
        gate.typable > 0 && gate.verified == gate.typable,
        format!("{} of {} typable verdicts re-checked", gate.verified, gate.typable),
    )
}

fn random_bool_system(rng: &mut StdRng) -> (ConstraintSet, u32) {
    let n = rng.random_range(1..=BOOL_MAX_PARAMS);
    let m = rng.random_range(0..=2 * n as usize);
    let origin = Origin::new(Family::Ltype, "random", "root");
    let mut set = ConstraintSet::new();
    for _ in 0..m {
        let a = BoolParam(rng.random_range(0..n));
        let b = BoolParam(rng.random_range(0..n));
        let c = match rng.random_range(0..10) {
            0..=3 => Constraint::BoolEq(a, b),
            4..=6 => Constraint::BoolImp(a, b),
            7..=8 => Constraint::BoolConst(a, true),
            _ => Constraint::BoolConst(a, false),
        };
        set.insert(c, origin.clone());
    }
    (set, n)
}

fn satisfies(set: &ConstraintSet, bits: u32) -> bool {
    let v = |b: &BoolParam| bits >> b.0 & 1 == 1;
    set.constraints().all(|c| match c {
        Constraint::BoolEq(a, b) => v(a) == v(b),
        Constraint::BoolImp(a, b) => !v(a) || v(b),
        Constraint::BoolConst(a, x) => v(a) == *x,
        _ => unreachable!("only boolean shapes are generated"),
    })
}

fn criterion_10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x0b00_1ea0);
    let mut failures = 0;
    let mut sat = 0;
    for _ in 0..BOOL_SYSTEMS {
        let (set, n) = random_bool_system(&mut rng);
        let models: Vec<u32> = (0..1u32 << n).filter(|&bits| satisfies(&set, bits)).collect();
        let got = solve_bool(&set, (0..n).map(BoolParam));
        let ok = match got {
            Err(_) => models.is_empty(),
            Ok(sol) => {
                let bits = (0..n).filter(|&i| sol.get(BoolParam(i))).fold(0u32, |acc, i| acc | 1 << i);
                sat += 1;
                models.contains(&bits) && models.iter().all(|m| bits & !m == 0)
            }
        };
        if !ok {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("{BOOL_SYSTEMS} systems, {sat} satisfiable, {failures} mismatches"))
}

fn criterion_11() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5ca1e);
    let terms = [
        parse_term("/\\a. \\x:a. x").unwrap(),
        church_nat(2),
        church_nat(4),
        exp_term(),
        rev_applied(&parse_bits("1010").unwrap()),
        pred_applied(2),
        parse_term("/\\a. \\f:a -> a. \\g:a -> a. \\x:a. f (g x)").unwrap(),
        parse_term("/\\a. \\f:a -> a. \\x:a. (\\y:a. f (f y)) (f x)").unwrap(),
    ];
    let systems: Vec<_> = terms
        .iter()
        .filter_map(|t| {
            let b = build(t, &InferOptions::default()).ok()?;
            solve_detailed(&b.constraints, Some(&b.decorated.params), &RationalSource::Supplied(BTreeMap::new())).linear
        })
        .collect();
    let mut checked = 0;
    let mut fractional = 0;
    let mut failures = 0;
    while checked < RATIONAL_SOLUTIONS {
        let mut sys = systems[checked % systems.len()].clone();
        for w in sys.objective.values_mut() {
            *w = rng.random_range(1..=7);
        }
        // Every other draw gets one or two `k p >= 1` rows so that the
        // optimum has denominators.
        if checked % 2 == 1 {
            let exps: Vec<IntParam> = sys.vars.iter().copied().filter(|p| !p.is_door()).collect();
            for _ in 0..rng.random_range(1..=2) {
                let p = exps[rng.random_range(0..exps.len())];
                let mut c = LinComb::zero();
                c.add_term(p, rng.random_range(2..=5));
                sys.rows.push(Row::new(c, RowKind::Geq, 1, None));
            }
        }
        let Ok(values) = solve_linear(&sys, &mut SolverStats::default()) else {
            failures += 1;
            checked += 1;
            continue;
        };
        if values.values().any(|v| !v.is_integer()) {
            fractional += 1;
        }
        let (scaled, _) = scale_to_integers(&values);
        let get = |p: &IntParam| scaled.get(p).cloned().unwrap_or_else(BigInt::zero);
        let rows_ok = sys.rows.iter().all(|r| {
            let lhs: BigInt = r.comb.terms().map(|(p, c)| get(&p) * BigInt::from(c)).sum();
            let rhs = BigInt::from(r.rhs);
            match r.kind {
                RowKind::Eq => lhs == rhs,
                RowKind::Geq => lhs >= rhs,
            }
        });
        let signs_ok = sys.vars.iter().all(|p| p.is_door() || !get(p).is_negative());
        if !(rows_ok && signs_ok) {
            failures += 1;
        }
        checked += 1;
    }
    outcome(
        failures == 0,
        format!(
            "{checked} solutions over {} systems ({fractional} with fractional values), {failures} failures",
            systems.len()
        ),
    )
}

fn main() {
    let mut gate = Gate::default();
    let results = vec![
        ("identity", criterion_1(&mut gate)),
        ("church numerals under N(D)", criterion_2(&mut gate)),
        ("rev(1010)", criterion_3(&mut gate)),
        ("pred(2)", criterion_4(&mut gate)),
        ("exp with and without domain", criterion_5(&mut gate)),
        ("checker rejection suite", criterion_6()),
        ("polynomials", criterion_7(&mut gate)),
        ("quadratic growth", criterion_8()),
        ("witness re-check gate", criterion_9(&gate)),
        ("boolean minimality", criterion_10()),
        ("integer scaling", criterion_11()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {:>2} {}: {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
