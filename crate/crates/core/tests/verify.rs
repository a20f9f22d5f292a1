use dlal_core::dlal_types::{StarDecl, StarType};
use dlal_core::fsyntax::{TermVar, TyVar};
use dlal_core::pseudo::{parse_pseudo, PseudoTerm};
use dlal_core::verify::{
    check_bang, check_bracketing, check_local_typing, check_scope, check_well_structured, Condition,
};

fn term(src: &str) -> PseudoTerm {
    parse_pseudo(src).unwrap_or_else(|e| panic!("{src}: {e}")).term
}

#[test]
fn banged_identity_types() {
    let ty = check_local_typing(&term("\\x:!a. x")).unwrap();
    assert_eq!(ty.to_string(), "!a -o $a");
}

#[test]
fn dereliction_and_digging_fail_binder_bracketing() {
    for src in ["\\x:$a. ~x", "\\x:$a. $x"] {
        let t = term(src);
        assert!(check_local_typing(&t).is_ok(), "{src} is locally typed");
        let f = check_bracketing(&t);
        assert_eq!(f.len(), 1, "{src}");
        assert_eq!(f[0].clause, "ii.b");
        assert!(!check_well_structured(&t).passed());
    }
}

#[test]
fn worked_example_passes() {
    let t = term("x:$a, g:!(a -o a) |- (\\f:!(a -o a). $((~f) ((~f) ~x))) $((\\h:a -o a. h) ~g)");
    let r = check_well_structured(&t);
    assert!(r.passed(), "{r}");
    assert_eq!(r.output_type.unwrap().to_string(), "$a");
}

#[test]
fn monoidalness_terms_fail_bang_one() {
    for src in ["\\x:!(a -o b). \\y:!b -o c. \\z:!a. y $((~x) ~z)", "\\x:$a. \\y:!a -o b. y $(~x)"] {
        let t = term(src);
        assert!(check_local_typing(&t).is_ok(), "{src}");
        assert!(check_bracketing(&t).is_empty(), "{src}");
        let f = check_bang(&t);
        assert!(f.iter().any(|f| f.clause == "i"), "{src}: {f:?}");
    }
}

#[test]
fn barcan_scope() {
    let t1 = term("\\x:$forall a. a. /\\a. $((~x) [a])");
    let t2 = term("\\x:forall a. $a. $/\\a. ~(x [a])");
    assert!(check_well_structured(&t1).passed());
    assert!(check_scope(&t1).is_empty());
    assert!(!check_scope(&t2).is_empty());
    let r = check_well_structured(&t2);
    assert!(r.fails(Condition::Scope) && !r.fails(Condition::Bracketing) && !r.fails(Condition::Bang));
}

#[test]
fn closed_bang_subterm_passes() {
    let t = term("(\\f:!(a -o a). $(\\y:a. ~f y)) $(\\z:a. z)");
    let r = check_well_structured(&t);
    assert!(r.passed(), "{r}");
}

#[test]
fn shallow_bang_subterm_fails() {
    let t = term("(\\f:!($a -o a). $(\\y:$a. ~f y)) $(\\z:$a. ~z)");
    assert!(check_well_structured(&t).fails(Condition::Bang));
}

#[test]
fn linear_variable_used_twice() {
    let t = term("\\f:a -o a. \\x:a. f (f x)");
    let err = check_local_typing(&t).unwrap_err();
    assert!(err.iter().any(|f| f.clause == "ii"));
}

#[test]
fn argument_mismatch() {
    let t = term("\\f:!(a -o a). \\x:a. f x");
    let err = check_local_typing(&t).unwrap_err();
    assert!(err.iter().any(|f| f.clause == "i"));
}

#[test]
fn eigenvariable_violation() {
    let a = TyVar::new(1, "a");
    let x = TermVar::new(2, "x");
    let d = StarDecl::linear(StarType::Var(a.clone()));
    let t = PseudoTerm::lam(x.clone(), d.clone(), PseudoTerm::tylam(a, PseudoTerm::var(x, d)));
    let err = check_local_typing(&t).unwrap_err();
    assert!(err.iter().any(|f| f.clause == "iii"));
}
