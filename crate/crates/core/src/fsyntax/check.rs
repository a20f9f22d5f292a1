use std::collections::HashMap;

use super::print::print_type;
use super::types::{FType, TermVar, TyVar};
use super::{FTerm, TypeError};

/// Church-style type checking. Open terms are accepted: a free variable
/// has the type carried by its occurrences, which must all agree.
pub fn typecheck_f(term: &FTerm) -> Result<FType, TypeError> {
    let mut free: HashMap<TermVar, FType> = HashMap::new();
    check(term, &mut Vec::new(), &mut free)
}

fn check(t: &FTerm, env: &mut Vec<(TermVar, FType)>, free: &mut HashMap<TermVar, FType>) -> Result<FType, TypeError> {
    match t {
        FTerm::Var(x, ty) => {
            let declared =
                env.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t.clone()).or_else(|| free.get(x).cloned());
            match declared {
                Some(d) if d != *ty => Err(TypeError::AnnotationMismatch {
                    var: x.name().to_string(),
                    declared: print_type(&d),
                    found: print_type(ty),
                }),
                Some(_) => Ok(ty.clone()),
                None => {
                    free.insert(x.clone(), ty.clone());
                    Ok(ty.clone())
                }
            }
        }
        FTerm::Lam(x, ty, body) => {
            env.push((x.clone(), ty.clone()));
            let cod = check(body, env, free);
            env.pop();
            Ok(FType::arrow(ty.clone(), cod?))
        }
        FTerm::App(f, a) => {
            let fty = check(f, env, free)?;
            let aty = check(a, env, free)?;
            match fty {
                FType::Arrow(dom, cod) => {
                    if *dom == aty {
                        Ok(*cod)
                    } else {
                        Err(TypeError::Mismatch { expected: print_type(&dom), found: print_type(&aty) })
                    }
                }
                other => Err(TypeError::NotAFunction { found: print_type(&other) }),
            }
        }
        FTerm::TyLam(a, body) => {
            let bty = check(body, env, free)?;
            if let Some(x) = eigen_violation(body, a) {
                return Err(TypeError::Eigenvariable { tyvar: a.name().to_string(), var: x });
            }
            Ok(FType::forall(a.clone(), bty))
        }
        FTerm::TyApp(f, arg) => match check(f, env, free)? {
            FType::Forall(a, body) => Ok(body.subst(&a, arg)),
            other => Err(TypeError::NotAForall { found: print_type(&other) }),
        },
    }
}

/// The first free term variable of `body` whose type mentions `a`.
fn eigen_violation(body: &FTerm, a: &TyVar) -> Option<String> {
    body.free_vars().into_iter().find(|(_, ty)| ty.occurs_free(a)).map(|(x, _)| x.name().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsyntax::parse::parse_term;
    use crate::fsyntax::types::IdGen;

    #[test]
    fn identity_type() {
        let t = parse_term("/\\a. \\x:a. x").unwrap();
        let ty = typecheck_f(&t).unwrap();
        assert_eq!(print_type(&ty), "forall a. a -> a");
    }

    #[test]
    fn church_two_is_nat() {
        let t = parse_term("/\\a. \\f:a -> a. \\x:a. f (f x)").unwrap();
        assert!(typecheck_f(&t).unwrap().is_nat());
    }

    #[test]
    fn eigenvariable_violation() {
        // Built by hand so the inner binder shares its id with the annotation.
        let mut g = IdGen::new();
        let a = g.tyvar("a");
        let x = g.termvar("x");
        let body = FTerm::tylam(a.clone(), FTerm::Var(x.clone(), FType::var(&a)));
        let t = FTerm::lam(x, FType::var(&a), body);
        assert!(matches!(typecheck_f(&t), Err(TypeError::Eigenvariable { .. })));
    }

    #[test]
    fn application_mismatch() {
        let t = parse_term("\\f:a -> a. \\y:b. f y").unwrap();
        assert!(matches!(typecheck_f(&t), Err(TypeError::Mismatch { .. })));
    }

    #[test]
    fn type_application_of_non_forall() {
        let t = parse_term("\\x:a. x [a]").unwrap();
        assert!(matches!(typecheck_f(&t), Err(TypeError::NotAForall { .. })));
    }
}
