//! Generators for example terms: Church numerals and words, list reversal,
//! predecessor, exponentiation, and the polynomial family.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fsyntax::{parse_term, FTerm};

fn parse(src: &str) -> FTerm {
    parse_term(src).unwrap_or_else(|e| panic!("generated term does not parse: {e}\n{src}"))
}

fn church_nat_src(k: usize) -> String {
    let mut body = "x".to_string();
    for _ in 0..k {
        body = format!("f ({body})");
    }
    format!("(/\\a. \\f:a -> a. \\x:a. {body})")
}

/// `/\a. \f:a -> a. \x:a. f (... (f x))` with `k` applications.
pub fn church_nat(k: usize) -> FTerm {
    parse(&church_nat_src(k))
}

fn church_word_src(bits: &[bool]) -> String {
    let mut body = "x".to_string();
    for b in bits.iter().rev() {
        body = format!("{} ({body})", if *b { "s1" } else { "s0" });
    }
    format!("(/\\a. \\s0:a -> a. \\s1:a -> a. \\x:a. {body})")
}

/// The first bit is the outermost application.
pub fn church_word(bits: &[bool]) -> FTerm {
    parse(&church_word_src(bits))
}

/// Parse a string of `0` and `1`.
pub fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

const REV: &str = "(\\l:W. /\\b. \\so:b -> b. \\si:b -> b. \
    l [b -> b] (\\a:b -> b. \\x:b. a (so x)) (\\a:b -> b. \\x:b. a (si x)) (\\z:b. z))";

/// Reversal of binary words by one higher-order iteration.
pub fn rev_term() -> FTerm {
    parse(REV)
}

/// `rev` applied to a word.
pub fn rev_applied(bits: &[bool]) -> FTerm {
    parse(&format!("{REV} {}", church_word_src(bits)))
}

const PRED: &str = "(\\n:N. /\\b. \\f:b -> b. \\x:b. \
    n [((b -> b) -> b -> b) -> b] \
      (\\p:((b -> b) -> b -> b) -> b. \\z:(b -> b) -> b -> b. z f (p (\\x:b -> b. \\y:b. x y))) \
      (\\z:(b -> b) -> b -> b. z (\\a:b. a) x) \
      (\\x:b -> b. \\y:b. y))";

/// Predecessor through pairs, iterated on the integer type.
pub fn pred_term() -> FTerm {
    parse(PRED)
}

pub fn pred_applied(k: usize) -> FTerm {
    parse(&format!("{PRED} {}", church_nat_src(k)))
}

/// `\n. /\b. n [b -> b] (2 [b])`.
pub fn exp_term() -> FTerm {
    parse(&format!("(\\n:N. /\\b. n [b -> b] ({} [b]))", church_nat_src(2)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial `{input}`: {message}")]
pub struct PolyError {
    pub input: String,
    pub message: String,
}

/// Sum of monomials with positive coefficients, exponents strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial(Vec<(u64, u32)>);

impl Polynomial {
    /// Merges equal exponents and drops zero coefficients.
    pub fn new(mut terms: Vec<(u64, u32)>) -> Self {
        terms.sort_by_key(|t| std::cmp::Reverse(t.1));
        let mut out: Vec<(u64, u32)> = Vec::new();
        for (c, e) in terms {
            match out.last_mut() {
                Some(last) if last.1 == e => last.0 += c,
                _ => out.push((c, e)),
            }
        }
        out.retain(|(c, _)| *c > 0);
        Polynomial(out)
    }

    pub fn monomial(e: u32) -> Self {
        Polynomial(vec![(1, e)])
    }

    pub fn terms(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.0.iter().map(|(c, e)| c * x.pow(*e)).sum()
    }
}

impl FromStr for Polynomial {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| PolyError { input: s.to_string(), message: m.to_string() };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty"));
        }
        let mut terms = Vec::new();
        for part in compact.split('+') {
            if part.is_empty() {
                return Err(err("empty term"));
            }
            let (coef, rest) = match part.find(['X', 'x']) {
                Some(i) => (&part[..i], Some(&part[i + 1..])),
                None => (part, None),
            };
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c: u64 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| err("bad coefficient"))? };
            let e: u32 = match rest {
                None => 0,
                Some("") => 1,
                Some(r) => r
                    .strip_prefix('^')
                    .ok_or_else(|| err("expected `^` after X"))?
                    .parse()
                    .map_err(|_| err("bad exponent"))?,
            };
            terms.push((c, e));
        }
        let p = Polynomial::new(terms);
        if p.0.is_empty() {
            return Err(err("zero polynomial"));
        }
        Ok(p)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(c, e)| match (c, e) {
                (c, 0) => c.to_string(),
                (1, 1) => "X".to_string(),
                (c, 1) => format!("{c}X"),
                (1, e) => format!("X^{e}"),
                (c, e) => format!("{c}X^{e}"),
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

const SUCC: &str = "(\\s:N. /\\a. \\f:a -> a. \\x:a. f (s [a] f x))";

/// `(m succ-step)(\n. body) 0` with `m` free and `n` bound in `body`.
fn coerc1(free: &str, bound: &str, body: &str) -> String {
    format!("({free} [N -> N] (\\g:N -> N. \\p:N. g ({SUCC} p)) (\\{bound}:N. {body}) {})", church_nat_src(0))
}

/// `(\n. body)(m succ 0)`.
fn coerc2(free: &str, bound: &str, body: &str) -> String {
    format!("((\\{bound}:N. {body}) ({free} [N] {SUCC} {}))", church_nat_src(0))
}

fn coerc() -> String {
    format!("(\\c:N. c [N] {SUCC} {})", church_nat_src(0))
}

/// Multiplication core with `n` and `m` free.
fn mult_core() -> String {
    format!("(m [N] (\\k:N. /\\a. \\f:a -> a. \\x:a. n [a] f (k [a] f x)) {})", church_nat_src(0))
}

fn add() -> &'static str {
    "(\\n:N. \\m:N. /\\a. \\f:a -> a. \\x:a. n [a] f (m [a] f x))"
}

fn monomial_src(e: u32, coercions: bool) -> String {
    match e {
        0 => format!("(\\x:N. {})", church_nat_src(1)),
        1 => "(\\x:N. x)".to_string(),
        _ => {
            let prev = monomial_src(e - 1, coercions);
            if coercions {
                let mult = format!("(\\n2:N. \\m2:N. {})", coerc2("m2", "m", &coerc1("n2", "n", &mult_core())));
                let body = format!("({mult} ({prev} x) ({} x))", coerc());
                format!("(\\x:N. {})", coerc1("x", "x", &body))
            } else {
                format!("(\\x:N. (\\n:N. \\m:N. {}) ({prev} x) x)", mult_core())
            }
        }
    }
}

/// `t_{X^e}` built with the coercion contexts.
pub fn monomial_term(e: u32) -> FTerm {
    parse(&monomial_src(e, true))
}

/// The same construction without coercions.
pub fn monomial_term_plain(e: u32) -> FTerm {
    parse(&monomial_src(e, false))
}

/// A polynomial: each unit summand `X^e` is computed by its monomial term
/// on the shared argument, coerced, and the summands are added.
pub fn poly_term(p: &Polynomial) -> FTerm {
    let summands: Vec<u32> = p.terms().iter().flat_map(|(c, e)| std::iter::repeat_n(*e, *c as usize)).collect();
    if let [e] = summands.as_slice() {
        return monomial_term(*e);
    }
    let mut acc: Option<String> = None;
    for e in summands.iter().rev() {
        let s = format!("({} ({} x))", coerc(), monomial_src(*e, true));
        acc = Some(match acc {
            None => s,
            Some(rest) => format!("({} {s} {rest})", add()),
        });
    }
    let body = acc.expect("nonzero polynomial");
    parse(&format!("(\\x:N. {})", coerc1("x", "x", &body)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsyntax::{parse_type, print_type, typecheck_f};

    fn ty(t: &FTerm) -> String {
        print_type(&typecheck_f(t).unwrap())
    }

    fn assert_type(t: &FTerm, expected: &str) {
        let e = parse_type(expected).unwrap();
        assert!(typecheck_f(t).unwrap().alpha_eq(&e), "{} vs {expected}", ty(t));
    }

    #[test]
    fn numerals_and_words() {
        for k in 0..6 {
            assert_type(&church_nat(k), "N");
        }
        assert_type(&church_word(&parse_bits("1010").unwrap()), "W");
        assert_type(&church_word(&[]), "W");
    }

    #[test]
    fn examples_typecheck() {
        assert_type(&rev_term(), "W -> W");
        assert_type(&rev_applied(&parse_bits("1010").unwrap()), "W");
        assert_type(&pred_term(), "N -> N");
        assert_type(&pred_applied(2), "N");
        assert_type(&exp_term(), "N -> N");
    }

    #[test]
    fn polynomials_typecheck() {
        for e in 0..4 {
            assert_type(&monomial_term(e), "N -> N");
            assert_type(&monomial_term_plain(e), "N -> N");
        }
        assert_type(&poly_term(&"3X^2+1".parse().unwrap()), "N -> N");
    }

    #[test]
    fn polynomial_syntax() {
        let p: Polynomial = "3X^2 + 1 + X".parse().unwrap();
        assert_eq!(p.terms(), &[(3, 2), (1, 1), (1, 0)]);
        assert_eq!(p.to_string(), "3X^2+X+1");
        assert_eq!(p.eval(2), 15);
        assert_eq!("X^2+X^2".parse::<Polynomial>().unwrap().to_string(), "2X^2");
        assert!("3Y".parse::<Polynomial>().is_err());
        assert!("".parse::<Polynomial>().is_err());
    }
}
