//! End-to-end inference: parse, typecheck, decorate, generate, solve,
//! instantiate, and re-check the witness before reporting it.

use std::fmt;
use std::time::Instant;

use crate::constraints::{generate, split, ConstraintSet, Family, Generated};
use crate::datatypes::{domain_constraints, sort_constraints, strict_pins, DomainSpec, Sort};
use crate::dlal_types::{complexity_bound, DlalType};
use crate::fsyntax::{parse_term, typecheck_f, FTerm};
use crate::par::Strategy;
use crate::param::{free_decorate_term, instantiate_term, Decorated, Instantiation};
use crate::pseudo::PseudoTerm;
use crate::solver::{solve_detailed, LinearSystem, RationalSource, SolverStats, Unsat};
use crate::verify::{check_well_structured_with, CheckReport};

#[derive(Clone, Debug, Default)]
pub struct InferOptions {
    /// Abstractions whose bound variable must be a genuine integer or word.
    pub domain: DomainSpec,
    /// Sort constraint on the type of the whole term.
    pub result: Option<Sort>,
    /// Pin the non-standard exponents of every domain declaration to zero.
    pub strict: bool,
    pub strategy: Strategy,
    pub rational: RationalSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Typable,
    Untypable,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Typable => 0,
            Verdict::Untypable => 1,
            Verdict::Error => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Typable => "typable",
            Verdict::Untypable => "untypable",
            Verdict::Error => "error",
        })
    }
}

/// Wall-clock time of each phase, in milliseconds.
#[derive(Clone, Debug, Default)]
pub struct Timings {
    pub generate_ms: f64,
    pub solve_ms: f64,
    pub verify_ms: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub size: usize,
    pub door_params: usize,
    pub exponent_params: usize,
    pub bool_params: usize,
    pub constraints: usize,
    pub by_family: Vec<(Family, usize)>,
    pub boolean: usize,
    pub linear: usize,
    pub mixed: usize,
    pub solver: SolverStats,
    pub timings: Timings,
}

impl Stats {
    pub fn int_params(&self) -> usize {
        self.door_params + self.exponent_params
    }
}

#[derive(Clone, Debug)]
pub struct InferenceReport {
    pub verdict: Verdict,
    pub dlal_type: Option<DlalType>,
    pub depth: Option<usize>,
    pub bound: Option<String>,
    pub stats: Stats,
    pub witness: Option<Instantiation>,
    pub pseudo: Option<PseudoTerm>,
    /// Set once the witness has been re-checked by the independent checker.
    pub verified: bool,
    pub check: Option<CheckReport>,
    /// Origins of an infeasible subsystem when the verdict is untypable.
    pub kernel: Vec<String>,
    pub diagnostic: Option<String>,
    /// The linear system after the boolean phase, for external solvers.
    pub linear: Option<LinearSystem>,
    pub decorated: Option<Decorated>,
    pub generated: Option<Generated>,
    pub constraint_set: Option<ConstraintSet>,
}

impl InferenceReport {
    pub fn error(msg: impl Into<String>) -> Self {
        Self { diagnostic: Some(msg.into()), ..Self::empty() }
    }

    fn empty() -> Self {
        Self {
            verdict: Verdict::Error,
            dlal_type: None,
            depth: None,
            bound: None,
            stats: Stats::default(),
            witness: None,
            pseudo: None,
            verified: false,
            check: None,
            kernel: Vec::new(),
            diagnostic: None,
            linear: None,
            decorated: None,
            generated: None,
            constraint_set: None,
        }
    }

    /// Type of the subterm at `path` (child indices from the root), including
    /// its doors, under the witness.
    pub fn type_at(&self, path: &[u8]) -> Option<DlalType> {
        let g = self.generated.as_ref()?;
        let phi = self.witness.as_ref()?;
        let i = g.flat.nodes.iter().position(|n| n.path == path)?;
        g.typing.outer[i].instantiate(phi).ok().map(|t| t.unstar())
    }

    /// Flat key/value view of the report, without the diagnostic. Timings are left out unless asked
    /// for, so that the default output is reproducible.
    pub fn record(&self, timings: bool) -> Vec<(String, String)> {
        let mut r: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| r.push((k.to_string(), v));
        put("verdict", self.verdict.to_string());
        if let Some(t) = &self.dlal_type {
            put("type", t.to_string());
        }
        if let Some(d) = self.depth {
            put("depth", d.to_string());
        }
        if let Some(b) = &self.bound {
            put("bound", b.clone());
        }
        put("verified", self.verified.to_string());
        let s = &self.stats;
        put("size", s.size.to_string());
        put("params.door", s.door_params.to_string());
        put("params.exponent", s.exponent_params.to_string());
        put("params.bool", s.bool_params.to_string());
        put("constraints.total", s.constraints.to_string());
        for (f, n) in &s.by_family {
            put(&format!("constraints.{}", f.name()), n.to_string());
        }
        put("constraints.boolean", s.boolean.to_string());
        put("constraints.linear", s.linear.to_string());
        put("constraints.mixed", s.mixed.to_string());
        put("solver.bool_ones", s.solver.bool_ones.to_string());
        put("solver.linear_rows", s.solver.linear_rows.to_string());
        put("solver.presolved_rows", s.solver.presolved_rows.to_string());
        put("solver.eliminated", s.solver.eliminated.to_string());
        put("solver.simplex_rows", s.solver.simplex.rows.to_string());
        put("solver.simplex_columns", s.solver.simplex.columns.to_string());
        put("solver.pivots", s.solver.simplex.pivots.to_string());
        if timings {
            put("time.generate_ms", format!("{:.3}", s.timings.generate_ms));
            put("time.solve_ms", format!("{:.3}", s.timings.solve_ms));
            put("time.verify_ms", format!("{:.3}", s.timings.verify_ms));
        }
        if let Some(p) = &self.pseudo {
            put("term", p.to_string());
        }
        for (i, k) in self.kernel.iter().enumerate() {
            put(&format!("kernel.{i}"), k.clone());
        }
        r
    }
}

impl fmt::Display for InferenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.record(false) {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Parse and infer a closed term given in concrete syntax.
pub fn infer_source(text: &str, opts: &InferOptions) -> InferenceReport {
    match parse_term(text) {
        Ok(t) => infer(&t, opts),
        Err(e) => InferenceReport::error(format!("parse error: {e}")),
    }
}

/// The free decoration of a term with every constraint the options ask for.
#[derive(Clone, Debug)]
pub struct Built {
    pub decorated: Decorated,
    pub generated: Generated,
    pub constraints: ConstraintSet,
}

/// Typecheck, decorate and generate, then add the domain, result-sort and
/// pinning constraints.
pub fn build(term: &FTerm, opts: &InferOptions) -> Result<Built, String> {
    typecheck_f(term).map_err(|e| format!("type error: {e}"))?;
    let d = free_decorate_term(term);
    let g = generate(&d, opts.strategy).map_err(|e| format!("internal: {e}"))?;
    let mut set = g.constraints.clone();
    if !opts.domain.is_empty() {
        set.union(domain_constraints(&g.flat, &opts.domain, opts.strict).map_err(|e| e.to_string())?);
    }
    if let Some(sort) = opts.result {
        let root = g.typing.root_type();
        set.union(sort_constraints(sort, root, "result").map_err(|e| e.to_string())?);
        if opts.strict {
            set.union(strict_pins(sort, root, "result").map_err(|e| e.to_string())?);
        }
    }
    Ok(Built { decorated: d, generated: g, constraints: set })
}

/// Run the whole pipeline on a closed term. A typable verdict is only
/// returned after the instantiated pseudo-term passes the checker.
pub fn infer(term: &FTerm, opts: &InferOptions) -> InferenceReport {
    let t0 = Instant::now();
    let Built { decorated: d, generated: g, constraints: set } = match build(term, opts) {
        Ok(b) => b,
        Err(e) => return InferenceReport::error(e),
    };
    let (b, l, m) = split(&set);
    let mut stats = Stats {
        size: term.size().0,
        door_params: d.params.door_count(),
        exponent_params: d.params.exponent_count(),
        bool_params: d.params.bool_count(),
        constraints: set.len(),
        by_family: Family::ALL.iter().map(|f| (*f, set.count_by_family(*f))).collect(),
        boolean: b.len(),
        linear: l.len(),
        mixed: m.len(),
        ..Default::default()
    };
    stats.timings.generate_ms = ms(t0);

    let t1 = Instant::now();
    let solved = solve_detailed(&set, Some(&d.params), &opts.rational);
    stats.timings.solve_ms = ms(t1);
    stats.solver = solved.stats.clone();

    let mut report = InferenceReport::empty();
    report.stats = stats;
    report.linear = solved.linear;
    report.constraint_set = Some(set);

    let sol = match solved.outcome {
        Ok(sol) => sol,
        Err(u) => {
            report.kernel = u.kernel();
            report.diagnostic = Some(u.to_string());
            report.verdict = match u {
                Unsat::Boolean(_) | Unsat::Linear { .. } => Verdict::Untypable,
                Unsat::External { .. } | Unsat::Overflow => Verdict::Error,
            };
            report.decorated = Some(d);
            report.generated = Some(g);
            return report;
        }
    };

    let t2 = Instant::now();
    let pseudo = match instantiate_term(&sol.instantiation, &d.term) {
        Ok(p) => p,
        Err(e) => {
            report.diagnostic = Some(format!("internal: {e}"));
            return report;
        }
    };
    let check = check_well_structured_with(&pseudo, opts.strategy);
    report.stats.timings.verify_ms = ms(t2);
    report.verified = true;
    if !check.passed() {
        report.diagnostic = Some(format!("internal: witness rejected by the checker\n{check}"));
        report.check = Some(check);
        return report;
    }
    let ty = match g.typing.root_type().instantiate(&sol.instantiation) {
        Ok(t) => t.unstar(),
        Err(e) => {
            report.diagnostic = Some(format!("internal: {e}"));
            return report;
        }
    };
    let bound = complexity_bound(&ty, report.stats.size);
    report.verdict = Verdict::Typable;
    report.depth = Some(bound.depth);
    report.bound = Some(bound.bound);
    report.dlal_type = Some(ty);
    report.witness = Some(sol.instantiation);
    report.pseudo = Some(pseudo);
    report.check = Some(check);
    report.decorated = Some(d);
    report.generated = Some(g);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_typable_at_depth_zero() {
        let r = infer_source("/\\a. \\x:a. x", &InferOptions::default());
        assert_eq!(r.verdict, Verdict::Typable);
        assert!(r.verified);
        assert_eq!(r.depth, Some(0));
        assert_eq!(r.dlal_type.unwrap().to_string(), "forall a. a -o a");
    }

    #[test]
    fn ill_typed_input_is_an_error() {
        let r = infer_source("/\\a. \\x:a. x x", &InferOptions::default());
        assert_eq!(r.verdict, Verdict::Error);
        assert_eq!(r.verdict.exit_code(), 2);
    }

    #[test]
    fn record_is_reproducible() {
        let a = infer_source("/\\a. \\f:a -> a. \\x:a. f (f x)", &InferOptions::default());
        let b = infer_source("/\\a. \\f:a -> a. \\x:a. f (f x)", &InferOptions::default());
        assert_eq!(a.to_string(), b.to_string());
    }
}
