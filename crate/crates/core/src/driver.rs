//! The end-to-end pipeline: elaborate, flatten, solve, check, report.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::cc::{solve, CcError, CcOptions, Engine, LookupPolicy, Outcome, Stats};
use crate::checker::{check_all, Rejection};
use crate::equality::{mk_eq, mk_heq, AxiomTable, SubsingletonRegistry, TheoryError};
use crate::flatten::{
    flatten, wrap_goal_proof, EqKind, Equation, FlatContext, FlattenError, FlattenOptions, Hypothesis,
};
use crate::kernel::{Context, Declaration, Kernel, KernelError, Name, Term, TermKind};
use crate::problem::{parse_problem, Item, Problem, ProblemError};
use crate::shape::{proof_shape, Shape};
use crate::syntax::print_term;

#[derive(Debug, Clone, thiserror::Error)]
pub enum DriverError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("line {line}: {source}")]
    Kernel { line: usize, source: KernelError },
    #[error("line {line}: {source}")]
    Theory { line: usize, source: TheoryError },
    #[error("line {line}: sides have different types `{lhs}` and `{rhs}`; use `==`")]
    HeterogeneousSides { line: usize, lhs: Term, rhs: Term },
    #[error(transparent)]
    Flatten(#[from] FlattenError),
    #[error(transparent)]
    Solver(#[from] CcError),
}

#[derive(Clone, Copy, Debug)]
pub struct Flags {
    pub check: bool,
    pub subsingleton: bool,
    pub trace: bool,
    pub emit_partition: bool,
    pub debug_invariants: bool,
    pub lookup: LookupPolicy,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            check: true,
            subsingleton: true,
            trace: false,
            emit_partition: false,
            debug_invariants: false,
            lookup: LookupPolicy::default(),
        }
    }
}

impl Flags {
    pub fn cc_options(&self) -> CcOptions {
        CcOptions {
            subsingleton: self.subsingleton,
            debug_invariants: self.debug_invariants,
            trace: self.trace,
            lookup: self.lookup,
        }
    }
}

/// A problem elaborated against the kernel, ready to solve.
#[derive(Clone)]
pub struct Session {
    pub kernel: Kernel,
    pub registry: SubsingletonRegistry,
    pub vars: Vec<Name>,
    pub hyps: Vec<Hypothesis>,
    pub goal: Equation,
    /// The goal statement as written.
    pub statement: Term,
}

impl Session {
    pub fn load(problem: &Problem) -> Result<Session, DriverError> {
        let mut kernel = Kernel::new(Arc::new(Context::new()), Context::new());
        AxiomTable::standard()
            .install(&mut kernel)
            .map_err(|source| DriverError::Theory { line: 0, source })?;
        let mut registry = SubsingletonRegistry::new();
        let mut vars = Vec::new();
        let mut hyps = Vec::new();
        let mut goal = None;
        for (line, item) in problem.located() {
            let kerr = |source| DriverError::Kernel { line, source };
            match item {
                Item::Axiom { name, ty } => kernel
                    .declare_global(Declaration::assumption(name.clone(), ty.clone()))
                    .map_err(kerr)?,
                Item::Def { name, ty, value } => kernel
                    .declare_global(Declaration::definition(name.clone(), ty.clone(), value.clone()))
                    .map_err(kerr)?,
                Item::Var { name, ty } => {
                    kernel.declare_local(Declaration::assumption(name.clone(), ty.clone())).map_err(kerr)?;
                    vars.push(name.clone());
                }
                Item::Hyp { name, lhs, rhs, kind } => {
                    let eq = Equation { lhs: lhs.clone(), rhs: rhs.clone(), kind: *kind };
                    let stmt = statement(&kernel, &eq, line)?;
                    kernel.declare_local(Declaration::assumption(name.clone(), stmt)).map_err(kerr)?;
                    hyps.push(Hypothesis { name: name.clone(), eq });
                }
                Item::Subsingleton { ty, proof } => {
                    registry
                        .register(&mut kernel, ty, proof)
                        .map_err(|source| DriverError::Theory { line, source })?;
                }
                Item::Goal { lhs, rhs, kind } => {
                    let eq = Equation { lhs: lhs.clone(), rhs: rhs.clone(), kind: *kind };
                    let stmt = statement(&kernel, &eq, line)?;
                    goal = Some((eq, stmt));
                }
            }
        }
        let (goal, statement) = goal.expect("problem has a goal");
        Ok(Session { kernel, registry, vars, hyps, goal, statement })
    }

    /// Flatten the problem and install the congruence axioms it needs.
    pub fn prepare(self, flags: &Flags) -> Result<Prepared, DriverError> {
        let Session { mut kernel, registry, vars, hyps, goal, statement } = self;
        let internalize_types = flags.subsingleton && !registry.is_empty();
        let flat = flatten(&mut kernel, &vars, &hyps, &goal, FlattenOptions { internalize_types })?;
        AxiomTable::with_hcongr(flat.max_arity)
            .install(&mut kernel)
            .map_err(|source| DriverError::Theory { line: 0, source })?;
        Ok(Prepared { kernel, registry, flat, statement })
    }

    /// Flatten, solve and (unless disabled) check.
    pub fn run(self, flags: &Flags) -> Result<Report, DriverError> {
        let prepared = self.prepare(flags)?;
        let (outcome, engine) = prepared.solve(&flags.cc_options())?;
        prepared.report(outcome, &engine, flags)
    }
}

/// A flattened problem, ready for the engine.
#[derive(Clone)]
pub struct Prepared {
    pub kernel: Kernel,
    pub registry: SubsingletonRegistry,
    pub flat: FlatContext,
    /// The goal statement as written.
    pub statement: Term,
}

impl Prepared {
    pub fn solve(&self, opts: &CcOptions) -> Result<(Outcome, Engine), DriverError> {
        Ok(solve(self.kernel.clone(), &self.registry, &self.flat, *opts)?)
    }

    /// The goal proof as stated, from a proof of the flattened goal.
    pub fn goal_proof(&self, flat_proof: Term) -> Term {
        wrap_goal_proof(&self.flat, flat_proof)
    }

    pub fn report(&self, outcome: Outcome, engine: &Engine, flags: &Flags) -> Result<Report, DriverError> {
        let partition = if flags.emit_partition || matches!(outcome, Outcome::Unknown(_)) {
            Some(render_partition(engine)?)
        } else {
            None
        };
        let mut report = Report {
            verdict: Verdict::Unknown,
            proof: None,
            definitions: Vec::new(),
            shape: None,
            check: CheckStatus::Skipped,
            partition,
            congr_table_size: engine.congr_table_size(),
            trace: engine.trace().to_vec(),
            violations: engine.violations().to_vec(),
            stats: engine.stats().clone(),
        };
        if let Outcome::Proved(p) = outcome {
            let proof = self.goal_proof(p);
            let kernel = engine.kernel();
            report.verdict = Verdict::Proved;
            report.definitions = used_definitions(kernel, &proof);
            report.shape = Some(proof_shape(kernel, &proof));
            if flags.check {
                report.check = match check_all(kernel, &proof, &self.statement) {
                    Ok(()) => CheckStatus::Ok,
                    Err(r) => CheckStatus::Rejected(r),
                };
            }
            report.proof = Some(proof);
        }
        Ok(report)
    }
}

/// `eq A l r` or `heq A B l r` for an equation, checking both sides.
fn statement(kernel: &Kernel, eq: &Equation, line: usize) -> Result<Term, DriverError> {
    let kerr = |source| DriverError::Kernel { line, source };
    let tl = kernel.infer(&eq.lhs).map_err(kerr)?;
    let tr = kernel.infer(&eq.rhs).map_err(kerr)?;
    match eq.kind {
        EqKind::Heterogeneous => Ok(mk_heq(tl, tr, eq.lhs.clone(), eq.rhs.clone())),
        EqKind::Homogeneous => {
            if !kernel.defeq(&tl, &tr).map_err(kerr)? {
                return Err(DriverError::HeterogeneousSides { line, lhs: tl, rhs: tr });
            }
            Ok(mk_eq(tl, eq.lhs.clone(), eq.rhs.clone()))
        }
    }
}

fn render_partition(engine: &Engine) -> Result<Vec<Vec<Term>>, CcError> {
    engine
        .partition()
        .iter()
        .map(|class| class.iter().map(|n| engine.node_term(n)).collect())
        .collect()
}

/// Local definitions the proof depends on, in context order.
fn used_definitions(kernel: &Kernel, proof: &Term) -> Vec<Declaration> {
    let mut seen: BTreeSet<Name> = BTreeSet::new();
    let mut stack = vec![proof.clone()];
    while let Some(t) = stack.pop() {
        for c in constants(&t) {
            if seen.contains(&c) {
                continue;
            }
            if let Some(d) = kernel.ctx().get(&c) {
                if let Some(v) = &d.value {
                    stack.push(v.clone());
                    stack.push(d.ty.clone());
                    seen.insert(c);
                }
            }
        }
    }
    kernel.ctx().iter().filter(|d| seen.contains(&d.name)).cloned().collect()
}

fn constants(t: &Term) -> Vec<Name> {
    let mut out = Vec::new();
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        match t.kind() {
            TermKind::Const(n) => out.push(n.clone()),
            TermKind::App(f, a) => stack.extend([f, a]),
            TermKind::Lambda { ty, body, .. } | TermKind::Pi { ty, body, .. } => stack.extend([ty, body]),
            TermKind::Var(_) | TermKind::Sort => {}
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    Unknown,
}

#[derive(Clone, Debug)]
pub enum CheckStatus {
    Ok,
    Skipped,
    Rejected(Rejection),
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Ok => write!(f, "ok"),
            CheckStatus::Skipped => write!(f, "skipped"),
            CheckStatus::Rejected(r) => write!(f, "rejected: {r}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    pub proof: Option<Term>,
    /// Solver-introduced definitions the proof mentions.
    pub definitions: Vec<Declaration>,
    pub shape: Option<Shape>,
    pub check: CheckStatus,
    /// Final classes, each member shown as the subterm it stands for.
    pub partition: Option<Vec<Vec<Term>>>,
    pub congr_table_size: usize,
    pub trace: Vec<String>,
    pub violations: Vec<String>,
    pub stats: Stats,
}

impl Report {
    /// 0 proved and checked (or checking disabled), 1 unknown, 3 rejected.
    pub fn exit_code(&self) -> i32 {
        match (self.verdict, &self.check) {
            (_, CheckStatus::Rejected(_)) => 3,
            (Verdict::Proved, _) => 0,
            (Verdict::Unknown, _) => 1,
        }
    }

    pub fn is_proved(&self) -> bool {
        self.verdict == Verdict::Proved
    }

    /// The report printed on standard output.
    pub fn render(&self) -> String {
        let mut out = String::new();
        match self.verdict {
            Verdict::Proved => {
                out.push_str("PROVED\n");
                for d in &self.definitions {
                    let v = d.value.as_ref().expect("definition");
                    let _ = writeln!(out, "let {} : {} := {}", d.name, print_term(&d.ty), print_term(v));
                }
                if let Some(p) = &self.proof {
                    let _ = writeln!(out, "proof: {}", print_term(p));
                }
                let _ = writeln!(out, "check: {}", self.check);
            }
            Verdict::Unknown => out.push_str("UNKNOWN\n"),
        }
        if let Some(classes) = &self.partition {
            out.push_str("partition:\n");
            for class in classes {
                let members: Vec<String> = class
                    .iter()
                    .map(|t| {
                        let s = print_term(t);
                        if s.contains(' ') {
                            format!("({s})")
                        } else {
                            s
                        }
                    })
                    .collect();
                let _ = writeln!(out, "  {{ {} }}", members.join(" "));
            }
            let _ = writeln!(out, "congrtable: {}", self.congr_table_size);
        }
        out
    }
}

pub fn run(problem: &Problem, flags: &Flags) -> Result<Report, DriverError> {
    Session::load(problem)?.run(flags)
}

pub fn run_text(text: &str, flags: &Flags) -> Result<Report, DriverError> {
    run(&parse_problem(text)?, flags)
}
