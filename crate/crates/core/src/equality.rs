//! Equality constants, the `hcongr_n` congruence family and subsingleton
//! lemmas.
//!
//! The fixed axioms are stated in concrete syntax and kernel-checked when
//! installed. `hcongr_n` statements are generated per arity; `hsse_A`
//! statements per registered subsingleton type `A`.

use std::collections::{BTreeMap, HashMap};

use crate::kernel::{
    name, pi_telescope, Declaration, Kernel, KernelError, Name, Term, TermKind,
};
use crate::syntax::parse_term;

#[derive(Debug, Clone, thiserror::Error)]
pub enum TheoryError {
    #[error("hcongr arity must be at least 1")]
    InvalidArity,
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("`{proof}` does not prove that `{ty}` is a subsingleton: its type is `{found}`")]
    BadSubsingletonProof { proof: Name, ty: Term, found: Term },
    #[error("{kind:?} expects {expected} argument(s), got {got}")]
    Arity { kind: ProofStep, expected: usize, got: usize },
    #[error("{kind:?}: `{ty}` is not an equality")]
    NotAnEquality { kind: ProofStep, ty: Term },
    #[error("{kind:?}: {msg}")]
    Mismatch { kind: ProofStep, msg: String },
}

const FIXED: &[(&str, &str)] = &[
    ("eq", "Pi (A : Type), A -> A -> Type"),
    ("refl", "Pi (A : Type) (a : A), eq A a a"),
    ("erec", "Pi (A : Type) (a : A) (C : A -> Type), C a -> Pi (b : A), eq A a b -> C b"),
    ("heq", "Pi (A B : Type), A -> B -> Type"),
    ("hrefl", "Pi (A : Type) (a : A), heq A A a a"),
    ("hsymm", "Pi (A B : Type) (a : A) (b : B), heq A B a b -> heq B A b a"),
    (
        "htrans",
        "Pi (A B C : Type) (a : A) (b : B) (c : C), heq A B a b -> heq B C b c -> heq A C a c",
    ),
    ("ofeq", "Pi (A : Type) (a b : A), eq A a b -> heq A A a b"),
    ("ofheq", "Pi (A : Type) (a b : A), heq A A a b -> eq A a b"),
];

/// Names reserved by the equality theory.
pub fn is_reserved(n: &str) -> bool {
    FIXED.iter().any(|(k, _)| *k == n) || n.starts_with("hcongr_") || n.starts_with("hsse_")
}

pub fn hcongr_name(n: usize) -> Name {
    name(&format!("hcongr_{n}"))
}

/// Axiom name to statement.
#[derive(Clone, Debug)]
pub struct AxiomTable {
    entries: BTreeMap<Name, Term>,
    order: Vec<Name>,
}

impl AxiomTable {
    /// The fixed equality axioms.
    pub fn standard() -> Self {
        let mut table = AxiomTable { entries: BTreeMap::new(), order: Vec::new() };
        for (n, src) in FIXED {
            let stmt = parse_term(src).expect("built-in statement parses");
            table.insert(name(n), stmt);
        }
        table
    }

    /// Standard axioms plus `hcongr_1 ..= hcongr_max`.
    pub fn with_hcongr(max: usize) -> Self {
        let mut table = Self::standard();
        for n in 1..=max {
            table.ensure_hcongr(n).expect("n >= 1");
        }
        table
    }

    fn insert(&mut self, n: Name, stmt: Term) {
        if self.entries.insert(n.clone(), stmt).is_none() {
            self.order.push(n);
        }
    }

    pub fn ensure_hcongr(&mut self, n: usize) -> Result<Name, TheoryError> {
        let (nm, stmt) = mk_hcongr(n)?;
        if !self.entries.contains_key(&nm) {
            self.insert(nm.clone(), stmt);
        }
        Ok(nm)
    }

    pub fn get(&self, n: &str) -> Option<&Term> {
        self.entries.get(n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.order.iter().map(move |n| (n, &self.entries[n]))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Install every axiom in the kernel's global environment, checking
    /// each statement. Entries already present are skipped.
    pub fn install(&self, kernel: &mut Kernel) -> Result<(), TheoryError> {
        for (n, stmt) in self.iter() {
            if kernel.env().contains(n) {
                continue;
            }
            kernel.declare_global(Declaration::assumption(n.clone(), stmt.clone()))?;
        }
        Ok(())
    }
}

fn local(s: &str) -> Name {
    // `%` cannot appear in parsed identifiers, so these never clash
    name(&format!("%{s}"))
}

fn lc(s: &str) -> Term {
    Term::cnst(local(s))
}

/// `head x_1 ... x_k` over the local names given.
fn applied(head: &str, args: &[Name]) -> Term {
    Term::apps(lc(head), args.iter().map(|n| Term::cnst(n.clone())))
}

/// The statement of `hcongr_n`:
///
/// ```text
/// Pi (A1 : Type) (A2 : A1 -> Type) ... (An : Pi a1 .. a(n-1), Type)
///    (B : Pi a1 .. an, Type)
///    (f g : Pi a1 .. an, B a1 .. an), f = g ->
///    Pi (a1 b1 : A1), a1 == b1 -> ... ->
///    Pi (an : An a1 .. a(n-1)) (bn : An b1 .. b(n-1)), an == bn ->
///    f a1 .. an == g b1 .. bn
/// ```
pub fn mk_hcongr(n: usize) -> Result<(Name, Term), TheoryError> {
    if n == 0 {
        return Err(TheoryError::InvalidArity);
    }
    let a_fam: Vec<String> = (1..=n).map(|i| format!("A{i}")).collect();
    let xs: Vec<Name> = (1..=n).map(|i| local(&format!("x{i}"))).collect();
    // binder telescope (x1 : A1) (x2 : A2 x1) ... over the first k families
    let dom_tele = |k: usize| -> Vec<(Name, Term)> {
        (0..k).map(|j| (xs[j].clone(), applied(&a_fam[j], &xs[..j]))).collect()
    };

    let mut binders: Vec<(Name, Term)> = a_fam
        .iter()
        .enumerate()
        .map(|(k, a)| (local(a), pi_telescope(&dom_tele(k), Term::sort())))
        .collect();
    binders.push((local("B"), pi_telescope(&dom_tele(n), Term::sort())));
    let fn_ty = pi_telescope(&dom_tele(n), applied("B", &xs));
    binders.push((local("f"), fn_ty.clone()));
    binders.push((local("g"), fn_ty.clone()));
    binders.push((
        local("hfg"),
        Term::apps(Term::cnst("eq"), [fn_ty, lc("f"), lc("g")]),
    ));

    let aa: Vec<Name> = (1..=n).map(|i| local(&format!("a{i}"))).collect();
    let bb: Vec<Name> = (1..=n).map(|i| local(&format!("b{i}"))).collect();
    for k in 0..n {
        let ta = applied(&a_fam[k], &aa[..k]);
        let tb = applied(&a_fam[k], &bb[..k]);
        binders.push((aa[k].clone(), ta.clone()));
        binders.push((bb[k].clone(), tb.clone()));
        binders.push((
            local(&format!("h{}", k + 1)),
            Term::apps(
                Term::cnst("heq"),
                [ta, tb, Term::cnst(aa[k].clone()), Term::cnst(bb[k].clone())],
            ),
        ));
    }
    let concl = Term::apps(
        Term::cnst("heq"),
        [
            applied("B", &aa),
            applied("B", &bb),
            Term::apps(lc("f"), aa.iter().map(|a| Term::cnst(a.clone()))),
            Term::apps(lc("g"), bb.iter().map(|b| Term::cnst(b.clone()))),
        ],
    );
    let stmt = pi_telescope(&binders, concl);
    Ok((hcongr_name(n), rename_binders(&stmt)))
}

/// Strip the `%` prefix from binder names so statements print cleanly.
fn rename_binders(t: &Term) -> Term {
    let strip = |n: &Name| name(n.trim_start_matches('%'));
    match t.kind() {
        TermKind::App(f, a) => Term::app(rename_binders(f), rename_binders(a)),
        TermKind::Lambda { name: n, ty, body } => {
            Term::lambda(strip(n), rename_binders(ty), rename_binders(body))
        }
        TermKind::Pi { name: n, ty, body } => {
            Term::pi(strip(n), rename_binders(ty), rename_binders(body))
        }
        _ => t.clone(),
    }
}

/// The instantiation data for applying `hcongr_n` to a function of type
/// `fn_ty`: the families `A1 .. An` and `B` as λ-telescopes over the
/// function's own domains. `None` if `fn_ty` has fewer than `n` binders.
pub fn hcongr_families(
    kernel: &Kernel,
    fn_ty: &Term,
    n: usize,
) -> Result<Option<(Vec<Term>, Term)>, KernelError> {
    let Some((doms, cod)) = kernel.pi_telescope_of(fn_ty, n)? else {
        return Ok(None);
    };
    let wrap = |k: usize, body: Term| -> Term {
        doms[..k]
            .iter()
            .enumerate()
            .rev()
            .fold(body, |acc, (j, d)| Term::lambda(format!("x{}", j + 1), d.clone(), acc))
    };
    let fams = (0..n).map(|k| wrap(k, doms[k].clone())).collect();
    Ok(Some((fams, wrap(n, cod))))
}

pub fn mk_eq(ty: Term, a: Term, b: Term) -> Term {
    Term::apps(Term::cnst("eq"), [ty, a, b])
}

pub fn mk_heq(ta: Term, tb: Term, a: Term, b: Term) -> Term {
    Term::apps(Term::cnst("heq"), [ta, tb, a, b])
}

pub fn mk_refl(ty: Term, a: Term) -> Term {
    Term::apps(Term::cnst("refl"), [ty, a])
}

pub fn mk_hrefl(ty: Term, a: Term) -> Term {
    Term::apps(Term::cnst("hrefl"), [ty, a])
}

/// `hsymm A B a b p : b == a` for `p : a == b`.
pub fn mk_hsymm(ta: Term, tb: Term, a: Term, b: Term, p: Term) -> Term {
    Term::apps(Term::cnst("hsymm"), [ta, tb, a, b, p])
}

/// `htrans A B C a b c p q : a == c` for `p : a == b`, `q : b == c`.
#[allow(clippy::too_many_arguments)]
pub fn mk_htrans(ta: Term, tb: Term, tc: Term, a: Term, b: Term, c: Term, p: Term, q: Term) -> Term {
    Term::apps(Term::cnst("htrans"), [ta, tb, tc, a, b, c, p, q])
}

pub fn mk_ofeq(ty: Term, a: Term, b: Term, p: Term) -> Term {
    Term::apps(Term::cnst("ofeq"), [ty, a, b, p])
}

pub fn mk_ofheq(ty: Term, a: Term, b: Term, p: Term) -> Term {
    Term::apps(Term::cnst("ofheq"), [ty, a, b, p])
}

/// Recognize `eq A a b`.
pub fn as_eq(t: &Term) -> Option<(&Term, &Term, &Term)> {
    let (h, args) = t.spine();
    match (h.as_const(), args.as_slice()) {
        (Some(n), [ty, a, b]) if &**n == "eq" => Some((ty, a, b)),
        _ => None,
    }
}

/// Recognize `heq A B a b`.
pub fn as_heq(t: &Term) -> Option<(&Term, &Term, &Term, &Term)> {
    let (h, args) = t.spine();
    match (h.as_const(), args.as_slice()) {
        (Some(n), [ta, tb, a, b]) if &**n == "heq" => Some((ta, tb, a, b)),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofStep {
    Refl,
    HRefl,
    HSymm,
    HTrans,
    OfEq,
    OfHEq,
}

/// Apply an equality axiom to its explicit arguments, inferring the
/// implicit type and side arguments with the kernel.
///
/// `Refl`/`HRefl` take the element; the others take proofs.
pub fn mk_proof_step(kernel: &Kernel, kind: ProofStep, args: &[Term]) -> Result<Term, TheoryError> {
    let expected = match kind {
        ProofStep::HTrans => 2,
        _ => 1,
    };
    if args.len() != expected {
        return Err(TheoryError::Arity { kind, expected, got: args.len() });
    }
    let heq_sides = |p: &Term| -> Result<(Term, Term, Term, Term), TheoryError> {
        let ty = kernel.infer(p)?;
        if let Some((ta, tb, a, b)) = as_heq(&ty) {
            return Ok((ta.clone(), tb.clone(), a.clone(), b.clone()));
        }
        let nf = kernel.normalize(&ty)?;
        match as_heq(&nf) {
            Some((ta, tb, a, b)) => Ok((ta.clone(), tb.clone(), a.clone(), b.clone())),
            None => Err(TheoryError::NotAnEquality { kind, ty }),
        }
    };
    let eq_sides = |p: &Term| -> Result<(Term, Term, Term), TheoryError> {
        let ty = kernel.infer(p)?;
        if let Some((t, a, b)) = as_eq(&ty) {
            return Ok((t.clone(), a.clone(), b.clone()));
        }
        let nf = kernel.normalize(&ty)?;
        match as_eq(&nf) {
            Some((t, a, b)) => Ok((t.clone(), a.clone(), b.clone())),
            None => Err(TheoryError::NotAnEquality { kind, ty }),
        }
    };
    let t = match kind {
        ProofStep::Refl => mk_refl(kernel.infer(&args[0])?, args[0].clone()),
        ProofStep::HRefl => mk_hrefl(kernel.infer(&args[0])?, args[0].clone()),
        ProofStep::HSymm => {
            let (ta, tb, a, b) = heq_sides(&args[0])?;
            mk_hsymm(ta, tb, a, b, args[0].clone())
        }
        ProofStep::HTrans => {
            let (ta, tb, a, b) = heq_sides(&args[0])?;
            let (tb2, tc, b2, c) = heq_sides(&args[1])?;
            if !kernel.defeq(&b, &b2)? || !kernel.defeq(&tb, &tb2)? {
                return Err(TheoryError::Mismatch {
                    kind,
                    msg: format!("middle terms `{b}` and `{b2}` differ"),
                });
            }
            mk_htrans(ta, tb, tc, a, b, c, args[0].clone(), args[1].clone())
        }
        ProofStep::OfEq => {
            let (t, a, b) = eq_sides(&args[0])?;
            mk_ofeq(t, a, b, args[0].clone())
        }
        ProofStep::OfHEq => {
            let (ta, tb, a, b) = heq_sides(&args[0])?;
            if !kernel.defeq(&ta, &tb)? {
                return Err(TheoryError::Mismatch {
                    kind,
                    msg: format!("sides have different types `{ta}` and `{tb}`"),
                });
            }
            mk_ofheq(ta, a, b, args[0].clone())
        }
    };
    // the result must itself type-check
    kernel.infer(&t)?;
    Ok(t)
}

/// A registered subsingleton type.
#[derive(Clone, Debug)]
pub struct SubsingletonEntry {
    /// The type as declared.
    pub ty: Term,
    /// Proof of `Pi (a b : A), a = b`.
    pub sse: Name,
    /// `Pi (C : Type) (c : C) (a : A), C == A -> c == a`
    pub hsse: Name,
}

/// Subsingleton types keyed by normal form.
#[derive(Clone, Debug, Default)]
pub struct SubsingletonRegistry {
    entries: Vec<SubsingletonEntry>,
    by_nf: HashMap<Term, usize>,
}

impl SubsingletonRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SubsingletonEntry] {
        &self.entries
    }

    /// Register `ty` as a subsingleton witnessed by the declared proof
    /// `sse`, adding `hsse_<sse>` to the kernel's local context. Registering
    /// a type that is already present (up to definitional equality)
    /// returns the existing axiom name.
    pub fn register(&mut self, kernel: &mut Kernel, ty: &Term, sse: &Name) -> Result<Name, TheoryError> {
        kernel.ensure_type(ty)?;
        let nf = kernel.normalize(ty)?;
        if let Some(&i) = self.by_nf.get(&nf) {
            return Ok(self.entries[i].hsse.clone());
        }
        let want = pi_telescope(
            &[(local("a"), ty.clone()), (local("b"), ty.clone())],
            mk_eq(ty.clone(), lc("a"), lc("b")),
        );
        let found = kernel.infer(&Term::cnst(sse.clone()))?;
        if !kernel.defeq(&found, &want)? {
            return Err(TheoryError::BadSubsingletonProof { proof: sse.clone(), ty: ty.clone(), found });
        }
        let hsse = name(&format!("hsse_{sse}"));
        let stmt = rename_binders(&mk_hsse(ty));
        kernel.declare_local(Declaration::assumption(hsse.clone(), stmt))?;
        self.by_nf.insert(nf, self.entries.len());
        self.entries.push(SubsingletonEntry { ty: ty.clone(), sse: sse.clone(), hsse: hsse.clone() });
        Ok(hsse)
    }

    pub fn lookup(&self, kernel: &Kernel, ty: &Term) -> Result<Option<&SubsingletonEntry>, KernelError> {
        if self.entries.is_empty() {
            return Ok(None);
        }
        let nf = kernel.normalize(ty)?;
        Ok(self.by_nf.get(&nf).map(|&i| &self.entries[i]))
    }
}

/// `Pi (C : Type) (c : C) (a : A), C == A -> c == a`
pub fn mk_hsse(a_ty: &Term) -> Term {
    pi_telescope(
        &[
            (local("C"), Term::sort()),
            (local("c"), lc("C")),
            (local("a"), a_ty.clone()),
            (local("h"), mk_heq(Term::sort(), Term::sort(), lc("C"), a_ty.clone())),
        ],
        mk_heq(lc("C"), a_ty.clone(), lc("c"), lc("a")),
    )
}
