//! Terms of the dependent λ-calculus.
//!
//! Bound variables are de Bruijn indices; binder names are kept only for
//! printing and take no part in equality or hashing, so `==` on [`Term`] is
//! α-equivalence. Every node caches its structural hash and its loose bound
//! variable range.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Names of constants, local declarations and binders.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: TermKind,
    hash: u64,
    /// One more than the largest loose bound index; zero for closed terms.
    lbr: u32,
}

#[derive(Clone)]
pub enum TermKind {
    Var(u32),
    Const(Name),
    Sort,
    App(Term, Term),
    Lambda { name: Name, ty: Term, body: Term },
    Pi { name: Name, ty: Term, body: Term },
}

impl Term {
    fn mk(kind: TermKind) -> Term {
        let mut h = DefaultHasher::new();
        let lbr = match &kind {
            TermKind::Var(i) => {
                0u8.hash(&mut h);
                i.hash(&mut h);
                i + 1
            }
            TermKind::Const(n) => {
                1u8.hash(&mut h);
                n.hash(&mut h);
                0
            }
            TermKind::Sort => {
                2u8.hash(&mut h);
                0
            }
            TermKind::App(f, a) => {
                3u8.hash(&mut h);
                f.hash_value().hash(&mut h);
                a.hash_value().hash(&mut h);
                f.lbr().max(a.lbr())
            }
            TermKind::Lambda { ty, body, .. } => {
                4u8.hash(&mut h);
                ty.hash_value().hash(&mut h);
                body.hash_value().hash(&mut h);
                ty.lbr().max(body.lbr().saturating_sub(1))
            }
            TermKind::Pi { ty, body, .. } => {
                5u8.hash(&mut h);
                ty.hash_value().hash(&mut h);
                body.hash_value().hash(&mut h);
                ty.lbr().max(body.lbr().saturating_sub(1))
            }
        };
        Term(Arc::new(Node { kind, hash: h.finish(), lbr }))
    }

    pub fn var(i: u32) -> Term {
        Term::mk(TermKind::Var(i))
    }

    pub fn cnst(n: impl Into<Name>) -> Term {
        Term::mk(TermKind::Const(n.into()))
    }

    pub fn sort() -> Term {
        Term::mk(TermKind::Sort)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::mk(TermKind::App(f, a))
    }

    /// `f a1 ... an`
    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lambda(name: impl Into<Name>, ty: Term, body: Term) -> Term {
        Term::mk(TermKind::Lambda { name: name.into(), ty, body })
    }

    pub fn pi(name: impl Into<Name>, ty: Term, body: Term) -> Term {
        Term::mk(TermKind::Pi { name: name.into(), ty, body })
    }

    /// Non-dependent function space `a -> b`.
    pub fn arrow(a: Term, b: Term) -> Term {
        Term::pi("_", a, b.lift(1, 0))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn hash_value(&self) -> u64 {
        self.0.hash
    }

    pub fn lbr(&self) -> u32 {
        self.0.lbr
    }

    pub fn is_closed(&self) -> bool {
        self.0.lbr == 0
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_sort(&self) -> bool {
        matches!(self.kind(), TermKind::Sort)
    }

    pub fn as_const(&self) -> Option<&Name> {
        match self.kind() {
            TermKind::Const(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.kind() {
            TermKind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let TermKind::App(f, a) = t.kind() {
            args.push(a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Does bound index `i` occur free?
    pub fn has_var(&self, i: u32) -> bool {
        if self.lbr() <= i {
            return false;
        }
        match self.kind() {
            TermKind::Var(j) => *j == i,
            TermKind::Const(_) | TermKind::Sort => false,
            TermKind::App(f, a) => f.has_var(i) || a.has_var(i),
            TermKind::Lambda { ty, body, .. } | TermKind::Pi { ty, body, .. } => {
                ty.has_var(i) || body.has_var(i + 1)
            }
        }
    }

    /// Does the constant `n` occur anywhere?
    pub fn has_const(&self, n: &str) -> bool {
        match self.kind() {
            TermKind::Const(m) => &**m == n,
            TermKind::Var(_) | TermKind::Sort => false,
            TermKind::App(f, a) => f.has_const(n) || a.has_const(n),
            TermKind::Lambda { ty, body, .. } | TermKind::Pi { ty, body, .. } => {
                ty.has_const(n) || body.has_const(n)
            }
        }
    }

    /// Shift loose indices `>= cutoff` by `k`.
    pub fn lift(&self, k: u32, cutoff: u32) -> Term {
        if k == 0 || self.lbr() <= cutoff {
            return self.clone();
        }
        match self.kind() {
            TermKind::Var(i) => Term::var(i + k),
            TermKind::Const(_) | TermKind::Sort => self.clone(),
            TermKind::App(f, a) => Term::app(f.lift(k, cutoff), a.lift(k, cutoff)),
            TermKind::Lambda { name, ty, body } => {
                Term::lambda(name.clone(), ty.lift(k, cutoff), body.lift(k, cutoff + 1))
            }
            TermKind::Pi { name, ty, body } => {
                Term::pi(name.clone(), ty.lift(k, cutoff), body.lift(k, cutoff + 1))
            }
        }
    }

    /// Lower loose indices `>= cutoff` by `k`. Indices in `cutoff..cutoff+k`
    /// must not occur.
    pub fn lower(&self, k: u32, cutoff: u32) -> Term {
        if k == 0 || self.lbr() <= cutoff {
            return self.clone();
        }
        match self.kind() {
            TermKind::Var(i) => {
                debug_assert!(*i >= cutoff + k);
                Term::var(i - k)
            }
            TermKind::Const(_) | TermKind::Sort => self.clone(),
            TermKind::App(f, a) => Term::app(f.lower(k, cutoff), a.lower(k, cutoff)),
            TermKind::Lambda { name, ty, body } => {
                Term::lambda(name.clone(), ty.lower(k, cutoff), body.lower(k, cutoff + 1))
            }
            TermKind::Pi { name, ty, body } => {
                Term::pi(name.clone(), ty.lower(k, cutoff), body.lower(k, cutoff + 1))
            }
        }
    }

    /// Substitute `arg` for index 0 of `self` (a binder body), lowering the rest.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst_at(arg, 0)
    }

    fn subst_at(&self, arg: &Term, depth: u32) -> Term {
        if self.lbr() <= depth {
            return self.clone();
        }
        match self.kind() {
            TermKind::Var(i) => {
                if *i == depth {
                    arg.lift(depth, 0)
                } else {
                    // i > depth here, since lbr > depth and i != depth
                    Term::var(i - 1)
                }
            }
            TermKind::Const(_) | TermKind::Sort => self.clone(),
            TermKind::App(f, a) => Term::app(f.subst_at(arg, depth), a.subst_at(arg, depth)),
            TermKind::Lambda { name, ty, body } => Term::lambda(
                name.clone(),
                ty.subst_at(arg, depth),
                body.subst_at(arg, depth + 1),
            ),
            TermKind::Pi { name, ty, body } => {
                Term::pi(name.clone(), ty.subst_at(arg, depth), body.subst_at(arg, depth + 1))
            }
        }
    }

    /// Replace the constant `n` by bound index `depth` (closing over a
    /// named local so the result can sit under a new binder).
    pub fn abstract_const(&self, n: &str, depth: u32) -> Term {
        match self.kind() {
            TermKind::Const(m) if &**m == n => Term::var(depth),
            TermKind::Var(i) if *i >= depth => Term::var(i + 1),
            TermKind::Var(_) | TermKind::Const(_) | TermKind::Sort => self.clone(),
            TermKind::App(f, a) => {
                Term::app(f.abstract_const(n, depth), a.abstract_const(n, depth))
            }
            TermKind::Lambda { name, ty, body } => Term::lambda(
                name.clone(),
                ty.abstract_const(n, depth),
                body.abstract_const(n, depth + 1),
            ),
            TermKind::Pi { name, ty, body } => Term::pi(
                name.clone(),
                ty.abstract_const(n, depth),
                body.abstract_const(n, depth + 1),
            ),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self.kind() {
            TermKind::Var(_) | TermKind::Const(_) | TermKind::Sort => 1,
            TermKind::App(f, a) => 1 + f.size() + a.size(),
            TermKind::Lambda { ty, body, .. } | TermKind::Pi { ty, body, .. } => {
                1 + ty.size() + body.size()
            }
        }
    }
}

/// Build `Pi` over named locals: each `(n, ty)` may mention earlier names.
pub fn pi_telescope(binders: &[(Name, Term)], body: Term) -> Term {
    close_telescope(binders, body, Term::pi)
}

/// Build `fun` over named locals, as [`pi_telescope`].
pub fn lambda_telescope(binders: &[(Name, Term)], body: Term) -> Term {
    close_telescope(binders, body, Term::lambda)
}

fn close_telescope(
    binders: &[(Name, Term)],
    body: Term,
    mk: fn(Name, Term, Term) -> Term,
) -> Term {
    // abstracting an outer name also reaches the types of inner binders
    binders.iter().rev().fold(body, |acc, (n, ty)| {
        mk(n.clone(), ty.clone(), acc.abstract_const(n, 0))
    })
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.lbr != other.0.lbr {
            return false;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Var(i), TermKind::Var(j)) => i == j,
            (TermKind::Const(a), TermKind::Const(b)) => a == b,
            (TermKind::Sort, TermKind::Sort) => true,
            (TermKind::App(f, a), TermKind::App(g, b)) => f == g && a == b,
            (TermKind::Lambda { ty: t1, body: b1, .. }, TermKind::Lambda { ty: t2, body: b2, .. })
            | (TermKind::Pi { ty: t1, body: b1, .. }, TermKind::Pi { ty: t2, body: b2, .. }) => {
                t1 == t2 && b1 == b2
            }
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_term(self))
    }
}
