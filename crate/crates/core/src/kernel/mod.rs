//! The trusted core: normalization, definitional equality and type
//! inference for the term language.
//!
//! Normalization is substitution-based and unfolds every definition
//! (β, δ, ζ and η; ι is vacuous since there are no inductive types). Two
//! terms are definitionally equal when their normal forms are α-equal.
//! `Type : Type` is the only sort.

mod env;
mod term;

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

pub use env::{Context, Declaration, Environment};
pub use term::{lambda_telescope, name, pi_telescope, Name, Term, TermKind};

#[derive(Debug, Clone, thiserror::Error)]
pub enum KernelError {
    #[error("unbound name `{0}`")]
    UnboundName(Name),
    #[error("dangling bound variable #{0}")]
    UnboundVar(u32),
    #[error("type mismatch in `{term}`: expected `{expected}`, found `{found}`")]
    TypeMismatch { term: Term, expected: Term, found: Term },
    #[error("`{term}` is not a function, its type is `{ty}`")]
    NotAFunction { term: Term, ty: Term },
    #[error("`{term}` is not a type, its type is `{ty}`")]
    NotAType { term: Term, ty: Term },
    #[error("duplicate declaration `{0}`")]
    Duplicate(Name),
    #[error("definition `{0}` refers to itself")]
    SelfReference(Name),
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;

/// A type checker over a global environment and a local context.
///
/// The environment is shared and frozen while solving; the local context
/// only ever grows by declarations with fresh names, which keeps the
/// normalization and inference caches valid. Caches are not synchronized,
/// so a `Kernel` is confined to one thread.
pub struct Kernel {
    env: Arc<Environment>,
    ctx: Context,
    nf_cache: RefCell<HashMap<Term, Term>>,
    ty_cache: RefCell<HashMap<Term, Term>>,
}

impl Clone for Kernel {
    fn clone(&self) -> Self {
        Kernel::new(self.env.clone(), self.ctx.clone())
    }
}

impl Kernel {
    pub fn new(env: Arc<Environment>, ctx: Context) -> Self {
        Kernel {
            env,
            ctx,
            nf_cache: RefCell::new(HashMap::new()),
            ty_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn env(&self) -> &Arc<Environment> {
        &self.env
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    /// Local declarations shadow nothing: names are unique across both.
    pub fn lookup(&self, n: &str) -> Option<&Declaration> {
        self.ctx.get(n).or_else(|| self.env.get(n))
    }

    pub fn is_declared(&self, n: &str) -> bool {
        self.ctx.contains(n) || self.env.contains(n)
    }

    /// Append a local declaration without checking it.
    pub fn push_local(&mut self, decl: Declaration) -> Result<()> {
        if self.env.contains(&decl.name) || !self.ctx.push(decl.clone()) {
            return Err(KernelError::Duplicate(decl.name));
        }
        Ok(())
    }

    /// Check a declaration, then append it to the local context.
    pub fn declare_local(&mut self, decl: Declaration) -> Result<()> {
        self.check_declaration(&decl)?;
        self.push_local(decl)
    }

    /// Check a declaration, then append it to the global environment.
    pub fn declare_global(&mut self, decl: Declaration) -> Result<()> {
        self.check_declaration(&decl)?;
        if self.is_declared(&decl.name) {
            return Err(KernelError::Duplicate(decl.name));
        }
        Arc::make_mut(&mut self.env).push(decl);
        Ok(())
    }

    pub fn check_declaration(&self, decl: &Declaration) -> Result<()> {
        if self.is_declared(&decl.name) {
            return Err(KernelError::Duplicate(decl.name.clone()));
        }
        self.ensure_type(&decl.ty)?;
        if let Some(v) = &decl.value {
            if v.has_const(&decl.name) {
                return Err(KernelError::SelfReference(decl.name.clone()));
            }
            self.check(v, &decl.ty)?;
        }
        Ok(())
    }

    /// Fails unless `t` is a type (its type normalizes to `Type`).
    pub fn ensure_type(&self, t: &Term) -> Result<()> {
        let ty = self.infer(t)?;
        if self.normalize(&ty)?.is_sort() {
            Ok(())
        } else {
            Err(KernelError::NotAType { term: t.clone(), ty })
        }
    }

    /// Fails unless `infer(t)` is definitionally equal to `ty`.
    pub fn check(&self, t: &Term, ty: &Term) -> Result<()> {
        let found = self.infer(t)?;
        if self.defeq(&found, ty)? {
            Ok(())
        } else {
            Err(KernelError::TypeMismatch { term: t.clone(), expected: ty.clone(), found })
        }
    }

    pub fn normalize(&self, t: &Term) -> Result<Term> {
        match t.kind() {
            TermKind::Var(_) | TermKind::Sort => return Ok(t.clone()),
            _ => {}
        }
        if let Some(r) = self.nf_cache.borrow().get(t) {
            return Ok(r.clone());
        }
        let r = match t.kind() {
            TermKind::Var(_) | TermKind::Sort => unreachable!(),
            TermKind::Const(n) => match self.lookup(n) {
                Some(Declaration { value: Some(v), .. }) => {
                    let v = v.clone();
                    self.normalize(&v)?
                }
                Some(_) => t.clone(),
                None => return Err(KernelError::UnboundName(n.clone())),
            },
            TermKind::App(f, a) => {
                let f = self.normalize(f)?;
                match f.kind() {
                    TermKind::Lambda { body, .. } => self.normalize(&body.instantiate(a))?,
                    _ => Term::app(f, self.normalize(a)?),
                }
            }
            TermKind::Lambda { name, ty, body } => {
                let ty = self.normalize(ty)?;
                let body = self.normalize(body)?;
                match body.kind() {
                    TermKind::App(g, x)
                        if matches!(x.kind(), TermKind::Var(0)) && !g.has_var(0) =>
                    {
                        g.lower(1, 0)
                    }
                    _ => Term::lambda(name.clone(), ty, body),
                }
            }
            TermKind::Pi { name, ty, body } => {
                Term::pi(name.clone(), self.normalize(ty)?, self.normalize(body)?)
            }
        };
        self.nf_cache.borrow_mut().insert(t.clone(), r.clone());
        Ok(r)
    }

    pub fn defeq(&self, a: &Term, b: &Term) -> Result<bool> {
        if a == b {
            return Ok(true);
        }
        Ok(self.normalize(a)? == self.normalize(b)?)
    }

    pub fn infer(&self, t: &Term) -> Result<Term> {
        self.infer_in(t, &mut Vec::new())
    }

    /// `binders` holds the types of enclosing binders, innermost last.
    fn infer_in(&self, t: &Term, binders: &mut Vec<Term>) -> Result<Term> {
        let cacheable = t.is_closed();
        if cacheable {
            if let Some(ty) = self.ty_cache.borrow().get(t) {
                return Ok(ty.clone());
            }
        }
        let ty = match t.kind() {
            TermKind::Var(i) => {
                let depth = binders.len() as u32;
                if *i >= depth {
                    return Err(KernelError::UnboundVar(*i));
                }
                binders[(depth - 1 - i) as usize].lift(i + 1, 0)
            }
            TermKind::Sort => Term::sort(),
            TermKind::Const(n) => match self.lookup(n) {
                Some(d) => d.ty.clone(),
                None => return Err(KernelError::UnboundName(n.clone())),
            },
            TermKind::App(f, a) => {
                let fty = self.infer_in(f, binders)?;
                let fty_nf = self.normalize(&fty)?;
                let TermKind::Pi { ty: dom, body: cod, .. } = fty_nf.kind() else {
                    return Err(KernelError::NotAFunction { term: f.clone(), ty: fty });
                };
                let aty = self.infer_in(a, binders)?;
                if !self.defeq(&aty, dom)? {
                    return Err(KernelError::TypeMismatch {
                        term: t.clone(),
                        expected: dom.clone(),
                        found: aty,
                    });
                }
                cod.instantiate(a)
            }
            TermKind::Lambda { name, ty, body } => {
                self.sort_of(ty, binders)?;
                binders.push(ty.clone());
                let bty = self.infer_in(body, binders);
                binders.pop();
                Term::pi(name.clone(), ty.clone(), bty?)
            }
            TermKind::Pi { ty, body, .. } => {
                self.sort_of(ty, binders)?;
                binders.push(ty.clone());
                let r = self.sort_of(body, binders);
                binders.pop();
                r?;
                Term::sort()
            }
        };
        if cacheable {
            self.ty_cache.borrow_mut().insert(t.clone(), ty.clone());
        }
        Ok(ty)
    }

    fn sort_of(&self, t: &Term, binders: &mut Vec<Term>) -> Result<()> {
        let ty = self.infer_in(t, binders)?;
        if self.normalize(&ty)?.is_sort() {
            Ok(())
        } else {
            Err(KernelError::NotAType { term: t.clone(), ty })
        }
    }

    /// Unfold definitions at the head of a type until it is a `Pi`, then
    /// split off up to `n` binders: returns the domains (each open over the
    /// preceding binders) and the remaining codomain.
    pub fn pi_telescope_of(&self, ty: &Term, n: usize) -> Result<Option<(Vec<Term>, Term)>> {
        let mut doms = Vec::with_capacity(n);
        let mut cur = self.normalize(ty)?;
        while doms.len() < n {
            match cur.kind() {
                TermKind::Pi { ty, body, .. } => {
                    doms.push(ty.clone());
                    cur = body.clone();
                }
                _ => return Ok(None),
            }
        }
        Ok(Some((doms, cur)))
    }
}

/// Normal form of `t` under `env` and `ctx`.
pub fn normalize(t: &Term, env: &Environment, ctx: &Context) -> Result<Term> {
    Kernel::new(Arc::new(env.clone()), ctx.clone()).normalize(t)
}

pub fn defeq(t: &Term, s: &Term, env: &Environment, ctx: &Context) -> Result<bool> {
    Kernel::new(Arc::new(env.clone()), ctx.clone()).defeq(t, s)
}

pub fn infer_type(t: &Term, env: &Environment, ctx: &Context) -> Result<Term> {
    Kernel::new(Arc::new(env.clone()), ctx.clone()).infer(t)
}
