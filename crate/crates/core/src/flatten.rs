//! Naming every proper subterm of an equality with a local definition.
//!
//! Each application `f a` becomes `c#k : T := f' a'` where `f'` and `a'`
//! name the function and argument. Constants stand for themselves; λ-, Π-
//! and `Type` subterms are opaque atoms, named by a definition the engine
//! never looks inside. Subterms are shared up to α-equivalence.

use std::collections::HashMap;

use crate::equality::{mk_ofeq, mk_ofheq};
use crate::kernel::{name, Declaration, Kernel, KernelError, Name, Term, TermKind};
use crate::proof::EqProof;

#[derive(Debug, Clone, thiserror::Error)]
pub enum FlattenError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("goal is not an equality: `{0}`")]
    UnsupportedGoal(Term),
    #[error("sides of a homogeneous equality have different types: `{0}` and `{1}`")]
    HeterogeneousSides(Term, Term),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqKind {
    /// `a = b`
    Homogeneous,
    /// `a == b`
    Heterogeneous,
}

/// An equality `lhs = rhs` or `lhs == rhs` between closed terms.
#[derive(Clone, Debug)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub kind: EqKind,
}

/// A hypothesis `name : lhs (=|==) rhs` already declared in the kernel.
#[derive(Clone, Debug)]
pub struct Hypothesis {
    pub name: Name,
    pub eq: Equation,
}

#[derive(Clone, Debug)]
pub enum FlatEntry {
    /// A node with no application structure. `value` is set for the fresh
    /// definitions naming λ/Π/`Type` atoms.
    Assumption { name: Name, ty: Term, value: Option<Term> },
    /// `name : ty := fun arg`
    LocalDef { name: Name, ty: Term, fun: Name, arg: Name },
    /// A processed hypothesis `lhs == rhs`.
    EqHyp { name: Name, proof: EqProof },
}

impl FlatEntry {
    pub fn name(&self) -> &Name {
        match self {
            FlatEntry::Assumption { name, .. }
            | FlatEntry::LocalDef { name, .. }
            | FlatEntry::EqHyp { name, .. } => name,
        }
    }
}

/// Engine input: entries in dependency order plus the goal.
#[derive(Clone, Debug)]
pub struct FlatContext {
    pub entries: Vec<FlatEntry>,
    pub goal_lhs: Name,
    pub goal_rhs: Name,
    /// The common type of the goal sides when the goal was `a = b`; the
    /// final proof is wrapped with `ofheq` at this type.
    pub homogeneous_goal: Option<Term>,
    /// For nodes whose type was itself named: node to type node.
    pub type_nodes: HashMap<Name, Name>,
    /// Longest application spine over all local definitions.
    pub max_arity: usize,
}

impl FlatContext {
    pub fn local_defs(&self) -> impl Iterator<Item = (&Name, &Name, &Name)> {
        self.entries.iter().filter_map(|e| match e {
            FlatEntry::LocalDef { name, fun, arg, .. } => Some((name, fun, arg)),
            _ => None,
        })
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().filter_map(|e| match e {
            FlatEntry::EqHyp { .. } => None,
            e => Some(e.name()),
        })
    }

    pub fn equations(&self) -> impl Iterator<Item = &EqProof> {
        self.entries.iter().filter_map(|e| match e {
            FlatEntry::EqHyp { proof, .. } => Some(proof),
            _ => None,
        })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FlattenOptions {
    /// Also name the type of every node whose type is an application or a
    /// constant, so that classes of types can be tracked.
    pub internalize_types: bool,
}

struct Flattener<'k> {
    kernel: &'k mut Kernel,
    opts: FlattenOptions,
    entries: Vec<FlatEntry>,
    named: HashMap<Term, Name>,
    arity: HashMap<Name, usize>,
    type_nodes: HashMap<Name, Name>,
    counter: usize,
}

/// Flatten the hypotheses and goal, declaring the new local definitions in
/// `kernel`. Each name in `vars` becomes a node first, in order.
pub fn flatten(
    kernel: &mut Kernel,
    vars: &[Name],
    hyps: &[Hypothesis],
    goal: &Equation,
    opts: FlattenOptions,
) -> Result<FlatContext, FlattenError> {
    let mut fl = Flattener {
        kernel,
        opts,
        entries: Vec::new(),
        named: HashMap::new(),
        arity: HashMap::new(),
        type_nodes: HashMap::new(),
        counter: 0,
    };
    for v in vars {
        fl.node(&Term::cnst(v.clone()))?;
    }
    for h in hyps {
        let (l, r) = fl.equation(&h.eq)?;
        let hyp = Term::cnst(h.name.clone());
        let proof = match h.eq.kind {
            EqKind::Heterogeneous => hyp,
            EqKind::Homogeneous => {
                let ty = fl.kernel.infer(&h.eq.lhs)?;
                mk_ofeq(ty, Term::cnst(l.clone()), Term::cnst(r.clone()), hyp)
            }
        };
        fl.entries.push(FlatEntry::EqHyp {
            name: h.name.clone(),
            proof: EqProof { lhs: l, rhs: r, proof },
        });
    }
    let (gl, gr) = fl.equation(goal)?;
    let homogeneous_goal = match goal.kind {
        EqKind::Homogeneous => Some(fl.kernel.infer(&goal.lhs)?),
        EqKind::Heterogeneous => None,
    };
    let max_arity = fl.arity.values().copied().max().unwrap_or(0);
    Ok(FlatContext {
        entries: fl.entries,
        goal_lhs: gl,
        goal_rhs: gr,
        homogeneous_goal,
        type_nodes: fl.type_nodes,
        max_arity,
    })
}

/// Convert a proof of the flattened heterogeneous goal into a proof of the
/// goal as stated.
pub fn wrap_goal_proof(flat: &FlatContext, proof: Term) -> Term {
    match &flat.homogeneous_goal {
        Some(ty) => mk_ofheq(
            ty.clone(),
            Term::cnst(flat.goal_lhs.clone()),
            Term::cnst(flat.goal_rhs.clone()),
            proof,
        ),
        None => proof,
    }
}

impl Flattener<'_> {
    fn equation(&mut self, eq: &Equation) -> Result<(Name, Name), FlattenError> {
        if eq.kind == EqKind::Homogeneous {
            let tl = self.kernel.infer(&eq.lhs)?;
            let tr = self.kernel.infer(&eq.rhs)?;
            if !self.kernel.defeq(&tl, &tr)? {
                return Err(FlattenError::HeterogeneousSides(tl, tr));
            }
        }
        let l = self.node(&eq.lhs)?;
        let r = self.node(&eq.rhs)?;
        Ok((l, r))
    }

    fn fresh(&mut self) -> Name {
        loop {
            self.counter += 1;
            let n = name(&format!("c#{}", self.counter));
            if !self.kernel.is_declared(&n) {
                return n;
            }
        }
    }

    /// The node naming `t`, creating it (and its subterms) if needed.
    fn node(&mut self, t: &Term) -> Result<Name, FlattenError> {
        if let Some(n) = self.named.get(t) {
            return Ok(n.clone());
        }
        let n = match t.kind() {
            TermKind::Const(c) => {
                let ty = match self.kernel.lookup(c) {
                    Some(d) => d.ty.clone(),
                    None => return Err(KernelError::UnboundName(c.clone()).into()),
                };
                let tn = self.type_node(&ty)?;
                self.record_type(c, tn);
                self.entries.push(FlatEntry::Assumption { name: c.clone(), ty, value: None });
                c.clone()
            }
            TermKind::App(f, a) => {
                let fun = self.node(f)?;
                let arg = self.node(a)?;
                let value = Term::app(Term::cnst(fun.clone()), Term::cnst(arg.clone()));
                let ty = self.kernel.infer(&value)?;
                let tn = self.type_node(&ty)?;
                let n = self.fresh();
                self.kernel.push_local(Declaration::definition(n.clone(), ty.clone(), value))?;
                self.record_type(&n, tn);
                let ar = 1 + self.arity.get(&fun).copied().unwrap_or(0);
                self.arity.insert(n.clone(), ar);
                self.entries.push(FlatEntry::LocalDef { name: n.clone(), ty, fun, arg });
                n
            }
            TermKind::Var(i) => return Err(KernelError::UnboundVar(*i).into()),
            TermKind::Sort | TermKind::Lambda { .. } | TermKind::Pi { .. } => {
                let ty = self.kernel.infer(t)?;
                let tn = self.type_node(&ty)?;
                let n = self.fresh();
                self.kernel.push_local(Declaration::definition(n.clone(), ty.clone(), t.clone()))?;
                self.record_type(&n, tn);
                self.entries.push(FlatEntry::Assumption {
                    name: n.clone(),
                    ty,
                    value: Some(t.clone()),
                });
                n
            }
        };
        self.named.insert(t.clone(), n.clone());
        // Inferred types may mention nodes by name.
        self.named.insert(Term::cnst(n.clone()), n.clone());
        Ok(n)
    }

    fn type_node(&mut self, ty: &Term) -> Result<Option<Name>, FlattenError> {
        if !self.opts.internalize_types {
            return Ok(None);
        }
        match ty.kind() {
            TermKind::App(..) | TermKind::Const(_) => Ok(Some(self.node(ty)?)),
            _ => Ok(None),
        }
    }

    fn record_type(&mut self, n: &Name, tn: Option<Name>) {
        if let Some(tn) = tn {
            self.type_nodes.insert(n.clone(), tn);
        }
    }
}
