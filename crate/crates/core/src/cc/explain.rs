//! Proof construction from the proof forest.

use super::{CcError, Engine, NodeId};
use crate::equality::{hcongr_families, hcongr_name, mk_hrefl, mk_hsymm, mk_htrans, mk_ofheq, mk_refl};
use crate::kernel::{Name, Term};

impl Engine {
    fn var(&self, i: NodeId) -> Term {
        Term::cnst(self.nodes[i].name.clone())
    }

    fn ty(&self, i: NodeId) -> Term {
        self.nodes[i].ty.clone()
    }

    /// `x, target[x], target²[x], ..., repr[x]`
    fn root_path(&self, x: NodeId) -> Vec<NodeId> {
        let mut path = vec![x];
        let mut cur = x;
        while let Some((t, _)) = &self.pr[cur] {
            cur = *t;
            path.push(cur);
        }
        path
    }

    /// Smallest `n`, `m` with `targetⁿ[a] = targetᵐ[b]`.
    fn meeting_point(&self, a: NodeId, b: NodeId) -> Option<(usize, usize)> {
        let pa = self.root_path(a);
        let pb = self.root_path(b);
        pb.iter().enumerate().find_map(|(m, x)| pa.iter().position(|y| y == x).map(|n| (n, m)))
    }

    /// A proof of `a == b`.
    pub(crate) fn mkpr(&self, a: NodeId, b: NodeId) -> Result<Term, CcError> {
        if a == b {
            return Ok(mk_hrefl(self.ty(a), self.var(a)));
        }
        let (n, m) = self
            .meeting_point(a, b)
            .ok_or_else(|| CcError::NotEqual(self.nodes[a].name.clone(), self.nodes[b].name.clone()))?;
        let (ea, t) = self.mktrans(a, n);
        let (eb, _) = self.mktrans(b, m);
        let eb = mk_hsymm(self.ty(b), self.ty(t), self.var(b), self.var(t), eb);
        Ok(mk_htrans(
            self.ty(a),
            self.ty(t),
            self.ty(b),
            self.var(a),
            self.var(t),
            self.var(b),
            ea,
            eb,
        ))
    }

    /// A proof of `a == targetⁿ[a]`, together with `targetⁿ[a]`.
    fn mktrans(&self, a: NodeId, n: usize) -> (Term, NodeId) {
        let mut steps: Vec<(NodeId, NodeId, Term)> = Vec::with_capacity(n);
        let mut cur = a;
        for _ in 0..n {
            let (t, edge) = self.pr[cur].as_ref().expect("path within the proof forest");
            let forward = edge.lhs == self.nodes[cur].name && edge.rhs == self.nodes[*t].name;
            let step = if forward {
                edge.proof.clone()
            } else {
                mk_hsymm(self.ty(*t), self.ty(cur), self.var(*t), self.var(cur), edge.proof.clone())
            };
            steps.push((cur, *t, step));
            cur = *t;
        }
        let end = cur;
        let mut acc = mk_hrefl(self.ty(end), self.var(end));
        for (x, y, step) in steps.into_iter().rev() {
            acc = mk_htrans(
                self.ty(x),
                self.ty(y),
                self.ty(end),
                self.var(x),
                self.var(y),
                self.var(end),
                step,
                acc,
            );
        }
        (acc, end)
    }

    /// A proof of `d == e` for congruent local definitions.
    ///
    /// Peels matching applications while the function parts are themselves
    /// congruent definitions, then closes with `hcongr_n` on function parts
    /// that are equal at one type.
    pub(crate) fn mkcongr(&self, d: NodeId, e: NodeId) -> Result<Term, CcError> {
        let not_congruent =
            || CcError::NotCongruent(self.nodes[d].name.clone(), self.nodes[e].name.clone());
        let mut args: Vec<(NodeId, NodeId, Term)> = Vec::new();
        let (mut cd, mut ce) = (d, e);
        let (f, g) = loop {
            let ((f, a), (g, b)) = match (self.nodes[cd].app, self.nodes[ce].app) {
                (Some(x), Some(y)) => (x, y),
                _ => return Err(not_congruent()),
            };
            if self.repr[a] != self.repr[b] {
                return Err(not_congruent());
            }
            args.push((a, b, self.mkpr(a, b)?));
            if self.congruent(f, g) {
                (cd, ce) = (f, g);
                continue;
            }
            if self.repr[f] != self.repr[g] || self.nodes[f].ty_id != self.nodes[g].ty_id {
                return Err(not_congruent());
            }
            break (f, g);
        };
        args.reverse();
        let n = args.len();
        let fty = self.ty(f);
        let unsupported =
            || CcError::Unsupported { fun: self.nodes[f].name.clone(), ty: fty.clone(), arity: n };
        let (fams, cod) = hcongr_families(&self.kernel, &fty, n)?.ok_or_else(unsupported)?;
        let hfg = if f == g {
            mk_refl(fty.clone(), self.var(f))
        } else {
            mk_ofheq(fty.clone(), self.var(f), self.var(g), self.mkpr(f, g)?)
        };
        let mut all: Vec<Term> = fams;
        all.push(cod);
        all.extend([self.var(f), self.var(g), hfg]);
        for (a, b, p) in args {
            all.extend([self.var(a), self.var(b), p]);
        }
        let head = hcongr_name(n);
        if !self.kernel.is_declared(&head) {
            return Err(unsupported());
        }
        Ok(Term::apps(Term::cnst(head), all))
    }

    /// The nodes visited by the proof of `a == b`: up from `a` to the
    /// meeting point, then down to `b`.
    pub fn mkpr_path(&self, a: &Name, b: &Name) -> Result<Vec<Name>, CcError> {
        let (ia, ib) = (self.id(a)?, self.id(b)?);
        if ia == ib {
            return Ok(vec![a.clone()]);
        }
        let (n, m) = self.meeting_point(ia, ib).ok_or_else(|| CcError::NotEqual(a.clone(), b.clone()))?;
        let pa = self.root_path(ia);
        let pb = self.root_path(ib);
        let mut out: Vec<Name> = pa[..=n].iter().map(|&x| self.nodes[x].name.clone()).collect();
        out.extend(pb[..m].iter().rev().map(|&x| self.nodes[x].name.clone()));
        Ok(out)
    }

    /// A proof of `a == b` when both are in one class.
    pub fn prove_eq(&self, a: &Name, b: &Name) -> Result<Term, CcError> {
        self.mkpr(self.id(a)?, self.id(b)?)
    }

    /// The congruence proof of `d == e`, for two congruent local
    /// definitions.
    pub fn prove_congruence(&self, d: &Name, e: &Name) -> Result<Term, CcError> {
        self.mkcongr(self.id(d)?, self.id(e)?)
    }

    /// Whether two local definitions are currently congruent.
    pub fn is_congruent(&self, d: &Name, e: &Name) -> Result<bool, CcError> {
        Ok(self.congruent(self.id(d)?, self.id(e)?))
    }

    /// Hash under which a local definition is stored in the congruence
    /// table, `None` for other nodes.
    pub fn congr_hash_of(&self, n: &Name) -> Result<Option<u64>, CcError> {
        let i = self.id(n)?;
        Ok(self.nodes[i].app.map(|_| self.congr_hash(i)))
    }
}
