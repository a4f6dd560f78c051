//! Equality facts as the engine stores them.

use crate::equality::mk_heq;
use crate::kernel::{Name, Term};

/// A proof of `lhs == rhs` between two flattened nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqProof {
    pub lhs: Name,
    pub rhs: Name,
    pub proof: Term,
}

impl EqProof {
    pub fn new(lhs: Name, rhs: Name, proof: Term) -> Self {
        EqProof { lhs, rhs, proof }
    }

    /// `heq lhs_ty rhs_ty lhs rhs`
    pub fn statement(&self, lhs_ty: Term, rhs_ty: Term) -> Term {
        mk_heq(lhs_ty, rhs_ty, Term::cnst(self.lhs.clone()), Term::cnst(self.rhs.clone()))
    }
}
