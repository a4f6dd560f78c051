//! Independent re-checking of emitted proofs with the kernel alone.

use crate::kernel::{Kernel, KernelError, Name, Term};

#[derive(Debug, Clone, thiserror::Error)]
pub enum Rejection {
    #[error("proof is ill-typed: {0}")]
    IllTyped(KernelError),
    #[error("proof has type `{found}`, expected `{expected}`")]
    WrongStatement { expected: Term, found: Term },
    #[error("statement is not a type: {0}")]
    BadStatement(KernelError),
    #[error("local definition `{name}` does not check: {source}")]
    BadDefinition { name: Name, source: KernelError },
}

/// Accept iff `proof` has a type definitionally equal to `statement`.
pub fn check_proof(kernel: &Kernel, proof: &Term, statement: &Term) -> Result<(), Rejection> {
    let k = kernel.clone();
    k.ensure_type(statement).map_err(Rejection::BadStatement)?;
    let found = k.infer(proof).map_err(Rejection::IllTyped)?;
    match k.defeq(&found, statement) {
        Ok(true) => Ok(()),
        Ok(false) => Err(Rejection::WrongStatement { expected: statement.clone(), found }),
        Err(e) => Err(Rejection::IllTyped(e)),
    }
}

/// Re-check every local definition: its type is a type and its value has
/// that type. Definitions added by the solver are not checked on entry, so
/// this is what makes proofs mentioning them trustworthy.
pub fn check_local_definitions(kernel: &Kernel) -> Result<(), Rejection> {
    let k = kernel.clone();
    for d in k.ctx().iter() {
        let Some(v) = &d.value else { continue };
        let bad = |source| Rejection::BadDefinition { name: d.name.clone(), source };
        if v.has_const(&d.name) {
            return Err(bad(KernelError::SelfReference(d.name.clone())));
        }
        k.ensure_type(&d.ty).map_err(bad)?;
        k.check(v, &d.ty).map_err(bad)?;
    }
    Ok(())
}

/// [`check_local_definitions`] followed by [`check_proof`].
pub fn check_all(kernel: &Kernel, proof: &Term, statement: &Term) -> Result<(), Rejection> {
    check_local_definitions(kernel)?;
    check_proof(kernel, proof, statement)
}
