use std::collections::HashMap;

use super::term::{Name, Term};

/// `name : ty` (an assumption) or `name : ty := value` (a definition).
#[derive(Clone, Debug)]
pub struct Declaration {
    pub name: Name,
    pub ty: Term,
    pub value: Option<Term>,
}

impl Declaration {
    pub fn assumption(name: impl Into<Name>, ty: Term) -> Self {
        Declaration { name: name.into(), ty, value: None }
    }

    pub fn definition(name: impl Into<Name>, ty: Term, value: Term) -> Self {
        Declaration { name: name.into(), ty, value: Some(value) }
    }

    pub fn is_definition(&self) -> bool {
        self.value.is_some()
    }
}

/// An ordered sequence of declarations with unique names.
#[derive(Clone, Debug, Default)]
pub struct Context {
    decls: Vec<Declaration>,
    index: HashMap<Name, usize>,
}

/// The global counterpart of [`Context`].
pub type Environment = Context;

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends without any checking; returns `false` on a duplicate name.
    pub fn push(&mut self, decl: Declaration) -> bool {
        if self.index.contains_key(&decl.name) {
            return false;
        }
        self.index.insert(decl.name.clone(), self.decls.len());
        self.decls.push(decl);
        true
    }

    pub fn get(&self, n: &str) -> Option<&Declaration> {
        self.index.get(n).map(|&i| &self.decls[i])
    }

    pub fn contains(&self, n: &str) -> bool {
        self.index.contains_key(n)
    }

    pub fn position(&self, n: &str) -> Option<usize> {
        self.index.get(n).copied()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Declaration> {
        self.decls.iter()
    }

    pub fn decls(&self) -> &[Declaration] {
        &self.decls
    }
}
