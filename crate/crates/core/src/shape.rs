//! A normalizing view of proof terms for comparing proofs by structure.
//!
//! Implicit arguments are dropped, solver-generated proof definitions are
//! inlined, flattening nodes are unfolded back to the subterms they name,
//! and reflexivity steps are erased:
//!
//! ```text
//! htrans p (hrefl _)  ~>  p          htrans (hrefl _) p  ~>  p
//! hsymm (hrefl x)     ~>  hrefl x    hsymm (hsymm p)     ~>  p
//! ofheq (hrefl x)     ~>  refl x     ofheq (ofeq p)      ~>  p
//! ofeq (refl x)       ~>  hrefl x
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::kernel::{Kernel, Term, TermKind};
use crate::syntax::print_term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// An equality axiom applied to its explicit arguments.
    Step { head: String, args: Vec<Shape> },
    /// A hypothesis, or an element for `refl`/`hrefl`.
    Leaf(Term),
}

impl Shape {
    fn step(head: &str, args: Vec<Shape>) -> Shape {
        Shape::Step { head: head.to_string(), args }
    }

    fn head(&self) -> Option<&str> {
        match self {
            Shape::Step { head, .. } => Some(head),
            Shape::Leaf(_) => None,
        }
    }

    fn is_refl(&self) -> bool {
        matches!(self.head(), Some("hrefl"))
    }

    /// Arities of the `hcongr_n` steps used anywhere in the proof.
    pub fn hcongr_arities(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.walk(&mut |s| {
            if let Some(n) = s.head().and_then(|h| h.strip_prefix("hcongr_")) {
                out.insert(n.parse().expect("hcongr arity"));
            }
        });
        out
    }

    /// Number of steps with the given head.
    pub fn count(&self, head: &str) -> usize {
        let mut n = 0;
        self.walk(&mut |s| {
            if s.head() == Some(head) {
                n += 1;
            }
        });
        n
    }

    fn walk(&self, f: &mut impl FnMut(&Shape)) {
        f(self);
        if let Shape::Step { args, .. } = self {
            for a in args {
                a.walk(f);
            }
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Leaf(t) => write!(f, "{}", print_term(t)),
            Shape::Step { head, args } => {
                write!(f, "{head}")?;
                for a in args {
                    let atomic = match a {
                        Shape::Step { args, .. } => args.is_empty(),
                        Shape::Leaf(t) => t.as_app().is_none() && !matches!(t.kind(), TermKind::Lambda { .. } | TermKind::Pi { .. }),
                    };
                    if atomic {
                        write!(f, " {a}")?;
                    } else {
                        write!(f, " ({a})")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// The normalized shape of `proof`, reading definitions from `kernel`.
pub fn proof_shape(kernel: &Kernel, proof: &Term) -> Shape {
    simplify(raw_shape(kernel, proof))
}

fn is_generated_proof(n: &str) -> bool {
    n.starts_with("e#")
}

fn raw_shape(kernel: &Kernel, t: &Term) -> Shape {
    let (head, args) = t.spine();
    let Some(h) = head.as_const() else {
        return Shape::Leaf(unfold_nodes(kernel, t));
    };
    let sub = |i: usize| raw_shape(kernel, args[i]);
    let leaf = |i: usize| Shape::Leaf(unfold_nodes(kernel, args[i]));
    match (&**h, args.len()) {
        ("refl" | "hrefl", 2) => Shape::step(h, vec![leaf(1)]),
        ("hsymm", 5) => Shape::step(h, vec![sub(4)]),
        ("htrans", 8) => Shape::step(h, vec![sub(6), sub(7)]),
        ("ofeq" | "ofheq", 4) => Shape::step(h, vec![sub(3)]),
        (hs, 4) if hs.starts_with("hsse_") => Shape::step(h, vec![sub(3)]),
        (hc, k) if hc.starts_with("hcongr_") => match hc["hcongr_".len()..].parse::<usize>() {
            Ok(n) if k == 4 * n + 4 => {
                let mut out = vec![sub(n + 3)];
                out.extend((0..n).map(|i| sub(n + 6 + 3 * i)));
                Shape::step(h, out)
            }
            _ => Shape::Leaf(unfold_nodes(kernel, t)),
        },
        (e, 0) if is_generated_proof(e) => match kernel.lookup(e).and_then(|d| d.value.clone()) {
            Some(v) => raw_shape(kernel, &v),
            None => Shape::Leaf(t.clone()),
        },
        _ => Shape::Leaf(unfold_nodes(kernel, t)),
    }
}

/// Replace flattening nodes (`c#k`) by the subterms they name.
fn unfold_nodes(kernel: &Kernel, t: &Term) -> Term {
    match t.kind() {
        TermKind::Const(n) if n.starts_with("c#") => {
            match kernel.lookup(n).and_then(|d| d.value.clone()) {
                Some(v) => unfold_nodes(kernel, &v),
                None => t.clone(),
            }
        }
        TermKind::App(f, a) => Term::app(unfold_nodes(kernel, f), unfold_nodes(kernel, a)),
        _ => t.clone(),
    }
}

fn simplify(s: Shape) -> Shape {
    let Shape::Step { head, args } = s else { return s };
    let mut args: Vec<Shape> = args.into_iter().map(simplify).collect();
    match head.as_str() {
        "htrans" if args[1].is_refl() => args.swap_remove(0),
        "htrans" if args[0].is_refl() => args.swap_remove(1),
        "hsymm" if args[0].is_refl() => args.swap_remove(0),
        "hsymm" if args[0].head() == Some("hsymm") => unwrap_single(args.swap_remove(0)),
        "ofheq" if args[0].is_refl() => relabel(args.swap_remove(0), "refl"),
        "ofheq" if args[0].head() == Some("ofeq") => unwrap_single(args.swap_remove(0)),
        "ofeq" if args[0].head() == Some("refl") => relabel(args.swap_remove(0), "hrefl"),
        _ => Shape::Step { head, args },
    }
}

fn unwrap_single(s: Shape) -> Shape {
    match s {
        Shape::Step { mut args, .. } => args.swap_remove(0),
        leaf => leaf,
    }
}

fn relabel(s: Shape, head: &str) -> Shape {
    match s {
        Shape::Step { args, .. } => Shape::step(head, args),
        leaf => leaf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equality::AxiomTable;
    use crate::kernel::{Context, Declaration};
    use crate::syntax::parse_term;
    use std::sync::Arc;

    fn kernel() -> Kernel {
        let mut k = Kernel::new(Arc::new(Context::new()), Context::new());
        AxiomTable::with_hcongr(2).install(&mut k).unwrap();
        for (n, t) in [("A", "Type"), ("a", "A"), ("b", "A"), ("e", "heq A A a b")] {
            k.declare_local(Declaration::assumption(n, parse_term(t).unwrap())).unwrap();
        }
        k
    }

    fn shape(k: &Kernel, src: &str) -> String {
        proof_shape(k, &parse_term(src).unwrap()).to_string()
    }

    #[test]
    fn trivial_steps_are_erased() {
        let k = kernel();
        assert_eq!(shape(&k, "htrans A A A a b b e (hrefl A b)"), "e");
        assert_eq!(shape(&k, "htrans A A A a a b (hrefl A a) e"), "e");
        assert_eq!(shape(&k, "hsymm A A b a (hsymm A A a b e)"), "e");
        assert_eq!(shape(&k, "hsymm A A a a (hrefl A a)"), "hrefl a");
        assert_eq!(shape(&k, "ofheq A a a (hrefl A a)"), "refl a");
    }

    #[test]
    fn nontrivial_steps_remain() {
        let k = kernel();
        assert_eq!(shape(&k, "hsymm A A a b e"), "hsymm e");
        assert_eq!(
            shape(&k, "htrans A A A a b a e (hsymm A A a b e)"),
            "htrans e (hsymm e)"
        );
    }

    #[test]
    fn generated_definitions_are_inlined() {
        let mut k = kernel();
        let stmt = parse_term("heq A A b a").unwrap();
        let v = parse_term("hsymm A A a b e").unwrap();
        k.push_local(Declaration::definition("e#1", stmt, v)).unwrap();
        assert_eq!(shape(&k, "htrans A A A b a a e#1 (hrefl A a)"), "hsymm e");
    }

    #[test]
    fn hcongr_keeps_proof_arguments() {
        let k = kernel();
        let src = "hcongr_1 A (fun (x : A), A) (fun (x : A), x) (fun (x : A), x) \
                   (refl (A -> A) (fun (x : A), x)) a b e";
        let s = proof_shape(&k, &parse_term(src).unwrap());
        assert_eq!(s.to_string(), "hcongr_1 (refl (fun (x : A), x)) e");
        assert_eq!(s.hcongr_arities(), BTreeSet::from([1]));
    }
}
