//! Random problem generator.
//!
//! Instances are written in the surface syntax and failures can be
//! replayed with the CLI. Terms are fully parenthesized.

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;

pub const MAX_BASE_VARS: usize = 8;
pub const MAX_LOCAL_DEFS: usize = 12;
pub const MAX_HYPS: usize = 10;
pub const MAX_ARITY: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    A,
    /// `A -> ... -> A` with this many arguments left.
    Fun(usize),
    /// `P t` for the index term `t`.
    P(String),
    /// `d t : P t -> A`
    DepFun(String),
    /// The dependent heads `d` and `m`, expecting an `A`.
    DHead,
    MHead,
}

#[derive(Clone, Debug)]
struct Entry {
    text: String,
    ty: Ty,
}

#[derive(Clone, Copy, Debug)]
pub struct GenOptions {
    pub dependent: bool,
    pub subsingleton: bool,
}

struct Builder {
    decls: String,
    pool: Vec<Entry>,
    apps: BTreeSet<String>,
    base_vars: usize,
}

impl Builder {
    fn var(&mut self, name: &str, ty_src: &str, ty: Ty) {
        writeln!(self.decls, "var {name} : {ty_src}").unwrap();
        self.pool.push(Entry { text: name.to_string(), ty });
        self.base_vars += 1;
    }

    fn apply(&self, f: &Entry, a: &Entry) -> Option<Entry> {
        let ty = match (&f.ty, &a.ty) {
            (Ty::Fun(1), Ty::A) => Ty::A,
            (Ty::Fun(n), Ty::A) => Ty::Fun(n - 1),
            (Ty::DHead, Ty::A) => Ty::DepFun(a.text.clone()),
            (Ty::MHead, Ty::A) => Ty::P(a.text.clone()),
            (Ty::DepFun(i), Ty::P(j)) if i == j => Ty::A,
            _ => return None,
        };
        Some(Entry { text: format!("({} {})", f.text, a.text), ty })
    }

    fn grow<R: Rng>(&mut self, rng: &mut R, steps: usize) {
        for _ in 0..steps * 4 {
            if self.apps.len() >= MAX_LOCAL_DEFS {
                break;
            }
            let f = self.pool.choose(rng).unwrap().clone();
            let args: Vec<&Entry> = self.pool.iter().filter(|a| self.apply(&f, a).is_some()).collect();
            let Some(a) = args.choose(rng) else { continue };
            let e = self.apply(&f, a).unwrap();
            if self.apps.insert(e.text.clone()) {
                self.pool.push(e);
            }
        }
    }

    fn pick_pair<R: Rng>(&self, rng: &mut R, same_type: bool) -> (Entry, Entry) {
        let a = self.pool.choose(rng).unwrap().clone();
        if same_type {
            let peers: Vec<&Entry> = self.pool.iter().filter(|b| b.ty == a.ty).collect();
            if let Some(b) = peers.choose(rng) {
                return (a, (*b).clone());
            }
        }
        let b = self.pool.choose(rng).unwrap().clone();
        (a, b)
    }
}

fn sorts_are_atoms(e: &Entry) -> bool {
    !matches!(e.ty, Ty::DHead | Ty::MHead)
}

/// One random instance. Every goal side is an application when any exist.
pub fn instance<R: Rng>(rng: &mut R, opts: GenOptions) -> String {
    let mut b = Builder { decls: String::new(), pool: Vec::new(), apps: BTreeSet::new(), base_vars: 0 };
    b.decls.push_str("var A : Type\n");
    b.base_vars = 0;
    let nx = rng.gen_range(2..=4);
    for i in 1..=nx {
        b.var(&format!("x{i}"), "A", Ty::A);
    }
    let nf = rng.gen_range(1..=3);
    for i in 1..=nf {
        let arity = rng.gen_range(1..=MAX_ARITY);
        let ty = vec!["A"; arity + 1].join(" -> ");
        b.var(&format!("f{i}"), &ty, Ty::Fun(arity));
    }
    if opts.dependent {
        b.decls.push_str("axiom P : A -> Type\naxiom d : Pi (x : A), P x -> A\naxiom m : Pi (x : A), P x\n");
        b.pool.push(Entry { text: "d".into(), ty: Ty::DHead });
        b.pool.push(Entry { text: "m".into(), ty: Ty::MHead });
        let np = rng.gen_range(1..=2).min(MAX_BASE_VARS - b.base_vars);
        for i in 1..=np {
            let j = rng.gen_range(1..=nx);
            b.var(&format!("p{i}"), &format!("P x{j}"), Ty::P(format!("x{j}")));
        }
        if opts.subsingleton && b.base_vars < MAX_BASE_VARS {
            let j = rng.gen_range(1..=nx);
            b.var(&format!("sp{j}"), &format!("Pi (u v : P x{j}), eq (P x{j}) u v"), Ty::Fun(0));
            b.pool.pop();
            writeln!(b.decls, "subsingleton P x{j} by sp{j}").unwrap();
        }
    }
    assert!(b.base_vars <= MAX_BASE_VARS);
    let steps = rng.gen_range(3..=10);
    b.grow(rng, steps);
    b.pool.retain(sorts_are_atoms);

    let mut out = b.decls.clone();
    let nh = rng.gen_range(1..=MAX_HYPS);
    for i in 1..=nh {
        let same = rng.gen_bool(0.8);
        let (l, r) = b.pick_pair(rng, same);
        let op = if l.ty == r.ty && rng.gen_bool(0.5) { "=" } else { "==" };
        writeln!(out, "hyp h{i} : {} {op} {}", l.text, r.text).unwrap();
    }
    let apps: Vec<&Entry> = b.pool.iter().filter(|e| e.text.starts_with('(')).collect();
    let (l, r) = if apps.len() >= 2 && rng.gen_bool(0.8) {
        let l = (*apps.choose(rng).unwrap()).clone();
        let peers: Vec<&&Entry> = apps.iter().filter(|e| e.ty == l.ty).collect();
        let r = (**peers.choose(rng).unwrap()).clone();
        (l, r)
    } else {
        b.pick_pair(rng, true)
    };
    writeln!(out, "goal {} == {}", l.text, r.text).unwrap();
    out
}

/// An instance with `f ≈ g` at one type,
/// `a_i ≈ b_i`, goal `f a1 .. an == g b1 .. bn`.
pub fn congruence_instance<R: Rng>(rng: &mut R) -> String {
    let mut out = String::from("var A : Type\naxiom P : A -> Type\n");
    let dependent = rng.gen_bool(0.4);
    let n = if dependent { 2 } else { rng.gen_range(1..=MAX_ARITY) };
    let fty = if dependent {
        "Pi (x : A), P x -> A".to_string()
    } else {
        vec!["A"; n + 1].join(" -> ")
    };
    for h in ["f", "g", "k"] {
        writeln!(out, "var {h} : {fty}").unwrap();
    }
    out.push_str("var u : A -> A\n");
    let mut hyps = Vec::new();
    if rng.gen_bool(0.5) {
        hyps.push("f = g".to_string());
    } else {
        hyps.push("f = k".to_string());
        hyps.push("g == k".to_string());
    }
    let (lhs, rhs);
    if dependent {
        out.push_str("var a1 : A\nvar b1 : A\nvar a2 : P a1\nvar b2 : P b1\n");
        if rng.gen_bool(0.3) {
            hyps.push("u a1 == b1".to_string());
            hyps.push("a1 == u a1".to_string());
        } else {
            chain(rng, &mut out, &mut hyps, "a1", "b1", "A", "t1");
        }
        hyps.push("a2 == b2".to_string());
        lhs = "f a1 a2".to_string();
        rhs = "g b1 b2".to_string();
    } else {
        let mut ls = vec!["f".to_string()];
        let mut rs = vec!["g".to_string()];
        for i in 1..=n {
            if rng.gen_bool(0.25) {
                writeln!(out, "var a{i} : A").unwrap();
                ls.push(format!("a{i}"));
                rs.push(format!("a{i}"));
                continue;
            }
            writeln!(out, "var a{i} : A\nvar b{i} : A").unwrap();
            chain(rng, &mut out, &mut hyps, &format!("a{i}"), &format!("b{i}"), "A", &format!("t{i}"));
            ls.push(format!("a{i}"));
            rs.push(format!("b{i}"));
        }
        lhs = ls.join(" ");
        rhs = rs.join(" ");
    }
    hyps.shuffle(rng);
    for (i, h) in hyps.iter().enumerate() {
        let (l, op, r) = split_eq(h);
        writeln!(out, "hyp h{i} : {l} {op} {r}").unwrap();
    }
    writeln!(out, "goal {lhs} == {rhs}").unwrap();
    out
}

/// `a ≈ b` directly, or through a fresh middle element.
fn chain<R: Rng>(rng: &mut R, out: &mut String, hyps: &mut Vec<String>, a: &str, b: &str, ty: &str, mid: &str) {
    match rng.gen_range(0..3) {
        0 => hyps.push(format!("{a} == {b}")),
        1 => {
            writeln!(out, "var {mid} : {ty}").unwrap();
            hyps.push(format!("{a} == {mid}"));
            hyps.push(format!("{b} == {mid}"));
        }
        _ => {
            writeln!(out, "var {mid} : {ty}").unwrap();
            hyps.push(format!("{mid} == {a}"));
            hyps.push(format!("{b} = {mid}"));
        }
    }
}

fn split_eq(h: &str) -> (&str, &str, &str) {
    let (op, at) = match h.find(" == ") {
        Some(i) => ("==", i),
        None => ("=", h.find(" = ").unwrap()),
    };
    (&h[..at], op, &h[at + op.len() + 2..])
}
