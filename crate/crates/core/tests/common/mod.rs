#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use std::path::PathBuf;
use std::sync::Arc;

use hcc_core::kernel::{Context, Declaration, Kernel};
use hcc_core::syntax::parse_term;
use hcc_core::{parse_problem, Flags, Prepared, Session, Term};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> String {
    let path = fixtures_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every `.hcc` file in the fixture directory, sorted by name.
pub fn all_fixtures() -> Vec<(String, String)> {
    let mut out: Vec<_> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "hcc"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

pub fn t(src: &str) -> Term {
    parse_term(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

/// A kernel with the given local assumptions, `name : type` pairs.
pub fn kernel_with(decls: &[(&str, &str)]) -> Kernel {
    let mut k = Kernel::new(Arc::new(Context::new()), Context::new());
    for (n, ty) in decls {
        k.declare_local(Declaration::assumption(*n, t(ty))).unwrap();
    }
    k
}

pub fn prepare(text: &str, flags: &Flags) -> Prepared {
    let problem = parse_problem(text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    Session::load(&problem).unwrap_or_else(|e| panic!("{e}\n{text}")).prepare(flags).unwrap()
}

/// A random instance whose flattened form respects the generator caps.
pub fn bounded_instance<R: rand::Rng>(rng: &mut R, opts: gen::GenOptions) -> String {
    loop {
        let text = gen::instance(rng, opts);
        let p = prepare(&text, &Flags::default());
        if p.flat.local_defs().count() <= gen::MAX_LOCAL_DEFS && p.flat.equations().count() <= gen::MAX_HYPS {
            return text;
        }
    }
}
