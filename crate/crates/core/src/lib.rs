//! Proof-producing congruence closure for a dependent type theory with
//! heterogeneous equality.
//!
//! The pipeline is [`problem::parse_problem`] → [`driver::Session::load`]
//! → [`flatten::flatten`] → [`cc::solve`] → [`checker::check_all`];
//! [`driver::run`] strings it together.

pub mod cc;
pub mod checker;
pub mod driver;
pub mod equality;
pub mod flatten;
pub mod kernel;
pub mod problem;
pub mod proof;
pub mod shape;
pub mod syntax;

pub use cc::{solve, CcError, CcOptions, Engine, FailureReport, LookupPolicy, Outcome};
pub use driver::{run, run_text, CheckStatus, DriverError, Flags, Prepared, Report, Session, Verdict};
pub use kernel::{name, Context, Declaration, Environment, Kernel, KernelError, Name, Term, TermKind};
pub use problem::{parse_problem, Item, Problem};
pub use proof::EqProof;
