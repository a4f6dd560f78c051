//! Acceptance gate. Prints one line per criterion and exits non-zero if
//! any of them fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::gen::{congruence_instance, GenOptions};
use common::oracle::{normalize_partition, Oracle};
use common::{all_fixtures, bounded_instance, fixture, prepare};
use hcc_core::checker::check_all;
use hcc_core::driver::CheckStatus;
use hcc_core::{run_text, Engine, Flags, Outcome, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RUNNING_EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const PARTIAL_APP_LIMIT: Duration = Duration::from_secs(1);
const SUBSINGLETON_LIMIT: Duration = Duration::from_secs(1);
const VECTOR_LIMIT: Duration = Duration::from_secs(5);
const RANDOM_SUITE_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_INSTANCES: usize = 500;
const THEOREM_INSTANCES: usize = 100;
const SEED: u64 = 0x5eed;

struct Verdicts {
    failed: usize,
}

impl Verdicts {
    fn record(&mut self, id: usize, title: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {id}. {title}: {detail}");
        if !ok {
            self.failed += 1;
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

fn proved_and_checked(file: &str, flags: &Flags) -> (Result<hcc_core::Report, String>, Duration) {
    timed(|| run_text(&fixture(file), flags).map_err(|e| e.to_string()))
}

fn is_ok(r: &hcc_core::Report) -> bool {
    r.verdict == Verdict::Proved && matches!(r.check, CheckStatus::Ok)
}

fn running_example(v: &mut Verdicts) {
    let expected = "hcongr_2 (refl f) (hrefl N) e";
    let (r, time) = proved_and_checked("running_example.hcc", &Flags::default());
    let (ok, detail) = match r {
        Ok(r) => {
            let shape = r.shape.as_ref().map(|s| s.to_string()).unwrap_or_default();
            (
                is_ok(&r) && shape == expected && time < RUNNING_EXAMPLE_LIMIT,
                format!("verdict {:?}, check {}, shape `{shape}`, {}", r.verdict, r.check, secs(time)),
            )
        }
        Err(e) => (false, e),
    };
    v.record(1, "running example", ok, detail);
}

fn partial_applications(v: &mut Verdicts) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (file, arity) in [("partial_app_hcongr2.hcc", 2), ("partial_app_hcongr1.hcc", 1)] {
        let (r, time) = proved_and_checked(file, &Flags::default());
        match r {
            Ok(r) => {
                let arities = r.shape.as_ref().map(|s| s.hcongr_arities()).unwrap_or_default();
                ok &= is_ok(&r) && arities == BTreeSet::from([arity]) && time < PARTIAL_APP_LIMIT;
                parts.push(format!("{file}: {:?}, hcongr arities {arities:?}, {}", r.verdict, secs(time)));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{file}: {e}"));
            }
        }
    }
    v.record(2, "partial-application congruences", ok, parts.join("; "));
}

fn subsingletons(v: &mut Verdicts) {
    let (with, time) = proved_and_checked("safe_log.hcc", &Flags::default());
    let off = Flags { subsingleton: false, ..Flags::default() };
    let (without, _) = proved_and_checked("safe_log.hcc", &off);
    let (ok, detail) = match (with, without) {
        (Ok(a), Ok(b)) => (
            is_ok(&a) && b.verdict == Verdict::Unknown && time < SUBSINGLETON_LIMIT,
            format!("with extension {:?} ({}), without {:?}", a.verdict, secs(time), b.verdict),
        ),
        (a, b) => (false, format!("{:?} / {:?}", a.err(), b.err())),
    };
    v.record(3, "subsingleton extension", ok, detail);
}

fn vectors(v: &mut Verdicts) {
    let (r, time) = proved_and_checked("vector_rev_app.hcc", &Flags::default());
    let (ok, detail) = match r {
        Ok(r) => (
            is_ok(&r) && time < VECTOR_LIMIT,
            format!("verdict {:?}, check {}, {}", r.verdict, r.check, secs(time)),
        ),
        Err(e) => (false, e),
    };
    v.record(4, "vector reversal", ok, detail);
}

#[derive(Default)]
struct SuiteStats {
    instances: usize,
    partition_mismatches: usize,
    proofs: usize,
    rejected: usize,
    violations: usize,
    redundant_paths: usize,
}

fn suite_options(i: usize) -> GenOptions {
    match i % 5 {
        0 | 1 => GenOptions { dependent: false, subsingleton: false },
        2 | 3 => GenOptions { dependent: true, subsingleton: false },
        _ => GenOptions { dependent: true, subsingleton: true },
    }
}

fn redundant_paths(engine: &Engine) -> usize {
    let mut bad = 0;
    for class in engine.partition() {
        let root = &class[0];
        for m in &class {
            let path = engine.mkpr_path(m, root).unwrap();
            let distinct: BTreeSet<_> = path.iter().collect();
            if distinct.len() != path.len() {
                bad += 1;
            }
        }
    }
    bad
}

/// Solve one instance in debug mode and compare with the oracle.
fn audit(text: &str, s: &mut SuiteStats) {
    let flags = Flags { debug_invariants: true, ..Flags::default() };
    let p = prepare(text, &flags);
    let (outcome, engine) = p.solve(&flags.cc_options()).unwrap();
    s.instances += 1;
    let oracle = Oracle::new(&p, flags.subsingleton);
    if normalize_partition(engine.partition()) != oracle.partition() {
        s.partition_mismatches += 1;
        eprintln!("partition mismatch:\n{text}");
    }
    if let Outcome::Proved(proof) = outcome {
        s.proofs += 1;
        if let Err(e) = check_all(engine.kernel(), &p.goal_proof(proof), &p.statement) {
            s.rejected += 1;
            eprintln!("rejected proof ({e}):\n{text}");
        }
    }
    s.violations += engine.violations().len();
    s.redundant_paths += redundant_paths(&engine);
}

fn random_suite(v: &mut Verdicts) -> SuiteStats {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut stats = SuiteStats::default();
    let ((), time) = timed(|| {
        for i in 0..RANDOM_INSTANCES {
            let text = bounded_instance(&mut rng, suite_options(i));
            audit(&text, &mut stats);
        }
    });
    let ok = stats.instances == RANDOM_INSTANCES
        && stats.partition_mismatches == 0
        && stats.rejected == 0
        && time < RANDOM_SUITE_LIMIT;
    v.record(
        5,
        "oracle equivalence",
        ok,
        format!(
            "{} instances, {} partition mismatches, {}/{} proofs checked, {}",
            stats.instances,
            stats.partition_mismatches,
            stats.proofs - stats.rejected,
            stats.proofs,
            secs(time)
        ),
    );
    stats
}

fn invariants(v: &mut Verdicts, mut stats: SuiteStats) {
    let fixtures = all_fixtures();
    for (_, text) in &fixtures {
        audit(text, &mut stats);
    }
    let ok = stats.violations == 0 && stats.redundant_paths == 0 && stats.partition_mismatches == 0;
    v.record(
        6,
        "invariant suite",
        ok,
        format!(
            "{} runs ({} fixtures), {} invariant violations, {} redundant paths",
            stats.instances,
            fixtures.len(),
            stats.violations,
            stats.redundant_paths
        ),
    );
}

fn equal_applications(v: &mut Verdicts) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut merged = 0;
    for _ in 0..THEOREM_INSTANCES {
        let text = congruence_instance(&mut rng);
        let flags = Flags::default();
        let p = prepare(&text, &flags);
        let (_, engine) = p.solve(&flags.cc_options()).unwrap();
        if engine.same_class(&p.flat.goal_lhs, &p.flat.goal_rhs).unwrap() {
            merged += 1;
        } else {
            eprintln!("not merged:\n{text}");
        }
    }
    v.record(
        7,
        "equal functions on equal arguments",
        merged == THEOREM_INSTANCES,
        format!("{merged}/{THEOREM_INSTANCES} applications merged"),
    );
}

fn main() -> ExitCode {
    let mut v = Verdicts { failed: 0 };
    running_example(&mut v);
    partial_applications(&mut v);
    subsingletons(&mut v);
    vectors(&mut v);
    let stats = random_suite(&mut v);
    invariants(&mut v, stats);
    equal_applications(&mut v);
    if v.failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", v.failed);
        ExitCode::FAILURE
    }
}
