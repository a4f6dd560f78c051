use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use clap::Parser;
use hcc_core::{run_text, Flags};

/// Decide heterogeneous equality goals by congruence closure and print a
/// checked proof.
#[derive(Parser, Debug)]
#[command(name = "hcc", version)]
struct Args {
    /// Problem files
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Print one line per merge to stderr
    #[arg(long)]
    trace: bool,
    /// Skip re-checking the proof
    #[arg(long)]
    no_check: bool,
    /// Disable subsingleton propagation
    #[arg(long)]
    no_subsingleton: bool,
    /// Print the final partition even when the goal is proved
    #[arg(long)]
    emit_partition: bool,
    /// Solve several files in parallel
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

struct Outcome {
    stdout: String,
    stderr: String,
    code: u8,
}

fn solve_file(path: &PathBuf, flags: &Flags) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("{}: {e}\n", path.display()),
                code: 2,
            }
        }
    };
    match run_text(&text, flags) {
        Ok(report) => {
            let mut stderr = String::new();
            for line in &report.trace {
                stderr.push_str(line);
                stderr.push('\n');
            }
            Outcome { stdout: report.render(), stderr, code: report.exit_code() as u8 }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("{}: {e}\n", path.display()),
            code: 2,
        },
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let flags = Flags {
        check: !args.no_check,
        subsingleton: !args.no_subsingleton,
        trace: args.trace,
        emit_partition: args.emit_partition,
        ..Flags::default()
    };
    let n = args.files.len();
    let results: Vec<Mutex<Option<Outcome>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let cursor = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..args.jobs.clamp(1, n) {
            s.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let out = solve_file(&args.files[i], &flags);
                *results[i].lock().unwrap() = Some(out);
            });
        }
    });
    let mut worst = 0u8;
    for (path, slot) in args.files.iter().zip(results) {
        let out = slot.into_inner().unwrap().expect("every file is solved");
        if n > 1 {
            println!("== {}", path.display());
        }
        print!("{}", out.stdout);
        eprint!("{}", out.stderr);
        worst = worst.max(out.code);
    }
    ExitCode::from(worst)
}
