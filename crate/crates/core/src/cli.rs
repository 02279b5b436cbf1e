//! Command-line driver: batch mode over files, or a REPL when none are given.

use crate::session::{Options, Session, SessionError};
use clap::Parser;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "andromeda", version, about = "A proof assistant for type theory with equality reflection")]
pub struct Args {
    /// Files to run in order. Without files, start a REPL.
    pub files: Vec<PathBuf>,
    /// Print judgments as JSON exports.
    #[arg(long)]
    pub json: bool,
    /// Do not load the standard prelude.
    #[arg(long)]
    pub no_prelude: bool,
    /// Skip ML type inference.
    #[arg(long)]
    pub no_typecheck: bool,
    /// Reduction steps allowed per equality or normalization request.
    #[arg(long, value_name = "N")]
    pub step_budget: Option<u64>,
    /// Report errors and continue with the next command.
    #[arg(long)]
    pub keep_going: bool,
    /// Extra directory to search for included files.
    #[arg(long = "include", value_name = "DIR")]
    pub include_dirs: Vec<PathBuf>,
}

impl Args {
    pub fn options(&self) -> Options {
        Options {
            no_prelude: self.no_prelude,
            json: self.json,
            step_budget: self.step_budget,
            keep_going: self.keep_going,
            include_dirs: self.include_dirs.clone(),
            typecheck: !self.no_typecheck,
        }
    }
}

fn exit_code(e: &SessionError) -> ExitCode {
    if e.is_internal() {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}

fn flush(s: &mut Session) {
    for w in s.warnings.drain(..) {
        eprintln!("{w}");
    }
    let mut out = std::io::stdout().lock();
    for line in s.output.drain(..) {
        let _ = writeln!(out, "{line}");
    }
}

pub fn main() -> ExitCode {
    let args = Args::parse();
    let mut session = match Session::new(args.options()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error in prelude: {e}");
            return ExitCode::from(2);
        }
    };
    if args.files.is_empty() {
        return repl(&mut session);
    }
    for f in &args.files {
        let r = session.run_file(f);
        flush(&mut session);
        if let Err(e) = r {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    }
    if session.errors.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Reads commands until a line ends with `;;` or the input ends.
fn repl(session: &mut Session) -> ExitCode {
    let stdin = std::io::stdin();
    let mut buf = String::new();
    print!("# ");
    let _ = std::io::stdout().flush();
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        let done = line.trim_end().ends_with(";;");
        buf.push_str(line.trim_end().trim_end_matches(";;"));
        buf.push('\n');
        if done {
            if let Err(e) = session.run_source(&buf, "<stdin>") {
                println!("error: {e}");
            }
            flush(session);
            buf.clear();
        }
        print!("{}", if done { "# " } else { "  " });
        let _ = std::io::stdout().flush();
    }
    if !buf.trim().is_empty() {
        if let Err(e) = session.run_source(&buf, "<stdin>") {
            println!("error: {e}");
        }
        flush(session);
    }
    println!();
    ExitCode::SUCCESS
}
