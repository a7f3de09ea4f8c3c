//! Batch verifier for exact Lie 2-algebra data: definition files in,
//! deterministic reports out.
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 input error.

use clap::{Parser, Subcommand, ValueEnum};
use plectic::action::TwoAction;
use plectic::calculus::Mutation;
use plectic::catalog;
use plectic::cohomology::CEComplex;
use plectic::comoment::{verify_comoment, Comomentum};
use plectic::defs::{self, FileKind};
use plectic::report::{Report, Status};
use plectic::skeletal::{check_quasi_iso, skeletalize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "plectic")]
#[command(about = "Exact verifier for Lie 2-algebras, 2-actions and comomentum maps on 2-plectic charts")]
#[command(version)]
struct Cli {
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Suppress per-check output; the exit code still reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a definition file (algebra, morphism, action or comoment).
    Verify { file: PathBuf },
    /// Skeletalize an algebra file and emit the result.
    Skeletalize {
        file: PathBuf,
        /// Output path for the skeletal algebra plus morphism block.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Cohomology dimensions of the degree-0 part acting on the degree -1
    /// part of an algebra file.
    Cohomology {
        file: PathBuf,
        /// Report a single degree instead of the full table.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Randomized exact self-tests of the calculus operators.
    Selftest {
        kind: SelftestKind,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// The built-in example catalog.
    Examples {
        #[command(subcommand)]
        command: ExamplesCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SelftestKind {
    /// The seven contraction/derivative commutation identities.
    Cartan,
    /// The endomorphism representation of fields on observable pairs.
    Endo,
}

#[derive(Subcommand)]
enum ExamplesCommand {
    /// List the catalog ids.
    List,
    /// Replay the catalog verification, optionally for one id.
    Run {
        #[arg(long)]
        id: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli);
    if !cli.quiet {
        for line in report.render_lines() {
            println!("{}", line);
        }
        println!(
            "{}: {}",
            report.command,
            match report.status {
                Status::Pass => "pass",
                Status::VerificationFailure => "verification failure",
                Status::InputError => "input error",
            }
        );
    }
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("cannot write report: {}", e);
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.status.exit_code() as u8)
}

fn run(cli: &Cli) -> Report {
    match &cli.command {
        Command::Verify { file } => cmd_verify(file),
        Command::Skeletalize { file, output } => cmd_skeletalize(file, output),
        Command::Cohomology { file, degree } => cmd_cohomology(file, *degree),
        Command::Selftest {
            kind,
            dim,
            seed,
            trials,
        } => cmd_selftest(*kind, *dim, *seed, *trials),
        Command::Examples { command } => match command {
            ExamplesCommand::List => cmd_examples_list(),
            ExamplesCommand::Run { id } => cmd_examples_run(id.as_deref()),
        },
    }
}

fn read_input(file: &Path, report: &mut Report) -> Option<(String, serde_json::Value)> {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            report.input_error(format!("{}: {}", file.display(), e));
            return None;
        }
    };
    match serde_json::from_str::<serde_json::Value>(&text) {
        Ok(v) => Some((text, v)),
        Err(e) => {
            report.input_error(format!("{}: {}", file.display(), e));
            None
        }
    }
}

fn cmd_verify(file: &Path) -> Report {
    let mut report = Report::new("verify", &[]);
    let Some((text, value)) = read_input(file, &mut report) else {
        return report;
    };
    report = Report::new("verify", text.as_bytes());
    let base = file.parent();
    let kind = match defs::detect_kind(&value) {
        Ok(k) => k,
        Err(e) => {
            report.input_error(e.to_string());
            return report;
        }
    };
    match kind {
        FileKind::Algebra => {
            let parsed: Result<defs::AlgebraFile, _> = serde_json::from_value(value);
            match parsed.map_err(|e| e.to_string()).and_then(|f| {
                defs::build_algebra(&f).map_err(|e| e.to_string())
            }) {
                Ok(algebra) => {
                    report.fold_axioms("", &algebra.verify_axioms());
                    let flags = algebra.classify();
                    report.check(
                        "flags",
                        true,
                        Some(format!(
                            "{} skeletal={} strict={} g0_is_lie={} l3_vanishes_on_im_l1={}",
                            catalog::s_string(&algebra),
                            flags.skeletal,
                            flags.strict,
                            flags.g0_is_lie,
                            flags.l3_vanishes_on_im_l1
                        )),
                    );
                }
                Err(e) => report.input_error(e),
            }
        }
        FileKind::Morphism => {
            let parsed: Result<defs::MorphismFile, _> = serde_json::from_value(value);
            match parsed
                .map_err(|e| e.to_string())
                .and_then(|f| defs::build_morphism(&f, base).map_err(|e| e.to_string()))
            {
                Ok(morphism) => {
                    report.fold_axioms("source ", &morphism.source.verify_axioms());
                    report.fold_axioms("target ", &morphism.target.verify_axioms());
                    report.fold_axioms("", &morphism.verify());
                    report.check("strict", true, Some(morphism.is_strict().to_string()));
                }
                Err(e) => report.input_error(e),
            }
        }
        FileKind::Action => {
            let parsed: Result<defs::ActionFile, _> = serde_json::from_value(value);
            match parsed
                .map_err(|e| e.to_string())
                .and_then(|f| TwoAction::from_file(&f, base).map_err(|e| e.to_string()))
            {
                Ok(action) => {
                    report.fold_axioms("algebra ", &action.algebra.verify_axioms());
                    match action.verify() {
                        Ok(ax) => {
                            report.fold_axioms("", &ax);
                            report.check(
                                "flags",
                                true,
                                Some(action.classify().t_string()),
                            );
                        }
                        Err(e) => report.input_error(e.to_string()),
                    }
                }
                Err(e) => report.input_error(e),
            }
        }
        FileKind::Comoment => {
            let parsed: Result<defs::ComomentFile, _> = serde_json::from_value(value);
            match parsed
                .map_err(|e| e.to_string())
                .and_then(|f| Comomentum::from_file(&f, base).map_err(|e| e.to_string()))
            {
                Ok(lam) => {
                    report.fold_axioms("algebra ", &lam.action.algebra.verify_axioms());
                    match lam.action.verify() {
                        Ok(ax) => report.fold_axioms("action ", &ax),
                        Err(e) => {
                            report.input_error(e.to_string());
                            return report;
                        }
                    }
                    match verify_comoment(&lam) {
                        Ok(ax) => report.fold_axioms("", &ax),
                        Err(e) => report.input_error(e.to_string()),
                    }
                }
                Err(e) => report.input_error(e),
            }
        }
    }
    report
}

fn cmd_skeletalize(file: &Path, output: &Path) -> Report {
    let mut report = Report::new("skeletalize", &[]);
    let Some((text, value)) = read_input(file, &mut report) else {
        return report;
    };
    report = Report::new("skeletalize", text.as_bytes());
    let parsed: Result<defs::AlgebraFile, _> = serde_json::from_value(value);
    let algebra = match parsed
        .map_err(|e| e.to_string())
        .and_then(|f| defs::build_algebra(&f).map_err(|e| e.to_string()))
    {
        Ok(a) => Arc::new(a),
        Err(e) => {
            report.input_error(e);
            return report;
        }
    };
    let axioms = algebra.verify_axioms();
    report.fold_axioms("input ", &axioms);
    if !axioms.passed() {
        return report;
    }
    let result = match skeletalize(&algebra) {
        Ok(r) => r,
        Err(e) => {
            report.input_error(e.to_string());
            return report;
        }
    };
    report.fold_axioms("quasi-iso ", &check_quasi_iso(&result));
    let mut doc = serde_json::to_value(defs::algebra_to_file(&result.skeletal))
        .expect("serializable algebra");
    let rat_entries = |cols: &[Vec<plectic::ring::Rational>], ins: &[String], outs: &[String]| {
        let mut list = Vec::new();
        for (i, col) in cols.iter().enumerate() {
            let out: serde_json::Map<String, serde_json::Value> = col
                .iter()
                .zip(outs)
                .filter(|(c, _)| !num_is_zero(c))
                .map(|(c, l)| (l.clone(), serde_json::Value::String(c.to_string())))
                .collect();
            list.push(serde_json::json!({"in": ins[i], "out": out}));
        }
        serde_json::Value::Array(list)
    };
    let f2_entries: Vec<serde_json::Value> = result
        .f
        .f2
        .iter()
        .map(|(&(i, j), v)| {
            let out: serde_json::Map<String, serde_json::Value> = v
                .iter()
                .zip(&result.skeletal.basis_m1)
                .filter(|(c, _)| !num_is_zero(c))
                .map(|(c, l)| (l.clone(), serde_json::Value::String(c.to_string())))
                .collect();
            serde_json::json!({
                "in": [algebra.basis_0[i], algebra.basis_0[j]],
                "out": out
            })
        })
        .collect();
    doc["morphism"] = serde_json::json!({
        "F10": rat_entries(&result.f.f10, &algebra.basis_0, &result.skeletal.basis_0),
        "F1m1": rat_entries(&result.f.f1m1, &algebra.basis_m1, &result.skeletal.basis_m1),
        "F2": f2_entries,
    });
    let rendered = serde_json::to_string_pretty(&doc).expect("serializable output");
    if let Err(e) = std::fs::write(output, rendered) {
        report.input_error(format!("{}: {}", output.display(), e));
    }
    report
}

fn num_is_zero(r: &plectic::ring::Rational) -> bool {
    use num_traits::Zero;
    r.is_zero()
}

fn cmd_cohomology(file: &Path, degree: Option<usize>) -> Report {
    let mut report = Report::new("cohomology", &[]);
    let Some((text, value)) = read_input(file, &mut report) else {
        return report;
    };
    report = Report::new("cohomology", text.as_bytes());
    let parsed: Result<defs::AlgebraFile, _> = serde_json::from_value(value);
    let algebra = match parsed
        .map_err(|e| e.to_string())
        .and_then(|f| defs::build_algebra(&f).map_err(|e| e.to_string()))
    {
        Ok(a) => a,
        Err(e) => {
            report.input_error(e);
            return report;
        }
    };
    let complex = match CEComplex::from_lie2(&algebra) {
        Ok(c) => c,
        Err(e) => {
            report.input_error(e.to_string());
            return report;
        }
    };
    let degrees: Vec<usize> = match degree {
        Some(k) => vec![k],
        None => (0..=complex.dim()).collect(),
    };
    for k in degrees {
        match complex.cohomology_dim(k) {
            Ok(d) => report.check(format!("dim H^{}", k), true, Some(d.to_string())),
            Err(e) => report.input_error(e.to_string()),
        }
    }
    report
}

fn cmd_selftest(kind: SelftestKind, dim: usize, seed: u64, trials: usize) -> Report {
    let digest = format!("{:?}/{}/{}/{}", kind_name(kind), dim, seed, trials);
    let mut report = Report::new("selftest", digest.as_bytes());
    if dim < 3 {
        report.input_error("selftest needs --dim 3 or larger".into());
        return report;
    }
    let outcome = match kind {
        SelftestKind::Cartan => {
            plectic::calculus::cartan_selfcheck(dim, seed, trials, Mutation::None)
        }
        SelftestKind::Endo => {
            plectic::calculus::verify_endo_morphism(dim, seed, trials, Mutation::None)
        }
    };
    report.check(
        format!("{} identities on {} trials", kind_name(kind), outcome.trials),
        outcome.passed(),
        outcome
            .failures
            .first()
            .map(|f| format!("{} at trial {}", f.identity, f.trial)),
    );
    report
}

fn kind_name(kind: SelftestKind) -> &'static str {
    match kind {
        SelftestKind::Cartan => "cartan",
        SelftestKind::Endo => "endo",
    }
}

fn cmd_examples_list() -> Report {
    let mut report = Report::new("examples list", b"builtin");
    for id in catalog::builtin_ids() {
        report.check(id, true, None);
    }
    report
}

fn cmd_examples_run(id: Option<&str>) -> Report {
    let ids: Option<Vec<String>> = id.map(|i| vec![i.to_string()]);
    match catalog::replay(ids.as_deref()) {
        Ok(report) => report,
        Err(e) => {
            let mut report = Report::new("examples run", &[]);
            report.input_error(e.to_string());
            report
        }
    }
}
