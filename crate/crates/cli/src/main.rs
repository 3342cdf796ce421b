//! Command-line driver: check algebra files, run the bundled corpus, apply
//! suspensions, verify canonical frames and recover second-order equations.
//!
//! Exit codes: 0 every check passed, 1 a mathematical check failed (the
//! report says which), 2 input or parse error.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use liesym::corpus;
use liesym::matrix::Mat;
use liesym::monge;
use liesym::parse;
use liesym::report::Report;
use liesym::scalar::Rat;
use liesym::suspension::{self, Derivation};

#[derive(Parser)]
#[command(name = "liesym", version, about = "Exact structures on low-dimensional Lie algebras")]
struct Cli {
    /// Emit a machine-readable JSON report on stdout
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuspendMode {
    /// Lift a symplectic potential to a contact form one dimension up
    Contactize,
    /// Suspend a contact algebra to an exact symplectic one
    Symplectize,
    /// Extend a maximally nondegenerate closed 2-form
    Symplectize2,
}

#[derive(Subcommand)]
enum Command {
    /// Validity, linear invariants and structure verdicts for an .alg file
    Check {
        file: PathBuf,
        /// Substitute a parameter, e.g. --set l=2 (repeatable)
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    /// Verify every bundled classification-table entry at its documented samples
    Corpus,
    /// Apply a suspension construction to an algebra
    Suspend {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: SuspendMode,
        /// 1-form such as "e1*" or "-e1* + 2 e3*" (contactize/symplectize)
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// closed 2-form such as "e1*^e2*" (symplectize2)
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        /// derivation matrix, rows separated by ';': "0,1,0; 0,0,0; 0,0,0"
        #[arg(long, allow_hyphen_values = true)]
        derivation: Option<String>,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    /// Recover the second-order equation from a framed algebra and a chart
    Recover {
        file: PathBuf,
        #[arg(long)]
        chart: PathBuf,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    /// Verify the canonical-frame admissibility conditions
    Estructure {
        file: PathBuf,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
}

/// One timed record of the run report.
#[derive(Serialize)]
struct Record {
    subject: String,
    pass: bool,
    ms: u128,
    checks: Vec<liesym::report::Check>,
}

#[derive(Serialize)]
struct RunReport {
    format: u32,
    command: String,
    pass: bool,
    records: Vec<Record>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport { format: 1, command: command.into(), pass: true, records: Vec::new() }
    }

    fn add(&mut self, report: Report, started: Instant) {
        let pass = report.pass();
        self.pass &= pass;
        self.records.push(Record {
            subject: report.subject,
            pass,
            ms: started.elapsed().as_millis(),
            checks: report.checks,
        });
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{}\n", r.subject));
            for c in &r.checks {
                let mark = if c.pass { "ok  " } else { "FAIL" };
                out.push_str(&format!("  [{mark}] {}: {}\n", c.name, c.detail));
                if let Some(w) = &c.witness {
                    out.push_str(&format!("         witness: {w}\n"));
                }
            }
        }
        out.push_str(&format!(
            "{}: {} of {} records passed\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.records.iter().filter(|r| r.pass).count(),
            self.records.len()
        ));
        out
    }
}

/// Errors that should terminate with exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{}", report.render_text());
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_assignments(set: &[String]) -> Result<BTreeMap<String, Rat>, InputError> {
    let mut out = BTreeMap::new();
    for item in set {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| InputError(format!("--set expects NAME=VALUE, got '{item}'")))?;
        let poly = parse::parse_poly(value.trim())?;
        let rat = poly
            .as_constant()
            .ok_or_else(|| InputError(format!("--set value '{value}' is not rational")))?;
        out.insert(name.trim().to_string(), rat);
    }
    Ok(out)
}

fn load_algebra(path: &PathBuf) -> Result<parse::AlgebraFile, InputError> {
    let text = fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    parse::parse_algebra(&text)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_form_arg(
    src: &str,
    dim: usize,
    sample: &BTreeMap<String, Rat>,
) -> Result<liesym::KForm, InputError> {
    let form = parse::parse_kform(src, dim)?.eval_params(sample);
    let left = form.params();
    if !left.is_empty() {
        return Err(InputError(format!(
            "form '{src}' still contains parameters ({}); assign them with --set",
            left.into_iter().collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(form)
}

fn parse_derivation(
    spec: &str,
    h: &liesym::LieAlgebra,
) -> Result<Derivation, InputError> {
    let rows: Vec<&str> = spec.split(';').collect();
    let n = h.dim();
    if rows.len() != n {
        return Err(InputError(format!("derivation needs {n} rows separated by ';'")));
    }
    let mut m = Mat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let entries: Vec<&str> = row.split(',').collect();
        if entries.len() != n {
            return Err(InputError(format!("derivation row {} needs {n} entries", i + 1)));
        }
        for (j, e) in entries.iter().enumerate() {
            let v = parse::parse_poly(e.trim())?
                .as_constant()
                .ok_or_else(|| InputError(format!("derivation entry '{e}' is not rational")))?;
            m[(i, j)] = v;
        }
    }
    Derivation::new(h, m).map_err(|e| InputError(e.to_string()))
}

fn run(cli: &Cli) -> Result<RunReport, InputError> {
    match &cli.command {
        Command::Check { file, set } => {
            let parsed = load_algebra(file)?;
            let sample = parse_assignments(set)?;
            let mut out = RunReport::new("check");
            let t = Instant::now();
            let report = corpus::check_algebra(&parsed, &sample)?;
            out.add(report, t);
            Ok(out)
        }
        Command::Corpus => {
            let mut out = RunReport::new("corpus");
            for entry in corpus::bundled() {
                for sample in corpus::entry_samples(&entry.file) {
                    let t = Instant::now();
                    let report = corpus::verify_entry(&entry.file, &sample)?;
                    out.add(report, t);
                }
            }
            Ok(out)
        }
        Command::Suspend { file, mode, alpha, omega, derivation, set } => {
            let parsed = load_algebra(file)?;
            let sample = parse_assignments(set)?;
            let g = parsed.algebra.substitute(&sample);
            g.require_constant()?;
            let derivation = derivation
                .as_ref()
                .map(|d| parse_derivation(d, &g))
                .transpose()?;
            let t = Instant::now();
            let outcome = match mode {
                SuspendMode::Contactize => {
                    let alpha = alpha
                        .as_ref()
                        .ok_or_else(|| InputError("contactize needs --alpha".into()))?;
                    let alpha = parse_form_arg(alpha, g.dim(), &sample)?;
                    suspension::contactize(&g, &alpha, derivation.as_ref())?
                }
                SuspendMode::Symplectize => {
                    let alpha = alpha
                        .as_ref()
                        .ok_or_else(|| InputError("symplectize needs --alpha".into()))?;
                    let alpha = parse_form_arg(alpha, g.dim(), &sample)?;
                    suspension::symplectize_contact(&g, &alpha, derivation.as_ref())?
                }
                SuspendMode::Symplectize2 => {
                    let omega = omega
                        .as_ref()
                        .ok_or_else(|| InputError("symplectize2 needs --omega".into()))?;
                    let omega = parse_form_arg(omega, g.dim(), &sample)?;
                    suspension::symplectize_2form(&g, &omega)?
                }
            };
            let mut report = outcome.report;
            if let Some(res) = &outcome.result {
                report.push(
                    "suspension",
                    true,
                    format!(
                        "dim {} algebra: {}",
                        res.algebra.dim(),
                        res.algebra.render_brackets().join("; ")
                    ),
                );
                report.push_witness(
                    "structure-form",
                    true,
                    format!("certificate {}", res.certificate),
                    res.structure_form.to_string(),
                );
            }
            let mut out = RunReport::new("suspend");
            out.add(report, t);
            Ok(out)
        }
        Command::Recover { file, chart, set } => {
            let parsed = load_algebra(file)?;
            let sample = parse_assignments(set)?;
            let mut framed = parsed.clone();
            framed.algebra = parsed.algebra.substitute(&sample);
            let chart_text = fs::read_to_string(chart)
                .map_err(|e| InputError(format!("cannot read {}: {e}", chart.display())))?;
            let chart = parse::parse_chart(&chart_text)
                .map_err(|e| InputError(format!("{e}")))?;
            let t = Instant::now();
            let labels = framed
                .frame
                .ok_or_else(|| InputError("the algebra file needs a 'frame' line".into()))?;
            let es = monge::EStructure::new(framed.algebra.clone(), labels)?;
            let admissibility = monge::verify_e_structure(&es)?;
            let subject = format!(
                "{} recovery",
                framed.name.clone().unwrap_or_else(|| "algebra".into())
            );
            if !admissibility.pass() {
                let mut report = Report::new(subject);
                report.merge(admissibility);
                let mut out = RunReport::new("recover");
                out.add(report, t);
                return Ok(out);
            }
            let output = monge::recover(&framed, &chart)?;
            let mut report = Report::new(subject);
            report.merge(output.admissibility.clone());
            report.push("nilpotency-class", true, format!("{}", output.frame.class));
            for (role, idx) in output.roles() {
                report.push(
                    format!("frame-{role}"),
                    true,
                    format!("{role} = {}", output.frame.field_string(idx)),
                );
            }
            for (role, idx) in output.roles() {
                report.push(
                    format!("coframe-{role}"),
                    true,
                    format!("{role}* = {}", output.coframe[idx as usize - 1]),
                );
            }
            report.push("omega-coordinates", true, format!("omega = {}", output.omega_coord));
            report.push("theta-coordinates", true, format!("theta = {}", output.theta_coord));
            report.push("omega-chart", true, format!("omega = {}", output.omega_chart));
            report.push("theta-chart", true, format!("theta = {}", output.theta_chart));
            report.push_witness(
                "equation",
                true,
                output.pde.display(),
                output.pde.display(),
            );
            let mut out = RunReport::new("recover");
            out.add(report, t);
            Ok(out)
        }
        Command::Estructure { file, set } => {
            let parsed = load_algebra(file)?;
            let sample = parse_assignments(set)?;
            let g = parsed.algebra.substitute(&sample);
            let labels = parsed
                .frame
                .ok_or_else(|| InputError("the algebra file needs a 'frame' line".into()))?;
            let es = monge::EStructure::new(g, labels)?;
            let t = Instant::now();
            let mut report = monge::verify_e_structure(&es)?;
            report.subject = format!(
                "{} canonical frame{}",
                parsed.name.clone().unwrap_or_else(|| "algebra".into()),
                corpus::sample_label(&sample)
            );
            // context: the induced pairing data
            if let Ok(sig) = monge::pairing_signature(&es.omega()) {
                let comp = monge::complement_signature(&es.omega())?;
                report.push(
                    "pfaffian-metric",
                    true,
                    format!("type ({}, {}) on 2-forms, ({}, {}) on the omega-complement",
                        sig.0, sig.1, comp.0, comp.1),
                );
            }
            let mut out = RunReport::new("estructure");
            out.add(report, t);
            Ok(out)
        }
    }
}
