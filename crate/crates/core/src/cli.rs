//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the text for standard output and standard error, so the binary
//! is a thin wrapper.

use crate::closure::{closure_basis, signature_scan};
use crate::error::{Error, Result};
use crate::exactmath::{QMatrix, QVector};
use crate::gallery::ExampleSpec;
use crate::involutions::{
    adjoint_algebra, dickson_radical, find_hyperbolic_idempotent_with, idem_to_hyp_witness, theorem1_decide,
    trace_form, weak_order_with, HypVerdict, IdemWitness, InvAlgebra,
};
use crate::pairs::{kronecker_decompose, pencil_J, rebase_pair, theorem2_decide, theorem2_witness};
use crate::quadforms::{HypWitness, MatrixFile, QFSystem};
use crate::verify::verify_payload;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::io::Read;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qfsys", version, about = "Exact decision procedures for systems of quadratic forms over Q")]
pub struct Cli {
    /// Output format. `system` prints only the main payload as a system file.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall-clock time in the report (off by default so reports are byte-stable).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    System,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inertia and signature of every form.
    Signature { file: String },
    /// Algebra of adjoints: dimension, radical, trace signature, hyperbolic idempotent.
    Adjoint {
        file: String,
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
    /// Involution trace form of the algebra of adjoints.
    Traceform { file: String },
    /// Closure basis, plus a bounded scan for a form of nonzero signature.
    Closure {
        file: String,
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
    /// Is some n× of the system hyperbolic? Pairs are also decided through the closure.
    Decide { file: String },
    /// Smallest 2^k (k ≤ cap) with 2^k× hyperbolic, with a witness.
    Order {
        file: String,
        #[arg(long, default_value_t = 4)]
        cap: u32,
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
    /// A closure form of nonzero signature.
    Witness {
        file: String,
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
    /// Primary decomposition of a nonsingular pair.
    Decompose { file: String },
    /// Print a generated example system.
    Gen {
        /// block_pair, triangular_pair, galois_pair, q_se or random_system.
        name: String,
        /// Generator parameter as key=value (repeatable).
        #[arg(long = "param", short = 'p')]
        params: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-check a witness file (or every payload of a report) against a system.
    Verify { file: String, witness: String },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut progress = String::new();
    match execute(&cli, &mut progress) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: progress },
        Err(e) => {
            let code = if e.is_mathematical() { EXIT_REFUSED } else { EXIT_USAGE };
            Outcome { code, stdout: String::new(), stderr: format!("{progress}error: {e}\n") }
        }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn load_system(path: &str) -> Result<QFSystem> {
    QFSystem::from_json(&read_input(path)?)
}

fn digest(text: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

/// Report under construction.
struct Report {
    command: &'static str,
    input_digest: String,
    verdicts: Map<String, Value>,
    witnesses: Map<String, Value>,
    /// Payload printed by `--format system`.
    primary: Option<MatrixFile>,
}

impl Report {
    fn new(command: &'static str, sys: &QFSystem) -> Self {
        Report {
            command,
            input_digest: digest(&sys.to_json()),
            verdicts: Map::new(),
            witnesses: Map::new(),
            primary: None,
        }
    }

    fn verdict(&mut self, key: &str, value: impl Into<Value>) {
        self.verdicts.insert(key.to_string(), value.into());
    }

    fn witness(&mut self, key: &str, payload: MatrixFile, primary: bool) {
        self.witnesses.insert(key.to_string(), payload.to_value());
        if primary && self.primary.is_none() {
            self.primary = Some(payload);
        }
    }

    fn render(self, format: Format, timing_ms: u64) -> Result<String> {
        match format {
            Format::System => match self.primary {
                Some(p) => Ok(format!("{}\n", p.to_json())),
                None => Err(Error::Precondition(format!(
                    "`{}` produced no payload to print as a system file",
                    self.command
                ))),
            },
            Format::Json => {
                let mut top = Map::new();
                top.insert("command".into(), json!(self.command));
                top.insert("input_digest".into(), json!(self.input_digest));
                top.insert("timing_ms".into(), json!(timing_ms));
                top.insert("verdicts".into(), Value::Object(self.verdicts));
                if !self.witnesses.is_empty() {
                    top.insert("witnesses".into(), Value::Object(self.witnesses));
                }
                Ok(format!("{}\n", Value::Object(top)))
            }
            Format::Text => {
                let mut out = format!("command: {}\ninput: {}\n", self.command, self.input_digest);
                for (k, v) in &self.verdicts {
                    out.push_str(&format!("{k}: {v}\n"));
                }
                for (k, v) in &self.witnesses {
                    out.push_str(&format!("witness {k}: {v}\n"));
                }
                if timing_ms > 0 {
                    out.push_str(&format!("timing_ms: {timing_ms}\n"));
                }
                Ok(out)
            }
        }
    }
}

fn closure_form_payload(form: &QMatrix) -> MatrixFile {
    MatrixFile::new(form.rows(), vec![form.clone()], vec!["closure_form".into()]).expect("square")
}

fn hyperbolic_payload(w: &HypWitness, dim: usize, copies: usize) -> MatrixFile {
    let cols: Vec<QVector> = w.u_basis.iter().chain(&w.w_basis).cloned().collect();
    let basis = QMatrix::from_columns(dim, &cols);
    MatrixFile::new(dim, vec![basis], vec![format!("hyperbolic_basis:copies={copies}")]).expect("square")
}

fn idempotent_payload(a: &InvAlgebra, w: &IdemWitness, copies: usize) -> Result<MatrixFile> {
    let (phi, psi) = a.to_pair(&w.e)?;
    MatrixFile::new(
        phi.rows(),
        vec![phi, psi],
        vec![format!("idempotent_phi:copies={copies}"), format!("idempotent_psi:copies={copies}")],
    )
}

fn execute(cli: &Cli, progress: &mut String) -> Result<(i32, String)> {
    let start = Instant::now();
    let report = match &cli.command {
        Command::Gen { name, params, seed } => return Ok((EXIT_OK, gen(name, params, *seed, cli.format)?)),
        Command::Signature { file } => cmd_signature(&load_system(file)?),
        Command::Adjoint { file, budget } => cmd_adjoint(&load_system(file)?, *budget)?,
        Command::Traceform { file } => cmd_traceform(&load_system(file)?),
        Command::Closure { file, budget } => cmd_closure(&load_system(file)?, *budget)?,
        Command::Decide { file } => cmd_decide(&load_system(file)?)?,
        Command::Order { file, cap, budget } => cmd_order(&load_system(file)?, *cap, *budget, progress)?,
        Command::Witness { file, budget } => cmd_witness(&load_system(file)?, *budget)?,
        Command::Decompose { file } => cmd_decompose(&load_system(file)?)?,
        Command::Verify { file, witness } => cmd_verify(&load_system(file)?, &read_input(witness)?)?,
    };
    let timing_ms = if cli.timing { start.elapsed().as_millis() as u64 } else { 0 };
    let rejected = report.verdicts.get("valid") == Some(&Value::Bool(false));
    if rejected {
        progress.push_str("verify: witness rejected\n");
    }
    let code = if rejected { EXIT_REFUSED } else { EXIT_OK };
    Ok((code, report.render(cli.format, timing_ms)?))
}

fn gen(name: &str, params: &[String], seed: Option<u64>, format: Format) -> Result<String> {
    let mut spec = ExampleSpec::new(name);
    for p in params {
        let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("parameter {p:?} is not key=value")))?;
        let v: i64 = v.trim().parse().map_err(|_| Error::Parse(format!("parameter {k} is not an integer")))?;
        spec = spec.with(k.trim(), v);
    }
    if let Some(s) = seed {
        spec = spec.with("seed", s as i64);
    }
    let sys = spec.generate()?;
    Ok(match format {
        Format::Json | Format::System => format!("{}\n", sys.to_json()),
        Format::Text => {
            let mut out = format!("{name}: {} forms on Q^{}\n", sys.len(), sys.dim());
            for (k, f) in sys.forms().iter().enumerate() {
                out.push_str(&format!("form {k}:\n{}\n", f.gram()));
            }
            out
        }
    })
}

fn cmd_signature(sys: &QFSystem) -> Report {
    let mut r = Report::new("signature", sys);
    let forms: Vec<Value> = sys
        .forms()
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let i = f.inertia();
            json!({
                "index": k,
                "label": sys.labels().map(|l| l[k].clone()),
                "signature": i.signature(),
                "positive": i.positive,
                "negative": i.negative,
                "nullity": i.zero,
                "unimodular": f.is_unimodular(),
            })
        })
        .collect();
    r.verdict("dim", sys.dim());
    r.verdict("forms", forms);
    r
}

fn cmd_adjoint(sys: &QFSystem, budget: u32) -> Result<Report> {
    let mut r = Report::new("adjoint", sys);
    let a = adjoint_algebra(sys);
    r.verdict("dim_A", a.dim());
    r.verdict("dim_J", dickson_radical(&a)?.len());
    r.verdict("trace_signature", trace_form(&a).signature());
    let verdict = find_hyperbolic_idempotent_with(&a, i64::from(budget))?;
    r.verdict("verdict", verdict.label());
    if let HypVerdict::Witness(w) = &verdict {
        r.witness("hyperbolic_basis", hyperbolic_payload(&idem_to_hyp_witness(&a, w)?, sys.dim(), 1), true);
        r.witness("idempotent", idempotent_payload(&a, w, 1)?, false);
    }
    Ok(r)
}

fn cmd_traceform(sys: &QFSystem) -> Report {
    let mut r = Report::new("traceform", sys);
    let a = adjoint_algebra(sys);
    let t = trace_form(&a);
    let i = t.inertia();
    r.verdict("dim_A", a.dim());
    r.verdict("trace_signature", i.signature());
    r.verdict("positive", i.positive);
    r.verdict("negative", i.negative);
    r.verdict("nullity", i.zero);
    let payload = MatrixFile::new(t.dim(), vec![t.into_gram()], vec!["trace_form".into()]).expect("square");
    r.witness("trace_form", payload, true);
    r
}

fn cmd_closure(sys: &QFSystem, budget: u32) -> Result<Report> {
    let mut r = Report::new("closure", sys);
    let cl = closure_basis(sys);
    r.verdict("dim_closure", cl.dim());
    let labels = (0..cl.dim()).map(|k| format!("closure_basis_{k}")).collect();
    let basis = MatrixFile::new(sys.dim(), cl.basis.iter().map(|f| f.gram().clone()).collect(), labels)?;
    r.witness("closure_basis", basis, true);
    let scan = signature_scan(&cl, budget);
    r.verdict("scan_budget", budget);
    r.verdict("scan_found_nonzero_signature", scan.is_some());
    if let Some(f) = scan {
        r.verdict("scan_signature", f.signature());
        r.witness("closure_form", closure_form_payload(f.gram()), false);
    }
    Ok(r)
}

fn cmd_decide(sys: &QFSystem) -> Result<Report> {
    let mut r = Report::new("decide", sys);
    let t = theorem1_decide(sys);
    r.verdict("trace_sgn", t.trace_sgn);
    r.verdict("exists_n", t.exists_n);
    if sys.len() == 2 {
        match theorem2_decide(sys) {
            Ok(d) => {
                r.verdict("pair_witness_found", d.witness.is_some());
                r.verdict("agrees_with_trace_test", d.agrees_with_theorem1);
                if let Some(w) = d.witness {
                    r.verdict("witness_signature", w.form.signature());
                    r.verdict("witness_level", json!({"prime": w.prime.to_string(), "exponent": w.exponent}));
                    r.witness("closure_form", closure_form_payload(w.form.gram()), true);
                }
            }
            Err(Error::SingularSystem) => r.verdict("pair_witness_found", Value::Null),
            Err(e) => return Err(e),
        }
    }
    Ok(r)
}

fn cmd_order(sys: &QFSystem, cap: u32, budget: u32, progress: &mut String) -> Result<Report> {
    let mut r = Report::new("order", sys);
    let wo = weak_order_with(sys, cap, i64::from(budget))?;
    progress.push_str(&format!("order: searched 2^k copies for k <= {cap}\n"));
    r.verdict("cap", cap);
    r.verdict("order", wo.order);
    r.verdict("exact", wo.exact);
    if let (Some(m), Some(w)) = (wo.order, &wo.witness) {
        let m = m as usize;
        let a = adjoint_algebra(sys).amplify(m)?;
        let hw = idem_to_hyp_witness(&a, w)?;
        r.witness("hyperbolic_basis", hyperbolic_payload(&hw, m * sys.dim(), m), true);
        r.witness("idempotent", idempotent_payload(&a, w, m)?, false);
    }
    Ok(r)
}

fn cmd_witness(sys: &QFSystem, budget: u32) -> Result<Report> {
    let mut r = Report::new("witness", sys);
    let found = if sys.len() == 2 {
        r.verdict("method", "pair_construction");
        let w = theorem2_witness(&rebase_pair(sys)?)?;
        if let Some(w) = &w {
            r.verdict("witness_level", json!({"prime": w.prime.to_string(), "exponent": w.exponent}));
        }
        w.map(|w| w.form)
    } else {
        r.verdict("method", "closure_scan");
        r.verdict("scan_budget", budget);
        signature_scan(&closure_basis(sys), budget)
    };
    r.verdict("found", found.is_some());
    if let Some(f) = found {
        r.verdict("signature", f.signature());
        r.witness("closure_form", closure_form_payload(f.gram()), true);
    }
    Ok(r)
}

fn cmd_decompose(sys: &QFSystem) -> Result<Report> {
    let mut r = Report::new("decompose", sys);
    let rebased = rebase_pair(sys)?;
    r.verdict("rebased", rebased != *sys);
    let dec = kronecker_decompose(&rebased)?;
    let blocks: Vec<Value> = dec
        .blocks
        .iter()
        .map(|b| json!({"prime": b.prime.to_string(), "exponent": b.exponent, "multiplicity": b.multiplicity}))
        .collect();
    r.verdict("blocks", blocks);
    let j = pencil_J(&rebased)?;
    let payload = MatrixFile::new(sys.dim(), vec![j, dec.base_change], vec!["pencil".into(), "base_change".into()])?;
    r.witness("kronecker", payload, true);
    Ok(r)
}

fn cmd_verify(sys: &QFSystem, witness_text: &str) -> Result<Report> {
    let mut r = Report::new("verify", sys);
    let value: Value = serde_json::from_str(witness_text).map_err(|e| Error::Parse(format!("witness file: {e}")))?;
    let payloads: Vec<(String, String)> = match value.get("witnesses").and_then(Value::as_object) {
        Some(map) => map.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        None if value.get("forms").is_some() => vec![("payload".to_string(), value.to_string())],
        None => return Err(Error::Parse("witness file has neither forms nor witnesses".into())),
    };
    let mut all = true;
    let mut results = Map::new();
    for (name, text) in payloads {
        let file = MatrixFile::from_json(&text)?;
        let status = match verify_payload(sys, &file)? {
            Some(true) => "valid",
            Some(false) => {
                all = false;
                "rejected"
            }
            None => "skipped",
        };
        results.insert(name, json!(status));
    }
    r.verdict("checks", Value::Object(results));
    r.verdict("valid", all);
    Ok(r)
}
