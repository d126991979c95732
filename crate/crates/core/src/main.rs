use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use cohh::cli::{self, CliError, JobSpec};

#[derive(Parser)]
#[command(name = "cohh", version, about = "coHochschild homology, coBökstedt E2 pages and free loop space tables")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the coalgebra axioms of the input
    Validate(Opts),
    /// Bigraded coHH table with representative cocycles
    Cohh(Opts),
    /// E2 page with generator names
    E2(Opts),
    /// Candidate differentials and the collapse bound
    Collapse(Opts),
    /// Free loop space homology, refused unless collapse is established
    Loops(Opts),
    /// Recompute primitives and indecomposables and compare with closed forms
    Audit(Opts),
    /// Cotor of trivial or regular comodules via the cobar complex
    Cotor(Opts),
    /// Run a JSON job file
    Run {
        file: PathBuf,
    },
}

#[derive(Args)]
struct Opts {
    /// exterior, polynomial, trivial (tensor and table need --coalgebra)
    #[arg(long, value_parser = ["exterior", "polynomial", "trivial", "tensor", "table"])]
    kind: Option<String>,
    /// Generator degrees, comma separated
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<u32>>,
    /// JSON coalgebra spec file
    #[arg(long)]
    coalgebra: Option<PathBuf>,
    /// Field characteristic, 0 for the rationals [default: 2]
    #[arg(long)]
    field: Option<u64>,
    /// Truncation degree for polynomial coalgebras [default: max-t]
    #[arg(long)]
    trunc: Option<u32>,
    /// Largest s (for collapse: largest target s = p^b) [default: 6]
    #[arg(long = "max-s")]
    max_s: Option<usize>,
    /// Largest internal degree t [default: 40]
    #[arg(long = "max-t")]
    max_t: Option<u32>,
    /// Largest total degree for loops and audit [default: 20]
    #[arg(long = "max-degree")]
    max_degree: Option<u32>,
    /// Prime for collapse and loops [default: the field]
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long, value_parser = ["text", "json", "csv"], default_value = "text")]
    format: String,
    /// Write output here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long = "left-comodule", value_parser = ["trivial", "regular"])]
    left_comodule: Option<String>,
    #[arg(long = "right-comodule", value_parser = ["trivial", "regular"])]
    right_comodule: Option<String>,
    /// Fail unless the table equals this JSON table (cohh, e2)
    #[arg(long)]
    expect: Option<PathBuf>,
}

impl Opts {
    fn to_spec(&self, command: &str) -> Result<JobSpec, CliError> {
        let mut m = Map::new();
        m.insert("command".into(), json!(command));
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                m.insert(k.into(), v);
            }
        };
        put("kind", self.kind.as_ref().map(|v| json!(v)));
        put("degrees", self.degrees.as_ref().map(|v| json!(v)));
        put("coalgebra", self.coalgebra.as_ref().map(|v| json!(v)));
        put("field", self.field.map(|v| json!(v)));
        put("trunc", self.trunc.map(|v| json!(v)));
        put("s_max", self.max_s.map(|v| json!(v)));
        put("t_max", self.max_t.map(|v| json!(v)));
        put("max_degree", self.max_degree.map(|v| json!(v)));
        put("prime", self.prime.map(|v| json!(v)));
        put("format", Some(json!(self.format)));
        put("output", self.output.as_ref().map(|v| json!(v)));
        put("left_comodule", self.left_comodule.as_ref().map(|v| json!(v)));
        put("right_comodule", self.right_comodule.as_ref().map(|v| json!(v)));
        put("expect", self.expect.as_ref().map(|v| json!(v)));
        serde_json::from_value(Value::Object(m)).map_err(|e| CliError::Schema { path: "arguments".into(), message: e.to_string() })
    }
}

fn execute(cmd: Cmd) -> Result<i32, CliError> {
    let (job, out) = match cmd {
        Cmd::Run { file } => cli::run_job_file(&file)?,
        other => {
            let (name, opts) = match &other {
                Cmd::Validate(o) => ("validate", o),
                Cmd::Cohh(o) => ("cohh", o),
                Cmd::E2(o) => ("e2", o),
                Cmd::Collapse(o) => ("collapse", o),
                Cmd::Loops(o) => ("loops", o),
                Cmd::Audit(o) => ("audit", o),
                Cmd::Cotor(o) => ("cotor", o),
                Cmd::Run { .. } => unreachable!(),
            };
            let job = opts.to_spec(name)?.resolve(Path::new("."))?;
            let out = cli::run(&job)?;
            (job, out)
        }
    };
    if let Some(text) = cli::emit(&job, &out)? {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(text.as_bytes());
    }
    Ok(out.code)
}

fn configure_threads() {
    if let Some(n) = std::env::var("COHH_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    configure_threads();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
