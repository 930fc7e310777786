use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use melikyan::certificate::Certificate;
use melikyan::json::hom_spec_from_json;
use melikyan::melikyan::MelikyanAlgebra;
use melikyan::suite::{run_suite, SuiteConfig, SUITES};
use melikyan::{report, twist, GaloisField};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "melikyan", version, about = "Melikyan algebras M(2; n) over GF(5^k): gradings, automorphisms, certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, degree ranges and the support of the standard Z^2-grading.
    Info(Common),
    /// Run a verification suite and emit a certificate.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build the standard grading induced by a homomorphism Z^2 -> G.
    Grade {
        /// Hom-spec JSON: a file path, `-` for stdin, or the JSON text itself.
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Twist a standard grading, recover it from the dual action, untwist.
    TwistRecover(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// Truncation parameters N1,N2.
    #[arg(long, default_value = "1,1", value_parser = parse_n)]
    n: [u32; 2],
    /// Work over GF(5^K).
    #[arg(long, default_value_t = 2)]
    field_degree: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn parse_n(s: &str) -> Result<[u32; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected N1,N2, got {s:?}"));
    };
    let a: u32 = a.parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u32 = b.parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a == 0 || b == 0 {
        return Err("n must be positive".into());
    }
    Ok([a, b])
}

enum Failure {
    Check,
    Input(String),
}

impl From<melikyan::Error> for Failure {
    fn from(e: melikyan::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn emit(common: &Common, json: &Value, table: impl FnOnce() -> String) -> Result<(), Failure> {
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(json).expect("serializable") + "\n",
        Format::Table => table(),
    };
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_certificate(common: &Common, cert: &Certificate) -> Result<(), Failure> {
    emit(common, &cert.to_json(), || cert.to_table())?;
    if cert.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn algebra(common: &Common) -> Result<MelikyanAlgebra, Failure> {
    let f = GaloisField::new(5, common.field_degree).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(MelikyanAlgebra::new(common.n, &f)?)
}

fn read_spec(spec: &str) -> Result<Value, Failure> {
    let text = if spec == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(e.to_string()))?;
        s
    } else if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| Failure::Input(format!("{spec}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("hom-spec: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Info(common) => {
            let v = report::info(&algebra(&common)?);
            emit(&common, &v, || report::info_table(&v))
        }
        Command::Verify { suite, common } => {
            let cfg = SuiteConfig { n: common.n, field_degree: common.field_degree, seed: common.seed };
            let cert = run_suite(&suite, &cfg)?;
            emit_certificate(&common, &cert)
        }
        Command::Grade { spec, common } => {
            let phi = hom_spec_from_json(&read_spec(&spec)?)?;
            let out = report::grade(&algebra(&common)?, &phi)?;
            emit(&common, &out.json, || {
                format!(
                    "standard grading by {}: {}\n  support: {} labels\n  duality: {}\n",
                    phi.codomain(),
                    out.json["verdict"].as_str().unwrap_or("?"),
                    out.json["support"].as_array().map_or(0, Vec::len),
                    out.json["duality"],
                )
            })?;
            if out.passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::TwistRecover(common) => {
            let r = twist::twist_recover(common.n, common.field_degree, common.seed)?;
            emit_certificate(&common, &r.certificate)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
