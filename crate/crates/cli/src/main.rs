use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use ltheory_core::forms::{brown_kervaire, nondegenerate, LinkingForm};
use ltheory_core::graded::{anderson_dual, anderson_dual_truncated, torsor_count, GradedGroup};
use ltheory_core::ltables::{self, verify::presentation_report, Report};
use ltheory_core::poincare::{self, poincare_check, StructuredComplex};
use ltheory_core::Error;

#[derive(Parser)]
#[command(
    name = "ltheory",
    version,
    about = "Homotopy tables, Anderson duals and linking-form invariants of L-theory of the integers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    A,
    B,
    Presentations,
}

#[derive(Subcommand)]
enum Command {
    /// Print the table of a named spectrum, e.g. `Lgs`, `(LR/2)[1]`, `tau>=-1(Ln)`.
    Table {
        #[arg(long)]
        name: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-16..16")]
        window: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Anderson dual of a named table or of a graded JSON file.
    Dual {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        name: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Poincaré check, linking form and Brown-Kervaire invariant of a structured complex
    /// (`--name E`, `--name E*F`, or a JSON file), or the invariants of a linking form file.
    Invariant {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        name: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Brown-Kervaire invariant of the product of the built-in E and F complexes.
    CertifyEf {
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run a verification suite; exits 1 if any item fails.
    Verify {
        #[arg(value_enum, ignore_case = true)]
        suite: Suite,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Restrict `presentations` to one presentation.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Product over one period of Ext(G_i, G_{i+1}) for a named table.
    Torsor {
        #[arg(long)]
        name: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-16..16")]
        window: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownName(_) | Error::Parse(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Output document and whether the run counts as a success.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn parse_window(flag: &str, s: &str) -> Result<(i64, i64), Failure> {
    let bad = || usage(format!("invalid value {s:?} for --{flag}: expected a..b with a <= b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read --input {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("--input {} is not JSON: {e}", path.display())))
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn render_table(t: &GradedGroup, format: Format) -> String {
    match format {
        Format::Json => render_json(&t.to_json()),
        Format::Tsv => t.to_tsv(),
    }
}

fn render_report(r: &Report, format: Format) -> Output {
    let text = match format {
        Format::Json => render_json(&r.to_json()),
        Format::Tsv => r.to_tsv(),
    };
    Output { text, ok: r.all_pass() }
}

fn render_fields(fields: Map<String, Value>, format: Format) -> String {
    match format {
        Format::Json => render_json(&Value::Object(fields)),
        Format::Tsv => {
            let mut s = String::new();
            for (k, v) in &fields {
                let v = match v {
                    Value::String(x) => x.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "{k}\t{v}");
            }
            s
        }
    }
}

fn structured(name: &str) -> Result<StructuredComplex, Failure> {
    let mut parts = name.split('*').map(str::trim);
    let first = parts.next().ok_or_else(|| usage("empty --name"))?;
    let mut s = poincare::builtin(first)?;
    for p in parts {
        s = poincare::tensor_structured(&s, &poincare::builtin(p)?)?;
    }
    Ok(s)
}

fn linking_fields(l: &LinkingForm, fields: &mut Map<String, Value>) -> Result<(), Failure> {
    let nd = nondegenerate(l);
    fields.insert("linking_form".into(), l.to_json());
    fields.insert("nondegenerate".into(), Value::from(nd));
    let beta = if nd { Value::from(brown_kervaire(l)?) } else { Value::Null };
    fields.insert("beta".into(), beta);
    fields.insert("log2_order_parity".into(), Value::from(l.log_order_parity()));
    Ok(())
}

fn invariant(name: Option<&str>, input: Option<&Path>, format: Format) -> Result<Output, Failure> {
    let mut fields = Map::new();
    let s = match (name, input) {
        (Some(n), _) => structured(n)?,
        (None, Some(path)) => {
            let v = read_json(path)?;
            if v.get("factors").is_some() {
                let l = LinkingForm::from_json(&v)?;
                linking_fields(&l, &mut fields)?;
                return Ok(Output::ok(render_fields(fields, format)));
            }
            StructuredComplex::from_json(&v)?
        }
        (None, None) => return Err(usage("one of --name or --input is required")),
    };
    fields.insert("kind".into(), Value::from(s.kind().to_string()));
    fields.insert("dimension".into(), Value::from(s.dimension()));
    fields.insert("poincare".into(), Value::from(poincare_check(&s)?));
    let homology: BTreeMap<i64, String> =
        s.complex().homology_all().into_iter().map(|(n, g)| (n, g.to_string())).collect();
    let mut h = Map::new();
    for (n, g) in homology {
        h.insert(n.to_string(), Value::from(g));
    }
    fields.insert("homology".into(), Value::Object(h));
    match poincare::linking_form(&s) {
        Ok(l) => linking_fields(&l, &mut fields)?,
        Err(_) => {
            fields.insert("linking_form".into(), Value::Null);
        }
    }
    Ok(Output::ok(render_fields(fields, format)))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Table { name, window, format } => {
            let w = parse_window("window", &window)?;
            Ok(Output::ok(render_table(&ltables::table(&name, w)?, format)))
        }
        Command::Dual { name, input, window, format } => {
            let w = window.map(|s| parse_window("window", &s)).transpose()?;
            let dual = match (name, input) {
                (Some(n), _) => ltables::dual_table(&n, w.unwrap_or((-16, 16)))?,
                (None, Some(path)) => {
                    let g = GradedGroup::from_json(&read_json(&path)?)?;
                    let d = match anderson_dual(&g) {
                        Ok(d) => d,
                        Err(Error::OutOfWindow(_)) => anderson_dual_truncated(&g)?,
                        Err(e) => return Err(e.into()),
                    };
                    match w {
                        Some((lo, hi)) => d.restrict(lo, hi)?,
                        None => d,
                    }
                }
                (None, None) => return Err(usage("one of --name or --input is required")),
            };
            Ok(Output::ok(render_table(&dual, format)))
        }
        Command::Invariant { name, input, format } => invariant(name.as_deref(), input.as_deref(), format),
        Command::CertifyEf { format } => {
            let beta = poincare::certify_ef(&poincare::builtin("E")?, &poincare::builtin("F")?)?;
            let text = match format {
                None => format!("beta = {beta}\n"),
                Some(f) => {
                    let mut m = Map::new();
                    m.insert("beta".into(), Value::from(beta));
                    render_fields(m, f)
                }
            };
            Ok(Output { text, ok: beta == 4 })
        }
        Command::Verify { suite, window, name, format } => {
            let w = window.map(|s| parse_window("window", &s)).transpose()?;
            let report = match suite {
                Suite::A => ltables::verify_thm_a(w.unwrap_or((-12, 12)))?,
                Suite::B => ltables::verify_thm_b(w.unwrap_or((-16, 16)))?,
                Suite::Presentations => {
                    let w = w.unwrap_or((-16, 16));
                    let names: Vec<String> = match name {
                        Some(n) => vec![n],
                        None => {
                            std::iter::once("Lq").chain(ltables::presentation::RING_NAMES).map(String::from).collect()
                        }
                    };
                    let mut r = Report::default();
                    for n in names {
                        r.extend(presentation_report(&n, w)?.checks);
                    }
                    r
                }
            };
            Ok(render_report(&report, format))
        }
        Command::Torsor { name, window, format } => {
            let w = parse_window("window", &window)?;
            let t = ltables::table(&name, w)?;
            let period = t.period().unwrap_or(4);
            let g = torsor_count(&t, period)?;
            let mut m = Map::new();
            m.insert("name".into(), Value::from(name));
            m.insert("window".into(), Value::from(vec![w.0, w.1]));
            m.insert("period".into(), Value::from(period));
            m.insert("group".into(), Value::from(g.to_string()));
            Ok(Output::ok(render_fields(m, format)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2));
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
