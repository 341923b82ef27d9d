use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use ldata::classify::{classify, degree_gate, triviality_diagnostic, vanishing_order_gate};
use ldata::coefficients::exp_transform;
use ldata::datum::LDatum;
use ldata::explicit::{verify_with, EfOptions, DEFAULT_TOLERANCE};
use ldata::spec_doc::DatumSpecDocument;
use ldata::test_function::make_bump;
use ldata::twists::{gamma_asymptotics, twist_sum, TwistSpec};
use ldata::Error;

#[derive(Parser)]
#[command(name = "ldata", version, about = "L-data toolkit: explicit formula checks, degree, conductor, twists and classification")]
struct Cli {
    /// Output format (default: csv for tables, structured for echo, text otherwise).
    #[arg(long, global = true, value_enum)]
    out: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate both sides of the explicit formula with a bump test function.
    Verify {
        spec: PathBuf,
        #[arg(long = "X", default_value_t = 1.0)]
        x: f64,
        #[arg(long, default_value_t = 0.5)]
        center: f64,
        #[arg(long, default_value_t = 0.5)]
        width: f64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Degree 2 lim xK(x).
    Degree {
        spec: PathBuf,
        /// Force the numerical (Richardson) estimate.
        #[arg(long)]
        richardson: bool,
    },
    /// Analytic conductor e^{-2 f(1)}.
    Conductor { spec: PathBuf },
    /// Dirichlet coefficients a(n), n <= N.
    Coeffs { spec: PathBuf, n: u64 },
    /// Degree gate, with a character match in degree 1.
    Classify {
        spec: PathBuf,
        #[arg(long, default_value_t = 1000)]
        n: u64,
        #[arg(long, default_value_t = 100)]
        q_max: u64,
    },
    /// Axiom diagnostics over n <= N.
    Axioms { spec: PathBuf, n: u64 },
    /// Nonlinear twist sums over a list of points z.
    Twist {
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        cs: Vec<f64>,
        /// A point `re,im`; repeat for a grid.
        #[arg(long = "z", value_parser = parse_point)]
        z: Vec<Complex64>,
        #[arg(long, default_value_t = 1_000_000)]
        n_cap: u64,
    },
    /// Print the parsed document with resolved file names (structured by default).
    Echo { spec: PathBuf },
    /// Negative multiplicities within coverage.
    Positivity { spec: PathBuf },
    /// Fit of the asymptotic expansion of log gamma_F.
    Asymptotics {
        spec: PathBuf,
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Triviality diagnostics over n <= N.
    Triviality {
        spec: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        n: u64,
    },
    /// Category of a degree.
    Gate { degree: f64 },
    /// Whether GL_n cusp forms must have zeros of order not divisible by k.
    Vanishing { n: u64, k: u64 },
}

fn parse_point(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected `re,im`, got {s:?}"));
    }
    let re = parts[0].parse::<f64>().map_err(|e| e.to_string())?;
    let im = parts[1].parse::<f64>().map_err(|e| e.to_string())?;
    Ok(Complex64::new(re, im))
}

enum Output {
    Report(Value),
    Table { header: Vec<&'static str>, rows: Vec<Vec<Value>> },
}

fn load(spec: &PathBuf) -> Result<LDatum, Error> {
    DatumSpecDocument::read(spec)?.build()
}

fn run(command: &Command) -> Result<(Output, bool), Error> {
    let report = |v: Value| Ok((Output::Report(v), true));
    match command {
        Command::Verify { spec, x, center, width, tol } => {
            let datum = load(spec)?;
            let tf = make_bump(*x, *center, *width)?;
            let r = verify_with(&datum, &tf, &EfOptions { tolerance: *tol, ..EfOptions::default() })?;
            let ok = r.residual <= *tol;
            Ok((Output::Report(serde_json::to_value(&r).expect("report")), ok))
        }
        Command::Degree { spec, richardson } => {
            let d = load(spec)?;
            let e = if *richardson { d.degree_richardson()? } else { d.degree_estimate()? };
            report(serde_json::to_value(e).expect("degree"))
        }
        Command::Conductor { spec } => {
            let d = load(spec)?;
            report(json!({ "conductor": d.conductor(), "log_conductor": d.log_conductor(), "f1": d.f().get(1).re }))
        }
        Command::Coeffs { spec, n } => {
            let d = load(spec)?;
            let a = exp_transform(d.f(), *n)?;
            let rows = (1..=*n).map(|k| {
                let v = a.get(k);
                vec![json!(k), json!(v.re), json!(v.im)]
            });
            Ok((Output::Table { header: vec!["n", "re_a", "im_a"], rows: rows.collect() }, true))
        }
        Command::Classify { spec, n, q_max } => {
            let d = load(spec)?;
            let v = classify(&d, *n, *q_max)?;
            let mut value = serde_json::to_value(&v).expect("verdict");
            value["category"] = json!(v.category.label());
            report(value)
        }
        Command::Axioms { spec, n } => {
            let d = load(spec)?;
            let r = d.axiom_report(*n)?;
            let mut value = serde_json::to_value(&r).expect("axioms");
            value["all_pass"] = json!(r.all_pass());
            report(value)
        }
        Command::Twist { spec, alphas, cs, z, n_cap } => {
            let tspec = TwistSpec::new(alphas.clone(), cs.clone())?;
            let d = load(spec)?;
            let mut rows = Vec::new();
            for &p in z {
                let s = twist_sum(&d, p, &tspec, *n_cap)?;
                rows.push(vec![json!(p.re), json!(p.im), json!(s.value.re), json!(s.value.im), json!(s.tail_bound)]);
            }
            Ok((Output::Table { header: vec!["re_z", "im_z", "re_S", "im_S", "tail_bound"], rows }, true))
        }
        Command::Echo { spec } => {
            let doc = DatumSpecDocument::read(spec)?;
            doc.build()?;
            report(serde_json::to_value(&doc).expect("document"))
        }
        Command::Positivity { spec } => report(serde_json::to_value(load(spec)?.positivity_report()).expect("positivity")),
        Command::Asymptotics { spec, order } => {
            report(serde_json::to_value(gamma_asymptotics(&load(spec)?, *order)?).expect("fit"))
        }
        Command::Triviality { spec, n } => {
            report(serde_json::to_value(triviality_diagnostic(&load(spec)?, *n)?).expect("triviality"))
        }
        Command::Gate { degree } => {
            let v = degree_gate(*degree)?;
            let mut value = serde_json::to_value(&v).expect("verdict");
            value["category"] = json!(v.category.label());
            report(value)
        }
        Command::Vanishing { n, k } => report(serde_json::to_value(vanishing_order_gate(*n, *k)).expect("verdict")),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Flatten nested objects to dotted keys; arrays of scalars become
/// comma-joined values.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(",")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(output: &Output, format: Format) -> String {
    let mut s = String::new();
    match (output, format) {
        (Output::Report(v), Format::Structured) => {
            s = serde_json::to_string_pretty(v).expect("json");
            s.push('\n');
        }
        (Output::Report(v), Format::Text) => {
            let mut pairs = Vec::new();
            flatten("", v, &mut pairs);
            for (k, x) in pairs {
                s.push_str(&format!("{k}={x}\n"));
            }
        }
        (Output::Report(v), Format::Csv) => {
            let mut pairs = Vec::new();
            flatten("", v, &mut pairs);
            s.push_str("key,value\n");
            for (k, x) in pairs {
                s.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&x)));
            }
        }
        (Output::Table { header, rows }, Format::Structured) => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r.iter().cloned()).collect()))
                .collect();
            s = serde_json::to_string_pretty(&objs).expect("json");
            s.push('\n');
        }
        (Output::Table { header, rows }, _) => {
            let sep = if format == Format::Csv { "," } else { " " };
            s.push_str(&header.join(sep));
            s.push('\n');
            for r in rows {
                s.push_str(&r.iter().map(scalar).collect::<Vec<_>>().join(sep));
                s.push('\n');
            }
        }
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((output, ok)) => {
            let default = match (&cli.command, &output) {
                (Command::Echo { .. }, _) => Format::Structured,
                (_, Output::Table { .. }) => Format::Csv,
                (_, Output::Report(_)) => Format::Text,
            };
            print!("{}", render(&output, cli.out.unwrap_or(default)));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NonConvergence { .. } | Error::IllConditioned(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
