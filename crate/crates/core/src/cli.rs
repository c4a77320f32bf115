//! Command-line front end. `src/main.rs` only forwards to [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{DiskCache, CACHE_ENV};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact;
use crate::hurwitz::{self, CoefficientRequest, Family};
use crate::numerics::{self, DEFAULT_DEGREE};
use crate::pseries::GenusTable;
use crate::quasimod::{fit_minimal_weight, fit_quasimodular, FitReport, QuasimodularPoly};
use crate::report::{float_value, Cell, Table};
use crate::verify::{self, Level};

pub const OUTPUT_SCHEMA: &str = "cue-genus/output/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "cue-genus", version, about = "Exact genus expansion of the CUE spherical integral")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Disk cache directory.
    #[arg(long, env = CACHE_ENV, global = true, default_value = ".cue-genus-cache")]
    pub cache_dir: PathBuf,
    /// Keep results in memory only.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Omit the generation time from JSON output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print one exact coefficient.
    Coeff(CoeffArgs),
    /// Print a table of coefficients or numeric checks.
    Table {
        #[command(subcommand)]
        kind: TableKind,
    },
    /// Fit a genus series by a polynomial in E2, E4, E6.
    Fit(FitArgs),
    /// Run the cross-validation suite; exits nonzero on any failure.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
    },
    /// Inspect or clean the disk cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    Quick,
    Full,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

#[derive(Args, Debug, Serialize)]
pub struct CoeffArgs {
    /// KN, H, F, B, C, LN or Delta.
    #[arg(value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub g: Option<usize>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum GenusFamily {
    /// H_g^d
    #[value(name = "H")]
    H,
    /// F_g^d
    #[value(name = "F")]
    F,
    /// B_g^d
    #[value(name = "B")]
    B,
    /// C_g^d
    #[value(name = "C")]
    C,
    /// exp of F with genera up to m removed
    #[value(name = "T")]
    T,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    /// N^{2m-2} |Delta_{mN}(q)| for each N.
    Convergence {
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long = "N", value_delimiter = ',', default_values_t = [4u32, 8, 16])]
        #[serde(rename = "N")]
        n: Vec<u32>,
        #[arg(long = "D", default_value_t = DEFAULT_DEGREE)]
        #[serde(rename = "D")]
        degree: usize,
    },
    /// Partition series and K_N(q) against Euler's product.
    Euler {
        #[arg(long)]
        q: f64,
        #[arg(long = "N", value_delimiter = ',')]
        #[serde(rename = "N")]
        n: Vec<u32>,
        #[arg(long = "D", default_value_t = DEFAULT_DEGREE)]
        #[serde(rename = "D")]
        degree: usize,
    },
    /// N^{2m-2} |K_{mN}(q) - 1| for each N.
    Concentration {
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long = "N", value_delimiter = ',', default_values_t = [4u32, 5, 6, 7, 8, 9, 10, 11, 12])]
        #[serde(rename = "N")]
        n: Vec<u32>,
        #[arg(long = "D", default_value_t = DEFAULT_DEGREE)]
        #[serde(rename = "D")]
        degree: usize,
    },
    /// Euler's product at q = e^-pi against its Gamma(1/4) closed form.
    Ramanujan,
    /// A genus table T[d][g].
    Genus {
        #[arg(long, value_enum)]
        family: GenusFamily,
        #[arg(long = "D")]
        #[serde(rename = "D")]
        degree: usize,
        #[arg(long = "G")]
        #[serde(rename = "G")]
        genera: usize,
        /// Genera removed for family T.
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Stirling sandwich bounds on H_g^d / H_1^d.
    Bounds {
        #[arg(long = "D", default_value_t = 10)]
        #[serde(rename = "D")]
        degree: usize,
        #[arg(long = "G", default_value_t = 4)]
        #[serde(rename = "G")]
        genera: usize,
    },
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// F<g> or C<g>, e.g. F2.
    pub series: String,
    /// Largest monomial weight (default 6g - 6).
    #[arg(long)]
    pub max_weight: Option<u32>,
    /// Highest coefficient used to solve (default: one per basis monomial).
    #[arg(long)]
    pub fit_deg: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub validate_deg: usize,
    /// Search weight caps 0, 2, ..., max-weight for the first that fits.
    #[arg(long)]
    pub minimal: bool,
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    /// List entries and verify their hashes.
    Inspect,
    /// Delete entries that fail verification.
    Gc,
}

/// What a command produced: the rendered output and whether it counts as
/// success for the exit status.
pub struct Outcome {
    pub output: String,
    pub success: bool,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(outcome) => match emit(&cli, &outcome.output) {
            Ok(()) => i32::from(!outcome.success),
            Err(e) => report_error(&e),
        },
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    match e {
        Error::Usage(_) | Error::Domain { .. } => 2,
        _ => 1,
    }
}

fn emit(cli: &Cli, output: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, output)?,
        None => std::io::stdout().lock().write_all(output.as_bytes())?,
    }
    Ok(())
}

/// Runs the parsed command on a thread pool of the requested size.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    let engine = if cli.no_cache { Engine::new() } else { Engine::with_cache(DiskCache::new(&cli.cache_dir)) };
    pool.install(|| dispatch(cli, &engine))
}

fn dispatch(cli: &Cli, engine: &Engine) -> Result<Outcome> {
    match &cli.command {
        Command::Coeff(args) => coeff(cli, engine, args),
        Command::Table { kind } => table(cli, engine, kind),
        Command::Fit(args) => fit(cli, engine, args),
        Command::Verify { level } => verify_cmd(cli, engine, *level),
        Command::Cache { action } => cache_cmd(cli, action),
    }
}

fn document(cli: &Cli, command: &str, config: Value, result: Value) -> String {
    let mut doc = json!({
        "schema": OUTPUT_SCHEMA,
        "command": command,
        "config": config,
        "result": result,
    });
    if !cli.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        doc["generated_unix"] = Value::from(secs);
    }
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn render(cli: &Cli, command: &str, config: Value, t: &Table, json_result: Option<Value>) -> Result<String> {
    Ok(match cli.format {
        Format::Text => t.to_text(),
        Format::Csv => t.to_csv()?,
        Format::Json => document(cli, command, config, json_result.unwrap_or_else(|| t.to_json())),
    })
}

fn ok(output: String) -> Result<Outcome> {
    Ok(Outcome { output, success: true })
}

fn coeff(cli: &Cli, engine: &Engine, args: &CoeffArgs) -> Result<Outcome> {
    let req = CoefficientRequest { family: args.family, d: args.d, g: args.g, n: args.n, m: args.m };
    let value = engine.coefficient(&req)?;
    let text = exact::to_string(&value);
    let opt = |v: Option<u64>| v.map_or(Cell::Empty, |x| Cell::Int(x as i64));
    let mut t = Table::new(&["family", "d", "g", "N", "m", "value"]);
    t.push(vec![
        Cell::Text(args.family.name().into()),
        Cell::Int(args.d as i64),
        opt(args.g.map(|x| x as u64)),
        opt(args.n.map(u64::from)),
        opt(args.m.map(|x| x as u64)),
        Cell::Exact(value),
    ]);
    let output = match cli.format {
        Format::Text => text + "\n",
        _ => render(cli, "coeff", serde_json::to_value(args)?, &t, Some(t.to_json()[0].clone()))?,
    };
    ok(output)
}

fn table(cli: &Cli, engine: &Engine, kind: &TableKind) -> Result<Outcome> {
    let config = serde_json::to_value(kind)?;
    let out = |t: &Table, json: Option<Value>| render(cli, "table", config.clone(), t, json);
    match kind {
        TableKind::Convergence { q, m, n, degree } => {
            let rows = numerics::convergence_table(engine, *q, n, *m, *degree)?;
            let mut t = Table::new(&["N", "q", "m", "scaled", "tail", "degree", "warning"]);
            for r in rows {
                t.push(vec![
                    Cell::Int(r.n.into()),
                    Cell::Float(r.q),
                    Cell::Int(r.m as i64),
                    Cell::Float(r.scaled),
                    Cell::Float(r.tail),
                    Cell::Int(r.degree as i64),
                    r.warning.into(),
                ]);
            }
            ok(out(&t, None)?)
        }
        TableKind::Euler { q, n, degree } => {
            let rows = numerics::euler_table(engine, *q, n, *degree)?;
            let mut t = Table::new(&["N", "q", "series", "product", "gap", "degree"]);
            for r in rows {
                t.push(vec![
                    r.n.map_or(Cell::Text("inf".into()), |n| Cell::Int(n.into())),
                    Cell::Float(r.q),
                    Cell::Float(r.series),
                    Cell::Float(r.product),
                    Cell::Float(r.gap),
                    Cell::Int(r.degree as i64),
                ]);
            }
            ok(out(&t, None)?)
        }
        TableKind::Concentration { q, m, n, degree } => {
            let report = numerics::concentration_check(engine, *q, *m, n, *degree)?;
            let mut t = Table::new(&["N", "q", "m", "scaled", "tail", "degree", "warning"]);
            for r in &report.rows {
                t.push(vec![
                    Cell::Int(r.n.into()),
                    Cell::Float(r.q),
                    Cell::Int(r.m as i64),
                    Cell::Float(r.scaled),
                    Cell::Float(r.tail),
                    Cell::Int(r.degree as i64),
                    r.warning.clone().into(),
                ]);
            }
            let json = json!({
                "rows": t.to_json(),
                "constant": float_value(report.constant),
                "bounded": report.bounded,
            });
            let mut text = out(&t, Some(json))?;
            if cli.format == Format::Text {
                text += &format!(
                    "constant {}  bounded {}\n",
                    crate::report::format_float(report.constant),
                    report.bounded
                );
            }
            Ok(Outcome { output: text, success: report.bounded })
        }
        TableKind::Ramanujan => {
            let r = numerics::ramanujan_check();
            let mut t = Table::new(&["product", "closed_form", "relative_error"]);
            t.push(vec![Cell::Float(r.product), Cell::Float(r.closed_form), Cell::Float(r.relative_error)]);
            ok(out(&t, None)?)
        }
        TableKind::Genus { family, degree, genera, m } => {
            if *degree == 0 || *genera == 0 {
                return Err(Error::Usage("--D and --G must be at least 1".into()));
            }
            let table = match family {
                GenusFamily::H => engine.k_table(*degree, *genera)?,
                GenusFamily::F => engine.f_table(*degree, *genera)?,
                GenusFamily::B => engine.b_table(*degree, *genera)?,
                GenusFamily::C => engine.c_table(*degree, *genera)?,
                GenusFamily::T => engine.tail_normalized(*m, *degree, *genera)?,
            };
            ok(out(&genus_rows(&table), Some(table.to_json()))?)
        }
        TableKind::Bounds { degree, genera } => {
            if *degree == 0 || *genera == 0 {
                return Err(Error::Usage("--D and --G must be at least 1".into()));
            }
            let h = engine.k_table(*degree, *genera)?;
            let mut t = Table::new(&["d", "g", "lower", "ratio", "upper", "holds"]);
            for d in 1..=*degree {
                for g in 1..=*genera {
                    let ratio = h.get(d, g) / h.get(d, 1);
                    let (lower, upper) = hurwitz::stirling_sandwich(g, d);
                    let holds = lower <= ratio && ratio <= upper;
                    t.push(vec![
                        Cell::Int(d as i64),
                        Cell::Int(g as i64),
                        Cell::Exact(lower),
                        Cell::Exact(ratio),
                        Cell::Exact(upper),
                        Cell::Bool(holds),
                    ]);
                }
            }
            ok(out(&t, None)?)
        }
    }
}

fn genus_rows(table: &GenusTable) -> Table {
    let names: Vec<String> = (1..=table.genera()).map(|g| format!("g{g}")).collect();
    let mut columns = vec!["d"];
    columns.extend(names.iter().map(String::as_str));
    let mut t = Table::new(&columns);
    for d in 1..=table.degree() {
        let mut row = vec![Cell::Int(d as i64)];
        row.extend((1..=table.genera()).map(|g| Cell::Exact(table.get(d, g).clone())));
        t.push(row);
    }
    t
}

fn parse_series_name(name: &str) -> Result<(char, usize)> {
    let mut chars = name.chars();
    let family = chars.next().map(|c| c.to_ascii_uppercase());
    let genus = chars.as_str().parse::<usize>().ok();
    match (family, genus) {
        (Some(f @ ('F' | 'C')), Some(g)) if g >= 1 => Ok((f, g)),
        _ => Err(Error::Usage(format!("unknown series {name:?}; expected F<g> or C<g>"))),
    }
}

fn poly_table(p: &QuasimodularPoly) -> Table {
    let mut t = Table::new(&["a", "b", "c", "coeff"]);
    for (&(a, b, c), coeff) in p.terms() {
        t.push(vec![Cell::Int(a.into()), Cell::Int(b.into()), Cell::Int(c.into()), Cell::Exact(coeff.clone())]);
    }
    t
}

fn fit(cli: &Cli, engine: &Engine, args: &FitArgs) -> Result<Outcome> {
    let (family, g) = parse_series_name(&args.series)?;
    let table = match family {
        'F' => engine.f_table(args.validate_deg, g)?,
        _ => engine.c_table(args.validate_deg, g)?,
    };
    let series = table.genus_series(g);
    let max_weight = args.max_weight.unwrap_or(6 * g as u32 - 6);
    let fit_deg = args.fit_deg.unwrap_or(crate::quasimod::basis(max_weight).len() - 1);
    let config = json!({
        "series": args.series,
        "max_weight": max_weight,
        "fit_deg": fit_deg,
        "validate_deg": args.validate_deg,
        "minimal": args.minimal,
    });

    let (status, weight, poly, detail) = if args.minimal {
        match fit_minimal_weight(&series, max_weight, args.validate_deg)? {
            Some((w, p)) => ("fitted", Some(w), Some(p), Value::Null),
            None => ("no-fit", None, None, Value::Null),
        }
    } else {
        match fit_quasimodular(&series, max_weight, fit_deg, args.validate_deg)? {
            FitReport::Fitted(p) => ("fitted", Some(p.max_weight()), Some(p), Value::Null),
            FitReport::Inconsistent { fit_degree } => {
                ("inconsistent", None, None, json!({ "fit_degree": fit_degree }))
            }
            FitReport::Mismatch { degree, series, model, .. } => (
                "mismatch",
                None,
                None,
                json!({
                    "degree": degree,
                    "series": exact::to_string(&series),
                    "model": exact::to_string(&model),
                }),
            ),
        }
    };
    let success = poly.is_some();
    let t = poly.as_ref().map(poly_table).unwrap_or_else(|| Table::new(&["a", "b", "c", "coeff"]));
    let output = match cli.format {
        Format::Text => match &poly {
            Some(p) => format!("{} = {p}\n", args.series),
            None => format!("{}: {status} {detail}\n", args.series),
        },
        Format::Csv => t.to_csv()?,
        Format::Json => document(
            cli,
            "fit",
            config,
            json!({
                "status": status,
                "weight": weight,
                "polynomial": poly.as_ref().map(QuasimodularPoly::to_json),
                "detail": detail,
            }),
        ),
    };
    Ok(Outcome { output, success })
}

fn verify_cmd(cli: &Cli, engine: &Engine, level: VerifyLevel) -> Result<Outcome> {
    let level = match level {
        VerifyLevel::Quick => Level::Quick,
        VerifyLevel::Full => Level::Full,
    };
    let checks = verify::run(engine, level);
    let success = verify::all_passed(&checks);
    let mut t = Table::new(&["check", "status", "statement", "detail"]);
    for c in &checks {
        t.push(vec![
            Cell::Text(c.name.into()),
            Cell::Text(if c.passed { "PASS" } else { "FAIL" }.into()),
            Cell::Text(c.anchor.into()),
            Cell::Text(c.detail.clone()),
        ]);
    }
    let output = match cli.format {
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                s += &format!("{} {}: {} ({})\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.anchor, c.detail);
            }
            let passed = checks.iter().filter(|c| c.passed).count();
            s += &format!("{passed}/{} checks passed\n", checks.len());
            if let Some(first) = checks.iter().find(|c| !c.passed) {
                s += &format!("first failure: {}: {}\n", first.name, first.detail);
            }
            s
        }
        Format::Csv => t.to_csv()?,
        Format::Json => document(cli, "verify", json!({ "level": level }), json!({ "passed": success, "checks": checks })),
    };
    Ok(Outcome { output, success })
}

fn cache_cmd(cli: &Cli, action: &CacheAction) -> Result<Outcome> {
    let disk = DiskCache::new(&cli.cache_dir);
    let config = json!({ "cache_dir": cli.cache_dir.display().to_string() });
    match action {
        CacheAction::Inspect => {
            let entries = disk.inspect()?;
            let mut t = Table::new(&["file", "bytes", "key", "status"]);
            for e in &entries {
                t.push(vec![
                    Cell::Text(e.file.clone()),
                    Cell::Int(e.bytes as i64),
                    e.key.as_ref().map(ToString::to_string).into(),
                    Cell::Text(e.problem.clone().unwrap_or_else(|| "ok".into())),
                ]);
            }
            let success = entries.iter().all(|e| e.problem.is_none());
            let output = render(cli, "cache-inspect", config, &t, None)?;
            Ok(Outcome { output, success })
        }
        CacheAction::Gc => {
            let report = disk.gc()?;
            let mut t = Table::new(&["removed"]);
            for f in &report.removed {
                t.push(vec![Cell::Text(f.clone())]);
            }
            let output = match cli.format {
                Format::Text => format!("kept {}, removed {}\n", report.kept, report.removed.len())
                    + &report.removed.iter().map(|f| format!("  {f}\n")).collect::<String>(),
                _ => render(cli, "cache-gc", config, &t, Some(serde_json::to_value(&report)?))?,
            };
            ok(output)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("cue-genus").chain(args.iter().copied())).unwrap()
    }

    fn output(args: &[&str]) -> String {
        let mut full = vec!["--no-cache", "--no-timestamp"];
        full.extend_from_slice(args);
        execute(&parse(&full)).unwrap().output
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(output(&["coeff", "H", "--g", "1", "--d", "3"]), "18\n");
        assert_eq!(output(&["coeff", "KN", "--N", "2", "--d", "2"]), "16/3\n");
        assert_eq!(output(&["coeff", "F", "--g", "2", "--d", "1"]), "0\n");
        assert_eq!(
            output(&["--format", "csv", "coeff", "KN", "--N", "2", "--d", "2"]),
            "family,d,g,N,m,value\r\nKN,2,,2,,16/3\r\n"
        );
    }

    #[test]
    fn parse_errors() {
        assert!(Cli::try_parse_from(["cue-genus", "coeff", "X", "--d", "1"]).is_err());
        assert!(Cli::try_parse_from(["cue-genus", "table", "convergence"]).is_err());
        let cli = parse(&["--no-cache", "coeff", "H", "--d", "3"]);
        assert!(matches!(execute(&cli), Err(Error::Usage(_))));
        let cli = parse(&["--no-cache", "table", "euler", "--q", "0.5"]);
        assert!(matches!(execute(&cli), Err(Error::Domain { .. })));
    }

    #[test]
    fn f1_does_not_fit() {
        let cli = parse(&["--no-cache", "fit", "F1", "--max-weight", "6", "--fit-deg", "8"]);
        let outcome = execute(&cli).unwrap();
        assert!(!outcome.success);
        assert!(outcome.output.starts_with("F1: inconsistent"), "{}", outcome.output);
    }

    #[test]
    fn series_names() {
        assert_eq!(parse_series_name("F2").unwrap(), ('F', 2));
        assert_eq!(parse_series_name("c3").unwrap(), ('C', 3));
        assert!(parse_series_name("F0").is_err());
        assert!(parse_series_name("K2").is_err());
    }

    #[test]
    fn fit_prints_polynomial() {
        let explicit = output(&["fit", "F2", "--max-weight", "6", "--fit-deg", "6", "--validate-deg", "20"]);
        let text = output(&["fit", "F2", "--validate-deg", "12"]);
        assert_eq!(explicit, text);
        assert_eq!(
            text,
            "F2 = 1/10368*E2^3 - 1/17280*E2*E4 - 1/25920*E6 + 1/1152*E2^2 + 1/2880*E4 + 1/576*E2 - 17/5760\n"
        );
    }
}
