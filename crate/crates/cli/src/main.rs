use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use invar_core::database::SyzygyDatabase;
use invar_core::enumerate::{enumerate_transversal, EnumerateOptions, Mode};
use invar_core::invariant::InvariantKind;
use invar_core::named::{independent_basis_table, nk_expand, NkName};
use invar_core::relations::{BuildOptions, RelLevel};
use invar_core::simplify::{certify_identity, OutputForm, SimplificationLevel, Simplified, Simplifier};
use invar_core::tensor::{parse_expression, Canonicalizer, TensorPolynomial};
use invar_core::InvarError;

#[derive(Parser)]
#[command(
    name = "invar",
    version,
    about = "Riemann invariant enumeration, syzygy databases and simplification"
)]
struct Cli {
    /// Wrap output as {"result": ..., "warnings": [...]}.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DbArg {
    /// Database file.
    #[arg(long, env = "INVAR_DB")]
    db: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Count (or list) the invariants of one kind and degree.
    Enumerate {
        #[arg(long)]
        kind: InvariantKind,
        #[arg(long)]
        degree: u16,
        #[arg(long, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Print the transversal, one representative per line.
        #[arg(long)]
        list: bool,
    },
    /// Enumerate, derive and certify the syzygy database.
    BuildDb {
        #[arg(long, default_value_t = 5)]
        max_i: u16,
        #[arg(long, default_value_t = 4)]
        max_d: u16,
        /// Highest relation level: B (cyclic), C (dimension), D (signature).
        #[arg(long, default_value = "D")]
        level: RelLevel,
        #[arg(long, default_value = "grow")]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random curvature tensors per sign used to certify relations.
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        dimension: u32,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check every stored syzygy on random curvature tensors.
    Certify {
        #[command(flatten)]
        db: DbArg,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Restrict to one sign of the metric determinant.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sigma)]
        sigma: Option<i8>,
    },
    /// Simplify a scalar expression.
    Simplify {
        #[command(flatten)]
        db: DbArg,
        /// 1 permutation, 2 cyclic, 3 dimensional, 4 signature identities.
        #[arg(long, default_value_t = SimplificationLevel::default())]
        level: SimplificationLevel,
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        expr: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Output form: inv, riemann or ricci.
        #[arg(long, default_value = "ricci")]
        out: OutputForm,
        /// Substitute the sign of the metric determinant.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sigma)]
        sigma: Option<i8>,
        /// Check the result against the input on random curvature tensors.
        #[arg(long)]
        certify: bool,
    },
    /// List the independent invariants of the database.
    Basis {
        #[command(flatten)]
        db: DbArg,
        /// Include Riemann and Ricci forms and conventional labels.
        #[arg(long)]
        table: bool,
    },
    /// Expand an NK invariant in the database basis.
    Nk {
        #[command(flatten)]
        db: DbArg,
        #[arg(long)]
        name: NkName,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Invariant counts by degree.
    Counts {
        #[arg(long)]
        kind: InvariantKind,
        #[arg(long)]
        through: u16,
        /// Independent counts at a simplification level (needs a database);
        /// without it, all invariants are counted.
        #[arg(long)]
        level: Option<SimplificationLevel>,
        #[command(flatten)]
        db: DbArg,
        #[arg(long, default_value = "grow")]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn parse_sigma(s: &str) -> Result<i8, String> {
    match s {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("σ must be +1 or -1, got `{s}`")),
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<InvarError> for Failure {
    fn from(e: InvarError) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// Text and JSON forms of a result.
struct Output {
    text: String,
    value: Value,
    warnings: Vec<String>,
    ok: bool,
}

impl Output {
    fn new(text: String, value: Value) -> Self {
        Self {
            text,
            value,
            warnings: Vec::new(),
            ok: true,
        }
    }
}

fn open_db(arg: &DbArg) -> Result<SyzygyDatabase, Failure> {
    let path = arg
        .db
        .as_deref()
        .ok_or_else(|| Failure::Usage("no database given (use --db or set INVAR_DB)".into()))?;
    SyzygyDatabase::load(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn level_letter(level: u8) -> &'static str {
    ["A", "B", "C", "D"][level as usize - 1]
}

fn count_table(db: &SyzygyDatabase) -> (String, Value) {
    let mut text = String::new();
    let mut value = serde_json::Map::new();
    for kind in [InvariantKind::I, InvariantKind::D] {
        let mut per_kind = serde_json::Map::new();
        for level in 1..=db.max_simplification_level() {
            let counts: Vec<usize> = (1..=db.max_degree(kind))
                .map_while(|n| db.independent_count(kind, n, level))
                .collect();
            let joined: Vec<String> = counts.iter().map(usize::to_string).collect();
            text.push_str(&format!("{kind} {} {}\n", level_letter(level), joined.join(" ")));
            per_kind.insert(level_letter(level).into(), json!(counts));
        }
        value.insert(kind.to_string(), Value::Object(per_kind));
    }
    (text.trim_end().to_string(), Value::Object(value))
}

fn with_sigma(s: &Simplified, sigma: i8) -> Simplified {
    let fix = |p: &TensorPolynomial| -> TensorPolynomial {
        p.monomials()
            .map(|mut m| {
                if m.sigma {
                    m.sigma = false;
                    if sigma < 0 {
                        m.coeff = -m.coeff;
                    }
                }
                m
            })
            .collect()
    };
    Simplified {
        invariants: s.invariants.with_sigma_value(sigma),
        riemann: fix(&s.riemann),
        residual: fix(&s.residual),
        warnings: s.warnings.clone(),
    }
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Enumerate {
            kind,
            degree,
            mode,
            seed,
            list,
        } => {
            let opts = EnumerateOptions {
                seed,
                ..EnumerateOptions::with_mode(mode)
            };
            let t = enumerate_transversal(&Canonicalizer::new(), kind, degree as usize, &opts)?;
            let mut text = t.len().to_string();
            let mut value = json!({
                "kind": kind.to_string(),
                "degree": degree,
                "count": t.len(),
                "connected": t.irreducible_count(),
                "mode": format!("{mode:?}").to_lowercase(),
                "samples": t.samples,
            });
            if list {
                let lines = t.lines();
                for l in &lines {
                    text.push('\n');
                    text.push_str(l);
                }
                value["transversal"] = json!(lines);
            }
            Ok(Output::new(text, value))
        }
        Command::BuildDb {
            max_i,
            max_d,
            level,
            mode,
            seed,
            trials,
            dimension,
            out,
        } => {
            if dimension != 4 {
                return Err(Failure::Domain(format!(
                    "dimension {dimension} is not supported; dual invariants and dimensional identities need dimension 4"
                )));
            }
            let start = Instant::now();
            let db = SyzygyDatabase::build(&BuildOptions {
                max_degree_i: max_i,
                max_degree_d: max_d,
                max_level: level,
                mode,
                seed,
                certify_trials: trials,
                ..BuildOptions::default()
            })?;
            db.save(&out)?;
            let certified = db.syzygies().filter(|s| s.certified == Some(true)).count();
            let (table, counts) = count_table(&db);
            let mut o = Output::new(
                format!(
                    "{table}\n{} syzygies, {certified} certified\nwritten to {}",
                    db.syzygy_count(),
                    out.display()
                ),
                json!({
                    "path": out.display().to_string(),
                    "syzygies": db.syzygy_count(),
                    "certified": certified,
                    "counts": counts,
                    "seconds": start.elapsed().as_secs_f64(),
                }),
            );
            o.ok = certified == db.syzygy_count();
            if !o.ok {
                o.warnings.push("some syzygies failed certification".into());
            }
            Ok(o)
        }
        Command::Certify {
            db,
            trials,
            seed,
            sigma,
        } => {
            let mut db = open_db(&db)?;
            let sigmas: Vec<i8> = sigma.map_or(vec![-1, 1], |s| vec![s]);
            let report = db.certify_signs(trials, seed, &sigmas)?;
            let mut text = format!(
                "{} syzygies checked on {} curvature samples: {}",
                report.checked,
                report.samples,
                if report.all_certified() {
                    "all vanish".to_string()
                } else {
                    format!("{} failed", report.failures.len())
                }
            );
            for f in &report.failures {
                text.push_str(&format!("\nfailed: {f}"));
            }
            let mut o = Output::new(
                text,
                json!({
                    "checked": report.checked,
                    "samples": report.samples,
                    "failures": report.failures,
                }),
            );
            o.ok = report.all_certified();
            Ok(o)
        }
        Command::Simplify {
            db,
            level,
            expr,
            file,
            out,
            sigma,
            certify,
        } => {
            let text = match (expr, file) {
                (Some(e), _) => e,
                (None, Some(f)) => read(&f)?,
                (None, None) => return Err(Failure::Usage("give --expr or --file".into())),
            };
            let db = open_db(&db)?;
            let s = Simplifier::new(&db);
            let input = parse_expression(&text).map_err(InvarError::from)?;
            let mut result = s.riemann_simplify(&input, level)?;
            let mut o = Output::new(String::new(), Value::Null);
            if certify {
                let ok = certify_identity(&input, &result.riemann, db.dimension, 3, 1)?;
                if !ok {
                    o.ok = false;
                    result
                        .warnings
                        .push("result differs from the input on random curvature tensors".into());
                }
            }
            if let Some(sg) = sigma {
                result = with_sigma(&result, sg);
            }
            o.text = result.render(out);
            o.value = json!(o.text);
            o.warnings = result.warnings;
            Ok(o)
        }
        Command::Basis { db, table } => {
            let db = open_db(&db)?;
            let s = Simplifier::new(&db);
            let rows = independent_basis_table(&s)?;
            let mut lines = Vec::new();
            let mut values = Vec::new();
            for r in &rows {
                let label = r
                    .label
                    .map(|(neg, l)| format!("{}{}_{{{},{}}}", if neg { "-" } else { "" }, l.kind, l.degree, l.rank));
                if table {
                    lines.push(format!(
                        "{}\t{}\t{}\t{}",
                        r.id,
                        label.clone().unwrap_or_else(|| "-".into()),
                        r.riemann,
                        r.ricci
                    ));
                } else {
                    lines.push(r.id.to_string());
                }
                values.push(json!({
                    "id": r.id.to_string(),
                    "label": label,
                    "riemann": r.riemann.to_string(),
                    "ricci": r.ricci.to_string(),
                }));
            }
            Ok(Output::new(lines.join("\n"), json!(values)))
        }
        Command::Nk { db, name, trials, seed } => {
            let db = open_db(&db)?;
            let s = Simplifier::new(&db);
            let e = nk_expand(&s, name)?;
            let certified = e.certify(&s, trials, seed)?;
            let agrees = e.certify_reference(&s, trials, seed)?;
            let discrepancy = e.discrepancy().map(|d| d.to_string());
            let mut text = format!(
                "{name} = {}\ndefinition: {}",
                e.expansion,
                name.definition().split_whitespace().collect::<Vec<_>>().join(" ")
            );
            text.push_str(&format!("\ncertified: {}", if certified { "yes" } else { "no" }));
            match (&agrees, &discrepancy) {
                (Some(true), _) => text.push_str("\nreference expansion: agrees"),
                (Some(false), Some(d)) => {
                    text.push_str(&format!("\nreference expansion: differs (computed - reference = {d})"))
                }
                _ => text.push_str("\nreference expansion: beyond the database"),
            }
            let mut o = Output::new(
                text,
                json!({
                    "name": name.to_string(),
                    "expansion": e.expansion.to_string(),
                    "certified": certified,
                    "reference_agrees": agrees,
                    "discrepancy": discrepancy,
                }),
            );
            o.ok = certified;
            Ok(o)
        }
        Command::Counts {
            kind,
            through,
            level,
            db,
            mode,
            seed,
        } => {
            let counts: Vec<usize> = match level {
                Some(level) => {
                    let db = open_db(&db)?;
                    if level.get() > db.max_simplification_level() {
                        return Err(InvarError::Level(level.get()).into());
                    }
                    (1..=through)
                        .map(|n| {
                            db.independent_count(kind, n, level.get())
                                .ok_or_else(|| InvarError::OutOfRange(format!("{kind} degree {n}")))
                        })
                        .collect::<Result<_, _>>()?
                }
                None => {
                    let can = Canonicalizer::new();
                    let opts = EnumerateOptions {
                        seed,
                        ..EnumerateOptions::with_mode(mode)
                    };
                    (1..=through)
                        .map(|n| enumerate_transversal(&can, kind, n as usize, &opts).map(|t| t.len()))
                        .collect::<Result<_, _>>()?
                }
            };
            let text: Vec<String> = counts.iter().map(usize::to_string).collect();
            Ok(Output::new(text.join(" "), json!(counts)))
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(o) => {
            if cli.json {
                println!("{}", json!({"result": o.value, "warnings": o.warnings}));
            } else {
                println!("{}", o.text);
                for w in &o.warnings {
                    eprintln!("warning: {w}");
                }
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            if cli.json {
                println!("{}", json!({"result": null, "warnings": [], "error": msg}));
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
