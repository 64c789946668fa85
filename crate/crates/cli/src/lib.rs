//! `packlab` command line: subcommands, model loading and output formatting.

pub mod gallery;
pub mod render;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use packlab_core::blowup::{blow_up, blowup_form_class, correspond_cp2_to_s2xs2, correspond_s2xs2_to_cp2, RadiiList};
use packlab_core::exceptional::{cremona_reduce, enumerate_exceptional_cp2_classes, CP2BlowupClass, ReductionOutcome};
use packlab_core::invariants::{certify_d_empty, d_omega, DOmegaResult, SearchBudget};
use packlab_core::io::model_to_json;
use packlab_core::model::{class_square, validate, ManifoldModel};
use packlab_core::packing::{feasibility, packing_number_with, vn_report};
use packlab_core::{Error, Exec, Rational};

use gallery::{load_model, load_model_unchecked};
use render::{key_value, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "packlab", version, about = "Symplectic packing invariants in exact arithmetic")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Suppress normal output; only the exit code (and errors) remain.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Model file, or a gallery reference such as `gallery:cp2` or `gallery:s2xs2:1:2`.
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BudgetArgs {
    /// Largest `c₁(B)` examined by the box search.
    #[arg(long, default_value_t = 20)]
    pub c1_max: i64,
    /// Largest absolute coordinate examined by the box search.
    #[arg(long, default_value_t = 10)]
    pub coeff_max: i64,
}

#[derive(Debug, Clone, Args)]
pub struct RadiiArgs {
    /// Squared radius `λ²` of one ball (`p/q` or integer); repeat per ball.
    #[arg(long = "radius2", visible_alias = "capacity", value_parser = parse_rational)]
    pub radius2: Vec<Rational>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower invariant `d_Ω` with witness and certification status.
    D(BudgetArgs),
    /// Packing fraction `v_N`.
    Vn {
        #[arg(long)]
        n: u64,
        /// Also compute the exact value where the family supports it.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Packing number bracket.
    Pnum(BudgetArgs),
    /// Whether balls of the given squared radii embed.
    Feasible {
        #[command(flatten)]
        radii: RadiiArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exceptional classes on blow-ups of CP².
    Exc {
        #[command(subcommand)]
        command: ExcCommand,
    },
    /// Blow up the model at N points.
    Blowup {
        #[arg(long)]
        points: usize,
        #[command(flatten)]
        radii: RadiiArgs,
    },
    /// Translate S²×S² ball data to CP² (or back with `--inverse`).
    Correspond {
        #[arg(long, value_parser = parse_rational, required_unless_present = "inverse")]
        alpha: Option<Rational>,
        #[arg(long, value_parser = parse_rational, required_unless_present = "inverse")]
        beta: Option<Rational>,
        /// CP² scale for the inverse direction.
        #[arg(long, value_parser = parse_rational, requires = "inverse")]
        scale: Option<Rational>,
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        radii: RadiiArgs,
    },
    /// Certify that `D_Ω` is empty.
    CertifyEmpty,
    /// Structural report on a model.
    Validate,
    /// Bundled example models with their invariants.
    Gallery,
}

#[derive(Debug, Subcommand)]
pub enum ExcCommand {
    /// Reduce a class `d;m1,...,mN` by Cremona moves.
    Check {
        #[arg(value_parser = parse_class, allow_hyphen_values = true)]
        class: CP2BlowupClass,
    },
    /// All exceptional classes on CP² blown up at N ≤ 8 points.
    Enumerate {
        #[arg(long)]
        points: usize,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_class(s: &str) -> Result<CP2BlowupClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a subcommand, mapped to exit codes 1 (domain) and 2 (usage).
#[derive(Debug)]
pub enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// Result of a subcommand: JSON document plus an optional dedicated table.
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
}

impl Report {
    fn json(json: Value) -> Self {
        Report { json, table: None }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

impl BudgetArgs {
    fn budget(self) -> Result<SearchBudget, Failure> {
        SearchBudget::new(self.c1_max, self.coeff_max).map_err(|e| Failure::Usage(e.to_string()))
    }
}

fn radii_list(radii: &RadiiArgs) -> Result<RadiiList, Failure> {
    RadiiList::new(radii.radius2.clone()).map_err(|e| Failure::Usage(e.to_string()))
}

fn model_arg(cli_model: &Option<String>) -> Result<ManifoldModel, Failure> {
    let reference = cli_model.as_deref().ok_or_else(|| Failure::Usage("--model is required".into()))?;
    load_model(reference).map_err(|e| Failure::Usage(format!("{reference}: {e}")))
}

fn d_json(model: &ManifoldModel, d: &DOmegaResult) -> Value {
    let mut v = to_value(d);
    let label = d.witness.as_ref().and_then(|w| {
        let nonzero: Vec<usize> = (0..w.len()).filter(|&i| w.0[i] != 0).collect();
        match nonzero.as_slice() {
            [i] if w.0[*i] == 1 => Some(model.lattice.labels()[*i].clone()),
            _ => None,
        }
    });
    v["witness_label"] = json!(label);
    v
}

fn certify_json(model: &ManifoldModel) -> Result<Value, Failure> {
    let cert = certify_d_empty(model)?;
    Ok(json!({
        "certified": cert.certified,
        "checks": {"b_plus": cert.b_plus, "K2": cert.k_square, "K_omega": cert.k_omega},
        "packing_number": if cert.certified { json!(1) } else { Value::Null },
    }))
}

fn exc_check(class: &CP2BlowupClass) -> Result<Report, Failure> {
    if !class.is_numerically_exceptional() {
        return Ok(Report::json(json!({
            "class": class,
            "exceptional": false,
            "outcome": "not_numerically_exceptional",
            "reduced": Value::Null,
            "trace": [],
            "square": class.square(),
            "c1": class.c1(),
        })));
    }
    let r = cremona_reduce(class)?;
    Ok(Report::json(json!({
        "class": class,
        "exceptional": r.outcome == ReductionOutcome::Standard,
        "outcome": r.outcome,
        "reduced": r.reduced,
        "trace": r.trace,
    })))
}

fn exc_enumerate(points: usize) -> Result<Report, Failure> {
    let classes = enumerate_exceptional_cp2_classes(points, Exec::Parallel)?;
    let mut header = vec!["d".to_string()];
    header.extend((1..=points).map(|q| format!("m{q}")));
    let mut table = Table { header, rows: Vec::new() };
    for c in &classes {
        let mut row = vec![c.d.to_string()];
        row.extend(c.m.iter().map(|x| x.to_string()));
        table.rows.push(row);
    }
    Ok(Report {
        json: json!({"points": points, "count": classes.len(), "complete": true, "classes": classes}),
        table: Some(table),
    })
}

fn blowup_cmd(model: &ManifoldModel, points: usize, radii: &RadiiArgs) -> Result<Report, Failure> {
    let bm = blow_up(model, points)?;
    let mut out = json!({"model": model_to_json(&bm.model)});
    if !radii.radius2.is_empty() {
        let radii = radii_list(radii)?;
        let form = blowup_form_class(&bm, &radii)?;
        out["form_square"] = to_value(&class_square(&bm.model, &form)?);
        out["form_class"] = to_value(&form);
    }
    Ok(Report::json(out))
}

fn correspond_cmd(
    alpha: &Option<Rational>,
    beta: &Option<Rational>,
    scale: &Option<Rational>,
    inverse: bool,
    radii: &RadiiArgs,
) -> Result<Report, Failure> {
    let radii = radii_list(radii)?;
    if inverse {
        let scale = scale.as_ref().ok_or_else(|| Failure::Usage("--inverse needs --scale".into()))?;
        let (alpha, beta, radii) = correspond_cp2_to_s2xs2(scale, &radii)?;
        return Ok(Report::json(json!({"alpha": alpha, "beta": beta, "radii": radii})));
    }
    let (alpha, beta) = (alpha.as_ref().expect("required"), beta.as_ref().expect("required"));
    Ok(Report::json(to_value(&correspond_s2xs2_to_cp2(alpha, beta, &radii)?)))
}

fn gallery_cmd() -> Result<Report, Failure> {
    let budget = SearchBudget::default();
    let mut table = Table::new(&["model", "name", "b_plus", "volume", "d", "status", "P"]);
    let mut entries = Vec::new();
    for reference in gallery::ENTRIES {
        let model = load_model(reference)?;
        let report = validate(&model);
        let d = d_omega(&model, budget)?;
        let p = packing_number_with(&model, budget)?;
        let volume = packlab_core::model::volume(&model)?;
        let p_text = match p.exact {
            Some(p) => p.to_string(),
            None => format!("[{}, {}]", p.lower, p.upper),
        };
        table.rows.push(vec![
            reference.to_string(),
            model.name.clone(),
            report.b_plus.map_or("-".into(), |b| b.to_string()),
            volume.to_string(),
            d.value.to_string(),
            to_value(&d.status).as_str().unwrap_or_default().to_string(),
            p_text,
        ]);
        entries.push(json!({
            "model": reference,
            "name": model.name,
            "b_plus": report.b_plus,
            "volume": volume,
            "d_omega": d_json(&model, &d),
            "packing_number": p,
        }));
    }
    Ok(Report { json: Value::Array(entries), table: Some(table) })
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::D(b) => {
            let model = model_arg(&cli.model)?;
            let d = d_omega(&model, b.budget()?)?;
            Ok(Report::json(d_json(&model, &d)))
        }
        Command::Vn { n, exact, budget } => {
            let model = model_arg(&cli.model)?;
            Ok(Report::json(to_value(&vn_report(&model, *n, budget.budget()?, *exact)?)))
        }
        Command::Pnum(b) => {
            let model = model_arg(&cli.model)?;
            Ok(Report::json(to_value(&packing_number_with(&model, b.budget()?)?)))
        }
        Command::Feasible { radii, budget } => {
            let model = model_arg(&cli.model)?;
            Ok(Report::json(to_value(&feasibility(&model, &radii_list(radii)?, budget.budget()?)?)))
        }
        Command::Exc { command: ExcCommand::Check { class } } => exc_check(class),
        Command::Exc { command: ExcCommand::Enumerate { points } } => exc_enumerate(*points),
        Command::Blowup { points, radii } => blowup_cmd(&model_arg(&cli.model)?, *points, radii),
        Command::Correspond { alpha, beta, scale, inverse, radii } => {
            correspond_cmd(alpha, beta, scale, *inverse, radii)
        }
        Command::CertifyEmpty => Ok(Report::json(certify_json(&model_arg(&cli.model)?)?)),
        Command::Validate => {
            let reference = cli.model.as_deref().ok_or_else(|| Failure::Usage("--model is required".into()))?;
            let model = load_model_unchecked(reference).map_err(|e| Failure::Usage(format!("{reference}: {e}")))?;
            let report = validate(&model);
            if report.valid {
                Ok(Report::json(to_value(&report)))
            } else {
                Err(Failure::Domain(Error::InvalidModel(report.errors.join("; "))))
            }
        }
        Command::Gallery => gallery_cmd(),
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({"error": {"kind": kind, "message": message}}).to_string()
}

/// Thread pool honouring `PACKLAB_THREADS`.
fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("PACKLAB_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => builder = builder.num_threads(n),
            _ => return Err(format!("PACKLAB_THREADS must be a positive integer, got `{raw}`")),
        }
    }
    builder.build().map_err(|e| e.to_string())
}

/// Runs `packlab` with the given arguments (including the program name) and
/// returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return 2;
        }
    };
    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(msg) => {
            let _ = writeln!(err, "{}", error_json("usage", &msg));
            return 2;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(report) => {
            if !cli.quiet {
                let text = match cli.format {
                    Format::Json => serde_json::to_string_pretty(&report.json).expect("json") + "\n",
                    Format::Table => report.table.unwrap_or_else(|| key_value(&report.json)).render(),
                };
                let _ = out.write_all(text.as_bytes());
            }
            0
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "{}", error_json(e.kind(), &e.to_string()));
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "{}", error_json("usage", &msg));
            2
        }
    }
}
