//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 usage or parse error, 2 validation failure,
//! 3 undetermined result under `--require-certified`.

mod document;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::growth::{
    classify_growth, growth_series, Certainty, ChainLength, DiscontinuityStatus, FundamentalStatus, GrowthConfig,
    GrowthKind, GrowthVerdict, Periodicity, Resolution,
};
use crate::iet::{ArcSet, Iet, IetError};
use crate::invariants::{saf, undistortion_bounds, BoundSource, WordBound};
use crate::scalar::{format_rational, ExactReal, Scalar};
use crate::structure::{
    bounded_normal_form, centralizer_factor, commutes, components, detect_restricted_rotation, order, NormalForm,
    Order, RestrictedRotationForm,
};

pub use document::{Document, DocumentError};

#[derive(Debug, Parser)]
#[command(name = "iet", version, about = "Exact dynamics of interval exchanges of the circle")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Orbit length explored by growth classification.
    #[arg(long, global = true, default_value_t = 2000)]
    horizon: usize,
    /// Trailing window on which a verdict must be stable.
    #[arg(long, global = true, default_value_t = 200)]
    window: usize,
    /// Number of terms in emitted series.
    #[arg(long, global = true, default_value_t = 500)]
    series: usize,
    /// Bit budget for square-root enclosures during comparisons.
    #[arg(long, global = true, default_value_t = 256)]
    basis_depth: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Exit with status 3 when a verdict is undetermined.
    #[arg(long, global = true)]
    require_certified: bool,
    /// Also write every artifact into this directory.
    #[arg(long, global = true, env = "IET_OUT_DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every map in a document and print its canonical form.
    Validate { document: PathBuf },
    /// Discontinuity growth series and verdict.
    Growth { document: PathBuf, name: String },
    /// Scissors invariant as sparse wedge coefficients.
    Saf { document: PathBuf, name: String },
    /// Word-length lower bounds for powers of a map.
    Distortion {
        document: PathBuf,
        name: String,
        /// Comma-separated generator names.
        #[arg(long, value_delimiter = ',', required = true)]
        generators: Vec<String>,
        /// Basis coordinate used for the cocycle bound.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Order, minimal components and normal form.
    Structure { document: PathBuf, name: String },
    /// Factor a map commuting with the rotation by 1/n.
    Centralizer {
        document: PathBuf,
        name: String,
        #[arg(long)]
        n: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

impl From<IetError> for Failure {
    fn from(e: IetError) -> Self {
        Failure::invalid(e.to_string())
    }
}

/// What a command produced: a JSON document, an optional CSV table and
/// the exit code to report after printing.
struct Output {
    stem: String,
    json: Value,
    csv: Option<String>,
    code: i32,
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    match execute(&cli).and_then(|out| emit(&cli, &out, stdout).map(|_| out.code)) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let config = GrowthConfig::new(cli.horizon, cli.window).map_err(|e| Failure::usage(e.to_string()))?;
    match &cli.command {
        Command::Validate { document } => validate(cli, document),
        Command::Growth { document, name } => {
            let (doc, f) = load_map(cli, document, name)?;
            growth(cli, &config, &doc, name, &f)
        }
        Command::Saf { document, name } => {
            let (doc, f) = load_map(cli, document, name)?;
            saf_output(cli, &doc, name, &f)
        }
        Command::Distortion {
            document,
            name,
            generators,
            index,
        } => {
            let (doc, f) = load_map(cli, document, name)?;
            let gens = generators
                .iter()
                .map(|g| lookup(&doc, g))
                .collect::<Result<Vec<_>, _>>()?;
            distortion(cli, &doc, name, &f, &gens, *index)
        }
        Command::Structure { document, name } => {
            let (doc, f) = load_map(cli, document, name)?;
            structure(cli, &config, &doc, name, &f)
        }
        Command::Centralizer { document, name, n } => {
            let (doc, f) = load_map(cli, document, name)?;
            centralizer(&doc, name, &f, *n)
        }
    }
}

fn load_map(cli: &Cli, path: &Path, name: &str) -> Result<(Document, Iet), Failure> {
    let doc = Document::load(path, cli.basis_depth)?;
    let f = lookup(&doc, name)?;
    Ok((doc, f))
}

fn lookup(doc: &Document, name: &str) -> Result<Iet, Failure> {
    match doc.get(name) {
        None => Err(Failure::usage(format!("no map named {name:?}"))),
        Some(Err(e)) => Err(Failure::invalid(format!("map {name:?}: {e}"))),
        Some(Ok(f)) => Ok(f.clone()),
    }
}

fn emit(cli: &Cli, out: &Output, stdout: &mut dyn Write) -> Result<(), Failure> {
    let json = serde_json::to_string_pretty(&out.json).expect("JSON values serialize") + "\n";
    let io = |e: std::io::Error| Failure::usage(format!("cannot write output: {e}"));
    match cli.format {
        Format::Json => stdout.write_all(json.as_bytes()).map_err(io)?,
        Format::Csv => match &out.csv {
            Some(csv) => stdout.write_all(csv.as_bytes()).map_err(io)?,
            None => return Err(Failure::usage("this command has no CSV form; use --format json")),
        },
    }
    if let Some(dir) = &cli.out_dir {
        std::fs::create_dir_all(dir).map_err(io)?;
        std::fs::write(dir.join(format!("{}.json", out.stem)), &json).map_err(io)?;
        if let Some(csv) = &out.csv {
            std::fs::write(dir.join(format!("{}.csv", out.stem)), csv).map_err(io)?;
        }
    }
    Ok(())
}

fn config_json(cli: &Cli) -> Value {
    json!({
        "horizon": cli.horizon,
        "window": cli.window,
        "series": cli.series,
        "basis_depth": cli.basis_depth,
    })
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

fn scalar_json(x: &Scalar, dim: usize) -> Value {
    let mut coords = x.coords();
    coords.resize(dim, BigRational::from_integer(0.into()));
    Value::Array(coords.iter().map(|c| Value::String(format_rational(c))).collect())
}

fn arcs_json(set: &ArcSet<Scalar>, dim: usize) -> Value {
    set.intervals()
        .iter()
        .map(|(a, b)| json!([scalar_json(a, dim), scalar_json(b, dim)]))
        .collect()
}

fn iet_json(f: &Iet, dim: usize) -> Value {
    json!({
        "cuts": f.cuts().iter().map(|c| scalar_json(c, dim)).collect::<Vec<_>>(),
        "trans": f.translations().iter().map(|t| scalar_json(t, dim)).collect::<Vec<_>>(),
        "artificial_zero": f.artificial_zero(),
    })
}

fn validate(cli: &Cli, path: &Path) -> Result<Output, Failure> {
    let doc = Document::load(path, cli.basis_depth)?;
    let dim = doc.basis.len();
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut code = 0;
    for (name, built) in &doc.iets {
        match built {
            Ok(f) => {
                let delta = f.delta()?;
                let mut entry = iet_json(f, dim);
                entry["name"] = json!(name);
                entry["valid"] = json!(true);
                entry["d"] = json!(f.d());
                entry["delta"] = json!(delta);
                entries.push(entry);
                rows.push(vec![
                    name.clone(),
                    "true".into(),
                    f.d().to_string(),
                    delta.to_string(),
                    String::new(),
                ]);
            }
            Err(e) => {
                code = 2;
                entries.push(json!({ "name": name, "valid": false, "error": e.to_string() }));
                rows.push(vec![
                    name.clone(),
                    "false".into(),
                    String::new(),
                    String::new(),
                    e.to_string(),
                ]);
            }
        }
    }
    let stem = path
        .file_stem()
        .map_or("document".into(), |s| s.to_string_lossy().into_owned());
    Ok(Output {
        stem: format!("{stem}.validate"),
        json: json!({ "command": "validate", "basis": doc.descriptors(), "iets": entries }),
        csv: Some(csv_table(&["name", "valid", "d", "delta", "error"], rows)),
        code,
    })
}

fn certainty_json(c: Certainty) -> Value {
    match c {
        Certainty::Exact => json!({ "kind": "exact" }),
        Certainty::HorizonStable { window } => json!({ "kind": "horizon_stable", "window": window }),
    }
}

fn verdict_json(v: &GrowthVerdict<Scalar>) -> Value {
    let (kind, slope) = match v.kind {
        GrowthKind::Bounded => ("bounded", None),
        GrowthKind::Linear(k) => ("linear", Some(k)),
        GrowthKind::Undetermined => ("undetermined", None),
    };
    json!({
        "kind": kind,
        "slope": slope,
        "n0": v.n0,
        "certainty": certainty_json(v.certainty),
        "series_checked_to": v.series_checked_to,
        "order": v.order,
        "nonresolving_fundamental": v.report.nonresolving_fundamental(),
        "stabilization_time": v.report.stabilization_time(),
    })
}

fn status_json(s: &DiscontinuityStatus<Scalar>, dim: usize) -> Value {
    let period = match s.periodicity {
        Periodicity::Periodic { period } => Some(period),
        Periodicity::NonperiodicAtHorizon => None,
    };
    let chain = match s.chain {
        ChainLength::Exact(c) => json!({ "exact": c }),
        ChainLength::AtLeast(c) => json!({ "at_least": c }),
    };
    let fundamental = match s.fundamental {
        FundamentalStatus::No => "no",
        FundamentalStatus::AtHorizon => "at_horizon",
        FundamentalStatus::Certified => "certified",
    };
    let resolution = match s.resolution {
        Resolution::Resolving { at } => json!({ "kind": "resolving", "at": at }),
        Resolution::Nonresolving { since } => json!({ "kind": "nonresolving", "since": since }),
        Resolution::Unknown => json!({ "kind": "unknown" }),
    };
    json!({
        "point": scalar_json(&s.point, dim),
        "period": period,
        "chain": chain,
        "fundamental": fundamental,
        "resolution": resolution,
        "last_hit": s.last_hit,
    })
}

fn growth(cli: &Cli, config: &GrowthConfig, doc: &Document, name: &str, f: &Iet) -> Result<Output, Failure> {
    let dim = doc.basis.len();
    let verdict = classify_growth(f, config)?;
    let series = growth_series(f, cli.series)?;
    let code = if cli.require_certified && verdict.kind == GrowthKind::Undetermined {
        3
    } else {
        0
    };
    let json = json!({
        "command": "growth",
        "name": name,
        "config": config_json(cli),
        "verdict": verdict_json(&verdict),
        "discontinuities": verdict.report.points.iter().map(|s| status_json(s, dim)).collect::<Vec<_>>(),
        "series": series,
    });
    let rows = series
        .iter()
        .enumerate()
        .map(|(i, d)| vec![(i + 1).to_string(), d.to_string()]);
    Ok(Output {
        stem: format!("{name}.growth"),
        json,
        csv: Some(csv_table(&["n", "d"], rows)),
        code,
    })
}

fn saf_output(cli: &Cli, doc: &Document, name: &str, f: &Iet) -> Result<Output, Failure> {
    let inv = saf(f)?;
    let terms = inv.sparse();
    let json = json!({
        "command": "saf",
        "name": name,
        "config": config_json(cli),
        "basis": doc.descriptors(),
        "zero": inv.is_zero(),
        "terms": terms
            .iter()
            .map(|(i, j, c)| json!({ "i": i, "j": j, "coefficient": format_rational(c) }))
            .collect::<Vec<_>>(),
    });
    let rows = terms
        .iter()
        .map(|(i, j, c)| vec![i.to_string(), j.to_string(), format_rational(c)]);
    Ok(Output {
        stem: format!("{name}.saf"),
        json,
        csv: Some(csv_table(&["i", "j", "coefficient"], rows)),
        code: 0,
    })
}

fn source_name(s: BoundSource) -> &'static str {
    match s {
        BoundSource::Discontinuities => "discontinuities",
        BoundSource::Cocycle => "cocycle",
        BoundSource::Both => "both",
        BoundSource::Neither => "neither",
    }
}

fn distortion(
    cli: &Cli,
    doc: &Document,
    name: &str,
    f: &Iet,
    gens: &[Iet],
    index: Option<usize>,
) -> Result<Output, Failure> {
    let stem = format!("{name}.distortion");
    let base = json!({
        "command": "distortion",
        "name": name,
        "config": config_json(cli),
        "basis": doc.descriptors(),
    });
    let bounds: WordBound<Scalar> = match undistortion_bounds(gens, f, cli.series, index) {
        Ok(b) => b,
        Err(IetError::Precondition(reason)) => {
            let mut json = base;
            json["available"] = json!(false);
            json["reason"] = json!(reason);
            return Ok(Output {
                stem,
                json,
                csv: Some(csv_table(&["status", "reason"], [vec!["no bound".into(), reason]])),
                code: 0,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let coc = |c: &Option<BigRational>| c.as_ref().map(format_rational);
    let mut json = base;
    json["available"] = json!(true);
    json["m_disc"] = json!(bounds.m_disc);
    json["m_coc"] = json!(coc(&bounds.m_coc));
    json["index"] = json!(bounds.index);
    json["index_fallback"] = json!(bounds.index_fallback);
    json["cocycle_trend"] = json!(coc(&bounds.cocycle_trend));
    json["bounds"] = bounds
        .bounds
        .iter()
        .map(|b| {
            json!({
                "n": b.n,
                "bound": b.bound.to_string(),
                "source": source_name(b.source),
                "discontinuities": b.discontinuities,
                "cocycle": coc(&b.cocycle),
            })
        })
        .collect();
    let rows = bounds.bounds.iter().map(|b| {
        vec![
            b.n.to_string(),
            b.bound.to_string(),
            source_name(b.source).into(),
            b.discontinuities.to_string(),
            coc(&b.cocycle).unwrap_or_default(),
        ]
    });
    Ok(Output {
        stem,
        json,
        csv: Some(csv_table(&["n", "bound", "source", "discontinuities", "cocycle"], rows)),
        code: 0,
    })
}

fn rotor_json(r: &RestrictedRotationForm<Scalar>, dim: usize) -> Value {
    json!({
        "rotor": arcs_json(&r.rotor, dim),
        "alpha": scalar_json(&r.alpha, dim),
        "beta": scalar_json(&r.beta, dim),
        "gamma": scalar_json(&r.gamma, dim),
        "irrational": r.is_irrational(),
    })
}

fn structure(cli: &Cli, config: &GrowthConfig, doc: &Document, name: &str, f: &Iet) -> Result<Output, Failure> {
    let dim = doc.basis.len();
    let order_json = match order(f, cli.horizon)? {
        Order::Finite(n) => json!({ "kind": "finite", "value": n }),
        Order::Infinite(c) => json!({ "kind": "infinite", "certainty": certainty_json(c) }),
    };
    let parts = components(f, cli.horizon)?;
    let components_json = json!({
        "periodic_parts": parts
            .periodic_parts
            .iter()
            .map(|p| json!({ "period": p.period, "arcs": arcs_json(&p.set, dim) }))
            .collect::<Vec<_>>(),
        "minimal_candidates": parts
            .minimal_candidates
            .iter()
            .map(|m| json!({
                "arcs": arcs_json(&m.set, dim),
                "cycle": m.cycle.iter().map(|c| arcs_json(c, dim)).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
        "permutation": parts.permutation,
        "depth": parts.depth,
        "stabilized": parts.stabilized,
    });
    let restricted = detect_restricted_rotation(f)?.map(|r| rotor_json(&r, dim));
    let mut code = 0;
    let normal_form = match bounded_normal_form(f, config) {
        Ok(NormalForm::Found { k, rotors }) => json!({
            "status": "found",
            "k": k,
            "rotors": rotors.iter().map(|r| rotor_json(r, dim)).collect::<Vec<_>>(),
        }),
        Ok(NormalForm::Undetermined { k, reason }) => {
            if cli.require_certified {
                code = 3;
            }
            json!({ "status": "undetermined", "k": k, "reason": reason })
        }
        Err(IetError::Precondition(reason)) => json!({ "status": "not_applicable", "reason": reason }),
        Err(e) => return Err(e.into()),
    };
    Ok(Output {
        stem: format!("{name}.structure"),
        json: json!({
            "command": "structure",
            "name": name,
            "config": config_json(cli),
            "basis": doc.descriptors(),
            "order": order_json,
            "components": components_json,
            "restricted_rotation": restricted,
            "normal_form": normal_form,
        }),
        csv: None,
        code,
    })
}

fn centralizer(doc: &Document, name: &str, g: &Iet, n: usize) -> Result<Output, Failure> {
    if n == 0 {
        return Err(Failure::usage("--n must be positive"));
    }
    let dim = doc.basis.len();
    let shift = Iet::rotation(&Scalar::from_ratio(1, n as i64))?;
    if !commutes(g, &shift)? {
        return Err(Failure::invalid(format!(
            "{name:?} does not commute with the rotation by 1/{n}"
        )));
    }
    let (p, e) = centralizer_factor(g, n)?;
    Ok(Output {
        stem: format!("{name}.centralizer"),
        json: json!({
            "command": "centralizer",
            "name": name,
            "n": n,
            "commutes": true,
            "p": {
                "breakpoints": p.breakpoints().iter().map(|b| scalar_json(b, dim)).collect::<Vec<_>>(),
                "values": p.values(),
            },
            "e": iet_json(&e, dim),
        }),
        csv: None,
        code: 0,
    })
}
