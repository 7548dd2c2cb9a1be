use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cjt::carlson::{endotrivial_check, kernel_of_hom_matrix, l_xi};
use cjt::cjt::{check_constant, gamma_locus, jordan_at, sweep_types, PiPoint, DEFAULT_MAX_E};
use cjt::exactalg::make_field;
use cjt::modrep::{module_from_json, module_to_json};
use cjt::syzygy::{cohomology_basis, coordinate_class, omega_k, CocycleClass};
use cjt::zoo::{build_example, Example};
use cjt::{Error, ModuleRep, PolyMatrix, Result, ZeroSearch};

#[derive(Parser)]
#[command(name = "cjt", version, about = "Jordan types of modules for elementary abelian p-groups")]
struct Cli {
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for randomized paths.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps (falls back to CJT_JOBS).
    #[arg(long, global = true, env = "CJT_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModuleArg {
    /// Module JSON file.
    #[arg(long)]
    module: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan type at a π-point.
    Jordan {
        #[command(flatten)]
        m: ModuleArg,
        /// Coordinates, comma separated; elements of GF(p^e) use the integer encoding.
        #[arg(long)]
        point: String,
        /// Higher-order terms as JSON: [{"exps": [..], "coef": c}, ..].
        #[arg(long)]
        tail: Option<String>,
        /// Extension degree of the point's field.
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// Decide or test constant Jordan type.
    Check {
        #[command(flatten)]
        m: ModuleArg,
        #[arg(long)]
        exact_rank2: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_E)]
        max_ext: u32,
    },
    /// Points of P^{r-1}(GF(p^e)) with non-generic Jordan type.
    Gamma {
        #[command(flatten)]
        m: ModuleArg,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// Tensor product of two modules.
    Tensor {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Report Jordan types at the rational points instead of the module.
        #[arg(long)]
        type_only: bool,
    },
    /// Heller shift Ω^n(k).
    Omega {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Kernel of a sum of cocycles out of Heller shifts.
    Carlson {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        /// Class per degree: `coord:i` (1-based) or `basis:j`; default `coord:1, coord:2, ..`.
        #[arg(long, value_delimiter = ',')]
        classes: Vec<String>,
    },
    /// Global and local endotriviality tests.
    Endotrivial {
        #[command(flatten)]
        m: ModuleArg,
        #[arg(long, default_value_t = 1)]
        max_ext: u32,
    },
    /// Common zero of the k x k minors of a matrix of forms.
    RanksSearch {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        minor: usize,
        #[arg(long, default_value_t = 8)]
        max_ext: u32,
    },
    /// Emit a fixture module.
    Zoo {
        #[arg(long)]
        name: String,
        /// Comma separated key=value pairs, e.g. p=5,r=2,m=3,n=6.
        #[arg(long, default_value = "")]
        params: String,
    },
}

/// A report and whether every sought property held.
struct Outcome {
    report: Value,
    ok: bool,
}

impl Outcome {
    fn ok(report: Value) -> Outcome {
        Outcome { report, ok: true }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

fn read_module(path: &Path) -> Result<ModuleRep> {
    module_from_json(&read_json(path)?)
}

fn parse_point(m: &ModuleRep, coords: &str, tail: Option<&str>, ext: u32) -> Result<PiPoint> {
    let field = make_field(m.p() as u64, ext)?;
    let linear = coords
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| Error::Malformed(format!("bad coordinate {s:?}"))))
        .map(|c| c.and_then(|c| if ext == 1 { Ok(field.from_i64(c)) } else { checked_elem(&field, c) }))
        .collect::<Result<Vec<_>>>()?;
    let tail = match tail {
        None => Vec::new(),
        Some(t) => {
            let v: Value = serde_json::from_str(t).map_err(|e| Error::Malformed(format!("tail: {e}")))?;
            let items = v.as_array().ok_or_else(|| Error::Malformed("tail must be an array".into()))?;
            items
                .iter()
                .map(|it| {
                    let exps: Vec<u32> = serde_json::from_value(it["exps"].clone())
                        .map_err(|e| Error::Malformed(format!("tail exps: {e}")))?;
                    let c = it["coef"].as_i64().ok_or_else(|| Error::Malformed("tail coef".into()))?;
                    Ok((exps, if ext == 1 { field.from_i64(c) } else { checked_elem(&field, c)? }))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    PiPoint::new(&field, linear, tail)
}

fn checked_elem(field: &cjt::exactalg::FieldSpec, c: i64) -> Result<u32> {
    if c < 0 || c as u64 >= field.q() as u64 {
        return Err(Error::Malformed(format!("{c} is not an element of {}", field.describe())));
    }
    Ok(c as u32)
}

fn pick_class(p: u32, r: usize, degree: usize, spec: &str) -> Result<CocycleClass> {
    let (kind, idx) = spec
        .split_once(':')
        .ok_or_else(|| Error::Malformed(format!("class {spec:?} is not kind:index")))?;
    let idx: usize = idx.trim().parse().map_err(|_| Error::Malformed(format!("bad class index in {spec:?}")))?;
    match kind.trim() {
        "coord" if idx >= 1 => coordinate_class(p, r, degree, idx - 1),
        "basis" => cohomology_basis(p, r, degree)?
            .into_iter()
            .nth(idx)
            .ok_or_else(|| Error::InvalidParams(format!("degree-{degree} basis has no element {idx}"))),
        _ => Err(Error::Malformed(format!("unknown class {spec:?}"))),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Jordan { m, point, tail, ext } => {
            let module = read_module(&m.module)?;
            let q = parse_point(&module, point, tail.as_deref(), *ext)?;
            let t = jordan_at(&module, &q)?;
            Ok(Outcome::ok(json!({
                "point": q.to_json(),
                "type": t.to_string(),
                "counts": t.counts,
                "stable": t.stable().to_string(),
            })))
        }
        Command::Check { m, exact_rank2, max_ext } => {
            let module = read_module(&m.module)?;
            let report = check_constant(&module, *max_ext, *exact_rank2)?;
            Ok(Outcome { ok: report.is_constant(), report: report.to_json() })
        }
        Command::Gamma { m, ext } => {
            let module = read_module(&m.module)?;
            let locus = gamma_locus(&module, *ext)?;
            Ok(Outcome::ok(locus.to_json()))
        }
        Command::Tensor { a, b, type_only } => {
            let (ma, mb) = (read_module(a)?, read_module(b)?);
            let t = ma.tensor(&mb)?;
            if !*type_only {
                return Ok(Outcome::ok(module_to_json(&t)));
            }
            let points: Vec<Value> = sweep_types(&t, 1)?
                .into_iter()
                .map(|(q, ty)| {
                    let mut v = q.to_json();
                    v["type"] = json!(ty.to_string());
                    v
                })
                .collect();
            Ok(Outcome::ok(json!({"dim": t.dim(), "points": points})))
        }
        Command::Omega { p, rank, n } => Ok(Outcome::ok(module_to_json(&omega_k(*p, *rank, *n)?))),
        Command::Carlson { p, rank, degrees, classes } => {
            if degrees.is_empty() {
                return Err(Error::InvalidParams("--degrees is required".into()));
            }
            if !classes.is_empty() && classes.len() != degrees.len() {
                return Err(Error::InvalidParams("one class per degree".into()));
            }
            let picked = degrees
                .iter()
                .enumerate()
                .map(|(i, &d)| match classes.get(i) {
                    Some(s) => pick_class(*p, *rank, d, s),
                    None => coordinate_class(*p, *rank, d, i),
                })
                .collect::<Result<Vec<_>>>()?;
            let l = l_xi(&picked)?;
            let mut report = json!({
                "module": module_to_json(&l),
                "classes": picked.iter().map(|c| json!({"degree": c.degree, "tag": c.tag})).collect::<Vec<_>>(),
            });
            let mut ok = true;
            if picked.len() >= 2 {
                let grid = vec![picked.iter().map(|c| c.carrier.clone()).collect::<Vec<_>>()];
                let src: Vec<i64> = degrees.iter().map(|&d| d as i64).collect();
                let (_, hyp) = kernel_of_hom_matrix(&grid, &src, &[0])?;
                ok = hyp.hypothesis_holds && hyp.prediction_holds != Some(false);
                report["hypothesis"] = serde_json::to_value(&hyp).expect("serializable");
            }
            Ok(Outcome { report, ok })
        }
        Command::Endotrivial { m, max_ext } => {
            let module = read_module(&m.module)?;
            let ev = endotrivial_check(&module, *max_ext)?;
            Ok(Outcome { ok: ev.global && ev.agree, report: ev.to_json() })
        }
        Command::RanksSearch { poly, minor, max_ext } => {
            let a = PolyMatrix::from_json(&read_json(poly)?)?;
            match a.common_zero_search(*minor, *max_ext)? {
                ZeroSearch::Witness { point, field } => {
                    let q = PiPoint::linear(&field, point)?;
                    Ok(Outcome::ok(json!({"found": true, "witness": q.to_json()})))
                }
                ZeroSearch::NotFound { extensions } => {
                    Ok(Outcome { ok: false, report: json!({"found": false, "extensions": extensions}) })
                }
            }
        }
        Command::Zoo { name, params } => {
            let mut params = params.clone();
            if name.eq_ignore_ascii_case("RANDOM") && !params.contains("seed") {
                params = format!("{params},seed={}", cli.seed);
            }
            let ex = Example::parse(name, &params)?;
            Ok(Outcome::ok(module_to_json(&build_example(&ex)?)))
        }
    }
}

fn emit(v: &Value, pretty: bool) {
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            emit(&json!({"error": {"kind": "USAGE", "message": msg.trim()}}), false);
            return ExitCode::from(1);
        }
    };
    if let Some(j) = cli.jobs {
        cjt::par::set_jobs(j);
    }
    match run(&cli) {
        Ok(out) => {
            emit(&out.report, cli.pretty);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            emit(&json!({"error": {"kind": e.kind(), "message": e.to_string()}}), cli.pretty);
            ExitCode::from(1)
        }
    }
}
