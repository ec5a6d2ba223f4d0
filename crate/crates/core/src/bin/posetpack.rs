use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use posetpack::embedding::{best_ratio, minimal_closure};
use posetpack::io::{
    big, copies_to_json, mask_to_list, parse_copies, parse_family, parse_poset, CertificateJson,
    FamilyJson, LayerJson,
};
use posetpack::lattice::{
    abar_bruteforce, chains_through, chains_through_oracle, closure, first_relation, is_convex,
};
use posetpack::oracle::{gst_formula, pa_exact, pa_exact_collection, PackingOptimum};
use posetpack::packing::{build_plan, count_copies, materialize, verify_unrelated};
use posetpack::report::report;
use posetpack::selftest::{self, DEFAULT_SEED};
use posetpack::{Error, Limits, Mode, Poset, StandardPoset};

#[derive(Parser)]
#[command(
    name = "posetpack",
    version,
    about = "Convex closures and packings of posets in the Boolean lattice"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON (the default)
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// Emit tab-separated key/value rows
    #[arg(long, global = true)]
    tsv: bool,
    /// Work budget for searches, catalogs and materialization
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Worker threads for parallel routines
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

#[derive(Args)]
struct ModeArg {
    /// Use strong (induced) embeddings
    #[arg(long)]
    strong: bool,
}

impl ModeArg {
    fn mode(&self) -> Mode {
        if self.strong {
            Mode::Strong
        } else {
            Mode::Weak
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Convex closure of a family, plus whether the input was already convex
    Closure { family: PathBuf },
    /// Whether a family is convex
    Convex { family: PathBuf },
    /// Whether two families are unrelated, with the first related pair if not
    Unrelated { first: PathBuf, second: PathBuf },
    /// Number of full chains meeting a family
    Chains {
        family: PathBuf,
        /// Cross-check against the lattice-path dynamic program
        #[arg(long)]
        oracle: bool,
    },
    /// Least number of full chains meeting some m-set family of B_n
    Abar {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Minimum closure size over embeddings, with a witness
    Cp {
        /// Poset JSON file or a standard name such as V, J, chain(2)
        #[arg(long)]
        poset: String,
        #[command(flatten)]
        mode: ModeArg,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Build the layered packing for a poset
    Construct {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        iters: usize,
        #[command(flatten)]
        mode: ModeArg,
        #[arg(long)]
        kmax: Option<usize>,
        /// Only report the exact counts
        #[arg(long)]
        count_only: bool,
        /// Write the copies here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the copies in a file are pairwise unrelated
    Verify {
        copies: PathBuf,
        /// Also require each copy to be an induced copy of this poset
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Exact maximum packing by exhaustive search
    OraclePa {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Exact maximum packing mixing several posets
    OraclePaCollection {
        #[arg(long, value_delimiter = ',', required = true)]
        posets: Vec<String>,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Largest packing of (k+1)-element chains in B_n
    Gst {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// The poset with the largest |P| / c(P) in a collection
    BestRatio {
        #[arg(long, value_delimiter = ',', required = true)]
        posets: Vec<String>,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Compare a construction's exact size against its targets
    Report {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        iters: usize,
        #[command(flatten)]
        mode: ModeArg,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Run the built-in invariant suites
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

enum Failure {
    Input(String),
    Budget(String),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: posetpack::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_family(path: &Path) -> Result<posetpack::Family, Failure> {
    with_path(path, parse_family(&read(path)?))
}

/// A file path if one exists, otherwise a standard poset name.
fn load_poset(source: &str) -> Result<Poset, Failure> {
    let path = Path::new(source);
    if path.is_file() {
        return with_path(path, parse_poset(&read(path)?));
    }
    source.parse::<StandardPoset>()
        .map(Poset::standard)
        .map_err(|_| Failure::Input(format!("'{source}' is neither a file nor a standard poset")))
}

fn family_value(f: &posetpack::Family) -> Value {
    serde_json::to_value(FamilyJson::from_family(f)).expect("serializable")
}

fn optimum_value(opt: &PackingOptimum, n: usize) -> Value {
    json!({
        "n": n,
        "size": opt.size,
        "copies": opt.copies.iter().map(family_value).collect::<Vec<_>>(),
    })
}

fn run(command: Command, limits: &Limits) -> Outcome {
    match command {
        Command::Closure { family } => {
            let f = load_family(&family)?;
            let convex = is_convex(&f, limits)?;
            let mut out = family_value(&closure(&f, limits)?);
            out["convex"] = json!(convex);
            Ok(out)
        }
        Command::Convex { family } => {
            let f = load_family(&family)?;
            Ok(json!({ "convex": is_convex(&f, limits)? }))
        }
        Command::Unrelated { first, second } => {
            let a = load_family(&first)?;
            let b = load_family(&second)?;
            let witness = first_relation(&a, &b)?.map(|(x, y, rel)| {
                json!({
                    "first": mask_to_list(x.mask()),
                    "second": mask_to_list(y.mask()),
                    "relation": format!("{rel:?}").to_lowercase(),
                })
            });
            Ok(json!({ "unrelated": witness.is_none(), "witness": witness }))
        }
        Command::Chains { family, oracle } => {
            let f = load_family(&family)?;
            let count = chains_through(&f, limits)?;
            if !oracle {
                return Ok(json!({ "chains": big(&count) }));
            }
            let dp = chains_through_oracle(&f, limits)?;
            let out = json!({ "chains": big(&count), "oracle": big(&dp), "agree": count == dp });
            if count == dp {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        Command::Abar { m, n } => {
            let r = abar_bruteforce(m, n, limits)?;
            Ok(json!({
                "m": m,
                "n": n,
                "value": big(&r.value),
                "witness": family_value(&r.witness),
                "families_examined": r.families_examined,
            }))
        }
        Command::Cp { poset, mode, kmax } => {
            let p = load_poset(&poset)?;
            let cert = minimal_closure(&p, mode.mode(), kmax, limits)?;
            Ok(serde_json::to_value(CertificateJson::from(&cert)).expect("serializable"))
        }
        Command::Construct {
            poset,
            n,
            iters,
            mode,
            kmax,
            count_only,
            out,
        } => {
            let p = load_poset(&poset)?;
            let cert = minimal_closure(&p, mode.mode(), kmax, limits)?;
            let plan = build_plan(&cert.witness, n, iters, limits)?;
            let (copies, sets) = count_copies(&plan);
            let summary = json!({
                "n": n,
                "iterations": iters,
                "certificate": CertificateJson::from(&cert),
                "layers": plan.layers.iter().map(LayerJson::from).collect::<Vec<_>>(),
                "copies": big(&copies),
                "family_size": big(&sets),
            });
            if count_only {
                return Ok(summary);
            }
            let packed = copies_to_json(&plan, &materialize(&plan, limits)?);
            let list = serde_json::to_value(packed).expect("serializable");
            match out {
                Some(path) => {
                    let text = serde_json::to_string(&list).expect("serializable");
                    fs::write(&path, text + "\n")
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    Ok(summary)
                }
                None => Ok(list),
            }
        }
        Command::Verify { copies, pattern } => {
            let parsed = with_path(&copies, parse_copies(&read(&copies)?))?;
            let masks = parsed
                .iter()
                .map(|c| c.masks())
                .collect::<posetpack::Result<Vec<_>>>();
            let masks = with_path(&copies, masks)?;
            let reference = match pattern {
                Some(source) => {
                    let p = load_poset(&source)?;
                    // the down-set map is an induced copy of the poset
                    Some(
                        (0..p.size())
                            .map(|a| p.down_row(a) | 1 << a)
                            .collect::<Vec<u64>>(),
                    )
                }
                None => None,
            };
            let rep = verify_unrelated(&masks, reference.as_deref());
            let out = json!({
                "passed": rep.passed(),
                "copies": rep.copies,
                "sets": rep.sets,
                "violation": rep.violation.map(|v| json!({
                    "copies": [v.copies.0, v.copies.1],
                    "sets": [mask_to_list(v.sets.0), mask_to_list(v.sets.1)],
                    "relation": format!("{:?}", v.relation).to_lowercase(),
                })),
                "pattern_violation": rep.pattern_violation.map(|v| json!({
                    "copy": v.copy,
                    "elements": [v.elements.0, v.elements.1],
                })),
            });
            if out["passed"] == json!(true) {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        Command::OraclePa { poset, n, mode } => {
            let p = load_poset(&poset)?;
            Ok(optimum_value(&pa_exact(&p, n, mode.mode(), limits)?, n))
        }
        Command::OraclePaCollection { posets, n, mode } => {
            let ps = posets
                .iter()
                .map(|s| load_poset(s))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(optimum_value(
                &pa_exact_collection(&ps, n, mode.mode(), limits)?,
                n,
            ))
        }
        Command::Gst { k, n } => Ok(json!({ "k": k, "n": n, "value": big(&gst_formula(k, n)?) })),
        Command::BestRatio { posets, mode } => {
            let ps = posets
                .iter()
                .map(|s| load_poset(s))
                .collect::<Result<Vec<_>, _>>()?;
            let best = best_ratio(&ps, mode.mode(), limits)?;
            Ok(json!({
                "index": best.index,
                "poset": posets[best.index],
                "ratio": format!("{}/{}", best.ratio.numer(), best.ratio.denom()),
                "certificates": best.certificates.iter().map(CertificateJson::from).collect::<Vec<_>>(),
            }))
        }
        Command::Report {
            poset,
            n,
            iters,
            mode,
            kmax,
        } => {
            let p = load_poset(&poset)?;
            Ok(report(&p, n, iters, mode.mode(), kmax, limits)?.to_json())
        }
        Command::Selftest { seed } => {
            let outcomes = selftest::run(seed, limits);
            let suites: Vec<Value> = outcomes
                .iter()
                .map(|s| json!({ "suite": s.name, "cases": s.cases, "passed": s.passed(), "failure": s.failure }))
                .collect();
            let out = json!({ "passed": outcomes.iter().all(|s| s.passed()), "suites": suites });
            if out["passed"] == json!(true) {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
    }
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn render(v: &Value, tsv: bool) -> String {
    if !tsv {
        return v.to_string();
    }
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}\t{}", tsv_cell(v)))
            .collect::<Vec<_>>()
            .join("\n"),
        Value::Array(items) => items.iter().map(tsv_cell).collect::<Vec<_>>().join("\n"),
        other => tsv_cell(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::from_env();
    if let Some(b) = cli.global.budget {
        limits = limits.with_budget(b);
    }
    if let Some(w) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(w as usize)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command, &limits) {
        Ok(v) => {
            println!("{}", render(&v, cli.global.tsv));
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Verification(v)) => {
            println!("{}", render(&v, cli.global.tsv));
            eprintln!("error: verification failed");
            ExitCode::from(4)
        }
    }
}
