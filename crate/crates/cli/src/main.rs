use std::error::Error as StdError;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use posetrep::coxeter::{
    fminus_dim, fplus_dim, phiminus_concrete, phiminus_weight, phiplus_concrete, phiplus_weight,
    rho_dim, sigma_dim,
};
use posetrep::derive::render::{self, Style};
use posetrep::derive::{
    check_weight, derive_conditions, generate_table, reference_corpus, simplify, verify_corpus,
    Corpus,
};
use posetrep::linrep::{
    are_isomorphic, end_dim, hom_space, is_brick, is_indecomposable, SubspaceRep,
};
use posetrep::notation::{format_dim, format_weight, parse_dim_for, parse_poset, parse_weight_for};
use posetrep::numeric::{unitarize, UnitarizeOptions};
use posetrep::poset::check_trace;
use posetrep::roots::enumerate_indec_dims;
use posetrep::{Error, PrimitivePoset, SymbolicWeight};

type CliResult = Result<Verdict, Box<dyn StdError>>;

/// Exit 0 for a positive answer, 2 for a negative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Yes,
    No,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

#[derive(Parser)]
#[command(
    name = "posetrep",
    version,
    about = "Weight conditions for unitarizing representations of primitive posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the indecomposable dimension vectors of a finite-type poset.
    Enumerate {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        json: bool,
    },
    /// Derive the weight conditions for one dimension vector.
    Conditions(ConditionsArgs),
    /// Conditions for every indecomposable dimension vector of a poset.
    Table {
        #[arg(long)]
        poset: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare the reference tables against fresh derivations.
    VerifyTables {
        /// Corpus file; defaults to $POSETREP_CORPUS, then the built-in tables.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Evaluate the conditions of a dimension vector at a weight.
    CheckWeight {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        dim: String,
        #[arg(long)]
        weight: String,
    },
    /// Search for orthogonal projections realizing a weight.
    Unitarize(UnitarizeArgs),
    /// Apply reflection transforms to dimension vectors or weights.
    Coxeter(CoxeterArgs),
    /// Inspect exact subspace representations stored as JSON.
    Rep(RepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args)]
struct ConditionsArgs {
    #[arg(long)]
    poset: String,
    #[arg(long)]
    dim: String,
    /// Conditions exactly as derived.
    #[arg(long, conflicts_with = "simplified")]
    raw: bool,
    /// Redundant inequalities removed (default).
    #[arg(long)]
    simplified: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also print the derivation steps.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct UnitarizeArgs {
    #[arg(long)]
    poset: String,
    #[arg(long)]
    dim: String,
    #[arg(long)]
    weight: String,
    /// Success threshold relative to gamma * sqrt(d0).
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Sigma,
    Rho,
    Fplus,
    Fminus,
    Phiplus,
    Phiminus,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["dim", "weight", "symbolic"])))]
struct CoxeterArgs {
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long)]
    poset: String,
    #[arg(long)]
    dim: Option<String>,
    #[arg(long)]
    weight: Option<String>,
    /// Start from the identity symbolic weight.
    #[arg(long)]
    symbolic: bool,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepCheck {
    Validate,
    Brick,
    Indecomposable,
    Dim,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["file", "hom", "isomorphic"])))]
struct RepArgs {
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RepCheck::Validate, requires = "file")]
    check: RepCheck,
    /// Basis of Hom(r1, r2).
    #[arg(long, num_args = 2, value_names = ["R1", "R2"])]
    hom: Option<Vec<PathBuf>>,
    #[arg(long, num_args = 2, value_names = ["R1", "R2"])]
    isomorphic: Option<Vec<PathBuf>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Enumerate { poset, json } => enumerate(&poset, json),
        Command::Conditions(args) => conditions(&args),
        Command::Table { poset, format } => table(&poset, format),
        Command::VerifyTables { corpus } => verify(corpus),
        Command::CheckWeight { poset, dim, weight } => check(&poset, &dim, &weight),
        Command::Unitarize(args) => unitarize_cmd(&args),
        Command::Coxeter(args) => coxeter(&args),
        Command::Rep(args) => rep(&args),
    }
}

fn enumerate(poset: &str, json: bool) -> CliResult {
    let p = parse_poset(poset)?;
    let dims = enumerate_indec_dims(&p)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&dims)?);
    } else {
        for d in &dims {
            println!("{}", format_dim(d));
        }
    }
    Ok(Verdict::Yes)
}

fn conditions(args: &ConditionsArgs) -> CliResult {
    let p = parse_poset(&args.poset)?;
    let d = parse_dim_for(&p, &args.dim)?;
    let (raw, trace) = derive_conditions(&p, &d)?;
    let c = if args.raw { raw } else { simplify(&raw) };
    match args.format {
        Format::Text => {
            for x in &c {
                println!("{}", render::format_condition(&p, x, Style::Unicode));
            }
            if args.trace {
                println!();
                print!("{trace}");
            }
        }
        Format::Latex => {
            println!("{}", render::latex_row(&p, &d, &c));
            if args.trace {
                for s in &trace.steps {
                    println!("% {}", s.to_string().replace('\n', "\n% "));
                }
            }
        }
        Format::Json => {
            let value = if args.trace {
                serde_json::json!({
                    "conditions": c,
                    "trace": trace.steps.iter().map(ToString::to_string).collect::<Vec<_>>(),
                })
            } else {
                serde_json::to_value(&c)?
            };
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
    }
    Ok(Verdict::Yes)
}

fn table(poset: &str, format: Format) -> CliResult {
    let p = parse_poset(poset)?;
    let t = generate_table(&p)?;
    match format {
        Format::Text => print!("{}", render::table_to_text(&t)),
        Format::Latex => print!("{}", render::table_to_latex(&t)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&t)?),
    }
    Ok(Verdict::Yes)
}

fn load_corpus(path: Option<PathBuf>) -> Result<Corpus, Error> {
    match path.or_else(|| std::env::var_os("POSETREP_CORPUS").map(PathBuf::from)) {
        Some(p) => Corpus::load(&p),
        None => Ok(reference_corpus()),
    }
}

fn verify(path: Option<PathBuf>) -> CliResult {
    let corpus = load_corpus(path)?;
    let report = verify_corpus(&corpus)?;
    for t in &report.tables {
        let name = t.poset.to_string();
        if !t.dims_match {
            println!("FAIL {name} listed dimension vectors differ from the enumeration");
        }
        for r in &t.rows {
            let status = if r.equivalent { "ok  " } else { "FAIL" };
            println!("{status} {name} ({})", format_dim(&r.dim));
            if !r.equivalent {
                println!(
                    "     expected: {}",
                    render::format_conditions(&t.poset, &r.expected, Style::Unicode)
                );
                println!(
                    "     derived:  {}",
                    render::format_conditions(&t.poset, &simplify(&r.derived), Style::Unicode)
                );
            }
        }
    }
    println!(
        "{}/{} rows equivalent",
        report.equivalent_count(),
        report.row_count()
    );
    Ok(report.passed().into())
}

fn check(poset: &str, dim: &str, weight: &str) -> CliResult {
    let p = parse_poset(poset)?;
    let d = parse_dim_for(&p, dim)?;
    let w = parse_weight_for(&p, weight)?;
    if let Err(e) = check_trace(&d, &w) {
        println!("not admissible: {e}");
        return Ok(Verdict::No);
    }
    let v = check_weight(&p, &d, &w)?;
    if v.admissible {
        println!("admissible");
    } else {
        println!("not admissible; violated:");
        for c in &v.violated {
            println!("  {}", render::format_condition(&p, c, Style::Unicode));
        }
    }
    Ok(v.admissible.into())
}

fn unitarize_cmd(args: &UnitarizeArgs) -> CliResult {
    let p = parse_poset(&args.poset)?;
    let d = parse_dim_for(&p, &args.dim)?;
    let w = parse_weight_for(&p, &args.weight)?;
    let opts = UnitarizeOptions {
        success_tol: args.tol,
        restarts: args.restarts,
        seed: args.seed,
        max_iters: args.max_iters,
        ..UnitarizeOptions::default()
    };
    let rep = match unitarize(&p, &d, &w, &opts) {
        Ok(rep) => rep,
        Err(e @ (Error::NoConvergence { .. } | Error::TraceObstruction { .. })) => {
            eprintln!("{e}");
            return Ok(Verdict::No);
        }
        Err(e) => return Err(e.into()),
    };
    let json = serde_json::to_string_pretty(&rep)?;
    match &args.out {
        Some(path) => {
            write_file(path, &json)?;
            println!("residual {:e}", rep.residual);
        }
        None => println!("{json}"),
    }
    Ok(Verdict::Yes)
}

fn write_file(path: &Path, text: &str) -> Result<(), Box<dyn StdError>> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn coxeter(args: &CoxeterArgs) -> CliResult {
    let p = parse_poset(&args.poset)?;
    if let Some(dim) = &args.dim {
        let op = match args.op {
            Op::Sigma => sigma_dim,
            Op::Rho => rho_dim,
            Op::Fplus => fplus_dim,
            Op::Fminus => fminus_dim,
            Op::Phiplus | Op::Phiminus => {
                return Err("phiplus and phiminus act on weights, not dimension vectors".into())
            }
        };
        let mut d = parse_dim_for(&p, dim)?;
        for _ in 0..args.steps {
            d = op(&p, &d)?;
            if args.json {
                println!("{}", serde_json::to_string(&d)?);
            } else {
                println!("{}", format_dim(&d));
            }
        }
        return Ok(Verdict::Yes);
    }
    let (concrete, symbolic) = match args.op {
        Op::Phiplus => (phiplus_concrete as WeightOp, phiplus_weight as SymbolicOp),
        Op::Phiminus => (phiminus_concrete as WeightOp, phiminus_weight as SymbolicOp),
        _ => return Err("sigma, rho, fplus and fminus act on dimension vectors".into()),
    };
    if let Some(weight) = &args.weight {
        let mut w = parse_weight_for(&p, weight)?;
        for _ in 0..args.steps {
            w = concrete(&p, &w)?;
            if args.json {
                println!("{}", serde_json::to_string(&w)?);
            } else {
                println!("{}", format_weight(&w));
            }
        }
    } else {
        let mut w = SymbolicWeight::identity(&p);
        for _ in 0..args.steps {
            w = symbolic(&p, &w)?;
            if args.json {
                println!("{}", serde_json::to_string(&w)?);
            } else {
                println!("{}", format_symbolic(&p, &w));
            }
        }
    }
    Ok(Verdict::Yes)
}

type WeightOp = fn(&PrimitivePoset, &posetrep::Weight) -> posetrep::Result<posetrep::Weight>;
type SymbolicOp = fn(&PrimitivePoset, &SymbolicWeight) -> posetrep::Result<SymbolicWeight>;

/// Same layout as the weight grammar: branches, then gamma.
fn format_symbolic(p: &PrimitivePoset, w: &SymbolicWeight) -> String {
    let mut fields: Vec<String> = w
        .alphas
        .iter()
        .map(|b| {
            b.iter()
                .map(|f| render::format_form(p, f, Style::Unicode))
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect();
    fields.push(render::format_form(p, &w.gamma, Style::Unicode));
    fields.join("; ")
}

fn read_rep(path: &Path) -> Result<SubspaceRep, Box<dyn StdError>> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn rep(args: &RepArgs) -> CliResult {
    if let Some(paths) = &args.hom {
        let (r1, r2) = (read_rep(&paths[0])?, read_rep(&paths[1])?);
        let basis = hom_space(&r1, &r2)?;
        let matrices: Vec<Vec<Vec<String>>> = basis
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|i| m.row(i).iter().map(ToString::to_string).collect())
                    .collect()
            })
            .collect();
        let out = serde_json::json!({ "dim": basis.len(), "basis": matrices });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(Verdict::Yes);
    }
    if let Some(paths) = &args.isomorphic {
        let (r1, r2) = (read_rep(&paths[0])?, read_rep(&paths[1])?);
        let iso = are_isomorphic(&r1, &r2, args.seed)?;
        println!("{}", if iso { "isomorphic" } else { "not isomorphic" });
        return Ok(iso.into());
    }
    let path = args.file.as_ref().expect("clap enforces one mode");
    let r = read_rep(path)?;
    match args.check {
        RepCheck::Validate => {
            println!("valid; dimension vector {}", format_dim(&r.dim_vector()));
            Ok(Verdict::Yes)
        }
        RepCheck::Dim => {
            println!("{}", format_dim(&r.dim_vector()));
            Ok(Verdict::Yes)
        }
        RepCheck::Brick => {
            let b = is_brick(&r);
            println!(
                "{}; End dimension {}",
                if b { "brick" } else { "not a brick" },
                end_dim(&r)
            );
            Ok(b.into())
        }
        RepCheck::Indecomposable => {
            let i = is_indecomposable(&r, args.seed);
            println!("{}", if i { "indecomposable" } else { "decomposable" });
            Ok(i.into())
        }
    }
}
