//! `toda`: homology, incidence graphs, tau-functions, divisor counts and
//! Toda-flow simulation from the command line.
//!
//! Exit status is 0 on success, 1 on bad flags or a domain error and 2 when
//! `verify` finds a failing check.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use toda_core::complex::{build_complex, local_complex, schubert_complex};
use toda_core::divisor::{component_row, ComponentRow};
use toda_core::incidence::{graph_g, graph_gl, IncidenceTable};
use toda_core::lie::standard_datum;
use toda_core::tau::{bilinear_constants, tau_system, to_f64, toda_solution_at};
use toda_core::toda::integrate;
use toda_core::verify::{budget_from_env, run};
use toda_core::{
    AbelianGroup, CartanType, ChainComplex, Coefficients, Error, Family, Graph, RootDatum, SubsetJ,
    TodaState,
};

#[derive(Parser, Debug)]
#[command(
    name = "toda",
    version,
    about = "Toda lattice cell complexes, tau-functions and flows"
)]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology of the cell complex.
    Homology(GroupArgs),
    /// Cohomology of the cell complex.
    Cohomology(GroupArgs),
    /// Every incidence number [J; J + alpha_k].
    Incidence(IncidenceArgs),
    /// The incidence graph, or the local graph with `--variant local`.
    Graph(GraphArgs),
    /// Tau-functions of the nilpotent flow (types A, B, C, G).
    Tau(TauArgs),
    /// Divisor polynomial degrees, real roots and component counts.
    Divisor(DivisorArgs),
    /// Integrate the Toda equations; CSV output.
    Simulate(SimulateArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct TypeArgs {
    /// Family letter A..G.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    rank: usize,
}

impl TypeArgs {
    fn cartan_type(self) -> Result<CartanType, Error> {
        CartanType::new(self.family, self.rank)
    }

    fn datum(self) -> Result<std::sync::Arc<RootDatum>, Error> {
        Ok(standard_datum(self.cartan_type()?))
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_str(s).map_err(|e| e.to_string())
}

fn parse_coefficients(s: &str) -> Result<Coefficients, String> {
    Coefficients::from_str(s).map_err(|e| e.to_string())
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
enum Variant {
    #[default]
    Standard,
    /// Nonzero incidences replaced by +-2 (type A).
    Schubert,
    /// The local complex on an extended diagram.
    Local,
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, default_value = "Z", value_parser = parse_coefficients)]
    coeff: Coefficients,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Variant::Standard)]
    variant: Variant,
}

#[derive(Args, Debug)]
struct IncidenceArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, value_enum, default_value_t = Format::Dot)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Variant::Standard)]
    variant: Variant,
}

#[derive(Args, Debug)]
struct TauArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct DivisorArgs {
    /// A single rank l >= 2.
    #[arg(long, conflicts_with = "max_rank")]
    rank: Option<usize>,
    /// Every rank from 2 up to this one.
    #[arg(long, default_value_t = 10)]
    max_rank: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Initial a, comma separated.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "from_tau")]
    a: Option<String>,
    /// Initial b, comma separated.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "from_tau")]
    b: Option<String>,
    /// Start on the tau-function solution at these times `t1,t2,...`; the
    /// flow time is `t1`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["a", "b"])]
    from_tau: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
    #[arg(long, allow_hyphen_values = true)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Emit every n-th step (the last step is always emitted).
    #[arg(long, default_value_t = 1)]
    every: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Paper,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::Paper)]
    suite: Suite,
    /// Only these check numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

enum Failure {
    Domain(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

#[derive(Serialize)]
struct GroupJson {
    free: usize,
    torsion: Vec<u64>,
}

impl From<&AbelianGroup> for GroupJson {
    fn from(g: &AbelianGroup) -> Self {
        GroupJson {
            free: g.free,
            torsion: g.torsion.clone(),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn complex_for(ty: TypeArgs, variant: Variant) -> Result<ChainComplex, Error> {
    let d = ty.datum()?;
    match variant {
        Variant::Standard => build_complex(&d),
        Variant::Schubert => schubert_complex(&d),
        Variant::Local => local_complex(&d),
    }
}

fn groups(args: &GroupArgs, cohomology: bool) -> Outcome {
    let cx = complex_for(args.ty, args.variant)?;
    let h = if cohomology {
        cx.cohomology(args.coeff)
    } else {
        cx.homology(args.coeff)
    };
    let ct = args.ty.cartan_type()?;
    let key = if cohomology { "cohomology" } else { "H" };
    Ok(match args.format {
        Format::Json => {
            let list: Vec<GroupJson> = h.iter().map(GroupJson::from).collect();
            json(&serde_json::json!({ key: list }))
        }
        Format::Csv => {
            let mut s = String::from("family,rank,coefficient,degree,free,torsion\n");
            for (k, g) in h.iter().enumerate() {
                let t: Vec<String> = g.torsion.iter().map(u64::to_string).collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{k},{},{}",
                    ct.family,
                    ct.rank,
                    args.coeff,
                    g.free,
                    t.join(" ")
                );
            }
            s
        }
        Format::Text => {
            let sym = if cohomology { "H^" } else { "H_" };
            let mut s = String::new();
            for (k, g) in h.iter().enumerate() {
                let _ = writeln!(s, "{sym}{k}({ct}; {}) = {g}", args.coeff);
            }
            s
        }
        Format::Dot => {
            return Err(Failure::Domain(
                "groups have json, csv or text output".into(),
            ))
        }
    })
}

#[derive(Serialize)]
struct IncidenceJson {
    from: String,
    root: usize,
    to: String,
    value: i64,
}

fn incidence(args: &IncidenceArgs) -> Outcome {
    let d = args.ty.datum()?;
    let table = IncidenceTable::build(&d)?;
    let l = d.rank();
    let rows: Vec<IncidenceJson> = table
        .entries
        .iter()
        .map(|(&(j, k), &value)| IncidenceJson {
            from: j.star_string(l),
            root: k + 1,
            to: j.with(k).star_string(l),
            value,
        })
        .collect();
    Ok(match args.format {
        Format::Json => {
            json(&serde_json::json!({ "type": d.cartan_type.to_string(), "incidences": rows }))
        }
        Format::Csv => {
            let mut s = String::from("from,root,to,value\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", r.from, r.root, r.to, r.value);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "[{}; {}] = {}  (alpha_{})",
                    r.from, r.to, r.value, r.root
                );
            }
            s
        }
        Format::Dot => return Err(Failure::Domain("use `graph` for DOT output".into())),
    })
}

#[derive(Serialize)]
struct EdgeJson {
    from: String,
    to: String,
    root: usize,
    weight: Option<i64>,
}

fn graph_json(g: &Graph) -> String {
    let vertices: Vec<String> = SubsetJ::all(g.rank)
        .map(|v| v.star_string(g.rank))
        .collect();
    let edges: Vec<EdgeJson> = g
        .edges
        .iter()
        .map(|e| EdgeJson {
            from: e.from.star_string(g.rank),
            to: e.to().star_string(g.rank),
            root: e.root + 1,
            weight: e.weight,
        })
        .collect();
    json(
        &serde_json::json!({ "name": g.name, "rank": g.rank, "vertices": vertices, "edges": edges }),
    )
}

fn graph(args: &GraphArgs) -> Outcome {
    let d = args.ty.datum()?;
    let g = match args.variant {
        Variant::Standard => graph_g(&d)?,
        Variant::Local => graph_gl(&d)?,
        Variant::Schubert => {
            return Err(Failure::Domain(
                "graphs come in standard and local variants".into(),
            ))
        }
    };
    match args.format {
        Format::Dot => Ok(g.to_dot()),
        Format::Json => Ok(graph_json(&g)),
        _ => Err(Failure::Domain("graphs have dot or json output".into())),
    }
}

fn tau(args: &TauArgs) -> Outcome {
    let sys = tau_system(args.ty.family, args.ty.rank)?;
    let taus: Vec<String> = sys.taus.iter().map(ToString::to_string).collect();
    let constants: Option<Vec<String>> = bilinear_constants(&sys)
        .ok()
        .map(|c| c.iter().map(ToString::to_string).collect());
    let constraint = sys.constraint.as_ref().map(ToString::to_string);
    Ok(match args.format {
        Format::Json => json(&serde_json::json!({
            "type": sys.cartan_type.to_string(),
            "tau": taus,
            "a0": constants,
            "constraint": constraint,
        })),
        Format::Text => {
            let mut s = String::new();
            for (k, t) in taus.iter().enumerate() {
                let _ = writeln!(s, "tau_{} = {t}", k + 1);
            }
            if let Some(c) = constants {
                let _ = writeln!(s, "a0 = [{}]", c.join(", "));
            }
            if let Some(c) = constraint {
                let _ = writeln!(s, "constraint: {c} = 0");
            }
            s
        }
        _ => {
            return Err(Failure::Domain(
                "tau-functions have json or text output".into(),
            ))
        }
    })
}

#[derive(Serialize)]
struct RowJson {
    l: usize,
    degree: usize,
    real_roots: usize,
    components: usize,
}

fn divisor(args: &DivisorArgs) -> Outcome {
    let ranks: Vec<usize> = match args.rank {
        Some(l) => vec![l],
        None => (2..=args.max_rank).collect(),
    };
    let rows = ranks
        .into_iter()
        .map(component_row)
        .collect::<Result<Vec<ComponentRow>, Error>>()?;
    Ok(match args.format {
        Format::Csv => {
            let mut s = format!("{}\n", ComponentRow::CSV_HEADER);
            for r in &rows {
                let _ = writeln!(s, "{}", r.csv());
            }
            s
        }
        Format::Json => {
            let list: Vec<RowJson> = rows
                .iter()
                .map(|r| RowJson {
                    l: r.l,
                    degree: r.degree,
                    real_roots: r.real_roots,
                    components: r.components,
                })
                .collect();
            json(&list)
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "l={}: degree {}, {} real roots, {} components",
                    r.l, r.degree, r.real_roots, r.components
                );
            }
            s
        }
        Format::Dot => {
            return Err(Failure::Domain(
                "divisor rows have csv, json or text output".into(),
            ))
        }
    })
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Domain(format!("{what}: cannot parse {x:?}")))
        })
        .collect()
}

fn simulate(args: &SimulateArgs) -> Outcome {
    let ct = args.ty.cartan_type()?;
    let state = match &args.from_tau {
        Some(times) => {
            let point = parse_list(times, "--from-tau")?;
            let sys = tau_system(ct.family, ct.rank)?;
            let a0 = to_f64(&bilinear_constants(&sys)?);
            let needed = sys.times.iter().max().map_or(1, |m| m + 1);
            if point.len() < needed {
                return Err(Failure::Domain(format!("--from-tau needs {needed} times")));
            }
            let p = toda_solution_at(&sys, &a0, &point)?;
            TodaState::new(p.a, p.b, point[0])
        }
        None => {
            let a = parse_list(args.a.as_deref().unwrap_or_default(), "--a")?;
            let b = parse_list(args.b.as_deref().unwrap_or_default(), "--b")?;
            if a.len() != ct.rank || b.len() != ct.rank {
                return Err(Failure::Domain(format!(
                    "--a and --b need {} values each",
                    ct.rank
                )));
            }
            TodaState::new(a, b, args.t0)
        }
    };
    let traj = integrate(&ct.cartan_matrix(), &state, args.t_end, args.dt)?;
    Ok(traj.thinned(args.every).to_csv())
}

fn verify(args: &VerifyArgs) -> Outcome {
    let Suite::Paper = args.suite;
    let ids: Vec<u8> = if args.only.is_empty() {
        (1..=12).collect()
    } else {
        args.only.clone()
    };
    let budget = budget_from_env();
    let mut s = String::new();
    let mut failed = 0;
    for id in ids {
        let r = run(id, budget);
        failed += usize::from(!r.passed);
        let _ = writeln!(s, "{r}");
    }
    if failed > 0 {
        Err(Failure::Verification(s))
    } else {
        Ok(s)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Homology(a) => groups(a, false),
        Command::Cohomology(a) => groups(a, true),
        Command::Incidence(a) => incidence(a),
        Command::Graph(a) => graph(a),
        Command::Tau(a) => tau(a),
        Command::Divisor(a) => divisor(a),
        Command::Simulate(a) => simulate(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(text) => match emit(&cli.out, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(report)) => {
            let _ = emit(&cli.out, &report);
            eprintln!("verification failed");
            ExitCode::from(2)
        }
    }
}
