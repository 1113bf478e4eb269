//! `dgal`: differential Galois groups of `Y' = A Y` over `Q(t)`.

use clap::{Args, Parser, Subcommand};
use dgal_core::algebra::parse::parse_ratfunc;
use dgal_core::bounds::{named_bounds, BoundConfig};
use dgal_core::groups::{characters_generators, identity_component};
use dgal_core::ode::{OdeSystem, SystemDoc};
use dgal_core::pipeline::{choose_point, galois_group, proto_galois, DegreeMode, PipelineConfig};
use dgal_core::relations::{relation_ideal, OrderStrategy, RelationConfig};
use dgal_core::{DgalError, Nf};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dgal", version, about = "Differential Galois groups of Y' = A Y over Q(t), in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the degree-bound tower: exact where small, log2 brackets otherwise.
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Largest exact value to materialize, in bits.
        #[arg(long)]
        exact_bit_cap: Option<u64>,
    },
    /// Fundamental matrix normalized to the identity at the point.
    Series {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Basis of the polynomial relations of degree <= d among the solution entries.
    Relations {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rel: RelArgs,
    },
    /// Stabilizer of the relation ideal, with verified group axioms.
    Protogroup {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rel: RelArgs,
    },
    /// Characters of the identity component of the proto-Galois group.
    Characters {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rel: RelArgs,
        /// Degree of the character ansatz.
        #[arg(long, default_value_t = 2)]
        character_degree: u32,
    },
    /// The Galois group, relative to an explicit relation degree.
    Galois {
        #[command(flatten)]
        input: Input,
        /// Without this the full degree bound applies, which cannot be executed.
        #[arg(long)]
        degree_override: Option<u32>,
        #[command(flatten)]
        order: OrderArgs,
    },
}

#[derive(Args)]
struct Input {
    /// System document: {"n": .., "entries": [[..]], "minpoly": ..}
    #[arg(long)]
    system: PathBuf,
    /// Regular base point; defaults to the first regular one of 1, 2, 3, -1, ...
    #[arg(long)]
    point: Option<String>,
}

#[derive(Args)]
struct RelArgs {
    #[arg(long, default_value_t = 2)]
    degree: u32,
    #[command(flatten)]
    order: OrderArgs,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long, default_value_t = 1)]
    coeff_degree: usize,
    /// Fixed truncation order; the result is then marked rigorous.
    #[arg(long, conflicts_with = "stabilize")]
    order: Option<usize>,
    /// Stabilization window for the heuristic order.
    #[arg(long)]
    stabilize: Option<usize>,
}

impl OrderArgs {
    fn strategy(&self) -> OrderStrategy {
        match self.order {
            Some(n) => OrderStrategy::Explicit(n),
            None => OrderStrategy::Stabilize { window: self.stabilize },
        }
    }
}

fn load(input: &Input) -> Result<(OdeSystem, Nf), DgalError> {
    let text = std::fs::read_to_string(&input.system)
        .map_err(|e| DgalError::Invalid(format!("{}: {e}", input.system.display())))?;
    let doc: SystemDoc = serde_json::from_str(&text).map_err(|e| DgalError::Invalid(format!("system document: {e}")))?;
    let sys = OdeSystem::from_doc(&doc)?;
    let point = match &input.point {
        Some(s) => parse_ratfunc(s, sys.field())?
            .as_constant()
            .ok_or_else(|| DgalError::Invalid(format!("point `{s}` is not a constant")))?,
        None => choose_point(&sys),
    };
    sys.check_regular(&point)?;
    Ok((sys, point))
}

fn pipeline_config(point: Nf, degree: DegreeMode, order: &OrderArgs) -> PipelineConfig {
    PipelineConfig { degree, point: Some(point), coeff_degree: order.coeff_degree, strategy: order.strategy(), ..PipelineConfig::with_degree(1) }
}

fn run(command: Command) -> Result<Value, DgalError> {
    match command {
        Command::Bounds { n, d, exact_bit_cap } => {
            let mut cfg = BoundConfig::default();
            if let Some(b) = exact_bit_cap {
                cfg.exact_bit_cap = b;
            }
            let rows: Result<Vec<Value>, DgalError> = named_bounds(n, d)
                .into_iter()
                .map(|(name, expr)| {
                    let ev = expr.evaluate(&cfg).map_err(|e| DgalError::Invalid(e.to_string()))?;
                    Ok(json!({
                        "name": name,
                        "expr": expr.to_string(),
                        "exact": ev.exact.as_ref().map(|v| v.to_string()),
                        "log2_bracket": ev.bracket.log2_bounds(),
                        "value": ev.to_string(),
                    }))
                })
                .collect();
            Ok(json!({ "n": n, "d": d, "bounds": rows? }))
        }
        Command::Series { input, order } => {
            let (sys, point) = load(&input)?;
            let s = sys.fundamental_series(&point, order)?;
            let coeffs: Vec<Vec<Vec<String>>> =
                s.coeffs.iter().map(|m| m.to_rows().iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()).collect();
            Ok(json!({ "point": point.to_string(), "order": order, "coefficients": coeffs }))
        }
        Command::Relations { input, rel } => {
            let (sys, point) = load(&input)?;
            let cfg = RelationConfig::new(rel.degree).with_coeff_degree(rel.order.coeff_degree).with_strategy(rel.order.strategy());
            let ideal = relation_ideal(&sys, &point, &cfg)?;
            Ok(json!({
                "point": point.to_string(),
                "degree": rel.degree,
                "order": ideal.bound.order,
                "rigorous": ideal.bound.rigorous,
                "basis": ideal.render(),
            }))
        }
        Command::Protogroup { input, rel } => {
            let (sys, point) = load(&input)?;
            let proto = proto_galois(&sys, &pipeline_config(point, DegreeMode::Override(rel.degree), &rel.order))?;
            Ok(json!({
                "point": proto.point.to_string(),
                "degree": rel.degree,
                "rigorous": proto.relations.bound.rigorous,
                "relations": proto.relations.render(),
                "group": proto.group.to_doc(),
            }))
        }
        Command::Characters { input, rel, character_degree } => {
            let (sys, point) = load(&input)?;
            let cfg = pipeline_config(point, DegreeMode::Override(rel.degree), &rel.order);
            let proto = proto_galois(&sys, &cfg)?;
            let ic = identity_component(&proto.group, &cfg.gb)?;
            let chars = characters_generators(&ic.group, character_degree, &cfg.gb)?;
            Ok(json!({
                "identity_component": ic.group.to_doc(),
                "field": (!chars.field.is_rationals()).then(|| chars.field.minpoly().render("g")),
                "rank": chars.rank,
                "generators": chars.generators.iter().map(|c| c.render()).collect::<Vec<_>>(),
                "all": chars.all.iter().map(|c| c.render()).collect::<Vec<_>>(),
            }))
        }
        Command::Galois { input, degree_override, order } => {
            let (sys, point) = load(&input)?;
            let degree = degree_override.map_or(DegreeMode::FullBound, DegreeMode::Override);
            let g = galois_group(&sys, &pipeline_config(point, degree, &order))?;
            Ok(serde_json::to_value(&g).expect("serializable"))
        }
    }
}

fn exit_code(e: &DgalError) -> u8 {
    match e {
        DgalError::Unsupported(_) | DgalError::BoundNotExecutable { .. } => 2,
        DgalError::Singular { .. } => 4,
        e if e.is_resource_cap() => 3,
        _ => 1,
    }
}

// a closed pipe (`| head`) is not an error worth a panic
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(doc) => {
            emit(&serde_json::to_string_pretty(&doc).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let DgalError::BoundNotExecutable { tower } = &e {
                eprintln!("refusing to run with the full proto-Galois degree bound; pass --degree-override D");
                emit(tower);
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
