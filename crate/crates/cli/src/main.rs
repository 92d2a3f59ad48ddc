//! `spairs`: batch front end over the standard-pairs engine.
//!
//! Output is JSON with sorted keys unless `--dot` is given. Exit status is 0 on success,
//! 1 on a domain error and 2 on a usage error, including unreadable input files.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use standard_pairs::family23::{build_graph23, revert, Pair23Json};
use standard_pairs::field::{Field, FieldSpec, PrimeField, Rationals};
use standard_pairs::moves::{
    applicable_links, apply_link, fibered_resolution, reversion_links, reversion_resolution,
    reversion_transform,
};
use standard_pairs::plane::{
    compose_factors, jung_factorize, plane_generation_verdict, plane_graph, to_move_word, Factor,
    FactorKind, PolyAutJson,
};
use standard_pairs::uvp::{
    apply, check_relation, classify, compute_sp, coords_to_strings, normal_form, uvp_graph,
    GenJson, SurfaceJson,
};
use standard_pairs::{
    ElementaryLink, FibrationGraph, GenerationVerdict, MarkedZigzag, MoveWord, PolyAut, SurfaceUvp,
    UvpGen, ZigzagType,
};

/// A malformed invocation or input file; exits with status 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

#[derive(Parser)]
#[command(
    name = "spairs",
    version,
    about = "Standard pairs, reversions and fibration graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zigzag types.
    #[command(subcommand)]
    Zigzag(ZigzagCmd),
    /// Elementary links on marked zigzags.
    #[command(subcommand)]
    Link(LinkCmd),
    /// Reversions of 1-standard types.
    #[command(subcommand)]
    Reversion(ReversionCmd),
    /// Fibered modifications.
    #[command(subcommand)]
    Fibered(FiberedCmd),
    /// Words of moves.
    #[command(subcommand)]
    Word(WordCmd),
    /// Fibration graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Polynomial automorphisms of the affine plane.
    #[command(subcommand)]
    Plane(PlaneCmd),
    /// The surfaces uv = P(w).
    #[command(subcommand)]
    Uvp(UvpCmd),
    /// The (0,-1,-2,-3) and (0,-1,-3,-2) families.
    #[command(subcommand)]
    Family23(Family23Cmd),
}

#[derive(Args)]
struct TypeArg {
    /// Comma-separated weights, e.g. 0,-1,-2,-3.
    #[arg(long = "type", value_name = "TYPE", value_parser = parse_type, allow_hyphen_values = true)]
    ty: ZigzagType,
}

#[derive(Args)]
struct FileArg {
    /// JSON input file.
    #[arg(long)]
    file: PathBuf,
}

#[derive(Subcommand)]
enum ZigzagCmd {
    /// Report whether the type is 1-standard and how it is marked.
    Check(TypeArg),
    /// Print the type obtained by a reversion.
    Reverse(TypeArg),
}

#[derive(Subcommand)]
enum LinkCmd {
    /// Apply links from a file, starting from `--type` or the file's `start`.
    Apply {
        #[arg(long = "type", value_name = "TYPE", value_parser = parse_type, allow_hyphen_values = true)]
        ty: Option<ZigzagType>,
        #[arg(long)]
        file: PathBuf,
    },
    /// List the links applicable to a type.
    List(TypeArg),
}

#[derive(Subcommand)]
enum ReversionCmd {
    /// The elementary links of a reversion.
    Decompose(TypeArg),
    /// The resolution graph of a reversion.
    Resolve {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand)]
enum FiberedCmd {
    /// The resolution graph of a fibered modification of degree `--degree`.
    Resolve {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand)]
enum WordCmd {
    /// Reduce a word to minimal form.
    Reduce(FileArg),
    /// The type after each move.
    Trace(FileArg),
    /// Whether a word is minimal.
    Minimal(FileArg),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Family23,
    Uvp,
    Plane,
}

#[derive(Args)]
struct GraphSource {
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// `Q` or `F<p>`.
    #[arg(long, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// `deg P` for the uvp family.
    #[arg(long)]
    degree: Option<u32>,
    /// Comma-separated parameters `a` for family23 over Q.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Build the fibration graph of a family.
    Build {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        dot: bool,
    },
    /// Cycle rank, tree test and generation verdict of a graph.
    Rank {
        #[command(flatten)]
        source: GraphSource,
        /// A graph emitted by `graph build`.
        #[arg(long, conflicts_with = "family")]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PlaneCmd {
    /// Compose a list of maps, applied in order.
    Compose(FileArg),
    /// Factor a map into alternating affine and triangular factors.
    Factorize(FileArg),
}

#[derive(Subcommand)]
enum UvpCmd {
    /// Coordinate images of a word.
    Apply(FileArg),
    /// The constant kappa with u'v' - P(w') = kappa (uv - P(w)).
    Relation(FileArg),
    /// The group of (a, b, c) with P(aw + b) = c P(w).
    Sp(FileArg),
    /// Whether two surfaces are isomorphic.
    Classify(FileArg),
    /// Alternating normal form of a word.
    Normalform(FileArg),
}

#[derive(Subcommand)]
enum Family23Cmd {
    /// Revert a pair at the center `--lambda`.
    Revert {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// The fibration graph of the family.
    Graph {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        #[arg(long)]
        dot: bool,
    },
}

fn parse_type(s: &str) -> std::result::Result<ZigzagType, String> {
    s.parse().map_err(|e: standard_pairs::Error| e.to_string())
}

fn parse_field(s: &str) -> std::result::Result<FieldSpec, String> {
    s.parse().map_err(|e: standard_pairs::Error| e.to_string())
}

/// Binds `$f` to the field named by `$spec` and evaluates `$body`.
macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $spec {
            FieldSpec::Q => {
                let $f = &Rationals;
                $body
            }
            FieldSpec::Fp(p) => {
                let $f = &PrimeField::new(p)?;
                $body
            }
        }
    };
}

enum Output {
    Json(Value),
    Text(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match run(cli.command) {
        Ok(Output::Json(v)) => serde_json::to_string_pretty(&v).expect("values serialize"),
        Ok(Output::Text(s)) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            };
        }
    };
    let mut out = io::stdout().lock();
    let written = out.write_all(text.as_bytes()).and_then(|()| {
        if text.ends_with('\n') {
            Ok(())
        } else {
            out.write_all(b"\n")
        }
    });
    match written {
        // A closed reader such as `head` is not an error.
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            eprintln!("error: writing output: {e}");
            ExitCode::from(1)
        }
        _ => ExitCode::SUCCESS,
    }
}

fn run(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Zigzag(c) => zigzag(c),
        Command::Link(c) => link(c),
        Command::Reversion(c) => reversion(c),
        Command::Fibered(c) => fibered(c),
        Command::Word(c) => word(c),
        Command::Graph(c) => graph(c),
        Command::Plane(c) => plane(c),
        Command::Uvp(c) => uvp(c),
        Command::Family23(c) => family23(c),
    }
}

fn to_value(x: impl serde::Serialize) -> Value {
    serde_json::to_value(x).expect("engine types serialize")
}

fn read_json(path: &Path) -> Result<Value> {
    let text =
        fs::read_to_string(path).map_err(|e| usage(format!("--file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("--file {}: {e}", path.display())))
}

fn decode<T: DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| usage(format!("--file: invalid {what}: {e}")))
}

fn weights_str(t: &ZigzagType) -> String {
    let parts: Vec<String> = t.weights().iter().map(ToString::to_string).collect();
    parts.join(",")
}

fn zigzag(cmd: ZigzagCmd) -> Result<Output> {
    match cmd {
        ZigzagCmd::Check(TypeArg { ty }) => {
            let tail = ty.tail().ok().map(<[i64]>::to_vec);
            let marked = MarkedZigzag::infer(ty.weights().to_vec()).ok().map(|z| {
                json!({
                    "zigzag": to_value(&z),
                    "almost_standard": z.validate_almost_standard(),
                })
            });
            Ok(Output::Json(json!({
                "type": to_value(&ty),
                "one_standard": ty.is_one_standard(),
                "tail": tail,
                "marked": marked,
            })))
        }
        ZigzagCmd::Reverse(TypeArg { ty }) => {
            Ok(Output::Text(weights_str(&reversion_transform(&ty)?)))
        }
    }
}

/// A single link, a list of links, or an object with `links` and an optional `start`.
fn read_links(v: Value) -> Result<(Option<MarkedZigzag>, Vec<ElementaryLink>)> {
    match v {
        Value::Array(_) => Ok((None, decode(v, "link list")?)),
        Value::Object(ref o) if o.contains_key("links") => {
            let start = o
                .get("start")
                .cloned()
                .map(|s| decode(s, "start zigzag"))
                .transpose()?;
            Ok((start, decode(o["links"].clone(), "link list")?))
        }
        _ => Ok((None, vec![decode(v, "link")?])),
    }
}

fn link(cmd: LinkCmd) -> Result<Output> {
    match cmd {
        LinkCmd::Apply { ty, file } => {
            let (start, links) = read_links(read_json(&file)?)?;
            let mut z = match (ty, start) {
                (Some(t), _) => MarkedZigzag::infer(t.weights().to_vec())?,
                (None, Some(z)) => z,
                (None, None) => {
                    return Err(usage("--type is required unless the file has a start"))
                }
            };
            let mut steps = Vec::with_capacity(links.len());
            for l in &links {
                let out = apply_link(&z, l).with_context(|| format!("applying {l}"))?;
                z = out.zigzag.clone();
                steps.push(to_value(&out));
            }
            Ok(Output::Json(
                json!({ "steps": steps, "final": to_value(&z) }),
            ))
        }
        LinkCmd::List(TypeArg { ty }) => {
            let z = MarkedZigzag::infer(ty.weights().to_vec())?;
            Ok(Output::Json(to_value(applicable_links(&z))))
        }
    }
}

fn reversion(cmd: ReversionCmd) -> Result<Output> {
    match cmd {
        ReversionCmd::Decompose(TypeArg { ty }) => {
            let links = reversion_links(&ty)?;
            let start = ty.reverse();
            let n = start.len();
            let start = MarkedZigzag::new(start.weights().to_vec(), n - 1, Some(n - 2))?;
            Ok(Output::Json(json!({
                "start": to_value(&start),
                "links": to_value(&links),
                "final": to_value(reversion_transform(&ty)?),
            })))
        }
        ReversionCmd::Resolve { ty, dot } => {
            let res = reversion_resolution(&ty.ty)?;
            if dot {
                return Ok(Output::Text(res.graph.to_dot()));
            }
            Ok(Output::Json(json!({
                "graph": to_value(&res.graph),
                "left": res.left,
                "right": res.right,
            })))
        }
    }
}

fn fibered(cmd: FiberedCmd) -> Result<Output> {
    let FiberedCmd::Resolve { ty, degree, dot } = cmd;
    let res = fibered_resolution(degree, ty.ty.tail()?)?;
    if dot {
        return Ok(Output::Text(res.graph.to_dot()));
    }
    Ok(Output::Json(json!({
        "graph": to_value(&res.graph),
        "e": res.e,
        "c": res.c,
        "middle": res.middle,
        "h": res.h,
        "h_prime": res.h_prime,
        "f": res.f,
        "f_prime": res.f_prime,
    })))
}

fn word(cmd: WordCmd) -> Result<Output> {
    let (file, kind) = match &cmd {
        WordCmd::Reduce(f) | WordCmd::Trace(f) | WordCmd::Minimal(f) => (&f.file, &cmd),
    };
    let w: MoveWord = decode(read_json(file)?, "move word")?;
    Ok(Output::Json(match kind {
        WordCmd::Reduce(_) => to_value(w.reduce()),
        WordCmd::Trace(_) => json!({
            "base": to_value(w.base()),
            "types": to_value(w.type_trace()),
            "final": to_value(w.final_type()),
        }),
        WordCmd::Minimal(_) => json!({ "minimal": w.is_minimal(), "length": w.len() }),
    }))
}

fn parse_params<F: Field>(field: &F, params: Option<&str>) -> Result<Option<Vec<F::Elem>>> {
    params
        .map(|s| {
            s.split(',')
                .map(|x| {
                    field
                        .parse_elem(x.trim())
                        .map_err(|e| usage(format!("--params: {e}")))
                })
                .collect()
        })
        .transpose()
}

fn family23_graph(spec: FieldSpec, params: Option<&str>) -> Result<FibrationGraph> {
    with_field!(spec, f => {
        let ps = parse_params(f, params)?;
        Ok(build_graph23(f, ps.as_deref())?)
    })
}

/// The graph of a family, with the verdict for the family (certified for the plane).
fn build_family(src: &GraphSource) -> Result<(FibrationGraph, GenerationVerdict)> {
    let family = src.family.ok_or_else(|| usage("--family is required"))?;
    let field = src.field.unwrap_or(FieldSpec::Q);
    match family {
        Family::Family23 => {
            let g = family23_graph(field, src.params.as_deref())?;
            let v = g.generation_verdict()?;
            Ok((g, v))
        }
        Family::Uvp => {
            let n = src
                .degree
                .ok_or_else(|| usage("--degree is required for --family uvp"))?;
            with_field!(field, f => {
                let s = SurfaceUvp::parse(f, &format!("w^{n} - 1"))?;
                let g = uvp_graph(&s)?;
                let v = g.generation_verdict()?;
                Ok((g, v))
            })
        }
        Family::Plane => {
            let v = with_field!(field, f => plane_generation_verdict(f)?);
            Ok((plane_graph(), v))
        }
    }
}

fn graph_summary(g: &FibrationGraph, verdict: GenerationVerdict) -> Result<Value> {
    Ok(json!({
        "vertices": g.vertex_count(),
        "geometric_edges": g.geometric_edge_count(),
        "connected": g.is_connected(),
        "cycle_rank": g.cycle_rank()?,
        "is_tree": g.is_tree()?,
        "hypothesis": g.hypothesis(),
        "verdict": to_value(verdict),
    }))
}

fn graph(cmd: GraphCmd) -> Result<Output> {
    match cmd {
        GraphCmd::Build { source, dot } => {
            let (g, _) = build_family(&source)?;
            Ok(if dot {
                Output::Text(g.to_dot())
            } else {
                Output::Json(to_value(&g))
            })
        }
        GraphCmd::Rank { source, file } => {
            let (g, v) = match file {
                Some(path) => {
                    let g: FibrationGraph = decode(read_json(&path)?, "fibration graph")?;
                    let v = g.generation_verdict()?;
                    (g, v)
                }
                None => build_family(&source)?,
            };
            Ok(Output::Json(graph_summary(&g, v)?))
        }
    }
}

fn field_of(v: &Value) -> Result<FieldSpec> {
    let f = v
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| usage("--file: missing \"field\""))?;
    f.parse().map_err(|e| usage(format!("--file: {e}")))
}

/// A map as sparse JSON, or as `{"field", "f1", "f2"}` with polynomial strings such as
/// `"y + x^2"`. A factor object `{"kind", "map"}` contributes its map.
fn read_map<F: Field>(field: &F, v: &Value) -> Result<PolyAut<F>> {
    if let Some(m) = v.get("map") {
        return read_map(field, m);
    }
    if let (Some(f1), Some(f2)) = (
        v.get("f1").and_then(Value::as_str),
        v.get("f2").and_then(Value::as_str),
    ) {
        return Ok(PolyAut::parse(field, f1, f2)?);
    }
    let j: PolyAutJson = decode(v.clone(), "map")?;
    Ok(PolyAut::from_json(field, &j)?)
}

fn factor_json<F: Field>(f: &Factor<F>) -> Value {
    json!({ "kind": to_value(f.kind), "map": to_value(f.map.to_json()) })
}

fn plane(cmd: PlaneCmd) -> Result<Output> {
    match cmd {
        PlaneCmd::Compose(FileArg { file }) => {
            let v = read_json(&file)?;
            let items: Vec<Value> = match &v {
                Value::Array(xs) => xs.clone(),
                Value::Object(o) if o.contains_key("factors") => match &o["factors"] {
                    Value::Array(xs) => xs.clone(),
                    _ => return Err(usage("--file: \"factors\" must be a list")),
                },
                _ => vec![v.clone()],
            };
            let first = items.first().ok_or_else(|| usage("--file: no maps"))?;
            let spec = field_of(first.get("map").unwrap_or(first))?;
            with_field!(spec, f => {
                let factors = items
                    .iter()
                    .map(|x| Ok(Factor { kind: FactorKind::Affine, map: read_map(f, x)? }))
                    .collect::<Result<Vec<_>>>()?;
                let g = compose_factors(f, &factors)?;
                Ok(Output::Json(to_value(g.to_json())))
            })
        }
        PlaneCmd::Factorize(FileArg { file }) => {
            let v = read_json(&file)?;
            let spec = field_of(&v)?;
            with_field!(spec, f => {
                let g = read_map(f, &v)?;
                let factors = jung_factorize(&g)?;
                Ok(Output::Json(json!({
                    "factors": factors.iter().map(factor_json).collect::<Vec<_>>(),
                    "word": to_value(to_move_word(&factors)?),
                })))
            })
        }
    }
}

/// A surface as `SurfaceJson`, or with `p` given as a polynomial string in `w`.
fn read_surface<F: Field>(field: &F, v: &Value) -> Result<SurfaceUvp<F>> {
    if let Some(p) = v.get("p").and_then(Value::as_str) {
        return Ok(SurfaceUvp::parse(field, p)?);
    }
    let j: SurfaceJson = decode(v.clone(), "surface")?;
    Ok(SurfaceUvp::from_json(field, &j)?)
}

fn read_word<F: Field>(field: &F, v: &Value) -> Result<Vec<UvpGen<F>>> {
    let gens: Vec<GenJson> = decode(
        v.get("word").cloned().unwrap_or(Value::Array(Vec::new())),
        "uvp word",
    )?;
    Ok(gens
        .iter()
        .map(|g| UvpGen::from_json(field, g))
        .collect::<standard_pairs::Result<_>>()?)
}

/// The surface of a request: the `surface` member, or the whole object.
fn surface_value(v: &Value) -> &Value {
    v.get("surface").unwrap_or(v)
}

fn uvp(cmd: UvpCmd) -> Result<Output> {
    let file = match &cmd {
        UvpCmd::Apply(f)
        | UvpCmd::Relation(f)
        | UvpCmd::Sp(f)
        | UvpCmd::Classify(f)
        | UvpCmd::Normalform(f) => f.file.clone(),
    };
    let v = read_json(&file)?;
    if let UvpCmd::Classify(_) = cmd {
        let pair = match v.get("surfaces") {
            Some(Value::Array(xs)) if xs.len() == 2 => xs.clone(),
            _ => return Err(usage("--file: expected \"surfaces\" with two entries")),
        };
        let spec = field_of(&pair[0])?;
        return with_field!(spec, f => {
            let (s1, s2) = (read_surface(f, &pair[0])?, read_surface(f, &pair[1])?);
            Ok(Output::Json(json!({ "isomorphic": classify(&s1, &s2)? })))
        });
    }
    let sv = surface_value(&v);
    let spec = field_of(sv)?;
    with_field!(spec, f => {
        let s = read_surface(f, sv)?;
        let surface = to_value(s.to_json());
        Ok(Output::Json(match cmd {
            UvpCmd::Apply(_) => {
                let [u, vv, w] = coords_to_strings(&apply(&read_word(f, &v)?, &s)?);
                json!({ "surface": surface, "u": u, "v": vv, "w": w })
            }
            UvpCmd::Relation(_) => {
                let k = check_relation(&read_word(f, &v)?, &s)?;
                json!({ "surface": surface, "kappa": k.to_string() })
            }
            UvpCmd::Sp(_) => json!({ "surface": surface, "sp": to_value(compute_sp(&s)?.to_json()) }),
            UvpCmd::Normalform(_) => {
                let nf = normal_form(&read_word(f, &v)?, &s)?;
                json!({
                    "surface": surface,
                    "normal_form": to_value(nf.to_json()),
                    "move_word": to_value(nf.to_move_word(&s)?),
                })
            }
            UvpCmd::Classify(_) => unreachable!("handled above"),
        }))
    })
}

fn family23(cmd: Family23Cmd) -> Result<Output> {
    match cmd {
        Family23Cmd::Revert { file, lambda } => {
            let v = read_json(&file)?;
            let j: Pair23Json = decode(v.get("pair").unwrap_or(&v).clone(), "pair")?;
            with_field!(j.field, f => {
                let p = standard_pairs::Pair23::from_json(f, &j)?;
                let l = f.parse_elem(&lambda).map_err(|e| usage(format!("--lambda: {e}")))?;
                let (q, range) = revert(f, &p, &l)?;
                Ok(Output::Json(json!({
                    "pair": to_value(q.to_json(f)),
                    "inverse_centers": to_value(range.to_json()),
                })))
            })
        }
        Family23Cmd::Graph { field, params, dot } => {
            let g = family23_graph(field, params.as_deref())?;
            Ok(if dot {
                Output::Text(g.to_dot())
            } else {
                Output::Json(to_value(&g))
            })
        }
    }
}
