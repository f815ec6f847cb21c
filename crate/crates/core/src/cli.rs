//! Command implementations behind the `ribbon` binary.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::complex::{
    automorphism_report, enumerate_cells, orbifold_euler_characteristic, ComplexError, Convention, EnumerateOptions,
};
use crate::config::{parse_rational, Config};
use crate::format::{parse, to_machine, to_text, Document, ErrorKind, GraphDocument, SemistableDocument};
use crate::graph::Point;
use crate::metric::{
    degeneration_family, perimeters, recover_stratification, MetricAssignment, Rational, SemistableConformalStructure,
};
use crate::polytope::{blowup_simplex_with, BlowupFiltration, DepthSchedule};
use crate::semistable::{from_permissible, to_primitive, PermissibleSequence};
use crate::subsets::{classify_subset, max_semistable, quotient, EdgeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "ribbon", about = "Ribbon graphs, semistable ribbon graphs and blown-up simplices")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: OutputFormat,
    /// TOML file with enumeration caps and thresholds.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Full,
    EdgeImage,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a document.
    Validate { file: PathBuf },
    /// Type, cusps and automorphism orders.
    Info { file: PathBuf },
    /// Swap vertices and boundary cycles.
    Dual { file: PathBuf },
    /// Collapse the edges through the given half-edges.
    Collapse {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        edges: Vec<String>,
    },
    /// Largest semistable subset of the given edges.
    Sst {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        edges: Vec<String>,
    },
    /// Semistable graph and tangent decoration of a permissible sequence.
    SemistableFrom {
        file: PathBuf,
        /// Stages as `h1,h3;h1`; defaults to the stages in the file.
        #[arg(long)]
        stages: Option<String>,
    },
    /// Primitive graph and stages of a decorated semistable graph.
    PrimitiveFrom { file: PathBuf },
    /// Half the length of each boundary cycle.
    Perimeters { file: PathBuf },
    /// Metric `t^k l_k` from a staged metric.
    Degenerate {
        file: PathBuf,
        #[arg(long)]
        t: Option<String>,
    },
    /// Stages and stage metrics read off a metric.
    Recover {
        file: PathBuf,
        #[arg(long)]
        theta: Option<String>,
    },
    /// Orbicells of a given type.
    Enumerate {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        labels: usize,
        #[arg(long, default_value_t = 3)]
        min_valence: usize,
        #[arg(long)]
        compactified: bool,
        #[arg(long)]
        decorated: bool,
        #[arg(long)]
        max_half_edges: Option<usize>,
        #[arg(long)]
        naive: bool,
    },
    /// Orbifold Euler characteristic of the open cells.
    EulerChar {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        labels: usize,
        #[arg(long, default_value_t = 3)]
        min_valence: usize,
        #[arg(long, value_enum, default_value = "full")]
        convention: ConventionArg,
        #[arg(long)]
        max_half_edges: Option<usize>,
    },
    /// Truncate a simplex along a face filtration.
    BlowupSimplex {
        #[arg(long)]
        n: usize,
        /// `all`, `none`, or faces as `1,2;2,3`.
        #[arg(long, default_value = "all")]
        subsets: String,
        #[arg(long)]
        depth_scale: Option<String>,
    },
}

/// A failed command with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn validation(message: impl ToString) -> Self {
        Self { code: 1, message: message.to_string() }
    }

    fn syntax(message: impl ToString) -> Self {
        Self { code: 2, message: message.to_string() }
    }
}

struct Ctx {
    format: OutputFormat,
    config: Config,
}

impl Ctx {
    fn emit(&self, text: String, machine: serde_json::Value) -> String {
        match self.format {
            OutputFormat::Text => text,
            OutputFormat::Machine => serde_json::to_string_pretty(&machine).expect("json") + "\n",
        }
    }

    fn document(&self, doc: &Document) -> String {
        match self.format {
            OutputFormat::Text => to_text(doc),
            OutputFormat::Machine => to_machine(doc) + "\n",
        }
    }

    fn rational(&self, flag: Option<&str>, configured: Option<&str>, fallback: &str) -> Result<Rational, Failure> {
        let text = flag.or(configured).unwrap_or(fallback);
        parse_rational(text).ok_or_else(|| Failure::syntax(format!("'{text}' is not a rational p/q")))
    }
}

fn read(file: &PathBuf) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::validation(format!("{}: {e}", file.display())))?;
    parse(&text).map_err(|e| {
        let message = format!("{}:{e}", file.display());
        match e.kind {
            ErrorKind::Syntax => Failure::syntax(message),
            ErrorKind::Validation => Failure::validation(message),
        }
    })
}

fn read_graph(file: &PathBuf) -> Result<GraphDocument, Failure> {
    match read(file)? {
        Document::Graph(g) => Ok(g),
        Document::Semistable(_) => Err(Failure::validation("expected a graph document, found a semistable one")),
    }
}

fn edge_set(doc: &GraphDocument, names: &[String]) -> Result<EdgeSet, Failure> {
    let index = doc.graph.edge_index();
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| {
            doc.names
                .iter()
                .position(|x| x == n)
                .map(|h| index[h])
                .ok_or_else(|| Failure::validation(format!("unknown half-edge '{n}'")))
        })
        .collect()
}

fn edge_names(doc: &GraphDocument, z: &EdgeSet) -> Vec<String> {
    let edges = doc.graph.edges();
    z.iter().map(|&e| doc.names[edges[e][0]].clone()).collect()
}

fn sequence(doc: &GraphDocument) -> Result<PermissibleSequence, Failure> {
    PermissibleSequence::new(doc.graph.clone(), doc.labels.clone(), doc.stages.clone()).map_err(Failure::validation)
}

fn structure(doc: &GraphDocument) -> Result<SemistableConformalStructure, Failure> {
    let seq = sequence(doc)?;
    let lengths = doc.lengths.as_ref().ok_or_else(|| Failure::validation("document has no lengths"))?;
    let stage_lengths = (0..=seq.depth())
        .map(|k| seq.stage(k).difference(&seq.stage(k + 1)).map(|&e| (e, lengths[e].clone())).collect())
        .collect();
    SemistableConformalStructure::new(seq, stage_lengths).map_err(Failure::validation)
}

fn infeasible(e: ComplexError) -> Failure {
    Failure { code: 3, message: e.to_string() }
}

fn point_name(p: Point, names: &[String]) -> String {
    match p {
        Point::Vertex(h) => format!("vertex {}", names[h]),
        Point::Cusp(h) => format!("cusp {}", names[h]),
        Point::CircleSide(s) => format!("side {s}"),
    }
}

fn parse_filtration(n: usize, subsets: &str) -> Result<BlowupFiltration, Failure> {
    let list: Vec<BTreeSet<usize>> = match subsets {
        "all" => return BlowupFiltration::full(n).map(|f| f.0).map_err(Failure::validation),
        "none" => Vec::new(),
        _ => subsets
            .split(';')
            .map(|face| {
                face.split(',')
                    .map(|i| i.trim().parse::<usize>().map_err(|_| Failure::syntax(format!("bad face '{face}'"))))
                    .collect()
            })
            .collect::<Result<_, _>>()?,
    };
    Ok(BlowupFiltration::new(n, list).map_err(Failure::validation)?.0)
}

/// Runs one command and returns its standard output.
pub fn run(cli: Cli) -> Result<String, Failure> {
    let config = match &cli.config {
        None => Config::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::validation(e.to_string()))?;
            Config::from_toml(&text).map_err(|e| Failure::syntax(e.to_string()))?
        }
    };
    let ctx = Ctx { format: cli.format, config };
    match cli.command {
        Command::Validate { file } => {
            let doc = read(&file)?;
            let (kind, detail) = match &doc {
                Document::Graph(g) => ("graph", format!("{} half-edges", g.graph.half_edge_count())),
                Document::Semistable(s) => ("semistable", format!("{} components", s.semistable.components.len())),
            };
            Ok(ctx.emit(format!("ok: {kind}, {detail}\n"), json!({"valid": true, "kind": kind})))
        }
        Command::Info { file } => match read(&file)? {
            Document::Graph(g) => {
                let ty = g.graph.topological_type();
                let aut = automorphism_report(&g.graph, &g.labels);
                let cusps = g.graph.cusp_count();
                let text = format!(
                    "type ({},{}), {cusps} cusp{}, aut {}/{}\n",
                    ty.genus,
                    g.labels.len(),
                    if cusps == 1 { "" } else { "s" },
                    aut.full_order,
                    aut.edge_image_order
                );
                Ok(ctx.emit(
                    text,
                    json!({
                        "genus": ty.genus, "labels": g.labels.len(), "cusps": cusps,
                        "vertices": g.graph.vertex_count(), "edges": g.graph.edge_count(),
                        "aut_full": aut.full_order, "aut_edge_image": aut.edge_image_order,
                    }),
                ))
            }
            Document::Semistable(s) => {
                let depth = s.semistable.order.max_order().unwrap_or(0);
                let n = s.semistable.components.len();
                let text = format!("semistable, {n} components, depth {depth}, {} labels\n", s.semistable.labels.len());
                Ok(ctx.emit(text, json!({"components": n, "depth": depth, "labels": s.semistable.labels.len()})))
            }
        },
        Command::Dual { file } => {
            let g = read_graph(&file)?;
            let labels = g.labels.map_points(|p| {
                Some(match p {
                    Point::Vertex(h) => Point::Cusp(h),
                    Point::Cusp(h) => Point::Vertex(h),
                    side => side,
                })
            });
            let doc = GraphDocument { names: g.names, graph: g.graph.dual(), labels, stages: Vec::new(), lengths: None };
            Ok(ctx.document(&Document::Graph(doc)))
        }
        Command::Collapse { file, edges } => {
            let g = read_graph(&file)?;
            let z = edge_set(&g, &edges)?;
            let q = quotient(&g.graph, &g.labels, &z).map_err(Failure::validation)?;
            let names = q.induced.half_edges.iter().map(|&h| g.names[h].clone()).collect();
            let doc = GraphDocument { names, graph: q.induced.graph, labels: q.labels, stages: Vec::new(), lengths: None };
            Ok(ctx.document(&Document::Graph(doc)))
        }
        Command::Sst { file, edges } => {
            let g = read_graph(&file)?;
            let z = edge_set(&g, &edges)?;
            let class = classify_subset(&g.graph, &g.labels, &z).map_err(Failure::validation)?;
            let core = max_semistable(&g.graph, &g.labels, &z).map_err(Failure::validation)?;
            let names = edge_names(&g, &core);
            let text = format!("class: {class:?}\nsemistable core: {}\n", names.join(" ")).to_lowercase();
            Ok(ctx.emit(text, json!({"class": format!("{class:?}").to_lowercase(), "core": names})))
        }
        Command::SemistableFrom { file, stages } => {
            let mut g = read_graph(&file)?;
            if let Some(spec) = stages {
                g.stages = spec
                    .split(';')
                    .map(|z| edge_set(&g, &z.split(',').map(str::to_string).collect::<Vec<_>>()))
                    .collect::<Result<_, _>>()?;
            }
            let seq = sequence(&g)?;
            let (s, t) = from_permissible(&seq).map_err(Failure::validation)?;
            Ok(ctx.document(&Document::Semistable(SemistableDocument::from_decorated(s, t, g.names))))
        }
        Command::PrimitiveFrom { file } => {
            let Document::Semistable(d) = read(&file)? else {
                return Err(Failure::validation("expected a semistable document"));
            };
            let t = d.decoration.as_ref().ok_or_else(|| Failure::validation("document has no decoration"))?;
            let seq = to_primitive(&d.semistable, t).map_err(Failure::validation)?;
            let doc = GraphDocument {
                names: d.originals.clone(),
                graph: seq.graph,
                labels: seq.labels,
                stages: seq.stages,
                lengths: None,
            };
            Ok(ctx.document(&Document::Graph(doc)))
        }
        Command::Perimeters { file } => {
            let g = read_graph(&file)?;
            let lengths = g.lengths.as_ref().ok_or_else(|| Failure::validation("document has no lengths"))?;
            let values = perimeters(&g.graph, lengths);
            let mut text = String::new();
            for (p, v) in &values {
                let label = g.labels.label_at(*p).map(|l| format!(" ({l})")).unwrap_or_default();
                text += &format!("{}{label}: {v}\n", point_name(*p, &g.names));
            }
            let machine: Vec<_> =
                values.iter().map(|(p, v)| json!({"point": point_name(*p, &g.names), "perimeter": v.to_string()})).collect();
            Ok(ctx.emit(text, json!(machine)))
        }
        Command::Degenerate { file, t } => {
            let g = read_graph(&file)?;
            let t = ctx.rational(t.as_deref(), ctx.config.metric.t.as_deref(), "1/64")?;
            let x = structure(&g)?;
            let metric = degeneration_family(&x, &t).map_err(Failure::validation)?;
            let doc = GraphDocument { lengths: Some(metric.lengths), stages: Vec::new(), ..g };
            Ok(ctx.document(&Document::Graph(doc)))
        }
        Command::Recover { file, theta } => {
            let g = read_graph(&file)?;
            let theta = ctx.rational(theta.as_deref(), ctx.config.metric.theta.as_deref(), "1/8")?;
            let lengths = g.lengths.clone().ok_or_else(|| Failure::validation("document has no lengths"))?;
            let metric = MetricAssignment::new(&g.graph, lengths, false).map_err(Failure::validation)?;
            let x = recover_stratification(&g.graph, &g.labels, &metric, &theta).map_err(Failure::validation)?;
            let seq = x.sequence;
            let mut lengths = vec![Rational::default(); seq.graph.edge_count()];
            for stage in &x.stage_lengths {
                for (&e, l) in stage {
                    lengths[e] = l.clone();
                }
            }
            let mut doc = GraphDocument::new(seq.graph, seq.labels);
            if doc.graph.half_edge_count() == g.graph.half_edge_count() {
                doc.names = g.names;
            }
            doc.stages = seq.stages;
            doc.lengths = Some(lengths);
            Ok(ctx.document(&Document::Graph(doc)))
        }
        Command::Enumerate { genus, labels, min_valence, compactified, decorated, max_half_edges, naive } => {
            let max = max_half_edges.or(ctx.config.enumerate.max_half_edges).unwrap_or(12);
            let options = EnumerateOptions {
                min_valence,
                compactified,
                decorated: decorated || !compactified,
                max_half_edges: max,
                naive,
                ..EnumerateOptions::default()
            };
            let c = enumerate_cells(genus, labels, &options).map_err(infeasible)?;
            let mut text = format!("{} cells\n", c.cells.len());
            for (d, count) in c.counts_by_dimension() {
                text += &format!("dimension {d}: {count}\n");
            }
            for cell in &c.cells {
                let g = &cell.datum.graph;
                text += &format!(
                    "cell dim {} aut {}/{} vertices {} edges {} depth {}\n",
                    cell.dimension,
                    cell.aut.full_order,
                    cell.aut.edge_image_order,
                    g.vertex_count(),
                    g.edge_count(),
                    cell.datum.depth()
                );
            }
            if !c.complete {
                text += "incomplete: raise --max-half-edges\n";
            }
            Ok(ctx.emit(text, serde_json::to_value(&c).expect("json")))
        }
        Command::EulerChar { genus, labels, min_valence, convention, max_half_edges } => {
            let max = max_half_edges.or(ctx.config.enumerate.max_half_edges).unwrap_or(12);
            let options = EnumerateOptions { min_valence, max_half_edges: max, ..EnumerateOptions::default() };
            let c = enumerate_cells(genus, labels, &options).map_err(infeasible)?;
            let convention = match convention {
                ConventionArg::Full => Convention::Full,
                ConventionArg::EdgeImage => Convention::EdgeImage,
            };
            let chi = orbifold_euler_characteristic(&c, convention);
            let text = format!("euler characteristic: {chi}\n{}", if c.complete { "" } else { "incomplete\n" });
            Ok(ctx.emit(text, json!({"euler": chi.to_string(), "complete": c.complete})))
        }
        Command::BlowupSimplex { n, subsets, depth_scale } => {
            let filtration = parse_filtration(n, &subsets)?;
            let scale = ctx.rational(depth_scale.as_deref(), ctx.config.polytope.depth_scale.as_deref(), "1")?;
            if scale <= Rational::default() || scale > Rational::from_integer(1.into()) {
                return Err(Failure::validation("depth scale must lie in (0, 1]"));
            }
            let lattice = blowup_simplex_with(&filtration, &DepthSchedule { scale });
            let f: Vec<String> = lattice.f_vector().iter().map(ToString::to_string).collect();
            let mut text = format!("f-vector: {}\n", f.join(" "));
            for (d, faces) in lattice.faces.iter().enumerate() {
                for face in faces {
                    let list: Vec<String> = face.iter().map(ToString::to_string).collect();
                    text += &format!("face {d}: {}\n", list.join(" "));
                }
            }
            Ok(ctx.emit(text, serde_json::to_value(&lattice).expect("json")))
        }
    }
}
