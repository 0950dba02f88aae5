use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use surfmap::comb_map::{EmbeddingViolation, DEFAULT_ROTATION_GUARD};
use surfmap::formats::{self, SPlaneQuery};
use surfmap::map_geometry::MapGeometry;
use surfmap::multi_space::{
    self, build_cyclic_multigroup, FixedPointOptions, MultiGroup, SubMultiGroup, DEFAULT_SERIES_GUARD,
};
use surfmap::surface_word::DEFAULT_STEP_LIMIT;
use surfmap::{CombMap, Rational, StandardForm, SurfaceWord};

use crate::report::Report;

type CmdResult = Result<Report, Box<dyn Error>>;

#[derive(Parser, Debug)]
#[command(name = "surfmap", version, about = "Surfaces, combinatorial maps, map geometries and multi-spaces")]
pub struct Cli {
    /// Print the report as a JSON object
    #[arg(long, global = true, conflicts_with = "plain")]
    pub json: bool,
    /// Print the report as key=value lines (default)
    #[arg(long, global = true)]
    pub plain: bool,
    /// Trace progress on standard error
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct WordInput {
    /// File holding the word
    file: Option<PathBuf>,
    /// The word itself, e.g. "a b a- b-"
    #[arg(long)]
    word: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify the surface of a polygon word
    WordClassify(WordInput),
    /// Reduce a polygon word to standard form by elementary moves
    WordNormalize {
        #[command(flatten)]
        input: WordInput,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
        step_limit: usize,
    },
    /// Vertex, edge and face counts, Euler characteristic and genus of a map
    MapAnalyze {
        file: PathBuf,
        /// Also report face lengths and vertex valencies
        #[arg(long)]
        faces: bool,
    },
    /// Print the dual map in map file format
    MapDual { file: PathBuf },
    /// Minimum orientable genus of a connected graph
    GraphGenus {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ROTATION_GUARD)]
        guard: u64,
    },
    /// Planarity of a graph
    GraphPlanar {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ROTATION_GUARD)]
        guard: u64,
    },
    /// Check a block decomposition for a nested-sphere multi-embedding
    GraphMultiembed {
        file: PathBuf,
        #[arg(long)]
        blocks: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ROTATION_GUARD)]
        guard: u64,
    },
    /// Classify every vertex of a map geometry
    GeomClassify {
        file: PathBuf,
        /// Read angles as floating point and compare with a tolerance
        #[arg(long)]
        float: bool,
        #[arg(long, requires = "float")]
        tolerance: Option<f64>,
    },
    /// Remove faces from a map geometry to form a boundary
    GeomBoundary {
        file: PathBuf,
        /// Keys of the faces to remove (least flag of each face)
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        remove: Vec<String>,
    },
    /// Answer incidence and parallel queries in the three-point s-plane
    SplaneQuery { file: PathBuf },
    /// Check the multi-group axioms
    MgroupValidate(GroupInput),
    /// Decompose a multi-group into disjoint cosets of a sub-multi-group
    MgroupLagrange { file: PathBuf },
    /// Lengths of maximal series of normal sub-multi-groups
    MgroupSeries {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long, default_value_t = DEFAULT_SERIES_GUARD)]
        guard: usize,
    },
    /// Fixed points of a piecewise affine contraction
    MetricFixpoints {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        seeds: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct GroupInput {
    /// Multi-group file
    file: Option<PathBuf>,
    /// Use the cyclic construction with n parts instead of a file
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    cyclic: Option<u64>,
}

fn read(path: &Path) -> Result<String, Box<dyn Error>> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

struct Ctx {
    verbose: bool,
}

impl Ctx {
    fn trace(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("[surfmap] {}", msg.as_ref());
        }
    }
}

pub fn run(cli: &Cli) -> CmdResult {
    let ctx = Ctx { verbose: cli.verbose };
    match &cli.command {
        Command::WordClassify(input) => word_classify(&ctx, input),
        Command::WordNormalize { input, step_limit } => word_normalize(&ctx, input, *step_limit),
        Command::MapAnalyze { file, faces } => map_analyze(&ctx, file, *faces),
        Command::MapDual { file } => map_dual(&ctx, file),
        Command::GraphGenus { file, guard } => {
            let g = formats::parse_graph(&read(file)?)?;
            ctx.trace(format!("{} rotation systems", g.rotation_system_count()));
            let genus = g.min_orientable_genus(*guard)?;
            Ok(Report::new().field("genus", genus).field("rotation_systems", g.rotation_system_count().to_string()))
        }
        Command::GraphPlanar { file, guard } => {
            let g = formats::parse_graph(&read(file)?)?;
            Ok(Report::new().field("planar", g.is_planar(*guard)?))
        }
        Command::GraphMultiembed { file, blocks, guard } => graph_multiembed(&ctx, file, blocks, *guard),
        Command::GeomClassify { file, float, tolerance } => {
            if *float {
                let mut g = formats::parse_geometry::<f64>(&read(file)?)?;
                if let Some(t) = tolerance {
                    g = g.with_tolerance(*t)?;
                }
                Ok(geom_report(&g))
            } else {
                Ok(geom_report(&formats::parse_geometry::<Rational>(&read(file)?)?))
            }
        }
        Command::GeomBoundary { file, remove } => {
            let g = formats::parse_geometry::<Rational>(&read(file)?)?;
            let keys: Vec<&str> = remove.iter().map(String::as_str).collect();
            let faces = g.face_indices(&keys)?;
            let bounded = g.with_boundary(&faces)?;
            let kept = g.map().faces().len() - bounded.removed.len();
            Ok(Report::new().field("boundary", "valid").field("removed", keys).field("kept_faces", kept))
        }
        Command::SplaneQuery { file } => splane(&ctx, file),
        Command::MgroupValidate(input) => {
            let g = group(&ctx, input)?;
            Ok(match g.validate() {
                Ok(()) => Report::new().field("multigroup", true),
                Err(v) => Report::new().field("multigroup", false).field("violation", v.to_string()),
            })
        }
        Command::MgroupLagrange { file } => lagrange(&ctx, file),
        Command::MgroupSeries { input, guard } => {
            let g = group(&ctx, input)?;
            let lengths = multi_space::maximal_normal_series_lengths(&g, *guard)?;
            let list: Vec<usize> = lengths.iter().copied().collect();
            Ok(Report::new().field("lengths", list).field("singleton", lengths.len() == 1))
        }
        Command::MetricFixpoints { file, seeds, tol } => {
            let (space, t) = formats::parse_affine(&read(file)?)?;
            let options = FixedPointOptions { seeds_per_part: *seeds, tolerance: *tol, ..Default::default() };
            let points = multi_space::fixed_points(&space, &t, &options)?;
            ctx.trace(format!("{} parts, {} seeds each", space.parts().len(), seeds));
            let residuals: Vec<f64> =
                points.iter().map(|&p| (t.apply(&space, p).expect("in space") - p).abs()).collect();
            Ok(Report::new()
                .field("count", points.len())
                .field("parts", space.parts().len())
                .field("points", points.iter().map(|p| format!("{p}")).collect::<Vec<_>>())
                .field("max_residual", residuals.iter().fold(0.0f64, |a, &b| a.max(b))))
        }
    }
}

fn word(input: &WordInput) -> Result<SurfaceWord, Box<dyn Error>> {
    let text = match (&input.file, &input.word) {
        (Some(path), _) => read(path)?,
        (None, Some(w)) => w.clone(),
        (None, None) => unreachable!("clap requires one input"),
    };
    Ok(SurfaceWord::parse(&text)?)
}

fn form_fields(report: Report, form: StandardForm) -> Report {
    let kind = match form {
        StandardForm::Sphere => "sphere",
        StandardForm::OrientableGenus(_) => "orientable",
        StandardForm::NonOrientableGenus(_) => "non-orientable",
    };
    report.field("form", kind).field("genus", form.genus()).field("chi", form.euler_characteristic())
}

fn word_classify(ctx: &Ctx, input: &WordInput) -> CmdResult {
    let w = word(input)?;
    ctx.trace(format!("{} symbols, {} corner classes", w.symbol_count(), w.corner_classes().1));
    Ok(form_fields(Report::new(), w.classify()?).field("standard", form_word(w.classify()?)))
}

fn form_word(form: StandardForm) -> String {
    form.standard_word().to_string()
}

fn word_normalize(ctx: &Ctx, input: &WordInput, limit: usize) -> CmdResult {
    let w = word(input)?;
    let n = w.normalize_with_trace(limit)?;
    for (i, m) in n.trace.iter().enumerate() {
        ctx.trace(format!("step {}: {m}", i + 1));
    }
    let moves: Vec<String> = n.trace.iter().map(ToString::to_string).collect();
    Ok(form_fields(Report::new(), n.form)
        .field("steps", n.trace.len())
        .field("terminal", n.terminal.to_string())
        .field("trace", moves))
}

fn map_analyze(ctx: &Ctx, file: &Path, faces: bool) -> CmdResult {
    let map = formats::parse_map(&read(file)?)?;
    ctx.trace(format!("{} flags", map.flag_count()));
    let c = map.census();
    let mut r = Report::new()
        .field("nu", c.vertices)
        .field("eps", c.edges)
        .field("phi", c.faces)
        .field("chi", c.euler)
        .field("orientable", c.orientable)
        .field("genus", c.genus);
    if faces {
        let mut lengths: Vec<usize> = map.faces().iter().map(|f| f.len()).collect();
        lengths.sort_unstable();
        let vertices = map.vertices();
        let keys: Vec<String> = vertices.iter().map(|v| map.flag_name(v.key)).collect();
        let valencies: Vec<usize> = vertices.iter().map(|v| map.valency(v)).collect();
        let face_keys: Vec<String> = map.faces().iter().map(|f| map.flag_name(f.key)).collect();
        r = r
            .field("face_lengths", lengths)
            .field("face_keys", face_keys)
            .field("vertex_keys", keys)
            .field("valencies", valencies);
    }
    Ok(r)
}

fn map_dual(ctx: &Ctx, file: &Path) -> CmdResult {
    let map = formats::parse_map(&read(file)?)?;
    let dual: CombMap = map.dual();
    ctx.trace(format!("dual has {} vertices", dual.vertices().len()));
    let text = dual.to_string();
    Ok(Report::new().field("map", text.clone()).plain_body(text))
}

fn graph_multiembed(ctx: &Ctx, file: &Path, blocks: &Path, guard: u64) -> CmdResult {
    let g = formats::parse_graph(&read(file)?)?;
    let blocks = formats::parse_blocks(&read(blocks)?, &g)?;
    ctx.trace(format!("{} blocks", blocks.len()));
    let verdict = g.check_multi_embedding(&blocks, guard)?;
    let r = Report::new().field("holds", verdict.holds());
    Ok(match verdict.violation {
        None => r,
        Some(EmbeddingViolation::NonPlanar { block }) => r.field("violation", "i").field("block", block),
        Some(EmbeddingViolation::FarNeighbor { block, vertex, neighbor }) => {
            r.field("violation", "ii").field("block", block).field("vertex", vertex).field("neighbor", neighbor)
        }
    })
}

fn geom_report<S: surfmap::Scalar>(g: &MapGeometry<S>) -> Report {
    let classes = g.classify_all();
    let defect = format!("{}", g.total_angle_defect());
    let mut body = String::new();
    for (key, class) in &classes {
        body.push_str(&format!("{key} {}", class.kind));
        if class.approximate {
            body.push_str(" approximate");
        }
        body.push('\n');
    }
    body.push_str(&format!("defect={defect}\n"));
    let vertices: Vec<Value> = classes
        .iter()
        .map(|(key, c)| json!({ "key": key, "class": c.kind.as_str(), "approximate": c.approximate }))
        .collect();
    Report::new().field("vertices", vertices).field("defect", defect).plain_body(body)
}

fn splane(ctx: &Ctx, file: &Path) -> CmdResult {
    let input = formats::parse_splane::<Rational>(&read(file)?)?;
    ctx.trace(format!("{} queries", input.queries.len()));
    let mut body = String::new();
    let mut results = Vec::new();
    for q in &input.queries {
        let (kind, count) = match q {
            SPlaneQuery::Incidence(p, r) => ("incidence", input.config.s_line_through(p, r)?),
            SPlaneQuery::Parallel(l1, l2, p) => ("parallel", input.config.s_parallels_through(l1, l2, p)?),
        };
        body.push_str(&format!("{kind}={count}\n"));
        results.push(json!({ "query": kind, "count": count }));
    }
    Ok(Report::new().field("results", results).plain_body(body))
}

fn group(ctx: &Ctx, input: &GroupInput) -> Result<MultiGroup, Box<dyn Error>> {
    match (&input.file, input.cyclic) {
        (_, Some(n)) => {
            ctx.trace(format!("cyclic construction with {n} parts"));
            Ok(build_cyclic_multigroup(n as usize))
        }
        (Some(path), None) => Ok(formats::parse_multigroup(&read(path)?)?.group),
        (None, None) => unreachable!("clap requires one input"),
    }
}

fn lagrange(ctx: &Ctx, file: &Path) -> CmdResult {
    let input = formats::parse_multigroup(&read(file)?)?;
    let sub: SubMultiGroup = input.sub.ok_or("the file has no `sub` lines")?;
    let d = multi_space::lagrange_decomposition(&input.group, &sub)?;
    ctx.trace(format!("{} cosets", d.cosets.len()));
    let names = input.group.names();
    let reps: Vec<String> = d.representatives.iter().map(|&x| names[x].clone()).collect();
    let cosets: Vec<String> = d
        .cosets
        .iter()
        .map(|c| format!("{{{}}}", c.iter().map(|&x| names[x].as_str()).collect::<Vec<_>>().join(" ")))
        .collect();
    Ok(Report::new()
        .field("certified", multi_space::certify(&d, input.group.universe_size()))
        .field("representatives", reps)
        .field("cosets", cosets))
}
