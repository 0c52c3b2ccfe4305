//! rastergraph: an embedded RDF store with raster and vector geometry
//! literals, queried through a SPARQL subset with map-algebra functions.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rastergraph_cli::corpus::{self, CorpusSpec};
use rastergraph_cli::workspace::{
    base_iri_from_env, expand_class_iri, ingest_asc_raster, ingest_geojson,
};
use rastergraph_core::eval::Evaluator;
use rastergraph_core::query::parse_query;
use rastergraph_core::rasterio::{
    parse_asc_grid, parse_coverage_json, parse_raster_hex_wkb, write_asc_grid,
    write_coverage_json, write_raster_hex_wkb,
};
use rastergraph_core::rdf::{parse_rdf_document, write_ntriples, Graph};
use rastergraph_core::Raster;

#[derive(Parser)]
#[command(
    name = "rastergraph",
    about = "Embedded RDF store and query engine with raster literals and map algebra",
    version
)]
struct Cli {
    /// Workspace directory holding the accumulated graph (graph.nt).
    #[arg(long, global = true, default_value = "rastergraph-workspace")]
    workspace: PathBuf,

    /// IRI minting base for ingested features (env: RASTERGRAPH_BASE_IRI).
    #[arg(long, global = true)]
    base: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load an RDF document (N-Triples with @prefix declarations).
    LoadRdf { file: PathBuf },
    /// Load a GeoJSON FeatureCollection as features of the given class.
    LoadGeojson {
        file: PathBuf,
        /// Feature class IRI (full or prefixed, e.g. ex:Road).
        #[arg(long)]
        class: String,
    },
    /// Load an ESRI ASCII grid as a raster coverage of the given class.
    LoadAsc {
        file: PathBuf,
        /// Feature class IRI (full or prefixed, e.g. ex:FloodRiskArea).
        #[arg(long)]
        class: String,
        /// Scale unit label stored with the raster (e.g. cm).
        #[arg(long)]
        unit: String,
    },
    /// Run a SELECT query from a file (or inline with -e) over the workspace.
    Query {
        /// Query file; omit when using -e.
        file: Option<PathBuf>,
        /// Inline query text.
        #[arg(short = 'e', long = "expr")]
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
        format: OutputFormat,
    },
    /// Convert a raster file between formats.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: RasterFormat,
        output: PathBuf,
    },
    /// Generate a synthetic hazard corpus into a directory.
    GenCorpus {
        dir: PathBuf,
        #[arg(long, default_value_t = 200)]
        roads: usize,
        #[arg(long, default_value_t = 60)]
        buildings: usize,
        #[arg(long, default_value_t = 30)]
        ears: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long, default_value_t = 0.12)]
        nodata_frac: f64,
    },
    /// Load a generated corpus directory and time the four use-case queries.
    Bench { dir: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RasterFormat {
    Covjson,
    Asc,
    Hexwkb,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let base = base_iri_from_env(cli.base.as_deref());
    match cli.command {
        Command::LoadRdf { file } => {
            let text = fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let loaded = parse_rdf_document(&text).map_err(|e| anyhow!("{e}"))?;
            let mut graph = load_workspace(&cli.workspace)?;
            let before = graph.len();
            for triple in loaded.triples() {
                graph.insert(triple.clone());
            }
            save_workspace(&cli.workspace, &graph)?;
            println!("loaded {} triples ({} new)", loaded.len(), graph.len() - before);
        }
        Command::LoadGeojson { file, class } => {
            let text = fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let class_iri = expand_class_iri(&class)?;
            let mut graph = load_workspace(&cli.workspace)?;
            let before = graph.len();
            let features = ingest_geojson(&mut graph, &text, &class_iri, &base)?;
            save_workspace(&cli.workspace, &graph)?;
            println!(
                "ingested {} features ({} triples)",
                features.len(),
                graph.len() - before
            );
        }
        Command::LoadAsc { file, class, unit } => {
            let text = fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let class_iri = expand_class_iri(&class)?;
            let mut graph = load_workspace(&cli.workspace)?;
            let before = graph.len();
            let (iri, raster) = ingest_asc_raster(&mut graph, &text, &class_iri, &unit, &base)?;
            save_workspace(&cli.workspace, &graph)?;
            println!(
                "ingested raster {iri}: {}x{} cells ({} triples)",
                raster.n_cols(),
                raster.n_rows(),
                graph.len() - before
            );
        }
        Command::Query { file, expr, format } => {
            let text = match (file, expr) {
                (Some(path), None) => fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?,
                (None, Some(text)) => text,
                _ => bail!("provide exactly one of a query file or -e <text>"),
            };
            let query = parse_query(&text).map_err(|e| anyhow!("{e}"))?;
            let graph = load_workspace(&cli.workspace)?;
            let evaluator = Evaluator::new(&graph);
            let table = evaluator.eval_select(&query);
            match format {
                OutputFormat::Tsv => print!("{}", table.to_tsv()),
                OutputFormat::Json => println!("{}", table.to_json()),
            }
        }
        Command::Convert { input, to, output } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let raster = sniff_raster(&text)?;
            let rendered = match to {
                RasterFormat::Covjson => write_coverage_json(&raster),
                RasterFormat::Asc => write_asc_grid(&raster).map_err(|e| anyhow!("{e}"))?,
                RasterFormat::Hexwkb => write_raster_hex_wkb(&raster),
            };
            fs::write(&output, rendered)
                .with_context(|| format!("writing {}", output.display()))?;
            println!("wrote {}", output.display());
        }
        Command::GenCorpus {
            dir,
            roads,
            buildings,
            ears,
            seed,
            grid,
            nodata_frac,
        } => {
            let spec = CorpusSpec {
                roads,
                buildings,
                ears,
                seed,
                grid,
                nodata_frac,
            };
            corpus::generate(&spec).write_to(&dir)?;
            println!(
                "corpus written to {} ({roads} roads, {buildings} buildings, {ears} elements at risk, {grid}x{grid} rasters)",
                dir.display()
            );
        }
        Command::Bench { dir } => bench(&dir, &base)?,
    }
    Ok(())
}

fn workspace_graph_path(workspace: &Path) -> PathBuf {
    workspace.join("graph.nt")
}

fn load_workspace(workspace: &Path) -> Result<Graph> {
    let path = workspace_graph_path(workspace);
    if !path.exists() {
        return Ok(Graph::new());
    }
    let text =
        fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    parse_rdf_document(&text).map_err(|e| anyhow!("{e}"))
}

fn save_workspace(workspace: &Path, graph: &Graph) -> Result<()> {
    fs::create_dir_all(workspace)
        .with_context(|| format!("creating {}", workspace.display()))?;
    let path = workspace_graph_path(workspace);
    fs::write(&path, write_ntriples(graph))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Recognizes the raster input format from the content: JSON braces for
/// CoverageJSON, an ASC header keyword, otherwise hex WKB.
fn sniff_raster(text: &str) -> Result<Raster> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return parse_coverage_json(text).map_err(|e| anyhow!("{e}"));
    }
    if trimmed
        .to_ascii_lowercase()
        .starts_with("ncols")
    {
        return parse_asc_grid(text).map_err(|e| anyhow!("{e}"));
    }
    parse_raster_hex_wkb(text).map_err(|e| anyhow!("{e}"))
}

/// Loads the conventional corpus files and runs the four use-case queries,
/// reporting row counts and wall times.
fn bench(dir: &Path, base: &str) -> Result<()> {
    let mut graph = Graph::new();
    let read = |name: &str| -> Result<String> {
        fs::read_to_string(dir.join(name))
            .with_context(|| format!("reading {}/{name}", dir.display()))
    };
    ingest_geojson(
        &mut graph,
        &read("roads.geojson")?,
        &expand_class_iri("ex:Road")?,
        base,
    )?;
    ingest_geojson(
        &mut graph,
        &read("buildings.geojson")?,
        &expand_class_iri("ex:Building")?,
        base,
    )?;
    ingest_geojson(
        &mut graph,
        &read("ears.geojson")?,
        &expand_class_iri("ear:ElementAtRisk")?,
        base,
    )?;
    ingest_asc_raster(
        &mut graph,
        &read("flood.asc")?,
        &expand_class_iri("ex:FloodRiskArea")?,
        "cm",
        base,
    )?;
    ingest_asc_raster(
        &mut graph,
        &read("fire.asc")?,
        &expand_class_iri("ex:FireRiskArea")?,
        "risk",
        base,
    )?;

    println!("graph: {} triples", graph.len());
    println!("{:<8} {:>8} {:>10}", "query", "rows", "ms");
    let evaluator = Evaluator::new(&graph);
    for name in ["u1.rq", "u2.rq", "u3.rq", "u4.rq"] {
        let text = read(name)?;
        let query = parse_query(&text).map_err(|e| anyhow!("{e}"))?;
        let start = Instant::now();
        let table = evaluator.eval_select(&query);
        let elapsed = start.elapsed().as_millis();
        println!("{:<8} {:>8} {:>10}", name, table.rows.len(), elapsed);
    }
    Ok(())
}
