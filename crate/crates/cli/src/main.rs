use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use gplan_core::dimension::{dimension_floorplan, DimError};
use gplan_core::enumerate::{enumerate_floorplans, EnumError, EnumOptions, StopReason};
use gplan_core::floorplan::Floorplan;
use gplan_core::formats::{
    emit_svg, floorplan_json, parse_bounds, with_room_ids, GraphDocument,
    SvgOptions,
};
use gplan_core::ifp::{dimension_ifp, parse_layout, IfpError};
use gplan_core::rfp_check;
use gplan_service::{Config, WALL_EPS};
use serde::Serialize;

const NEGATIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "gplan", version, about = "Floorplans from room adjacency graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report whether a graph has a rectangular floorplan, and why not.
    Check { graph: PathBuf },
    /// Write every distinct floorplan of a graph as JSON and SVG.
    Generate {
        graph: PathBuf,
        /// Stop after this many layouts.
        #[arg(long)]
        limit: Option<usize>,
        /// Fall back to orthogonal rooms when no rectangular floorplan exists.
        #[arg(long)]
        allow_ofp: bool,
        /// Size each layout within the bounds in this file.
        #[arg(long, value_name = "BOUNDS")]
        dims: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write index.json listing the layouts in stream order.
        #[arg(long)]
        seed_order: bool,
        /// Draw extra and padding rooms in the SVG.
        #[arg(long)]
        debug_svg: bool,
    },
    /// Size a drawn layout within bounds.
    Ifp {
        layout: PathBuf,
        bounds: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        debug_svg: bool,
    },
    /// Start the HTTP service.
    Serve {
        /// Overrides GPLAN_PORT.
        #[arg(long)]
        port: Option<u16>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.cmd {
        Cmd::Check { graph } => check(&graph),
        Cmd::Generate {
            graph,
            limit,
            allow_ofp,
            dims,
            out,
            seed_order,
            debug_svg,
        } => generate(&graph, limit, allow_ofp, dims.as_deref(), &out, seed_order, debug_svg),
        Cmd::Ifp {
            layout,
            bounds,
            out,
            debug_svg,
        } => ifp(&layout, &bounds, &out, debug_svg),
        Cmd::Serve { port } => serve(port),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<GraphDocument> {
    GraphDocument::parse(&read(path)?).with_context(|| format!("graph file {}", path.display()))
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(dir.join(name))
        .with_context(|| format!("writing {}", dir.join(name).display()))?;
    Ok(())
}

fn check(path: &Path) -> Result<u8> {
    let doc = read_graph(path)?;
    let ids = doc.ids();
    let report = rfp_check(&doc.to_graph()?);
    let edges: Vec<String> = doc.edges.iter().map(|[a, b]| format!("({a}, {b})")).collect();
    println!("edges = {{{}}}", edges.join(", "));
    println!("rooms = {}", ids.len());
    println!("cips = {}", report.cips.len());
    for c in &report.cips {
        let path: Vec<&str> = c.iter().map(|&v| ids[v].as_str()).collect();
        println!("  cip {}", path.join(" - "));
    }
    println!("separating triangles = {}", report.separating_triangles.len());
    for t in &report.separating_triangles {
        println!("  triangle {} {} {}", ids[t[0]], ids[t[1]], ids[t[2]]);
    }
    if report.rfp_exists {
        println!("verdict: rectangular floorplan exists");
    } else {
        println!("verdict: no rectangular floorplan");
    }
    println!(
        "reason: {} ({})",
        serde_json::to_value(report.reason)?.as_str().unwrap_or_default(),
        report.reason.describe()
    );
    Ok(if report.rfp_exists { 0 } else { NEGATIVE })
}

#[derive(Clone, Serialize)]
struct IndexEntry {
    index: usize,
    json: String,
    svg: String,
    corners: Vec<usize>,
    rel_hash: String,
    merged_rooms: Vec<String>,
}

#[derive(Serialize)]
struct Index {
    graph: String,
    ofp: bool,
    stop_reason: Option<StopReason>,
    layouts: Vec<IndexEntry>,
    skipped: Vec<usize>,
}

fn generate(
    graph: &Path,
    limit: Option<usize>,
    allow_ofp: bool,
    dims: Option<&Path>,
    out: &Path,
    seed_order: bool,
    debug_svg: bool,
) -> Result<u8> {
    let doc = read_graph(graph)?;
    let bounds = match dims {
        Some(p) => Some(parse_bounds(&read(p)?).with_context(|| format!("bounds file {}", p.display()))?),
        None => None,
    };
    if let Some(b) = &bounds {
        let ids = doc.ids();
        for k in b.keys() {
            let room = k.split('/').next().unwrap_or(k);
            if !ids.iter().any(|id| id == room) {
                eprintln!("warning: bounds entry {k:?} matches no room");
            }
        }
    }
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let opts = EnumOptions {
        limit,
        allow_ofp,
        deadline: None,
    };
    let mut stream = match enumerate_floorplans(&doc.to_graph()?, opts) {
        Ok(s) => s,
        Err(e @ EnumError::NeedsOfp(_)) => {
            eprintln!("{e}; pass --allow-ofp to add extra rooms");
            return Ok(NEGATIVE);
        }
        Err(e) => {
            eprintln!("{e}");
            return Ok(NEGATIVE);
        }
    };
    let width = limit.map_or(4, |l| l.saturating_sub(1).to_string().len().max(4));
    let svg_opts = SvgOptions {
        debug: debug_svg,
        ..Default::default()
    };
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for (i, f) in stream.by_ref().enumerate() {
        let mut f = with_room_ids(f, &doc);
        if let Some(b) = &bounds {
            match dimension_floorplan(&f, b, WALL_EPS) {
                Ok(sized) => f = sized,
                Err(e) => {
                    eprintln!("layout {i}: {e}");
                    skipped.push(i);
                    continue;
                }
            }
        }
        let stem = format!("layout_{i:0width$}");
        write_atomic(out, &format!("{stem}.json"), &floorplan_json(&f))?;
        write_atomic(out, &format!("{stem}.svg"), &emit_svg(&f, svg_opts))?;
        entries.push(IndexEntry {
            index: i,
            json: format!("{stem}.json"),
            svg: format!("{stem}.svg"),
            corners: f.provenance.corners.clone(),
            rel_hash: f.provenance.rel_hash.clone(),
            merged_rooms: merged_ids(&f),
        });
    }
    if seed_order {
        let index = Index {
            graph: graph.display().to_string(),
            ofp: stream.is_ofp(),
            stop_reason: stream.stop_reason(),
            layouts: entries.clone(),
            skipped: skipped.clone(),
        };
        write_atomic(out, "index.json", &serde_json::to_string_pretty(&index)?)?;
    }
    let kind = if stream.is_ofp() { "orthogonal" } else { "rectangular" };
    println!(
        "wrote {} {kind} layouts to {} ({} skipped)",
        entries.len(),
        out.display(),
        skipped.len()
    );
    if bounds.is_some() && entries.is_empty() && !skipped.is_empty() {
        return Ok(NEGATIVE);
    }
    Ok(0)
}

fn merged_ids(f: &Floorplan) -> Vec<String> {
    f.rooms.iter().filter(|r| r.merged).map(|r| r.id.clone()).collect()
}

fn ifp(layout: &Path, bounds: &Path, out: &Path, debug_svg: bool) -> Result<u8> {
    let l = parse_layout(&read(layout)?).with_context(|| format!("layout file {}", layout.display()))?;
    let b = parse_bounds(&read(bounds)?).with_context(|| format!("bounds file {}", bounds.display()))?;
    let f = match dimension_ifp(&l, &b, WALL_EPS) {
        Ok(f) => f,
        Err(IfpError::Layout(e)) => return Err(e).context(format!("layout file {}", layout.display())),
        Err(IfpError::Dimension(e @ DimError::Infeasible { .. })) => {
            eprintln!("{e}");
            return Ok(NEGATIVE);
        }
        Err(IfpError::Dimension(e)) => return Err(e.into()),
    };
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write_atomic(out, "ifp.json", &floorplan_json(&f))?;
    let svg = emit_svg(
        &f,
        SvgOptions {
            debug: debug_svg,
            ..Default::default()
        },
    );
    write_atomic(out, "ifp.svg", &svg)?;
    println!(
        "wrote {} rooms, {:.3} x {:.3}, to {}",
        f.rooms.len(),
        f.bbox.w,
        f.bbox.h,
        out.display()
    );
    Ok(0)
}

fn serve(port: Option<u16>) -> Result<u8> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let mut config = Config::from_env().map_err(anyhow::Error::msg)?;
    if let Some(p) = port {
        config.port = p;
    }
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(gplan_service::serve(config))?;
    Ok(0)
}
