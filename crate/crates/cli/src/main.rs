//! `twiso` command line tool. Vertex labels and bag ids are 1-based on the
//! command line and in all output. Exit codes: 0 yes, 1 no, 2 usage or
//! width errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use twiso::augmented::{build_augmented_tree, AugmentedTree};
use twiso::harness::{
    brute_force_iso, generate_partial_ktree, parse_decomposition, parse_graph, write_decomposition, write_graph,
};
use twiso::order::{canonize_tdw, iso_tdw};
use twiso::tdd::{build_minimal_tdd, tree_distance_width};
use twiso::treewidth::{iso_one_decomp, iso_respecting_both, iso_tw, TreeDecomposition};
use twiso::{Error, Graph, Permutation, VertexSet};

#[derive(Parser)]
#[command(name = "twiso", version, about = "Isomorphism tools for graphs of bounded tree distance width and treewidth")]
struct Cli {
    /// Print a single-line JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal tree distance decomposition for a root set.
    TddBuild {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        root: Vec<usize>,
    },
    /// Tree distance width, searching root sets of size at most K.
    TddWidth {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Augmented tree for a root set.
    Augtree {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        root: Vec<usize>,
    },
    /// Isomorphism test for tree distance width at most K.
    IsoTdw {
        g: PathBuf,
        h: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Canonical form and canonical labeling for tree distance width at most K.
    CanonTdw {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Isomorphism mapping the bags of one decomposition onto the other's.
    IsoBoth {
        g: PathBuf,
        dg: PathBuf,
        h: PathBuf,
        dh: PathBuf,
    },
    /// Isomorphism search with a decomposition of the first graph.
    IsoOne {
        g: PathBuf,
        dg: PathBuf,
        h: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Isomorphism test for treewidth at most K.
    IsoTw {
        g: PathBuf,
        h: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Brute-force isomorphism search.
    IsoBrute { g: PathBuf, h: PathBuf },
    /// Random partial k-tree with its decomposition.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ratio: f64,
        #[arg(long)]
        seed: u64,
        /// Write the graph here instead of standard output.
        #[arg(long)]
        graph_out: Option<PathBuf>,
        /// Write the decomposition here instead of standard output.
        #[arg(long)]
        td_out: Option<PathBuf>,
    },
}

/// What a command produced: its verdict, text output and JSON witness.
struct Report {
    verdict: Value,
    yes: bool,
    lines: Vec<String>,
    witness: Value,
}

impl Report {
    fn answer(yes: bool) -> Self {
        Report {
            verdict: json!(if yes { "yes" } else { "no" }),
            yes,
            lines: vec![if yes { "yes" } else { "no" }.to_string()],
            witness: Value::Null,
        }
    }

    fn with_map(mut self, p: &Permutation) -> Self {
        self.lines.extend(map_lines(p));
        self.witness = map_json(p);
        self
    }
}

fn map_lines(p: &Permutation) -> Vec<String> {
    p.images()
        .iter()
        .enumerate()
        .map(|(u, w)| format!("map {} {}", u + 1, w + 1))
        .collect()
}

fn map_json(p: &Permutation) -> Value {
    json!(p.images().iter().enumerate().map(|(u, w)| [u + 1, w + 1]).collect::<Vec<_>>())
}

#[derive(Debug)]
enum Failure {
    Io(PathBuf, std::io::Error),
    Lib(Error),
    Usage(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_decomposition(path: &Path) -> Result<TreeDecomposition, Failure> {
    parse_decomposition(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn root_set(g: &Graph, labels: &[usize]) -> Result<VertexSet, Failure> {
    labels
        .iter()
        .map(|&v| {
            if v == 0 || v > g.vertex_count() {
                Err(Failure::Usage(format!("root vertex {v} outside 1..={}", g.vertex_count())))
            } else {
                Ok(v - 1)
            }
        })
        .collect()
}

fn augmented_text(t: &AugmentedTree, node: usize, out: &mut String) {
    let n = t.node(node);
    out.push(if n.is_bag() { 'B' } else { 'S' });
    out.push('(');
    let labels: Vec<String> = n.vertices.iter().map(|v| (v + 1).to_string()).collect();
    out.push_str(&labels.join(","));
    out.push(')');
    if !n.children.is_empty() {
        out.push('[');
        for (i, &c) in n.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            augmented_text(t, c, out);
        }
        out.push(']');
    }
}

fn write_out(path: &Option<PathBuf>, text: &str, lines: &mut Vec<String>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(p.clone(), e)),
        None => {
            lines.extend(text.lines().map(str::to_string));
            Ok(())
        }
    }
}

fn run(command: &Command) -> Result<Report, Failure> {
    Ok(match command {
        Command::TddBuild { graph, root } => {
            let g = load_graph(graph)?;
            let s = root_set(&g, root)?;
            let d = build_minimal_tdd(&g, &s)?;
            let records: Vec<Vec<usize>> = d
                .records()
                .iter()
                .map(|r| {
                    let mut row = vec![r.bag_id + 1, r.bag_depth];
                    row.extend(r.vertices.iter().map(|v| v + 1));
                    row
                })
                .collect();
            let lines = records
                .iter()
                .map(|row| {
                    let fields: Vec<String> = row.iter().map(usize::to_string).collect();
                    format!("b {}", fields.join(" "))
                })
                .collect();
            Report {
                verdict: json!(d.width()),
                yes: true,
                lines,
                witness: json!(records),
            }
        }
        Command::TddWidth { graph, k } => {
            let g = load_graph(graph)?;
            match tree_distance_width(&g, *k)? {
                Some(w) => Report {
                    verdict: json!(w),
                    yes: true,
                    lines: vec![w.to_string()],
                    witness: Value::Null,
                },
                None => Report {
                    verdict: Value::Null,
                    yes: false,
                    lines: vec![format!("none within root sets of size {k}")],
                    witness: Value::Null,
                },
            }
        }
        Command::Augtree { graph, root } => {
            let g = load_graph(graph)?;
            let s = root_set(&g, root)?;
            let t = build_augmented_tree(&g, &build_minimal_tdd(&g, &s)?)?;
            let mut text = String::new();
            augmented_text(&t, t.root(), &mut text);
            Report {
                verdict: json!(t.len()),
                yes: true,
                lines: vec![text.clone()],
                witness: json!(text),
            }
        }
        Command::IsoTdw { g, h, k } => Report::answer(iso_tdw(&load_graph(g)?, &load_graph(h)?, *k)?),
        Command::CanonTdw { graph, k } => {
            let (form, map) = canonize_tdw(&load_graph(graph)?, *k)?;
            let mut report = Report::answer(true).with_map(&map);
            report.lines[0] = form.to_hex();
            report.verdict = json!(form.to_hex());
            report
        }
        Command::IsoBoth { g, dg, h, dh } => Report::answer(iso_respecting_both(
            &load_graph(g)?,
            &load_decomposition(dg)?,
            &load_graph(h)?,
            &load_decomposition(dh)?,
        )?),
        Command::IsoOne { g, dg, h, k } => {
            match iso_one_decomp(&load_graph(g)?, &load_decomposition(dg)?, &load_graph(h)?, *k)? {
                Some(p) => Report::answer(true).with_map(&p),
                None => Report::answer(false),
            }
        }
        Command::IsoTw { g, h, k } => Report::answer(iso_tw(&load_graph(g)?, &load_graph(h)?, *k)?),
        Command::IsoBrute { g, h } => match brute_force_iso(&load_graph(g)?, &load_graph(h)?) {
            Some(p) => Report::answer(true).with_map(&p),
            None => Report::answer(false),
        },
        Command::Gen {
            n,
            k,
            ratio,
            seed,
            graph_out,
            td_out,
        } => {
            let bundle = generate_partial_ktree(*n, *k, *ratio, *seed)?;
            let d = bundle.decomposition.as_ref().expect("generator records a decomposition");
            let mut lines = vec![format!("c partial {k}-tree, ratio {ratio}, seed {seed}")];
            write_out(graph_out, &write_graph(&bundle.graph), &mut lines)?;
            write_out(td_out, &write_decomposition(d, *n), &mut lines)?;
            Report {
                verdict: json!({"vertices": n, "edges": bundle.graph.edge_count(), "width": d.width()}),
                yes: true,
                lines,
                witness: Value::Null,
            }
        }
    })
}

fn name(command: &Command) -> &'static str {
    match command {
        Command::TddBuild { .. } => "tdd-build",
        Command::TddWidth { .. } => "tdd-width",
        Command::Augtree { .. } => "augtree",
        Command::IsoTdw { .. } => "iso-tdw",
        Command::CanonTdw { .. } => "canon-tdw",
        Command::IsoBoth { .. } => "iso-both",
        Command::IsoOne { .. } => "iso-one",
        Command::IsoTw { .. } => "iso-tw",
        Command::IsoBrute { .. } => "iso-brute",
        Command::Gen { .. } => "gen",
    }
}

fn inputs(command: &Command) -> Value {
    let p = |path: &PathBuf| json!(path.display().to_string());
    match command {
        Command::TddBuild { graph, root } | Command::Augtree { graph, root } => {
            json!({"graph": p(graph), "root": root})
        }
        Command::TddWidth { graph, k } | Command::CanonTdw { graph, k } => json!({"graph": p(graph), "k": k}),
        Command::IsoTdw { g, h, k } | Command::IsoTw { g, h, k } => json!({"g": p(g), "h": p(h), "k": k}),
        Command::IsoBoth { g, dg, h, dh } => json!({"g": p(g), "dg": p(dg), "h": p(h), "dh": p(dh)}),
        Command::IsoOne { g, dg, h, k } => json!({"g": p(g), "dg": p(dg), "h": p(h), "k": k}),
        Command::IsoBrute { g, h } => json!({"g": p(g), "h": p(h)}),
        Command::Gen { n, k, ratio, seed, .. } => json!({"n": n, "k": k, "ratio": ratio, "seed": seed}),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            if cli.json {
                let record = json!({
                    "command": name(&cli.command),
                    "inputs": inputs(&cli.command),
                    "verdict": report.verdict,
                    "witness": report.witness,
                });
                println!("{record}");
            } else {
                for line in &report.lines {
                    println!("{line}");
                }
            }
            if report.yes {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            if cli.json {
                let record = json!({
                    "command": name(&cli.command),
                    "inputs": inputs(&cli.command),
                    "verdict": "error",
                    "witness": failure.to_string(),
                });
                println!("{record}");
            }
            eprintln!("error: {failure}");
            ExitCode::from(2)
        }
    }
}
