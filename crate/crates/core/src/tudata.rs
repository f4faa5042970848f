//! Parser for vertex-labeled graph datasets in the TU benchmark file layout.
//!
//! A dataset named `NAME` lives in a directory holding four plain-text files:
//!
//! * `NAME_A.txt` — one edge per line as `i, j` with 1-based global node ids;
//! * `NAME_graph_indicator.txt` — one graph id per node line;
//! * `NAME_graph_labels.txt` — one class label per graph line;
//! * `NAME_node_labels.txt` — one vertex label per node line.
//!
//! Undirected edges are conventionally listed as two directed lines; the
//! loader merges them by unordered pair. Self-loops are dropped (simplices
//! need distinct vertices) and counted in a warning.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// One input graph with 0-based local vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    /// 1-based id from the graph indicator file.
    pub graph_id: usize,
    pub num_vertices: usize,
    /// Unordered edges stored as `(u, v)` with `u < v`, sorted, duplicate-free.
    pub edges: Vec<(u32, u32)>,
    /// One label id per vertex, indexed by local vertex index.
    pub vertex_labels: Vec<i64>,
    pub class_label: i64,
}

impl LabeledGraph {
    /// The distinct vertex labels of this graph, ascending.
    pub fn distinct_labels(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.vertex_labels.iter().copied().collect();
        set.into_iter().collect()
    }
}

/// An in-memory dataset: graphs plus the label and class universes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraphDataset {
    pub name: String,
    pub graphs: Vec<LabeledGraph>,
    /// Exact union of all graphs' vertex labels, ascending, duplicate-free.
    pub label_universe: Vec<i64>,
    /// Distinct class labels, ascending.
    pub class_universe: Vec<i64>,
}

#[derive(Debug, Error)]
pub enum TuDataError {
    #[error("required file missing: {0}")]
    MissingFile(PathBuf),
    #[error("{file}:{line}: malformed line {content:?}: {reason}")]
    MalformedLine {
        file: String,
        line: usize,
        content: String,
        reason: String,
    },
    #[error("{file}:{line}: node id {id} out of range (dataset has {num_nodes} nodes)")]
    IndexOutOfRange {
        file: String,
        line: usize,
        id: i64,
        num_nodes: usize,
    },
    #[error("dataset {0:?} contains zero graphs")]
    EmptyDataset(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn read_file(path: &Path) -> Result<String, TuDataError> {
    if !path.is_file() {
        return Err(TuDataError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|source| TuDataError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses one integer per non-blank line, tolerating surrounding whitespace.
fn parse_int_column(text: &str, file: &str) -> Result<Vec<i64>, TuDataError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let token = raw.trim();
        if token.is_empty() {
            continue;
        }
        let value = token
            .parse::<i64>()
            .map_err(|e| TuDataError::MalformedLine {
                file: file.to_string(),
                line: idx + 1,
                content: raw.to_string(),
                reason: e.to_string(),
            })?;
        out.push(value);
    }
    Ok(out)
}

/// Parses one `i, j` pair per non-blank line; comma or whitespace separated.
fn parse_pair_column(text: &str, file: &str) -> Result<Vec<(i64, i64, usize)>, TuDataError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 2 {
            return Err(TuDataError::MalformedLine {
                file: file.to_string(),
                line: idx + 1,
                content: raw.to_string(),
                reason: format!("expected 2 integers, found {}", tokens.len()),
            });
        }
        let mut pair = [0i64; 2];
        for (slot, token) in pair.iter_mut().zip(&tokens) {
            *slot = token.parse::<i64>().map_err(|e| TuDataError::MalformedLine {
                file: file.to_string(),
                line: idx + 1,
                content: raw.to_string(),
                reason: e.to_string(),
            })?;
        }
        out.push((pair[0], pair[1], idx + 1));
    }
    Ok(out)
}

/// Loads `<name>_A.txt`, `<name>_graph_indicator.txt`, `<name>_graph_labels.txt`,
/// and `<name>_node_labels.txt` from `directory` into a [`LabeledGraphDataset`].
///
/// Global 1-based node ids are remapped to local 0-based indices per graph,
/// directed duplicate edge lines are merged into one undirected edge, and
/// self-loops are dropped with a logged count.
pub fn load_dataset(directory: &Path, name: &str) -> Result<LabeledGraphDataset, TuDataError> {
    let file_a = format!("{name}_A.txt");
    let file_ind = format!("{name}_graph_indicator.txt");
    let file_gl = format!("{name}_graph_labels.txt");
    let file_nl = format!("{name}_node_labels.txt");

    let indicator = parse_int_column(&read_file(&directory.join(&file_ind))?, &file_ind)?;
    let graph_labels = parse_int_column(&read_file(&directory.join(&file_gl))?, &file_gl)?;
    let node_labels = parse_int_column(&read_file(&directory.join(&file_nl))?, &file_nl)?;
    let edge_pairs = parse_pair_column(&read_file(&directory.join(&file_a))?, &file_a)?;

    let num_nodes = indicator.len();
    let num_graphs = graph_labels.len();
    if num_graphs == 0 {
        return Err(TuDataError::EmptyDataset(name.to_string()));
    }
    if node_labels.len() != num_nodes {
        return Err(TuDataError::MalformedLine {
            file: file_nl.clone(),
            line: node_labels.len().min(num_nodes) + 1,
            content: String::new(),
            reason: format!(
                "node label count {} does not match indicator length {}",
                node_labels.len(),
                num_nodes
            ),
        });
    }

    // Graph membership and local index of every global node.
    let mut graph_of = vec![0usize; num_nodes];
    let mut local_of = vec![0u32; num_nodes];
    let mut sizes = vec![0usize; num_graphs];
    for (node, &gid) in indicator.iter().enumerate() {
        if gid < 1 || gid as usize > num_graphs {
            return Err(TuDataError::IndexOutOfRange {
                file: file_ind.clone(),
                line: node + 1,
                id: gid,
                num_nodes: num_graphs,
            });
        }
        let g = gid as usize - 1;
        graph_of[node] = g;
        local_of[node] = sizes[g] as u32;
        sizes[g] += 1;
    }

    let mut edge_sets: Vec<BTreeSet<(u32, u32)>> = vec![BTreeSet::new(); num_graphs];
    let mut dropped_selfloops = 0usize;
    for (a, b, line) in edge_pairs {
        for &id in &[a, b] {
            if id < 1 || id as usize > num_nodes {
                return Err(TuDataError::IndexOutOfRange {
                    file: file_a.clone(),
                    line,
                    id,
                    num_nodes,
                });
            }
        }
        let (u, v) = (a as usize - 1, b as usize - 1);
        if graph_of[u] != graph_of[v] {
            return Err(TuDataError::MalformedLine {
                file: file_a.clone(),
                line,
                content: format!("{a}, {b}"),
                reason: format!(
                    "endpoints belong to different graphs ({} and {})",
                    graph_of[u] + 1,
                    graph_of[v] + 1
                ),
            });
        }
        if u == v {
            dropped_selfloops += 1;
            continue;
        }
        let (lu, lv) = (local_of[u], local_of[v]);
        let key = (lu.min(lv), lu.max(lv));
        edge_sets[graph_of[u]].insert(key);
    }
    if dropped_selfloops > 0 {
        log::warn!("{name}: dropped {dropped_selfloops} self-loop edge line(s)");
    }

    let mut vertex_labels: Vec<Vec<i64>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    for (node, &label) in node_labels.iter().enumerate() {
        vertex_labels[graph_of[node]].push(label);
    }

    let graphs: Vec<LabeledGraph> = (0..num_graphs)
        .map(|g| LabeledGraph {
            graph_id: g + 1,
            num_vertices: sizes[g],
            edges: edge_sets[g].iter().copied().collect(),
            vertex_labels: std::mem::take(&mut vertex_labels[g]),
            class_label: graph_labels[g],
        })
        .collect();

    let label_universe: Vec<i64> = graphs
        .iter()
        .flat_map(|g| g.vertex_labels.iter().copied())
        .collect::<BTreeSet<i64>>()
        .into_iter()
        .collect();
    let class_universe: Vec<i64> = graphs
        .iter()
        .map(|g| g.class_label)
        .collect::<BTreeSet<i64>>()
        .into_iter()
        .collect();

    Ok(LabeledGraphDataset {
        name: name.to_string(),
        graphs,
        label_universe,
        class_universe,
    })
}

/// Writes a dataset back out in the TU layout. Each undirected edge becomes
/// two directed lines, so a reload reproduces the dataset exactly.
pub fn save_dataset(dataset: &LabeledGraphDataset, directory: &Path) -> Result<(), TuDataError> {
    fs::create_dir_all(directory).map_err(|source| TuDataError::Io {
        path: directory.to_path_buf(),
        source,
    })?;
    let name = &dataset.name;
    let write = |file: String, content: String| -> Result<(), TuDataError> {
        let path = directory.join(file);
        let mut f = fs::File::create(&path).map_err(|source| TuDataError::Io {
            path: path.clone(),
            source,
        })?;
        f.write_all(content.as_bytes())
            .map_err(|source| TuDataError::Io { path, source })
    };

    let mut offsets = Vec::with_capacity(dataset.graphs.len());
    let mut total = 0usize;
    for g in &dataset.graphs {
        offsets.push(total);
        total += g.num_vertices;
    }

    let mut a = String::new();
    let mut indicator = String::new();
    let mut graph_labels = String::new();
    let mut node_labels = String::new();
    for (idx, g) in dataset.graphs.iter().enumerate() {
        let base = offsets[idx] + 1;
        for &(u, v) in &g.edges {
            a.push_str(&format!("{}, {}\n", base + u as usize, base + v as usize));
            a.push_str(&format!("{}, {}\n", base + v as usize, base + u as usize));
        }
        for label in &g.vertex_labels {
            indicator.push_str(&format!("{}\n", idx + 1));
            node_labels.push_str(&format!("{label}\n"));
        }
        graph_labels.push_str(&format!("{}\n", g.class_label));
    }
    write(format!("{name}_A.txt"), a)?;
    write(format!("{name}_graph_indicator.txt"), indicator)?;
    write(format!("{name}_graph_labels.txt"), graph_labels)?;
    write(format!("{name}_node_labels.txt"), node_labels)?;
    Ok(())
}
