//! TSV node and edge tables.
//!
//! A graph directory holds `nodes.tsv` (`node_id<TAB>epoch[<TAB>attribute]`)
//! and `edges.tsv` (`src<TAB>dst`). Node ids in input files may be any
//! non-negative integers; they are renumbered densely by `(epoch, node_id)`
//! so that the in-memory id is the arrival index.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalDigraph};

pub const NODES_FILE: &str = "nodes.tsv";
pub const EDGES_FILE: &str = "edges.tsv";

/// Problems found while ingesting an edge list. None of them are fatal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
    /// Edges whose source arrived before their target. They are kept.
    pub temporal_violations: usize,
}

/// A loaded graph plus the external id of every node.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: TemporalDigraph,
    pub external_ids: Vec<u64>,
    pub report: IngestReport,
}

fn tsv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(true)
        .flexible(true)
        .quoting(false)
        .from_reader(file))
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn read_record(path: &Path, result: csv::Result<csv::StringRecord>) -> Result<csv::StringRecord> {
    result.map_err(|e| {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        parse_error(path, line, e.to_string())
    })
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    record: &csv::StringRecord,
    idx: usize,
    name: &str,
) -> Result<T> {
    let raw = record
        .get(idx)
        .ok_or_else(|| parse_error(path, record_line(record), format!("missing column `{name}`")))?;
    raw.trim()
        .parse()
        .map_err(|_| parse_error(path, record_line(record), format!("bad {name} `{raw}`")))
}

/// Reads a node table and an edge list.
pub fn read_tables(nodes_path: &Path, edges_path: &Path) -> Result<LoadedGraph> {
    let mut rows: Vec<(i64, u64, Option<String>)> = Vec::new();
    let mut reader = tsv_reader(nodes_path)?;
    let header = reader.headers()?.clone();
    let header: Vec<&str> = header.iter().map(str::trim).collect();
    if header.len() < 2 || header[0] != "node_id" || header[1] != "epoch" {
        return Err(parse_error(
            nodes_path,
            1,
            "expected header `node_id<TAB>epoch[<TAB>attribute]`",
        ));
    }
    for result in reader.records() {
        let record = read_record(nodes_path, result)?;
        let id: u64 = parse_field(nodes_path, &record, 0, "node_id")?;
        let epoch: i64 = parse_field(nodes_path, &record, 1, "epoch")?;
        let attr = record
            .get(2)
            .filter(|s| !s.is_empty())
            .map(str::to_owned);
        rows.push((epoch, id, attr));
    }
    rows.sort_by_key(|&(epoch, id, _)| (epoch, id));

    let mut graph = TemporalDigraph::new();
    let mut by_external: HashMap<u64, NodeId> = HashMap::with_capacity(rows.len());
    let mut external_ids = Vec::with_capacity(rows.len());
    for (epoch, id, attr) in &rows {
        let v = graph.add_node(*epoch, attr.as_deref());
        if by_external.insert(*id, v).is_some() {
            return Err(parse_error(nodes_path, 0, format!("duplicate node_id {id}")));
        }
        external_ids.push(*id);
    }

    let mut report = IngestReport::default();
    let mut reader = tsv_reader(edges_path)?;
    let header = reader.headers()?.clone();
    if header.len() < 2 || header[0].trim() != "src" || header[1].trim() != "dst" {
        return Err(parse_error(edges_path, 1, "expected header `src<TAB>dst`"));
    }
    for result in reader.records() {
        let record = read_record(edges_path, result)?;
        let line = record_line(&record);
        let endpoint = |idx: usize, name: &str| -> Result<NodeId> {
            let id: u64 = parse_field(edges_path, &record, idx, name)?;
            by_external
                .get(&id)
                .copied()
                .ok_or_else(|| parse_error(edges_path, line, format!("unknown node {id}")))
        };
        let src = endpoint(0, "src")?;
        let dst = endpoint(1, "dst")?;
        if src == dst {
            report.self_loops += 1;
            continue;
        }
        if !graph.add_edge(src, dst)? {
            report.duplicate_edges += 1;
            continue;
        }
        if src < dst {
            report.temporal_violations += 1;
        }
    }
    if report.duplicate_edges + report.self_loops > 0 {
        log::warn!(
            "{}: dropped {} duplicate edges and {} self-loops",
            edges_path.display(),
            report.duplicate_edges,
            report.self_loops
        );
    }
    Ok(LoadedGraph {
        graph,
        external_ids,
        report,
    })
}

/// Reads `nodes.tsv` and `edges.tsv` from a graph directory.
pub fn load_graph(dir: impl AsRef<Path>) -> Result<LoadedGraph> {
    let dir = dir.as_ref();
    read_tables(&dir.join(NODES_FILE), &dir.join(EDGES_FILE))
}

fn tsv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .delimiter(b'\t')
        .quote_style(csv::QuoteStyle::Never)
        .from_writer(file))
}

/// Writes the node table sorted by id. The attribute column is written only
/// for attributed graphs; missing attributes become empty fields.
pub fn write_nodes(graph: &TemporalDigraph, path: &Path) -> Result<()> {
    let mut w = tsv_writer(path)?;
    let attributed = graph.is_attributed();
    if attributed {
        w.write_record(["node_id", "epoch", "attribute"])?;
    } else {
        w.write_record(["node_id", "epoch"])?;
    }
    for v in graph.nodes() {
        let id = v.to_string();
        let epoch = graph.epoch(v).to_string();
        if attributed {
            let attr = graph.attribute_label(v).unwrap_or("");
            w.write_record([id.as_str(), epoch.as_str(), attr])?;
        } else {
            w.write_record([id.as_str(), epoch.as_str()])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes the edge list sorted by `(src, dst)`.
pub fn write_edges(graph: &TemporalDigraph, path: &Path) -> Result<()> {
    let mut w = tsv_writer(path)?;
    w.write_record(["src", "dst"])?;
    for (s, d) in graph.sorted_edges() {
        w.write_record([s.to_string(), d.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `nodes.tsv` and `edges.tsv` into `dir`, creating it if needed.
pub fn save_graph(graph: &TemporalDigraph, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_nodes(graph, &dir.join(NODES_FILE))?;
    write_edges(graph, &dir.join(EDGES_FILE))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn ingest_renumbers_and_counts_problems() {
        let dir = tempfile::tempdir().unwrap();
        let nodes = write(
            dir.path(),
            "nodes.tsv",
            "node_id\tepoch\tattribute\n10\t1999\tA\n7\t1995\tB\n3\t1999\t\n",
        );
        let edges = write(
            dir.path(),
            "edges.tsv",
            "src\tdst\n10\t7\n10\t7\n3\t3\n3\t10\n7\t3\n",
        );
        let loaded = read_tables(&nodes, &edges).unwrap();
        let g = &loaded.graph;
        assert_eq!(loaded.external_ids, vec![7, 3, 10]);
        assert_eq!(g.attribute_label(NodeId(0)), Some("B"));
        assert_eq!(g.attribute_label(NodeId(1)), None);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(
            loaded.report,
            IngestReport {
                duplicate_edges: 1,
                self_loops: 1,
                temporal_violations: 2,
            }
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let nodes = write(dir.path(), "nodes.tsv", "node_id\tepoch\n0\t1\n1\tx\n");
        let edges = write(dir.path(), "edges.tsv", "src\tdst\n");
        match read_tables(&nodes, &edges) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let nodes = write(dir.path(), "nodes.tsv", "node_id\tepoch\n0\t1\n1\t2\n");
        let edges = write(dir.path(), "edges.tsv", "src\tdst\n1\t0\n1\t5\n");
        match read_tables(&nodes, &edges) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("unknown node 5"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn save_then_load_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = TemporalDigraph::new();
        g.add_node(1990, Some("x"));
        g.add_node(1991, None);
        g.add_node(1991, Some("y"));
        g.add_edge(NodeId(2), NodeId(0)).unwrap();
        g.add_edge(NodeId(1), NodeId(0)).unwrap();
        g.add_edge(NodeId(2), NodeId(1)).unwrap();
        save_graph(&g, dir.path().join("a")).unwrap();
        let loaded = load_graph(dir.path().join("a")).unwrap();
        save_graph(&loaded.graph, dir.path().join("b")).unwrap();
        for f in [NODES_FILE, EDGES_FILE] {
            let a = fs::read(dir.path().join("a").join(f)).unwrap();
            let b = fs::read(dir.path().join("b").join(f)).unwrap();
            assert_eq!(a, b, "{f}");
        }
        let nodes = fs::read_to_string(dir.path().join("a").join(NODES_FILE)).unwrap();
        assert_eq!(nodes, "node_id\tepoch\tattribute\n0\t1990\tx\n1\t1991\t\n2\t1991\ty\n");
    }
}
