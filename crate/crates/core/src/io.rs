//! Graph and partition files.
//!
//! METIS: optional `%` comment lines, a header `n m [fmt]`, then one line per
//! node listing its 1-indexed neighbors, each followed by the edge weight when
//! `fmt` is `1`. A self-loop is listed once, in its node's line. Edge lists:
//! `u v [w]` per line, `#` or `%` comments, arbitrary nonnegative ids.
//! Partition files hold one community id per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeList, Graph, NodeId};
use crate::louvain::coarsen;
use crate::parallel::Workers;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFileHeader {
    pub nodes: usize,
    pub edges: usize,
    pub edge_weights: bool,
}

impl GraphFileHeader {
    fn parse(line: &str, path: &Path, line_no: usize) -> Result<Self> {
        let err = |message: String| Error::Parse {
            path: path.to_owned(),
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(err(format!("expected header `n m [fmt]`, found `{line}`")));
        }
        let nodes = parse_usize(fields[0]).map_err(&err)?;
        let edges = parse_usize(fields[1]).map_err(&err)?;
        let edge_weights = match fields.get(2) {
            None => false,
            Some(fmt) => match *fmt {
                "0" | "00" | "000" => false,
                "1" | "01" | "001" => true,
                "10" | "11" | "010" | "011" | "100" | "101" | "110" | "111" => {
                    return Err(err(format!(
                        "fmt `{fmt}` declares node weights or sizes, which are not supported"
                    )))
                }
                other => return Err(err(format!("unknown fmt `{other}`"))),
            },
        };
        if fields.len() > 3 {
            return Err(err("multi-constraint node weights are not supported".into()));
        }
        Ok(Self {
            nodes,
            edges,
            edge_weights,
        })
    }
}

fn parse_usize(s: &str) -> std::result::Result<usize, String> {
    s.parse::<usize>()
        .map_err(|e| format!("invalid integer `{s}`: {e}"))
}

fn parse_weight(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(w) if w > 0.0 && w.is_finite() => Ok(w),
        Ok(w) => Err(format!("edge weight must be positive, found {w}")),
        Err(e) => Err(format!("invalid weight `{s}`: {e}")),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Reads lines into a reused buffer, yielding 1-based line numbers.
struct Lines<R> {
    reader: R,
    buf: String,
    line_no: usize,
    path: PathBuf,
}

impl<R: BufRead> Lines<R> {
    fn new(reader: R, path: &Path) -> Self {
        Self {
            reader,
            buf: String::new(),
            line_no: 0,
            path: path.to_owned(),
        }
    }

    fn next_line(&mut self) -> Result<Option<(usize, &str)>> {
        self.buf.clear();
        let read = self
            .reader
            .read_line(&mut self.buf)
            .map_err(|e| Error::io(&self.path, e))?;
        if read == 0 {
            return Ok(None);
        }
        self.line_no += 1;
        Ok(Some((self.line_no, self.buf.trim_end_matches(['\n', '\r']))))
    }
}

pub fn read_metis(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let mut lines = Lines::new(open(path)?, path);
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_owned(),
        line,
        message,
    };

    let header = loop {
        match lines.next_line()? {
            None => {
                return Err(Error::Format {
                    path: path.to_owned(),
                    message: "missing header".into(),
                })
            }
            Some((_, l)) if l.trim_start().starts_with('%') => continue,
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((line_no, l)) => break GraphFileHeader::parse(l, path, line_no)?,
        }
    };

    // each undirected pair as (min, max, weight), once per listing
    let mut entries: Vec<(NodeId, NodeId, f64)> = Vec::with_capacity(2 * header.edges);
    let mut u = 0;
    while u < header.nodes {
        let Some((line_no, line)) = lines.next_line()? else {
            return Err(Error::Format {
                path: path.to_owned(),
                message: format!("expected {} node lines, found {u}", header.nodes),
            });
        };
        if line.trim_start().starts_with('%') {
            continue;
        }
        let mut fields = line.split_whitespace();
        while let Some(tok) = fields.next() {
            let v = parse_usize(tok).map_err(|m| parse_err(line_no, m))?;
            if v == 0 || v > header.nodes {
                return Err(parse_err(
                    line_no,
                    format!("neighbor {v} outside 1..={}", header.nodes),
                ));
            }
            let v = v - 1;
            let w = if header.edge_weights {
                let tok = fields
                    .next()
                    .ok_or_else(|| parse_err(line_no, format!("missing weight after neighbor {}", v + 1)))?;
                parse_weight(tok).map_err(|m| parse_err(line_no, m))?
            } else {
                1.0
            };
            entries.push((u.min(v), u.max(v), w));
        }
        u += 1;
    }
    while let Some((line_no, line)) = lines.next_line()? {
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('%') {
            return Err(parse_err(line_no, "content after the last node line".into()));
        }
    }

    entries.sort_by_key(|e| (e.0, e.1));
    let mut edges = EdgeList::new();
    let mut i = 0;
    while i < entries.len() {
        let (a, b, w) = entries[i];
        let run = entries[i..]
            .iter()
            .take_while(|e| e.0 == a && e.1 == b)
            .count();
        let expected = if a == b { 1 } else { 2 };
        if run != expected {
            return Err(Error::Format {
                path: path.to_owned(),
                message: format!(
                    "edge {{{}, {}}} listed {run} times, expected {expected}",
                    a + 1,
                    b + 1
                ),
            });
        }
        if a != b && entries[i + 1].2 != w {
            return Err(Error::Format {
                path: path.to_owned(),
                message: format!("asymmetric weights on edge {{{}, {}}}", a + 1, b + 1),
            });
        }
        edges.0.push(Edge::new(a, b, w));
        i += run;
    }
    if edges.len() != header.edges {
        return Err(Error::Format {
            path: path.to_owned(),
            message: format!(
                "header declares {} edges, adjacency lists hold {}",
                header.edges,
                edges.len()
            ),
        });
    }
    Graph::from_edges(header.nodes, &edges)
}

/// Writes METIS; with `weighted` unset all weights must be 1.
pub fn write_metis(g: &Graph, path: impl AsRef<Path>, weighted: bool) -> Result<()> {
    let path = path.as_ref();
    let io = |e| Error::io(path, e);
    let mut out = create(path)?;
    if !weighted && g.edges().any(|(_, _, w)| w != 1.0) {
        return Err(Error::InvalidParameter(
            "graph has non-unit weights; write it with edge weights".into(),
        ));
    }
    if weighted {
        writeln!(out, "{} {} 1", g.node_count(), g.edge_count()).map_err(io)?;
    } else {
        writeln!(out, "{} {}", g.node_count(), g.edge_count()).map_err(io)?;
    }
    let mut line = String::new();
    for u in 0..g.node_count() {
        line.clear();
        for (v, w) in g.neighbors(u) {
            if !line.is_empty() {
                line.push(' ');
            }
            line.push_str(&(v + 1).to_string());
            if weighted {
                line.push(' ');
                line.push_str(&w.to_string());
            }
        }
        writeln!(out, "{line}").map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Whether any weight differs from 1.
pub fn is_weighted(g: &Graph) -> bool {
    g.edges().any(|(_, _, w)| w != 1.0)
}

/// A graph read from an edge list with the original id of every dense node.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeListGraph {
    pub graph: Graph,
    pub original_ids: Vec<u64>,
}

/// Reads an edge list. Ids are densified in ascending order of the original
/// id, so nodes that appear in no edge are dropped.
pub fn read_edge_list(path: impl AsRef<Path>, merge_duplicates: bool) -> Result<EdgeListGraph> {
    let path = path.as_ref();
    let mut lines = Lines::new(open(path)?, path);
    let mut raw: Vec<(u64, u64, f64)> = Vec::new();
    while let Some((line_no, line)) = lines.next_line()? {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.to_owned(),
            line: line_no,
            message,
        };
        let fields: Vec<&str> = t.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(err(format!("expected `u v [w]`, found `{t}`")));
        }
        let id = |s: &str| {
            s.parse::<u64>()
                .map_err(|e| err(format!("invalid node id `{s}`: {e}")))
        };
        let u = id(fields[0])?;
        let v = id(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => parse_weight(s).map_err(err)?,
            None => 1.0,
        };
        raw.push((u, v, w));
    }

    let mut ids: Vec<u64> = raw.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let dense = |x: u64| ids.binary_search(&x).expect("id collected above");
    let edges: EdgeList = raw
        .iter()
        .map(|&(u, v, w)| (dense(u), dense(v), w))
        .collect();
    let graph = if merge_duplicates {
        Graph::from_edges_merged(ids.len(), &edges)
    } else {
        Graph::from_edges(ids.len(), &edges).map_err(|e| match e {
            Error::DuplicateEdge { u, v } => Error::Format {
                path: path.to_owned(),
                message: format!(
                    "duplicate edge {{{}, {}}}; enable duplicate merging to sum weights",
                    ids[u], ids[v]
                ),
            },
            other => other,
        })
    }?;
    Ok(EdgeListGraph {
        graph,
        original_ids: ids,
    })
}

/// Writes `u v w` lines, one per undirected edge, with `u <= v`.
pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |e| Error::io(path, e);
    let mut out = create(path)?;
    writeln!(out, "# nodes {} edges {}", g.node_count(), g.edge_count()).map_err(io)?;
    for (u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}").map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn write_partition(z: &Partition, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |e| Error::io(path, e);
    let mut out = create(path)?;
    for &c in z.assignment() {
        writeln!(out, "{c}").map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn read_partition(path: impl AsRef<Path>) -> Result<Partition> {
    let path = path.as_ref();
    let mut lines = Lines::new(open(path)?, path);
    let mut assignment = Vec::new();
    while let Some((line_no, line)) = lines.next_line()? {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let c = parse_usize(t).map_err(|message| Error::Parse {
            path: path.to_owned(),
            line: line_no,
            message,
        })?;
        assignment.push(c);
    }
    Ok(Partition::from_vec(assignment))
}

/// Path of the community-size sidecar written next to a community graph.
pub fn sizes_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".sizes");
    PathBuf::from(s)
}

/// Writes the contracted graph of `z` as weighted METIS and a sidecar of
/// `community_id size` lines.
pub fn write_community_graph(
    g: &Graph,
    z: &Partition,
    path: impl AsRef<Path>,
    workers: &Workers,
) -> Result<()> {
    let path = path.as_ref();
    let contracted = coarsen(g, z, workers)?;
    write_metis(&contracted.coarse, path, true)?;
    let sidecar = sizes_path(path);
    let io = |e| Error::io(&sidecar, e);
    let mut out = create(&sidecar)?;
    for (c, size) in z.community_sizes().into_iter().enumerate() {
        writeln!(out, "{c} {size}").map_err(io)?;
    }
    out.flush().map_err(io)
}
