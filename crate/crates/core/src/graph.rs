//! Simple undirected graphs and the edge-list reader.
//!
//! The accepted text format is line oriented. Lines starting with `%` or `#`
//! are comments, every other non-blank line carries at least two whitespace
//! separated node labels. Extra columns (weights, timestamps) are ignored.
//! Labels are arbitrary strings and get dense indices in order of first
//! appearance.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use crate::error::{Error, Result};

/// An unweighted simple graph with dense `0..n` vertex indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
    // CSR adjacency
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    labels: Vec<String>,
    label_map: HashMap<String, usize>,
}

impl Graph {
    /// Builds a graph over `node_count` vertices labelled `"0"`, `"1"`, ...
    ///
    /// Self-loops are dropped and duplicate edges collapsed, same as the
    /// text reader.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        for &(u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::EdgeOutOfRange {
                    u,
                    v,
                    n: node_count,
                });
            }
        }
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Self::build(labels, edges.iter().copied())
    }

    fn build(labels: Vec<String>, raw: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let node_count = labels.len();
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for (u, v) in raw {
            if u == v {
                continue;
            }
            let e = (u.min(v), u.max(v));
            if seen.insert(e) {
                edges.push(e);
            }
        }
        if edges.is_empty() {
            return Err(Error::NoEdges);
        }

        let mut degrees = vec![0usize; node_count];
        for &(u, v) in &edges {
            degrees[u] += 1;
            degrees[v] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degrees {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0usize; 2 * edges.len()];
        for &(u, v) in &edges {
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        let label_map = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();

        Ok(Self {
            node_count,
            edges,
            degrees,
            offsets,
            neighbors,
            labels,
            label_map,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in first-appearance order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Original label of each dense index.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.label_map.get(label).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degrees[u] <= self.degrees[v] {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).contains(&b)
    }

    /// Writes the cleaned graph back out as an edge list using the original labels.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&self.labels[u]);
            out.push(' ');
            out.push_str(&self.labels[v]);
            out.push('\n');
        }
        out
    }
}

/// Parses edge-list text into a [`Graph`].
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    parse_lines(text.lines().map(|l| Ok::<_, Error>(l.to_owned())))
}

/// Same as [`parse_edge_list`] but streams lines from a reader.
pub fn read_edge_list<R: BufRead>(reader: R) -> std::io::Result<Result<Graph>> {
    let mut lines = Vec::new();
    for line in reader.lines() {
        lines.push(line?);
    }
    Ok(parse_lines(lines.into_iter().map(Ok)))
}

fn parse_lines<I>(lines: I) -> Result<Graph>
where
    I: IntoIterator<Item = Result<String>>,
{
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut raw = Vec::new();

    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(label) {
            return i;
        }
        let i = labels.len();
        labels.push(label.to_owned());
        index.insert(label.to_owned(), i);
        i
    };

    for (lineno, line) in lines.into_iter().enumerate() {
        let line = line?;
        // `lines()` strips "\n" and "\r\n"; a stray trailing '\r' is whitespace anyway.
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::MalformedLine {
                line: lineno + 1,
                tokens: 1,
            });
        };
        let u = intern(a, &mut labels);
        let v = intern(b, &mut labels);
        raw.push((u, v));
    }

    Graph::build(labels, raw)
}
