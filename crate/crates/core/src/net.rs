//! Directed network ingestion from edge-list text.
//!
//! Nodes are indexed densely in order of first appearance across all endpoint
//! occurrences, so the same input text always produces the same indexing.
//! Duplicate edges collapse to one and self-loops are dropped; both are
//! counted in the load report.

use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("empty network")]
    Empty,
    #[error("invalid network: {0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A directed graph with display labels and optional plotting coordinates.
///
/// Invariants: edge endpoints in `[0, n)`, no duplicate pairs, no self-loops,
/// exactly one distinct label per node. Coordinates are reporting metadata
/// only and never enter the dynamics.
#[derive(Debug, Clone)]
pub struct Network {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    coords: Vec<Option<(f64, f64)>>,
}

impl Network {
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, NetError> {
        let n = labels.len();
        if n == 0 {
            return Err(NetError::Empty);
        }
        let mut seen = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if let Some(prev) = seen.insert(l.clone(), i) {
                return Err(NetError::Invalid(format!(
                    "duplicate label {l:?} at indices {prev} and {i}"
                )));
            }
        }
        let mut pair_seen = std::collections::HashSet::with_capacity(edges.len());
        for &(s, d) in &edges {
            if s >= n || d >= n {
                return Err(NetError::Invalid(format!("edge ({s},{d}) out of range for n={n}")));
            }
            if s == d {
                return Err(NetError::Invalid(format!("self-loop at node {s}")));
            }
            if !pair_seen.insert((s, d)) {
                return Err(NetError::Invalid(format!("duplicate edge ({s},{d})")));
            }
        }
        Ok(Self { labels, edges, coords: vec![None; n] })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn coords(&self) -> &[Option<(f64, f64)>] {
        &self.coords
    }

    /// Out-degree per node computed from the edge list.
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n()];
        for &(s, _) in &self.edges {
            deg[s] += 1;
        }
        deg
    }

    /// Renders back to edge-list CSV (one `src,dst` line per edge).
    pub fn to_edge_list_csv(&self) -> String {
        let mut out = String::new();
        for &(s, d) in &self.edges {
            out.push_str(&self.labels[s]);
            out.push(',');
            out.push_str(&self.labels[d]);
            out.push('\n');
        }
        out
    }

    /// Attaches (longitude, latitude) pairs by label; returns how many nodes
    /// were matched.
    pub fn attach_coords(&mut self, metadata: &[(String, f64, f64)]) -> usize {
        let index: HashMap<&str, usize> =
            self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut matched = 0;
        for (label, lon, lat) in metadata {
            if let Some(&i) = index.get(label.as_str()) {
                self.coords[i] = Some((*lon, *lat));
                matched += 1;
            }
        }
        matched
    }
}

/// Counts of what ingestion cleaned up or noticed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub duplicates: usize,
    pub self_loops: usize,
    pub isolated: usize,
}

/// Ingestion options; the defaults match the documented file format.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Lines starting with this prefix are skipped.
    pub comment_prefix: char,
    /// Skip a first line that reads exactly `src,dst` (case-insensitive).
    pub detect_header: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self { comment_prefix: '#', detect_header: true }
    }
}

/// Parses edge-list CSV: one `src_label,dst_label` per line.
///
/// Node indices are assigned by first appearance across all endpoints, even
/// for edges that are later dropped as duplicates or self-loops.
pub fn load_edge_list<R: BufRead>(
    reader: R,
    options: &LoadOptions,
) -> Result<(Network, LoadReport), NetError> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut pair_seen = std::collections::HashSet::new();
    let mut report = LoadReport::default();

    let intern = |label: &str, labels: &mut Vec<String>, index: &mut HashMap<String, usize>| {
        if let Some(&i) = index.get(label) {
            i
        } else {
            let i = labels.len();
            labels.push(label.to_string());
            index.insert(label.to_string(), i);
            i
        }
    };

    let mut first_content_line = true;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(options.comment_prefix) {
            continue;
        }
        if first_content_line {
            first_content_line = false;
            if options.detect_header && trimmed.eq_ignore_ascii_case("src,dst") {
                continue;
            }
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(NetError::Parse {
                line: lineno,
                msg: format!("expected exactly two fields, found {}", fields.len()),
            });
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(NetError::Parse { line: lineno, msg: "empty label field".into() });
        }
        let s = intern(fields[0], &mut labels, &mut index);
        let d = intern(fields[1], &mut labels, &mut index);
        if s == d {
            report.self_loops += 1;
            continue;
        }
        if !pair_seen.insert((s, d)) {
            report.duplicates += 1;
            continue;
        }
        edges.push((s, d));
    }

    if labels.is_empty() {
        return Err(NetError::Empty);
    }

    let mut touched = vec![false; labels.len()];
    for &(s, d) in &edges {
        touched[s] = true;
        touched[d] = true;
    }
    report.isolated = touched.iter().filter(|t| !**t).count();

    let net = Network::new(labels, edges)?;
    Ok((net, report))
}

/// Parses node metadata CSV: `label,lon,lat` per line, optional header.
pub fn load_node_metadata<R: BufRead>(reader: R) -> Result<Vec<(String, f64, f64)>, NetError> {
    let mut rows = Vec::new();
    let mut first = true;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if first {
            first = false;
            if trimmed.eq_ignore_ascii_case("label,lon,lat") {
                continue;
            }
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(NetError::Parse {
                line: lineno,
                msg: format!("expected label,lon,lat, found {} fields", fields.len()),
            });
        }
        let lon: f64 = fields[1]
            .parse()
            .map_err(|_| NetError::Parse { line: lineno, msg: "bad longitude".into() })?;
        let lat: f64 = fields[2]
            .parse()
            .map_err(|_| NetError::Parse { line: lineno, msg: "bad latitude".into() })?;
        rows.push((fields[0].to_string(), lon, lat));
    }
    Ok(rows)
}

/// Binary adjacency with the column-source convention:
/// `a[i][j] = 1` exactly when the network has an edge from node j to node i.
#[derive(Debug, Clone)]
pub struct AdjacencyMatrix {
    n: usize,
    a: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.a[i * self.n + j]
    }

    pub fn entries(&self) -> &[u8] {
        &self.a
    }
}

/// Builds the adjacency matrix of a network: `a[dst][src] = 1` per edge.
pub fn adjacency(net: &Network) -> AdjacencyMatrix {
    let n = net.n();
    let mut a = vec![0u8; n * n];
    for &(s, d) in net.edges() {
        a[d * n + s] = 1;
    }
    AdjacencyMatrix { n, a }
}

/// Column sums of the adjacency matrix: connections leaving each node.
pub fn out_degrees(a: &AdjacencyMatrix) -> Vec<usize> {
    let n = a.n;
    let mut deg = vec![0usize; n];
    for j in 0..n {
        for i in 0..n {
            deg[j] += a.a[i * n + j] as usize;
        }
    }
    deg
}
