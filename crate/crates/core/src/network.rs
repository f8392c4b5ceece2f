//! Directed acyclic sum-networks.
//!
//! A [`SumNetwork`] is a DAG with an ordered list of sources and an ordered
//! list of terminals. Edges are unit capacity and identified by their
//! position in the edge list, so parallel edges are allowed.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap for [`SumNetwork::enumerate_paths`].
pub const DEFAULT_PATH_LIMIT: usize = 1_000_000;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {vertex:?} referenced by {context}")]
    UnknownVertex { vertex: String, context: String },
    #[error("the edge relation has a cycle through {0:?}")]
    CycleDetected(String),
    #[error("network has no sources")]
    NoSources,
    #[error("network has no terminals")]
    NoTerminals,
    #[error("vertex {0:?} is listed more than once among sources and terminals")]
    RepeatedEndpoint(String),
    #[error("source {0:?} has no outgoing edge")]
    IsolatedSource(String),
    #[error("terminal {0:?} has no incoming edge")]
    IsolatedTerminal(String),
    #[error("more than {limit} paths from {from:?} to {to:?}")]
    PathLimitExceeded {
        from: String,
        to: String,
        limit: usize,
    },
    #[error("invalid network JSON: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

/// A simple directed path, with the edge used at each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl NetPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Outcome of [`SumNetwork::all_pairs_connected`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    AllConnected,
    /// First (source, terminal) pair, in list order, with no directed path.
    Disconnected {
        source: VertexId,
        terminal: VertexId,
    },
}

impl Connectivity {
    pub fn is_connected(self) -> bool {
        matches!(self, Connectivity::AllConnected)
    }
}

/// How [`SumNetwork::topological_order_with`] breaks ties between vertices
/// at the same depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    NameAscending,
    NameDescending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumNetwork {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    sources: Vec<VertexId>,
    terminals: Vec<VertexId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    /// Position of each vertex in the source list, if any.
    source_pos: Vec<Option<usize>>,
    terminal_pos: Vec<Option<usize>>,
    topo: Vec<VertexId>,
}

/// Name comparison that orders embedded numbers numerically ("t2" < "t10").
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(&cb) {
        let ord = if *da && *db {
            let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        } else {
            sa.cmp(sb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

impl SumNetwork {
    /// Builds and validates a network from vertex names and name pairs.
    pub fn new<S: AsRef<str>>(
        vertices: &[S],
        edges: &[(S, S)],
        sources: &[S],
        terminals: &[S],
    ) -> Result<Self, NetworkError> {
        let names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(NetworkError::DuplicateVertex(n.clone()));
            }
        }
        let lookup = |name: &str, context: String| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| NetworkError::UnknownVertex {
                    vertex: name.to_string(),
                    context,
                })
        };
        let mut edge_list = Vec::with_capacity(edges.len());
        for (i, (t, h)) in edges.iter().enumerate() {
            let tail = lookup(t.as_ref(), format!("edge {i}"))?;
            let head = lookup(h.as_ref(), format!("edge {i}"))?;
            edge_list.push(Edge { tail, head });
        }
        let srcs = sources
            .iter()
            .enumerate()
            .map(|(i, s)| lookup(s.as_ref(), format!("source {i}")))
            .collect::<Result<Vec<_>, _>>()?;
        let terms = terminals
            .iter()
            .enumerate()
            .map(|(i, s)| lookup(s.as_ref(), format!("terminal {i}")))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(names, index, edge_list, srcs, terms)
    }

    fn from_parts(
        names: Vec<String>,
        index: HashMap<String, VertexId>,
        edges: Vec<Edge>,
        sources: Vec<VertexId>,
        terminals: Vec<VertexId>,
    ) -> Result<Self, NetworkError> {
        let nv = names.len();
        if sources.is_empty() {
            return Err(NetworkError::NoSources);
        }
        if terminals.is_empty() {
            return Err(NetworkError::NoTerminals);
        }
        let mut source_pos = vec![None; nv];
        let mut terminal_pos = vec![None; nv];
        let mut seen = vec![false; nv];
        for (i, &s) in sources.iter().enumerate() {
            if std::mem::replace(&mut seen[s], true) {
                return Err(NetworkError::RepeatedEndpoint(names[s].clone()));
            }
            source_pos[s] = Some(i);
        }
        for (i, &t) in terminals.iter().enumerate() {
            if std::mem::replace(&mut seen[t], true) {
                return Err(NetworkError::RepeatedEndpoint(names[t].clone()));
            }
            terminal_pos[t] = Some(i);
        }
        let mut out_edges = vec![Vec::new(); nv];
        let mut in_edges = vec![Vec::new(); nv];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.tail].push(i);
            in_edges[e.head].push(i);
        }
        if let Some(&s) = sources.iter().find(|&&s| out_edges[s].is_empty()) {
            return Err(NetworkError::IsolatedSource(names[s].clone()));
        }
        if let Some(&t) = terminals.iter().find(|&&t| in_edges[t].is_empty()) {
            return Err(NetworkError::IsolatedTerminal(names[t].clone()));
        }
        let mut net = SumNetwork {
            names,
            index,
            edges,
            sources,
            terminals,
            out_edges,
            in_edges,
            source_pos,
            terminal_pos,
            topo: Vec::new(),
        };
        net.topo = net.topological_order_with(TieBreak::NameAscending)?;
        Ok(net)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    /// Index of `v` in the source list.
    pub fn source_index(&self, v: VertexId) -> Option<usize> {
        self.source_pos[v]
    }

    pub fn terminal_index(&self, v: VertexId) -> Option<usize> {
        self.terminal_pos[v]
    }

    /// `e` from its endpoint names; the first such edge if parallel.
    pub fn find_edge(&self, tail: &str, head: &str) -> Option<EdgeId> {
        let (t, h) = (self.vertex(tail)?, self.vertex(head)?);
        self.out_edges[t]
            .iter()
            .copied()
            .find(|&e| self.edges[e].head == h)
    }

    /// The cached default topological order.
    pub fn topological_order(&self) -> &[VertexId] {
        &self.topo
    }

    /// Vertices sorted by longest-path depth, ties broken by natural name
    /// order. Depth strictly increases along every edge, so the result is
    /// topological, and layered networks come out layer by layer.
    pub fn topological_order_with(&self, tie: TieBreak) -> Result<Vec<VertexId>, NetworkError> {
        let nv = self.names.len();
        let mut indeg: Vec<usize> = self.in_edges.iter().map(Vec::len).collect();
        let mut depth = vec![0usize; nv];
        let mut queue: VecDeque<VertexId> = (0..nv).filter(|&v| indeg[v] == 0).collect();
        let mut visited = 0;
        while let Some(v) = queue.pop_front() {
            visited += 1;
            for &e in &self.out_edges[v] {
                let h = self.edges[e].head;
                depth[h] = depth[h].max(depth[v] + 1);
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push_back(h);
                }
            }
        }
        if visited != nv {
            let stuck = (0..nv)
                .filter(|&v| indeg[v] > 0)
                .min_by(|&a, &b| natural_cmp(&self.names[a], &self.names[b]))
                .expect("some vertex is on a cycle");
            return Err(NetworkError::CycleDetected(self.names[stuck].clone()));
        }
        let mut order: Vec<VertexId> = (0..nv).collect();
        order.sort_by(|&a, &b| {
            let by_name = natural_cmp(&self.names[a], &self.names[b]);
            depth[a].cmp(&depth[b]).then(match tie {
                TieBreak::NameAscending => by_name,
                TieBreak::NameDescending => by_name.reverse(),
            })
        });
        Ok(order)
    }

    /// Vertices reachable from `from` (including itself).
    pub fn reachable_from(&self, from: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.names.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.out_edges[v] {
                let h = self.edges[e].head;
                if !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        seen
    }

    pub fn all_pairs_connected(&self) -> Connectivity {
        for &s in &self.sources {
            let seen = self.reachable_from(s);
            if let Some(&t) = self.terminals.iter().find(|&&t| !seen[t]) {
                return Connectivity::Disconnected {
                    source: s,
                    terminal: t,
                };
            }
        }
        Connectivity::AllConnected
    }

    /// All simple directed paths from `from` to `to`, ordered
    /// lexicographically by vertex names (then by edge index for parallel
    /// edges). Fails once more than `limit` paths have been found.
    pub fn enumerate_paths(
        &self,
        from: VertexId,
        to: VertexId,
        limit: usize,
    ) -> Result<Vec<NetPath>, NetworkError> {
        let mut out = Vec::new();
        if from == to {
            out.push(NetPath {
                vertices: vec![from],
                edges: vec![],
            });
            return Ok(out);
        }
        let can_reach = self.can_reach(to);
        if !can_reach[from] {
            return Ok(out);
        }
        let mut sorted_out: Vec<Vec<EdgeId>> = self.out_edges.clone();
        for list in &mut sorted_out {
            list.sort_by(|&a, &b| {
                natural_cmp(
                    &self.names[self.edges[a].head],
                    &self.names[self.edges[b].head],
                )
                .then(a.cmp(&b))
            });
        }
        let mut on_path = vec![false; self.names.len()];
        let mut vertices = vec![from];
        let mut edges = Vec::new();
        on_path[from] = true;
        self.paths_dfs(
            to,
            limit,
            &sorted_out,
            &can_reach,
            &mut on_path,
            &mut vertices,
            &mut edges,
            &mut out,
        )?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn paths_dfs(
        &self,
        to: VertexId,
        limit: usize,
        sorted_out: &[Vec<EdgeId>],
        can_reach: &[bool],
        on_path: &mut [bool],
        vertices: &mut Vec<VertexId>,
        edges: &mut Vec<EdgeId>,
        out: &mut Vec<NetPath>,
    ) -> Result<(), NetworkError> {
        let v = *vertices.last().unwrap();
        for &e in &sorted_out[v] {
            let h = self.edges[e].head;
            if on_path[h] || !can_reach[h] {
                continue;
            }
            vertices.push(h);
            edges.push(e);
            if h == to {
                if out.len() == limit {
                    return Err(NetworkError::PathLimitExceeded {
                        from: self.names[vertices[0]].clone(),
                        to: self.names[to].clone(),
                        limit,
                    });
                }
                out.push(NetPath {
                    vertices: vertices.clone(),
                    edges: edges.clone(),
                });
            } else {
                on_path[h] = true;
                self.paths_dfs(
                    to, limit, sorted_out, can_reach, on_path, vertices, edges, out,
                )?;
                on_path[h] = false;
            }
            vertices.pop();
            edges.pop();
        }
        Ok(())
    }

    /// Vertices from which `to` is reachable.
    fn can_reach(&self, to: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.names.len()];
        let mut stack = vec![to];
        seen[to] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.in_edges[v] {
                let t = self.edges[e].tail;
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Same vertices, every edge flipped (keeping its index), sources and
    /// terminals swapped.
    pub fn reverse(&self) -> SumNetwork {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                tail: e.head,
                head: e.tail,
            })
            .collect();
        Self::from_parts(
            self.names.clone(),
            self.index.clone(),
            edges,
            self.terminals.clone(),
            self.sources.clone(),
        )
        .expect("reversal preserves every network invariant")
    }

    /// Whether sources have no in-edges and terminals no out-edges.
    pub fn has_clean_endpoints(&self) -> bool {
        self.sources.iter().all(|&s| self.in_edges[s].is_empty())
            && self.terminals.iter().all(|&t| self.out_edges[t].is_empty())
    }

    pub fn to_json(&self) -> NetworkJson {
        NetworkJson {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    tail: self.names[e.tail].clone(),
                    head: self.names[e.head].clone(),
                })
                .collect(),
            sources: self
                .sources
                .iter()
                .map(|&s| self.names[s].clone())
                .collect(),
            terminals: self
                .terminals
                .iter()
                .map(|&t| self.names[t].clone())
                .collect(),
        }
    }

    pub fn from_json(json: &NetworkJson) -> Result<Self, NetworkError> {
        let edges: Vec<(&str, &str)> = json
            .edges
            .iter()
            .map(|e| (e.tail.as_str(), e.head.as_str()))
            .collect();
        let v: Vec<&str> = json.vertices.iter().map(String::as_str).collect();
        let s: Vec<&str> = json.sources.iter().map(String::as_str).collect();
        let t: Vec<&str> = json.terminals.iter().map(String::as_str).collect();
        Self::new(&v, &edges, &s, &t)
    }

    /// Parses and validates the JSON network format.
    pub fn load(bytes: &[u8]) -> Result<Self, NetworkError> {
        let json: NetworkJson =
            serde_json::from_slice(bytes).map_err(|e| NetworkError::Parse(e.to_string()))?;
        Self::from_json(&json)
    }

    /// Canonical JSON: sorted keys, two-space indent, trailing newline.
    pub fn save(&self) -> String {
        canonical_json(&self.to_json())
    }

    /// Graphviz rendering; sources are boxes and terminals double circles.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", name.replace('"', "\\\""));
        let _ = writeln!(s, "  rankdir=TB;");
        for (v, n) in self.names.iter().enumerate() {
            let shape = if self.source_pos[v].is_some() {
                "box"
            } else if self.terminal_pos[v].is_some() {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(s, "  \"{n}\" [shape={shape}];");
        }
        for (i, e) in self.edges.iter().enumerate() {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"e{i}\"];",
                self.names[e.tail], self.names[e.head]
            );
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub tail: String,
    pub head: String,
}

/// On-disk network format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub sources: Vec<String>,
    pub terminals: Vec<String>,
}

/// Pretty JSON with object keys sorted, followed by a newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json::Value keeps object keys in a BTreeMap.
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(net: &SumNetwork, vs: &[VertexId]) -> Vec<String> {
        vs.iter().map(|&v| net.name(v).to_string()).collect()
    }

    fn diamond() -> SumNetwork {
        SumNetwork::new(
            &["t", "b", "a", "s"],
            &[("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")],
            &["s"],
            &["t"],
        )
        .unwrap()
    }

    #[test]
    fn single_edge_order() {
        let net = SumNetwork::new(&["s", "t"], &[("s", "t")], &["s"], &["t"]).unwrap();
        assert_eq!(names(&net, net.topological_order()), ["s", "t"]);
    }

    #[test]
    fn diamond_breaks_ties_by_name() {
        let net = diamond();
        assert_eq!(names(&net, net.topological_order()), ["s", "a", "b", "t"]);
        let desc = net
            .topological_order_with(TieBreak::NameDescending)
            .unwrap();
        assert_eq!(names(&net, &desc), ["s", "b", "a", "t"]);
    }

    #[test]
    fn natural_order() {
        assert_eq!(natural_cmp("t2", "t10"), Ordering::Less);
        assert_eq!(natural_cmp("s1", "u1"), Ordering::Less);
        assert_eq!(natural_cmp("a", "a1"), Ordering::Less);
        assert_eq!(natural_cmp("x01", "x1"), Ordering::Less);
    }

    #[test]
    fn validation_errors() {
        let cyc = SumNetwork::new(
            &["s", "a", "b", "t"],
            &[("s", "a"), ("a", "b"), ("b", "a"), ("b", "t")],
            &["s"],
            &["t"],
        );
        assert!(matches!(cyc, Err(NetworkError::CycleDetected(_))));
        let self_loop = SumNetwork::new(&["s", "t"], &[("s", "t"), ("t", "t")], &["s"], &["t"]);
        assert!(matches!(self_loop, Err(NetworkError::CycleDetected(_))));
        let unknown = SumNetwork::new(&["s", "t"], &[("s", "x")], &["s"], &["t"]);
        assert_eq!(
            unknown.unwrap_err(),
            NetworkError::UnknownVertex {
                vertex: "x".into(),
                context: "edge 0".into()
            }
        );
        let overlap = SumNetwork::new(&["s", "t"], &[("s", "t")], &["s"], &["s"]);
        assert!(matches!(overlap, Err(NetworkError::RepeatedEndpoint(_))));
        let dup = SumNetwork::new(&["s", "s"], &[], &["s"], &["s"]);
        assert!(matches!(dup, Err(NetworkError::DuplicateVertex(_))));
        let empty: &[&str] = &[];
        assert_eq!(
            SumNetwork::new(&["s", "t"], &[("s", "t")], empty, &["t"]).unwrap_err(),
            NetworkError::NoSources
        );
        assert_eq!(
            SumNetwork::new(&["s", "t"], &[("s", "t")], &["s"], empty).unwrap_err(),
            NetworkError::NoTerminals
        );
        let isolated = SumNetwork::new(&["s", "t"], &[], &["s"], &["t"]);
        assert!(matches!(isolated, Err(NetworkError::IsolatedSource(_))));
    }

    #[test]
    fn disconnected_pair_reports_witness() {
        let net = SumNetwork::new(
            &["s1", "s2", "t1", "t2"],
            &[("s1", "t1"), ("s2", "t2"), ("s1", "t2")],
            &["s1", "s2"],
            &["t1", "t2"],
        )
        .unwrap();
        assert_eq!(
            net.all_pairs_connected(),
            Connectivity::Disconnected {
                source: net.vertex("s2").unwrap(),
                terminal: net.vertex("t1").unwrap(),
            }
        );
        assert!(net
            .enumerate_paths(net.vertex("s2").unwrap(), net.vertex("t1").unwrap(), 10)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn paths_in_lexicographic_order_with_parallel_edges() {
        let net = SumNetwork::new(
            &["s", "a", "b", "t"],
            &[("s", "b"), ("s", "a"), ("a", "t"), ("b", "t"), ("a", "t")],
            &["s"],
            &["t"],
        )
        .unwrap();
        let paths = net
            .enumerate_paths(net.vertex("s").unwrap(), net.vertex("t").unwrap(), 10)
            .unwrap();
        let got: Vec<(Vec<String>, Vec<EdgeId>)> = paths
            .iter()
            .map(|p| (names(&net, &p.vertices), p.edges.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec!["s".into(), "a".into(), "t".into()], vec![1, 2]),
                (vec!["s".into(), "a".into(), "t".into()], vec![1, 4]),
                (vec!["s".into(), "b".into(), "t".into()], vec![0, 3]),
            ]
        );
        let err = net
            .enumerate_paths(net.vertex("s").unwrap(), net.vertex("t").unwrap(), 2)
            .unwrap_err();
        assert!(matches!(
            err,
            NetworkError::PathLimitExceeded { limit: 2, .. }
        ));
    }

    #[test]
    fn reverse_single_edge() {
        let net = SumNetwork::new(&["s", "t"], &[("s", "t")], &["s"], &["t"]).unwrap();
        let rev = net.reverse();
        assert_eq!(rev.edge(0), Edge { tail: 1, head: 0 });
        assert_eq!(names(&rev, rev.sources()), ["t"]);
        assert_eq!(names(&rev, rev.terminals()), ["s"]);
        assert_eq!(rev.reverse(), net);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let net = diamond();
        let text = net.save();
        let back = SumNetwork::load(text.as_bytes()).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.save(), text);
        assert!(text.starts_with("{\n  \"edges\""));
    }

    #[test]
    fn json_errors() {
        assert!(matches!(
            SumNetwork::load(b"{"),
            Err(NetworkError::Parse(_))
        ));
        let bad = br#"{"vertices":["s","t"],"edges":[{"tail":"s","head":"q"}],"sources":["s"],"terminals":["t"]}"#;
        match SumNetwork::load(bad) {
            Err(NetworkError::UnknownVertex { vertex, .. }) => assert_eq!(vertex, "q"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dot_marks_sources_and_terminals() {
        let dot = diamond().to_dot("d");
        assert!(dot.contains("\"s\" [shape=box]"));
        assert!(dot.contains("\"t\" [shape=doublecircle]"));
        assert!(dot.contains("\"s\" -> \"a\""));
    }
}
