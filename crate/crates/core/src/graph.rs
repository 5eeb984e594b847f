//! Labeled input graphs: parsing, validation, orientation and route dispatch.
//!
//! Edges are oriented from the lower-valued endpoint to the higher one. A
//! vertex is an extremum when all of its edges leave it (minimum) or all
//! arrive at it (maximum).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::rational::Rational;

pub type VertexId = u64;
pub type EdgeId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    /// Labels in {0, 1}: 0 means circle fibers, 1 means line fibers.
    Binary,
    /// Labels count removed disks from the n-sphere fiber.
    General { dimension: u32 },
}

impl Mode {
    pub fn dimension(&self) -> u32 {
        match self {
            Mode::Binary => 1,
            Mode::General { dimension } => *dimension,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub label: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    mode: Mode,
    vertices: BTreeMap<VertexId, Rational>,
    edges: Vec<Edge>,
}

impl LabeledGraph {
    /// Builds and validates a graph. Edges are stored sorted by id.
    pub fn new(
        mode: Mode,
        vertices: impl IntoIterator<Item = (VertexId, Rational)>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let mut vmap = BTreeMap::new();
        for (id, value) in vertices {
            if vmap.insert(id, value).is_some() {
                return Err(GraphError::DuplicateVertex(id));
            }
        }
        let mut emap = BTreeMap::new();
        for e in edges {
            if emap.insert(e.id, e).is_some() {
                return Err(GraphError::DuplicateEdge(e.id));
            }
        }
        let graph = LabeledGraph {
            mode,
            vertices: vmap,
            edges: emap.into_values().collect(),
        };
        graph.validate()?;
        Ok(graph)
    }

    fn validate(&self) -> Result<(), GraphError> {
        if let Mode::General { dimension } = self.mode {
            if dimension < 2 {
                return Err(GraphError::BadDimension(dimension));
            }
        }
        for e in &self.edges {
            for end in [e.u, e.v] {
                if !self.vertices.contains_key(&end) {
                    return Err(GraphError::UnknownEndpoint {
                        edge: e.id,
                        vertex: end,
                    });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop {
                    edge: e.id,
                    vertex: e.u,
                });
            }
            if self.mode == Mode::Binary && e.label > 1 {
                return Err(GraphError::BadLabel {
                    edge: e.id,
                    label: e.label,
                });
            }
            if self.vertices[&e.u] == self.vertices[&e.v] {
                return Err(GraphError::EqualValues {
                    edge: e.id,
                    value: self.vertices[&e.u],
                });
            }
        }
        if self.edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        let mut adjacency: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for e in &self.edges {
            adjacency.entry(e.u).or_default().push(e.v);
            adjacency.entry(e.v).or_default().push(e.u);
        }
        if let Some(&id) = self.vertices.keys().find(|id| !adjacency.contains_key(id)) {
            return Err(GraphError::IsolatedVertex(id));
        }
        let start = *self.vertices.keys().next().expect("edges imply vertices");
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adjacency[&v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if let Some(&id) = self.vertices.keys().find(|id| !seen.contains(id)) {
            return Err(GraphError::Disconnected(id));
        }
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, Rational)> + '_ {
        self.vertices.iter().map(|(&id, &v)| (id, v))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn value(&self, v: VertexId) -> Option<Rational> {
        self.vertices.get(&v).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .ok()
            .map(|i| &self.edges[i])
    }

    /// `(start, end)` of an edge: the lower-valued endpoint first.
    pub fn oriented(&self, e: &Edge) -> (VertexId, VertexId) {
        if self.vertices[&e.u] < self.vertices[&e.v] {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.u == v || e.v == v)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident_edges(v).count()
    }

    /// Incident edges of `v` that arrive from below (`v` is their end point).
    pub fn edges_below(&self, v: VertexId) -> Vec<&Edge> {
        self.incident_edges(v)
            .filter(|e| self.oriented(e).1 == v)
            .collect()
    }

    /// Incident edges of `v` that leave upward (`v` is their start point).
    pub fn edges_above(&self, v: VertexId) -> Vec<&Edge> {
        self.incident_edges(v)
            .filter(|e| self.oriented(e).0 == v)
            .collect()
    }

    /// Sorted distinct vertex values.
    pub fn distinct_values(&self) -> Vec<Rational> {
        let set: BTreeSet<Rational> = self.vertices.values().copied().collect();
        set.into_iter().collect()
    }

    /// Returns a copy with one edge label replaced (no revalidation of mode
    /// constraints beyond the usual ones).
    pub fn with_label(&self, edge: EdgeId, label: u32) -> Result<Self, GraphError> {
        let edges = self.edges.iter().map(|e| {
            let mut e = *e;
            if e.id == edge {
                e.label = label;
            }
            e
        });
        LabeledGraph::new(self.mode, self.vertices(), edges)
    }

    pub fn to_rgl(&self) -> String {
        let mut out = String::new();
        match self.mode {
            Mode::Binary => out.push_str("mode binary\n"),
            Mode::General { dimension } => {
                let _ = writeln!(out, "mode general {dimension}");
            }
        }
        for (id, value) in &self.vertices {
            let _ = writeln!(out, "v {id} {value}");
        }
        for e in &self.edges {
            let _ = writeln!(out, "e {} {} {} {}", e.id, e.u, e.v, e.label);
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (id, value) in &self.vertices {
            let _ = writeln!(out, "  v{id} [label=\"{id}: {value}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.u, e.v, e.label);
        }
        out.push_str("}\n");
        out
    }
}

/// Parses the `.rgl` text format.
///
/// Records are separated by newlines or `;`. `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<LabeledGraph, GraphError> {
    let mut mode = Mode::Binary;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut seen_v = BTreeSet::new();
    let mut seen_e = BTreeSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for record in content.split(';') {
            let tokens = tokenize(record, offset);
            offset += record.len() + 1;
            let Some(&(head_col, head)) = tokens.first() else {
                continue;
            };
            let syntax = |column: usize, message: String| GraphError::Syntax {
                line,
                column,
                message,
            };
            let expect_len = |n: usize| {
                if tokens.len() != n {
                    Err(syntax(
                        head_col,
                        format!(
                            "`{head}` record takes {} fields, found {}",
                            n - 1,
                            tokens.len() - 1
                        ),
                    ))
                } else {
                    Ok(())
                }
            };
            let int = |i: usize| -> Result<u64, GraphError> {
                let (col, tok) = tokens[i];
                tok.parse::<u64>()
                    .map_err(|_| syntax(col, format!("expected non-negative integer, found `{tok}`")))
            };
            match head {
                "mode" => match tokens.get(1).map(|t| t.1) {
                    Some("binary") => {
                        expect_len(2)?;
                        mode = Mode::Binary;
                    }
                    Some("general") => {
                        expect_len(3)?;
                        let n = int(2)?;
                        let dimension = u32::try_from(n)
                            .map_err(|_| syntax(tokens[2].0, "dimension too large".into()))?;
                        mode = Mode::General { dimension };
                    }
                    _ => {
                        return Err(syntax(
                            head_col,
                            "expected `mode binary` or `mode general <n>`".into(),
                        ))
                    }
                },
                "v" => {
                    expect_len(3)?;
                    let id = int(1)?;
                    let (col, tok) = tokens[2];
                    let value: Rational = tok
                        .parse()
                        .map_err(|_| syntax(col, format!("expected rational value, found `{tok}`")))?;
                    if !seen_v.insert(id) {
                        return Err(GraphError::DuplicateVertex(id));
                    }
                    vertices.push((id, value));
                }
                "e" => {
                    expect_len(5)?;
                    let id = int(1)?;
                    let u = int(2)?;
                    let v = int(3)?;
                    let label = int(4)?;
                    let label =
                        u32::try_from(label).map_err(|_| syntax(tokens[4].0, "label too large".into()))?;
                    if !seen_e.insert(id) {
                        return Err(GraphError::DuplicateEdge(id));
                    }
                    edges.push(Edge { id, u, v, label });
                }
                other => return Err(syntax(head_col, format!("unknown record `{other}`"))),
            }
        }
    }
    LabeledGraph::new(mode, vertices, edges)
}

fn tokenize(record: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in record.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((offset + s + 1, &record[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((offset + s + 1, &record[s..]));
    }
    out
}

/// Per-vertex edge counts split by direction and label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexProfile {
    /// Label-0 edges arriving from below.
    pub in0: usize,
    /// Label-1 (or, in general mode, nonzero) edges arriving from below.
    pub in1: usize,
    pub out0: usize,
    pub out1: usize,
    pub is_extremum: bool,
}

impl VertexProfile {
    pub fn degree(&self) -> usize {
        self.in0 + self.in1 + self.out0 + self.out1
    }

    pub fn in_degree(&self) -> usize {
        self.in0 + self.in1
    }

    pub fn out_degree(&self) -> usize {
        self.out0 + self.out1
    }
}

pub fn vertex_profile(g: &LabeledGraph, v: VertexId) -> Result<VertexProfile, GraphError> {
    if g.value(v).is_none() {
        return Err(GraphError::UnknownVertex(v));
    }
    let mut p = VertexProfile {
        in0: 0,
        in1: 0,
        out0: 0,
        out1: 0,
        is_extremum: false,
    };
    for e in g.incident_edges(v) {
        let upward = g.oriented(e).0 == v;
        match (upward, e.label == 0) {
            (false, true) => p.in0 += 1,
            (false, false) => p.in1 += 1,
            (true, true) => p.out0 += 1,
            (true, false) => p.out1 += 1,
        }
    }
    p.is_extremum = p.in_degree() == 0 || p.out_degree() == 0;
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCheck {
    pub vertex: VertexId,
    pub pass: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub pass: bool,
    pub checks: Vec<VertexCheck>,
}

impl ConditionReport {
    pub fn failing(&self) -> impl Iterator<Item = &VertexCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn passes_at(&self, v: VertexId) -> bool {
        self.checks.iter().any(|c| c.vertex == v && c.pass)
    }
}

fn theorem2_vertex(p: &VertexProfile) -> (bool, String) {
    if p.is_extremum {
        let ones = p.in1 + p.out1;
        if ones.is_multiple_of(2) {
            (true, format!("extremum with {ones} line edges (even)"))
        } else {
            (false, format!("extremum with {ones} line edges (odd)"))
        }
    } else if p.in1 != p.out1 {
        (false, format!("{} line edges below but {} above", p.in1, p.out1))
    } else if p.in1 == 1 && p.in0 + p.out0 == 0 {
        (false, "single line through with no circle edge".to_string())
    } else {
        (true, format!("{} line edges on each side", p.in1))
    }
}

/// Realizability conditions for binary labels with a single critical
/// component per vertex made of ordinary saddles and squared saddles.
pub fn check_theorem2_conditions(g: &LabeledGraph) -> ConditionReport {
    let checks: Vec<VertexCheck> = g
        .vertex_ids()
        .map(|v| {
            let p = vertex_profile(g, v).expect("vertex exists");
            let (pass, reason) = theorem2_vertex(&p);
            VertexCheck {
                vertex: v,
                pass,
                reason,
            }
        })
        .collect();
    ConditionReport {
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

/// Degree-1 vertices must carry an edge label of 0, 1 or 2.
pub fn check_theorem6_conditions(g: &LabeledGraph) -> ConditionReport {
    let checks: Vec<VertexCheck> = g
        .vertex_ids()
        .map(|v| {
            let incident: Vec<&Edge> = g.incident_edges(v).collect();
            if incident.len() == 1 {
                let label = incident[0].label;
                VertexCheck {
                    vertex: v,
                    pass: label <= 2,
                    reason: format!("degree-1 vertex on edge {} with label {label}", incident[0].id),
                }
            } else {
                VertexCheck {
                    vertex: v,
                    pass: true,
                    reason: format!("degree {}", incident.len()),
                }
            }
        })
        .collect();
    ConditionReport {
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothClass {
    Morse,
    MorseBott,
    FoldComposition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum Route {
    Thm2Saddle {
        a: usize,
        b: usize,
        c: usize,
    },
    Thm2Cap {
        sign: Sign,
    },
    Thm2SquaredExtremum {
        a: usize,
        b: usize,
        c: usize,
        sign: Sign,
    },
    Thm4CaseA,
    Thm4CaseB,
    Thm4CaseC,
    Thm4CaseD,
    Thm4OpenCap {
        sign: Sign,
    },
    Thm4SquaredExtremum {
        profile: VertexProfile,
        sign: Sign,
    },
}

impl Route {
    pub fn is_thm2(&self) -> bool {
        matches!(
            self,
            Route::Thm2Saddle { .. } | Route::Thm2Cap { .. } | Route::Thm2SquaredExtremum { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteTag {
    #[serde(flatten)]
    pub route: Route,
    /// Metadata only; synthesis never reads it.
    pub smooth_class: SmoothClass,
}

pub fn extremum_sign(p: &VertexProfile) -> Sign {
    if p.in_degree() == 0 {
        Sign::Min
    } else {
        Sign::Max
    }
}

fn route_for(p: &VertexProfile) -> RouteTag {
    let (route, smooth_class) = if p.is_extremum {
        let sign = extremum_sign(p);
        let ones = p.in1 + p.out1;
        let zeros = p.in0 + p.out0;
        if p.degree() == 1 {
            if ones == 0 {
                (Route::Thm2Cap { sign }, SmoothClass::Morse)
            } else {
                (Route::Thm4OpenCap { sign }, SmoothClass::MorseBott)
            }
        } else if ones.is_multiple_of(2) {
            let a = ones / 2;
            let b = zeros.div_ceil(2);
            let c = zeros / 2;
            let class = if (a, b, c) == (1, 0, 0) || (a, b, c) == (0, 1, 1) {
                SmoothClass::MorseBott
            } else {
                SmoothClass::FoldComposition
            };
            (Route::Thm2SquaredExtremum { a, b, c, sign }, class)
        } else {
            (
                Route::Thm4SquaredExtremum { profile: *p, sign },
                SmoothClass::FoldComposition,
            )
        }
    } else if theorem2_vertex(p).0 {
        (
            Route::Thm2Saddle {
                a: p.in1,
                b: p.in0,
                c: p.out0,
            },
            SmoothClass::Morse,
        )
    } else if p.in1 == p.out1 {
        // Only the lone line passing through fails with equal counts.
        (Route::Thm4CaseA, SmoothClass::MorseBott)
    } else if p.in1 == 0 && p.out0 == 0 {
        (Route::Thm4CaseC, SmoothClass::MorseBott)
    } else if p.out1 == 0 && p.in0 == 0 {
        (Route::Thm4CaseD, SmoothClass::MorseBott)
    } else {
        (Route::Thm4CaseB, SmoothClass::MorseBott)
    };
    RouteTag { route, smooth_class }
}

/// Assigns every vertex of a binary graph its construction route.
pub fn classify_route(g: &LabeledGraph) -> BTreeMap<VertexId, RouteTag> {
    g.vertex_ids()
        .map(|v| {
            let p = vertex_profile(g, v).expect("vertex exists");
            (v, route_for(&p))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_011() -> LabeledGraph {
        parse_graph("v 1 0\nv 2 1\nv 3 2\ne 1 1 2 1\ne 2 2 3 1\n").unwrap()
    }

    #[test]
    fn smallest_graph() {
        let g = parse_graph("v 1 0 ; v 2 1 ; e 1 1 2 0").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].label, 0);
    }

    #[test]
    fn rejects_self_loop() {
        let err = parse_graph("v 1 0 ; v 2 1 ; e 1 1 1 0").unwrap_err();
        assert!(matches!(err, GraphError::SelfLoop { edge: 1, vertex: 1 }));
    }

    #[test]
    fn accepts_parallel_edges() {
        let g = parse_graph("v 1 0 ; v 2 1 ; e 1 1 2 0 ; e 2 1 2 0").unwrap();
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn parse_errors() {
        let err = parse_graph("v 1 0\nv 2 x\n").unwrap_err();
        assert_eq!(
            err,
            GraphError::Syntax {
                line: 2,
                column: 5,
                message: "expected rational value, found `x`".into()
            }
        );
        assert!(matches!(
            parse_graph("v 1 0\nv 1 2\ne 1 1 1 0"),
            Err(GraphError::DuplicateVertex(1))
        ));
        assert!(matches!(
            parse_graph("v 1 0\nv 2 1\nv 3 5\nv 4 6\ne 1 1 2 0\ne 2 3 4 0"),
            Err(GraphError::Disconnected(_))
        ));
        assert!(matches!(
            parse_graph("v 1 0\nv 2 0\ne 1 1 2 0"),
            Err(GraphError::EqualValues { edge: 1, .. })
        ));
        assert!(matches!(
            parse_graph("v 1 0\nv 2 1\ne 1 1 2 2"),
            Err(GraphError::BadLabel { edge: 1, label: 2 })
        ));
        assert!(parse_graph("mode general 2\nv 1 0\nv 2 1\ne 1 1 2 2").is_ok());
        assert!(matches!(parse_graph("v 1 0\n"), Err(GraphError::NoEdges)));
        assert!(matches!(
            parse_graph("v 1 0\nv 2 1\nv 3 4\ne 1 1 2 0"),
            Err(GraphError::IsolatedVertex(3))
        ));
        assert!(matches!(
            parse_graph("e 1 1 2 0"),
            Err(GraphError::UnknownEndpoint { .. })
        ));
    }

    #[test]
    fn comments_and_rationals() {
        let g = parse_graph("# header\nmode binary\nv 1 -1/2 # low\nv 2 3/4\ne 7 2 1 1\n").unwrap();
        assert_eq!(g.value(1), Some(Rational::new(-1, 2)));
        assert_eq!(g.oriented(&g.edges()[0]), (1, 2));
    }

    #[test]
    fn profiles() {
        let g = path_011();
        let p2 = vertex_profile(&g, 2).unwrap();
        assert_eq!(
            (p2.in0, p2.in1, p2.out0, p2.out1, p2.is_extremum),
            (0, 1, 0, 1, false)
        );
        let p1 = vertex_profile(&g, 1).unwrap();
        assert_eq!(
            (p1.in0, p1.in1, p1.out0, p1.out1, p1.is_extremum),
            (0, 0, 0, 1, true)
        );
        assert!(vertex_profile(&g, 9).is_err());

        let star = parse_graph("v 1 1\nv 2 0\nv 3 0\nv 4 2\ne 1 1 2 0\ne 2 1 3 0\ne 3 1 4 0").unwrap();
        let c = vertex_profile(&star, 1).unwrap();
        assert_eq!((c.in0, c.in1, c.out0, c.out1), (2, 0, 1, 0));
    }

    #[test]
    fn theorem2_checks() {
        let g = path_011();
        let r = check_theorem2_conditions(&g);
        assert!(!r.passes_at(2));
        // endpoints carry a single line edge: odd
        assert!(!r.passes_at(1));

        let k2 = parse_graph("v 1 0 ; v 2 1 ; e 1 1 2 0").unwrap();
        assert!(check_theorem2_conditions(&k2).pass);

        let tri = parse_graph("v 1 5\nv 2 0\nv 3 1\nv 4 2\ne 1 1 2 1\ne 2 1 3 1\ne 3 1 4 1").unwrap();
        assert!(!check_theorem2_conditions(&tri).passes_at(1));
    }

    #[test]
    fn theorem6_checks() {
        let k2_3 = parse_graph("mode general 2\nv 1 0\nv 2 1\ne 1 1 2 3").unwrap();
        assert!(!check_theorem6_conditions(&k2_3).pass);
        let k2_2 = parse_graph("mode general 2\nv 1 0\nv 2 1\ne 1 1 2 2").unwrap();
        assert!(check_theorem6_conditions(&k2_2).pass);
        let interior = parse_graph(
            "mode general 3\nv 1 0\nv 2 1\nv 3 2\nv 4 3\ne 1 1 2 0\ne 2 2 3 7\ne 3 2 3 7\ne 4 3 4 0",
        )
        .unwrap();
        assert!(check_theorem6_conditions(&interior).pass);
    }

    #[test]
    fn routes() {
        let k2 = parse_graph("v 1 0 ; v 2 1 ; e 1 1 2 0").unwrap();
        let r = classify_route(&k2);
        assert_eq!(r[&1].route, Route::Thm2Cap { sign: Sign::Min });
        assert_eq!(r[&2].route, Route::Thm2Cap { sign: Sign::Max });

        let g = path_011();
        let r = classify_route(&g);
        assert_eq!(r[&1].route, Route::Thm4OpenCap { sign: Sign::Min });
        assert_eq!(r[&2].route, Route::Thm4CaseA);
        assert_eq!(r[&3].route, Route::Thm4OpenCap { sign: Sign::Max });

        let g = parse_graph("v 1 0\nv 2 1\nv 3 2\ne 1 1 2 0\ne 2 2 3 0").unwrap();
        assert_eq!(
            classify_route(&g)[&2].route,
            Route::Thm2Saddle { a: 0, b: 1, c: 1 }
        );

        let theta = parse_graph("v 1 0 ; v 2 1 ; e 1 1 2 0 ; e 2 1 2 0").unwrap();
        assert_eq!(
            classify_route(&theta)[&1].route,
            Route::Thm2SquaredExtremum {
                a: 0,
                b: 1,
                c: 1,
                sign: Sign::Min
            }
        );
    }

    #[test]
    fn rgl_roundtrip() {
        let text = "mode binary\nv 1 0\nv 2 1/2\nv 3 2\ne 1 1 2 1\ne 2 2 3 0\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.to_rgl(), text);
        let dot = g.to_dot();
        assert!(dot.contains("1/2") && dot.contains("label=\"1\""));
    }
}
