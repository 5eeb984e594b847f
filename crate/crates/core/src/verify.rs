//! Checks a mesh against the labeled graph it was meant to realize.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, GroupingError};
use crate::exec::Exec;
use crate::graph::{LabeledGraph, Mode, VertexId};
use crate::mesh::ScalarMesh;
use crate::plan::{collar_half_width, plan_graph, simulate_fiber_transitions};
use crate::rational::Rational;
use crate::reeb::{build_augmented_reeb_with, ReebGraph};
use crate::synth::synthesize_with;

/// Reeb graph with every vertex collar contracted to a single node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientGraph {
    pub values: Vec<Rational>,
    /// `(lower, upper, label)`.
    pub edges: Vec<(usize, usize, u32)>,
}

impl QuotientGraph {
    /// A Reeb graph taken as is, without contraction.
    pub fn from_reeb(reeb: &ReebGraph) -> Self {
        QuotientGraph {
            values: reeb.nodes.iter().map(|n| n.value).collect(),
            edges: reeb
                .arcs
                .iter()
                .map(|a| (a.lower, a.upper, a.fiber.label()))
                .collect(),
        }
    }
}

/// Value- and label-preserving isomorphism between two Reeb graphs.
pub fn reeb_isomorphic(a: &ReebGraph, b: &ReebGraph) -> bool {
    match a.to_labeled_graph() {
        Ok(g) => isomorphic_labeled(&g, &QuotientGraph::from_reeb(b)).is_some(),
        Err(_) => false,
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Contracts the essential nodes inside each vertex collar of `g`.
///
/// Nodes joined by an arc that stays inside one collar are merged. Every
/// merged cluster must be a tree with a node exactly at the vertex value.
pub fn group_micro_levels(reeb: &ReebGraph, g: &LabeledGraph) -> Result<QuotientGraph, GroupingError> {
    let w = collar_half_width(g);
    let values = g.distinct_values();
    let collar: Vec<Rational> = reeb
        .nodes
        .iter()
        .map(|n| {
            let i = values.partition_point(|&h| h < n.value - w);
            match values.get(i) {
                Some(&h) if (n.value - h).abs() <= w => Ok(h),
                _ => Err(GroupingError::Orphan(n.value)),
            }
        })
        .collect::<Result<_, _>>()?;

    let n = reeb.nodes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut internal = Vec::new();
    for a in &reeb.arcs {
        if collar[a.lower] == collar[a.upper] {
            internal.push((a.lower, a.upper));
            let (x, y) = (find(&mut parent, a.lower), find(&mut parent, a.upper));
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut cluster_of = vec![0; n];
    let mut clusters: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, c) in cluster_of.iter_mut().enumerate() {
        let root = find(&mut parent, i);
        let next = clusters.len();
        *c = *clusters.entry(root).or_insert(next);
    }
    let k = clusters.len();
    let mut size = vec![0usize; k];
    let mut arcs_inside = vec![0usize; k];
    let mut centered = vec![false; k];
    for i in 0..n {
        size[cluster_of[i]] += 1;
        if reeb.nodes[i].value == collar[i] {
            centered[cluster_of[i]] = true;
        }
    }
    for &(a, _) in &internal {
        arcs_inside[cluster_of[a]] += 1;
    }
    let mut cluster_value = vec![Rational::zero(); k];
    for i in 0..n {
        let c = cluster_of[i];
        cluster_value[c] = collar[i];
        if arcs_inside[c] + 1 != size[c] {
            return Err(GroupingError::NotContractible(collar[i]));
        }
        if !centered[c] {
            return Err(GroupingError::MissingCenter(collar[i]));
        }
    }
    let edges = reeb
        .arcs
        .iter()
        .filter(|a| collar[a.lower] != collar[a.upper])
        .map(|a| (cluster_of[a.lower], cluster_of[a.upper], a.fiber.label()))
        .collect();
    Ok(QuotientGraph {
        values: cluster_value,
        edges,
    })
}

type LabelCounts = BTreeMap<(usize, usize), Vec<u32>>;

fn label_multisets(edges: impl Iterator<Item = (usize, usize, u32)>) -> LabelCounts {
    let mut out: LabelCounts = BTreeMap::new();
    for (a, b, label) in edges {
        out.entry((a.min(b), a.max(b))).or_default().push(label);
    }
    for labels in out.values_mut() {
        labels.sort_unstable();
    }
    out
}

/// Finds a value-preserving isomorphism from `g` onto `q` that also
/// preserves the multiset of edge labels between every pair of vertices.
pub fn isomorphic_labeled(g: &LabeledGraph, q: &QuotientGraph) -> Option<BTreeMap<VertexId, usize>> {
    let ids: Vec<VertexId> = g.vertex_ids().collect();
    let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    if ids.len() != q.values.len() || g.edges().len() != q.edges.len() {
        return None;
    }
    let g_labels = label_multisets(g.edges().iter().map(|e| (index[&e.u], index[&e.v], e.label)));
    let q_labels = label_multisets(q.edges.iter().copied());
    let g_values: Vec<Rational> = ids.iter().map(|&v| g.value(v).unwrap()).collect();

    // Signature: own value plus sorted (neighbor value, label) pairs.
    let signature = |n: usize, values: &[Rational], labels: &LabelCounts| {
        let mut sig: Vec<(Rational, u32)> = Vec::new();
        for (&(a, b), ls) in labels {
            let other = if a == n {
                b
            } else if b == n {
                a
            } else {
                continue;
            };
            sig.extend(ls.iter().map(|&l| (values[other], l)));
        }
        sig.sort_unstable();
        (values[n], sig)
    };
    let g_sig: Vec<_> = (0..ids.len())
        .map(|n| signature(n, &g_values, &g_labels))
        .collect();
    let q_sig: Vec<_> = (0..q.values.len())
        .map(|n| signature(n, &q.values, &q_labels))
        .collect();
    let candidates: Vec<Vec<usize>> = g_sig
        .iter()
        .map(|s| (0..q_sig.len()).filter(|&x| q_sig[x] == *s).collect())
        .collect();

    // Breadth-first order so that most vertices have an assigned neighbor.
    let mut adjacency = vec![Vec::new(); ids.len()];
    for &(a, b) in g_labels.keys() {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut order = Vec::with_capacity(ids.len());
    let mut seen = vec![false; ids.len()];
    for start in 0..ids.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &n in &adjacency[v] {
                if !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
    }

    let empty: Vec<u32> = Vec::new();
    let labels_between = |labels: &LabelCounts, a: usize, b: usize| -> Vec<u32> {
        labels
            .get(&(a.min(b), a.max(b)))
            .cloned()
            .unwrap_or_else(|| empty.clone())
    };
    let mut assign: Vec<Option<usize>> = vec![None; ids.len()];
    let mut used = vec![false; q.values.len()];

    type Consistent<'a> = &'a dyn Fn(usize, usize, &[Option<usize>]) -> bool;

    fn search(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        consistent: Consistent,
    ) -> bool {
        let Some(&v) = order.get(depth) else {
            return true;
        };
        for &x in &candidates[v] {
            if used[x] || !consistent(v, x, assign) {
                continue;
            }
            assign[v] = Some(x);
            used[x] = true;
            if search(depth + 1, order, candidates, assign, used, consistent) {
                return true;
            }
            assign[v] = None;
            used[x] = false;
        }
        false
    }

    let consistent = |v: usize, x: usize, assign: &[Option<usize>]| {
        adjacency[v].iter().all(|&n| match assign[n] {
            Some(y) => labels_between(&g_labels, v, n) == labels_between(&q_labels, x, y),
            None => true,
        }) && q_labels
            .keys()
            .filter_map(|&(a, b)| {
                if a == x {
                    Some(b)
                } else if b == x {
                    Some(a)
                } else {
                    None
                }
            })
            .all(|y| match assign.iter().position(|&m| m == Some(y)) {
                Some(n) => labels_between(&g_labels, v, n) == labels_between(&q_labels, x, y),
                None => true,
            })
    };
    if !search(0, &order, &candidates, &mut assign, &mut used, &consistent) {
        return None;
    }
    Some(ids.iter().zip(assign).map(|(&v, x)| (v, x.unwrap())).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    pub pass: bool,
    pub mesh_valid: bool,
    pub orientable: bool,
    /// All-circle graphs must give closed surfaces.
    pub closed_ok: bool,
    pub ideal_paths: usize,
    pub ideal_paths_ok: bool,
    pub reeb_nodes: usize,
    pub essential_nodes: usize,
    pub isomorphic: bool,
    /// Graph vertex to contracted Reeb node value.
    pub mapping: BTreeMap<VertexId, Rational>,
    pub failure: Option<String>,
}

impl MatchReport {
    fn failed(reason: String) -> Self {
        MatchReport {
            pass: false,
            mesh_valid: false,
            orientable: false,
            closed_ok: false,
            ideal_paths: 0,
            ideal_paths_ok: false,
            reeb_nodes: 0,
            essential_nodes: 0,
            isomorphic: false,
            mapping: BTreeMap::new(),
            failure: Some(reason),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        writeln!(out, "result: {}", if self.pass { "PASS" } else { "FAIL" }).unwrap();
        writeln!(out, "mesh valid: {}", mark(self.mesh_valid)).unwrap();
        writeln!(out, "orientable: {}", mark(self.orientable)).unwrap();
        writeln!(out, "closed when all labels are 0: {}", mark(self.closed_ok)).unwrap();
        writeln!(
            out,
            "ideal boundary paths: {} ({})",
            self.ideal_paths,
            mark(self.ideal_paths_ok)
        )
        .unwrap();
        writeln!(
            out,
            "reeb nodes: {} ({} essential)",
            self.reeb_nodes, self.essential_nodes
        )
        .unwrap();
        writeln!(out, "labeled isomorphism: {}", mark(self.isomorphic)).unwrap();
        for (v, value) in &self.mapping {
            writeln!(out, "  vertex {v} -> node at {value}").unwrap();
        }
        if let Some(reason) = &self.failure {
            writeln!(out, "failure: {reason}").unwrap();
        }
        out
    }
}

pub fn verify_roundtrip(g: &LabeledGraph, mesh: &ScalarMesh) -> MatchReport {
    verify_roundtrip_with(g, mesh, Exec::default())
}

/// Recomputes the Reeb graph of `mesh` and checks it realizes `g`.
pub fn verify_roundtrip_with(g: &LabeledGraph, mesh: &ScalarMesh, exec: Exec) -> MatchReport {
    if let Err(e) = mesh.validate() {
        return MatchReport::failed(format!("invalid mesh: {e}"));
    }
    let reeb = match build_augmented_reeb_with(mesh, exec) {
        Ok(r) => r,
        Err(e) => return MatchReport::failed(format!("reeb graph: {e}")),
    };
    let smooth = reeb.smooth_inessential();
    let mut report = MatchReport {
        mesh_valid: true,
        orientable: mesh.is_orientable(),
        closed_ok: g.edges().iter().any(|e| e.label != 0) || mesh.boundary_edges().is_empty(),
        ideal_paths: mesh.ideal_monotone_paths(),
        reeb_nodes: reeb.nodes.len(),
        essential_nodes: smooth.nodes.len(),
        ..MatchReport::failed(String::new())
    };
    report.failure = None;
    report.ideal_paths_ok = mesh.ideal.is_empty() || report.ideal_paths >= 2;
    match group_micro_levels(&smooth, g) {
        Err(e) => report.failure = Some(format!("collar grouping: {e}")),
        Ok(q) => match isomorphic_labeled(g, &q) {
            Some(map) => {
                report.isomorphic = true;
                report.mapping = map.into_iter().map(|(v, x)| (v, q.values[x])).collect();
            }
            None => report.failure = Some("no value-preserving labeled isomorphism".into()),
        },
    }
    report.pass = report.isomorphic && report.orientable && report.closed_ok && report.ideal_paths_ok;
    if !report.pass && report.failure.is_none() {
        report.failure = Some("surface checks failed".into());
    }
    report
}

/// Plans, simulates, meshes and verifies a binary graph.
pub fn roundtrip(g: &LabeledGraph) -> Result<(ScalarMesh, MatchReport), Error> {
    roundtrip_with(g, Exec::default())
}

pub fn roundtrip_with(g: &LabeledGraph, exec: Exec) -> Result<(ScalarMesh, MatchReport), Error> {
    if g.mode() != Mode::Binary {
        return Err(crate::error::PlanError::DimensionMismatch(g.mode().dimension()).into());
    }
    let plan = plan_graph(g)?;
    let sim = simulate_fiber_transitions(&plan);
    if let Some((model, reason)) = sim.failure {
        return Err(crate::error::PlanError::Model {
            vertex: plan.models.get(model).map_or(0, |m| m.vertex),
            reason,
        }
        .into());
    }
    let mesh = synthesize_with(&plan, exec)?;
    let report = verify_roundtrip_with(g, &mesh, exec);
    Ok((mesh, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    #[test]
    fn small_graphs_roundtrip() {
        for text in [
            "mode binary; v 0 0; v 1 1; e 0 0 1 0",
            "mode binary; v 0 0; v 1 1; e 0 0 1 1",
            "mode binary; v 0 0; v 1 1; e 0 0 1 0; e 1 0 1 0",
            "mode binary; v 0 0; v 1 1; v 2 2; e 0 0 1 1; e 1 1 2 1",
            "mode binary; v 0 0; v 1 1; v 2 2; v 3 2; e 0 0 1 0; e 1 1 2 1; e 2 1 3 1",
        ] {
            let g = parse_graph(text).unwrap();
            let (_, report) = roundtrip(&g).unwrap();
            assert!(report.pass, "{text}\n{}", report.to_text());
        }
    }

    #[test]
    fn wrong_label_is_detected() {
        let g = parse_graph("mode binary; v 0 0; v 1 1; v 2 2; e 0 0 1 0; e 1 1 2 0").unwrap();
        let (mesh, report) = roundtrip(&g).unwrap();
        assert!(report.pass);
        let relabeled = g.with_label(1, 1).unwrap();
        assert!(!verify_roundtrip(&relabeled, &mesh).pass);
    }

    #[test]
    fn isomorphism_respects_values_and_labels() {
        let g = parse_graph("mode binary; v 0 0; v 1 1; v 2 2; e 0 0 1 0; e 1 1 2 1").unwrap();
        let q = QuotientGraph {
            values: vec![
                Rational::from_integer(1),
                Rational::from_integer(2),
                Rational::zero(),
            ],
            edges: vec![(2, 0, 0), (0, 1, 1)],
        };
        let map = isomorphic_labeled(&g, &q).unwrap();
        assert_eq!(map[&0], 2);
        let swapped = QuotientGraph {
            edges: vec![(2, 0, 1), (0, 1, 0)],
            ..q
        };
        assert!(isomorphic_labeled(&g, &swapped).is_none());
    }
}

#[cfg(test)]
mod stress {
    use super::*;
    use crate::random::gen_random;

    #[test]
    fn random_graphs_roundtrip() {
        for seed in 0..60 {
            let g = gen_random(3 + (seed as usize % 8), seed);
            let (_, report) = roundtrip(&g).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{}", g.to_rgl()));
            assert!(report.pass, "seed {seed}\n{}\n{}", g.to_rgl(), report.to_text());
        }
    }
}
