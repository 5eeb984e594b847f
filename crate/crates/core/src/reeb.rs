//! Reeb graph of a PL scalar field, computed from level sets alone.
//!
//! Distinct vertex values are ranked and doubled: level sets are taken at
//! every even key (a vertex value) and band cross-sections at every odd key
//! (strictly between two consecutive values), so all comparisons are on
//! integers.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{GraphError, ReebError};
use crate::exec::Exec;
use crate::graph::{Edge, LabeledGraph, Mode};
use crate::mesh::{edge_key, MeshVertex, ScalarMesh};
use crate::plan::FiberType;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LevelPoint {
    Vertex(MeshVertex),
    /// Interior point of an edge crossing the level.
    EdgePoint(MeshVertex, MeshVertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminal {
    /// On an ideal boundary edge: the fiber runs off to infinity.
    Ideal,
    /// Interior endpoint of the level set.
    Fold,
    /// On an unflagged boundary edge of a standalone patch.
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Point,
    Circle,
    /// Path whose two ends are ideal.
    Line,
    Other,
}

impl Topology {
    fn fiber(self) -> Option<FiberType> {
        match self {
            Topology::Circle => Some(FiberType::Circle),
            Topology::Line => Some(FiberType::Line),
            _ => None,
        }
    }
}

/// Connected components of one level set.
#[derive(Debug, Clone)]
pub struct LevelComplex {
    pub points: Vec<LevelPoint>,
    pub component: Vec<usize>,
    pub components: Vec<LevelComponentInfo>,
    index: HashMap<LevelPoint, usize>,
}

#[derive(Debug, Clone)]
pub struct LevelComponentInfo {
    pub topology: Topology,
    pub touches_open_boundary: bool,
    pub detail: String,
}

impl LevelComplex {
    pub fn component_of(&self, p: LevelPoint) -> Option<usize> {
        self.index.get(&p).map(|&i| self.component[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReebNode {
    pub id: usize,
    pub value: Rational,
    pub essential: bool,
    /// The level component meets an unflagged boundary.
    pub boundary: bool,
    pub topology: Topology,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReebArc {
    pub lower: usize,
    pub upper: usize,
    pub fiber: FiberType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReebGraph {
    pub nodes: Vec<ReebNode>,
    pub arcs: Vec<ReebArc>,
}

struct Context<'m> {
    mesh: &'m ScalarMesh,
    rank: Vec<i64>,
    levels: Vec<Rational>,
    /// Triangles meeting each level, indexed by rank.
    by_level: Vec<Vec<usize>>,
    /// Edges in exactly one triangle, with their ideal flag.
    boundary: HashMap<(MeshVertex, MeshVertex), bool>,
    /// Per vertex: (on an ideal edge, on an open boundary edge).
    vertex_boundary: Vec<(bool, bool)>,
}

impl<'m> Context<'m> {
    fn new(mesh: &'m ScalarMesh) -> Self {
        let levels: Vec<Rational> = mesh
            .values
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let rank: Vec<i64> = mesh
            .values
            .iter()
            .map(|f| levels.binary_search(f).unwrap() as i64)
            .collect();
        let mut by_level = vec![Vec::new(); levels.len()];
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let ranks = tri.map(|v| rank[v as usize]);
            let (lo, hi) = (*ranks.iter().min().unwrap(), *ranks.iter().max().unwrap());
            for list in &mut by_level[lo as usize..=hi as usize] {
                list.push(t);
            }
        }
        let mut boundary = HashMap::new();
        let mut vertex_boundary = vec![(false, false); mesh.values.len()];
        for (e, ts) in mesh.edge_map() {
            if ts.len() == 1 {
                let ideal = mesh.ideal.contains(&e);
                boundary.insert(e, ideal);
                for v in [e.0, e.1] {
                    let slot = &mut vertex_boundary[v as usize];
                    if ideal {
                        slot.0 = true;
                    } else {
                        slot.1 = true;
                    }
                }
            }
        }
        Context {
            mesh,
            rank,
            levels,
            by_level,
            boundary,
            vertex_boundary,
        }
    }

    /// Signed position of vertex `v` relative to the doubled level `key`.
    fn side(&self, v: MeshVertex, key: i64) -> i64 {
        (2 * self.rank[v as usize] - key).signum()
    }

    fn triangles_at(&self, key: i64) -> &[usize] {
        // An odd key lies between ranks; the lower rank's list contains
        // every triangle spanning it (plus some that do not, filtered later).
        &self.by_level[(key / 2) as usize]
    }

    fn terminal(&self, p: LevelPoint) -> Terminal {
        match p {
            LevelPoint::Vertex(v) => match self.vertex_boundary[v as usize] {
                (_, true) => Terminal::Open,
                (true, false) => Terminal::Ideal,
                (false, false) => Terminal::Fold,
            },
            LevelPoint::EdgePoint(a, b) => match self.boundary.get(&(a, b)) {
                Some(true) => Terminal::Ideal,
                Some(false) => Terminal::Open,
                None => Terminal::Fold,
            },
        }
    }

    fn on_open_boundary(&self, p: LevelPoint) -> bool {
        match p {
            LevelPoint::Vertex(v) => self.vertex_boundary[v as usize].1,
            LevelPoint::EdgePoint(a, b) => self.boundary.get(&(a, b)) == Some(&false),
        }
    }

    fn level_complex(&self, key: i64) -> LevelComplex {
        let mut points = Vec::new();
        let mut index = HashMap::new();
        let mut segments: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut intern = |p: LevelPoint, points: &mut Vec<LevelPoint>| -> usize {
            *index.entry(p).or_insert_with(|| {
                points.push(p);
                points.len() - 1
            })
        };
        for &t in self.triangles_at(key) {
            let tri = self.mesh.triangles[t];
            let s = tri.map(|v| self.side(v, key));
            let mut here = Vec::with_capacity(2);
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                if s[i] == 0 {
                    here.push(intern(LevelPoint::Vertex(a), &mut points));
                }
                if s[i] * s[(i + 1) % 3] < 0 {
                    let (x, y) = edge_key(a, b);
                    here.push(intern(LevelPoint::EdgePoint(x, y), &mut points));
                }
            }
            match here.len() {
                2 => {
                    let (p, q) = (here[0].min(here[1]), here[0].max(here[1]));
                    segments.insert((p, q));
                }
                // A vertex touching the level with the rest on one side.
                1 => {}
                0 => {}
                _ => unreachable!("a non-flat triangle meets a level in at most two points"),
            }
        }

        let n = points.len();
        let mut uf = UnionFind::new(n);
        let mut valence = vec![0usize; n];
        for &(p, q) in &segments {
            uf.union(p, q);
            valence[p] += 1;
            valence[q] += 1;
        }
        let mut root_to_comp = HashMap::new();
        let mut component = vec![0; n];
        for (i, c) in component.iter_mut().enumerate() {
            let r = uf.find(i);
            let next = root_to_comp.len();
            *c = *root_to_comp.entry(r).or_insert(next);
        }
        let count = root_to_comp.len();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (i, &c) in component.iter().enumerate() {
            members[c].push(i);
        }
        let mut seg_count = vec![0usize; count];
        for &(p, _) in &segments {
            seg_count[component[p]] += 1;
        }
        let components = members
            .iter()
            .enumerate()
            .map(|(c, pts)| self.classify(pts, &points, &valence, seg_count[c]))
            .collect();
        LevelComplex {
            points,
            component,
            components,
            index,
        }
    }

    fn classify(
        &self,
        pts: &[usize],
        points: &[LevelPoint],
        valence: &[usize],
        segs: usize,
    ) -> LevelComponentInfo {
        let touches_open_boundary = pts.iter().any(|&i| self.on_open_boundary(points[i]));
        let ends: Vec<Terminal> = pts
            .iter()
            .filter(|&&i| valence[i] == 1)
            .map(|&i| self.terminal(points[i]))
            .collect();
        let max_valence = pts.iter().map(|&i| valence[i]).max().unwrap_or(0);
        let topology = if pts.len() == 1 && segs == 0 {
            Topology::Point
        } else if max_valence == 2 && ends.is_empty() && segs == pts.len() {
            Topology::Circle
        } else if max_valence <= 2 && ends == [Terminal::Ideal, Terminal::Ideal] && segs + 1 == pts.len() {
            Topology::Line
        } else {
            Topology::Other
        };
        let detail = format!(
            "{} points, {} segments, max valence {max_valence}, ends {ends:?}",
            pts.len(),
            segs
        );
        LevelComponentInfo {
            topology,
            touches_open_boundary,
            detail,
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Lower and upper level points reached by an edge crossing band `i`.
fn band_ends(ctx: &Context, a: MeshVertex, b: MeshVertex, i: i64) -> (LevelPoint, LevelPoint) {
    let (lo, hi) = if ctx.rank[a as usize] < ctx.rank[b as usize] {
        (a, b)
    } else {
        (b, a)
    };
    let e = edge_key(a, b);
    let lower = if ctx.rank[lo as usize] == i {
        LevelPoint::Vertex(lo)
    } else {
        LevelPoint::EdgePoint(e.0, e.1)
    };
    let upper = if ctx.rank[hi as usize] == i + 1 {
        LevelPoint::Vertex(hi)
    } else {
        LevelPoint::EdgePoint(e.0, e.1)
    };
    (lower, upper)
}

/// Reeb graph with one node per level-set component at every vertex value
/// and one arc per band component between consecutive values.
pub fn build_augmented_reeb(mesh: &ScalarMesh) -> Result<ReebGraph, ReebError> {
    build_augmented_reeb_with(mesh, Exec::default())
}

pub fn build_augmented_reeb_with(mesh: &ScalarMesh, exec: Exec) -> Result<ReebGraph, ReebError> {
    if mesh.triangles.is_empty() {
        return Err(ReebError::Empty);
    }
    let ctx = Context::new(mesh);
    let l = ctx.levels.len();
    let complexes: Vec<LevelComplex> = exec.map_range(l, |i| ctx.level_complex(2 * i as i64));
    let mut offset = Vec::with_capacity(l);
    let mut nodes = Vec::new();
    for (i, lc) in complexes.iter().enumerate() {
        offset.push(nodes.len());
        for info in &lc.components {
            nodes.push(ReebNode {
                id: nodes.len(),
                value: ctx.levels[i],
                essential: true,
                boundary: info.touches_open_boundary,
                topology: info.topology,
            });
        }
    }

    let bands: Vec<Result<Vec<ReebArc>, ReebError>> = exec.map_range(l.saturating_sub(1), |i| {
        let key = 2 * i as i64 + 1;
        let band = ctx.level_complex(key);
        let (lo, hi) = (ctx.levels[i], ctx.levels[i + 1]);
        let mut attach: Vec<Option<(usize, usize)>> = vec![None; band.components.len()];
        for (p, &c) in band.points.iter().zip(&band.component) {
            let LevelPoint::EdgePoint(a, b) = *p else {
                unreachable!("no vertex lies strictly between consecutive values")
            };
            let (lp, up) = band_ends(&ctx, a, b, i as i64);
            let below = complexes[i]
                .component_of(lp)
                .ok_or(ReebError::Attachment { lo, hi })?;
            let above = complexes[i + 1]
                .component_of(up)
                .ok_or(ReebError::Attachment { lo, hi })?;
            match attach[c] {
                None => attach[c] = Some((below, above)),
                Some(prev) if prev != (below, above) => return Err(ReebError::Attachment { lo, hi }),
                Some(_) => {}
            }
        }
        band.components
            .iter()
            .zip(attach)
            .map(|(info, ends)| {
                let fiber = info.topology.fiber().ok_or_else(|| ReebError::BandCrossSection {
                    lo,
                    hi,
                    detail: info.detail.clone(),
                })?;
                let (below, above) = ends.expect("every band component has crossing points");
                Ok(ReebArc {
                    lower: offset[i] + below,
                    upper: offset[i + 1] + above,
                    fiber,
                })
            })
            .collect()
    });
    let mut arcs = Vec::new();
    for band in bands {
        arcs.extend(band?);
    }

    let mut down: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (k, a) in arcs.iter().enumerate() {
        up[a.lower].push(k);
        down[a.upper].push(k);
    }
    for node in &mut nodes {
        let (d, u) = (&down[node.id], &up[node.id]);
        node.essential = !(d.len() == 1
            && u.len() == 1
            && arcs[d[0]].fiber == arcs[u[0]].fiber
            && node.topology.fiber() == Some(arcs[d[0]].fiber));
    }
    Ok(ReebGraph { nodes, arcs })
}

impl ReebGraph {
    /// Removes inessential nodes, joining the arcs through them.
    pub fn smooth_inessential(&self) -> ReebGraph {
        let mut up: Vec<Option<usize>> = vec![None; self.nodes.len()];
        for (k, a) in self.arcs.iter().enumerate() {
            if !self.nodes[a.lower].essential {
                up[a.lower] = Some(k);
            }
        }
        let mut renumber = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for n in self.nodes.iter().filter(|n| n.essential) {
            renumber[n.id] = nodes.len();
            nodes.push(ReebNode {
                id: nodes.len(),
                ..n.clone()
            });
        }
        let mut arcs = Vec::new();
        for a in &self.arcs {
            if !self.nodes[a.lower].essential {
                continue;
            }
            let mut upper = a.upper;
            while !self.nodes[upper].essential {
                upper = self.arcs[up[upper].expect("inessential nodes have one arc above")].upper;
            }
            arcs.push(ReebArc {
                lower: renumber[a.lower],
                upper: renumber[upper],
                fiber: a.fiber,
            });
        }
        ReebGraph { nodes, arcs }
    }

    /// The graph as labeled input data (nodes become vertices, arcs edges).
    pub fn to_labeled_graph(&self) -> Result<LabeledGraph, GraphError> {
        LabeledGraph::new(
            Mode::Binary,
            self.nodes.iter().map(|n| (n.id as u64, n.value)),
            self.arcs.iter().enumerate().map(|(k, a)| Edge {
                id: k as u64,
                u: a.lower as u64,
                v: a.upper as u64,
                label: a.fiber.label(),
            }),
        )
    }

    pub fn essential_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.essential).count()
    }

    /// Graph text in the input format; labels are 0 for circle arcs and 1
    /// for line arcs.
    pub fn to_rgl(&self) -> String {
        let mut out = String::from("mode binary\n");
        for n in &self.nodes {
            write!(out, "v {} {}", n.id, n.value).unwrap();
            if n.essential {
                out.push_str(" # essential");
            }
            out.push('\n');
        }
        for (k, a) in self.arcs.iter().enumerate() {
            writeln!(out, "e {k} {} {} {}", a.lower, a.upper, a.fiber.label()).unwrap();
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph reeb {\n");
        for n in &self.nodes {
            let shape = if n.essential { "circle" } else { "point" };
            writeln!(out, "  n{} [label=\"{}\", shape={shape}];", n.id, n.value).unwrap();
        }
        for a in &self.arcs {
            let style = if a.fiber == FiberType::Line {
                "dashed"
            } else {
                "solid"
            };
            let label = a.fiber.label();
            writeln!(
                out,
                "  n{} -- n{} [label=\"{label}\", style={style}];",
                a.lower, a.upper
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Smoothed Reeb graph of a mesh.
pub fn reeb_graph(mesh: &ScalarMesh) -> Result<ReebGraph, ReebError> {
    Ok(build_augmented_reeb(mesh)?.smooth_inessential())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn octahedron() -> ScalarMesh {
        let mut m = ScalarMesh::new();
        let bottom = m.add_vertex(r(0, 1));
        let ring: Vec<_> = (0..4).map(|i| m.add_vertex(r(4 + i, 8))).collect();
        let top = m.add_vertex(r(1, 1));
        for i in 0..4 {
            let (a, b) = (ring[i], ring[(i + 1) % 4]);
            m.add_triangle(bottom, b, a);
            m.add_triangle(top, a, b);
        }
        m
    }

    #[test]
    fn sphere_has_one_circle_arc() {
        let g = reeb_graph(&octahedron()).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.arcs.len(), 1);
        assert_eq!(g.arcs[0].fiber, FiberType::Circle);
        assert_eq!((g.nodes[0].value, g.nodes[1].value), (r(0, 1), r(1, 1)));
    }

    #[test]
    fn ideal_triangle_is_one_line_arc() {
        let mut m = ScalarMesh::new();
        let a = m.add_vertex(r(0, 1));
        let b = m.add_vertex(r(1, 2));
        let c = m.add_vertex(r(1, 1));
        m.add_triangle(a, b, c);
        for (x, y) in [(a, b), (b, c), (a, c)] {
            m.mark_ideal(x, y);
        }
        let g = reeb_graph(&m).unwrap();
        assert_eq!(g.arcs.len(), 1);
        assert_eq!(g.arcs[0].fiber, FiberType::Line);
    }

    #[test]
    fn executors_agree() {
        let m = octahedron().refine_barycentric();
        let seq = build_augmented_reeb_with(&m, Exec::Sequential).unwrap();
        let par = build_augmented_reeb_with(&m, Exec::default()).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.smooth_inessential().arcs.len(), 1);
    }
}
