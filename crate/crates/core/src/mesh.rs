//! Triangulated surfaces carrying an exact PL scalar field.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::MeshError;
use crate::rational::Rational;

pub type MeshVertex = u32;

/// Unordered edge key with the smaller index first.
pub fn edge_key(a: MeshVertex, b: MeshVertex) -> (MeshVertex, MeshVertex) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A triangulated surface with a rational value per vertex.
///
/// Boundary edges are either ideal (removed from the surface, so the field
/// is unbounded toward them in spirit) or, for standalone patches, open.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScalarMesh {
    pub values: Vec<Rational>,
    pub coords: Option<Vec<[f64; 3]>>,
    pub triangles: Vec<[MeshVertex; 3]>,
    pub ideal: BTreeSet<(MeshVertex, MeshVertex)>,
}

impl ScalarMesh {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, value: Rational) -> MeshVertex {
        self.values.push(value);
        (self.values.len() - 1) as MeshVertex
    }

    pub fn add_triangle(&mut self, a: MeshVertex, b: MeshVertex, c: MeshVertex) {
        self.triangles.push([a, b, c]);
    }

    pub fn mark_ideal(&mut self, a: MeshVertex, b: MeshVertex) {
        self.ideal.insert(edge_key(a, b));
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, v: MeshVertex) -> Rational {
        self.values[v as usize]
    }

    /// Triangles incident to each edge.
    pub fn edge_map(&self) -> HashMap<(MeshVertex, MeshVertex), Vec<usize>> {
        let mut map: HashMap<_, Vec<usize>> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                map.entry(edge_key(tri[i], tri[(i + 1) % 3])).or_default().push(t);
            }
        }
        map
    }

    pub fn edge_count(&self) -> usize {
        self.edge_map().len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.triangles.len() as i64
    }

    /// Edges lying in exactly one triangle.
    pub fn boundary_edges(&self) -> BTreeSet<(MeshVertex, MeshVertex)> {
        self.edge_map()
            .into_iter()
            .filter(|(_, ts)| ts.len() == 1)
            .map(|(e, _)| e)
            .collect()
    }

    /// Full validation of a closed-up surface: every boundary edge is ideal.
    pub fn validate(&self) -> Result<(), MeshError> {
        self.validate_inner(false)
    }

    /// Validation of a standalone piece whose boundary may be left open.
    pub fn validate_patch(&self) -> Result<(), MeshError> {
        self.validate_inner(true)
    }

    fn validate_inner(&self, open_boundary: bool) -> Result<(), MeshError> {
        let n = self.values.len() as MeshVertex;
        for tri in &self.triangles {
            if let Some(&bad) = tri.iter().find(|&&v| v >= n) {
                return Err(MeshError::UnknownVertex(bad));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::VertexLink(tri[0]));
            }
            let [a, b, c] = tri.map(|v| self.value(v));
            if a == b && b == c {
                return Err(MeshError::FlatTriangle(tri[0], tri[1], tri[2]));
            }
        }
        let edges = self.edge_map();
        for (&(a, b), ts) in &edges {
            if ts.len() > 2 {
                return Err(MeshError::EdgeIncidence(a, b, ts.len()));
            }
            let ideal = self.ideal.contains(&(a, b));
            if ts.len() == 1 && !ideal && !open_boundary {
                return Err(MeshError::UnflaggedBoundary(a, b));
            }
            if ts.len() == 2 && ideal {
                return Err(MeshError::IdealNotBoundary(a, b));
            }
        }
        if let Some(&(a, b)) = self.ideal.iter().find(|e| !edges.contains_key(e)) {
            return Err(MeshError::IdealNotBoundary(a, b));
        }
        for (v, link) in self.links().into_iter().enumerate() {
            if !link_is_disk_or_circle(&link) {
                return Err(MeshError::VertexLink(v as MeshVertex));
            }
        }
        if self.component_count() > 1 {
            return Err(MeshError::Disconnected);
        }
        if !self.is_orientable() {
            return Err(MeshError::NonOrientable);
        }
        Ok(())
    }

    /// Link edges of every vertex.
    fn links(&self) -> Vec<Vec<(MeshVertex, MeshVertex)>> {
        let mut links = vec![Vec::new(); self.values.len()];
        for tri in &self.triangles {
            for i in 0..3 {
                links[tri[i] as usize].push((tri[(i + 1) % 3], tri[(i + 2) % 3]));
            }
        }
        links
    }

    /// Connected components of the triangle adjacency, as triangle lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let edges = self.edge_map();
        let mut seen = vec![false; self.triangles.len()];
        let mut out = Vec::new();
        for start in 0..self.triangles.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                let tri = self.triangles[t];
                for i in 0..3 {
                    for &u in &edges[&edge_key(tri[i], tri[(i + 1) % 3])] {
                        if !seen[u] {
                            seen[u] = true;
                            comp.push(u);
                            queue.push_back(u);
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Flips triangles so that every shared edge is traversed in opposite
    /// directions by its two triangles.
    pub fn orient(&mut self) -> Result<(), MeshError> {
        let edges = self.edge_map();
        let mut state: Vec<Option<bool>> = vec![None; self.triangles.len()];
        for start in 0..self.triangles.len() {
            if state[start].is_some() {
                continue;
            }
            state[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                let flip_t = state[t].unwrap();
                let tri = self.triangles[t];
                for i in 0..3 {
                    let (a, b) = (tri[i], tri[(i + 1) % 3]);
                    let dir_t = (a < b) != flip_t;
                    for &u in &edges[&edge_key(a, b)] {
                        if u == t {
                            continue;
                        }
                        let other = self.triangles[u];
                        let forward = (0..3).any(|j| other[j] == a && other[(j + 1) % 3] == b);
                        let dir_u_raw = if forward { a < b } else { b < a };
                        // The neighbor must traverse the edge opposite to `t`.
                        let need_flip = dir_u_raw == dir_t;
                        match state[u] {
                            None => {
                                state[u] = Some(need_flip);
                                queue.push_back(u);
                            }
                            Some(f) if f != need_flip => return Err(MeshError::NonOrientable),
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        for (tri, s) in self.triangles.iter_mut().zip(state) {
            if s == Some(true) {
                tri.swap(1, 2);
            }
        }
        Ok(())
    }

    pub fn is_orientable(&self) -> bool {
        self.clone().orient().is_ok()
    }

    /// True if the current triangle orientations already agree across every edge.
    pub fn is_consistently_oriented(&self) -> bool {
        let mut directed = HashMap::new();
        for tri in &self.triangles {
            for i in 0..3 {
                if directed.insert((tri[i], tri[(i + 1) % 3]), ()).is_some() {
                    return false;
                }
            }
        }
        true
    }

    /// Boundary edges chained into cycles, each given as a vertex cycle.
    pub fn boundary_cycles(&self) -> Vec<Vec<MeshVertex>> {
        let mut adj: BTreeMap<MeshVertex, Vec<MeshVertex>> = BTreeMap::new();
        for (a, b) in self.boundary_edges() {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut used: BTreeSet<(MeshVertex, MeshVertex)> = BTreeSet::new();
        let mut cycles = Vec::new();
        let starts: Vec<MeshVertex> = adj.keys().copied().collect();
        for start in starts {
            for &first in &adj[&start] {
                if used.contains(&edge_key(start, first)) {
                    continue;
                }
                let mut cycle = vec![start];
                let (mut prev, mut cur) = (start, first);
                used.insert(edge_key(start, first));
                while cur != start {
                    cycle.push(cur);
                    let next = adj[&cur]
                        .iter()
                        .copied()
                        .find(|&n| !used.contains(&edge_key(cur, n)) && n != prev)
                        .or_else(|| {
                            adj[&cur]
                                .iter()
                                .copied()
                                .find(|&n| !used.contains(&edge_key(cur, n)))
                        });
                    let Some(next) = next else { break };
                    used.insert(edge_key(cur, next));
                    prev = cur;
                    cur = next;
                }
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Number of maximal f-monotone runs along the ideal boundary cycles.
    pub fn ideal_monotone_paths(&self) -> usize {
        let mut total = 0;
        for cycle in self.boundary_cycles() {
            let n = cycle.len();
            let all_ideal = (0..n).all(|i| self.ideal.contains(&edge_key(cycle[i], cycle[(i + 1) % n])));
            if !all_ideal {
                continue;
            }
            let signs: Vec<i8> = (0..n)
                .map(
                    |i| match self.value(cycle[(i + 1) % n]).cmp(&self.value(cycle[i])) {
                        std::cmp::Ordering::Less => -1,
                        std::cmp::Ordering::Equal => 0,
                        std::cmp::Ordering::Greater => 1,
                    },
                )
                .filter(|&s| s != 0)
                .collect();
            let changes = (0..signs.len())
                .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
                .count();
            total += changes.max(if signs.is_empty() { 0 } else { 1 });
        }
        total
    }

    /// Barycentric subdivision; the PL field is unchanged because every new
    /// value is the linear interpolation at its point.
    pub fn refine_barycentric(&self) -> ScalarMesh {
        let mut out = ScalarMesh {
            values: self.values.clone(),
            coords: self.coords.clone(),
            triangles: Vec::with_capacity(self.triangles.len() * 6),
            ideal: BTreeSet::new(),
        };
        let mut mids: HashMap<(MeshVertex, MeshVertex), MeshVertex> = HashMap::new();
        let three = Rational::from_integer(3);
        for tri in &self.triangles {
            let center_value = (self.value(tri[0]) + self.value(tri[1]) + self.value(tri[2])) / three;
            let center = out.push_interpolated(center_value, tri);
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                let key = edge_key(a, b);
                let m = match mids.get(&key) {
                    Some(&m) => m,
                    None => {
                        let m = out.push_interpolated(self.value(a).midpoint(&self.value(b)), &[a, b]);
                        mids.insert(key, m);
                        m
                    }
                };
                out.triangles.push([a, m, center]);
                out.triangles.push([m, b, center]);
            }
        }
        for &(a, b) in &self.ideal {
            let m = mids[&(a, b)];
            out.mark_ideal(a, m);
            out.mark_ideal(m, b);
        }
        out
    }

    fn push_interpolated(&mut self, value: Rational, from: &[MeshVertex]) -> MeshVertex {
        if let Some(coords) = &mut self.coords {
            let mut p = [0.0; 3];
            for &v in from {
                for (k, x) in p.iter_mut().enumerate() {
                    *x += coords[v as usize][k] / from.len() as f64;
                }
            }
            coords.push(p);
        }
        self.add_vertex(value)
    }

    /// Places vertices of each value on a circle at height `z = f`.
    pub fn with_level_layout(mut self) -> ScalarMesh {
        let mut by_value: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for (v, f) in self.values.iter().enumerate() {
            by_value.entry(*f).or_default().push(v);
        }
        let mut coords = vec![[0.0; 3]; self.values.len()];
        for (f, vs) in by_value {
            let radius = 1.0 + (vs.len() as f64).sqrt() / 4.0;
            for (i, v) in vs.iter().enumerate() {
                let angle = std::f64::consts::TAU * i as f64 / vs.len() as f64;
                coords[*v] = [radius * angle.cos(), radius * angle.sin(), f.to_f64()];
            }
        }
        self.coords = Some(coords);
        self
    }

    /// Text form: `mv id f [x y z]`, `mt a b c`, `ideal a b`.
    pub fn to_rmesh(&self) -> String {
        let mut out = String::new();
        for (v, f) in self.values.iter().enumerate() {
            write!(out, "mv {v} {f}").unwrap();
            if let Some(coords) = &self.coords {
                let [x, y, z] = coords[v];
                write!(out, " {x} {y} {z}").unwrap();
            }
            out.push('\n');
        }
        for [a, b, c] in &self.triangles {
            writeln!(out, "mt {a} {b} {c}").unwrap();
        }
        for (a, b) in &self.ideal {
            writeln!(out, "ideal {a} {b}").unwrap();
        }
        out
    }

    pub fn to_off(&self) -> Result<String, MeshError> {
        let coords = self.coords.as_ref().ok_or(MeshError::MissingCoordinates(0))?;
        let mut out = format!("OFF\n{} {} 0\n", self.values.len(), self.triangles.len());
        for [x, y, z] in coords {
            writeln!(out, "{x} {y} {z}").unwrap();
        }
        for [a, b, c] in &self.triangles {
            writeln!(out, "3 {a} {b} {c}").unwrap();
        }
        Ok(out)
    }
}

fn link_is_disk_or_circle(link: &[(MeshVertex, MeshVertex)]) -> bool {
    if link.is_empty() {
        return false;
    }
    let mut adj: HashMap<MeshVertex, Vec<MeshVertex>> = HashMap::new();
    for &(a, b) in link {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.values().any(|n| n.len() > 2) {
        return false;
    }
    let ends = adj.values().filter(|n| n.len() == 1).count();
    if ends != 0 && ends != 2 {
        return false;
    }
    // Connected: walk from any vertex.
    let start = *adj.keys().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &n in &adj[&v] {
            if seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == adj.len()
}

pub fn parse_rmesh(text: &str) -> Result<ScalarMesh, MeshError> {
    let mut mesh = ScalarMesh::new();
    let mut coords: Vec<[f64; 3]> = Vec::new();
    let mut with_coords: Option<bool> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| MeshError::Syntax { line, message };
        let fields: Vec<&str> = content.split_whitespace().collect();
        let index = |s: &str| {
            s.parse::<MeshVertex>()
                .map_err(|_| err(format!("bad vertex index `{s}`")))
        };
        match fields[0] {
            "mv" => {
                if fields.len() != 3 && fields.len() != 6 {
                    return Err(err("expected `mv id f [x y z]`".into()));
                }
                let id = index(fields[1])?;
                if id as usize != mesh.values.len() {
                    return Err(err(format!(
                        "vertex ids must be consecutive, expected {}",
                        mesh.values.len()
                    )));
                }
                let f: Rational = fields[2].parse().map_err(|e| err(format!("{e}")))?;
                mesh.add_vertex(f);
                let has = fields.len() == 6;
                if *with_coords.get_or_insert(has) != has {
                    return Err(err("either every vertex has coordinates or none does".into()));
                }
                if has {
                    let mut p = [0.0; 3];
                    for k in 0..3 {
                        p[k] = fields[3 + k]
                            .parse()
                            .map_err(|_| err(format!("bad coordinate `{}`", fields[3 + k])))?;
                    }
                    coords.push(p);
                }
            }
            "mt" => {
                if fields.len() != 4 {
                    return Err(err("expected `mt a b c`".into()));
                }
                mesh.add_triangle(index(fields[1])?, index(fields[2])?, index(fields[3])?);
            }
            "ideal" => {
                if fields.len() != 3 {
                    return Err(err("expected `ideal a b`".into()));
                }
                mesh.mark_ideal(index(fields[1])?, index(fields[2])?);
            }
            other => return Err(err(format!("unknown record `{other}`"))),
        }
    }
    if with_coords == Some(true) {
        mesh.coords = Some(coords);
    }
    let n = mesh.values.len() as MeshVertex;
    for &(a, b) in &mesh.ideal {
        if a >= n || b >= n {
            return Err(MeshError::UnknownVertex(a.max(b)));
        }
    }
    Ok(mesh)
}
