//! Critical level graphs with a rotation system, thickened into surface
//! patches.
//!
//! Every face of the ribbon graph becomes a strip running from the graph
//! down to a fiber row just below the level, or up to one just above it.
//! Which way a face goes is read off the side labels of its darts.

use std::collections::HashMap;

use crate::error::SynthError;
use crate::mesh::{MeshVertex, ScalarMesh};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

/// A graph drawn at one level. Degree-1 vertices are either ideal (on the
/// removed boundary) or fold tips where the level set simply ends.
#[derive(Debug, Clone, Default)]
pub struct RibbonGraph {
    pub ideal: Vec<bool>,
    /// Neighbors in counterclockwise order.
    pub rotation: Vec<Vec<usize>>,
    pub sides: HashMap<(usize, usize), Side>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Visited vertices; for a closed face the last dart returns to `walk[0]`.
    pub walk: Vec<usize>,
    pub closed: bool,
    pub side: Side,
}

impl RibbonGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, ideal: bool) -> usize {
        self.ideal.push(ideal);
        self.rotation.push(Vec::new());
        self.ideal.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.ideal.len()
    }

    /// Adds edge `u - v`, appending to both rotations. The dart `u -> v`
    /// lies on `forward` and `v -> u` on `backward`.
    pub fn add_edge(&mut self, u: usize, v: usize, forward: Side, backward: Side) {
        self.rotation[u].push(v);
        self.rotation[v].push(u);
        self.sides.insert((u, v), forward);
        self.sides.insert((v, u), backward);
    }

    /// Path `u_0 - ... - u_k` with the given dart sides.
    pub fn add_path(&mut self, verts: &[usize], forward: Side, backward: Side) {
        for w in verts.windows(2) {
            self.add_edge(w[0], w[1], forward, backward);
        }
    }

    pub fn set_rotation(&mut self, v: usize, order: Vec<usize>) {
        let mut a = order.clone();
        let mut b = self.rotation[v].clone();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b, "rotation must permute the neighbors of {v}");
        self.rotation[v] = order;
    }

    /// Next dart of the face containing `u -> v`.
    fn successor(&self, u: usize, v: usize) -> usize {
        let rot = &self.rotation[v];
        let i = rot.iter().position(|&x| x == u).expect("dart exists");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Traces all faces: walks between ideal vertices first, then cycles.
    pub fn faces(&self) -> Result<Vec<Face>, SynthError> {
        let internal = |detail: String| SynthError::Internal {
            location: "ribbon faces".into(),
            detail,
        };
        let mut used: HashMap<(usize, usize), bool> = self.sides.keys().map(|&d| (d, false)).collect();
        let mut faces = Vec::new();
        let trace =
            |start: (usize, usize), used: &mut HashMap<(usize, usize), bool>| -> Result<Face, SynthError> {
                let side = self.sides[&start];
                let mut walk = vec![start.0];
                let (mut u, mut v) = start;
                loop {
                    if std::mem::replace(used.get_mut(&(u, v)).unwrap(), true) {
                        return Err(internal(format!("dart {u}->{v} traced twice")));
                    }
                    if self.sides[&(u, v)] != side {
                        return Err(internal(format!(
                            "face starting at {start:?} changes side at {u}->{v}"
                        )));
                    }
                    if self.ideal[v] {
                        walk.push(v);
                        return Ok(Face {
                            walk,
                            closed: false,
                            side,
                        });
                    }
                    let w = self.successor(u, v);
                    if (v, w) == start {
                        return Ok(Face {
                            walk,
                            closed: true,
                            side,
                        });
                    }
                    walk.push(v);
                    (u, v) = (v, w);
                }
            };
        for v in 0..self.vertex_count() {
            if self.ideal[v] {
                if self.rotation[v].len() != 1 {
                    return Err(internal(format!(
                        "ideal vertex {v} has degree {}",
                        self.rotation[v].len()
                    )));
                }
                faces.push(trace((v, self.rotation[v][0]), &mut used)?);
            }
        }
        let mut darts: Vec<(usize, usize)> = used.keys().copied().collect();
        darts.sort_unstable();
        for d in darts {
            if !used[&d] {
                let face = trace(d, &mut used)?;
                if face.walk.len() < 3 {
                    return Err(internal(format!("closed face of length {}", face.walk.len())));
                }
                faces.push(face);
            }
        }
        Ok(faces)
    }

    /// Thickens the graph at `level` into a patch whose fiber rows sit at
    /// `level - collar` and `level + collar`.
    pub fn thicken(&self, level: Rational, collar: Rational) -> Result<Patch, SynthError> {
        let faces = self.faces()?;
        let mut mesh = ScalarMesh::new();
        // Vertices merged away by an identification have no neighbors left.
        let k: Vec<MeshVertex> = self
            .rotation
            .iter()
            .map(|r| {
                if r.is_empty() {
                    MeshVertex::MAX
                } else {
                    mesh.add_vertex(level)
                }
            })
            .collect();
        let mut rows = Vec::new();
        for face in faces {
            let value = match face.side {
                Side::Lower => level - collar,
                Side::Upper => level + collar,
            };
            let w: Vec<MeshVertex> = face.walk.iter().map(|&x| k[x]).collect();
            let u: Vec<MeshVertex> = w.iter().map(|_| mesh.add_vertex(value)).collect();
            let n = w.len();
            let steps = if face.closed { n } else { n - 1 };
            for i in 0..steps {
                let j = (i + 1) % n;
                mesh.add_triangle(w[i], w[j], u[j]);
                mesh.add_triangle(w[i], u[j], u[i]);
            }
            if !face.closed {
                mesh.mark_ideal(w[0], u[0]);
                mesh.mark_ideal(w[n - 1], u[n - 1]);
            }
            rows.push(PatchRow {
                verts: u,
                closed: face.closed,
                side: face.side,
            });
        }
        Patch::new(mesh, rows)
    }
}

/// A boundary row of a patch, where a tube gets attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchRow {
    pub verts: Vec<MeshVertex>,
    pub closed: bool,
    pub side: Side,
}

/// A consistently oriented piece of surface with open fiber rows.
#[derive(Debug, Clone)]
pub struct Patch {
    pub mesh: ScalarMesh,
    pub rows: Vec<PatchRow>,
}

impl Patch {
    /// Orients the mesh and reorders each row along the direction in which
    /// the patch traverses it.
    pub fn new(mut mesh: ScalarMesh, mut rows: Vec<PatchRow>) -> Result<Patch, SynthError> {
        mesh.orient().map_err(|e| SynthError::Internal {
            location: "patch orientation".into(),
            detail: e.to_string(),
        })?;
        let mut directed = HashMap::new();
        for tri in &mesh.triangles {
            for i in 0..3 {
                directed.insert((tri[i], tri[(i + 1) % 3]), ());
            }
        }
        for row in &mut rows {
            if !directed.contains_key(&(row.verts[0], row.verts[1])) {
                row.verts.reverse();
                if row.closed {
                    row.verts.rotate_right(1);
                }
            }
        }
        Ok(Patch { mesh, rows })
    }

    pub fn rows_on(&self, side: Side) -> impl Iterator<Item = &PatchRow> {
        self.rows.iter().filter(move |r| r.side == side)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_line_has_two_faces() {
        let mut k = RibbonGraph::new();
        let verts: Vec<usize> = (0..5).map(|i| k.add_vertex(i == 0 || i == 4)).collect();
        k.add_path(&verts, Side::Lower, Side::Upper);
        let faces = k.faces().unwrap();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| !f.closed && f.walk.len() == 5));
        let patch = k.thicken(Rational::zero(), Rational::new(1, 4)).unwrap();
        patch.mesh.validate_patch().unwrap();
        assert_eq!(patch.mesh.euler_characteristic(), 1);
    }

    #[test]
    fn fold_tip_turns_the_walk_back() {
        let mut k = RibbonGraph::new();
        let a = k.add_vertex(true);
        let b = k.add_vertex(false);
        let c = k.add_vertex(false);
        k.add_path(&[a, b, c], Side::Upper, Side::Upper);
        let faces = k.faces().unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].walk, vec![a, b, c, b, a]);
        let patch = k.thicken(Rational::zero(), Rational::new(1, 4)).unwrap();
        patch.mesh.validate_patch().unwrap();
    }

    #[test]
    fn rows_follow_patch_orientation() {
        let mut k = RibbonGraph::new();
        let c: Vec<usize> = (0..6).map(|_| k.add_vertex(false)).collect();
        k.add_path(&c, Side::Lower, Side::Upper);
        k.add_edge(c[5], c[0], Side::Lower, Side::Upper);
        let patch = k.thicken(Rational::zero(), Rational::new(1, 4)).unwrap();
        assert_eq!(patch.rows.len(), 2);
        assert!(patch.mesh.is_consistently_oriented());
        for row in &patch.rows {
            let (a, b) = (row.verts[0], row.verts[1]);
            assert!(patch
                .mesh
                .triangles
                .iter()
                .any(|t| (0..3).any(|i| t[i] == a && t[(i + 1) % 3] == b)));
        }
    }
}
