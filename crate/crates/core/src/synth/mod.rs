//! Meshing of dimension-1 construction plans.
//!
//! Every local model becomes a patch around its critical level graph, every
//! tube a three-row product, and tubes are zipped onto the fiber rows of the
//! models they connect.

mod patches;
mod ribbon;

pub use patches::{model_patch, saddle_graph, tube_patch, CIRCLE_ROW, LINE_ROW};
pub use ribbon::{Face, Patch, PatchRow, RibbonGraph, Side};

use crate::error::SynthError;
use crate::exec::Exec;
use crate::mesh::{MeshVertex, ScalarMesh};
use crate::plan::{ConstructionPlan, FiberType};

/// Triangulates the strip between rows `x` and `y`. The strip runs along
/// `x` forward and along `y` backward, so a neighbor traversing `x`
/// backward and `y` forward glues on consistently. Open rows get ideal end
/// edges.
pub fn zipper(mesh: &mut ScalarMesh, x: &[MeshVertex], y: &[MeshVertex], closed: bool) {
    let (nx, ny) = if closed {
        (x.len(), y.len())
    } else {
        (x.len() - 1, y.len() - 1)
    };
    let at = |row: &[MeshVertex], i: usize| row[i % row.len()];
    let (mut i, mut j) = (0, 0);
    while i < nx || j < ny {
        if j == ny || (i < nx && (i + 1) * ny <= (j + 1) * nx) {
            mesh.add_triangle(at(x, i), at(x, i + 1), at(y, j));
            i += 1;
        } else {
            mesh.add_triangle(at(x, i), at(y, j + 1), at(y, j));
            j += 1;
        }
    }
    if !closed {
        mesh.mark_ideal(x[0], y[0]);
        mesh.mark_ideal(x[nx], y[ny]);
    }
}

fn internal(detail: String) -> SynthError {
    SynthError::Internal {
        location: "assembly".into(),
        detail,
    }
}

/// Copies `patch` into `mesh`, returning its rows in global numbering.
fn append(mesh: &mut ScalarMesh, patch: &Patch) -> Vec<PatchRow> {
    let offset = mesh.vertex_count() as MeshVertex;
    mesh.values.extend_from_slice(&patch.mesh.values);
    mesh.triangles
        .extend(patch.mesh.triangles.iter().map(|t| t.map(|v| v + offset)));
    mesh.ideal
        .extend(patch.mesh.ideal.iter().map(|&(a, b)| (a + offset, b + offset)));
    patch
        .rows
        .iter()
        .map(|r| PatchRow {
            verts: r.verts.iter().map(|v| v + offset).collect(),
            ..r.clone()
        })
        .collect()
}

/// Assigns patch rows on `side` to interface slots of matching fiber type.
fn match_rows(
    rows: &[PatchRow],
    side: Side,
    slots: &[crate::plan::Slot],
    model: usize,
) -> Result<Vec<PatchRow>, SynthError> {
    let mut free: Vec<&PatchRow> = rows.iter().filter(|r| r.side == side).collect();
    if free.len() != slots.len() {
        return Err(internal(format!(
            "model {model} has {} {side:?} rows for {} slots",
            free.len(),
            slots.len()
        )));
    }
    slots
        .iter()
        .map(|slot| {
            let closed = match slot.fiber {
                FiberType::Circle => true,
                FiberType::Line => false,
                other => return Err(SynthError::UnsupportedFiber(other.to_string())),
            };
            let pos = free
                .iter()
                .position(|r| r.closed == closed)
                .ok_or_else(|| internal(format!("model {model} lacks a {} row", slot.fiber)))?;
            Ok(free.remove(pos).clone())
        })
        .collect()
}

pub fn synthesize(plan: &ConstructionPlan) -> Result<ScalarMesh, SynthError> {
    synthesize_with(plan, Exec::default())
}

/// Meshes a dimension-1 plan. The result passes full validation and is
/// consistently oriented.
pub fn synthesize_with(plan: &ConstructionPlan, exec: Exec) -> Result<ScalarMesh, SynthError> {
    if plan.dimension != 1 {
        return Err(SynthError::Dimension(plan.dimension));
    }
    let model_patches = exec.map(&plan.models, |m| model_patch(m.kind, m.level, m.collar));
    let tube_patches = exec.map(&plan.tubes, |t| tube_patch(t.fiber, t.lo, t.hi));

    let mut mesh = ScalarMesh::new();
    let mut lower_rows = Vec::with_capacity(plan.models.len());
    let mut upper_rows = Vec::with_capacity(plan.models.len());
    for (m, patch) in plan.models.iter().zip(model_patches) {
        let rows = append(&mut mesh, &patch?);
        lower_rows.push(match_rows(&rows, Side::Lower, &m.lower, m.id)?);
        upper_rows.push(match_rows(&rows, Side::Upper, &m.upper, m.id)?);
    }
    for (t, patch) in plan.tubes.iter().zip(tube_patches) {
        let rows = append(&mut mesh, &patch?);
        let (bottom, top) = (&rows[0], &rows[1]);
        let below = plan
            .models
            .get(t.lower_model)
            .and_then(|m| m.upper.iter().position(|s| s.tube == t.id))
            .map(|slot| &upper_rows[t.lower_model][slot])
            .ok_or_else(|| internal(format!("tube {} has no lower model", t.id)))?;
        let above = plan
            .models
            .get(t.upper_model)
            .and_then(|m| m.lower.iter().position(|s| s.tube == t.id))
            .map(|slot| &lower_rows[t.upper_model][slot])
            .ok_or_else(|| internal(format!("tube {} has no upper model", t.id)))?;
        for (model_row, tube_row) in [(below, bottom), (above, top)] {
            let x: Vec<MeshVertex> = model_row.verts.iter().rev().copied().collect();
            zipper(&mut mesh, &x, &tube_row.verts, tube_row.closed);
        }
    }
    mesh.validate().map_err(|e| internal(e.to_string()))?;
    if !mesh.is_consistently_oriented() {
        return Err(internal("pieces glued with clashing orientations".into()));
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::plan::plan_graph;

    fn mesh_of(text: &str) -> ScalarMesh {
        synthesize(&plan_graph(&parse_graph(text).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn sphere_torus_and_disk() {
        assert_eq!(
            mesh_of("mode binary; v 0 0; v 1 1; e 0 0 1 0").euler_characteristic(),
            2
        );
        assert_eq!(
            mesh_of("mode binary; v 0 0; v 1 1; e 0 0 1 0; e 1 0 1 0").euler_characteristic(),
            0
        );
        let disk = mesh_of("mode binary; v 0 0; v 1 1; e 0 0 1 1");
        assert_eq!(disk.euler_characteristic(), 1);
        assert!(!disk.ideal.is_empty());
    }

    #[test]
    fn zipper_of_unequal_circles_is_an_annulus() {
        let mut mesh = ScalarMesh::new();
        let x: Vec<_> = (0..3)
            .map(|_| mesh.add_vertex(crate::rational::Rational::zero()))
            .collect();
        let y: Vec<_> = (0..7)
            .map(|_| mesh.add_vertex(crate::rational::Rational::from_integer(1)))
            .collect();
        zipper(&mut mesh, &x, &y, true);
        mesh.validate_patch().unwrap();
        assert_eq!(mesh.euler_characteristic(), 0);
        assert!(mesh.is_consistently_oriented());
    }
}
