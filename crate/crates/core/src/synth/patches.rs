//! Local models as thickened level graphs.

use crate::error::SynthError;
use crate::graph::Sign;
use crate::mesh::ScalarMesh;
use crate::plan::{is_forbidden_triple, FiberType, ModelKind};
use crate::rational::Rational;

use super::ribbon::{Patch, PatchRow, RibbonGraph, Side};

/// Row length of a circle fiber in caps and tubes.
pub const CIRCLE_ROW: usize = 12;
/// Row length of a line fiber in tubes.
pub const LINE_ROW: usize = 13;
/// Spacing of handle points along a strand.
const GAP: usize = 3;

/// Side where all fibers of an extremum live.
fn fiber_side(sign: Sign) -> Side {
    match sign {
        Sign::Min => Side::Upper,
        Sign::Max => Side::Lower,
    }
}

struct Strand {
    verts: Vec<usize>,
    closed: bool,
}

impl Strand {
    fn len(&self) -> usize {
        self.verts.len()
    }

    /// Position of the `i`-th handle point.
    fn point(&self, i: usize) -> usize {
        if self.closed {
            i * GAP
        } else {
            (i + 1) * GAP
        }
    }

    fn prev(&self, p: usize) -> usize {
        self.verts[(p + self.len() - 1) % self.len()]
    }

    fn next(&self, p: usize) -> usize {
        self.verts[(p + 1) % self.len()]
    }
}

/// Builds strands (lines and circles) and glues pairs of their points
/// together into 4-valent crossings.
struct StrandSet {
    kinds: Vec<bool>,
    points: Vec<usize>,
    pairs: Vec<((usize, usize), (usize, usize))>,
}

impl StrandSet {
    fn new() -> Self {
        StrandSet {
            kinds: Vec::new(),
            points: Vec::new(),
            pairs: Vec::new(),
        }
    }

    fn strand(&mut self, closed: bool) -> usize {
        self.kinds.push(closed);
        self.points.push(0);
        self.kinds.len() - 1
    }

    /// Reserves the next handle point on strand `s`.
    fn take(&mut self, s: usize) -> (usize, usize) {
        self.points[s] += 1;
        (s, self.points[s] - 1)
    }

    fn identify(&mut self, p: (usize, usize), q: (usize, usize)) {
        self.pairs.push((p, q));
    }

    /// Lays the strands out with forward darts on `forward` and backward
    /// darts on `backward`.
    fn build(&self, forward: Side, backward: Side) -> RibbonGraph {
        let mut k = RibbonGraph::new();
        let mut strands: Vec<Strand> = Vec::new();
        for (s, &closed) in self.kinds.iter().enumerate() {
            let n = if closed {
                CIRCLE_ROW.max(GAP * (self.points[s] + 1))
            } else {
                LINE_ROW.max(GAP * (self.points[s] + 2) + 1)
            };
            let verts = (0..n)
                .map(|i| k.add_vertex(!closed && (i == 0 || i == n - 1)))
                .collect();
            strands.push(Strand { verts, closed });
        }
        // Each identified point is replaced by the first point of its pair.
        let mut alias = std::collections::HashMap::new();
        for &(p, q) in &self.pairs {
            let x = strands[p.0].verts[strands[p.0].point(p.1)];
            alias.insert((q.0, strands[q.0].point(q.1)), x);
        }
        for (s, strand) in strands.iter_mut().enumerate() {
            for (i, v) in strand.verts.iter_mut().enumerate() {
                if let Some(&x) = alias.get(&(s, i)) {
                    *v = x;
                }
            }
        }
        for strand in &strands {
            k.add_path(&strand.verts, forward, backward);
            if strand.closed {
                k.add_edge(*strand.verts.last().unwrap(), strand.verts[0], forward, backward);
            }
        }
        for &(p, q) in &self.pairs {
            let (s, t) = (&strands[p.0], &strands[q.0]);
            let (ps, qt) = (s.point(p.1), t.point(q.1));
            let x = s.verts[ps];
            k.set_rotation(x, vec![s.next(ps), s.prev(ps), t.next(qt), t.prev(qt)]);
        }
        k
    }
}

/// Crossing pattern of a saddle `(a, b, c)`: `a` lines and `b` circles
/// below, `a` lines and `c` circles above.
fn saddle_strands(a: usize, b: usize, c: usize) -> Result<StrandSet, SynthError> {
    if is_forbidden_triple(a, b, c) || (a == 0 && (b == 0 || c == 0)) {
        return Err(SynthError::Forbidden { a, b, c });
    }
    let mut set = StrandSet::new();
    if a > 0 {
        let lines: Vec<usize> = (0..a).map(|_| set.strand(false)).collect();
        let circles: Vec<usize> = (0..b).map(|_| set.strand(true)).collect();
        for i in 1..a {
            let p = set.take(lines[i - 1]);
            let q = set.take(lines[i]);
            set.identify(p, q);
        }
        for &c in &circles {
            let p = set.take(c);
            let q = set.take(lines[0]);
            set.identify(p, q);
        }
        for _ in 0..c {
            let p = set.take(lines[0]);
            let q = set.take(lines[0]);
            set.identify(p, q);
        }
    } else if (b, c) == (1, 1) {
        let s = set.strand(true);
        let p: Vec<_> = (0..4).map(|_| set.take(s)).collect();
        set.identify(p[0], p[2]);
        set.identify(p[1], p[3]);
    } else {
        let circles: Vec<usize> = (0..b).map(|_| set.strand(true)).collect();
        for i in 1..b {
            let p = set.take(circles[i - 1]);
            let q = set.take(circles[i]);
            set.identify(p, q);
        }
        for _ in 1..c {
            let p = set.take(circles[0]);
            let q = set.take(circles[0]);
            set.identify(p, q);
        }
    }
    Ok(set)
}

pub fn saddle_graph(a: usize, b: usize, c: usize) -> Result<RibbonGraph, SynthError> {
    Ok(saddle_strands(a, b, c)?.build(Side::Lower, Side::Upper))
}

/// A saddle folded onto one side: `2a` lines and `b + c` circles.
pub fn squared_extremum_graph(a: usize, b: usize, c: usize, sign: Sign) -> Result<RibbonGraph, SynthError> {
    let side = fiber_side(sign);
    let set = match (a, b, c) {
        (1, 0, 0) => {
            let mut set = StrandSet::new();
            set.strand(false);
            set
        }
        (0, 1, 1) => {
            let mut set = StrandSet::new();
            set.strand(true);
            set
        }
        _ => saddle_strands(a, b, c)?,
    };
    Ok(set.build(side, side))
}

/// Spine `W - J - E` between two ideal ends, with a branch from `J` to `N`.
fn tee(k: &mut RibbonGraph, ideal_branch: bool, spine: (Side, Side), branch: (Side, Side)) {
    let half = LINE_ROW / 2;
    let west: Vec<usize> = (0..=half).map(|i| k.add_vertex(i == 0)).collect();
    let j = west[half];
    let east: Vec<usize> = std::iter::once(j)
        .chain((1..=half).map(|i| k.add_vertex(i == half)))
        .collect();
    let north: Vec<usize> = std::iter::once(j)
        .chain((1..=GAP).map(|i| k.add_vertex(ideal_branch && i == GAP)))
        .collect();
    k.add_path(&west, spine.0, spine.1);
    k.add_path(&east, spine.0, spine.1);
    k.add_path(&north, branch.0, branch.1);
    let (w, e, n) = (west[half - 1], east[1], north[1]);
    k.set_rotation(j, vec![e, n, w]);
}

/// One line below, two above.
pub fn line_birth_graph() -> RibbonGraph {
    let mut k = RibbonGraph::new();
    tee(
        &mut k,
        true,
        (Side::Upper, Side::Lower),
        (Side::Upper, Side::Upper),
    );
    k
}

/// Two lines below, one above.
pub fn line_death_graph() -> RibbonGraph {
    let mut k = RibbonGraph::new();
    tee(
        &mut k,
        true,
        (Side::Lower, Side::Upper),
        (Side::Lower, Side::Lower),
    );
    k
}

/// A line passing a fold: the level set grows a whisker ending inside.
pub fn line_transit_graph() -> RibbonGraph {
    let mut k = RibbonGraph::new();
    tee(
        &mut k,
        false,
        (Side::Upper, Side::Lower),
        (Side::Upper, Side::Upper),
    );
    k
}

/// Circle with a stem to an ideal end. The face through the stem is a line
/// on `line_side`; the other is a circle on the opposite side.
fn lollipop_graph(line_side: Side) -> RibbonGraph {
    let mut k = RibbonGraph::new();
    let circle: Vec<usize> = (0..CIRCLE_ROW).map(|_| k.add_vertex(false)).collect();
    let stem: Vec<usize> = std::iter::once(circle[0])
        .chain((1..=GAP).map(|i| k.add_vertex(i == GAP)))
        .collect();
    let circle_side = line_side.flip();
    k.add_path(&circle, line_side, circle_side);
    k.add_edge(circle[CIRCLE_ROW - 1], circle[0], line_side, circle_side);
    k.add_path(&stem, line_side, line_side);
    k.set_rotation(circle[0], vec![circle[1], stem[1], circle[CIRCLE_ROW - 1]]);
    k
}

/// Circle below, line above.
pub fn circle_open_graph() -> RibbonGraph {
    lollipop_graph(Side::Upper)
}

/// Line below, circle above.
pub fn circle_close_graph() -> RibbonGraph {
    lollipop_graph(Side::Lower)
}

/// Half-line ending at a fold tip: one line fiber on the sign side.
pub fn open_cap_graph(sign: Sign) -> RibbonGraph {
    let side = fiber_side(sign);
    let mut k = RibbonGraph::new();
    let path: Vec<usize> = (0..=LINE_ROW / 2).map(|i| k.add_vertex(i == 0)).collect();
    k.add_path(&path, side, side);
    k
}

/// A hub with `lines` ideal arms and `circles` lollipop arms, every face on
/// the sign side.
pub fn branched_extremum_graph(lines: usize, circles: usize, sign: Sign) -> Result<RibbonGraph, SynthError> {
    if lines == 0 || lines + circles < 2 {
        return Err(SynthError::Internal {
            location: "branched extremum".into(),
            detail: format!("needs a line and degree >= 2, got {lines} + {circles}"),
        });
    }
    let side = fiber_side(sign);
    let mut k = RibbonGraph::new();
    let hub = k.add_vertex(false);
    let mut order = Vec::new();
    for _ in 0..lines {
        let arm: Vec<usize> = std::iter::once(hub)
            .chain((1..=GAP).map(|i| k.add_vertex(i == GAP)))
            .collect();
        k.add_path(&arm, side, side);
        order.push(arm[1]);
    }
    for _ in 0..circles {
        let stem: Vec<usize> = std::iter::once(hub)
            .chain((1..=GAP).map(|_| k.add_vertex(false)))
            .collect();
        k.add_path(&stem, side, side);
        let root = stem[GAP];
        let ring: Vec<usize> = std::iter::once(root)
            .chain((1..CIRCLE_ROW / 2).map(|_| k.add_vertex(false)))
            .collect();
        k.add_path(&ring, side, side);
        k.add_edge(*ring.last().unwrap(), root, side, side);
        k.set_rotation(root, vec![ring[1], stem[GAP - 1], *ring.last().unwrap()]);
        order.push(stem[1]);
    }
    k.set_rotation(hub, order);
    Ok(k)
}

/// A disk: cone over a circle row on the sign side.
pub fn cap_patch(sign: Sign, level: Rational, collar: Rational) -> Result<Patch, SynthError> {
    let side = fiber_side(sign);
    let mut mesh = ScalarMesh::new();
    let apex = mesh.add_vertex(level);
    let value = match side {
        Side::Lower => level - collar,
        Side::Upper => level + collar,
    };
    let row: Vec<_> = (0..CIRCLE_ROW).map(|_| mesh.add_vertex(value)).collect();
    for i in 0..CIRCLE_ROW {
        mesh.add_triangle(apex, row[i], row[(i + 1) % CIRCLE_ROW]);
    }
    Patch::new(
        mesh,
        vec![PatchRow {
            verts: row,
            closed: true,
            side,
        }],
    )
}

/// Patch of a dimension-1 local model.
pub fn model_patch(kind: ModelKind, level: Rational, collar: Rational) -> Result<Patch, SynthError> {
    let k = match kind {
        ModelKind::Cap { sign } => return cap_patch(sign, level, collar),
        ModelKind::Saddle { a, b, c } => saddle_graph(a, b, c)?,
        ModelKind::SquaredExtremum { a, b, c, sign } => squared_extremum_graph(a, b, c, sign)?,
        ModelKind::OpenCap { sign } => open_cap_graph(sign),
        ModelKind::BranchedExtremum { lines, circles, sign } => {
            branched_extremum_graph(lines, circles, sign)?
        }
        ModelKind::LineTransit => line_transit_graph(),
        ModelKind::LineBirth => line_birth_graph(),
        ModelKind::LineDeath => line_death_graph(),
        ModelKind::CircleOpen => circle_open_graph(),
        ModelKind::CircleClose => circle_close_graph(),
        ModelKind::ProductCap { .. } | ModelKind::DiskRemove | ModelKind::DiskFill => {
            return Err(SynthError::Dimension(2))
        }
    };
    k.thicken(level, collar)
}

/// Product of a fiber with `[lo, hi]`: rows at `lo`, the midpoint and `hi`.
/// Returns the patch with its bottom row first and top row second.
pub fn tube_patch(fiber: FiberType, lo: Rational, hi: Rational) -> Result<Patch, SynthError> {
    if lo >= hi {
        return Err(SynthError::DegenerateInterval { lo, hi });
    }
    let (n, closed) = match fiber {
        FiberType::Circle => (CIRCLE_ROW, true),
        FiberType::Line => (LINE_ROW, false),
        other => return Err(SynthError::UnsupportedFiber(other.to_string())),
    };
    let mut mesh = ScalarMesh::new();
    let levels = [lo, lo.midpoint(&hi), hi];
    let rows: Vec<Vec<_>> = levels
        .iter()
        .map(|&f| (0..n).map(|_| mesh.add_vertex(f)).collect())
        .collect();
    for pair in rows.windows(2) {
        super::zipper(&mut mesh, &pair[0], &pair[1], closed);
    }
    Patch::new(
        mesh,
        vec![
            PatchRow {
                verts: rows[0].clone(),
                closed,
                side: Side::Lower,
            },
            PatchRow {
                verts: rows[2].clone(),
                closed,
                side: Side::Upper,
            },
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(patch: &Patch, side: Side, closed: bool) -> usize {
        patch.rows_on(side).filter(|r| r.closed == closed).count()
    }

    fn check_saddle(a: usize, b: usize, c: usize) {
        let kind = ModelKind::Saddle { a, b, c };
        let patch = model_patch(kind, Rational::zero(), Rational::new(1, 4)).unwrap();
        patch.mesh.validate_patch().unwrap();
        assert_eq!(count(&patch, Side::Lower, false), a, "{kind:?} lower lines");
        assert_eq!(count(&patch, Side::Lower, true), b, "{kind:?} lower circles");
        assert_eq!(count(&patch, Side::Upper, false), a, "{kind:?} upper lines");
        assert_eq!(count(&patch, Side::Upper, true), c, "{kind:?} upper circles");
    }

    #[test]
    fn saddles_have_the_right_fibers() {
        for (a, b, c) in [
            (2, 0, 0),
            (1, 1, 0),
            (1, 0, 1),
            (2, 1, 1),
            (3, 2, 2),
            (0, 1, 1),
            (0, 2, 1),
            (0, 1, 3),
            (0, 3, 2),
        ] {
            check_saddle(a, b, c);
        }
    }

    #[test]
    fn saddle_euler_characteristic_counts_handles() {
        let patch = model_patch(
            ModelKind::Saddle { a: 0, b: 1, c: 1 },
            Rational::zero(),
            Rational::new(1, 4),
        )
        .unwrap();
        assert_eq!(patch.mesh.euler_characteristic(), -2);
        let patch = model_patch(
            ModelKind::Saddle { a: 2, b: 1, c: 1 },
            Rational::zero(),
            Rational::new(1, 4),
        )
        .unwrap();
        assert_eq!(patch.mesh.euler_characteristic(), -1);
    }

    #[test]
    fn forbidden_saddle_is_rejected() {
        assert!(matches!(saddle_graph(1, 0, 0), Err(SynthError::Forbidden { .. })));
        assert!(matches!(saddle_graph(0, 2, 0), Err(SynthError::Forbidden { .. })));
    }

    #[test]
    fn transitions_have_the_right_fibers() {
        let q = Rational::new(1, 4);
        let cases = [
            (ModelKind::LineBirth, (1, 0), (2, 0)),
            (ModelKind::LineDeath, (2, 0), (1, 0)),
            (ModelKind::LineTransit, (1, 0), (1, 0)),
            (ModelKind::CircleOpen, (0, 1), (1, 0)),
            (ModelKind::CircleClose, (1, 0), (0, 1)),
            (ModelKind::OpenCap { sign: Sign::Min }, (0, 0), (1, 0)),
            (ModelKind::OpenCap { sign: Sign::Max }, (1, 0), (0, 0)),
            (ModelKind::Cap { sign: Sign::Max }, (0, 1), (0, 0)),
            (
                ModelKind::BranchedExtremum {
                    lines: 3,
                    circles: 2,
                    sign: Sign::Max,
                },
                (3, 2),
                (0, 0),
            ),
            (
                ModelKind::SquaredExtremum {
                    a: 1,
                    b: 1,
                    c: 1,
                    sign: Sign::Min,
                },
                (0, 0),
                (2, 2),
            ),
            (
                ModelKind::SquaredExtremum {
                    a: 1,
                    b: 0,
                    c: 0,
                    sign: Sign::Min,
                },
                (0, 0),
                (2, 0),
            ),
        ];
        for (kind, lower, upper) in cases {
            let patch = model_patch(kind, Rational::zero(), q).unwrap();
            patch.mesh.validate_patch().unwrap();
            let got_lower = (
                count(&patch, Side::Lower, false),
                count(&patch, Side::Lower, true),
            );
            let got_upper = (
                count(&patch, Side::Upper, false),
                count(&patch, Side::Upper, true),
            );
            assert_eq!((got_lower, got_upper), (lower, upper), "{kind:?}");
        }
    }

    #[test]
    fn tubes_are_products() {
        let q = Rational::new(1, 4);
        let circle = tube_patch(FiberType::Circle, Rational::zero(), q).unwrap();
        circle.mesh.validate_patch().unwrap();
        assert_eq!(circle.mesh.euler_characteristic(), 0);
        let line = tube_patch(FiberType::Line, Rational::zero(), q).unwrap();
        line.mesh.validate_patch().unwrap();
        assert_eq!(line.mesh.euler_characteristic(), 1);
        assert_eq!(line.mesh.ideal.len(), 4);
        assert!(tube_patch(FiberType::Line, q, q).is_err());
    }
}
