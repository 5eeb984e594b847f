//! Construction plans: local models at vertices, tubes along edges, and a
//! symbolic sweep that checks every fiber transition.
//!
//! A plan is dimension-parametric. In dimension 1 (surfaces) fibers are
//! circles and lines; in dimension `n >= 2` a fiber is the n-sphere with `k`
//! disjoint disks removed. Only dimension-1 plans are meshed.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::graph::{
    self, check_theorem6_conditions, classify_route, EdgeId, LabeledGraph, Mode, Route, RouteTag, Sign,
    SmoothClass, VertexId,
};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FiberType {
    Circle,
    Line,
    /// `S^n` minus `k` open disks; `k = 0` is the sphere, `k = 1` Euclidean space.
    SphereMinusDisks {
        k: u32,
    },
}

impl FiberType {
    /// Fiber of an edge label in a plan of the given dimension.
    pub fn for_label(label: u32, dimension: u32) -> FiberType {
        if dimension == 1 {
            match label {
                0 => FiberType::Circle,
                _ => FiberType::Line,
            }
        } else {
            FiberType::SphereMinusDisks { k: label }
        }
    }

    /// Number of removed disks (circle = 0, line = 1).
    pub fn disks(&self) -> u32 {
        match self {
            FiberType::Circle => 0,
            FiberType::Line => 1,
            FiberType::SphereMinusDisks { k } => *k,
        }
    }

    pub fn label(&self) -> u32 {
        self.disks()
    }

    fn sphere(dimension: u32) -> FiberType {
        FiberType::for_label(0, dimension)
    }

    fn euclidean(dimension: u32) -> FiberType {
        FiberType::for_label(1, dimension)
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::Circle => f.write_str("circle"),
            FiberType::Line => f.write_str("line"),
            FiberType::SphereMinusDisks { k } => write!(f, "sphere-minus-{k}-disks"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    /// Handles attached to `a` lines and `b` circles, leaving `a` lines and `c` circles.
    Saddle { a: usize, b: usize, c: usize },
    /// Height function on a disk.
    Cap { sign: Sign },
    /// A saddle folded so that both of its sides face the same way.
    SquaredExtremum {
        a: usize,
        b: usize,
        c: usize,
        sign: Sign,
    },
    /// Extremum whose only fiber is a line.
    OpenCap { sign: Sign },
    /// Extremum with any number of line and circle fibers on one side.
    BranchedExtremum {
        lines: usize,
        circles: usize,
        sign: Sign,
    },
    /// Essential level carrying one line to one line.
    LineTransit,
    /// One line below, two lines above.
    LineBirth,
    /// Two lines below, one line above.
    LineDeath,
    /// A circle opens into a line going upward.
    CircleOpen,
    /// A line closes into a circle going upward.
    CircleClose,
    /// Extremum of a disk times a line: fiber `S^n` minus two disks.
    ProductCap { sign: Sign },
    /// Going upward, one more disk is removed from the fiber.
    DiskRemove,
    /// Going upward, one removed disk is filled back in.
    DiskFill,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HandleBudget {
    pub one_handles: usize,
    pub n_handles: usize,
}

pub fn is_forbidden_triple(a: usize, b: usize, c: usize) -> bool {
    matches!((a, b, c), (1, 0, 0) | (0, 1, 0) | (0, 0, 1) | (0, 0, 0))
}

/// Handles for a saddle `(a, b, c)` in fiber dimension `n`.
pub fn saddle_handles(a: usize, b: usize, c: usize, dimension: u32) -> HandleBudget {
    let (one_handles, n_handles) = if dimension == 1 {
        if a > 0 {
            (a - 1 + b + c, 0)
        } else if (b, c) == (1, 1) {
            (2, 0)
        } else {
            (b.saturating_sub(1) + c.saturating_sub(1), 0)
        }
    } else if a > 0 {
        (a - 1 + b, a + c)
    } else if (b, c) == (1, 1) {
        (1, 1)
    } else {
        (b.saturating_sub(1), c.saturating_sub(1))
    };
    HandleBudget {
        one_handles,
        n_handles,
    }
}

fn squared_is_bundle(a: usize, b: usize, c: usize) -> bool {
    (a, b, c) == (1, 0, 0) || (a, b, c) == (0, 1, 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub tube: usize,
    pub fiber: FiberType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalModel {
    pub id: usize,
    pub vertex: VertexId,
    #[serde(flatten)]
    pub kind: ModelKind,
    pub level: Rational,
    pub collar: Rational,
    pub lower: Vec<Slot>,
    pub upper: Vec<Slot>,
    pub handles: HandleBudget,
    pub smooth_class: SmoothClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum TubeRole {
    /// Product piece along a graph edge.
    Edge { edge: EdgeId },
    /// Short product piece between two models stacked inside one vertex collar.
    Link,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tube {
    pub id: usize,
    #[serde(flatten)]
    pub role: TubeRole,
    pub fiber: FiberType,
    pub lower_model: usize,
    pub upper_model: usize,
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCollar {
    pub vertex: VertexId,
    pub value: Rational,
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub dimension: u32,
    pub collar_half_width: Rational,
    pub collars: Vec<VertexCollar>,
    pub models: Vec<LocalModel>,
    pub tubes: Vec<Tube>,
}

impl ConstructionPlan {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn models_at(&self, v: VertexId) -> impl Iterator<Item = &LocalModel> {
        self.models.iter().filter(move |m| m.vertex == v)
    }

    pub fn edge_tube(&self, edge: EdgeId) -> Option<&Tube> {
        self.tubes.iter().find(|t| t.role == TubeRole::Edge { edge })
    }

    pub fn collar_of(&self, v: VertexId) -> Option<&VertexCollar> {
        self.collars.iter().find(|c| c.vertex == v)
    }
}

/// Smallest positive gap between distinct vertex values, over four.
pub fn collar_half_width(g: &LabeledGraph) -> Rational {
    let values = g.distinct_values();
    let gap = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .min()
        .expect("a valid graph has two distinct values");
    gap / Rational::from_integer(4)
}

#[derive(Debug, Clone, Copy)]
enum Producer {
    Edge(EdgeId),
    Model { model: usize, slot: usize },
}

#[derive(Debug, Clone, Copy)]
struct Pending {
    producer: Producer,
    fiber: FiberType,
    chain: Option<EdgeId>,
}

/// One step of a vertex stack, before levels are assigned.
struct Step {
    kind: ModelKind,
    consumes: Vec<FiberType>,
    produces: Vec<FiberType>,
    smooth_class: SmoothClass,
    /// Only consume fibers tagged with this edge chain.
    take: Option<EdgeId>,
    /// Tag produced fibers with this edge chain.
    tag: Option<EdgeId>,
}

fn step(
    kind: ModelKind,
    consumes: Vec<FiberType>,
    produces: Vec<FiberType>,
    smooth_class: SmoothClass,
) -> Step {
    Step {
        kind,
        consumes,
        produces,
        smooth_class,
        take: None,
        tag: None,
    }
}

fn repeat(f: FiberType, n: usize) -> Vec<FiberType> {
    vec![f; n]
}

struct Builder<'g> {
    graph: &'g LabeledGraph,
    dimension: u32,
    w: Rational,
    models: Vec<LocalModel>,
    tubes: Vec<Tube>,
    edge_tube: BTreeMap<EdgeId, usize>,
}

impl<'g> Builder<'g> {
    fn new(graph: &'g LabeledGraph, dimension: u32) -> Self {
        let w = collar_half_width(graph);
        let mut tubes = Vec::new();
        let mut edge_tube = BTreeMap::new();
        for e in graph.edges() {
            let (s, t) = graph.oriented(e);
            let id = tubes.len();
            tubes.push(Tube {
                id,
                role: TubeRole::Edge { edge: e.id },
                fiber: FiberType::for_label(e.label, dimension),
                lower_model: usize::MAX,
                upper_model: usize::MAX,
                lo: graph.value(s).unwrap() + w,
                hi: graph.value(t).unwrap() - w,
            });
            edge_tube.insert(e.id, id);
        }
        Builder {
            graph,
            dimension,
            w,
            models: Vec::new(),
            tubes,
            edge_tube,
        }
    }

    fn fiber(&self, e: EdgeId) -> FiberType {
        self.tubes[self.edge_tube[&e]].fiber
    }

    /// Runs `steps` upward through the collar of `v`; step `base` sits exactly
    /// at the vertex value and the others at evenly spaced micro-levels.
    fn stack(&mut self, v: VertexId, steps: Vec<Step>, base: usize) -> Result<(), PlanError> {
        let h = self.graph.value(v).unwrap();
        let below = base;
        let above = steps.len() - 1 - base;
        let n = below.max(above) as i128;
        let delta = self.w / Rational::from_integer(n + 1);
        let collar = delta / Rational::from_integer(4);
        let fail = |reason: String| PlanError::Model { vertex: v, reason };

        let mut incoming = self.graph.edges_below(v);
        incoming.sort_by_key(|e| e.id);
        let mut pending: Vec<Pending> = incoming
            .iter()
            .map(|e| Pending {
                producer: Producer::Edge(e.id),
                fiber: self.fiber(e.id),
                chain: Some(e.id),
            })
            .collect();

        for (i, step) in steps.into_iter().enumerate() {
            let level = h + delta * Rational::from_integer(i as i128 - base as i128);
            let model_id = self.models.len();
            let mut lower = Vec::new();
            for want in &step.consumes {
                let pos = pending
                    .iter()
                    .position(|p| p.fiber == *want && (step.take.is_none() || p.chain == step.take))
                    .ok_or_else(|| fail(format!("no pending {want} fiber for {:?}", step.kind)))?;
                let p = pending.remove(pos);
                let tube = self.attach_lower(p.producer, p.fiber, model_id, level - collar);
                lower.push(Slot { tube, fiber: p.fiber });
            }
            let mut upper = Vec::new();
            for (slot, fiber) in step.produces.iter().enumerate() {
                upper.push(Slot {
                    tube: usize::MAX,
                    fiber: *fiber,
                });
                pending.push(Pending {
                    producer: Producer::Model {
                        model: model_id,
                        slot,
                    },
                    fiber: *fiber,
                    chain: step.tag,
                });
            }
            let handles = match step.kind {
                ModelKind::Saddle { a, b, c } => saddle_handles(a, b, c, self.dimension),
                ModelKind::SquaredExtremum { a, b, c, .. } if !squared_is_bundle(a, b, c) => {
                    saddle_handles(a, b, c, self.dimension)
                }
                _ => HandleBudget::default(),
            };
            self.models.push(LocalModel {
                id: model_id,
                vertex: v,
                kind: step.kind,
                level,
                collar,
                lower,
                upper,
                handles,
                smooth_class: step.smooth_class,
            });
        }

        // Whatever is still pending leaves through the edges above.
        let mut outgoing = self.graph.edges_above(v);
        outgoing.sort_by_key(|e| e.id);
        for e in outgoing {
            let fiber = self.fiber(e.id);
            let pos = pending
                .iter()
                .position(|p| p.chain == Some(e.id) && p.fiber == fiber)
                .or_else(|| pending.iter().position(|p| p.chain.is_none() && p.fiber == fiber))
                .ok_or_else(|| fail(format!("no {fiber} fiber left for edge {}", e.id)))?;
            let Producer::Model { model, slot } = pending.remove(pos).producer else {
                return Err(fail(format!("edge {} crosses the collar without a model", e.id)));
            };
            let tube = self.edge_tube[&e.id];
            self.models[model].upper[slot].tube = tube;
            self.tubes[tube].lower_model = model;
        }
        if !pending.is_empty() {
            return Err(fail(format!("{} fibers left unattached", pending.len())));
        }
        Ok(())
    }

    fn attach_lower(
        &mut self,
        producer: Producer,
        fiber: FiberType,
        model: usize,
        slot_level: Rational,
    ) -> usize {
        match producer {
            Producer::Edge(e) => {
                let tube = self.edge_tube[&e];
                self.tubes[tube].upper_model = model;
                tube
            }
            Producer::Model { model: from, slot } => {
                let from_level = self.models[from].level + self.models[from].collar;
                let id = self.tubes.len();
                self.tubes.push(Tube {
                    id,
                    role: TubeRole::Link,
                    fiber,
                    lower_model: from,
                    upper_model: model,
                    lo: from_level.lerp(&slot_level, 1, 4),
                    hi: from_level.lerp(&slot_level, 3, 4),
                });
                self.models[from].upper[slot].tube = id;
                id
            }
        }
    }

    fn finish(self) -> ConstructionPlan {
        let w = self.w;
        let collars = self
            .graph
            .vertices()
            .map(|(vertex, value)| VertexCollar {
                vertex,
                value,
                lo: value - w,
                hi: value + w,
            })
            .collect();
        ConstructionPlan {
            dimension: self.dimension,
            collar_half_width: w,
            collars,
            models: self.models,
            tubes: self.tubes,
        }
    }
}

fn incident_fibers(g: &LabeledGraph, v: VertexId, dimension: u32) -> Vec<FiberType> {
    let mut edges: Vec<_> = g.incident_edges(v).collect();
    edges.sort_by_key(|e| e.id);
    edges
        .iter()
        .map(|e| FiberType::for_label(e.label, dimension))
        .collect()
}

fn extremum_step(kind: ModelKind, sign: Sign, fibers: Vec<FiberType>, class: SmoothClass) -> Step {
    match sign {
        Sign::Min => step(kind, vec![], fibers, class),
        Sign::Max => step(kind, fibers, vec![], class),
    }
}

fn binary_steps(g: &LabeledGraph, v: VertexId, tag: &RouteTag) -> (Vec<Step>, usize) {
    use FiberType::{Circle as C, Line as L};
    let class = tag.smooth_class;
    let fibers = incident_fibers(g, v, 1);
    let single = |s: Step| (vec![s], 0);
    match tag.route {
        Route::Thm2Saddle { a, b, c } => single(step(
            ModelKind::Saddle { a, b, c },
            [repeat(L, a), repeat(C, b)].concat(),
            [repeat(L, a), repeat(C, c)].concat(),
            class,
        )),
        Route::Thm2Cap { sign } => single(extremum_step(ModelKind::Cap { sign }, sign, fibers, class)),
        Route::Thm2SquaredExtremum { a, b, c, sign } => single(extremum_step(
            ModelKind::SquaredExtremum { a, b, c, sign },
            sign,
            fibers,
            class,
        )),
        Route::Thm4OpenCap { sign } => {
            single(extremum_step(ModelKind::OpenCap { sign }, sign, fibers, class))
        }
        Route::Thm4SquaredExtremum { profile, sign } => single(extremum_step(
            ModelKind::BranchedExtremum {
                lines: profile.in1 + profile.out1,
                circles: profile.in0 + profile.out0,
                sign,
            },
            sign,
            fibers,
            class,
        )),
        Route::Thm4CaseA => single(step(ModelKind::LineTransit, vec![L], vec![L], class)),
        Route::Thm4CaseB | Route::Thm4CaseC | Route::Thm4CaseD => {
            let p = graph::vertex_profile(g, v).expect("vertex exists");
            transit_stack(&p, class)
        }
    }
}

/// Base saddle at the vertex value, with line deaths stacked below it or
/// line births stacked above it. When no line crosses the base, a circle is
/// opened into a line (or a line closed into a circle) next to it.
fn transit_stack(p: &graph::VertexProfile, class: SmoothClass) -> (Vec<Step>, usize) {
    use FiberType::{Circle as C, Line as L};
    let (in1, out1, in0, out0) = (p.in1, p.out1, p.in0, p.out0);
    let death = || step(ModelKind::LineDeath, vec![L, L], vec![L], class);
    let birth = || step(ModelKind::LineBirth, vec![L], vec![L, L], class);
    let saddle = |a: usize, b: usize, c: usize| {
        step(
            ModelKind::Saddle { a, b, c },
            [repeat(L, a), repeat(C, b)].concat(),
            [repeat(L, a), repeat(C, c)].concat(),
            SmoothClass::Morse,
        )
    };
    let a = in1.min(out1);
    let mut steps = Vec::new();
    if a > 0 {
        // A lone line with no circles needs no base saddle.
        let has_base = !is_forbidden_triple(a, in0, out0);
        if in1 > out1 {
            steps.extend((0..in1 - out1).map(|_| death()));
            if has_base {
                steps.push(saddle(a, in0, out0));
            }
            let base = steps.len() - 1;
            (steps, base)
        } else {
            if has_base {
                steps.push(saddle(a, in0, out0));
            }
            steps.extend((0..out1 - in1).map(|_| birth()));
            (steps, 0)
        }
    } else if in1 == 0 {
        steps.push(saddle(0, in0, out0 + 1));
        steps.push(step(ModelKind::CircleOpen, vec![C], vec![L], class));
        steps.extend((1..out1).map(|_| birth()));
        (steps, 0)
    } else {
        steps.extend((1..in1).map(|_| death()));
        steps.push(step(ModelKind::CircleClose, vec![L], vec![C], class));
        steps.push(saddle(0, in0 + 1, out0));
        let base = steps.len() - 1;
        (steps, base)
    }
}

/// Base saddle (or folded saddle) on sphere fibers; every unit of label on
/// an incident edge becomes one disk replacement stacked in the collar.
fn general_steps(g: &LabeledGraph, v: VertexId, dimension: u32) -> Result<(Vec<Step>, usize), PlanError> {
    let sphere = FiberType::sphere(dimension);
    let p = graph::vertex_profile(g, v).expect("vertex exists");

    if p.degree() == 1 {
        let e = g.incident_edges(v).next().unwrap();
        let sign = graph::extremum_sign(&p);
        let kind = match e.label {
            0 => ModelKind::Cap { sign },
            1 => ModelKind::OpenCap { sign },
            2 => ModelKind::ProductCap { sign },
            label => {
                return Err(PlanError::CapLabel {
                    edge: e.id,
                    vertex: v,
                    label,
                })
            }
        };
        let fiber = FiberType::for_label(e.label, dimension);
        return Ok((
            vec![extremum_step(kind, sign, vec![fiber], SmoothClass::Morse)],
            0,
        ));
    }

    let mut below = g.edges_below(v);
    let mut above = g.edges_above(v);
    below.sort_by_key(|e| e.id);
    above.sort_by_key(|e| e.id);

    let mut steps = Vec::new();
    for e in &below {
        for k in (1..=e.label).rev() {
            steps.push(Step {
                take: Some(e.id),
                tag: Some(e.id),
                ..step(
                    ModelKind::DiskFill,
                    vec![FiberType::SphereMinusDisks { k }],
                    vec![FiberType::SphereMinusDisks { k: k - 1 }],
                    SmoothClass::MorseBott,
                )
            });
        }
    }
    let base = steps.len();
    if p.is_extremum {
        let sign = graph::extremum_sign(&p);
        let m = p.degree();
        let (b, c) = (m.div_ceil(2), m / 2);
        steps.push(extremum_step(
            ModelKind::SquaredExtremum { a: 0, b, c, sign },
            sign,
            repeat(sphere, m),
            SmoothClass::FoldComposition,
        ));
    } else {
        let (b, c) = (below.len(), above.len());
        steps.push(step(
            ModelKind::Saddle { a: 0, b, c },
            repeat(sphere, b),
            repeat(sphere, c),
            SmoothClass::Morse,
        ));
    }
    for e in &above {
        for k in 0..e.label {
            steps.push(Step {
                take: if k == 0 { None } else { Some(e.id) },
                tag: Some(e.id),
                ..step(
                    ModelKind::DiskRemove,
                    vec![FiberType::SphereMinusDisks { k }],
                    vec![FiberType::SphereMinusDisks { k: k + 1 }],
                    SmoothClass::MorseBott,
                )
            });
        }
    }
    Ok((steps, base))
}

/// Builds the construction plan of `g` in fiber dimension `dimension`.
///
/// Dimension 1 requires a binary graph and uses `routes`; higher dimensions
/// plan every vertex symbolically and ignore `routes`.
pub fn plan(
    g: &LabeledGraph,
    routes: &BTreeMap<VertexId, RouteTag>,
    dimension: u32,
) -> Result<ConstructionPlan, PlanError> {
    if dimension == 0 || (dimension == 1 && g.mode() != Mode::Binary) {
        return Err(PlanError::DimensionMismatch(dimension));
    }
    if dimension >= 2 {
        if let Some(bad) = check_theorem6_conditions(g).failing().next() {
            let e = g.incident_edges(bad.vertex).next().unwrap();
            return Err(PlanError::CapLabel {
                edge: e.id,
                vertex: bad.vertex,
                label: e.label,
            });
        }
    }
    let mut builder = Builder::new(g, dimension);
    for v in g.vertex_ids() {
        let (steps, base) = if dimension == 1 {
            let tag = routes.get(&v).ok_or(PlanError::MissingRoute(v))?;
            binary_steps(g, v, tag)
        } else {
            general_steps(g, v, dimension)?
        };
        builder.stack(v, steps, base)?;
    }
    Ok(builder.finish())
}

/// Plans a graph in its own mode's dimension, classifying routes as needed.
pub fn plan_graph(g: &LabeledGraph) -> Result<ConstructionPlan, PlanError> {
    let routes = if g.mode() == Mode::Binary {
        classify_route(g)
    } else {
        BTreeMap::new()
    };
    plan(g, &routes, g.mode().dimension())
}

fn sorted(mut v: Vec<FiberType>) -> Vec<FiberType> {
    v.sort();
    v
}

/// Checks that a model's interfaces are what its kind rewrites.
pub fn check_model(model: &LocalModel, dimension: u32) -> Result<(), String> {
    let sphere = FiberType::sphere(dimension);
    let euclid = FiberType::euclidean(dimension);
    let lower = sorted(model.lower.iter().map(|s| s.fiber).collect());
    let upper = sorted(model.upper.iter().map(|s| s.fiber).collect());
    let one_side = |sign: Sign, fibers: Vec<FiberType>| -> (Vec<FiberType>, Vec<FiberType>) {
        match sign {
            Sign::Min => (vec![], sorted(fibers)),
            Sign::Max => (sorted(fibers), vec![]),
        }
    };
    let binary_only = || {
        if dimension == 1 {
            Ok(())
        } else {
            Err(format!("{:?} exists only for surfaces", model.kind))
        }
    };
    let (want_lower, want_upper) = match model.kind {
        ModelKind::Saddle { a, b, c } => {
            if is_forbidden_triple(a, b, c) || (a == 0 && (b == 0 || c == 0)) {
                return Err(format!("saddle ({a}, {b}, {c}) is not realizable"));
            }
            let budget = saddle_handles(a, b, c, dimension);
            if model.handles != budget {
                return Err(format!(
                    "saddle ({a}, {b}, {c}) needs {budget:?}, plan has {:?}",
                    model.handles
                ));
            }
            (
                sorted([repeat(euclid, a), repeat(sphere, b)].concat()),
                sorted([repeat(euclid, a), repeat(sphere, c)].concat()),
            )
        }
        ModelKind::Cap { sign } => one_side(sign, vec![sphere]),
        ModelKind::OpenCap { sign } => one_side(sign, vec![euclid]),
        ModelKind::ProductCap { sign } => {
            if dimension < 2 {
                return Err("a product cap needs dimension >= 2".into());
            }
            one_side(sign, vec![FiberType::SphereMinusDisks { k: 2 }])
        }
        ModelKind::SquaredExtremum { a, b, c, sign } => {
            if is_forbidden_triple(a, b, c) && !squared_is_bundle(a, b, c) {
                return Err(format!("folded saddle ({a}, {b}, {c}) is not realizable"));
            }
            one_side(sign, [repeat(euclid, 2 * a), repeat(sphere, b + c)].concat())
        }
        ModelKind::BranchedExtremum { lines, circles, sign } => {
            binary_only()?;
            if lines + circles < 2 || lines == 0 {
                return Err(format!(
                    "branched extremum needs a line and degree >= 2, got {lines} + {circles}"
                ));
            }
            one_side(sign, [repeat(euclid, lines), repeat(sphere, circles)].concat())
        }
        ModelKind::LineTransit => {
            binary_only()?;
            (vec![euclid], vec![euclid])
        }
        ModelKind::LineBirth => {
            binary_only()?;
            (vec![euclid], vec![euclid, euclid])
        }
        ModelKind::LineDeath => {
            binary_only()?;
            (vec![euclid, euclid], vec![euclid])
        }
        ModelKind::CircleOpen => {
            binary_only()?;
            (vec![sphere], vec![euclid])
        }
        ModelKind::CircleClose => {
            binary_only()?;
            (vec![euclid], vec![sphere])
        }
        ModelKind::DiskRemove | ModelKind::DiskFill => {
            if dimension < 2 {
                return Err("disk replacements need dimension >= 2".into());
            }
            let (&[lo], &[hi]) = (lower.as_slice(), upper.as_slice()) else {
                return Err("a disk replacement acts on exactly one fiber".into());
            };
            let step = if model.kind == ModelKind::DiskRemove {
                1
            } else {
                -1
            };
            if hi.disks() as i64 - lo.disks() as i64 != step {
                return Err(format!("{lo} -> {hi} is not a single disk replacement"));
            }
            (lower.clone(), upper.clone())
        }
    };
    if lower != want_lower || upper != want_upper {
        return Err(format!(
            "{:?} rewrites {want_lower:?} -> {want_upper:?}, interfaces are {lower:?} -> {upper:?}",
            model.kind
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub pass: bool,
    pub trace: Vec<String>,
    /// First model whose rewrite failed, with the reason.
    pub failure: Option<(usize, String)>,
}

/// Sweeps the plan upward, applying each model as a rewrite of the live
/// fiber multiset.
pub fn simulate_fiber_transitions(plan: &ConstructionPlan) -> SimulationReport {
    let mut order: Vec<&LocalModel> = plan.models.iter().collect();
    order.sort_by(|a, b| a.level.cmp(&b.level).then(a.id.cmp(&b.id)));

    let mut live: BTreeMap<usize, FiberType> = BTreeMap::new();
    let mut closed = vec![false; plan.tubes.len()];
    let mut trace = Vec::new();
    let fail = |trace: Vec<String>, model: usize, reason: String| SimulationReport {
        pass: false,
        trace,
        failure: Some((model, reason)),
    };

    for m in order {
        for slot in &m.lower {
            let Some(tube) = plan.tubes.get(slot.tube) else {
                return fail(trace, m.id, format!("unknown tube {}", slot.tube));
            };
            match live.remove(&slot.tube) {
                None => {
                    return fail(
                        trace,
                        m.id,
                        format!("tube {} is not live below the model", slot.tube),
                    )
                }
                Some(f) if f != slot.fiber || tube.fiber != slot.fiber || tube.upper_model != m.id => {
                    return fail(
                        trace,
                        m.id,
                        format!("tube {} carries {f}, interface expects {}", slot.tube, slot.fiber),
                    )
                }
                Some(_) => closed[slot.tube] = true,
            }
        }
        if let Err(reason) = check_model(m, plan.dimension) {
            return fail(trace, m.id, reason);
        }
        for slot in &m.upper {
            let Some(tube) = plan.tubes.get(slot.tube) else {
                return fail(trace, m.id, format!("unknown tube {}", slot.tube));
            };
            if tube.fiber != slot.fiber || tube.lower_model != m.id {
                return fail(
                    trace,
                    m.id,
                    format!(
                        "tube {} carries {}, interface offers {}",
                        slot.tube, tube.fiber, slot.fiber
                    ),
                );
            }
            if live.insert(slot.tube, slot.fiber).is_some() || closed[slot.tube] {
                return fail(trace, m.id, format!("tube {} opened twice", slot.tube));
            }
        }
        trace.push(format!(
            "model {} ({:?}) at {}: {} -> {} live fibers",
            m.id,
            m.kind,
            m.level,
            m.lower.len(),
            live.len()
        ));
    }
    if let Some((&tube, _)) = live.iter().next() {
        let model = plan.tubes[tube].lower_model;
        return fail(trace, model, format!("tube {tube} never closes"));
    }
    if let Some(tube) = closed.iter().position(|c| !c) {
        return fail(
            trace,
            plan.tubes[tube].lower_model,
            format!("tube {tube} never opens"),
        );
    }
    SimulationReport {
        pass: true,
        trace,
        failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn planned(text: &str) -> ConstructionPlan {
        plan_graph(&parse_graph(text).unwrap()).unwrap()
    }

    #[test]
    fn sphere_is_two_caps_and_a_circle_tube() {
        let p = planned("mode binary; v 0 0; v 1 1; e 0 0 1 0");
        assert_eq!(p.models.len(), 2);
        assert!(p.models.iter().all(|m| matches!(m.kind, ModelKind::Cap { .. })));
        assert_eq!(p.tubes.len(), 1);
        assert_eq!(p.tubes[0].fiber, FiberType::Circle);
        assert_eq!(p.tubes[0].lo, Rational::new(1, 4));
        assert_eq!(p.tubes[0].hi, Rational::new(3, 4));
        assert!(simulate_fiber_transitions(&p).pass);
    }

    #[test]
    fn saddle_handle_counts() {
        assert_eq!(saddle_handles(2, 1, 1, 1).one_handles, 3);
        assert_eq!(saddle_handles(0, 1, 1, 1).one_handles, 2);
        assert_eq!(saddle_handles(0, 2, 3, 1).one_handles, 3);
        assert_eq!(
            saddle_handles(1, 2, 1, 3),
            HandleBudget {
                one_handles: 2,
                n_handles: 2
            }
        );
        assert_eq!(
            saddle_handles(0, 1, 1, 2),
            HandleBudget {
                one_handles: 1,
                n_handles: 1
            }
        );
    }

    #[test]
    fn general_cap_with_many_disks_is_rejected() {
        let g = parse_graph("mode general 3; v 0 0; v 1 1; e 0 0 1 4").unwrap();
        assert!(matches!(
            plan_graph(&g),
            Err(PlanError::CapLabel { label: 4, .. })
        ));
    }

    #[test]
    fn general_vertex_stacks_disk_replacements() {
        let p = planned("mode general 3; v 0 0; v 1 1; v 2 2; v 3 3; e 0 0 1 0; e 1 1 2 4; e 2 2 3 0");
        let t = p.edge_tube(1).unwrap();
        assert_eq!(t.fiber, FiberType::SphereMinusDisks { k: 4 });
        let removes = p.models_at(1).filter(|m| m.kind == ModelKind::DiskRemove).count();
        let fills = p.models_at(2).filter(|m| m.kind == ModelKind::DiskFill).count();
        assert_eq!((removes, fills), (4, 4));
        assert!(simulate_fiber_transitions(&p).pass);
    }

    #[test]
    fn product_cap_in_dimension_two() {
        let p = planned("mode general 2; v 0 0; v 1 1; e 0 0 1 2");
        assert!(p
            .models
            .iter()
            .all(|m| matches!(m.kind, ModelKind::ProductCap { .. })));
        assert!(simulate_fiber_transitions(&p).pass);
    }

    #[test]
    fn mismatched_tube_fiber_fails() {
        let mut p = planned("mode binary; v 0 0; v 1 1; e 0 0 1 0");
        p.tubes[0].fiber = FiberType::Line;
        let report = simulate_fiber_transitions(&p);
        assert!(!report.pass);
        assert!(report.failure.is_some());
    }

    #[test]
    fn binary_transit_cases_simulate() {
        for text in [
            // lone line through a vertex
            "mode binary; v 0 0; v 1 1; v 2 2; e 0 0 1 1; e 1 1 2 1",
            // two lines merge
            "mode binary; v 0 0; v 1 1; v 2 0; v 3 2; e 0 0 1 1; e 1 2 1 1; e 2 1 3 1",
            // circle opens into lines
            "mode binary; v 0 0; v 1 1; v 2 2; v 3 2; e 0 0 1 0; e 1 1 2 1; e 2 1 3 1",
            // lines close into a circle
            "mode binary; v 0 0; v 1 1; v 2 2; e 0 0 1 1; e 1 1 2 0",
            // odd extremum
            "mode binary; v 0 0; v 1 1; v 2 1; v 3 1; e 0 0 1 1; e 1 0 2 0; e 2 0 3 0",
            // mixed failing vertex
            "mode binary; v 0 0; v 1 0; v 2 1; v 3 2; v 4 2; v 5 2; e 0 0 2 1; e 1 1 2 0; e 2 2 3 1; e 3 2 4 1; e 4 2 5 0",
        ] {
            let p = planned(text);
            let report = simulate_fiber_transitions(&p);
            assert!(report.pass, "{text}: {:?}", report.failure);
        }
    }

    #[test]
    fn plan_json_roundtrip() {
        let p = planned("mode binary; v 0 0; v 1 1; v 2 2; e 0 0 1 1; e 1 1 2 1; e 2 0 1 0");
        let back = ConstructionPlan::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
