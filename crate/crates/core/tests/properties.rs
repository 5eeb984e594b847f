//! Property tests over seeded random graphs.

use proptest::prelude::*;

use reeb_synth::graph::{
    check_theorem2_conditions, check_theorem6_conditions, classify_route, parse_graph, vertex_profile,
    LabeledGraph,
};
use reeb_synth::mesh::parse_rmesh;
use reeb_synth::plan::{
    collar_half_width, plan_graph, saddle_handles, simulate_fiber_transitions, ConstructionPlan, ModelKind,
};
use reeb_synth::random::{gen_random, gen_random_with, LabelMode, RandomOptions};
use reeb_synth::rational::Rational;
use reeb_synth::reeb::{build_augmented_reeb, reeb_graph};
use reeb_synth::verify::{reeb_isomorphic, roundtrip, verify_roundtrip};

fn binary() -> impl Strategy<Value = LabeledGraph> {
    (2usize..10, any::<u64>()).prop_map(|(n, seed)| gen_random(n, seed))
}

fn general() -> impl Strategy<Value = LabeledGraph> {
    (2usize..10, 2u32..5, any::<u64>())
        .prop_map(|(n, d, seed)| gen_random_with(&RandomOptions::general(n, d), seed))
}

fn closed_or_open() -> impl Strategy<Value = LabeledGraph> {
    (2usize..8, any::<bool>(), any::<u64>()).prop_map(|(n, zero, seed)| {
        let mut opts = RandomOptions::binary(n);
        if zero {
            opts.labels = LabelMode::AllZero;
        }
        gen_random_with(&opts, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_counts_every_incident_edge(g in binary()) {
        for v in g.vertex_ids() {
            let p = vertex_profile(&g, v).unwrap();
            prop_assert_eq!(p.degree(), g.degree(v));
            prop_assert_eq!(p.is_extremum, p.in_degree() == 0 || p.out_degree() == 0);
        }
    }

    #[test]
    fn routes_are_total_deterministic_and_match_conditions(g in binary()) {
        let routes = classify_route(&g);
        prop_assert_eq!(&routes, &classify_route(&g));
        prop_assert_eq!(routes.len(), g.vertex_count());
        let report = check_theorem2_conditions(&g);
        for (v, tag) in &routes {
            prop_assert_eq!(tag.route.is_thm2(), report.passes_at(*v), "vertex {}", v);
        }
    }

    #[test]
    fn graph_text_roundtrips(g in prop_oneof![binary(), general()]) {
        let text = g.to_rgl();
        let parsed = parse_graph(&text).unwrap();
        prop_assert_eq!(&parsed, &g);
        prop_assert_eq!(parsed.to_rgl(), text);
    }

    #[test]
    fn graph_dot_shows_values_and_labels(g in binary()) {
        let dot = g.to_dot();
        for (_, value) in g.vertices() {
            prop_assert!(dot.contains(&value.to_string()));
        }
        for e in g.edges() {
            let needle = format!("v{} -- v{} [label=\"{}\"]", e.u, e.v, e.label);
            prop_assert!(dot.contains(&needle));
        }
    }

    #[test]
    fn plans_simulate_and_roundtrip_as_json(g in prop_oneof![binary(), general()]) {
        let plan = plan_graph(&g).unwrap();
        let sim = simulate_fiber_transitions(&plan);
        prop_assert!(sim.pass, "{:?}", sim.failure);
        prop_assert_eq!(ConstructionPlan::from_json(&plan.to_json()).unwrap(), plan);
    }

    #[test]
    fn saddle_models_carry_the_handle_count(g in binary()) {
        let plan = plan_graph(&g).unwrap();
        for m in &plan.models {
            if let ModelKind::Saddle { a, b, c } = m.kind {
                prop_assert_eq!(m.handles, saddle_handles(a, b, c, 1));
                if a > 0 {
                    prop_assert_eq!(m.handles.one_handles, a - 1 + b + c);
                }
            }
        }
    }

    #[test]
    fn collars_hold_no_foreign_value(g in prop_oneof![binary(), general()]) {
        let plan = plan_graph(&g).unwrap();
        prop_assert_eq!(plan.collar_half_width, collar_half_width(&g));
        for c in &plan.collars {
            prop_assert!(c.lo < c.value && c.value < c.hi);
            for (u, value) in g.vertices() {
                if value != c.value {
                    prop_assert!(value < c.lo || value > c.hi, "vertex {} inside collar of {}", u, c.vertex);
                }
            }
            for d in &plan.collars {
                if d.value != c.value {
                    prop_assert!(d.hi < c.lo || c.hi < d.lo);
                }
            }
        }
    }

    #[test]
    fn general_plans_keep_cap_labels_small(g in general()) {
        prop_assert!(check_theorem6_conditions(&g).pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn binary_graphs_roundtrip_with_exact_values(g in binary()) {
        let (_, report) = roundtrip(&g).unwrap();
        prop_assert!(report.pass, "{:?}\n{}", report.failure, g.to_rgl());
        for (v, value) in g.vertices() {
            prop_assert_eq!(report.mapping.get(&v), Some(&value));
        }
    }

    #[test]
    fn meshes_are_closed_exactly_when_all_labels_are_zero(g in closed_or_open()) {
        let (mesh, _) = roundtrip(&g).unwrap();
        let all_zero = g.edges().iter().all(|e| e.label == 0);
        prop_assert_eq!(all_zero, mesh.ideal.is_empty());
        prop_assert!(mesh.is_orientable());
        if all_zero {
            let chi = mesh.euler_characteristic();
            prop_assert!(chi <= 2 && chi % 2 == 0, "chi {}", chi);
        }
    }

    #[test]
    fn mesh_text_roundtrips(g in binary()) {
        let (mesh, _) = roundtrip(&g).unwrap();
        let text = mesh.to_rmesh();
        let parsed = parse_rmesh(&text).unwrap();
        prop_assert_eq!(parsed.to_rmesh(), text);
        prop_assert!(verify_roundtrip(&g, &parsed).pass);
    }

    #[test]
    fn reeb_nodes_sit_at_mesh_values_and_arcs_rise(g in binary()) {
        let (mesh, _) = roundtrip(&g).unwrap();
        let reeb = build_augmented_reeb(&mesh).unwrap();
        let values: std::collections::BTreeSet<Rational> = mesh.values.iter().copied().collect();
        for n in &reeb.nodes {
            prop_assert!(values.contains(&n.value));
        }
        for a in &reeb.arcs {
            prop_assert!(reeb.nodes[a.lower].value < reeb.nodes[a.upper].value);
        }
        let dot = reeb_graph(&mesh).unwrap().to_dot();
        for (_, value) in g.vertices() {
            let needle = format!("label=\"{value}\"");
            prop_assert!(dot.contains(&needle));
        }
    }

    #[test]
    fn flipping_a_label_breaks_the_match(g in binary(), pick in any::<prop::sample::Index>()) {
        let (mesh, _) = roundtrip(&g).unwrap();
        let e = g.edges()[pick.index(g.edges().len())];
        let flipped = g.with_label(e.id, 1 - e.label).unwrap();
        prop_assert!(!verify_roundtrip(&flipped, &mesh).pass);
    }

    #[test]
    fn moving_a_value_breaks_the_match(g in binary(), pick in any::<prop::sample::Index>()) {
        let (mesh, _) = roundtrip(&g).unwrap();
        let plan = plan_graph(&g).unwrap();
        let ids: Vec<_> = g.vertex_ids().collect();
        let v = ids[pick.index(ids.len())];
        let h = g.value(v).unwrap();

        // A shift inside the collar is only visible when no stacked model
        // sits at a neighboring micro-level.
        if plan.models_at(v).count() == 1 {
            let small = moved(&g, v, h + collar_half_width(&g) / Rational::from_integer(2));
            prop_assert!(!verify_roundtrip(&small, &mesh).pass);
        }
        let values = g.distinct_values();
        let i = values.iter().position(|&x| x == h).unwrap();
        let neighbor = if i + 1 < values.len() { values[i + 1] } else { values[i - 1] };
        let far = moved(&g, v, (h + neighbor) / Rational::from_integer(2));
        prop_assert!(!verify_roundtrip(&far, &mesh).pass);
    }
}

fn moved(g: &LabeledGraph, v: u64, value: Rational) -> LabeledGraph {
    let vertices = g.vertices().map(|(u, x)| (u, if u == v { value } else { x }));
    LabeledGraph::new(g.mode(), vertices, g.edges().to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn refinement_keeps_euler_characteristic_and_reeb_graph(g in (2usize..6, any::<u64>()).prop_map(|(n, s)| gen_random(n, s))) {
        let (mesh, _) = roundtrip(&g).unwrap();
        let fine = mesh.refine_barycentric();
        fine.validate().unwrap();
        prop_assert_eq!(fine.euler_characteristic(), mesh.euler_characteristic());
        prop_assert!(reeb_isomorphic(&reeb_graph(&mesh).unwrap(), &reeb_graph(&fine).unwrap()));
    }
}
