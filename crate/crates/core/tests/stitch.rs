mod common;

use common::random_graph;
use motion_graph::graph::{build_graph, EdgeKind, GraphBuildConfig, MotionGraph};
use motion_graph::io::to_canonical_json;
use motion_graph::kinematics::{Pose, Skeleton, Vec3};
use motion_graph::retrieval::{beam_search, RetrievedPath, SearchConfig};
use motion_graph::stitch::{path_to_render_plan, smooth_transitions, EntryKind, RenderPlan, StitchMode};
use motion_graph::synth::{gesture_dataset, GestureStyle};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn skeleton() -> Skeleton<f64> {
    Skeleton::new(
        vec![None, Some(0), Some(1)],
        vec![Vec3::zero(), Vec3::new(0.0, 0.4, 0.0), Vec3::new(0.3, 0.0, 0.0)],
        vec![1, 2],
    )
    .unwrap()
}

/// Random walk of `len` nodes through `g`.
fn random_walk(g: &MotionGraph<f64>, len: usize, rng: &mut impl Rng) -> RetrievedPath<f64> {
    let mut nodes = vec![rng.random_range(0..g.node_count())];
    let mut kinds = Vec::new();
    while nodes.len() < len {
        let succ = g.successors(*nodes.last().unwrap());
        let e = &succ[rng.random_range(0..succ.len())];
        nodes.push(e.dst);
        kinds.push(e.kind);
    }
    RetrievedPath { step_costs: vec![0.0; len], total_cost: 0.0, nodes, edge_kinds: kinds }
}

fn joint_jump(a: &Pose<f64>, b: &Pose<f64>) -> f64 {
    a.rotations.iter().zip(&b.rotations).map(|(p, q)| p.angular_distance(*q)).fold(0.0, f64::max)
}

/// Largest per-joint step of the path, over continuous and transition edges separately.
fn path_jumps(g: &MotionGraph<f64>, path: &RetrievedPath<f64>) -> (f64, f64) {
    let mut cont: f64 = 0.0;
    let mut trans: f64 = 0.0;
    for (w, k) in path.nodes.windows(2).zip(&path.edge_kinds) {
        let j = joint_jump(&g.nodes()[w[0]].pose, &g.nodes()[w[1]].pose);
        match k {
            EdgeKind::Continuous => cont = cont.max(j),
            EdgeKind::Transition => trans = trans.max(j),
        }
    }
    (cont, trans)
}

fn output_jump(track: &[Pose<f64>]) -> f64 {
    track.windows(2).map(|w| joint_jump(&w[0], &w[1])).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn plan_lengths_and_timing(seed in any::<u64>(), len in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=20);
        let g = random_graph(&mut rng, n, 4, &skeleton());
        let path = random_walk(&g, len, &mut rng);
        let n = path.transition_count();

        let insert = path_to_render_plan(&path, &g, StitchMode::Insert).unwrap();
        prop_assert_eq!(insert.len(), len + 2 * n);
        prop_assert_eq!(insert.interpolated_count(), 2 * n);
        prop_assert_eq!(insert.original_nodes(&g).unwrap(), path.nodes.clone());
        prop_assert_eq!(smooth_transitions(&path, &g, StitchMode::Insert).unwrap().len(), insert.len());

        let keep = path_to_render_plan(&path, &g, StitchMode::PreserveLength).unwrap();
        prop_assert_eq!(keep.len(), len);
        prop_assert!(keep.interpolated_count() <= 2 * n);
        prop_assert_eq!(smooth_transitions(&path, &g, StitchMode::PreserveLength).unwrap().len(), len);

        for plan in [&insert, &keep] {
            prop_assert_eq!(plan.duration(), plan.len() as f64 / g.fps());
            for (i, e) in plan.entries.iter().enumerate() {
                prop_assert_eq!(e.audio_time, i as f64 / g.fps());
                match e.kind {
                    EntryKind::Original => prop_assert!(e.blend_sources.is_none()),
                    EntryKind::Interpolated => {
                        let src = e.blend_sources.as_ref().unwrap();
                        prop_assert!(!src.prev.is_empty() && src.prev.len() <= 2);
                        prop_assert!(!src.next.is_empty() && src.next.len() <= 2);
                        for f in src.prev.iter().chain(&src.next) {
                            prop_assert!(g.find_node(&f.clip_id, f.frame_index).is_some());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn inserted_frames_split_each_transition_in_thirds(seed in any::<u64>(), len in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=20);
        let g = random_graph(&mut rng, n, 4, &skeleton());
        let path = random_walk(&g, len, &mut rng);
        let track = smooth_transitions(&path, &g, StitchMode::Insert).unwrap();
        let mut out = track.iter();
        let mut prev = out.next().unwrap();
        for (w, k) in path.nodes.windows(2).zip(&path.edge_kinds) {
            let (a, b) = (&g.nodes()[w[0]].pose, &g.nodes()[w[1]].pose);
            if *k == EdgeKind::Transition {
                for _ in 0..2 {
                    let mid = out.next().unwrap();
                    for j in 0..a.joint_count() {
                        let third = a.rotations[j].angular_distance(b.rotations[j]) / 3.0;
                        prop_assert!((prev.rotations[j].angular_distance(mid.rotations[j]) - third).abs() < 1e-7);
                    }
                    prev = mid;
                }
            }
            let next = out.next().unwrap();
            prop_assert_eq!(next, b);
            prev = next;
        }
        prop_assert!(out.next().is_none());
    }

    #[test]
    fn output_jumps_stay_within_path_bounds(seed in any::<u64>(), len in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=20);
        let g = random_graph(&mut rng, n, 4, &skeleton());
        let path = random_walk(&g, len, &mut rng);
        let (cont, trans) = path_jumps(&g, &path);
        let insert = output_jump(&smooth_transitions(&path, &g, StitchMode::Insert).unwrap());
        prop_assert!(insert <= cont.max(trans / 3.0) + 1e-9);
        let keep = output_jump(&smooth_transitions(&path, &g, StitchMode::PreserveLength).unwrap());
        prop_assert!(keep <= cont + trans + 1e-9);
    }
}

#[test]
fn retrieved_paths_on_a_built_graph_stitch_smoothly() {
    let doc = gesture_dataset::<f64>(6, 60, 4).unwrap();
    let g = build_graph(&doc, &GraphBuildConfig::default()).unwrap();
    assert!(g.stats().transition_edges > 0);
    let mut checked_transitions = 0;
    for seed in 0..4 {
        let query = GestureStyle::random(g.skeleton().joint_count(), 100 + seed).sample(0.0, 90, 30.0);
        let path = beam_search(&g, &query, &SearchConfig { beta: 0.0, ..SearchConfig::default() }).unwrap();
        let (cont, trans) = path_jumps(&g, &path);
        checked_transitions += path.transition_count();
        for mode in [StitchMode::Insert, StitchMode::PreserveLength] {
            let track = smooth_transitions(&path, &g, mode).unwrap();
            assert!(output_jump(&track) <= cont + trans + 1e-9);
            let plan = path_to_render_plan(&path, &g, mode).unwrap();
            assert_eq!(plan.len(), track.len());
        }
    }
    assert!(checked_transitions > 0);
}

#[test]
fn plan_survives_a_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = random_graph(&mut rng, 12, 4, &skeleton());
    let path = random_walk(&g, 25, &mut rng);
    let plan = path_to_render_plan(&path, &g, StitchMode::Insert).unwrap();
    let text = to_canonical_json(&plan).unwrap();
    let back: RenderPlan<f64> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, plan);
    assert_eq!(to_canonical_json(&back).unwrap(), text);
    assert!(text.contains("\"mode\": \"insert\""));
}

#[test]
fn invalid_paths_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = random_graph(&mut rng, 8, 2, &skeleton());
    let mut path = random_walk(&g, 5, &mut rng);
    path.nodes[3] = 99;
    assert!(path_to_render_plan(&path, &g, StitchMode::Insert).is_err());
    assert!(smooth_transitions(&path, &g, StitchMode::Insert).is_err());
}
