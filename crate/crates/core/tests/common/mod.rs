//! Independent reference implementations and fixtures shared by the
//! integration tests. Nothing here calls the library's own metric or search
//! code, so agreement with it is meaningful.
#![allow(dead_code)]

use motion_graph::graph::{Edge, EdgeKind, GraphNode, MotionGraph};
use motion_graph::kinematics::{JointVectors, Pose, Skeleton, UnitQuaternion, Vec3};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Uniformly distributed unit quaternion.
pub fn random_quat(rng: &mut impl Rng) -> UnitQuaternion<f64> {
    loop {
        let c: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
        if let Some(q) = UnitQuaternion::try_new(c[0], c[1], c[2], c[3]) {
            return q;
        }
    }
}

pub fn random_pose(rng: &mut impl Rng, joints: usize) -> Pose<f64> {
    Pose {
        rotations: (0..joints).map(|_| random_quat(rng)).collect(),
        root_translation: Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
    }
}

/// Rotation matrix of `(w, x, y, z)`, written out from the textbook formula.
pub fn matrix(q: [f64; 4]) -> [[f64; 3]; 3] {
    let [w, x, y, z] = q;
    [
        [w * w + x * x - y * y - z * z, 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), w * w - x * x + y * y - z * z, 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), w * w - x * x - y * y + z * z],
    ]
}

pub fn matmul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn apply(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| (0..3).map(|k| m[i][k] * v[k]).sum())
}

/// Forward kinematics with matrices, recursing to each joint's ancestors.
/// With `root_relative`, the root rotation is identity and it sits at the origin.
pub fn oracle_fk(skel: &Skeleton<f64>, pose: &Pose<f64>, root_relative: bool) -> Vec<[f64; 3]> {
    fn world(skel: &Skeleton<f64>, pose: &Pose<f64>, j: usize, rel: bool) -> ([[f64; 3]; 3], [f64; 3]) {
        let own = if rel && skel.parent(j).is_none() {
            matrix([1.0, 0.0, 0.0, 0.0])
        } else {
            matrix(pose.rotations[j].to_array())
        };
        match skel.parent(j) {
            None => {
                let t = if rel { [0.0; 3] } else { pose.root_translation.to_array() };
                (own, t)
            }
            Some(p) => {
                let (pr, pp) = world(skel, pose, p, rel);
                let off = apply(&pr, skel.rest_offsets()[j].to_array());
                (matmul(&pr, &own), [pp[0] + off[0], pp[1] + off[1], pp[2] + off[2]])
            }
        }
    }
    (0..skel.joint_count()).map(|j| world(skel, pose, j, root_relative).1).collect()
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// `2·arccos(|q1·q2|)` exactly as written, with the dot product clamped.
pub fn oracle_angle(a: UnitQuaternion<f64>, b: UnitQuaternion<f64>) -> f64 {
    let (p, q) = (a.to_array(), b.to_array());
    let d: f64 = (0..4).map(|i| p[i] * q[i]).sum::<f64>().abs().min(1.0);
    2.0 * d.acos()
}

/// Straight-line hybrid distance: mean upper-body angle (root rotation
/// ignored) and mean root-relative joint distance.
pub fn oracle_hybrid(skel: &Skeleton<f64>, a: &Pose<f64>, b: &Pose<f64>, lr: f64, lp: f64) -> f64 {
    let pa = oracle_fk(skel, a, true);
    let pb = oracle_fk(skel, b, true);
    let upper = skel.upper_body();
    let mut dr = 0.0;
    let mut dp = 0.0;
    for &j in upper {
        if skel.parent(j).is_some() {
            dr += oracle_angle(a.rotations[j], b.rotations[j]);
        }
        dp += dist3(pa[j], pb[j]);
    }
    lr * dr / upper.len() as f64 + lp * dp / upper.len() as f64
}

/// Minimum over all walks of exactly `query.len()` nodes of the summed frame
/// distances plus `beta` per transition edge. Returns `(cost, transitions)` of
/// the cheapest walk (fewest transitions among equal costs).
pub fn exhaustive_best_walk(graph: &MotionGraph<f64>, dist: &[Vec<f64>], beta: f64) -> (f64, usize) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &MotionGraph<f64>,
        dist: &[Vec<f64>],
        beta: f64,
        v: usize,
        t: usize,
        cost: f64,
        trans: usize,
        best: &mut (f64, usize),
    ) {
        if t + 1 == dist.len() {
            if cost < best.0 || (cost == best.0 && trans < best.1) {
                *best = (cost, trans);
            }
            return;
        }
        for e in g.successors(v) {
            let is_t = e.kind == EdgeKind::Transition;
            let c = cost + dist[t + 1][e.dst] + if is_t { beta } else { 0.0 };
            go(g, dist, beta, e.dst, t + 1, c, trans + usize::from(is_t), best);
        }
    }
    let mut best = (f64::INFINITY, usize::MAX);
    for v in 0..graph.node_count() {
        go(graph, dist, beta, v, 0, dist[0][v], 0, &mut best);
    }
    best
}

/// Every walk's optimum is also bounded by the per-frame minimum; used to
/// sanity-check the oracle itself.
pub fn frame_distance_table(skel: &Skeleton<f64>, graph: &MotionGraph<f64>, query: &[Pose<f64>]) -> Vec<Vec<f64>> {
    query
        .iter()
        .map(|q| graph.nodes().iter().map(|n| oracle_hybrid(skel, q, &n.pose, 1.0, 1.0)).collect())
        .collect()
}

/// Random strongly connected graph with at most `max_out` successors per
/// node. Nodes are grouped into short clips so both edge kinds occur.
pub fn random_graph(rng: &mut impl Rng, n: usize, max_out: usize, skel: &Skeleton<f64>) -> MotionGraph<f64> {
    assert!(max_out >= 2);
    let mut nodes = Vec::with_capacity(n);
    let mut clip = 0;
    while nodes.len() < n {
        // the first clip leaves room for a second, so the closing edge of the
        // cycle below always crosses clips
        let room = if nodes.is_empty() { n.saturating_sub(1).max(1) } else { n - nodes.len() };
        let len = rng.random_range(1..=4).min(room);
        for f in 0..len {
            let pose = random_pose(rng, skel.joint_count());
            nodes.push(GraphNode {
                clip_id: format!("c{clip}"),
                frame_index: f,
                pose,
                positions: JointVectors::zeros(skel.joint_count()),
                velocities: JointVectors::zeros(skel.joint_count()),
                focal_length: None,
            });
        }
        clip += 1;
    }
    let kind = |s: usize, d: usize| {
        if nodes[s].clip_id == nodes[d].clip_id && nodes[s].frame_index + 1 == nodes[d].frame_index {
            EdgeKind::Continuous
        } else {
            EdgeKind::Transition
        }
    };
    let forbidden = |s: usize, d: usize| {
        // transitions may not step back one frame within a clip
        nodes[d].clip_id == nodes[s].clip_id && nodes[d].frame_index + 1 == nodes[s].frame_index
    };
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    // a Hamiltonian cycle through the clips in order guarantees strong connectivity
    for (s, out) in succ.iter_mut().enumerate() {
        let d = (s + 1) % n;
        if s != d {
            out.push(d);
        }
    }
    for (s, out) in succ.iter_mut().enumerate() {
        let extra = rng.random_range(0..max_out);
        for _ in 0..extra {
            let d = rng.random_range(0..n);
            if out.len() < max_out && d != s && !out.contains(&d) && !forbidden(s, d) {
                out.push(d);
            }
        }
    }
    let edges = succ
        .iter()
        .enumerate()
        .flat_map(|(s, ds)| ds.iter().map(move |&d| (s, d)))
        .map(|(s, d)| Edge { src: s, dst: d, kind: kind(s, d) })
        .collect();
    let positions = |p: &Pose<f64>| {
        JointVectors(motion_graph::kinematics::forward_kinematics(skel, p).unwrap().0)
    };
    for node in &mut nodes {
        node.positions = positions(&node.pose);
    }
    MotionGraph::new(skel.clone(), 30.0, nodes, edges).unwrap()
}

/// Is every node reachable from every other?
pub fn strongly_connected(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    (0..n).all(|s| {
        let mut seen = vec![false; n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&b| b)
    })
}

/// Nodes reachable from `from` by breadth-first search.
pub fn bfs_reach(adj: &[Vec<usize>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = std::collections::VecDeque::from([from]);
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// O(N²) largest strongly connected component: `u` shares `v`'s component
/// iff each reaches the other. Ties keep the component found first, i.e. the
/// one holding the smallest vertex.
#[allow(clippy::needless_range_loop)]
pub fn oracle_largest_scc(adj: &[Vec<usize>]) -> Vec<usize> {
    let reach: Vec<Vec<bool>> = (0..adj.len()).map(|v| bfs_reach(adj, v)).collect();
    let mut best: Vec<usize> = Vec::new();
    for v in 0..adj.len() {
        let comp: Vec<usize> = (0..adj.len()).filter(|&u| reach[v][u] && reach[u][v]).collect();
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best
}
