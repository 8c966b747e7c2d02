//! Time-aligned path retrieval: hybrid rotation/position frame distance and
//! beam search with cost-gap pruning over a motion graph.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeKind, GraphNode, MotionGraph};
use crate::io::FORMAT_VERSION;
use crate::kinematics::{forward_kinematics, root_relative_positions, Pose, Skeleton, UnitQuaternion, Vec3};
use crate::{Error, Result, Scalar};

/// Balancing weights of the rotational and positional terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct MetricWeights<T> {
    pub lambda_r: T,
    pub lambda_p: T,
}

impl<T: Scalar> MetricWeights<T> {
    pub fn new(lambda_r: T, lambda_p: T) -> Result<Self> {
        let w = Self { lambda_r, lambda_p };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: T| v.is_finite() && v >= T::zero();
        if !ok(self.lambda_r) || !ok(self.lambda_p) {
            return Err(Error::InvalidArgument("metric weights must be finite and non-negative".into()));
        }
        if self.lambda_r == T::zero() && self.lambda_p == T::zero() {
            return Err(Error::InvalidArgument("metric weights cannot both be zero".into()));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for MetricWeights<T> {
    fn default() -> Self {
        Self { lambda_r: T::one(), lambda_p: T::one() }
    }
}

/// Coordinate frame for the positional term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionFrame {
    /// Both poses re-expressed with identity root orientation at the origin.
    #[default]
    RootRelative,
    /// Raw world positions, global orientation and translation included.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricConfig<T> {
    pub weights: MetricWeights<T>,
    pub frame: PositionFrame,
    /// Divide the positional term by the mean upper-body bone length.
    pub normalize_positions: bool,
}

impl<T: Scalar> Default for MetricConfig<T> {
    fn default() -> Self {
        Self { weights: MetricWeights::default(), frame: PositionFrame::RootRelative, normalize_positions: false }
    }
}

/// Rotations with the root orientation dropped (replaced by identity).
fn local_rotation<T: Scalar>(skel: &Skeleton<T>, pose: &Pose<T>, j: usize) -> UnitQuaternion<T> {
    if j == skel.root() {
        UnitQuaternion::identity()
    } else {
        pose.rotations[j]
    }
}

/// `λ_r·D_r + λ_p·D_p` between a query pose and a graph node, both averaged
/// over the upper-body joints. Root orientation and translation never
/// contribute in root-relative mode.
pub fn hybrid_distance<T: Scalar>(
    query: &Pose<T>,
    node: &GraphNode<T>,
    cfg: &MetricConfig<T>,
    skel: &Skeleton<T>,
) -> Result<T> {
    query.check(skel)?;
    node.pose.check(skel)?;
    let upper = skel.upper_body();
    if upper.is_empty() {
        return Err(Error::InvalidArgument("upper-body joint set is empty".into()));
    }
    let count = T::from_count(upper.len());
    let d_r = upper
        .iter()
        .map(|&j| local_rotation(skel, query, j).angular_distance(local_rotation(skel, &node.pose, j)))
        .sum::<T>()
        / count;
    let (qp, np) = match cfg.frame {
        PositionFrame::RootRelative => {
            (root_relative_positions(skel, query)?, root_relative_positions(skel, &node.pose)?)
        }
        PositionFrame::Absolute => (forward_kinematics(skel, query)?, node.positions.clone()),
    };
    let mut d_p = upper.iter().map(|&j| qp[j].distance(np[j])).sum::<T>() / count;
    if cfg.normalize_positions {
        let scale = skel.mean_upper_bone_length();
        if scale > T::zero() {
            d_p /= scale;
        }
    }
    Ok(cfg.weights.lambda_r * d_r + cfg.weights.lambda_p * d_p)
}

/// Per-node data the metric needs, precomputed once per graph.
struct Prepared<T> {
    rotations: Vec<UnitQuaternion<T>>,
    positions: Vec<Vec3<T>>,
}

/// [`hybrid_distance`] with node-side work hoisted out of the search loop.
pub struct HybridMetric<'g, T> {
    graph: &'g MotionGraph<T>,
    cfg: MetricConfig<T>,
    nodes: Vec<Prepared<T>>,
    position_scale: T,
}

impl<'g, T: Scalar> HybridMetric<'g, T> {
    pub fn new(graph: &'g MotionGraph<T>, cfg: MetricConfig<T>) -> Result<Self> {
        cfg.weights.validate()?;
        let skel = graph.skeleton();
        let nodes = graph
            .nodes()
            .iter()
            .map(|n| Self::prepare(skel, &cfg, &n.pose, Some(n)))
            .collect::<Result<Vec<_>>>()?;
        let scale = skel.mean_upper_bone_length();
        let position_scale = if cfg.normalize_positions && scale > T::zero() { T::one() / scale } else { T::one() };
        Ok(Self { graph, cfg, nodes, position_scale })
    }

    fn prepare(
        skel: &Skeleton<T>,
        cfg: &MetricConfig<T>,
        pose: &Pose<T>,
        node: Option<&GraphNode<T>>,
    ) -> Result<Prepared<T>> {
        pose.check(skel)?;
        let positions = match (cfg.frame, node) {
            (PositionFrame::RootRelative, _) => root_relative_positions(skel, pose)?,
            (PositionFrame::Absolute, Some(n)) => n.positions.clone(),
            (PositionFrame::Absolute, None) => forward_kinematics(skel, pose)?,
        };
        let upper = skel.upper_body();
        Ok(Prepared {
            rotations: upper.iter().map(|&j| local_rotation(skel, pose, j)).collect(),
            positions: upper.iter().map(|&j| positions[j]).collect(),
        })
    }

    /// Distance between query frame `frame` (from [`prepare_query`](Self::prepare_query)) and node `node`.
    fn distance(&self, frame: &Prepared<T>, node: usize) -> T {
        let n = &self.nodes[node];
        let count = T::from_count(n.rotations.len());
        let mut d_r = T::zero();
        let mut d_p = T::zero();
        for k in 0..n.rotations.len() {
            d_r += frame.rotations[k].angular_distance(n.rotations[k]);
            d_p += frame.positions[k].distance(n.positions[k]);
        }
        let w = self.cfg.weights;
        w.lambda_r * (d_r / count) + w.lambda_p * (d_p / count * self.position_scale)
    }

    fn prepare_query(&self, query: &[Pose<T>]) -> Result<Vec<Prepared<T>>> {
        query.iter().map(|p| Self::prepare(self.graph.skeleton(), &self.cfg, p, None)).collect()
    }

    /// Distance of query pose `pose` to node `node`.
    pub fn frame_distance(&self, pose: &Pose<T>, node: usize) -> Result<T> {
        let f = Self::prepare(self.graph.skeleton(), &self.cfg, pose, None)?;
        Ok(self.distance(&f, node))
    }
}

/// Beam-search parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig<T> {
    pub metric: MetricConfig<T>,
    /// States kept per query frame.
    pub beam_width: usize,
    /// Cost-gap slack; states above `C_min + γ·τ/T` are dropped. `∞` disables.
    pub gamma: T,
    /// Penalty added per transition edge taken.
    pub beta: T,
}

impl<T: Scalar> Default for SearchConfig<T> {
    fn default() -> Self {
        Self { metric: MetricConfig::default(), beam_width: 200, gamma: T::lit(1.5), beta: T::lit(0.1) }
    }
}

/// Node sequence aligned one-to-one with the query frames.
#[derive(Debug, Clone, PartialEq)]
pub struct RetrievedPath<T> {
    pub nodes: Vec<usize>,
    /// Kind of the edge entering `nodes[i + 1]`.
    pub edge_kinds: Vec<EdgeKind>,
    /// Per-frame cost: distance plus the transition penalty of the entering edge.
    pub step_costs: Vec<T>,
    pub total_cost: T,
}

impl<T: Scalar> RetrievedPath<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn transition_count(&self) -> usize {
        self.edge_kinds.iter().filter(|k| **k == EdgeKind::Transition).count()
    }

    /// Checks that consecutive nodes are joined by edges of the recorded kinds.
    pub fn validate(&self, graph: &MotionGraph<T>) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::PathMismatch("path is empty".into()));
        }
        if self.edge_kinds.len() + 1 != self.nodes.len() || self.step_costs.len() != self.nodes.len() {
            return Err(Error::PathMismatch("edge/cost arrays do not match node count".into()));
        }
        if let Some(&n) = self.nodes.iter().find(|&&n| n >= graph.node_count()) {
            return Err(Error::PathMismatch(format!("node {n} out of range")));
        }
        for (i, w) in self.nodes.windows(2).enumerate() {
            match graph.edge_between(w[0], w[1]) {
                Some(e) if e.kind == self.edge_kinds[i] => {}
                Some(e) => {
                    return Err(Error::PathMismatch(format!(
                        "step {i}: edge {} -> {} is {}, path says {}",
                        w[0],
                        w[1],
                        e.kind.as_str(),
                        self.edge_kinds[i].as_str()
                    )))
                }
                None => return Err(Error::PathMismatch(format!("step {i}: no edge {} -> {}", w[0], w[1]))),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct State<T> {
    node: usize,
    cost: T,
    /// Index into the previous layer.
    parent: usize,
}

const NO_PARENT: usize = usize::MAX;

fn path_of<T: Scalar>(layers: &[Vec<State<T>>], layer: usize, mut idx: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(layer + 1);
    for l in (0..=layer).rev() {
        let s = layers[l][idx];
        out.push(s.node);
        idx = s.parent;
    }
    out.reverse();
    out
}

/// Keeps the `k` cheapest states, then drops those above `C_min + slack`.
/// Ties are broken by node index (unique within a merged layer).
fn prune<T: Scalar>(layer: &mut Vec<State<T>>, k: usize, slack: T) {
    layer.sort_unstable_by(|a, b| a.cost.partial_cmp(&b.cost).unwrap_or(Ordering::Equal).then(a.node.cmp(&b.node)));
    layer.truncate(k);
    if let Some(min) = layer.first().map(|s| s.cost) {
        let limit = min + slack;
        layer.retain(|s| s.cost <= limit);
    }
}

/// Minimum-cost walk of length `query.len()` through `graph`.
///
/// The frontier starts from every node; each step follows all outgoing edges,
/// adds the frame distance and `β` for transition edges, merges states that
/// land on the same node (cheaper wins, then the lexicographically smaller
/// path), keeps the `K` cheapest and drops those above `C_min + γ·τ/T`.
pub fn beam_search<T: Scalar>(
    graph: &MotionGraph<T>,
    query: &[Pose<T>],
    cfg: &SearchConfig<T>,
) -> Result<RetrievedPath<T>> {
    let metric = HybridMetric::new(graph, cfg.metric)?;
    beam_search_with(&metric, query, cfg)
}

/// [`beam_search`] reusing a prepared metric across queries.
pub fn beam_search_with<T: Scalar>(
    metric: &HybridMetric<'_, T>,
    query: &[Pose<T>],
    cfg: &SearchConfig<T>,
) -> Result<RetrievedPath<T>> {
    let graph = metric.graph;
    if graph.is_empty() {
        return Err(Error::InvalidArgument("graph has no nodes".into()));
    }
    if query.is_empty() {
        return Err(Error::InvalidArgument("query has no frames".into()));
    }
    if cfg.beam_width == 0 {
        return Err(Error::InvalidArgument("beam width must be at least 1".into()));
    }
    if cfg.gamma.is_nan() || cfg.gamma < T::zero() || !cfg.beta.is_finite() || cfg.beta < T::zero() {
        return Err(Error::InvalidArgument("gamma and beta must be non-negative".into()));
    }
    let frames = metric.prepare_query(query)?;
    let total = T::from_count(frames.len());
    let slack = |tau: usize| {
        if cfg.gamma.is_infinite() {
            T::infinity()
        } else {
            cfg.gamma * (T::from_count(tau) / total)
        }
    };
    let n = graph.node_count();

    let mut first: Vec<State<T>> = (0..n)
        .map(|v| State { node: v, cost: metric.distance(&frames[0], v), parent: NO_PARENT })
        .collect();
    if let Some(s) = first.iter().find(|s| !s.cost.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite distance at node {}", s.node)));
    }
    prune(&mut first, cfg.beam_width, slack(1));
    let mut layers = vec![first];

    let mut slot = vec![usize::MAX; n];
    let mut dist_cache: Vec<Option<T>> = vec![None; n];
    for (t, frame) in frames.iter().enumerate().skip(1) {
        let prev = layers.len() - 1;
        let mut next: Vec<State<T>> = Vec::new();
        let mut touched = Vec::new();
        for (pi, s) in layers[prev].iter().enumerate() {
            for e in graph.successors(s.node) {
                let d = *dist_cache[e.dst].get_or_insert_with(|| {
                    touched.push(e.dst);
                    metric.distance(frame, e.dst)
                });
                let penalty = if e.kind == EdgeKind::Transition { cfg.beta } else { T::zero() };
                let cost = s.cost + d + penalty;
                let cand = State { node: e.dst, cost, parent: pi };
                match slot[e.dst] {
                    usize::MAX => {
                        slot[e.dst] = next.len();
                        next.push(cand);
                    }
                    k => {
                        let cur = next[k];
                        let better = match cost.partial_cmp(&cur.cost) {
                            Some(Ordering::Less) => true,
                            Some(Ordering::Equal) => {
                                path_of(&layers, prev, pi) < path_of(&layers, prev, cur.parent)
                            }
                            _ => false,
                        };
                        if better {
                            next[k] = cand;
                        }
                    }
                }
            }
        }
        for &v in &touched {
            dist_cache[v] = None;
        }
        for s in &next {
            slot[s.node] = usize::MAX;
        }
        if next.is_empty() {
            return Err(Error::FrontierExhausted { tau: t + 1 });
        }
        prune(&mut next, cfg.beam_width, slack(t + 1));
        layers.push(next);
    }

    let last = layers.len() - 1;
    // layers are sorted by (cost, node) after pruning
    let best = 0;
    let nodes = path_of(&layers, last, best);
    let total_cost = layers[last][best].cost;

    let mut edge_kinds = Vec::with_capacity(nodes.len().saturating_sub(1));
    let mut step_costs = Vec::with_capacity(nodes.len());
    step_costs.push(metric.distance(&frames[0], nodes[0]));
    for (i, w) in nodes.windows(2).enumerate() {
        let kind = graph.edge_between(w[0], w[1]).expect("search follows graph edges").kind;
        let penalty = if kind == EdgeKind::Transition { cfg.beta } else { T::zero() };
        edge_kinds.push(kind);
        step_costs.push(metric.distance(&frames[i + 1], w[1]) + penalty);
    }
    Ok(RetrievedPath { nodes, edge_kinds, step_costs, total_cost })
}

/// One row of a path file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathStep {
    pub node: usize,
    pub clip_id: String,
    pub frame_index: usize,
    /// Kind of the edge entering this node; absent on the first step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_kind: Option<EdgeKind>,
    pub cost: f64,
}

/// On-disk form of a [`RetrievedPath`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDocument {
    pub format_version: u32,
    pub total_cost: f64,
    pub steps: Vec<PathStep>,
}

impl PathDocument {
    pub fn from_path<T: Scalar>(path: &RetrievedPath<T>, graph: &MotionGraph<T>) -> Self {
        let steps = path
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let node = graph.node(v);
                PathStep {
                    node: v,
                    clip_id: node.clip_id.clone(),
                    frame_index: node.frame_index,
                    edge_kind: i.checked_sub(1).map(|k| path.edge_kinds[k]),
                    cost: path.step_costs[i].to_f64_lossy(),
                }
            })
            .collect();
        Self { format_version: FORMAT_VERSION, total_cost: path.total_cost.to_f64_lossy(), steps }
    }

    /// Rebuilds the path and checks it against `graph`: node indices must
    /// point at the recorded clip frames and consecutive steps must be edges.
    pub fn to_path<T: Scalar>(&self, graph: &MotionGraph<T>) -> Result<RetrievedPath<T>> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Version { expected: FORMAT_VERSION, found: self.format_version });
        }
        for (i, s) in self.steps.iter().enumerate() {
            let ok = s.node < graph.node_count() && {
                let n = graph.node(s.node);
                n.clip_id == s.clip_id && n.frame_index == s.frame_index
            };
            if !ok {
                return Err(Error::PathMismatch(format!(
                    "step {i}: node {} is not clip '{}' frame {}",
                    s.node, s.clip_id, s.frame_index
                )));
            }
        }
        let nodes: Vec<usize> = self.steps.iter().map(|s| s.node).collect();
        let edge_kinds = nodes
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                graph
                    .edge_between(w[0], w[1])
                    .map(|e| e.kind)
                    .ok_or_else(|| Error::PathMismatch(format!("step {}: no edge {} -> {}", i + 1, w[0], w[1])))
            })
            .collect::<Result<Vec<_>>>()?;
        let path = RetrievedPath {
            nodes,
            edge_kinds,
            step_costs: self.steps.iter().map(|s| T::lit(s.cost)).collect(),
            total_cost: T::lit(self.total_cost),
        };
        path.validate(graph)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, GraphBuildConfig};
    use crate::io::{Clip, MotionDocument};
    use crate::synth;
    use std::f64::consts::FRAC_PI_2;

    fn node_from(skel: &Skeleton<f64>, pose: Pose<f64>) -> GraphNode<f64> {
        let positions = forward_kinematics(skel, &pose).unwrap();
        GraphNode {
            clip_id: "c".into(),
            frame_index: 0,
            velocities: crate::kinematics::JointVectors::zeros(skel.joint_count()),
            positions,
            pose,
            focal_length: None,
        }
    }

    #[test]
    fn identical_pose_has_zero_distance() {
        let skel = synth::humanoid::<f64>();
        let pose = synth::GestureStyle::random(20, 3).pose(0.7);
        let d = hybrid_distance(&pose, &node_from(&skel, pose.clone()), &MetricConfig::default(), &skel).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn single_quarter_turn_over_ten_joints() {
        let skel = Skeleton::chain(11, Vec3::new(0.1, 0.0, 0.0), (1..=10).collect()).unwrap();
        let a = Pose::identity(11);
        let mut b = Pose::identity(11);
        b.rotations[5] = UnitQuaternion::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), FRAC_PI_2);
        let cfg = MetricConfig { weights: MetricWeights::new(1.0, 0.0).unwrap(), ..Default::default() };
        let d = hybrid_distance(&a, &node_from(&skel, b), &cfg, &skel).unwrap();
        assert!((d - FRAC_PI_2 / 10.0).abs() < 1e-12);
    }

    #[test]
    fn root_transform_is_ignored_by_default() {
        let skel = synth::humanoid::<f64>();
        let pose = synth::GestureStyle::random(20, 9).pose(0.2);
        let mut moved = pose.clone();
        moved.rotations[0] = UnitQuaternion::from_axis_angle(Vec3::new(0.0, 1.0, 0.0), 1.0);
        moved.root_translation = Vec3::new(3.0, 0.0, -1.0);
        let node = node_from(&skel, moved);
        let rel = hybrid_distance(&pose, &node, &MetricConfig::default(), &skel).unwrap();
        assert!(rel.abs() < 1e-12);
        let abs_cfg = MetricConfig { frame: PositionFrame::Absolute, ..Default::default() };
        assert!(hybrid_distance(&pose, &node, &abs_cfg, &skel).unwrap() > 1.0);
    }

    #[test]
    fn weights_validation() {
        assert!(MetricWeights::new(0.0, 0.0).is_err());
        assert!(MetricWeights::new(-1.0, 1.0).is_err());
        assert!(MetricWeights::new(0.0, 2.0).is_ok());
    }

    #[test]
    fn prepared_metric_matches_direct_formula() {
        let doc = synth::gesture_dataset::<f64>(2, 12, 5).unwrap();
        let graph = crate::graph::build_graph(&doc, &GraphBuildConfig { keep_all_sccs: true, ..Default::default() }).unwrap();
        for cfg in [
            MetricConfig::default(),
            MetricConfig { frame: PositionFrame::Absolute, normalize_positions: true, ..Default::default() },
        ] {
            let metric = HybridMetric::new(&graph, cfg).unwrap();
            let q = synth::GestureStyle::random(20, 77).pose(0.3);
            for v in 0..graph.node_count() {
                let a = metric.frame_distance(&q, v).unwrap();
                let b = hybrid_distance(&q, graph.node(v), &cfg, graph.skeleton()).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    fn tiny_graph() -> MotionGraph<f64> {
        let skel = Skeleton::chain(2, Vec3::new(1.0, 0.0, 0.0), vec![1]).unwrap();
        let pose = |a: f64| {
            let mut p = Pose::identity(2);
            p.rotations[1] = UnitQuaternion::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), a);
            p
        };
        let doc = MotionDocument::new(30.0, skel, vec![Clip::new("a", (0..4).map(|i| pose(0.1 * i as f64)).collect())]).unwrap();
        let nodes = crate::graph::build_nodes(&doc).unwrap();
        let mut edges = crate::graph::continuous_edges(&nodes);
        edges.push(Edge { src: 3, dst: 0, kind: EdgeKind::Transition });
        MotionGraph::new(doc.skeleton.clone(), 30.0, nodes, edges).unwrap()
    }

    #[test]
    fn single_frame_query_picks_nearest_node() {
        let g = tiny_graph();
        let q = vec![g.node(2).pose.clone()];
        let p = beam_search(&g, &q, &SearchConfig::default()).unwrap();
        assert_eq!(p.nodes, vec![2]);
        assert!(p.edge_kinds.is_empty());
        assert!(p.total_cost.abs() < 1e-12);
    }

    #[test]
    fn wrap_around_uses_transition_with_penalty() {
        let g = tiny_graph();
        let q: Vec<_> = [2, 3, 0, 1].iter().map(|&i| g.node(i).pose.clone()).collect();
        let p = beam_search(&g, &q, &SearchConfig::default()).unwrap();
        assert_eq!(p.nodes, vec![2, 3, 0, 1]);
        assert_eq!(p.transition_count(), 1);
        assert!((p.total_cost - 0.1).abs() < 1e-12);
        let sum: f64 = p.step_costs.iter().sum();
        assert!((sum - p.total_cost).abs() < 1e-9);
        p.validate(&g).unwrap();
    }

    #[test]
    fn dead_end_exhausts_frontier() {
        let skel = Skeleton::chain(2, Vec3::new(1.0, 0.0, 0.0), vec![1]).unwrap();
        let doc = MotionDocument::new(30.0, skel, vec![Clip::new("a", vec![Pose::identity(2); 3])]).unwrap();
        let g = crate::graph::build_graph(&doc, &GraphBuildConfig { keep_all_sccs: true, ..Default::default() }).unwrap();
        let q = vec![Pose::identity(2); 4];
        let err = beam_search(&g, &q, &SearchConfig::default()).unwrap_err();
        assert!(matches!(err, Error::FrontierExhausted { tau: 4 }));
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = tiny_graph();
        let q = vec![Pose::identity(2)];
        assert!(beam_search(&g, &[], &SearchConfig::default()).is_err());
        assert!(beam_search(&g, &q, &SearchConfig { beam_width: 0, ..Default::default() }).is_err());
        assert!(beam_search(&g, &q, &SearchConfig { beta: -1.0, ..Default::default() }).is_err());
    }

    #[test]
    fn path_document_round_trip() {
        let g = tiny_graph();
        let q: Vec<_> = [1, 2, 3, 0].iter().map(|&i| g.node(i).pose.clone()).collect();
        let p = beam_search(&g, &q, &SearchConfig::default()).unwrap();
        let doc = PathDocument::from_path(&p, &g);
        assert_eq!(doc.steps[0].edge_kind, None);
        assert_eq!(doc.steps[3].edge_kind, Some(EdgeKind::Transition));
        let back: RetrievedPath<f64> = doc.to_path(&g).unwrap();
        assert_eq!(back.nodes, p.nodes);
        assert_eq!(back.edge_kinds, p.edge_kinds);

        let mut bad = doc.clone();
        bad.steps[1].frame_index = 3;
        assert!(matches!(bad.to_path::<f64>(&g), Err(Error::PathMismatch(_))));
    }
}
