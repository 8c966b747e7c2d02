//! Motion-graph construction: per-frame nodes, continuous edges, dual-threshold
//! transition edges and largest-SCC pruning.

mod scc;

pub use scc::{largest_component, strongly_connected_components};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::MotionDocument;
use crate::kinematics::{
    central_difference_velocities, forward_kinematics, Pose, PositionSet, Skeleton, VelocitySet,
};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Continuous,
    Transition,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Continuous => "continuous",
            EdgeKind::Transition => "transition",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub kind: EdgeKind,
}

/// One source frame with its kinematic state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct GraphNode<T> {
    pub clip_id: String,
    pub frame_index: usize,
    pub pose: Pose<T>,
    pub positions: PositionSet<T>,
    pub velocities: VelocitySet<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal_length: Option<T>,
}

impl<T> GraphNode<T> {
    /// True when `other` is the frame right after `self` in the same clip.
    pub fn precedes(&self, other: &Self) -> bool {
        self.clip_id == other.clip_id && self.frame_index + 1 == other.frame_index
    }
}

/// Tunables of graph construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphBuildConfig<T> {
    /// Positional threshold multiplier.
    pub lambda_p: T,
    /// Velocity threshold multiplier.
    pub lambda_v: T,
    /// Fraction of joints that must pass both thresholds.
    pub consensus: T,
    /// Stop scanning joints once the pair can no longer reach `consensus`.
    /// Exact; disable for audit builds that evaluate every joint.
    pub prefilter: bool,
    pub workers: usize,
    pub keep_all_sccs: bool,
}

impl<T: Scalar> Default for GraphBuildConfig<T> {
    fn default() -> Self {
        Self {
            lambda_p: T::lit(1.3),
            lambda_v: T::lit(1.3),
            consensus: T::lit(0.95),
            prefilter: true,
            workers: 1,
            keep_all_sccs: false,
        }
    }
}

/// Directed motion graph. Edges are kept sorted by `(src, dst)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionGraph<T> {
    skeleton: Skeleton<T>,
    fps: T,
    nodes: Vec<GraphNode<T>>,
    edges: Vec<Edge>,
    /// `edges[offsets[v]..offsets[v + 1]]` leave `v`.
    offsets: Vec<usize>,
}

impl<T: Scalar> MotionGraph<T> {
    /// Assembles and validates a graph: edge bounds, no self-loops, no duplicate
    /// pairs, continuous edges only between consecutive frames of one clip and
    /// no transition between intra-clip neighbours.
    pub fn new(skeleton: Skeleton<T>, fps: T, nodes: Vec<GraphNode<T>>, mut edges: Vec<Edge>) -> Result<Self> {
        if !(fps > T::zero()) {
            return Err(Error::InvalidArgument(format!("fps must be positive, got {fps}")));
        }
        let n = nodes.len();
        for (i, node) in nodes.iter().enumerate() {
            node.pose.check(&skeleton)?;
            if node.positions.len() != skeleton.joint_count()
                || node.velocities.len() != skeleton.joint_count()
            {
                return Err(Error::InvalidArgument(format!("node {i} has mismatched joint vectors")));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            for node in [e.src, e.dst] {
                if node >= n {
                    return Err(Error::EdgeBounds { edge: i, node, count: n });
                }
            }
            if e.src == e.dst {
                return Err(Error::InvalidArgument(format!("edge {i} is a self-loop on node {}", e.src)));
            }
            let consecutive = nodes[e.src].precedes(&nodes[e.dst]);
            let backward = nodes[e.dst].precedes(&nodes[e.src]);
            match e.kind {
                EdgeKind::Continuous if !consecutive => {
                    return Err(Error::InvalidArgument(format!(
                        "continuous edge {i} ({} -> {}) does not join consecutive frames of one clip",
                        e.src, e.dst
                    )))
                }
                EdgeKind::Transition if consecutive => {
                    return Err(Error::InvalidArgument(format!(
                        "transition edge {i} duplicates the continuous edge {} -> {}",
                        e.src, e.dst
                    )))
                }
                EdgeKind::Transition if backward => {
                    return Err(Error::InvalidArgument(format!(
                        "transition edge {i} ({} -> {}) steps back one frame within a clip",
                        e.src, e.dst
                    )))
                }
                _ => {}
            }
        }
        edges.sort_unstable_by_key(|e| (e.src, e.dst));
        if let Some(w) = edges.windows(2).find(|w| (w[0].src, w[0].dst) == (w[1].src, w[1].dst)) {
            return Err(Error::InvalidArgument(format!("duplicate edge {} -> {}", w[0].src, w[0].dst)));
        }
        let mut offsets = vec![0usize; n + 1];
        for e in &edges {
            offsets[e.src + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        Ok(Self { skeleton, fps, nodes, edges, offsets })
    }

    pub fn skeleton(&self) -> &Skeleton<T> {
        &self.skeleton
    }

    pub fn fps(&self) -> T {
        self.fps
    }

    pub fn nodes(&self) -> &[GraphNode<T>] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &GraphNode<T> {
        &self.nodes[i]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// All edges sorted by `(src, dst)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn successors(&self, v: usize) -> &[Edge] {
        &self.edges[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn edge_between(&self, src: usize, dst: usize) -> Option<&Edge> {
        let out = self.successors(src);
        out.binary_search_by_key(&dst, |e| e.dst).ok().map(|i| &out[i])
    }

    pub fn continuous_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Continuous)
    }

    pub fn transition_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Transition)
    }

    /// Successor lists as plain indices.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.node_count()).map(|v| self.successors(v).iter().map(|e| e.dst).collect()).collect()
    }

    /// Index of the node for `(clip_id, frame_index)`.
    pub fn find_node(&self, clip_id: &str, frame_index: usize) -> Option<usize> {
        self.nodes.iter().position(|n| n.clip_id == clip_id && n.frame_index == frame_index)
    }

    /// Induced subgraph on `keep` (ascending indices); node order is preserved.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Self {
        let mut remap = vec![usize::MAX; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let nodes = keep.iter().map(|&i| self.nodes[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| remap[e.src] != usize::MAX && remap[e.dst] != usize::MAX)
            .map(|e| Edge { src: remap[e.src], dst: remap[e.dst], kind: e.kind })
            .collect();
        Self::new(self.skeleton.clone(), self.fps, nodes, edges).expect("subgraph of a valid graph is valid")
    }

    pub fn stats(&self) -> GraphStats {
        let adj = self.adjacency();
        let comp = strongly_connected_components(&adj);
        let count = comp.iter().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let transitions = self.transition_edges().count();
        GraphStats {
            nodes: self.node_count(),
            continuous_edges: self.edges.len() - transitions,
            transition_edges: transitions,
            scc_count: count,
            largest_scc: sizes.iter().copied().max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub continuous_edges: usize,
    pub transition_edges: usize,
    pub scc_count: usize,
    pub largest_scc: usize,
}

impl GraphStats {
    pub fn transition_fraction(&self) -> f64 {
        let total = self.continuous_edges + self.transition_edges;
        if total == 0 {
            0.0
        } else {
            self.transition_edges as f64 / total as f64
        }
    }
}

/// One node per frame per clip with FK positions and per-clip velocities.
/// Clips shorter than two frames are skipped with a warning.
pub fn build_nodes<T: Scalar>(motion: &MotionDocument<T>) -> Result<Vec<GraphNode<T>>> {
    let skel = &motion.skeleton;
    let mut nodes = Vec::with_capacity(motion.clips.iter().map(|c| c.frames.len()).sum());
    for clip in &motion.clips {
        if clip.frames.len() < 2 {
            warn!("clip '{}' has {} frame(s); skipped (velocities need two)", clip.clip_id, clip.frames.len());
            continue;
        }
        let positions =
            clip.frames.iter().map(|p| forward_kinematics(skel, p)).collect::<Result<Vec<_>>>()?;
        let velocities = central_difference_velocities(&positions, motion.fps)?;
        for (i, ((pose, pos), vel)) in clip.frames.iter().zip(positions).zip(velocities).enumerate() {
            nodes.push(GraphNode {
                clip_id: clip.clip_id.clone(),
                frame_index: i,
                pose: pose.clone(),
                positions: pos,
                velocities: vel,
                focal_length: clip.focal_lengths.as_ref().map(|f| f[i]),
            });
        }
    }
    Ok(nodes)
}

/// Edges `i -> i + 1` between consecutive frames of each clip.
pub fn continuous_edges<T>(nodes: &[GraphNode<T>]) -> Vec<Edge> {
    nodes
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].precedes(&w[1]))
        .map(|(i, _)| Edge { src: i, dst: i + 1, kind: EdgeKind::Continuous })
        .collect()
}

/// Intra-clip neighbours `(previous, next)` of node `s`, by position in `nodes`.
fn clip_neighbors<T>(nodes: &[GraphNode<T>], s: usize) -> (Option<usize>, Option<usize>) {
    let prev = s.checked_sub(1).filter(|&p| nodes[p].precedes(&nodes[s]));
    let next = Some(s + 1).filter(|&q| q < nodes.len() && nodes[s].precedes(&nodes[q]));
    (prev, next)
}

/// Adaptive position and velocity thresholds `(τ_p, τ_v)` of source node `s`:
/// λ times the mean Frobenius distance to the intra-clip neighbours. A clip
/// boundary node uses its single neighbour directly.
pub fn adaptive_thresholds<T: Scalar>(
    nodes: &[GraphNode<T>],
    s: usize,
    lambda_p: T,
    lambda_v: T,
) -> Result<(T, T)> {
    let (prev, next) = clip_neighbors(nodes, s);
    let here = &nodes[s];
    let local = |n: usize| {
        (
            here.positions.frobenius_distance(&nodes[n].positions),
            here.velocities.frobenius_distance(&nodes[n].velocities),
        )
    };
    let (dp, dv) = match (prev, next) {
        (Some(a), Some(b)) => {
            let (pa, va) = local(a);
            let (pb, vb) = local(b);
            let half = T::lit(0.5);
            (half * (pa + pb), half * (va + vb))
        }
        (Some(a), None) | (None, Some(a)) => local(a),
        (None, None) => {
            return Err(Error::InvalidArgument(format!(
                "node {s} (clip '{}', frame {}) has no intra-clip neighbour",
                here.clip_id, here.frame_index
            )))
        }
    };
    Ok((lambda_p * dp, lambda_v * dv))
}

/// Smallest joint count `k` with `k / J >= consensus`, or `None` if no count
/// reaches it.
fn required_passes<T: Scalar>(joints: usize, consensus: T) -> Option<usize> {
    (0..=joints).find(|&k| T::from_count(k) / T::from_count(joints) >= consensus)
}

/// Evaluates the joint-consensus test for the ordered pair `(s, t)` given the
/// thresholds of `s`.
fn pair_passes<T: Scalar>(
    src: &GraphNode<T>,
    dst: &GraphNode<T>,
    tau_p: T,
    tau_v: T,
    required: usize,
    early_exit: bool,
) -> bool {
    let j = src.positions.len();
    let budget = j - required;
    let mut fails = 0usize;
    for k in 0..j {
        let ok = src.positions[k].distance(dst.positions[k]) <= tau_p
            && src.velocities[k].distance(dst.velocities[k]) <= tau_v;
        if !ok {
            fails += 1;
            if early_exit && fails > budget {
                return false;
            }
        }
    }
    j - fails >= required
}

/// Directed transition edges `s -> t` over all ordered node pairs except
/// intra-clip neighbours. Thresholds come from the source node only. A source
/// with zero local motion (both thresholds zero) proposes nothing.
pub fn propose_transition_edges<T: Scalar>(
    nodes: &[GraphNode<T>],
    cfg: &GraphBuildConfig<T>,
) -> Result<Vec<Edge>> {
    let n = nodes.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let joints = nodes[0].positions.len();
    let Some(required) = required_passes(joints, cfg.consensus) else {
        return Ok(Vec::new());
    };
    let thresholds: Vec<Option<(T, T)>> = (0..n)
        .map(|s| adaptive_thresholds(nodes, s, cfg.lambda_p, cfg.lambda_v).ok())
        .collect();

    let per_source = |s: usize| -> Vec<Edge> {
        let Some((tau_p, tau_v)) = thresholds[s] else {
            return Vec::new();
        };
        if tau_p <= T::zero() && tau_v <= T::zero() {
            return Vec::new();
        }
        (0..n)
            .filter(|&t| t != s && !nodes[s].precedes(&nodes[t]) && !nodes[t].precedes(&nodes[s]))
            .filter(|&t| pair_passes(&nodes[s], &nodes[t], tau_p, tau_v, required, cfg.prefilter))
            .map(|t| Edge { src: s, dst: t, kind: EdgeKind::Transition })
            .collect()
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let mut edges: Vec<Edge> =
        pool.install(|| (0..n).into_par_iter().flat_map_iter(per_source).collect());
    edges.sort_unstable_by_key(|e| (e.src, e.dst));
    info!("proposed {} transition edges over {} nodes", edges.len(), n);
    Ok(edges)
}

/// Restricts the graph to its largest strongly connected component. Warns when
/// that component is a single node.
pub fn prune_to_largest_scc<T: Scalar>(graph: &MotionGraph<T>) -> MotionGraph<T> {
    let keep = largest_component(&graph.adjacency());
    if keep.len() == 1 {
        warn!("largest strongly connected component has a single node; graph is degenerate");
    }
    graph.induced_subgraph(&keep)
}

/// Full build: nodes, continuous and transition edges, then SCC pruning unless
/// `keep_all_sccs` is set.
pub fn build_graph<T: Scalar>(motion: &MotionDocument<T>, cfg: &GraphBuildConfig<T>) -> Result<MotionGraph<T>> {
    let nodes = build_nodes(motion)?;
    let mut edges = continuous_edges(&nodes);
    edges.extend(propose_transition_edges(&nodes, cfg)?);
    let graph = MotionGraph::new(motion.skeleton.clone(), motion.fps, nodes, edges)?;
    if cfg.keep_all_sccs || graph.is_empty() {
        return Ok(graph);
    }
    Ok(prune_to_largest_scc(&graph))
}
