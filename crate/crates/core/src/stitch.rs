//! Turns a retrieved graph walk into a continuous pose track and a render
//! plan that tells an external video renderer which source frames to show and
//! where frame interpolation has to run.

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeKind, MotionGraph};
use crate::io::FORMAT_VERSION;
use crate::kinematics::Pose;
use crate::retrieval::RetrievedPath;
use crate::{Error, Result, Scalar};

/// How transitions are bridged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StitchMode {
    /// Two frames are inserted per transition; output is longer than the path.
    Insert,
    /// The two frames on either side of each transition are replaced, keeping
    /// one output frame per path node.
    #[default]
    PreserveLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Original,
    Interpolated,
}

/// A source video frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameRef {
    pub clip_id: String,
    pub frame_index: usize,
}

/// Frames an interpolator should see on each side of a transition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlendSources {
    /// Frames ending at the transition source, oldest first.
    pub prev: Vec<FrameRef>,
    /// Frames starting at the transition target.
    pub next: Vec<FrameRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct PlanEntry<T> {
    pub kind: EntryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clip_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blend_sources: Option<BlendSources>,
    /// 1-based position among the two intermediate frames of a transition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blend_step: Option<u8>,
    pub audio_time: T,
}

/// Ordered frame schedule for the renderer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"), deny_unknown_fields)]
pub struct RenderPlan<T> {
    pub format_version: u32,
    pub fps: T,
    pub mode: StitchMode,
    pub entries: Vec<PlanEntry<T>>,
}

impl<T: Scalar> RenderPlan<T> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn duration(&self) -> T {
        T::from_count(self.entries.len()) / self.fps
    }

    pub fn interpolated_count(&self) -> usize {
        self.entries.iter().filter(|e| e.kind == EntryKind::Interpolated).count()
    }

    /// Graph nodes of the original entries, in order.
    pub fn original_nodes(&self, graph: &MotionGraph<T>) -> Result<Vec<usize>> {
        self.entries
            .iter()
            .filter(|e| e.kind == EntryKind::Original)
            .map(|e| match (&e.clip_id, e.frame_index) {
                (Some(c), Some(f)) => graph
                    .find_node(c, f)
                    .ok_or_else(|| Error::PathMismatch(format!("plan frame {c}:{f} is not a graph node"))),
                _ => Err(Error::Malformed("original plan entry without a frame reference".into())),
            })
            .collect()
    }
}

fn frame_ref<T: Scalar>(graph: &MotionGraph<T>, n: usize) -> FrameRef {
    let node = &graph.nodes()[n];
    FrameRef { clip_id: node.clip_id.clone(), frame_index: node.frame_index }
}

/// Frames bracketing a transition `s → t`: `(s − 1, s)` and `(t, t + 1)`,
/// omitting neighbors that are not graph nodes.
fn bracketing<T: Scalar>(graph: &MotionGraph<T>, s: usize, t: usize) -> BlendSources {
    let neighbor = |n: usize, forward: bool| {
        let node = &graph.nodes()[n];
        let frame = if forward { node.frame_index.checked_add(1) } else { node.frame_index.checked_sub(1) };
        frame.and_then(|f| graph.find_node(&node.clip_id, f))
    };
    let mut prev: Vec<FrameRef> = neighbor(s, false).map(|p| frame_ref(graph, p)).into_iter().collect();
    prev.push(frame_ref(graph, s));
    let mut next = vec![frame_ref(graph, t)];
    next.extend(neighbor(t, true).map(|q| frame_ref(graph, q)));
    BlendSources { prev, next }
}

/// One output frame before timing is attached.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot<T> {
    Node(usize),
    /// Point `weight` of the way from node `src` to node `dst`.
    Between { src: usize, dst: usize, weight: T, step: u8 },
}

const BLEND_WEIGHTS: [f64; 2] = [1.0 / 3.0, 2.0 / 3.0];

fn schedule<T: Scalar>(path: &RetrievedPath<T>, mode: StitchMode) -> Vec<Slot<T>> {
    let w = |k: usize| T::lit(BLEND_WEIGHTS[k]);
    let mut slots = Vec::with_capacity(path.len() + 2 * path.transition_count());
    match mode {
        StitchMode::Insert => {
            slots.push(Slot::Node(path.nodes[0]));
            for (i, pair) in path.nodes.windows(2).enumerate() {
                if path.edge_kinds[i] == EdgeKind::Transition {
                    for (k, step) in [(0, 1), (1, 2)] {
                        slots.push(Slot::Between { src: pair[0], dst: pair[1], weight: w(k), step });
                    }
                }
                slots.push(Slot::Node(pair[1]));
            }
        }
        StitchMode::PreserveLength => {
            slots.extend(path.nodes.iter().map(|&n| Slot::Node(n)));
            for (i, pair) in path.nodes.windows(2).enumerate() {
                if path.edge_kinds[i] != EdgeKind::Transition {
                    continue;
                }
                // A frame already replaced by an earlier transition stays as is.
                for (k, step) in [(0, 1), (1, 2)] {
                    if matches!(slots[i + k], Slot::Node(_)) {
                        slots[i + k] = Slot::Between { src: pair[0], dst: pair[1], weight: w(k), step };
                    }
                }
            }
        }
    }
    slots
}

/// Builds the render plan for `path`. Original entries name their source
/// frame; interpolated entries name the frames bracketing the transition.
/// `audio_time` advances by `1/fps` per entry.
pub fn path_to_render_plan<T: Scalar>(
    path: &RetrievedPath<T>,
    graph: &MotionGraph<T>,
    mode: StitchMode,
) -> Result<RenderPlan<T>> {
    path.validate(graph)?;
    let fps = graph.fps();
    let entries = schedule(path, mode)
        .into_iter()
        .enumerate()
        .map(|(i, slot)| {
            let audio_time = T::from_count(i) / fps;
            match slot {
                Slot::Node(n) => {
                    let r = frame_ref(graph, n);
                    PlanEntry {
                        kind: EntryKind::Original,
                        clip_id: Some(r.clip_id),
                        frame_index: Some(r.frame_index),
                        blend_sources: None,
                        blend_step: None,
                        audio_time,
                    }
                }
                Slot::Between { src, dst, step, .. } => PlanEntry {
                    kind: EntryKind::Interpolated,
                    clip_id: None,
                    frame_index: None,
                    blend_sources: Some(bracketing(graph, src, dst)),
                    blend_step: Some(step),
                    audio_time,
                },
            }
        })
        .collect();
    Ok(RenderPlan { format_version: FORMAT_VERSION, fps, mode, entries })
}

/// Pose track of `path` with each transition bridged by poses slerped at
/// 1/3 and 2/3 between its boundary poses (root translation linear).
pub fn smooth_transitions<T: Scalar>(
    path: &RetrievedPath<T>,
    graph: &MotionGraph<T>,
    mode: StitchMode,
) -> Result<Vec<Pose<T>>> {
    path.validate(graph)?;
    let pose = |n: usize| &graph.nodes()[n].pose;
    Ok(schedule(path, mode)
        .into_iter()
        .map(|slot| match slot {
            Slot::Node(n) => pose(n).clone(),
            Slot::Between { src, dst, weight, .. } => pose(src).interpolate(pose(dst), weight),
        })
        .collect())
}
