//! Versioned on-disk documents: motion, conditioning features, motion graphs,
//! retrieved paths and beat tracks.
//!
//! JSON output is canonical (sorted keys, shortest round-trip float formatting,
//! trailing newline) so `save ∘ load ∘ save` is byte-identical. Graphs whose
//! path ends in `.mgb` use a length-prefixed little-endian binary container.

use std::collections::HashSet;
use std::fs;
use std::io::{Cursor, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};
use log::warn;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::graph::{Edge, EdgeKind, GraphNode, MotionGraph};
use crate::kinematics::{JointVectors, Pose, Skeleton, SkeletonRepr, UnitQuaternion, Vec3};
use crate::{Error, Result, Scalar};

pub const FORMAT_VERSION: u32 = 1;

/// Quaternions further than this from unit norm are reported when loaded.
const QUAT_DRIFT_WARN: f64 = 1e-6;

const GRAPH_MAGIC: &[u8; 8] = b"MGRAPHB\0";

fn check_version(found: u32) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::Version { expected: FORMAT_VERSION, found });
    }
    Ok(())
}

/// Serializes `value` as canonical pretty JSON.
pub fn to_canonical_json<S: Serialize>(value: &S) -> Result<String> {
    // serde_json's map is ordered by key, so the round trip through Value sorts.
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn save_json<S: Serialize>(value: &S, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_canonical_json(value)?)?;
    Ok(())
}

pub fn load_json<D: DeserializeOwned>(path: impl AsRef<Path>) -> Result<D> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

// ---------------------------------------------------------------------------
// Motion
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct Clip<T> {
    pub clip_id: String,
    pub frames: Vec<Pose<T>>,
    /// Per-frame camera focal length; carried through, unused by FK.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub focal_lengths: Option<Vec<T>>,
    /// Body shape coefficients; opaque metadata.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<T>>,
}

impl<T: Scalar> Clip<T> {
    pub fn new(clip_id: impl Into<String>, frames: Vec<Pose<T>>) -> Self {
        Self { clip_id: clip_id.into(), frames, focal_lengths: None, shape: None }
    }

    /// Seconds covered by the clip at `fps`.
    pub fn duration(&self, fps: T) -> T {
        T::from_count(self.frames.len()) / fps
    }
}

/// Skeleton plus any number of pose clips sampled at a shared frame rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct MotionDocument<T> {
    pub format_version: u32,
    pub fps: T,
    pub skeleton: Skeleton<T>,
    pub clips: Vec<Clip<T>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Scalar"))]
struct RawPose<T> {
    rotations: Vec<Vec<T>>,
    root_translation: Vec<T>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Scalar"))]
struct RawClip<T> {
    clip_id: String,
    frames: Vec<RawPose<T>>,
    #[serde(default)]
    focal_lengths: Option<Vec<T>>,
    #[serde(default)]
    shape: Option<Vec<T>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Scalar"))]
struct RawMotion<T> {
    format_version: u32,
    fps: T,
    skeleton: SkeletonRepr<T>,
    clips: Vec<RawClip<T>>,
}

fn parse_quaternion<T: Scalar>(c: &[T], ctx: &dyn Fn() -> String) -> Result<UnitQuaternion<T>> {
    let [w, x, y, z] = c else {
        return Err(Error::Malformed(format!("{}: quaternion has {} components, expected 4", ctx(), c.len())));
    };
    let q = UnitQuaternion::try_new(*w, *x, *y, *z)
        .ok_or_else(|| Error::Malformed(format!("{}: degenerate or non-finite quaternion", ctx())))?;
    let norm = (*w * *w + *x * *x + *y * *y + *z * *z).sqrt();
    if (norm - T::one()).abs().to_f64_lossy() > QUAT_DRIFT_WARN {
        warn!("{}: quaternion norm {} re-normalized", ctx(), norm);
    }
    Ok(q)
}

fn parse_vec3<T: Scalar>(c: &[T], what: &str, ctx: &dyn Fn() -> String) -> Result<Vec3<T>> {
    let [x, y, z] = c else {
        return Err(Error::Malformed(format!("{}: {what} has {} components, expected 3", ctx(), c.len())));
    };
    let v = Vec3::new(*x, *y, *z);
    if !v.is_finite() {
        return Err(Error::Malformed(format!("{}: {what} is not finite", ctx())));
    }
    Ok(v)
}

fn parse_pose<T: Scalar>(raw: &RawPose<T>, joints: usize, ctx: &dyn Fn() -> String) -> Result<Pose<T>> {
    if raw.rotations.len() != joints {
        return Err(Error::Malformed(format!(
            "{}: {} rotations for a {joints}-joint skeleton",
            ctx(),
            raw.rotations.len()
        )));
    }
    let rotations = raw
        .rotations
        .iter()
        .enumerate()
        .map(|(j, c)| parse_quaternion(c, &|| format!("{}, joint {j}", ctx())))
        .collect::<Result<Vec<_>>>()?;
    let root_translation = parse_vec3(&raw.root_translation, "root translation", ctx)?;
    Ok(Pose { rotations, root_translation })
}

impl<T: Scalar> MotionDocument<T> {
    pub fn new(fps: T, skeleton: Skeleton<T>, clips: Vec<Clip<T>>) -> Result<Self> {
        let doc = Self { format_version: FORMAT_VERSION, fps, skeleton, clips };
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        check_version(self.format_version)?;
        if !(self.fps > T::zero()) || !self.fps.is_finite() {
            return Err(Error::Malformed(format!("fps must be positive, got {}", self.fps)));
        }
        let mut seen = HashSet::new();
        for clip in &self.clips {
            if !seen.insert(clip.clip_id.as_str()) {
                return Err(Error::Malformed(format!("duplicate clip_id '{}'", clip.clip_id)));
            }
            for (f, pose) in clip.frames.iter().enumerate() {
                if pose.rotations.len() != self.skeleton.joint_count() {
                    return Err(Error::Malformed(format!(
                        "clip '{}', frame {f}: {} rotations for a {}-joint skeleton",
                        clip.clip_id,
                        pose.rotations.len(),
                        self.skeleton.joint_count()
                    )));
                }
                if !pose.root_translation.is_finite() {
                    return Err(Error::Malformed(format!(
                        "clip '{}', frame {f}: root translation is not finite",
                        clip.clip_id
                    )));
                }
            }
            if let Some(f) = &clip.focal_lengths {
                if f.len() != clip.frames.len() {
                    return Err(Error::Malformed(format!(
                        "clip '{}': focal_lengths has {} entries for {} frames",
                        clip.clip_id,
                        f.len(),
                        clip.frames.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawMotion<T> = serde_json::from_str(text)?;
        check_version(raw.format_version)?;
        let skeleton = Skeleton::try_from(raw.skeleton)?;
        let joints = skeleton.joint_count();
        let clips = raw
            .clips
            .iter()
            .map(|c| {
                let frames = c
                    .frames
                    .iter()
                    .enumerate()
                    .map(|(f, p)| parse_pose(p, joints, &|| format!("clip '{}', frame {f}", c.clip_id)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Clip {
                    clip_id: c.clip_id.clone(),
                    frames,
                    focal_lengths: c.focal_lengths.clone(),
                    shape: c.shape.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let doc = Self { format_version: raw.format_version, fps: raw.fps, skeleton, clips };
        doc.validate()?;
        Ok(doc)
    }

    pub fn clip(&self, clip_id: &str) -> Option<&Clip<T>> {
        self.clips.iter().find(|c| c.clip_id == clip_id)
    }
}

pub fn load_motion<T: Scalar>(path: impl AsRef<Path>) -> Result<MotionDocument<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    MotionDocument::from_json_str(&text)
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub fn save_motion<T: Scalar>(doc: &MotionDocument<T>, path: impl AsRef<Path>) -> Result<()> {
    doc.validate()?;
    save_json(doc, path)
}

// ---------------------------------------------------------------------------
// Conditioning features
// ---------------------------------------------------------------------------

/// A recognized word with its time span in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Word<T> {
    pub text: String,
    pub start: T,
    pub end: T,
}

/// Language-model token embeddings (M×d) with optional timing information.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct TokenFeatures<T> {
    pub embeddings: Vec<Vec<T>>,
    /// Explicit per-token times in seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamps: Option<Vec<T>>,
    /// Token strings; with `words` they let token times be derived per character.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tokens: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub words: Option<Vec<Word<T>>>,
}

/// Per-frame audio features. Nominal widths are 128 (mel) and 1024 (HuBERT);
/// any consistent width is accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct FeatureDocument<T> {
    pub format_version: u32,
    pub fps: T,
    pub frame_count: usize,
    pub mel: Vec<Vec<T>>,
    pub hubert: Vec<Vec<T>>,
    pub llm: TokenFeatures<T>,
}

fn check_matrix<T: Scalar>(name: &str, rows: &[Vec<T>], expected_rows: Option<usize>) -> Result<usize> {
    if let Some(r) = expected_rows {
        if rows.len() != r {
            return Err(Error::Malformed(format!("{name}: {} rows, expected {r}", rows.len())));
        }
    }
    let width = rows.first().map_or(0, Vec::len);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::Malformed(format!("{name}: row {i} has width {}, expected {width}", row.len())));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Malformed(format!("{name}: row {i} has a non-finite value")));
        }
    }
    Ok(width)
}

impl<T: Scalar> FeatureDocument<T> {
    pub fn validate(&self) -> Result<()> {
        check_version(self.format_version)?;
        if !(self.fps > T::zero()) {
            return Err(Error::Malformed(format!("fps must be positive, got {}", self.fps)));
        }
        check_matrix("mel", &self.mel, Some(self.frame_count))?;
        check_matrix("hubert", &self.hubert, Some(self.frame_count))?;
        check_matrix("llm.embeddings", &self.llm.embeddings, None)?;
        let m = self.llm.embeddings.len();
        if m == 0 {
            return Err(Error::Malformed("llm.embeddings is empty".into()));
        }
        if let Some(ts) = &self.llm.timestamps {
            if ts.len() != m {
                return Err(Error::Malformed(format!("llm.timestamps has {} entries for {m} tokens", ts.len())));
            }
            if ts.iter().any(|t| !t.is_finite()) {
                return Err(Error::Malformed("llm.timestamps has a non-finite value".into()));
            }
        }
        if let Some(tokens) = &self.llm.tokens {
            if tokens.len() != m {
                return Err(Error::Malformed(format!("llm.tokens has {} entries for {m} tokens", tokens.len())));
            }
        }
        if let Some(words) = &self.llm.words {
            for (i, w) in words.iter().enumerate() {
                if !(w.start.is_finite() && w.end.is_finite()) || w.end < w.start {
                    return Err(Error::Malformed(format!("llm.words[{i}] has an invalid time span")));
                }
            }
        }
        Ok(())
    }
}

pub fn load_features<T: Scalar>(path: impl AsRef<Path>) -> Result<FeatureDocument<T>> {
    let doc: FeatureDocument<T> = load_json(path)?;
    doc.validate()?;
    Ok(doc)
}

pub fn save_features<T: Scalar>(doc: &FeatureDocument<T>, path: impl AsRef<Path>) -> Result<()> {
    doc.validate()?;
    save_json(doc, path)
}

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

/// Serialized form of a [`MotionGraph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct GraphDocument<T> {
    pub format_version: u32,
    pub fps: T,
    pub skeleton: Skeleton<T>,
    pub nodes: Vec<GraphNode<T>>,
    pub edges: Vec<Edge>,
}

impl<T: Scalar> From<&MotionGraph<T>> for GraphDocument<T> {
    fn from(g: &MotionGraph<T>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            fps: g.fps(),
            skeleton: g.skeleton().clone(),
            nodes: g.nodes().to_vec(),
            edges: g.edges().to_vec(),
        }
    }
}

impl<T: Scalar> TryFrom<GraphDocument<T>> for MotionGraph<T> {
    type Error = Error;

    fn try_from(doc: GraphDocument<T>) -> Result<Self> {
        check_version(doc.format_version)?;
        MotionGraph::new(doc.skeleton, doc.fps, doc.nodes, doc.edges)
    }
}

fn is_binary_graph(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("mgb"))
}

pub fn save_graph<T: Scalar>(graph: &MotionGraph<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let doc = GraphDocument::from(graph);
    if is_binary_graph(path) {
        let mut file = fs::File::create(path)?;
        file.write_all(&encode_graph_binary(&doc)?)?;
        Ok(())
    } else {
        save_json(&doc, path)
    }
}

pub fn load_graph<T: Scalar>(path: impl AsRef<Path>) -> Result<MotionGraph<T>> {
    let path = path.as_ref();
    let doc = if is_binary_graph(path) {
        decode_graph_binary(&fs::read(path)?)?
    } else {
        load_json::<GraphDocument<T>>(path)?
    };
    MotionGraph::try_from(doc)
}

fn put_f64<T: Scalar>(buf: &mut Vec<u8>, v: T) -> Result<()> {
    buf.write_f64::<LE>(v.to_f64_lossy())?;
    Ok(())
}

fn put_str(buf: &mut Vec<u8>, s: &str) -> Result<()> {
    buf.write_u32::<LE>(s.len() as u32)?;
    buf.write_all(s.as_bytes())?;
    Ok(())
}

fn put_section(out: &mut Vec<u8>, section: Vec<u8>) -> Result<()> {
    out.write_u64::<LE>(section.len() as u64)?;
    out.extend_from_slice(&section);
    Ok(())
}

/// Binary container: magic, version, then four length-prefixed sections
/// (header, skeleton, nodes, edges). All reals are little-endian f64.
pub fn encode_graph_binary<T: Scalar>(doc: &GraphDocument<T>) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    out.extend_from_slice(GRAPH_MAGIC);
    out.write_u32::<LE>(doc.format_version)?;

    let mut header = Vec::new();
    put_f64(&mut header, doc.fps)?;
    put_section(&mut out, header)?;

    let skel = &doc.skeleton;
    let mut s = Vec::new();
    s.write_u32::<LE>(skel.joint_count() as u32)?;
    for p in skel.parents() {
        s.write_i64::<LE>(p.map_or(-1, |p| p as i64))?;
    }
    for o in skel.rest_offsets() {
        for c in o.to_array() {
            put_f64(&mut s, c)?;
        }
    }
    s.write_u32::<LE>(skel.upper_body().len() as u32)?;
    for &u in skel.upper_body() {
        s.write_u32::<LE>(u as u32)?;
    }
    match skel.names() {
        Some(names) => {
            s.write_u8(1)?;
            for n in names {
                put_str(&mut s, n)?;
            }
        }
        None => s.write_u8(0)?,
    }
    put_section(&mut out, s)?;

    let mut nodes = Vec::new();
    nodes.write_u64::<LE>(doc.nodes.len() as u64)?;
    for n in &doc.nodes {
        put_str(&mut nodes, &n.clip_id)?;
        nodes.write_u64::<LE>(n.frame_index as u64)?;
        for q in &n.pose.rotations {
            for c in q.to_array() {
                put_f64(&mut nodes, c)?;
            }
        }
        for v in std::iter::once(&n.pose.root_translation)
            .chain(n.positions.as_slice())
            .chain(n.velocities.as_slice())
        {
            for c in v.to_array() {
                put_f64(&mut nodes, c)?;
            }
        }
        match n.focal_length {
            Some(f) => {
                nodes.write_u8(1)?;
                put_f64(&mut nodes, f)?;
            }
            None => nodes.write_u8(0)?,
        }
    }
    put_section(&mut out, nodes)?;

    let mut edges = Vec::new();
    edges.write_u64::<LE>(doc.edges.len() as u64)?;
    for e in &doc.edges {
        edges.write_u64::<LE>(e.src as u64)?;
        edges.write_u64::<LE>(e.dst as u64)?;
        edges.write_u8(match e.kind {
            EdgeKind::Continuous => 0,
            EdgeKind::Transition => 1,
        })?;
    }
    put_section(&mut out, edges)?;
    Ok(out)
}

fn truncated(_: std::io::Error) -> Error {
    Error::Malformed("binary graph is truncated".into())
}

fn take_section<'a>(cur: &mut Cursor<&'a [u8]>, name: &str) -> Result<Cursor<&'a [u8]>> {
    let len = cur.read_u64::<LE>().map_err(truncated)? as usize;
    let start = cur.position() as usize;
    let data = *cur.get_ref();
    let end = start
        .checked_add(len)
        .filter(|&e| e <= data.len())
        .ok_or_else(|| Error::Malformed(format!("binary graph: {name} section overruns the file")))?;
    cur.set_position(end as u64);
    Ok(Cursor::new(&data[start..end]))
}

fn get_f64<T: Scalar>(c: &mut Cursor<&[u8]>) -> Result<T> {
    Ok(T::lit(c.read_f64::<LE>().map_err(truncated)?))
}

fn get_vec3<T: Scalar>(c: &mut Cursor<&[u8]>) -> Result<Vec3<T>> {
    Ok(Vec3::new(get_f64(c)?, get_f64(c)?, get_f64(c)?))
}

fn get_str(c: &mut Cursor<&[u8]>) -> Result<String> {
    let len = c.read_u32::<LE>().map_err(truncated)? as usize;
    let mut bytes = vec![0u8; len];
    c.read_exact(&mut bytes).map_err(truncated)?;
    String::from_utf8(bytes).map_err(|_| Error::Malformed("binary graph: invalid UTF-8 string".into()))
}

pub fn decode_graph_binary<T: Scalar>(bytes: &[u8]) -> Result<GraphDocument<T>> {
    if bytes.len() < GRAPH_MAGIC.len() || &bytes[..GRAPH_MAGIC.len()] != GRAPH_MAGIC {
        return Err(Error::Malformed("not a binary motion graph (bad magic)".into()));
    }
    let mut cur = Cursor::new(bytes);
    cur.set_position(GRAPH_MAGIC.len() as u64);
    let version = cur.read_u32::<LE>().map_err(truncated)?;
    check_version(version)?;

    let mut h = take_section(&mut cur, "header")?;
    let fps = get_f64(&mut h)?;

    let mut s = take_section(&mut cur, "skeleton")?;
    let j = s.read_u32::<LE>().map_err(truncated)? as usize;
    let parents = (0..j)
        .map(|_| s.read_i64::<LE>().map_err(truncated))
        .collect::<Result<Vec<_>>>()?;
    let rest_offsets = (0..j).map(|_| get_vec3(&mut s)).collect::<Result<Vec<_>>>()?;
    let u = s.read_u32::<LE>().map_err(truncated)? as usize;
    let upper_body = (0..u)
        .map(|_| s.read_u32::<LE>().map(|v| v as usize).map_err(truncated))
        .collect::<Result<Vec<_>>>()?;
    let names = match s.read_u8().map_err(truncated)? {
        0 => None,
        _ => Some((0..j).map(|_| get_str(&mut s)).collect::<Result<Vec<_>>>()?),
    };
    let skeleton = Skeleton::try_from(SkeletonRepr { parents, rest_offsets, upper_body, names })?;

    let mut nc = take_section(&mut cur, "nodes")?;
    let n = nc.read_u64::<LE>().map_err(truncated)? as usize;
    let mut nodes = Vec::with_capacity(n.min(1 << 24));
    for i in 0..n {
        let clip_id = get_str(&mut nc)?;
        let frame_index = nc.read_u64::<LE>().map_err(truncated)? as usize;
        let rotations = (0..j)
            .map(|k| {
                let c = [get_f64(&mut nc)?, get_f64(&mut nc)?, get_f64(&mut nc)?, get_f64(&mut nc)?];
                parse_quaternion(&c, &|| format!("node {i}, joint {k}"))
            })
            .collect::<Result<Vec<_>>>()?;
        let root_translation = get_vec3(&mut nc)?;
        let positions = JointVectors((0..j).map(|_| get_vec3(&mut nc)).collect::<Result<_>>()?);
        let velocities = JointVectors((0..j).map(|_| get_vec3(&mut nc)).collect::<Result<_>>()?);
        let focal_length = match nc.read_u8().map_err(truncated)? {
            0 => None,
            _ => Some(get_f64(&mut nc)?),
        };
        nodes.push(GraphNode {
            clip_id,
            frame_index,
            pose: Pose { rotations, root_translation },
            positions,
            velocities,
            focal_length,
        });
    }

    let mut ec = take_section(&mut cur, "edges")?;
    let m = ec.read_u64::<LE>().map_err(truncated)? as usize;
    let mut edges = Vec::with_capacity(m.min(1 << 24));
    for i in 0..m {
        let src = ec.read_u64::<LE>().map_err(truncated)? as usize;
        let dst = ec.read_u64::<LE>().map_err(truncated)? as usize;
        let kind = match ec.read_u8().map_err(truncated)? {
            0 => EdgeKind::Continuous,
            1 => EdgeKind::Transition,
            k => return Err(Error::Malformed(format!("edge {i}: unknown kind tag {k}"))),
        };
        edges.push(Edge { src, dst, kind });
    }
    Ok(GraphDocument { format_version: version, fps, skeleton, nodes, edges })
}

// ---------------------------------------------------------------------------
// Beats
// ---------------------------------------------------------------------------

/// Reads one onset time (seconds) per line; blank lines and `#` comments are skipped.
pub fn parse_beats(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|_| Error::Malformed(format!("beat file line {}: '{l}' is not a number", i + 1)))
        })
        .collect()
}

pub fn load_beats(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    parse_beats(&fs::read_to_string(path)?)
}
