//! Subcommand implementations. Each merges its flags into the configuration,
//! validates it, and reads and writes files only through the library's
//! format functions.

use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::Serialize;

use motion_graph::diffusion::{
    fuse_features, inpaint_long_sequence, ConditioningSet, InpaintConfig, ReferenceModel, ScheduleConfig,
};
use motion_graph::graph::{build_graph as build, GraphBuildConfig, GraphStats};
use motion_graph::io::{
    load_beats, load_features, load_graph, load_json, load_motion, save_graph, save_json, save_motion, Clip,
    MotionDocument, FORMAT_VERSION,
};
use motion_graph::kinematics::Pose;
use motion_graph::metrics::{beat_consistency, diversity, kinematic_beats, BeatTrack};
use motion_graph::retrieval::{beam_search, MetricConfig, MetricWeights, PathDocument, PositionFrame, SearchConfig};
use motion_graph::stitch::{path_to_render_plan, smooth_transitions, StitchMode};

use crate::config::PipelineConfig;
use crate::{BuildGraphArgs, CliError, InspectArgs, MetricsArgs, RetrieveArgs, SampleArgs, StitchArgs};

fn set<T: Copy>(slot: &mut T, flag: Option<T>) {
    if let Some(v) = flag {
        *slot = v;
    }
}

/// Validates the merged configuration and sizes the global worker pool.
fn prepare(cfg: &PipelineConfig) -> Result<(), CliError> {
    cfg.validate()?;
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global();
    Ok(())
}

fn check_fps(what: &Path, fps: f64, cfg: &PipelineConfig) {
    if (fps - cfg.fps).abs() > 1e-9 {
        warn!("{}: frame rate {fps} differs from the configured {}", what.display(), cfg.fps);
    }
}

fn select_clip<'a>(doc: &'a MotionDocument<f64>, id: Option<&str>, file: &Path) -> Result<&'a Clip<f64>, CliError> {
    match id {
        Some(id) => doc
            .clip(id)
            .ok_or_else(|| CliError::new("invalid_argument", format!("{}: no clip '{id}'", file.display()))),
        None => {
            if doc.clips.len() > 1 {
                info!("{}: using the first of {} clips", file.display(), doc.clips.len());
            }
            doc.clips.first().ok_or_else(|| CliError::new("invalid_argument", format!("{}: no clips", file.display())))
        }
    }
}

pub fn build_graph(a: &BuildGraphArgs, cfg: &mut PipelineConfig) -> Result<(), CliError> {
    set(&mut cfg.lambda_p, a.lambda_p);
    set(&mut cfg.lambda_v, a.lambda_v);
    set(&mut cfg.th, a.th);
    if a.no_prefilter {
        cfg.prefilter = false;
    }
    if a.keep_all_sccs {
        cfg.keep_all_sccs = true;
    }
    prepare(cfg)?;
    let doc = load_motion::<f64>(&a.motion)?;
    check_fps(&a.motion, doc.fps, cfg);
    let graph = build(
        &doc,
        &GraphBuildConfig {
            lambda_p: cfg.lambda_p,
            lambda_v: cfg.lambda_v,
            consensus: cfg.th,
            prefilter: cfg.prefilter,
            workers: cfg.workers,
            keep_all_sccs: cfg.keep_all_sccs,
        },
    )?;
    let stats = graph.stats();
    info!(
        "graph: {} nodes, {} continuous and {} transition edges",
        stats.nodes, stats.continuous_edges, stats.transition_edges
    );
    save_graph(&graph, &a.out)?;
    Ok(())
}

pub fn retrieve(a: &RetrieveArgs, cfg: &mut PipelineConfig) -> Result<(), CliError> {
    set(&mut cfg.beam, a.beam);
    set(&mut cfg.gamma, a.gamma);
    set(&mut cfg.beta, a.beta);
    set(&mut cfg.lambda_r, a.lambda_r);
    set(&mut cfg.lambda_p_metric, a.lambda_p);
    if a.normalize_positions {
        cfg.normalize_positions = true;
    }
    prepare(cfg)?;
    let graph = load_graph::<f64>(&a.graph)?;
    let doc = load_motion::<f64>(&a.query)?;
    check_fps(&a.query, doc.fps, cfg);
    if doc.skeleton != *graph.skeleton() {
        return Err(CliError::new("skeleton", "query and graph skeletons differ"));
    }
    let clip = select_clip(&doc, a.clip.as_deref(), &a.query)?;
    let search = SearchConfig {
        metric: MetricConfig {
            weights: MetricWeights::new(cfg.lambda_r, cfg.lambda_p_metric)?,
            frame: if a.absolute_positions { PositionFrame::Absolute } else { PositionFrame::RootRelative },
            normalize_positions: cfg.normalize_positions,
        },
        beam_width: cfg.beam,
        gamma: cfg.gamma,
        beta: cfg.beta,
    };
    let path = beam_search(&graph, &clip.frames, &search)?;
    info!("path cost {} with {} transitions", path.total_cost, path.transition_count());
    save_json(&PathDocument::from_path(&path, &graph), &a.out)?;
    Ok(())
}

pub fn sample(a: &SampleArgs, cfg: &mut PipelineConfig) -> Result<(), CliError> {
    set(&mut cfg.seed, a.seed);
    set(&mut cfg.clip_len, a.clip_len);
    set(&mut cfg.overlap, a.overlap);
    prepare(cfg)?;
    let schedule_cfg = match &a.schedule {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
            toml::from_str::<ScheduleConfig>(&text)
                .map_err(|e| CliError::new("config", format!("{}: {}", path.display(), e.message())))?
        }
        None => ScheduleConfig { sampling_steps: cfg.sampling_steps, ..ScheduleConfig::default() },
    };
    let schedule = schedule_cfg.build::<f64>()?;
    let features = load_features::<f64>(&a.features)?;
    check_fps(&a.features, features.fps, cfg);
    let model: ReferenceModel<f64> = load_json(&a.denoiser)?;
    let (skeleton, projections, denoiser) = model.into_parts()?;
    let cond = fuse_features(&ConditioningSet::from_features(&features)?, &projections)?;
    let inpaint =
        InpaintConfig { clip_len: cfg.clip_len, overlap: cfg.overlap, sampling_steps: schedule_cfg.sampling_steps };
    let out = inpaint_long_sequence(&denoiser, &schedule, cond.view(), skeleton.joint_count(), &inpaint, cfg.seed)?;
    info!("sampled {} frames in {} windows", out.poses.len(), out.windows.len());
    let doc = MotionDocument::new(features.fps, skeleton, vec![Clip::new("sample", out.poses)])?;
    save_motion(&doc, &a.out)?;
    Ok(())
}

pub fn stitch(a: &StitchArgs, cfg: &mut PipelineConfig) -> Result<(), CliError> {
    if a.insert_frames {
        cfg.preserve_length = false;
    }
    if a.preserve_length {
        cfg.preserve_length = true;
    }
    prepare(cfg)?;
    let mode = if cfg.preserve_length { StitchMode::PreserveLength } else { StitchMode::Insert };
    let graph = load_graph::<f64>(&a.graph)?;
    let doc: PathDocument = load_json(&a.path)?;
    let path = doc.to_path(&graph)?;
    let track = smooth_transitions(&path, &graph, mode)?;
    let plan = path_to_render_plan(&path, &graph, mode)?;
    info!("{} output frames, {} interpolated", plan.len(), plan.interpolated_count());
    let motion = MotionDocument::new(graph.fps(), graph.skeleton().clone(), vec![Clip::new("stitched", track)])?;
    save_motion(&motion, &a.out_motion)?;
    save_json(&plan, &a.out_plan)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ScoredClip {
    clip_id: String,
    frames: usize,
    fps: f64,
}

#[derive(Debug, Serialize)]
struct BeatReport {
    sigma: f64,
    prominence: f64,
    audio_beats: usize,
    kinematic_beats: Vec<f64>,
    beat_consistency: f64,
}

#[derive(Debug, Serialize)]
struct DiversityReport {
    pattern: String,
    files: Vec<String>,
    motions: usize,
    frames: usize,
    diversity: f64,
}

#[derive(Debug, Serialize)]
struct MetricsReport {
    format_version: u32,
    motion: ScoredClip,
    #[serde(skip_serializing_if = "Option::is_none")]
    beats: Option<BeatReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diversity: Option<DiversityReport>,
}

fn diversity_set(pattern: &str) -> Result<DiversityReport, CliError> {
    let paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(|e| CliError::new("invalid_argument", format!("bad glob '{pattern}': {e}")))?
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::new("io", e.to_string()))?;
    if paths.is_empty() {
        return Err(CliError::new("invalid_argument", format!("no files match '{pattern}'")));
    }
    let mut skeleton = None;
    let mut motions: Vec<Vec<Pose<f64>>> = Vec::new();
    for path in &paths {
        let doc = load_motion::<f64>(path)?;
        match &skeleton {
            None => skeleton = Some(doc.skeleton.clone()),
            Some(s) if *s != doc.skeleton => {
                return Err(CliError::new("skeleton", format!("{}: skeleton differs from the set", path.display())))
            }
            Some(_) => {}
        }
        motions.extend(doc.clips.into_iter().map(|c| c.frames));
    }
    let frames = motions.iter().map(Vec::len).min().unwrap_or(0);
    if motions.iter().any(|m| m.len() != frames) {
        warn!("diversity set clips differ in length; comparing their first {frames} frames");
        for m in &mut motions {
            m.truncate(frames);
        }
    }
    let skeleton = skeleton.expect("at least one file");
    let value = diversity(&motions, &skeleton)?;
    Ok(DiversityReport {
        pattern: pattern.to_string(),
        files: paths.iter().map(|p| p.display().to_string()).collect(),
        motions: motions.len(),
        frames,
        diversity: value,
    })
}

pub fn metrics(a: &MetricsArgs, cfg: &mut PipelineConfig) -> Result<(), CliError> {
    set(&mut cfg.sigma, a.sigma);
    set(&mut cfg.prominence, a.prominence);
    prepare(cfg)?;
    let doc = load_motion::<f64>(&a.motion)?;
    check_fps(&a.motion, doc.fps, cfg);
    let clip = select_clip(&doc, a.clip.as_deref(), &a.motion)?;
    let beats = match &a.beats {
        None => None,
        Some(path) => {
            let audio = BeatTrack::new(load_beats(path)?)?;
            let kinematic = kinematic_beats(&clip.frames, &doc.skeleton, doc.fps, cfg.prominence)?;
            let bc = beat_consistency(&kinematic, &audio, cfg.sigma)?;
            Some(BeatReport {
                sigma: cfg.sigma,
                prominence: cfg.prominence,
                audio_beats: audio.times().len(),
                kinematic_beats: kinematic,
                beat_consistency: bc,
            })
        }
    };
    let diversity = a.diversity_set.as_deref().map(diversity_set).transpose()?;
    let report = MetricsReport {
        format_version: FORMAT_VERSION,
        motion: ScoredClip { clip_id: clip.clip_id.clone(), frames: clip.frames.len(), fps: doc.fps },
        beats,
        diversity,
    };
    save_json(&report, &a.out)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct InspectReport {
    #[serde(flatten)]
    stats: GraphStats,
    transition_fraction: f64,
    fps: f64,
    joints: usize,
}

pub fn inspect(a: &InspectArgs, cfg: &mut PipelineConfig) -> Result<(), CliError> {
    prepare(cfg)?;
    let graph = load_graph::<f64>(&a.graph)?;
    let stats = graph.stats();
    println!("nodes: {}", stats.nodes);
    println!(
        "edges: {} ({} continuous, {} transition)",
        stats.continuous_edges + stats.transition_edges,
        stats.continuous_edges,
        stats.transition_edges
    );
    println!("transition fraction: {:.4}", stats.transition_fraction());
    println!("strongly connected components: {}", stats.scc_count);
    println!("largest scc: {}", stats.largest_scc);
    if stats.largest_scc <= 1 {
        warn!("largest strongly connected component has {} node(s); retrieval cannot leave a frame", stats.largest_scc);
    }
    if let Some(out) = &a.out {
        let report = InspectReport {
            stats,
            transition_fraction: stats.transition_fraction(),
            fps: graph.fps(),
            joints: graph.skeleton().joint_count(),
        };
        save_json(&report, out)?;
    }
    Ok(())
}
