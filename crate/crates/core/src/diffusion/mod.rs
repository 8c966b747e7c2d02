//! DDIM motion sampling around a pluggable noise predictor, with multi-stream
//! conditioning and overlapping-window inpainting for long sequences.

mod conditioning;
mod inpaint;
mod linear;
mod sampler;
mod schedule;

pub use conditioning::{
    align_token_features, fuse_features, token_assignment, token_timestamps, ConditioningSet, Projections,
    TokenTiming,
};
pub use inpaint::{
    inpaint_long_sequence, motion_width, poses_to_tensor, tensor_to_poses, window_seed, InpaintConfig, LongSequence,
};
pub use linear::{LinearDenoiser, ProjectionRows, ReferenceModel};
pub use sampler::{ddim_sample, forward_noising, gaussian, noise_prediction_loss, predict_clean, Denoiser};
pub use schedule::{NoiseSchedule, ScheduleConfig};
