//! Long-sequence generation from overlapping fixed-length windows.

use ndarray::{s, Array2, ArrayView2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sampler::{ddim_loop, gaussian, Denoiser, KnownRows};
use super::NoiseSchedule;
use crate::kinematics::{Pose, UnitQuaternion, Vec3};
use crate::{Error, Result, Scalar};

/// Width of a motion row for `joints` joints: a `(w, x, y, z)` quaternion per
/// joint followed by the root translation.
pub fn motion_width(joints: usize) -> usize {
    4 * joints + 3
}

pub fn poses_to_tensor<T: Scalar>(poses: &[Pose<T>]) -> Result<Array2<T>> {
    let joints = poses.first().map_or(0, Pose::joint_count);
    if let Some(i) = poses.iter().position(|p| p.joint_count() != joints) {
        return Err(Error::InvalidArgument(format!("pose {i} has a different joint count")));
    }
    let width = motion_width(joints);
    let mut out = Array2::zeros((poses.len(), width));
    for (mut row, pose) in out.rows_mut().into_iter().zip(poses) {
        for (j, q) in pose.rotations.iter().enumerate() {
            for (c, v) in q.to_array().into_iter().enumerate() {
                row[4 * j + c] = v;
            }
        }
        for (c, v) in pose.root_translation.to_array().into_iter().enumerate() {
            row[4 * joints + c] = v;
        }
    }
    Ok(out)
}

/// Reads rows back into poses, normalizing quaternion blocks. A block that is
/// zero or non-finite becomes the identity.
pub fn tensor_to_poses<T: Scalar>(x: ArrayView2<'_, T>, joints: usize) -> Result<Vec<Pose<T>>> {
    if x.ncols() != motion_width(joints) {
        return Err(Error::Dimension {
            stream: "motion".into(),
            detail: format!("width {} for {joints} joints (expected {})", x.ncols(), motion_width(joints)),
        });
    }
    Ok(x.rows()
        .into_iter()
        .map(|r| Pose {
            rotations: (0..joints)
                .map(|j| UnitQuaternion::from([r[4 * j], r[4 * j + 1], r[4 * j + 2], r[4 * j + 3]]))
                .collect(),
            root_translation: Vec3::new(r[4 * joints], r[4 * joints + 1], r[4 * joints + 2]),
        })
        .collect())
}

/// Window grid for long sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InpaintConfig {
    /// Frames per window.
    pub clip_len: usize,
    /// Leading frames of each later window fixed to the previous window's tail.
    pub overlap: usize,
    /// DDIM steps per window.
    pub sampling_steps: usize,
}

impl Default for InpaintConfig {
    fn default() -> Self {
        Self { clip_len: 90, overlap: 6, sampling_steps: 50 }
    }
}

impl InpaintConfig {
    pub fn stride(&self) -> usize {
        self.clip_len - self.overlap
    }

    fn validate(&self) -> Result<()> {
        if self.clip_len == 0 || self.overlap >= self.clip_len {
            return Err(Error::InvalidArgument(format!(
                "overlap {} must be smaller than clip length {}",
                self.overlap, self.clip_len
            )));
        }
        Ok(())
    }

    /// 0-based start frame of every window covering `total` frames. The last
    /// window may run past `total`; its excess frames are dropped.
    pub fn window_starts(&self, total: usize) -> Result<Vec<usize>> {
        self.validate()?;
        if total < self.clip_len {
            return Err(Error::TrackTooShort { needed: self.clip_len, got: total });
        }
        let extra = total - self.clip_len;
        let count = 1 + extra.div_ceil(self.stride());
        Ok((0..count).map(|i| i * self.stride()).collect())
    }
}

/// Result of [`inpaint_long_sequence`].
#[derive(Debug, Clone)]
pub struct LongSequence<T> {
    /// Raw sampled windows before blending, each `clip_len` rows.
    pub windows: Vec<Array2<T>>,
    pub starts: Vec<usize>,
    /// Blended, normalized pose track of exactly `total` frames.
    pub poses: Vec<Pose<T>>,
}

/// Seed of window `i`; window 0 uses `seed` itself.
pub fn window_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Generates `cond.nrows()` frames of motion for a `joints`-joint skeleton.
///
/// The first window is sampled freely. Every later window has its leading
/// `overlap` rows clamped to the trailing rows of its predecessor before the
/// first prediction and after each DDIM update. The overlap is then blended
/// with a linear ramp toward the newer window: rotations by slerp, root
/// translation linearly. Windows that run past the end reuse the final
/// conditioning row.
pub fn inpaint_long_sequence<T: Scalar, D: Denoiser<T> + ?Sized>(
    denoiser: &D,
    schedule: &NoiseSchedule<T>,
    cond: ArrayView2<'_, T>,
    joints: usize,
    cfg: &InpaintConfig,
    seed: u64,
) -> Result<LongSequence<T>> {
    let total = cond.nrows();
    let starts = cfg.window_starts(total)?;
    let steps = schedule.strided_steps(cfg.sampling_steps)?;
    let width = motion_width(joints);

    let mut windows: Vec<Array2<T>> = Vec::with_capacity(starts.len());
    for (i, &start) in starts.iter().enumerate() {
        let window_cond = Array2::from_shape_fn((cfg.clip_len, cond.ncols()), |(r, c)| {
            cond[((start + r).min(total - 1), c)]
        });
        let mut rng = ChaCha8Rng::seed_from_u64(window_seed(seed, i));
        let x = gaussian((cfg.clip_len, width), &mut rng);
        let sampled = match windows.last() {
            None => ddim_loop(denoiser, schedule, window_cond.view(), x, &steps, None)?,
            Some(prev) => {
                let tail = prev.slice(s![cfg.clip_len - cfg.overlap.., ..]);
                let known = KnownRows { values: tail };
                ddim_loop(denoiser, schedule, window_cond.view(), x, &steps, Some(known))?
            }
        };
        windows.push(sampled);
    }

    let mut poses: Vec<Pose<T>> = Vec::with_capacity(total + cfg.clip_len);
    for (i, w) in windows.iter().enumerate() {
        let wp = tensor_to_poses(w.view(), joints)?;
        if i == 0 {
            poses.extend(wp);
            continue;
        }
        let start = starts[i];
        for (k, new) in wp.iter().take(cfg.overlap).enumerate() {
            let weight = T::from_count(k + 1) / T::from_count(cfg.overlap + 1);
            let blended = poses[start + k].interpolate(new, weight);
            poses[start + k] = blended;
        }
        poses.extend(wp.into_iter().skip(cfg.overlap));
    }
    poses.truncate(total);
    Ok(LongSequence { windows, starts, poses })
}
