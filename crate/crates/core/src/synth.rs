//! Deterministic synthetic skeletons and gesture clips for fixtures and
//! benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io::{Clip, MotionDocument};
use crate::kinematics::{Pose, Skeleton, UnitQuaternion, Vec3};
use crate::{Result, Scalar};

/// 20-joint humanoid: pelvis root, spine/neck/head, two arms, two legs.
/// Joints 1..=13 (spine, neck, head, arms) form the upper body.
pub fn humanoid<T: Scalar>() -> Skeleton<T> {
    let v = |x: f64, y: f64, z: f64| Vec3::new(T::lit(x), T::lit(y), T::lit(z));
    let joints: [(Option<usize>, Vec3<T>); 20] = [
        (None, v(0.0, 0.0, 0.0)),          // 0 pelvis
        (Some(0), v(0.0, 0.10, 0.0)),      // 1 spine1
        (Some(1), v(0.0, 0.13, 0.0)),      // 2 spine2
        (Some(2), v(0.0, 0.13, 0.0)),      // 3 spine3
        (Some(3), v(0.0, 0.12, 0.0)),      // 4 neck
        (Some(4), v(0.0, 0.10, 0.02)),     // 5 head
        (Some(3), v(0.07, 0.10, 0.0)),     // 6 l_collar
        (Some(6), v(0.12, 0.0, 0.0)),      // 7 l_shoulder
        (Some(7), v(0.26, 0.0, 0.0)),      // 8 l_elbow
        (Some(8), v(0.25, 0.0, 0.0)),      // 9 l_wrist
        (Some(3), v(-0.07, 0.10, 0.0)),    // 10 r_collar
        (Some(10), v(-0.12, 0.0, 0.0)),    // 11 r_shoulder
        (Some(11), v(-0.26, 0.0, 0.0)),    // 12 r_elbow
        (Some(12), v(-0.25, 0.0, 0.0)),    // 13 r_wrist
        (Some(0), v(0.09, -0.08, 0.0)),    // 14 l_hip
        (Some(14), v(0.0, -0.40, 0.0)),    // 15 l_knee
        (Some(15), v(0.0, -0.40, 0.0)),    // 16 l_ankle
        (Some(0), v(-0.09, -0.08, 0.0)),   // 17 r_hip
        (Some(17), v(0.0, -0.40, 0.0)),    // 18 r_knee
        (Some(18), v(0.0, -0.40, 0.0)),    // 19 r_ankle
    ];
    let names = [
        "pelvis", "spine1", "spine2", "spine3", "neck", "head", "l_collar", "l_shoulder", "l_elbow",
        "l_wrist", "r_collar", "r_shoulder", "r_elbow", "r_wrist", "l_hip", "l_knee", "l_ankle", "r_hip",
        "r_knee", "r_ankle",
    ];
    Skeleton::new(
        joints.iter().map(|j| j.0).collect(),
        joints.iter().map(|j| j.1).collect(),
        (1..=13).collect(),
    )
    .and_then(|s| s.with_names(names.iter().map(|n| n.to_string()).collect()))
    .expect("humanoid skeleton is valid")
}

/// Sinusoidal joint oscillators describing one smooth gesture style.
#[derive(Debug, Clone)]
pub struct GestureStyle {
    /// Per joint: (axis, amplitude rad, frequency Hz, phase rad).
    oscillators: Vec<(Vec3<f64>, f64, f64, f64)>,
    sway: (f64, f64),
}

impl GestureStyle {
    /// Random style for `joints` joints. Arm joints swing harder than the spine.
    pub fn random(joints: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let oscillators = (0..joints)
            .map(|j| {
                let axis = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let amp = if (6..=13).contains(&j) { rng.random_range(0.2..0.6) } else { rng.random_range(0.02..0.12) };
                (axis, amp, rng.random_range(0.3..1.2), rng.random_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        Self { oscillators, sway: (rng.random_range(0.0..0.03), rng.random_range(0.1..0.4)) }
    }

    /// Pose at time `t` seconds.
    pub fn pose<T: Scalar>(&self, t: f64) -> Pose<T> {
        let rotations = self
            .oscillators
            .iter()
            .map(|(axis, amp, freq, phase)| {
                let angle = amp * (std::f64::consts::TAU * freq * t + phase).sin();
                let q = UnitQuaternion::<f64>::from_axis_angle(*axis, angle);
                q.cast()
            })
            .collect();
        let sway = self.sway.0 * (std::f64::consts::TAU * self.sway.1 * t).sin();
        Pose { rotations, root_translation: Vec3::new(T::lit(sway), T::lit(0.9), T::zero()) }
    }

    /// `frames` poses sampled at `fps` starting at `start` seconds.
    pub fn sample<T: Scalar>(&self, start: f64, frames: usize, fps: f64) -> Vec<Pose<T>> {
        (0..frames).map(|i| self.pose(start + i as f64 / fps)).collect()
    }
}

/// `clips` clips of `frames` frames at 30 fps, each with its own style.
pub fn gesture_dataset<T: Scalar>(clips: usize, frames: usize, seed: u64) -> Result<MotionDocument<T>> {
    let skel = humanoid::<T>();
    let j = skel.joint_count();
    let clips = (0..clips)
        .map(|c| {
            let style = GestureStyle::random(j, seed.wrapping_mul(1_000_003).wrapping_add(c as u64));
            Clip::new(format!("clip_{c:04}"), style.sample(0.0, frames, 30.0))
        })
        .collect();
    MotionDocument::new(T::lit(30.0), skel, clips)
}
