//! Quaternion algebra, forward kinematics and finite-difference velocities.

mod quat;
mod skeleton;
mod vec3;

pub use quat::UnitQuaternion;
pub use skeleton::{Skeleton, SkeletonRepr};
pub use vec3::Vec3;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Per-joint local rotations (the root entry is the global orientation) plus
/// root translation in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Pose<T> {
    pub rotations: Vec<UnitQuaternion<T>>,
    pub root_translation: Vec3<T>,
}

impl<T: Scalar> Pose<T> {
    pub fn identity(joint_count: usize) -> Self {
        Self { rotations: vec![UnitQuaternion::identity(); joint_count], root_translation: Vec3::zero() }
    }

    pub fn joint_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn check(&self, skel: &Skeleton<T>) -> Result<()> {
        if self.rotations.len() != skel.joint_count() {
            return Err(Error::PoseSize { expected: skel.joint_count(), got: self.rotations.len() });
        }
        Ok(())
    }

    /// Per-joint slerp of rotations and lerp of the root translation.
    pub fn interpolate(&self, other: &Self, t: T) -> Self {
        Self {
            rotations: self
                .rotations
                .iter()
                .zip(&other.rotations)
                .map(|(a, b)| a.slerp(*b, t))
                .collect(),
            root_translation: self.root_translation.lerp(other.root_translation, t),
        }
    }
}

/// One 3-vector per joint: positions (meters) or velocities (m/s).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct JointVectors<T>(pub Vec<Vec3<T>>);

pub type PositionSet<T> = JointVectors<T>;
pub type VelocitySet<T> = JointVectors<T>;

impl<T: Scalar> JointVectors<T> {
    pub fn zeros(joint_count: usize) -> Self {
        Self(vec![Vec3::zero(); joint_count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Vec3<T>] {
        &self.0
    }

    /// Frobenius norm of the J×3 difference matrix.
    pub fn frobenius_distance(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (*a - *b).norm_squared())
            .sum::<T>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl<T> std::ops::Index<usize> for JointVectors<T> {
    type Output = Vec3<T>;
    fn index(&self, i: usize) -> &Vec3<T> {
        &self.0[i]
    }
}

/// World-space joint positions of `pose`.
pub fn forward_kinematics<T: Scalar>(skel: &Skeleton<T>, pose: &Pose<T>) -> Result<PositionSet<T>> {
    pose.check(skel)?;
    Ok(fk_with_root(skel, &pose.rotations, pose.rotations[skel.root()], pose.root_translation))
}

/// Positions with the root orientation reset to identity and the root placed
/// at the origin, i.e. the pose expressed in its own root frame.
pub fn root_relative_positions<T: Scalar>(skel: &Skeleton<T>, pose: &Pose<T>) -> Result<PositionSet<T>> {
    pose.check(skel)?;
    Ok(fk_with_root(skel, &pose.rotations, UnitQuaternion::identity(), Vec3::zero()))
}

fn fk_with_root<T: Scalar>(
    skel: &Skeleton<T>,
    rotations: &[UnitQuaternion<T>],
    root_rotation: UnitQuaternion<T>,
    root_position: Vec3<T>,
) -> PositionSet<T> {
    let j = skel.joint_count();
    let mut world_rot = vec![UnitQuaternion::identity(); j];
    let mut pos = vec![Vec3::zero(); j];
    let offsets = skel.rest_offsets();
    for &joint in skel.topological_order() {
        match skel.parent(joint) {
            None => {
                world_rot[joint] = root_rotation;
                pos[joint] = root_position;
            }
            Some(p) => {
                pos[joint] = pos[p] + world_rot[p].rotate(offsets[joint]);
                world_rot[joint] = world_rot[p] * rotations[joint];
            }
        }
    }
    JointVectors(pos)
}

/// Per-frame joint velocities. Interior frames use central differences; the
/// first and last frames use forward and backward differences so the track
/// keeps its length.
pub fn central_difference_velocities<T: Scalar>(
    track: &[PositionSet<T>],
    fps: T,
) -> Result<Vec<VelocitySet<T>>> {
    if track.len() < 2 {
        return Err(Error::TrackTooShort { needed: 2, got: track.len() });
    }
    if !(fps > T::zero()) || !fps.is_finite() {
        return Err(Error::InvalidArgument(format!("fps must be positive, got {fps}")));
    }
    let j = track[0].len();
    if let Some(i) = track.iter().position(|p| p.len() != j) {
        return Err(Error::InvalidArgument(format!("frame {i} has a different joint count")));
    }
    let n = track.len();
    let diff = |a: &PositionSet<T>, b: &PositionSet<T>, scale: T| {
        JointVectors(a.0.iter().zip(&b.0).map(|(pa, pb)| (*pa - *pb).scale(scale)).collect())
    };
    let half_fps = fps / T::lit(2.0);
    Ok((0..n)
        .map(|i| match i {
            0 => diff(&track[1], &track[0], fps),
            i if i == n - 1 => diff(&track[n - 1], &track[n - 2], fps),
            i => diff(&track[i + 1], &track[i - 1], half_fps),
        })
        .collect())
}
