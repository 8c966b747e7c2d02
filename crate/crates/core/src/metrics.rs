//! Motion-level evaluation: beat consistency against audio onsets and
//! diversity across a set of generated motions.
//!
//! Both follow common conventions from prior gesture work rather than a fixed
//! reference implementation, so absolute values are only comparable between
//! runs that share `sigma` and `prominence`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kinematics::{central_difference_velocities, forward_kinematics, Pose, Skeleton};
use crate::{Error, Result, Scalar};

/// Kernel width and beat-detection threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct BeatConfig<T> {
    /// Gaussian kernel width in seconds.
    pub sigma: T,
    /// Minimum prominence of a speed minimum, in metres per second.
    pub prominence: T,
}

impl<T: Scalar> Default for BeatConfig<T> {
    fn default() -> Self {
        Self { sigma: T::lit(0.1), prominence: T::lit(0.05) }
    }
}

/// Audio beat onsets in seconds: non-negative and strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct BeatTrack<T>(Vec<T>);

impl<T: Scalar> BeatTrack<T> {
    pub fn new(times: Vec<T>) -> Result<Self> {
        if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < T::zero()) {
            return Err(Error::InvalidArgument(format!("beat time {t} is negative or not finite")));
        }
        if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(format!("beat times not strictly increasing at {}", w[1])));
        }
        Ok(Self(times))
    }

    pub fn times(&self) -> &[T] {
        &self.0
    }
}

/// Mean speed of the upper-body joints per frame.
pub fn upper_body_speed<T: Scalar>(motion: &[Pose<T>], skel: &Skeleton<T>, fps: T) -> Result<Vec<T>> {
    let positions = motion.iter().map(|p| forward_kinematics(skel, p)).collect::<Result<Vec<_>>>()?;
    let velocities = central_difference_velocities(&positions, fps)?;
    let upper = skel.upper_body();
    let n = T::from_count(upper.len());
    Ok(velocities.iter().map(|v| upper.iter().map(|&j| v[j].norm()).sum::<T>() / n).collect())
}

/// Indices of local minima of `signal` whose prominence reaches `threshold`.
///
/// A flat run counts as one minimum, reported at its midpoint (rounded down),
/// when both neighbouring samples are strictly higher; runs touching either
/// end are never minima. Prominence is the smaller of the two rises to the
/// highest sample reached before the signal dips below the minimum again (or
/// ends) on each side.
pub fn prominent_minima<T: Scalar>(signal: &[T], threshold: T) -> Vec<usize> {
    let n = signal.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        let v = signal[i];
        if signal[i - 1] <= v {
            i += 1;
            continue;
        }
        let mut end = i;
        while end + 1 < n && signal[end + 1] == v {
            end += 1;
        }
        if end + 1 < n && signal[end + 1] > v {
            let left = signal[..i].iter().rev().take_while(|&&s| s >= v).fold(v, |m, &s| m.max(s));
            let right = signal[end + 1..].iter().take_while(|&&s| s >= v).fold(v, |m, &s| m.max(s));
            if left.min(right) - v >= threshold {
                out.push((i + end) / 2);
            }
        }
        i = end + 1;
    }
    out
}

/// Times (frame index / fps) of prominent minima of upper-body speed.
pub fn kinematic_beats<T: Scalar>(motion: &[Pose<T>], skel: &Skeleton<T>, fps: T, prominence: T) -> Result<Vec<T>> {
    if motion.len() < 3 {
        return Err(Error::TrackTooShort { needed: 3, got: motion.len() });
    }
    let speed = upper_body_speed(motion, skel, fps)?;
    Ok(prominent_minima(&speed, prominence).into_iter().map(|i| T::from_count(i) / fps).collect())
}

/// Mean over audio beats of `exp(−d²/2σ²)`, where `d` is the distance to the
/// nearest kinematic beat; 0 when there are no kinematic beats.
pub fn beat_consistency<T: Scalar>(kinematic: &[T], audio: &BeatTrack<T>, sigma: T) -> Result<T> {
    if audio.0.is_empty() {
        return Err(Error::InvalidArgument("audio beat track is empty".into()));
    }
    if !(sigma > T::zero() && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    if kinematic.is_empty() {
        return Ok(T::zero());
    }
    let two_var = T::lit(2.0) * sigma * sigma;
    let total: T = audio
        .0
        .iter()
        .map(|&b| {
            let d2 = kinematic.iter().map(|&t| (b - t) * (b - t)).fold(T::infinity(), T::min);
            (-d2 / two_var).exp()
        })
        .sum();
    Ok(total / T::from_count(audio.0.len()))
}

fn rotation_track<T: Scalar>(motion: &[Pose<T>], upper: &[usize]) -> Vec<T> {
    motion
        .iter()
        .flat_map(|p| upper.iter().flat_map(move |&j| p.rotations[j].canonical().to_array()))
        .collect()
}

/// Mean pairwise Euclidean distance between the flattened upper-body rotation
/// tracks (quaternions with `w ≥ 0`) of equally long motions.
pub fn diversity<T: Scalar>(motions: &[Vec<Pose<T>>], skel: &Skeleton<T>) -> Result<T> {
    if motions.len() < 2 {
        return Err(Error::InvalidArgument(format!("diversity needs at least 2 motions, got {}", motions.len())));
    }
    let len = motions[0].len();
    for (i, m) in motions.iter().enumerate() {
        if m.len() != len {
            return Err(Error::InvalidArgument(format!("motion {i} has {} frames, motion 0 has {len}", m.len())));
        }
        if let Some(p) = m.iter().find(|p| p.joint_count() != skel.joint_count()) {
            return Err(Error::PoseSize { expected: skel.joint_count(), got: p.joint_count() });
        }
    }
    let tracks: Vec<Vec<T>> = motions.iter().map(|m| rotation_track(m, skel.upper_body())).collect();
    let pairs: Vec<(usize, usize)> =
        (0..tracks.len()).flat_map(|i| (i + 1..tracks.len()).map(move |j| (i, j))).collect();
    let distances: Vec<T> = pairs
        .par_iter()
        .map(|&(i, j)| tracks[i].iter().zip(&tracks[j]).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>().sqrt())
        .collect();
    Ok(distances.iter().copied().sum::<T>() / T::from_count(distances.len()))
}

/// Pairwise mean of a precomputed symmetric distance matrix; the reference
/// the diversity tests compare against.
#[cfg(test)]
#[allow(clippy::needless_range_loop)]
fn mean_upper_triangle(d: &[Vec<f64>]) -> f64 {
    let mut sum = 0.0;
    let mut count = 0;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            sum += d[i][j];
            count += 1;
        }
    }
    sum / count as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{UnitQuaternion, Vec3};

    fn arm() -> Skeleton<f64> {
        // root with a unit bone along x; both joints count as upper body
        Skeleton::chain(2, Vec3::new(1.0, 0.0, 0.0), vec![0, 1]).unwrap()
    }

    fn posed(angle: f64) -> Pose<f64> {
        Pose {
            rotations: vec![UnitQuaternion::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), angle), UnitQuaternion::identity()],
            root_translation: Vec3::zero(),
        }
    }

    #[test]
    fn minima_detection() {
        assert_eq!(prominent_minima(&[3.0, 1.0, 3.0], 0.5), vec![1]);
        assert_eq!(prominent_minima(&[3.0, 1.0, 3.0], 2.5), Vec::<usize>::new());
        // plateau midpoint
        assert_eq!(prominent_minima(&[3.0, 1.0, 1.0, 1.0, 3.0], 0.5), vec![2]);
        // monotone and flat signals have none
        assert!(prominent_minima(&[1.0, 2.0, 3.0], 0.0).is_empty());
        assert!(prominent_minima(&[2.0; 6], 0.0).is_empty());
        // prominence is limited by the lower side
        assert_eq!(prominent_minima(&[1.2, 1.0, 5.0], 0.3), Vec::<usize>::new());
        assert_eq!(prominent_minima(&[1.4, 1.0, 5.0], 0.3), vec![1]);
        // a shallow dip inside a larger valley
        assert_eq!(prominent_minima(&[5.0, 2.0, 2.1, 2.0, 0.0, 5.0], 0.5), vec![4]);
    }

    #[test]
    fn pauses_at_whole_seconds_are_beats() {
        // θ(t) = t − sin(2πt)/2π has θ'(t) = 1 − cos 2πt, zero at whole seconds
        let fps = 30.0;
        let tau = std::f64::consts::TAU;
        let motion: Vec<_> = (0..=90)
            .map(|i| {
                let t = i as f64 / fps;
                posed(t - (tau * t).sin() / tau)
            })
            .collect();
        let beats = kinematic_beats(&motion, &arm(), fps, 0.05).unwrap();
        assert_eq!(beats.len(), 2, "{beats:?}");
        for (b, want) in beats.iter().zip([1.0, 2.0]) {
            assert!((b - want).abs() <= 1.0 / fps + 1e-12, "{b} vs {want}");
        }
    }

    #[test]
    fn constant_velocity_and_static_motion_have_no_beats() {
        let moving: Vec<_> = (0..60).map(|i| posed(0.02 * i as f64)).collect();
        assert!(kinematic_beats(&moving, &arm(), 30.0, 0.05).unwrap().is_empty());
        let still = vec![posed(0.3); 60];
        assert!(kinematic_beats(&still, &arm(), 30.0, 0.05).unwrap().is_empty());
        assert!(matches!(kinematic_beats(&still[..2], &arm(), 30.0, 0.05), Err(Error::TrackTooShort { .. })));
    }

    #[test]
    fn beat_consistency_cases() {
        let audio = BeatTrack::new(vec![0.5, 1.0, 1.5]).unwrap();
        assert_eq!(beat_consistency(&[0.5, 1.0, 1.5], &audio, 0.1).unwrap(), 1.0);
        assert_eq!(beat_consistency(&[], &audio, 0.1).unwrap(), 0.0);
        let one = BeatTrack::new(vec![1.0]).unwrap();
        let bc = beat_consistency(&[1.1], &one, 0.1).unwrap();
        assert!((bc - (-0.5f64).exp()).abs() < 1e-12);
        assert!(beat_consistency(&[1.0], &BeatTrack::new(vec![]).unwrap(), 0.1).is_err());
        assert!(beat_consistency(&[1.0], &one, 0.0).is_err());
    }

    #[test]
    fn beat_track_validation() {
        assert!(BeatTrack::new(vec![0.0, 1.0]).is_ok());
        assert!(BeatTrack::new(vec![1.0, 1.0]).is_err());
        assert!(BeatTrack::new(vec![-0.1]).is_err());
        assert!(BeatTrack::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn diversity_of_known_distances() {
        let skel = Skeleton::chain(1, Vec3::zero(), vec![0]).unwrap();
        let z = Vec3::new(0.0, 0.0, 1.0);
        let m = |angle: f64| vec![Pose { rotations: vec![UnitQuaternion::from_axis_angle(z, angle)], root_translation: Vec3::zero() }];
        let a = m(0.0);
        assert_eq!(diversity(&[a.clone(), a.clone()], &skel).unwrap(), 0.0);

        let angles = [0.0, 0.7, 1.9];
        let motions: Vec<_> = angles.iter().map(|&x| m(x)).collect();
        // quaternion of a z-rotation by θ is (cos θ/2, 0, 0, sin θ/2)
        let chord = |x: f64, y: f64| ((x / 2.0).cos() - (y / 2.0).cos()).hypot((x / 2.0).sin() - (y / 2.0).sin());
        let d: Vec<Vec<f64>> = angles.iter().map(|&x| angles.iter().map(|&y| chord(x, y)).collect()).collect();
        let got = diversity(&motions, &skel).unwrap();
        assert!((got - mean_upper_triangle(&d)).abs() < 1e-12);
        assert!((diversity(&motions[..2], &skel).unwrap() - d[0][1]).abs() < 1e-12);
    }

    #[test]
    fn diversity_sign_canonicalizes() {
        let skel = Skeleton::chain(1, Vec3::zero(), vec![0]).unwrap();
        let q = UnitQuaternion::from_axis_angle(Vec3::new(1.0, 0.0, 0.0), 0.4);
        let a = vec![Pose { rotations: vec![q], root_translation: Vec3::zero() }];
        let b = vec![Pose { rotations: vec![-q], root_translation: Vec3::zero() }];
        assert!(diversity(&[a, b], &skel).unwrap() < 1e-15);
    }

    #[test]
    fn diversity_errors() {
        let skel = Skeleton::<f64>::chain(1, Vec3::zero(), vec![0]).unwrap();
        let one = vec![Pose::identity(1)];
        assert!(diversity(std::slice::from_ref(&one), &skel).is_err());
        assert!(diversity(&[one.clone(), vec![Pose::identity(1); 2]], &skel).is_err());
        assert!(diversity(&[one.clone(), vec![Pose::identity(2)]], &skel).is_err());
    }
}
