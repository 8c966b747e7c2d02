//! Unit quaternions in `(w, x, y, z)` order.

use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use super::Vec3;
use crate::Scalar;

/// Antipodal inputs within this distance of `dot = -1` fall back to normalized lerp.
const ANTIPODAL_EPS: f64 = 1e-6;

/// Rotation stored as a unit quaternion. Every constructor normalizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[T; 4]", into = "[T; 4]")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct UnitQuaternion<T> {
    w: T,
    x: T,
    y: T,
    z: T,
}

impl<T: Scalar> UnitQuaternion<T> {
    pub fn identity() -> Self {
        Self { w: T::one(), x: T::zero(), y: T::zero(), z: T::zero() }
    }

    /// Normalizes `(w, x, y, z)`. Returns `None` for a zero or non-finite input.
    /// Inputs already unit to within a few ulps are kept bit-for-bit, so
    /// normalization is idempotent.
    pub fn try_new(w: T, x: T, y: T, z: T) -> Option<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n <= T::zero() {
            return None;
        }
        if (n - T::one()).abs() <= T::lit(4.0) * T::epsilon() {
            return Some(Self { w, x, y, z });
        }
        Some(Self { w: w / n, x: x / n, y: y / n, z: z / n })
    }

    /// Like [`try_new`](Self::try_new) but panics on a degenerate input.
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Self::try_new(w, x, y, z).expect("quaternion must be finite and non-zero")
    }

    /// Rotation of `angle` radians about `axis`. A zero axis yields the identity.
    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Self {
        let n = axis.norm();
        if n <= T::zero() {
            return Self::identity();
        }
        let half = angle / T::lit(2.0);
        let s = half.sin() / n;
        Self::new(half.cos(), axis.x * s, axis.y * s, axis.z * s)
    }

    /// Rotation vector (axis scaled by angle in radians).
    pub fn from_rotation_vector(v: Vec3<T>) -> Self {
        Self::from_axis_angle(v, v.norm())
    }

    /// Inverse of [`from_rotation_vector`](Self::from_rotation_vector), on the
    /// shorter arc (angle in `[0, π]`).
    pub fn to_rotation_vector(self) -> Vec3<T> {
        let q = self.canonical();
        let s = (q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
        if s <= T::epsilon() {
            // small-angle limit: v ≈ 2·(x, y, z)
            return Vec3::new(q.x, q.y, q.z).scale(T::lit(2.0));
        }
        let angle = T::lit(2.0) * s.atan2(q.w);
        Vec3::new(q.x, q.y, q.z).scale(angle / s)
    }

    #[inline]
    pub fn w(&self) -> T {
        self.w
    }
    #[inline]
    pub fn x(&self) -> T {
        self.x
    }
    #[inline]
    pub fn y(&self) -> T {
        self.y
    }
    #[inline]
    pub fn z(&self) -> T {
        self.z
    }

    pub fn to_array(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// 4-D dot product.
    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn conjugate(self) -> Self {
        Self { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// Same rotation with `w >= 0`.
    pub fn canonical(self) -> Self {
        if self.w < T::zero() {
            -self
        } else {
            self
        }
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    /// Re-projects onto the unit sphere; used after long products accumulate drift.
    pub fn renormalized(self) -> Self {
        Self::try_new(self.w, self.x, self.y, self.z).unwrap_or_else(Self::identity)
    }

    /// Rotates `v` by this quaternion.
    #[inline]
    pub fn rotate(self, v: Vec3<T>) -> Vec3<T> {
        // v' = v + 2w(u × v) + 2u × (u × v)
        let u = Vec3::new(self.x, self.y, self.z);
        let two = T::lit(2.0);
        let uv = u.cross(v);
        let uuv = u.cross(uv);
        v + uv.scale(two * self.w) + uuv.scale(two)
    }

    /// Row-major 3×3 rotation matrix.
    pub fn to_matrix(self) -> [[T; 3]; 3] {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        let one = T::one();
        let two = T::lit(2.0);
        [
            [one - two * (y * y + z * z), two * (x * y - w * z), two * (x * z + w * y)],
            [two * (x * y + w * z), one - two * (x * x + z * z), two * (y * z - w * x)],
            [two * (x * z - w * y), two * (y * z + w * x), one - two * (x * x + y * y)],
        ]
    }

    /// Geodesic angle between the two rotations, `2·arccos(|q1·q2|)`, in `[0, π]`.
    ///
    /// Evaluated as `4·atan2(‖q1 − q2‖, ‖q1 + q2‖)` after flipping `q2` onto the
    /// hemisphere of `q1`. The two are equal for unit quaternions, but arccos
    /// loses half the significant digits near 1, so nearly identical rotations
    /// would otherwise report distances around 1e-8 instead of ~1e-16.
    pub fn angular_distance(self, o: Self) -> T {
        let o = if self.dot(o) < T::zero() { -o } else { o };
        let a = self.to_array();
        let b = o.to_array();
        let (mut diff, mut sum) = (T::zero(), T::zero());
        for i in 0..4 {
            diff += (a[i] - b[i]) * (a[i] - b[i]);
            sum += (a[i] + b[i]) * (a[i] + b[i]);
        }
        T::lit(4.0) * diff.sqrt().atan2(sum.sqrt())
    }

    /// Spherical linear interpolation along the shorter arc.
    pub fn slerp(self, o: Self, t: T) -> Self {
        let mut other = o;
        let mut d = self.dot(o);
        if d < T::zero() {
            other = -o;
            d = -d;
        }
        if d > T::one() - T::lit(ANTIPODAL_EPS) {
            return self.nlerp_raw(other, t);
        }
        let theta = d.acos();
        let s = theta.sin();
        let a = ((T::one() - t) * theta).sin() / s;
        let b = (t * theta).sin() / s;
        Self::try_new(
            a * self.w + b * other.w,
            a * self.x + b * other.x,
            a * self.y + b * other.y,
            a * self.z + b * other.z,
        )
        .unwrap_or(self)
    }

    /// Normalized linear interpolation; falls back to `self` when the blend
    /// passes through the origin (exactly antipodal inputs at `t = 0.5`).
    fn nlerp_raw(self, o: Self, t: T) -> Self {
        let a = T::one() - t;
        Self::try_new(
            a * self.w + t * o.w,
            a * self.x + t * o.x,
            a * self.y + t * o.y,
            a * self.z + t * o.z,
        )
        .unwrap_or(self)
    }

    pub fn cast<U: Scalar>(self) -> UnitQuaternion<U> {
        UnitQuaternion {
            w: U::lit(self.w.to_f64_lossy()),
            x: U::lit(self.x.to_f64_lossy()),
            y: U::lit(self.y.to_f64_lossy()),
            z: U::lit(self.z.to_f64_lossy()),
        }
    }
}

impl<T: Scalar> Default for UnitQuaternion<T> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<T: Scalar> Neg for UnitQuaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }
}

impl<T: Scalar> Mul for UnitQuaternion<T> {
    type Output = Self;
    /// Hamilton product; `(a * b).rotate(v) == a.rotate(b.rotate(v))`.
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        }
    }
}

impl<T: Scalar> From<[T; 4]> for UnitQuaternion<T> {
    /// Normalizing conversion; a degenerate input maps to the identity.
    fn from([w, x, y, z]: [T; 4]) -> Self {
        Self::try_new(w, x, y, z).unwrap_or_else(Self::identity)
    }
}

impl<T: Scalar> From<UnitQuaternion<T>> for [T; 4] {
    fn from(q: UnitQuaternion<T>) -> Self {
        q.to_array()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    type Q = UnitQuaternion<f64>;

    fn z_axis() -> Vec3<f64> {
        Vec3::new(0.0, 0.0, 1.0)
    }

    #[test]
    fn distance_identity_and_double_cover() {
        let q = Q::new(0.3, -0.2, 0.9, 0.1);
        assert!(q.angular_distance(q).abs() < 1e-12);
        assert!(q.angular_distance(-q).abs() < 1e-12);
    }

    #[test]
    fn distance_quarter_turn() {
        let r = Q::from_axis_angle(z_axis(), FRAC_PI_2);
        assert!((r.w() - FRAC_PI_4.cos()).abs() < 1e-15);
        assert!((Q::identity().angular_distance(r) - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn distance_is_bounded_by_pi() {
        let r = Q::from_axis_angle(z_axis(), PI);
        let d = Q::identity().angular_distance(r);
        assert!((d - PI).abs() < 1e-7 && d <= PI);
    }

    #[test]
    fn slerp_endpoints_and_midpoint() {
        let a = Q::new(0.5, 0.5, -0.5, 0.5);
        let b = Q::from_axis_angle(Vec3::new(1.0, 2.0, 3.0), 1.1);
        assert!(a.slerp(b, 0.0).angular_distance(a) < 1e-9);
        assert!(a.slerp(b, 1.0).angular_distance(b) < 1e-7);
        assert!(a.slerp(a, 0.5).angular_distance(a) < 1e-9);

        let mid = Q::identity().slerp(Q::from_axis_angle(z_axis(), FRAC_PI_2), 0.5);
        let expected = Q::from_axis_angle(z_axis(), FRAC_PI_4);
        assert!(mid.angular_distance(expected) < 1e-9);
        assert!((mid.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slerp_takes_shorter_arc() {
        let a = Q::identity();
        let b = -Q::from_axis_angle(z_axis(), 0.4);
        let m = a.slerp(b, 0.5);
        assert!(m.angular_distance(Q::from_axis_angle(z_axis(), 0.2)) < 1e-9);
    }

    #[test]
    fn slerp_antipodal_falls_back() {
        let a = Q::identity();
        let m = a.slerp(-a, 0.3);
        assert!((m.norm() - 1.0).abs() < 1e-12);
        assert!(m.angular_distance(a) < 1e-9);
    }

    #[test]
    fn rotate_matches_matrix() {
        let q = Q::from_axis_angle(Vec3::new(0.2, -1.0, 0.7), 2.3);
        let v = Vec3::new(0.3, 1.2, -0.8);
        let m = q.to_matrix();
        let mv = Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        );
        assert!(q.rotate(v).distance(mv) < 1e-12);
    }

    #[test]
    fn product_composes_rotations() {
        let a = Q::from_axis_angle(Vec3::new(1.0, 0.0, 0.0), 0.7);
        let b = Q::from_axis_angle(Vec3::new(0.0, 1.0, 1.0), -1.3);
        let v = Vec3::new(0.1, 0.2, 0.3);
        assert!((a * b).rotate(v).distance(a.rotate(b.rotate(v))) < 1e-12);
    }

    #[test]
    fn rotation_vector_round_trip() {
        let v = Vec3::new(0.4, -0.9, 1.1);
        let back = Q::from_rotation_vector(v).to_rotation_vector();
        assert!(back.distance(v) < 1e-12);
        assert_eq!(Q::from_rotation_vector(Vec3::zero()), Q::identity());
    }

    #[test]
    fn degenerate_input_rejected() {
        assert!(Q::try_new(0.0, 0.0, 0.0, 0.0).is_none());
        assert!(Q::try_new(f64::NAN, 0.0, 0.0, 1.0).is_none());
    }

    #[test]
    fn works_in_single_precision() {
        let r = UnitQuaternion::<f32>::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), std::f32::consts::FRAC_PI_2);
        let d = UnitQuaternion::<f32>::identity().angular_distance(r);
        assert!((d - std::f32::consts::FRAC_PI_2).abs() < 1e-5);
    }
}
