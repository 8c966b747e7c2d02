use serde::{Deserialize, Serialize};

use super::Vec3;
use crate::{Error, Result, Scalar};

/// Joint hierarchy with rest-pose bone offsets and the upper-body joint subset
/// used for similarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SkeletonRepr<T>", into = "SkeletonRepr<T>")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Skeleton<T> {
    parents: Vec<Option<usize>>,
    rest_offsets: Vec<Vec3<T>>,
    upper_body: Vec<usize>,
    names: Option<Vec<String>>,
    root: usize,
    /// Parents always precede children.
    order: Vec<usize>,
}

/// On-disk layout; root parent is `-1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct SkeletonRepr<T> {
    pub parents: Vec<i64>,
    pub rest_offsets: Vec<Vec3<T>>,
    pub upper_body: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl<T: Scalar> Skeleton<T> {
    /// Validates the hierarchy: one root, no cycles, in-range parents, non-empty
    /// upper-body set.
    pub fn new(
        parents: Vec<Option<usize>>,
        rest_offsets: Vec<Vec3<T>>,
        upper_body: Vec<usize>,
    ) -> Result<Self> {
        let j = parents.len();
        if j == 0 {
            return Err(Error::Skeleton("joint_count must be positive".into()));
        }
        if rest_offsets.len() != j {
            return Err(Error::Skeleton(format!(
                "{} rest offsets for {j} joints",
                rest_offsets.len()
            )));
        }
        if let Some((i, _)) = rest_offsets.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Skeleton(format!("rest offset of joint {i} is not finite")));
        }
        let roots: Vec<usize> = (0..j).filter(|&i| parents[i].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Skeleton(format!("expected exactly one root, found {}", roots.len())));
        }
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= j {
                    return Err(Error::Skeleton(format!("joint {i} has out-of-range parent {p}")));
                }
                if p == i {
                    return Err(Error::Skeleton(format!("joint {i} is its own parent")));
                }
            }
        }

        let mut children = vec![Vec::new(); j];
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(i);
            }
        }
        let mut order = Vec::with_capacity(j);
        let mut stack = vec![roots[0]];
        while let Some(n) = stack.pop() {
            order.push(n);
            stack.extend(children[n].iter().rev().copied());
        }
        if order.len() != j {
            return Err(Error::Skeleton("parent links contain a cycle".into()));
        }

        let mut upper = upper_body;
        upper.sort_unstable();
        upper.dedup();
        if upper.is_empty() {
            return Err(Error::Skeleton("upper-body joint set is empty".into()));
        }
        if let Some(&bad) = upper.iter().find(|&&u| u >= j) {
            return Err(Error::Skeleton(format!("upper-body joint {bad} out of range")));
        }

        Ok(Self { parents, rest_offsets, upper_body: upper, names: None, root: roots[0], order })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.joint_count() {
            return Err(Error::Skeleton(format!(
                "{} joint names for {} joints",
                names.len(),
                self.joint_count()
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Simple chain `0 ← 1 ← … ← n-1` with identical offsets; handy for fixtures.
    pub fn chain(joint_count: usize, offset: Vec3<T>, upper_body: Vec<usize>) -> Result<Self> {
        let parents = (0..joint_count).map(|i| i.checked_sub(1)).collect();
        Self::new(parents, vec![offset; joint_count], upper_body)
    }

    #[inline]
    pub fn joint_count(&self) -> usize {
        self.parents.len()
    }

    #[inline]
    pub fn parent(&self, joint: usize) -> Option<usize> {
        self.parents[joint]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parents
    }

    pub fn rest_offsets(&self) -> &[Vec3<T>] {
        &self.rest_offsets
    }

    /// Sorted, deduplicated.
    pub fn upper_body(&self) -> &[usize] {
        &self.upper_body
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    #[inline]
    pub fn root(&self) -> usize {
        self.root
    }

    /// Joint indices ordered so that every parent precedes its children.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// Mean rest length of the bones ending in an upper-body joint (root excluded).
    pub fn mean_upper_bone_length(&self) -> T {
        let lens: Vec<T> = self
            .upper_body
            .iter()
            .filter(|&&j| j != self.root)
            .map(|&j| self.rest_offsets[j].norm())
            .collect();
        if lens.is_empty() {
            return T::zero();
        }
        lens.iter().copied().sum::<T>() / T::from_count(lens.len())
    }
}

impl<T: Scalar> TryFrom<SkeletonRepr<T>> for Skeleton<T> {
    type Error = Error;

    fn try_from(r: SkeletonRepr<T>) -> Result<Self> {
        let parents = r
            .parents
            .iter()
            .enumerate()
            .map(|(i, &p)| match p {
                -1 => Ok(None),
                p if p >= 0 => Ok(Some(p as usize)),
                p => Err(Error::Skeleton(format!("joint {i} has invalid parent {p}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let skel = Skeleton::new(parents, r.rest_offsets, r.upper_body)?;
        match r.names {
            Some(n) => skel.with_names(n),
            None => Ok(skel),
        }
    }
}

impl<T: Scalar> From<Skeleton<T>> for SkeletonRepr<T> {
    fn from(s: Skeleton<T>) -> Self {
        SkeletonRepr {
            parents: s.parents.iter().map(|p| p.map_or(-1, |p| p as i64)).collect(),
            rest_offsets: s.rest_offsets,
            upper_body: s.upper_body,
            names: s.names,
        }
    }
}
