//! Reference denoiser backend: an affine noise predictor stored as plain
//! matrices.

use ndarray::{Array1, Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use super::conditioning::rows_to_array;
use super::inpaint::motion_width;
use super::sampler::Denoiser;
use super::Projections;
use crate::io::FORMAT_VERSION;
use crate::kinematics::Skeleton;
use crate::{Error, Result, Scalar};

/// `ε̂ = x·W_x + F·W_c + b`, independent of the step index.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearDenoiser<T> {
    pub weights_x: Array2<T>,
    pub weights_c: Array2<T>,
    pub bias: Array1<T>,
}

impl<T: Scalar> LinearDenoiser<T> {
    pub fn new(weights_x: Array2<T>, weights_c: Array2<T>, bias: Array1<T>) -> Result<Self> {
        let d = weights_x.nrows();
        if weights_x.ncols() != d {
            return Err(Error::Dimension {
                stream: "weights_x".into(),
                detail: format!("{:?} is not square", weights_x.dim()),
            });
        }
        if weights_c.ncols() != d {
            return Err(Error::Dimension {
                stream: "weights_c".into(),
                detail: format!("{} columns, expected {d}", weights_c.ncols()),
            });
        }
        if bias.len() != d {
            return Err(Error::Dimension { stream: "bias".into(), detail: format!("length {}, expected {d}", bias.len()) });
        }
        Ok(Self { weights_x, weights_c, bias })
    }

    pub fn motion_dim(&self) -> usize {
        self.weights_x.nrows()
    }

    pub fn cond_dim(&self) -> usize {
        self.weights_c.nrows()
    }
}

impl<T: Scalar> Denoiser<T> for LinearDenoiser<T> {
    fn predict_noise(&self, x: ArrayView2<'_, T>, _step: usize, cond: ArrayView2<'_, T>) -> Array2<T> {
        let mut out = x.dot(&self.weights_x);
        out += &cond.dot(&self.weights_c);
        out += &self.bias;
        out
    }
}

/// On-disk reference model: the skeleton the motion rows refer to, the
/// per-stream projections and the affine denoiser, all as row-major lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"), deny_unknown_fields)]
pub struct ReferenceModel<T> {
    pub format_version: u32,
    pub skeleton: Skeleton<T>,
    pub projections: ProjectionRows<T>,
    pub weights_x: Vec<Vec<T>>,
    pub weights_c: Vec<Vec<T>>,
    pub bias: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"), deny_unknown_fields)]
pub struct ProjectionRows<T> {
    pub mel: Vec<Vec<T>>,
    pub hubert: Vec<Vec<T>>,
    pub llm: Vec<Vec<T>>,
}

fn to_rows<T: Scalar>(a: &Array2<T>) -> Vec<Vec<T>> {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

impl<T: Scalar> ReferenceModel<T> {
    pub fn from_parts(skeleton: Skeleton<T>, projections: &Projections<T>, denoiser: &LinearDenoiser<T>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            skeleton,
            projections: ProjectionRows {
                mel: to_rows(&projections.mel),
                hubert: to_rows(&projections.hubert),
                llm: to_rows(&projections.llm),
            },
            weights_x: to_rows(&denoiser.weights_x),
            weights_c: to_rows(&denoiser.weights_c),
            bias: denoiser.bias.to_vec(),
        }
    }

    /// Checks the version and every dimension, returning the usable parts.
    pub fn into_parts(self) -> Result<(Skeleton<T>, Projections<T>, LinearDenoiser<T>)> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Version { expected: FORMAT_VERSION, found: self.format_version });
        }
        let denoiser = LinearDenoiser::new(
            rows_to_array("weights_x", &self.weights_x)?,
            rows_to_array("weights_c", &self.weights_c)?,
            Array1::from(self.bias),
        )?;
        let expected = motion_width(self.skeleton.joint_count());
        if denoiser.motion_dim() != expected {
            return Err(Error::Dimension {
                stream: "weights_x".into(),
                detail: format!(
                    "motion width {} but the skeleton has {} joints (width {expected})",
                    denoiser.motion_dim(),
                    self.skeleton.joint_count()
                ),
            });
        }
        let projections = Projections {
            mel: rows_to_array("mel projection", &self.projections.mel)?,
            hubert: rows_to_array("hubert projection", &self.projections.hubert)?,
            llm: rows_to_array("llm projection", &self.projections.llm)?,
        };
        for (name, p) in [("mel", &projections.mel), ("hubert", &projections.hubert), ("llm", &projections.llm)] {
            if p.ncols() != denoiser.cond_dim() {
                return Err(Error::Dimension {
                    stream: name.into(),
                    detail: format!("projection width {} but weights_c has {} rows", p.ncols(), denoiser.cond_dim()),
                });
            }
        }
        Ok((self.skeleton, projections, denoiser))
    }
}
