use ndarray::{s, Array2, ArrayView2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::NoiseSchedule;
use crate::{Error, Result, Scalar};

/// Noise-prediction function `ε̂ = f(x_k, k, F)`.
///
/// `x_k` is `T×d`, `k` is the 1-based diffusion step and `F` is the `T×d_c`
/// conditioning. The output must have the shape of `x_k` and be a pure
/// function of the inputs.
pub trait Denoiser<T>: Sync {
    fn predict_noise(&self, x: ArrayView2<'_, T>, step: usize, cond: ArrayView2<'_, T>) -> Array2<T>;
}

impl<T, F> Denoiser<T> for F
where
    F: Fn(ArrayView2<'_, T>, usize, ArrayView2<'_, T>) -> Array2<T> + Sync,
{
    fn predict_noise(&self, x: ArrayView2<'_, T>, step: usize, cond: ArrayView2<'_, T>) -> Array2<T> {
        self(x, step, cond)
    }
}

fn predict<T: Scalar, D: Denoiser<T> + ?Sized>(
    denoiser: &D,
    x: ArrayView2<'_, T>,
    step: usize,
    cond: ArrayView2<'_, T>,
) -> Result<Array2<T>> {
    let eps = denoiser.predict_noise(x, step, cond);
    if eps.dim() != x.dim() {
        return Err(Error::Dimension {
            stream: "denoiser output".into(),
            detail: format!("{:?} for input {:?}", eps.dim(), x.dim()),
        });
    }
    Ok(eps)
}

/// Standard-normal tensor from `rng`.
pub fn gaussian<T: Scalar>(shape: (usize, usize), rng: &mut ChaCha8Rng) -> Array2<T> {
    Array2::from_shape_simple_fn(shape, || T::lit(StandardNormal.sample(rng)))
}

/// `x_k = √ᾱ_k·x0 + √(1−ᾱ_k)·ε`, the closed-form marginal of the noising chain.
pub fn forward_noising<T: Scalar>(
    x0: ArrayView2<'_, T>,
    k: usize,
    eps: ArrayView2<'_, T>,
    schedule: &NoiseSchedule<T>,
) -> Result<Array2<T>> {
    schedule.check_step(k)?;
    if x0.dim() != eps.dim() {
        return Err(Error::Dimension { stream: "noise".into(), detail: format!("{:?} vs {:?}", eps.dim(), x0.dim()) });
    }
    let ab = schedule.alpha_bar(k);
    let (a, b) = (ab.sqrt(), (T::one() - ab).sqrt());
    Ok(ndarray::Zip::from(&x0).and(&eps).map_collect(|&x, &e| a * x + b * e))
}

/// Inverts [`forward_noising`] given the noise: `x0 = (x_k − √(1−ᾱ_k)·ε)/√ᾱ_k`.
pub fn predict_clean<T: Scalar>(
    xk: ArrayView2<'_, T>,
    k: usize,
    eps: ArrayView2<'_, T>,
    schedule: &NoiseSchedule<T>,
) -> Result<Array2<T>> {
    schedule.check_step(k)?;
    let ab = schedule.alpha_bar(k);
    let (a, b) = (ab.sqrt(), (T::one() - ab).sqrt());
    Ok(ndarray::Zip::from(&xk).and(&eps).map_collect(|&x, &e| (x - b * e) / a))
}

/// Monte-Carlo estimate of `E_{k,ε} ‖ε − ε̂(x_k, k, F)‖²` with `k` uniform in
/// `1..=K`. Reproducible for a fixed seed.
pub fn noise_prediction_loss<T: Scalar, D: Denoiser<T> + ?Sized>(
    denoiser: &D,
    x0: ArrayView2<'_, T>,
    schedule: &NoiseSchedule<T>,
    cond: ArrayView2<'_, T>,
    sample_count: usize,
    seed: u64,
) -> Result<T> {
    use rand::Rng;
    if sample_count == 0 {
        return Err(Error::InvalidArgument("sample_count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = T::zero();
    for _ in 0..sample_count {
        let k = rng.random_range(1..=schedule.len());
        let eps = gaussian::<T>(x0.dim(), &mut rng);
        let xk = forward_noising(x0, k, eps.view(), schedule)?;
        let pred = predict(denoiser, xk.view(), k, cond)?;
        total += ndarray::Zip::from(&eps).and(&pred).fold(T::zero(), |acc, &e, &p| acc + (e - p) * (e - p));
    }
    Ok(total / T::from_count(sample_count))
}

/// Rows held fixed during sampling (replacement-style inpainting).
#[derive(Debug, Clone, Copy)]
pub struct KnownRows<'a, T> {
    /// Clean values of the leading rows.
    pub values: ArrayView2<'a, T>,
}

/// Runs the deterministic DDIM update from `x_K = noise` down to `x_0` over
/// `steps` (ascending, last = K). When `known` is set its rows overwrite the
/// leading rows of the state before the first prediction and after every update.
pub(crate) fn ddim_loop<T: Scalar, D: Denoiser<T> + ?Sized>(
    denoiser: &D,
    schedule: &NoiseSchedule<T>,
    cond: ArrayView2<'_, T>,
    mut x: Array2<T>,
    steps: &[usize],
    known: Option<KnownRows<'_, T>>,
) -> Result<Array2<T>> {
    let clamp = |x: &mut Array2<T>| {
        if let Some(k) = known {
            let r = k.values.nrows();
            x.slice_mut(s![..r, ..]).assign(&k.values);
        }
    };
    clamp(&mut x);
    for i in (0..steps.len()).rev() {
        let k = steps[i];
        let prev = if i == 0 { 0 } else { steps[i - 1] };
        let eps = predict(denoiser, x.view(), k, cond)?;
        let ab = schedule.alpha_bar(k);
        let ab_prev = schedule.alpha_bar(prev);
        let (a, b) = (ab.sqrt(), (T::one() - ab).sqrt());
        let (ap, bp) = (ab_prev.sqrt(), (T::one() - ab_prev).sqrt());
        ndarray::Zip::from(&mut x).and(&eps).for_each(|xv, &e| {
            let x0 = (*xv - b * e) / a;
            *xv = ap * x0 + bp * e;
        });
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: k });
        }
        clamp(&mut x);
    }
    Ok(x)
}

/// Deterministic DDIM sampling of a `shape` tensor from seeded Gaussian noise
/// over `step_count` uniformly strided steps.
pub fn ddim_sample<T: Scalar, D: Denoiser<T> + ?Sized>(
    denoiser: &D,
    schedule: &NoiseSchedule<T>,
    cond: ArrayView2<'_, T>,
    shape: (usize, usize),
    step_count: usize,
    seed: u64,
) -> Result<Array2<T>> {
    let steps = schedule.strided_steps(step_count)?;
    if shape.0 == 0 || shape.1 == 0 {
        return Ok(Array2::zeros(shape));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = gaussian(shape, &mut rng);
    ddim_loop(denoiser, schedule, cond, x, &steps, None)
}
