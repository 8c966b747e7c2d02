use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Per-step retention factors `α_k` (k = 1..=K) and their running products `ᾱ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule<T> {
    alphas: Vec<T>,
    alpha_bars: Vec<T>,
}

impl<T: Scalar> NoiseSchedule<T> {
    /// Requires `0 < α_k ≤ 1` and a strictly decreasing `ᾱ`.
    pub fn from_alphas(alphas: Vec<T>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidArgument("noise schedule needs at least one step".into()));
        }
        if let Some((k, a)) = alphas.iter().enumerate().find(|(_, &a)| !(a > T::zero() && a <= T::one())) {
            return Err(Error::InvalidArgument(format!("alpha at step {} is {a}, outside (0, 1]", k + 1)));
        }
        let mut alpha_bars = Vec::with_capacity(alphas.len());
        let mut acc = T::one();
        for (k, &a) in alphas.iter().enumerate() {
            let next = acc * a;
            if !(next < acc) || next <= T::zero() {
                return Err(Error::InvalidArgument(format!(
                    "cumulative alpha must strictly decrease; stalls at step {}",
                    k + 1
                )));
            }
            acc = next;
            alpha_bars.push(acc);
        }
        Ok(Self { alphas, alpha_bars })
    }

    /// `α_k = 1 − β_k` with `β` linear from `beta_start` to `beta_end` over `steps`.
    pub fn linear(steps: usize, beta_start: f64, beta_end: f64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("noise schedule needs at least one step".into()));
        }
        let alphas = (0..steps)
            .map(|i| {
                let f = if steps == 1 { 0.0 } else { i as f64 / (steps - 1) as f64 };
                T::lit(1.0 - (beta_start + (beta_end - beta_start) * f))
            })
            .collect();
        Self::from_alphas(alphas)
    }

    /// Number of diffusion steps `K`.
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[T] {
        &self.alphas
    }

    /// `ᾱ_k` for `k` in `0..=K`, with `ᾱ_0 = 1`.
    pub fn alpha_bar(&self, k: usize) -> T {
        if k == 0 {
            T::one()
        } else {
            self.alpha_bars[k - 1]
        }
    }

    pub fn check_step(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.len() {
            return Err(Error::InvalidArgument(format!("step {k} outside 1..={}", self.len())));
        }
        Ok(())
    }

    /// `count` uniformly strided steps ending at `K`, ascending.
    pub fn strided_steps(&self, count: usize) -> Result<Vec<usize>> {
        let k = self.len();
        if count == 0 || count > k {
            return Err(Error::InvalidArgument(format!("sampling step count {count} outside 1..={k}")));
        }
        Ok((1..=count).map(|i| i * k / count).collect())
    }
}

impl<T: Scalar> Default for NoiseSchedule<T> {
    fn default() -> Self {
        let c = ScheduleConfig::default();
        Self::linear(c.train_steps, c.beta_start, c.beta_end).expect("default schedule is valid")
    }
}

/// Schedule file contents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleConfig {
    pub train_steps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub sampling_steps: usize,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self { train_steps: 1000, beta_start: 1e-4, beta_end: 2e-2, sampling_steps: 50 }
    }
}

impl ScheduleConfig {
    pub fn build<T: Scalar>(&self) -> Result<NoiseSchedule<T>> {
        let s = NoiseSchedule::linear(self.train_steps, self.beta_start, self.beta_end)?;
        s.strided_steps(self.sampling_steps)?;
        Ok(s)
    }
}
