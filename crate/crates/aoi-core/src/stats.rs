//! Streaming moments, batch-means standard errors, lag correlations.

use crate::real::Real;

/// Welford-style streaming mean and variance; batches merge exactly.
#[derive(Debug, Clone, Copy)]
pub struct StreamingMoments<R> {
    n: u64,
    mean: R,
    m2: R,
}

impl<R: Real> Default for StreamingMoments<R> {
    fn default() -> Self {
        Self {
            n: 0,
            mean: R::zero(),
            m2: R::zero(),
        }
    }
}

impl<R: Real> StreamingMoments<R> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: R) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / R::from_f64(self.n as f64);
        self.m2 += delta * (x - self.mean);
    }

    /// Combines two accumulators as if their samples were one stream.
    pub fn merge(&mut self, other: Self) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = other;
            return;
        }
        let na = R::from_f64(self.n as f64);
        let nb = R::from_f64(other.n as f64);
        let delta = other.mean - self.mean;
        let total = na + nb;
        self.mean += delta * nb / total;
        self.m2 += other.m2 + delta * delta * na * nb / total;
        self.n += other.n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> R {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> R {
        if self.n < 2 {
            R::zero()
        } else {
            self.m2 / R::from_f64((self.n - 1) as f64)
        }
    }

    /// Standard error of the mean under i.i.d. sampling.
    pub fn std_error(&self) -> R {
        if self.n < 2 {
            R::zero()
        } else {
            (self.variance() / R::from_f64(self.n as f64)).sqrt()
        }
    }
}

/// Standard error of the ratio estimator sum(num)/sum(den) by batch means.
///
/// The sequence is split into `batches` consecutive blocks, the per-block
/// ratios are treated as approximately independent replicates, and the
/// spread of the block ratios gives the error of their mean. Blocks absorb
/// serial dependence at short lags, which the raw terms here have.
pub fn batch_ratio_std_error<R: Real>(num: &[R], den: &[R], batches: usize) -> R {
    debug_assert_eq!(num.len(), den.len());
    let n = num.len();
    let b = batches.min(n / 2).max(1);
    if b < 2 {
        return R::zero();
    }
    let mut moments = StreamingMoments::new();
    for i in 0..b {
        let lo = i * n / b;
        let hi = (i + 1) * n / b;
        let s_num: R = num[lo..hi].iter().copied().sum();
        let s_den: R = den[lo..hi].iter().copied().sum();
        if s_den > R::zero() {
            moments.push(s_num / s_den);
        }
    }
    moments.std_error()
}

/// Standard error of mean(values) by batch means over consecutive blocks.
pub fn batch_mean_std_error<R: Real>(values: &[R], batches: usize) -> R {
    let n = values.len();
    let b = batches.min(n / 2).max(1);
    if b < 2 {
        return R::zero();
    }
    let mut moments = StreamingMoments::new();
    for i in 0..b {
        let lo = i * n / b;
        let hi = (i + 1) * n / b;
        let s: R = values[lo..hi].iter().copied().sum();
        moments.push(s / R::from_f64((hi - lo) as f64));
    }
    moments.std_error()
}

/// Sample autocorrelation of `xs` at the given lag.
///
/// Returns `None` when the series is too short or (numerically) constant,
/// the degenerate case where correlation is undefined.
pub fn lag_correlation<R: Real>(xs: &[R], lag: usize) -> Option<R> {
    let n = xs.len();
    if n < lag + 2 {
        return None;
    }
    let nf = R::from_f64(n as f64);
    let mean = xs.iter().copied().sum::<R>() / nf;
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<R>() / nf;
    let scale = xs.iter().fold(R::zero(), |m, &x| m.max(x.abs()));
    if var <= (scale * R::from_f64(1e-9)).powi(2) {
        return None;
    }
    let cov = xs[..n - lag]
        .iter()
        .zip(&xs[lag..])
        .map(|(&a, &b)| (a - mean) * (b - mean))
        .sum::<R>()
        / R::from_f64((n - lag) as f64);
    Some(cov / var)
}
