//! Exact hypergeometric probabilities.
//!
//! Probabilities are rationals of big-integer binomials and only rounded
//! when converted to a [`Scalar`]. A log-gamma evaluation is kept as an
//! independent cross-check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::sampler::count_subsets;
use crate::scalar::Scalar;

/// Population of `population` items, `marked` of them marked, `draws`
/// drawn without replacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HypergeomParams {
    pub population: u64,
    pub marked: u64,
    pub draws: u64,
}

impl HypergeomParams {
    pub fn new(population: u64, marked: u64, draws: u64) -> Result<Self> {
        if marked > population || draws > population {
            return Err(Error::Invalid(format!(
                "hypergeometric parameters need K <= N and n <= N (N={population}, K={marked}, n={draws})"
            )));
        }
        Ok(HypergeomParams {
            population,
            marked,
            draws,
        })
    }

    /// Smallest and largest attainable marked counts.
    pub fn support(&self) -> (u64, u64) {
        let lo = self.draws.saturating_sub(self.population - self.marked);
        (lo, self.draws.min(self.marked))
    }

    pub fn pmf_exact(&self, x: i64) -> BigRational {
        let (lo, hi) = self.support();
        if x < lo as i64 || x > hi as i64 {
            return BigRational::zero();
        }
        let x = x as u64;
        let (n_, k_, d_) = (self.population as usize, self.marked as usize, self.draws as usize);
        let num = binom(k_, x as usize) * binom(n_ - k_, d_ - x as usize);
        BigRational::new(num, binom(n_, d_))
    }

    /// P(X >= x).
    pub fn tail_geq_exact(&self, x: i64) -> BigRational {
        let (lo, hi) = self.support();
        if x <= lo as i64 {
            return BigRational::one();
        }
        (x..=hi as i64).map(|i| self.pmf_exact(i)).sum()
    }

    /// P(X > x).
    pub fn tail_gt_exact(&self, x: i64) -> BigRational {
        self.tail_geq_exact(x.saturating_add(1))
    }

    pub fn pmf<S: Scalar>(&self, x: i64) -> S {
        S::from_rational(&self.pmf_exact(x))
    }

    pub fn tail_geq<S: Scalar>(&self, x: i64) -> S {
        S::from_rational(&self.tail_geq_exact(x))
    }

    pub fn tail_gt<S: Scalar>(&self, x: i64) -> S {
        S::from_rational(&self.tail_gt_exact(x))
    }

    pub fn tail<S: Scalar>(&self, x: i64, mode: TailMode) -> S {
        match mode {
            TailMode::AtLeast => self.tail_geq(x),
            TailMode::Greater => self.tail_gt(x),
        }
    }

    /// Floating-point pmf through log-gamma; only for cross-checking.
    pub fn pmf_log_gamma(&self, x: i64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo as i64 || x > hi as i64 {
            return 0.0;
        }
        let ln_binom = |n: u64, k: u64| ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0);
        let x = x as u64;
        let (n_, k_, d_) = (self.population, self.marked, self.draws);
        (ln_binom(k_, x) + ln_binom(n_ - k_, d_ - x) - ln_binom(n_, d_)).exp()
    }
}

/// Which upper tail a p-value refers to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailMode {
    /// P(X >= observed).
    #[default]
    AtLeast,
    /// P(X > observed).
    Greater,
}

fn binom(n: usize, k: usize) -> BigInt {
    count_subsets(n, k).expect("k <= n inside the support").into()
}

pub fn hypergeom_pmf(params: &HypergeomParams, x: i64) -> f64 {
    params.pmf(x)
}

pub fn hypergeom_tail_geq(params: &HypergeomParams, x: i64) -> f64 {
    params.tail_geq(x)
}

pub fn hypergeom_tail_gt(params: &HypergeomParams, x: i64) -> f64 {
    params.tail_gt(x)
}
