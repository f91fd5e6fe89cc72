//! The locally-uniform-convergence metric, truncated at a reported depth:
//! d(g, h) = sum_n 2^{-n} s_n / (1 + s_n) with s_n = sup_{S(n)} |g - h|.

use num_rational::BigRational;

use crate::density::distribution_functions;
use crate::error::{Error, Result};
use crate::harmonic::{sup_norm_sphere, MultiIndexPoly};
use crate::series::{mp_norm, EntireSeries};

/// Truncated metric value plus the rigorous tail bound 2^{-n_max}
/// (every summand is below 2^{-n}).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrechetDistance {
    pub value: f64,
    pub tail_bound: f64,
    pub n_max: usize,
}

/// Core computation from precomputed sup differences s_1, s_2, ...
pub fn frechet_distance(sup_diffs: &[f64]) -> Result<FrechetDistance> {
    if sup_diffs.is_empty() {
        return Err(Error::Parameter("need at least one seminorm value".into()));
    }
    let mut value = 0.0f64;
    for (k, &s) in sup_diffs.iter().enumerate() {
        if !(s >= 0.0) {
            return Err(Error::Parameter(format!("seminorm {k} is negative or NaN")));
        }
        value += 0.5f64.powi(k as i32 + 1) * s / (1.0 + s);
    }
    let n_max = sup_diffs.len();
    Ok(FrechetDistance { value, tail_bound: 0.5f64.powi(n_max as i32), n_max })
}

/// Metric between two truncated entire functions, using the sampled sup
/// norm on circles of integer radius.
pub fn frechet_distance_series(
    g: &EntireSeries,
    h: &EntireSeries,
    n_max: usize,
) -> Result<FrechetDistance> {
    if n_max < 1 {
        return Err(Error::Parameter("n_max must be at least 1".into()));
    }
    let diff = g.sub(h);
    let sup_diffs: Vec<f64> = (1..=n_max)
        .map(|n| mp_norm(&diff, n as f64, f64::INFINITY, 0))
        .collect::<Result<_>>()?;
    frechet_distance(&sup_diffs)
}

/// Metric between two harmonic polynomial truncations.
pub fn frechet_distance_harmonic(
    g: &MultiIndexPoly,
    h: &MultiIndexPoly,
    n_max: usize,
    samples: usize,
) -> Result<FrechetDistance> {
    if n_max < 1 {
        return Err(Error::Parameter("n_max must be at least 1".into()));
    }
    let diff = g.sub(h);
    let sup_diffs: Vec<f64> = (1..=n_max)
        .map(|n| {
            if diff.is_zero() {
                Ok(0.0)
            } else {
                sup_norm_sphere(&diff, n as f64, samples)
            }
        })
        .collect::<Result<_>>()?;
    frechet_distance(&sup_diffs)
}

/// Finite-horizon stand-ins for the distribution functions of an orbit
/// pair: for each delta, (F, F*) of the distance sequence
/// dist_n = d(T^n x, T^n y). The caller supplies the distances under
/// whichever metric the orbit lives in.
pub fn orbit_pair_distribution(
    dist: &[f64],
    deltas: &[f64],
    horizon: usize,
) -> Result<Vec<(f64, BigRational, BigRational)>> {
    deltas
        .iter()
        .map(|&delta| {
            let (lower, upper) = distribution_functions(dist, delta, horizon)?;
            Ok((delta, lower, upper))
        })
        .collect()
}
