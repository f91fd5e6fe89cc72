//! Finite-horizon index sets and density machinery.
//!
//! Densities are exact rationals throughout; certificates compare them to
//! thresholds like 1 - 1/K and must not be rounding-sensitive. Upper and
//! lower densities are reported as finite-horizon profiles, never as
//! claimed limits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite union of disjoint closed integer intervals [lo, hi] with
/// lo >= 1, kept sorted and merged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSet {
    intervals: Vec<(u128, u128)>,
}

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet { intervals: Vec::new() }
    }

    /// Build from arbitrary intervals; sorts, validates lo >= 1 and
    /// lo <= hi, and merges overlapping or adjacent runs.
    pub fn new(mut intervals: Vec<(u128, u128)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if lo < 1 {
                return Err(Error::Parameter(format!("interval [{lo}, {hi}] starts below 1")));
            }
            if hi < lo {
                return Err(Error::Parameter(format!("interval [{lo}, {hi}] is reversed")));
            }
        }
        intervals.sort_unstable();
        let mut merged: Vec<(u128, u128)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            match merged.last_mut() {
                Some((_, last_hi)) if lo <= last_hi.saturating_add(1) => {
                    *last_hi = (*last_hi).max(hi);
                }
                _ => merged.push((lo, hi)),
            }
        }
        Ok(IndexSet { intervals: merged })
    }

    pub fn intervals(&self) -> &[(u128, u128)] {
        &self.intervals
    }

    pub fn contains(&self, n: u128) -> bool {
        self.intervals
            .binary_search_by(|&(lo, hi)| {
                if n < lo {
                    std::cmp::Ordering::Greater
                } else if n > hi {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    /// |A intersect [1..n]|, by interval arithmetic.
    pub fn count_up_to(&self, n: u128) -> u128 {
        let mut count = 0u128;
        for &(lo, hi) in &self.intervals {
            if lo > n {
                break;
            }
            count += hi.min(n) - lo + 1;
        }
        count
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Members up to `n`, for iteration at small horizons.
    pub fn members_up_to(&self, n: u128) -> impl Iterator<Item = u128> + '_ {
        self.intervals
            .iter()
            .take_while(move |&&(lo, _)| lo <= n)
            .flat_map(move |&(lo, hi)| lo..=hi.min(n))
    }
}

fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// |A intersect [1..n]| / n, exactly.
pub fn partial_density(set: &IndexSet, n: u128) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Parameter("density horizon must be at least 1".into()));
    }
    Ok(ratio(set.count_up_to(n), n))
}

/// Exact partial densities at the given checkpoints, with the running
/// maximum and minimum as finite-horizon stand-ins for the upper and
/// lower density.
#[derive(Clone, Debug)]
pub struct DensityProfile {
    pub checkpoints: Vec<u128>,
    pub densities: Vec<BigRational>,
    pub running_max: Vec<BigRational>,
    pub running_min: Vec<BigRational>,
}

pub fn density_profile(set: &IndexSet, checkpoints: &[u128]) -> Result<DensityProfile> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("checkpoints must be strictly increasing".into()));
    }
    let mut densities = Vec::with_capacity(checkpoints.len());
    let mut running_max: Vec<BigRational> = Vec::with_capacity(checkpoints.len());
    let mut running_min: Vec<BigRational> = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        let d = partial_density(set, n)?;
        let mx = running_max.last().map_or(d.clone(), |m| m.clone().max(d.clone()));
        let mn = running_min.last().map_or(d.clone(), |m| m.clone().min(d.clone()));
        densities.push(d);
        running_max.push(mx);
        running_min.push(mn);
    }
    Ok(DensityProfile { checkpoints: checkpoints.to_vec(), densities, running_max, running_min })
}

/// Union of blocks [a, a^2] for increasing anchors with a_{k+1} > a_k^2,
/// so that the blocks stay disjoint. The partial density at a_K^2 is at
/// least (a_K^2 - a_K + 1) / a_K^2.
pub fn build_blocks(anchors: &[u128]) -> Result<IndexSet> {
    if anchors.is_empty() {
        return Ok(IndexSet::empty());
    }
    for &a in anchors {
        if a < 1 {
            return Err(Error::Parameter("anchors must be at least 1".into()));
        }
    }
    for w in anchors.windows(2) {
        if w[1] <= w[0] * w[0] {
            return Err(Error::Contract(format!(
                "anchor {} does not clear the previous block end {}",
                w[1],
                w[0] * w[0]
            )));
        }
    }
    IndexSet::new(anchors.iter().map(|&a| (a, a * a)).collect())
}

/// Finite-horizon stand-ins for the orbit-distance distribution functions:
/// the partial density at the horizon of {n <= horizon : dist_n < delta}
/// (lower), and the running maximum of the partial densities (upper).
/// Entry k of `dist` is the distance at time n = k + 1.
pub fn distribution_functions(
    dist: &[f64],
    delta: f64,
    horizon: usize,
) -> Result<(BigRational, BigRational)> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
    }
    if dist.len() < horizon || horizon == 0 {
        return Err(Error::Parameter(format!(
            "need at least horizon = {horizon} distances, got {}",
            dist.len()
        )));
    }
    let mut below = 0u128;
    let mut upper = BigRational::zero();
    let mut lower = BigRational::zero();
    for (k, &d) in dist.iter().take(horizon).enumerate() {
        if d < delta {
            below += 1;
        }
        let density = ratio(below, (k + 1) as u128);
        if density > upper {
            upper = density.clone();
        }
        lower = density;
    }
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big_ratio;

    #[test]
    fn partial_density_block() {
        let a = IndexSet::new(vec![(2, 4)]).unwrap();
        assert_eq!(partial_density(&a, 4).unwrap(), big_ratio(3, 4));
    }

    #[test]
    fn full_and_empty_sets() {
        let all = IndexSet::new(vec![(1, 1_000_000)]).unwrap();
        assert_eq!(partial_density(&all, 1000).unwrap(), big_ratio(1, 1));
        assert_eq!(partial_density(&IndexSet::empty(), 17).unwrap(), BigRational::zero());
    }

    #[test]
    fn merging_and_membership() {
        let s = IndexSet::new(vec![(5, 7), (8, 10), (1, 2)]).unwrap();
        assert_eq!(s.intervals(), &[(1, 2), (5, 10)]);
        assert!(s.contains(6));
        assert!(!s.contains(3));
        assert_eq!(s.count_up_to(9), 2 + 5);
    }

    #[test]
    fn singleton_profile_decays() {
        let s = IndexSet::new(vec![(1, 1)]).unwrap();
        let p = density_profile(&s, &[1, 2, 4, 8]).unwrap();
        assert_eq!(p.densities[0], big_ratio(1, 1));
        assert_eq!(p.densities[3], big_ratio(1, 8));
        assert_eq!(p.running_max[3], big_ratio(1, 1));
        assert_eq!(p.running_min[3], big_ratio(1, 8));
    }

    #[test]
    fn evens_density() {
        let horizon = 1000u128;
        let evens = IndexSet::new((1..=horizon / 2).map(|k| (2 * k, 2 * k)).collect()).unwrap();
        assert_eq!(partial_density(&evens, horizon).unwrap(), big_ratio(1, 2));
    }

    #[test]
    fn blocks_examples() {
        let b = build_blocks(&[2]).unwrap();
        assert_eq!(b.intervals(), &[(2, 4)]);
        let b = build_blocks(&[2, 17]).unwrap();
        assert_eq!(b.intervals(), &[(2, 4), (17, 289)]);
        // density at 289 is at least 273/289
        let d = partial_density(&b, 289).unwrap();
        assert!(d >= big_ratio(273, 289));
        // 5^2 - 5 + 1 = 21 members in [5, 25] alone
        let b = build_blocks(&[2, 5]).unwrap();
        let d = partial_density(&b, 25).unwrap();
        assert!(d >= big_ratio(21, 25));
    }

    #[test]
    fn blocks_reject_overlap() {
        assert!(build_blocks(&[2, 4]).is_err());
        assert!(build_blocks(&[3, 9]).is_err());
    }

    #[test]
    fn block_checkpoint_densities_increase() {
        // densities at a_K^2 approach 1 monotonically on a legal anchor run
        let anchors = [2u128, 5, 26, 677];
        let blocks = build_blocks(&anchors).unwrap();
        let checkpoints: Vec<u128> = anchors.iter().map(|&a| a * a).collect();
        let profile = density_profile(&blocks, &checkpoints).unwrap();
        for w in profile.densities.windows(2) {
            assert!(w[1] > w[0]);
        }
        for (d, &a) in profile.densities.iter().zip(&anchors) {
            let bound = BigRational::from_integer(1.into())
                - BigRational::new(1.into(), BigInt::from(a));
            assert!(*d >= bound);
        }
    }

    #[test]
    fn distribution_function_edges() {
        let zeros = vec![0.0; 64];
        let (lo, hi) = distribution_functions(&zeros, 0.5, 64).unwrap();
        assert_eq!(lo, big_ratio(1, 1));
        assert_eq!(hi, big_ratio(1, 1));
        let ones = vec![1.0; 64];
        let (lo, hi) = distribution_functions(&ones, 0.5, 64).unwrap();
        assert!(lo.is_zero() && hi.is_zero());
    }

    #[test]
    fn distribution_function_alternating() {
        // first entry at distance 1 (not below delta), then alternating
        let dist: Vec<f64> = (0..100).map(|k| ((k + 1) % 2) as f64).collect();
        let (lo, hi) = distribution_functions(&dist, 0.5, 100).unwrap();
        assert_eq!(lo, big_ratio(1, 2));
        assert_eq!(hi, big_ratio(1, 2));
    }

    #[test]
    fn distribution_rejects_bad_delta() {
        assert!(distribution_functions(&[0.0], 0.0, 1).is_err());
    }

    #[test]
    fn density_is_monotone_under_inclusion() {
        let small = IndexSet::new(vec![(10, 20)]).unwrap();
        let large = IndexSet::new(vec![(5, 30)]).unwrap();
        for n in [10u128, 25, 100] {
            assert!(partial_density(&small, n).unwrap() <= partial_density(&large, n).unwrap());
        }
    }
}
