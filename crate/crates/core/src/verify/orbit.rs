//! Orbit certificates: distributional unboundedness along B, decay to
//! zero along A, and absolute-Cesaro cross-checks on finite shift models.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::construct::WeightSchedule;
use crate::density::{build_blocks, partial_density};
use crate::error::{Error, Result};
use crate::rational::rational_to_f64;

use super::{digest_f64s, digest_inputs, meta_num, meta_str, Certificate, Claim, Verdict};

/// Exact rational 1 - 1/k.
fn one_minus_inverse(k: u128) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(k))
}

/// Verify norms_n >= omega~_n for every n in B up to the horizon, and
/// that the B-block checkpoint densities reach 1 - 1/b_K at n = b_K^2.
///
/// `norms` is indexed by orbit time n (entry 0 = the function itself);
/// any exact lower bound for the orbit norms is admissible, e.g. the
/// |D^n f(0)| readouts.
pub fn certify_distributionally_unbounded(
    norms: &[f64],
    schedule: &WeightSchedule,
    anchors_b: &[u128],
) -> Result<Certificate> {
    if norms.is_empty() {
        return Err(Error::Parameter("empty norm sequence".into()));
    }
    let horizon = norms.len() - 1;
    let b_set = build_blocks(anchors_b)?;
    let mut tested = 0u64;
    let mut min_margin = f64::INFINITY;
    let mut norms_ok = true;
    for n in b_set.members_up_to(horizon as u128) {
        let target = schedule.omega_tilde(n);
        let got = norms[n as usize];
        let margin = got - target;
        if margin < min_margin {
            min_margin = margin;
        }
        if got < target {
            norms_ok = false;
        }
        tested += 1;
    }
    // exact checkpoint densities at b_K^2
    let mut density_ok = true;
    let mut min_density_margin = f64::INFINITY;
    let mut measured = BTreeMap::new();
    for (k, &b) in anchors_b.iter().enumerate() {
        let checkpoint = b * b;
        let d = partial_density(&b_set, checkpoint)?;
        let threshold = one_minus_inverse(b);
        if d < threshold {
            density_ok = false;
        }
        let margin = rational_to_f64(&(d.clone() - threshold));
        min_density_margin = min_density_margin.min(margin);
        measured.insert(format!("density_at_b{}_sq", k + 1), rational_to_f64(&d));
    }
    measured.insert("tested_count".into(), tested as f64);
    measured.insert(
        "min_norm_margin".into(),
        if tested == 0 { f64::NAN } else { min_margin },
    );
    measured.insert("min_density_margin".into(), min_density_margin);

    let mut horizon_meta = BTreeMap::new();
    horizon_meta.insert("horizon".into(), meta_num(horizon as u64));
    horizon_meta.insert(
        "anchors_b".into(),
        serde_json::json!(anchors_b),
    );
    horizon_meta.insert("norm_model".into(), meta_str("caller-supplied lower bounds"));

    // No B member inside the horizon means there is nothing to certify.
    let verdict = if tested == 0 {
        Verdict::Inconclusive
    } else if norms_ok && density_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(Certificate {
        claim: Claim::DistributionallyUnbounded,
        inputs_digest: digest_inputs([
            ("norms", digest_f64s(norms)),
            (
                "anchors",
                anchors_b.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","),
            ),
        ]),
        horizon: horizon_meta,
        measured,
        tolerance: 0.0,
        verdict,
    })
}

/// Verify norms_n < eps_K for n in the K-th A-block, for every tested
/// block K >= first_block (blocks below the radius gate K >= c r carry no
/// guarantee and are skipped), and that the A checkpoint densities reach
/// 1 - 1/a_K at n = a_K^2.
pub fn certify_near_zero(
    norms: &[f64],
    anchors_a: &[u128],
    eps: &[f64],
    first_block: usize,
) -> Result<Certificate> {
    if norms.is_empty() {
        return Err(Error::Parameter("empty norm sequence".into()));
    }
    if eps.len() < anchors_a.len() {
        return Err(Error::Parameter(format!(
            "need one epsilon per block: {} anchors, {} epsilons",
            anchors_a.len(),
            eps.len()
        )));
    }
    if eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Parameter("epsilons must be positive".into()));
    }
    if first_block < 1 {
        return Err(Error::Parameter("blocks are indexed from 1".into()));
    }
    let horizon = norms.len() - 1;
    let a_set = build_blocks(anchors_a)?;
    let mut norms_ok = true;
    let mut tested = 0u64;
    let mut measured = BTreeMap::new();
    for (k, &a) in anchors_a.iter().enumerate() {
        if k + 1 < first_block {
            continue;
        }
        let lo = a;
        let hi = (a * a).min(horizon as u128);
        let mut block_max = f64::NEG_INFINITY;
        let mut block_tested = 0u64;
        let mut n = lo;
        while n <= hi {
            block_max = block_max.max(norms[n as usize]);
            block_tested += 1;
            n += 1;
        }
        if block_tested > 0 {
            tested += block_tested;
            measured.insert(format!("block{}_max_norm", k + 1), block_max);
            measured.insert(format!("block{}_eps", k + 1), eps[k]);
            if block_max >= eps[k] {
                norms_ok = false;
            }
        }
    }
    let mut density_ok = true;
    for (k, &a) in anchors_a.iter().enumerate() {
        let d = partial_density(&a_set, a * a)?;
        if d < one_minus_inverse(a) {
            density_ok = false;
        }
        measured.insert(format!("density_at_a{}_sq", k + 1), rational_to_f64(&d));
    }
    measured.insert("tested_count".into(), tested as f64);

    let mut horizon_meta = BTreeMap::new();
    horizon_meta.insert("horizon".into(), meta_num(horizon as u64));
    horizon_meta.insert("first_block".into(), meta_num(first_block as u64));
    horizon_meta.insert(
        "anchors_a".into(),
        serde_json::json!(anchors_a),
    );
    let verdict = if tested == 0 {
        Verdict::Inconclusive
    } else if norms_ok && density_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(Certificate {
        claim: Claim::NearZero,
        inputs_digest: digest_inputs([
            ("norms", digest_f64s(norms)),
            ("eps", digest_f64s(eps)),
            (
                "anchors",
                anchors_a.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","),
            ),
            ("first_block", first_block.to_string()),
        ]),
        horizon: horizon_meta,
        measured,
        tolerance: 0.0,
        verdict,
    })
}

/// The matrix of the weighted backward shift (T x)_j = w_{j+1} x_{j+1}
/// on R^{len(w)+1}; with weights (1, 2, ..., cap) this is truncated
/// differentiation on Taylor coefficients, where the Euclidean norm is
/// M_2(., 1).
pub fn weighted_shift_matrix(weights: &[f64]) -> Vec<Vec<f64>> {
    let dim = weights.len() + 1;
    let mut m = vec![vec![0.0; dim]; dim];
    for (j, &w) in weights.iter().enumerate() {
        m[j][j + 1] = w;
    }
    m
}

/// Finite operator model on R^dim with the Euclidean norm. Reports
/// per-sample running-average suprema
/// sup_{N <= n_max} (1/N) sum_{j<=N} |T^j x| / |x|; samples flagged
/// distributionally unbounded must show growing averages, the rest must
/// stay below `bound`.
pub fn absolutely_cesaro_check(
    op_model: &[Vec<f64>],
    samples: &[Vec<f64>],
    du_flags: &[bool],
    n_max: usize,
    bound: f64,
) -> Result<Certificate> {
    if samples.is_empty() || n_max < 2 {
        return Err(Error::Parameter("need samples and n_max >= 2".into()));
    }
    if du_flags.len() != samples.len() {
        return Err(Error::Parameter("one flag per sample required".into()));
    }
    let dim = op_model.len();
    if op_model.iter().any(|row| row.len() != dim) {
        return Err(Error::Parameter("operator matrix must be square".into()));
    }
    for s in samples {
        if s.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: s.len() });
        }
    }
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let apply = |x: &[f64]| -> Vec<f64> {
        op_model
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, v)| a * v).sum())
            .collect()
    };
    let mut ok = true;
    let mut measured = BTreeMap::new();
    for (i, x0) in samples.iter().enumerate() {
        let x0_norm = norm(x0);
        if x0_norm == 0.0 {
            return Err(Error::Parameter(format!("sample {i} is the zero vector")));
        }
        let mut x = x0.clone();
        let mut running = 0.0f64;
        let mut sup_avg = 0.0f64;
        let mut avg_half = 0.0f64;
        let mut avg_full = 0.0f64;
        for j in 1..=n_max {
            x = apply(&x);
            running += norm(&x) / x0_norm;
            let avg = running / j as f64;
            sup_avg = sup_avg.max(avg);
            if j == n_max / 2 {
                avg_half = avg;
            }
            if j == n_max {
                avg_full = avg;
            }
        }
        measured.insert(format!("sample{i}_sup_avg"), sup_avg);
        if du_flags[i] {
            measured.insert(format!("sample{i}_avg_growth"), avg_full - avg_half);
            if avg_full <= avg_half {
                ok = false;
            }
        } else if sup_avg > bound {
            ok = false;
        }
    }
    let mut horizon_meta = BTreeMap::new();
    horizon_meta.insert("n_max".into(), meta_num(n_max as u64));
    horizon_meta.insert("model_dim".into(), meta_num(dim as u64));
    measured.insert("bound".into(), bound);
    let flat: Vec<f64> = op_model.iter().flatten().copied().collect();
    Ok(Certificate {
        claim: Claim::AbsolutelyCesaro,
        inputs_digest: digest_inputs([
            ("matrix", digest_f64s(&flat)),
            ("n_max", n_max.to_string()),
            ("bound", bound.to_string()),
        ]),
        horizon: horizon_meta,
        measured,
        tolerance: 0.0,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
    })
}
