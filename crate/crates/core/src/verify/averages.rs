//! Average-based certificates: the weighted-series hypothesis with its
//! Cesaro-average conclusion, the critical-envelope average check, and
//! the Barnes-type series ratio.

use std::collections::BTreeMap;

use crate::construct::WeightSchedule;
use crate::error::{Error, Result};
use crate::series::{differentiate, m2_norm, mp_norm, EntireSeries};

use super::{digest_f64s, digest_inputs, meta_num, meta_str, Certificate, Claim, Verdict};

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// ln of the hypothesis weight R^{alpha n + beta} e^{-alpha R} /
/// (n!^alpha n^{beta - alpha/2 + 1/2}).
fn ln_weight(n: usize, alpha: f64, beta: f64, r: f64) -> f64 {
    (alpha * n as f64 + beta) * r.ln() - alpha * r
        - alpha * ln_factorial(n)
        - (beta - alpha / 2.0 + 0.5) * (n as f64).ln()
}

/// Check the summability hypothesis
///   sum_n f_n(x) w_n(R) <= C  for all samples x and grid radii R,
/// then report the empirical Cesaro bound
///   B_emp = max over x, m <= m_max of (1/m) sum_{n<=m} f_n(x).
///
/// A hypothesis violation yields an inconclusive verdict recording the
/// violating sample and radius; the conclusion is untested there.
pub fn cesaro_average_check(
    f_values: &[Vec<f64>],
    alpha: f64,
    beta: f64,
    c_hyp: f64,
    r_grid: &[f64],
    m_max: usize,
) -> Result<Certificate> {
    if !(alpha > 0.0) || !(c_hyp > 0.0) {
        return Err(Error::Parameter("alpha and C must be positive".into()));
    }
    if f_values.is_empty() || r_grid.is_empty() {
        return Err(Error::Parameter("need samples and a radius grid".into()));
    }
    let len = f_values[0].len();
    if f_values.iter().any(|row| row.len() != len) {
        return Err(Error::Parameter("ragged sample family".into()));
    }
    if m_max > len || m_max == 0 {
        return Err(Error::Parameter(format!(
            "m_max = {m_max} outside the family length {len}"
        )));
    }
    for (i, row) in f_values.iter().enumerate() {
        if row.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::Parameter(format!("sample {i} has negative values")));
        }
    }

    let mut hyp_max = 0.0f64;
    let mut violation: Option<(usize, f64, f64)> = None;
    'outer: for (i, row) in f_values.iter().enumerate() {
        for &r in r_grid {
            if !(r > 0.0) {
                return Err(Error::Parameter(format!("grid radius must be positive, got {r}")));
            }
            let mut sum = 0.0f64;
            for (idx, &fv) in row.iter().enumerate() {
                if fv > 0.0 {
                    let n = idx + 1;
                    sum += fv * ln_weight(n, alpha, beta, r).exp();
                }
            }
            hyp_max = hyp_max.max(sum);
            if sum > c_hyp {
                violation = Some((i, r, sum));
                break 'outer;
            }
        }
    }

    let mut horizon_meta = BTreeMap::new();
    horizon_meta.insert("family_length".into(), meta_num(len as u64));
    horizon_meta.insert("m_max".into(), meta_num(m_max as u64));
    horizon_meta.insert("samples".into(), meta_num(f_values.len() as u64));
    horizon_meta.insert(
        "r_grid".into(),
        serde_json::json!({ "min": r_grid[0], "max": r_grid[r_grid.len()-1], "points": r_grid.len() }),
    );
    let mut measured = BTreeMap::new();
    measured.insert("hypothesis_max".into(), hyp_max);
    measured.insert("c_hyp".into(), c_hyp);

    if let Some((i, r, sum)) = violation {
        measured.insert("violating_sample".into(), i as f64);
        measured.insert("violating_r".into(), r);
        measured.insert("violating_sum".into(), sum);
        return Ok(Certificate {
            claim: Claim::CesaroAverage,
            inputs_digest: digest_inputs([
                ("alpha", alpha.to_string()),
                ("beta", beta.to_string()),
                ("c", c_hyp.to_string()),
                ("grid", digest_f64s(r_grid)),
            ]),
            horizon: horizon_meta,
            measured,
            tolerance: 0.0,
            verdict: Verdict::Inconclusive,
        });
    }

    let mut b_emp = 0.0f64;
    for row in f_values {
        let mut running = 0.0f64;
        for (idx, &fv) in row.iter().take(m_max).enumerate() {
            running += fv;
            b_emp = b_emp.max(running / (idx + 1) as f64);
        }
    }
    measured.insert("b_emp".into(), b_emp);
    Ok(Certificate {
        claim: Claim::CesaroAverage,
        inputs_digest: digest_inputs([
            ("alpha", alpha.to_string()),
            ("beta", beta.to_string()),
            ("c", c_hyp.to_string()),
            ("grid", digest_f64s(r_grid)),
        ]),
        horizon: horizon_meta,
        measured,
        tolerance: 0.0,
        verdict: if b_emp.is_finite() { Verdict::Pass } else { Verdict::Fail },
    })
}

/// The critical-envelope average check. First verifies the hypothesis
/// M_p(f, R) <= c_env e^R / R^{1/2p} across `r_grid_env` (an inconclusive
/// verdict if it fails, since the conclusion is an implication); then
/// reports A_m = (1/m) sum_{n=1}^{m} M_q^q(D^n f, r) for m <= m_max with
/// q = p/(p-1), requiring a non-increasing trend beyond a burn-in and
/// A_m <= bound_mult * envelope(r)^q.
pub fn lower_bound_average_check(
    f: &EntireSeries,
    p: f64,
    r: f64,
    m_max: usize,
    c_env: f64,
    r_grid_env: &[f64],
    bound_mult: f64,
) -> Result<Certificate> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Parameter(format!("p must lie in (1, 2], got {p}")));
    }
    if m_max == 0 || m_max > f.cap() {
        return Err(Error::Parameter(format!(
            "m_max = {m_max} outside the faithful horizon (cap {})",
            f.cap()
        )));
    }
    let q = p / (p - 1.0);
    let digest = digest_inputs([
        ("cap", f.cap().to_string()),
        ("p", p.to_string()),
        ("r", r.to_string()),
        ("m_max", m_max.to_string()),
        ("c_env", c_env.to_string()),
    ]);
    let mut horizon_meta = BTreeMap::new();
    horizon_meta.insert("cap".into(), meta_num(f.cap() as u64));
    horizon_meta.insert("m_max".into(), meta_num(m_max as u64));
    horizon_meta.insert("q".into(), meta_str(format!("{q}")));

    // envelope precondition
    let mut env_worst = 0.0f64;
    let mut env_worst_r = 0.0f64;
    for &big_r in r_grid_env {
        let norm = if p == 2.0 {
            m2_norm(f, big_r)?
        } else {
            mp_norm(f, big_r, p, 4 * f.cap().max(1))?
        };
        let env = c_env * (big_r - big_r.ln() / (2.0 * p)).exp();
        let ratio = norm / env;
        if ratio > env_worst {
            env_worst = ratio;
            env_worst_r = big_r;
        }
    }
    let mut measured = BTreeMap::new();
    measured.insert("envelope_max_ratio".into(), env_worst);
    if env_worst > 1.0 + super::TOL_QUAD_REL {
        measured.insert("envelope_worst_r".into(), env_worst_r);
        return Ok(Certificate {
            claim: Claim::LowerBoundAverage,
            inputs_digest: digest,
            horizon: horizon_meta,
            measured,
            tolerance: super::TOL_QUAD_REL,
            verdict: Verdict::Inconclusive,
        });
    }

    // averages of M_q^q along the orbit
    let mut g = differentiate(f);
    let mut running = 0.0f64;
    let mut averages = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let norm = if q == 2.0 {
            m2_norm(&g, r)?
        } else {
            mp_norm(&g, r, q, 4 * g.cap().max(1))?
        };
        running += norm.powf(q);
        averages.push(running / m as f64);
        if m < m_max {
            g = differentiate(&g);
        }
    }
    let burn_in = (m_max / 10).max(10).min(m_max - 1);
    let mut max_increase = 0.0f64;
    for w in averages[burn_in - 1..].windows(2) {
        let rel = (w[1] - w[0]) / w[0].abs().max(f64::MIN_POSITIVE);
        max_increase = max_increase.max(rel);
    }
    let sup_avg = averages.iter().cloned().fold(0.0, f64::max);
    let env_at_r = c_env * (r - r.ln() / (2.0 * p)).exp();
    let limit = bound_mult * env_at_r.powf(q);
    measured.insert("sup_average".into(), sup_avg);
    measured.insert("final_average".into(), *averages.last().unwrap());
    measured.insert("max_relative_increase".into(), max_increase);
    measured.insert("bound".into(), limit);
    let trend_ok = max_increase <= super::TOL_QUAD_REL;
    let bounded = sup_avg <= limit;
    Ok(Certificate {
        claim: Claim::LowerBoundAverage,
        inputs_digest: digest,
        horizon: horizon_meta,
        measured,
        tolerance: super::TOL_QUAD_REL,
        verdict: if trend_ok && bounded { Verdict::Pass } else { Verdict::Fail },
    })
}

/// The uniform-distribution averaging step reported rather than assumed:
/// returns ( (1/k) sum_j |D^n f(a_j)|^q over k equally spaced points of
/// S(r), its ratio to M_q^q(D^n f, r) ). With the normalized circle
/// measure the ratio tends to 1 as k grows.
pub fn uniform_average_ratio(
    f: &EntireSeries,
    n: usize,
    r: f64,
    q: f64,
    k: usize,
) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::Parameter("need at least one sample point".into()));
    }
    let mut g = f.clone();
    for _ in 0..n {
        g = differentiate(&g);
    }
    let mut avg = 0.0f64;
    for j in 0..k {
        let t = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
        avg += g.eval_abs_polar(r, t).powf(q);
    }
    avg /= k as f64;
    let mq = mp_norm(&g, r, q, 4 * g.cap().max(1))?;
    Ok((avg, avg / mq.powf(q)))
}

/// Exact readout lower bound for the witness-side averages:
/// (1/m) sum_{n in B, n <= m} omega~_n^q <= (1/m) sum_{n<=m} M_q^q(D^n f, r),
/// valid because |D^n f(0)| = omega*_n and M_q(g, r) >= |g(0)|.
pub fn schedule_average_lower_bound(schedule: &WeightSchedule, q: f64, m: u128) -> f64 {
    assert!(m >= 1);
    let mut sum = 0.0f64;
    for n in schedule.b_set.members_up_to(m) {
        sum += schedule.omega_tilde(n).powf(q);
    }
    sum / m as f64
}

/// Incremental max-shifted log-sum-exp accumulator.
fn lse_add(m: &mut f64, s: &mut f64, t: f64) {
    if t <= *m {
        *s += (t - *m).exp();
    } else {
        *s = *s * (*m - t).exp() + 1.0;
        *m = t;
    }
}

/// Tail-bounded evaluation of S(r) = sum_n r^{alpha n} / ((n+1)^beta n!^alpha)
/// and the normalized ratio S(r) r^{(alpha + 2 beta - 1)/2} / e^{alpha r}.
/// Summation continues until the geometric remainder bound falls below
/// 2^-50 of the running sum; the bound itself is then added, so the
/// returned value majorizes the true sum.
fn barnes_ratio(alpha: f64, beta: f64, r: f64) -> f64 {
    let ln_r = r.ln();
    let mut m = f64::NEG_INFINITY;
    let mut s = 0.0f64;
    let mut n = 0usize;
    let mut ln_fact = 0.0f64;
    loop {
        let ln_t = alpha * n as f64 * ln_r - beta * ((n + 1) as f64).ln() - alpha * ln_fact;
        lse_add(&mut m, &mut s, ln_t);
        // t_{n+1}/t_n = r^alpha ((n+1)/(n+2))^beta / (n+1)^alpha,
        // decreasing in n past the mode
        let ln_ratio = alpha * ln_r + beta * ((n as f64 + 1.0) / (n as f64 + 2.0)).ln()
            - alpha * ((n + 1) as f64).ln();
        if ln_ratio < -std::f64::consts::LN_2 && n as f64 > r {
            let rho = ln_ratio.exp();
            let ln_rem = ln_t + (rho / (1.0 - rho)).ln();
            if ln_rem < m + s.ln() - 50.0 * std::f64::consts::LN_2 {
                lse_add(&mut m, &mut s, ln_rem);
                break;
            }
        }
        ln_fact += ((n + 1) as f64).ln();
        n += 1;
        if n > 4_000_000 {
            break;
        }
    }
    let ln_sum = m + s.ln();
    (ln_sum + (alpha + 2.0 * beta - 1.0) / 2.0 * ln_r - alpha * r).exp()
}

/// Certificate that the Barnes-type ratio stabilizes: the grid sup of
/// S(r) r^{(alpha+2beta-1)/2} / e^{alpha r} changes by less than `rel_tol`
/// when the grid is extended beyond `split`.
pub fn barnes_series_check(
    alpha: f64,
    beta: f64,
    r_grid: &[f64],
    split: f64,
    rel_tol: f64,
) -> Result<Certificate> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Parameter(format!("alpha must lie in (0, 2], got {alpha}")));
    }
    if r_grid.len() < 2 || r_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("need an increasing grid of at least two radii".into()));
    }
    let mut sup_full = 0.0f64;
    let mut sup_below = 0.0f64;
    let mut ratio_at_split = 0.0f64;
    let mut ratio_at_rmax = 0.0f64;
    for &r in r_grid {
        if !(r > 0.0) {
            return Err(Error::Parameter(format!("grid radius must be positive, got {r}")));
        }
        let ratio = barnes_ratio(alpha, beta, r);
        sup_full = sup_full.max(ratio);
        if r <= split {
            sup_below = sup_below.max(ratio);
            ratio_at_split = ratio;
        }
        ratio_at_rmax = ratio;
    }
    if sup_below == 0.0 {
        return Err(Error::Parameter(format!(
            "split {split} excludes the whole grid"
        )));
    }
    let rel_change_sup = (sup_full - sup_below) / sup_below;
    let rel_change_endpoint = (ratio_at_rmax - ratio_at_split) / ratio_at_split;
    let mut horizon_meta = BTreeMap::new();
    horizon_meta.insert(
        "r_grid".into(),
        serde_json::json!({ "min": r_grid[0], "max": r_grid[r_grid.len()-1], "points": r_grid.len() }),
    );
    horizon_meta.insert("split".into(), meta_str(format!("{split}")));
    let mut measured = BTreeMap::new();
    measured.insert("sup_ratio".into(), sup_full);
    measured.insert("sup_ratio_below_split".into(), sup_below);
    measured.insert("ratio_at_split".into(), ratio_at_split);
    measured.insert("ratio_at_r_max".into(), ratio_at_rmax);
    measured.insert("rel_change_sup".into(), rel_change_sup);
    measured.insert("rel_change_endpoint".into(), rel_change_endpoint);
    Ok(Certificate {
        claim: Claim::BarnesSeries,
        inputs_digest: digest_inputs([
            ("alpha", alpha.to_string()),
            ("beta", beta.to_string()),
            ("split", split.to_string()),
            ("grid", digest_f64s(r_grid)),
        ]),
        horizon: horizon_meta,
        measured,
        tolerance: rel_tol,
        verdict: if rel_change_sup.abs() < rel_tol { Verdict::Pass } else { Verdict::Fail },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{biguint_to_bigint, factorial, CRat};
    use num_rational::BigRational;
    use num_traits::Zero;

    fn exp_truncated(cap: usize) -> EntireSeries {
        let coeffs = (0..=cap)
            .map(|n| {
                CRat::new(
                    BigRational::new(1.into(), biguint_to_bigint(&factorial(n))),
                    BigRational::zero(),
                )
            })
            .collect();
        EntireSeries::new(coeffs)
    }

    #[test]
    fn cesaro_zero_family() {
        let family = vec![vec![0.0; 100]];
        let cert =
            cesaro_average_check(&family, 2.0, 0.5, 1.0, &[1.0, 5.0, 10.0], 100).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert_eq!(cert.measured["b_emp"], 0.0);
    }

    #[test]
    fn cesaro_constant_family_saturating() {
        // constants scaled to saturate the hypothesis near its argmax
        let (alpha, beta) = (2.0, 0.5);
        let grid: Vec<f64> = (1..=100).map(|k| k as f64 / 2.0).collect();
        let len = 1000;
        let w_max = grid
            .iter()
            .map(|&r| (1..=len).map(|n| ln_weight(n, alpha, beta, r).exp()).sum::<f64>())
            .fold(0.0, f64::max);
        let c = (1.0 - 1e-9) / w_max;
        let family = vec![vec![c; len]];
        let cert = cesaro_average_check(&family, alpha, beta, 1.0, &grid, len).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        // constant family: averages equal the constant
        assert!((cert.measured["b_emp"] - c).abs() < 1e-12 * c);
        // hypothesis nearly saturated
        assert!(cert.measured["hypothesis_max"] > 0.99);
    }

    #[test]
    fn cesaro_violation_is_inconclusive() {
        // sparse spikes sized to break the hypothesis at one radius
        let (alpha, beta) = (2.0, 0.5);
        let mut values = vec![0.0; 200];
        let n_spike = 10usize;
        let r_spike = 10.0f64;
        let w = ln_weight(n_spike, alpha, beta, r_spike).exp();
        values[n_spike - 1] = 2.0 / w;
        let cert =
            cesaro_average_check(&[values], alpha, beta, 1.0, &[r_spike], 200).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert_eq!(cert.measured["violating_sample"], 0.0);
        assert_eq!(cert.measured["violating_r"], r_spike);
    }

    #[test]
    fn lower_bound_average_exp_is_constant() {
        let f = exp_truncated(200);
        let grid: Vec<f64> = (1..=15).map(|k| k as f64).collect();
        let cert = lower_bound_average_check(&f, 2.0, 1.0, 100, 0.6, &grid, 10.0).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        // I_0(2) = 2.2795853...: the averages sit at the constant orbit norm
        let expected = 2.2795853023360673;
        assert!((cert.measured["final_average"] - expected).abs() < 1e-6);
        assert!((cert.measured["sup_average"] - expected).abs() < 1e-6);
    }

    #[test]
    fn lower_bound_average_polynomial_dies() {
        let f = EntireSeries::from_int_coeffs(&[1, 1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0]);
        let grid = [1.0, 2.0, 5.0];
        let cert = lower_bound_average_check(&f, 2.0, 1.0, 10, 5.0, &grid, 100.0).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert!(cert.measured["final_average"] < cert.measured["sup_average"]);
    }

    #[test]
    fn lower_bound_average_envelope_violation_inconclusive() {
        // e^{2z}-like growth violates the critical envelope
        let coeffs: Vec<CRat> = (0u32..=60)
            .map(|n| {
                let two_n = BigRational::from_integer(num_bigint::BigInt::from(2u32).pow(n));
                CRat::new(
                    two_n / BigRational::from_integer(biguint_to_bigint(&factorial(n as usize))),
                    BigRational::zero(),
                )
            })
            .collect();
        let f = EntireSeries::new(coeffs);
        let grid: Vec<f64> = (5..=12).map(|k| k as f64).collect();
        let cert = lower_bound_average_check(&f, 2.0, 1.0, 30, 0.6, &grid, 10.0).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn schedule_lower_bound_counts_b_members() {
        use crate::construct::OmegaSpec;
        use crate::density::build_blocks;
        let schedule =
            WeightSchedule::new(OmegaSpec::Log, build_blocks(&[3]).unwrap()).unwrap();
        // B = [3, 9]; at m = 9 the average is (1/9) sum_{n=3}^{9} log(n+1)^2
        let got = schedule_average_lower_bound(&schedule, 2.0, 9);
        let expected: f64 =
            (3..=9u32).map(|n| ((n as f64) + 1.0).ln().powi(2)).sum::<f64>() / 9.0;
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn uniform_averaging_ratio_settles_at_one() {
        let f = exp_truncated(60);
        for k in [64usize, 256] {
            let (_avg, ratio) = uniform_average_ratio(&f, 3, 1.5, 2.0, k).unwrap();
            assert!((ratio - 1.0).abs() < 1e-8, "k={k}: ratio {ratio}");
        }
    }

    #[test]
    fn barnes_bessel_case() {
        // alpha = 2, beta = 0: S(r) = I_0(2r); the large-r ratio tends to
        // (4 pi)^{-1/2} = 0.2820947917...
        let grid: Vec<f64> = (1..=400).map(|k| k as f64 * 0.1).collect();
        let cert = barnes_series_check(2.0, 0.0, &grid, 20.0, 0.01).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        let limit = 0.2820947917738781;
        let at_max = cert.measured["ratio_at_r_max"];
        assert!((at_max - limit).abs() < 0.02 * limit, "{at_max}");
        // frozen endpoint value from high-precision summation at r = 40
        assert!((at_max - 0.2825387052185455).abs() < 1e-6, "{at_max}");
    }

    #[test]
    fn barnes_exponential_case_is_flat() {
        // alpha = 1, beta = 0: S(r) = e^r and the ratio is identically 1
        let grid: Vec<f64> = (1..=80).map(|k| k as f64 * 0.5).collect();
        let cert = barnes_series_check(1.0, 0.0, &grid, 20.0, 0.01).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert!((cert.measured["ratio_at_r_max"] - 1.0).abs() < 1e-9);
        assert!((cert.measured["sup_ratio"] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn barnes_small_r_prefactor_vanishes() {
        // r -> 0+: the ratio collapses under the r-power prefactor
        let ratio = barnes_ratio(2.0, 1.0, 1e-6);
        assert!(ratio < 1e-3, "{ratio}");
    }

    #[test]
    fn barnes_rejects_bad_alpha() {
        assert!(barnes_series_check(2.5, 0.0, &[1.0, 2.0], 1.0, 0.01).is_err());
        assert!(barnes_series_check(0.0, 0.0, &[1.0, 2.0], 1.0, 0.01).is_err());
    }
}
