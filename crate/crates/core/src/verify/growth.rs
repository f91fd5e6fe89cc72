//! Growth-envelope certificates: is M_p(., r) below phi(r) e^r / r^a
//! across a radius grid?

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::construct::{HarmonicWitness, WeightSchedule, WitnessCase};
use crate::envelope::GrowthEnvelope;
use crate::error::{Error, Result};
use crate::harmonic::{dim_harmonic, m2_sphere, sup_norm_sphere, MultiIndexPoly};
use crate::rational::rational_to_f64;
use crate::series::{m2_norm_ln, mp_norm, EntireSeries};

use super::{
    digest_f64s, digest_inputs, meta_num, meta_str, Certificate, Claim, Verdict, TOL_QUAD_REL,
};

fn grid_meta(r_grid: &[f64]) -> serde_json::Value {
    serde_json::json!({
        "r_min": r_grid.first().copied().unwrap_or(0.0),
        "r_max": r_grid.last().copied().unwrap_or(0.0),
        "points": r_grid.len(),
    })
}

fn verdict_from_ratio(max_ratio: f64, tol: f64) -> Verdict {
    if max_ratio <= 1.0 + tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Max over the grid of M_p(f, r) / envelope(r); pass iff <= 1 + tol.
pub fn check_growth_envelope_entire(
    f: &EntireSeries,
    env: &GrowthEnvelope,
    r_grid: &[f64],
    quad_points: usize,
) -> Result<Certificate> {
    if r_grid.is_empty() {
        return Err(Error::Parameter("empty radius grid".into()));
    }
    let mut max_ratio = 0.0f64;
    let mut arg_max = r_grid[0];
    for &r in r_grid {
        let ln_norm = if env.p == 2.0 {
            match m2_norm_ln(f, r)? {
                None => continue,
                Some(ln) => ln,
            }
        } else {
            let v = mp_norm(f, r, env.p, quad_points.max(4 * f.cap().max(1)))?;
            if v == 0.0 {
                continue;
            }
            v.ln()
        };
        let ratio = (ln_norm - env.ln_eval(r)).exp();
        if ratio > max_ratio {
            max_ratio = ratio;
            arg_max = r;
        }
    }
    let mut horizon = BTreeMap::new();
    horizon.insert("cap".into(), meta_num(f.cap() as u64));
    horizon.insert("grid".into(), grid_meta(r_grid));
    horizon.insert("norm_index".into(), meta_str(format!("{}", env.p)));
    let mut measured = BTreeMap::new();
    measured.insert("max_ratio".into(), max_ratio);
    measured.insert("arg_max_r".into(), arg_max);
    Ok(Certificate {
        claim: Claim::GrowthEnvelope,
        inputs_digest: digest_inputs([
            ("kind", "entire-series".to_string()),
            ("cap", f.cap().to_string()),
            ("env_a", env.a.to_string()),
            ("env_p", env.p.to_string()),
            ("grid", digest_f64s(r_grid)),
        ]),
        horizon,
        measured,
        tolerance: TOL_QUAD_REL,
        verdict: verdict_from_ratio(max_ratio, TOL_QUAD_REL),
    })
}

/// Harmonic version; p = 2 uses the exact sphere norm, p = infinity the
/// sampled sup.
pub fn check_growth_envelope_harmonic(
    h: &MultiIndexPoly,
    env: &GrowthEnvelope,
    r_grid: &[f64],
    samples: usize,
) -> Result<Certificate> {
    if r_grid.is_empty() {
        return Err(Error::Parameter("empty radius grid".into()));
    }
    if env.p != 2.0 && !env.p.is_infinite() {
        return Err(Error::Parameter(format!(
            "harmonic growth checks support p = 2 or infinity, got {}",
            env.p
        )));
    }
    let mut max_ratio = 0.0f64;
    let mut arg_max = r_grid[0];
    for &r in r_grid {
        let norm = if env.p == 2.0 {
            m2_sphere(h, r)?
        } else {
            sup_norm_sphere(h, r, samples)?
        };
        if norm == 0.0 {
            continue;
        }
        let ratio = (norm.ln() - env.ln_eval(r)).exp();
        if ratio > max_ratio {
            max_ratio = ratio;
            arg_max = r;
        }
    }
    let mut horizon = BTreeMap::new();
    horizon.insert(
        "degree".into(),
        meta_num(h.degree().map(u64::from).unwrap_or(0)),
    );
    horizon.insert("grid".into(), grid_meta(r_grid));
    horizon.insert("norm_index".into(), meta_str(format!("{}", env.p)));
    let mut measured = BTreeMap::new();
    measured.insert("max_ratio".into(), max_ratio);
    measured.insert("arg_max_r".into(), arg_max);
    Ok(Certificate {
        claim: Claim::GrowthEnvelope,
        inputs_digest: digest_inputs([
            ("kind", "harmonic-poly".to_string()),
            ("dim", h.dim().to_string()),
            ("terms", h.num_terms().to_string()),
            ("env_a", env.a.to_string()),
            ("env_p", env.p.to_string()),
            ("grid", digest_f64s(r_grid)),
        ]),
        horizon,
        measured,
        tolerance: TOL_QUAD_REL,
        verdict: verdict_from_ratio(max_ratio, TOL_QUAD_REL),
    })
}

/// Rigorous sup-norm growth certificate for a constructed harmonic
/// witness: checks
///   sum_n omega*_{n+1} sqrt(d_{(n+1)q}) r^{(n+1)q} M_2(H_{n alpha}, 1)
///     <= c_mult r^{a_exp} e^{c_N r}
/// across the grid. The left side majorizes M_inf(h, r) term by term, so
/// a pass certifies the envelope for the witness itself.
pub fn growth_majorant_harmonic(
    witness: &HarmonicWitness,
    schedule: &WeightSchedule,
    c_mult: f64,
    a_exp: f64,
    c_n: f64,
    r_grid: &[f64],
) -> Result<Certificate> {
    let WitnessCase::Harmonic { dim, .. } = witness.params.case else {
        return Err(Error::Parameter("majorant check needs a harmonic witness".into()));
    };
    if r_grid.is_empty() {
        return Err(Error::Parameter("empty radius grid".into()));
    }
    let q = witness.params.case.alpha_order();
    // sqrt(d_m) M_2(H_{n alpha}, 1) per chain link, fixed once
    let link_factors: Vec<f64> = witness
        .chain_m2_at_1
        .iter()
        .enumerate()
        .map(|(n, m2_sq)| {
            let d = dim_harmonic(dim, (n + 1) * q).to_f64().unwrap_or(f64::INFINITY);
            d.sqrt() * rational_to_f64(m2_sq).sqrt()
        })
        .collect();
    let mut max_ratio = 0.0f64;
    let mut arg_max = r_grid[0];
    for &r in r_grid {
        if !(r > 0.0) {
            return Err(Error::Parameter(format!("grid radius must be positive, got {r}")));
        }
        let mut majorant = 0.0f64;
        for (n, lf) in link_factors.iter().enumerate() {
            let w = schedule.omega_star((n + 1) as u128);
            if w != 0.0 {
                majorant += w * lf * r.powi(((n + 1) * q) as i32);
            }
        }
        let env = c_mult * r.powf(a_exp) * (c_n * r).exp();
        let ratio = majorant / env;
        if ratio > max_ratio {
            max_ratio = ratio;
            arg_max = r;
        }
    }
    let mut horizon = BTreeMap::new();
    horizon.insert("cap".into(), meta_num(witness.params.cap as u64));
    horizon.insert("grid".into(), grid_meta(r_grid));
    horizon.insert("norm_model".into(), meta_str("sqrt-dm-coefficient-majorant"));
    let mut measured = BTreeMap::new();
    measured.insert("max_ratio".into(), max_ratio);
    measured.insert("arg_max_r".into(), arg_max);
    measured.insert("c_mult".into(), c_mult);
    measured.insert("a_exp".into(), a_exp);
    measured.insert("c_n".into(), c_n);
    Ok(Certificate {
        claim: Claim::GrowthEnvelope,
        inputs_digest: digest_inputs([
            ("kind", "harmonic-witness".to_string()),
            ("cap", witness.params.cap.to_string()),
            ("c_mult", c_mult.to_string()),
            ("a_exp", a_exp.to_string()),
            ("grid", digest_f64s(r_grid)),
        ]),
        horizon,
        measured,
        tolerance: TOL_QUAD_REL,
        verdict: verdict_from_ratio(max_ratio, TOL_QUAD_REL),
    })
}
