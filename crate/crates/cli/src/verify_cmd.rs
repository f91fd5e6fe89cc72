//! `dichaos verify`: run one certificate, write it to disk, print a
//! summary line, and exit 0/1/3 for pass/fail/inconclusive.

use std::path::Path;
use std::process::ExitCode;

use dichaos_core::construct::{
    build_irregular_harmonic, build_weight_star, harmonic_orbit_readouts,
    harmonic_orbit_sup_bounds, WeightSchedule, WitnessCase,
};
use dichaos_core::error::{Error, Result};
use dichaos_core::harmonic::c_n_constant;
use dichaos_core::io;
use dichaos_core::series::{orbit_readouts, orbit_sup_bounds};
use dichaos_core::verify::{
    absolutely_cesaro_check, barnes_series_check, certify_distributionally_unbounded,
    certify_near_zero, cesaro_average_check, check_growth_envelope_entire,
    check_growth_envelope_harmonic, growth_majorant_harmonic, lower_bound_average_check,
    Certificate, Verdict,
};
use dichaos_core::GrowthEnvelope;

use crate::construct_cmd::{load_artifact, WitnessArtifact};
use crate::manifest::RunManifest;
use crate::{parse_norm_index, parse_scale, radius_grid, ClaimArg, VerifyArgs};

fn require<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parameter(format!("missing required flag {flag}")))
}

fn require_path<'a>(v: &'a Option<std::path::PathBuf>, flag: &str) -> Result<&'a Path> {
    v.as_deref()
        .ok_or_else(|| Error::Parameter(format!("missing required flag {flag}")))
}

fn schedule_of(artifact: &WitnessArtifact) -> Result<WeightSchedule> {
    build_weight_star(artifact.omega.clone(), &artifact.params)
}

fn envelope_from_flags(args: &VerifyArgs) -> Result<GrowthEnvelope> {
    let a = require(args.env_a, "--env-a")?;
    let phi = parse_scale(args.env_phi.as_deref().unwrap_or("const:1"))?;
    let p = parse_norm_index(args.env_p.as_deref().unwrap_or("2"))?;
    GrowthEnvelope::new(a, phi, p)
}

pub fn run(args: &VerifyArgs) -> Result<ExitCode> {
    let cert = build_certificate(args)?;
    let cert_path = args
        .out
        .join(format!("certificate-{}.json", cert.claim.as_str()));
    io::write_text(&cert_path, &cert.to_json())?;
    let mut manifest = RunManifest::new(
        "verify",
        serde_json::json!({
            "claim": cert.claim.as_str(),
            "inputs_digest": cert.inputs_digest,
            "tolerance": cert.tolerance,
        }),
    );
    manifest.seed = args.seed;
    if let Some(p) = &args.input {
        manifest.inputs.push(p.clone());
    }
    if let Some(p) = &args.params {
        manifest.inputs.push(p.clone());
    }
    manifest.outputs.push(cert_path.clone());
    manifest.write(&args.out)?;
    println!("{} -> {}", cert.summary(), cert_path.display());
    Ok(match cert.verdict {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::from(1),
        Verdict::Inconclusive => ExitCode::from(3),
    })
}

fn build_certificate(args: &VerifyArgs) -> Result<Certificate> {
    match args.claim {
        ClaimArg::GrowthEnvelope => {
            let env = envelope_from_flags(args)?;
            let grid = radius_grid(args.r_min, args.r_max, args.r_steps)?;
            let input = require_path(&args.input, "--input")?;
            let text = io::read_text(input)?;
            // certificate plus the per-radius ratio table
            let mut csv = String::from("r,norm,envelope,ratio\n");
            let cert = if text.contains("\"entire-series\"") {
                let f = io::series_from_json(&text)?;
                for &r in &grid {
                    let norm = if env.p == 2.0 {
                        dichaos_core::series::m2_norm(&f, r)?
                    } else {
                        dichaos_core::series::mp_norm(
                            &f,
                            r,
                            env.p,
                            args.quad.unwrap_or(0).max(4 * f.cap().max(1)),
                        )?
                    };
                    let e = env.eval(r);
                    csv.push_str(&format!("{r},{norm},{e},{}\n", norm / e));
                }
                check_growth_envelope_entire(&f, &env, &grid, args.quad.unwrap_or(0))?
            } else {
                let h = io::poly_from_json(&text)?;
                for &r in &grid {
                    let norm = if env.p == 2.0 {
                        dichaos_core::harmonic::m2_sphere(&h, r)?
                    } else {
                        dichaos_core::harmonic::sup_norm_sphere(&h, r, args.quad.unwrap_or(4096))?
                    };
                    let e = env.eval(r);
                    csv.push_str(&format!("{r},{norm},{e},{}\n", norm / e));
                }
                check_growth_envelope_harmonic(&h, &env, &grid, args.quad.unwrap_or(4096))?
            };
            io::write_text(&args.out.join("growth-ratios.csv"), &csv)?;
            Ok(cert)
        }
        ClaimArg::GrowthMajorant => {
            let artifact = load_artifact(require_path(&args.params, "--params")?)?;
            let schedule = schedule_of(&artifact)?;
            let witness = build_irregular_harmonic(&artifact.params, &schedule)?;
            let WitnessCase::Harmonic { dim, .. } = artifact.params.case else {
                return Err(Error::Parameter("growth-majorant needs a harmonic witness".into()));
            };
            let grid = radius_grid(args.r_min, args.r_max, args.r_steps)?;
            // measured defaults for the plane; override with --c / --env-a
            let c_mult = args.c.unwrap_or(std::f64::consts::SQRT_2);
            let a_exp = args.env_a.unwrap_or(1.0);
            growth_majorant_harmonic(&witness, &schedule, c_mult, a_exp, c_n_constant(dim), &grid)
        }
        ClaimArg::DiUnbounded => {
            let artifact = load_artifact(require_path(&args.params, "--params")?)?;
            let schedule = schedule_of(&artifact)?;
            let input = require_path(&args.input, "--input")?;
            let text = io::read_text(input)?;
            let horizon = args.horizon.unwrap_or(artifact.params.cap);
            let norms = match &artifact.params.case {
                WitnessCase::Entire => {
                    let f = io::series_from_json(&text)?;
                    orbit_readouts(&f, horizon.min(f.cap()))
                }
                WitnessCase::Harmonic { alpha, .. } => {
                    let h = io::poly_from_json(&text)?;
                    harmonic_orbit_readouts(&h, alpha, horizon.min(artifact.params.cap + 1))
                }
            };
            certify_distributionally_unbounded(&norms, &schedule, &artifact.params.anchors_b)
        }
        ClaimArg::NearZero => {
            let artifact = load_artifact(require_path(&args.params, "--params")?)?;
            let schedule = schedule_of(&artifact)?;
            let r = args.r.unwrap_or(1.0);
            let horizon = args.horizon.unwrap_or(artifact.params.cap);
            let norms = match &artifact.params.case {
                WitnessCase::Entire => {
                    let input = require_path(&args.input, "--input")?;
                    let f = io::series_from_json(&io::read_text(input)?)?;
                    orbit_sup_bounds(&f, horizon.min(f.cap()), r)?
                }
                WitnessCase::Harmonic { .. } => {
                    let witness = build_irregular_harmonic(&artifact.params, &schedule)?;
                    harmonic_orbit_sup_bounds(&witness, &schedule, horizon, r)?
                }
            };
            // blocks K < c r carry no guarantee at this radius
            let c = match &artifact.params.case {
                WitnessCase::Entire => 1.0,
                WitnessCase::Harmonic { dim, .. } => c_n_constant(*dim),
            };
            let first_block = (c * r).ceil().max(1.0) as usize;
            let eps: Vec<f64> = (1..=artifact.params.anchors_a.len())
                .map(|k| 1.0 / k as f64)
                .collect();
            certify_near_zero(&norms, &artifact.params.anchors_a, &eps, first_block)
        }
        ClaimArg::CesaroAverage => {
            let alpha = require(args.alpha, "--alpha")?;
            let beta = require(args.beta, "--beta")?;
            let c_hyp = args.c.unwrap_or(1.0);
            let m_max = args.horizon.unwrap_or(500);
            let grid = radius_grid(args.r_min, args.r_max, args.r_steps)?;
            // built-in family: constants saturating the hypothesis on the grid
            let len = 2 * m_max;
            let family = saturating_family(alpha, beta, c_hyp, &grid, len);
            cesaro_average_check(&family, alpha, beta, c_hyp, &grid, m_max)
        }
        ClaimArg::LowerBoundAverage => {
            let input = require_path(&args.input, "--input")?;
            let f = io::series_from_json(&io::read_text(input)?)?;
            let p = require(args.p, "--p")?;
            let r = args.r.unwrap_or(1.0);
            let m_max = args.horizon.unwrap_or(100);
            let c_env = args.c.unwrap_or(0.6);
            let grid = radius_grid(args.r_min, args.r_max, args.r_steps)?;
            lower_bound_average_check(&f, p, r, m_max, c_env, &grid, 10.0)
        }
        ClaimArg::BarnesSeries => {
            let alpha = require(args.alpha, "--alpha")?;
            let beta = require(args.beta, "--beta")?;
            let split = args.split.unwrap_or(args.r_max / 2.0);
            let tol = args.tolerance.unwrap_or(0.01);
            let grid = radius_grid(args.r_min, args.r_max, args.r_steps)?;
            barnes_series_check(alpha, beta, &grid, split, tol)
        }
        ClaimArg::AbsCesaro => {
            let dim = args.dim.unwrap_or(51);
            let n_max = args.horizon.unwrap_or(200);
            let bound = args.bound.unwrap_or(2.0);
            // truncated differentiation model on the factorial-decay vector
            let weights: Vec<f64> = (1..dim).map(|k| k as f64).collect();
            let model = dichaos_core::verify::weighted_shift_matrix(&weights);
            let mut x = vec![1.0f64];
            for k in 1..dim {
                let prev = x[k - 1];
                x.push(prev / k as f64);
            }
            absolutely_cesaro_check(&model, &[x], &[false], n_max, bound)
        }
    }
}

fn saturating_family(
    alpha: f64,
    beta: f64,
    c_hyp: f64,
    grid: &[f64],
    len: usize,
) -> Vec<Vec<f64>> {
    let ln_weight = |n: usize, r: f64| -> f64 {
        let lf: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        (alpha * n as f64 + beta) * r.ln() - alpha * r - alpha * lf
            - (beta - alpha / 2.0 + 0.5) * (n as f64).ln()
    };
    let w_max = grid
        .iter()
        .map(|&r| (1..=len).map(|n| ln_weight(n, r).exp()).sum::<f64>())
        .fold(0.0, f64::max);
    let c = (1.0 - 1e-9) * c_hyp / w_max;
    vec![
        vec![c; len],
        (1..=len).map(|n| c * n as f64 / (n as f64 + 1.0)).collect(),
        (1..=len).map(|n| c * (2 + (n % 2)) as f64 / 3.0).collect(),
    ]
}
