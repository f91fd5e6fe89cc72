//! `dichaos construct`: build a witness and persist function file,
//! parameter echo, and manifest.

use std::path::Path;
use std::process::ExitCode;

use serde::{Deserialize, Serialize};

use dichaos_core::construct::{
    build_irregular_entire, build_irregular_harmonic, build_weight_star,
    choose_block_parameters, ConstructionParams, OmegaSpec, WitnessCase,
};
use dichaos_core::error::{Error, Result};
use dichaos_core::io;

use crate::manifest::RunManifest;
use crate::{ConstructArgs, Kind};

/// What a `--params` file may specify; everything has a default.
#[derive(Default, Serialize, Deserialize)]
pub struct ConstructRequest {
    #[serde(default)]
    pub case: Option<WitnessCase>,
    #[serde(default)]
    pub k_max: Option<usize>,
    #[serde(default)]
    pub a_const: Option<f64>,
    #[serde(default)]
    pub c_const: Option<f64>,
    #[serde(default)]
    pub cap: Option<usize>,
    #[serde(default)]
    pub omega: Option<OmegaSpec>,
    /// explicit anchors (skip the selection scan)
    #[serde(default)]
    pub anchors_a: Option<Vec<u128>>,
    #[serde(default)]
    pub anchors_b: Option<Vec<u128>>,
}

/// Parameter echo written next to the function file; later `verify`
/// calls read the construction back from here.
#[derive(Serialize, Deserialize)]
pub struct WitnessArtifact {
    pub params: ConstructionParams,
    pub omega: OmegaSpec,
    /// exact M_2^2(H_{n alpha}, 1) of the antiderivative chain
    /// (harmonic witnesses only)
    #[serde(default)]
    pub chain_m2_sq_at_1: Option<Vec<String>>,
}

pub fn load_artifact(path: &Path) -> Result<WitnessArtifact> {
    let text = io::read_text(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn run(args: &ConstructArgs) -> Result<ExitCode> {
    let request: ConstructRequest = match &args.params {
        Some(path) => serde_json::from_str(&io::read_text(path)?)?,
        None => ConstructRequest::default(),
    };
    let case = match (&args.kind, request.case.clone()) {
        (Kind::Entire, None) => WitnessCase::Entire,
        (Kind::Harmonic, None) => WitnessCase::Harmonic { dim: 2, alpha: vec![1, 0] },
        (Kind::Entire, Some(WitnessCase::Entire)) => WitnessCase::Entire,
        (Kind::Harmonic, Some(c @ WitnessCase::Harmonic { .. })) => c,
        _ => {
            return Err(Error::Parameter(
                "--kind does not match the params file case".into(),
            ))
        }
    };
    let cap = request.cap.unwrap_or(match case {
        WitnessCase::Entire => 2000,
        WitnessCase::Harmonic { .. } => 60,
    });
    let k_max = request.k_max.unwrap_or(match case {
        WitnessCase::Entire => 3,
        WitnessCase::Harmonic { .. } => 2,
    });
    let a_const = request.a_const.unwrap_or(1.0);
    let c_const = request.c_const.unwrap_or(1.0);
    let omega = request.omega.unwrap_or(OmegaSpec::Log);

    let params = match (&request.anchors_a, &request.anchors_b) {
        (Some(a), Some(b)) => {
            let p = ConstructionParams {
                case: case.clone(),
                a_const,
                c_const,
                anchors_a: a.clone(),
                anchors_b: b.clone(),
                cap,
            };
            p.validate()?;
            p
        }
        (None, None) => choose_block_parameters(&case, k_max, a_const, c_const, cap)?,
        _ => {
            return Err(Error::Parameter(
                "anchors_a and anchors_b must be given together".into(),
            ))
        }
    };
    let schedule = build_weight_star(omega.clone(), &params)?;

    let (function_json, chain) = match case {
        WitnessCase::Entire => {
            let f = build_irregular_entire(&params, &schedule)?;
            (io::series_to_json(&f), None)
        }
        WitnessCase::Harmonic { .. } => {
            let witness = build_irregular_harmonic(&params, &schedule)?;
            let chain: Vec<String> = witness
                .chain_m2_at_1
                .iter()
                .map(io::rational_to_string)
                .collect();
            (io::poly_to_json(&witness.poly), Some(chain))
        }
    };

    let artifact = WitnessArtifact {
        params: params.clone(),
        omega: omega.clone(),
        chain_m2_sq_at_1: chain,
    };
    let function_path = args.out.join("function.json");
    let artifact_path = args.out.join("params.json");
    io::write_text(&function_path, &function_json)?;
    io::write_text(
        &artifact_path,
        &serde_json::to_string_pretty(&artifact).expect("artifact serializes"),
    )?;

    let mut manifest = RunManifest::new(
        "construct",
        serde_json::json!({
            "case": params.case,
            "cap": params.cap,
            "k_max": k_max,
            "a_const": params.a_const,
            "c_const": params.c_const,
            "anchors_a": params.anchors_a,
            "anchors_b": params.anchors_b,
            "omega": omega,
        }),
    );
    if let Some(p) = &args.params {
        manifest.inputs.push(p.clone());
    }
    manifest.outputs.push(function_path.clone());
    manifest.outputs.push(artifact_path);
    manifest.write(&args.out)?;

    println!(
        "constructed {} witness: cap {}, anchors a = {:?}, b = {:?} -> {}",
        match params.case {
            WitnessCase::Entire => "entire",
            WitnessCase::Harmonic { .. } => "harmonic",
        },
        params.cap,
        params.anchors_a,
        params.anchors_b,
        function_path.display()
    );
    Ok(ExitCode::SUCCESS)
}
