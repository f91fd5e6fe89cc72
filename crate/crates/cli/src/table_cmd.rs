//! `dichaos table`: deterministic CSV (or JSON) tables for the quantities
//! the paper's statements range over.

use std::process::ExitCode;

use dichaos_core::density::{build_blocks, partial_density};
use dichaos_core::error::{Error, Result};
use dichaos_core::harmonic::{c_n_constant, dim_harmonic};
use dichaos_core::io;
use dichaos_core::rational::rational_to_f64;
use dichaos_core::series::{m2_norm, mp_norm, orbit_readouts};
use dichaos_core::verify::digest_inputs;

use crate::manifest::RunManifest;
use crate::{parse_norm_index, parse_scale, radius_grid, OutputFormat, Quantity, TableArgs};

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("table serializes")
    }
}

pub fn run(args: &TableArgs) -> Result<ExitCode> {
    let table = build_table(args)?;
    let text = match args.format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json(),
    };
    match &args.csv {
        Some(path) => {
            io::write_text(path, &text)?;
            if args.gnuplot {
                let gp = path.with_extension("gp");
                io::write_text(&gp, &gnuplot_script(path, &table))?;
            }
            if let Some(dir) = path.parent() {
                let mut manifest = RunManifest::new(
                    "table",
                    serde_json::json!({
                        "rows": table.rows.len(),
                        "digest": digest_inputs([("csv", text.as_str())]),
                    }),
                );
                manifest.outputs.push(path.clone());
                manifest.write(dir)?;
            }
            println!("wrote {} rows -> {}", table.rows.len(), path.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Minimal plot script: second column against the first.
fn gnuplot_script(csv: &std::path::Path, table: &Table) -> String {
    let name = csv.file_name().and_then(|n| n.to_str()).unwrap_or("table.csv");
    let mut s = String::from("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{}'\n", table.header[0]));
    s.push_str(&format!("set ylabel '{}'\n", table.header[1]));
    s.push_str(&format!("plot '{name}' using 1:2 with linespoints\n"));
    s
}

fn build_table(args: &TableArgs) -> Result<Table> {
    match args.quantity {
        Quantity::Dims => {
            if args.n_min < 2 || args.n_max < args.n_min {
                return Err(Error::Parameter("need 2 <= n-min <= n-max".into()));
            }
            let mut rows = Vec::new();
            for dim in args.n_min..=args.n_max {
                for m in 0..=args.m_max {
                    rows.push(vec![
                        dim.to_string(),
                        m.to_string(),
                        dim_harmonic(dim, m).to_string(),
                    ]);
                }
            }
            Ok(Table { header: vec!["N", "m", "dim"], rows })
        }
        Quantity::Constants => {
            if args.n_min < 2 || args.n_max < args.n_min {
                return Err(Error::Parameter("need 2 <= n-min <= n-max".into()));
            }
            let rows = (args.n_min..=args.n_max)
                .map(|dim| {
                    let c = c_n_constant(dim);
                    let s = (dim as f64 / 2.0).sqrt();
                    vec![dim.to_string(), c.to_string(), s.to_string(), (c - s).to_string()]
                })
                .collect();
            Ok(Table { header: vec!["N", "c_N", "sqrt_N_over_2", "gap"], rows })
        }
        Quantity::Growth => {
            let input = args
                .input
                .as_deref()
                .ok_or_else(|| Error::Parameter("missing required flag --input".into()))?;
            let text = io::read_text(input)?;
            let env_a = args
                .env_a
                .ok_or_else(|| Error::Parameter("missing required flag --env-a".into()))?;
            let phi = parse_scale(args.env_phi.as_deref().unwrap_or("const:1"))?;
            let p = parse_norm_index(args.env_p.as_deref().unwrap_or("2"))?;
            let env = dichaos_core::GrowthEnvelope::new(env_a, phi, p)?;
            let grid = radius_grid(args.r_min, args.r_max, args.r_steps)?;
            let mut rows = Vec::new();
            if text.contains("\"entire-series\"") {
                let f = io::series_from_json(&text)?;
                for &r in &grid {
                    let norm = if p == 2.0 {
                        m2_norm(&f, r)?
                    } else {
                        mp_norm(&f, r, p, 4 * f.cap().max(1))?
                    };
                    let e = env.eval(r);
                    rows.push(vec![
                        r.to_string(),
                        norm.to_string(),
                        e.to_string(),
                        (norm / e).to_string(),
                    ]);
                }
            } else {
                let h = io::poly_from_json(&text)?;
                for &r in &grid {
                    let norm = if p == 2.0 {
                        dichaos_core::harmonic::m2_sphere(&h, r)?
                    } else {
                        dichaos_core::harmonic::sup_norm_sphere(&h, r, 4096)?
                    };
                    let e = env.eval(r);
                    rows.push(vec![
                        r.to_string(),
                        norm.to_string(),
                        e.to_string(),
                        (norm / e).to_string(),
                    ]);
                }
            }
            Ok(Table { header: vec!["r", "norm", "envelope", "ratio"], rows })
        }
        Quantity::Orbit => {
            let input = args
                .input
                .as_deref()
                .ok_or_else(|| Error::Parameter("missing required flag --input".into()))?;
            let text = io::read_text(input)?;
            let mut rows = Vec::new();
            if text.contains("\"entire-series\"") {
                let f = io::series_from_json(&text)?;
                let horizon = args.horizon.unwrap_or(f.cap()).min(f.cap());
                let readouts = orbit_readouts(&f, horizon);
                for (n, v) in readouts.iter().enumerate() {
                    rows.push(vec![n.to_string(), v.to_string()]);
                }
            } else {
                let h = io::poly_from_json(&text)?;
                let horizon = args.horizon.unwrap_or(64);
                // readouts for the first coordinate derivative
                let mut alpha = vec![0u32; h.dim()];
                alpha[0] = 1;
                let readouts =
                    dichaos_core::construct::harmonic_orbit_readouts(&h, &alpha, horizon);
                for (n, v) in readouts.iter().enumerate() {
                    rows.push(vec![n.to_string(), v.to_string()]);
                }
            }
            Ok(Table { header: vec!["n", "readout"], rows })
        }
        Quantity::Density => {
            let params = args
                .params
                .as_deref()
                .ok_or_else(|| Error::Parameter("missing required flag --params".into()))?;
            let text = io::read_text(params)?;
            let (anchors, label): (Vec<u128>, &str) =
                if text.contains("\"index-set\"") {
                    let set = io::index_set_from_json(&text)?;
                    // one row per interval end
                    let mut rows = Vec::new();
                    for (k, &(lo, hi)) in set.intervals().iter().enumerate() {
                        let d = partial_density(&set, hi)?;
                        rows.push(vec![
                            (k + 1).to_string(),
                            lo.to_string(),
                            hi.to_string(),
                            rational_to_f64(&d).to_string(),
                        ]);
                    }
                    return Ok(Table {
                        header: vec!["block", "lo", "checkpoint", "density"],
                        rows,
                    });
                } else {
                    let artifact = crate::construct_cmd::load_artifact(params)?;
                    match args.set.as_deref() {
                        Some("b") => (artifact.params.anchors_b, "b"),
                        _ => (artifact.params.anchors_a, "a"),
                    }
                };
            let set = build_blocks(&anchors)?;
            let mut rows = Vec::new();
            for (k, &a) in anchors.iter().enumerate() {
                let checkpoint = a * a;
                let d = partial_density(&set, checkpoint)?;
                let threshold = 1.0 - 1.0 / a as f64;
                rows.push(vec![
                    format!("{label}{}", k + 1),
                    checkpoint.to_string(),
                    rational_to_f64(&d).to_string(),
                    threshold.to_string(),
                ]);
            }
            Ok(Table { header: vec!["block", "checkpoint", "density", "threshold"], rows })
        }
    }
}
