//! Growth majorants of the form phi(r) e^r / r^a.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The scale factor phi in front of e^r / r^a.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScaleFn {
    /// phi(r) = c
    Constant { c: f64 },
    /// phi(r) = log(e + r)
    LogEPlusR,
    /// phi(r) = r^eps
    Power { eps: f64 },
    /// piecewise-linear interpolation of (r, phi) pairs
    Table { points: Vec<(f64, f64)> },
}

impl ScaleFn {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            ScaleFn::Constant { c } => *c,
            ScaleFn::LogEPlusR => (std::f64::consts::E + r).ln(),
            ScaleFn::Power { eps } => r.powf(*eps),
            ScaleFn::Table { points } => {
                assert!(!points.is_empty(), "empty scale table");
                if r <= points[0].0 {
                    return points[0].1;
                }
                for w in points.windows(2) {
                    let ((r0, p0), (r1, p1)) = (w[0], w[1]);
                    if r <= r1 {
                        let t = (r - r0) / (r1 - r0);
                        return p0 + t * (p1 - p0);
                    }
                }
                points.last().unwrap().1
            }
        }
    }
}

/// Majorant r -> phi(r) e^r / r^a paired with the norm index it bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEnvelope {
    /// polynomial-correction exponent a
    pub a: f64,
    pub phi: ScaleFn,
    /// norm index p in [1, inf]; serialized as a float, f64::INFINITY for sup
    pub p: f64,
}

impl GrowthEnvelope {
    pub fn new(a: f64, phi: ScaleFn, p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::Parameter(format!("norm index must satisfy p >= 1, got {p}")));
        }
        Ok(GrowthEnvelope { a, phi, p })
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.ln_eval(r).exp()
    }

    /// ln(phi(r) e^r / r^a); keeps r up to ~700 representable downstream.
    pub fn ln_eval(&self, r: f64) -> f64 {
        assert!(r > 0.0, "envelope evaluated at r <= 0");
        self.phi.eval(r).ln() + r - self.a * r.ln()
    }
}
