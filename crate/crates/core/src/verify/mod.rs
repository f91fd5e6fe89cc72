//! Machine-checkable certificates for the inequalities and limit
//! statements the constructions are supposed to witness.
//!
//! Every certificate is a deterministic function of its inputs: fixed
//! summation orders, fixed grids, and no ambient randomness without a
//! recorded seed. Inconclusive verdicts are first-class; a failed
//! hypothesis must not read as a refuted conclusion.

pub mod averages;
pub mod frechet;
pub mod growth;
pub mod orbit;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use averages::{
    barnes_series_check, cesaro_average_check, lower_bound_average_check,
    schedule_average_lower_bound, uniform_average_ratio,
};
pub use frechet::{
    frechet_distance, frechet_distance_harmonic, frechet_distance_series,
    orbit_pair_distribution, FrechetDistance,
};
pub use growth::{
    check_growth_envelope_entire, check_growth_envelope_harmonic, growth_majorant_harmonic,
};
pub use orbit::{
    absolutely_cesaro_check, certify_distributionally_unbounded, certify_near_zero,
    weighted_shift_matrix,
};

/// Relative tolerance for comparisons backed by exact formulas.
pub const TOL_EXACT_REL: f64 = 1e-9;
/// Relative tolerance for comparisons backed by quadrature or sampling.
pub const TOL_QUAD_REL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    GrowthEnvelope,
    DistributionallyUnbounded,
    NearZero,
    CesaroAverage,
    LowerBoundAverage,
    BarnesSeries,
    AbsolutelyCesaro,
}

impl Claim {
    pub fn as_str(&self) -> &'static str {
        match self {
            Claim::GrowthEnvelope => "growth-envelope",
            Claim::DistributionallyUnbounded => "distributionally-unbounded",
            Claim::NearZero => "near-zero",
            Claim::CesaroAverage => "cesaro-average",
            Claim::LowerBoundAverage => "lower-bound-average",
            Claim::BarnesSeries => "barnes-series",
            Claim::AbsolutelyCesaro => "absolutely-cesaro",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One verification run: what was claimed, over which horizon/grid, what
/// was measured, and the verdict at the stated tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: Claim,
    pub inputs_digest: String,
    /// horizon and grid metadata (caps, anchors, grids, norm model, ...)
    pub horizon: BTreeMap<String, serde_json::Value>,
    pub measured: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        format!("{}: {verdict} (tolerance {})", self.claim.as_str(), self.tolerance)
    }
}

/// SHA-256 over a canonical "key=value" listing of the inputs.
pub fn digest_inputs<I, K, V>(parts: I) -> String
where
    I: IntoIterator<Item = (K, V)>,
    K: AsRef<str>,
    V: AsRef<str>,
{
    let mut hasher = Sha256::new();
    for (k, v) in parts {
        hasher.update(k.as_ref().as_bytes());
        hasher.update(b"=");
        hasher.update(v.as_ref().as_bytes());
        hasher.update(b";");
    }
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Canonical digest text for a float slice (bit-exact).
pub fn digest_f64s(values: &[f64]) -> String {
    let mut hasher = Sha256::new();
    for v in values {
        hasher.update(v.to_bits().to_le_bytes());
    }
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) fn meta_num(x: impl Into<serde_json::Number>) -> serde_json::Value {
    serde_json::Value::Number(x.into())
}

pub(crate) fn meta_str(s: impl Into<String>) -> serde_json::Value {
    serde_json::Value::String(s.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = digest_inputs([("cap", "100"), ("r", "2.0")]);
        let b = digest_inputs([("cap", "100"), ("r", "2.0")]);
        let c = digest_inputs([("cap", "101"), ("r", "2.0")]);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn certificate_round_trips_through_json() {
        let mut horizon = BTreeMap::new();
        horizon.insert("cap".to_string(), meta_num(100u64));
        let mut measured = BTreeMap::new();
        measured.insert("max_ratio".to_string(), 0.53);
        let cert = Certificate {
            claim: Claim::GrowthEnvelope,
            inputs_digest: digest_f64s(&[1.0, 2.0]),
            horizon,
            measured,
            tolerance: 1e-9,
            verdict: Verdict::Pass,
        };
        let json = cert.to_json();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back.claim, Claim::GrowthEnvelope);
        assert_eq!(back.verdict, Verdict::Pass);
        assert_eq!(back.measured["max_ratio"], 0.53);
        assert!(json.contains("\"growth-envelope\""));
        assert!(json.contains("\"pass\""));
    }
}
