//! Constructive machinery: block-parameter selection, weight schedules,
//! the distributionally irregular entire and harmonic witnesses, and
//! periodic points for the one-sided-inverse pair (D, S).
//!
//! All limit statements degrade to finite-horizon claims here; every
//! constructed object carries enough data (caps, anchors, chain norms)
//! for the verifier to state its certificates at an explicit horizon.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::density::{build_blocks, IndexSet};
use crate::error::{Error, Result};
use crate::harmonic::{
    antiderivative_alpha, homogeneous_decompose, m2_sq_exact, MultiIndexPoly,
};
use crate::rational::{biguint_to_bigint, factorial, rational_from_f64, rational_to_f64, CRat};
use crate::series::{differentiate_n, EntireSeries};

/// The weight sequence omega_n (n >= 1) driving a construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OmegaSpec {
    /// omega_n = log(n + 1); the default — slow growth keeps caps small.
    Log,
    /// omega_n = sqrt(n)
    Sqrt,
    /// omega_n = n^2 (clipped to n by the tilde rule almost immediately)
    Square,
    /// explicit values omega_1, omega_2, ...; indices beyond the table
    /// repeat the last value
    Table { values: Vec<f64> },
}

impl OmegaSpec {
    pub fn value(&self, n: u128) -> f64 {
        assert!(n >= 1, "weights are indexed from 1");
        match self {
            OmegaSpec::Log => ((n + 1) as f64).ln(),
            OmegaSpec::Sqrt => (n as f64).sqrt(),
            OmegaSpec::Square => (n as f64) * (n as f64),
            OmegaSpec::Table { values } => {
                let i = ((n - 1) as usize).min(values.len().saturating_sub(1));
                values.get(i).copied().unwrap_or(0.0)
            }
        }
    }
}

/// omega, its clip omega~_n = min(omega_n, n), and the B-supported
/// omega*_n (zero off B). Values are computed on demand so horizons far
/// beyond any materialized vector stay cheap.
#[derive(Clone, Debug)]
pub struct WeightSchedule {
    pub omega: OmegaSpec,
    pub b_set: IndexSet,
}

impl WeightSchedule {
    pub fn new(omega: OmegaSpec, b_set: IndexSet) -> Result<Self> {
        if let OmegaSpec::Table { values } = &omega {
            if values.iter().any(|v| !(*v >= 0.0)) {
                return Err(Error::Parameter("weights must be non-negative".into()));
            }
        }
        Ok(WeightSchedule { omega, b_set })
    }

    pub fn omega(&self, n: u128) -> f64 {
        self.omega.value(n)
    }

    pub fn omega_tilde(&self, n: u128) -> f64 {
        self.omega.value(n).min(n as f64)
    }

    pub fn omega_star(&self, n: u128) -> f64 {
        if self.b_set.contains(n) {
            self.omega_tilde(n)
        } else {
            0.0
        }
    }

    /// omega*_0..omega*_horizon as a vector (entry 0 unused, set to 0).
    pub fn omega_star_vec(&self, horizon: usize) -> Vec<f64> {
        let mut v = vec![0.0; horizon + 1];
        for n in 1..=horizon {
            v[n] = self.omega_star(n as u128);
        }
        v
    }
}

/// Which differentiation operator a construction targets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum WitnessCase {
    /// D = d/dz on entire functions (order-1 analogue of the harmonic case)
    Entire,
    /// D^alpha on harmonic functions on R^dim
    Harmonic { dim: usize, alpha: Vec<u32> },
}

impl WitnessCase {
    pub fn alpha_order(&self) -> usize {
        match self {
            WitnessCase::Entire => 1,
            WitnessCase::Harmonic { alpha, .. } => {
                alpha.iter().map(|&a| a as usize).sum()
            }
        }
    }
}

/// Everything needed to reproduce one witness construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub case: WitnessCase,
    /// selection-inequality constants (measured defaults; see
    /// `harmonic::calibrate_lemma_constants`)
    pub a_const: f64,
    pub c_const: f64,
    pub anchors_a: Vec<u128>,
    pub anchors_b: Vec<u128>,
    pub cap: usize,
}

impl ConstructionParams {
    /// Check the interleaving b_K > 2 a_K^2 and a_{K+1} > b_K^2.
    pub fn validate(&self) -> Result<()> {
        if self.anchors_a.len() != self.anchors_b.len() {
            return Err(Error::Contract("anchor sequences must pair up".into()));
        }
        match self.case {
            WitnessCase::Entire => {}
            WitnessCase::Harmonic { dim, ref alpha } => {
                if alpha.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: alpha.len() });
                }
                if self.case.alpha_order() == 0 {
                    return Err(Error::Parameter("alpha must be nonzero".into()));
                }
            }
        }
        for k in 0..self.anchors_a.len() {
            let a = self.anchors_a[k];
            let b = self.anchors_b[k];
            if b <= 2 * a * a {
                return Err(Error::Contract(format!(
                    "b_{} = {b} must exceed 2 a_{}^2 = {}",
                    k + 1,
                    k + 1,
                    2 * a * a
                )));
            }
            if let Some(&a_next) = self.anchors_a.get(k + 1) {
                if a_next <= b * b {
                    return Err(Error::Contract(format!(
                        "a_{} = {a_next} must exceed b_{}^2 = {}",
                        k + 2,
                        k + 1,
                        b * b
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn a_blocks(&self) -> Result<IndexSet> {
        build_blocks(&self.anchors_a)
    }

    pub fn b_blocks(&self) -> Result<IndexSet> {
        build_blocks(&self.anchors_b)
    }
}

/// Lower bound for ln k! (Stirling without its positive correction term),
/// exact below 1024.
fn ln_factorial_lower(k: u128) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if k <= 1024 {
        return (1..=k).map(|j| (j as f64).ln()).sum();
    }
    let k = k as f64;
    k * k.ln() - k + 0.5 * (2.0 * std::f64::consts::PI * k).ln()
}

/// Rigorous upper bound (up to f64 rounding) on
/// ln( C sum_{n = 2a^2}^inf n^A K^{n q} / ((n - a^2) q)! ), q = |alpha|.
/// Terms are summed until consecutive ratios drop below 1/2, then a
/// geometric remainder is added; the term ratios are decreasing in n, so
/// the remainder bound is valid.
fn ln_selection_sum(a: u128, k_level: u128, q: usize, a_const: f64, c_const: f64) -> f64 {
    let ln_k = (k_level as f64).ln();
    let start = 2 * a * a;
    let ln_term = |n: u128| -> f64 {
        a_const * (n as f64).ln() + (n as f64) * q as f64 * ln_k
            - ln_factorial_lower((n - a * a) * q as u128)
    };
    // t(n+1)/t(n) computed directly; differencing ln_term would cancel
    // catastrophically for the astronomically negative logs of late blocks.
    let ln_ratio = |n: u128| -> f64 {
        let base = (n - a * a) * q as u128;
        let mut s = a_const * ((n as f64 + 1.0) / n as f64).ln() + q as f64 * ln_k;
        for i in 1..=q as u128 {
            s -= ((base + i) as f64).ln();
        }
        s
    };
    let mut terms: Vec<f64> = Vec::new();
    let mut n = start;
    let max_terms = 2_000_000usize;
    let rho = loop {
        terms.push(ln_term(n));
        let lr = ln_ratio(n);
        if lr < -std::f64::consts::LN_2 {
            break lr.exp();
        }
        n += 1;
        if terms.len() >= max_terms {
            // ratio never fell below 1/2 within budget: report +inf so the
            // candidate is rejected
            return f64::INFINITY;
        }
    };
    // remainder: t_last * rho / (1 - rho)
    let last = *terms.last().unwrap();
    terms.push(last + (rho / (1.0 - rho)).ln());
    let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|t| (t - mx).exp()).sum();
    c_const.ln() + mx + s.ln()
}

/// Choose the anchors a_K, b_K for K = 1..=k_max: each a_K is minimal
/// (subject to a_K > b_{K-1}^2) with
/// C sum_{n = 2 a_K^2}^inf n^A K^{n|alpha|} / ((n - a_K^2)|alpha|)! < 1/K,
/// and b_K is minimal with b_K > 2 a_K^2.
pub fn choose_block_parameters(
    case: &WitnessCase,
    k_max: usize,
    a_const: f64,
    c_const: f64,
    cap: usize,
) -> Result<ConstructionParams> {
    if k_max < 1 {
        return Err(Error::Parameter("k_max must be at least 1".into()));
    }
    if !(a_const > 0.0 && c_const > 0.0) {
        return Err(Error::Parameter("selection constants must be positive".into()));
    }
    let q = case.alpha_order();
    if q == 0 {
        return Err(Error::Parameter("alpha must be nonzero".into()));
    }
    let budget = 200_000u128;
    let mut anchors_a: Vec<u128> = Vec::with_capacity(k_max);
    let mut anchors_b: Vec<u128> = Vec::with_capacity(k_max);
    for k_level in 1..=k_max as u128 {
        let lower = anchors_b.last().map_or(1, |&b| b * b + 1);
        let target = -((k_level as f64).ln()); // ln(1/K)
        let mut chosen = None;
        let mut tried = 0u128;
        let mut a = lower;
        while tried < budget {
            if ln_selection_sum(a, k_level, q, a_const, c_const) < target {
                chosen = Some(a);
                break;
            }
            a += 1;
            tried += 1;
        }
        let Some(a) = chosen else {
            return Err(Error::Budget(format!(
                "no anchor a_{k_level} in [{lower}, {}] satisfies the block inequality \
                 (A = {a_const}, C = {c_const}, |alpha| = {q})",
                lower + budget
            )));
        };
        anchors_a.push(a);
        anchors_b.push(2 * a * a + 1);
    }
    Ok(ConstructionParams {
        case: case.clone(),
        a_const,
        c_const,
        anchors_a,
        anchors_b,
        cap,
    })
}

/// Assemble the schedule for a parameter set: omega plus the B blocks.
pub fn build_weight_star(omega: OmegaSpec, params: &ConstructionParams) -> Result<WeightSchedule> {
    WeightSchedule::new(omega, params.b_blocks()?)
}

/// The entire witness: f = sum_{m=1}^{cap} omega*_m z^m / m!, so that
/// D^j f(0) = omega*_j exactly for j <= cap.
pub fn build_irregular_entire(
    params: &ConstructionParams,
    schedule: &WeightSchedule,
) -> Result<EntireSeries> {
    params.validate()?;
    let cap = params.cap;
    let mut coeffs = vec![CRat::zero(); cap + 1];
    for m in 1..=cap {
        let w = schedule.omega_star(m as u128);
        if w == 0.0 {
            continue;
        }
        let num = rational_from_f64(w);
        let den = BigRational::from_integer(biguint_to_bigint(&factorial(m)));
        coeffs[m] = CRat::new(num / den, BigRational::zero());
    }
    Ok(EntireSeries::new(coeffs))
}

/// A constructed harmonic witness, together with the antiderivative chain
/// data the verifier needs for majorant-based growth certificates.
#[derive(Clone, Debug)]
pub struct HarmonicWitness {
    /// h = sum_{n=0}^{cap} omega*_{n+1} H_{n alpha}
    pub poly: MultiIndexPoly,
    /// H = H_{0 alpha}, the base antiderivative with D^alpha H = 1
    pub base: MultiIndexPoly,
    /// M_2(H_{n alpha}, 1) for n = 0..=cap, exact
    pub chain_m2_at_1: Vec<BigRational>,
    pub params: ConstructionParams,
}

/// Total-degree budget for the exact-arithmetic harmonic construction.
pub const HARMONIC_DEGREE_BUDGET: usize = 4096;

/// The harmonic witness: h = sum_{n <= cap} omega*_{n+1} H_{n alpha},
/// where H_{n alpha} in H_{(n+1)|alpha|} is the minimal-norm
/// antiderivative chain of 1 (D^alpha H_{n alpha} = H_{(n-1) alpha});
/// D^{j alpha} h(0) = omega*_j exactly for j <= cap + 1.
pub fn build_irregular_harmonic(
    params: &ConstructionParams,
    schedule: &WeightSchedule,
) -> Result<HarmonicWitness> {
    params.validate()?;
    let WitnessCase::Harmonic { dim, ref alpha } = params.case else {
        return Err(Error::Parameter("harmonic construction needs a harmonic case".into()));
    };
    let q = params.case.alpha_order();
    let top_degree = (params.cap + 1) * q;
    if top_degree > HARMONIC_DEGREE_BUDGET {
        let achievable = HARMONIC_DEGREE_BUDGET / q - 1;
        return Err(Error::Budget(format!(
            "cap {} needs degree {top_degree} > budget {HARMONIC_DEGREE_BUDGET}; \
             achievable cap is {achievable}",
            params.cap
        )));
    }
    let one = MultiIndexPoly::one(dim);
    let mut h = MultiIndexPoly::zero(dim);
    let mut chain_m2 = Vec::with_capacity(params.cap + 1);
    let mut base = None;
    let mut current = one.clone();
    let unit = BigRational::one();
    for n in 0..=params.cap {
        let link = antiderivative_alpha(&current, alpha)?;
        current = link.poly.clone();
        if n == 0 {
            base = Some(current.clone());
        }
        chain_m2.push(m2_sq_exact(&current, &unit));
        let w = schedule.omega_star((n + 1) as u128);
        if w != 0.0 {
            h = h.add(&current.scale(&rational_from_f64(w)));
        }
    }
    Ok(HarmonicWitness {
        poly: h,
        base: base.expect("cap >= 0 always builds the base"),
        chain_m2_at_1: chain_m2,
        params: params.clone(),
    })
}

/// |D^{j alpha} h (0)| for j = 0..=horizon, exact readouts of the orbit
/// at the origin; lower bounds for every M_p(D^{j alpha} h, r).
pub fn harmonic_orbit_readouts(
    h: &MultiIndexPoly,
    alpha: &[u32],
    horizon: usize,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(horizon + 1);
    let mut g = h.clone();
    for j in 0..=horizon {
        let v = rational_to_f64(&g.value_at_origin()).abs();
        out.push(v);
        if j < horizon {
            g = crate::harmonic::partial_derivative(&g, alpha);
        }
    }
    out
}

/// Coefficient majorants for the orbit sup norms of a constructed
/// harmonic witness: entry j bounds M_inf(D^{j alpha} h, r) via
/// omega*_j + sum_{n >= j} omega*_{n+1} sqrt(d_{(n-j+1)q}) r^{(n-j+1)q}
/// M_2(H_{(n-j) alpha}, 1).
pub fn harmonic_orbit_sup_bounds(
    witness: &HarmonicWitness,
    schedule: &WeightSchedule,
    horizon: usize,
    r: f64,
) -> Result<Vec<f64>> {
    use num_traits::ToPrimitive;
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    let WitnessCase::Harmonic { dim, .. } = witness.params.case else {
        return Err(Error::Parameter("sup bounds need a harmonic witness".into()));
    };
    let q = witness.params.case.alpha_order();
    let cap = witness.params.cap;
    // sqrt(d_{(k+1)q}) M_2(H_{k alpha}, 1) r^{(k+1)q} per chain link
    let link_term: Vec<f64> = witness
        .chain_m2_at_1
        .iter()
        .enumerate()
        .map(|(k, m2_sq)| {
            let d = crate::harmonic::dim_harmonic(dim, (k + 1) * q)
                .to_f64()
                .unwrap_or(f64::INFINITY);
            d.sqrt() * rational_to_f64(m2_sq).sqrt() * r.powi(((k + 1) * q) as i32)
        })
        .collect();
    let mut out = Vec::with_capacity(horizon + 1);
    for j in 0..=horizon {
        let mut bound = if j >= 1 { schedule.omega_star(j as u128) } else { 0.0 };
        for n in j..=cap {
            let w = schedule.omega_star((n + 1) as u128);
            if w != 0.0 {
                bound += w * link_term[n - j];
            }
        }
        out.push(bound);
    }
    Ok(out)
}

/// A truncated fixed point of T^{k0} built from the two-sided sum
/// w = sum_{n>=1} T^{k0 n} z + z + sum_{n>=1} S^{k0 n} z; the S-sum is
/// truncated at the cap and the dropped tail bounded by its first term
/// times 2 (the term ratio is below 1/2 in the reported range).
#[derive(Clone, Debug)]
pub struct PeriodicPointSeries {
    pub w: EntireSeries,
    /// M_2(D^{k0} w - w, 1): the truncation defect, exact then rounded
    pub defect_m2: f64,
    /// bound on the dropped S-tail in M_2(., 1)
    pub tail_bound: f64,
    pub k0: usize,
}

pub fn periodic_point_entire(
    z: &EntireSeries,
    k0: usize,
    cap: usize,
) -> Result<PeriodicPointSeries> {
    if k0 < 1 {
        return Err(Error::Parameter("period must be at least 1".into()));
    }
    if z.is_zero() {
        return Ok(PeriodicPointSeries {
            w: EntireSeries::zero(cap),
            defect_m2: 0.0,
            tail_bound: 0.0,
            k0,
        });
    }
    let deg = z.degree().unwrap_or(0);
    if deg > cap {
        return Err(Error::Parameter(format!(
            "seed degree {deg} exceeds the requested cap {cap}"
        )));
    }
    let mut w = z.truncated(cap);
    // T-sum: finitely many nonzero derivatives
    let mut n = 1usize;
    loop {
        if k0 * n > deg {
            break;
        }
        w = w.add(&differentiate_n(z, k0 * n).truncated(cap));
        n += 1;
    }
    // S-sum while degrees fit under the cap
    let mut s_iter = z.clone();
    let mut n_max = 0usize;
    loop {
        let next_deg = deg + k0 * (n_max + 1);
        if next_deg > cap {
            break;
        }
        for _ in 0..k0 {
            s_iter = crate::series::integrate(&s_iter);
        }
        w = w.add(&s_iter);
        n_max += 1;
    }
    // The defect D^{k0} w - w is exactly minus the last kept S-term, and
    // the genuinely dropped terms shrink by factorial ratios; twice the
    // last kept term bounds both.
    let tail_bound = 2.0 * crate::series::m2_norm(&s_iter, 1.0)?;
    let defect = differentiate_n(&w, k0).truncated(w.cap()).sub(&w);
    let defect_m2 = crate::series::m2_norm(&defect, 1.0)?;
    Ok(PeriodicPointSeries { w, defect_m2, tail_bound, k0 })
}

/// Harmonic analogue: T = D^alpha, S = the minimal-norm right inverse
/// applied to each homogeneous part.
#[derive(Clone, Debug)]
pub struct PeriodicPointPoly {
    pub w: MultiIndexPoly,
    pub defect_m2: f64,
    pub tail_bound: f64,
    pub k0: usize,
}

fn right_inverse_harmonic(h: &MultiIndexPoly, alpha: &[u32]) -> Result<MultiIndexPoly> {
    let mut out = MultiIndexPoly::zero(h.dim());
    for part in homogeneous_decompose(h) {
        out = out.add(&antiderivative_alpha(&part, alpha)?.poly);
    }
    Ok(out)
}

pub fn periodic_point_harmonic(
    z: &MultiIndexPoly,
    alpha: &[u32],
    k0: usize,
    degree_cap: usize,
) -> Result<PeriodicPointPoly> {
    if k0 < 1 {
        return Err(Error::Parameter("period must be at least 1".into()));
    }
    if z.is_zero() {
        return Ok(PeriodicPointPoly {
            w: MultiIndexPoly::zero(z.dim()),
            defect_m2: 0.0,
            tail_bound: 0.0,
            k0,
        });
    }
    let q: u32 = alpha.iter().sum();
    if q == 0 {
        return Err(Error::Parameter("alpha must be nonzero".into()));
    }
    let mut w = z.clone();
    // T-sum
    let mut deriv = vec![0u32; z.dim()];
    loop {
        for (d, a) in deriv.iter_mut().zip(alpha) {
            *d += a * k0 as u32;
        }
        let t = crate::harmonic::partial_derivative(z, &deriv);
        if t.is_zero() {
            break;
        }
        w = w.add(&t);
    }
    // S-sum
    let mut s_iter = z.clone();
    loop {
        let next_deg = s_iter.degree().unwrap_or(0) as usize + q as usize * k0;
        if next_deg > degree_cap {
            break;
        }
        for _ in 0..k0 {
            s_iter = right_inverse_harmonic(&s_iter, alpha)?;
        }
        w = w.add(&s_iter);
    }
    let one = BigRational::one();
    let last_kept = rational_to_f64(&m2_sq_exact(&s_iter, &one)).sqrt();
    let mut full_deriv = vec![0u32; z.dim()];
    for (d, a) in full_deriv.iter_mut().zip(alpha) {
        *d = a * k0 as u32;
    }
    let defect = crate::harmonic::partial_derivative(&w, &full_deriv).sub(&w);
    let defect_m2 = rational_to_f64(&m2_sq_exact(&defect, &one)).sqrt();
    Ok(PeriodicPointPoly { w, defect_m2, tail_bound: 2.0 * last_kept, k0 })
}
