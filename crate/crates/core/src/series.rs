//! Truncated Taylor representations of entire functions, with the
//! differentiation/integration pair and average L^p norms on circles.
//!
//! Coefficients are exact complex rationals so that the operator
//! identities (D after S is the identity, D maps z^n/n! to z^(n-1)/(n-1)!)
//! hold exactly; floating point appears only inside norm evaluation.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{
    biguint_to_bigint, factorial, binomial, ln_rational_abs, rational_to_f64, CRat,
};

/// f(z) = sum_{n <= cap} a_n z^n, kept at a fixed truncation degree.
///
/// Invariant: `coeffs.len() == cap + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntireSeries {
    coeffs: Vec<CRat>,
}

impl EntireSeries {
    pub fn new(coeffs: Vec<CRat>) -> Self {
        assert!(!coeffs.is_empty(), "a series stores at least the constant term");
        EntireSeries { coeffs }
    }

    pub fn zero(cap: usize) -> Self {
        EntireSeries { coeffs: vec![CRat::zero(); cap + 1] }
    }

    /// The monomial z^n / n! (the n-fold integral of 1).
    pub fn unit_monomial(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[n] = CRat::new(
            BigRational::new(1.into(), biguint_to_bigint(&factorial(n))),
            BigRational::zero(),
        );
        s
    }

    /// Polynomial with the given integer coefficients, constant term first.
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        EntireSeries::new(coeffs.iter().map(|&c| CRat::from_int(c)).collect())
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> CRat {
        self.coeffs.get(n).cloned().unwrap_or_else(CRat::zero)
    }

    pub fn coeffs(&self) -> &[CRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Highest index with a nonzero coefficient, if any.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn add(&self, other: &EntireSeries) -> EntireSeries {
        let cap = self.cap().max(other.cap());
        let coeffs = (0..=cap)
            .map(|n| &self.coeff(n) + &other.coeff(n))
            .collect();
        EntireSeries::new(coeffs)
    }

    pub fn sub(&self, other: &EntireSeries) -> EntireSeries {
        let cap = self.cap().max(other.cap());
        let coeffs = (0..=cap)
            .map(|n| &self.coeff(n) - &other.coeff(n))
            .collect();
        EntireSeries::new(coeffs)
    }

    pub fn mul(&self, other: &EntireSeries) -> EntireSeries {
        let cap = self.cap() + other.cap();
        let mut coeffs = vec![CRat::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        EntireSeries::new(coeffs)
    }

    /// Truncate (or zero-pad) to the given cap.
    pub fn truncated(&self, cap: usize) -> EntireSeries {
        let coeffs = (0..=cap).map(|n| self.coeff(n)).collect();
        EntireSeries::new(coeffs)
    }

    /// One-time f64 rounding of the coefficients, for quadrature loops.
    pub fn coeffs_f64(&self) -> Vec<(f64, f64)> {
        self.coeffs.iter().map(|c| c.to_f64_pair()).collect()
    }

    /// Horner evaluation in f64 at z = r e^{it}.
    pub fn eval_polar(&self, r: f64, t: f64) -> (f64, f64) {
        eval_polar_cached(&self.coeffs_f64(), r, t)
    }

    pub fn eval_abs_polar(&self, r: f64, t: f64) -> f64 {
        let (re, im) = self.eval_polar(r, t);
        re.hypot(im)
    }
}

fn eval_polar_cached(coeffs: &[(f64, f64)], r: f64, t: f64) -> (f64, f64) {
    let (zr, zi) = (r * t.cos(), r * t.sin());
    let (mut ar, mut ai) = (0.0f64, 0.0f64);
    for &(cr, ci) in coeffs.iter().rev() {
        let nr = ar * zr - ai * zi + cr;
        let ni = ar * zi + ai * zr + ci;
        ar = nr;
        ai = ni;
    }
    (ar, ai)
}

fn eval_abs_cached(coeffs: &[(f64, f64)], r: f64, t: f64) -> f64 {
    let (re, im) = eval_polar_cached(coeffs, r, t);
    re.hypot(im)
}

/// D: coefficient rule b_n = (n+1) a_{n+1}; the cap drops by one
/// (a cap-0 input stays at cap 0 and becomes the zero series).
pub fn differentiate(f: &EntireSeries) -> EntireSeries {
    if f.cap() == 0 {
        return EntireSeries::zero(0);
    }
    let coeffs = (1..=f.cap())
        .map(|n| f.coeffs[n].scale(&BigRational::from_integer(n.into())))
        .collect();
    EntireSeries::new(coeffs)
}

pub fn differentiate_n(f: &EntireSeries, n: usize) -> EntireSeries {
    let mut g = f.clone();
    for _ in 0..n {
        g = differentiate(&g);
    }
    g
}

/// S: term-wise antiderivative with S f (0) = 0; the cap grows by one.
/// D(S(f)) = f exactly.
pub fn integrate(f: &EntireSeries) -> EntireSeries {
    let mut coeffs = Vec::with_capacity(f.cap() + 2);
    coeffs.push(CRat::zero());
    for (n, a) in f.coeffs.iter().enumerate() {
        coeffs.push(a.scale(&BigRational::new(1.into(), (n as i64 + 1).into())));
    }
    EntireSeries::new(coeffs)
}

/// M_2(f, r) = sqrt(sum |a_n|^2 r^{2n}), evaluated in the log domain so
/// that large r and tiny factorial coefficients neither overflow nor
/// underflow. Errors when the result itself exceeds f64 range.
pub fn m2_norm(f: &EntireSeries, r: f64) -> Result<f64> {
    let ln = m2_norm_ln(f, r)?;
    match ln {
        None => Ok(0.0),
        Some(ln) => {
            if ln > f64::MAX.ln() {
                return Err(Error::Range(format!(
                    "M_2 at r = {r} exceeds f64 range (ln = {ln:.3})"
                )));
            }
            Ok(ln.exp())
        }
    }
}

/// ln M_2(f, r); `None` for the zero series.
pub fn m2_norm_ln(f: &EntireSeries, r: f64) -> Result<Option<f64>> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    let ln_r = r.ln();
    // Log-domain terms ln(|a_n|^2 r^{2n}), combined by a max-shifted sum.
    let mut terms: Vec<f64> = Vec::with_capacity(f.cap() + 1);
    for (n, a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let sq = a.abs_sq();
        terms.push(ln_rational_abs(&sq) + 2.0 * n as f64 * ln_r);
    }
    if terms.is_empty() {
        return Ok(None);
    }
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for t in &terms {
        // Pairwise-compensated accumulation (Kahan).
        let y = (t - m).exp() - comp;
        let s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    Ok(Some(0.5 * (m + acc.ln())))
}

/// Average L^p norm on the circle of radius r.
///
/// For finite p the trapezoid rule is used; it integrates trigonometric
/// polynomials exactly, whence the precondition quad_points >= 4 cap.
/// For p = infinity: dense angular sampling (at least 8 cap points)
/// followed by a golden-section refinement around the best sample.
pub fn mp_norm(f: &EntireSeries, r: f64, p: f64, quad_points: usize) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("norm index must satisfy p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(sup_norm_circle(f, r, quad_points));
    }
    let needed = 4 * f.cap().max(1);
    if quad_points < needed {
        return Err(Error::Parameter(format!(
            "quad_points = {quad_points} below 4*cap = {needed}"
        )));
    }
    let coeffs = f.coeffs_f64();
    let q = quad_points;
    let mut acc = 0.0f64;
    for j in 0..q {
        let t = 2.0 * std::f64::consts::PI * j as f64 / q as f64;
        acc += eval_abs_cached(&coeffs, r, t).powf(p);
    }
    Ok((acc / q as f64).powf(1.0 / p))
}

fn sup_norm_circle(f: &EntireSeries, r: f64, min_samples: usize) -> f64 {
    let coeffs = f.coeffs_f64();
    let samples = min_samples.max(8 * f.cap()).max(64);
    let step = 2.0 * std::f64::consts::PI / samples as f64;
    let mut best_t = 0.0;
    let mut best = f64::NEG_INFINITY;
    for j in 0..samples {
        let t = j as f64 * step;
        let v = eval_abs_cached(&coeffs, r, t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    // Golden-section pass on the bracketing interval.
    let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_t - step, best_t + step);
    for _ in 0..60 {
        let a = hi - golden * (hi - lo);
        let b = lo + golden * (hi - lo);
        if eval_abs_cached(&coeffs, r, a) < eval_abs_cached(&coeffs, r, b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    let t = 0.5 * (lo + hi);
    best.max(eval_abs_cached(&coeffs, r, t))
}

/// Exact re-expansion of f(z + a), truncated to `cap_out`.
pub fn translate(f: &EntireSeries, a: &CRat, cap_out: usize) -> Result<EntireSeries> {
    if cap_out > f.cap() {
        return Err(Error::Parameter(format!(
            "cap_out = {cap_out} exceeds input cap {}",
            f.cap()
        )));
    }
    // b_k = sum_{n >= k} a_n C(n, k) a^{n-k}
    let mut pow = vec![CRat::one()]; // a^j
    for j in 1..=f.cap() {
        pow.push(&pow[j - 1] * a);
    }
    let mut coeffs = Vec::with_capacity(cap_out + 1);
    for k in 0..=cap_out {
        let mut b = CRat::zero();
        for n in k..=f.cap() {
            if f.coeffs[n].is_zero() {
                continue;
            }
            let c = BigRational::from_integer(biguint_to_bigint(&binomial(n, k)));
            let term = &f.coeffs[n].scale(&c) * &pow[n - k];
            b = &b + &term;
        }
        coeffs.push(b);
    }
    Ok(EntireSeries::new(coeffs))
}

/// Result of an orbit-norm sweep under repeated differentiation.
#[derive(Clone, Debug)]
pub struct OrbitNorms {
    /// Entry n is M_p(D^n f, r).
    pub norms: Vec<f64>,
    /// Largest n for which the truncation still represents the intended
    /// function's derivative faithfully.
    pub faithful_horizon: usize,
    /// Tail bound supplied by the caller, when the horizon passes the cap.
    pub tail_bound: Option<f64>,
}

/// M_p(D^n f, r) for n = 0..=horizon.
///
/// Beyond the cap the derivative of a truncation is identically zero, which
/// is only meaningful if the caller certifies the intended function's tail;
/// without a `tail_bound` such horizons are refused.
pub fn orbit_norms(
    f: &EntireSeries,
    horizon: usize,
    r: f64,
    p: f64,
    quad_points: usize,
    tail_bound: Option<f64>,
) -> Result<OrbitNorms> {
    if horizon > f.cap() && tail_bound.is_none() {
        return Err(Error::HorizonExceedsCap { horizon, cap: f.cap() });
    }
    let mut norms = Vec::with_capacity(horizon + 1);
    let mut g = f.clone();
    for n in 0..=horizon {
        let v = if p == 2.0 {
            m2_norm(&g, r)?
        } else {
            mp_norm(&g, r, p, quad_points.max(4 * g.cap().max(1)))?
        };
        norms.push(v);
        if n < horizon {
            g = differentiate(&g);
        }
    }
    Ok(OrbitNorms {
        norms,
        faithful_horizon: if tail_bound.is_some() { horizon } else { horizon.min(f.cap()) },
        tail_bound,
    })
}

/// |D^n f(0)| = |n! a_n| for n = 0..=horizon, computed exactly and then
/// rounded once. These are exact lower bounds for every M_p(D^n f, r).
pub fn orbit_readouts(f: &EntireSeries, horizon: usize) -> Vec<f64> {
    (0..=horizon)
        .map(|n| {
            if n > f.cap() {
                return 0.0;
            }
            let a = f.coeff(n);
            if a.is_zero() {
                return 0.0;
            }
            let fact = BigRational::from_integer(biguint_to_bigint(&factorial(n)));
            let sq = a.abs_sq() * &fact * &fact;
            rational_to_f64(&sq).sqrt()
        })
        .collect()
}

/// Coefficient upper bounds sum_k |b_k| r^k >= M_inf(D^n f, r) for
/// n = 0..=horizon, in the log domain. Rigorous majorants for the
/// near-zero certificates.
pub fn orbit_sup_bounds(f: &EntireSeries, horizon: usize, r: f64) -> Result<Vec<f64>> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    if horizon > f.cap() {
        return Err(Error::HorizonExceedsCap { horizon, cap: f.cap() });
    }
    let ln_r = r.ln();
    // ln |a_m| precomputed once.
    let ln_abs: Vec<Option<f64>> = f
        .coeffs
        .iter()
        .map(|a| {
            if a.is_zero() {
                None
            } else {
                Some(0.5 * ln_rational_abs(&a.abs_sq()))
            }
        })
        .collect();
    // ln m! running.
    let mut ln_fact = vec![0.0f64; f.cap() + 1];
    for m in 1..=f.cap() {
        ln_fact[m] = ln_fact[m - 1] + (m as f64).ln();
    }
    let mut out = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        // D^n f has coefficient a_m m!/(m-n)! at degree k = m - n.
        let mut terms: Vec<f64> = Vec::new();
        for m in n..=f.cap() {
            if let Some(la) = ln_abs[m] {
                let k = m - n;
                terms.push(la + (ln_fact[m] - ln_fact[k]) + k as f64 * ln_r);
            }
        }
        if terms.is_empty() {
            out.push(0.0);
            continue;
        }
        let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = terms.iter().map(|t| (t - mx).exp()).sum();
        out.push((mx + s.ln()).exp());
    }
    Ok(out)
}

/// Finite-truncation stand-in for the exponential type: the maximum over
/// the grid of r^{-1} ln M_inf(f, r). An estimate, not a limit.
pub fn exp_type_estimate(f: &EntireSeries, r_grid: &[f64]) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let mut best = f64::NEG_INFINITY;
    for &r in r_grid {
        if !(r > 0.0) {
            return Err(Error::Parameter(format!("grid radius must be positive, got {r}")));
        }
        let m = mp_norm(f, r, f64::INFINITY, 0)?;
        if m > 0.0 {
            best = best.max(m.ln() / r);
        }
    }
    Ok(best.max(0.0))
}
