//! Exact polynomials in N real variables, keyed by multi-index.
//!
//! Invariants:
//! - every stored multi-index has length `dim`
//! - no stored coefficient is zero

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{big_ratio, rational_to_f64};

pub type MultiIndex = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndexPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl MultiIndexPoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1);
        MultiIndexPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(vec![0; dim], c);
        }
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, BigRational::one())
    }

    /// x_k (0-based coordinate index).
    pub fn coordinate(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut alpha = vec![0u32; dim];
        alpha[k] = 1;
        let mut p = Self::zero(dim);
        p.terms.insert(alpha, BigRational::one());
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, BigRational)>,
    {
        let mut p = Self::zero(dim);
        for (alpha, c) in terms {
            p.add_term(&alpha, c);
        }
        p
    }

    /// Convenience constructor from (exponents, numerator, denominator).
    pub fn from_int_terms(dim: usize, terms: &[(&[u32], i64, i64)]) -> Self {
        Self::from_terms(
            dim,
            terms.iter().map(|(a, n, d)| (a.to_vec(), big_ratio(*n, *d))),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &[u32]) -> BigRational {
        self.terms.get(alpha).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, alpha: &[u32], c: BigRational) {
        assert_eq!(alpha.len(), self.dim, "multi-index length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(alpha) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(alpha);
                }
            }
            None => {
                self.terms.insert(alpha.to_vec(), c);
            }
        }
    }

    /// Total degree (max |alpha|); None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a, -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        MultiIndexPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let sum: MultiIndex =
                    a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(&sum, ca * cb);
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.dim);
        let mut acc = BigRational::zero();
        for (a, c) in &self.terms {
            let mut term = c.clone();
            for (k, &e) in a.iter().enumerate() {
                for _ in 0..e {
                    term *= &x[k];
                }
            }
            acc += term;
        }
        acc
    }

    /// f64 evaluation (for quadrature and sampling).
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim);
        let mut acc = 0.0;
        for (a, c) in &self.terms {
            let mut term = rational_to_f64(c);
            for (k, &e) in a.iter().enumerate() {
                term *= x[k].powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    pub fn value_at_origin(&self) -> BigRational {
        self.coeff(&vec![0; self.dim])
    }
}

/// Exact Laplacian: sum_k d^2 p / dx_k^2.
pub fn laplacian(p: &MultiIndexPoly) -> MultiIndexPoly {
    let dim = p.dim();
    let mut out = MultiIndexPoly::zero(dim);
    for (alpha, c) in p.terms() {
        for k in 0..dim {
            let e = alpha[k];
            if e >= 2 {
                let mut beta = alpha.clone();
                beta[k] = e - 2;
                let factor = BigRational::from_integer((e as i64 * (e as i64 - 1)).into());
                out.add_term(&beta, c * &factor);
            }
        }
    }
    out
}

pub fn is_harmonic(p: &MultiIndexPoly) -> bool {
    laplacian(p).is_zero()
}

/// Exact partial derivative D^alpha.
pub fn partial_derivative(p: &MultiIndexPoly, alpha: &[u32]) -> MultiIndexPoly {
    assert_eq!(alpha.len(), p.dim(), "derivative multi-index length mismatch");
    let mut out = MultiIndexPoly::zero(p.dim());
    'terms: for (beta, c) in p.terms() {
        let mut coeff = c.clone();
        let mut gamma = beta.clone();
        for k in 0..p.dim() {
            if beta[k] < alpha[k] {
                continue 'terms;
            }
            // beta_k (beta_k - 1) ... (beta_k - alpha_k + 1)
            for j in 0..alpha[k] {
                coeff *= BigRational::from_integer(((beta[k] - j) as i64).into());
            }
            gamma[k] = beta[k] - alpha[k];
        }
        out.add_term(&gamma, coeff);
    }
    out
}

/// Split into homogeneous parts, ascending in degree; parts are non-zero.
pub fn homogeneous_decompose(p: &MultiIndexPoly) -> Vec<MultiIndexPoly> {
    let mut by_degree: BTreeMap<u32, MultiIndexPoly> = BTreeMap::new();
    for (alpha, c) in p.terms() {
        let d: u32 = alpha.iter().sum();
        by_degree
            .entry(d)
            .or_insert_with(|| MultiIndexPoly::zero(p.dim()))
            .add_term(alpha, c.clone());
    }
    by_degree.into_values().collect()
}

/// Like `homogeneous_decompose` but keyed by degree.
pub fn homogeneous_parts(p: &MultiIndexPoly) -> BTreeMap<u32, MultiIndexPoly> {
    let mut by_degree: BTreeMap<u32, MultiIndexPoly> = BTreeMap::new();
    for (alpha, c) in p.terms() {
        let d: u32 = alpha.iter().sum();
        by_degree
            .entry(d)
            .or_insert_with(|| MultiIndexPoly::zero(p.dim()))
            .add_term(alpha, c.clone());
    }
    by_degree
}

pub fn is_homogeneous(p: &MultiIndexPoly) -> bool {
    let mut degrees = p.terms.keys().map(|a| a.iter().sum::<u32>());
    match degrees.next() {
        None => true,
        Some(d0) => degrees.all(|d| d == d0),
    }
}

/// Exact re-expansion of h(x + a) for a rational shift a.
pub fn translate_harmonic(h: &MultiIndexPoly, a: &[BigRational]) -> Result<MultiIndexPoly> {
    if a.len() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: a.len() });
    }
    let dim = h.dim();
    // (x_k + a_k)^e expanded per coordinate, multiplied across coordinates.
    let mut out = MultiIndexPoly::zero(dim);
    for (alpha, c) in h.terms() {
        // running product over coordinates
        let mut partial: Vec<(MultiIndex, BigRational)> =
            vec![(vec![0u32; dim], c.clone())];
        for k in 0..dim {
            let e = alpha[k];
            if e == 0 {
                continue;
            }
            let mut next: Vec<(MultiIndex, BigRational)> = Vec::new();
            // binomial expansion of (x_k + a_k)^e
            let mut binom = BigRational::one();
            let mut a_pow = vec![BigRational::one()];
            for j in 1..=e {
                let prev = a_pow[(j - 1) as usize].clone();
                a_pow.push(prev * &a[k]);
            }
            for j in 0..=e {
                if j > 0 {
                    let num = BigRational::from_integer(((e - j + 1) as i64).into());
                    let den = BigRational::from_integer((j as i64).into());
                    binom = binom * num / den;
                }
                let w = &binom * &a_pow[(e - j) as usize];
                if w.is_zero() {
                    continue;
                }
                for (idx, coeff) in &partial {
                    let mut nidx = idx.clone();
                    nidx[k] += j;
                    next.push((nidx, coeff * &w));
                }
            }
            partial = next;
        }
        for (idx, coeff) in partial {
            out.add_term(&idx, coeff);
        }
    }
    Ok(out)
}
