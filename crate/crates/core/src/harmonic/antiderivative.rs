//! Minimal-norm antiderivatives of harmonic polynomials.
//!
//! The n-th coordinate antiderivative maps H_m into H_{m+n} as a right
//! inverse of d^n/dx_k^n. Among all solutions in H_{m+n} (an affine
//! subspace) we return the unique minimizer of M_2(., 1); the sphere inner
//! product is strictly convex, so the minimizer exists and is unique, and
//! its norm ratio can only improve on any other right inverse. The solve
//! is exact: Gram and constraint matrices are rational and the
//! saddle-point system is eliminated in rational arithmetic.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{echelon, solve_consistent, SparseRow};
use crate::rational::{biguint_to_bigint, factorial, rational_to_f64};

use super::basis::{harmonic_basis, monomials};
use super::constants::c_n_constant;
use super::poly::{
    is_harmonic, is_homogeneous, partial_derivative, MultiIndex, MultiIndexPoly,
};
use super::sphere::{inner_product_exact, m2_sq_exact};

/// c_{n,m,N} = (N+2m-2)! / ( n! (N+2m+n-3)! (N+2m+2n-2) ), the norm-ratio
/// bound for the n-th coordinate antiderivative out of H_m.
pub fn c_coeff(n: usize, m: usize, dim: usize) -> BigRational {
    assert!(dim >= 2 && dim + 2 * m + n >= 3, "outside the bound's range");
    let num = BigRational::from_integer(biguint_to_bigint(&factorial(dim + 2 * m - 2)));
    let den = BigRational::from_integer(biguint_to_bigint(&factorial(n)))
        * BigRational::from_integer(biguint_to_bigint(&factorial(dim + 2 * m + n - 3)))
        * BigRational::from_integer(((dim + 2 * m + 2 * n - 2) as i64).into());
    num / den
}

/// The simpler per-m estimate c_m / ((n+m)!^2 (n+m+1)^{N-2}) with
/// c_m = (N+2m-2)!.
pub fn c_coeff_estimate(n: usize, m: usize, dim: usize) -> BigRational {
    let c_m = BigRational::from_integer(biguint_to_bigint(&factorial(dim + 2 * m - 2)));
    let f = BigRational::from_integer(biguint_to_bigint(&factorial(n + m)));
    let mut pow = BigRational::one();
    for _ in 0..(dim - 2) {
        pow *= BigRational::from_integer(((n + m + 1) as i64).into());
    }
    c_m / (&f * &f * pow)
}

/// Result of a minimal-norm antiderivative solve.
#[derive(Clone, Debug)]
pub struct Antiderivative {
    pub poly: MultiIndexPoly,
    /// M_2^2(P, 1) / M_2^2(H, 1), exact.
    pub norm_ratio_sq: BigRational,
}

fn gram_matrix(dim: usize, degree: usize) -> Arc<Vec<Vec<BigRational>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(usize, usize), Arc<Vec<Vec<BigRational>>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&(dim, degree)) {
        return g.clone();
    }
    let basis = harmonic_basis(dim, degree);
    let d = basis.len();
    let one = BigRational::one();
    let mut g = vec![vec![BigRational::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let v = inner_product_exact(&basis.elements[i], &basis.elements[j], &one)
                .expect("same dimension");
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    let arc = Arc::new(g);
    cache
        .lock()
        .unwrap()
        .entry((dim, degree))
        .or_insert_with(|| arc.clone())
        .clone()
}

/// Minimal-M_2(., 1)-norm P in H_{m + |deriv|} with D^{deriv} P = H,
/// solved as one constrained least-squares problem.
fn minimal_norm_preimage(h: &MultiIndexPoly, deriv: &[u32]) -> Result<Antiderivative> {
    let dim = h.dim();
    if deriv.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: deriv.len() });
    }
    if !is_harmonic(h) {
        return Err(Error::Contract("antiderivative input must be harmonic".into()));
    }
    if !is_homogeneous(h) {
        return Err(Error::Contract("antiderivative input must be homogeneous".into()));
    }
    if h.is_zero() {
        return Err(Error::Contract("antiderivative of the zero polynomial is ambiguous".into()));
    }
    let order: u32 = deriv.iter().sum();
    if order == 0 {
        return Ok(Antiderivative { poly: h.clone(), norm_ratio_sq: BigRational::one() });
    }
    let m = h.degree().unwrap_or(0) as usize;
    let m_out = m + order as usize;

    let basis = harmonic_basis(dim, m_out);
    let d = basis.len();
    let lower = monomials(dim, m);
    let lower_index: BTreeMap<&MultiIndex, usize> =
        lower.iter().enumerate().map(|(i, a)| (a, i)).collect();

    // Constraint rows: coefficient of each degree-m monomial in
    // D^{deriv}(sum c_i B_i) = H, assembled column by column, then reduced
    // to an independent row set (the image of D^{deriv} is d_m-dimensional,
    // so the raw rows are dependent).
    let mut rows: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d]; lower.len()];
    for (i, b) in basis.elements.iter().enumerate() {
        let db = partial_derivative(b, deriv);
        for (alpha, c) in db.terms() {
            let row = *lower_index.get(alpha).expect("degree bookkeeping");
            rows[row][i] = c.clone();
        }
    }
    let mut sparse_rows = Vec::with_capacity(lower.len());
    for (ri, row) in rows.iter().enumerate() {
        let mut entries: Vec<(usize, BigRational)> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        // augmented column holds the target coefficient
        let target = h.coeff(&lower[ri]);
        if !target.is_zero() {
            entries.push((d, target));
        }
        sparse_rows.push(SparseRow::from_entries(entries));
    }
    let ech = echelon(sparse_rows, d + 1);
    let mut a_rows: Vec<Vec<BigRational>> = Vec::new();
    let mut b_vec: Vec<BigRational> = Vec::new();
    for row in &ech.rows {
        let lead = row.leading().unwrap();
        if lead == d {
            return Err(Error::Inconsistent(
                "derivative constraint has no solution in the harmonic space".into(),
            ));
        }
        let mut dense = vec![BigRational::zero(); d];
        let mut rhs = BigRational::zero();
        for (c, v) in &row.entries {
            if *c == d {
                rhs = v.clone();
            } else {
                dense[*c] = v.clone();
            }
        }
        a_rows.push(dense);
        b_vec.push(rhs);
    }
    let rank = a_rows.len();

    // Saddle-point system for min c^T G c subject to A c = b:
    // [G A^T; A 0] [c; lambda] = [0; b].
    let gram = gram_matrix(dim, m_out);
    let size = d + rank;
    let mut kkt = vec![vec![BigRational::zero(); size]; size];
    let mut rhs = vec![BigRational::zero(); size];
    for i in 0..d {
        for j in 0..d {
            kkt[i][j] = gram[i][j].clone();
        }
    }
    for (r, row) in a_rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                kkt[d + r][j] = v.clone();
                kkt[j][d + r] = v.clone();
            }
        }
        rhs[d + r] = b_vec[r].clone();
    }
    let sol = solve_consistent(&kkt, &rhs)?;

    let mut poly = MultiIndexPoly::zero(dim);
    for (i, c) in sol[..d].iter().enumerate() {
        if !c.is_zero() {
            poly = poly.add(&basis.elements[i].scale(c));
        }
    }
    let one = BigRational::one();
    let ratio = m2_sq_exact(&poly, &one) / m2_sq_exact(h, &one);
    Ok(Antiderivative { poly, norm_ratio_sq: ratio })
}

/// Minimal-norm P in H_{m+n} with d^n P / dx_coord^n = H (coord 0-based).
pub fn antiderivative_coord(
    h: &MultiIndexPoly,
    n: usize,
    coord: usize,
) -> Result<Antiderivative> {
    if coord >= h.dim() {
        return Err(Error::Parameter(format!(
            "coordinate {coord} out of range for dimension {}",
            h.dim()
        )));
    }
    let mut deriv = vec![0u32; h.dim()];
    deriv[coord] = n as u32;
    minimal_norm_preimage(h, &deriv)
}

/// Minimal-norm H_alpha in H_{m+|alpha|} with D^alpha H_alpha = H, solved
/// as a single joint least-squares problem (not coordinate by coordinate).
pub fn antiderivative_alpha(h: &MultiIndexPoly, alpha: &[u32]) -> Result<Antiderivative> {
    minimal_norm_preimage(h, alpha)
}

/// The Lemma-style norm envelope for D^alpha antiderivatives:
/// 1/|alpha|! for N = 2, and c_mult |alpha|^a_exp c_N^{|alpha|} / |alpha|!
/// for N >= 3 (with measured constants, see `calibrate_lemma_constants`).
pub fn alpha_norm_envelope(dim: usize, order: usize, a_exp: f64, c_mult: f64) -> f64 {
    let ln_fact: f64 = (1..=order).map(|k| (k as f64).ln()).sum();
    if dim == 2 {
        (-ln_fact).exp()
    } else {
        let cn = c_n_constant(dim);
        (c_mult.ln() + a_exp * (order as f64).ln() + order as f64 * cn.ln() - ln_fact).exp()
    }
}

/// Measure the envelope constants (a_exp fixed at 1) over minimal-norm
/// antiderivatives of 1 up to the given order: returns (a_exp, c_mult)
/// with c_mult = max over measured orders of
/// M_2(H_alpha, 1) |alpha|! / (c_N^{|alpha|} |alpha|^{a_exp}).
pub fn calibrate_lemma_constants(dim: usize, max_order: usize) -> (f64, f64) {
    if dim == 2 {
        // exact bound 1/|alpha|!; no constants required
        return (0.0, 1.0);
    }
    let a_exp = 1.0;
    let cn = c_n_constant(dim);
    let mut c_mult = 0.0f64;
    let one = MultiIndexPoly::one(dim);
    for k in 1..=max_order {
        let mut alpha = vec![0u32; dim];
        alpha[0] = k as u32;
        let anti = antiderivative_alpha(&one, &alpha).expect("solvable");
        let ratio = rational_to_f64(&anti.norm_ratio_sq).sqrt();
        let ln_fact: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
        let s = (ratio.ln() + ln_fact - k as f64 * cn.ln() - a_exp * (k as f64).ln()).exp();
        c_mult = c_mult.max(s);
    }
    (a_exp, c_mult.max(1.0))
}

/// Iterated right inverse: the chain H, P(H), P(P(H)), ... with `steps`
/// applications of the minimal-norm D^alpha antiderivative.
pub fn antiderivative_chain(
    h: &MultiIndexPoly,
    alpha: &[u32],
    steps: usize,
) -> Result<Vec<Antiderivative>> {
    let mut out = Vec::with_capacity(steps);
    let mut current = h.clone();
    for _ in 0..steps {
        let next = antiderivative_alpha(&current, alpha)?;
        current = next.poly.clone();
        out.push(next);
    }
    Ok(out)
}

/// Whether the coordinate antiderivatives compose compatibly on this input:
/// P_{l+n,k}(H) == P_{l,k}(P_{n,k}(H)) for the minimal-norm choices.
/// Recorded, not asserted; the answer is not claimed in general.
pub fn compatibility_check(
    h: &MultiIndexPoly,
    l: usize,
    n: usize,
    coord: usize,
) -> Result<bool> {
    let direct = antiderivative_coord(h, l + n, coord)?;
    let inner = antiderivative_coord(h, n, coord)?;
    let outer = antiderivative_coord(&inner.poly, l, coord)?;
    Ok(direct.poly == outer.poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big_ratio;

    #[test]
    fn c_coeff_values() {
        assert_eq!(c_coeff(1, 0, 2), big_ratio(1, 2));
        assert_eq!(c_coeff(2, 0, 2), big_ratio(1, 8));
        // c_{1,1,3} = 3! / (1! 2! ... ) cross-checked by direct factorials:
        // (3+2-2)! / (1! (3+2+1-3)! (3+2+2-2)) = 6 / (6 * 5) = 1/5
        assert_eq!(c_coeff(1, 1, 3), big_ratio(1, 5));
    }

    #[test]
    fn c_coeff_below_estimate() {
        for dim in 2..=5 {
            for m in 0..=10 {
                for n in 1..=50 {
                    let c = c_coeff(n, m, dim);
                    let e = c_coeff_estimate(n, m, dim);
                    assert!(c <= e, "c_{{{n},{m},{dim}}} = {c} > estimate {e}");
                }
            }
        }
    }

    #[test]
    fn coordinate_antiderivative_of_one() {
        // N = 2: first antiderivative of 1 along x is x, norm ratio 1/2
        let one = MultiIndexPoly::one(2);
        let a = antiderivative_coord(&one, 1, 0).unwrap();
        assert_eq!(a.poly, MultiIndexPoly::coordinate(2, 0));
        assert_eq!(a.norm_ratio_sq, big_ratio(1, 2));
        assert_eq!(a.norm_ratio_sq, c_coeff(1, 0, 2));
        // second antiderivative is (x^2 - y^2)/2, norm ratio 1/8
        let a2 = antiderivative_coord(&one, 2, 0).unwrap();
        assert_eq!(
            a2.poly,
            MultiIndexPoly::from_int_terms(2, &[(&[2, 0], 1, 2), (&[0, 2], -1, 2)])
        );
        assert_eq!(a2.norm_ratio_sq, big_ratio(1, 8));
        assert_eq!(a2.norm_ratio_sq, c_coeff(2, 0, 2));
    }

    #[test]
    fn derivative_identity_holds_exactly() {
        let one = MultiIndexPoly::one(3);
        for (n, coord) in [(1usize, 0usize), (2, 1), (3, 2)] {
            let a = antiderivative_coord(&one, n, coord).unwrap();
            let mut deriv = vec![0u32; 3];
            deriv[coord] = n as u32;
            assert_eq!(partial_derivative(&a.poly, &deriv), one);
            assert!(is_harmonic(&a.poly));
        }
    }

    #[test]
    fn alpha_antiderivative_examples() {
        // alpha = (1,0), H = 1, N = 2 -> x
        let one = MultiIndexPoly::one(2);
        let a = antiderivative_alpha(&one, &[1, 0]).unwrap();
        assert_eq!(a.poly, MultiIndexPoly::coordinate(2, 0));
        // joint constraint with a mixed multi-index
        let a = antiderivative_alpha(&one, &[1, 1]).unwrap();
        assert_eq!(partial_derivative(&a.poly, &[1, 1]), one);
        assert!(is_harmonic(&a.poly));
        // N = 2 bound: M_2(H_alpha, 1) <= M_2(H, 1) / |alpha|!
        let bound = big_ratio(1, 4); // (1/2!)^2 on squared norms
        assert!(a.norm_ratio_sq <= bound);
    }

    #[test]
    fn rejects_bad_inputs() {
        let x2 = MultiIndexPoly::from_int_terms(2, &[(&[2, 0], 1, 1)]);
        assert!(matches!(
            antiderivative_coord(&x2, 1, 0),
            Err(Error::Contract(_))
        ));
        let mixed = MultiIndexPoly::from_int_terms(2, &[(&[1, 0], 1, 1), (&[0, 0], 1, 1)]);
        assert!(matches!(
            antiderivative_coord(&mixed, 1, 0),
            Err(Error::Contract(_))
        ));
        let one = MultiIndexPoly::one(2);
        assert!(antiderivative_coord(&one, 1, 5).is_err());
    }

    #[test]
    fn chain_composes_to_identity() {
        let one = MultiIndexPoly::one(2);
        let chain = antiderivative_chain(&one, &[1, 0], 5).unwrap();
        // D^{n alpha} applied to the n-th chain element recovers 1
        for (i, link) in chain.iter().enumerate() {
            let deriv = vec![(i + 1) as u32, 0];
            assert_eq!(partial_derivative(&link.poly, &deriv), one);
        }
    }

    #[test]
    fn compatibility_holds_on_small_cases() {
        let one = MultiIndexPoly::one(3);
        for (l, n) in [(1usize, 1usize), (1, 2), (2, 1)] {
            let ok = compatibility_check(&one, l, n, 0).unwrap();
            assert!(ok, "chain and direct solves diverged at l={l}, n={n}");
        }
    }

    #[test]
    fn calibration_for_plane_is_exact() {
        assert_eq!(calibrate_lemma_constants(2, 6), (0.0, 1.0));
    }

    #[test]
    fn calibrated_envelope_dominates_measured_ratios() {
        let (a_exp, c_mult) = calibrate_lemma_constants(3, 5);
        let one = MultiIndexPoly::one(3);
        for k in 1..=5usize {
            let mut alpha = vec![0u32; 3];
            alpha[0] = k as u32;
            let anti = antiderivative_alpha(&one, &alpha).unwrap();
            let ratio = rational_to_f64(&anti.norm_ratio_sq).sqrt();
            let env = alpha_norm_envelope(3, k, a_exp, c_mult);
            assert!(ratio <= env * (1.0 + 1e-12), "k={k}: {ratio} > {env}");
        }
    }
}
