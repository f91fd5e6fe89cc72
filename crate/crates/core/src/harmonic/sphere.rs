//! Sphere integrals for polynomials: exact normalized monomial moments,
//! the r-sphere inner product, average L^2 norms, sampled sup norms, and
//! the Poisson kernel of a ball.
//!
//! Norm-level statements go through the exact moment formula; quadrature
//! grids exist only for the sup norm and the Poisson integral (N = 2, 3).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::rational::{rational_from_f64, rational_to_f64};

use super::poly::{homogeneous_parts, MultiIndexPoly};

/// Normalized moment of a monomial over the unit sphere:
/// int_{S(1)} x^beta dsigma_1 with sigma_1(S(1)) = 1. Zero when any
/// exponent is odd; otherwise the rational
/// prod_k (beta_k - 1)!! / prod_{i=0}^{s-1} (N + 2i), where s = |beta|/2.
pub fn sphere_moment(dim: usize, beta: &[u32]) -> BigRational {
    assert_eq!(beta.len(), dim);
    if beta.iter().any(|&e| e % 2 == 1) {
        return BigRational::zero();
    }
    let s: u32 = beta.iter().sum::<u32>() / 2;
    let mut num = BigRational::one();
    for &e in beta {
        let gamma = e / 2;
        // (2 gamma - 1)!! = 1 * 3 * ... * (2 gamma - 1)
        for i in 0..gamma {
            num *= BigRational::from_integer(((2 * i + 1) as i64).into());
        }
    }
    let mut den = BigRational::one();
    for i in 0..s {
        den *= BigRational::from_integer(((dim as i64) + 2 * i as i64).into());
    }
    num / den
}

/// <g, h>_r computed exactly from the moment formula, for rational r.
pub fn inner_product_exact(
    g: &MultiIndexPoly,
    h: &MultiIndexPoly,
    r: &BigRational,
) -> Result<BigRational> {
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: h.dim() });
    }
    let product = g.mul(h);
    let mut r_pows: Vec<BigRational> = vec![BigRational::one()];
    let mut acc = BigRational::zero();
    for (beta, c) in product.terms() {
        let total: u32 = beta.iter().sum();
        while r_pows.len() <= total as usize {
            let next = r_pows.last().unwrap() * r;
            r_pows.push(next);
        }
        let m = sphere_moment(product.dim(), beta);
        if !m.is_zero() {
            acc += c * &m * &r_pows[total as usize];
        }
    }
    Ok(acc)
}

/// <g, h>_r as f64 (exact computation, one final rounding).
pub fn inner_product_r(g: &MultiIndexPoly, h: &MultiIndexPoly, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    let rq = rational_from_f64(r);
    Ok(rational_to_f64(&inner_product_exact(g, h, &rq)?))
}

/// M_2^2(h, r) exactly, via the orthogonal homogeneous decomposition:
/// sum_m r^{2m} <H_m, H_m>_1.
pub fn m2_sq_exact(h: &MultiIndexPoly, r: &BigRational) -> BigRational {
    let parts = homogeneous_parts(h);
    let mut acc = BigRational::zero();
    for (degree, part) in &parts {
        let ip = inner_product_exact(part, part, &BigRational::one())
            .expect("same dimension");
        let mut r2m = BigRational::one();
        for _ in 0..(2 * degree) {
            r2m *= r;
        }
        acc += ip * r2m;
    }
    acc
}

/// M_2(h, r) = sqrt(<h, h>_r).
pub fn m2_sphere(h: &MultiIndexPoly, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    let rq = rational_from_f64(r);
    Ok(rational_to_f64(&m2_sq_exact(h, &rq)).sqrt())
}

/// Per-degree profile (m, M_2(H_m, r)) of the homogeneous decomposition.
pub fn m2_profile(h: &MultiIndexPoly, r: f64) -> Result<Vec<(u32, f64)>> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    let rq = rational_from_f64(r);
    let parts: BTreeMap<u32, MultiIndexPoly> = homogeneous_parts(h);
    Ok(parts
        .iter()
        .map(|(m, part)| {
            let sq = m2_sq_exact(part, &rq);
            (*m, rational_to_f64(&sq).sqrt())
        })
        .collect())
}

/// Sampled sup of |h| on S(r) for N in {2, 3}; grids plus a local
/// refinement pass. Other dimensions must use
/// `sup_norm_sphere_sampled`, which reports its sampling confidence.
pub fn sup_norm_sphere(h: &MultiIndexPoly, r: f64, samples: usize) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    match h.dim() {
        2 => Ok(sup_circle(h, r, samples)),
        3 => Ok(sup_sphere3(h, r, samples)),
        d => Err(Error::Parameter(format!(
            "sup-norm grids support N = 2, 3 only (got N = {d}); use sup_norm_sphere_sampled"
        ))),
    }
}

fn sup_circle(h: &MultiIndexPoly, r: f64, samples: usize) -> f64 {
    let degree = h.degree().unwrap_or(0) as usize;
    let n = samples.max(8 * degree).max(64);
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let eval = |t: f64| h.eval_f64(&[r * t.cos(), r * t.sin()]).abs();
    let mut best = 0.0f64;
    let mut best_t = 0.0f64;
    for j in 0..n {
        let t = j as f64 * step;
        let v = eval(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    // golden-section refinement around the best sample
    let golden = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_t - step, best_t + step);
    for _ in 0..60 {
        let a = hi - golden * (hi - lo);
        let b = lo + golden * (hi - lo);
        if eval(a) < eval(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    best.max(eval(0.5 * (lo + hi)))
}

fn sup_sphere3(h: &MultiIndexPoly, r: f64, samples: usize) -> f64 {
    let degree = h.degree().unwrap_or(0) as usize;
    // product grid in (polar, azimuthal); budget ~ samples total points
    let n_theta = ((samples as f64).sqrt() as usize).max(4 * degree).max(32);
    let n_phi = 2 * n_theta;
    let eval = |theta: f64, phi: f64| {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        h.eval_f64(&[r * st * cp, r * st * sp, r * ct]).abs()
    };
    let mut best = 0.0f64;
    let mut best_pt = (0.0, 0.0);
    for i in 0..=n_theta {
        let theta = std::f64::consts::PI * i as f64 / n_theta as f64;
        for j in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            let v = eval(theta, phi);
            if v > best {
                best = v;
                best_pt = (theta, phi);
            }
        }
    }
    // local refinement: shrink a box around the best point
    let mut dt = std::f64::consts::PI / n_theta as f64;
    let mut dp = 2.0 * std::f64::consts::PI / n_phi as f64;
    let (mut ct, mut cp) = best_pt;
    for _ in 0..24 {
        for i in -2i32..=2 {
            for j in -2i32..=2 {
                let v = eval(ct + i as f64 * dt / 2.0, cp + j as f64 * dp / 2.0);
                if v > best {
                    best = v;
                    ct += i as f64 * dt / 2.0;
                    cp += j as f64 * dp / 2.0;
                }
            }
        }
        dt /= 2.0;
        dp /= 2.0;
    }
    best
}

/// Monte-Carlo sup estimate for general N with a recorded seed; returns
/// (estimate, samples) so callers can report the confidence context.
pub fn sup_norm_sphere_sampled(
    h: &MultiIndexPoly,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<(f64, usize)> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    let dim = h.dim();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    let n = samples.max(1000);
    let mut x = vec![0.0f64; dim];
    for _ in 0..n {
        // Gaussian direction, normalized
        let mut norm_sq = 0.0;
        for xi in x.iter_mut() {
            // Box-Muller from two uniforms
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            *xi = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            norm_sq += *xi * *xi;
        }
        let scale = r / norm_sq.sqrt();
        for xi in x.iter_mut() {
            *xi *= scale;
        }
        best = best.max(h.eval_f64(&x).abs());
    }
    Ok((best, n))
}

/// Unnormalized surface area of S(1) in R^N.
pub fn sphere_surface_area(dim: usize) -> f64 {
    assert!(dim >= 2);
    // sigma_2 = 2 pi, sigma_3 = 4 pi, sigma_N = sigma_{N-2} * 2 pi / (N - 2)
    let mut sigma = if dim % 2 == 0 { 2.0 * std::f64::consts::PI } else { 4.0 * std::f64::consts::PI };
    let mut n = if dim % 2 == 0 { 2 } else { 3 };
    while n < dim {
        n += 2;
        sigma *= 2.0 * std::f64::consts::PI / (n as f64 - 2.0);
    }
    sigma
}

/// Poisson kernel of the ball B(x0, r):
/// (1 / (sigma_N r)) (r^2 - |x - x0|^2) / |x - y|^N for y on S(x0, r).
pub fn poisson_kernel(x0: &[f64], r: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let dim = x0.len();
    if x.len() != dim || y.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: x.len().max(y.len()) });
    }
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    let dist_y: f64 = x0
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if (dist_y - r).abs() > 1e-9 * r.max(1.0) {
        return Err(Error::Parameter(format!(
            "y must lie on S(x0, r): |y - x0| = {dist_y}, r = {r}"
        )));
    }
    let dxy_sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    if dxy_sq == 0.0 {
        return Err(Error::Parameter("Poisson kernel is singular at x = y".into()));
    }
    let dxx0_sq: f64 = x.iter().zip(x0).map(|(a, b)| (a - b) * (a - b)).sum();
    let sigma = sphere_surface_area(dim);
    Ok((r * r - dxx0_sq) / (sigma * r * dxy_sq.powf(dim as f64 / 2.0)))
}

/// Poisson integral of h over S(0, r) evaluated at an interior point.
/// N = 2 uses the trapezoid rule; N = 3 a Gauss-Legendre x trapezoid
/// product rule.
pub fn poisson_integral(
    h: &MultiIndexPoly,
    r: f64,
    x: &[f64],
    quad_points: usize,
) -> Result<f64> {
    let dim = h.dim();
    if x.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: x.len() });
    }
    let x_norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if x_norm >= r {
        return Err(Error::Parameter(format!(
            "evaluation point must be interior: |x| = {x_norm}, r = {r}"
        )));
    }
    let x0 = vec![0.0; dim];
    match dim {
        2 => {
            let n = quad_points.max(64);
            let mut acc = 0.0;
            for j in 0..n {
                let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                let y = [r * t.cos(), r * t.sin()];
                let k = poisson_kernel(&x0, r, x, &y)?;
                acc += k * h.eval_f64(&y);
            }
            // d sigma = r dt on the circle
            Ok(acc * 2.0 * std::f64::consts::PI * r / n as f64)
        }
        3 => {
            let n_phi = quad_points.max(64);
            let n_theta = (n_phi / 2).max(32);
            let (nodes, weights) = gauss_legendre(n_theta);
            let mut acc = 0.0;
            for (ct, w) in nodes.iter().zip(&weights) {
                let st = (1.0 - ct * ct).sqrt();
                for j in 0..n_phi {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
                    let y = [r * st * phi.cos(), r * st * phi.sin(), r * ct];
                    let k = poisson_kernel(&x0, r, x, &y)?;
                    acc += w * k * h.eval_f64(&y);
                }
            }
            // d sigma = r^2 d(cos theta) d phi
            Ok(acc * r * r * 2.0 * std::f64::consts::PI / n_phi as f64)
        }
        d => Err(Error::Parameter(format!(
            "Poisson integral quadrature supports N = 2, 3 only (got N = {d})"
        ))),
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] via Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::basis::harmonic_basis;
    use crate::rational::big_ratio;

    #[test]
    fn moments_with_odd_exponent_vanish() {
        assert!(sphere_moment(3, &[1, 0, 0]).is_zero());
        assert!(sphere_moment(2, &[2, 3]).is_zero());
    }

    #[test]
    fn moment_values() {
        assert_eq!(sphere_moment(3, &[2, 0, 0]), big_ratio(1, 3));
        assert_eq!(sphere_moment(2, &[2, 0]), big_ratio(1, 2));
        assert_eq!(sphere_moment(2, &[4, 0]), big_ratio(3, 8));
        assert_eq!(sphere_moment(2, &[2, 2]), big_ratio(1, 8));
        assert_eq!(sphere_moment(3, &[0, 0, 0]), big_ratio(1, 1));
    }

    #[test]
    fn circle_moment_matches_trapezoid() {
        // quadrature oracle for E[cos^2 t] over the circle
        let n = 4096;
        let mut acc = 0.0;
        for j in 0..n {
            let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            acc += t.cos().powi(2);
        }
        acc /= n as f64;
        let exact = rational_to_f64(&sphere_moment(2, &[2, 0]));
        assert!((acc - exact).abs() < 1e-12);
    }

    #[test]
    fn inner_product_basics() {
        let one = MultiIndexPoly::one(3);
        assert_eq!(
            inner_product_exact(&one, &one, &big_ratio(7, 2)).unwrap(),
            big_ratio(1, 1)
        );
        let x = MultiIndexPoly::coordinate(3, 0);
        assert_eq!(
            inner_product_exact(&x, &x, &BigRational::one()).unwrap(),
            big_ratio(1, 3)
        );
    }

    #[test]
    fn distinct_degree_harmonics_are_orthogonal() {
        let r = big_ratio(5, 3);
        for (d1, d2) in [(0usize, 1usize), (1, 2), (2, 3), (1, 4)] {
            let b1 = harmonic_basis(3, d1);
            let b2 = harmonic_basis(3, d2);
            for g in &b1.elements {
                for h in &b2.elements {
                    assert!(inner_product_exact(g, h, &r).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn m2_homogeneous_scaling() {
        let b = harmonic_basis(3, 4);
        let h = &b.elements[0];
        let r = big_ratio(3, 2);
        let m2_r = m2_sq_exact(h, &r);
        let m2_1 = m2_sq_exact(h, &BigRational::one());
        let mut r8 = BigRational::one();
        for _ in 0..8 {
            r8 *= &r;
        }
        assert_eq!(m2_r, m2_1 * r8);
    }

    #[test]
    fn m2_examples() {
        // h = x in R^3 at r = 2: 2/sqrt(3)
        let x = MultiIndexPoly::coordinate(3, 0);
        let v = m2_sphere(&x, 2.0).unwrap();
        assert!((v - 2.0 / 3.0f64.sqrt()).abs() < 1e-14);
        // mixed 1 + x: orthogonality of degrees 0 and 1
        let h = MultiIndexPoly::one(3).add(&x);
        let v = m2_sphere(&h, 1.0).unwrap();
        assert!((v - (1.0 + 1.0 / 3.0f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn parseval_consistency() {
        // M_2^2(h, r) = sum_m M_2^2(H_m, r) exactly
        let h = MultiIndexPoly::from_int_terms(
            2,
            &[(&[0, 0], 2, 1), (&[1, 0], 1, 1), (&[2, 0], 1, 1), (&[0, 2], -1, 1)],
        );
        let r = big_ratio(7, 4);
        let total = m2_sq_exact(&h, &r);
        let sum: BigRational = homogeneous_parts(&h)
            .values()
            .map(|part| m2_sq_exact(part, &r))
            .sum();
        assert_eq!(total, sum);
    }

    #[test]
    fn sup_norm_examples() {
        let x = MultiIndexPoly::coordinate(2, 0);
        assert!((sup_norm_sphere(&x, 1.0, 256).unwrap() - 1.0).abs() < 1e-10);
        let h = MultiIndexPoly::from_int_terms(2, &[(&[2, 0], 1, 1), (&[0, 2], -1, 1)]);
        assert!((sup_norm_sphere(&h, 2.0, 256).unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn sup_dominates_m2() {
        for dim in [2usize, 3] {
            let b = harmonic_basis(dim, 3);
            for h in &b.elements {
                let sup = sup_norm_sphere(h, 1.5, 4096).unwrap();
                let m2 = m2_sphere(h, 1.5).unwrap();
                assert!(m2 <= sup * (1.0 + 1e-9), "{m2} > {sup}");
            }
        }
    }

    #[test]
    fn sampled_sup_for_general_dimension() {
        let x = MultiIndexPoly::coordinate(4, 0);
        let (est, n) = sup_norm_sphere_sampled(&x, 1.0, 20000, 7).unwrap();
        assert_eq!(n, 20000);
        assert!(est <= 1.0 + 1e-12 && est > 0.9, "est {est}");
        assert!(sup_norm_sphere(&x, 1.0, 64).is_err());
    }

    #[test]
    fn kernel_at_center_is_constant() {
        let x0 = [0.0, 0.0];
        for t in [0.0f64, 1.0, 2.5] {
            let y = [2.0 * t.cos(), 2.0 * t.sin()];
            let k = poisson_kernel(&x0, 2.0, &x0, &y).unwrap();
            // 1 / (sigma_N r^{N-1})
            let expected = 1.0 / (2.0 * std::f64::consts::PI * 2.0);
            assert!((k - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_positive_inside() {
        let x0 = [0.0, 0.0, 0.0];
        let y = [0.0, 0.0, 1.0];
        let x = [0.3, -0.2, 0.4];
        assert!(poisson_kernel(&x0, 1.0, &x, &y).unwrap() > 0.0);
    }

    #[test]
    fn kernel_rejects_singular_point() {
        let x0 = [0.0, 0.0];
        let y = [1.0, 0.0];
        assert!(poisson_kernel(&x0, 1.0, &y, &y).is_err());
    }

    #[test]
    fn poisson_reproduces_harmonic_plane() {
        let h = MultiIndexPoly::from_int_terms(2, &[(&[2, 0], 1, 1), (&[0, 2], -1, 1)]);
        let x = [0.3, -0.5];
        let got = poisson_integral(&h, 1.0, &x, 2048).unwrap();
        assert!((got - h.eval_f64(&x)).abs() < 1e-10, "got {got}");
    }

    #[test]
    fn poisson_reproduces_harmonic_space() {
        // xz is harmonic in R^3
        let h = MultiIndexPoly::from_int_terms(3, &[(&[1, 0, 1], 1, 1)]);
        let x = [0.2, 0.3, -0.4];
        let got = poisson_integral(&h, 1.0, &x, 128).unwrap();
        assert!((got - h.eval_f64(&x)).abs() < 1e-8, "got {got}");
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (nodes, weights) = gauss_legendre(8);
        // integral of x^6 over [-1,1] = 2/7
        let got: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x.powi(6)).sum();
        assert!((got - 2.0 / 7.0).abs() < 1e-13);
    }

    #[test]
    fn surface_areas() {
        assert!((sphere_surface_area(2) - 2.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((sphere_surface_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-14);
        // sigma_4 = 2 pi^2
        assert!((sphere_surface_area(4) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
    }
}
