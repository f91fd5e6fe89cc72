//! The dimension-dependent exponential-type constants c_N.

/// c_2 = 1; for N >= 3,
/// c_N = N ( prod_{j=1}^{N-1} (2j)^{2j} / (2j+1)^{2j+1} )^{1/2N},
/// evaluated in the log domain. Satisfies c_N > sqrt(N/2) with
/// c_N - sqrt(N/2) -> 0 as N grows.
pub fn c_n_constant(dim: usize) -> f64 {
    assert!(dim >= 2);
    if dim == 2 {
        return 1.0;
    }
    let mut ln_prod = 0.0f64;
    for j in 1..dim {
        let a = 2.0 * j as f64;
        ln_prod += a * a.ln() - (a + 1.0) * (a + 1.0).ln();
    }
    let value = (dim as f64).ln() + ln_prod / (2.0 * dim as f64);
    let c = value.exp();
    debug_assert!(c > (dim as f64 / 2.0).sqrt());
    c
}
