//! Exact rational helpers: factorials, binomials, lossless f64 conversion,
//! logarithms of big rationals, and a minimal complex-rational type.
//!
//! Certificates assert polynomial identities, so everything constructed
//! symbolically stays in `BigRational` until a norm is evaluated.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn big_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossless f64 -> rational conversion. Every finite f64 is a dyadic rational.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Rational -> f64 with correct round-to-nearest-even (for results in the
/// normal range), regardless of how large numerator and denominator are.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let negative = q.is_negative();
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Scale so the integer quotient carries 54-55 bits, then round once.
    let t = 55 - (nb - db);
    let (n_sh, d_sh): (BigUint, BigUint) = if t >= 0 {
        (num << t as u64, den.clone())
    } else {
        (num.clone(), den << (-t) as u64)
    };
    let (quot, rem) = num_integer::Integer::div_rem(&n_sh, &d_sh);
    let qbits = quot.bits() as i64; // 55 or 56
    let drop = (qbits - 53).max(1) as u64;
    let kept = &quot >> drop;
    let mut mant = kept.to_u64().expect("53-bit mantissa");
    let dropped = &quot - (&kept << drop);
    let half = BigUint::one() << (drop - 1);
    let round_up = match dropped.cmp(&half) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => !rem.is_zero() || (mant & 1 == 1),
    };
    if round_up {
        mant += 1;
    }
    let exp = drop as i64 - t;
    let v = ldexp(mant as f64, exp);
    if negative {
        -v
    } else {
        v
    }
}

fn ldexp(x: f64, e: i64) -> f64 {
    // split so each factor stays in range
    let e = e.clamp(-4400, 4400) as i32;
    let (a, b) = (e / 2, e - e / 2);
    x * 2f64.powi(a) * 2f64.powi(b)
}

/// log2 of a positive big integer with ~f64 relative accuracy.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return (x.to_u64().expect("fits") as f64).log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_u64().expect("53 bits");
    (top as f64).log2() + shift as f64
}

/// Natural log of |q| for a nonzero rational, robust to huge magnitudes.
pub fn ln_rational_abs(q: &BigRational) -> f64 {
    assert!(!q.is_zero(), "ln of zero");
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    (log2_biguint(num) - log2_biguint(den)) * std::f64::consts::LN_2
}

pub fn biguint_to_bigint(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRat { re, im }
    }

    pub fn zero() -> Self {
        CRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        CRat { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        CRat { re: big_ratio(n, 1), im: BigRational::zero() }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        CRat { re: rational_from_f64(re), im: rational_from_f64(im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        CRat { re: &self.re * s, im: &self.im * s }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl std::ops::Add for &CRat {
    type Output = CRat;
    fn add(self, rhs: &CRat) -> CRat {
        CRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl std::ops::Sub for &CRat {
    type Output = CRat;
    fn sub(self, rhs: &CRat) -> CRat {
        CRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl std::ops::Mul for &CRat {
    type Output = CRat;
    fn mul(self, rhs: &CRat) -> CRat {
        CRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}
