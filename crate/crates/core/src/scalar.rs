//! Exact rational scalars.
//!
//! Every computation in the crate runs over arbitrary-precision rationals, so
//! ranks, kernels and operator identities are decided exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `"p/q"` or `"p"` (optionally signed, surrounding whitespace ignored).
pub fn parse(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational {text:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Renders as `"p/q"`, or `"p"` for integers.
pub fn render(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn factorial(n: u32) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// Falling factorial `n (n-1) ... (n-k+1)` as a scalar.
pub fn falling(n: u32, k: u32) -> Scalar {
    if k > n {
        return zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
    }
    BigRational::from_integer(acc)
}

pub fn binomial(n: u32, k: u32) -> Scalar {
    if k > n {
        return zero();
    }
    falling(n, k) / factorial(k)
}

/// Draws `p/q` with `p` uniform in `[-bound, bound]` and `q` uniform in `[1, bound]`.
pub fn random_small<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Scalar {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound.max(1));
    frac(num, den)
}

/// Like [`random_small`] but never zero.
pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Scalar {
    loop {
        let x = random_small(rng, bound);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn is_negative(x: &Scalar) -> bool {
    x.is_negative()
}
