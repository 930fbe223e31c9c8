//! Exact rational scalars.
//!
//! Every coefficient in the engine is an arbitrary-precision rational;
//! there is no floating point anywhere. Values are kept reduced with a
//! positive denominator (the `num-rational` representation guarantees
//! both invariants).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// The one and only coefficient field of the engine.
pub type Rational = num_rational::BigRational;

/// Integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair. Panics on zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse an exact rational from `p` or `p/q` text.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty rational literal".into());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("bad integer `{num}` in rational literal"))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| format!("bad denominator `{d}` in rational literal"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in `{t}`"));
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `p` when the denominator is one, `p/q` otherwise.
pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Binomial coefficient C(n, k) as a rational, n a big integer.
pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for t in 0..k {
        acc *= Rational::new(BigInt::from(n - t), BigInt::from(t + 1));
    }
    acc
}

/// Integer power with negative exponents allowed; base must be nonzero
/// when the exponent is negative.
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow::pow(base.clone(), exp as usize)
    } else {
        assert!(!base.is_zero(), "negative power of zero");
        num_traits::pow::pow(base.recip(), (-exp) as usize)
    }
}

/// Sign helper for (-1)^k factors.
pub fn neg_one_pow(k: u64) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}
