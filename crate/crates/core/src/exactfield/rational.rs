//! Helpers for arbitrary-precision rationals: construction, exact square
//! roots and square-free decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number; always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Returns `Some(s)` with `s*s == n` when `n` is a perfect square.
pub fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Exact rational square root, if one exists.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let n = isqrt_exact(x.numer())?;
    let d = isqrt_exact(x.denom())?;
    Some(Rational::new(n, d))
}

/// Largest bound for trial division; cofactors that survive it are handled
/// by a perfect-square test only.
const TRIAL_LIMIT: u64 = 10_000_000;

/// Writes `n = c^2 * d` with `c > 0` and `d` square-free (sign kept in `d`).
///
/// Trial division runs up to the cube root of the remaining cofactor, after
/// which the cofactor has at most two prime factors and is square-free unless
/// it is a perfect square. Past `TRIAL_LIMIT` the cofactor is only tested for
/// being a square, so `d` may carry a large square factor in that regime.
pub fn squarefree_decomposition(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "square-free part of zero is undefined");
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut c = BigInt::one();
    let mut d = sign;

    let mut p: u64 = 2;
    loop {
        let bound = m.cbrt().to_u64().unwrap_or(u64::MAX);
        if p > bound || p > TRIAL_LIMIT {
            break;
        }
        let bp = BigInt::from(p);
        let mut e = 0u32;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            c *= bp.pow(e / 2);
            if e % 2 == 1 {
                d *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    match isqrt_exact(&m) {
        Some(s) => c *= s,
        None => d *= m,
    }
    (c, d)
}

/// Writes a nonzero rational as `x = c^2 * d` with `c` rational and `d` a
/// square-free integer.
pub fn squarefree_rational(x: &Rational) -> (Rational, BigInt) {
    let num = x.numer() * x.denom();
    let (c, d) = squarefree_decomposition(&num);
    (Rational::new(c, x.denom().clone()), d)
}

/// `floor(x)` for a rational.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_small() {
        let (c, d) = squarefree_decomposition(&BigInt::from(201));
        assert_eq!((c, d), (BigInt::from(1), BigInt::from(201)));
        let (c, d) = squarefree_decomposition(&BigInt::from(-60));
        assert_eq!((c, d), (BigInt::from(2), BigInt::from(-15)));
        let (c, d) = squarefree_decomposition(&BigInt::from(1521));
        assert_eq!((c, d), (BigInt::from(39), BigInt::from(1)));
    }

    #[test]
    fn squarefree_of_fraction() {
        // 49/16 - 4 = -15/16
        let (c, d) = squarefree_rational(&rat(-15, 16));
        assert_eq!(c, rat(1, 4));
        assert_eq!(d, BigInt::from(-15));
    }

    #[test]
    fn exact_roots() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(-4, 1)), None);
    }

    #[test]
    fn parse() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("17"), Some(int(17)));
        assert_eq!(parse_rational("1/0"), None);
    }

    proptest::proptest! {
        #[test]
        fn decomposition_recombines(n in -5_000_000i64..5_000_000) {
            proptest::prop_assume!(n != 0);
            let big = BigInt::from(n);
            let (c, d) = squarefree_decomposition(&big);
            proptest::prop_assert_eq!(&c * &c * &d, big);
            // no square of a small prime divides d
            for p in [2i64, 3, 5, 7, 11, 13] {
                proptest::prop_assert!(!(&d % BigInt::from(p * p)).is_zero());
            }
        }
    }
}
