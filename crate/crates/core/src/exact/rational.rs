//! Helpers around [`BigRational`]: construction, parsing, the `num/den`
//! wire format and rational choices inside open intervals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Serializes as `"num/den"`, or `"num"` when the denominator is one.
pub fn to_wire(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"n"`, `"-n"`, `"n/d"`.
pub fn parse(s: &str) -> Option<Rational> {
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

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Positive factor making `values` coprime integers; `None` if all are zero.
pub fn primitive_factor<'a>(
    values: impl IntoIterator<Item = &'a Rational> + Clone,
) -> Option<Rational> {
    let den = common_denominator(values.clone());
    let num = values
        .into_iter()
        .fold(BigInt::zero(), |acc, q| acc.gcd(&(q * &den).to_integer()));
    (!num.is_zero()).then(|| Rational::new(den, num))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// The rational of smallest denominator (then smallest absolute numerator)
/// strictly inside `(lo, hi)`. Requires `lo < hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !lo.is_negative() {
        simplest_positive(lo, hi)
    } else {
        -simplest_positive(&-hi, &-lo)
    }
}

// Stern-Brocot descent for 0 <= lo < hi.
fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    let candidate = &fl + Rational::one();
    if &candidate < hi {
        return candidate;
    }
    // lo and hi share the integer part `fl` (or hi == fl + 1).
    if &fl == lo {
        // fl itself is excluded; the answer is fl + 1/k with the least k.
        let k = (hi - &fl).recip().floor().to_integer() + BigInt::one();
        return fl + Rational::new(BigInt::one(), k);
    }
    let frac_lo = lo - &fl;
    let frac_hi = hi - &fl;
    // 1/x reverses the order: simplest in (1/frac_hi, 1/frac_lo).
    let inv_lo = frac_hi.recip();
    let inv_hi = if frac_lo.is_zero() {
        // unreachable given the branch above, kept total
        &inv_lo + Rational::one() + Rational::one()
    } else {
        frac_lo.recip()
    };
    fl + simplest_positive(&inv_lo, &inv_hi).recip()
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
pub fn reconstruct(x: &Rational, max_den: &BigInt) -> Rational {
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        if d.is_zero() {
            break;
        }
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            let k = (max_den - &q0).div_floor(&q1);
            let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
            let conv = Rational::new(p1.clone(), q1.clone());
            return if (&semi - x).abs() < (&conv - x).abs() {
                semi
            } else {
                conv
            };
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    Rational::new(p1, q1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format() {
        assert_eq!(to_wire(&frac(-6, 4)), "-3/2");
        assert_eq!(to_wire(&int(7)), "7");
        assert_eq!(parse(" -3/2 "), Some(frac(-3, 2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&frac(-1, 2), &frac(1, 3)), int(0));
        assert_eq!(simplest_between(&frac(13, 10), &frac(3, 2)), frac(4, 3));
        assert_eq!(simplest_between(&int(1), &int(3)), int(2));
        assert_eq!(simplest_between(&int(1), &int(2)), frac(3, 2));
        assert_eq!(simplest_between(&frac(-3, 2), &int(-1)), frac(-4, 3));
        let s = simplest_between(&frac(141, 100), &frac(142, 100));
        assert!(s > frac(141, 100) && s < frac(142, 100));
    }

    #[test]
    fn continued_fraction_reconstruction() {
        let approx = frac(141_421_356, 100_000_000);
        assert_eq!(reconstruct(&approx, &BigInt::from(10)), frac(7, 5));
        assert_eq!(
            reconstruct(&frac(333_333_334, 1_000_000_000), &BigInt::from(1000)),
            frac(1, 3)
        );
        assert_eq!(reconstruct(&frac(-1, 2), &BigInt::from(10)), frac(-1, 2));
    }
}
