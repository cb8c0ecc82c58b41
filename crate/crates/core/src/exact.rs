//! Exact integer and rational helpers shared by every module.
//!
//! Everything here works on `num-bigint` integers and `BigRational`; no
//! floating point leaks out except through [`to_f64`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Ordinary binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * (n - j) as u64 / (j + 1) as u64;
    }
    acc
}

/// Polynomial binomial `x(x-1)...(x-k+1)/k!` for any integer `x`.
///
/// Zero for `k < 0`. For negative `x` this is `(-1)^k C(k-x-1, k)`, which is
/// what the character polynomial needs when the first row runs out.
pub fn binomial_poly(x: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if x >= 0 {
        return BigInt::from(binomial(x as usize, k as usize));
    }
    let magnitude = BigInt::from(binomial((k - x - 1) as usize, k as usize));
    if k % 2 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

/// Multinomial `total! / (parts! * (total - sum(parts))!)`.
///
/// The remainder is an implicit last part, so `multinomial(m, &[k, l])` is
/// the trinomial `m!/(k! l! (m-k-l)!)`. Returns zero when the parts overflow
/// `total`.
pub fn multinomial(total: usize, parts: &[usize]) -> BigUint {
    let used: usize = parts.iter().sum();
    if used > total {
        return BigUint::zero();
    }
    let mut remaining = total;
    let mut acc = BigUint::one();
    for &k in parts {
        acc *= binomial(remaining, k);
        remaining -= k;
    }
    acc
}

pub fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn rat_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn rat_uint(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn pow(base: &BigRational, exp: usize) -> BigRational {
    num_traits::pow::pow(base.clone(), exp)
}

pub fn to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerators/denominators: scale both down to the same bit length.
    let numer = r.numer();
    let denom = r.denom();
    let shift = numer.bits().max(denom.bits()).saturating_sub(1000) as usize;
    let n = (numer >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (denom >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Formats as `"num/den"`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"`, an integer, or a plain decimal such as `"0.75"`.
/// Decimals are converted exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac_part}");
        let mut num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if negative {
            num = -num;
        }
        let den = num_traits::pow::pow(BigInt::from(10u32), frac_part.len());
        return Ok(BigRational::new(num, den));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn is_probability(p: &BigRational) -> bool {
    !p.is_negative() && *p <= BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial_poly(-1, 3), BigInt::from(-1));
        assert_eq!(binomial_poly(-1, 2), BigInt::from(1));
        assert_eq!(binomial_poly(-2, 2), BigInt::from(3));
        assert_eq!(binomial_poly(4, -1), BigInt::zero());
        assert_eq!(binomial_poly(2, 3), BigInt::zero());
    }

    #[test]
    fn poly_binomial_matches_falling_factorial() {
        for x in -6i64..8 {
            for k in 0i64..6 {
                let mut num = BigInt::one();
                for j in 0..k {
                    num *= x - j;
                }
                let expected = num / BigInt::from(factorial(k as usize));
                assert_eq!(binomial_poly(x, k), expected, "x={x} k={k}");
            }
        }
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(2, &[0, 1]), BigUint::from(2u32));
        assert_eq!(multinomial(4, &[1, 2]), BigUint::from(12u32));
        assert_eq!(multinomial(3, &[2, 2]), BigUint::zero());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0/1").unwrap(), rat(0, 1));
        assert_eq!(parse_rational("0.75").unwrap(), rat(3, 4));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("1").unwrap(), rat(1, 1));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert_eq!(format_rational(&rat(6, 3)), "2/1");
    }

    #[test]
    fn float_conversion_of_huge_ratio() {
        let big = num_traits::pow::pow(BigInt::from(3), 2000);
        let r = BigRational::new(big.clone() + 1, big);
        assert!((to_f64(&r) - 1.0).abs() < 1e-12);
    }
}
