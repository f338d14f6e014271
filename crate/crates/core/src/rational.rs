//! Exact rational numbers used for rates, capacities and LP arithmetic.

use alloc::string::String;
use core::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Rates and capacities. Every value reported by the toolkit is exact.
pub type Rational = num_rational::Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseRationalError(pub String);

/// Builds `num/den`.
pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn int(v: i128) -> Rational {
    Rational::from_integer(v)
}

/// Parses `"3"`, `"-5/2"`, `"1.25"` or `"2e-3"` exactly.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(String::from(text));
    let t = text.trim();
    if t.is_empty() {
        return Err(err());
    }
    if t.contains('/') {
        let r = Rational::from_str(t).map_err(|_| err())?;
        return Ok(r);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e = i32::from_str(&t[pos + 1..]).map_err(|_| err())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let mut num: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        num = num
            .checked_mul(10)
            .and_then(|n| n.checked_add(i128::from(b - b'0')))
            .ok_or_else(err)?;
    }
    let scale = exponent - frac_part.len() as i32;
    let pow = 10i128
        .checked_pow(scale.unsigned_abs())
        .ok_or_else(err)?;
    let mut value = if scale >= 0 {
        Rational::from_integer(num.checked_mul(pow).ok_or_else(err)?)
    } else {
        Rational::new(num, pow)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Positive part `max(x, 0)`.
pub fn pos(x: Rational) -> Rational {
    if x.is_positive() {
        x
    } else {
        Rational::zero()
    }
}

pub fn min(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Nearest dyadic rational `round(x * 2^bits) / 2^bits`.
pub fn from_f64_dyadic(x: f64, bits: u32) -> Rational {
    let scale = (1u64 << bits) as f64;
    let n = libm::round(x * scale) as i128;
    Rational::new(n, 1i128 << bits)
}

/// Scales a rational vector by the lcm of its denominators divided by the gcd of
/// its numerators, giving the primitive integer vector with the same direction.
pub fn primitive_direction(v: &[Rational]) -> alloc::vec::Vec<Rational> {
    let lcm = v.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
    let ints: alloc::vec::Vec<i128> = v.iter().map(|x| (x * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.iter().map(|x| Rational::from_integer(x / g)).collect()
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}
