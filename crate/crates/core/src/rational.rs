//! Parsing and formatting of exact rationals in the `p/q` wire format.

use crate::error::{Error, Result};
use crate::{Int, Rational};
use num_traits::{Signed, Zero};

/// Shorthand constructor.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Int::from(num), Int::from(den))
}

/// Parse `"p/q"` or `"p"`; the sign may sit on the numerator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: Int = num
        .parse()
        .map_err(|_| Error::domain(format!("bad rational numerator in {s:?}")))?;
    let d: Int = den
        .parse()
        .map_err(|_| Error::domain(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::domain(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Render as `p/q`, or plain `p` for integers. No decimal rendering anywhere.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// True iff `r` is the square of a rational, tested exactly on numerator and
/// denominator.
pub fn is_perfect_square(r: &Rational) -> bool {
    if r.is_negative() {
        return false;
    }
    is_square_int(&r.numer().clone()) && is_square_int(&r.denom().clone())
}

fn is_square_int(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &(&s * &s) == n
}

/// Floor of the square root of a non-negative rational.
pub fn isqrt_floor(r: &Rational) -> Int {
    assert!(!r.is_negative());
    // floor(sqrt(p/q)): start from isqrt(p)/isqrt(q)-ish estimate, then fix up.
    let mut x = (r.numer() / r.denom()).sqrt();
    loop {
        let x1 = &x + 1;
        let sq = Rational::from_integer(&x1 * &x1);
        if &sq <= r {
            x = x1;
        } else {
            break;
        }
    }
    while Rational::from_integer(&x * &x) > *r {
        x -= 1;
    }
    x
}
