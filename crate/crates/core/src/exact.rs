//! Exact-arithmetic helpers: rationals, binomials, logarithms of big
//! integers with an explicit error bound, and the textual forms used in
//! CSV/JSON output.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Absolute error allowed on a value returned by [`ln_biguint`] or
/// [`ln_ratio`] of magnitude `v`.
pub fn ln_error_bound(v: f64) -> f64 {
    1e-12 * (1.0 + v.abs())
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn ratio_from_uint(num: &BigUint, den: &BigUint) -> Rational {
    Rational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn int(x: impl Into<BigInt>) -> Rational {
    Rational::from_integer(x.into())
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: go through logarithms.
        let sign = if x.is_negative() { -1.0 } else { 1.0 };
        let num = x.numer().abs().to_biguint().unwrap_or_default();
        let den = x.denom().to_biguint().unwrap_or_default();
        sign * (ln_biguint(&num) - ln_biguint(&den)).exp()
    })
}

/// Exact conversion of a finite float to a rational.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Natural log of a big integer. Returns `-inf` for zero.
///
/// The top 53 bits are converted exactly; the result is within
/// [`ln_error_bound`] of the true value.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational, `-inf` for zero.
pub fn ln_ratio(x: &Rational) -> f64 {
    assert!(!x.is_negative(), "ln of a negative rational");
    let num = x.numer().to_biguint().unwrap();
    let den = x.denom().to_biguint().unwrap();
    ln_biguint(&num) - ln_biguint(&den)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
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

/// Binomial coefficient in machine width; `None` on overflow.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Falling factorial `(a)_b = a (a-1) ... (a-b+1)` over the integers.
pub fn falling_factorial(a: i64, b: u64) -> BigInt {
    (0..b as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(a - i))
}

/// Number of perfect matchings of the complete r-graph on `n` vertices:
/// `n! / ((n/r)! (r!)^(n/r))`, zero when `r` does not divide `n`.
pub fn complete_pm_count(n: u64, r: u64) -> BigUint {
    if r == 0 || !n.is_multiple_of(r) {
        return BigUint::zero();
    }
    let k = n / r;
    factorial(n) / (factorial(k) * factorial(r).pow(k as u32))
}

/// `num/den` with the sign on the numerator.
pub fn fmt_ratio(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_ratio(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Decimal rendering with 12 significant digits; trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        trim_zeros(&s)
    } else {
        let s = format!("{:.11e}", x);
        let (mantissa, e) = s.split_once('e').unwrap();
        format!("{}e{}", trim_zeros(mantissa), e)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Least common multiple of the denominators, handy when summing many
/// rationals with a shared denominator.
pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_small_cases() {
        assert_eq!(complete_pm_count(6, 3), BigUint::from(10u32));
        assert_eq!(complete_pm_count(9, 3), BigUint::from(280u32));
        assert_eq!(complete_pm_count(12, 3), BigUint::from(15400u32));
        assert_eq!(complete_pm_count(7, 3), BigUint::zero());
        assert_eq!(complete_pm_count(0, 3), BigUint::one());
    }

    #[test]
    fn ln_of_big_integers() {
        let x = factorial(40);
        let exact: f64 = (1..=40).map(|i| (i as f64).ln()).sum();
        assert!((ln_biguint(&x) - exact).abs() < ln_error_bound(exact));
        assert_eq!(ln_biguint(&BigUint::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(2, 2), BigInt::from(2));
        assert_eq!(falling_factorial(1, 2), BigInt::from(0));
        assert_eq!(falling_factorial(5, 0), BigInt::from(1));
    }

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(std::f64::consts::LN_10), "2.30258509299");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-0.5), "-0.5");
        assert_eq!(fmt_sig(6.1798e-4), "0.00061798");
        assert_eq!(fmt_sig(1.5e20), "1.5e20");
    }

    #[test]
    fn ratio_text_round_trip() {
        let x = ratio(-3, 9);
        assert_eq!(fmt_ratio(&x), "-1/3");
        assert_eq!(parse_ratio("-1/3"), Some(x));
        assert_eq!(parse_ratio("4"), Some(int(4)));
        assert_eq!(parse_ratio("1/0"), None);
    }
}
