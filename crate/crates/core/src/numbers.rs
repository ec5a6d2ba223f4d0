//! Exact integer helpers: factorials, binomials, and decimal rendering of rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision natural number used for every count.
pub type BigNat = BigUint;

/// `0!, 1!, ..., n!`.
pub fn factorials(n: usize) -> Vec<BigNat> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = BigNat::one();
    out.push(acc.clone());
    for i in 1..=n {
        acc *= i as u64;
        out.push(acc.clone());
    }
    out
}

pub fn factorial(n: usize) -> BigNat {
    (1..=n as u64).fold(BigNat::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigNat {
    if k > n {
        return BigNat::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigNat::one();
    for i in 0..k {
        // acc = C(n, i) here, and C(n, i) * (n - i) is divisible by i + 1
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` for signed arguments; zero outside `0 <= k <= n`.
pub fn binomial_signed(n: i64, k: i64) -> BigNat {
    if n < 0 || k < 0 || k > n {
        BigNat::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

/// `C(n, floor(n/2))`, the size of a middle level of `B_n`.
pub fn middle_binomial(n: u64) -> BigNat {
    binomial(n, n / 2)
}

/// Renders `value` with `digits` significant digits, rounding half away from zero,
/// using exact arithmetic throughout. Magnitudes of `1e9` and above, or below
/// `1e-6`, use scientific notation (`1.23457e12`).
pub fn format_significant(value: &BigRational, digits: usize) -> String {
    assert!(digits > 0);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let v = value.abs();
    let ten = BigInt::from(10);
    // Find exponent e with 10^e <= v < 10^(e+1).
    let mut e: i64 = {
        let int_digits = v.numer().to_string().len() as i64 - v.denom().to_string().len() as i64;
        int_digits - 1
    };
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(ten.pow(e as u32))
        } else {
            BigRational::new(BigInt::one(), ten.pow((-e) as u32))
        }
    };
    while pow(e) > v {
        e -= 1;
    }
    while pow(e + 1) <= v {
        e += 1;
    }
    // scaled has `digits` integer digits
    let shift = digits as i64 - 1 - e;
    let scaled = &v * pow(shift);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = q;
    if r * 2 >= *scaled.denom() {
        mantissa += 1;
    }
    let mut shift = shift;
    let mut text = mantissa.to_string();
    if text.len() > digits {
        // rounding carried into a new digit, e.g. 9.999995 -> 10.0000
        text.truncate(digits);
        shift -= 1;
    }
    let exponent = digits as i64 - 1 - shift;
    let rendered = if !(-6..9).contains(&exponent) {
        format!("{}e{exponent}", place_point(&text, digits as i64 - 1))
    } else {
        place_point(&text, shift)
    };
    if negative {
        format!("-{rendered}")
    } else {
        rendered
    }
}

// `digits` scaled by 10^shift; reinsert the decimal point.
fn place_point(digits: &str, shift: i64) -> String {
    if shift <= 0 {
        let mut s = digits.to_string();
        s.extend(std::iter::repeat_n('0', (-shift) as usize));
        return s;
    }
    let shift = shift as usize;
    if shift >= digits.len() {
        format!("0.{}{}", "0".repeat(shift - digits.len()), digits)
    } else {
        let (int, frac) = digits.split_at(digits.len() - shift);
        format!("{int}.{frac}")
    }
}

/// Lossy conversion for display or loose comparisons.
pub fn ratio_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 6), 210u32.into());
        assert_eq!(binomial(8, 1), 8u32.into());
        assert_eq!(binomial(3, 5), BigNat::zero());
        assert_eq!(binomial(0, 0), BigNat::one());
        assert_eq!(middle_binomial(4), 6u32.into());
        assert_eq!(binomial_signed(4, -1), BigNat::zero());
        assert_eq!(
            binomial(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn factorial_table() {
        let f = factorials(5);
        assert_eq!(f[0], BigNat::one());
        assert_eq!(f[5], 120u32.into());
        assert_eq!(factorial(20).to_string(), "2432902008176640000");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(&r(1, 3), 6), "0.333333");
        assert_eq!(format_significant(&r(2, 3), 6), "0.666667");
        assert_eq!(format_significant(&r(1, 1), 6), "1.00000");
        assert_eq!(format_significant(&r(252, 1), 6), "252.000");
        assert_eq!(format_significant(&r(1234567, 1), 6), "1234570");
        assert_eq!(format_significant(&r(9999995, 10_000_000), 6), "1.00000");
        assert_eq!(format_significant(&r(-1, 8), 2), "-0.13");
        assert_eq!(format_significant(&r(3, 1000), 3), "0.00300");
        assert_eq!(format_significant(&r(0, 1), 6), "0");
        assert_eq!(
            format_significant(&r(1_234_567_890_123, 1), 6),
            "1.23457e12"
        );
        assert_eq!(format_significant(&r(999_999_999, 1), 3), "1.00e9");
        assert_eq!(format_significant(&r(1, 10_000_000), 2), "1.0e-7");
        assert_eq!(format_significant(&r(5, 1_000_000_000), 1), "5e-9");
    }
}
