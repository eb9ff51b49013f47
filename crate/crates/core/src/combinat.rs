//! Exact big-integer combinatorics shared by the constant-weight codec and
//! the analysis arithmetic.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        num /= BigUint::from(i + 1); // exact at every step: product of j consecutive integers is divisible by j!
    }
    num
}

/// floor(log2(x)) for x >= 1.
pub fn floor_log2(x: &BigUint) -> u64 {
    assert!(!x.is_zero());
    x.bits() - 1
}

/// log2(x) with f64 precision, valid for arbitrarily large x.
pub fn log2_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// log10 of the exact rational num/den.
pub fn log10_ratio(num: &BigUint, den: &BigUint) -> f64 {
    (log2_big(num) - log2_big(den)) * std::f64::consts::LOG10_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(12, 2), BigUint::from(66u32));
        assert_eq!(binomial(12, 3), BigUint::from(220u32));
        assert_eq!(binomial(5, 0), BigUint::from(1u32));
        assert_eq!(binomial(5, 6), BigUint::zero());
        assert_eq!(binomial(306, 1), BigUint::from(306u32));
    }

    #[test]
    fn log_helpers() {
        let x = BigUint::from(1024u32);
        assert_eq!(floor_log2(&x), 10);
        assert!((log2_big(&x) - 10.0).abs() < 1e-12);
        let big = BigUint::from(3u32).pow(200);
        assert!((log2_big(&big) - 200.0 * 3f64.log2()).abs() < 1e-9);
        // log10(1/2^10) = -3.0103
        assert!((log10_ratio(&BigUint::one(), &x) + 3.0103).abs() < 1e-3);
    }
}
