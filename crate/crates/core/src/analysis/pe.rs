//! Probability that a uniformly random syndrome is correctable:
//! P_e = [sum_{i=1..t} C(n,i) (q-1)^i] / q^r.
//!
//! This bounds how often a wrong guess in the decryption loop survives
//! syndrome decoding.

use crate::combinat::{binomial, log10_ratio};
use num_bigint::BigUint;
use num_traits::Zero;

/// Exact numerator and denominator of P_e.
pub fn pe_correctable_exact(n: usize, k: usize, t: usize, q: u32) -> (BigUint, BigUint) {
    assert!(t <= n && k <= n);
    let r = n - k;
    let qm1 = BigUint::from(q - 1);
    let mut num = BigUint::zero();
    for i in 1..=t {
        num += binomial(n, i) * qm1.pow(i as u32);
    }
    (num, BigUint::from(q).pow(r as u32))
}

/// log10 of P_e, computed from the exact big-integer ratio.
pub fn pe_correctable(n: usize, k: usize, t: usize, q: u32) -> f64 {
    let (num, den) = pe_correctable_exact(n, k, t, q);
    if num.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_ratio(&num, &den)
}
