//! Constant-weight encoding: a bijection between integers and weight-t_pub
//! error vectors, using the combinatorial number system for the positions
//! and mixed-radix base (q-1) digits for the values.
//!
//! In the Selected variant the sender must additionally satisfy `a e^T = 0`,
//! which consumes z value slots: the values at the last z chosen positions
//! are solved from the constraint instead of carrying message digits. A
//! retry nonce occupies the reserved high bits of the index, so solving
//! failures (a zero solved value or a singular z x z block) just bump the
//! nonce; the decoder recovers the full index and discards it.

use super::CryptoError;
use crate::combinat::binomial;
use crate::gf::{Felt, Field};
use crate::matrix::Mat;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub struct CwCodec {
    n: usize,
    t_pub: usize,
    /// number of message-bearing value slots (t_pub, minus z when a
    /// constraint must be solved)
    free_vals: usize,
    capacity_bits: u64,
    /// binomial table: choose[iица][j] = C(i, j) for i <= n, j <= t_pub
    choose: Vec<Vec<BigUint>>,
}

impl CwCodec {
    /// `reserved_vals` is 0 for the Hidden variant and z for Selected.
    pub fn new(n: usize, t_pub: usize, field: &Field, reserved_vals: usize) -> CwCodec {
        assert!(t_pub >= 1 && t_pub <= n && reserved_vals <= t_pub);
        let mut choose = vec![vec![BigUint::zero(); t_pub + 1]; n + 1];
        for (i, row) in choose.iter_mut().enumerate() {
            row[0] = BigUint::one();
            for j in 1..=t_pub.min(i) {
                row[j] = binomial(i, j);
            }
        }
        let free_vals = t_pub - reserved_vals;
        let qm1 = BigUint::from(field.q() - 1);
        let total = &choose[n][t_pub] * qm1.pow(free_vals as u32);
        // 2^capacity <= total; the nonce lives in the reserved headroom
        let mut capacity_bits = total.bits() - 1;
        let reserve = reserved_vals as u64 * field.bits_per_element() as u64;
        capacity_bits = capacity_bits.saturating_sub(reserve);
        CwCodec {
            n,
            t_pub,
            free_vals,
            capacity_bits,
            choose,
        }
    }

    /// Usable message bits per ciphertext.
    pub fn capacity_bits(&self) -> u64 {
        self.capacity_bits
    }

    /// Lexicographic rank -> sorted position set.
    fn unrank_positions(&self, mut idx: BigUint) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.t_pub);
        let mut x = 0usize;
        for j in 0..self.t_pub {
            let remaining = self.t_pub - j;
            loop {
                // combinations that keep position x available: C(n-1-x, remaining-1) of them start here
                let here = &self.choose[self.n - 1 - x][remaining - 1];
                if idx < *here {
                    out.push(x);
                    x += 1;
                    break;
                }
                idx -= here;
                x += 1;
            }
        }
        out
    }

    fn rank_positions(&self, positions: &[usize]) -> BigUint {
        let mut rank = BigUint::zero();
        let mut prev = 0usize;
        for (j, &p) in positions.iter().enumerate() {
            let remaining = self.t_pub - j;
            for x in prev..p {
                rank += &self.choose[self.n - 1 - x][remaining - 1];
            }
            prev = p + 1;
        }
        rank
    }

    /// Hidden-variant encoding: every value slot carries message digits.
    pub fn encode(&self, msg: &BigUint, field: &Field) -> Result<Vec<Felt>, CryptoError> {
        self.check_len(msg)?;
        let (positions, values) = self.split_index(msg.clone(), field);
        let mut e = vec![0; self.n];
        for (p, v) in positions.iter().zip(&values) {
            e[*p] = *v;
        }
        Ok(e)
    }

    pub fn decode(&self, e: &[Felt], field: &Field) -> Result<BigUint, CryptoError> {
        let (positions, values) = support_of(e);
        if positions.len() != self.t_pub {
            return Err(CryptoError::Malformed(format!(
                "error vector has weight {}, expected {}",
                positions.len(),
                self.t_pub
            )));
        }
        let idx = self.join_index(&positions, &values[..self.free_vals], field);
        Ok(self.mask_to_capacity(idx))
    }

    /// Selected-variant encoding: digits fill the first t_pub - z positions,
    /// the last z values are solved so that `a e^T = 0`.
    pub fn encode_constrained(
        &self,
        msg: &BigUint,
        a: &Mat,
        field: &Field,
    ) -> Result<Vec<Felt>, CryptoError> {
        self.check_len(msg)?;
        let z = self.t_pub - self.free_vals;
        debug_assert_eq!(a.rows, z);
        let nonce_limit = 1u64 << (z as u64 * field.bits_per_element() as u64).min(32);
        for nonce in 0..nonce_limit {
            let idx = msg + (BigUint::from(nonce) << self.capacity_bits);
            let (positions, values) = self.split_index(idx, field);
            if let Some(e) = solve_constraint(&positions, &values, a, field, self.n) {
                return Ok(e);
            }
        }
        Err(CryptoError::Unencodable)
    }

    pub fn decode_constrained(&self, e: &[Felt], field: &Field) -> Result<BigUint, CryptoError> {
        self.decode(e, field) // the constrained values are simply ignored
    }

    fn check_len(&self, msg: &BigUint) -> Result<(), CryptoError> {
        if msg.bits() > self.capacity_bits {
            return Err(CryptoError::MessageTooLong {
                bits: msg.bits(),
                capacity: self.capacity_bits,
            });
        }
        Ok(())
    }

    fn mask_to_capacity(&self, idx: BigUint) -> BigUint {
        let mask = (BigUint::one() << self.capacity_bits) - BigUint::one();
        idx & mask
    }

    /// index -> (sorted positions, message-bearing values in position order)
    fn split_index(&self, idx: BigUint, field: &Field) -> (Vec<usize>, Vec<Felt>) {
        let qm1 = BigUint::from(field.q() - 1);
        let radix = qm1.pow(self.free_vals as u32);
        let pos_idx = &idx / &radix;
        let mut val_idx = idx % &radix;
        let positions = self.unrank_positions(pos_idx);
        let mut values = Vec::with_capacity(self.free_vals);
        for _ in 0..self.free_vals {
            let digit = (&val_idx % &qm1).to_u32().unwrap();
            val_idx /= &qm1;
            values.push(digit + 1);
        }
        (positions, values)
    }

    fn join_index(&self, positions: &[usize], free_values: &[Felt], field: &Field) -> BigUint {
        let qm1 = BigUint::from(field.q() - 1);
        let mut val_idx = BigUint::zero();
        for &v in free_values.iter().rev() {
            val_idx = val_idx * &qm1 + BigUint::from(v - 1);
        }
        self.rank_positions(positions) * qm1.pow(self.free_vals as u32) + val_idx
    }
}

/// (sorted nonzero positions, their values)
pub fn support_of(e: &[Felt]) -> (Vec<usize>, Vec<Felt>) {
    let mut positions = Vec::new();
    let mut values = Vec::new();
    for (i, &v) in e.iter().enumerate() {
        if v != 0 {
            positions.push(i);
            values.push(v);
        }
    }
    (positions, values)
}

/// Fill the free positions with the given values and solve the trailing z
/// values so that `a e^T = 0`. None if the z x z block is singular or any
/// solved value is zero (the weight would drop below t_pub).
pub fn solve_constraint(
    positions: &[usize],
    free_values: &[Felt],
    a: &Mat,
    field: &Field,
    n: usize,
) -> Option<Vec<Felt>> {
    let z = a.rows;
    let t = positions.len();
    debug_assert_eq!(free_values.len(), t - z);
    let mut e = vec![0; n];
    for (p, v) in positions[..t - z].iter().zip(free_values) {
        e[*p] = *v;
    }
    if z == 0 {
        return Some(e);
    }
    let solved_pos = &positions[t - z..];
    let block = Mat::from_fn(z, z, |i, j| a.get(i, solved_pos[j]));
    let block_inv = block.invert(field).ok()?;
    // rhs = -(a restricted to free part) * e_free
    let rhs: Vec<Felt> = (0..z)
        .map(|i| {
            let mut acc = 0;
            for (p, v) in positions[..t - z].iter().zip(free_values) {
                acc = field.add(acc, field.mul(a.get(i, *p), *v));
            }
            field.neg(acc)
        })
        .collect();
    let solved = block_inv.mul_vec(&rhs, field).ok()?;
    if solved.iter().any(|&v| v == 0) {
        return None;
    }
    for (p, v) in solved_pos.iter().zip(&solved) {
        e[*p] = *v;
    }
    Some(e)
}
