//! Key generation, encryption and decryption for both the McEliece and the
//! Niederreiter version of the scheme, in both published implementations of
//! the transformation:
//!
//! * `Hidden` (first implementation): the constraint row `a` stays secret,
//!   the receiver guesses the scalar(s) `gamma = a e^T`.
//! * `Selected` (second implementation): the sender enforces `a e^T = 0`
//!   (so `a` is published) and the receiver guesses `alpha = a_2 e^T`, which
//!   enters decryption only through the scalar `sum(alpha)`.
//!
//! Decryption iterates the key-equation decoder over guesses in natural
//! field order; a decoding failure drives the loop to the next guess.

pub mod cw;

use crate::gf::{Felt, Field, FieldError, FieldSpec};
use crate::grs::{GrsCode, GrsError};
use crate::matrix::{self, Mat, MatError};
use crate::qtransform::{QError, QParts, Ratio, Variant, RESAMPLE_BUDGET};
use cw::CwCodec;
use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemVersion {
    McEliece,
    Niederreiter,
}

#[derive(Debug, Error)]
pub enum CryptoError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("keygen resample budget exhausted")]
    ResampleBudget,
    #[error("message of {bits} bits exceeds the {capacity}-bit capacity")]
    MessageTooLong { bits: u64, capacity: u64 },
    #[error("message cannot be embedded under the error-vector constraint")]
    Unencodable,
    #[error("decryption failed: all guesses exhausted")]
    DecryptionFailed,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Grs(#[from] GrsError),
    #[error(transparent)]
    Q(#[from] QError),
}

/// System parameters plus the derived quantities r, t and t_pub.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    pub field_spec: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub z: usize,
    pub m: Ratio,
    pub variant: Variant,
    pub version: SystemVersion,
}

impl ParamSet {
    pub fn r(&self) -> usize {
        self.n - self.k
    }

    /// Correction capability of the secret code.
    pub fn t(&self) -> usize {
        self.r() / 2
    }

    /// Public error weight floor(t / m).
    pub fn t_pub(&self) -> usize {
        self.m.t_pub(self.t())
    }

    pub fn field(&self) -> Result<Field, CryptoError> {
        Ok(Field::new(self.field_spec)?)
    }

    pub fn validate(&self) -> Result<(), CryptoError> {
        let field = self.field()?;
        let q = field.q() as usize;
        if self.n > q - 1 {
            return Err(CryptoError::InvalidParams(format!(
                "n = {} exceeds q - 1 = {}",
                self.n,
                q - 1
            )));
        }
        if self.k == 0 || self.k >= self.n {
            return Err(CryptoError::InvalidParams(format!(
                "need 0 < k < n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        if self.z > 3 {
            return Err(CryptoError::InvalidParams(format!(
                "z = {} not supported (decryption needs q^z guesses; use z <= 3)",
                self.z
            )));
        }
        if self.t_pub() < 1 {
            return Err(CryptoError::InvalidParams(format!(
                "t_pub = floor(t/m) = 0 (t = {}, m = {})",
                self.t(),
                self.m
            )));
        }
        if self.t_pub() <= self.z {
            return Err(CryptoError::InvalidParams(format!(
                "t_pub = {} must exceed z = {}",
                self.t_pub(),
                self.z
            )));
        }
        Ok(())
    }

    /// True when m is below 1 + (r-3)/n, the value that defeats the
    /// star-product distinguisher with margin.
    pub fn distinguisher_weak(&self) -> bool {
        self.m
            .cmp_value(&Ratio::distinguisher_safe(self.n, self.r()))
            .is_lt()
    }
}

/// The receiver's key material, including the guessing-loop precomputations
/// `H b^T` and `H 1^T`.
#[derive(Debug, Clone)]
pub struct PrivateKey {
    pub params: ParamSet,
    pub code: GrsCode,
    /// Scrambling matrix: k x k (McEliece) or r x r (Niederreiter).
    pub s: Mat,
    /// S'' = S * H'_l (resp. S * G'_l): the scrambler folded with the
    /// systematic normalization of the public matrix.
    pub s_eff: Mat,
    pub qparts: QParts,
    /// H b^T (r x z), the Hidden-variant guess subtraction.
    pub h_b: Mat,
    /// H 1^T (length r), the Selected-variant guess subtraction.
    pub h_one: Vec<Felt>,
}

/// Only the redundant part of the systematic public matrix is stored; the
/// identity block is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub params: ParamSet,
    /// H''_r (r x k) for Niederreiter, G''_r (k x r) for McEliece.
    pub mat: Mat,
    /// The constraint rows a (z x n); published in the Selected variant only.
    pub constraint_a: Option<Mat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub version: SystemVersion,
    /// Length r (Niederreiter) or n (McEliece).
    pub data: Vec<Felt>,
}

/// Result of a successful decryption.
#[derive(Debug, Clone)]
pub struct Decrypted {
    /// Recovered error vector (the message carrier in the Niederreiter
    /// version).
    pub e: Vec<Felt>,
    /// Recovered cleartext symbols (McEliece version only).
    pub u: Option<Vec<Felt>>,
    /// Number of key-equation attempts used.
    pub guesses: usize,
}

pub fn keygen<R: rand::Rng>(
    params: &ParamSet,
    rng: &mut R,
) -> Result<(PrivateKey, PublicKey), CryptoError> {
    params.validate()?;
    let f = params.field()?;
    let (n, k, z) = (params.n, params.k, params.z);
    let r = params.r();

    for _ in 0..RESAMPLE_BUDGET {
        let code = GrsCode::sample(&f, n, k, rng);
        if params.variant == Variant::Selected && code.has_all_one_codeword() {
            continue; // vulnerable subcode would reappear
        }
        let qparts = QParts::sample(params.variant, n, z, params.m, &f, rng)?;

        if params.variant == Variant::Hidden {
            let h_b = code.parity_check().mul(&qparts.b.transpose(), &f)?;
            if h_b.rank(&f) < z {
                // some combination of the rows of b is a codeword: a wrong
                // guess could shift the syndrome by zero
                continue;
            }
        }

        let s = match params.version {
            SystemVersion::Niederreiter => Mat::random_nonsingular(r, &f, rng),
            SystemVersion::McEliece => Mat::random_nonsingular(k, &f, rng),
        };
        match assemble_keys(params, code, qparts, s) {
            Ok(pair) => return Ok(pair),
            Err(CryptoError::Matrix(MatError::Singular)) => continue, // H'_l or G'_l: resample
            Err(e) => return Err(e),
        }
    }
    Err(CryptoError::ResampleBudget)
}

/// Deterministically derive the key pair from explicit components. No
/// rejection checks are applied here (keygen performs them before calling),
/// which also makes this the entry point for building deliberately flawed
/// keys in audits and experiments. Fails with a singular-matrix error when
/// the leading block of the transformed matrix is not invertible.
pub fn assemble_keys(
    params: &ParamSet,
    code: GrsCode,
    qparts: QParts,
    s: Mat,
) -> Result<(PrivateKey, PublicKey), CryptoError> {
    let f = params.field()?;
    let (n, k) = (params.n, params.k);
    let r = params.r();
    let h_b = code.parity_check().mul(&qparts.b.transpose(), &f)?;
    let h_one = code.syndrome(&vec![1; n]);

    let (s_eff, pub_mat) = match params.version {
        SystemVersion::Niederreiter => {
            let h_prime = s
                .invert(&f)?
                .mul(code.parity_check(), &f)?
                .mul(&qparts.q_mat.transpose(), &f)?;
            let (h_sys, _) = h_prime.systematic_form(&f)?;
            let s_eff = s.mul(&h_prime.slice_cols(0, r), &f)?;
            (s_eff, h_sys.slice_cols(r, n))
        }
        SystemVersion::McEliece => {
            let g_prime = s
                .invert(&f)?
                .mul(code.generator(), &f)?
                .mul(&qparts.q_inv, &f)?;
            let (g_sys, _) = g_prime.systematic_form(&f)?;
            let s_eff = s.mul(&g_prime.slice_cols(0, k), &f)?;
            (s_eff, g_sys.slice_cols(k, n))
        }
    };

    let constraint_a = match params.variant {
        Variant::Hidden => None,
        Variant::Selected => Some(qparts.a.clone()),
    };
    let sk = PrivateKey {
        params: params.clone(),
        code,
        s,
        s_eff,
        qparts,
        h_b,
        h_one,
    };
    let pk = PublicKey {
        params: params.clone(),
        mat: pub_mat,
        constraint_a,
    };
    Ok((sk, pk))
}

/// Uniform weight-t_pub error vector; in the Selected variant the last z
/// values are solved so that `a e^T = 0`, retrying on degenerate draws.
pub fn sample_error<R: rand::Rng>(
    params: &ParamSet,
    constraint: Option<&Mat>,
    f: &Field,
    rng: &mut R,
) -> Vec<Felt> {
    let t_pub = params.t_pub();
    let n = params.n;
    match (params.variant, constraint) {
        (Variant::Hidden, _) | (Variant::Selected, None) => {
            crate::grs::random_error(n, t_pub, f, rng)
        }
        (Variant::Selected, Some(a)) => loop {
            let mut idx: Vec<usize> = (0..n).collect();
            for i in 0..t_pub {
                let j = rng.gen_range(i..n);
                idx.swap(i, j);
            }
            let mut positions: Vec<usize> = idx[..t_pub].to_vec();
            positions.sort_unstable();
            let free: Vec<Felt> = (0..t_pub - params.z)
                .map(|_| f.sample_nonzero(rng))
                .collect();
            if let Some(e) = cw::solve_constraint(&positions, &free, a, f, n) {
                return e;
            }
        },
    }
}

impl PublicKey {
    fn field(&self) -> Field {
        self.params.field().expect("key carries a valid spec")
    }

    /// Stored key size in bits: every entry takes ceil(log2 q) bits, and the
    /// Selected variant also publishes the z x n constraint matrix.
    pub fn key_bits(&self) -> u64 {
        let f = self.field();
        let bpe = f.bits_per_element() as u64;
        let mut bits = (self.mat.rows * self.mat.cols) as u64 * bpe;
        if let Some(a) = &self.constraint_a {
            bits += (a.rows * a.cols) as u64 * bpe;
        }
        bits
    }

    /// The full systematic matrix with the identity block reconstructed.
    pub fn full_matrix(&self) -> Mat {
        Mat::identity(self.mat.rows).hconcat(&self.mat)
    }

    /// A generator of the dual of the public code (r x n). For the
    /// Niederreiter version that is the public matrix itself; for McEliece
    /// it is the parity check [-G''_r^T | I] derived from G'' = [I | G''_r].
    pub fn dual_generator(&self) -> Mat {
        let f = self.field();
        match self.params.version {
            SystemVersion::Niederreiter => self.full_matrix(),
            SystemVersion::McEliece => {
                let neg = self.mat.transpose().scale(f.neg(1), &f);
                neg.hconcat(&Mat::identity(self.params.r()))
            }
        }
    }

    fn codec(&self, f: &Field) -> CwCodec {
        let reserved = match self.params.variant {
            Variant::Hidden => 0,
            Variant::Selected => self.params.z,
        };
        CwCodec::new(self.params.n, self.params.t_pub(), f, reserved)
    }

    /// Message bits carried by one ciphertext.
    pub fn capacity_bits(&self) -> u64 {
        let f = self.field();
        match self.params.version {
            SystemVersion::Niederreiter => self.codec(&f).capacity_bits(),
            SystemVersion::McEliece => {
                BigUint::from(f.q()).pow(self.params.k as u32).bits() - 1
            }
        }
    }

    /// Niederreiter syndrome of an explicit error vector:
    /// x'' = e_l^T + H''_r e_r^T (the identity block is implicit).
    pub fn encrypt_error(&self, e: &[Felt]) -> Result<Ciphertext, CryptoError> {
        assert_eq!(self.params.version, SystemVersion::Niederreiter);
        let f = self.field();
        let r = self.params.r();
        if e.len() != self.params.n {
            return Err(CryptoError::Malformed("error vector length".into()));
        }
        let right = self.mat.mul_vec(&e[r..], &f)?;
        let data = matrix::add_vec(&e[..r], &right, &f);
        Ok(Ciphertext {
            version: SystemVersion::Niederreiter,
            data,
        })
    }

    /// McEliece word encryption: x = u G'' + e = [u | u G''_r] + e.
    pub fn encrypt_word(&self, u: &[Felt], e: &[Felt]) -> Result<Ciphertext, CryptoError> {
        assert_eq!(self.params.version, SystemVersion::McEliece);
        let f = self.field();
        let k = self.params.k;
        if u.len() != k || e.len() != self.params.n {
            return Err(CryptoError::Malformed("plaintext or error length".into()));
        }
        let mut data = u.to_vec();
        data.extend(self.mat.vec_mul(u, &f)?);
        Ok(Ciphertext {
            version: SystemVersion::McEliece,
            data: matrix::add_vec(&data, e, &f),
        })
    }

    /// Encrypt a message given as an integer below 2^capacity_bits.
    pub fn encrypt_bits<R: rand::Rng>(
        &self,
        msg: &BigUint,
        rng: &mut R,
    ) -> Result<Ciphertext, CryptoError> {
        let f = self.field();
        match self.params.version {
            SystemVersion::Niederreiter => {
                let codec = self.codec(&f);
                let e = match self.params.variant {
                    Variant::Hidden => codec.encode(msg, &f)?,
                    Variant::Selected => {
                        let a = self
                            .constraint_a
                            .as_ref()
                            .ok_or_else(|| CryptoError::Malformed("missing constraint".into()))?;
                        codec.encode_constrained(msg, a, &f)?
                    }
                };
                self.encrypt_error(&e)
            }
            SystemVersion::McEliece => {
                let capacity = self.capacity_bits();
                if msg.bits() > capacity {
                    return Err(CryptoError::MessageTooLong {
                        bits: msg.bits(),
                        capacity,
                    });
                }
                let u = base_q_digits(msg, self.params.k, f.q());
                let e = sample_error(&self.params, self.constraint_a.as_ref(), &f, rng);
                self.encrypt_word(&u, &e)
            }
        }
    }
}

impl PrivateKey {
    fn field(&self) -> Field {
        self.params.field().expect("key carries a valid spec")
    }

    /// Number of candidate guesses: q^z for the Hidden variant; the Selected
    /// variant's subtraction depends only on sum(alpha), so q guesses cover
    /// the whole of F_q^z.
    pub fn guess_space(&self) -> u64 {
        let q = self.field().q() as u64;
        match self.params.variant {
            Variant::Hidden => q.pow(self.params.z as u32),
            Variant::Selected => q,
        }
    }

    /// Run a single guess against a ciphertext: subtract the guessed
    /// R-contribution, syndrome-decode, strip T, and verify the weight and
    /// constraint. Returns the recovered (e, u) on success.
    ///
    /// For the Hidden variant `guess` is the z-tuple gamma; for Selected it
    /// is the single scalar sum(alpha).
    pub fn decrypt_with_guess(
        &self,
        ct: &Ciphertext,
        guess: &[Felt],
    ) -> Option<(Vec<Felt>, Option<Vec<Felt>>)> {
        let f = self.field();
        let t_pub = self.params.t_pub();
        match self.params.version {
            SystemVersion::Niederreiter => {
                let x_prime = self.s_eff.mul_vec(&ct.data, &f).ok()?;
                let sub = self.guess_subtraction(guess, &f);
                let y = matrix::sub_vec(&x_prime, &sub, &f);
                let e_t = self.code.decode_syndrome(&y).ok()?;
                let e = self.qparts.t_inv.vec_mul(&e_t, &f).ok()?;
                if matrix::weight(&e) != t_pub || !self.verify_constraint(&e, guess, &f) {
                    return None;
                }
                Some((e, None))
            }
            SystemVersion::McEliece => {
                let x_prime = self.qparts.q_mat.vec_mul(&ct.data, &f).ok()?;
                let sub = self.guess_word_subtraction(guess, &f);
                let w = matrix::sub_vec(&x_prime, &sub, &f);
                let e_t = self.code.decode_syndrome(&self.code.syndrome(&w)).ok()?;
                let e = self.qparts.t_inv.vec_mul(&e_t, &f).ok()?;
                if matrix::weight(&e) != t_pub || !self.verify_constraint(&e, guess, &f) {
                    return None;
                }
                // strip the error, read u S_eff^{-1} off the systematic
                // positions, undo the scrambler
                let codeword = matrix::sub_vec(&w, &e_t, &f);
                let u = self
                    .s_eff
                    .vec_mul(&codeword[..self.params.k], &f)
                    .ok()?;
                Some((e, Some(u)))
            }
        }
    }

    /// The syndrome-domain subtraction for one guess: (H b^T) gamma or
    /// (H 1^T) sigma.
    fn guess_subtraction(&self, guess: &[Felt], f: &Field) -> Vec<Felt> {
        match self.params.variant {
            Variant::Hidden => self.h_b.mul_vec(guess, f).expect("guess has length z"),
            Variant::Selected => matrix::scale_vec(&self.h_one, guess[0], f),
        }
    }

    /// The word-domain subtraction (McEliece version): gamma . b or sigma 1.
    fn guess_word_subtraction(&self, guess: &[Felt], f: &Field) -> Vec<Felt> {
        match self.params.variant {
            Variant::Hidden => self.qparts.b.vec_mul(guess, f).expect("guess length z"),
            Variant::Selected => vec![guess[0]; self.params.n],
        }
    }

    fn verify_constraint(&self, e: &[Felt], guess: &[Felt], f: &Field) -> bool {
        match self.params.variant {
            Variant::Hidden => {
                let gamma = self.qparts.a.mul_vec(e, f).expect("e has length n");
                gamma == guess
            }
            Variant::Selected => {
                let ae = self.qparts.a.mul_vec(e, f).expect("e has length n");
                if ae.iter().any(|&x| x != 0) {
                    return false;
                }
                let a2 = self.qparts.a2.as_ref().expect("Selected carries a2");
                let alpha = a2.mul_vec(e, f).expect("e has length n");
                let sigma = alpha.iter().fold(0, |acc, &x| f.add(acc, x));
                sigma == guess[0]
            }
        }
    }

    /// Full decryption: enumerate guesses in natural field order until one
    /// passes every check.
    pub fn decrypt(&self, ct: &Ciphertext) -> Result<Decrypted, CryptoError> {
        if ct.version != self.params.version {
            return Err(CryptoError::Malformed("ciphertext version mismatch".into()));
        }
        let expected = match self.params.version {
            SystemVersion::Niederreiter => self.params.r(),
            SystemVersion::McEliece => self.params.n,
        };
        if ct.data.len() != expected {
            return Err(CryptoError::Malformed("ciphertext length".into()));
        }
        let q = self.field().q() as u64;
        let z = self.params.z;
        for index in 0..self.guess_space() {
            let guess = match self.params.variant {
                Variant::Hidden => guess_tuple(index, z, q),
                Variant::Selected => vec![index as Felt],
            };
            if let Some((e, u)) = self.decrypt_with_guess(ct, &guess) {
                return Ok(Decrypted {
                    e,
                    u,
                    guesses: (index + 1) as usize,
                });
            }
        }
        Err(CryptoError::DecryptionFailed)
    }

    /// Decrypt and demap to the message integer.
    pub fn decrypt_bits(&self, ct: &Ciphertext) -> Result<(BigUint, usize), CryptoError> {
        let decrypted = self.decrypt(ct)?;
        let f = self.field();
        let msg = match self.params.version {
            SystemVersion::Niederreiter => {
                let reserved = match self.params.variant {
                    Variant::Hidden => 0,
                    Variant::Selected => self.params.z,
                };
                let codec = CwCodec::new(self.params.n, self.params.t_pub(), &f, reserved);
                codec.decode(&decrypted.e, &f)?
            }
            SystemVersion::McEliece => {
                digits_to_big(decrypted.u.as_ref().expect("McEliece yields u"), f.q())
            }
        };
        Ok((msg, decrypted.guesses))
    }

    /// Public key regenerated from the private material.
    pub fn public_key(&self) -> Result<PublicKey, CryptoError> {
        let f = self.field();
        let (n, k, r) = (self.params.n, self.params.k, self.params.r());
        let mat = match self.params.version {
            SystemVersion::Niederreiter => {
                let h_prime = self
                    .s
                    .invert(&f)?
                    .mul(self.code.parity_check(), &f)?
                    .mul(&self.qparts.q_mat.transpose(), &f)?;
                h_prime.systematic_form(&f)?.0.slice_cols(r, n)
            }
            SystemVersion::McEliece => {
                let g_prime = self
                    .s
                    .invert(&f)?
                    .mul(self.code.generator(), &f)?
                    .mul(&self.qparts.q_inv, &f)?;
                g_prime.systematic_form(&f)?.0.slice_cols(k, n)
            }
        };
        Ok(PublicKey {
            params: self.params.clone(),
            mat,
            constraint_a: match self.params.variant {
                Variant::Hidden => None,
                Variant::Selected => Some(self.qparts.a.clone()),
            },
        })
    }
}

/// index -> little-endian base-q digits, the fixed guess enumeration order.
fn guess_tuple(index: u64, z: usize, q: u64) -> Vec<Felt> {
    let mut digits = vec![0; z];
    let mut i = index;
    for d in digits.iter_mut() {
        *d = (i % q) as Felt;
        i /= q;
    }
    digits
}

/// msg -> exactly k base-q digits, little-endian.
pub fn base_q_digits(msg: &BigUint, k: usize, q: u32) -> Vec<Felt> {
    let qq = BigUint::from(q);
    let mut digits = Vec::with_capacity(k);
    let mut rest = msg.clone();
    for _ in 0..k {
        digits.push(
            num_traits::ToPrimitive::to_u32(&(&rest % &qq)).expect("digit fits u32"),
        );
        rest /= &qq;
    }
    debug_assert!(rest.is_zero(), "message exceeds q^k");
    digits
}

pub fn digits_to_big(digits: &[Felt], q: u32) -> BigUint {
    let qq = BigUint::from(q);
    let mut acc = BigUint::zero();
    for &d in digits.iter().rev() {
        acc = acc * &qq + BigUint::from(d);
    }
    acc
}
