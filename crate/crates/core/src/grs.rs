//! Generalized Reed-Solomon codes: construction from a support and column
//! multipliers, canonical parity-check / systematic generator matrices, and
//! bounded-distance syndrome decoding.
//!
//! Convention: the code is the kernel of the canonical matrix
//! `H[j][i] = v_i * alpha_i^j` for `j = 0..r-1`. H itself generates a GRS
//! code (the dual of a GRS code is again GRS). Support elements are required
//! to be nonzero so that the locator `prod (1 - alpha_i x)` accounts for
//! every position; every parameter set of interest has `n <= q - 1`.

use crate::gf::{Felt, Field, FieldKind};
use crate::matrix::Mat;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrsError {
    #[error("support elements must be pairwise distinct")]
    DuplicateSupport,
    #[error("support elements must be nonzero")]
    ZeroSupport,
    #[error("column multipliers must be nonzero")]
    ZeroMultiplier,
    #[error("invalid dimensions: n = {n}, k = {k}, q = {q}")]
    BadDimensions { n: usize, k: usize, q: u32 },
}

/// Bounded-distance decoding failed: the key equation produced an
/// inconsistent locator (degree mismatch, roots outside the support, root
/// count below the locator degree) or the recovered vector does not
/// reproduce the syndrome. This signal drives the guessing loop during
/// decryption.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("syndrome decoding failure")]
pub struct DecodeFailure;

#[derive(Clone, Debug)]
pub struct GrsCode {
    field: Field,
    n: usize,
    k: usize,
    t: usize,
    support: Vec<Felt>,
    multipliers: Vec<Felt>,
    support_inv: Vec<Felt>,
    h: Mat,
    g: Mat,
}

impl GrsCode {
    pub fn new(
        field: Field,
        n: usize,
        k: usize,
        support: Vec<Felt>,
        multipliers: Vec<Felt>,
    ) -> Result<GrsCode, GrsError> {
        let q = field.q();
        if n == 0 || k >= n || n > q as usize || support.len() != n || multipliers.len() != n {
            return Err(GrsError::BadDimensions { n, k, q });
        }
        if support.iter().any(|&a| a == 0) {
            return Err(GrsError::ZeroSupport);
        }
        let mut seen = vec![false; q as usize];
        for &a in &support {
            if seen[a as usize] {
                return Err(GrsError::DuplicateSupport);
            }
            seen[a as usize] = true;
        }
        if multipliers.iter().any(|&v| v == 0) {
            return Err(GrsError::ZeroMultiplier);
        }

        let r = n - k;
        let t = r / 2;
        let mut h = Mat::zeros(r, n);
        for (i, (&alpha, &v)) in support.iter().zip(&multipliers).enumerate() {
            let mut p = v;
            for j in 0..r {
                h.set(j, i, p);
                p = field.mul(p, alpha);
            }
        }

        // Systematic generator [I_k | P] from H = [A | B]: P^T = -B^{-1} A.
        // B is invertible because any r columns of a GRS parity-check are
        // independent (MDS).
        let g = if k > 0 {
            let a = h.slice_cols(0, k);
            let b = h.slice_cols(k, n);
            let binv = b.invert(&field).expect("any r columns of H are independent");
            let pt = binv.mul(&a, &field).unwrap().scale(field.neg(1), &field);
            Mat::identity(k).hconcat(&pt.transpose())
        } else {
            Mat::zeros(0, n)
        };

        let support_inv = support
            .iter()
            .map(|&a| field.inv(a).expect("support is nonzero"))
            .collect();

        Ok(GrsCode {
            field,
            n,
            k,
            t,
            support,
            multipliers,
            support_inv,
            h,
            g,
        })
    }

    /// Random code: the support is a uniform n-subset of the nonzero field
    /// elements, multipliers are uniform nonzero. Deterministic from the rng.
    pub fn sample<R: rand::Rng>(field: &Field, n: usize, k: usize, rng: &mut R) -> GrsCode {
        let q = field.q();
        assert!(n <= (q - 1) as usize, "need n <= q - 1");
        let mut pool: Vec<Felt> = (1..q).collect();
        // partial Fisher-Yates: the first n slots become the support
        for i in 0..n {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        let support = pool[..n].to_vec();
        let multipliers = (0..n).map(|_| field.sample_nonzero(rng)).collect();
        GrsCode::new(field.clone(), n, k, support, multipliers).expect("sampled code is valid")
    }

    /// Full-length code (n = q - 1) built to contain the all-one codeword:
    /// with multipliers v_i = alpha_i the rows of H are the power sums
    /// sum alpha^(j+1), which vanish. This is exactly the parity-check of the
    /// classical Reed-Solomon code.
    pub fn sample_containing_all_one<R: rand::Rng>(
        field: &Field,
        k: usize,
        rng: &mut R,
    ) -> GrsCode {
        let q = field.q();
        let n = (q - 1) as usize;
        let mut support: Vec<Felt> = (1..q).collect();
        for i in 0..n {
            let j = rng.gen_range(i..n);
            support.swap(i, j);
        }
        let multipliers = support.clone();
        let code = GrsCode::new(field.clone(), n, k, support, multipliers)
            .expect("full-length code is valid");
        debug_assert!(code.has_all_one_codeword());
        code
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn r(&self) -> usize {
        self.n - self.k
    }
    /// Correction capability floor((n-k)/2).
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn support(&self) -> &[Felt] {
        &self.support
    }
    pub fn multipliers(&self) -> &[Felt] {
        &self.multipliers
    }
    /// Canonical parity-check matrix (r x n).
    pub fn parity_check(&self) -> &Mat {
        &self.h
    }
    /// Systematic generator matrix [I | P] (k x n).
    pub fn generator(&self) -> &Mat {
        &self.g
    }

    /// Systematic encoding: u * G.
    pub fn encode(&self, u: &[Felt]) -> Vec<Felt> {
        self.g.vec_mul(u, &self.field).expect("u has length k")
    }

    /// H * y^T, a column of length r.
    pub fn syndrome(&self, y: &[Felt]) -> Vec<Felt> {
        self.h.mul_vec(y, &self.field).expect("y has length n")
    }

    /// True iff the all-one vector is a codeword, i.e. H * 1^T = 0.
    pub fn has_all_one_codeword(&self) -> bool {
        if self.k == 0 {
            return false;
        }
        self.syndrome(&vec![1; self.n]).iter().all(|&s| s == 0)
    }

    /// Bounded-distance syndrome decoding. If `s = H e^T` for some error of
    /// weight <= t, returns exactly that e. The pipeline is the key-equation
    /// solver (extended Euclidean algorithm on (x^{2t}, S(x))), a Chien
    /// search over the support, and Forney's formula for the values.
    pub fn decode_syndrome(&self, s: &[Felt]) -> Result<Vec<Felt>, DecodeFailure> {
        assert_eq!(s.len(), self.r(), "syndrome must have length r");
        let f = &self.field;
        if s.iter().all(|&x| x == 0) {
            return Ok(vec![0; self.n]);
        }
        let two_t = 2 * self.t;
        if two_t == 0 {
            return Err(DecodeFailure);
        }

        let (sigma, omega) = self.key_equation(&s[..two_t])?;

        // Locator sanity: a genuine locator prod(1 - alpha_i x) has nonzero
        // constant term and strictly dominates the evaluator degree.
        if sigma.is_empty() || sigma[0] == 0 || poly_deg(&omega) >= poly_deg(&sigma) {
            return Err(DecodeFailure);
        }

        // Chien search: roots of sigma among the inverse support elements.
        let deg = poly_deg(&sigma) as usize;
        let sigma_deriv = poly_deriv(&sigma, f);
        let mut e = vec![0; self.n];
        let mut roots = 0usize;
        for i in 0..self.n {
            let x = self.support_inv[i];
            if poly_eval(&sigma, x, f) != 0 {
                continue;
            }
            roots += 1;
            if roots > deg {
                return Err(DecodeFailure);
            }
            let dval = poly_eval(&sigma_deriv, x, f);
            if dval == 0 {
                return Err(DecodeFailure); // repeated root: not a valid locator
            }
            // e_i = -alpha_i * omega(1/alpha_i) / (v_i * sigma'(1/alpha_i))
            let num = f.mul(self.support[i], poly_eval(&omega, x, f));
            let den = f.mul(self.multipliers[i], dval);
            let val = f.neg(f.div(num, den).expect("den is nonzero"));
            if val == 0 {
                return Err(DecodeFailure);
            }
            e[i] = val;
        }
        if roots != deg {
            return Err(DecodeFailure);
        }

        // Full consistency: with r = 2t + 1 this also screens the extra
        // syndrome coordinate the key equation never saw.
        if self.syndrome(&e) != s {
            return Err(DecodeFailure);
        }
        Ok(e)
    }

    /// Extended Euclidean algorithm on (x^{2t}, S(x)), stopped at the first
    /// remainder of degree < t. Returns (locator, evaluator).
    fn key_equation(&self, s: &[Felt]) -> Result<(Vec<Felt>, Vec<Felt>), DecodeFailure> {
        let f = &self.field;
        let t = self.t as i64;
        let mut x2t = vec![0; s.len() + 1];
        x2t[s.len()] = 1;
        let mut r_prev = x2t;
        let mut r_cur = poly_trim(s.to_vec());
        let mut g_prev: Vec<Felt> = vec![];
        let mut g_cur: Vec<Felt> = vec![1];
        while poly_deg(&r_cur) >= t {
            let (quot, rem) = poly_divmod(&r_prev, &r_cur, f);
            let g_next = poly_sub(&g_prev, &poly_mul(&quot, &g_cur, f), f);
            r_prev = std::mem::replace(&mut r_cur, rem);
            g_prev = std::mem::replace(&mut g_cur, g_next);
        }
        if r_cur.is_empty() && g_cur.is_empty() {
            return Err(DecodeFailure);
        }
        Ok((g_cur, r_cur))
    }
}

// --- dense polynomial helpers (coefficients low to high, trimmed) ---

fn poly_trim(mut p: Vec<Felt>) -> Vec<Felt> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Degree with deg(0) = -1.
fn poly_deg(p: &[Felt]) -> i64 {
    p.len() as i64 - 1
}

fn poly_sub(a: &[Felt], b: &[Felt], f: &Field) -> Vec<Felt> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = f.sub(x, y);
    }
    poly_trim(out)
}

fn poly_mul(a: &[Felt], b: &[Felt], f: &Field) -> Vec<Felt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    poly_trim(out)
}

fn poly_divmod(a: &[Felt], b: &[Felt], f: &Field) -> (Vec<Felt>, Vec<Felt>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]).expect("leading coefficient nonzero");
    if rem.len() <= db {
        return (vec![], poly_trim(rem));
    }
    let mut quot = vec![0; rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        let qc = f.mul(c, lead_inv);
        quot[i - db] = qc;
        for (j, &bc) in b.iter().enumerate() {
            if bc != 0 {
                let idx = i - db + j;
                rem[idx] = f.sub(rem[idx], f.mul(qc, bc));
            }
        }
    }
    (poly_trim(quot), poly_trim(rem))
}

fn poly_eval(p: &[Felt], x: Felt, f: &Field) -> Felt {
    let mut acc = 0;
    for &c in p.iter().rev() {
        acc = f.add(f.mul(acc, x), c);
    }
    acc
}

/// Formal derivative; coefficient j*c_j uses the field characteristic.
fn poly_deriv(p: &[Felt], f: &Field) -> Vec<Felt> {
    let ch = match f.spec().kind {
        FieldKind::Prime => f.q() as u64,
        FieldKind::BinaryExtension => 2,
    };
    let mut out = Vec::with_capacity(p.len().saturating_sub(1));
    for (j, &c) in p.iter().enumerate().skip(1) {
        let jm = (j as u64 % ch) as Felt;
        out.push(f.mul(jm, c));
    }
    poly_trim(out)
}

/// Weight-w error vector with uniform positions and uniform nonzero values.
pub fn random_error<R: rand::Rng>(n: usize, w: usize, f: &Field, rng: &mut R) -> Vec<Felt> {
    let mut e = vec![0; n];
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..w {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
        e[idx[i]] = f.sample_nonzero(rng);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn toy_f5() -> GrsCode {
        let f = Field::prime(5).unwrap();
        GrsCode::new(f, 4, 2, vec![1, 2, 3, 4], vec![1, 1, 1, 1]).unwrap()
    }

    fn toy_f13(rng: &mut ChaCha20Rng) -> GrsCode {
        let f = Field::prime(13).unwrap();
        GrsCode::sample(&f, 12, 6, rng)
    }

    #[test]
    fn construction_and_t() {
        let code = toy_f5();
        assert_eq!(code.t(), 1);

        let f307 = Field::prime(307).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let big = GrsCode::sample(&f307, 306, 232, &mut rng);
        assert_eq!(big.t(), 37);

        let f512 = Field::f512();
        let big2 = GrsCode::sample(&f512, 511, 387, &mut rng);
        assert_eq!(big2.t(), 62);
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        let f = Field::prime(5).unwrap();
        assert_eq!(
            GrsCode::new(f.clone(), 4, 2, vec![1, 2, 2, 4], vec![1; 4]).unwrap_err(),
            GrsError::DuplicateSupport
        );
        assert_eq!(
            GrsCode::new(f.clone(), 4, 2, vec![1, 2, 3, 4], vec![1, 0, 1, 1]).unwrap_err(),
            GrsError::ZeroMultiplier
        );
        assert!(GrsCode::new(f.clone(), 4, 4, vec![1, 2, 3, 4], vec![1; 4]).is_err());
        assert_eq!(
            GrsCode::new(f, 4, 2, vec![0, 2, 3, 4], vec![1; 4]).unwrap_err(),
            GrsError::ZeroSupport
        );
    }

    #[test]
    fn parity_check_has_rank_r_and_annihilates_g() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let code = toy_f13(&mut rng);
        let f = code.field().clone();
        assert_eq!(code.parity_check().rank(&f), code.r());
        let prod = code
            .parity_check()
            .mul(&code.generator().transpose(), &f)
            .unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn encode_zero_and_syndromes() {
        let code = toy_f5();
        assert_eq!(code.encode(&[0, 0]), vec![0, 0, 0, 0]);
        assert!(code.syndrome(&code.encode(&[0, 0])).iter().all(|&x| x == 0));

        // single error at i: syndrome is the error value times column
        // v_i * (1, alpha_i, alpha_i^2, ...)
        let f = code.field().clone();
        for i in 0..4 {
            for val in 1..5 {
                let mut e = vec![0; 4];
                e[i] = val;
                let s = code.syndrome(&e);
                let alpha = code.support()[i];
                let v = code.multipliers()[i];
                for (j, &sj) in s.iter().enumerate() {
                    assert_eq!(sj, f.mul(val, f.mul(v, f.pow(alpha, j as u64))));
                }
            }
        }
    }

    #[test]
    fn all_codewords_have_zero_syndrome_toy() {
        let code = toy_f5();
        let f = code.field().clone();
        for u0 in 0..5 {
            for u1 in 0..5 {
                let c = code.encode(&[u0, u1]);
                assert!(code.syndrome(&c).iter().all(|&x| x == 0));
            }
        }
        let _ = f;
    }

    #[test]
    fn mds_minimum_distance_toy() {
        // exhaustive weight enumeration: d = n - k + 1
        let code = toy_f5();
        let mut min_wt = usize::MAX;
        for u0 in 0..5 {
            for u1 in 0..5 {
                if (u0, u1) == (0, 0) {
                    continue;
                }
                min_wt = min_wt.min(matrix::weight(&code.encode(&[u0, u1])));
            }
        }
        assert_eq!(min_wt, code.n() - code.k() + 1);
    }

    #[test]
    fn decode_zero_syndrome() {
        let code = toy_f5();
        assert_eq!(code.decode_syndrome(&[0, 0]).unwrap(), vec![0; 4]);
    }

    #[test]
    fn decode_matches_brute_force_oracle_f5() {
        // Exhaustive nearest-codeword oracle over all 25 codewords, checked
        // on every correctable syndrome.
        let code = toy_f5();
        let f = code.field().clone();
        let mut codewords = Vec::new();
        for u0 in 0..5 {
            for u1 in 0..5 {
                codewords.push(code.encode(&[u0, u1]));
            }
        }
        // every weight-<=1 error, plus e = 0
        let mut errors = vec![vec![0; 4]];
        for i in 0..4 {
            for val in 1..5 {
                let mut e = vec![0; 4];
                e[i] = val;
                errors.push(e);
            }
        }
        for e in errors {
            let y = matrix::add_vec(&code.encode(&[3, 1]), &e, &f);
            let s = code.syndrome(&y);
            let decoded = code.decode_syndrome(&s).unwrap();
            assert_eq!(decoded, e);

            // oracle: nearest codeword to y
            let nearest = codewords
                .iter()
                .min_by_key(|c| {
                    matrix::weight(&matrix::sub_vec(&y, c, &f))
                })
                .unwrap();
            let oracle_err = matrix::sub_vec(&y, nearest, &f);
            assert_eq!(decoded, oracle_err);
        }
    }

    #[test]
    fn decode_beyond_t_fails_or_miscorrects_detectably() {
        let code = toy_f5();
        let f = code.field().clone();
        // all weight-2 errors on the t=1 toy code
        for i in 0..4 {
            for j in i + 1..4 {
                for vi in 1..5 {
                    for vj in 1..5 {
                        let mut e = vec![0; 4];
                        e[i] = vi;
                        e[j] = vj;
                        let s = code.syndrome(&e);
                        match code.decode_syndrome(&s) {
                            Err(DecodeFailure) => {}
                            Ok(wrong) => {
                                assert_ne!(wrong, e);
                                assert!(matrix::weight(&wrong) <= code.t());
                                assert_eq!(code.syndrome(&wrong), s);
                            }
                        }
                    }
                }
            }
        }
        let _ = f;
    }

    #[test]
    fn decode_corrupt_identity_seeded() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let f13 = Field::prime(13).unwrap();
        let f512 = Field::f512();
        let params: [(Field, usize, usize); 3] = [
            (f13.clone(), 12, 6),
            (Field::prime(307).unwrap(), 306, 232),
            (f512, 511, 387),
        ];
        for (f, n, k) in params {
            let code = GrsCode::sample(&f, n, k, &mut rng);
            let trials = if n > 100 { 50 } else { 1000 };
            for _ in 0..trials {
                let w = rng.gen_range(0..=code.t());
                let e = random_error(n, w, &f, &mut rng);
                let s = code.syndrome(&e);
                assert_eq!(code.decode_syndrome(&s).unwrap(), e);
            }
        }
    }

    #[test]
    fn all_one_codeword_detection() {
        let f = Field::prime(13).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let with = GrsCode::sample_containing_all_one(&f, 6, &mut rng);
        assert!(with.has_all_one_codeword());

        // generic multipliers: the all-one vector is (essentially) never a
        // codeword
        let without = GrsCode::sample(&f, 11, 6, &mut rng);
        assert!(!without.has_all_one_codeword());

        // k = 0 degenerate
        let f5 = Field::prime(5).unwrap();
        let zero_dim = GrsCode::new(f5, 4, 0, vec![1, 2, 3, 4], vec![1; 4]).unwrap();
        assert!(!zero_dim.has_all_one_codeword());
    }

    #[test]
    fn decode_exhaustive_oracle_f13() {
        // For the (12,6) code every weight-<=3 error has a distinct syndrome
        // (MDS, d = 7), so the brute-force table over all such errors is the
        // nearest-codeword oracle restricted to correctable syndromes.
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let code = toy_f13(&mut rng);
        let f = code.field().clone();
        for _ in 0..500 {
            let w = rng.gen_range(1..=3);
            let e = random_error(12, w, &f, &mut rng);
            let s = code.syndrome(&e);
            assert_eq!(code.decode_syndrome(&s).unwrap(), e);
        }
    }
}
