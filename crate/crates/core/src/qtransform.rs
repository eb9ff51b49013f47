//! The secret transformation `Q = R + T`: a dense rank-z part `R` built from
//! the vector sets A and B, plus a sparse almost-regular part `T` with
//! average row/column weight m. Two variants are supported, both with two
//! summand pairs:
//!
//! * `Hidden`: a_1 = a, a_2 = 0 and the constraint row `a` stays secret, so
//!   `R = a^T b`.
//! * `Selected`: b_2 = 1 + b and the sender enforces `a e^T = 0`, so
//!   `R = a^T b + a_2^T 1` and `a` becomes part of the public key.

use crate::gf::{Felt, Field};
use crate::matrix::Mat;
use thiserror::Error;

/// Keygen retry budget before an error surfaces instead of looping silently.
pub const RESAMPLE_BUDGET: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Hidden,
    Selected,
}

/// Exact rational average weight m = num/den. Kept unreduced so that key
/// files round-trip byte-identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u32,
    pub den: u32,
}

impl Ratio {
    pub fn new(num: u32, den: u32) -> Ratio {
        assert!(den > 0 && num >= den, "need m >= 1");
        Ratio { num, den }
    }

    pub fn one() -> Ratio {
        Ratio { num: 1, den: 1 }
    }

    /// m = 1 + (r-3)/n, the precautionary value at which the star-product
    /// distinguisher loses its dimension gap with margin.
    pub fn distinguisher_safe(n: usize, r: usize) -> Ratio {
        Ratio::new((n + r.saturating_sub(3)) as u32, n as u32)
    }

    /// m = 1 + (r-5)/n, the exact threshold where the dimension gap closes.
    pub fn distinguisher_threshold(n: usize, r: usize) -> Ratio {
        Ratio::new((n + r.saturating_sub(5)) as u32, n as u32)
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn floor(&self) -> usize {
        (self.num / self.den) as usize
    }

    pub fn ceil(&self) -> usize {
        self.num.div_ceil(self.den) as usize
    }

    pub fn is_integer(&self) -> bool {
        self.num % self.den == 0
    }

    /// floor(t / m) computed exactly.
    pub fn t_pub(&self, t: usize) -> usize {
        (t as u64 * self.den as u64 / self.num as u64) as usize
    }

    /// round(n * m), the target nonzero count of T.
    pub fn target_nonzeros(&self, n: usize) -> usize {
        let num = 2 * n as u64 * self.num as u64 + self.den as u64;
        (num / (2 * self.den as u64)) as usize
    }

    pub fn cmp_value(&self, other: &Ratio) -> std::cmp::Ordering {
        (self.num as u64 * other.den as u64).cmp(&(other.num as u64 * self.den as u64))
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QError {
    #[error("resample budget exhausted after {0} attempts")]
    ResampleBudget(usize),
    #[error("Q = R + T is singular")]
    SingularQ,
    #[error("T is singular")]
    SingularT,
    #[error("invalid parameters: {0}")]
    BadParams(String),
}

/// Structural weaknesses of a candidate Q. Keygen rejects keys with any
/// finding; the audit command reports them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    /// A weight-1 column of Q: the matching column of Q^{-1} is a scaled unit
    /// vector, acting as a plain column permutation on that position.
    WeightOneColumn { col: usize },
    /// Binary case with R = all-ones and T a permutation: Q^{-1} = 1 + P^T,
    /// which reduces the key to a permutation of the secret code.
    OnesPlusPermutation,
    /// A row of weight 1 (or, over F_2, of weight n-1) survives into Q^{-1}
    /// and yields column pairs at Hamming distance 2.
    ExtremalRowWeight { row: usize, weight: usize },
}

impl std::fmt::Display for Finding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Finding::WeightOneColumn { col } => write!(f, "weight-1 column {col} in Q"),
            Finding::OnesPlusPermutation => write!(f, "Q = 1 + P over F_2"),
            Finding::ExtremalRowWeight { row, weight } => {
                write!(f, "row {row} of Q has extremal weight {weight}")
            }
        }
    }
}

/// The assembled transformation with its cached inverses.
#[derive(Debug, Clone)]
pub struct QParts {
    pub variant: Variant,
    pub z: usize,
    pub m: Ratio,
    /// z x n, full rank; the sum a = a_1 + a_2.
    pub a: Mat,
    /// z x n, Selected variant only.
    pub a2: Option<Mat>,
    /// z x n, all entries nonzero.
    pub b: Mat,
    pub t_mat: Mat,
    pub q_mat: Mat,
    pub q_inv: Mat,
    pub t_inv: Mat,
}

/// R = a^T b (Hidden) or R = a^T b + a_2^T 1 (Selected).
pub fn build_r(variant: Variant, a: &Mat, a2: Option<&Mat>, b: &Mat, f: &Field) -> Mat {
    let at_b = a.transpose().mul(b, f).expect("a and b are z x n");
    match variant {
        Variant::Hidden => at_b,
        Variant::Selected => {
            let a2 = a2.expect("Selected variant carries a2");
            let ones = Mat::from_fn(a2.rows, a2.cols, |_, _| 1);
            at_b.add(&a2.transpose().mul(&ones, f).unwrap(), f)
        }
    }
}

/// Sparse almost-regular non-singular T: every row and column has weight
/// floor(m) or ceil(m), the total nonzero count is round(n*m), and nonzero
/// values are uniform in F_q \ {0}. Built from floor(m) disjoint monomial
/// layers plus extra nonzeros in rows/columns still at floor weight.
pub fn build_t<R: rand::Rng>(n: usize, m: Ratio, f: &Field, rng: &mut R) -> Result<Mat, QError> {
    if m.value() >= n as f64 {
        return Err(QError::BadParams(format!("m = {m} too large for n = {n}")));
    }
    let base = m.floor();
    let extras = m.target_nonzeros(n) - base * n;
    if extras > 0 && base + 1 > n {
        return Err(QError::BadParams("ceil(m) exceeds n".into()));
    }
    'retry: for _ in 0..RESAMPLE_BUDGET {
        let mut t = Mat::zeros(n, n);
        // base: a random permutation and its cyclic shifts give `base`
        // cell-disjoint monomial layers
        let mut perm: Vec<usize> = (0..n).collect();
        for i in 0..n {
            let j = rng.gen_range(i..n);
            perm.swap(i, j);
        }
        for layer in 0..base {
            for i in 0..n {
                t.set(i, perm[(i + layer) % n], f.sample_nonzero(rng));
            }
        }
        if extras > 0 {
            let mut light_rows: Vec<usize> = (0..n).collect();
            let mut light_cols: Vec<usize> = (0..n).collect();
            let mut misses = 0usize;
            let mut placed = 0usize;
            while placed < extras {
                let ri = rng.gen_range(0..light_rows.len());
                let ci = rng.gen_range(0..light_cols.len());
                let (row, col) = (light_rows[ri], light_cols[ci]);
                if t.get(row, col) != 0 {
                    misses += 1;
                    if misses > 50 * n {
                        continue 'retry; // stuck endgame: rebuild wholesale
                    }
                    continue;
                }
                t.set(row, col, f.sample_nonzero(rng));
                light_rows.swap_remove(ri);
                light_cols.swap_remove(ci);
                placed += 1;
            }
        }
        if t.invert(f).is_ok() {
            return Ok(t);
        }
    }
    Err(QError::ResampleBudget(RESAMPLE_BUDGET))
}

impl QParts {
    /// Assemble Q = R + T from explicit parts, caching Q^{-1} (used for
    /// G' = S^{-1} G Q^{-1}) and T^{-1} (used to strip T after decoding).
    pub fn from_parts(
        variant: Variant,
        m: Ratio,
        a: Mat,
        a2: Option<Mat>,
        b: Mat,
        t_mat: Mat,
        f: &Field,
    ) -> Result<QParts, QError> {
        let z = a.rows;
        let n = a.cols;
        if b.rows != z || b.cols != n || t_mat.rows != n || t_mat.cols != n {
            return Err(QError::BadParams("part dimensions disagree".into()));
        }
        if variant == Variant::Selected && a2.is_none() {
            return Err(QError::BadParams("Selected variant needs a2".into()));
        }
        let r = build_r(variant, &a, a2.as_ref(), &b, f);
        let q_mat = r.add(&t_mat, f);
        let q_inv = q_mat.invert(f).map_err(|_| QError::SingularQ)?;
        let t_inv = t_mat.invert(f).map_err(|_| QError::SingularT)?;
        Ok(QParts {
            variant,
            z,
            m,
            a,
            a2,
            b,
            t_mat,
            q_mat,
            q_inv,
            t_inv,
        })
    }

    /// Sample a full transformation: a full-rank `a`, an all-nonzero `b`,
    /// (Selected) a nonzero `a2` distinct from `a`, and an almost-regular T,
    /// resampling until Q is invertible and free of structural findings.
    pub fn sample<R: rand::Rng>(
        variant: Variant,
        n: usize,
        z: usize,
        m: Ratio,
        f: &Field,
        rng: &mut R,
    ) -> Result<QParts, QError> {
        if z > n {
            return Err(QError::BadParams(format!("z = {z} out of range")));
        }
        for _ in 0..RESAMPLE_BUDGET {
            let a = loop {
                let cand = Mat::random(z, n, f, rng);
                if cand.rank(f) == z {
                    break cand;
                }
            };
            let b = Mat::from_fn(z, n, |_, _| f.sample_nonzero(rng));
            let a2 = match (variant, z) {
                (Variant::Hidden, _) => None,
                (Variant::Selected, 0) => Some(Mat::zeros(0, n)),
                (Variant::Selected, _) => loop {
                    let cand = Mat::random(z, n, f, rng);
                    // a_1 = a - a_2 and a_2 must both be nonzero, otherwise
                    // the Selected structure degenerates to the Hidden one
                    // with a published constraint
                    if !cand.is_zero() && cand != a {
                        break Some(cand);
                    }
                },
            };
            let t_mat = build_t(n, m, f, rng)?;
            match QParts::from_parts(variant, m, a, a2, b, t_mat, f) {
                Ok(parts) => {
                    if parts.validate(f).is_empty() {
                        return Ok(parts);
                    }
                }
                Err(QError::SingularQ) | Err(QError::SingularT) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(QError::ResampleBudget(RESAMPLE_BUDGET))
    }

    pub fn n(&self) -> usize {
        self.q_mat.rows
    }

    /// The dense rank-z part, recomputed from the stored vectors.
    pub fn r_mat(&self, f: &Field) -> Mat {
        build_r(self.variant, &self.a, self.a2.as_ref(), &self.b, f)
    }

    /// Number of rows of T at ceil(m) weight, and the realized average.
    pub fn t_weight_stats(&self) -> (usize, f64) {
        let n = self.t_mat.rows;
        let heavy = (0..n)
            .filter(|&i| self.t_mat.row_weight(i) == self.m.ceil())
            .count();
        (heavy, self.t_mat.weight() as f64 / n as f64)
    }

    /// Structural audit of Q per the known flaw patterns.
    pub fn validate(&self, f: &Field) -> Vec<Finding> {
        let n = self.n();
        let q = &self.q_mat;
        let mut findings = Vec::new();
        for col in 0..n {
            if q.col_weight(col) == 1 {
                findings.push(Finding::WeightOneColumn { col });
            }
        }
        let t_monomial =
            (0..n).all(|i| self.t_mat.row_weight(i) == 1 && self.t_mat.col_weight(i) == 1);
        if f.q() == 2 && t_monomial {
            let r = self.r_mat(f);
            if (0..n).all(|i| r.row(i).iter().all(|&x| x == 1)) {
                findings.push(Finding::OnesPlusPermutation);
            }
        }
        for row in 0..n {
            let w = q.row_weight(row);
            if w == 1 || (f.q() == 2 && w == n - 1) {
                findings.push(Finding::ExtremalRowWeight { row, weight: w });
            }
        }
        findings
    }
}

/// e * Q = e * R + e * T, exposed for tests and audits.
pub fn apply_q(parts: &QParts, e: &[Felt], f: &Field) -> Vec<Felt> {
    parts.q_mat.vec_mul(e, f).expect("e has length n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grs::random_error;
    use crate::matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn ratio_arithmetic() {
        let m = Ratio::new(377, 306); // 1 + 71/306
        assert_eq!(m.floor(), 1);
        assert_eq!(m.ceil(), 2);
        assert_eq!(m.t_pub(37), 30);
        assert_eq!(m.target_nonzeros(306), 377);
        assert_eq!(Ratio::one().t_pub(37), 37);
        assert_eq!(Ratio::new(7, 5).target_nonzeros(10), 14);
        assert_eq!(Ratio::distinguisher_safe(306, 74), Ratio::new(377, 306));
    }

    #[test]
    fn build_r_hidden_is_outer_product() {
        let f = Field::prime(13).unwrap();
        let a = Mat::from_rows(vec![vec![1, 2, 0, 5]]);
        let b = Mat::from_rows(vec![vec![3, 1, 7, 1]]);
        let r = build_r(Variant::Hidden, &a, None, &b, &f);
        assert_eq!(r.rank(&f), 1);

        let zero_a = Mat::zeros(1, 4);
        let r0 = build_r(Variant::Hidden, &zero_a, None, &b, &f);
        assert!(r0.is_zero());
    }

    #[test]
    fn build_r_selected_matches_two_term_oracle() {
        let f = Field::prime(5).unwrap();
        let a = Mat::from_rows(vec![vec![1, 2, 3, 4]]);
        let a2 = Mat::from_rows(vec![vec![2, 0, 1, 3]]);
        let b = Mat::from_rows(vec![vec![1, 1, 2, 3]]);
        let r = build_r(Variant::Selected, &a, Some(&a2), &b, &f);
        for i in 0..4 {
            for j in 0..4 {
                let expect = f.add(f.mul(a.get(0, i), b.get(0, j)), a2.get(0, i));
                assert_eq!(r.get(i, j), expect);
            }
        }
    }

    #[test]
    fn build_t_monomial_when_m_is_one() {
        let f = Field::prime(13).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let t = build_t(10, Ratio::one(), &f, &mut rng).unwrap();
        assert_eq!(t.weight(), 10);
        for i in 0..10 {
            assert_eq!(t.row_weight(i), 1);
            assert_eq!(t.col_weight(i), 1);
        }
    }

    #[test]
    fn build_t_weight_law_m_1_4() {
        let f = Field::prime(13).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let t = build_t(10, Ratio::new(7, 5), &f, &mut rng).unwrap();
        let heavy_rows = (0..10).filter(|&i| t.row_weight(i) == 2).count();
        let light_rows = (0..10).filter(|&i| t.row_weight(i) == 1).count();
        let heavy_cols = (0..10).filter(|&c| t.col_weight(c) == 2).count();
        assert_eq!((heavy_rows, light_rows, heavy_cols), (4, 6, 4));
    }

    #[test]
    fn build_t_histogram_law_seeded() {
        let f = Field::prime(307).unwrap();
        let m = Ratio::new(377, 306);
        for seed in 0..100 {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let t = build_t(306, m, &f, &mut rng).unwrap();
            assert_eq!(t.weight(), 377); // 71 extras beyond the monomial base
            let heavy = (0..306).filter(|&i| t.row_weight(i) == 2).count();
            assert_eq!(heavy, 71);
            assert!((0..306).all(|i| (1..=2).contains(&t.row_weight(i))));
            assert!((0..306).all(|c| (1..=2).contains(&t.col_weight(c))));
        }
    }

    #[test]
    fn build_t_integer_m_two() {
        let f = Field::prime(13).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let t = build_t(8, Ratio::new(2, 1), &f, &mut rng).unwrap();
        assert!((0..8).all(|i| t.row_weight(i) == 2 && t.col_weight(i) == 2));
    }

    #[test]
    fn q_inverse_roundtrip() {
        let f = Field::prime(307).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let parts = QParts::sample(
            Variant::Hidden,
            306,
            1,
            Ratio::distinguisher_safe(306, 74),
            &f,
            &mut rng,
        )
        .unwrap();
        let prod = parts.q_mat.mul(&parts.q_inv, &f).unwrap();
        assert_eq!(prod, Mat::identity(306));

        // distributivity of the application
        let e = random_error(306, 30, &f, &mut rng);
        let via_q = apply_q(&parts, &e, &f);
        let r = parts.r_mat(&f);
        let er = r.vec_mul(&e, &f).unwrap();
        let et = parts.t_mat.vec_mul(&e, &f).unwrap();
        assert_eq!(via_q, matrix::add_vec(&er, &et, &f));
    }

    #[test]
    fn identity_q_from_trivial_parts() {
        let f = Field::prime(5).unwrap();
        let a = Mat::zeros(1, 4);
        let b = Mat::from_rows(vec![vec![1, 1, 1, 1]]);
        let t = Mat::identity(4);
        // R = 0 because a = 0, so Q = T = I
        let parts = QParts::from_parts(Variant::Hidden, Ratio::one(), a, None, b, t, &f).unwrap();
        assert_eq!(parts.q_mat, Mat::identity(4));
        assert_eq!(parts.q_inv, Mat::identity(4));
    }

    #[test]
    fn validate_flags_ones_plus_permutation() {
        let f = Field::prime(2).unwrap();
        let n = 6;
        let a = Mat::from_fn(1, n, |_, _| 1);
        let b = Mat::from_fn(1, n, |_, _| 1);
        // permutation T of even size so that Q = 1 + P is invertible
        let mut t = Mat::zeros(n, n);
        for i in 0..n {
            t.set(i, (i + 1) % n, 1);
        }
        let parts =
            QParts::from_parts(Variant::Hidden, Ratio::one(), a, None, b, t, &f).unwrap();
        assert!(parts
            .validate(&f)
            .contains(&Finding::OnesPlusPermutation));
    }

    #[test]
    fn validate_flags_weight_one_column() {
        let f = Field::prime(13).unwrap();
        let n = 5;
        // b has a zero at position 2, T monomial with support on the diagonal:
        // column 2 of Q ends up with weight 1
        let a = Mat::from_fn(1, n, |_, j| (j + 1) as Felt);
        let b = Mat::from_rows(vec![vec![3, 4, 0, 1, 2]]);
        let t = Mat::identity(n);
        let parts =
            QParts::from_parts(Variant::Hidden, Ratio::one(), a, None, b, t, &f).unwrap();
        let findings = parts.validate(&f);
        assert!(findings
            .iter()
            .any(|fi| matches!(fi, Finding::WeightOneColumn { col: 2 })));
    }

    #[test]
    fn sampled_keys_have_no_findings() {
        let f = Field::prime(307).unwrap();
        for seed in 0..5 {
            let mut rng = ChaCha20Rng::seed_from_u64(100 + seed);
            let parts = QParts::sample(
                Variant::Hidden,
                60,
                1,
                Ratio::distinguisher_safe(60, 20),
                &f,
                &mut rng,
            )
            .unwrap();
            assert!(parts.validate(&f).is_empty());
        }
    }

    #[test]
    fn error_propagation_bound_and_r_collapse() {
        let f = Field::prime(307).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let n = 100;
        let m = Ratio::new(120, 100);
        let parts = QParts::sample(Variant::Hidden, n, 1, m, &f, &mut rng).unwrap();
        let t_pub = m.t_pub(10);
        for _ in 0..200 {
            let e = random_error(n, t_pub, &f, &mut rng);
            let et = parts.t_mat.vec_mul(&e, &f).unwrap();
            assert!(matrix::weight(&et) <= m.ceil() * t_pub);

            // Hidden: a e^T = gamma implies e R = gamma * b
            let gamma = matrix::dot(parts.a.row(0), &e, &f);
            let er = parts.r_mat(&f).vec_mul(&e, &f).unwrap();
            assert_eq!(er, matrix::scale_vec(parts.b.row(0), gamma, &f));
        }

        // Selected with a e^T = 0: e R = (e a2^T) * 1 exactly
        let parts = QParts::sample(Variant::Selected, n, 1, m, &f, &mut rng).unwrap();
        let kernel = parts.a.kernel_basis(&f);
        for v in kernel.iter().take(20) {
            let er = parts.r_mat(&f).vec_mul(v, &f).unwrap();
            let alpha = matrix::dot(parts.a2.as_ref().unwrap().row(0), v, &f);
            assert_eq!(er, vec![alpha; n]);
        }
    }
}
