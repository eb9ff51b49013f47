//! Star-product distinguisher experiment.
//!
//! For a disguised GRS public code, star products `g_i * c_j` of the dual
//! generator rows with three codewords span a space whose dimension betrays
//! whether the triple lies inside the hidden subcode: roughly 2r+2 inside
//! versus 3r-3 for generic triples (the published dimensions with k replaced
//! by r, since every rate here exceeds 1/2 and the attack runs on the dual).
//! Each extra nonzero in T inflates the inside dimension by one, so from
//! m = 1 + (r-5)/n the two populations coincide and the distinguisher fails.
//!
//! The experiment uses private knowledge only as a sampling oracle: triples
//! inside the clean subspace are drawn by solving the membership constraint
//! y (H b^T) = 0 (plus y (H 1^T) = 0 in the Selected variant).

use crate::cryptosys::{PrivateKey, PublicKey};
use crate::gf::{Felt, Field};
use crate::matrix::{self, Mat};
use crate::qtransform::Variant;

/// Rank of the 3r x n matrix of componentwise products g_i * c_j.
pub fn star_product_dim(gpub: &Mat, triple: [&[Felt]; 3], f: &Field) -> usize {
    let n = gpub.cols;
    let mut prod = Mat::zeros(3 * gpub.rows, n);
    for (block, c) in triple.iter().enumerate() {
        assert_eq!(c.len(), n, "codeword length mismatch");
        for i in 0..gpub.rows {
            for j in 0..n {
                prod.set(block * gpub.rows + i, j, f.mul(gpub.get(i, j), c[j]));
            }
        }
    }
    prod.rank(f)
}

#[derive(Debug, Clone)]
pub struct DistinguisherReport {
    pub trials: usize,
    /// Dimensions observed for triples drawn inside the clean subspace.
    pub dims_inside: Vec<usize>,
    /// Dimensions observed for unconstrained (generic) triples.
    pub dims_random: Vec<usize>,
    /// 2r + 2, the textbook inside dimension at m = 1.
    pub expected_inside: usize,
    /// 3r - 3, the generic dimension.
    pub expected_random: usize,
    /// True when the two observed populations take exactly the same values,
    /// i.e. the dimension test carries no information.
    pub indistinguishable: bool,
}

/// Draw `trials` inside-triples and `trials` generic triples from the dual
/// of the public code and measure the star-product dimensions of each.
pub fn distinguisher_experiment<R: rand::Rng>(
    sk: &PrivateKey,
    pk: &PublicKey,
    trials: usize,
    rng: &mut R,
) -> DistinguisherReport {
    let f = sk.params.field().expect("valid spec");
    let r = sk.params.r();
    let gpub = pk.dual_generator();
    let qt = sk.qparts.q_mat.transpose();
    let h = sk.code.parity_check();

    // Membership constraints on the syndrome-side coefficients y: the dual
    // word y H Q^T has no R-contribution iff y annihilates H b^T (and H 1^T
    // for the Selected variant, whose R carries the a_2^T 1 term).
    let mut constraints = sk.h_b.clone();
    if sk.params.variant == Variant::Selected {
        let ones = Mat::from_fn(r, 1, |i, _| sk.h_one[i]);
        constraints = constraints.hconcat(&ones);
    }
    let kernel = constraints.transpose().kernel_basis(&f);

    let dual_word = |y: &[Felt], f: &Field| -> Vec<Felt> {
        let d = h.vec_mul(y, f).expect("y has length r");
        qt.vec_mul(&d, f).expect("d has length n")
    };

    let sample_inside = |rng: &mut R| -> Vec<Felt> {
        loop {
            let mut y = vec![0; r];
            for basis in &kernel {
                let coeff = f.sample(rng);
                if coeff != 0 {
                    for (yi, &bi) in y.iter_mut().zip(basis) {
                        *yi = f.add(*yi, f.mul(coeff, bi));
                    }
                }
            }
            if matrix::weight(&y) > 0 {
                return dual_word(&y, &f);
            }
        }
    };

    let sample_generic = |rng: &mut R| -> (Vec<Felt>, bool) {
        loop {
            let y: Vec<Felt> = (0..r).map(|_| f.sample(rng)).collect();
            if matrix::weight(&y) == 0 {
                continue;
            }
            let clean = constraints
                .vec_mul(&y, &f)
                .expect("y has length r")
                .iter()
                .all(|&v| v == 0);
            return (dual_word(&y, &f), clean);
        }
    };

    let mut dims_inside = Vec::with_capacity(trials);
    let mut dims_random = Vec::with_capacity(trials);
    for _ in 0..trials {
        let (c1, c2, c3) = (
            sample_inside(rng),
            sample_inside(rng),
            sample_inside(rng),
        );
        dims_inside.push(star_product_dim(&gpub, [&c1, &c2, &c3], &f));

        let triple = loop {
            let ws: Vec<(Vec<Felt>, bool)> =
                (0..3).map(|_| sample_generic(rng)).collect();
            // generic means at least one word outside the clean subspace
            if ws.iter().any(|(_, clean)| !clean) {
                break ws;
            }
        };
        dims_random.push(star_product_dim(
            &gpub,
            [&triple[0].0, &triple[1].0, &triple[2].0],
            &f,
        ));
    }

    let mut seen_inside: Vec<usize> = dims_inside.clone();
    let mut seen_random: Vec<usize> = dims_random.clone();
    seen_inside.sort_unstable();
    seen_inside.dedup();
    seen_random.sort_unstable();
    seen_random.dedup();

    DistinguisherReport {
        trials,
        dims_inside,
        dims_random,
        expected_inside: 2 * r + 2,
        expected_random: 3 * r - 3,
        indistinguishable: seen_inside == seen_random,
    }
}
