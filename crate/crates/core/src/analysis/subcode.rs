//! Subcode vulnerability audit.
//!
//! Appending the constraint rows `a` to the public parity check exposes the
//! subcode H_S = [H'; a]. When every word c of that subcode satisfies
//! H T^T c^T = 0, the dense part R has been cancelled and the subcode sees
//! the secret code through T alone; with a monomial T it is then
//! permutation-equivalent to a subcode of the secret code. This audit runs
//! with private-key knowledge: it is a keygen self-check, not an attack.

use crate::cryptosys::PrivateKey;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcodeFinding {
    /// Every word of ker[H'; a] satisfies H T^T c^T = 0.
    pub predicate_holds: bool,
    /// The predicate holds and T is monomial, i.e. the exposed subcode is
    /// permutation-equivalent to a subcode of the secret code.
    pub permutation_equivalent: bool,
    pub subcode_dim: usize,
}

impl std::fmt::Display for SubcodeFinding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.permutation_equivalent {
            write!(
                f,
                "VULNERABLE: subcode (dim {}) permutation-equivalent to a subcode of the secret code",
                self.subcode_dim
            )
        } else if self.predicate_holds {
            write!(
                f,
                "WEAK: subcode (dim {}) sees the secret code through T alone",
                self.subcode_dim
            )
        } else {
            write!(f, "ok: subcode (dim {}) retains the dense mask", self.subcode_dim)
        }
    }
}

/// Audit a key under the assumption that the constraint rows `a` are known
/// to the attacker (they are public in the Selected variant and treated as
/// exposed for Hidden-variant what-if audits).
pub fn subcode_check(sk: &PrivateKey) -> SubcodeFinding {
    let f = sk.params.field().expect("valid spec");
    let pk = sk.public_key().expect("key material is consistent");
    let h_s = pk.dual_generator().vconcat(&sk.qparts.a);
    let basis = h_s.kernel_basis(&f);
    let predicate_holds = basis.iter().all(|c| {
        let ct = sk.qparts.t_mat.vec_mul(c, &f).expect("c has length n");
        sk.code.syndrome(&ct).iter().all(|&s| s == 0)
    });
    let n = sk.params.n;
    let t_monomial = (0..n).all(|i| {
        sk.qparts.t_mat.row_weight(i) == 1 && sk.qparts.t_mat.col_weight(i) == 1
    });
    SubcodeFinding {
        predicate_holds,
        permutation_equivalent: predicate_holds && t_monomial,
        subcode_dim: basis.len(),
    }
}
