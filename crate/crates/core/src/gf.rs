//! Exact arithmetic over F_q, for prime q and for q = 2^l.
//!
//! Elements are plain integers in `[0, q)` (no residue encoding), so every
//! value serializes bit-exactly. Binary-extension elements are coefficient
//! bitmasks of polynomials over F_2 modulo a fixed irreducible polynomial.

use thiserror::Error;

/// A field element, always reduced into `[0, q)`.
pub type Felt = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Prime,
    BinaryExtension,
}

/// Description of a finite field: cardinality plus, for q = 2^l, the
/// reduction polynomial (as a bitmask including the leading term).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub q: u32,
    pub kind: FieldKind,
    pub modulus_poly: u32,
    pub l: u32,
}

impl FieldSpec {
    pub fn prime(q: u32) -> Self {
        FieldSpec {
            q,
            kind: FieldKind::Prime,
            modulus_poly: 0,
            l: 0,
        }
    }

    pub fn binary(l: u32, modulus_poly: u32) -> Self {
        FieldSpec {
            q: 1u32 << l,
            kind: FieldKind::BinaryExtension,
            modulus_poly,
            l,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("q = {0} is not 2^l for the requested l = {1}")]
    BadCardinality(u32, u32),
    #[error("modulus polynomial {0:#x} is not irreducible of degree {1}")]
    BadModulus(u32, u32),
    #[error("inversion or division by zero")]
    DivisionByZero,
    #[error("unsupported extension degree l = {0} (supported: 1..=16)")]
    UnsupportedDegree(u32),
}

/// A finite field with its operation tables. Immutable after construction;
/// all operations are pure.
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    // Discrete log/antilog tables for binary extensions. `exp` is doubled so
    // that log sums never need an explicit reduction mod (q-1).
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Field(q={})", self.spec.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}
impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn poly_deg(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of carryless division of `a` by `b` over F_2.
fn poly_mod(mut a: u64, b: u32) -> u64 {
    let db = poly_deg(b);
    loop {
        let da = 63 - a.leading_zeros() as i32;
        if a == 0 || da < db {
            return a;
        }
        a ^= (b as u64) << (da - db);
    }
}

/// Irreducibility over F_2 by trial division with every polynomial of degree
/// up to deg(p)/2.
fn poly_irreducible(p: u32) -> bool {
    let d = poly_deg(p);
    if d < 1 {
        return false;
    }
    for div in 2u32..(1u32 << (d / 2 + 1)) {
        if poly_deg(div) >= 1 && poly_mod(p as u64, div) == 0 {
            return false;
        }
    }
    true
}

impl Field {
    /// Build a field from its spec, validating primality (prime kind) or the
    /// reduction polynomial (binary-extension kind).
    pub fn new(spec: FieldSpec) -> Result<Field, FieldError> {
        match spec.kind {
            FieldKind::Prime => {
                if !is_prime(spec.q) {
                    return Err(FieldError::NotPrime(spec.q));
                }
                Ok(Field {
                    spec,
                    exp: Vec::new(),
                    log: Vec::new(),
                })
            }
            FieldKind::BinaryExtension => {
                if spec.l == 0 || spec.l > 16 {
                    return Err(FieldError::UnsupportedDegree(spec.l));
                }
                if spec.q != 1u32 << spec.l {
                    return Err(FieldError::BadCardinality(spec.q, spec.l));
                }
                if poly_deg(spec.modulus_poly) != spec.l as i32
                    || !poly_irreducible(spec.modulus_poly)
                {
                    return Err(FieldError::BadModulus(spec.modulus_poly, spec.l));
                }
                let mut f = Field {
                    spec,
                    exp: Vec::new(),
                    log: Vec::new(),
                };
                f.build_tables();
                Ok(f)
            }
        }
    }

    pub fn prime(q: u32) -> Result<Field, FieldError> {
        Field::new(FieldSpec::prime(q))
    }

    pub fn binary(l: u32, modulus_poly: u32) -> Result<Field, FieldError> {
        Field::new(FieldSpec::binary(l, modulus_poly))
    }

    /// F_512 with the reduction polynomial x^9 + x^4 + 1.
    pub fn f512() -> Field {
        Field::binary(9, 0b10_0001_0001).expect("x^9+x^4+1 is irreducible")
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn q(&self) -> u32 {
        self.spec.q
    }

    /// ceil(log2(q)): bits needed to store one element.
    pub fn bits_per_element(&self) -> u32 {
        32 - (self.spec.q - 1).leading_zeros()
    }

    fn build_tables(&mut self) {
        let q = self.spec.q as usize;
        // Find a multiplicative generator by checking element order against
        // the prime factors of q-1.
        let qm1 = (q - 1) as u32;
        let mut factors = Vec::new();
        let mut m = qm1;
        let mut d = 2u32;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        let mut gen = 2u32;
        loop {
            let ok = factors
                .iter()
                .all(|&p| self.pow_clmul(gen, (qm1 / p) as u64) != 1);
            if ok {
                break;
            }
            gen += 1;
        }
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut acc = 1u32;
        for (i, slot) in exp.iter_mut().take(q - 1).enumerate() {
            *slot = acc;
            log[acc as usize] = i as u32;
            acc = self.mul_clmul(acc, gen);
        }
        for i in q - 1..2 * (q - 1) {
            exp[i] = exp[i - (q - 1)];
        }
        self.exp = exp;
        self.log = log;
    }

    /// Carryless shift-accumulate product with polynomial reduction. This is
    /// the reference multiplication path; the log tables must agree with it.
    fn mul_clmul(&self, a: Felt, b: Felt) -> Felt {
        let mut acc = 0u64;
        let mut a64 = a as u64;
        let mut bb = b;
        while bb != 0 {
            if bb & 1 != 0 {
                acc ^= a64;
            }
            a64 <<= 1;
            bb >>= 1;
        }
        poly_mod(acc, self.spec.modulus_poly) as Felt
    }

    fn pow_clmul(&self, a: Felt, mut e: u64) -> Felt {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_clmul(acc, base);
            }
            base = self.mul_clmul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn zero(&self) -> Felt {
        0
    }

    pub fn one(&self) -> Felt {
        1
    }

    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        debug_assert!(a < self.spec.q && b < self.spec.q);
        match self.spec.kind {
            FieldKind::Prime => {
                let s = a as u64 + b as u64;
                let q = self.spec.q as u64;
                (if s >= q { s - q } else { s }) as Felt
            }
            FieldKind::BinaryExtension => a ^ b,
        }
    }

    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        debug_assert!(a < self.spec.q && b < self.spec.q);
        match self.spec.kind {
            FieldKind::Prime => {
                let q = self.spec.q as u64;
                ((a as u64 + q - b as u64) % q) as Felt
            }
            FieldKind::BinaryExtension => a ^ b,
        }
    }

    pub fn neg(&self, a: Felt) -> Felt {
        self.sub(0, a)
    }

    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        debug_assert!(a < self.spec.q && b < self.spec.q);
        match self.spec.kind {
            FieldKind::Prime => ((a as u64 * b as u64) % self.spec.q as u64) as Felt,
            FieldKind::BinaryExtension => {
                if a == 0 || b == 0 {
                    0
                } else {
                    self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
                }
            }
        }
    }

    /// Multiplicative inverse. Extended Euclid for prime fields, antilog
    /// lookup for binary extensions.
    pub fn inv(&self, a: Felt) -> Result<Felt, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        match self.spec.kind {
            FieldKind::Prime => {
                let q = self.spec.q as i64;
                let (mut t, mut new_t) = (0i64, 1i64);
                let (mut r, mut new_r) = (q, a as i64);
                while new_r != 0 {
                    let quot = r / new_r;
                    (t, new_t) = (new_t, t - quot * new_t);
                    (r, new_r) = (new_r, r - quot * new_r);
                }
                debug_assert_eq!(r, 1, "gcd(a, q) must be 1 in a prime field");
                Ok(t.rem_euclid(q) as Felt)
            }
            FieldKind::BinaryExtension => {
                let qm1 = self.spec.q - 1;
                Ok(self.exp[(qm1 - self.log[a as usize]) as usize])
            }
        }
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation (exponent is an ordinary integer).
    pub fn pow(&self, a: Felt, mut e: u64) -> Felt {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Uniform element.
    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> Felt {
        rng.gen_range(0..self.spec.q)
    }

    /// Uniform nonzero element.
    pub fn sample_nonzero<R: rand::Rng>(&self, rng: &mut R) -> Felt {
        rng.gen_range(1..self.spec.q)
    }

    /// All field elements in natural integer order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> {
        0..self.spec.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn f307() -> Field {
        Field::prime(307).unwrap()
    }

    #[test]
    fn constructors_validate() {
        assert!(Field::prime(307).is_ok());
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::f512().q() == 512);
        // x^9 + x + 1 is reducible
        assert!(Field::binary(9, 0b10_0000_0011).is_err());
        // degree mismatch
        assert!(Field::binary(9, 0b1_0001_1011).is_err());
    }

    #[test]
    fn prime_arithmetic_examples() {
        let f = f307();
        assert_eq!(f.add(300, 10), 3);
        // extended-Euclid oracle: 2 * 154 = 308 = 1 (mod 307)
        assert_eq!(f.inv(2).unwrap(), 154);
        assert_eq!(f.mul(2, 154), 1);
        assert!(f.inv(0).is_err());
    }

    #[test]
    fn f512_polynomial_reduction_example() {
        let f = Field::f512();
        // x * x^8 = x^9 = x^4 + 1 under x^9 + x^4 + 1
        assert_eq!(f.mul(0b10, 0b1_0000_0000), 0b000010001);
    }

    #[test]
    fn table_mul_matches_clmul() {
        let f = Field::f512();
        for a in 0..512u32 {
            for b in 0..512u32 {
                assert_eq!(f.mul(a, b), f.mul_clmul(a, b));
            }
        }
        let f16 = Field::binary(4, 0b1_0011).unwrap();
        for a in 0..16u32 {
            for b in 0..16u32 {
                assert_eq!(f16.mul(a, b), f16.mul_clmul(a, b));
            }
        }
    }

    fn check_axioms_exhaustive(f: &Field) {
        let q = f.q();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.sub(f.add(a, b), b), a);
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn axioms_exhaustive_small_fields() {
        for f in [
            Field::prime(2).unwrap(),
            Field::prime(5).unwrap(),
            Field::prime(13).unwrap(),
            Field::binary(1, 0b11).unwrap(),
            Field::binary(4, 0b1_0011).unwrap(),
            Field::binary(5, 0b10_0101).unwrap(),
        ] {
            check_axioms_exhaustive(&f);
        }
    }

    #[test]
    fn axioms_randomized_large_fields() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for f in [f307(), Field::f512(), Field::prime(65521).unwrap()] {
            for _ in 0..2000 {
                let (a, b, c) = (f.sample(&mut rng), f.sample(&mut rng), f.sample(&mut rng));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.div(b, a).unwrap(), f.mul(b, f.inv(a).unwrap()));
                }
                assert_eq!(f.pow(a, 12), {
                    let mut acc = 1;
                    for _ in 0..12 {
                        acc = f.mul(acc, a);
                    }
                    acc
                });
            }
        }
    }

    #[test]
    fn frobenius_binary_extension() {
        let f = Field::f512();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..2000 {
            let (a, b) = (f.sample(&mut rng), f.sample(&mut rng));
            let lhs = f.pow(f.add(a, b), 2);
            let rhs = f.add(f.pow(a, 2), f.pow(b, 2));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bits_per_element() {
        assert_eq!(f307().bits_per_element(), 9);
        assert_eq!(Field::f512().bits_per_element(), 9);
        assert_eq!(Field::prime(13).unwrap().bits_per_element(), 4);
        assert_eq!(Field::prime(2).unwrap().bits_per_element(), 1);
    }
}
