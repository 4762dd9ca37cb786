//! Arithmetic in GF(p^m) with an explicit monic irreducible modulus.
//!
//! Elements are encoded canonically as integers: an element with coefficient
//! vector (c_0, ..., c_{m-1}) over GF(p) has encoding sum(c_j * p^j). All
//! on-disk and command-line representations use this encoding, and canonical
//! iteration order is increasing encoding. Fields are capped at q = 2^16, so
//! multiplicative structure is precomputed via discrete-log tables.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Canonical integer encoding of a field element.
pub type Enc = u64;

/// Largest supported field size.
pub const MAX_Q: u64 = 1 << 16;

struct FieldInner {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus, m+1 coefficients lowest-first; empty when m == 1.
    modulus: Vec<u64>,
    /// exp[i] = g^i for a fixed generator g of the multiplicative group.
    exp: Vec<Enc>,
    /// log[e] such that exp[log[e]] = e, for e in 1..q.
    log: Vec<u64>,
}

/// A finite field GF(p^m). Cheap to clone; equality is structural
/// (same p, m and modulus).
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p
            && self.inner.m == other.inner.m
            && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.inner.q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "GF({})", self.inner.q)
        } else {
            write!(
                f,
                "GF({}) = GF({}^{}), modulus {:?}",
                self.inner.q, self.inner.p, self.inner.m, self.inner.modulus
            )
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Digits of `enc` in base p, lowest-first, padded to `m` entries.
fn to_digits(enc: Enc, p: u64, m: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(m as usize);
    let mut e = enc;
    for _ in 0..m {
        v.push(e % p);
        e /= p;
    }
    v
}

fn from_digits(digits: &[u64], p: u64) -> Enc {
    let mut e = 0u64;
    for &d in digits.iter().rev() {
        e = e * p + d;
    }
    e
}

/// Remainder of polynomial division over GF(p); coefficients lowest-first.
fn poly_rem_mod_p(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    let den_deg = den.len() - 1;
    assert_eq!(den[den_deg], 1, "divisor must be monic");
    let mut rem: Vec<u64> = num.to_vec();
    while rem.len() > den_deg {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - den_deg;
        if lead != 0 {
            for (j, &dj) in den.iter().enumerate() {
                let idx = shift + j;
                rem[idx] = (rem[idx] + p - (lead * dj) % p) % p;
            }
        }
        rem.pop();
    }
    rem
}

/// True if `poly` (monic, degree >= 2, lowest-first) has no monic factor of
/// degree 1..=deg/2 over GF(p). Exhaustive trial division.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for tail in 0..count {
            let mut div = to_digits(tail, p, d as u32);
            div.push(1);
            if poly_rem_mod_p(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree m over GF(p),
/// comparing coefficient tuples (c_0, c_1, ..., c_{m-1}).
fn default_modulus(p: u64, m: u32) -> Vec<u64> {
    let count = p.pow(m);
    for rank in 0..count {
        // Read rank's base-p digits most-significant-first as (c_0, ..., c_{m-1})
        // so that increasing rank is lexicographic order on the tuple.
        let mut coeffs = vec![0u64; m as usize + 1];
        let mut x = rank;
        for i in (0..m as usize).rev() {
            coeffs[i] = x % p;
            x /= p;
        }
        coeffs[m as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of degree {m} over GF({p}) exists");
}

/// Product of two elements in digit form, reduced by `modulus`; table-free.
fn slow_mul(a: &[u64], b: &[u64], modulus: &[u64], p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    if m == 1 {
        return vec![(a[0] * b[0]) % p];
    }
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for i in (m..2 * m - 1).rev() {
        let c = prod[i];
        if c != 0 {
            prod[i] = 0;
            for (j, &mj) in modulus.iter().enumerate().take(m) {
                let idx = i - m + j;
                prod[idx] = (prod[idx] + p - (c * mj) % p) % p;
            }
        }
    }
    prod.truncate(m);
    prod
}

fn slow_pow(base: &[u64], mut e: u64, modulus: &[u64], p: u64, m: u32) -> Vec<u64> {
    let mut result = vec![0u64; m as usize];
    result[0] = 1;
    let mut acc = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = slow_mul(&result, &acc, modulus, p, m);
        }
        acc = slow_mul(&acc, &acc, modulus, p, m);
        e >>= 1;
    }
    result
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// Builds GF(p^m). `modulus` is the monic irreducible of degree m as a
    /// lowest-first coefficient list of length m+1; `None` selects the
    /// lexicographically smallest one. The modulus is ignored when m == 1.
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if m == 0 {
            return Err(Error::PreconditionViolation("m >= 1".into()));
        }
        let q = (0..m).try_fold(1u64, |acc, _| {
            let next = acc.checked_mul(p)?;
            (next <= MAX_Q).then_some(next)
        });
        let q =
            q.ok_or_else(|| Error::PreconditionViolation(format!("q = {p}^{m} exceeds 2^16")))?;

        let modulus = if m == 1 {
            Vec::new()
        } else {
            match modulus {
                None => default_modulus(p, m),
                Some(given) => {
                    if given.len() != m as usize + 1 || *given.last().unwrap() != 1 {
                        return Err(Error::DegreeMismatch {
                            want: m,
                            got: given.len().saturating_sub(1),
                        });
                    }
                    if given.iter().any(|&c| c >= p) {
                        return Err(Error::PreconditionViolation(format!(
                            "modulus coefficients must lie in 0..{p}"
                        )));
                    }
                    if !is_irreducible(given, p) {
                        return Err(Error::ReducibleModulus(format!("{given:?}"), p));
                    }
                    given.to_vec()
                }
            }
        };

        // Find a generator of the multiplicative group and fill exp/log.
        let factors = prime_factors(q - 1);
        let mut generator = None;
        for cand in 1..q {
            let digits = to_digits(cand, p, m);
            let ok = factors
                .iter()
                .all(|&f| from_digits(&slow_pow(&digits, (q - 1) / f, &modulus, p, m), p) != 1);
            if ok {
                generator = Some(digits);
                break;
            }
        }
        let generator = generator.expect("multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![u64::MAX; q as usize];
        let mut acc = vec![0u64; m as usize];
        acc[0] = 1;
        for i in 0..q - 1 {
            let e = from_digits(&acc, p);
            exp.push(e);
            log[e as usize] = i;
            acc = slow_mul(&acc, &generator, &modulus, p, m);
        }
        debug_assert!(
            log[1..].iter().all(|&l| l != u64::MAX),
            "exp table must cover all nonzero elements"
        );

        Ok(Field {
            inner: Arc::new(FieldInner {
                p,
                m,
                q,
                modulus,
                exp,
                log,
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    /// Monic modulus coefficients, lowest-first; empty when m == 1.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// All elements in canonical (increasing encoding) order.
    pub fn elements(&self) -> impl Iterator<Item = Enc> {
        0..self.inner.q
    }

    pub fn elem(&self, enc: Enc) -> Result<Elem> {
        if enc >= self.inner.q {
            return Err(Error::EncOutOfRange {
                enc,
                q: self.inner.q,
            });
        }
        Ok(Elem {
            field: self.clone(),
            enc,
        })
    }

    /// Coefficient vector (c_0, ..., c_{m-1}) of an encoding.
    pub fn coeffs(&self, enc: Enc) -> Vec<u64> {
        debug_assert!(enc < self.inner.q);
        to_digits(enc, self.inner.p, self.inner.m)
    }

    pub fn enc_from_coeffs(&self, coeffs: &[u64]) -> Result<Enc> {
        if coeffs.len() != self.inner.m as usize || coeffs.iter().any(|&c| c >= self.inner.p) {
            return Err(Error::PreconditionViolation(format!(
                "need {} coefficients in 0..{}",
                self.inner.m, self.inner.p
            )));
        }
        Ok(from_digits(coeffs, self.inner.p))
    }

    /// Embedding of a signed integer into the prime subfield.
    pub fn from_int(&self, i: i64) -> Enc {
        let p = self.inner.p as i64;
        (i.rem_euclid(p)) as u64
    }

    #[inline]
    pub fn add(&self, a: Enc, b: Enc) -> Enc {
        let f = &*self.inner;
        debug_assert!(a < f.q && b < f.q);
        if f.m == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else {
            let mut out = 0u64;
            let mut pw = 1u64;
            let (mut x, mut y) = (a, b);
            for _ in 0..f.m {
                let s = (x % f.p + y % f.p) % f.p;
                out += s * pw;
                pw *= f.p;
                x /= f.p;
                y /= f.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: Enc) -> Enc {
        let f = &*self.inner;
        debug_assert!(a < f.q);
        if f.m == 1 {
            if a == 0 {
                0
            } else {
                f.p - a
            }
        } else {
            let mut out = 0u64;
            let mut pw = 1u64;
            let mut x = a;
            for _ in 0..f.m {
                let d = x % f.p;
                out += if d == 0 { 0 } else { f.p - d } * pw;
                pw *= f.p;
                x /= f.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Enc, b: Enc) -> Enc {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Enc, b: Enc) -> Enc {
        let f = &*self.inner;
        debug_assert!(a < f.q && b < f.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let idx = (f.log[a as usize] + f.log[b as usize]) % (f.q - 1);
        f.exp[idx as usize]
    }

    pub fn inv(&self, a: Enc) -> Result<Enc> {
        let f = &*self.inner;
        debug_assert!(a < f.q);
        if a == 0 {
            return Err(Error::DivisionByZero(f.q));
        }
        let idx = ((f.q - 1) - f.log[a as usize]) % (f.q - 1);
        Ok(f.exp[idx as usize])
    }

    pub fn div(&self, a: Enc, b: Enc) -> Result<Enc> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e with the convention pow(a, 0) = 1 for every a (including 0).
    pub fn pow(&self, a: Enc, e: u64) -> Enc {
        let f = &*self.inner;
        debug_assert!(a < f.q);
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let idx = (f.log[a as usize] as u128 * (e as u128 % (f.q - 1) as u128)) % (f.q - 1) as u128;
        f.exp[idx as usize]
    }

    /// All x with x^n = c, by full enumeration, sorted by encoding.
    pub fn nth_roots(&self, n: u64, c: Enc) -> Vec<Enc> {
        debug_assert!(c < self.inner.q);
        self.elements().filter(|&x| self.pow(x, n) == c).collect()
    }
}

/// A field element carrying its owning field.
#[derive(Clone, PartialEq, Eq)]
pub struct Elem {
    field: Field,
    enc: Enc,
}

impl Elem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn enc(&self) -> Enc {
        self.enc
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.coeffs(self.enc)
    }

    pub fn is_zero(&self) -> bool {
        self.enc == 0
    }

    pub fn inv(&self) -> Result<Elem> {
        Ok(Elem {
            field: self.field.clone(),
            enc: self.field.inv(self.enc)?,
        })
    }

    pub fn pow(&self, e: u64) -> Elem {
        Elem {
            field: self.field.clone(),
            enc: self.field.pow(self.enc, e),
        }
    }

    fn assert_same_field(&self, other: &Elem) {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.enc)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.enc)
    }
}

impl Add for &Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        self.assert_same_field(rhs);
        Elem {
            field: self.field.clone(),
            enc: self.field.add(self.enc, rhs.enc),
        }
    }
}

impl Sub for &Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        self.assert_same_field(rhs);
        Elem {
            field: self.field.clone(),
            enc: self.field.sub(self.enc, rhs.enc),
        }
    }
}

impl Mul for &Elem {
    type Output = Elem;
    fn mul(self, rhs: &Elem) -> Elem {
        self.assert_same_field(rhs);
        Elem {
            field: self.field.clone(),
            enc: self.field.mul(self.enc, rhs.enc),
        }
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem {
            field: self.field.clone(),
            enc: self.field.neg(self.enc),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_basics() {
        let f = Field::new(5, 1, None).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.add(4, 3), 2);
    }

    #[test]
    fn nonprime_rejected() {
        match Field::new(6, 1, None) {
            Err(Error::NonPrime(6)) => {}
            other => panic!("expected NonPrime, got {other:?}"),
        }
    }

    #[test]
    fn gf9_square_of_generator_coeff() {
        // Modulus z^2 + 1: the element z (encoding 3) squares to -1 = 2.
        let f = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(f.mul(3, 3), 2);
    }

    #[test]
    fn default_moduli_are_lex_smallest() {
        assert_eq!(Field::new(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
        // Over GF(5), x^2+1 has root 2, so (1,1) is the first irreducible tuple.
        assert_eq!(Field::new(5, 2, None).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf16_has_16_elements() {
        let f = Field::new(2, 4, None).unwrap();
        assert_eq!(f.q(), 16);
        assert_eq!(f.elements().count(), 16);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x+1)^2 over GF(2).
        match Field::new(2, 2, Some(&[1, 0, 1])) {
            Err(Error::ReducibleModulus(_, 2)) => {}
            other => panic!("expected ReducibleModulus, got {other:?}"),
        }
    }

    #[test]
    fn wrong_degree_modulus_rejected() {
        match Field::new(3, 2, Some(&[1, 1])) {
            Err(Error::DegreeMismatch { want: 2, got: 1 }) => {}
            other => panic!("expected DegreeMismatch, got {other:?}"),
        }
    }

    #[test]
    fn inverse_in_gf13() {
        let f = Field::new(13, 1, None).unwrap();
        assert_eq!(f.inv(4).unwrap(), 10);
        assert!(matches!(f.inv(0), Err(Error::DivisionByZero(13))));
    }

    #[test]
    fn fourth_roots_in_gf13_match_independent_oracle() {
        let f = Field::new(13, 1, None).unwrap();
        // Oracle: raw modular arithmetic, no field machinery.
        let oracle = |c: u64| -> Vec<u64> {
            (0u64..13)
                .filter(|&x| (x * x % 13) * (x * x % 13) % 13 == c)
                .collect()
        };
        assert_eq!(oracle(1), vec![1, 5, 8, 12]);
        assert_eq!(f.nth_roots(4, 1), vec![1, 5, 8, 12]);
        assert_eq!(oracle(2), Vec::<u64>::new());
        assert_eq!(f.nth_roots(4, 2), Vec::<Enc>::new());
    }

    #[test]
    fn nth_roots_of_zero() {
        let f = Field::new(13, 1, None).unwrap();
        assert_eq!(f.nth_roots(4, 0), vec![0]);
    }

    fn exhaustive_axioms(f: &Field) {
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
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_gf8_gf9() {
        exhaustive_axioms(&Field::new(2, 3, None).unwrap());
        exhaustive_axioms(&Field::new(3, 2, None).unwrap());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn cross_field_arithmetic_panics() {
        let f5 = Field::new(5, 1, None).unwrap();
        let f7 = Field::new(7, 1, None).unwrap();
        let _ = &f5.elem(2).unwrap() + &f7.elem(2).unwrap();
    }

    #[test]
    fn elem_out_of_range() {
        let f = Field::new(5, 1, None).unwrap();
        assert!(matches!(
            f.elem(5),
            Err(Error::EncOutOfRange { enc: 5, q: 5 })
        ));
    }

    #[test]
    fn pow_conventions() {
        let f = Field::new(7, 1, None).unwrap();
        assert_eq!(f.pow(0, 0), 1);
        assert_eq!(f.pow(0, 3), 0);
        assert_eq!(f.pow(3, 6), 1);
    }

    proptest! {
        #[test]
        fn frobenius_is_additive(a in 0u64..9, b in 0u64..9) {
            let f = Field::new(3, 2, None).unwrap();
            let lhs = f.pow(f.add(a, b), 3);
            let rhs = f.add(f.pow(a, 3), f.pow(b, 3));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn root_counts_divide_gcd(n in 1u64..8, c in 1u64..13) {
            let f = Field::new(13, 1, None).unwrap();
            let count = f.nth_roots(n, c).len() as u64;
            let g = gcd(n, 12);
            prop_assert!(count == 0 || count == g);
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
}
