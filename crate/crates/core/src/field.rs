//! Arithmetic in GF(q), q = p^k.
//!
//! Elements are encoded as integers in `0..q`. The polynomial
//! `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` (reduced modulo the field modulus)
//! is stored as `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, so for prime fields the
//! encoding is the residue itself and `0`/`1` are always the additive and
//! multiplicative identities.
//!
//! Two arithmetic layers exist. The polynomial layer (`poly_*`) works on
//! coefficient vectors and is the reference. The table layer (`add`, `mul`,
//! `inv`, ...) uses discrete-log, Zech-log and addition tables derived from the
//! polynomial layer at construction time; tests check the two agree on every
//! pair of elements.

use std::fmt;

use thiserror::Error;

/// Encoded field element, an integer in `0..q`.
pub type Elem = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Full q x q addition tables are built up to this order.
const ADD_TABLE_LIMIT: u32 = 256;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field order {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} is too small (need q >= 3)")]
    TooSmall(u64),
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("modulus {0:?} is not a monic irreducible polynomial over GF({1})")]
    BadModulus(Vec<u32>, u32),
    #[error("zero has no multiplicative inverse")]
    DivisionByZero,
    #[error("zero has no discrete logarithm")]
    LogOfZero,
    #[error("operands belong to different fields")]
    MixedFields,
}

/// A finite field GF(p^k) with a fixed multiplicative generator.
#[derive(Clone)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, coefficients low to high (length k + 1); empty for k = 1.
    modulus: Vec<u32>,
    beta: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<Elem>,
    add_table: Option<Vec<Elem>>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("beta", &self.beta)
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `f` modulo `g` over GF(p); both low-to-high, `g` nonzero.
fn poly_rem_p(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let g = trim(g.to_vec());
    let mut r = trim(f.to_vec());
    let dg = g.len() - 1;
    let lead_inv = inv_mod_p(g[dg], p) as u64;
    while r.len() > dg {
        let shift = r.len() - 1 - dg;
        let c = (*r.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        for (i, &gi) in g.iter().enumerate() {
            let sub = (c as u64 * gi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn digits_of(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (v % p as u64) as u32;
            v /= p as u64;
            d
        })
        .collect()
}

/// Trial division of a monic degree-k polynomial by every monic polynomial of
/// degree 1..=k/2.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let k = f.len() - 1;
    for dg in 1..=k / 2 {
        for v in 0..(p as u64).pow(dg as u32) {
            let mut g = digits_of(v, p, dg);
            g.push(1);
            if poly_rem_p(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    /// Builds GF(q) deterministically: the smallest irreducible monic modulus
    /// (ordered by the encoding of its lower coefficients) and the smallest
    /// generator in encoded element order.
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q < 3 {
            return Err(FieldError::TooSmall(q));
        }
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        let p = p as u32;
        if k == 1 {
            return Ok(Self::build(p, 1, Vec::new()));
        }
        let modulus = (0..q)
            .map(|v| {
                let mut f = digits_of(v, p, k as usize);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");
        Ok(Self::build(p, k, modulus))
    }

    /// Builds GF(p^k) from an explicit monic modulus given low-to-high
    /// (`[c_0, ..., c_{k-1}, 1]`). A degree-1 modulus yields the prime field.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self, FieldError> {
        let bad = || FieldError::BadModulus(modulus.to_vec(), p);
        if prime_power(p as u64) != Some((p as u64, 1)) {
            return Err(FieldError::NotPrimePower(p as u64));
        }
        if modulus.len() < 2
            || modulus.last() != Some(&1)
            || modulus.iter().any(|&c| c >= p)
            || !is_irreducible(modulus, p)
        {
            return Err(bad());
        }
        let k = (modulus.len() - 1) as u32;
        let q = (p as u64).checked_pow(k).ok_or(FieldError::TooLarge(u64::MAX))?;
        if q < 3 {
            return Err(FieldError::TooSmall(q));
        }
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let modulus = if k == 1 { Vec::new() } else { modulus.to_vec() };
        Ok(Self::build(p, k, modulus))
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(k);
        let mut field = GaloisField {
            p,
            k,
            q,
            modulus,
            beta: 0,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
            neg: Vec::new(),
            add_table: None,
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        field.beta = (2..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| field.poly_pow(g, order / r) != 1)
            })
            .unwrap_or(2);

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1;
        for i in 0..q - 1 {
            debug_assert_eq!(log[cur as usize], NO_LOG);
            exp.push(cur);
            log[cur as usize] = i;
            cur = field.poly_mul(cur, field.beta);
        }
        assert_eq!(cur, 1, "generator order must be q - 1");
        field.zech = exp
            .iter()
            .map(|&e| log[field.poly_add(1, e) as usize])
            .collect();
        field.neg = (0..q).map(|a| field.poly_neg(a)).collect();
        field.exp = exp;
        field.log = log;
        if q <= ADD_TABLE_LIMIT {
            let mut table = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    table.push(field.poly_add(a, b));
                }
            }
            field.add_table = Some(table);
        }
        field
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// `q - 1`, the order of the multiplicative group.
    pub fn units(&self) -> u32 {
        self.q - 1
    }

    /// Monic modulus low-to-high; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The fixed multiplicative generator.
    pub fn generator(&self) -> Elem {
        self.beta
    }

    pub(crate) fn add_table(&self) -> Option<&[Elem]> {
        self.add_table.as_deref()
    }

    pub fn element(&self, rep: Elem) -> FieldElement<'_> {
        assert!(rep < self.q, "element {rep} out of range for GF({})", self.q);
        FieldElement { field: self, rep }
    }

    // ----- polynomial layer -----

    /// Coefficient vector (length k) of an encoded element.
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        digits_of(a as u64, self.p, self.k as usize)
    }

    /// Encodes a coefficient vector (length k, entries < p).
    pub fn from_coefficients(&self, coeffs: &[u32]) -> Elem {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn poly_add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (x, y) = (self.coefficients(a), self.coefficients(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.from_coefficients(&s)
    }

    pub fn poly_neg(&self, a: Elem) -> Elem {
        let c: Vec<u32> = self
            .coefficients(a)
            .iter()
            .map(|&u| (self.p - u) % self.p)
            .collect();
        self.from_coefficients(&c)
    }

    pub fn poly_mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u64;
        if self.k == 1 {
            return (a as u64 * b as u64 % p) as u32;
        }
        let (x, y) = (self.coefficients(a), self.coefficients(b));
        let mut prod = vec![0u64; 2 * self.k as usize - 1];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let mut r = poly_rem_p(&prod, &self.modulus, self.p);
        r.resize(self.k as usize, 0);
        self.from_coefficients(&r)
    }

    pub fn poly_pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            e >>= 1;
        }
        acc
    }

    // ----- table layer -----

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None if self.k == 1 => (a + b) % self.p,
            None => self.add_zech(a, b),
        }
    }

    /// Addition through Zech logarithms: `a + b = a (1 + b/a)`.
    pub fn add_zech(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let n = self.q - 1;
        let (la, lb) = (self.log[a as usize], self.log[b as usize]);
        match self.zech[((lb + n - la) % n) as usize] {
            NO_LOG => 0,
            z => self.exp[((la + z) % n) as usize],
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64 * (e % n) % n;
        self.exp[l as usize]
    }

    /// `a^e` for signed `e`, reducing the exponent modulo `q - 1`.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Result<Elem, FieldError> {
        if e >= 0 {
            return Ok(self.pow(a, e as u64));
        }
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let n = (self.q - 1) as i64;
        Ok(self.pow(a, e.rem_euclid(n) as u64))
    }

    /// `a^e` for signed `e` computed as `(a^{-1})^{-e}` when `e < 0`.
    pub fn pow_signed_via_inverse(&self, a: Elem, e: i64) -> Result<Elem, FieldError> {
        if e >= 0 {
            return Ok(self.pow(a, e as u64));
        }
        Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
    }

    /// `beta^i`, with `i` taken modulo `q - 1`.
    #[inline]
    pub fn exp(&self, i: u64) -> Elem {
        self.exp[(i % (self.q - 1) as u64) as usize]
    }

    /// The unique `i` in `0..q-1` with `beta^i = a`.
    pub fn discrete_log(&self, a: Elem) -> Result<u32, FieldError> {
        if a == 0 || a >= self.q {
            return Err(FieldError::LogOfZero);
        }
        Ok(self.log[a as usize])
    }
}

/// A field element tied to its field, for checked arithmetic.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f GaloisField,
    rep: Elem,
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.rep, self.field.q)
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep && self.field == other.field
    }
}

impl<'f> FieldElement<'f> {
    pub fn rep(self) -> Elem {
        self.rep
    }

    pub fn field(self) -> &'f GaloisField {
        self.field
    }

    fn check(self, other: Self) -> Result<(), FieldError> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    fn wrap(self, rep: Elem) -> Self {
        FieldElement { field: self.field, rep }
    }

    pub fn checked_add(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.wrap(self.field.add(self.rep, other.rep)))
    }

    pub fn checked_sub(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.wrap(self.field.sub(self.rep, other.rep)))
    }

    pub fn checked_mul(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.wrap(self.field.mul(self.rep, other.rep)))
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        Ok(self.wrap(self.field.inv(self.rep)?))
    }

    pub fn pow(self, e: i64) -> Result<Self, FieldError> {
        Ok(self.wrap(self.field.pow_signed(self.rep, e)?))
    }

    pub fn discrete_log(self) -> Result<u32, FieldError> {
        self.field.discrete_log(self.rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_by_powering(f: &GaloisField, a: Elem) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = f.poly_mul(x, a);
            k += 1;
        }
        k
    }

    #[test]
    fn gf7_generator_is_three() {
        let f = GaloisField::new(7).unwrap();
        assert_eq!(f.generator(), 3);
        assert_eq!(order_by_powering(&f, 3), 6);
        assert_eq!(order_by_powering(&f, 2), 3);
    }

    #[test]
    fn gf9_modulus_is_smallest_irreducible_quadratic() {
        let f = GaloisField::new(9).unwrap();
        assert_eq!((f.characteristic(), f.degree()), (3, 2));
        // Trial division of every monic quadratic by the nine linear polynomials.
        let mut irreducible = Vec::new();
        for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                let has_root = (0..3u32).any(|x| (x * x + c1 * x + c0) % 3 == 0);
                if !has_root {
                    irreducible.push((c0 + 3 * c1, vec![c0, c1, 1]));
                }
            }
        }
        irreducible.sort();
        assert_eq!(f.modulus(), irreducible[0].1.as_slice());
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(order_by_powering(&f, f.generator()), 8);
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(GaloisField::new(6).unwrap_err(), FieldError::NotPrimePower(6));
        assert_eq!(GaloisField::new(2).unwrap_err(), FieldError::TooSmall(2));
        assert_eq!(GaloisField::new(12).unwrap_err(), FieldError::NotPrimePower(12));
        assert!(GaloisField::new(1 << 17).is_err());
        assert!(GaloisField::with_modulus(3, &[2, 0, 1]).is_err()); // x^2 + 2 = (x+1)(x+2)
        assert!(GaloisField::with_modulus(4, &[1, 1, 1]).is_err());
    }

    #[test]
    fn small_identities() {
        let f = GaloisField::new(7).unwrap();
        assert_eq!(f.inv(2).unwrap(), 4);
        assert_eq!(f.inv(0), Err(FieldError::DivisionByZero));
        assert_eq!(f.discrete_log(1).unwrap(), 0);
        assert_eq!(f.discrete_log(3).unwrap(), 1);
        assert_eq!(f.discrete_log(2).unwrap(), 2); // 3^2 = 9 = 2
        assert_eq!(f.discrete_log(0), Err(FieldError::LogOfZero));
        for q in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49, 81] {
            let f = GaloisField::new(q).unwrap();
            for a in 1..f.order() {
                assert_eq!(f.pow(a, q - 1), 1);
            }
            if q % 2 == 1 {
                assert_ne!(f.pow(f.generator(), (q - 1) / 2), 1);
            }
        }
    }

    #[test]
    fn table_layer_matches_polynomial_layer() {
        for q in [3u64, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 243, 343] {
            let f = GaloisField::new(q).unwrap();
            for a in 0..f.order() {
                assert_eq!(f.neg(a), f.poly_neg(a));
                for b in 0..f.order() {
                    let sum = f.poly_add(a, b);
                    assert_eq!(f.add(a, b), sum, "q={q} {a}+{b}");
                    assert_eq!(f.add_zech(a, b), sum, "q={q} zech {a}+{b}");
                    assert_eq!(f.mul(a, b), f.poly_mul(a, b), "q={q} {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn zech_path_without_add_table() {
        // q = 289 > 256, so `add` goes through the Zech table.
        let f = GaloisField::new(289).unwrap();
        assert!(f.add_table.is_none());
        for a in (0..289).step_by(7) {
            for b in 0..289 {
                assert_eq!(f.add(a, b), f.poly_add(a, b));
            }
        }
    }

    #[test]
    fn exp_is_bijection_and_log_is_homomorphism() {
        for q in (3..=121u64).filter(|&q| prime_power(q).is_some()) {
            let f = GaloisField::new(q).unwrap();
            let n = f.units() as u64;
            let mut seen = vec![false; q as usize];
            for i in 0..n {
                let e = f.exp(i);
                assert!(e != 0 && !seen[e as usize], "q={q}");
                seen[e as usize] = true;
            }
            for a in 1..f.order() {
                for b in 1..f.order() {
                    let lhs = f.discrete_log(f.mul(a, b)).unwrap() as u64;
                    let rhs = (f.discrete_log(a).unwrap() + f.discrete_log(b).unwrap()) as u64 % n;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn negative_exponent_routes_agree() {
        for q in [5u64, 7, 8, 9, 11, 27] {
            let f = GaloisField::new(q).unwrap();
            for a in 1..f.order() {
                for e in -30i64..30 {
                    assert_eq!(
                        f.pow_signed(a, e).unwrap(),
                        f.pow_signed_via_inverse(a, e).unwrap()
                    );
                }
            }
            assert!(f.pow_signed(0, -1).is_err());
        }
    }

    #[test]
    fn element_wrapper_checks_fields() {
        let f7 = GaloisField::new(7).unwrap();
        let f7b = GaloisField::new(7).unwrap();
        let f9 = GaloisField::new(9).unwrap();
        let a = f7.element(2);
        assert_eq!(a.inv().unwrap().rep(), 4);
        assert_eq!(a.checked_mul(a.inv().unwrap()).unwrap().rep(), 1);
        assert!(a.checked_add(f7b.element(3)).is_ok());
        assert_eq!(a.checked_mul(f9.element(2)).unwrap_err(), FieldError::MixedFields);
        assert_eq!(f7.element(0).inv().unwrap_err(), FieldError::DivisionByZero);
        assert_eq!(a.pow(-1).unwrap().rep(), 4);
        let g = f9.element(f9.generator());
        assert_eq!(g.discrete_log().unwrap(), 1);
    }

    #[test]
    fn alternative_modulus_for_gf9() {
        let f = GaloisField::with_modulus(3, &[2, 1, 1]).unwrap();
        assert_eq!(f.order(), 9);
        assert_ne!(f.modulus(), GaloisField::new(9).unwrap().modulus());
        assert_eq!(order_by_powering(&f, f.generator()), 8);
    }
}
