//! Arithmetic in GF(q) for prime q and for q = 2^m.
//!
//! Elements are stored canonically as integers in `0..q`: residues for prime
//! fields, bit-packed polynomial coefficients for binary extension fields.
//! Nonzero elements are also addressed by their *composition index*
//! `i ∈ 1..q`, meaning the element α^(i-1).

use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Canonical field element value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    // exp[i] = α^i for i in 0..2(q-1), doubled so products need no reduction
    exp: Vec<u16>,
    // log[x] = i with α^i = x; log[0] is unused
    log: Vec<u16>,
}

/// A finite field GF(q). Cheap to clone; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    q: u32,
    p: u32,
    m: u32,
    modulus: Option<u32>,
    tables: Arc<Tables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus.map(|x| format!("{x:#x}")))
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Default moduli for binary extension fields, bit i = coefficient of x^i.
pub fn default_modulus(p: u32, m: u32) -> Option<u32> {
    match (p, m) {
        (2, 2) => Some(0b111),
        (2, 3) => Some(0b1011),
        (2, 4) => Some(0b1_0011),
        (2, 8) => Some(0x11d),
        _ => None,
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn poly_degree(a: u32) -> i32 {
    31 - a.leading_zeros() as i32
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree 1..=deg/2.
pub fn is_irreducible_gf2(poly: u32) -> bool {
    let d = poly_degree(poly);
    if d < 1 {
        return false;
    }
    for divisor in 2u32..(1u32 << (d / 2 + 1)) {
        if poly_degree(divisor) >= 1 && poly_degree(divisor) <= d / 2 && poly_rem(poly, divisor) == 0 {
            return false;
        }
    }
    true
}

/// Build GF(p^m). Extension fields are supported in characteristic 2 only.
pub fn field_new(p: u32, m: u32, modulus: Option<u32>) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::invalid("field characteristic", format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::invalid("field extension degree", "must be at least 1"));
    }
    let q = (p as u64).checked_pow(m).filter(|&q| q <= 1 << 16).ok_or_else(|| {
        Error::invalid("field order", format!("{p}^{m} exceeds 2^16"))
    })? as u32;

    if m == 1 {
        if modulus.is_some() {
            return Err(Error::invalid("field modulus", "prime fields take no modulus"));
        }
        let order = q - 1;
        let factors = prime_factors(order.max(1));
        let alpha = (1..q.max(2))
            .find(|&g| {
                q == 2
                    || factors
                        .iter()
                        .all(|&r| pow_mod(g as u64, (order / r) as u64, q as u64) != 1)
            })
            .expect("every prime field has a primitive root");
        let mut exp = vec![0u16; 2 * order as usize];
        let mut x = 1u64;
        for e in exp.iter_mut() {
            *e = x as u16;
            x = x * alpha as u64 % q as u64;
        }
        return Ok(FieldSpec::from_exp(q, p, m, None, exp));
    }

    if p != 2 {
        return Err(Error::invalid(
            "field",
            format!("extension fields are supported only in characteristic 2, got {p}^{m}"),
        ));
    }
    let modulus = match modulus {
        Some(md) => md,
        None => default_modulus(p, m).ok_or_else(|| {
            Error::invalid("field modulus", format!("no default modulus available for GF({p}^{m})"))
        })?,
    };
    if poly_degree(modulus) != m as i32 {
        return Err(Error::invalid(
            "field modulus",
            format!("{modulus:#x} does not have degree {m}"),
        ));
    }
    if !is_irreducible_gf2(modulus) {
        return Err(Error::invalid("field modulus", format!("{modulus:#x} is reducible")));
    }
    let order = (q - 1) as usize;
    let mut exp = vec![0u16; 2 * order];
    let mut x = 1u32;
    for i in 0..order {
        if i > 0 && x == 1 {
            return Err(Error::invalid(
                "field modulus",
                format!("x is not primitive modulo {modulus:#x}; composition indexing needs a primitive α"),
            ));
        }
        exp[i] = x as u16;
        x <<= 1;
        if x & (1 << m) != 0 {
            x ^= modulus;
        }
    }
    for i in order..2 * order {
        exp[i] = exp[i - order];
    }
    Ok(FieldSpec::from_exp(q, p, m, Some(modulus), exp))
}

impl FieldSpec {
    fn from_exp(q: u32, p: u32, m: u32, modulus: Option<u32>, exp: Vec<u16>) -> Self {
        let mut log = vec![0u16; q as usize];
        for i in 0..(q - 1) as usize {
            log[exp[i] as usize] = i as u16;
        }
        FieldSpec {
            q,
            p,
            m,
            modulus,
            tables: Arc::new(Tables { exp, log }),
        }
    }

    /// GF(q) for q prime or a power of two, with the default modulus.
    pub fn of_order(q: u32) -> Result<Self> {
        if is_prime(q) {
            return field_new(q, 1, None);
        }
        if q.is_power_of_two() && q > 2 {
            return field_new(2, q.trailing_zeros(), None);
        }
        Err(Error::invalid("field order", format!("{q} is neither prime nor a power of two")))
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> Option<u32> {
        self.modulus
    }

    pub fn alpha(&self) -> FieldElement {
        FieldElement(self.tables.exp[1])
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u16).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q as u16).map(FieldElement)
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value < self.q {
            Ok(FieldElement(value as u16))
        } else {
            Err(Error::invalid("field element", format!("{value} is not below q = {}", self.q)))
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            FieldElement(a.0 ^ b.0)
        } else {
            let s = a.0 as u32 + b.0 as u32;
            FieldElement(if s >= self.q { s - self.q } else { s } as u16)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 || a.0 == 0 {
            a
        } else {
            FieldElement((self.q - a.0 as u32) as u16)
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let t = &self.tables;
        FieldElement(t.exp[t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let t = &self.tables;
        let order = (self.q - 1) as usize;
        Ok(FieldElement(t.exp[(order - t.log[a.0 as usize] as usize) % order]))
    }

    /// Multiplicative inverse of a known-nonzero element.
    #[inline]
    pub fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        debug_assert!(a.0 != 0);
        let t = &self.tables;
        let order = (self.q - 1) as usize;
        FieldElement(t.exp[(order - t.log[a.0 as usize] as usize) % order])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The n-fold sum x + x + … + x, i.e. (n mod p)·x.
    pub fn int_scale(&self, n: u64, x: FieldElement) -> FieldElement {
        let r = (n % self.p as u64) as u16;
        if self.p == 2 {
            if r == 1 { x } else { FieldElement::ZERO }
        } else {
            self.mul(FieldElement(r), x)
        }
    }

    /// α^(i-1) for composition index i ≥ 1; index 0 is the zero element.
    pub fn element_of_index(&self, i: usize) -> FieldElement {
        assert!(i < self.q as usize, "composition index {i} out of range for q = {}", self.q);
        if i == 0 {
            FieldElement::ZERO
        } else {
            FieldElement(self.tables.exp[i - 1])
        }
    }

    /// Inverse of [`element_of_index`](Self::element_of_index).
    pub fn index_of_element(&self, x: FieldElement) -> usize {
        if x.0 == 0 {
            0
        } else {
            self.tables.log[x.0 as usize] as usize + 1
        }
    }
}

/// Probability that l i.i.d. uniform nonzero elements of GF(q) sum to zero:
/// (1/q)(1 + (−1)^l/(q−1)^(l−1)). The empty sum (l = 0) is zero.
pub fn phi(l: u32, field: &FieldSpec) -> Rational {
    let q = field.q();
    if l == 0 {
        return Rational::from(1);
    }
    let qm1 = Integer::from(q - 1);
    let denom = Integer::from((&qm1).pow(l - 1));
    let sign = if l % 2 == 0 { 1 } else { -1 };
    let inner = Rational::from(1) + Rational::from((Integer::from(sign), denom));
    inner / Rational::from(q)
}

/// Limit on the number of enumerated prefixes in [`zero_sum_count_brute`].
pub const ZERO_SUM_BRUTE_LIMIT: u64 = 10_000_000;

/// Fraction of l-tuples of nonzero elements that sum to zero, by exhaustive
/// enumeration. The first l−1 entries are enumerated; the tuple is completed
/// by the unique last entry that zeroes the sum, which is admissible iff it
/// is nonzero.
pub fn zero_sum_count_brute(l: u32, field: &FieldSpec) -> Result<Rational> {
    if l == 0 {
        return Ok(Rational::from(1));
    }
    let nz = (field.q() - 1) as u64;
    let prefixes = nz
        .checked_pow(l - 1)
        .filter(|&n| n <= ZERO_SUM_BRUTE_LIMIT)
        .ok_or_else(|| {
            Error::too_large(
                format!("zero-sum enumeration (l = {l}, q = {})", field.q()),
                format!("{nz}^{}", l - 1),
                ZERO_SUM_BRUTE_LIMIT,
            )
        })?;

    let len = (l - 1) as usize;
    // odometer over prefixes with a stack of partial sums
    let mut digits = vec![1u16; len];
    let mut partial = vec![FieldElement::ZERO; len + 1];
    for i in 0..len {
        partial[i + 1] = field.add(partial[i], FieldElement(digits[i]));
    }
    let mut hits: u64 = 0;
    for _ in 0..prefixes {
        if !partial[len].is_zero() {
            hits += 1;
        }
        let mut pos = len;
        while pos > 0 {
            pos -= 1;
            if (digits[pos] as u64) < nz {
                digits[pos] += 1;
                break;
            }
            digits[pos] = 1;
        }
        for i in pos..len {
            partial[i + 1] = field.add(partial[i], FieldElement(digits[i]));
        }
    }
    let total = Integer::from(nz).pow(l);
    Ok(Rational::from((Integer::from(hits), total)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_alpha_squared_is_alpha_plus_one() {
        let f = field_new(2, 2, None).unwrap();
        let a = f.alpha();
        assert_eq!(a, FieldElement(0b10));
        assert_eq!(f.mul(a, a), f.add(a, FieldElement::ONE));
        assert_eq!(f.inv(a).unwrap(), FieldElement(0b11));
    }

    #[test]
    fn gf2_alpha_is_one() {
        let f = field_new(2, 1, None).unwrap();
        assert_eq!(f.alpha(), FieldElement::ONE);
        assert_eq!(f.element_of_index(1), FieldElement::ONE);
    }

    #[test]
    fn prime_field_alpha_is_smallest_primitive_root() {
        for (p, g) in [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2), (17, 3), (23, 5), (41, 6)] {
            assert_eq!(field_new(p, 1, None).unwrap().alpha(), FieldElement(g), "p = {p}");
        }
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for m in [2, 3, 4, 8] {
            assert!(is_irreducible_gf2(default_modulus(2, m).unwrap()));
            field_new(2, m, None).unwrap();
        }
    }

    #[test]
    fn construction_errors() {
        assert!(field_new(4, 1, None).is_err());
        assert!(field_new(2, 5, None).is_err());
        // x^2 + 1 = (x + 1)^2
        assert!(field_new(2, 2, Some(0b101)).is_err());
        assert!(field_new(2, 3, Some(0b111)).is_err());
        // irreducible but x has order 5
        assert!(field_new(2, 4, Some(0b1_1111)).is_err());
        assert!(field_new(3, 2, None).is_err());
        assert!(field_new(2, 1, None).unwrap().inv(FieldElement::ZERO).is_err());
    }

    #[test]
    fn int_scale_reduces_mod_p() {
        let f = field_new(2, 2, None).unwrap();
        for x in f.elements() {
            assert_eq!(f.int_scale(3, x), x);
            assert_eq!(f.int_scale(2, x), FieldElement::ZERO);
        }
        let g = field_new(5, 1, None).unwrap();
        assert_eq!(g.int_scale(7, FieldElement(3)), FieldElement(1));
        assert_eq!(g.int_scale(5, FieldElement(3)), FieldElement::ZERO);
    }

    #[test]
    fn index_maps_are_inverse_bijections() {
        for q in [2, 3, 4, 5, 7, 8, 16, 256] {
            let f = FieldSpec::of_order(q).unwrap();
            let mut seen = vec![false; q as usize];
            for i in 0..q as usize {
                let x = f.element_of_index(i);
                assert!(!seen[x.0 as usize]);
                seen[x.0 as usize] = true;
                assert_eq!(f.index_of_element(x), i);
            }
            assert_eq!(f.element_of_index(1), FieldElement::ONE);
        }
    }

    #[test]
    fn phi_frozen_values() {
        let gf4 = field_new(2, 2, None).unwrap();
        assert_eq!(phi(0, &gf4), 1);
        assert_eq!(phi(1, &gf4), 0);
        assert_eq!(phi(3, &gf4), Rational::from((2, 9)));
        assert_eq!(zero_sum_count_brute(3, &gf4).unwrap(), Rational::from((2, 9)));
        let gf2 = field_new(2, 1, None).unwrap();
        assert_eq!(zero_sum_count_brute(2, &gf2).unwrap(), 1);
        let gf3 = field_new(3, 1, None).unwrap();
        assert_eq!(zero_sum_count_brute(2, &gf3).unwrap(), Rational::from((1, 2)));
    }

    #[test]
    fn brute_guard() {
        let f = FieldSpec::of_order(256).unwrap();
        assert!(zero_sum_count_brute(5, &f).unwrap_err().is_feasibility());
    }
}
