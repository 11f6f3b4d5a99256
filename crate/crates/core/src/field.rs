//! Arithmetic in binary extension fields F_{2^m}.
//!
//! A [`FieldSpec`] fixes the extension degree `m` and an irreducible modulus
//! polynomial over GF(2), then precomputes log/antilog tables so that
//! multiplication, inversion, and exponentiation are table lookups. Elements
//! are stored in the polynomial basis: bit `j` of the coordinate word is the
//! coefficient of α^j.
//!
//! Only characteristic 2 is supported, with 1 ≤ m ≤ 16.

use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Errors raised while constructing or using a field.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("unsupported characteristic {0}: only p = 2 is implemented")]
    UnsupportedCharacteristic(u32),
    #[error("extension degree {0} out of range (1..=16)")]
    DegreeOutOfRange(u32),
    #[error("modulus {modulus:#x} does not have degree exactly {m}")]
    BadModulusDegree { modulus: u32, m: u32 },
    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("subfield degree {s} does not divide extension degree {m}")]
    InvalidSubfield { m: u32, s: u32 },
    #[error("coordinate value {value:#x} out of range for F_2^{m}")]
    ElementOutOfRange { value: u32, m: u32 },
}

/// An element of F_{2^m} in polynomial-basis coordinates.
///
/// Bit `j` is the coefficient of α^j. Addition is XOR and does not need a
/// [`FieldSpec`]; everything multiplicative does.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Coefficient of α^j.
    pub fn coord(self, j: u32) -> bool {
        (self.0 >> j) & 1 == 1
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// A concrete F_{2^m}: extension degree, modulus polynomial, and the
/// multiplication tables derived from them.
///
/// Immutable after construction; wrap in [`Arc`] to share across threads.
pub struct FieldSpec {
    m: u32,
    modulus: u32,
    generator: FieldElement,
    /// Powers of `generator`, doubled so `exp[i + j]` works for i, j < q-1.
    exp: Vec<u16>,
    /// Discrete log base `generator`; entry 0 is unused.
    log: Vec<u16>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

/// Degree of a GF(2) polynomial packed into an integer; 0 maps to None.
fn gf2_degree(p: u32) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(31 - p.leading_zeros())
    }
}

/// Remainder of GF(2) polynomial division.
fn gf2_rem(mut a: u32, b: u32) -> u32 {
    let db = gf2_degree(b).expect("division by zero polynomial");
    while let Some(da) = gf2_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division up to degree m/2.
fn gf2_is_irreducible(p: u32) -> bool {
    let deg = match gf2_degree(p) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if deg == 1 {
        return true;
    }
    // Any proper factorization contains a factor of degree <= deg/2.
    let max_divisor = 1u32 << (deg / 2 + 1);
    for d in 2..max_divisor {
        if gf2_rem(p, d) == 0 {
            return false;
        }
    }
    true
}

/// Product in F_{2^m} by shift-and-reduce, used only to build the tables
/// (and as an independent reference path in tests).
fn clmul_mod(a: u16, b: u16, modulus: u32, m: u32) -> u16 {
    let mut acc: u32 = 0;
    let mut a = a as u32;
    let mut b = b as u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << m) != 0 {
            a ^= modulus;
        }
    }
    acc as u16
}

impl FieldSpec {
    /// Build F_{p^m} with the given modulus polynomial (bit i = coefficient
    /// of x^i). Rejects p != 2, out-of-range m, and reducible moduli.
    pub fn with_characteristic(p: u32, m: u32, modulus: u32) -> Result<Arc<FieldSpec>, FieldError> {
        if p != 2 {
            return Err(FieldError::UnsupportedCharacteristic(p));
        }
        FieldSpec::new(m, modulus)
    }

    /// Build F_{2^m} with the given modulus polynomial.
    pub fn new(m: u32, modulus: u32) -> Result<Arc<FieldSpec>, FieldError> {
        if m == 0 || m > 16 {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        if gf2_degree(modulus) != Some(m) {
            return Err(FieldError::BadModulusDegree { modulus, m });
        }
        if !gf2_is_irreducible(modulus) {
            return Err(FieldError::ReducibleModulus(modulus));
        }

        let q = 1usize << m;
        let order = q - 1;
        // The modulus need not be primitive, so scan for a multiplicative
        // generator; the first one found keeps the tables deterministic.
        let mut generator = 0u16;
        let mut exp = vec![0u16; 2 * order];
        'candidates: for c in 2..q as u32 {
            let c = c as u16;
            let mut value = 1u16;
            for (i, slot) in exp.iter_mut().take(order).enumerate() {
                *slot = value;
                value = clmul_mod(value, c, modulus, m);
                if value == 1 && i + 1 < order {
                    continue 'candidates;
                }
            }
            if value == 1 {
                generator = c;
                break;
            }
        }
        debug_assert!(generator != 0 || m == 1, "no generator found");
        if m == 1 {
            generator = 1;
            exp[0] = 1;
        }
        for i in 0..order {
            exp[order + i] = exp[i];
        }
        let mut log = vec![0u16; q];
        for (i, &v) in exp.iter().take(order).enumerate() {
            log[v as usize] = i as u16;
        }

        Ok(Arc::new(FieldSpec {
            m,
            modulus,
            generator: FieldElement(generator),
            exp,
            log,
        }))
    }

    pub fn characteristic(&self) -> u32 {
        2
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Field size q = 2^m.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Multiplicative order q - 1.
    pub fn order(&self) -> usize {
        self.size() - 1
    }

    /// The element whose powers fill the log/antilog tables.
    pub fn primitive_element(&self) -> FieldElement {
        self.generator
    }

    /// Validated element constructor.
    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if value >= self.size() as u32 {
            return Err(FieldError::ElementOutOfRange { value, m: self.m });
        }
        Ok(FieldElement(value as u16))
    }

    fn check(&self, a: FieldElement) {
        debug_assert!(
            (a.0 as usize) < self.size(),
            "element {:#x} outside F_2^{}",
            a.0,
            self.m
        );
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        a + b
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let la = self.log[a.0 as usize] as usize;
        let lb = self.log[b.0 as usize] as usize;
        FieldElement(self.exp[la + lb])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a);
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let la = self.log[a.0 as usize] as usize;
        Ok(FieldElement(self.exp[(self.order() - la) % self.order()]))
    }

    /// a^e with the convention 0^0 = 1.
    pub fn pow(&self, a: FieldElement, e: usize) -> FieldElement {
        self.check(a);
        if a.is_zero() {
            return if e == 0 {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            };
        }
        let la = self.log[a.0 as usize] as usize;
        let idx = (la as u64 * (e % self.order()) as u64) % self.order() as u64;
        FieldElement(self.exp[idx as usize])
    }

    /// Frobenius a -> a^2.
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// Relative trace down to F_{2^s}: a + a^{2^s} + ... (m/s terms).
    pub fn rel_trace(&self, a: FieldElement, s: u32) -> Result<FieldElement, FieldError> {
        self.check_subfield(s)?;
        let mut term = a;
        let mut sum = a;
        for _ in 1..self.m / s {
            for _ in 0..s {
                term = self.square(term);
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Relative norm down to F_{2^s}: a^{(2^m - 1)/(2^s - 1)}.
    pub fn rel_norm(&self, a: FieldElement, s: u32) -> Result<FieldElement, FieldError> {
        self.check_subfield(s)?;
        let e = (self.size() - 1) / ((1usize << s) - 1);
        Ok(self.pow(a, e))
    }

    /// Exponent of the relative norm map, (2^m - 1)/(2^s - 1).
    pub fn norm_exponent(&self, s: u32) -> Result<usize, FieldError> {
        self.check_subfield(s)?;
        Ok((self.size() - 1) / ((1usize << s) - 1))
    }

    /// Validate that F_{2^s} is a subfield of this field.
    pub fn check_subfield(&self, s: u32) -> Result<(), FieldError> {
        if s == 0 || self.m % s != 0 {
            return Err(FieldError::InvalidSubfield { m: self.m, s });
        }
        Ok(())
    }

    /// All 2^m elements in ascending coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size() as u32).map(|v| FieldElement(v as u16))
    }
}

/// Render a GF(2) polynomial packed into an integer, e.g. 0x11d ->
/// "x^8 + x^4 + x^3 + x^2 + 1".
pub fn gf2_poly_string(p: u32) -> String {
    if p == 0 {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for j in (0..32).rev() {
        if (p >> j) & 1 == 1 {
            terms.push(match j {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{j}"),
            });
        }
    }
    terms.join(" + ")
}

/// Default modulus x^8 + x^4 + x^3 + x^2 + 1 for m = 8.
pub const DEFAULT_MODULUS_M8: u32 = 0x11d;
/// Default modulus x^6 + x^4 + x^3 + x + 1 for m = 6.
pub const DEFAULT_MODULUS_M6: u32 = 0x5b;

/// Built-in default modulus for an extension degree, if one is defined.
pub fn default_modulus(m: u32) -> Option<u32> {
    match m {
        6 => Some(DEFAULT_MODULUS_M6),
        8 => Some(DEFAULT_MODULUS_M8),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn f256() -> Arc<FieldSpec> {
        FieldSpec::new(8, DEFAULT_MODULUS_M8).unwrap()
    }

    fn f16() -> Arc<FieldSpec> {
        FieldSpec::new(4, 0x13).unwrap()
    }

    /// School-book reference multiplication, independent of the tables.
    fn slow_mul(a: u16, b: u16, modulus: u32, m: u32) -> u16 {
        let mut prod: u32 = 0;
        for i in 0..16 {
            if (a >> i) & 1 == 1 {
                prod ^= (b as u32) << i;
            }
        }
        let mut deg = 31i32;
        while deg >= m as i32 {
            if (prod >> deg) & 1 == 1 {
                prod ^= modulus << (deg as u32 - m);
            }
            deg -= 1;
        }
        prod as u16
    }

    #[test]
    fn construction_rejects_bad_specs() {
        assert_eq!(
            FieldSpec::with_characteristic(3, 2, 0b111).unwrap_err(),
            FieldError::UnsupportedCharacteristic(3)
        );
        assert_eq!(
            FieldSpec::new(0, 1).unwrap_err(),
            FieldError::DegreeOutOfRange(0)
        );
        assert_eq!(
            FieldSpec::new(17, 1 << 17).unwrap_err(),
            FieldError::DegreeOutOfRange(17)
        );
        assert_eq!(
            FieldSpec::new(8, 0x1d).unwrap_err(),
            FieldError::BadModulusDegree { modulus: 0x1d, m: 8 }
        );
        // x^8 + 1 = (x + 1)^8 is very reducible.
        assert_eq!(
            FieldSpec::new(8, 0x101).unwrap_err(),
            FieldError::ReducibleModulus(0x101)
        );
    }

    #[test]
    fn mul_identities() {
        let f = f256();
        for a in f.elements() {
            assert_eq!(f.mul(a, FieldElement::ONE), a);
            assert_eq!(f.mul(a, FieldElement::ZERO), FieldElement::ZERO);
        }
    }

    #[test]
    fn mul_matches_schoolbook_oracle() {
        let f = f256();
        // The documented spot value: alpha * alpha^7 reduces to
        // x^4 + x^3 + x^2 + 1 under x^8 + x^4 + x^3 + x^2 + 1.
        let expected = slow_mul(0x02, 0x80, DEFAULT_MODULUS_M8, 8);
        assert_eq!(expected, 0x1d);
        assert_eq!(f.mul(FieldElement(0x02), FieldElement(0x80)), FieldElement(0x1d));

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5000 {
            let a = rng.gen_range(0..256) as u16;
            let b = rng.gen_range(0..256) as u16;
            assert_eq!(
                f.mul(FieldElement(a), FieldElement(b)).0,
                slow_mul(a, b, DEFAULT_MODULUS_M8, 8)
            );
        }
    }

    #[test]
    fn mul_field_axioms_random_triples() {
        for spec in [f16(), FieldSpec::new(6, DEFAULT_MODULUS_M6).unwrap(), f256()] {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let q = spec.size() as u32;
            for _ in 0..2000 {
                let a = FieldElement(rng.gen_range(0..q) as u16);
                let b = FieldElement(rng.gen_range(0..q) as u16);
                let c = FieldElement(rng.gen_range(0..q) as u16);
                assert_eq!(spec.mul(a, b), spec.mul(b, a));
                assert_eq!(spec.mul(spec.mul(a, b), c), spec.mul(a, spec.mul(b, c)));
                assert_eq!(spec.mul(a, b + c), spec.mul(a, b) + spec.mul(a, c));
            }
        }
    }

    #[test]
    fn inv_exhaustive() {
        let f = f256();
        assert_eq!(f.inv(FieldElement::ONE).unwrap(), FieldElement::ONE);
        assert_eq!(f.inv(FieldElement::ZERO).unwrap_err(), FieldError::ZeroInverse);
        for a in f.elements().skip(1) {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), FieldElement::ONE);
            // Cross-check against a^(q-2).
            assert_eq!(inv, f.pow(a, f.size() - 2));
        }
    }

    #[test]
    fn pow_lagrange_and_small_exponents() {
        let f = f256();
        for a in f.elements() {
            assert_eq!(f.pow(a, 0), FieldElement::ONE);
            assert_eq!(f.pow(a, 2), f.mul(a, a));
            if !a.is_zero() {
                assert_eq!(f.pow(a, 255), FieldElement::ONE);
            }
        }
        assert_eq!(f.pow(FieldElement::ZERO, 5), FieldElement::ZERO);
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let f = f16();
        for a in f.elements() {
            let mut acc = FieldElement::ONE;
            for e in 0..20 {
                assert_eq!(f.pow(a, e), acc, "a={a} e={e}");
                acc = f.mul(acc, a);
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = f256();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let a = FieldElement(rng.gen_range(0..256) as u16);
            let b = FieldElement(rng.gen_range(0..256) as u16);
            assert_eq!(f.square(a + b), f.square(a) + f.square(b));
        }
    }

    #[test]
    fn rel_trace_lands_in_subfield() {
        let f = f256();
        assert_eq!(f.rel_trace(FieldElement::ZERO, 4).unwrap(), FieldElement::ZERO);
        for a in f.elements() {
            let t = f.rel_trace(a, 4).unwrap();
            assert_eq!(f.pow(t, 16), t, "trace of {a} not fixed by x -> x^16");
        }
    }

    #[test]
    fn rel_trace_is_linear() {
        let f = f256();
        for a in f.elements() {
            for b in [FieldElement(0x35), FieldElement(0xc1), FieldElement(0x01)] {
                let lhs = f.rel_trace(a + b, 4).unwrap();
                let rhs = f.rel_trace(a, 4).unwrap() + f.rel_trace(b, 4).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rel_norm_is_pow_17_and_multiplicative() {
        let f = f256();
        assert_eq!(f.rel_norm(FieldElement::ONE, 4).unwrap(), FieldElement::ONE);
        assert_eq!(f.norm_exponent(4).unwrap(), 17);
        for a in f.elements() {
            let n = f.rel_norm(a, 4).unwrap();
            assert_eq!(n, f.pow(a, 17));
            if !a.is_zero() {
                // Norm of a nonzero element is a nonzero subfield element.
                assert!(!n.is_zero());
                assert_eq!(f.pow(n, 16), n);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let a = FieldElement(rng.gen_range(0..256) as u16);
            let b = FieldElement(rng.gen_range(0..256) as u16);
            let lhs = f.rel_norm(f.mul(a, b), 4).unwrap();
            let rhs = f.mul(f.rel_norm(a, 4).unwrap(), f.rel_norm(b, 4).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn invalid_subfield_rejected() {
        let f = f256();
        assert_eq!(
            f.rel_trace(FieldElement::ONE, 3).unwrap_err(),
            FieldError::InvalidSubfield { m: 8, s: 3 }
        );
        assert_eq!(
            f.rel_norm(FieldElement::ONE, 5).unwrap_err(),
            FieldError::InvalidSubfield { m: 8, s: 5 }
        );
    }

    #[test]
    fn enumerate_is_ascending_and_complete() {
        let f1 = FieldSpec::new(1, 0b11).unwrap();
        let els: Vec<_> = f1.elements().collect();
        assert_eq!(els, vec![FieldElement(0), FieldElement(1)]);

        let f = f256();
        let els: Vec<_> = f.elements().collect();
        assert_eq!(els.len(), 256);
        assert_eq!(els[0], FieldElement(0x00));
        assert_eq!(els[1], FieldElement(0x01));
        assert_eq!(els[2], FieldElement(0x02));

        let f6 = FieldSpec::new(6, DEFAULT_MODULUS_M6).unwrap();
        assert_eq!(f6.elements().count(), 64);
    }

    #[test]
    fn nonprimitive_modulus_still_gets_tables() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but not primitive: x has
        // order 5. The generator scan must step past it.
        let f = FieldSpec::new(4, 0x1f).unwrap();
        assert_eq!(f.pow(FieldElement(0x2), 5), FieldElement::ONE);
        assert_ne!(f.primitive_element(), FieldElement(0x2));
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let a = rng.gen_range(0..16) as u16;
            let b = rng.gen_range(0..16) as u16;
            assert_eq!(
                f.mul(FieldElement(a), FieldElement(b)).0,
                slow_mul(a, b, 0x1f, 4)
            );
        }
    }

    #[test]
    fn element_range_check() {
        let f = f16();
        assert!(f.element(15).is_ok());
        assert_eq!(
            f.element(16).unwrap_err(),
            FieldError::ElementOutOfRange { value: 16, m: 4 }
        );
    }

    #[test]
    fn gf2_poly_rendering() {
        assert_eq!(gf2_poly_string(0x11d), "x^8 + x^4 + x^3 + x^2 + 1");
        assert_eq!(gf2_poly_string(0x5b), "x^6 + x^4 + x^3 + x + 1");
        assert_eq!(gf2_poly_string(0b10), "x");
        assert_eq!(gf2_poly_string(0), "0");
    }
}
