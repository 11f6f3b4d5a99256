//! Dense polynomials over F_{2^m}.
//!
//! Coefficients are stored low degree first with no trailing zeros, so the
//! zero polynomial is the empty vector and `degree()` is `None` for it.
//! Beyond ring arithmetic the module provides evaluation, root finding by
//! exhaustive scan, a Rabin-style irreducibility test, modular inverses,
//! relative trace/norm polynomial constructors, and a small expression
//! parser for input like `(x^17 + 1)^6`.

use std::fmt;
use std::sync::Arc;
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};

/// Largest exponent the expression parser accepts.
const MAX_PARSED_EXPONENT: u64 = 10_000;

/// Errors from polynomial arithmetic and parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not invertible modulo the given modulus")]
    NotInvertible,
    #[error("roots of the zero polynomial are undefined")]
    ZeroPolynomialRoots,
    #[error("irreducibility is undefined for constant polynomials")]
    ConstantIrreducibility,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("parse error at byte {pos}: exponent {value} exceeds limit {MAX_PARSED_EXPONENT}")]
    ExponentTooLarge { pos: usize, value: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A polynomial over a fixed F_{2^m}.
///
/// Invariant: `coeffs` is empty (the zero polynomial) or ends in a nonzero
/// coefficient; `coeffs[i]` is the coefficient of x^i.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Arc<FieldSpec>,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn zero(field: &Arc<FieldSpec>) -> Polynomial {
        Polynomial {
            field: Arc::clone(field),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Arc<FieldSpec>) -> Polynomial {
        Polynomial::constant(field, FieldElement::ONE)
    }

    pub fn constant(field: &Arc<FieldSpec>, c: FieldElement) -> Polynomial {
        Polynomial::from_coeffs(field, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: &Arc<FieldSpec>) -> Polynomial {
        Polynomial::monomial(field, FieldElement::ONE, 1)
    }

    /// c · x^deg.
    pub fn monomial(field: &Arc<FieldSpec>, c: FieldElement, deg: usize) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(field);
        }
        let mut coeffs = vec![FieldElement::ZERO; deg + 1];
        coeffs[deg] = c;
        Polynomial {
            field: Arc::clone(field),
            coeffs,
        }
    }

    /// Build from coefficients (index = degree), trimming trailing zeros.
    pub fn from_coeffs(field: &Arc<FieldSpec>, mut coeffs: Vec<FieldElement>) -> Polynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the stored degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    fn assert_same_field(&self, other: &Polynomial) {
        assert!(
            self.field == other.field,
            "polynomials over different fields: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_field(other);
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (i, &c) in short.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Polynomial::from_coeffs(&self.field, coeffs)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_field(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let f = &self.field;
        let mut coeffs = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += f.mul(a, b);
            }
        }
        Polynomial::from_coeffs(f, coeffs)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: FieldElement) -> Polynomial {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&a| f.mul(a, c)).collect();
        Polynomial::from_coeffs(f, coeffs)
    }

    /// self^e by square-and-multiply; 0^0 = 1.
    pub fn pow(&self, e: usize) -> Polynomial {
        let mut result = Polynomial::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Quotient and remainder with deg(rem) < deg(divisor).
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        self.assert_same_field(divisor);
        let f = &self.field;
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let da = match self.degree() {
            Some(d) if d >= dd => d,
            _ => return Ok((Polynomial::zero(f), self.clone())),
        };
        let lc_inv = f.inv(divisor.leading_coeff().unwrap()).expect("nonzero leading coeff");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FieldElement::ZERO; da - dd + 1];
        for i in (dd..=da).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lc_inv);
            quot[i - dd] = factor;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] += f.mul(factor, dc);
            }
        }
        Ok((
            Polynomial::from_coeffs(f, quot),
            Polynomial::from_coeffs(f, rem),
        ))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial, PolyError> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Divide out the leading coefficient; zero stays zero.
    pub fn make_monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc == FieldElement::ONE => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc).expect("nonzero leading coeff")),
        }
    }

    /// Formal derivative; in characteristic 2 even-degree terms vanish.
    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { FieldElement::ZERO })
            .collect();
        Polynomial::from_coeffs(&self.field, coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, a: FieldElement) -> FieldElement {
        let f = &self.field;
        let mut acc = FieldElement::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.mul(acc, a) + c;
        }
        acc
    }

    /// All roots in the field, ascending by coordinate value, by exhaustive
    /// evaluation over the 2^m elements.
    pub fn roots_in_field(&self) -> Result<Vec<FieldElement>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomialRoots);
        }
        Ok(self
            .field
            .elements()
            .filter(|&a| self.eval(a).is_zero())
            .collect())
    }

    /// Rabin-style irreducibility over F_{2^m}: f of degree d is irreducible
    /// iff gcd(f, x^{q^i} - x) = 1 for 1 <= i <= d/2, since any proper
    /// factorization contains an irreducible factor of degree at most d/2 and
    /// every irreducible of degree i divides x^{q^i} - x.
    pub fn is_irreducible(&self) -> Result<bool, PolyError> {
        let d = match self.degree() {
            None | Some(0) => return Err(PolyError::ConstantIrreducibility),
            Some(d) => d,
        };
        if d == 1 {
            return Ok(true);
        }
        let f = &self.field;
        let x = Polynomial::x(f);
        let mut r = x.rem(self)?;
        for _ in 1..=d / 2 {
            // r <- r^q mod self, one Frobenius application per squaring.
            for _ in 0..f.degree() {
                r = r.mul(&r).rem(self)?;
            }
            // Characteristic 2: r - x = r + x.
            let g = self.gcd(&r.add(&x));
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Inverse of self modulo `modulus`, via the extended Euclidean
    /// algorithm. Fails when gcd(self, modulus) is not constant.
    pub fn inverse_mod(&self, modulus: &Polynomial) -> Result<Polynomial, PolyError> {
        self.assert_same_field(modulus);
        if modulus.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let f = &self.field;
        let mut r0 = modulus.clone();
        let mut r1 = self.rem(modulus)?;
        let mut t0 = Polynomial::zero(f);
        let mut t1 = Polynomial::one(f);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let t = t0.add(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != Some(0) {
            return Err(PolyError::NotInvertible);
        }
        let scale = f.inv(r0.leading_coeff().unwrap()).expect("nonzero gcd constant");
        t0.scale(scale).rem(modulus)
    }

    /// The relative trace polynomial x + x^{2^s} + x^{2^{2s}} + ... with
    /// m/s terms.
    pub fn trace_poly(field: &Arc<FieldSpec>, s: u32) -> Result<Polynomial, PolyError> {
        field.check_subfield(s)?;
        let m = field.degree();
        let mut coeffs = vec![FieldElement::ZERO; 1 << (m - s)];
        coeffs.push(FieldElement::ZERO);
        for i in 0..m / s {
            coeffs[1usize << (i * s)] = FieldElement::ONE;
        }
        Ok(Polynomial::from_coeffs(field, coeffs))
    }

    /// The relative norm polynomial x^{(2^m - 1)/(2^s - 1)}.
    pub fn norm_poly(field: &Arc<FieldSpec>, s: u32) -> Result<Polynomial, PolyError> {
        let e = field.norm_exponent(s)?;
        Ok(Polynomial::monomial(field, FieldElement::ONE, e))
    }

    /// Parse an expression like `(x^17 + 1)^6` or `0x1d*x^2 + x + 1`.
    ///
    /// Grammar: expr := term ('+' term)*; term := factor ('*'? factor)*;
    /// factor := atom ('^' uint)?; atom := 'x' | uint | '0x' hex | '(' expr ')'.
    /// Decimal literals reduce mod 2; hex literals are field coordinates.
    /// The '*' is optional before 'x' or '('. Whitespace is insignificant.
    pub fn parse(field: &Arc<FieldSpec>, text: &str) -> Result<Polynomial, PolyError> {
        let mut p = Parser {
            field,
            bytes: text.as_bytes(),
            pos: 0,
        };
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(PolyError::Parse {
                pos: p.pos,
                msg: format!("unexpected character {:?}", p.bytes[p.pos] as char),
            });
        }
        Ok(poly)
    }

    /// Canonical rendering, descending degree, e.g. `x^17 + 1` or
    /// `0x1d*x^2 + x`. Round-trips through [`Polynomial::parse`].
    pub fn render(&self) -> String {
        let deg = match self.degree() {
            None => return "0".to_string(),
            Some(d) => d,
        };
        let mut terms = Vec::new();
        for j in (0..=deg).rev() {
            let c = self.coeff(j);
            if c.is_zero() {
                continue;
            }
            let xpart = match j {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{j}"),
            };
            let term = if j == 0 {
                if c == FieldElement::ONE {
                    "1".to_string()
                } else {
                    format!("{:#x}", c.0)
                }
            } else if c == FieldElement::ONE {
                xpart
            } else {
                format!("{:#x}*{}", c.0, xpart)
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

/// Recursive-descent parser over a byte cursor.
struct Parser<'a> {
    field: &'a Arc<FieldSpec>,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, pos: usize, msg: impl Into<String>) -> PolyError {
        PolyError::Parse {
            pos,
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                // Implicit product, as in "2x" or "(x+1)(x+1)".
                Some(b'x') | Some(b'(') => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let e = self.uint()?;
            if e > MAX_PARSED_EXPONENT {
                return Err(PolyError::ExponentTooLarge { pos: at, value: e });
            }
            return Ok(base.pow(e as usize));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Polynomial::x(self.field))
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error(open, "unclosed '('"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'0')
                if matches!(self.bytes.get(self.pos + 1), Some(b'x') | Some(b'X'))
                    && self
                        .bytes
                        .get(self.pos + 2)
                        .is_some_and(|b| b.is_ascii_hexdigit()) =>
            {
                let at = self.pos;
                self.pos += 2;
                let mut value: u32 = 0;
                while let Some(b) = self.bytes.get(self.pos).copied() {
                    if !b.is_ascii_hexdigit() {
                        break;
                    }
                    value = value
                        .checked_mul(16)
                        .and_then(|v| v.checked_add((b as char).to_digit(16).unwrap()))
                        .ok_or_else(|| self.error(at, "hex literal overflows"))?;
                    self.pos += 1;
                }
                let c = self.field.element(value)?;
                Ok(Polynomial::constant(self.field, c))
            }
            Some(b) if b.is_ascii_digit() => {
                // Decimal literal: only its parity matters over GF(2).
                let mut last = 0u8;
                while let Some(b) = self.bytes.get(self.pos).copied() {
                    if !b.is_ascii_digit() {
                        break;
                    }
                    last = b - b'0';
                    self.pos += 1;
                }
                let c = if last % 2 == 1 {
                    FieldElement::ONE
                } else {
                    FieldElement::ZERO
                };
                Ok(Polynomial::constant(self.field, c))
            }
            Some(b) => Err(self.error(
                self.pos,
                format!("expected 'x', a number, or '(', found {:?}", b as char),
            )),
            None => Err(self.error(self.bytes.len(), "unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<u64, PolyError> {
        let at = self.pos;
        let mut value: u64 = 0;
        let mut any = false;
        while let Some(b) = self.bytes.get(self.pos).copied() {
            if !b.is_ascii_digit() {
                break;
            }
            any = true;
            value = value.saturating_mul(10).saturating_add((b - b'0') as u64);
            self.pos += 1;
        }
        if !any {
            return Err(self.error(at, "expected an integer"));
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{DEFAULT_MODULUS_M6, DEFAULT_MODULUS_M8};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn f256() -> Arc<FieldSpec> {
        FieldSpec::new(8, DEFAULT_MODULUS_M8).unwrap()
    }

    fn f16() -> Arc<FieldSpec> {
        FieldSpec::new(4, 0x13).unwrap()
    }

    fn random_poly(field: &Arc<FieldSpec>, max_deg: usize, rng: &mut impl Rng) -> Polynomial {
        let deg = rng.gen_range(0..=max_deg);
        let q = field.size() as u32;
        let coeffs = (0..=deg)
            .map(|_| FieldElement(rng.gen_range(0..q) as u16))
            .collect();
        Polynomial::from_coeffs(field, coeffs)
    }

    fn parse(field: &Arc<FieldSpec>, s: &str) -> Polynomial {
        Polynomial::parse(field, s).unwrap()
    }

    #[test]
    fn canonical_form_trims_trailing_zeros() {
        let f = f16();
        let p = Polynomial::from_coeffs(
            &f,
            vec![FieldElement(3), FieldElement::ZERO, FieldElement::ZERO],
        );
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.coeffs().len(), 1);
        assert!(Polynomial::from_coeffs(&f, vec![FieldElement::ZERO; 4]).is_zero());
        assert_eq!(Polynomial::zero(&f).degree(), None);
    }

    #[test]
    fn add_is_characteristic_two() {
        let f = f256();
        let x = Polynomial::x(&f);
        assert!(x.add(&x).is_zero());
        assert_eq!(parse(&f, "x + x"), Polynomial::zero(&f));
    }

    #[test]
    fn ring_laws_random_triples() {
        for field in [f16(), FieldSpec::new(6, DEFAULT_MODULUS_M6).unwrap(), f256()] {
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            for _ in 0..200 {
                let a = random_poly(&field, 8, &mut rng);
                let b = random_poly(&field, 8, &mut rng);
                let c = random_poly(&field, 8, &mut rng);
                assert_eq!(a.mul(&b), b.mul(&a));
                assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                if !a.is_zero() && !b.is_zero() {
                    assert_eq!(
                        a.mul(&b).degree(),
                        Some(a.degree().unwrap() + b.degree().unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn mul_by_one_is_identity() {
        let f = f256();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = random_poly(&f, 20, &mut rng);
            assert_eq!(a.mul(&Polynomial::one(&f)), a);
        }
    }

    #[test]
    fn divmod_reconstructs_and_bounds_remainder() {
        let f = f256();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let a = random_poly(&f, 24, &mut rng);
            let mut b = random_poly(&f, 10, &mut rng);
            if b.is_zero() {
                b = Polynomial::one(&f);
            }
            let (q, r) = a.divmod(&b).unwrap();
            assert_eq!(q.mul(&b).add(&r), a);
            if !r.is_zero() {
                assert!(r.degree().unwrap() < b.degree().unwrap());
            }
        }
        let a = random_poly(&f, 5, &mut rng);
        assert_eq!(
            a.divmod(&Polynomial::zero(&f)).unwrap_err(),
            PolyError::DivisionByZero
        );
    }

    #[test]
    fn product_reduces_to_zero_mod_factor() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let a = random_poly(&f, 8, &mut rng);
            let mut h = random_poly(&f, 6, &mut rng);
            if h.is_zero() {
                h = Polynomial::x(&f);
            }
            assert!(a.mul(&h).rem(&h).unwrap().is_zero());
        }
    }

    #[test]
    fn derivative_drops_even_terms() {
        let f = f256();
        let g = parse(&f, "x^17 + 1");
        assert_eq!(g.derivative(), parse(&f, "x^16"));
        assert!(parse(&f, "x^16 + x^2 + 1").derivative().is_zero());
    }

    #[test]
    fn derivative_product_rule() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let a = random_poly(&f, 8, &mut rng);
            let b = random_poly(&f, 8, &mut rng);
            let lhs = a.mul(&b).derivative();
            let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn frobenius_on_polynomials() {
        let f = f256();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let a = random_poly(&f, 10, &mut rng);
            let b = random_poly(&f, 10, &mut rng);
            assert_eq!(a.add(&b).pow(2), a.pow(2).add(&b.pow(2)));
        }
    }

    #[test]
    fn gcd_of_seventeenth_roots_poly_and_derivative() {
        // x^17 + 1 = x * x^16 + 1, so Euclid terminates immediately with 1:
        // the polynomial is squarefree.
        let f = f256();
        let g = parse(&f, "x^17 + 1");
        assert_eq!(g.gcd(&parse(&f, "x^16")), Polynomial::one(&f));
        assert_eq!(g.gcd(&g.derivative()), Polynomial::one(&f));
    }

    #[test]
    fn gcd_is_monic_and_divides() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let a = random_poly(&f, 5, &mut rng);
            let b = random_poly(&f, 5, &mut rng);
            let mut h = random_poly(&f, 3, &mut rng);
            if h.is_zero() {
                h = parse(&f, "x + 1");
            }
            let g = a.mul(&h).gcd(&b.mul(&h));
            if g.is_zero() {
                continue;
            }
            assert_eq!(g.leading_coeff(), Some(FieldElement::ONE));
            // h divides both inputs, so h divides the gcd.
            assert!(g.rem(&h.make_monic()).unwrap().is_zero() || g.degree() >= h.degree());
            assert!(a.mul(&h).rem(&g).unwrap().is_zero());
            assert!(b.mul(&h).rem(&g).unwrap().is_zero());
        }
        assert!(Polynomial::zero(&f).gcd(&Polynomial::zero(&f)).is_zero());
    }

    #[test]
    fn eval_known_points() {
        let f = f256();
        assert_eq!(parse(&f, "x^17 + 1").eval(FieldElement::ONE), FieldElement::ZERO);
        assert_eq!(parse(&f, "x^16 + x").eval(FieldElement::ZERO), FieldElement::ZERO);
    }

    #[test]
    fn eval_matches_remainder_theorem() {
        let f = f256();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..300 {
            let p = random_poly(&f, 15, &mut rng);
            let a = FieldElement(rng.gen_range(0..256) as u16);
            // x - a = x + a in characteristic 2.
            let lin = Polynomial::from_coeffs(&f, vec![a, FieldElement::ONE]);
            assert_eq!(p.eval(a), p.rem(&lin).unwrap().coeff(0));
        }
    }

    #[test]
    fn root_counts_fix_the_support_sizes() {
        let f = f256();
        let cases = [("x^17 + 1", 17usize), ("x^16 + x", 16), ("x^15 + 1", 15)];
        for (text, count) in cases {
            let roots = parse(&f, text).roots_in_field().unwrap();
            assert_eq!(roots.len(), count, "{text}");
            let p = parse(&f, text);
            for &r in &roots {
                assert_eq!(p.eval(r), FieldElement::ZERO);
            }
            // Ascending coordinate order.
            assert!(roots.windows(2).all(|w| w[0] < w[1]));
        }
        // The roots of x^16 + x are exactly the subfield fixed by x -> x^16.
        let sub: Vec<_> = f.elements().filter(|&a| f.pow(a, 16) == a).collect();
        assert_eq!(parse(&f, "x^16 + x").roots_in_field().unwrap(), sub);
        // The roots of x^17 + 1 are the 17th roots of unity.
        for r in parse(&f, "x^17 + 1").roots_in_field().unwrap() {
            assert_eq!(f.pow(r, 17), FieldElement::ONE);
        }
        assert_eq!(
            Polynomial::zero(&f).roots_in_field().unwrap_err(),
            PolyError::ZeroPolynomialRoots
        );
    }

    #[test]
    fn linear_polynomials_are_irreducible() {
        let f = f256();
        for a in [0x00u16, 0x01, 0x35, 0xff] {
            let p = Polynomial::from_coeffs(&f, vec![FieldElement(a), FieldElement::ONE]);
            assert!(p.is_irreducible().unwrap());
        }
        assert_eq!(
            Polynomial::one(&f).is_irreducible().unwrap_err(),
            PolyError::ConstantIrreducibility
        );
        assert_eq!(
            Polynomial::zero(&f).is_irreducible().unwrap_err(),
            PolyError::ConstantIrreducibility
        );
    }

    #[test]
    fn split_polynomials_are_reducible() {
        let f = f256();
        assert!(!parse(&f, "x^17 + 1").is_irreducible().unwrap());
        assert!(!parse(&f, "x^16 + x").is_irreducible().unwrap());
        assert!(!parse(&f, "x^15 + 1").is_irreducible().unwrap());
    }

    #[test]
    fn quadratic_irreducibility_matches_root_search() {
        // x^2 + x + c over F_{2^8} factors iff it has a root, which happens
        // iff the absolute trace of c is 0. Cross-check against brute force
        // over all 256 monic linear divisors.
        let f = f256();
        for c in f.elements() {
            let p = Polynomial::from_coeffs(&f, vec![c, FieldElement::ONE, FieldElement::ONE]);
            let has_linear_factor = f.elements().any(|a| {
                let lin = Polynomial::from_coeffs(&f, vec![a, FieldElement::ONE]);
                p.rem(&lin).unwrap().is_zero()
            });
            let trace = f.rel_trace(c, 1).unwrap();
            assert_eq!(p.is_irreducible().unwrap(), !has_linear_factor);
            assert_eq!(has_linear_factor, trace == FieldElement::ZERO);
        }
    }

    /// Brute-force reducibility for small degrees: trial division by every
    /// monic polynomial of degree 1..=deg/2, enumerated by base-q encoding
    /// of the non-leading coefficients.
    fn brute_force_reducible(p: &Polynomial) -> bool {
        let f = p.field();
        let d = p.degree().unwrap();
        let q = f.size() as u64;
        for dd in 1..=d / 2 {
            for mut code in 0..q.pow(dd as u32) {
                let mut coeffs = Vec::with_capacity(dd + 1);
                for _ in 0..dd {
                    coeffs.push(FieldElement((code % q) as u16));
                    code /= q;
                }
                coeffs.push(FieldElement::ONE);
                let div = Polynomial::from_coeffs(f, coeffs);
                if p.rem(&div).unwrap().is_zero() {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn irreducibility_matches_brute_force_over_f16() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let mut checked = 0;
        for _ in 0..400 {
            let mut p = random_poly(&f, 4, &mut rng);
            if p.degree().map_or(true, |d| d == 0) {
                continue;
            }
            p = p.make_monic();
            assert_eq!(
                p.is_irreducible().unwrap(),
                !brute_force_reducible(&p),
                "{p}"
            );
            checked += 1;
        }
        assert!(checked > 100);
    }

    /// Brute-force squarefree test: no monic h of degree >= 1 has h^2 | f.
    fn brute_force_squarefree(p: &Polynomial) -> bool {
        let f = p.field();
        let d = p.degree().unwrap();
        let q = f.size() as u32;
        for dd in 1..=d / 2 {
            let count = (q as u64).pow(dd as u32);
            for mut code in 0..count {
                let mut coeffs = Vec::with_capacity(dd + 1);
                for _ in 0..dd {
                    coeffs.push(FieldElement((code % q as u64) as u16));
                    code /= q as u64;
                }
                coeffs.push(FieldElement::ONE);
                let h = Polynomial::from_coeffs(f, coeffs);
                if p.rem(&h.pow(2)).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn squarefree_iff_coprime_with_derivative() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let mut checked = 0;
        for _ in 0..60 {
            let p = random_poly(&f, 6, &mut rng);
            if p.degree().map_or(true, |d| d < 2) {
                continue;
            }
            let coprime = p.gcd(&p.derivative()).degree() == Some(0);
            assert_eq!(coprime, brute_force_squarefree(&p), "{p}");
            checked += 1;
        }
        assert!(checked > 30);
    }

    #[test]
    fn trace_and_norm_polynomials() {
        let f = f256();
        let tr = Polynomial::trace_poly(&f, 4).unwrap();
        assert_eq!(tr, parse(&f, "x^16 + x"));

        let norm = Polynomial::norm_poly(&f, 4).unwrap();
        assert_eq!(norm.add(&Polynomial::one(&f)), parse(&f, "x^17 + 1"));

        let (quot, rem) = tr.divmod(&Polynomial::x(&f)).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, parse(&f, "x^15 + 1"));

        // The polynomials agree with the field maps pointwise.
        for a in f.elements() {
            assert_eq!(tr.eval(a), f.rel_trace(a, 4).unwrap());
            assert_eq!(norm.eval(a), f.rel_norm(a, 4).unwrap());
        }

        assert!(matches!(
            Polynomial::trace_poly(&f, 3).unwrap_err(),
            PolyError::Field(FieldError::InvalidSubfield { m: 8, s: 3 })
        ));
    }

    #[test]
    fn inverse_mod_round_trips() {
        let f = f256();
        let g = parse(&f, "(x^17 + 1)^6");
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..60 {
            // x + a is invertible mod g exactly when a is not a root of g.
            let a = FieldElement(rng.gen_range(0..256) as u16);
            let lin = Polynomial::from_coeffs(&f, vec![a, FieldElement::ONE]);
            match lin.inverse_mod(&g) {
                Ok(inv) => {
                    assert_eq!(lin.mul(&inv).rem(&g).unwrap(), Polynomial::one(&f));
                    assert!(!g.eval(a).is_zero());
                }
                Err(PolyError::NotInvertible) => assert!(g.eval(a).is_zero()),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn parser_builds_the_goppa_polynomials() {
        let f = f256();
        let g1 = parse(&f, "(x^17 + 1)^6");
        assert_eq!(g1.degree(), Some(102));
        let base = parse(&f, "x^17 + 1");
        let mut oracle = Polynomial::one(&f);
        for _ in 0..6 {
            oracle = oracle.mul(&base);
        }
        assert_eq!(g1, oracle);
        assert_eq!(g1, base.pow(6));

        let g2 = parse(&f, "(x^16 + x)^6");
        assert_eq!(g2.degree(), Some(96));
        let base2 = parse(&f, "x^16 + x");
        let mut oracle2 = Polynomial::one(&f);
        for _ in 0..6 {
            oracle2 = oracle2.mul(&base2);
        }
        assert_eq!(g2, oracle2);

        assert_eq!(parse(&f, "(x^15 + 1)^6").degree(), Some(90));
    }

    #[test]
    fn parser_literals_and_implicit_product() {
        let f = f256();
        // Decimal literals reduce mod 2, so 2x^3 vanishes and 3 is 1.
        assert_eq!(parse(&f, "2x^3 + 3"), Polynomial::one(&f));
        assert_eq!(parse(&f, "0x1d*x^2"), Polynomial::monomial(&f, FieldElement(0x1d), 2));
        assert_eq!(parse(&f, "(x+1)(x+1)"), parse(&f, "x^2 + 1"));
        assert_eq!(parse(&f, "  x ^ 2  +  1 "), parse(&f, "x^2+1"));
        assert_eq!(parse(&f, "0"), Polynomial::zero(&f));
    }

    #[test]
    fn parser_errors_carry_positions() {
        let f = f256();
        match Polynomial::parse(&f, "x^").unwrap_err() {
            PolyError::Parse { pos, .. } => assert_eq!(pos, 2),
            e => panic!("unexpected {e}"),
        }
        match Polynomial::parse(&f, "x^20000").unwrap_err() {
            PolyError::ExponentTooLarge { pos, value } => {
                assert_eq!(pos, 2);
                assert_eq!(value, 20000);
            }
            e => panic!("unexpected {e}"),
        }
        match Polynomial::parse(&f, "(x + 1").unwrap_err() {
            PolyError::Parse { pos, .. } => assert_eq!(pos, 0),
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(
            Polynomial::parse(&f, "y"),
            Err(PolyError::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            Polynomial::parse(&f, ""),
            Err(PolyError::Parse { .. })
        ));
        // Hex literal out of field range.
        assert!(matches!(
            Polynomial::parse(&f, "0x100"),
            Err(PolyError::Field(FieldError::ElementOutOfRange { .. }))
        ));
    }

    #[test]
    fn render_parse_round_trip() {
        let f256 = f256();
        assert_eq!(parse(&f256, "x^17+1").render(), "x^17 + 1");
        assert_eq!(Polynomial::zero(&f256).render(), "0");
        assert_eq!(Polynomial::one(&f256).render(), "1");
        assert_eq!(
            Polynomial::monomial(&f256, FieldElement(0x1d), 1).render(),
            "0x1d*x"
        );
        for field in [f16(), f256] {
            let mut rng = ChaCha8Rng::seed_from_u64(22);
            for _ in 0..200 {
                let p = random_poly(&field, 110, &mut rng);
                let rendered = p.render();
                assert_eq!(parse(&field, &rendered), p, "{rendered}");
            }
        }
    }
}
