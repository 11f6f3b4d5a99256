//! Binary Goppa code construction.
//!
//! A [`GoppaSpec`] fixes the field, the Goppa polynomial g, and the ordered
//! support L (elements where g does not vanish). The code is the set of
//! binary vectors c with Σ c_i/(x - α_i) ≡ 0 mod g(x). Two independent
//! realizations are provided: the alternant parity-check matrix
//! H[j][i] = α_i^j · g(α_i)^{-1} (binary-expanded, nullspace taken), and a
//! literal membership oracle that sums the inverses (x - α_i)^{-1} mod g.

use std::sync::{Arc, OnceLock};
use thiserror::Error;

use crate::code::LinearCode;
use crate::field::{FieldElement, FieldSpec};
use crate::gf2::{binary_expand, BitMatrix, BitVec};
use crate::poly::{PolyError, Polynomial};

/// Errors from Goppa code construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GoppaError {
    #[error("the Goppa polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("the Goppa polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("the Goppa polynomial vanishes on the entire field")]
    EmptySupport,
    #[error("support element {0} repeats")]
    DuplicateSupport(FieldElement),
    #[error("g({0}) = 0: support elements must avoid the roots of g")]
    RootInSupport(FieldElement),
    #[error("support is empty")]
    NoSupportElements,
    #[error("vector length {got} does not match support size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// All field elements that are not roots of g, in ascending coordinate
/// order: the maximal valid support.
pub fn max_support(g: &Polynomial) -> Result<Vec<FieldElement>, GoppaError> {
    if g.is_zero() {
        return Err(GoppaError::ZeroPolynomial);
    }
    let support: Vec<FieldElement> = g
        .field()
        .elements()
        .filter(|&a| !g.eval(a).is_zero())
        .collect();
    if support.is_empty() {
        return Err(GoppaError::EmptySupport);
    }
    Ok(support)
}

/// A validated (field, g, L) triple defining the Goppa code C(L, g).
#[derive(Debug)]
pub struct GoppaSpec {
    g: Polynomial,
    support: Vec<FieldElement>,
    /// (x - α_i)^{-1} mod g per support position, built on first use by the
    /// definitional membership oracle.
    inverses: OnceLock<Vec<Polynomial>>,
}

impl GoppaSpec {
    /// Validate degree, distinctness, and that g avoids the support.
    pub fn new(g: Polynomial, support: Vec<FieldElement>) -> Result<GoppaSpec, GoppaError> {
        match g.degree() {
            None => return Err(GoppaError::ZeroPolynomial),
            Some(0) => return Err(GoppaError::ConstantPolynomial),
            Some(_) => {}
        }
        if support.is_empty() {
            return Err(GoppaError::NoSupportElements);
        }
        let mut seen = vec![false; g.field().size()];
        for &a in &support {
            if seen[a.0 as usize] {
                return Err(GoppaError::DuplicateSupport(a));
            }
            seen[a.0 as usize] = true;
            if g.eval(a).is_zero() {
                return Err(GoppaError::RootInSupport(a));
            }
        }
        Ok(GoppaSpec {
            g,
            support,
            inverses: OnceLock::new(),
        })
    }

    /// Spec with the maximal support.
    pub fn with_max_support(g: Polynomial) -> Result<GoppaSpec, GoppaError> {
        let support = max_support(&g)?;
        GoppaSpec::new(g, support)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.g.field()
    }

    pub fn goppa_poly(&self) -> &Polynomial {
        &self.g
    }

    pub fn support(&self) -> &[FieldElement] {
        &self.support
    }

    /// Code length n = |L|.
    pub fn n(&self) -> usize {
        self.support.len()
    }

    /// Goppa polynomial degree t.
    pub fn t(&self) -> usize {
        self.g.degree().expect("validated nonzero")
    }

    /// Binary parity-check matrix: the alternant form
    /// H[j][i] = α_i^j · g(α_i)^{-1} over F_{2^m} (t rows, n columns),
    /// expanded to mt rows over GF(2).
    pub fn parity_check(&self) -> BitMatrix {
        let f = self.field();
        let t = self.t();
        let n = self.n();
        let mut h = vec![vec![FieldElement::ZERO; n]; t];
        for (i, &alpha) in self.support.iter().enumerate() {
            let inv = f
                .inv(self.g.eval(alpha))
                .expect("support avoids roots of g");
            let mut value = inv;
            for row in h.iter_mut().take(t) {
                row[i] = value;
                value = f.mul(value, alpha);
            }
        }
        binary_expand(&h, f)
    }

    /// The code as the nullspace of the parity-check matrix, canonicalized.
    pub fn build_code(&self) -> LinearCode {
        LinearCode::from_parity_check(&self.parity_check())
    }

    fn support_inverses(&self) -> Result<&[Polynomial], GoppaError> {
        if let Some(cached) = self.inverses.get() {
            return Ok(cached);
        }
        let f = self.field();
        let mut inverses = Vec::with_capacity(self.n());
        for &alpha in &self.support {
            // x - α = x + α in characteristic 2.
            let lin = Polynomial::from_coeffs(f, vec![alpha, FieldElement::ONE]);
            let inv = lin.inverse_mod(&self.g).map_err(|e| match e {
                PolyError::NotInvertible => GoppaError::Internal(format!(
                    "(x + {alpha}) not invertible mod g despite g({alpha}) != 0"
                )),
                other => GoppaError::Internal(other.to_string()),
            })?;
            inverses.push(inv);
        }
        Ok(self.inverses.get_or_init(|| inverses))
    }

    /// Literal membership test: Σ_{i: c_i = 1} (x - α_i)^{-1} ≡ 0 mod g.
    pub fn definitional_member(&self, c: &BitVec) -> Result<bool, GoppaError> {
        if c.len() != self.n() {
            return Err(GoppaError::LengthMismatch {
                expected: self.n(),
                got: c.len(),
            });
        }
        let inverses = self.support_inverses()?;
        let mut sum = Polynomial::zero(self.field());
        for (i, inv) in inverses.iter().enumerate() {
            if c.get(i) {
                sum = sum.add(inv);
            }
        }
        Ok(sum.is_zero())
    }
}
