//! Exact scalar arithmetic over the rationals and quadratic extensions.
//!
//! A [`NumberField`] is either the rationals or a degree-two extension
//! `Q[w]/(w^2 + c1*w + c0)` given by a monic minimal polynomial. Elements
//! are [`Scalar`]s `a + b*w` with arbitrary-precision rational
//! coefficients; all arithmetic is exact and closed, equality is
//! decidable, and nonzero elements are invertible.
//!
//! The extension used for equilateral triangles is [`NumberField::eisenstein`],
//! generated by `w` with `w^2 = w - 1`. There the squared complex modulus
//! `|a + b*w|^2 = a^2 + a*b + b^2` is a nonnegative rational, zero only at
//! the zero element.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

/// Returns true if `r` is the square of a rational number.
fn is_rational_square(r: &BigRational) -> bool {
    if r.is_negative() {
        return false;
    }
    let is_int_square = |n: &BigInt| {
        let root = n.sqrt();
        &root * &root == *n
    };
    is_int_square(r.numer()) && is_int_square(r.denom())
}

/// A number field of degree one (the rationals) or two.
///
/// Degree-two fields are `Q[w]/(w^2 + c1*w + c0)`; construction rejects
/// reducible minimal polynomials, so every nonzero element has an inverse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NumberField {
    /// `None` for the rationals, `Some((c1, c0))` for `w^2 + c1*w + c0 = 0`.
    quad: Option<(BigRational, BigRational)>,
}

impl NumberField {
    /// The field of rationals (degree 1).
    pub fn rational() -> Self {
        NumberField { quad: None }
    }

    /// The quadratic field `Q[w]/(w^2 + c1*w + c0)`.
    pub fn quadratic(c1: BigRational, c0: BigRational) -> Result<Self, AlgebraError> {
        // Reducible over Q iff the discriminant is a rational square.
        let disc = &c1 * &c1 - BigRational::from_integer(4.into()) * &c0;
        if is_rational_square(&disc) {
            return Err(AlgebraError::ReducibleMinimalPolynomial);
        }
        Ok(NumberField { quad: Some((c1, c0)) })
    }

    /// The field `Q(w)` with `w^2 = w - 1`, i.e. minimal polynomial
    /// `w^2 - w + 1`. Its generator is a primitive sixth root of unity,
    /// the apex of the equilateral triangle on `0, 1`.
    pub fn eisenstein() -> Self {
        NumberField {
            quad: Some((
                -BigRational::one(),
                BigRational::one(),
            )),
        }
    }

    /// Degree of the field over the rationals (1 or 2).
    pub fn degree(&self) -> usize {
        if self.quad.is_some() {
            2
        } else {
            1
        }
    }

    pub fn is_rational(&self) -> bool {
        self.quad.is_none()
    }

    /// Minimal-polynomial coefficients `(c1, c0)` for degree-two fields.
    pub fn quad_coeffs(&self) -> Option<(&BigRational, &BigRational)> {
        self.quad.as_ref().map(|(c1, c0)| (c1, c0))
    }

    /// Discriminant `c1^2 - 4*c0` of the minimal polynomial; `None` over Q.
    pub fn discriminant(&self) -> Option<BigRational> {
        self.quad.as_ref().map(|(c1, c0)| {
            c1 * c1 - BigRational::from_integer(4.into()) * c0
        })
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_rational(BigRational::zero(), self.clone())
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_rational(BigRational::one(), self.clone())
    }

    /// The generator `w`; an error over the rationals.
    pub fn generator(&self) -> Result<Scalar, AlgebraError> {
        if self.is_rational() {
            return Err(AlgebraError::NoGenerator);
        }
        Ok(Scalar::new(BigRational::zero(), BigRational::one(), self.clone()))
    }

    pub fn integer(&self, n: i64) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(n.into()), self.clone())
    }
}

/// An exact element `a + b*w` of a [`NumberField`]; over the rationals the
/// `w`-coefficient is identically zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    field: NumberField,
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, field: NumberField) -> Self {
        assert!(
            !(field.is_rational() && !b.is_zero()),
            "rational field admits no generator coefficient"
        );
        Scalar { a, b, field }
    }

    pub fn from_rational(a: BigRational, field: NumberField) -> Self {
        Scalar { a, b: BigRational::zero(), field }
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Generator coefficient `b`.
    pub fn generator_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert_eq!(self.field, other.field, "scalar field mismatch");
    }

    /// Multiplicative inverse; `None` for zero.
    ///
    /// Over a quadratic field, `(a + b*w)(a - b*c1 - b*w) = a^2 - a*b*c1 + b^2*c0`
    /// is the field norm, a nonzero rational for nonzero arguments since the
    /// minimal polynomial is irreducible.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match &self.field.quad {
            None => Some(Scalar::from_rational(self.a.recip(), self.field.clone())),
            Some((c1, c0)) => {
                let norm = &self.a * &self.a - &self.a * &self.b * c1 + &self.b * &self.b * c0;
                debug_assert!(!norm.is_zero());
                let inv_norm = norm.recip();
                let a = (&self.a - &self.b * c1) * &inv_norm;
                let b = -&self.b * inv_norm;
                Some(Scalar::new(a, b, self.field.clone()))
            }
        }
    }

    /// Squared length used by the decay certificates.
    ///
    /// Over Q this is `a^2`. Over a quadratic field with negative
    /// discriminant (a complex embedding, e.g. the equilateral field) it is
    /// the squared complex modulus `a^2 - a*b*c1 + b^2*c0`, a rational.
    /// For positive discriminant it falls back to the coefficient norm
    /// `a^2 + b^2`; no preset relies on that case.
    pub fn norm_sq(&self) -> BigRational {
        match &self.field.quad {
            None => &self.a * &self.a,
            Some((c1, c0)) => {
                let disc = c1 * c1 - BigRational::from_integer(4.into()) * c0;
                if disc.is_negative() {
                    &self.a * &self.a - &self.a * &self.b * c1 + &self.b * &self.b * c0
                } else {
                    &self.a * &self.a + &self.b * &self.b
                }
            }
        }
    }

    pub fn scale(&self, r: &BigRational) -> Scalar {
        Scalar {
            a: &self.a * r,
            b: &self.b * r,
            field: self.field.clone(),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        Scalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            field: self.field.clone(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        Scalar {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            field: self.field.clone(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -&self.a,
            b: -&self.b,
            field: self.field.clone(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    /// `(a + b*w)(c + d*w)` with `w^2 = -c1*w - c0`.
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match &self.field.quad {
            None => Scalar {
                a: &self.a * &rhs.a,
                b: BigRational::zero(),
                field: self.field.clone(),
            },
            Some((c1, c0)) => {
                let bd = &self.b * &rhs.b;
                let a = &self.a * &rhs.a - &bd * c0;
                let b = &self.a * &rhs.b + &self.b * &rhs.a - bd * c1;
                Scalar { a, b, field: self.field.clone() }
            }
        }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Canonical encoding: `p/q` or `p/q+r/s*w`, with `/1` suppressed and a
    /// bare `w` for unit generator coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return fmt_rational(&self.a, f);
        }
        if !self.a.is_zero() {
            fmt_rational(&self.a, f)?;
            if !self.b.is_negative() {
                write!(f, "+")?;
            }
        } else if self.b.is_negative() {
            // sign comes from the coefficient below
        }
        let b = &self.b;
        if b.is_one() {
            write!(f, "w")
        } else if (-b).is_one() {
            write!(f, "-w")
        } else {
            fmt_rational(b, f)?;
            write!(f, "*w")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn eisenstein_generator_squares_to_w_minus_one() {
        let k = NumberField::eisenstein();
        let w = k.generator().unwrap();
        let w2 = &w * &w;
        let expected = &w - &k.one();
        assert_eq!(w2, expected);
    }

    #[test]
    fn inverse_of_one_minus_w_is_w() {
        // (1 - w) * w = w - w^2 = w - (w - 1) = 1.
        let k = NumberField::eisenstein();
        let one_minus_w = &k.one() - &k.generator().unwrap();
        let inv = one_minus_w.inverse().unwrap();
        assert_eq!(inv, k.generator().unwrap());
        assert!((&one_minus_w * &inv).is_one());
    }

    #[test]
    fn rational_inverse() {
        let q = NumberField::rational();
        let x = Scalar::from_rational(rat(-3, 2), q.clone());
        let inv = x.inverse().unwrap();
        assert_eq!(inv, Scalar::from_rational(rat(-2, 3), q));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(NumberField::rational().zero().inverse().is_none());
        assert!(NumberField::eisenstein().zero().inverse().is_none());
    }

    #[test]
    fn eisenstein_norm_is_positive_definite() {
        let k = NumberField::eisenstein();
        // |a + b*w|^2 = a^2 + a*b + b^2
        let x = Scalar::new(rat(2, 1), rat(-3, 1), k.clone());
        assert_eq!(x.norm_sq(), rat(4 - 6 + 9, 1));
        assert_eq!(k.zero().norm_sq(), rat(0, 1));
        // nonzero element, nonzero norm
        let y = Scalar::new(rat(1, 2), rat(-1, 2), k);
        assert!(y.norm_sq() > rat(0, 1));
    }

    #[test]
    fn reducible_polynomial_rejected() {
        // w^2 - 1 factors over Q.
        let err = NumberField::quadratic(rat(0, 1), rat(-1, 1));
        assert!(matches!(err, Err(AlgebraError::ReducibleMinimalPolynomial)));
        // w^2 - 2 does not.
        assert!(NumberField::quadratic(rat(0, 1), rat(-2, 1)).is_ok());
    }

    #[test]
    fn display_round_trips_through_canonical_forms() {
        let k = NumberField::eisenstein();
        let w = k.generator().unwrap();
        assert_eq!(w.to_string(), "w");
        assert_eq!((&k.one() - &w).to_string(), "1-w");
        let x = Scalar::new(rat(1, 2), rat(1, 2), k.clone());
        assert_eq!(x.to_string(), "1/2+1/2*w");
        assert_eq!(k.integer(-2).to_string(), "-2");
        let y = Scalar::new(rat(0, 1), rat(-3, 2), k);
        assert_eq!(y.to_string(), "-3/2*w");
    }
}
