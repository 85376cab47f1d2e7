//! Exact coefficient fields: the rationals and the Gaussian rationals.
//!
//! Every polynomial in the crate is generic over [`Scalar`]. The rational
//! field [`Q`] is the default; [`Gaussian`] adjoins `i = sqrt(-1)` and is
//! only needed where a symmetry carries an imaginary unit.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number. Denominators are positive and in lowest terms.
pub type Q = BigRational;

/// Shorthand for the rational `num / den`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// An exact field of coefficients.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_q(value: Q) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// The imaginary unit, if the field contains one.
    fn imaginary_unit() -> Option<Self>;
    /// The value as a real rational, if it has no imaginary part.
    fn as_real(&self) -> Option<Q>;
    fn to_c64(&self) -> Complex64;

    fn from_i64(n: i64) -> Self {
        Self::from_q(qi(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Canonical textual form, used inside polynomial strings.
    fn write_canonical(&self, out: &mut String);

    /// True when the canonical form is a single signed atom (no `+`
    /// between parts), so it can be printed without parentheses.
    fn is_atomic(&self) -> bool;

    /// True when the leading sign of the canonical form is negative.
    fn is_negative_atom(&self) -> bool;
}

fn write_q(value: &Q, out: &mut String) {
    if value.is_integer() {
        out.push_str(&value.numer().to_string());
    } else {
        out.push_str(&format!("{}/{}", value.numer(), value.denom()));
    }
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_q(value: Q) -> Self {
        value
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn imaginary_unit() -> Option<Self> {
        None
    }
    fn as_real(&self) -> Option<Q> {
        Some(self.clone())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn write_canonical(&self, out: &mut String) {
        write_q(self, out)
    }
    fn is_atomic(&self) -> bool {
        true
    }
    fn is_negative_atom(&self) -> bool {
        self.is_negative()
    }
}

/// A Gaussian rational `re + i*im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: Q,
    pub im: Q,
}

impl Gaussian {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(Zero::zero(), One::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
}

impl From<Q> for Gaussian {
    fn from(re: Q) -> Self {
        Self::new(re, Zero::zero())
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: Gaussian) -> Gaussian {
        Gaussian::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: Gaussian) -> Gaussian {
        Gaussian::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: Gaussian) -> Gaussian {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Gaussian::new(re, im)
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re, -self.im)
    }
}

impl Scalar for Gaussian {
    fn zero() -> Self {
        Gaussian::default()
    }
    fn one() -> Self {
        Gaussian::new(One::one(), Zero::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn from_q(value: Q) -> Self {
        value.into()
    }
    fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if Zero::is_zero(&norm) {
            return None;
        }
        Some(Gaussian::new(&self.re / &norm, -(&self.im / &norm)))
    }
    fn imaginary_unit() -> Option<Self> {
        Some(Gaussian::i())
    }
    fn as_real(&self) -> Option<Q> {
        Zero::is_zero(&self.im).then(|| self.re.clone())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn write_canonical(&self, out: &mut String) {
        let re_zero = Zero::is_zero(&self.re);
        let im_zero = Zero::is_zero(&self.im);
        if im_zero {
            write_q(&self.re, out);
            return;
        }
        if re_zero {
            if One::is_one(&self.im) {
                out.push('i');
            } else if One::is_one(&(-self.im.clone())) {
                out.push_str("-i");
            } else {
                write_q(&self.im, out);
                out.push_str("*i");
            }
            return;
        }
        out.push('(');
        write_q(&self.re, out);
        if self.im.is_negative() {
            out.push_str(" - ");
            let mag = -self.im.clone();
            if !One::is_one(&mag) {
                write_q(&mag, out);
                out.push('*');
            }
        } else {
            out.push_str(" + ");
            if !One::is_one(&self.im) {
                write_q(&self.im, out);
                out.push('*');
            }
        }
        out.push_str("i)");
    }
    fn is_atomic(&self) -> bool {
        Zero::is_zero(&self.re) || Zero::is_zero(&self.im)
    }
    fn is_negative_atom(&self) -> bool {
        if Zero::is_zero(&self.im) {
            self.re.is_negative()
        } else if Zero::is_zero(&self.re) {
            self.im.is_negative()
        } else {
            false
        }
    }
}

impl Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_canonical(&mut s);
        f.write_str(&s)
    }
}

impl Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Debug::fmt(self, f)
    }
}

/// Lifts a rational-coefficient object into the Gaussian field.
pub fn to_gaussian(value: &Q) -> Gaussian {
    Gaussian::from(value.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_normalized() {
        let a = q(2, -4);
        assert_eq!(a, q(-1, 2));
        assert!(a.denom() > &BigInt::zero());
    }

    #[test]
    fn gaussian_field_ops() {
        let i = Gaussian::i();
        assert_eq!(i.clone() * i.clone(), Gaussian::from(qi(-1)));
        let z = Gaussian::new(qi(3), qi(4));
        let inv = z.inv().unwrap();
        assert_eq!(z * inv, Gaussian::one());
        assert!(Gaussian::zero().inv().is_none());
    }

    #[test]
    fn gaussian_canonical_text() {
        let render = |g: Gaussian| {
            let mut s = String::new();
            g.write_canonical(&mut s);
            s
        };
        assert_eq!(render(Gaussian::i()), "i");
        assert_eq!(render(-Gaussian::i()), "-i");
        assert_eq!(render(Gaussian::new(q(1, 2), qi(-3))), "(1/2 - 3*i)");
        assert_eq!(render(Gaussian::from(q(-5, 3))), "-5/3");
    }
}
