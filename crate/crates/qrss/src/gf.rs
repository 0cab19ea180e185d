//! Exact arithmetic in the prime field `F_q`.
//!
//! A [`FieldCtx`] fixes the prime modulus; every [`FieldElement`] carries its
//! context so that values from different fields can never be combined
//! silently. Arithmetic is plain modular arithmetic on `u64` values, which is
//! exact for all supported moduli (`q <= 2^31`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported modulus. Products of two reduced values then fit in u64.
pub const MAX_MODULUS: u64 = 1 << 31;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A prime field `F_q`, validated at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    q: u64,
}

impl FieldCtx {
    /// Creates the field `F_q`. Fails unless `q` is prime and `q <= 2^31`.
    pub fn new(q: u64) -> Result<Self> {
        if q > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Self { q })
    }

    /// The prime modulus.
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Element with the given value, reduced mod `q`.
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.q,
            q: self.q,
        }
    }

    /// Element from a signed value; negative inputs wrap around.
    pub fn element_signed(&self, value: i64) -> FieldElement {
        let q = self.q as i64;
        self.element(value.rem_euclid(q) as u64)
    }

    /// The additive identity.
    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    /// The multiplicative identity.
    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// All field elements in ascending value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |v| self.element(v))
    }
}

/// A value in `[0, q)` tagged with its field context.
///
/// The `+`, `-`, `*` operators and [`Neg`] panic when the operands belong to
/// different contexts; mixing fields is a programming error, not a
/// recoverable condition.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    value: u64,
    q: u64,
}

impl FieldElement {
    /// Canonical representative in `[0, q)`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// The field this element lives in.
    pub fn ctx(&self) -> FieldCtx {
        FieldCtx { q: self.q }
    }

    fn assert_same_ctx(&self, other: &FieldElement) {
        assert_eq!(
            self.q, other.q,
            "field context mismatch: F_{} vs F_{}",
            self.q, other.q
        );
    }

    /// Multiplicative inverse via Fermat exponentiation.
    pub fn inv(self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(self.pow(self.q - 2))
    }

    /// `self^e` by square-and-multiply, with the convention `0^0 = 1` so the
    /// exponent-0 row of a power matrix is all ones.
    pub fn pow(self, mut e: u64) -> FieldElement {
        let mut base = self;
        let mut acc = FieldElement {
            value: 1 % self.q,
            q: self.q,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.assert_same_ctx(&rhs);
        FieldElement {
            value: (self.value + rhs.value) % self.q,
            q: self.q,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.assert_same_ctx(&rhs);
        FieldElement {
            value: (self.value + self.q - rhs.value) % self.q,
            q: self.q,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.assert_same_ctx(&rhs);
        FieldElement {
            value: (self.value * rhs.value) % self.q,
            q: self.q,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: (self.q - self.value) % self.q,
            q: self.q,
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.q)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldCtx {
        FieldCtx::new(7).unwrap()
    }

    #[test]
    fn rejects_composite_and_oversized_moduli() {
        assert!(matches!(FieldCtx::new(6), Err(Error::NotPrime(6))));
        assert!(matches!(FieldCtx::new(1), Err(Error::NotPrime(1))));
        assert!(matches!(FieldCtx::new(0), Err(Error::NotPrime(0))));
        assert!(matches!(
            FieldCtx::new((1 << 31) + 11),
            Err(Error::ModulusTooLarge(_))
        ));
        assert!(FieldCtx::new(2).is_ok());
        assert!(FieldCtx::new(2147483647).is_ok()); // 2^31 - 1 is prime
    }

    #[test]
    fn add_examples() {
        let f = f7();
        assert_eq!((f.element(3) + f.element(5)).value(), 1);
        assert_eq!((f.element(0) + f.element(4)).value(), 4);
        // 25 is pre-reduced to 4 by element()
        assert_eq!((f.element(2) + f.element(25)).value(), 6);
    }

    #[test]
    fn mul_sub_neg_examples() {
        let f = f7();
        assert_eq!((f.element(4) * f.element(4)).value(), 2);
        assert_eq!((f.element(1) * f.element(6)).value(), 6);
        assert_eq!((f.element(5) * f.element(3)).value(), 1);
        assert_eq!((f.element(2) - f.element(5)).value(), 4);
        assert_eq!((-f.element(3)).value(), 4);
        assert_eq!((-f.element(0)).value(), 0);
    }

    #[test]
    fn inv_examples() {
        let f = f7();
        assert_eq!(f.element(3).inv().unwrap().value(), 5);
        assert_eq!(f.element(1).inv().unwrap().value(), 1);
        assert_eq!(f.element(6).inv().unwrap().value(), 6);
        assert!(matches!(
            f.element(0).inv(),
            Err(Error::DivisionByZero(7))
        ));
    }

    #[test]
    fn pow_examples() {
        let f = f7();
        assert_eq!(f.element(6).pow(2).value(), 1);
        assert_eq!(f.element(0).pow(0).value(), 1);
        assert_eq!(f.element(4).pow(2).value(), 2);
        assert_eq!(f.element(3).pow(0).value(), 1);
    }

    #[test]
    #[should_panic(expected = "field context mismatch")]
    fn cross_context_addition_panics() {
        let a = FieldCtx::new(7).unwrap().element(3);
        let b = FieldCtx::new(5).unwrap().element(3);
        let _ = a + b;
    }

    #[test]
    fn field_axioms_exhaustive_small_q() {
        for q in [2u64, 3, 5, 7, 11] {
            let f = FieldCtx::new(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for c in f.elements() {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn inverses_and_fermat_exhaustive_small_q() {
        for q in [2u64, 3, 5, 7, 11] {
            let f = FieldCtx::new(q).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!((a * a.inv().unwrap()).value(), 1);
                assert_eq!(a.pow(q - 1).value(), 1);
            }
        }
    }

    #[test]
    fn signed_elements_wrap() {
        let f = f7();
        assert_eq!(f.element_signed(-4).value(), 3);
        assert_eq!(f.element_signed(-7).value(), 0);
        assert_eq!(f.element_signed(9).value(), 2);
    }
}
