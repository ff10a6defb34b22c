//! Arbitrary-precision rational numbers.
//!
//! `Rat` wraps [`rug::Rational`], which keeps every value in lowest terms
//! with a positive denominator. All arithmetic is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::ops::Pow;
use rug::{Integer, Rational};

/// An exact rational number, always in lowest terms with denominator > 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(pub Rational);

impl Rat {
    pub fn zero() -> Self {
        Rat(Rational::new())
    }

    pub fn one() -> Self {
        Rat(Rational::from(1))
    }

    pub fn from_int<T: Into<Integer>>(n: T) -> Self {
        Rat(Rational::from(n.into()))
    }

    /// `num/den` in lowest terms. Panics if `den` is zero.
    pub fn new<T: Into<Integer>, U: Into<Integer>>(num: T, den: U) -> Self {
        let d: Integer = den.into();
        assert!(d != 0, "zero denominator");
        Rat(Rational::from((num.into(), d)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_one(&self) -> bool {
        self.0 == 1
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rat(Rational::from(self.0.abs_ref()))
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rat(Rational::from(self.0.recip_ref()))
    }

    /// Integer power, allowing negative exponents for nonzero values.
    pub fn pow_i(&self, e: i32) -> Self {
        if e == 0 {
            return Rat::one();
        }
        if e < 0 {
            assert!(!self.is_zero(), "negative power of zero");
        }
        Rat(Rational::from(self.0.clone().pow(e)))
    }

    /// Sign as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<Integer> for Rat {
    fn from(n: Integer) -> Self {
        Rat(Rational::from(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(Rational::from((&self.0).$method(&rhs.0)))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(Rational::from((&self.0).$method(&rhs.0)))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(Rational::from(&self.0 / &rhs.0))
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(Rational::from(-&self.0))
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl DivAssign<&Rat> for Rat {
    fn div_assign(&mut self, rhs: &Rat) {
        assert!(!rhs.is_zero(), "division by zero");
        self.0 /= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_eager() {
        let r = Rat::new(6, 4);
        assert_eq!(*r.numer(), 3);
        assert_eq!(*r.denom(), 2);
        let s = Rat::new(-2, -4);
        assert_eq!(*s.numer(), 1);
        assert_eq!(*s.denom(), 2);
        // denominator stays positive
        let t = Rat::new(1, -3);
        assert_eq!(*t.numer(), -1);
        assert_eq!(*t.denom(), 3);
    }

    #[test]
    fn field_ops() {
        let a = Rat::new(2, 3);
        let b = Rat::new(-5, 7);
        assert_eq!(&a + &b, Rat::new(-1, 21));
        assert_eq!(&a * &b, Rat::new(-10, 21));
        assert_eq!(&a / &b, Rat::new(-14, 15));
        assert_eq!(a.recip(), Rat::new(3, 2));
        assert_eq!(b.pow_i(-2), Rat::new(49, 25));
    }

    #[test]
    fn exactness_on_random_inputs() {
        // (a/b + c/d) * (b*d) = a*d + c*b, exactly
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 2001) as i64 - 1000
        };
        for _ in 0..200 {
            let (a, c) = (next(), next());
            let (b, d) = (next().abs() + 1, next().abs() + 1);
            let lhs = (Rat::new(a, b) + Rat::new(c, d)) * Rat::from_int(b * d);
            assert_eq!(lhs, Rat::from_int(a * d + c * b));
        }
    }
}
