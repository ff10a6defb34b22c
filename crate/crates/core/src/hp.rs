//! Arbitrary-precision complex arithmetic on top of MPFR floats.
//!
//! [`ComplexHP`] is a pair of [`rug::Float`]s with a working precision in
//! bits. Arithmetic never silently mixes precisions: binary operations raise
//! both operands to the larger of the two working precisions.

use std::fmt;

use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::{Float, Integer};

use crate::exactalg::Rat;

pub const MIN_PREC: u32 = 64;

/// A complex number with explicit working precision.
#[derive(Clone, Debug)]
pub struct ComplexHP {
    re: Float,
    im: Float,
}

impl ComplexHP {
    pub fn new(prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        ComplexHP {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec()).max(MIN_PREC);
        ComplexHP {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        ComplexHP {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_rat(re: &Rat, im: &Rat, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        ComplexHP {
            re: Float::with_val(prec, &re.0),
            im: Float::with_val(prec, &im.0),
        }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Self::from_f64(n as f64, 0.0, prec)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(0.0, 1.0, prec)
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Return the same value carried at precision `prec`.
    pub fn with_prec(&self, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        ComplexHP {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    fn join(a: &Self, b: &Self) -> u32 {
        a.prec().max(b.prec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = Self::join(self, other);
        ComplexHP {
            re: (&self.re + &other.re).complete(p),
            im: (&self.im + &other.im).complete(p),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = Self::join(self, other);
        ComplexHP {
            re: (&self.re - &other.re).complete(p),
            im: (&self.im - &other.im).complete(p),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexHP {
            re: (-&self.re).complete(self.re.prec()),
            im: (-&self.im).complete(self.im.prec()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = Self::join(self, other);
        let re = Float::with_val(p, &self.re * &other.re) - Float::with_val(p, &self.im * &other.im);
        let im = Float::with_val(p, &self.re * &other.im) + Float::with_val(p, &self.im * &other.re);
        ComplexHP {
            re: Float::with_val(p, re),
            im: Float::with_val(p, im),
        }
    }

    pub fn mul_float(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        ComplexHP {
            re: (&self.re * s).complete(p),
            im: (&self.im * s).complete(p),
        }
    }

    pub fn mul_i64(&self, s: i64) -> Self {
        let p = self.prec();
        ComplexHP {
            re: (&self.re * s).complete(p),
            im: (&self.im * s).complete(p),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let p = Self::join(self, other);
        let den = other.norm_sqr();
        let re = Float::with_val(p, &self.re * &other.re) + Float::with_val(p, &self.im * &other.im);
        let im = Float::with_val(p, &self.im * &other.re) - Float::with_val(p, &self.re * &other.im);
        ComplexHP {
            re: Float::with_val(p, re / &den),
            im: Float::with_val(p, im / &den),
        }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        ComplexHP::from_f64(1.0, 0.0, p).div(self)
    }

    pub fn conj(&self) -> Self {
        ComplexHP {
            re: self.re.clone(),
            im: (-&self.im).complete(self.im.prec()),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    /// Integer power by repeated squaring (e >= 0).
    pub fn powi(&self, e: u32) -> Self {
        let mut result = ComplexHP::from_f64(1.0, 0.0, self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Distance |self - other| as a float.
    pub fn dist(&self, other: &Self) -> Float {
        self.sub(other).abs()
    }
}

impl fmt::Display for ComplexHP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec() as f64 * 0.30103) as usize).clamp(8, 72);
        write!(f, "{:.*e} + {:.*e}*i", digits, self.re, digits, self.im)
    }
}

/// pi at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec.max(MIN_PREC), Constant::Pi)
}

/// Nearest integer to a float (ties away from zero, which never matters at
/// the precisions used here).
pub fn round_to_integer(x: &Float) -> Integer {
    x.clone().round().to_integer().expect("finite float")
}

/// q = exp(2 pi i tau) at the precision of tau.
pub fn q_from_tau(tau: &ComplexHP) -> ComplexHP {
    let p = tau.prec();
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    // exp(2 pi i (x+iy)) = exp(-2 pi y) * (cos(2 pi x) + i sin(2 pi x))
    let modulus = (-Float::with_val(p, &two_pi * tau.im())).exp();
    let angle = Float::with_val(p, &two_pi * tau.re());
    let (s, c) = angle.sin_cos(Float::new(p));
    ComplexHP::from_floats(c * &modulus, s * modulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_is_raised_to_max() {
        let a = ComplexHP::from_f64(1.0, 2.0, 64);
        let b = ComplexHP::from_f64(3.0, -1.0, 256);
        assert_eq!(a.add(&b).prec(), 256);
        assert_eq!(a.mul(&b).prec(), 256);
        assert_eq!(ComplexHP::new(16).prec(), MIN_PREC);
    }

    #[test]
    fn complex_field_identities() {
        let z = ComplexHP::from_f64(0.3, 1.7, 128);
        let w = ComplexHP::from_f64(-2.0, 0.25, 128);
        let lhs = z.mul(&w).div(&w);
        assert!(lhs.dist(&z).to_f64() < 1e-35);
        let r = z.recip().mul(&z);
        assert!(r.dist(&ComplexHP::from_f64(1.0, 0.0, 128)).to_f64() < 1e-35);
    }

    #[test]
    fn q_at_i_is_real() {
        let tau = ComplexHP::i(128);
        let q = q_from_tau(&tau);
        // exp(2 pi i * i) = exp(-2 pi)
        assert!(q.im().to_f64().abs() < 1e-37);
        assert!((q.re().to_f64() - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-16);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let z = ComplexHP::from_f64(1.1, -0.4, 128);
        let mut acc = ComplexHP::from_f64(1.0, 0.0, 128);
        for _ in 0..7 {
            acc = acc.mul(&z);
        }
        assert!(z.powi(7).dist(&acc).to_f64() < 1e-30);
    }
}
