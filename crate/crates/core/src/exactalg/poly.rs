//! Dense univariate polynomials over the rationals.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use super::arith::divisors;
use super::rat::Rat;

/// Dense polynomial with rational coefficients, lowest degree first.
///
/// Canonical form: the coefficient vector is empty for the zero polynomial
/// and otherwise ends in a nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPolynomial {
    coeffs: Vec<Rat>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPolynomial::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            QPolynomial { coeffs: vec![c] }
        }
    }

    pub fn monomial(c: Rat, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); deg + 1];
        coeffs[deg] = c;
        QPolynomial { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = QPolynomial { coeffs };
        p.normalize();
        p
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, Rat::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division: returns (quotient, remainder). Panics if `div` is zero.
    pub fn divrem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dd = div.degree().unwrap();
        let lead_inv = div.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] * &lead_inv;
            for j in 0..dd {
                let t = &q * &div.coeffs[j];
                rem[i - dd + j] -= &t;
            }
            rem[i] = Rat::zero();
            quot[i - dd] = q;
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Remainder of self modulo `div`.
    pub fn rem(&self, div: &Self) -> Self {
        self.divrem(div).1
    }

    /// Monic gcd via the Euclidean algorithm (gcd(0,0) = 0).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Rat::from_int(i as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn is_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(Rat::is_integer)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The monic d-th cyclotomic polynomial, with integer coefficients.
///
/// Computed as (x^d - 1) divided by the cyclotomic polynomials of the proper
/// divisors of d; results are memoised process-wide.
pub fn cyclotomic_polynomial(d: u32) -> QPolynomial {
    assert!(d >= 1);
    static CACHE: OnceLock<Mutex<HashMap<u32, QPolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&d) {
        return p.clone();
    }
    let result = if d == 1 {
        QPolynomial::from_int_coeffs(&[-1, 1])
    } else {
        // x^d - 1
        let mut coeffs = vec![Rat::zero(); d as usize + 1];
        coeffs[0] = -Rat::one();
        coeffs[d as usize] = Rat::one();
        let mut num = QPolynomial::from_coeffs(coeffs);
        for t in divisors(d as u64) {
            if (t as u32) < d {
                let (q, r) = num.divrem(&cyclotomic_polynomial(t as u32));
                debug_assert!(r.is_zero());
                num = q;
            }
        }
        num
    };
    cache.lock().unwrap().insert(d, result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small_orders() {
        assert_eq!(cyclotomic_polynomial(1), QPolynomial::from_int_coeffs(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), QPolynomial::from_int_coeffs(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), QPolynomial::from_int_coeffs(&[1, 0, 1]));
    }

    #[test]
    fn cyclotomic_6_moebius_oracle() {
        // Independent oracle: Phi_6 = (x^6-1)(x-1) / ((x^2-1)(x^3-1)) by the
        // Moebius product over divisors of 6.
        let xn_minus_1 = |n: usize| {
            let mut c = vec![Rat::zero(); n + 1];
            c[0] = -Rat::one();
            c[n] = Rat::one();
            QPolynomial::from_coeffs(c)
        };
        let num = xn_minus_1(6).mul(&xn_minus_1(1));
        let den = xn_minus_1(2).mul(&xn_minus_1(3));
        let (q, r) = num.divrem(&den);
        assert!(r.is_zero());
        assert_eq!(q, QPolynomial::from_int_coeffs(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(6), q);
    }

    #[test]
    fn cyclotomic_degree_is_phi() {
        use super::super::arith::euler_phi;
        for d in 1..=30u32 {
            let p = cyclotomic_polynomial(d);
            assert_eq!(p.degree().unwrap() as u64, euler_phi(d as u64));
            assert!(p.leading().unwrap().is_one());
            assert!(p.is_integer_coeffs());
        }
    }

    #[test]
    fn divrem_roundtrip() {
        let a = QPolynomial::from_int_coeffs(&[3, -2, 0, 7, 1]);
        let b = QPolynomial::from_int_coeffs(&[1, 2, 2]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_multiples() {
        let g = QPolynomial::from_int_coeffs(&[1, 1]);
        let a = g.mul(&QPolynomial::from_int_coeffs(&[-1, 1]));
        let b = g.mul(&QPolynomial::from_int_coeffs(&[2, 0, 1]));
        assert_eq!(a.gcd(&b), g);
    }
}
