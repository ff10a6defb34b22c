//! Cyclotomic field elements in the power basis.
//!
//! A [`CycloElement`] of order d is a residue modulo the d-th cyclotomic
//! polynomial: a vector of phi(d) rational coordinates for
//! 1, zeta, ..., zeta^(phi(d)-1), where zeta = e^(2 pi i / d).
//! Rationality detection is a zero test on the non-constant coordinates.

use thiserror::Error;

use super::arith::{euler_phi, lcm};
use super::linalg::{solve, LinearSystem};
use super::poly::{cyclotomic_polynomial, QPolynomial};
use super::rat::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("element of order {order} does not lie in the subfield of order {target}")]
    NotInSubfield { order: u32, target: u32 },
    #[error("inverse of zero cyclotomic element")]
    ZeroInverse,
}

/// An element of the d-th cyclotomic field Q(zeta_d), in the power basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloElement {
    order: u32,
    coeffs: Vec<Rat>, // length phi(order)
}

impl CycloElement {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1);
        CycloElement {
            order,
            coeffs: vec![Rat::zero(); euler_phi(order as u64) as usize],
        }
    }

    pub fn from_rat(r: Rat, order: u32) -> Self {
        let mut e = Self::zero(order);
        e.coeffs[0] = r;
        e
    }

    pub fn one(order: u32) -> Self {
        Self::from_rat(Rat::one(), order)
    }

    /// The primitive root of unity zeta_d itself.
    pub fn zeta(order: u32) -> Self {
        Self::zeta_pow(order, 1)
    }

    /// zeta_d^k for any integer k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        assert!(order >= 1);
        let k = k.rem_euclid(order as i64) as usize;
        let modulus = cyclotomic_polynomial(order);
        let reduced = QPolynomial::monomial(Rat::one(), k).rem(&modulus);
        Self::from_poly(reduced, order)
    }

    fn from_poly(p: QPolynomial, order: u32) -> Self {
        let phi = euler_phi(order as u64) as usize;
        debug_assert!(p.degree().map_or(true, |d| d < phi));
        let mut coeffs = vec![Rat::zero(); phi];
        for (i, c) in p.coeffs().iter().enumerate() {
            coeffs[i] = c.clone();
        }
        CycloElement { order, coeffs }
    }

    fn to_poly(&self) -> QPolynomial {
        QPolynomial::from_coeffs(self.coeffs.clone())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// The embedded rational value, if all non-constant coordinates vanish.
    pub fn to_rat(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(Rat::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Rewrite in the cyclotomic field of order `target`, where the current
    /// order divides `target`.
    pub fn embed(&self, target: u32) -> Self {
        assert!(
            target % self.order == 0,
            "embed: {} does not divide {}",
            self.order,
            target
        );
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let modulus = cyclotomic_polynomial(target);
        let mut acc = QPolynomial::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&QPolynomial::monomial(c.clone(), i * step));
            }
        }
        Self::from_poly(acc.rem(&modulus), target)
    }

    /// Bring two elements into a common cyclotomic field (lcm of the orders).
    pub fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let m = lcm(a.order as i64, b.order as i64) as u32;
        (a.embed(m), b.embed(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::unify(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (mut a, b) = Self::unify(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }

    pub fn neg(&self) -> Self {
        CycloElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let modulus = cyclotomic_polynomial(a.order);
        let prod = a.to_poly().mul(&b.to_poly()).rem(&modulus);
        Self::from_poly(prod, a.order)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycloElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the (irreducible) cyclotomic modulus.
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::ZeroInverse);
        }
        let modulus = cyclotomic_polynomial(self.order);
        let (g, u, _) = poly_ext_gcd(&self.to_poly(), &modulus);
        // g is a nonzero constant since the modulus is irreducible
        debug_assert_eq!(g.degree(), Some(0));
        let ginv = g.coeff(0).recip();
        Ok(Self::from_poly(u.scale(&ginv).rem(&modulus), self.order))
    }
}

/// Extended Euclid over Q[x]: returns (g, u, v) with u*a + v*b = g.
fn poly_ext_gcd(a: &QPolynomial, b: &QPolynomial) -> (QPolynomial, QPolynomial, QPolynomial) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut u0, mut u1) = (QPolynomial::one(), QPolynomial::zero());
    let (mut v0, mut v1) = (QPolynomial::zero(), QPolynomial::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let nu = u0.sub(&q.mul(&u1));
        u0 = std::mem::replace(&mut u1, nu);
        let nv = v0.sub(&q.mul(&v1));
        v0 = std::mem::replace(&mut v1, nv);
    }
    (r0, u0, v0)
}

/// Result of [`cyclo_reduce`]: either a plain rational or an element of the
/// requested smaller cyclotomic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducedCyclo {
    Rational(Rat),
    Cyclo(CycloElement),
}

/// Rewrite `e` in the cyclotomic field of order `target` (which must divide
/// the order of `e`), detecting rationality along the way.
///
/// Fails with `NotInSubfield` if `e` does not lie in Q(zeta_target).
pub fn cyclo_reduce(e: &CycloElement, target: u32) -> Result<ReducedCyclo, CycloError> {
    assert!(target >= 1);
    if let Some(r) = e.to_rat() {
        return Ok(ReducedCyclo::Rational(r));
    }
    if target == 1 {
        return Err(CycloError::NotInSubfield {
            order: e.order,
            target,
        });
    }
    assert!(
        e.order % target == 0,
        "cyclo_reduce: {} does not divide {}",
        target,
        e.order
    );
    if target == e.order {
        return Ok(ReducedCyclo::Cyclo(e.clone()));
    }
    // Columns are the power-basis coordinates of zeta_target^j inside
    // Q(zeta_order); membership is an exact linear solve.
    let phi_d = e.coeffs.len();
    let phi_t = euler_phi(target as u64) as usize;
    let mut cols = Vec::with_capacity(phi_t);
    for j in 0..phi_t {
        let basis = CycloElement::zeta_pow(target, j as i64).embed(e.order);
        cols.push(basis.coeffs);
    }
    let rows: Vec<Vec<Rat>> = (0..phi_d)
        .map(|i| (0..phi_t).map(|j| cols[j][i].clone()).collect())
        .collect();
    let sys = LinearSystem::new(rows, phi_t);
    match solve(&sys, &e.coeffs) {
        Some(b) => {
            let out = CycloElement {
                order: target,
                coeffs: b,
            };
            match out.to_rat() {
                Some(r) => Ok(ReducedCyclo::Rational(r)),
                None => Ok(ReducedCyclo::Cyclo(out)),
            }
        }
        None => Err(CycloError::NotInSubfield {
            order: e.order,
            target,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = CycloElement::zeta(4);
        let z2 = z.mul(&z);
        assert_eq!(z2.to_rat(), Some(-Rat::one()));
        match cyclo_reduce(&z2, 1).unwrap() {
            ReducedCyclo::Rational(r) => assert_eq!(r, -Rat::one()),
            other => panic!("expected rational, got {other:?}"),
        }
    }

    #[test]
    fn primitive_sixth_roots_sum_to_one() {
        // zeta_6 + zeta_6^5 = 1, by arithmetic mod x^2 - x + 1
        let s = CycloElement::zeta_pow(6, 1).add(&CycloElement::zeta_pow(6, 5));
        assert_eq!(s.to_rat(), Some(Rat::one()));
    }

    #[test]
    fn zeta4_not_rational() {
        let z = CycloElement::zeta(4);
        assert_eq!(
            cyclo_reduce(&z, 1),
            Err(CycloError::NotInSubfield { order: 4, target: 1 })
        );
    }

    #[test]
    fn reduce_to_proper_subfield() {
        // zeta_12^2 is a primitive 6th root, so it lives in Q(zeta_6).
        let z = CycloElement::zeta_pow(12, 2);
        match cyclo_reduce(&z, 6).unwrap() {
            ReducedCyclo::Cyclo(e) => {
                assert_eq!(e.order(), 6);
                assert_eq!(e.embed(12), z);
            }
            other => panic!("expected cyclotomic element, got {other:?}"),
        }
        // zeta_12 itself does not lie in Q(zeta_6)
        assert!(cyclo_reduce(&CycloElement::zeta(12), 6).is_err());
    }

    #[test]
    fn field_inverse() {
        // deterministic pseudo-random nonzero elements of a few orders
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 19) as i64 - 9
        };
        for order in [3u32, 4, 5, 6, 8, 12] {
            for _ in 0..20 {
                let phi = euler_phi(order as u64) as usize;
                let coeffs: Vec<Rat> = (0..phi).map(|_| Rat::from_int(next())).collect();
                let e = CycloElement {
                    order,
                    coeffs,
                };
                if e.is_zero() {
                    continue;
                }
                let prod = e.mul(&e.inv().unwrap());
                assert_eq!(prod.to_rat(), Some(Rat::one()), "order {order}");
            }
        }
    }

    #[test]
    fn embedding_respects_arithmetic() {
        let a = CycloElement::zeta(3);
        let b = CycloElement::zeta(4);
        let prod = a.mul(&b); // lives in Q(zeta_12)
        assert_eq!(prod.order(), 12);
        // zeta_3 * zeta_4 = zeta_12^(4+3) = zeta_12^7
        assert_eq!(prod, CycloElement::zeta_pow(12, 7));
    }

    #[test]
    fn zero_inverse_rejected() {
        assert_eq!(CycloElement::zero(5).inv(), Err(CycloError::ZeroInverse));
    }
}
