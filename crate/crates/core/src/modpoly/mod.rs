//! Construction and persistence of the modular polynomials: the classical
//! Phi_N in Z[X,Y] relating j(tau) and j(g tau), and the three-variable
//! Psi_N in Q[X,Y,Z] relating chi*(g tau), j(tau) and chi*(tau).

mod build;
mod io;
mod recover;

pub use build::{build_phi, build_psi};
pub use io::{load_poly, save_poly, PolyFile};

use std::collections::BTreeMap;

use rug::Integer;
use thiserror::Error;

use crate::exactalg::{QPolynomial, Rat};
use crate::hp::ComplexHP;

#[derive(Debug, Error)]
pub enum ModPolyError {
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("cancellation failure: {0}")]
    CancellationFailure(String),
    #[error("no rational-function solution within the degree bounds")]
    NoSolution,
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Escalation parameters for the linear-algebra recovery inside the
/// polynomial constructions.
#[derive(Clone, Copy, Debug)]
pub struct RecoveryConfig {
    /// Per-variable degree bound B for numerator and denominator.
    pub degree_bound: u32,
    /// Working truncation T (integral q-coefficients).
    pub truncation: i64,
    /// Maximum escalations of each of B and T.
    pub max_escalations: u32,
}

impl RecoveryConfig {
    /// Defaults for level N: B = 2 |D_N|, T = 40 N, 3 escalations each.
    pub fn for_level(n: u64) -> Self {
        let dn = crate::hecke::enumerate_dn(n).len() as u32;
        RecoveryConfig {
            degree_bound: 2 * dn,
            truncation: 40 * n as i64,
            max_escalations: 3,
        }
    }

    pub fn with_truncation(mut self, t: i64) -> Self {
        assert!(t >= 8);
        self.truncation = t;
        self
    }
}

// ---------------------------------------------------------------------------
// Sparse exact polynomials in two and three variables
// ---------------------------------------------------------------------------

/// Sparse polynomial sum c_ij X^i Y^j with exact rational coefficients.
/// No explicitly stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPolynomial {
    terms: BTreeMap<(u32, u32), Rat>,
}

/// Sparse polynomial sum c_ijk X^i Y^j Z^k with exact rational coefficients.
/// The integer-cleared form has content 1 and positive leading term.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TriPolynomial {
    terms: BTreeMap<(u32, u32, u32), Rat>,
}

impl BiPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, exp: (u32, u32), c: Rat) {
        if c.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, c);
        }
    }

    pub fn add_assign_term(&mut self, exp: (u32, u32), c: &Rat) {
        let cur = self.coeff(exp);
        self.insert(exp, cur + c);
    }

    pub fn coeff(&self, exp: (u32, u32)) -> Rat {
        self.terms.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0 + k.1).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BiPolynomial {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_assign_term(*k, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BiPolynomial::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                out.add_assign_term((ka.0 + kb.0, ka.1 + kb.1), &(va * vb));
            }
        }
        out
    }

    /// True iff p(X,Y) = p(Y,X).
    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(&(i, j), c)| self.coeff((j, i)) == *c)
    }

    /// Partial derivative: 0 = d/dX, 1 = d/dY.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = BiPolynomial::zero();
        for (&(i, j), c) in &self.terms {
            match var {
                0 if i > 0 => out.add_assign_term((i - 1, j), &(c * &Rat::from_int(i as i64))),
                1 if j > 0 => out.add_assign_term((i, j - 1), &(c * &Rat::from_int(j as i64))),
                _ => {}
            }
        }
        out
    }

    /// Specialise Y to a rational, leaving a univariate polynomial in X.
    pub fn specialize_y(&self, y: &Rat) -> QPolynomial {
        let mut coeffs = vec![Rat::zero(); self.deg_x() as usize + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[i as usize] += &(c * &y.pow_i(j as i32));
        }
        QPolynomial::from_coeffs(coeffs)
    }

    /// Evaluate at a complex point.
    pub fn eval(&self, x: &ComplexHP, y: &ComplexHP) -> ComplexHP {
        let px = power_table(x, self.deg_x());
        let py = power_table(y, self.deg_y());
        let mut acc = ComplexHP::new(x.prec().max(y.prec()));
        for (&(i, j), c) in &self.terms {
            let term = px[i as usize]
                .mul(&py[j as usize])
                .mul_float(&rat_to_float(c, acc.prec()));
            acc = acc.add(&term);
        }
        acc
    }

    /// Largest monomial magnitude |c X^i Y^j| at the point; used to
    /// normalise residuals.
    pub fn max_monomial(&self, x: &ComplexHP, y: &ComplexHP) -> rug::Float {
        let px = power_table(x, self.deg_x());
        let py = power_table(y, self.deg_y());
        let mut best = rug::Float::with_val(x.prec(), 0);
        for (&(i, j), c) in &self.terms {
            let m = px[i as usize].abs() * py[j as usize].abs() * rat_to_float(c, x.prec()).abs();
            if m > best {
                best = m;
            }
        }
        best
    }

    /// Scale to integer coefficients with content 1 and the coefficient of
    /// the lexicographically greatest monomial positive.
    pub fn integer_cleared(&self) -> Self {
        let scale = clearing_scale(self.terms.values());
        let mut out = self.scale(&scale);
        if let Some((_, c)) = out.terms.iter().next_back() {
            if c.signum() < 0 {
                out = out.scale(&-Rat::one());
            }
        }
        out
    }
}

impl TriPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, exp: (u32, u32, u32), c: Rat) {
        if c.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, c);
        }
    }

    pub fn add_assign_term(&mut self, exp: (u32, u32, u32), c: &Rat) {
        let cur = self.coeff(exp);
        self.insert(exp, cur + c);
    }

    pub fn coeff(&self, exp: (u32, u32, u32)) -> Rat {
        self.terms.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(u32, u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn deg_z(&self) -> u32 {
        self.terms.keys().map(|k| k.2).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TriPolynomial {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// The coefficient of X^i as a polynomial in (Y, Z).
    pub fn x_coefficient(&self, i: u32) -> BiPolynomial {
        let mut out = BiPolynomial::zero();
        for (&(xi, j, k), c) in &self.terms {
            if xi == i {
                out.insert((j, k), c.clone());
            }
        }
        out
    }

    /// Assemble from X-coefficients (index = power of X, polynomial in Y, Z).
    pub fn from_x_coefficients(coeffs: &[BiPolynomial]) -> Self {
        let mut out = TriPolynomial::zero();
        for (i, p) in coeffs.iter().enumerate() {
            for (&(j, k), c) in p.terms() {
                out.insert((i as u32, j, k), c.clone());
            }
        }
        out
    }

    /// Specialise (Y, Z) to rationals, leaving a univariate polynomial in X.
    pub fn specialize_yz(&self, y: &Rat, z: &Rat) -> QPolynomial {
        let mut coeffs = vec![Rat::zero(); self.deg_x() as usize + 1];
        for (&(i, j, k), c) in &self.terms {
            coeffs[i as usize] += &(c * &y.pow_i(j as i32) * z.pow_i(k as i32));
        }
        QPolynomial::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &ComplexHP, y: &ComplexHP, z: &ComplexHP) -> ComplexHP {
        let px = power_table(x, self.deg_x());
        let py = power_table(y, self.deg_y());
        let pz = power_table(z, self.deg_z());
        let prec = x.prec().max(y.prec()).max(z.prec());
        let mut acc = ComplexHP::new(prec);
        for (&(i, j, k), c) in &self.terms {
            let term = px[i as usize]
                .mul(&py[j as usize])
                .mul(&pz[k as usize])
                .mul_float(&rat_to_float(c, prec));
            acc = acc.add(&term);
        }
        acc
    }

    pub fn max_monomial(&self, x: &ComplexHP, y: &ComplexHP, z: &ComplexHP) -> rug::Float {
        let px = power_table(x, self.deg_x());
        let py = power_table(y, self.deg_y());
        let pz = power_table(z, self.deg_z());
        let mut best = rug::Float::with_val(x.prec(), 0);
        for (&(i, j, k), c) in &self.terms {
            let m = px[i as usize].abs()
                * py[j as usize].abs()
                * pz[k as usize].abs()
                * rat_to_float(c, x.prec()).abs();
            if m > best {
                best = m;
            }
        }
        best
    }

    /// Scale to integer coefficients with content 1 and the coefficient of
    /// the lexicographically greatest monomial positive.
    pub fn integer_cleared(&self) -> Self {
        let scale = clearing_scale(self.terms.values());
        let mut out = self.scale(&scale);
        if let Some((_, c)) = out.terms.iter().next_back() {
            if c.signum() < 0 {
                out = out.scale(&-Rat::one());
            }
        }
        out
    }

    /// True if all coefficients are integers with gcd 1.
    pub fn is_primitive_integer(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let mut g = Integer::new();
        for c in self.terms.values() {
            if !c.is_integer() {
                return false;
            }
            g.gcd_mut(c.numer());
        }
        g == 1
    }
}

fn rat_to_float(c: &Rat, prec: u32) -> rug::Float {
    rug::Float::with_val(prec, &c.0)
}

fn power_table(x: &ComplexHP, deg: u32) -> Vec<ComplexHP> {
    let mut out = Vec::with_capacity(deg as usize + 1);
    out.push(ComplexHP::from_f64(1.0, 0.0, x.prec()));
    for i in 1..=deg as usize {
        out.push(out[i - 1].mul(x));
    }
    out
}

/// The positive rational that clears denominators and divides out the
/// numerator gcd (content-1 normalisation).
fn clearing_scale<'a, I: Iterator<Item = &'a Rat>>(coeffs: I) -> Rat {
    let collected: Vec<&Rat> = coeffs.collect();
    if collected.is_empty() {
        return Rat::one();
    }
    let mut l = Integer::from(1);
    for c in &collected {
        l = l.lcm(c.denom());
    }
    let mut g = Integer::new();
    for c in &collected {
        let scaled = Integer::from(c.numer() * &l) / c.denom();
        g.gcd_mut(&scaled);
    }
    Rat(rug::Rational::from((l, g)))
}

/// Structural report from [`psi_sanity`].
#[derive(Clone, Debug)]
pub struct PsiSanity {
    pub n: u64,
    pub deg_x: u32,
    pub deg_y: u32,
    pub deg_z: u32,
    pub expected_deg_x: u32,
    pub primitive_integer: bool,
    pub squarefree_in_x: bool,
    pub ok: bool,
}

/// Structural checks on a built Psi_N: X-degree equals |D_N|, Y-dependence
/// for N >= 2, content 1, and square-freeness in X (checked by specialising
/// (Y, Z) at sample rationals; a constant gcd at any sample certifies it).
pub fn psi_sanity(psi: &TriPolynomial, n: u64) -> PsiSanity {
    let expected_deg_x = crate::hecke::enumerate_dn(n).len() as u32;
    let deg_x = psi.deg_x();
    let deg_y = psi.deg_y();
    let deg_z = psi.deg_z();
    let primitive_integer = psi.is_primitive_integer();

    let mut squarefree_in_x = false;
    for (y, z) in [(2i64, 3i64), (5, 7), (-11, 13), (17, -19)] {
        let p = psi.specialize_yz(&Rat::from_int(y), &Rat::from_int(z));
        if p.degree().map(|d| d as u32) != Some(deg_x) {
            continue; // leading coefficient vanished at this sample
        }
        let g = p.gcd(&p.derivative());
        if g.degree() == Some(0) {
            squarefree_in_x = true;
            break;
        }
    }

    let y_ok = if n == 1 { deg_y == 0 } else { deg_y >= 1 };
    PsiSanity {
        n,
        deg_x,
        deg_y,
        deg_z,
        expected_deg_x,
        primitive_integer,
        squarefree_in_x,
        ok: deg_x == expected_deg_x && y_ok && primitive_integer && squarefree_in_x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipoly_basics() {
        let mut p = BiPolynomial::zero();
        p.insert((1, 0), Rat::one());
        p.insert((0, 1), -Rat::one());
        assert_eq!(p.deg_x(), 1);
        assert!(!p.is_symmetric()); // X - Y is antisymmetric
        let sq = p.mul(&p);
        assert_eq!(sq.coeff((1, 1)), Rat::from_int(-2));
        assert!(sq.is_symmetric());
    }

    #[test]
    fn integer_clearing_and_sign() {
        let mut p = TriPolynomial::zero();
        p.insert((1, 0, 0), Rat::new(-2, 3));
        p.insert((0, 0, 1), Rat::new(2, 3));
        let cleared = p.integer_cleared();
        // leading monomial is X; its coefficient must come out positive
        assert_eq!(cleared.coeff((1, 0, 0)), Rat::one());
        assert_eq!(cleared.coeff((0, 0, 1)), -Rat::one());
        assert!(cleared.is_primitive_integer());
    }

    #[test]
    fn specialization_and_eval_agree() {
        let mut p = TriPolynomial::zero();
        p.insert((2, 1, 0), Rat::from_int(3));
        p.insert((0, 0, 2), Rat::from_int(-7));
        p.insert((1, 1, 1), Rat::new(1, 2));
        let (y, z) = (Rat::from_int(2), Rat::from_int(-3));
        let uni = p.specialize_yz(&y, &z);
        let x = Rat::from_int(5);
        let direct = uni.eval(&x);
        let xc = ComplexHP::from_rat(&x, &Rat::zero(), 128);
        let yc = ComplexHP::from_rat(&y, &Rat::zero(), 128);
        let zc = ComplexHP::from_rat(&z, &Rat::zero(), 128);
        let num = p.eval(&xc, &yc, &zc);
        let expect = rat_to_float(&direct, 128);
        assert!((num.re().clone() - expect).abs().to_f64() < 1e-30);
        assert!(num.im().to_f64().abs() < 1e-30);
    }
}
