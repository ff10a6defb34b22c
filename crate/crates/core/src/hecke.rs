//! Integer matrix machinery: the coset representatives D_N, decomposition of
//! primitive determinant-N matrices, fundamental-domain reduction, and the
//! induced substitution action on series.

use thiserror::Error;

use crate::exactalg::arith::gcd;
use crate::exactalg::Rat;
use crate::hp::{round_to_integer, ComplexHP};
use crate::qseries::{substitute_qaction, AhmSeries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeckeError {
    #[error("matrix is not primitive (content {content})")]
    NotPrimitive { content: i64 },
    #[error("no coset representative found for determinant {det}")]
    NoRepresentative { det: i64 },
    #[error("fundamental-domain reduction exceeded the iteration cap")]
    PrecisionLoss,
}

/// A 2x2 integer matrix (a, b; c, d), used with positive determinant.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct GL2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GL2Matrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        GL2Matrix { a, b, c, d }
    }

    pub fn identity() -> Self {
        GL2Matrix::new(1, 0, 0, 1)
    }

    /// The translation tau -> tau + t.
    pub fn translation(t: i64) -> Self {
        GL2Matrix::new(1, t, 0, 1)
    }

    /// The inversion tau -> -1/tau.
    pub fn inversion() -> Self {
        GL2Matrix::new(0, -1, 1, 0)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn content(&self) -> i64 {
        gcd(gcd(self.a, self.b), gcd(self.c, self.d))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.c == 0
    }

    /// Divide out the content (the result generates the same Moebius action).
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        GL2Matrix::new(self.a / g, self.b / g, self.c / g, self.d / g)
    }

    pub fn mul(&self, other: &Self) -> Self {
        GL2Matrix::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    /// Adjugate: self * adjugate = det * identity.
    pub fn adjugate(&self) -> Self {
        GL2Matrix::new(self.d, -self.b, -self.c, self.a)
    }

    /// Normalise a rational matrix to primitive integer form: clear the
    /// denominators, then divide out the content.
    pub fn from_rational(a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Self {
        let mut l = rug::Integer::from(1);
        for x in [a, b, c, d] {
            l = l.lcm(x.denom());
        }
        let ent = |x: &Rat| -> i64 {
            let v = rug::Integer::from(x.numer() * &l) / x.denom();
            v.to_i64().expect("matrix entry overflows i64")
        };
        let m = GL2Matrix::new(ent(a), ent(b), ent(c), ent(d));
        assert!(m.det() > 0, "matrix must have positive determinant");
        m.primitive_part()
    }

    /// Moebius action (a tau + b) / (c tau + d) on the upper half plane.
    pub fn apply(&self, tau: &ComplexHP) -> ComplexHP {
        MoebiusAction { matrix: *self }.apply(tau)
    }
}

impl std::fmt::Display for GL2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} / {} {}", self.a, self.b, self.c, self.d)
    }
}

/// A matrix acting on points of the upper half plane by Moebius
/// transformation; positive determinant preserves Im tau > 0.
#[derive(Clone, Copy, Debug)]
pub struct MoebiusAction {
    pub matrix: GL2Matrix,
}

impl MoebiusAction {
    pub fn apply(&self, tau: &ComplexHP) -> ComplexHP {
        let m = &self.matrix;
        let p = tau.prec();
        let num = tau.mul_i64(m.a).add(&ComplexHP::from_int(m.b, p));
        let den = tau.mul_i64(m.c).add(&ComplexHP::from_int(m.d, p));
        num.div(&den)
    }
}

/// The set D_N: upper-triangular (a, b; 0, d) with ad = N, 0 <= b < d and
/// gcd(a, b, d) = 1, in lexicographic (a, b) order. These represent the
/// primitive determinant-N matrices up to left SL2(Z) action.
pub fn enumerate_dn(n: u64) -> Vec<GL2Matrix> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for a in crate::exactalg::arith::divisors(n) {
        let d = (n / a) as i64;
        let a = a as i64;
        for b in 0..d {
            if gcd(gcd(a, b), d) == 1 {
                out.push(GL2Matrix::new(a, b, 0, d));
            }
        }
    }
    out
}

/// Split a primitive determinant-N matrix as gamma * g' with gamma in
/// SL2(Z) and g' in D_N. The representative g' is unique.
pub fn decompose_to_dn(g: &GL2Matrix) -> Result<(GL2Matrix, GL2Matrix), HeckeError> {
    let n = g.det();
    assert!(n > 0, "determinant must be positive");
    if !g.is_primitive() {
        return Err(HeckeError::NotPrimitive {
            content: g.content(),
        });
    }
    for rep in enumerate_dn(n as u64) {
        // gamma = g * rep^-1 = g * adj(rep) / N; accept if integral with det 1
        let m = g.mul(&rep.adjugate());
        if m.a % n == 0 && m.b % n == 0 && m.c % n == 0 && m.d % n == 0 {
            let gamma = GL2Matrix::new(m.a / n, m.b / n, m.c / n, m.d / n);
            debug_assert_eq!(gamma.det(), 1);
            return Ok((gamma, rep));
        }
    }
    Err(HeckeError::NoRepresentative { det: n })
}

/// Reduce tau into the standard fundamental domain
/// { |Re tau| <= 1/2, |tau| >= 1 } by iterated translation and inversion.
///
/// Returns (tau', gamma) with gamma * tau = tau'. Boundary points are
/// accepted as-is and not canonicalised.
pub fn reduce_fundamental(tau: &ComplexHP) -> Result<(ComplexHP, GL2Matrix), HeckeError> {
    if !(tau.im().to_f64() > 0.0) {
        return Err(HeckeError::PrecisionLoss);
    }
    let mut z = tau.clone();
    let mut gamma = GL2Matrix::identity();
    let max_iter = 64 + 4 * (tau.prec() as usize);
    for _ in 0..max_iter {
        let t = round_to_integer(z.re());
        if t != 0 {
            let t64 = t.to_i64().ok_or(HeckeError::PrecisionLoss)?;
            let shift = GL2Matrix::translation(-t64);
            z = shift.apply(&z);
            gamma = shift.mul(&gamma);
        }
        // strict interior test; boundary |z| = 1 is accepted either way
        if z.norm_sqr() < 1.0f64 - 1e-30 {
            let s = GL2Matrix::inversion();
            z = s.apply(&z);
            gamma = s.mul(&gamma);
        } else {
            return Ok((z, gamma));
        }
    }
    Err(HeckeError::PrecisionLoss)
}

/// The induced action of an upper-triangular (a, b; 0, d) on a series:
/// q -> zeta_d^b q^(a/d) and Y -> (d/a) Y.
pub fn act_series(g: &GL2Matrix, s: &AhmSeries) -> AhmSeries {
    assert!(g.is_upper_triangular(), "matrix must be upper triangular");
    assert!(g.a > 0 && g.d > 0);
    substitute_qaction(s, g.a, g.b.rem_euclid(g.d), g.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::j_qexp;
    use crate::qseries::PuiseuxSeries;

    #[test]
    fn dn_small_cases() {
        assert_eq!(enumerate_dn(1), vec![GL2Matrix::identity()]);
        assert_eq!(
            enumerate_dn(2),
            vec![
                GL2Matrix::new(1, 0, 0, 2),
                GL2Matrix::new(1, 1, 0, 2),
                GL2Matrix::new(2, 0, 0, 1),
            ]
        );
        assert_eq!(enumerate_dn(4).len(), 6);
    }

    #[test]
    fn dn_size_is_multiplicative() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(enumerate_dn(p).len() as u64, p + 1);
        }
        let size = |n: u64| enumerate_dn(n).len();
        assert_eq!(size(6), size(2) * size(3));
        assert_eq!(size(15), size(3) * size(5));
        assert_eq!(size(12), size(4) * size(3));
    }

    #[test]
    fn decompose_examples() {
        let (gamma, rep) = decompose_to_dn(&GL2Matrix::new(1, 0, 0, 2)).unwrap();
        assert_eq!(gamma, GL2Matrix::identity());
        assert_eq!(rep, GL2Matrix::new(1, 0, 0, 2));

        let g = GL2Matrix::new(1, 0, 1, 2);
        let (gamma, rep) = decompose_to_dn(&g).unwrap();
        assert_eq!(gamma.det(), 1);
        assert_eq!(gamma.mul(&rep), g);

        assert_eq!(
            decompose_to_dn(&GL2Matrix::new(2, 0, 0, 2)),
            Err(HeckeError::NotPrimitive { content: 2 })
        );
    }

    #[test]
    fn decompose_roundtrip_randomized() {
        // gamma * g' for random SL2(Z) gamma and g' in D_N decomposes back,
        // and the representative is unique.
        let mut state = 0xdeadbeef12345u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in [2u64, 3, 4, 6] {
            let dn = enumerate_dn(n);
            for _ in 0..10 {
                let mut gamma = GL2Matrix::identity();
                for _ in 0..6 {
                    gamma = match next() % 3 {
                        0 => gamma.mul(&GL2Matrix::translation(1 + (next() % 3) as i64)),
                        1 => gamma.mul(&GL2Matrix::translation(-((next() % 3) as i64) - 1)),
                        _ => gamma.mul(&GL2Matrix::inversion()),
                    };
                }
                let rep = dn[(next() as usize) % dn.len()];
                let g = gamma.mul(&rep);
                let (gamma2, rep2) = decompose_to_dn(&g).unwrap();
                assert_eq!(rep2, rep, "representative must be unique");
                assert_eq!(gamma2.mul(&rep2), g);
            }
        }
    }

    #[test]
    fn reduction_examples() {
        // i + 5 translates back to i
        let tau = ComplexHP::from_f64(5.0, 1.0, 128);
        let (z, gamma) = reduce_fundamental(&tau).unwrap();
        assert_eq!(gamma, GL2Matrix::translation(-5));
        assert!(z.dist(&ComplexHP::i(128)).to_f64() < 1e-30);

        // i/4 inverts to 4i
        let tau = ComplexHP::from_f64(0.0, 0.25, 128);
        let (z, gamma) = reduce_fundamental(&tau).unwrap();
        assert_eq!(gamma, GL2Matrix::inversion());
        assert!(z.dist(&ComplexHP::from_f64(0.0, 4.0, 128)).to_f64() < 1e-30);

        // a point very close to the real line
        let tau = ComplexHP::from_f64(0.3, 0.002, 256);
        let (z, gamma) = reduce_fundamental(&tau).unwrap();
        assert!(z.re().to_f64().abs() <= 0.5 + 1e-20);
        assert!(z.norm_sqr().to_f64() >= 1.0 - 1e-20);
        // Moebius identity gamma tau = tau' at working precision
        assert!(gamma.apply(&tau).dist(&z).to_f64() < 1e-55);
    }

    #[test]
    fn act_series_examples() {
        let t = 16;
        let j = AhmSeries::from_puiseux(j_qexp(t));
        // identity acts trivially
        let same = act_series(&GL2Matrix::identity(), &j);
        assert!(same.sub(&j).is_zero());

        // (2,0;0,1) sends q to q^2
        let q = AhmSeries::from_puiseux(PuiseuxSeries::monomial(
            crate::qseries::Scalar::one(),
            1,
            1,
            8,
        ));
        let q2 = act_series(&GL2Matrix::new(2, 0, 0, 1), &q);
        assert_eq!(
            q2.ycoeff(0).coefficient_at(2, 1).unwrap(),
            crate::qseries::Scalar::one()
        );

        // j under (1,1;0,2): the symmetrisation with the b = 0 partner has
        // rational integral-power coefficients
        let j1 = act_series(&GL2Matrix::new(1, 1, 0, 2), &j);
        let j0 = act_series(&GL2Matrix::new(1, 0, 0, 2), &j);
        assert!(!j1.ycoeff(0).is_rational_integral());
        assert!(j0.ycoeff(0).mul(&j1.ycoeff(0)).is_rational_integral());
        assert!(j0.ycoeff(0).add(&j1.ycoeff(0)).is_rational_integral());
    }
}
